//! The standard test algebras: abelian, Heisenberg, the two-dimensional
//! nonabelian algebra and the Witt algebras.

use std::sync::Arc;

use crate::field::{unit_vector, Prime};
use crate::gmod::RestrictedModule;
use crate::liealg::{witt_algebra, RestrictedLieAlgebra};

#[derive(Debug, Clone)]
pub struct CorpusEntry {
    pub name: String,
    pub algebra: Arc<RestrictedLieAlgebra>,
}

impl CorpusEntry {
    fn new(name: String, alg: RestrictedLieAlgebra) -> CorpusEntry {
        CorpusEntry { name, algebra: Arc::new(alg) }
    }

    /// Trivial and adjoint coefficients.
    pub fn modules(&self) -> Vec<(&'static str, RestrictedModule)> {
        vec![
            ("trivial", RestrictedModule::trivial(&self.algebra)),
            ("adjoint", RestrictedModule::adjoint(&self.algebra)),
        ]
    }
}

fn prime(p: u32) -> Prime {
    Prime::new(p as u64).expect("corpus primes are prime")
}

/// Abelian algebra of dimension n; with `cyclic` the p-operator sends e_i to e_{i+1 mod n}.
pub fn abelian(p: u32, n: usize, cyclic: bool) -> RestrictedLieAlgebra {
    let pi = (0..n).map(|i| if cyclic { unit_vector(n, (i + 1) % n) } else { vec![0; n] }).collect();
    RestrictedLieAlgebra::abelian(prime(p), pi).expect("abelian corpus entry")
}

/// [x, y] = z with z central; with `central` the p-operator sends x to z, otherwise it is zero.
pub fn heisenberg(p: u32, central: bool) -> RestrictedLieAlgebra {
    let q = prime(p);
    let z = vec![0; 3];
    let c = vec![
        vec![z.clone(), vec![0, 0, 1], z.clone()],
        vec![vec![0, 0, q.neg(1)], z.clone(), z.clone()],
        vec![z.clone(), z.clone(), z.clone()],
    ];
    let px = if central { vec![0, 0, 1] } else { z.clone() };
    RestrictedLieAlgebra::new(q, c, vec![px, z.clone(), z]).expect("Heisenberg corpus entry")
}

/// [x, y] = y with x^[p] = x and y^[p] = 0.
pub fn two_dim(p: u32) -> RestrictedLieAlgebra {
    let q = prime(p);
    let c = vec![vec![vec![0, 0], vec![0, 1]], vec![vec![0, q.neg(1)], vec![0, 0]]];
    RestrictedLieAlgebra::new(q, c, vec![vec![1, 0], vec![0, 0]]).expect("two-dimensional corpus entry")
}

pub fn witt(p: u32) -> RestrictedLieAlgebra {
    witt_algebra(prime(p)).0
}

/// Abelian entries: n = 1, 2 for p in {2, 3, 5} and n = 3 for p in {2, 3}, each with
/// zero and cyclic p-operator.
pub fn abelian_entries() -> Vec<CorpusEntry> {
    let mut out = Vec::new();
    for (n, primes) in [(1usize, &[2u32, 3, 5][..]), (2, &[2, 3, 5]), (3, &[2, 3])] {
        for &p in primes {
            for cyclic in [false, true] {
                let tag = if cyclic { "cyclic" } else { "zero" };
                out.push(CorpusEntry::new(format!("abelian n={n} p={p} pi={tag}"), abelian(p, n, cyclic)));
            }
        }
    }
    out
}

pub fn nonabelian_entries() -> Vec<CorpusEntry> {
    let mut out = Vec::new();
    for p in [2, 3, 5] {
        for central in [false, true] {
            let tag = if central { "central" } else { "zero" };
            out.push(CorpusEntry::new(format!("heisenberg p={p} pi={tag}"), heisenberg(p, central)));
        }
    }
    for p in [2, 3, 5] {
        out.push(CorpusEntry::new(format!("two-dim p={p}"), two_dim(p)));
    }
    for p in [2, 3, 5, 7] {
        out.push(CorpusEntry::new(format!("witt p={p}"), witt(p)));
    }
    out
}

/// Every corpus algebra.
pub fn corpus() -> Vec<CorpusEntry> {
    let mut out = abelian_entries();
    out.extend(nonabelian_entries());
    out
}
