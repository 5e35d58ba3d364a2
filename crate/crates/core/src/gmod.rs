//! Restricted modules given by action matrices, and the standard constructions.

use std::sync::Arc;

use crate::error::{Error, Result};
use crate::field::unit_vector;
use crate::liealg::RestrictedLieAlgebra;
use crate::linalg::{FpMatrix, Subspace};
use crate::report::{Check, Report};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RestrictedModule {
    alg: Arc<RestrictedLieAlgebra>,
    m: usize,
    rho: Vec<FpMatrix>,
}

impl RestrictedModule {
    /// Build and validate against both module axioms.
    pub fn new(alg: Arc<RestrictedLieAlgebra>, rho: Vec<FpMatrix>) -> Result<RestrictedModule> {
        let module = RestrictedModule::from_matrices_unchecked(alg, rho)?;
        match module.verify_module().first_failure() {
            None => Ok(module),
            Some(c) => {
                Err(Error::InvalidModule(format!("{} fails: {}", c.name, c.counterexample.clone().unwrap_or_default())))
            }
        }
    }

    /// Build checking shapes only.
    pub fn from_matrices_unchecked(alg: Arc<RestrictedLieAlgebra>, rho: Vec<FpMatrix>) -> Result<RestrictedModule> {
        if rho.len() != alg.dim() {
            return Err(Error::DimensionMismatch { expected: alg.dim(), found: rho.len() });
        }
        let m = rho.first().map_or(0, |r| r.rows());
        for r in &rho {
            if r.rows() != m || r.cols() != m {
                return Err(Error::DimensionMismatch { expected: m, found: r.rows().max(r.cols()) });
            }
            if r.modulus() != alg.p() {
                return Err(Error::InvalidModule("modulus differs from the algebra".into()));
            }
        }
        Ok(RestrictedModule { alg, m, rho })
    }

    /// The `m`-dimensional trivial module.
    pub fn trivial_of_dim(alg: &Arc<RestrictedLieAlgebra>, m: usize) -> RestrictedModule {
        let rho = vec![FpMatrix::zeros(alg.p(), m, m); alg.dim()];
        RestrictedModule { alg: alg.clone(), m, rho }
    }

    /// The one-dimensional trivial module F.
    pub fn trivial(alg: &Arc<RestrictedLieAlgebra>) -> RestrictedModule {
        RestrictedModule::trivial_of_dim(alg, 1)
    }

    /// The adjoint module: e_i acts by ad e_i.
    pub fn adjoint(alg: &Arc<RestrictedLieAlgebra>) -> RestrictedModule {
        let n = alg.dim();
        let rho = (0..n).map(|i| alg.ad_matrix(&unit_vector(n, i))).collect();
        RestrictedModule { alg: alg.clone(), m: n, rho }
    }

    /// Hom(N, M) with (g phi) = rho_M(g) phi - phi rho_N(g). The coordinate of the
    /// matrix unit sending source basis j to target basis i is `j * dim M + i`.
    pub fn hom(source: &RestrictedModule, target: &RestrictedModule) -> Result<RestrictedModule> {
        if source.alg != target.alg {
            return Err(Error::MixedAlgebras);
        }
        let p = source.alg.p();
        let (ns, nt) = (source.m, target.m);
        let d = ns * nt;
        let rho = (0..source.alg.dim())
            .map(|g| {
                let mut out = FpMatrix::zeros(p, d, d);
                let (rs, rt) = (&source.rho[g], &target.rho[g]);
                for j in 0..ns {
                    for i in 0..nt {
                        let col = j * nt + i;
                        // rho_M(g) E_{ij} has column j equal to column i of rho_M(g).
                        for k in 0..nt {
                            out.add_at(j * nt + k, col, rt.get(k, i));
                        }
                        // E_{ij} rho_N(g) has row i equal to row j of rho_N(g).
                        for l in 0..ns {
                            out.add_at(l * nt + i, col, p.neg(rs.get(j, l)));
                        }
                    }
                }
                out
            })
            .collect();
        Ok(RestrictedModule { alg: source.alg.clone(), m: d, rho })
    }

    /// The dual module Hom(M, F).
    pub fn dual(&self) -> RestrictedModule {
        RestrictedModule::hom(self, &RestrictedModule::trivial(&self.alg)).expect("same algebra")
    }

    pub fn direct_sum(a: &RestrictedModule, b: &RestrictedModule) -> Result<RestrictedModule> {
        if a.alg != b.alg {
            return Err(Error::MixedAlgebras);
        }
        let p = a.alg.p();
        let d = a.m + b.m;
        let rho = a
            .rho
            .iter()
            .zip(&b.rho)
            .map(|(x, y)| {
                let mut out = FpMatrix::zeros(p, d, d);
                out.set_block(0, 0, x);
                out.set_block(a.m, a.m, y);
                out
            })
            .collect();
        Ok(RestrictedModule { alg: a.alg.clone(), m: d, rho })
    }

    pub fn algebra(&self) -> &Arc<RestrictedLieAlgebra> {
        &self.alg
    }

    pub fn dim(&self) -> usize {
        self.m
    }

    pub fn rho(&self, i: usize) -> &FpMatrix {
        &self.rho[i]
    }

    pub fn rhos(&self) -> &[FpMatrix] {
        &self.rho
    }

    /// Action matrix of an algebra element.
    pub fn action(&self, x: &[u32]) -> FpMatrix {
        let mut out = FpMatrix::zeros(self.alg.p(), self.m, self.m);
        for (r, &xi) in self.rho.iter().zip(x) {
            out.axpy(xi, r);
        }
        out
    }

    /// `x . v`.
    pub fn act(&self, x: &[u32], v: &[u32]) -> Vec<u32> {
        let p = self.alg.p();
        let mut out = vec![0; self.m];
        for (r, &xi) in self.rho.iter().zip(x) {
            if xi != 0 {
                p.axpy(&mut out, xi, &r.mul_vec(v));
            }
        }
        out
    }

    /// Action of the PBW monomial e_1^{k_1} ... e_n^{k_n}.
    pub fn monomial_action(&self, exps: &[u8]) -> FpMatrix {
        let p = self.alg.p();
        let mut out = FpMatrix::identity(p, self.m);
        for (r, &k) in self.rho.iter().zip(exps) {
            if k > 0 {
                out = out.mul(&r.pow(k as u64));
            }
        }
        out
    }

    /// Check the commutator relation on basis pairs and rho(e_i^[p]) = rho(e_i)^p.
    pub fn verify_module(&self) -> Report {
        let mut report = Report::new();
        let n = self.alg.dim();
        let p = self.alg.p();
        let mut witness = None;
        'comm: for i in 0..n {
            for j in i + 1..n {
                let lhs = self.rho[i].mul(&self.rho[j]).sub(&self.rho[j].mul(&self.rho[i]));
                let rhs = self.action(self.alg.structure(i, j));
                if lhs != rhs {
                    witness = Some(format!("basis pair ({i}, {j})"));
                    break 'comm;
                }
            }
        }
        report.push(Check::from_witness("commutator", witness));
        let witness = (0..n)
            .find(|&i| self.action(self.alg.pi(i)) != self.rho[i].pow(p.get() as u64))
            .map(|i| format!("basis element {i}"));
        report.push(Check::from_witness("p-th power", witness));
        report
    }

    /// The invariants M^g: the common kernel of all action matrices.
    pub fn invariants(&self) -> Subspace {
        let p = self.alg.p();
        FpMatrix::vstack(p, self.m, &self.rho).nullspace()
    }
}
