//! Restricted Lie algebras given by structure constants and p-operator values
//! on a basis.
//!
//! Multibrackets are left-normed: `[g1, g2, ..., gk] = [[...[g1, g2], ...], gk]`.
//! The p-operator is extended from basis values by peeling off one basis
//! component at a time and applying the additivity rule
//!
//! ```text
//! (g + h)^[p] = g^[p] + h^[p] + sum over (g1 = g, g2 = h, g3..gp in {g, h}) of (1/#g) [g1, ..., gp]
//! ```
//!
//! where `#g` counts the occurrences of `g` among all `p` entries.

use crate::error::{Error, Result};
use crate::field::{is_zero, unit_vector, Prime};
use crate::linalg::FpMatrix;
use crate::report::{Check, Report};
use crate::sample::{all_vectors, space_size, Sampler};

/// Exhaustive checks run over the whole algebra when it has at most this many elements.
pub const EXHAUSTIVE_BOUND: u64 = 243;
/// Sample size used when the algebra is too large to enumerate.
pub const SAMPLE_SIZE: usize = 500;
/// Largest prime for which the additivity sum is evaluated on nonabelian algebras.
pub const MAX_NONABELIAN_PRIME: u32 = 13;

/// Which basis component is peeled first when extending the p-operator.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PeelOrder {
    Ascending,
    Descending,
}

impl PeelOrder {
    /// Index of the first nonzero coordinate in this order.
    pub fn pick(self, x: &[u32]) -> Option<usize> {
        match self {
            PeelOrder::Ascending => x.iter().position(|&v| v != 0),
            PeelOrder::Descending => x.iter().rposition(|&v| v != 0),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct RestrictedLieAlgebra {
    p: Prime,
    n: usize,
    /// `c[(i * n + j) * n + k]` is the e_k coordinate of [e_i, e_j].
    c: Vec<u32>,
    pi: Vec<Vec<u32>>,
    abelian: bool,
}

impl RestrictedLieAlgebra {
    /// Build and validate: antisymmetry, Jacobi, the p-power axioms.
    pub fn new(p: Prime, c: Vec<Vec<Vec<u32>>>, pi: Vec<Vec<u32>>) -> Result<RestrictedLieAlgebra> {
        let alg = RestrictedLieAlgebra::from_parts_unchecked(p, c, pi)?;
        let report = alg.verify_restricted();
        match report.first_failure() {
            None => Ok(alg),
            Some(check) => Err(Error::InvalidAlgebra(format!(
                "{} fails: {}",
                check.name,
                check.counterexample.clone().unwrap_or_default()
            ))),
        }
    }

    /// Build checking shapes only. Used where axiom failures must be reported, not raised.
    pub fn from_parts_unchecked(p: Prime, c: Vec<Vec<Vec<u32>>>, pi: Vec<Vec<u32>>) -> Result<RestrictedLieAlgebra> {
        let n = pi.len();
        if c.len() != n {
            return Err(Error::DimensionMismatch { expected: n, found: c.len() });
        }
        let mut flat = Vec::with_capacity(n * n * n);
        for row in &c {
            if row.len() != n {
                return Err(Error::DimensionMismatch { expected: n, found: row.len() });
            }
            for v in row {
                if v.len() != n {
                    return Err(Error::DimensionMismatch { expected: n, found: v.len() });
                }
                flat.extend(v.iter().map(|&x| x % p.get()));
            }
        }
        for v in &pi {
            if v.len() != n {
                return Err(Error::DimensionMismatch { expected: n, found: v.len() });
            }
        }
        let pi = pi.into_iter().map(|v| v.into_iter().map(|x| x % p.get()).collect()).collect();
        let abelian = is_zero(&flat);
        Ok(RestrictedLieAlgebra { p, n, c: flat, pi, abelian })
    }

    /// The abelian algebra with the given p-operator on the basis.
    pub fn abelian(p: Prime, pi: Vec<Vec<u32>>) -> Result<RestrictedLieAlgebra> {
        let n = pi.len();
        let c = vec![vec![vec![0; n]; n]; n];
        RestrictedLieAlgebra::from_parts_unchecked(p, c, pi)
    }

    pub fn p(&self) -> Prime {
        self.p
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    /// Coordinates of [e_i, e_j].
    pub fn structure(&self, i: usize, j: usize) -> &[u32] {
        let n = self.n;
        &self.c[(i * n + j) * n..(i * n + j + 1) * n]
    }

    pub fn structure_constants(&self) -> Vec<Vec<Vec<u32>>> {
        (0..self.n).map(|i| (0..self.n).map(|j| self.structure(i, j).to_vec()).collect()).collect()
    }

    /// Coordinates of e_i^[p].
    pub fn pi(&self, i: usize) -> &[u32] {
        &self.pi[i]
    }

    pub fn pi_values(&self) -> &[Vec<u32>] {
        &self.pi
    }

    pub fn is_abelian(&self) -> bool {
        self.abelian
    }

    pub fn is_strongly_abelian(&self) -> bool {
        self.abelian && self.pi.iter().all(|v| is_zero(v))
    }

    fn check_len(&self, x: &[u32]) -> Result<()> {
        if x.len() != self.n {
            return Err(Error::DimensionMismatch { expected: self.n, found: x.len() });
        }
        Ok(())
    }

    /// [x, y] for coordinate vectors.
    pub fn bracket(&self, x: &[u32], y: &[u32]) -> Result<Vec<u32>> {
        self.check_len(x)?;
        self.check_len(y)?;
        Ok(self.br(x, y))
    }

    pub(crate) fn br(&self, x: &[u32], y: &[u32]) -> Vec<u32> {
        let mut out = vec![0; self.n];
        if self.abelian {
            return out;
        }
        for (i, &xi) in x.iter().enumerate() {
            if xi == 0 {
                continue;
            }
            for (j, &yj) in y.iter().enumerate() {
                if yj == 0 || i == j {
                    continue;
                }
                self.p.axpy(&mut out, self.p.mul(xi, yj), self.structure(i, j));
            }
        }
        out
    }

    /// Matrix of v -> [x, v].
    pub fn ad_matrix(&self, x: &[u32]) -> FpMatrix {
        let cols: Vec<Vec<u32>> = (0..self.n).map(|k| self.br(x, &unit_vector(self.n, k))).collect();
        FpMatrix::from_columns(self.p, self.n, &cols)
    }

    /// Matrix of v -> [v, y].
    pub fn right_matrix(&self, y: &[u32]) -> FpMatrix {
        let cols: Vec<Vec<u32>> = (0..self.n).map(|k| self.br(&unit_vector(self.n, k), y)).collect();
        FpMatrix::from_columns(self.p, self.n, &cols)
    }

    /// Left-normed bracket [g1, ..., gk].
    pub fn multibracket(&self, gs: &[Vec<u32>]) -> Result<Vec<u32>> {
        let (first, rest) = gs.split_first().ok_or(Error::EmptySequence)?;
        self.check_len(first)?;
        let mut acc = first.clone();
        for g in rest {
            self.check_len(g)?;
            acc = self.br(&acc, g);
        }
        Ok(acc)
    }

    /// x^[p], peeling the least index first.
    pub fn p_power(&self, x: &[u32]) -> Result<Vec<u32>> {
        self.p_power_ordered(x, PeelOrder::Ascending)
    }

    pub fn p_power_ordered(&self, x: &[u32], order: PeelOrder) -> Result<Vec<u32>> {
        self.check_len(x)?;
        if !self.abelian && self.p.get() > MAX_NONABELIAN_PRIME {
            return Err(Error::UnsupportedPrime(self.p.get()));
        }
        let p = self.p;
        let mut acc = vec![0; self.n];
        let mut rest = x.to_vec();
        while let Some(i) = order.pick(&rest) {
            let lambda = rest[i];
            let mut g = vec![0; self.n];
            g[i] = lambda;
            rest[i] = 0;
            p.axpy(&mut acc, p.pow(lambda, p.get() as u64), &self.pi[i]);
            if !self.abelian && !is_zero(&rest) {
                let corr = self.additivity_correction(&g, &rest);
                acc = p.vadd(&acc, &corr);
            }
        }
        Ok(acc)
    }

    /// sum over sequences (g1 = g, g2 = h, g3..gp in {g, h}) of (1/#g) [g1, ..., gp].
    pub fn additivity_correction(&self, g: &[u32], h: &[u32]) -> Vec<u32> {
        let p = self.p;
        let pu = p.get() as usize;
        let rg = self.right_matrix(g);
        let rh = self.right_matrix(h);
        // by_count[c] accumulates brackets with c copies of g.
        let mut by_count = vec![vec![0u32; self.n]; pu + 1];
        let start = self.br(g, h);
        let mut stack = vec![(start, 2usize, 1usize)];
        while let Some((v, depth, count)) = stack.pop() {
            if depth == pu {
                let slot = &mut by_count[count];
                *slot = p.vadd(slot, &v);
                continue;
            }
            if is_zero(&v) {
                continue;
            }
            stack.push((rg.mul_vec(&v), depth + 1, count + 1));
            stack.push((rh.mul_vec(&v), depth + 1, count));
        }
        let mut out = vec![0; self.n];
        for (count, v) in by_count.iter().enumerate().skip(1) {
            if count < pu {
                p.axpy(&mut out, p.inv(count as u32).expect("count below p"), v);
            }
        }
        out
    }

    /// The test set for identities quantified over all elements: the whole algebra
    /// when it has at most [`EXHAUSTIVE_BOUND`] elements, otherwise the basis plus
    /// [`SAMPLE_SIZE`] deterministic samples.
    pub fn test_elements(&self, tag: &str) -> Vec<Vec<u32>> {
        match space_size(self.p, self.n) {
            Some(size) if size <= EXHAUSTIVE_BOUND => all_vectors(self.p, self.n).collect(),
            _ => {
                let mut out: Vec<Vec<u32>> = (0..self.n).map(|i| unit_vector(self.n, i)).collect();
                let mut s = Sampler::new(self.p, self.n, tag);
                out.extend((0..SAMPLE_SIZE).map(|_| s.vector(self.n)));
                out
            }
        }
    }

    /// Check antisymmetry, Jacobi on basis triples, the identity
    /// `[g, h^[p]] = [g, h, ..., h]` (p copies of h) for basis g, and that the
    /// p-operator does not depend on the peel order.
    pub fn verify_restricted(&self) -> Report {
        let mut report = Report::new();
        let p = self.p;
        let n = self.n;

        let mut witness = None;
        'anti: for i in 0..n {
            for j in 0..n {
                let a = self.structure(i, j);
                let b = self.structure(j, i);
                if a.iter().zip(b).any(|(&x, &y)| p.add(x, y) != 0) || (i == j && !is_zero(a)) {
                    witness = Some(format!("[e{i}, e{j}] = {a:?}, [e{j}, e{i}] = {b:?}"));
                    break 'anti;
                }
            }
        }
        report.push(Check::from_witness("antisymmetry", witness));

        let mut witness = None;
        'jac: for i in 0..n {
            for j in i + 1..n {
                for k in j + 1..n {
                    let (ei, ej, ek) = (unit_vector(n, i), unit_vector(n, j), unit_vector(n, k));
                    let a = self.br(&self.br(&ei, &ej), &ek);
                    let b = self.br(&self.br(&ej, &ek), &ei);
                    let c = self.br(&self.br(&ek, &ei), &ej);
                    let sum = p.vadd(&p.vadd(&a, &b), &c);
                    if !is_zero(&sum) {
                        witness = Some(format!("basis triple ({i}, {j}, {k}) sums to {sum:?}"));
                        break 'jac;
                    }
                }
            }
        }
        report.push(Check::from_witness("jacobi", witness));

        if !self.abelian && p.get() > MAX_NONABELIAN_PRIME {
            report.push(Check::fail("p-power identity", format!("p = {} unsupported", p.get())));
            report.push(Check::fail("peel order", format!("p = {} unsupported", p.get())));
            return report;
        }

        let elements = self.test_elements("verify_restricted");
        let mut r3 = None;
        let mut peel = None;
        for h in &elements {
            let hp = self.p_power(h).expect("supported prime");
            if r3.is_none() {
                let lhs = self.right_matrix(&hp);
                let rhs = self.right_matrix(h).pow(p.get() as u64);
                if lhs != rhs {
                    let g = (0..n).find(|&k| lhs.column(k) != rhs.column(k)).unwrap_or(0);
                    r3 = Some(format!(
                        "g = e{g}, h = {h:?}: [g, h^[p]] = {:?}, [g, h, ..., h] = {:?}",
                        lhs.column(g),
                        rhs.column(g)
                    ));
                }
            }
            if peel.is_none() {
                let desc = self.p_power_ordered(h, PeelOrder::Descending).expect("supported prime");
                if desc != hp {
                    peel = Some(format!("h = {h:?}: ascending {hp:?}, descending {desc:?}"));
                }
            }
            if r3.is_some() && peel.is_some() {
                break;
            }
        }
        report.push(Check::from_witness("p-power identity", r3));
        report.push(Check::from_witness("peel order", peel));
        report
    }
}

/// Outcome of [`infer_p_operator`].
#[derive(Debug, Clone)]
pub struct Inference {
    pub algebra: RestrictedLieAlgebra,
    /// Dimension of the center. When positive the p-operator is only determined
    /// up to a semilinear map into the center; the returned one is the particular
    /// solution with free coordinates zero.
    pub center_dim: usize,
    pub report: Report,
}

/// Recover a p-operator from structure constants by solving ad(x) = (ad e_j)^p.
pub fn infer_p_operator(p: Prime, c: Vec<Vec<Vec<u32>>>) -> Result<Inference> {
    let n = c.len();
    let bare = RestrictedLieAlgebra::from_parts_unchecked(p, c.clone(), vec![vec![0; n]; n])?;
    let pre = bare.verify_restricted();
    for name in ["antisymmetry", "jacobi"] {
        if let Some(check) = pre.get(name).filter(|c| !c.pass) {
            return Err(Error::InvalidAlgebra(format!(
                "{name} fails: {}",
                check.counterexample.clone().unwrap_or_default()
            )));
        }
    }
    let ads: Vec<FpMatrix> = (0..n).map(|k| bare.ad_matrix(&unit_vector(n, k))).collect();
    let system = FpMatrix::from_columns(p, n * n, &ads.iter().map(|m| m.data().to_vec()).collect::<Vec<_>>());
    let center_dim = n - system.rank();
    let mut pi = Vec::with_capacity(n);
    for (j, ad) in ads.iter().enumerate() {
        let target = ad.pow(p.get() as u64);
        let x = system.solve(target.data()).ok_or(Error::NotRestrictable(j))?;
        pi.push(x);
    }
    let algebra = RestrictedLieAlgebra::from_parts_unchecked(p, c, pi)?;
    let report = algebra.verify_restricted();
    if let Some(check) = report.first_failure() {
        return Err(Error::VerificationFailed(format!(
            "{}: {}",
            check.name,
            check.counterexample.clone().unwrap_or_default()
        )));
    }
    Ok(Inference { algebra, center_dim, report })
}

/// Matrix of D_j = x^{j+1} d/dx on F[x]/(x^p - 1) in the basis 1, x, ..., x^{p-1}.
pub fn witt_generator_matrix(p: Prime, j: usize) -> FpMatrix {
    let pu = p.get() as usize;
    let mut m = FpMatrix::zeros(p, pu, pu);
    for k in 0..pu {
        m.set((k + j) % pu, k, k as u32);
    }
    m
}

/// The Witt algebra with basis D_0, ..., D_{p-1}, bracket
/// [D_i, D_j] = (j - i) D_{i+j mod p}, D_0^[p] = D_0 and D_j^[p] = 0 otherwise,
/// together with its faithful representation on F[x]/(x^p - 1).
pub fn witt_algebra(p: Prime) -> (RestrictedLieAlgebra, Vec<FpMatrix>) {
    let pu = p.get() as usize;
    let mut c = vec![vec![vec![0u32; pu]; pu]; pu];
    for (i, row) in c.iter_mut().enumerate() {
        for (j, v) in row.iter_mut().enumerate() {
            v[(i + j) % pu] = p.reduce(j as i64 - i as i64);
        }
    }
    let mut pi = vec![vec![0u32; pu]; pu];
    pi[0][0] = 1;
    let rep: Vec<FpMatrix> = (0..pu).map(|j| witt_generator_matrix(p, j)).collect();
    for i in 0..pu {
        for j in 0..pu {
            let comm = rep[i].mul(&rep[j]).sub(&rep[j].mul(&rep[i]));
            let image = rep[(i + j) % pu].scale(p.reduce(j as i64 - i as i64));
            assert_eq!(comm, image, "representation is not a homomorphism at ({i}, {j})");
        }
        let expected = if i == 0 { rep[0].clone() } else { FpMatrix::zeros(p, pu, pu) };
        assert_eq!(rep[i].pow(p.get() as u64), expected, "representation is not restricted at {i}");
    }
    let alg = RestrictedLieAlgebra::new(p, c, pi).expect("Witt algebra is restricted");
    (alg, rep)
}

/// Image of an element under a representation given on the basis.
pub fn represent(p: Prime, rep: &[FpMatrix], x: &[u32]) -> FpMatrix {
    let d = rep[0].rows();
    let mut out = FpMatrix::zeros(p, d, d);
    for (m, &xi) in rep.iter().zip(x) {
        out.axpy(xi, m);
    }
    out
}

/// Coordinates of a matrix in the span of the Witt representation, if it lies there.
pub fn witt_coordinates(p: Prime, rep: &[FpMatrix], m: &FpMatrix) -> Option<Vec<u32>> {
    let pu = p.get() as usize;
    // D_j sends x to x^{1+j}, so the entry at (1 + j, 1) is the D_j coordinate.
    let coords: Vec<u32> = (0..pu).map(|j| m.get((1 + j) % pu, 1 % pu)).collect();
    (represent(p, rep, &coords) == *m).then_some(coords)
}
