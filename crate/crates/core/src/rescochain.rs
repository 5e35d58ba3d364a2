//! Restricted cochains in degrees 0 to 3 and the coboundaries δ⁰, δ¹, δ².
//!
//! C⁰ and C¹ agree with the classical spaces. A 2-cochain is a pair (φ, ω) with
//! φ a classical 2-cochain and ω determined by its basis values through the
//! *-property: ω(λg) = λ^p ω(g) and
//!
//! ```text
//! ω(g + h) = ω(g) + ω(h)
//!          + sum_{g1 = g, g2 = h, gj in {g, h}} (1/#g) sum_{k=0}^{p-2} (-1)^k g_p ... g_{p-k+1} φ([g1, ..., g_{p-k-1}], g_{p-k})
//! ```
//!
//! A 3-cochain is a pair (α, β) with β linear in its first argument and
//! determined in the second by its basis values through the **-property:
//! β(g, λh) = λ^p β(g, h) and
//!
//! ```text
//! β(g, h1 + h2) = β(g, h1) + β(g, h2)
//!   - sum_{l1 = 1, l2 = 2, lj in {1, 2}} (1/#{lj = 1}) sum_{j=0}^{p-2} (-1)^j sum_{k=0}^{j} C(j, k)
//!       h_{l_p} ... h_{l_{p-k+1}} α([g, h_{l_{p-k}}, ..., h_{l_{p-j+1}}], [h_{l_1}, ..., h_{l_{p-j-1}}], h_{l_{p-j}})
//! ```
//!
//! Coordinates: C² lists the φ slots first, then ω(e_0), ..., ω(e_{n-1}); C³
//! lists the α slots first, then β(e_i, e_j) at block `i * n + j`. The module
//! index is always fastest.

use crate::classical::{
    choose, classical_cohomology, delta_cl_matrix, rank_combination, sort_with_sign, ClassicalCochain,
};
use crate::error::{Error, Result};
use crate::field::{binom_mod, is_zero, unit_vector};
use crate::gmod::RestrictedModule;
use crate::liealg::PeelOrder;
use crate::linalg::{homology, FpMatrix, Homology};

/// Largest prime at which the *- and **-extensions are evaluated on nonabelian algebras.
pub const MAX_STAR_PRIME: u32 = 7;

fn check_prime(module: &RestrictedModule) -> Result<()> {
    let alg = module.algebra();
    if !alg.is_abelian() && alg.p().get() > MAX_STAR_PRIME {
        return Err(Error::UnsupportedPrime(alg.p().get()));
    }
    Ok(())
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Cochain2 {
    pub phi: ClassicalCochain,
    pub omega: Vec<Vec<u32>>,
}

impl Cochain2 {
    pub fn zero(module: &RestrictedModule) -> Cochain2 {
        let (n, m) = (module.algebra().dim(), module.dim());
        Cochain2 { phi: ClassicalCochain::zero(module.algebra().p(), n, m, 2), omega: vec![vec![0; m]; n] }
    }

    pub fn from_vector(module: &RestrictedModule, v: &[u32]) -> Result<Cochain2> {
        let alg = module.algebra();
        let (n, m) = (alg.dim(), module.dim());
        if v.len() != c2_dim(module) {
            return Err(Error::DimensionMismatch { expected: c2_dim(module), found: v.len() });
        }
        let split = choose(n, 2) * m;
        let phi = ClassicalCochain::from_vector(alg.p(), n, m, 2, v[..split].to_vec());
        let omega = (0..n).map(|i| v[split + i * m..split + (i + 1) * m].to_vec()).collect();
        Ok(Cochain2 { phi, omega })
    }

    pub fn to_vector(&self) -> Vec<u32> {
        let mut out = self.phi.coordinates().to_vec();
        self.omega.iter().for_each(|w| out.extend(w));
        out
    }

    pub fn is_zero(&self) -> bool {
        is_zero(&self.to_vector())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Cochain3 {
    pub alpha: ClassicalCochain,
    pub beta: Vec<Vec<Vec<u32>>>,
}

impl Cochain3 {
    pub fn from_vector(module: &RestrictedModule, v: &[u32]) -> Result<Cochain3> {
        let alg = module.algebra();
        let (n, m) = (alg.dim(), module.dim());
        if v.len() != c3_dim(module) {
            return Err(Error::DimensionMismatch { expected: c3_dim(module), found: v.len() });
        }
        let split = choose(n, 3) * m;
        let alpha = ClassicalCochain::from_vector(alg.p(), n, m, 3, v[..split].to_vec());
        let beta = (0..n)
            .map(|i| (0..n).map(|j| v[split + (i * n + j) * m..split + (i * n + j + 1) * m].to_vec()).collect())
            .collect();
        Ok(Cochain3 { alpha, beta })
    }

    pub fn to_vector(&self) -> Vec<u32> {
        let mut out = self.alpha.coordinates().to_vec();
        self.beta.iter().flatten().for_each(|b| out.extend(b));
        out
    }

    pub fn is_zero(&self) -> bool {
        is_zero(&self.to_vector())
    }
}

/// dim C² = n(n+1)/2 * m.
pub fn c2_dim(module: &RestrictedModule) -> usize {
    let n = module.algebra().dim();
    (choose(n, 2) + n) * module.dim()
}

/// dim C³ = n(n+1)(n+2)/6 * m.
pub fn c3_dim(module: &RestrictedModule) -> usize {
    let n = module.algebra().dim();
    (choose(n, 3) + n * n) * module.dim()
}

/// `x_k ... x_1 v`: apply the action of each element in turn, first to last.
fn act_seq(module: &RestrictedModule, xs: &[&[u32]], v: Vec<u32>) -> Vec<u32> {
    xs.iter().fold(v, |acc, x| module.act(x, &acc))
}

/// The *-property correction term for ω(g + h).
pub fn star_correction(module: &RestrictedModule, phi: &ClassicalCochain, g: &[u32], h: &[u32]) -> Vec<u32> {
    let alg = module.algebra();
    let p = alg.p();
    let pu = p.get() as usize;
    let mut out = vec![0; module.dim()];
    for mask in 0u64..1 << (pu - 2) {
        let seq: Vec<&[u32]> = std::iter::once(g)
            .chain(std::iter::once(h))
            .chain((0..pu - 2).map(|b| if mask >> b & 1 == 1 { g } else { h }))
            .collect();
        let count = seq.iter().filter(|x| std::ptr::eq(**x, g)).count() as u32;
        let weight = p.inv(count).expect("count lies in 1..p");
        for k in 0..=pu - 2 {
            let head: Vec<Vec<u32>> = seq[..pu - k - 1].iter().map(|x| x.to_vec()).collect();
            let br = alg.multibracket(&head).expect("nonempty");
            if is_zero(&br) {
                continue;
            }
            let val = phi.eval(&[&br, seq[pu - k - 1]]);
            let val = act_seq(module, &seq[pu - k..], val);
            p.axpy(&mut out, p.mul(weight, p.sign(k)), &val);
        }
    }
    out
}

/// ω(g) extended from its basis values, peeling the least index first.
pub fn eval_omega(module: &RestrictedModule, c2: &Cochain2, g: &[u32]) -> Result<Vec<u32>> {
    eval_omega_ordered(module, c2, g, PeelOrder::Ascending)
}

pub fn eval_omega_ordered(module: &RestrictedModule, c2: &Cochain2, g: &[u32], order: PeelOrder) -> Result<Vec<u32>> {
    check_prime(module)?;
    let alg = module.algebra();
    let p = alg.p();
    if g.len() != alg.dim() {
        return Err(Error::DimensionMismatch { expected: alg.dim(), found: g.len() });
    }
    let mut out = vec![0; module.dim()];
    let mut rest = g.to_vec();
    while let Some(i) = order.pick(&rest) {
        let lambda = rest[i];
        rest[i] = 0;
        p.axpy(&mut out, p.pow(lambda, p.get() as u64), &c2.omega[i]);
        if !is_zero(&rest) {
            let g1 = p.scale(lambda, &unit_vector(alg.dim(), i));
            let corr = star_correction(module, &c2.phi, &g1, &rest);
            out = p.vadd(&out, &corr);
        }
    }
    Ok(out)
}

/// The **-property correction term for β(g, h1 + h2), including its leading sign.
pub fn double_star_correction(
    module: &RestrictedModule,
    alpha: &ClassicalCochain,
    g: &[u32],
    h1: &[u32],
    h2: &[u32],
) -> Vec<u32> {
    let alg = module.algebra();
    let p = alg.p();
    let pu = p.get() as usize;
    let mut out = vec![0; module.dim()];
    for mask in 0u64..1 << (pu - 2) {
        let seq: Vec<&[u32]> = std::iter::once(h1)
            .chain(std::iter::once(h2))
            .chain((0..pu - 2).map(|b| if mask >> b & 1 == 1 { h1 } else { h2 }))
            .collect();
        let count = seq.iter().filter(|x| std::ptr::eq(**x, h1)).count() as u32;
        let weight = p.inv(count).expect("count lies in 1..p");
        for j in 0..=pu - 2 {
            let second: Vec<Vec<u32>> = seq[..pu - j - 1].iter().map(|x| x.to_vec()).collect();
            let second = alg.multibracket(&second).expect("nonempty");
            if is_zero(&second) {
                continue;
            }
            let last = seq[pu - j - 1];
            for k in 0..=j {
                let c = binom_mod(j as u64, k as u64, p).value();
                if c == 0 {
                    continue;
                }
                // [g, h_{l_{p-k}}, ..., h_{l_{p-j+1}}] with the 1-based positions descending.
                let mut first = vec![g.to_vec()];
                first.extend((pu - j..pu - k).rev().map(|x| seq[x].to_vec()));
                let first = alg.multibracket(&first).expect("nonempty");
                if is_zero(&first) {
                    continue;
                }
                let val = alpha.eval(&[&first, &second, last]);
                let val = act_seq(module, &seq[pu - k..], val);
                p.axpy(&mut out, p.mul(weight, p.mul(c, p.sign(j + 1))), &val);
            }
        }
    }
    out
}

/// β(g, h) extended from its basis values, peeling h by the least index first.
pub fn eval_beta(module: &RestrictedModule, c3: &Cochain3, g: &[u32], h: &[u32]) -> Result<Vec<u32>> {
    eval_beta_ordered(module, c3, g, h, PeelOrder::Ascending)
}

pub fn eval_beta_ordered(
    module: &RestrictedModule,
    c3: &Cochain3,
    g: &[u32],
    h: &[u32],
    order: PeelOrder,
) -> Result<Vec<u32>> {
    check_prime(module)?;
    let alg = module.algebra();
    let (n, p) = (alg.dim(), alg.p());
    for x in [g, h] {
        if x.len() != n {
            return Err(Error::DimensionMismatch { expected: n, found: x.len() });
        }
    }
    let mut out = vec![0; module.dim()];
    let mut rest = h.to_vec();
    while let Some(i) = order.pick(&rest) {
        let lambda = rest[i];
        rest[i] = 0;
        let lp = p.pow(lambda, p.get() as u64);
        for (k, &gk) in g.iter().enumerate() {
            p.axpy(&mut out, p.mul(lp, gk), &c3.beta[k][i]);
        }
        if !is_zero(&rest) {
            let h1 = p.scale(lambda, &unit_vector(n, i));
            let corr = double_star_correction(module, &c3.alpha, g, &h1, &rest);
            out = p.vadd(&out, &corr);
        }
    }
    Ok(out)
}

/// ψ̃(g) = ψ(g^[p]) - g^{p-1} ψ(g) at an arbitrary point.
pub fn psi_tilde(module: &RestrictedModule, psi: &ClassicalCochain, g: &[u32]) -> Result<Vec<u32>> {
    let alg = module.algebra();
    let p = alg.p();
    let gp = alg.p_power(g)?;
    let mut tail = psi.eval(&[g]);
    for _ in 0..p.get() - 1 {
        tail = module.act(g, &tail);
    }
    Ok(p.vsub(&psi.eval(&[&gp]), &tail))
}

/// β(g, h) = φ(g, h^[p]) - sum_{i+j=p-1} (-1)^i h^i φ([g, h, ..., h], h) + g ω(h) at arbitrary points.
pub fn beta_direct(module: &RestrictedModule, c2: &Cochain2, g: &[u32], h: &[u32]) -> Result<Vec<u32>> {
    beta_direct_ordered(module, c2, g, h, PeelOrder::Ascending)
}

/// [`beta_direct`] with ω(h) extended in the given peel order.
pub fn beta_direct_ordered(
    module: &RestrictedModule,
    c2: &Cochain2,
    g: &[u32],
    h: &[u32],
    order: PeelOrder,
) -> Result<Vec<u32>> {
    let alg = module.algebra();
    let p = alg.p();
    let pu = p.get() as usize;
    let hp = alg.p_power(h)?;
    let mut out = c2.phi.eval(&[g, &hp]);
    let mut br = g.to_vec();
    for j in 0..pu {
        let i = pu - 1 - j;
        let mut term = c2.phi.eval(&[&br, h]);
        for _ in 0..i {
            term = module.act(h, &term);
        }
        p.axpy(&mut out, p.neg(p.sign(i)), &term);
        br = alg.bracket(&br, h)?;
    }
    let w = eval_omega_ordered(module, c2, h, order)?;
    Ok(p.vadd(&out, &module.act(g, &w)))
}

/// The matrix of δ⁰ = δ⁰_cl.
pub fn delta0_matrix(module: &RestrictedModule) -> FpMatrix {
    delta_cl_matrix(module, 0)
}

/// The matrix of δ¹: ψ -> (δ_cl ψ, ψ̃ on the basis).
pub fn delta1_matrix(module: &RestrictedModule) -> FpMatrix {
    let alg = module.algebra();
    let (n, m, p) = (alg.dim(), module.dim(), alg.p());
    let top = delta_cl_matrix(module, 1);
    let split = top.rows();
    let mut out = FpMatrix::zeros(p, c2_dim(module), n * m);
    out.set_block(0, 0, &top);
    let ident = FpMatrix::identity(p, m);
    for i in 0..n {
        let r0 = split + i * m;
        for (l, &c) in alg.pi(i).iter().enumerate() {
            if c != 0 {
                out.add_block(r0, l * m, c, &ident);
            }
        }
        out.add_block(r0, i * m, p.neg(1), &module.rho(i).pow(p.get() as u64 - 1));
    }
    out
}

pub fn delta1(module: &RestrictedModule, psi: &ClassicalCochain) -> Cochain2 {
    let v = delta1_matrix(module).mul_vec(psi.coordinates());
    Cochain2::from_vector(module, &v).expect("shape")
}

/// The matrix of δ²: (φ, ω) -> (δ_cl φ, β on basis pairs).
pub fn delta2_matrix(module: &RestrictedModule) -> FpMatrix {
    let alg = module.algebra();
    let (n, m, p) = (alg.dim(), module.dim(), alg.p());
    let pu = p.get() as usize;
    let top = delta_cl_matrix(module, 2);
    let (split_row, split_col) = (top.rows(), top.cols());
    let mut out = FpMatrix::zeros(p, c3_dim(module), c2_dim(module));
    out.set_block(0, 0, &top);
    let ident = FpMatrix::identity(p, m);
    // Adds `coef * action` times the φ slot of (e_a, e_b) into the block row r0.
    let add_phi = |out: &mut FpMatrix, r0: usize, a: usize, b: usize, coef: u32, action: &FpMatrix| {
        let mut idx = [a, b];
        let Some(odd) = sort_with_sign(&mut idx) else { return };
        let coef = if odd { p.neg(coef) } else { coef };
        out.add_block(r0, rank_combination(n, &idx) * m, coef, action);
    };
    for i in 0..n {
        for j in 0..n {
            let r0 = split_row + (i * n + j) * m;
            for (l, &c) in alg.pi(j).iter().enumerate() {
                if c != 0 {
                    add_phi(&mut out, r0, i, l, c, &ident);
                }
            }
            let ej = unit_vector(n, j);
            let mut br = unit_vector(n, i);
            for b in 0..pu {
                let a = pu - 1 - b;
                let action = module.rho(j).pow(a as u64);
                let coef = p.neg(p.sign(a));
                for (l, &c) in br.iter().enumerate() {
                    if c != 0 {
                        add_phi(&mut out, r0, l, j, p.mul(coef, c), &action);
                    }
                }
                br = alg.br(&br, &ej);
            }
            out.add_block(r0, split_col + j * m, 1, module.rho(i));
        }
    }
    out
}

pub fn delta2(module: &RestrictedModule, c2: &Cochain2) -> Cochain3 {
    let v = delta2_matrix(module).mul_vec(&c2.to_vector());
    Cochain3::from_vector(module, &v).expect("shape")
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RestrictedCohomology {
    pub degree: usize,
    pub dim: usize,
    pub homology: Homology,
}

impl RestrictedCohomology {
    pub fn representatives(&self) -> &[Vec<u32>] {
        &self.homology.representatives
    }
}

/// H^k for k = 0, 1, 2.
pub fn restricted_cohomology(module: &RestrictedModule, k: usize) -> Result<RestrictedCohomology> {
    let p = module.algebra().p();
    let (incoming, outgoing) = match k {
        0 => (FpMatrix::zeros(p, module.dim(), 0), delta0_matrix(module)),
        1 => (delta0_matrix(module), delta1_matrix(module)),
        2 => (delta1_matrix(module), delta2_matrix(module)),
        _ => return Err(Error::UnsupportedDegree(k)),
    };
    let h = homology(&incoming, &outgoing)?;
    Ok(RestrictedCohomology { degree: k, dim: h.dim(), homology: h })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Comparison {
    pub restricted_dim: usize,
    pub classical_dim: usize,
    /// Columns: images of the restricted representatives in classical coordinates.
    pub map_matrix: FpMatrix,
    pub kernel_dim: usize,
}

/// The map H^k -> H^k_cl induced by forgetting ω, for k = 1, 2.
pub fn compare_classical(module: &RestrictedModule, k: usize) -> Result<Comparison> {
    if !(1..=2).contains(&k) {
        return Err(Error::UnsupportedDegree(k));
    }
    let res = restricted_cohomology(module, k)?;
    let cl = classical_cohomology(module, k)?;
    let split = choose(module.algebra().dim(), k) * module.dim();
    let cols = res
        .representatives()
        .iter()
        .map(|z| {
            cl.homology
                .coordinates(&z[..split])
                .ok_or_else(|| Error::VerificationFailed("forgotten cocycle is not a classical cocycle".into()))
        })
        .collect::<Result<Vec<_>>>()?;
    let map_matrix = FpMatrix::from_columns(module.algebra().p(), cl.dim, &cols);
    let kernel_dim = res.dim - map_matrix.rank();
    Ok(Comparison { restricted_dim: res.dim, classical_dim: cl.dim, map_matrix, kernel_dim })
}

/// Classical class of the φ part of a restricted 2-cocycle, in the classical representative basis.
pub fn classical_image(module: &RestrictedModule, c2: &Cochain2) -> Result<Vec<u32>> {
    let cl = classical_cohomology(module, 2)?;
    cl.homology.coordinates(c2.phi.coordinates()).ok_or(Error::NotACocycle)
}

/// Whether a prime admits the extension algorithms on this module.
pub fn supports(module: &RestrictedModule) -> bool {
    check_prime(module).is_ok()
}
