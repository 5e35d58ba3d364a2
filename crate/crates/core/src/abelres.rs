//! The free resolution of F over U_res(g) for abelian g.
//!
//! `C_k` is the sum over `2t + s = k` of `S^t ḡ ⊗ Λ^s g ⊗ U_res(g)`, with basis
//! monomials `e^μ ⊗ e_I ⊗ e^r`. The differential is
//!
//! ```text
//! d(h_1..h_t ⊗ g_1∧..∧g_s ⊗ x) = sum_i (-1)^{i-1} h_1..h_t ⊗ g_1∧..ĝ_i..∧g_s ⊗ g_i x
//!                              + sum_j h_1..ĥ_j..h_t ⊗ h_j^[p]∧g_1∧..∧g_s ⊗ x
//!                              - sum_j h_1..ĥ_j..h_t ⊗ h_j∧g_1∧..∧g_s ⊗ h_j^{p-1} x
//! ```
//!
//! Bases are ordered by t ascending, then μ, I and r lexicographically.
//! Over a prime field the Frobenius twist on ḡ is invisible, so symmetric
//! monomials are plain multidegrees.

use std::collections::{BTreeMap, HashMap};
use std::sync::Arc;

use crate::classical::{choose, combinations, sort_with_sign};
use crate::error::{Error, Result};
use crate::field::Prime;
use crate::gmod::RestrictedModule;
use crate::liealg::RestrictedLieAlgebra;
use crate::linalg::{homology, quotient_dim, FpMatrix, Subspace};
use crate::report::{Check, Report};
use crate::sample::Sampler;
use crate::ures::{PbwMonomial, Ures, UresElement};

/// Largest chain space the builders will assemble as a dense matrix.
pub const MAX_SLICE_DIM: usize = 4096;

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ChainBasisElement {
    pub mu: Vec<u32>,
    pub wedge: Vec<usize>,
    pub r: PbwMonomial,
}

impl ChainBasisElement {
    pub fn t(&self) -> usize {
        self.mu.iter().sum::<u32>() as usize
    }

    pub fn s(&self) -> usize {
        self.wedge.len()
    }

    pub fn degree(&self) -> usize {
        2 * self.t() + self.s()
    }
}

/// A finite combination of chain basis elements.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Chain {
    terms: BTreeMap<ChainBasisElement, u32>,
}

impl Chain {
    pub fn zero() -> Chain {
        Chain::default()
    }

    pub fn basis(b: ChainBasisElement) -> Chain {
        let mut out = Chain::zero();
        out.terms.insert(b, 1);
        out
    }

    pub fn terms(&self) -> &BTreeMap<ChainBasisElement, u32> {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    fn add_term(&mut self, p: Prime, b: ChainBasisElement, c: u32) {
        if c == 0 {
            return;
        }
        let entry = self.terms.entry(b).or_insert(0);
        *entry = p.add(*entry, c);
        if *entry == 0 {
            self.terms.retain(|_, v| *v != 0);
        }
    }

    fn add_scaled(&mut self, p: Prime, a: u32, other: &Chain) {
        for (b, &c) in &other.terms {
            self.add_term(p, b.clone(), p.mul(a, c));
        }
    }
}

/// Multidegrees of total degree t in n variables, lexicographically.
pub fn multidegrees(n: usize, t: usize) -> Vec<Vec<u32>> {
    if n == 0 {
        return if t == 0 { vec![Vec::new()] } else { Vec::new() };
    }
    let mut out = Vec::new();
    for a in 0..=t {
        for rest in multidegrees(n - 1, t - a) {
            let mut v = vec![a as u32];
            v.extend(rest);
            out.push(v);
        }
    }
    out
}

/// e_l ∧ e_I, sorted: `None` when l is already present, else (odd sign, indices).
fn wedge_insert(l: usize, wedge: &[usize]) -> Option<(bool, Vec<usize>)> {
    let mut idx = vec![l];
    idx.extend(wedge);
    sort_with_sign(&mut idx).map(|odd| (odd, idx))
}

/// Which of the three sums of the differential to apply.
#[derive(Debug, Clone, Copy)]
struct Parts {
    exterior: bool,
    symmetric: bool,
}

const ALL_PARTS: Parts = Parts { exterior: true, symmetric: true };
const EXTERIOR_ONLY: Parts = Parts { exterior: true, symmetric: false };

/// The chain complex C_* for an abelian restricted Lie algebra.
#[derive(Debug)]
pub struct AbelianComplex {
    alg: Arc<RestrictedLieAlgebra>,
    ures: Ures,
}

impl AbelianComplex {
    pub fn new(alg: Arc<RestrictedLieAlgebra>) -> Result<AbelianComplex> {
        if !alg.is_abelian() {
            return Err(Error::NotAbelian);
        }
        Ok(AbelianComplex { ures: Ures::new(alg.clone()), alg })
    }

    pub fn algebra(&self) -> &Arc<RestrictedLieAlgebra> {
        &self.alg
    }

    pub fn ures(&self) -> &Ures {
        &self.ures
    }

    fn n(&self) -> usize {
        self.alg.dim()
    }

    fn pbw(&self) -> Result<Vec<PbwMonomial>> {
        self.ures.pbw_basis()
    }

    pub fn chain_dim(&self, k: usize) -> usize {
        let pn = (self.alg.p().get() as usize).pow(self.n() as u32);
        self.generators(k).len() * pn
    }

    /// Generators e^μ ⊗ e_I ⊗ 1 of C_k as a free module.
    pub fn generators(&self, k: usize) -> Vec<ChainBasisElement> {
        let n = self.n();
        let mut out = Vec::new();
        for t in 0..=k / 2 {
            let s = k - 2 * t;
            if s > n {
                continue;
            }
            for mu in multidegrees(n, t) {
                for wedge in combinations(n, s) {
                    out.push(ChainBasisElement { mu: mu.clone(), wedge, r: vec![0; n] });
                }
            }
        }
        out
    }

    /// F-basis of C_k.
    pub fn basis(&self, k: usize) -> Result<Vec<ChainBasisElement>> {
        let size = self.chain_dim(k);
        if size > MAX_SLICE_DIM {
            return Err(Error::TooLarge { what: format!("C_{k}"), size: size as u64, bound: MAX_SLICE_DIM as u64 });
        }
        let pbw = self.pbw()?;
        let mut out = Vec::with_capacity(size);
        for g in self.generators(k) {
            for r in &pbw {
                out.push(ChainBasisElement { r: r.clone(), ..g.clone() });
            }
        }
        Ok(out)
    }

    fn power_times(&self, l: usize, e: usize, x: UresElement) -> UresElement {
        (0..e).fold(x, |acc, _| self.ures.left_mul(l, &acc))
    }

    fn d_parts(&self, b: &ChainBasisElement, parts: Parts) -> Chain {
        let p = self.alg.p();
        let pu = p.get() as usize;
        let mut out = Chain::zero();
        let x = UresElement::monomial(b.r.clone(), 1);
        if parts.exterior {
            for (pos, &i) in b.wedge.iter().enumerate() {
                let mut rest = b.wedge.clone();
                rest.remove(pos);
                for (mono, &c) in self.ures.left_mul(i, &x).terms() {
                    let e = ChainBasisElement { mu: b.mu.clone(), wedge: rest.clone(), r: mono.clone() };
                    out.add_term(p, e, p.mul(c, p.sign(pos)));
                }
            }
        }
        if parts.symmetric {
            for l in 0..self.n() {
                let mult = b.mu[l] % p.get();
                if mult == 0 {
                    continue;
                }
                let mut mu = b.mu.clone();
                mu[l] -= 1;
                for (q, &c) in self.alg.pi(l).iter().enumerate() {
                    if c == 0 {
                        continue;
                    }
                    if let Some((odd, wedge)) = wedge_insert(q, &b.wedge) {
                        let coef = p.mul(mult, c);
                        let coef = if odd { p.neg(coef) } else { coef };
                        out.add_term(p, ChainBasisElement { mu: mu.clone(), wedge, r: b.r.clone() }, coef);
                    }
                }
                if let Some((odd, wedge)) = wedge_insert(l, &b.wedge) {
                    let coef = if odd { mult } else { p.neg(mult) };
                    for (mono, &c) in self.power_times(l, pu - 1, x.clone()).terms() {
                        let e = ChainBasisElement { mu: mu.clone(), wedge: wedge.clone(), r: mono.clone() };
                        out.add_term(p, e, p.mul(coef, c));
                    }
                }
            }
        }
        out
    }

    /// d on a basis element.
    pub fn d(&self, b: &ChainBasisElement) -> Chain {
        if b.degree() == 0 {
            return Chain::zero();
        }
        self.d_parts(b, ALL_PARTS)
    }

    pub fn d_chain(&self, c: &Chain) -> Chain {
        let p = self.alg.p();
        let mut out = Chain::zero();
        for (b, &coef) in c.terms() {
            out.add_scaled(p, coef, &self.d(b));
        }
        out
    }

    /// Product of basis elements: symmetric parts multiply, wedges concatenate with sign,
    /// U_res parts multiply.
    pub fn product_basis(&self, a: &ChainBasisElement, b: &ChainBasisElement) -> Chain {
        let p = self.alg.p();
        let mut wedge = a.wedge.clone();
        wedge.extend(&b.wedge);
        let Some(odd) = sort_with_sign(&mut wedge) else { return Chain::zero() };
        let mu: Vec<u32> = a.mu.iter().zip(&b.mu).map(|(x, y)| x + y).collect();
        let u = self.ures.multiply(&UresElement::monomial(a.r.clone(), 1), &UresElement::monomial(b.r.clone(), 1));
        let mut out = Chain::zero();
        for (mono, &c) in u.terms() {
            let coef = if odd { p.neg(c) } else { c };
            out.add_term(p, ChainBasisElement { mu: mu.clone(), wedge: wedge.clone(), r: mono.clone() }, coef);
        }
        out
    }

    pub fn product(&self, a: &Chain, b: &Chain) -> Chain {
        let p = self.alg.p();
        let mut out = Chain::zero();
        for (x, &cx) in a.terms() {
            for (y, &cy) in b.terms() {
                out.add_scaled(p, p.mul(cx, cy), &self.product_basis(x, y));
            }
        }
        out
    }

    fn unit_r(&self) -> PbwMonomial {
        vec![0; self.n()]
    }

    /// g⁰_i = 1 ⊗ 1 ⊗ e_i.
    pub fn g0(&self, i: usize) -> Chain {
        let mut r = self.unit_r();
        r[i] = 1;
        Chain::basis(ChainBasisElement { mu: vec![0; self.n()], wedge: Vec::new(), r })
    }

    /// g¹_i = 1 ⊗ e_i ⊗ 1.
    pub fn g1(&self, i: usize) -> Chain {
        Chain::basis(ChainBasisElement { mu: vec![0; self.n()], wedge: vec![i], r: self.unit_r() })
    }

    /// g²_i = e_i ⊗ 1 ⊗ 1.
    pub fn g2(&self, i: usize) -> Chain {
        let mut mu = vec![0; self.n()];
        mu[i] = 1;
        Chain::basis(ChainBasisElement { mu, wedge: Vec::new(), r: self.unit_r() })
    }

    /// c_i = 1 ⊗ e_i^[p] ⊗ 1 - 1 ⊗ e_i ⊗ e_i^{p-1}.
    pub fn c(&self, i: usize) -> Chain {
        let p = self.alg.p();
        let n = self.n();
        let mut out = Chain::zero();
        for (q, &c) in self.alg.pi(i).iter().enumerate() {
            out.add_term(p, ChainBasisElement { mu: vec![0; n], wedge: vec![q], r: self.unit_r() }, c);
        }
        let mut r = self.unit_r();
        r[i] = (p.get() - 1) as u8;
        out.add_term(p, ChainBasisElement { mu: vec![0; n], wedge: vec![i], r }, p.neg(1));
        out
    }

    /// c_{i_1} ... c_{i_k}.
    pub fn c_product(&self, idx: &[usize]) -> Chain {
        let one = Chain::basis(ChainBasisElement { mu: vec![0; self.n()], wedge: Vec::new(), r: self.unit_r() });
        idx.iter().fold(one, |acc, &i| self.product(&acc, &self.c(i)))
    }

    /// e_I ⊗ e_{i_1}^{p-1} ... e_{i_k}^{p-1}.
    pub fn special(&self, idx: &[usize]) -> Chain {
        let mut r = self.unit_r();
        for &i in idx {
            r[i] = (self.alg.p().get() - 1) as u8;
        }
        Chain::basis(ChainBasisElement { mu: vec![0; self.n()], wedge: idx.to_vec(), r })
    }

    fn coordinates(&self, c: &Chain, index: &HashMap<ChainBasisElement, usize>, len: usize) -> Vec<u32> {
        let mut v = vec![0; len];
        for (b, &coef) in c.terms() {
            v[*index.get(b).expect("chain lies in the expected degree")] = coef;
        }
        v
    }

    fn matrix(&self, source: &[ChainBasisElement], target: &[ChainBasisElement], parts: Parts) -> FpMatrix {
        let index: HashMap<_, _> = target.iter().cloned().enumerate().map(|(i, b)| (b, i)).collect();
        let cols: Vec<Vec<u32>> =
            source.iter().map(|b| self.coordinates(&self.d_parts(b, parts), &index, target.len())).collect();
        FpMatrix::from_columns(self.alg.p(), target.len(), &cols)
    }

    /// d_k: C_k -> C_{k-1}, for k >= 1.
    pub fn d_matrix(&self, k: usize) -> Result<FpMatrix> {
        Ok(self.matrix(&self.basis(k)?, &self.basis(k - 1)?, ALL_PARTS))
    }

    /// ε: C_0 = U_res -> F.
    pub fn augmentation(&self) -> Result<FpMatrix> {
        let pbw = self.pbw()?;
        let mut out = FpMatrix::zeros(self.alg.p(), 1, pbw.len());
        out.set(0, 0, 1);
        Ok(out)
    }
}

#[derive(Debug, Clone)]
pub struct ChainComplexSlice {
    pub degree: usize,
    pub basis: Vec<ChainBasisElement>,
    /// d_k: C_k -> C_{k-1}; for k = 0 this is the augmentation.
    pub d: FpMatrix,
}

#[derive(Debug, Clone)]
pub struct Resolution {
    pub k_max: usize,
    /// Slices 0..=k_max + 1; the last one is only used for images.
    pub slices: Vec<ChainComplexSlice>,
    pub report: Report,
}

/// Build C_0, ..., C_{k_max + 1} and check d² = 0 and ε d_1 = 0.
pub fn build_resolution(alg: &Arc<RestrictedLieAlgebra>, k_max: usize) -> Result<Resolution> {
    let complex = AbelianComplex::new(alg.clone())?;
    if k_max >= alg.p().get() as usize {
        return Err(Error::DegreeTooHigh { degree: k_max, p: alg.p().get() });
    }
    let mut slices = Vec::new();
    for k in 0..=k_max + 1 {
        let basis = complex.basis(k)?;
        let d = if k == 0 { complex.augmentation()? } else { complex.d_matrix(k)? };
        slices.push(ChainComplexSlice { degree: k, basis, d });
    }
    let mut report = Report::new();
    let witness =
        (2..=k_max + 1).find(|&k| !slices[k - 1].d.mul(&slices[k].d).is_zero()).map(|k| format!("d_{} d_{k}", k - 1));
    report.push(Check::from_witness("d squared", witness));
    let witness = (!slices[0].d.mul(&slices[1].d).is_zero()).then(|| "ε d_1".to_string());
    report.push(Check::from_witness("augmentation", witness));
    Ok(Resolution { k_max, slices, report })
}

/// Homology of the augmented complex at degree k (ker ε in degree 0).
pub fn resolution_homology(res: &Resolution, k: usize) -> Result<usize> {
    if k > res.k_max {
        return Err(Error::DegreeTooHigh { degree: k, p: res.slices[0].d.modulus().get() });
    }
    quotient_dim(&res.slices[k + 1].d, &res.slices[k].d)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AuxHomology {
    pub degree: usize,
    pub dim: usize,
    pub expected: usize,
    /// Whether the distinguished cycles are cycles and give a basis of H_k.
    pub classes_form_basis: bool,
}

/// Homology of 𝒞_k = Λ^k g ⊗ U_res with the first sum of d as differential.
pub fn aux_c_homology(alg: &Arc<RestrictedLieAlgebra>, k: usize) -> Result<AuxHomology> {
    let complex = AbelianComplex::new(alg.clone())?;
    let n = alg.dim();
    if k > n {
        return Err(Error::UnsupportedDegree(k));
    }
    let p = alg.p();
    let pbw = complex.pbw()?;
    let exterior_basis = |s: usize| -> Vec<ChainBasisElement> {
        if s > n {
            return Vec::new();
        }
        combinations(n, s)
            .into_iter()
            .flat_map(|wedge| {
                pbw.iter().map(move |r| ChainBasisElement { mu: vec![0; n], wedge: wedge.clone(), r: r.clone() })
            })
            .collect()
    };
    let here = exterior_basis(k);
    let outgoing = if k == 0 {
        FpMatrix::zeros(p, 0, here.len())
    } else {
        complex.matrix(&here, &exterior_basis(k - 1), EXTERIOR_ONLY)
    };
    let incoming = complex.matrix(&exterior_basis(k + 1), &here, EXTERIOR_ONLY);
    let h = homology(&incoming, &outgoing)?;
    let index: HashMap<_, _> = here.iter().cloned().enumerate().map(|(i, b)| (b, i)).collect();
    let zero_pi = (0..n).all(|i| alg.pi(i).iter().all(|&c| c == 0));
    let classes: Vec<Vec<u32>> = combinations(n, k)
        .iter()
        .map(|idx| {
            let c = if zero_pi { complex.special(idx) } else { complex.c_product(idx) };
            complex.coordinates(&c, &index, here.len())
        })
        .collect();
    let all_cycles = classes.iter().all(|v| h.cycles.contains(v));
    let span = Subspace::span(p, here.len(), &classes).sum(&h.boundaries);
    let independent = span.dim() == h.boundaries.dim() + classes.len();
    let classes_form_basis = all_cycles && independent && span == h.cycles;
    Ok(AuxHomology { degree: k, dim: h.dim(), expected: choose(n, k), classes_form_basis })
}

/// The complex 𝔠 = S ⊗ Λ(c_1, ..., c_n) ⊗ U_res with ∂ = Σ_j ∂/∂e_j ⊗ c_j, on the
/// same monomial basis as C. Checks the homotopy identity (D∂ + ∂D) = (t + s) id,
/// that e^μ ⊗ c_I ⊗ x -> e^μ c_I x is a chain map into C, H_0 = U_res and
/// H_k = 0 for 0 < k <= k_max.
pub fn frak_c_check(alg: &Arc<RestrictedLieAlgebra>, k_max: usize) -> Result<Report> {
    let complex = AbelianComplex::new(alg.clone())?;
    let p = alg.p();
    if k_max >= p.get() as usize {
        return Err(Error::DegreeTooHigh { degree: k_max, p: p.get() });
    }
    let n = alg.dim();
    let koszul = |b: &ChainBasisElement| -> Chain {
        let mut out = Chain::zero();
        for j in 0..n {
            let mult = b.mu[j] % p.get();
            if mult == 0 {
                continue;
            }
            if let Some((odd, wedge)) = wedge_insert(j, &b.wedge) {
                let mut mu = b.mu.clone();
                mu[j] -= 1;
                out.add_term(p, ChainBasisElement { mu, wedge, r: b.r.clone() }, if odd { p.neg(mult) } else { mult });
            }
        }
        out
    };
    let homotopy = |b: &ChainBasisElement| -> Chain {
        let mut out = Chain::zero();
        for (a, &i) in b.wedge.iter().enumerate() {
            let mut mu = b.mu.clone();
            mu[i] += 1;
            let mut wedge = b.wedge.clone();
            wedge.remove(a);
            out.add_term(p, ChainBasisElement { mu, wedge, r: b.r.clone() }, p.sign(a));
        }
        out
    };
    let apply = |f: &dyn Fn(&ChainBasisElement) -> Chain, c: &Chain| -> Chain {
        let mut out = Chain::zero();
        for (b, &coef) in c.terms() {
            out.add_scaled(p, coef, &f(b));
        }
        out
    };
    // Realization in C: e^μ ⊗ c_I ⊗ e^r -> (e^μ ⊗ 1 ⊗ 1)(c_I)(1 ⊗ 1 ⊗ e^r).
    let realize = |b: &ChainBasisElement| -> Chain {
        let sym = Chain::basis(ChainBasisElement { mu: b.mu.clone(), wedge: Vec::new(), r: vec![0; n] });
        let u = Chain::basis(ChainBasisElement { mu: vec![0; n], wedge: Vec::new(), r: b.r.clone() });
        complex.product(&complex.product(&sym, &complex.c_product(&b.wedge)), &u)
    };

    let mut report = Report::new();
    let mut homotopy_witness = None;
    let mut chain_map_witness = None;
    let mut slices = Vec::new();
    for k in 0..=k_max + 1 {
        let basis = complex.basis(k)?;
        for b in &basis {
            if homotopy_witness.is_none() {
                let lhs = apply(&homotopy, &koszul(b));
                let mut lhs2 = apply(&koszul, &homotopy(b));
                lhs2.add_scaled(p, 1, &lhs);
                let scalar = ((b.t() + b.s()) % p.get() as usize) as u32;
                let mut expected = Chain::zero();
                expected.add_term(p, b.clone(), scalar);
                if lhs2 != expected {
                    homotopy_witness = Some(format!("{b:?}"));
                }
            }
            if chain_map_witness.is_none() && k >= 1 && complex.d_chain(&realize(b)) != apply(&realize, &koszul(b)) {
                chain_map_witness = Some(format!("{b:?}"));
            }
        }
        slices.push(basis);
    }
    report.push(Check::from_witness("homotopy identity", homotopy_witness));
    report.push(Check::from_witness("chain map into C", chain_map_witness));

    let matrices: Vec<FpMatrix> = (1..=k_max + 1)
        .map(|k| {
            let index: HashMap<_, _> = slices[k - 1].iter().cloned().enumerate().map(|(i, b)| (b, i)).collect();
            let cols: Vec<Vec<u32>> =
                slices[k].iter().map(|b| complex.coordinates(&koszul(b), &index, slices[k - 1].len())).collect();
            FpMatrix::from_columns(p, slices[k - 1].len(), &cols)
        })
        .collect();
    let h0 = slices[0].len() - matrices[0].rank();
    let pn = (p.get() as usize).pow(n as u32);
    report.push(Check::from_witness("H_0 is U_res", (h0 != pn).then(|| format!("dim H_0 = {h0}"))));
    let mut vanish = None;
    for k in 1..=k_max {
        let dim = quotient_dim(&matrices[k], &matrices[k - 1])?;
        if dim != 0 {
            vanish = Some(format!("dim H_{k} = {dim}"));
            break;
        }
    }
    report.push(Check::from_witness("H_k vanishes", vanish));
    Ok(report)
}

/// Leibniz rule on generator pairs and sampled monomial pairs, and the cycles c_I.
pub fn dga_check(alg: &Arc<RestrictedLieAlgebra>, degree_bound: usize, samples: usize) -> Result<Report> {
    let complex = AbelianComplex::new(alg.clone())?;
    let p = alg.p();
    if degree_bound >= p.get() as usize {
        return Err(Error::DegreeTooHigh { degree: degree_bound, p: p.get() });
    }
    let n = alg.dim();
    let leibniz = |a: &Chain, deg_a: usize, b: &Chain| -> bool {
        let lhs = complex.d_chain(&complex.product(a, b));
        let mut rhs = complex.product(&complex.d_chain(a), b);
        rhs.add_scaled(p, p.sign(deg_a), &complex.product(a, &complex.d_chain(b)));
        lhs == rhs
    };
    let mut report = Report::new();
    let gens: Vec<(String, Chain, usize)> = (0..n)
        .flat_map(|i| {
            [
                (format!("g0_{i}"), complex.g0(i), 0),
                (format!("g1_{i}"), complex.g1(i), 1),
                (format!("g2_{i}"), complex.g2(i), 2),
            ]
        })
        .collect();
    let mut witness = None;
    'outer: for (na, a, da) in &gens {
        for (nb, b, _) in &gens {
            if !leibniz(a, *da, b) {
                witness = Some(format!("({na}, {nb})"));
                break 'outer;
            }
        }
    }
    report.push(Check::from_witness("leibniz on generators", witness));

    let pool: Vec<ChainBasisElement> =
        (0..=degree_bound).map(|k| complex.basis(k)).collect::<Result<Vec<_>>>()?.into_iter().flatten().collect();
    let mut sampler = Sampler::new(p, n, "dga monomials");
    let mut witness = None;
    for _ in 0..samples {
        let a = &pool[sampler.below(pool.len())];
        let b = &pool[sampler.below(pool.len())];
        if !leibniz(&Chain::basis(a.clone()), a.degree(), &Chain::basis(b.clone())) {
            witness = Some(format!("({a:?}, {b:?})"));
            break;
        }
    }
    report.push(Check::from_witness("leibniz on sampled monomials", witness));

    let witness = (0..n).find(|&i| !complex.d_chain(&complex.c(i)).is_zero()).map(|i| format!("c_{i}"));
    report.push(Check::from_witness("c_i are cycles", witness));
    let mut witness = None;
    for k in 2..=n.min(degree_bound) {
        if let Some(idx) =
            combinations(n, k).into_iter().find(|idx| !complex.d_chain(&complex.c_product(idx)).is_zero())
        {
            witness = Some(format!("c_{idx:?}"));
            break;
        }
    }
    report.push(Check::from_witness("products of c_i are cycles", witness));
    Ok(report)
}

/// dim Hom_F(S^t ḡ ⊗ Λ^s g, M) summed over 2t + s = k, by enumeration.
pub fn dual_cochain_dim(alg: &Arc<RestrictedLieAlgebra>, m: usize, k: usize) -> Result<usize> {
    Ok(AbelianComplex::new(alg.clone())?.generators(k).len() * m)
}

/// The matrix of Hom_U(d_{k+1}, M): Hom_U(C_k, M) -> Hom_U(C_{k+1}, M).
pub fn dual_coboundary_matrix(complex: &AbelianComplex, module: &RestrictedModule, k: usize) -> FpMatrix {
    let p = complex.alg.p();
    let m = module.dim();
    let source = complex.generators(k);
    let target = complex.generators(k + 1);
    let index: HashMap<(Vec<u32>, Vec<usize>), usize> =
        source.iter().enumerate().map(|(i, b)| ((b.mu.clone(), b.wedge.clone()), i)).collect();
    let mut out = FpMatrix::zeros(p, target.len() * m, source.len() * m);
    for (row, g) in target.iter().enumerate() {
        for (b, &c) in complex.d(g).terms() {
            let col = index[&(b.mu.clone(), b.wedge.clone())];
            out.add_block(row * m, col * m, c, &module.monomial_action(&b.r));
        }
    }
    out
}

/// H^k(g; M) from the dualized resolution, for k + 1 < p.
pub fn abelian_cochain_cohomology(module: &RestrictedModule, k: usize) -> Result<usize> {
    let p = module.algebra().p().get() as usize;
    if k + 1 >= p {
        return Err(Error::DegreeTooHigh { degree: k, p: p as u32 });
    }
    abelian_cochain_cohomology_unchecked(module, k)
}

/// The same computation without the degree guard; past p - 2 the resolution need
/// not be exact and the result need not be Ext.
pub fn abelian_cochain_cohomology_unchecked(module: &RestrictedModule, k: usize) -> Result<usize> {
    let complex = AbelianComplex::new(module.algebra().clone())?;
    let p = module.algebra().p();
    let outgoing = dual_coboundary_matrix(&complex, module, k);
    let incoming = match k {
        0 => FpMatrix::zeros(p, module.dim(), 0),
        _ => dual_coboundary_matrix(&complex, module, k - 1),
    };
    quotient_dim(&incoming, &outgoing)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus::{abelian, abelian_entries, heisenberg};
    use crate::rescochain::restricted_cohomology;

    fn k_max(alg: &RestrictedLieAlgebra) -> usize {
        (alg.p().get() as usize - 1).min(4)
    }

    #[test]
    fn line_at_p2_by_hand() {
        let complex = AbelianComplex::new(Arc::new(abelian(2, 1, false))).unwrap();
        assert_eq!(complex.basis(0).unwrap().len(), 2);
        assert_eq!(complex.basis(1).unwrap().len(), 2);
        let gen = |r: u8| ChainBasisElement { mu: vec![0], wedge: vec![0], r: vec![r] };
        let e = ChainBasisElement { mu: vec![0], wedge: vec![], r: vec![1] };
        assert_eq!(complex.d(&gen(0)), Chain::basis(e));
        assert!(complex.d(&gen(1)).is_zero());
    }

    #[test]
    fn multidegree_counts() {
        for n in 1..4 {
            for t in 0..4 {
                let m = multidegrees(n, t);
                assert_eq!(m.len(), choose(n + t - 1, t));
                assert!(m.windows(2).all(|w| w[0] < w[1]));
            }
        }
    }

    #[test]
    fn chain_dimensions() {
        let c = AbelianComplex::new(Arc::new(abelian(5, 2, false))).unwrap();
        let dims: Vec<usize> = (0..5).map(|k| c.chain_dim(k)).collect();
        assert_eq!(dims, vec![25, 50, 25 + 50, 50 + 50, 50 + 75]);
        assert_eq!(c.basis(3).unwrap().len(), 100);
    }

    #[test]
    fn differential_on_a_symmetric_generator() {
        let c = AbelianComplex::new(Arc::new(abelian(3, 1, false))).unwrap();
        let d = c.d_chain(&c.g2(0));
        let mut expected = Chain::zero();
        let target = ChainBasisElement { mu: vec![0], wedge: vec![0], r: vec![2] };
        expected.add_term(Prime::new(3).unwrap(), target, 2);
        assert_eq!(d, expected);
        assert_eq!(c.d_chain(&c.g2(0)), c.c(0));
    }

    #[test]
    fn rejects_nonabelian_and_high_degree() {
        assert!(matches!(build_resolution(&Arc::new(heisenberg(3, false)), 1), Err(Error::NotAbelian)));
        let alg = Arc::new(abelian(3, 1, false));
        assert!(matches!(build_resolution(&alg, 3), Err(Error::DegreeTooHigh { .. })));
        let m = RestrictedModule::trivial(&alg);
        assert!(matches!(abelian_cochain_cohomology(&m, 2), Err(Error::DegreeTooHigh { .. })));
    }

    #[test]
    fn resolution_is_exact_below_p() {
        for e in abelian_entries() {
            let km = k_max(&e.algebra);
            let res = build_resolution(&e.algebra, km).unwrap();
            assert!(res.report.passed(), "{}", e.name);
            for k in 0..=km {
                assert_eq!(resolution_homology(&res, k).unwrap(), 0, "{} k={k}", e.name);
            }
        }
    }

    #[test]
    fn auxiliary_complex_homology() {
        for e in abelian_entries() {
            for k in 0..=e.algebra.dim() {
                let h = aux_c_homology(&e.algebra, k).unwrap();
                assert_eq!(h.dim, h.expected, "{} k={k}", e.name);
                assert!(h.classes_form_basis, "{} k={k}", e.name);
            }
        }
    }

    #[test]
    fn special_cycles_agree_with_c_products_up_to_sign() {
        let c = AbelianComplex::new(Arc::new(abelian(5, 2, false))).unwrap();
        let p = Prime::new(5).unwrap();
        let mut sum = c.c_product(&[0, 1]);
        sum.add_scaled(p, p.neg(1), &c.special(&[0, 1]));
        assert!(sum.is_zero());
        let mut sum = c.c_product(&[1]);
        sum.add_scaled(p, 1, &c.special(&[1]));
        assert!(sum.is_zero());
    }

    #[test]
    fn koszul_complex_checks() {
        for e in abelian_entries() {
            let r = frak_c_check(&e.algebra, k_max(&e.algebra)).unwrap();
            assert!(r.passed(), "{}: {:?}", e.name, r.first_failure());
        }
    }

    #[test]
    fn leibniz_rule() {
        for e in abelian_entries() {
            let r = dga_check(&e.algebra, k_max(&e.algebra), 100).unwrap();
            assert!(r.passed(), "{}: {:?}", e.name, r.first_failure());
        }
    }

    #[test]
    fn dual_cochain_dimensions() {
        for e in abelian_entries() {
            let n = e.algebra.dim();
            for m in [1, 2] {
                for k in 0..5 {
                    let expected = if k == 0 { m } else { choose(n + k - 1, k) * m };
                    assert_eq!(dual_cochain_dim(&e.algebra, m, k).unwrap(), expected);
                }
            }
        }
    }

    #[test]
    fn one_dimensional_oracles() {
        // u = F[x]/(x^p) has Ext^k(F, F) of dimension 1 in every degree;
        // u = F[x]/(x^p - x) is semisimple.
        for p in [3, 5] {
            let nil = Arc::new(abelian(p, 1, false));
            let ss = Arc::new(abelian(p, 1, true));
            for k in 0..(p as usize - 1) {
                assert_eq!(abelian_cochain_cohomology(&RestrictedModule::trivial(&nil), k).unwrap(), 1);
                let expected = usize::from(k == 0);
                assert_eq!(abelian_cochain_cohomology(&RestrictedModule::trivial(&ss), k).unwrap(), expected);
            }
        }
    }

    #[test]
    fn agrees_with_restricted_cochains() {
        for e in abelian_entries() {
            let p = e.algebra.p().get() as usize;
            for (name, m) in e.modules() {
                for k in 0..=2usize {
                    if k + 1 >= p {
                        continue;
                    }
                    let a = abelian_cochain_cohomology(&m, k).unwrap();
                    let b = restricted_cohomology(&m, k).unwrap().dim;
                    assert_eq!(a, b, "{} {name} k={k}", e.name);
                }
            }
        }
    }
}
