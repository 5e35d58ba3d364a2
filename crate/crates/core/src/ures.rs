//! The restricted enveloping algebra on its PBW basis.
//!
//! Elements are sparse combinations of monomials e_1^{k_1} ... e_n^{k_n} with
//! `0 <= k_j < p`, stored as exponent vectors. Products are computed by
//! left multiplication with a single generator, which is memoized.

use std::collections::{BTreeMap, HashMap};
use std::sync::{Arc, Mutex};

use crate::error::{Error, Result};
use crate::field::Prime;
use crate::gmod::RestrictedModule;
use crate::liealg::RestrictedLieAlgebra;
use crate::liealg::{represent, witt_algebra, EXHAUSTIVE_BOUND};
use crate::linalg::FpMatrix;
use crate::report::{Check, Report};
use crate::sample::{all_vectors, space_size, Sampler};

/// Exponent vector of a PBW monomial.
pub type PbwMonomial = Vec<u8>;

/// Default bound on the number of PBW monomials [`Ures::pbw_basis`] will list.
pub const PBW_BOUND: u64 = 3125;

#[derive(Debug, Clone, Default, PartialEq, Eq, Hash)]
pub struct UresElement {
    terms: BTreeMap<PbwMonomial, u32>,
}

impl UresElement {
    pub fn zero() -> UresElement {
        UresElement::default()
    }

    pub fn monomial(mono: PbwMonomial, coeff: u32) -> UresElement {
        let mut terms = BTreeMap::new();
        if coeff != 0 {
            terms.insert(mono, coeff);
        }
        UresElement { terms }
    }

    pub fn one(n: usize) -> UresElement {
        UresElement::monomial(vec![0; n], 1)
    }

    pub fn terms(&self) -> &BTreeMap<PbwMonomial, u32> {
        &self.terms
    }

    pub fn coefficient(&self, mono: &[u8]) -> u32 {
        self.terms.get(mono).copied().unwrap_or(0)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// `self += a * other`.
    pub fn add_scaled(&mut self, p: Prime, a: u32, other: &UresElement) {
        if a == 0 {
            return;
        }
        for (mono, &c) in &other.terms {
            self.add_term(p, mono, p.mul(a, c));
        }
    }

    pub fn add_term(&mut self, p: Prime, mono: &[u8], c: u32) {
        if c == 0 {
            return;
        }
        match self.terms.get_mut(mono) {
            Some(v) => {
                *v = p.add(*v, c);
                if *v == 0 {
                    self.terms.remove(mono);
                }
            }
            None => {
                self.terms.insert(mono.to_vec(), c);
            }
        }
    }

    pub fn scaled(&self, p: Prime, a: u32) -> UresElement {
        let mut out = UresElement::zero();
        out.add_scaled(p, a, self);
        out
    }
}

/// ε(u): the coefficient of the empty monomial.
pub fn augmentation(u: &UresElement) -> u32 {
    u.terms.iter().find(|(m, _)| m.iter().all(|&k| k == 0)).map_or(0, |(_, &c)| c)
}

/// Lexicographic index of a monomial among the `p^n` PBW monomials.
pub fn monomial_index(p: Prime, mono: &[u8]) -> usize {
    mono.iter().fold(0, |acc, &k| acc * p.get() as usize + k as usize)
}

pub fn monomial_at(p: Prime, n: usize, mut index: usize) -> PbwMonomial {
    let q = p.get() as usize;
    let mut out = vec![0u8; n];
    for slot in out.iter_mut().rev() {
        *slot = (index % q) as u8;
        index /= q;
    }
    out
}

/// The word e_1 ... e_1 e_2 ... e_n of a monomial, as generator indices.
pub fn monomial_word(mono: &[u8]) -> Vec<usize> {
    mono.iter().enumerate().flat_map(|(i, &k)| std::iter::repeat_n(i, k as usize)).collect()
}

/// U_res(g) for a fixed algebra, with a memo table for generator products.
#[derive(Debug)]
pub struct Ures {
    alg: Arc<RestrictedLieAlgebra>,
    memo: Mutex<HashMap<(usize, PbwMonomial), UresElement>>,
}

impl Ures {
    pub fn new(alg: Arc<RestrictedLieAlgebra>) -> Ures {
        Ures { alg, memo: Mutex::new(HashMap::new()) }
    }

    pub fn algebra(&self) -> &Arc<RestrictedLieAlgebra> {
        &self.alg
    }

    fn p(&self) -> Prime {
        self.alg.p()
    }

    pub fn one(&self) -> UresElement {
        UresElement::one(self.alg.dim())
    }

    pub fn generator(&self, i: usize) -> UresElement {
        let mut m = vec![0; self.alg.dim()];
        m[i] = 1;
        UresElement::monomial(m, 1)
    }

    /// Image of a Lie algebra element.
    pub fn from_algebra(&self, x: &[u32]) -> UresElement {
        let mut out = UresElement::zero();
        for (i, &c) in x.iter().enumerate() {
            out.add_scaled(self.p(), c, &self.generator(i));
        }
        out
    }

    pub fn dim(&self) -> Option<u64> {
        space_size(self.p(), self.alg.dim())
    }

    /// All PBW monomials in lexicographic order.
    pub fn pbw_basis(&self) -> Result<Vec<PbwMonomial>> {
        self.pbw_basis_bounded(PBW_BOUND)
    }

    pub fn pbw_basis_bounded(&self, bound: u64) -> Result<Vec<PbwMonomial>> {
        let n = self.alg.dim();
        let size = self.dim().filter(|&s| s <= bound).ok_or(Error::TooLarge {
            what: "PBW basis".into(),
            size: self.dim().unwrap_or(u64::MAX),
            bound,
        })?;
        Ok((0..size as usize).map(|k| monomial_at(self.p(), n, k)).collect())
    }

    /// e_i times a PBW monomial, in normal form.
    pub fn left_mul_gen(&self, i: usize, mono: &[u8]) -> UresElement {
        let key = (i, mono.to_vec());
        if let Some(hit) = self.memo.lock().expect("memo lock").get(&key) {
            return hit.clone();
        }
        let out = self.left_mul_gen_uncached(i, mono);
        self.memo.lock().expect("memo lock").insert(key, out.clone());
        out
    }

    fn left_mul_gen_uncached(&self, i: usize, mono: &[u8]) -> UresElement {
        let p = self.p();
        let Some(j) = mono.iter().position(|&k| k > 0) else {
            return self.generator(i);
        };
        if i < j {
            let mut m = mono.to_vec();
            m[i] = 1;
            return UresElement::monomial(m, 1);
        }
        if i == j {
            let mut m = mono.to_vec();
            if (m[i] as u32) + 1 < p.get() {
                m[i] += 1;
                return UresElement::monomial(m, 1);
            }
            // e_i^p = e_i^[p].
            m[i] = 0;
            let mut out = UresElement::zero();
            for (l, &c) in self.alg.pi(i).iter().enumerate() {
                if c != 0 {
                    out.add_scaled(p, c, &self.left_mul_gen(l, &m));
                }
            }
            return out;
        }
        // i > j: e_i e_j = e_j e_i + [e_i, e_j].
        let mut rest = mono.to_vec();
        rest[j] -= 1;
        let inner = self.left_mul_gen(i, &rest);
        let mut out = self.left_mul(j, &inner);
        for (l, &c) in self.alg.structure(i, j).iter().enumerate() {
            if c != 0 {
                out.add_scaled(p, c, &self.left_mul_gen(l, &rest));
            }
        }
        out
    }

    /// e_i times an element.
    pub fn left_mul(&self, i: usize, u: &UresElement) -> UresElement {
        let p = self.p();
        let mut out = UresElement::zero();
        for (mono, &c) in &u.terms {
            out.add_scaled(p, c, &self.left_mul_gen(i, mono));
        }
        out
    }

    /// Normal form of the product of the generators in `word`.
    pub fn normalize(&self, word: &[usize]) -> Result<UresElement> {
        let n = self.alg.dim();
        if let Some(&bad) = word.iter().find(|&&g| g >= n) {
            return Err(Error::IndexOutOfRange { index: bad, len: n });
        }
        Ok(self.apply_word(word, self.one()))
    }

    fn apply_word(&self, word: &[usize], mut u: UresElement) -> UresElement {
        for &g in word.iter().rev() {
            u = self.left_mul(g, &u);
        }
        u
    }

    pub fn multiply(&self, a: &UresElement, b: &UresElement) -> UresElement {
        let p = self.p();
        let mut out = UresElement::zero();
        for (mono, &c) in &a.terms {
            out.add_scaled(p, c, &self.apply_word(&monomial_word(mono), b.clone()));
        }
        out
    }

    /// Matrix of u acting on a module.
    pub fn action_matrix(&self, u: &UresElement, module: &RestrictedModule) -> Result<FpMatrix> {
        if **module.algebra() != *self.alg {
            return Err(Error::MixedAlgebras);
        }
        let p = self.p();
        let mut out = FpMatrix::zeros(p, module.dim(), module.dim());
        for (mono, &c) in &u.terms {
            out.axpy(c, &module.monomial_action(mono));
        }
        Ok(out)
    }

    /// u . v for v in a module.
    pub fn act(&self, u: &UresElement, module: &RestrictedModule, v: &[u32]) -> Result<Vec<u32>> {
        if v.len() != module.dim() {
            return Err(Error::DimensionMismatch { expected: module.dim(), found: v.len() });
        }
        Ok(self.action_matrix(u, module)?.mul_vec(v))
    }

    /// Matrix of left multiplication by e_i on the PBW basis.
    pub fn left_mul_matrix(&self, i: usize) -> Result<FpMatrix> {
        let basis = self.pbw_basis()?;
        let p = self.p();
        let mut out = FpMatrix::zeros(p, basis.len(), basis.len());
        for (col, mono) in basis.iter().enumerate() {
            for (m, &c) in self.left_mul_gen(i, mono).terms() {
                out.set(monomial_index(p, m), col, c);
            }
        }
        Ok(out)
    }

    /// Dense coordinates on the PBW basis.
    pub fn to_dense(&self, u: &UresElement) -> Vec<u32> {
        let d = self.dim().expect("PBW dimension fits") as usize;
        let mut out = vec![0; d];
        for (m, &c) in u.terms() {
            out[monomial_index(self.p(), m)] = c;
        }
        out
    }

    pub fn from_dense(&self, v: &[u32]) -> UresElement {
        let n = self.alg.dim();
        let mut out = UresElement::zero();
        for (k, &c) in v.iter().enumerate() {
            if c != 0 {
                out.terms.insert(monomial_at(self.p(), n, k), c);
            }
        }
        out
    }
}

/// Check the Witt algebra against its faithful representation on F[x]/(x^p - 1):
/// brackets, p-th powers and products in U_res. Exhaustive over the algebra and over
/// pairs of PBW monomials when p^p is at most the exhaustive bound, otherwise on
/// `samples` random pairs and random words.
pub fn witt_oracle_check(p: Prime, samples: usize) -> Result<Report> {
    let (alg, rep) = witt_algebra(p);
    let alg = Arc::new(alg);
    let module = RestrictedModule::new(alg.clone(), rep.clone())?;
    let ures = Ures::new(alg.clone());
    let pu = p.get() as usize;
    let exhaustive = space_size(p, pu).is_some_and(|s| s <= EXHAUSTIVE_BOUND);
    let mut sampler = Sampler::new(p, pu, "witt oracle");
    let pairs: Vec<(Vec<u32>, Vec<u32>)> = if exhaustive {
        let all: Vec<Vec<u32>> = all_vectors(p, pu).collect();
        all.iter().flat_map(|x| all.iter().map(move |y| (x.clone(), y.clone()))).collect()
    } else {
        (0..samples).map(|_| (sampler.vector(pu), sampler.vector(pu))).collect()
    };
    let mut report = Report::new();

    let mut witness = None;
    for (x, y) in &pairs {
        let (rx, ry) = (represent(p, &rep, x), represent(p, &rep, y));
        if rx.mul(&ry).sub(&ry.mul(&rx)) != represent(p, &rep, &alg.bracket(x, y)?) {
            witness = Some(format!("x = {x:?}, y = {y:?}"));
            break;
        }
    }
    report.push(Check::from_witness("bracket", witness));

    let mut witness = None;
    let singles: Vec<&Vec<u32>> = if exhaustive {
        pairs.iter().filter(|(_, y)| y.iter().all(|&c| c == 0)).map(|(x, _)| x).collect()
    } else {
        pairs.iter().map(|(x, _)| x).collect()
    };
    for x in singles {
        if represent(p, &rep, x).pow(pu as u64) != represent(p, &rep, &alg.p_power(x)?) {
            witness = Some(format!("x = {x:?}"));
            break;
        }
    }
    report.push(Check::from_witness("p-th power", witness));

    let mut witness = None;
    if exhaustive {
        let basis = ures.pbw_basis()?;
        'outer: for a in &basis {
            let ua = UresElement::monomial(a.clone(), 1);
            let ma = module.monomial_action(a);
            for b in &basis {
                let ub = UresElement::monomial(b.clone(), 1);
                let lhs = ures.action_matrix(&ures.multiply(&ua, &ub), &module)?;
                if lhs != ma.mul(&module.monomial_action(b)) {
                    witness = Some(format!("{a:?} * {b:?}"));
                    break 'outer;
                }
            }
        }
    } else {
        for _ in 0..samples {
            let word: Vec<usize> = (0..1 + sampler.below(pu)).map(|_| sampler.below(pu)).collect();
            let split = sampler.below(word.len() + 1);
            let product = word.iter().fold(FpMatrix::identity(p, pu), |acc, &g| acc.mul(&rep[g]));
            let whole = ures.action_matrix(&ures.normalize(&word)?, &module)?;
            let parts = ures.multiply(&ures.normalize(&word[..split])?, &ures.normalize(&word[split..])?);
            if whole != product || ures.action_matrix(&parts, &module)? != product {
                witness = Some(format!("word {word:?}"));
                break;
            }
        }
    }
    report.push(Check::from_witness("U_res products", witness));
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::liealg::witt_algebra;
    use crate::sample::Sampler;
    use proptest::prelude::*;

    fn p(n: u64) -> Prime {
        Prime::new(n).unwrap()
    }

    fn abelian(q: u64, pi: Vec<Vec<u32>>) -> Ures {
        Ures::new(Arc::new(RestrictedLieAlgebra::abelian(p(q), pi).unwrap()))
    }

    fn witt(q: u64) -> (Ures, Vec<FpMatrix>) {
        let (w, rep) = witt_algebra(p(q));
        (Ures::new(Arc::new(w)), rep)
    }

    /// Image of a U_res element under the Witt representation.
    fn rep_of(u: &Ures, rep: &[FpMatrix], x: &UresElement) -> FpMatrix {
        let q = u.algebra().p();
        let d = rep[0].rows();
        let mut out = FpMatrix::zeros(q, d, d);
        for (mono, &c) in x.terms() {
            let mut m = FpMatrix::identity(q, d);
            for g in monomial_word(mono) {
                m = m.mul(&rep[g]);
            }
            out.axpy(c, &m);
        }
        out
    }

    #[test]
    fn pbw_sizes() {
        assert_eq!(abelian(2, vec![vec![0]]).pbw_basis().unwrap(), vec![vec![0], vec![1]]);
        assert_eq!(abelian(3, vec![vec![0, 0]; 2]).pbw_basis().unwrap().len(), 9);
        assert_eq!(abelian(2, vec![vec![0, 0, 0]; 3]).pbw_basis().unwrap().len(), 8);
        let (w7, _) = witt(7);
        assert!(matches!(w7.pbw_basis(), Err(Error::TooLarge { .. })));
    }

    #[test]
    fn pbw_basis_is_lex_ordered() {
        let (w, _) = witt(3);
        let basis = w.pbw_basis().unwrap();
        assert!(basis.windows(2).all(|pair| pair[0] < pair[1]));
        for (k, m) in basis.iter().enumerate() {
            assert_eq!(monomial_index(p(3), m), k);
        }
    }

    #[test]
    fn normalize_examples() {
        let u = abelian(2, vec![vec![0]]);
        assert!(u.normalize(&[0, 0]).unwrap().is_zero());

        let (w, rep) = witt(3);
        // D_1 D_0 = D_0 D_1 - D_1.
        let got = w.normalize(&[1, 0]).unwrap();
        let mut expected = UresElement::monomial(vec![1, 1, 0], 1);
        expected.add_term(p(3), &[0, 1, 0], 2);
        assert_eq!(got, expected);
        assert_eq!(rep_of(&w, &rep, &got), rep[1].mul(&rep[0]));

        assert_eq!(w.normalize(&[0, 0, 0]).unwrap(), w.generator(0));
        assert_eq!(w.normalize(&[3]), Err(Error::IndexOutOfRange { index: 3, len: 3 }));
    }

    #[test]
    fn multiply_examples() {
        let (w, rep) = witt(3);
        let a = UresElement::monomial(vec![1, 2, 0], 2);
        assert_eq!(w.multiply(&a, &w.one()), a);
        for i in 0..3 {
            let power = UresElement::monomial(
                {
                    let mut m = vec![0; 3];
                    m[i] = 2;
                    m
                },
                1,
            );
            assert_eq!(w.multiply(&w.generator(i), &power), w.from_algebra(w.algebra().pi(i)));
        }
        let lhs = w.multiply(&UresElement::monomial(vec![1, 1, 0], 1), &w.generator(0));
        assert_eq!(rep_of(&w, &rep, &lhs), rep[0].mul(&rep[1]).mul(&rep[0]));
    }

    #[test]
    fn augmentation_examples() {
        let q = p(5);
        let u = abelian(5, vec![vec![0, 0]; 2]);
        assert_eq!(augmentation(&u.one()), 1);
        assert_eq!(augmentation(&u.generator(1)), 0);
        let mut x = UresElement::monomial(vec![0, 0], 3);
        x.add_term(q, &[1, 1], 2);
        assert_eq!(augmentation(&x), 3);
    }

    #[test]
    fn action_examples() {
        let (w, _) = witt(5);
        let alg = w.algebra().clone();
        let ad = RestrictedModule::adjoint(&alg);
        let v = crate::field::unit_vector(5, 1);
        assert_eq!(w.act(&w.one(), &ad, &v).unwrap(), v);
        assert_eq!(
            w.act(&w.generator(0), &ad, &v).unwrap(),
            alg.bracket(&crate::field::unit_vector(5, 0), &v).unwrap()
        );
        let triv = RestrictedModule::trivial(&alg);
        let mut u = UresElement::monomial(vec![0; 5], 4);
        u.add_term(p(5), &[1, 0, 2, 0, 0], 3);
        assert_eq!(w.act(&u, &triv, &[2]).unwrap(), vec![3]);
    }

    #[test]
    fn associativity_on_basis_monomials() {
        for (u, _) in [witt(2), witt(3)] {
            let basis = u.pbw_basis().unwrap();
            if basis.len() > 9 {
                // Exhaustive triples for p^n <= 9; the Witt algebra at p = 3 has 27
                // monomials, so sample it.
                let mut s = Sampler::new(u.algebra().p(), 3, "assoc");
                for _ in 0..200 {
                    let t: Vec<_> =
                        (0..3).map(|_| UresElement::monomial(basis[s.below(basis.len())].clone(), 1)).collect();
                    let l = u.multiply(&u.multiply(&t[0], &t[1]), &t[2]);
                    let r = u.multiply(&t[0], &u.multiply(&t[1], &t[2]));
                    assert_eq!(l, r);
                }
                continue;
            }
            for a in &basis {
                for b in &basis {
                    for c in &basis {
                        let (a, b, c) = (
                            UresElement::monomial(a.clone(), 1),
                            UresElement::monomial(b.clone(), 1),
                            UresElement::monomial(c.clone(), 1),
                        );
                        assert_eq!(u.multiply(&u.multiply(&a, &b), &c), u.multiply(&a, &u.multiply(&b, &c)));
                    }
                }
            }
        }
    }

    #[test]
    fn commutator_of_generators_is_bracket() {
        let (w, _) = witt(5);
        let q = p(5);
        for i in 0..5 {
            for j in 0..5 {
                let mut lhs = w.multiply(&w.generator(i), &w.generator(j));
                lhs.add_scaled(q, q.neg(1), &w.multiply(&w.generator(j), &w.generator(i)));
                assert_eq!(lhs, w.from_algebra(w.algebra().structure(i, j)));
            }
        }
    }

    fn word_strategy() -> impl Strategy<Value = (u64, Vec<usize>)> {
        prop::sample::select(vec![2u64, 3, 5]).prop_flat_map(|q| (Just(q), prop::collection::vec(0..q as usize, 0..12)))
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]

        #[test]
        fn witt_words_match_representation((q, word) in word_strategy()) {
            let (w, rep) = witt(q);
            let got = w.normalize(&word).unwrap();
            let mut expected = FpMatrix::identity(p(q), q as usize);
            for &g in &word {
                expected = expected.mul(&rep[g]);
            }
            prop_assert_eq!(rep_of(&w, &rep, &got), expected);
        }

        #[test]
        fn split_words_agree((q, word) in word_strategy(), cut in 0usize..12) {
            let (w, _) = witt(q);
            let cut = cut.min(word.len());
            let whole = w.normalize(&word).unwrap();
            let split = w.multiply(&w.normalize(&word[..cut]).unwrap(), &w.normalize(&word[cut..]).unwrap());
            prop_assert_eq!(whole, split);
        }

        #[test]
        fn actions_compose((q, word) in word_strategy(), cut in 0usize..12) {
            let (w, _) = witt(q);
            let alg = w.algebra().clone();
            let ad = RestrictedModule::adjoint(&alg);
            let cut = cut.min(word.len());
            let a = w.normalize(&word[..cut]).unwrap();
            let b = w.normalize(&word[cut..]).unwrap();
            let v: Vec<u32> = (0..q as u32).collect();
            let lhs = w.act(&w.multiply(&a, &b), &ad, &v).unwrap();
            let rhs = w.act(&a, &ad, &w.act(&b, &ad, &v).unwrap()).unwrap();
            prop_assert_eq!(lhs, rhs);
            prop_assert_eq!(augmentation(&w.multiply(&a, &b)), p(q).mul(augmentation(&a), augmentation(&b)));
        }
    }

    #[test]
    fn witt_oracles_hold() {
        for (p, samples) in [(2, 0), (3, 0), (5, 100)] {
            let r = witt_oracle_check(Prime::new(p).unwrap(), samples).unwrap();
            assert!(r.passed(), "p={p}: {:?}", r.first_failure());
        }
    }
}
