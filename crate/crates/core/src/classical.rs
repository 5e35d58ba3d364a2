//! The Chevalley-Eilenberg complex Hom(Λ^q g, M).
//!
//! A q-cochain is stored by its values on increasing index tuples, listed in
//! lexicographic order, with the module index fastest: the coordinate of
//! component `a` on tuple number `r` is `r * m + a`.
//!
//! The coboundary is
//!
//! ```text
//! δφ(g_1, ..., g_{q+1}) = sum_{s<t} (-1)^{s+t-1} φ([g_s, g_t], g_1, ..^s..^t.., g_{q+1})
//!                       + sum_s (-1)^s g_s φ(g_1, ..^s.., g_{q+1})
//! ```

use crate::error::Result;
use crate::field::Prime;
use crate::gmod::RestrictedModule;
use crate::linalg::{homology, FpMatrix, Homology};

/// C(n, k) as a machine integer, 0 when k > n.
pub fn choose(n: usize, k: usize) -> usize {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    (0..k).fold(1, |acc, i| acc * (n - i) / (i + 1))
}

/// Increasing q-tuples from 0..n in lexicographic order.
pub fn combinations(n: usize, q: usize) -> Vec<Vec<usize>> {
    let total = choose(n, q);
    (0..total).map(|r| unrank_combination(n, q, r)).collect()
}

/// Position of an increasing tuple in the lexicographic list.
pub fn rank_combination(n: usize, tuple: &[usize]) -> usize {
    let q = tuple.len();
    let mut rank = 0;
    let mut next = 0;
    for (pos, &c) in tuple.iter().enumerate() {
        for v in next..c {
            rank += choose(n - 1 - v, q - 1 - pos);
        }
        next = c + 1;
    }
    rank
}

pub fn unrank_combination(n: usize, q: usize, mut rank: usize) -> Vec<usize> {
    let mut out = Vec::with_capacity(q);
    let mut v = 0;
    for pos in 0..q {
        loop {
            let block = choose(n - 1 - v, q - 1 - pos);
            if rank < block {
                break;
            }
            rank -= block;
            v += 1;
        }
        out.push(v);
        v += 1;
    }
    out
}

/// Sort in place; `None` on a repeated index, otherwise whether the permutation was odd.
pub fn sort_with_sign(idx: &mut [usize]) -> Option<bool> {
    let mut odd = false;
    for i in 1..idx.len() {
        let mut j = i;
        while j > 0 && idx[j - 1] > idx[j] {
            idx.swap(j - 1, j);
            odd = !odd;
            j -= 1;
        }
    }
    if idx.windows(2).any(|w| w[0] == w[1]) {
        return None;
    }
    Some(odd)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ClassicalCochain {
    q: usize,
    n: usize,
    m: usize,
    p: Prime,
    values: Vec<u32>,
}

impl ClassicalCochain {
    pub fn zero(p: Prime, n: usize, m: usize, q: usize) -> ClassicalCochain {
        ClassicalCochain { q, n, m, p, values: vec![0; choose(n, q) * m] }
    }

    pub fn from_vector(p: Prime, n: usize, m: usize, q: usize, values: Vec<u32>) -> ClassicalCochain {
        assert_eq!(values.len(), choose(n, q) * m, "cochain coordinate length");
        ClassicalCochain { q, n, m, p, values }
    }

    pub fn degree(&self) -> usize {
        self.q
    }

    pub fn coordinates(&self) -> &[u32] {
        &self.values
    }

    pub fn into_coordinates(self) -> Vec<u32> {
        self.values
    }

    pub fn is_zero(&self) -> bool {
        self.values.iter().all(|&v| v == 0)
    }

    /// Value on an increasing tuple.
    pub fn value(&self, tuple: &[usize]) -> &[u32] {
        let r = rank_combination(self.n, tuple);
        &self.values[r * self.m..(r + 1) * self.m]
    }

    pub fn set(&mut self, tuple: &[usize], v: &[u32]) {
        let r = rank_combination(self.n, tuple);
        self.values[r * self.m..(r + 1) * self.m].copy_from_slice(v);
    }

    /// Value on basis vectors in any order, with the skew sign.
    pub fn on_basis(&self, idx: &[usize]) -> Vec<u32> {
        let mut sorted = idx.to_vec();
        match sort_with_sign(&mut sorted) {
            None => vec![0; self.m],
            Some(false) => self.value(&sorted).to_vec(),
            Some(true) => self.p.vneg(self.value(&sorted)),
        }
    }

    /// Value on arbitrary algebra elements, by multilinear expansion.
    pub fn eval(&self, args: &[&[u32]]) -> Vec<u32> {
        assert_eq!(args.len(), self.q, "argument count");
        let mut out = vec![0; self.m];
        let mut idx = Vec::with_capacity(self.q);
        self.expand(args, 1, &mut idx, &mut out);
        out
    }

    fn expand(&self, args: &[&[u32]], coeff: u32, idx: &mut Vec<usize>, out: &mut Vec<u32>) {
        let Some((first, rest)) = args.split_first() else {
            let v = self.on_basis(idx);
            self.p.axpy(out, coeff, &v);
            return;
        };
        for (i, &c) in first.iter().enumerate() {
            if c == 0 || idx.contains(&i) {
                continue;
            }
            idx.push(i);
            self.expand(rest, self.p.mul(coeff, c), idx, out);
            idx.pop();
        }
    }
}

/// Dimension of C^q_cl: C(n, q) * m.
pub fn cochain_dim(module: &RestrictedModule, q: usize) -> usize {
    choose(module.algebra().dim(), q) * module.dim()
}

/// The matrix of δ: C^q_cl -> C^{q+1}_cl.
pub fn delta_cl_matrix(module: &RestrictedModule, q: usize) -> FpMatrix {
    let alg = module.algebra();
    let (n, m, p) = (alg.dim(), module.dim(), alg.p());
    let mut out = FpMatrix::zeros(p, choose(n, q + 1) * m, choose(n, q) * m);
    for (row, target) in combinations(n, q + 1).iter().enumerate() {
        let r0 = row * m;
        // Positions s, t below are 0-based; (-1)^{s+t-1} for 1-based indices is (-1)^{s+t+1}.
        for s in 0..=q {
            for t in s + 1..=q {
                let rest: Vec<usize> =
                    target.iter().enumerate().filter(|&(k, _)| k != s && k != t).map(|(_, &v)| v).collect();
                let sign = p.sign(s + t + 1);
                for (l, &c) in alg.structure(target[s], target[t]).iter().enumerate() {
                    if c == 0 {
                        continue;
                    }
                    let mut idx = vec![l];
                    idx.extend(&rest);
                    let Some(odd) = sort_with_sign(&mut idx) else { continue };
                    let mut coef = p.mul(sign, c);
                    if odd {
                        coef = p.neg(coef);
                    }
                    let c0 = rank_combination(n, &idx) * m;
                    for a in 0..m {
                        out.add_at(r0 + a, c0 + a, coef);
                    }
                }
            }
            let rest: Vec<usize> = target.iter().enumerate().filter(|&(k, _)| k != s).map(|(_, &v)| v).collect();
            let c0 = rank_combination(n, &rest) * m;
            out.add_block(r0, c0, p.sign(s + 1), module.rho(target[s]));
        }
    }
    out
}

pub fn delta_cl(module: &RestrictedModule, phi: &ClassicalCochain) -> ClassicalCochain {
    let alg = module.algebra();
    let v = delta_cl_matrix(module, phi.q).mul_vec(&phi.values);
    ClassicalCochain::from_vector(alg.p(), alg.dim(), module.dim(), phi.q + 1, v)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ClassicalCohomology {
    pub degree: usize,
    pub dim: usize,
    pub representatives: Vec<ClassicalCochain>,
    pub homology: Homology,
}

pub fn classical_cohomology(module: &RestrictedModule, q: usize) -> Result<ClassicalCohomology> {
    let alg = module.algebra();
    let (n, m, p) = (alg.dim(), module.dim(), alg.p());
    let incoming = match q {
        0 => FpMatrix::zeros(p, m, 0),
        _ => delta_cl_matrix(module, q - 1),
    };
    let outgoing = delta_cl_matrix(module, q);
    let h = homology(&incoming, &outgoing)?;
    let representatives =
        h.representatives.iter().map(|v| ClassicalCochain::from_vector(p, n, m, q, v.clone())).collect();
    Ok(ClassicalCohomology { degree: q, dim: h.dim(), representatives, homology: h })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::liealg::{witt_algebra, RestrictedLieAlgebra};
    use crate::sample::Sampler;
    use proptest::prelude::*;
    use std::sync::Arc;

    fn p(n: u64) -> Prime {
        Prime::new(n).unwrap()
    }

    fn heisenberg(q: u64) -> Arc<RestrictedLieAlgebra> {
        let z = vec![0, 0, 0];
        let c = vec![
            vec![z.clone(), vec![0, 0, 1], z.clone()],
            vec![vec![0, 0, q as u32 - 1], z.clone(), z.clone()],
            vec![z.clone(), z.clone(), z.clone()],
        ];
        Arc::new(RestrictedLieAlgebra::new(p(q), c, vec![z.clone(), z.clone(), z]).unwrap())
    }

    #[test]
    fn ranking_round_trips() {
        for n in 0..7 {
            for q in 0..=n {
                let all = combinations(n, q);
                assert_eq!(all.len(), choose(n, q));
                assert!(all.windows(2).all(|w| w[0] < w[1]));
                for (r, t) in all.iter().enumerate() {
                    assert_eq!(rank_combination(n, t), r);
                }
            }
        }
    }

    #[test]
    fn sort_signs() {
        assert_eq!(sort_with_sign(&mut [2, 0, 1]), Some(false));
        assert_eq!(sort_with_sign(&mut [1, 0, 2]), Some(true));
        assert_eq!(sort_with_sign(&mut [1, 1]), None);
    }

    #[test]
    fn abelian_trivial_is_zero() {
        let alg = Arc::new(RestrictedLieAlgebra::abelian(p(3), vec![vec![0, 0, 0]; 3]).unwrap());
        let f = RestrictedModule::trivial_of_dim(&alg, 2);
        for q in 0..4 {
            assert!(delta_cl_matrix(&f, q).is_zero());
            assert_eq!(classical_cohomology(&f, q).unwrap().dim, choose(3, q) * 2);
        }
    }

    #[test]
    fn degree_zero_stacks_negative_actions() {
        let (w, _) = witt_algebra(p(5));
        let ad = RestrictedModule::adjoint(&Arc::new(w));
        let d0 = delta_cl_matrix(&ad, 0);
        for i in 0..5 {
            for r in 0..5 {
                for c in 0..5 {
                    assert_eq!(d0.get(i * 5 + r, c), p(5).neg(ad.rho(i).get(r, c)));
                }
            }
        }
    }

    #[test]
    fn low_degree_formulas() {
        // δφ(g, h) = -gφ(h) + hφ(g) + φ([gh]) at sampled points.
        let (w, _) = witt_algebra(p(5));
        let w = Arc::new(w);
        let ad = RestrictedModule::adjoint(&w);
        let q = p(5);
        let mut s = Sampler::new(q, 5, "low degree");
        for _ in 0..20 {
            let phi = ClassicalCochain::from_vector(q, 5, 5, 1, s.vector(25));
            let d = delta_cl(&ad, &phi);
            let (g, h) = (s.vector(5), s.vector(5));
            let gh = w.bracket(&g, &h).unwrap();
            let mut expected = q.vneg(&ad.act(&g, &phi.eval(&[&h])));
            expected = q.vadd(&expected, &ad.act(&h, &phi.eval(&[&g])));
            expected = q.vadd(&expected, &phi.eval(&[&gh]));
            assert_eq!(d.eval(&[&g, &h]), expected);

            let phi2 = ClassicalCochain::from_vector(q, 5, 5, 2, s.vector(50));
            let d = delta_cl(&ad, &phi2);
            let f = s.vector(5);
            let br = |x: &[u32], y: &[u32]| w.bracket(x, y).unwrap();
            let mut e = phi2.eval(&[&br(&g, &h), &f]);
            e = q.vsub(&e, &phi2.eval(&[&br(&g, &f), &h]));
            e = q.vadd(&e, &phi2.eval(&[&br(&h, &f), &g]));
            e = q.vsub(&e, &ad.act(&g, &phi2.eval(&[&h, &f])));
            e = q.vadd(&e, &ad.act(&h, &phi2.eval(&[&g, &f])));
            e = q.vsub(&e, &ad.act(&f, &phi2.eval(&[&g, &h])));
            assert_eq!(d.eval(&[&g, &h, &f]), e);
        }
    }

    #[test]
    fn heisenberg_first_cohomology() {
        for q in [2, 3, 5] {
            let f = RestrictedModule::trivial(&heisenberg(q));
            assert_eq!(classical_cohomology(&f, 1).unwrap().dim, 2);
        }
    }

    #[test]
    fn witt_first_cohomology_trivial() {
        let (w, _) = witt_algebra(p(5));
        let f = RestrictedModule::trivial(&Arc::new(w));
        assert_eq!(classical_cohomology(&f, 1).unwrap().dim, 0);
    }

    #[test]
    fn degree_zero_is_invariants() {
        for q in [2, 3, 5] {
            let (w, _) = witt_algebra(p(q));
            let w = Arc::new(w);
            for module in [RestrictedModule::adjoint(&w), RestrictedModule::trivial(&w)] {
                let h0 = classical_cohomology(&module, 0).unwrap();
                assert_eq!(h0.homology.cycles, module.invariants());
            }
        }
        let h = heisenberg(3);
        let ad = RestrictedModule::adjoint(&h);
        assert_eq!(classical_cohomology(&ad, 0).unwrap().dim, 1);
    }

    #[test]
    fn squares_vanish() {
        for q in [2u64, 3, 5] {
            let (w, _) = witt_algebra(p(q));
            let w = Arc::new(w);
            let ad = RestrictedModule::adjoint(&w);
            let dual = ad.dual();
            for module in [ad, dual, RestrictedModule::trivial(&w)] {
                for deg in 0..4 {
                    let sq = delta_cl_matrix(&module, deg + 1).mul(&delta_cl_matrix(&module, deg));
                    assert!(sq.is_zero(), "p = {q}, degree {deg}");
                }
            }
        }
    }

    proptest! {
        #[test]
        fn eval_is_skew(vals in prop::collection::vec(0u32..5, 30), g in prop::collection::vec(0u32..5, 5), h in prop::collection::vec(0u32..5, 5)) {
            let q = p(5);
            let phi = ClassicalCochain::from_vector(q, 5, 3, 2, vals);
            prop_assert_eq!(phi.eval(&[&g, &h]), q.vneg(&phi.eval(&[&h, &g])));
            prop_assert_eq!(phi.eval(&[&g, &g]), vec![0; 3]);
        }

        #[test]
        fn unrank_inverts_rank(n in 1usize..9, seed in 0usize..1000) {
            let q = seed % (n + 1);
            let r = seed % choose(n, q);
            prop_assert_eq!(rank_combination(n, &unrank_combination(n, q, r)), r);
        }
    }
}
