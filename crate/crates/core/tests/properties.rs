//! Corpus-wide invariants as property tests over the public API.

use std::sync::{Arc, LazyLock};

use proptest::prelude::*;
use reslie::abelres::AbelianComplex;
use reslie::classical::{choose, delta_cl_matrix};
use reslie::corpus::{corpus, CorpusEntry};
use reslie::field::unit_vector;
use reslie::rescochain::{c2_dim, delta2_matrix, eval_omega_ordered};
use reslie::sample::Sampler;
use reslie::ures::{augmentation, monomial_at};
use reslie::{
    classical_cohomology, emit, parse, restricted_cohomology, AlgebraFile, Cochain2, PeelOrder, RestrictedModule, Ures,
    UresElement,
};

static CORPUS: LazyLock<Vec<CorpusEntry>> = LazyLock::new(corpus);

fn entry(i: usize) -> &'static CorpusEntry {
    &CORPUS[i % CORPUS.len()]
}

fn sampler(e: &CorpusEntry, seed: u64) -> Sampler {
    Sampler::new(e.algebra.p(), e.algebra.dim(), &format!("{} {seed}", e.name))
}

fn sparse_element(ures: &Ures, s: &mut Sampler, terms: usize) -> UresElement {
    let alg = ures.algebra();
    let (p, n) = (alg.p(), alg.dim());
    let size = ures.dim().unwrap() as usize;
    let mut u = UresElement::zero();
    for _ in 0..terms {
        u.add_term(p, &monomial_at(p, n, s.below(size)), s.scalar());
    }
    u
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn ad_of_p_power_is_pth_power_of_ad(i in 0usize..64, seed in 0u64..1_000_000) {
        let e = entry(i);
        let alg = &e.algebra;
        let g = sampler(e, seed).vector(alg.dim());
        let lhs = alg.ad_matrix(&alg.p_power(&g).unwrap());
        let rhs = alg.ad_matrix(&g).pow(alg.p().get() as u64);
        prop_assert_eq!(lhs, rhs, "{}", e.name);
    }

    #[test]
    fn p_power_is_semilinear(i in 0usize..64, seed in 0u64..1_000_000) {
        let e = entry(i);
        let (alg, p) = (&e.algebra, e.algebra.p());
        let mut s = sampler(e, seed);
        let (g, lambda) = (s.vector(alg.dim()), s.scalar());
        let lhs = alg.p_power(&p.scale(lambda, &g)).unwrap();
        let rhs = p.scale(p.pow(lambda, p.get() as u64), &alg.p_power(&g).unwrap());
        prop_assert_eq!(lambda, p.pow(lambda, p.get() as u64));
        prop_assert_eq!(lhs, rhs, "{}", e.name);
    }

    #[test]
    fn p_power_ignores_peel_order(i in 0usize..64, seed in 0u64..1_000_000) {
        let e = entry(i);
        let alg = &e.algebra;
        let g = sampler(e, seed).vector(alg.dim());
        prop_assert_eq!(
            alg.p_power_ordered(&g, PeelOrder::Ascending).unwrap(),
            alg.p_power_ordered(&g, PeelOrder::Descending).unwrap(),
            "{}", e.name
        );
    }

    #[test]
    fn ures_products_are_associative_and_compatible(i in 0usize..64, seed in 0u64..1_000_000) {
        let e = entry(i);
        let ures = Ures::new(e.algebra.clone());
        prop_assume!(ures.dim().is_some_and(|d| d <= 3125));
        let mut s = sampler(e, seed);
        let (a, b, c) = (sparse_element(&ures, &mut s, 3), sparse_element(&ures, &mut s, 3), sparse_element(&ures, &mut s, 2));
        let ab = ures.multiply(&a, &b);
        prop_assert_eq!(ures.multiply(&ab, &c), ures.multiply(&a, &ures.multiply(&b, &c)), "{}", e.name);
        let p = e.algebra.p();
        prop_assert_eq!(augmentation(&ab), p.mul(augmentation(&a), augmentation(&b)));
        let adj = RestrictedModule::adjoint(&e.algebra);
        let v = s.vector(adj.dim());
        let lhs = ures.act(&ab, &adj, &v).unwrap();
        let rhs = ures.act(&a, &adj, &ures.act(&b, &adj, &v).unwrap()).unwrap();
        prop_assert_eq!(lhs, rhs, "{}", e.name);
    }

    #[test]
    fn omega_ignores_peel_order_on_closed_forms(i in 0usize..64, seed in 0u64..1_000_000) {
        let e = entry(i);
        prop_assume!(e.algebra.p().get() <= 5);
        let (n, p) = (e.algebra.dim(), e.algebra.p());
        let mut s = sampler(e, seed);
        for (name, m) in e.modules() {
            let z2 = delta_cl_matrix(&m, 2).nullspace();
            let mut v = s.vector(c2_dim(&m));
            let mut phi = vec![0; z2.ambient_dim()];
            for b in z2.basis() {
                p.axpy(&mut phi, s.scalar(), b);
            }
            v[..phi.len()].copy_from_slice(&phi);
            let c2 = Cochain2::from_vector(&m, &v).unwrap();
            let g = s.vector(n);
            prop_assert_eq!(
                eval_omega_ordered(&m, &c2, &g, PeelOrder::Ascending).unwrap(),
                eval_omega_ordered(&m, &c2, &g, PeelOrder::Descending).unwrap(),
                "{} {}", e.name, name
            );
        }
    }

    #[test]
    fn emit_then_parse_is_identity(i in 0usize..64, seed in 0u64..1_000_000) {
        let e = entry(i);
        let mut file = AlgebraFile::from_algebra("sample", &e.algebra, None);
        let mut s = sampler(e, seed);
        let m = 1 + s.below(3);
        let rho = (0..e.algebra.dim())
            .map(|_| reslie::FpMatrix::from_columns(e.algebra.p(), m, &(0..m).map(|_| s.vector(m)).collect::<Vec<_>>()))
            .collect();
        let block = RestrictedModule::from_matrices_unchecked(e.algebra.clone(), rho).unwrap();
        file.add_module("noise", &block);
        file.add_module("adjoint_copy", &RestrictedModule::adjoint(&e.algebra));
        let text = emit(&file);
        let back = parse(&text).unwrap();
        prop_assert_eq!(&back, &file);
        prop_assert_eq!(emit(&back), text);
    }
}

#[test]
fn cohomology_is_additive_over_direct_sums() {
    for e in CORPUS.iter().filter(|e| e.algebra.p().get() <= 5) {
        let triv = RestrictedModule::trivial(&e.algebra);
        let adj = RestrictedModule::adjoint(&e.algebra);
        let sum = RestrictedModule::direct_sum(&triv, &adj).unwrap();
        for k in 0..=2 {
            let dim = |m: &RestrictedModule| restricted_cohomology(m, k).unwrap().dim;
            assert_eq!(dim(&sum), dim(&triv) + dim(&adj), "{} H{k}", e.name);
        }
    }
}

#[test]
fn classical_complex_squares_to_zero_through_degree_four() {
    for e in CORPUS.iter() {
        for (name, m) in e.modules() {
            for q in 0..4 {
                let d = delta_cl_matrix(&m, q + 1).mul(&delta_cl_matrix(&m, q));
                assert!(d.is_zero(), "{} {name} q = {q}", e.name);
            }
            assert_eq!(delta_cl_matrix(&m, 2).cols(), choose(e.algebra.dim(), 2) * m.dim());
        }
    }
}

#[test]
fn classical_h0_is_the_invariant_subspace() {
    for e in CORPUS.iter() {
        for (name, m) in e.modules() {
            let h0 = classical_cohomology(&m, 0).unwrap();
            let cycles = delta_cl_matrix(&m, 0).nullspace();
            assert_eq!(cycles, m.invariants(), "{} {name}", e.name);
            assert_eq!(h0.dim, m.invariants().dim(), "{} {name}", e.name);
        }
    }
}

#[test]
fn restricted_h2_cocycles_contain_coboundaries() {
    for e in CORPUS.iter() {
        for (name, m) in e.modules() {
            let z2 = delta2_matrix(&m).nullspace();
            let h2 = restricted_cohomology(&m, 2).unwrap();
            assert!(z2.contains_subspace(&h2.homology.boundaries), "{} {name}", e.name);
            assert_eq!(z2, h2.homology.cycles, "{} {name}", e.name);
        }
    }
}

#[test]
fn chain_dimensions_match_the_closed_formula() {
    for e in CORPUS.iter().filter(|e| e.algebra.is_abelian()) {
        let complex = AbelianComplex::new(Arc::clone(&e.algebra)).unwrap();
        let (n, p) = (e.algebra.dim(), e.algebra.p().get() as usize);
        let pn = p.pow(n as u32);
        for k in 0..p {
            let formula: usize = (0..=k / 2).map(|t| choose(n + t - 1, t) * choose(n, k - 2 * t)).sum::<usize>() * pn;
            assert_eq!(complex.chain_dim(k), formula, "{} k = {k}", e.name);
            assert_eq!(complex.basis(k).unwrap().len(), formula, "{} k = {k}", e.name);
        }
    }
}

#[test]
fn adjoint_generators_act_by_ad() {
    for e in CORPUS.iter() {
        let adj = RestrictedModule::adjoint(&e.algebra);
        let ures = Ures::new(e.algebra.clone());
        let n = e.algebra.dim();
        for i in 0..n {
            let x = unit_vector(n, i);
            assert_eq!(ures.action_matrix(&ures.generator(i), &adj).unwrap(), e.algebra.ad_matrix(&x), "{}", e.name);
        }
    }
}
