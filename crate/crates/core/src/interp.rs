//! Restricted derivations, extensions of restricted modules and algebras, and
//! infinitesimal deformations, each checked against the restricted cochain complex.
//!
//! Sign conventions follow [`crate::rescochain`]: δ⁰ acts as minus the module
//! action, so a splitting perturbed by `-f` shifts the extracted cocycle by `δ⁰ f`,
//! and a perturbation `-ψ` of a section shifts (φ, ω) by `δ¹ ψ`.

use std::sync::Arc;

use crate::classical::ClassicalCochain;
use crate::error::{Error, Result};
use crate::field::{is_zero, unit_vector, Prime};
use crate::gmod::RestrictedModule;
use crate::liealg::{RestrictedLieAlgebra, EXHAUSTIVE_BOUND};
use crate::linalg::{FpMatrix, Subspace};
use crate::report::{Check, Report};
use crate::rescochain::{
    c2_dim, delta0_matrix, delta1, delta1_matrix, delta2, restricted_cohomology, supports, Cochain2,
};
use crate::sample::{all_vectors, space_size, Sampler};

/// Restricted derivations as n×n matrices; the coordinate of D_{a,l} (row a,
/// column l) is `l * n + a`, which is also the coordinate of ψ(e_l)_a for a
/// 1-cochain with adjoint coefficients.
#[derive(Debug, Clone)]
pub struct DerivationSpace {
    pub basis: Subspace,
    pub inner: Subspace,
    /// False when condition (ii) was imposed on a sample instead of the whole algebra.
    pub exhaustive: bool,
}

impl DerivationSpace {
    pub fn dim(&self) -> usize {
        self.basis.dim()
    }

    pub fn outer_dim(&self) -> usize {
        self.basis.dim() - self.inner.dim()
    }

    pub fn contains(&self, d: &FpMatrix) -> bool {
        self.basis.contains(&matrix_coordinates(d))
    }
}

pub fn matrix_coordinates(d: &FpMatrix) -> Vec<u32> {
    (0..d.cols()).flat_map(|l| d.column(l)).collect()
}

/// Solve D[e_i, e_j] = [e_i, D e_j] + [D e_i, e_j] on basis pairs and
/// D(g^[p]) = (ad g)^{p-1} D(g) for every g of the algebra (or a sample of it
/// when p^n exceeds the exhaustive bound).
pub fn restricted_derivations(alg: &RestrictedLieAlgebra) -> Result<DerivationSpace> {
    let (n, p) = (alg.dim(), alg.p());
    let var = |a: usize, l: usize| l * n + a;
    let mut rows: Vec<Vec<u32>> = Vec::new();
    let ads: Vec<FpMatrix> = (0..n).map(|i| alg.ad_matrix(&unit_vector(n, i))).collect();
    for i in 0..n {
        for j in i + 1..n {
            let c = alg.structure(i, j);
            for k in 0..n {
                let mut row = vec![0; n * n];
                for (l, &v) in c.iter().enumerate() {
                    row[var(k, l)] = p.add(row[var(k, l)], v);
                }
                for a in 0..n {
                    row[var(a, j)] = p.sub(row[var(a, j)], ads[i].get(k, a));
                    row[var(a, i)] = p.add(row[var(a, i)], ads[j].get(k, a));
                }
                rows.push(row);
            }
        }
    }
    let elements = alg.test_elements("restricted derivations");
    let exhaustive = space_size(p, n).is_some_and(|s| s <= EXHAUSTIVE_BOUND);
    for g in &elements {
        let v = alg.p_power(g)?;
        let a = alg.ad_matrix(g).pow(p.get() as u64 - 1);
        for k in 0..n {
            let mut row = vec![0; n * n];
            for l in 0..n {
                row[var(k, l)] = p.add(row[var(k, l)], v[l]);
                for x in 0..n {
                    let c = p.mul(a.get(k, x), g[l]);
                    row[var(x, l)] = p.sub(row[var(x, l)], c);
                }
            }
            rows.push(row);
        }
    }
    let system = FpMatrix::from_row_vectors(p, n * n, &rows);
    let inner_vectors: Vec<Vec<u32>> = ads.iter().map(matrix_coordinates).collect();
    Ok(DerivationSpace { basis: system.nullspace(), inner: Subspace::span(p, n * n, &inner_vectors), exhaustive })
}

/// Compare the derivation space with the restricted cochains in the adjoint module.
pub fn derivation_check(alg: &Arc<RestrictedLieAlgebra>) -> Result<(DerivationSpace, Report)> {
    let der = restricted_derivations(alg)?;
    let adjoint = RestrictedModule::adjoint(alg);
    let mut report = Report::new();
    let n = alg.dim();
    let witness = (0..n).find(|&i| !der.contains(&alg.ad_matrix(&unit_vector(n, i))));
    report.push(Check::from_witness("ad lies in Der_res", witness.map(|i| format!("ad e{i}"))));
    let z1 = delta1_matrix(&adjoint).nullspace();
    report.push(Check::from_witness(
        "Der_res equals Z1",
        (z1 != der.basis).then(|| format!("dim Der_res = {}, dim Z1 = {}", der.dim(), z1.dim())),
    ));
    let b1 = delta0_matrix(&adjoint).column_space();
    report.push(Check::from_witness(
        "ad equals B1",
        (b1 != der.inner).then(|| format!("dim ad = {}, dim B1 = {}", der.inner.dim(), b1.dim())),
    ));
    let h1 = restricted_cohomology(&adjoint, 1)?.dim;
    report.push(Check::from_witness(
        "outer derivations equal H1",
        (h1 != der.outer_dim()).then(|| format!("Der_res/ad = {}, H1 = {h1}", der.outer_dim())),
    ));
    Ok((der, report))
}

/// E = N ⊕ M with g(n, m) = (g n, g m + ψ(g)(n)); N occupies the first coordinates.
/// No axioms are checked.
#[derive(Debug, Clone)]
pub struct ExtensionModule {
    pub module: RestrictedModule,
    pub n_dim: usize,
    pub m_dim: usize,
    pub report: Report,
}

fn psi_block(psi: &ClassicalCochain, i: usize, n_dim: usize, m_dim: usize, p: Prime) -> FpMatrix {
    let v = psi.value(&[i]);
    let mut out = FpMatrix::zeros(p, m_dim, n_dim);
    for j in 0..n_dim {
        for a in 0..m_dim {
            out.set(a, j, v[j * m_dim + a]);
        }
    }
    out
}

pub fn build_module_extension(
    n_mod: &RestrictedModule,
    m_mod: &RestrictedModule,
    psi: &ClassicalCochain,
) -> Result<RestrictedModule> {
    let alg = n_mod.algebra();
    if alg != m_mod.algebra() {
        return Err(Error::MixedAlgebras);
    }
    let (p, nd, md) = (alg.p(), n_mod.dim(), m_mod.dim());
    let expected = alg.dim() * nd * md;
    if psi.degree() != 1 || psi.coordinates().len() != expected {
        return Err(Error::DimensionMismatch { expected, found: psi.coordinates().len() });
    }
    let rho = (0..alg.dim())
        .map(|i| {
            let mut e = FpMatrix::zeros(p, nd + md, nd + md);
            e.set_block(0, 0, n_mod.rho(i));
            e.set_block(nd, nd, m_mod.rho(i));
            e.set_block(nd, 0, &psi_block(psi, i, nd, md, p));
            e
        })
        .collect();
    RestrictedModule::from_matrices_unchecked(alg.clone(), rho)
}

/// ψ(g)(n) = g ρ(n) - ρ(g n) for the splitting ρ(n) = (n, -f(n)), as a 1-cochain in Hom(N, M).
pub fn extract_module_cocycle(e: &RestrictedModule, n_mod: &RestrictedModule, f: &FpMatrix) -> ClassicalCochain {
    let alg = e.algebra();
    let (p, nd) = (alg.p(), n_mod.dim());
    let md = e.dim() - nd;
    let mut splitting = FpMatrix::zeros(p, nd + md, nd);
    splitting.set_block(0, 0, &FpMatrix::identity(p, nd));
    splitting.set_block(nd, 0, &f.scale(p.neg(1)));
    let mut psi = ClassicalCochain::zero(p, alg.dim(), nd * md, 1);
    for i in 0..alg.dim() {
        let diff = e.rho(i).mul(&splitting).sub(&splitting.mul(n_mod.rho(i)));
        let mut v = vec![0; nd * md];
        for j in 0..nd {
            for a in 0..md {
                v[j * md + a] = diff.get(nd + a, j);
            }
        }
        psi.set(&[i], &v);
    }
    psi
}

/// Build E from a cocycle, check it is a restricted module, and extract the cocycle
/// back under the canonical and a perturbed splitting.
pub fn module_extension_roundtrip(
    n_mod: &RestrictedModule,
    m_mod: &RestrictedModule,
    psi: &ClassicalCochain,
) -> Result<ExtensionModule> {
    let hom = RestrictedModule::hom(n_mod, m_mod)?;
    if !supports(&hom) {
        return Err(Error::UnsupportedPrime(hom.algebra().p().get()));
    }
    let e = build_module_extension(n_mod, m_mod, psi)?;
    if !delta1(&hom, psi).is_zero() {
        return Err(Error::NotACocycle);
    }
    let (p, nd, md) = (hom.algebra().p(), n_mod.dim(), m_mod.dim());
    let mut report = Report::new();
    report.extend(e.verify_module());

    let zero = FpMatrix::zeros(p, md, nd);
    let back = extract_module_cocycle(&e, n_mod, &zero);
    report.push(Check::from_witness(
        "canonical splitting returns the cocycle",
        (back != *psi).then(|| format!("{:?} != {:?}", back.coordinates(), psi.coordinates())),
    ));

    let mut sampler = Sampler::new(p, nd * md, "module extension splitting");
    let f_vec = sampler.vector(nd * md);
    let mut f = FpMatrix::zeros(p, md, nd);
    for j in 0..nd {
        for a in 0..md {
            f.set(a, j, f_vec[j * md + a]);
        }
    }
    let shifted = extract_module_cocycle(&e, n_mod, &f);
    let diff = p.vsub(shifted.coordinates(), psi.coordinates());
    let expected = delta0_matrix(&hom).mul_vec(&f_vec);
    report.push(Check::from_witness(
        "perturbed splitting shifts by a coboundary",
        (diff != expected).then(|| format!("difference {diff:?}, δ⁰f {expected:?}")),
    ));
    Ok(ExtensionModule { module: e, n_dim: nd, m_dim: md, report })
}

/// 𝔢 = 𝔥 ⊕ 𝔤 with 𝔥 strongly abelian; 𝔥 occupies the first coordinates.
#[derive(Debug, Clone)]
pub struct ExtensionAlgebra {
    pub algebra: RestrictedLieAlgebra,
    pub h_dim: usize,
    pub report: Report,
}

/// [(h, g), (h', g')] = (g h' - g' h + φ(g, g'), [g, g']) and (0, e_i)^[p] = (ω(e_i), e_i^[p]),
/// (h, 0)^[p] = 0. No axioms are checked.
pub fn build_algebra_extension(module: &RestrictedModule, c2: &Cochain2) -> Result<RestrictedLieAlgebra> {
    let alg = module.algebra();
    let (p, n, m) = (alg.p(), alg.dim(), module.dim());
    let d = m + n;
    let mut c = vec![vec![vec![0u32; d]; d]; d];
    for i in 0..n {
        for a in 0..m {
            let col = module.rho(i).column(a);
            for b in 0..m {
                c[m + i][a][b] = col[b];
                c[a][m + i][b] = p.neg(col[b]);
            }
        }
        for j in 0..n {
            let phi = c2.phi.on_basis(&[i, j]);
            c[m + i][m + j][..m].copy_from_slice(&phi);
            c[m + i][m + j][m..].copy_from_slice(alg.structure(i, j));
        }
    }
    let mut pi = vec![vec![0; d]; m];
    for i in 0..n {
        let mut v = c2.omega[i].clone();
        v.extend_from_slice(alg.pi(i));
        pi.push(v);
    }
    RestrictedLieAlgebra::from_parts_unchecked(p, c, pi)
}

/// (φ, ω) for the section σ(g) = (-ψ(g), g).
pub fn extract_algebra_cocycle(
    e: &RestrictedLieAlgebra,
    module: &RestrictedModule,
    psi: &ClassicalCochain,
) -> Result<Cochain2> {
    let alg = module.algebra();
    let (p, n, m) = (alg.p(), alg.dim(), module.dim());
    let sigma = |g: &[u32]| -> Vec<u32> {
        let mut v = p.vneg(&psi.eval(&[g]));
        v.extend_from_slice(g);
        v
    };
    let mut c2 = Cochain2::zero(module);
    for i in 0..n {
        let ei = unit_vector(n, i);
        for j in i + 1..n {
            let ej = unit_vector(n, j);
            let lhs = e.bracket(&sigma(&ei), &sigma(&ej))?;
            let rhs = sigma(alg.structure(i, j));
            c2.phi.set(&[i, j], &p.vsub(&lhs, &rhs)[..m]);
        }
        let lhs = e.p_power(&sigma(&ei))?;
        let rhs = sigma(alg.pi(i));
        c2.omega[i] = p.vsub(&lhs, &rhs)[..m].to_vec();
    }
    Ok(c2)
}

/// Build 𝔢 from a restricted 2-cocycle, check it is restricted, and extract the cocycle
/// back under the canonical and a perturbed section. `h_pi` is the p-operator on 𝔥,
/// which must be zero.
pub fn algebra_extension_roundtrip(
    module: &RestrictedModule,
    c2: &Cochain2,
    h_pi: &[Vec<u32>],
) -> Result<ExtensionAlgebra> {
    if h_pi.iter().any(|v| !is_zero(v)) {
        return Err(Error::NotStronglyAbelian);
    }
    if !supports(module) {
        return Err(Error::UnsupportedPrime(module.algebra().p().get()));
    }
    if !delta2(module, c2).is_zero() {
        return Err(Error::NotACocycle);
    }
    let alg = module.algebra();
    let (p, n, m) = (alg.p(), alg.dim(), module.dim());
    let e = build_algebra_extension(module, c2)?;
    let mut report = e.verify_restricted();

    let zero = ClassicalCochain::zero(p, n, m, 1);
    let back = extract_algebra_cocycle(&e, module, &zero)?;
    report.push(Check::from_witness(
        "canonical section returns the cocycle",
        (back != *c2).then(|| format!("{:?} != {:?}", back.to_vector(), c2.to_vector())),
    ));

    let mut sampler = Sampler::new(p, n * m, "algebra extension section");
    let psi = ClassicalCochain::from_vector(p, n, m, 1, sampler.vector(n * m));
    let shifted = extract_algebra_cocycle(&e, module, &psi)?;
    let diff = p.vsub(&shifted.to_vector(), &c2.to_vector());
    let expected = delta1(module, &psi).to_vector();
    report.push(Check::from_witness(
        "perturbed section shifts by a coboundary",
        (diff != expected).then(|| format!("difference {diff:?}, δ¹ψ {expected:?}")),
    ));
    Ok(ExtensionAlgebra { algebra: e, h_dim: m, report })
}

/// The 2n-dimensional algebra F[t]/(t²) ⊗ 𝔤 with basis e_0..e_{n-1}, t e_0..t e_{n-1},
/// [e_i, e_j] = [e_i, e_j] + t φ(e_i, e_j), [e_i, t e_j] = t [e_i, e_j], [t e_i, t e_j] = 0,
/// e_i^[p] = e_i^[p] + t ω(e_i) and (t e_i)^[p] = 0. No axioms are checked.
pub fn build_deformation(alg: &RestrictedLieAlgebra, c2: &Cochain2) -> Result<RestrictedLieAlgebra> {
    let n = alg.dim();
    let d = 2 * n;
    if c2.omega.len() != n {
        return Err(Error::DimensionMismatch { expected: n, found: c2.omega.len() });
    }
    let mut c = vec![vec![vec![0u32; d]; d]; d];
    for i in 0..n {
        for j in 0..n {
            let s = alg.structure(i, j);
            c[i][j][..n].copy_from_slice(s);
            c[i][j][n..].copy_from_slice(&c2.phi.on_basis(&[i, j]));
            c[i][n + j][n..].copy_from_slice(s);
            c[n + i][j][n..].copy_from_slice(alg.structure(i, j));
        }
    }
    let mut pi = Vec::with_capacity(d);
    for i in 0..n {
        let mut v = alg.pi(i).to_vec();
        v.extend_from_slice(&c2.omega[i]);
        pi.push(v);
    }
    pi.extend((0..n).map(|_| vec![0; d]));
    RestrictedLieAlgebra::from_parts_unchecked(alg.p(), c, pi)
}

#[derive(Debug, Clone)]
pub struct DeformationOutcome {
    /// The axiom report of the deformed algebra.
    pub restricted: Report,
    pub is_cocycle: bool,
}

impl DeformationOutcome {
    pub fn is_restricted(&self) -> bool {
        self.restricted.passed()
    }

    pub fn agrees(&self) -> bool {
        self.is_restricted() == self.is_cocycle
    }

    pub fn failing_axiom(&self) -> Option<&str> {
        self.restricted.first_failure().map(|c| c.name.as_str())
    }
}

/// Whether the infinitesimal deformation by `c2` (adjoint coefficients) is a restricted
/// Lie algebra, alongside the cocycle predicate δ²(c2) = 0.
pub fn deformation_check(alg: &Arc<RestrictedLieAlgebra>, c2: &Cochain2) -> Result<DeformationOutcome> {
    let adjoint = RestrictedModule::adjoint(alg);
    if !supports(&adjoint) {
        return Err(Error::UnsupportedPrime(alg.p().get()));
    }
    let deformed = build_deformation(alg, c2)?;
    Ok(DeformationOutcome { restricted: deformed.verify_restricted(), is_cocycle: delta2(&adjoint, c2).is_zero() })
}

/// For c2 = δ¹ψ, check that g -> g - t ψ(g), t g -> t g is an isomorphism from the
/// deformed algebra onto the trivial deformation.
pub fn deformation_equivalence(alg: &Arc<RestrictedLieAlgebra>, psi: &ClassicalCochain) -> Result<Report> {
    let adjoint = RestrictedModule::adjoint(alg);
    let (p, n) = (alg.p(), alg.dim());
    let c2 = delta1(&adjoint, psi);
    let deformed = build_deformation(alg, &c2)?;
    let trivial = build_deformation(alg, &Cochain2::zero(&adjoint))?;
    let phi_map = |x: &[u32]| -> Vec<u32> {
        let mut out = x.to_vec();
        let shift = psi.eval(&[&x[..n]]);
        for (k, v) in shift.iter().enumerate() {
            out[n + k] = p.sub(out[n + k], *v);
        }
        out
    };
    let mut report = Report::new();
    let mut witness = None;
    'pairs: for i in 0..2 * n {
        for j in 0..2 * n {
            let (x, y) = (unit_vector(2 * n, i), unit_vector(2 * n, j));
            let lhs = phi_map(&deformed.bracket(&x, &y)?);
            let rhs = trivial.bracket(&phi_map(&x), &phi_map(&y))?;
            if lhs != rhs {
                witness = Some(format!("basis pair ({i}, {j})"));
                break 'pairs;
            }
        }
    }
    report.push(Check::from_witness("bracket preserved", witness));
    let mut witness = None;
    for x in deformed.test_elements("deformation equivalence") {
        if phi_map(&deformed.p_power(&x)?) != trivial.p_power(&phi_map(&x))? {
            witness = Some(format!("{x:?}"));
            break;
        }
    }
    report.push(Check::from_witness("p-operator preserved", witness));
    Ok(report)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DeformationScan {
    pub tested: usize,
    pub cocycles: usize,
    pub agreements: usize,
    pub exhaustive: bool,
    /// First disagreeing cochain, in restricted cochain coordinates.
    pub counterexample: Option<Vec<u32>>,
}

/// Dimension limit for the exhaustive deformation scan.
pub const DEFORMATION_EXHAUSTIVE_DIM: usize = 12;

/// Cap on |C²| for the exhaustive deformation scan.
pub const DEFORMATION_EXHAUSTIVE_SIZE: u64 = 531_441;

/// Compare deformation_check with the cocycle predicate on all of C²(𝔤; 𝔤) when
/// dim C² ≤ 12 and |C²| ≤ 3^12, otherwise on `samples` cochains, half drawn from Z².
pub fn deformation_scan(alg: &Arc<RestrictedLieAlgebra>, samples: usize) -> Result<DeformationScan> {
    let adjoint = RestrictedModule::adjoint(alg);
    let p = alg.p();
    let dim = c2_dim(&adjoint);
    let exhaustive =
        dim <= DEFORMATION_EXHAUSTIVE_DIM && space_size(p, dim).is_some_and(|s| s <= DEFORMATION_EXHAUSTIVE_SIZE);
    let cochains: Vec<Vec<u32>> = if exhaustive {
        all_vectors(p, dim).collect()
    } else {
        let z2 = crate::rescochain::delta2_matrix(&adjoint).nullspace();
        let mut sampler = Sampler::new(p, dim, "deformation scan");
        (0..samples)
            .map(|k| {
                if k % 2 == 0 {
                    let coefs = sampler.vector(z2.dim());
                    let mut v = vec![0; dim];
                    for (c, b) in coefs.iter().zip(z2.basis()) {
                        p.axpy(&mut v, *c, b);
                    }
                    v
                } else {
                    sampler.vector(dim)
                }
            })
            .collect()
    };
    let mut scan = DeformationScan { tested: 0, cocycles: 0, agreements: 0, exhaustive, counterexample: None };
    for v in cochains {
        let c2 = Cochain2::from_vector(&adjoint, &v)?;
        let out = deformation_check(alg, &c2)?;
        scan.tested += 1;
        scan.cocycles += usize::from(out.is_cocycle);
        if out.agrees() {
            scan.agreements += 1;
        } else if scan.counterexample.is_none() {
            scan.counterexample = Some(v);
        }
    }
    Ok(scan)
}
