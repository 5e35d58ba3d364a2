//! Classical and restricted cohomology of finite-dimensional restricted Lie
//! algebras over prime fields.

pub mod abelres;
pub mod classical;
pub mod corpus;
pub mod error;
pub mod field;
pub mod frontend;
pub mod gmod;
pub mod interp;
pub mod liealg;
pub mod linalg;
pub mod report;
pub mod rescochain;
pub mod sample;
pub mod ures;

pub use abelres::{
    build_resolution, resolution_homology, AbelianComplex, ChainBasisElement, ChainComplexSlice, Resolution,
};
pub use classical::{classical_cohomology, ClassicalCochain};
pub use error::{Error, Result};
pub use field::{binom_mod, fp_inv, verify_identities, FpScalar, Prime};
pub use frontend::{emit, parse, AlgebraFile};
pub use gmod::RestrictedModule;
pub use liealg::{infer_p_operator, witt_algebra, PeelOrder, RestrictedLieAlgebra};
pub use linalg::{quotient_dim, FpMatrix, Subspace};
pub use report::{Check, Report};
pub use rescochain::{restricted_cohomology, Cochain2, Cochain3};
pub use ures::{Ures, UresElement};
