//! Computational topology of the space of self-adjoint operators filtered by
//! ground-state multiplicity: the Schubert-model cochain complex of the
//! filtration verified exactly over GF(2) and the integers, together with the
//! numerical side — eigenvalue-gap strata, the Berry curvature form of the
//! lowest-k eigenbundle, Chern numbers over closed surfaces of operators and
//! Stiefel-Whitney holonomies over loops.

pub mod curvature;
pub mod error;
pub mod families;
pub mod homalg;
pub mod linalg;
pub mod schubert;
pub mod spectral;
pub mod strata_complex;

pub use error::{Error, Result};
