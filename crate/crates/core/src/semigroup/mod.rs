//! Invariant monoids, covariant modules, integer polynomials and matrix
//! factorizations, and squarefree monomial ideals.

mod ideal;
mod monoid;
mod poly;

use thiserror::Error;

use crate::git::GitError;
use crate::lattice::LatticeError;
use crate::toric::ToricError;

pub use ideal::{
    cokernel_unstable_check, monomial_ideal_components, squarefree_monomial, CokernelReport,
    ComponentCheck,
};
pub use monoid::{
    covariant_generators, covariant_generators_with, for_each_exponent, hilbert_degree_bound,
    invariant_hilbert_basis, invariant_lattice, CovariantConvention, HilbertBasis,
};
pub use poly::{
    grevlex_cmp, poly_mat_mul, verify_matrix_factorization, FactorizationReport, PolyMatrix,
    SparsePolynomial,
};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SemigroupError {
    #[error("polynomials use different variable lists")]
    VariableMismatch,
    #[error("parse error at byte {position}: {message}")]
    Parse { position: usize, message: String },
    #[error("shape mismatch: {0}")]
    Shape(String),
    #[error("generator {0} is not squarefree")]
    NotSquarefree(usize),
    #[error("degree bound must be at least 1")]
    ZeroBound,
    #[error("integer does not fit in 64 bits")]
    Overflow,
    #[error("internal consistency check failed: {0}")]
    Inconsistent(String),
    #[error(transparent)]
    Git(#[from] GitError),
    #[error(transparent)]
    Toric(#[from] ToricError),
    #[error(transparent)]
    Lattice(#[from] LatticeError),
}
