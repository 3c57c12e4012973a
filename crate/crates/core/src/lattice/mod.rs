//! Exact integer and rational linear algebra: Smith and Hermite normal
//! forms, kernel lattices, and linear feasibility with certificates.
//!
//! Nothing in here touches floating point.

mod cone;
mod feasibility;
mod hermite;
pub mod matrix;
mod simplex;
mod snf;

use thiserror::Error;

pub use cone::{cone_contains, verify_cone_certificate};
pub use feasibility::{
    feasibility, feasibility_with, integral_witness, verify_feasibility, Constraint,
    FeasibilityCertificate, Method, Relation, Verdict, FOURIER_MOTZKIN_MAX_DIM,
};
pub use hermite::{complete_to_unimodular, hermite_basis, hermite_with_transform, lattice_kernel, saturate};
pub use matrix::IntMatrix;
pub use simplex::find_nonnegative_solution;
pub use snf::{smith_normal_form, SmithForm};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum LatticeError {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("matrix is {rows}x{cols}, expected square")]
    NotSquare { rows: usize, cols: usize },
    #[error("matrix is singular")]
    Singular,
    #[error("matrix is not unimodular")]
    NotUnimodular,
    #[error("vector is not primitive")]
    NotPrimitive,
    #[error("certificate failed exact re-verification")]
    CertificateRejected,
}
