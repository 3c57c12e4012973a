//! Combinatorics of linear representations of `G = torus × finite abelian`:
//! unimodularity, genericity, unstable strata and the NCCR criterion.

mod criterion;
mod hypotheses;
mod strata;
mod weights;

use thiserror::Error;

use crate::lattice::LatticeError;

pub use criterion::{nccr_criterion, CriterionReport, NccrVerdict};
pub use hypotheses::{is_generic, is_unimodular, GenericityReport, LonelyWeight};
pub use strata::{
    chi_degeneracy, fiber_dimension_bound, is_chi_generic, is_support_semistable,
    unstable_dimension, unstable_witness, FiberBound, UnstableDimension,
};
pub use weights::{Character, SupportSet, WeightConfig};

/// Largest number of weights accepted by the subset enumerations.
pub const MAX_ENUMERATED_WEIGHTS: usize = 24;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GitError {
    #[error("{part} part has length {found}, expected {expected}")]
    CharacterShape {
        expected: usize,
        found: usize,
        part: &'static str,
    },
    #[error("torsion order {0} is not at least 2")]
    InvalidTorsionOrder(i64),
    #[error("coordinate index {index} out of range for {len} weights")]
    IndexOutOfRange { index: usize, len: usize },
    #[error("{found} weights exceed the enumeration limit of {limit}")]
    TooManyWeights { found: usize, limit: usize },
    #[error(transparent)]
    Lattice(#[from] LatticeError),
}

pub(crate) fn check_enumerable(w: &WeightConfig) -> Result<(), GitError> {
    if w.len() > MAX_ENUMERATED_WEIGHTS {
        return Err(GitError::TooManyWeights {
            found: w.len(),
            limit: MAX_ENUMERATED_WEIGHTS,
        });
    }
    Ok(())
}
