//! Character bookkeeping for Koszul complexes, generator saturation and
//! tilting schedules.

mod koszul;
mod saturation;
mod schedule;

use thiserror::Error;

use crate::git::{Character, GitError};
use crate::lattice::LatticeError;

pub use koszul::{
    exactness_eligible, koszul_characters, koszul_characters_with, positive_set,
    KoszulCharacterComplex, KoszulConvention, KoszulTerm,
};
pub use saturation::{
    default_lambda_pool, replay_saturation, saturate_generators, saturate_generators_with,
    ComplexEnd, SaturationOptions, SaturationState, SaturationStep, Window,
};
pub use schedule::{tilting_schedule, ScheduledCharacter};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum DerivedError {
    #[error("one-parameter subgroup must be nonzero")]
    ZeroLambda,
    #[error("one-parameter subgroup has length {found}, expected {expected}")]
    LambdaShape { expected: usize, found: usize },
    #[error("window has dimension {found}, expected {expected}")]
    WindowShape { expected: usize, found: usize },
    #[error("window is empty")]
    EmptyWindow,
    #[error("seed character {0} lies outside the window")]
    SeedOutsideWindow(Character),
    #[error("λ = {0:?} does not pair negatively with χ")]
    Ineligible(Vec<i64>),
    #[error("scan order is not a permutation of the window")]
    ScanOrder,
    #[error("gap contract violated: {0}")]
    Gap(String),
    #[error("integer does not fit in 64 bits")]
    Overflow,
    #[error(transparent)]
    Git(#[from] GitError),
    #[error(transparent)]
    Lattice(#[from] LatticeError),
}
