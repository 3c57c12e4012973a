//! Stacky fans, height-one lattice polytopes, Ehrhart data and `K_0` ranks
//! of toric stacks.

mod fan;
mod k0;
mod polytope;

use thiserror::Error;

use crate::git::{GitError, SupportSet};
use crate::lattice::LatticeError;

pub use fan::{chamber_fan, stacky_fan_to_weights, weights_to_stacky_fan, StackyFan};
pub use k0::{height_one_rays, k0_presentation, k0_rank, polytope_from_cone_section, K0Presentation};
pub use polytope::{affine_chart, interpolate_at_naturals, EhrhartData, Facet, LatticePolytope, VertexOrder};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ToricError {
    #[error("torsion in the character group is not supported here")]
    Torsion,
    #[error("vectors span rank {rank}, expected {expected}")]
    NotSpanning { rank: usize, expected: usize },
    #[error("cone {0} is not pointed")]
    NotPointed(SupportSet),
    #[error("ray {0} lies in no cone")]
    UnusedRay(usize),
    #[error("vector has length {found}, expected {expected}")]
    RayShape { expected: usize, found: usize },
    #[error("ray index {index} out of range for {len} rays")]
    IndexOutOfRange { index: usize, len: usize },
    #[error("rays do not lie on a common height-one hyperplane")]
    NotGorenstein,
    #[error("polytope has dimension {dim} in ambient dimension {ambient}")]
    Degenerate { dim: usize, ambient: usize },
    #[error("polytope has no points")]
    EmptyPolytope,
    #[error("vertex order is not a permutation of the vertices")]
    InvalidOrder,
    #[error("no support is semistable for this character")]
    EmptyChamber,
    #[error("integer does not fit in 64 bits")]
    Overflow,
    #[error("internal consistency check failed: {0}")]
    Inconsistent(String),
    #[error(transparent)]
    Git(#[from] GitError),
    #[error(transparent)]
    Lattice(#[from] LatticeError),
}
