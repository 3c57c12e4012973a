pub mod lattice;
pub mod io;
pub mod git;
pub mod toric;
pub mod semigroup;
pub mod derived;
