//! Endomorphism algebras of Young permutation modules of symmetric groups.
//!
//! The crate builds `End_{Sym(n)}(ℤΩ)` for a Young `Sym(n)`-set `Ω` in its
//! orbit-sum basis, constructs and checks a cell datum for it with exact
//! integer lattice computations, and decides quasi-heredity in positive
//! characteristic through p-dominance of partitions.

pub mod celldatum;
pub mod classify;
pub mod endoalgebra;
pub mod error;
pub mod lattice;
pub mod partitions;
pub mod pdominance;
pub mod youngset;

pub use error::{Error, Result};
pub use partitions::{Partition, Prime};
