//! Combinatorial dynamics on the face-poset model of the real line.
//!
//! The crate covers finite posets and the line windows `{x_lo, ..., x_hi}`,
//! order complexes with integral and rational homology, continuous
//! self-maps of line windows, and Vietoris-like multivalued maps with their
//! Lefschetz numbers, period spectra and invariant sets.

pub mod complex;
pub mod dot;
pub mod error;
pub mod format;
pub mod homology;
pub mod linalg;
pub mod line;
pub mod matrix;
pub mod multi;
pub mod poset;
pub mod single;
pub mod snf;
pub mod verify;

pub use error::{Error, Result};
