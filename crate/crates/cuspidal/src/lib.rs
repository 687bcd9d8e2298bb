//! Finite-scale laboratory for cusped spaces over relatively hyperbolic
//! group models.
//!
//! The crate materializes Cayley balls, combinatorial horoballs, and
//! cusped spaces as finite unit-length graphs, then measures metric
//! behavior on them: hyperbolicity estimates, contraction profiles of
//! paths, Morse gauge tables and their stability bounds, fellow-traveling
//! constants, weak hulls, and the logarithmic distortion of horoball
//! shortcuts. Everything is exact integer graph geometry; randomness only
//! chooses what to measure, never how.

pub mod cusped;
pub mod delta;
pub mod error;
pub mod graph;
pub mod groups;
pub mod horoball;
pub mod morse;
pub mod report;

pub use error::{Error, Result};
