//! Exact symbolic computation for unital associative pseudoalgebras over the
//! enveloping algebra of a finite-dimensional Lie algebra.
//!
//! Everything is computed over the rationals with no floating point and no
//! tolerances: equality of elements means equality of every coefficient.

pub mod error;
pub mod scalar;
pub mod multiindex;
pub mod linalg;
pub mod lie;
pub mod hopf;
pub mod dual;
pub mod par;
pub mod sample;
pub mod construct;
pub mod pseudo;
pub mod annih;
pub mod classify;
pub mod reps;

pub use error::Error;
