//! Multiqubit entanglement tangles, heuristic convex roofs and the CKW,
//! strong (SM), weighted strong (WSM) and maximum residual strong (MRSM)
//! monogamy inequalities.
//!
//! Qubit 0 is the most significant bit of a computational-basis index and is
//! the focus qubit of every monogamy inequality unless stated otherwise.

pub mod convexroof;
pub mod error;
pub mod families;
pub mod linalg;
pub mod measures;
pub mod monogamy;

pub use error::{Error, Result};
pub use num_complex::Complex64;
