//! Colored SU(n) invariant of the figure-eight knot: exact evaluation, quantum
//! dilogarithm representation and saddle-point asymptotics.

pub mod asymptotic;
pub mod error;
pub mod harness;
pub mod invariant;
pub mod logc;
pub mod numerics;
pub mod params;
pub mod polylog;
pub mod qdilog;
pub mod saddle;

pub use error::{Error, Result};
pub use logc::LogComplex;
pub use num_complex::Complex64;
pub use params::{ModelParams, U_MAX};
