//! Contour quadrature, cubic roots and numerical differentiation.

pub mod diff;
pub mod quadrature;
pub mod roots;

pub use diff::{differentiate1, differentiate2, extrapolate_to_zero};
pub use quadrature::{integrate_path, ContourPath, Integral, QuadratureConfig, Segment};
pub use roots::{solve_cubic, RootSolveResult};
