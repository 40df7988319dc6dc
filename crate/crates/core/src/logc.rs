use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

/// Nonzero complex number stored as `exp(log_abs + i arg)`, for values beyond f64 range.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LogComplex {
    pub log_abs: f64,
    /// Phase in `(-pi, pi]`.
    pub arg: f64,
}

pub(crate) fn wrap_phase(a: f64) -> f64 {
    let mut r = a.rem_euclid(2.0 * PI);
    if r > PI {
        r -= 2.0 * PI;
    }
    r
}

impl LogComplex {
    pub fn new(log_abs: f64, arg: f64) -> Self {
        Self { log_abs, arg: wrap_phase(arg) }
    }

    /// `exp(l)` for a complex logarithm `l`.
    pub fn from_log(l: Complex64) -> Self {
        Self::new(l.re, l.im)
    }

    pub fn from_complex(z: Complex64) -> Self {
        Self::new(z.norm().ln(), z.arg())
    }

    /// Principal logarithm.
    pub fn ln(&self) -> Complex64 {
        Complex64::new(self.log_abs, self.arg)
    }

    pub fn to_complex(&self) -> Complex64 {
        Complex64::from_polar(self.log_abs.exp(), self.arg)
    }

    pub fn abs(&self) -> f64 {
        self.log_abs.exp()
    }

    pub fn mul(&self, other: &Self) -> Self {
        Self::new(self.log_abs + other.log_abs, self.arg + other.arg)
    }

    pub fn div(&self, other: &Self) -> Self {
        Self::new(self.log_abs - other.log_abs, self.arg - other.arg)
    }

    pub fn conj(&self) -> Self {
        Self::new(self.log_abs, -self.arg)
    }
}
