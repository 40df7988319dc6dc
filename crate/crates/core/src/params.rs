use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// `log((3 + sqrt 5)/2)`, the end of the admissible u range.
pub const U_MAX: f64 = 0.9624236501192069;

/// Color level `N`, rank `n` and deformation `u` of one evaluation point.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ModelParams {
    #[serde(rename = "N")]
    pub big_n: u32,
    pub n: u32,
    pub u: f64,
}

impl ModelParams {
    pub fn new(big_n: u32, n: u32, u: f64) -> Result<Self> {
        if big_n == 0 {
            return Err(Error::InvalidParams("N must be positive".into()));
        }
        if n < 2 || n % 2 != 0 {
            return Err(Error::InvalidParams(format!("n = {n} must be even and at least 2")));
        }
        if !u.is_finite() || !(0.0..U_MAX).contains(&u) {
            return Err(Error::InvalidParams(format!("u = {u} must lie in [0, {U_MAX})")));
        }
        Ok(Self { big_n, n, u })
    }

    /// `N + n - 2`.
    pub fn level(&self) -> u64 {
        self.big_n as u64 + self.n as u64 - 2
    }

    pub fn level_f64(&self) -> f64 {
        self.level() as f64
    }

    /// `xi = 2 pi i + u`.
    pub fn xi(&self) -> Complex64 {
        Complex64::new(self.u, 2.0 * PI)
    }

    /// `gamma = (2 pi - i u) / (2 (N + n - 2))`.
    pub fn gamma(&self) -> Complex64 {
        Complex64::new(2.0 * PI, -self.u) / (2.0 * self.level_f64())
    }

    /// `log q = xi / (N + n - 2)`.
    pub fn q_exponent(&self) -> Complex64 {
        self.xi() / self.level_f64()
    }

    pub fn q(&self) -> Complex64 {
        self.q_exponent().exp()
    }

    /// `(n - 2) / (N + n - 2)`.
    pub fn shift(&self) -> f64 {
        (self.n as f64 - 2.0) / self.level_f64()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_bad_parameters() {
        assert!(ModelParams::new(0, 2, 0.5).is_err());
        assert!(ModelParams::new(5, 3, 0.5).is_err());
        assert!(ModelParams::new(5, 0, 0.5).is_err());
        assert!(ModelParams::new(5, 2, U_MAX).is_err());
        assert!(ModelParams::new(5, 2, -0.1).is_err());
        assert!(ModelParams::new(5, 2, f64::NAN).is_err());
        assert!(ModelParams::new(5, 2, 0.0).is_ok());
    }

    #[test]
    fn exponent_is_twice_i_gamma() {
        let p = ModelParams::new(37, 6, 0.4).unwrap();
        let d = p.q_exponent() - 2.0 * Complex64::i() * p.gamma();
        assert!(d.norm() < 1e-15);
        assert!(p.gamma().re > 0.0);
    }

    #[test]
    fn upper_bound_matches_golden_ratio_log() {
        assert!((U_MAX - ((3.0 + 5f64.sqrt()) / 2.0).ln()).abs() < 1e-15);
    }
}
