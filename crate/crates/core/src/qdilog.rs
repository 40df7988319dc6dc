//! Quantum dilogarithm `S_gamma(z)` as a contour integral over `C_R`.

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numerics::{integrate_path, ContourPath, QuadratureConfig};
use crate::params::ModelParams;

/// Arguments closer than this to the edge of the strip are refused.
pub const EDGE_MARGIN: f64 = 0.05;
const SINGULAR_RATIO_TOL: f64 = 1e-13;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GammaParam {
    pub gamma: Complex64,
    pub source: Option<ModelParams>,
}

impl GammaParam {
    pub fn from_params(p: &ModelParams) -> Self {
        Self { gamma: p.gamma(), source: Some(*p) }
    }

    pub fn from_value(gamma: Complex64) -> Result<Self> {
        if !(gamma.re > 0.0) || !gamma.im.is_finite() {
            return Err(Error::InvalidArgument(format!("gamma = {gamma} needs a positive real part")));
        }
        Ok(Self { gamma, source: None })
    }

    /// Largest admissible semicircle radius `min(pi/|gamma|, 1)` (exclusive).
    pub fn radius_bound(&self) -> f64 {
        (PI / self.gamma.norm()).min(1.0)
    }

    /// Quadrature settings with the default radius `0.5 * min(pi/|gamma|, 1)`.
    pub fn default_config(&self) -> QuadratureConfig {
        QuadratureConfig { semicircle_radius: 0.5 * self.radius_bound(), ..Default::default() }
    }

    pub fn domain_check(&self, z: Complex64) -> QDilogDomainCheck {
        QDilogDomainCheck { z, admissible: z.re.abs() < PI + self.gamma.re }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct QDilogDomainCheck {
    pub z: Complex64,
    pub admissible: bool,
}

/// `1/sinh(a)` split as `exp(e) * m` with `m` bounded.
fn inv_sinh_split(a: Complex64) -> (Complex64, Complex64) {
    let s = if a.re >= 0.0 { 1.0 } else { -1.0 };
    let e = -a * s;
    let m = 2.0 * s / (1.0 - (-2.0 * s * a).exp());
    (e, m)
}

fn inv_sinh(a: Complex64) -> Complex64 {
    let (e, m) = inv_sinh_split(a);
    e.exp() * m
}

/// `1/sinh(x) - 1/x`.
fn inv_sinh_minus_pole(x: Complex64) -> Complex64 {
    if x.norm() < 0.05 {
        let x2 = x * x;
        x * (-1.0 / 6.0 + x2 * (7.0 / 360.0 + x2 * (-31.0 / 15120.0 + x2 * (127.0 / 604800.0))))
    } else {
        inv_sinh(x) - 1.0 / x
    }
}

fn check_radius(g: &GammaParam, cfg: &QuadratureConfig) -> Result<()> {
    let r = cfg.semicircle_radius;
    if r > 0.0 && r < g.radius_bound() {
        Ok(())
    } else {
        Err(Error::InvalidArgument(format!("radius {r} must lie in (0, {})", g.radius_bound())))
    }
}

fn contour_config(cfg: &QuadratureConfig, decay: f64) -> QuadratureConfig {
    QuadratureConfig { tail_length: cfg.tail_length.max(QuadratureConfig::tail_for_decay(decay)), ..*cfg }
}

/// `log S_gamma(z)`, the raw contour integral.
pub fn qdilog_log(z: Complex64, g: &GammaParam, cfg: &QuadratureConfig) -> Result<Complex64> {
    let margin = PI + g.gamma.re - z.re.abs();
    if !(margin >= EDGE_MARGIN) {
        return Err(Error::OutsideDomain { what: "quantum dilogarithm argument", z });
    }
    check_radius(g, cfg)?;
    let gamma = g.gamma;
    let pi = Complex64::new(PI, 0.0);
    let f = |t: Complex64| {
        let (e1, m1) = inv_sinh_split(pi * t);
        let (e2, m2) = inv_sinh_split(gamma * t);
        (z * t + e1 + e2).exp() * m1 * m2 / (4.0 * t)
    };
    let path = ContourPath::real_line_above_origin(cfg.semicircle_radius)?;
    Ok(integrate_path(f, &path, &contour_config(cfg, margin))?.value)
}

/// `S_gamma(z)`.
pub fn qdilog(z: Complex64, g: &GammaParam, cfg: &QuadratureConfig) -> Result<Complex64> {
    Ok(qdilog_log(z, g, cfg)?.exp())
}

/// Correction integral `I_gamma(z)` left after removing the `Li2` part of `log S_gamma(z)`.
pub fn igamma(z: Complex64, g: &GammaParam, cfg: &QuadratureConfig) -> Result<Complex64> {
    if !(z.re.abs() <= PI) {
        return Err(Error::OutsideDomain { what: "correction integral argument", z });
    }
    check_radius(g, cfg)?;
    let gamma = g.gamma;
    let pi = Complex64::new(PI, 0.0);
    let f = |t: Complex64| {
        let (e1, m1) = inv_sinh_split(pi * t);
        (z * t + e1).exp() * m1 * inv_sinh_minus_pole(gamma * t) / (4.0 * t)
    };
    let path = ContourPath::real_line_above_origin(cfg.semicircle_radius)?;
    let decay = (PI - z.re.abs()).max(1e-3);
    Ok(integrate_path(f, &path, &contour_config(cfg, decay))?.value)
}

/// Closed form of `S_gamma(-pi - iu + gamma) / S_gamma(pi - iu - (2n-3) gamma)`.
pub fn sratio_closed(u: f64, g: &GammaParam, n: u32) -> Result<Complex64> {
    if !(u > 0.0) {
        return Err(Error::InvalidArgument(format!("u = {u} must be positive")));
    }
    if n < 2 || n % 2 != 0 {
        return Err(Error::InvalidArgument(format!("n = {n} must be even and at least 2")));
    }
    let i = Complex64::i();
    let mut den = Complex64::new(1.0, 0.0);
    for k in 0..=(n - 2) {
        let f = (u - 2.0 * k as f64 * g.gamma * i).exp() - 1.0;
        if f.norm() < SINGULAR_RATIO_TOL {
            return Err(Error::SingularRatio { k });
        }
        den *= f;
    }
    Ok(((u * PI / g.gamma).exp() - 1.0) / den)
}

/// `e^{-(n-2)A} sinh((n-1)A)/sinh(A)` and `e^{-(n-2)A} cosh((n-1)A)/cosh(A)`.
pub fn geom_identities(a: Complex64, n: u32) -> Result<(Complex64, Complex64)> {
    if n < 2 {
        return Err(Error::InvalidArgument(format!("n = {n} must be at least 2")));
    }
    let (sh, ch) = (a.sinh(), a.cosh());
    if sh.norm() < 1e-14 || ch.norm() < 1e-14 {
        return Err(Error::SingularArgument(a));
    }
    let m = (n - 1) as f64;
    let pre = (-(n as f64 - 2.0) * a).exp();
    Ok((pre * (a * m).sinh() / sh, pre * (a * m).cosh() / ch))
}

/// Geometric sums `sum_{k<=n-2} e^{-2kA}` and `sum_{k<=n-2} (-1)^k e^{-2kA}`.
pub fn geom_sums(a: Complex64, n: u32) -> (Complex64, Complex64) {
    let r = (-2.0 * a).exp();
    let mut p = Complex64::new(1.0, 0.0);
    let (mut s, mut t) = (Complex64::default(), Complex64::default());
    for k in 0..=n.saturating_sub(2) {
        s += p;
        t += if k % 2 == 0 { p } else { -p };
        p *= r;
    }
    (s, t)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn refuses_edge_of_strip() {
        let g = GammaParam::from_value(c(0.1, 0.0)).unwrap();
        let cfg = g.default_config();
        assert!(matches!(qdilog(c(PI + 0.08, 0.0), &g, &cfg), Err(Error::OutsideDomain { .. })));
        assert!(qdilog(c(PI + 0.04, 0.0), &g, &cfg).is_ok());
    }

    #[test]
    fn refuses_oversized_radius() {
        let g = GammaParam::from_value(c(0.1, 0.0)).unwrap();
        let cfg = QuadratureConfig { semicircle_radius: 1.5, ..Default::default() };
        assert!(matches!(qdilog(c(0.0, 0.0), &g, &cfg), Err(Error::InvalidArgument(_))));
    }

    #[test]
    fn radius_independence_at_origin() {
        let g = GammaParam::from_value(c(0.1, 0.0)).unwrap();
        let a = qdilog(c(0.0, 0.0), &g, &QuadratureConfig { semicircle_radius: 0.05, ..Default::default() }).unwrap();
        let b = qdilog(c(0.0, 0.0), &g, &QuadratureConfig { semicircle_radius: 0.5, ..Default::default() }).unwrap();
        assert!((a - b).norm() < 1e-9 * b.norm());
    }

    #[test]
    fn small_argument_series_matches_direct() {
        let x = c(0.05, 0.01);
        let direct = 1.0 / x.sinh() - 1.0 / x;
        let series = inv_sinh_minus_pole(x * (1.0 - 1e-12));
        assert!((direct - series).norm() < 1e-12);
    }

    #[test]
    fn two_by_two_geometric_identities() {
        let (s, t) = geom_identities(c(1.0, 0.0), 2).unwrap();
        assert!((s - 1.0).norm() < 1e-15 && (t - 1.0).norm() < 1e-15);
        let (s, _) = geom_identities(c(2.0, 0.0), 4).unwrap();
        assert!((s.re - (1.0 + (-4f64).exp() + (-8f64).exp())).abs() < 1e-14);
        assert!(matches!(geom_identities(c(0.0, 0.0), 4), Err(Error::SingularArgument(_))));
        assert!(matches!(geom_identities(c(0.0, PI / 2.0), 4), Err(Error::SingularArgument(_))));
    }

    #[test]
    fn ratio_product_has_n_minus_one_factors() {
        let p = ModelParams::new(40, 2, 0.5).unwrap();
        let g = GammaParam::from_params(&p);
        let v = sratio_closed(0.5, &g, 2).unwrap();
        let expect = ((0.5 * PI / g.gamma).exp() - 1.0) / (0.5f64.exp() - 1.0);
        assert!((v - expect).norm() < 1e-12 * expect.norm());
        assert!(sratio_closed(0.0, &g, 2).is_err());
    }
}
