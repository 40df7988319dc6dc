//! Principal branch of the dilogarithm.

use std::f64::consts::PI;
use std::sync::OnceLock;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub const CUT_TOL: f64 = 1e-14;
const ZETA2: f64 = PI * PI / 6.0;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BranchedValue {
    pub value: Complex64,
    /// The argument sat on `[1, inf)`; `value` is the limit from the upper half plane.
    pub on_cut: bool,
}

/// `B_{2k} / (2k+1)!` for k = 1..=20, via `B_{2k} = (-1)^{k+1} 2 (2k)! zeta(2k) / (2 pi)^{2k}`.
fn bernoulli_coefficients() -> &'static [f64; 20] {
    static COEFFS: OnceLock<[f64; 20]> = OnceLock::new();
    COEFFS.get_or_init(|| {
        let mut out = [0.0; 20];
        for (i, slot) in out.iter_mut().enumerate() {
            let k = i as i32 + 1;
            let s = 2 * k;
            let zeta = if k == 1 {
                ZETA2
            } else {
                let terms = 2000;
                let sum: f64 = (1..=terms).rev().map(|n| (n as f64).powi(-s)).sum();
                sum + (terms as f64).powi(1 - s) / (s - 1) as f64
            };
            let sign = if k % 2 == 1 { 1.0 } else { -1.0 };
            *slot = sign * 2.0 * zeta / (2.0 * PI).powi(s) / (s + 1) as f64;
        }
        out
    })
}

fn power_series(z: Complex64) -> Complex64 {
    let mut sum = Complex64::default();
    let mut zk = z;
    for k in 1..200 {
        let term = zk / (k * k) as f64;
        sum += term;
        if term.norm() <= 1e-17 * sum.norm() {
            break;
        }
        zk *= z;
    }
    sum
}

/// Series in `w = -log(1 - z)`; valid for `|z| <= 1`, `Re z <= 1/2`.
fn bernoulli_series(z: Complex64) -> Complex64 {
    let w = -(Complex64::new(1.0, 0.0) - z).ln();
    let w2 = w * w;
    let mut sum = w - w2 * 0.25;
    let mut wp = w;
    for c in bernoulli_coefficients() {
        wp *= w2;
        let term = wp * *c;
        sum += term;
        if term.norm() <= 1e-17 * sum.norm() {
            break;
        }
    }
    sum
}

/// Li2 for `z` off the cut.
fn li2_core(z: Complex64) -> Complex64 {
    let one = Complex64::new(1.0, 0.0);
    let r = z.norm();
    if r == 0.0 {
        Complex64::default()
    } else if r <= 0.5 {
        power_series(z)
    } else if r > 1.0 {
        let l = (-z).ln();
        -li2_core(one / z) - ZETA2 - l * l * 0.5
    } else if z.re > 0.5 {
        ZETA2 - z.ln() * (one - z).ln() - bernoulli_series(one - z)
    } else {
        bernoulli_series(z)
    }
}

/// Principal-branch dilogarithm `Li2(z) = -int_0^z log(1-x)/x dx`.
pub fn dilog(z: Complex64) -> Result<BranchedValue> {
    if !(z.re.is_finite() && z.im.is_finite()) {
        return Err(Error::InvalidArgument(format!("dilog of non-finite {z}")));
    }
    if z.re >= 1.0 && z.im.abs() <= CUT_TOL {
        let x = z.re;
        let value = if x == 1.0 {
            Complex64::new(ZETA2, 0.0)
        } else {
            let l = x.ln();
            let inner = li2_core(Complex64::new(1.0 / x, 0.0)).re;
            Complex64::new(2.0 * ZETA2 - 0.5 * l * l - inner, PI * l)
        };
        return Ok(BranchedValue { value, on_cut: true });
    }
    Ok(BranchedValue { value: li2_core(z), on_cut: false })
}

/// `Li2(z)`, failing when `z` lies on the cut.
pub fn li2(z: Complex64) -> Result<Complex64> {
    let v = dilog(z)?;
    if v.on_cut {
        Err(Error::OnBranchCut(z))
    } else {
        Ok(v.value)
    }
}

/// True when `x` lies on `[1, inf)` within the cut tolerance.
pub fn on_unit_cut(x: Complex64) -> bool {
    x.im.abs() <= CUT_TOL && x.re >= 1.0 - CUT_TOL
}

/// `-log(1 - e^mu)`, the derivative of `Li2(e^mu)` in `mu`.
pub fn dilog_exp_derivative(mu: Complex64) -> Result<Complex64> {
    if !(mu.re.is_finite() && mu.im.is_finite()) {
        return Err(Error::InvalidArgument(format!("non-finite exponent {mu}")));
    }
    let e = mu.exp();
    if on_unit_cut(e) {
        return Err(Error::OnBranchCut(e));
    }
    Ok(neg_log_one_minus(e))
}

/// `-log(1 - x)` with a series near zero.
pub(crate) fn neg_log_one_minus(x: Complex64) -> Complex64 {
    if x.norm() < 0.1 {
        let mut sum = Complex64::default();
        let mut xk = x;
        for k in 1..60 {
            let term = xk / k as f64;
            sum += term;
            if term.norm() <= 1e-17 * sum.norm() {
                break;
            }
            xk *= x;
        }
        sum
    } else {
        -(Complex64::new(1.0, 0.0) - x).ln()
    }
}
