//! Leading-order asymptotics of the invariant and the numeric saddle-point integral.

use std::cell::RefCell;
use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::invariant::homfly_exact;
use crate::logc::LogComplex;
use crate::numerics::{integrate_path, ContourPath, QuadratureConfig};
use crate::params::{ModelParams, U_MAX};
use crate::polylog::li2;
use crate::saddle::{phi_n, phi_n_second, solve_saddle, SaddleData};

/// Point at which the global phase of the asymptotic formula is fixed.
pub const CALIBRATION_POINT: (u32, u32, f64) = (2000, 2, 0.5);

fn check_range(u: f64) -> Result<()> {
    if u.is_finite() && (0.0..U_MAX).contains(&u) {
        Ok(())
    } else {
        Err(Error::OutsideRange(u))
    }
}

fn xi_of(u: f64) -> Complex64 {
    Complex64::new(u, 2.0 * PI)
}

fn s_with(u: f64, phi: Complex64) -> Result<Complex64> {
    Ok(li2((u - phi).exp())? - li2((u + phi).exp())? - u * phi)
}

/// `arccosh(cosh u - 1/2)` on the branch with `Re(S(u)/xi) > 0`.
pub fn phi_u(u: f64) -> Result<Complex64> {
    check_range(u)?;
    let theta = (u.cosh() - 0.5).clamp(-1.0, 1.0).acos();
    let phi = Complex64::new(0.0, -theta);
    if (s_with(u, phi)? / xi_of(u)).re > 0.0 {
        Ok(phi)
    } else {
        Ok(-phi)
    }
}

/// `S(u) = Li2(e^{u - phi}) - Li2(e^{u + phi}) - u phi`.
pub fn s_of_u(u: f64) -> Result<Complex64> {
    s_with(u, phi_u(u)?)
}

/// `Re(S(u)/xi)`, the exponential growth rate per unit of `N+n-2`.
pub fn growth_rate(u: f64) -> Result<f64> {
    Ok((s_of_u(u)? / xi_of(u)).re)
}

/// `T(u) = 2/sqrt((e^u + e^-u + 1)(e^u + e^-u - 3))` with the principal root.
pub fn t_of_u(u: f64) -> Result<Complex64> {
    check_range(u)?;
    let c = 2.0 * u.cosh();
    let radicand = (c + 1.0) * (c - 3.0);
    if radicand.abs() < 1e-300 {
        return Err(Error::DegenerateT);
    }
    Ok(2.0 / Complex64::new(radicand, 0.0).sqrt())
}

fn ln_factorial(k: u32) -> f64 {
    (2..=k).map(|j| (j as f64).ln()).sum()
}

/// Logarithm of the main asymptotic formula (principal branches throughout).
pub fn rhs_theorem_main_log(params: &ModelParams) -> Result<Complex64> {
    let u = params.u;
    if !(u > 0.0) {
        return Err(Error::OutsideRange(u));
    }
    let phi = phi_u(u)?;
    let s = s_with(u, phi)?;
    let t = t_of_u(u)?;
    let k = params.n as f64 - 2.0;
    let m_over_xi = params.level_f64() / params.xi();
    let one = Complex64::new(1.0, 0.0);
    let mut l = k * ((one - (u - phi).exp()).ln() + (one - phi.exp()).ln());
    l -= ln_factorial(params.n - 2);
    l -= k * (u.exp() - 1.0).ln();
    l += 0.5 * Complex64::new(-PI, 0.0).ln();
    l -= (2.0 * (u / 2.0).sinh()).ln();
    l += 0.5 * t.ln();
    l += (0.5 + k) * m_over_xi.ln();
    l += m_over_xi * s;
    Ok(l)
}

pub fn rhs_theorem_main(params: &ModelParams) -> Result<LogComplex> {
    Ok(LogComplex::from_log(rhs_theorem_main_log(params)?))
}

/// Unimodular constant multiplying the asymptotic formula, fixed at one point.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PhaseCalibration {
    pub unit: Complex64,
}

impl PhaseCalibration {
    pub fn identity() -> Self {
        Self { unit: Complex64::new(1.0, 0.0) }
    }

    pub fn calibrate() -> Result<Self> {
        let (big_n, n, u) = CALIBRATION_POINT;
        let p = ModelParams::new(big_n, n, u)?;
        let ratio = homfly_exact(&p)?.value.div(&rhs_theorem_main(&p)?);
        Ok(Self { unit: Complex64::from_polar(1.0, ratio.arg) })
    }

    pub fn apply(&self, rhs: &LogComplex) -> LogComplex {
        rhs.mul(&LogComplex::from_complex(self.unit))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AsymptoticReport {
    pub params: ModelParams,
    pub exact: LogComplex,
    pub rhs: LogComplex,
    /// `exact / rhs` after calibration.
    pub ratio: Complex64,
    /// `log|J_N| / N`.
    pub growth_exact: f64,
    /// `Re(S(u)/xi) (N+n-2)/N`.
    pub growth_predicted: f64,
    pub saddle: Option<SaddleData>,
}

pub fn asymptotic_report(params: &ModelParams, calibration: &PhaseCalibration) -> Result<AsymptoticReport> {
    let exact = homfly_exact(params)?.value;
    let rhs = calibration.apply(&rhs_theorem_main(params)?);
    let big_n = params.big_n as f64;
    Ok(AsymptoticReport {
        params: *params,
        exact,
        rhs,
        ratio: exact.div(&rhs).to_complex(),
        growth_exact: exact.log_abs / big_n,
        growth_predicted: growth_rate(params.u)? * params.level_f64() / big_n,
        saddle: solve_saddle(params).ok(),
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SaddlePointCheck {
    /// `int exp((N+n-2) Phi) dz` through the saddle.
    pub integral: Complex64,
    /// `sqrt(2pi/((N+n-2)(-Phi''))) exp((N+n-2) Phi(z_N))`.
    pub closed_form: Complex64,
    pub ratio: Complex64,
    pub saddle: SaddleData,
}

/// Integral of `exp(M (f(z) - f(z0)))` along `path`, with the first evaluation error surfaced.
pub fn scaled_exp_integral<F>(f: F, m: f64, f0: Complex64, path: &ContourPath, cfg: &QuadratureConfig) -> Result<Complex64>
where
    F: Fn(Complex64) -> Result<Complex64>,
{
    let failure = RefCell::new(None);
    let g = |z: Complex64| match f(z) {
        Ok(v) => (m * (v - f0)).exp(),
        Err(e) => {
            failure.borrow_mut().get_or_insert(e);
            Complex64::new(f64::NAN, 0.0)
        }
    };
    let r = integrate_path(g, path, cfg);
    if let Some(e) = failure.into_inner() {
        return Err(e);
    }
    Ok(r?.value)
}

/// Path `0 -> z_N -> 1 - s` with extra vertices at growing multiples of the Gaussian width.
pub fn descent_path(params: &ModelParams, saddle: &SaddleData, d2: Complex64) -> Result<ContourPath> {
    let z0 = saddle.z;
    let start = Complex64::default();
    let end = Complex64::new(1.0 - params.shift(), 0.0);
    let width = 1.0 / (params.level_f64() * d2.norm()).sqrt();
    let mut pts = vec![start];
    let leg = |from: Complex64, pts: &mut Vec<Complex64>, toward_saddle: bool| {
        let d = z0 - from;
        let len = d.norm();
        let mut marks: Vec<f64> = (0..12).map(|j| width * 2f64.powi(j - 2)).filter(|r| *r < 0.9 * len).collect();
        if toward_saddle {
            marks.reverse();
        }
        pts.extend(marks.iter().map(|r| z0 - d / len * *r));
    };
    leg(start, &mut pts, true);
    pts.push(z0);
    leg(end, &mut pts, false);
    pts.push(end);
    ContourPath::polyline(&pts)
}

/// Integral of `exp((N+n-2) Phi)` through the saddle compared with its Gaussian approximation.
pub fn steepest_descent_integral(params: &ModelParams, cfg: &QuadratureConfig) -> Result<SaddlePointCheck> {
    if params.big_n > 400 {
        return Err(Error::InvalidParams(format!("N = {} exceeds 400 for the saddle-point quadrature", params.big_n)));
    }
    let saddle = solve_saddle(params)?;
    let m = params.level_f64();
    let f0 = phi_n(saddle.z, params)?;
    let d2 = phi_n_second(saddle.z, params)?;
    let path = descent_path(params, &saddle, d2)?;
    let scaled = scaled_exp_integral(|z| phi_n(z, params), m, f0, &path, cfg)?;
    let peak = (m * f0).exp();
    let gauss = (2.0 * PI / (m * -d2)).sqrt();
    Ok(SaddlePointCheck { integral: scaled * peak, closed_form: gauss * peak, ratio: scaled / gauss, saddle })
}
