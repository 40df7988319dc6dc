//! The SU(n) invariant of the figure-eight knot at `q = exp(xi/(N+n-2))`.

mod precise;

use std::collections::HashMap;
use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::logc::{wrap_phase, LogComplex};
use crate::numerics::{integrate_path, ContourPath, QuadratureConfig};
use crate::params::ModelParams;
use crate::qdilog::{qdilog_log, GammaParam};

/// Double-precision sums whose estimated relative error exceeds this are redone in multiprecision.
const DOUBLE_TRUST: f64 = 1e-12;
/// Two multiprecision passes must agree to this relative distance.
const PRECISE_AGREEMENT: f64 = 1e-15;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct InvariantValue {
    pub value: LogComplex,
    /// Number of summands, equal to N.
    pub terms: u32,
    /// Largest summand.
    pub max_term: LogComplex,
    /// Working precision in bits (53 for plain doubles).
    pub precision_bits: u32,
}

impl InvariantValue {
    pub fn to_complex(&self) -> Complex64 {
        self.value.to_complex()
    }

    pub fn max_term_magnitude(&self) -> f64 {
        self.max_term.abs()
    }

    /// `log|max term| - log|value|`: digits lost to cancellation, in nats.
    pub fn cancellation(&self) -> f64 {
        self.max_term.log_abs - self.value.log_abs
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Precision {
    /// Doubles when they suffice, otherwise multiprecision with a self-check.
    Auto,
    Double,
    Bits(u32),
}

/// `q^{k/2} - q^{-k/2}` with `q = exp(log_q)`.
pub fn quantum_integer(k: i64, log_q: Complex64) -> Complex64 {
    let h = log_q * (k as f64 / 2.0);
    h.exp() - (-h).exp()
}

/// `[k]! = [1][2]...[k]` at the parameters' `q`.
pub fn quantum_factorial(k: u64, params: &ModelParams) -> Complex64 {
    let e = params.q_exponent();
    (1..=k as i64).map(|j| quantum_integer(j, e)).product()
}

fn ln_one_minus_exp(x: Complex64) -> Complex64 {
    (Complex64::new(1.0, 0.0) - x.exp()).ln()
}

/// Log-form double-precision sum with an estimate of its relative error.
fn double_sum(params: &ModelParams) -> Result<(InvariantValue, f64)> {
    let big_n = params.big_n as i64;
    let shift = params.n as i64 - 2;
    let e = params.q_exponent();
    let step = -e * (big_n as f64 + shift as f64 / 2.0);
    let mut logs = Vec::with_capacity(params.big_n as usize);
    let mut l = Complex64::default();
    logs.push(l);
    for k in 1..big_n {
        let den = quantum_integer(k, e);
        if den.norm() == 0.0 {
            return Err(Error::SingularPrefactor);
        }
        l += quantum_integer(shift + k, e).ln() - den.ln() + step;
        l += ln_one_minus_exp(e * (big_n - k) as f64) + ln_one_minus_exp(e * (big_n + k + shift) as f64);
        l.im = wrap_phase(l.im);
        logs.push(l);
    }
    let lmax = *logs.iter().max_by(|a, b| a.re.total_cmp(&b.re)).expect("at least one term");
    let s: Complex64 = logs.iter().map(|l| (l - lmax.re).exp()).sum();
    if s.norm() == 0.0 || !s.norm().is_finite() {
        return Err(Error::Precision("double-precision sum vanished".into()));
    }
    let value = LogComplex::new(lmax.re + s.norm().ln(), s.arg());
    let max_term = LogComplex::new(lmax.re, lmax.im);
    let cancel = max_term.log_abs - value.log_abs;
    let rel_err = 32.0 * big_n as f64 * f64::EPSILON * cancel.exp();
    Ok((InvariantValue { value, terms: params.big_n, max_term, precision_bits: 53 }, rel_err))
}

fn precise_sum(params: &ModelParams, bits: u32) -> Result<InvariantValue> {
    let (value, max_term) = precise::exact_sum(params, bits as usize)?;
    Ok(InvariantValue { value, terms: params.big_n, max_term, precision_bits: bits })
}

fn relative_gap(a: &LogComplex, b: &LogComplex) -> f64 {
    (a.div(b).to_complex() - 1.0).norm()
}

/// Exact invariant from the finite q-sum.
pub fn homfly_exact(params: &ModelParams) -> Result<InvariantValue> {
    homfly_exact_with(params, Precision::Auto)
}

pub fn homfly_exact_with(params: &ModelParams, precision: Precision) -> Result<InvariantValue> {
    match precision {
        Precision::Double => Ok(double_sum(params)?.0),
        Precision::Bits(b) => precise_sum(params, b),
        Precision::Auto => {
            let (dv, err) = double_sum(params)?;
            if err <= DOUBLE_TRUST {
                return Ok(dv);
            }
            let cancel = dv.cancellation().max(0.0);
            let lost = cancel / std::f64::consts::LN_2 + (params.big_n as f64).log2();
            let mut bits = (96 + lost.ceil() as u32).max(128);
            for _ in 0..8 {
                let lo = precise_sum(params, bits)?;
                let hi = precise_sum(params, bits + 64)?;
                if relative_gap(&lo.value, &hi.value) <= PRECISE_AGREEMENT {
                    return Ok(hi);
                }
                bits *= 2;
            }
            Err(Error::Precision(format!("no stable value up to {bits} bits")))
        }
    }
}

fn require_positive_u(params: &ModelParams) -> Result<()> {
    if params.u > 0.0 {
        Ok(())
    } else {
        Err(Error::UndefinedDomain)
    }
}

/// Radius and tolerances suited to the quantum dilogarithms at these parameters.
pub fn qdilog_config(params: &ModelParams) -> QuadratureConfig {
    GammaParam::from_params(params).default_config()
}

#[derive(Clone, Copy, PartialEq, Eq, Hash)]
enum Family {
    /// `pi - iu - j gamma`
    Upper,
    /// `-pi + j gamma`
    Lower,
    /// `-pi - iu + j gamma`
    LowerShifted,
}

struct LogDilogs<'a> {
    params: ModelParams,
    g: GammaParam,
    cfg: &'a QuadratureConfig,
    cache: HashMap<(Family, i64), Complex64>,
}

impl<'a> LogDilogs<'a> {
    fn new(params: &ModelParams, cfg: &'a QuadratureConfig) -> Self {
        Self { params: *params, g: GammaParam::from_params(params), cfg, cache: HashMap::new() }
    }

    fn get(&mut self, family: Family, j: i64) -> Result<Complex64> {
        if let Some(v) = self.cache.get(&(family, j)) {
            return Ok(*v);
        }
        let iu = Complex64::new(0.0, self.params.u);
        let jg = self.g.gamma * j as f64;
        let z = match family {
            Family::Upper => PI - iu - jg,
            Family::Lower => -PI + jg,
            Family::LowerShifted => -PI - iu + jg,
        };
        let v = qdilog_log(z, &self.g, self.cfg)?;
        self.cache.insert((family, j), v);
        Ok(v)
    }

    /// `log( S(-pi - iu + gamma) / S(pi - iu - (2n-3) gamma) )`.
    fn prefactor_log(&mut self) -> Result<Complex64> {
        let n = self.params.n as i64;
        Ok(self.get(Family::LowerShifted, 1)? - self.get(Family::Upper, 2 * n - 3)?)
    }
}

/// `e^{-(n-2)(n-1) xi / (4(N+n-2))}`.
fn framing(params: &ModelParams) -> Complex64 {
    let n = params.n as f64;
    (-(n - 2.0) * (n - 1.0) * params.xi() / (4.0 * params.level_f64())).exp()
}

/// The invariant rebuilt from quotients of quantum dilogarithms.
pub fn homfly_qdilog_form(params: &ModelParams, cfg: &QuadratureConfig) -> Result<Complex64> {
    if params.big_n > 64 {
        return Err(Error::InvalidParams(format!("N = {} exceeds 64 for the quantum dilogarithm form", params.big_n)));
    }
    require_positive_u(params)?;
    let mut s = LogDilogs::new(params, cfg);
    let n = params.n as i64;
    let mut sum = Complex64::default();
    for k in 0..params.big_n as i64 {
        let l = s.get(Family::Upper, 2 * n + 2 * k - 3)? + s.get(Family::Lower, 2 * k + 1)?
            - s.get(Family::LowerShifted, 2 * k + 1)?
            - s.get(Family::Lower, 2 * n + 2 * k - 3)?;
        sum += (l - k as f64 * params.u).exp();
    }
    let pre = s.prefactor_log()?.exp() / quantum_factorial(params.n as u64 - 2, params);
    Ok(pre * framing(params) * sum)
}

/// Strip membership for the domain where the tan-integrand is defined.
pub fn in_domain_d(z: Complex64, params: &ModelParams) -> Result<bool> {
    require_positive_u(params)?;
    let (u, slack) = (params.u, params.gamma().re / params.u);
    let band = |x: f64| -2.0 * PI * x / u - slack < z.im && z.im < 2.0 * PI / u * (1.0 - x) + slack;
    Ok(band(z.re) && band(z.re + params.shift()))
}

/// Summand-interpolating integrand `g_{N+n-2}(z)`.
pub fn g_integrand(z: Complex64, params: &ModelParams, cfg: &QuadratureConfig) -> Result<Complex64> {
    if !in_domain_d(z, params)? {
        return Err(Error::OutsideDomain { what: "integrand argument", z });
    }
    let g = GammaParam::from_params(params);
    let (xi, iu, i) = (params.xi(), Complex64::new(0.0, params.u), Complex64::i());
    let zs = z + params.shift();
    let l = qdilog_log(PI - iu + i * zs * xi, &g, cfg)? + qdilog_log(-PI - i * z * xi, &g, cfg)?
        - qdilog_log(-PI - iu - i * z * xi, &g, cfg)?
        - qdilog_log(-PI - i * zs * xi, &g, cfg)?;
    Ok((l - params.level_f64() * params.u * z).exp())
}

/// `S(-pi - iu + gamma) / S(pi - iu - (2n-3) gamma) / [n-2]!` times the tan-integral prefactor.
fn tan_integral_prefactor(params: &ModelParams, cfg: &QuadratureConfig) -> Result<Complex64> {
    let mut s = LogDilogs::new(params, cfg);
    let m = params.level_f64();
    let outer = s.prefactor_log()?.exp() / quantum_factorial(params.n as u64 - 2, params);
    Ok(outer * Complex64::i() * (params.u / 2.0).exp() * m * framing(params) / 2.0)
}

/// Poles `(2k+1)/(2(N+n-2))` of `tan((N+n-2) pi z)`, k = 0..N-1.
pub fn tan_poles(params: &ModelParams) -> Vec<Complex64> {
    let two_m = 2.0 * params.level_f64();
    (0..params.big_n).map(|k| Complex64::new((2 * k + 1) as f64 / two_m, 0.0)).collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ResidueCheck {
    /// Tan-integral representation evaluated by residues (or by quadrature).
    pub reconstructed: Complex64,
    pub exact: Complex64,
    /// `exact / reconstructed`; 1 when the printed prefactor is right.
    pub factor: Complex64,
}

fn residue_check(params: &ModelParams, reconstructed: Complex64) -> Result<ResidueCheck> {
    let exact = homfly_exact(params)?.to_complex();
    Ok(ResidueCheck { reconstructed, exact, factor: exact / reconstructed })
}

/// `2 pi i` times the sum of residues of `tan((N+n-2) pi z) g(z)` at the tan poles.
pub fn tan_residue_integral(params: &ModelParams, cfg: &QuadratureConfig) -> Result<Complex64> {
    let m = params.level_f64();
    let mut sum = Complex64::default();
    for z in tan_poles(params) {
        sum += g_integrand(z, params, cfg)? * (-1.0 / (m * PI));
    }
    Ok(2.0 * PI * Complex64::i() * sum)
}

/// Reconstruction of the invariant from the tan-integral via residues.
pub fn residue_reconstruction(params: &ModelParams, cfg: &QuadratureConfig) -> Result<ResidueCheck> {
    let r = tan_integral_prefactor(params, cfg)? * tan_residue_integral(params, cfg)?;
    residue_check(params, r)
}

/// Upper polygon `C_+(eps)`: `1-eps -> 1-u/2pi-eps+i -> -u/2pi+eps+i -> eps`.
pub fn contour_upper(params: &ModelParams, eps: f64) -> Result<ContourPath> {
    let d = params.u / (2.0 * PI);
    ContourPath::polyline(&[
        Complex64::new(1.0 - eps, 0.0),
        Complex64::new(1.0 - d - eps, 1.0),
        Complex64::new(-d + eps, 1.0),
        Complex64::new(eps, 0.0),
    ])
}

/// Lower polygon `C_-(eps)`: `eps -> eps+u/2pi-i -> 1-eps+u/2pi-i -> 1-eps`.
pub fn contour_lower(params: &ModelParams, eps: f64) -> Result<ContourPath> {
    let d = params.u / (2.0 * PI);
    ContourPath::polyline(&[
        Complex64::new(eps, 0.0),
        Complex64::new(eps + d, -1.0),
        Complex64::new(1.0 - eps + d, -1.0),
        Complex64::new(1.0 - eps, 0.0),
    ])
}

/// `tan(w)` without overflow for large `|Im w|`.
pub fn tan_stable(w: Complex64) -> Complex64 {
    let i = Complex64::i();
    if w.im >= 0.0 {
        let e = (2.0 * i * w).exp();
        -i * (e - 1.0) / (e + 1.0)
    } else {
        let e = (-2.0 * i * w).exp();
        i * (e - 1.0) / (e + 1.0)
    }
}

/// `int_{C(eps)} tan((N+n-2) pi z) g(z) dz` by quadrature.
pub fn tan_contour_integral(params: &ModelParams, eps: f64, cfg: &QuadratureConfig) -> Result<Complex64> {
    let path = contour_upper(params, eps)?.concat(&contour_lower(params, eps)?)?;
    let m = params.level_f64();
    let failure = std::cell::RefCell::new(None);
    let f = |z: Complex64| match g_integrand(z, params, cfg) {
        Ok(g) => tan_stable(m * PI * z) * g,
        Err(e) => {
            failure.borrow_mut().get_or_insert(e);
            Complex64::new(f64::NAN, 0.0)
        }
    };
    let outer = QuadratureConfig { abs_tol: 1e-10, rel_tol: 1e-8, ..*cfg };
    let r = integrate_path(f, &path, &outer);
    if let Some(e) = failure.into_inner() {
        return Err(e);
    }
    Ok(r?.value)
}

/// Same reconstruction with the tan-integral done by quadrature over `C(eps)`.
pub fn contour_reconstruction(params: &ModelParams, eps: f64, cfg: &QuadratureConfig) -> Result<ResidueCheck> {
    let r = tan_integral_prefactor(params, cfg)? * tan_contour_integral(params, eps, cfg)?;
    residue_check(params, r)
}
