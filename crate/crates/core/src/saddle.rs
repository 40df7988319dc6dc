//! Potential functions, their saddle points and the finite-N limit checks.

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::asymptotic::phi_u;
use crate::error::{Error, Result};
use crate::numerics::{extrapolate_to_zero, solve_cubic};
use crate::params::ModelParams;
use crate::polylog::li2;

const AMBIGUITY_TOL: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PotentialEval {
    pub z: Complex64,
    pub phi: Complex64,
    pub dphi: Complex64,
    pub d2phi: Complex64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SaddleData {
    /// `e^{z xi}`.
    pub w: Complex64,
    pub z: Complex64,
    /// `|cubic(w)|`.
    pub residual: f64,
    /// `e^u`.
    pub a: Complex64,
    /// `e^{(n-2) xi / (N+n-2)}`.
    pub b: Complex64,
}

fn xi_of(u: f64) -> Complex64 {
    Complex64::new(u, 2.0 * PI)
}

/// The four exponentials `e^{u-(z+s)xi}`, `e^{z xi}`, `e^{u+z xi}`, `e^{(z+s)xi}`.
fn arguments(z: Complex64, u: f64, s: f64) -> [Complex64; 4] {
    let xi = xi_of(u);
    let zs = z + s;
    [(u - zs * xi).exp(), (z * xi).exp(), (u + z * xi).exp(), (zs * xi).exp()]
}

fn check_cut(x: Complex64) -> Result<()> {
    if crate::polylog::on_unit_cut(x) {
        Err(Error::OnBranchCut(x))
    } else {
        Ok(())
    }
}

fn potential(z: Complex64, u: f64, s: f64) -> Result<Complex64> {
    let [a, b, c, d] = arguments(z, u, s);
    let sum = if s == 0.0 { li2(a)? - li2(c)? } else { li2(a)? + li2(b)? - li2(c)? - li2(d)? };
    Ok(sum / xi_of(u) - u * z)
}

fn potential_derivative(z: Complex64, u: f64, s: f64) -> Result<Complex64> {
    let args = arguments(z, u, s);
    for x in args {
        check_cut(x)?;
    }
    let [a, b, c, d] = args.map(|x| (1.0 - x).ln());
    Ok(a - b + c + d - u)
}

fn potential_second(z: Complex64, u: f64, s: f64) -> Result<Complex64> {
    let args = arguments(z, u, s);
    for x in args {
        check_cut(x)?;
    }
    let [a, b, c, d] = args.map(|x| x / (1.0 - x));
    Ok(xi_of(u) * (a + b - c - d))
}

/// `Phi2(z) = (Li2(e^{u - xi z}) - Li2(e^{u + xi z}))/xi - u z`.
pub fn phi2(z: Complex64, u: f64) -> Result<Complex64> {
    potential(z, u, 0.0)
}

pub fn phi2_derivative(z: Complex64, u: f64) -> Result<Complex64> {
    potential_derivative(z, u, 0.0)
}

pub fn phi2_second(z: Complex64, u: f64) -> Result<Complex64> {
    potential_second(z, u, 0.0)
}

/// Potential with shift `s = (n-2)/(N+n-2)`.
pub fn phi_n(z: Complex64, params: &ModelParams) -> Result<Complex64> {
    potential(z, params.u, params.shift())
}

/// `d/dz phi_n`; saddle points are its zeros.
pub fn phi_n_derivative(z: Complex64, params: &ModelParams) -> Result<Complex64> {
    potential_derivative(z, params.u, params.shift())
}

pub fn phi_n_second(z: Complex64, params: &ModelParams) -> Result<Complex64> {
    potential_second(z, params.u, params.shift())
}

pub fn evaluate(z: Complex64, params: &ModelParams) -> Result<PotentialEval> {
    Ok(PotentialEval {
        z,
        phi: phi_n(z, params)?,
        dphi: phi_n_derivative(z, params)?,
        d2phi: phi_n_second(z, params)?,
    })
}

/// Strip on which the potential is analytic: `-(2pi/u) x < y < (2pi/u)(1 - x - s)`.
pub fn in_domain_d_prime(z: Complex64, params: &ModelParams) -> bool {
    let u = params.u;
    if u == 0.0 {
        return z.re > 0.0 && z.re + params.shift() < 1.0;
    }
    -2.0 * PI / u * z.re < z.im && z.im < 2.0 * PI / u * (1.0 - z.re - params.shift())
}

/// `z` with `e^{z xi} = w` and `Im(z xi)` in `(0, 2pi]`.
pub fn z_from_w(w: Complex64, u: f64) -> Complex64 {
    let mut l = w.ln();
    if l.im <= 0.0 {
        l.im += 2.0 * PI;
    }
    l / xi_of(u)
}

/// Limiting saddle `(phi(u) + 2 pi i)/xi`.
pub fn z2(u: f64) -> Result<Complex64> {
    Ok((phi_u(u)? + Complex64::new(0.0, 2.0 * PI)) / xi_of(u))
}

/// Saddle point from the cubic in `w = e^{z xi}`, continued from the limiting root `e^{phi(u)}`.
pub fn solve_saddle(params: &ModelParams) -> Result<SaddleData> {
    let a = Complex64::new(params.u.exp(), 0.0);
    let b = (params.xi() * params.shift()).exp();
    let coeffs = [a * b * b, -(b * b + a * a * b), a * a + b, -a];
    let roots = solve_cubic(coeffs[0], coeffs[1], coeffs[2], coeffs[3])?;
    let reference = phi_u(params.u)?.exp();
    let mut by_distance: Vec<_> = roots.iter().map(|r| ((r.root - reference).norm(), r.root)).collect();
    by_distance.sort_by(|x, y| x.0.total_cmp(&y.0));
    if (by_distance[1].0 - by_distance[0].0).abs() < AMBIGUITY_TOL {
        return Err(Error::AmbiguousRoot);
    }
    let w = by_distance[0].1;
    let residual = (((coeffs[0] * w + coeffs[1]) * w + coeffs[2]) * w + coeffs[3]).norm();
    Ok(SaddleData { w, z: z_from_w(w, params.u), residual, a, b })
}

/// Second derivative of the potential at the saddle.
pub fn phi_second_at_saddle(params: &ModelParams) -> Result<Complex64> {
    phi_n_second(solve_saddle(params)?.z, params)
}

/// `(N+n-2)(Phi2(z_N) - Phi2(z2))` for one parameter point.
pub fn diff2_scaled(params: &ModelParams) -> Result<Complex64> {
    let zn = solve_saddle(params)?.z;
    Ok(params.level_f64() * (phi2(zn, params.u)? - phi2(z2(params.u)?, params.u)?))
}

/// Magnitudes `|(N+n-2)(Phi2(z_N) - Phi2(z2))|` along the sequence.
pub fn diff2_values(seq: &[ModelParams]) -> Result<Vec<f64>> {
    seq.iter().map(|p| diff2_scaled(p).map(|v| v.norm())).collect()
}

/// Largest magnitude over the second half of the sequence.
pub fn diff2_limit_check(seq: &[ModelParams]) -> Result<f64> {
    let vals = diff2_values(seq)?;
    Ok(vals[vals.len() / 2..].iter().copied().fold(0.0, f64::max))
}

/// Limit of `(N+n-2)(Phi2(z_N) - Phi2(z2))` extrapolated in `1/(N+n-2)`.
pub fn diff2_extrapolated(seq: &[ModelParams]) -> Result<Complex64> {
    let hs: Vec<f64> = seq.iter().map(|p| 1.0 / p.level_f64()).collect();
    let vals = seq.iter().map(diff2_scaled).collect::<Result<Vec<_>>>()?;
    extrapolate_to_zero(&hs, &vals)
}

/// `(N+n-2)(phi_n(z) - phi2(z))`.
pub fn diff1_scaled(z: Complex64, params: &ModelParams) -> Result<Complex64> {
    Ok(params.level_f64() * (phi_n(z, params)? - phi2(z, params.u)?))
}

/// `(n-2) log((1 - e^{u - z xi})(1 - e^{z xi}))`.
pub fn diff1_limit(z: Complex64, n: u32, u: f64) -> Complex64 {
    let xi = xi_of(u);
    let prod = (1.0 - (u - z * xi).exp()) * (1.0 - (z * xi).exp());
    (n as f64 - 2.0) * prod.ln()
}

/// `diff1_scaled` extrapolated in `1/(N+n-2)` over the given levels.
pub fn diff1_extrapolated(z: Complex64, n: u32, u: f64, levels: &[u32]) -> Result<Complex64> {
    let seq = levels.iter().map(|&big_n| ModelParams::new(big_n, n, u)).collect::<Result<Vec<_>>>()?;
    let hs: Vec<f64> = seq.iter().map(|p| 1.0 / p.level_f64()).collect();
    let vals = seq.iter().map(|p| diff1_scaled(z, p)).collect::<Result<Vec<_>>>()?;
    extrapolate_to_zero(&hs, &vals)
}
