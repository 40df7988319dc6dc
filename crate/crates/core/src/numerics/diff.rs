//! Finite differences with Richardson extrapolation.

use num_complex::Complex64;

use crate::error::{Error, Result};

const SHRINK: f64 = 1.4;
const TABLE: usize = 12;
const SAFE: f64 = 2.0;
/// Accepted relative error of the extrapolated derivative.
const ACCEPT: f64 = 1e-6;

fn ridders<D>(diff: D, h0: f64) -> Result<Complex64>
where
    D: Fn(f64) -> Complex64,
{
    if !(h0 > 0.0 && h0.is_finite()) {
        return Err(Error::InvalidArgument(format!("step {h0} must be positive")));
    }
    let shrink2 = SHRINK * SHRINK;
    let mut table = [[Complex64::default(); TABLE]; TABLE];
    let mut h = h0;
    table[0][0] = diff(h);
    let mut best = table[0][0];
    let mut err = f64::INFINITY;
    for i in 1..TABLE {
        h /= SHRINK;
        table[0][i] = diff(h);
        let mut fac = shrink2;
        for j in 1..=i {
            table[j][i] = (table[j - 1][i] * fac - table[j - 1][i - 1]) / (fac - 1.0);
            fac *= shrink2;
            let e = (table[j][i] - table[j - 1][i]).norm().max((table[j][i] - table[j - 1][i - 1]).norm());
            if e <= err {
                err = e;
                best = table[j][i];
            }
        }
        if (table[i][i] - table[i - 1][i - 1]).norm() >= SAFE * err {
            break;
        }
    }
    if !(best.re.is_finite() && best.im.is_finite()) || err > ACCEPT * best.norm().max(1e-300) {
        return Err(Error::UnstableDifferentiation { error: err });
    }
    Ok(best)
}

/// Second derivative of `f` at `z0` from central differences with initial step `h0`.
pub fn differentiate2<F>(f: F, z0: Complex64, h0: f64) -> Result<Complex64>
where
    F: Fn(Complex64) -> Complex64,
{
    let f0 = f(z0);
    ridders(|h| (f(z0 + h) - f0 * 2.0 + f(z0 - h)) / (h * h), h0)
}

/// First derivative of `f` at `z0` from central differences with initial step `h0`.
pub fn differentiate1<F>(f: F, z0: Complex64, h0: f64) -> Result<Complex64>
where
    F: Fn(Complex64) -> Complex64,
{
    ridders(|h| (f(z0 + h) - f(z0 - h)) / (2.0 * h), h0)
}

/// Value at `h = 0` of the polynomial interpolating `(hs[i], values[i])` (Neville).
pub fn extrapolate_to_zero(hs: &[f64], values: &[Complex64]) -> Result<Complex64> {
    if hs.len() != values.len() || hs.is_empty() {
        return Err(Error::InvalidArgument("extrapolation needs matching, non-empty samples".into()));
    }
    let mut p = values.to_vec();
    let n = hs.len();
    for m in 1..n {
        for i in 0..n - m {
            let (hi, hj) = (hs[i], hs[i + m]);
            if hi == hj {
                return Err(Error::InvalidArgument("repeated extrapolation node".into()));
            }
            p[i] = (p[i] * (-hj) + p[i + 1] * hi) / (hi - hj);
        }
    }
    Ok(p[0])
}
