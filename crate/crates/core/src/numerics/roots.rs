use num_complex::Complex64;

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RootSolveResult {
    pub root: Complex64,
    /// `|p(root)|` for the polynomial that was solved.
    pub residual: f64,
    /// Newton steps spent polishing.
    pub iterations: u32,
}

const MAX_POLISH: u32 = 5;

fn horner(c: &[Complex64; 4], w: Complex64) -> (Complex64, Complex64) {
    let p = ((c[0] * w + c[1]) * w + c[2]) * w + c[3];
    let dp = (c[0] * 3.0 * w + c[1] * 2.0) * w + c[2];
    (p, dp)
}

/// All three roots of `c3 w^3 + c2 w^2 + c1 w + c0`, with multiplicity.
pub fn solve_cubic(c3: Complex64, c2: Complex64, c1: Complex64, c0: Complex64) -> Result<[RootSolveResult; 3]> {
    let coeffs = [c3, c2, c1, c0];
    if coeffs.iter().any(|c| !c.re.is_finite() || !c.im.is_finite()) {
        return Err(Error::InvalidArgument("non-finite cubic coefficient".into()));
    }
    if c3.norm() == 0.0 {
        return Err(Error::DegenerateDegree);
    }
    let a = c2 / c3;
    let b = c1 / c3;
    let c = c0 / c3;
    // Depressed form y^3 + p y + q with w = y - a/3.
    let p = b - a * a / 3.0;
    let q = a * a * a * (2.0 / 27.0) - a * b / 3.0 + c;
    let disc = (q * q / 4.0 + p * p * p / 27.0).sqrt();
    let s1 = -q / 2.0 + disc;
    let s2 = -q / 2.0 - disc;
    let s = if s1.norm() >= s2.norm() { s1 } else { s2 };
    let omega = Complex64::from_polar(1.0, 2.0 * std::f64::consts::PI / 3.0);
    let mut ys = [Complex64::default(); 3];
    if s.norm() == 0.0 {
        // p = q = 0: triple root.
    } else {
        let u0 = s.powf(1.0 / 3.0);
        let mut uk = u0;
        for y in ys.iter_mut() {
            *y = uk - p / (uk * 3.0);
            uk *= omega;
        }
    }
    let mut out = [RootSolveResult { root: Complex64::default(), residual: 0.0, iterations: 0 }; 3];
    for (slot, y) in out.iter_mut().zip(ys) {
        let mut w = y - a / 3.0;
        let (mut pw, mut dpw) = horner(&coeffs, w);
        let mut iterations = 0;
        while iterations < MAX_POLISH && pw.norm() > 0.0 && dpw.norm() > 0.0 {
            let next = w - pw / dpw;
            let (pn, dpn) = horner(&coeffs, next);
            if pn.norm() >= pw.norm() {
                break;
            }
            w = next;
            pw = pn;
            dpw = dpn;
            iterations += 1;
        }
        *slot = RootSolveResult { root: w, residual: pw.norm(), iterations };
    }
    Ok(out)
}
