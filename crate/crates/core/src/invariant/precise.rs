//! Multiprecision evaluation of the exact q-sum.

use astro_float::{BigFloat, Consts, RoundingMode, Sign};

use crate::error::{Error, Result};
use crate::logc::LogComplex;
use crate::params::ModelParams;

const RM: RoundingMode = RoundingMode::ToEven;

#[derive(Clone, Debug)]
struct BigComplex {
    re: BigFloat,
    im: BigFloat,
}

impl BigComplex {
    fn new(re: BigFloat, im: BigFloat) -> Self {
        Self { re, im }
    }

    fn real(x: f64, p: usize) -> Self {
        Self::new(BigFloat::from_f64(x, p), BigFloat::from_f64(0.0, p))
    }

    fn add(&self, o: &Self, p: usize) -> Self {
        Self::new(self.re.add(&o.re, p, RM), self.im.add(&o.im, p, RM))
    }

    fn sub(&self, o: &Self, p: usize) -> Self {
        Self::new(self.re.sub(&o.re, p, RM), self.im.sub(&o.im, p, RM))
    }

    fn mul(&self, o: &Self, p: usize) -> Self {
        let re = self.re.mul(&o.re, p, RM).sub(&self.im.mul(&o.im, p, RM), p, RM);
        let im = self.re.mul(&o.im, p, RM).add(&self.im.mul(&o.re, p, RM), p, RM);
        Self::new(re, im)
    }

    fn div(&self, o: &Self, p: usize) -> Self {
        let den = o.re.mul(&o.re, p, RM).add(&o.im.mul(&o.im, p, RM), p, RM);
        let re = self.re.mul(&o.re, p, RM).add(&self.im.mul(&o.im, p, RM), p, RM);
        let im = self.im.mul(&o.re, p, RM).sub(&self.re.mul(&o.im, p, RM), p, RM);
        Self::new(re.div(&den, p, RM), im.div(&den, p, RM))
    }

    fn powu(&self, mut k: u64, p: usize) -> Self {
        let mut base = self.clone();
        let mut acc = Self::real(1.0, p);
        while k > 0 {
            if k & 1 == 1 {
                acc = acc.mul(&base, p);
            }
            base = base.mul(&base, p);
            k >>= 1;
        }
        acc
    }

    fn is_finite(&self) -> bool {
        !(self.re.is_nan() || self.im.is_nan() || self.re.is_inf() || self.im.is_inf())
    }
}

/// Splits `x` into a mantissa in `[0.5, 1)` (signed) and a binary exponent.
fn split(x: &BigFloat) -> (f64, i64) {
    if x.is_zero() {
        return (0.0, 0);
    }
    match x.as_raw_parts() {
        Some((words, _, sign, e, _)) => {
            let top = *words.last().expect("nonempty mantissa") as f64 / 18446744073709551616.0;
            let s = if sign == Sign::Neg { -1.0 } else { 1.0 };
            (s * top, e as i64)
        }
        None => (f64::NAN, 0),
    }
}

fn to_log_complex(z: &BigComplex) -> LogComplex {
    let (mr, er) = split(&z.re);
    let (mi, ei) = split(&z.im);
    let emax = if mr == 0.0 { ei } else if mi == 0.0 { er } else { er.max(ei) };
    let x = mr * 2f64.powi((er - emax).max(-1100) as i32);
    let y = mi * 2f64.powi((ei - emax).max(-1100) as i32);
    LogComplex::new(x.hypot(y).ln() + emax as f64 * std::f64::consts::LN_2, y.atan2(x))
}

/// Exact sum at `bits` of working precision; returns the value and the largest term.
pub(crate) fn exact_sum(params: &ModelParams, bits: usize) -> Result<(LogComplex, LogComplex)> {
    let p = bits;
    let mut cc = Consts::new().map_err(|e| Error::Precision(format!("{e:?}")))?;
    let big_n = params.big_n as u64;
    let shift = (params.n - 2) as u64;
    let level = params.level();
    // h = exp(xi / (2M)) = exp(u/(2M)) (cos(pi/M) + i sin(pi/M))
    let m2 = BigFloat::from_u64(2 * level, p);
    let radius = BigFloat::from_f64(params.u, p).div(&m2, p, RM).exp(p, RM, &mut cc);
    let angle = cc.pi(p, RM).div(&BigFloat::from_u64(level, p), p, RM);
    let h = BigComplex::new(
        radius.mul(&angle.cos(p, RM, &mut cc), p, RM),
        radius.mul(&angle.sin(p, RM, &mut cc), p, RM),
    );
    let one = BigComplex::real(1.0, p);
    let h_inv = one.div(&h, p);
    let q = h.mul(&h, p);
    let q_inv = h_inv.mul(&h_inv, p);
    // per-step factor h^{-(2N + n - 2)}
    let step = h_inv.powu(2 * big_n + shift, p);
    let h_shift = h.powu(shift, p);
    let h_shift_inv = h_inv.powu(shift, p);

    let mut hk = h.clone();
    let mut hk_inv = h_inv.clone();
    let mut down = q.powu(big_n - 1, p);
    let mut up = q.powu(big_n + shift + 1, p);
    let mut term = one.clone();
    let mut sum = one.clone();
    let mut max_term = to_log_complex(&one);
    for _k in 1..big_n {
        // [n-2+k] / [k]
        let num = hk.mul(&h_shift, p).sub(&hk_inv.mul(&h_shift_inv, p), p);
        let den = hk.sub(&hk_inv, p);
        let factors = one.sub(&down, p).mul(&one.sub(&up, p), p);
        term = term.mul(&num.div(&den, p), p).mul(&step, p).mul(&factors, p);
        sum = sum.add(&term, p);
        let lt = to_log_complex(&term);
        if lt.log_abs > max_term.log_abs {
            max_term = lt;
        }
        hk = hk.mul(&h, p);
        hk_inv = hk_inv.mul(&h_inv, p);
        down = down.mul(&q_inv, p);
        up = up.mul(&q, p);
    }
    if !sum.is_finite() {
        return Err(Error::Precision(format!("non-finite sum at {bits} bits")));
    }
    Ok((to_log_complex(&sum), max_term))
}
