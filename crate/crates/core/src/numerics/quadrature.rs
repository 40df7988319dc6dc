//! Adaptive Gauss–Kronrod quadrature along piecewise paths in the complex plane.

use num_complex::Complex64;

use crate::error::{Error, Result};

// 21-point Kronrod extension of the 10-point Gauss rule.
const XGK: [f64; 11] = [
    0.995657163025808080735527280689003,
    0.973906528517171720077964012084452,
    0.930157491355708226001207180059508,
    0.865063366688984510732096688423493,
    0.780817726586416897063717578345042,
    0.679409568299024406234327365114874,
    0.562757134668604683339000099272694,
    0.433395394129247190799265943165784,
    0.294392862701460198131126603103866,
    0.148874338981631210884826001129720,
    0.000000000000000000000000000000000,
];

const WG: [f64; 5] = [
    0.066671344308688137593568809893332,
    0.149451349150580593145776339657697,
    0.219086362515982043995534934228163,
    0.269266719309996355091226921569469,
    0.295524224714752870173892994651338,
];

const WGK: [f64; 11] = [
    0.011694638867371874278064396062192,
    0.032558162307964727478818972459390,
    0.054755896574351996031381300244580,
    0.075039674810919952767043140916190,
    0.093125454583697605535065465083366,
    0.109387158802297641899210590325805,
    0.123491976262065851077958109831074,
    0.134709217311473325928054001771707,
    0.142775938577060080797094273138717,
    0.147739104901338491374841515972068,
    0.149445554002916905664936468389821,
];

/// Cap on the number of live intervals per segment.
const MAX_INTERVALS: usize = 20_000;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadratureConfig {
    pub abs_tol: f64,
    pub rel_tol: f64,
    pub max_depth: u32,
    /// Rays are cut off at this distance from their origin.
    pub tail_length: f64,
    pub semicircle_radius: f64,
}

impl Default for QuadratureConfig {
    fn default() -> Self {
        Self {
            abs_tol: 1e-12,
            rel_tol: 1e-10,
            max_depth: 30,
            tail_length: 40.0,
            semicircle_radius: 0.5,
        }
    }
}

impl QuadratureConfig {
    /// Tail length suited to an integrand decaying like `exp(-rate * t)`.
    pub fn tail_for_decay(rate: f64) -> f64 {
        40.0 / rate.abs().min(1.0)
    }

    pub fn with_tolerances(mut self, abs_tol: f64, rel_tol: f64) -> Self {
        self.abs_tol = abs_tol;
        self.rel_tol = rel_tol;
        self
    }

    fn validate(&self) -> Result<()> {
        let ok = self.abs_tol > 0.0
            && self.rel_tol > 0.0
            && self.max_depth > 0
            && self.tail_length > 0.0
            && self.semicircle_radius > 0.0;
        if ok {
            Ok(())
        } else {
            Err(Error::InvalidArgument(format!("quadrature config {self:?}")))
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Segment {
    Line { from: Complex64, to: Complex64 },
    /// Arc `center + radius * exp(i*theta)` for theta running from `start` to `end`.
    Arc { center: Complex64, radius: f64, start: f64, end: f64 },
    /// Half-line `origin + t * direction`, `t >= 0`; `outward` runs from the origin to infinity.
    Ray { origin: Complex64, direction: Complex64, outward: bool },
}

impl Segment {
    /// Finite endpoints; `None` stands for the point at infinity.
    pub fn endpoints(&self) -> (Option<Complex64>, Option<Complex64>) {
        match *self {
            Segment::Line { from, to } => (Some(from), Some(to)),
            Segment::Arc { center, radius, start, end } => (
                Some(center + Complex64::from_polar(radius, start)),
                Some(center + Complex64::from_polar(radius, end)),
            ),
            Segment::Ray { origin, outward: true, .. } => (Some(origin), None),
            Segment::Ray { origin, outward: false, .. } => (None, Some(origin)),
        }
    }

    pub fn length(&self) -> f64 {
        match *self {
            Segment::Line { from, to } => (to - from).norm(),
            Segment::Arc { radius, start, end, .. } => radius * (end - start).abs(),
            Segment::Ray { .. } => f64::INFINITY,
        }
    }

    pub fn reversed(&self) -> Segment {
        match *self {
            Segment::Line { from, to } => Segment::Line { from: to, to: from },
            Segment::Arc { center, radius, start, end } => Segment::Arc { center, radius, start: end, end: start },
            Segment::Ray { origin, direction, outward } => Segment::Ray { origin, direction, outward: !outward },
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ContourPath {
    segments: Vec<Segment>,
}

fn close(a: Complex64, b: Complex64) -> bool {
    (a - b).norm() <= 1e-13 * (1.0 + a.norm().max(b.norm()))
}

impl ContourPath {
    pub fn new(segments: Vec<Segment>) -> Result<Self> {
        if segments.is_empty() {
            return Err(Error::InvalidArgument("empty contour".into()));
        }
        for w in segments.windows(2) {
            match (w[0].endpoints().1, w[1].endpoints().0) {
                (Some(a), Some(b)) if close(a, b) => {}
                _ => return Err(Error::InvalidArgument("contour segments are not connected".into())),
            }
        }
        let degenerate_ray = segments
            .iter()
            .any(|s| matches!(s, Segment::Ray { direction, .. } if direction.norm() == 0.0));
        if degenerate_ray {
            return Err(Error::InvalidArgument("ray with zero direction".into()));
        }
        Ok(Self { segments })
    }

    /// Straight segments through the given vertices.
    pub fn polyline(vertices: &[Complex64]) -> Result<Self> {
        if vertices.len() < 2 {
            return Err(Error::InvalidArgument("a polyline needs at least two vertices".into()));
        }
        Self::new(vertices.windows(2).map(|w| Segment::Line { from: w[0], to: w[1] }).collect())
    }

    /// Closed circle traversed counterclockwise.
    pub fn circle(center: Complex64, radius: f64) -> Result<Self> {
        Self::new(vec![Segment::Arc { center, radius, start: 0.0, end: 2.0 * std::f64::consts::PI }])
    }

    /// `(-inf, -R]`, then the upper half circle of radius `R` from `-R` to `R`, then `[R, inf)`.
    pub fn real_line_above_origin(radius: f64) -> Result<Self> {
        let r = Complex64::new(radius, 0.0);
        Self::new(vec![
            Segment::Ray { origin: -r, direction: Complex64::new(-1.0, 0.0), outward: false },
            Segment::Arc { center: Complex64::default(), radius, start: std::f64::consts::PI, end: 0.0 },
            Segment::Ray { origin: r, direction: Complex64::new(1.0, 0.0), outward: true },
        ])
    }

    pub fn segments(&self) -> &[Segment] {
        &self.segments
    }

    pub fn start(&self) -> Option<Complex64> {
        self.segments[0].endpoints().0
    }

    pub fn end(&self) -> Option<Complex64> {
        self.segments[self.segments.len() - 1].endpoints().1
    }

    /// Total length; infinite when the path contains a ray.
    pub fn length(&self) -> f64 {
        self.segments.iter().map(Segment::length).sum()
    }

    pub fn reversed(&self) -> Self {
        Self { segments: self.segments.iter().rev().map(Segment::reversed).collect() }
    }

    pub fn concat(&self, other: &Self) -> Result<Self> {
        let mut segments = self.segments.clone();
        segments.extend_from_slice(&other.segments);
        Self::new(segments)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Integral {
    pub value: Complex64,
    pub error: f64,
    /// Magnitude of the last panel on any truncated ray (0 without rays).
    pub tail: f64,
}

struct Panel {
    a: f64,
    b: f64,
    depth: u32,
    value: Complex64,
    error: f64,
}

/// One Kronrod panel of `g` over `[a, b]`: (value, error estimate, integral of |g|).
fn kronrod<G>(g: &G, a: f64, b: f64) -> Result<(Complex64, f64, f64)>
where
    G: Fn(f64) -> Result<Complex64>,
{
    let c = 0.5 * (a + b);
    let h = 0.5 * (b - a);
    let fc = g(c)?;
    let mut res_k = fc * WGK[10];
    let mut res_g = Complex64::default();
    let mut res_abs = fc.norm() * WGK[10];
    let mut fv1 = [Complex64::default(); 10];
    let mut fv2 = [Complex64::default(); 10];
    for j in 0..10 {
        let dx = h * XGK[j];
        let f1 = g(c - dx)?;
        let f2 = g(c + dx)?;
        fv1[j] = f1;
        fv2[j] = f2;
        res_k += (f1 + f2) * WGK[j];
        res_abs += (f1.norm() + f2.norm()) * WGK[j];
        if j % 2 == 1 {
            res_g += (f1 + f2) * WG[j / 2];
        }
    }
    let mean = res_k * 0.5;
    let mut res_asc = WGK[10] * (fc - mean).norm();
    for j in 0..10 {
        res_asc += WGK[j] * ((fv1[j] - mean).norm() + (fv2[j] - mean).norm());
    }
    let hh = h.abs();
    let value = res_k * h;
    res_abs *= hh;
    res_asc *= hh;
    let mut err = ((res_k - res_g) * h).norm();
    if res_asc != 0.0 && err != 0.0 {
        err = res_asc * (200.0 * err / res_asc).powf(1.5).min(1.0);
    }
    if res_abs > f64::MIN_POSITIVE / (50.0 * f64::EPSILON) {
        err = err.max(50.0 * f64::EPSILON * res_abs);
    }
    Ok((value, err, res_abs))
}

/// Globally adaptive integration of `g` over `[a, b]`; returns (value, error, integral of |g|).
fn adapt<G>(g: &G, a: f64, b: f64, abs_tol: f64, rel_tol: f64, max_depth: u32) -> Result<(Complex64, f64, f64)>
where
    G: Fn(f64) -> Result<Complex64>,
{
    let (v, e, abs) = kronrod(g, a, b)?;
    let mut panels = vec![Panel { a, b, depth: 0, value: v, error: e }];
    let mut total_abs = abs;
    loop {
        let total: Complex64 = panels.iter().map(|p| p.value).sum();
        let err: f64 = panels.iter().map(|p| p.error).sum();
        if err <= abs_tol.max(rel_tol * total.norm()) {
            return Ok((total, err, total_abs));
        }
        let (idx, worst) = panels
            .iter()
            .enumerate()
            .max_by(|x, y| x.1.error.total_cmp(&y.1.error))
            .expect("at least one panel");
        if worst.depth >= max_depth || panels.len() >= MAX_INTERVALS {
            return Err(Error::NoConvergence { estimate: total, error: err });
        }
        let (pa, pb, depth) = (worst.a, worst.b, worst.depth);
        let mid = 0.5 * (pa + pb);
        let (v1, e1, a1) = kronrod(g, pa, mid)?;
        let (v2, e2, a2) = kronrod(g, mid, pb)?;
        total_abs += a1 + a2;
        panels[idx] = Panel { a: pa, b: mid, depth: depth + 1, value: v1, error: e1 };
        panels.push(Panel { a: mid, b: pb, depth: depth + 1, value: v2, error: e2 });
    }
}

fn sample<F>(f: &F, z: Complex64) -> Result<Complex64>
where
    F: Fn(Complex64) -> Complex64,
{
    let v = f(z);
    if v.re.is_finite() && v.im.is_finite() {
        Ok(v)
    } else {
        Err(Error::SingularSample { location: z })
    }
}

fn integrate_segment<F>(f: &F, seg: &Segment, cfg: &QuadratureConfig) -> Result<Integral>
where
    F: Fn(Complex64) -> Complex64,
{
    let (tol_a, tol_r, depth) = (cfg.abs_tol, cfg.rel_tol, cfg.max_depth);
    match *seg {
        Segment::Line { from, to } => {
            let d = to - from;
            let g = |s: f64| Ok(sample(f, from + d * s)? * d);
            let (value, error, _) = adapt(&g, 0.0, 1.0, tol_a, tol_r, depth)?;
            Ok(Integral { value, error, tail: 0.0 })
        }
        Segment::Arc { center, radius, start, end } => {
            let g = |th: f64| {
                let e = Complex64::from_polar(radius, th);
                Ok(sample(f, center + e)? * Complex64::i() * e)
            };
            let (value, error, _) = adapt(&g, start, end, tol_a, tol_r, depth)?;
            Ok(Integral { value, error, tail: 0.0 })
        }
        Segment::Ray { origin, direction, outward } => {
            let dir = direction / direction.norm();
            let g = |t: f64| Ok(sample(f, origin + dir * t)? * dir);
            let mut value = Complex64::default();
            let mut error = 0.0;
            let mut t = 0.0;
            let mut width = 0.5f64.min(cfg.tail_length);
            let max_width = (cfg.tail_length / 16.0).max(0.5);
            let mut tail;
            let mut panels = 0;
            loop {
                let b = (t + width).min(cfg.tail_length);
                let (v, e, mag) = adapt(&g, t, b, tol_a, tol_r, depth)?;
                value += v;
                error += e;
                tail = mag;
                panels += 1;
                t = b;
                if (panels >= 2 && mag < tol_a * 1e-2) || t >= cfg.tail_length {
                    break;
                }
                width = (2.0 * width).min(max_width);
            }
            if !outward {
                value = -value;
            }
            Ok(Integral { value, error, tail })
        }
    }
}

/// Integrates `f` along `path`.
pub fn integrate_path<F>(f: F, path: &ContourPath, cfg: &QuadratureConfig) -> Result<Integral>
where
    F: Fn(Complex64) -> Complex64,
{
    cfg.validate()?;
    let mut out = Integral { value: Complex64::default(), error: 0.0, tail: 0.0 };
    for seg in &path.segments {
        let part = integrate_segment(&f, seg, cfg)?;
        out.value += part.value;
        out.error += part.error;
        out.tail = out.tail.max(part.tail);
    }
    Ok(out)
}
