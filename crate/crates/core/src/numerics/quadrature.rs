//! Adaptive 7/15-point Gauss–Kronrod quadrature over finite and
//! exponentially damped semi-infinite ranges.
//!
//! The integrand may be scalar, complex, or a fixed-size vector of complex
//! values; vector integrands share one panel tree, so all components are
//! refined together and the error is measured with the max-norm.

use std::cmp::Ordering;
use std::collections::BinaryHeap;
use std::fmt;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Tolerances and limits for the adaptive integrator.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct QuadratureSpec {
    pub relative_tolerance: f64,
    pub absolute_tolerance: f64,
    /// Bisections allowed beyond the initial partition.
    pub max_subdivisions: usize,
    /// The evanescent range is truncated at `evanescent_cutoff_scale / decay_scale`.
    pub evanescent_cutoff_scale: f64,
}

impl Default for QuadratureSpec {
    fn default() -> Self {
        Self {
            relative_tolerance: 1e-10,
            absolute_tolerance: 1e-14,
            max_subdivisions: 200,
            evanescent_cutoff_scale: 40.0,
        }
    }
}

impl QuadratureSpec {
    pub fn validate(&self) -> Result<(), String> {
        if !(self.relative_tolerance > 0.0) || !(self.absolute_tolerance > 0.0) {
            return Err(format!(
                "tolerances must be positive (relative {}, absolute {})",
                self.relative_tolerance, self.absolute_tolerance
            ));
        }
        if self.max_subdivisions < 1 {
            return Err("max_subdivisions must be at least 1".into());
        }
        if !(self.evanescent_cutoff_scale > 0.0) || !self.evanescent_cutoff_scale.is_finite() {
            return Err(format!(
                "evanescent_cutoff_scale must be positive, got {}",
                self.evanescent_cutoff_scale
            ));
        }
        Ok(())
    }
}

/// Values that can be integrated: a vector space with a norm.
pub trait QuadValue: Copy + fmt::Debug {
    fn zero() -> Self;
    fn add(self, other: Self) -> Self;
    fn scale(self, factor: f64) -> Self;
    /// Max-norm over components.
    fn norm(&self) -> f64;

    fn sub(self, other: Self) -> Self {
        self.add(other.scale(-1.0))
    }
}

impl QuadValue for f64 {
    fn zero() -> Self {
        0.0
    }
    fn add(self, other: Self) -> Self {
        self + other
    }
    fn scale(self, factor: f64) -> Self {
        self * factor
    }
    fn norm(&self) -> f64 {
        self.abs()
    }
}

impl QuadValue for Complex64 {
    fn zero() -> Self {
        Complex64::new(0.0, 0.0)
    }
    fn add(self, other: Self) -> Self {
        self + other
    }
    fn scale(self, factor: f64) -> Self {
        self * factor
    }
    fn norm(&self) -> f64 {
        self.re.abs().max(self.im.abs())
    }
}

impl<const N: usize> QuadValue for [Complex64; N] {
    fn zero() -> Self {
        [Complex64::new(0.0, 0.0); N]
    }
    fn add(mut self, other: Self) -> Self {
        for (a, b) in self.iter_mut().zip(other) {
            *a += b;
        }
        self
    }
    fn scale(mut self, factor: f64) -> Self {
        for a in self.iter_mut() {
            *a *= factor;
        }
        self
    }
    fn norm(&self) -> f64 {
        self.iter().map(QuadValue::norm).fold(0.0, f64::max)
    }
}

/// An integral estimate with its error bound.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Estimate<T> {
    pub value: T,
    pub error: f64,
    pub subdivisions: usize,
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum QuadratureError<T: fmt::Debug> {
    #[error("invalid integration interval [{a}, {b}]")]
    InvalidInterval { a: f64, b: f64 },
    #[error("decay scale must be positive, got {0}")]
    InvalidDecayScale(f64),
    #[error("invalid quadrature spec: {0}")]
    InvalidSpec(String),
    #[error("integrand is not finite at {at}")]
    NonFinite { at: f64 },
    /// Carries the best estimate reached before the budget ran out.
    #[error("no convergence: error {:e} exceeds target {target:e} after {} subdivisions", best.error, best.subdivisions)]
    NotConverged { best: Estimate<T>, target: f64 },
}

impl<T: fmt::Debug> QuadratureError<T> {
    /// Error estimate and subdivision count, where meaningful.
    pub fn progress(&self) -> (f64, usize) {
        match self {
            QuadratureError::NotConverged { best, .. } => (best.error, best.subdivisions),
            _ => (f64::NAN, 0),
        }
    }
}

pub type QuadResult<T> = Result<Estimate<T>, QuadratureError<T>>;

// Kronrod nodes (descending, last is the centre) and weights for the 7/15 pair.
const XGK: [f64; 8] = [
    0.991_455_371_120_812_6,
    0.949_107_912_342_758_5,
    0.864_864_423_359_769_1,
    0.741_531_185_599_394_4,
    0.586_087_235_467_691_1,
    0.405_845_151_377_397_2,
    0.207_784_955_007_898_5,
    0.0,
];
const WGK: [f64; 8] = [
    0.022_935_322_010_529_22,
    0.063_092_092_629_978_55,
    0.104_790_010_322_250_2,
    0.140_653_259_715_525_9,
    0.169_004_726_639_267_9,
    0.190_350_578_064_785_4,
    0.204_432_940_075_298_9,
    0.209_482_141_084_727_8,
];
// Gauss weights for nodes XGK[1], XGK[3], XGK[5], XGK[7].
const WG: [f64; 4] = [
    0.129_484_966_168_869_7,
    0.279_705_391_489_276_7,
    0.381_830_050_505_118_9,
    0.417_959_183_673_469_4,
];

#[derive(Debug, Clone, Copy)]
struct Panel<T> {
    a: f64,
    b: f64,
    value: T,
    error: f64,
}

impl<T> PartialEq for Panel<T> {
    fn eq(&self, other: &Self) -> bool {
        self.error.total_cmp(&other.error) == Ordering::Equal
    }
}
impl<T> Eq for Panel<T> {}
impl<T> PartialOrd for Panel<T> {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl<T> Ord for Panel<T> {
    fn cmp(&self, other: &Self) -> Ordering {
        self.error.total_cmp(&other.error)
    }
}

fn kronrod15<T, F>(f: &F, a: f64, b: f64) -> Result<Panel<T>, QuadratureError<T>>
where
    T: QuadValue,
    F: Fn(f64) -> T,
{
    let centre = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let eval = |x: f64| -> Result<T, QuadratureError<T>> {
        let v = f(x);
        if v.norm().is_finite() {
            Ok(v)
        } else {
            Err(QuadratureError::NonFinite { at: x })
        }
    };

    let mut values = [T::zero(); 15];
    values[7] = eval(centre)?;
    for j in 0..7 {
        let dx = half * XGK[j];
        values[j] = eval(centre - dx)?;
        values[14 - j] = eval(centre + dx)?;
    }

    let mut kronrod = values[7].scale(WGK[7]);
    let mut gauss = values[7].scale(WG[3]);
    let mut abs_sum = WGK[7] * values[7].norm();
    for j in 0..7 {
        let pair = values[j].add(values[14 - j]);
        kronrod = kronrod.add(pair.scale(WGK[j]));
        abs_sum += WGK[j] * (values[j].norm() + values[14 - j].norm());
        if j % 2 == 1 {
            gauss = gauss.add(pair.scale(WG[j / 2]));
        }
    }
    let mean = kronrod.scale(0.5);
    let mut asc = WGK[7] * values[7].sub(mean).norm();
    for j in 0..7 {
        asc += WGK[j] * (values[j].sub(mean).norm() + values[14 - j].sub(mean).norm());
    }

    let width = half.abs();
    let raw = kronrod.sub(gauss).norm() * width;
    let res_abs = abs_sum * width;
    let res_asc = asc * width;
    let error = rescale_error(raw, res_abs, res_asc);
    Ok(Panel {
        a,
        b,
        value: kronrod.scale(half),
        error,
    })
}

fn rescale_error(raw: f64, res_abs: f64, res_asc: f64) -> f64 {
    let mut err = raw;
    if res_asc != 0.0 && err != 0.0 {
        let scale = (200.0 * err / res_asc).powf(1.5);
        err = if scale < 1.0 { res_asc * scale } else { res_asc };
    }
    if res_abs > f64::MIN_POSITIVE / (50.0 * f64::EPSILON) {
        err = err.max(50.0 * f64::EPSILON * res_abs);
    }
    err
}

/// Adaptive integration over `[a, b]`.
pub fn integrate_finite<T, F>(f: F, a: f64, b: f64, spec: &QuadratureSpec) -> QuadResult<T>
where
    T: QuadValue,
    F: Fn(f64) -> T,
{
    integrate_partitioned(f, &[a, b], spec)
}

/// Adaptive integration over `[points[0], points[last]]`, starting from the
/// partition given by the strictly increasing `points`.
pub fn integrate_partitioned<T, F>(f: F, points: &[f64], spec: &QuadratureSpec) -> QuadResult<T>
where
    T: QuadValue,
    F: Fn(f64) -> T,
{
    spec.validate().map_err(QuadratureError::InvalidSpec)?;
    if points.len() < 2 {
        return Err(QuadratureError::InvalidInterval {
            a: points.first().copied().unwrap_or(f64::NAN),
            b: f64::NAN,
        });
    }
    for w in points.windows(2) {
        if !(w[0] < w[1]) || !w[0].is_finite() || !w[1].is_finite() {
            return Err(QuadratureError::InvalidInterval { a: w[0], b: w[1] });
        }
    }

    let mut heap = BinaryHeap::with_capacity(points.len() + spec.max_subdivisions + 1);
    for w in points.windows(2) {
        heap.push(kronrod15(&f, w[0], w[1])?);
    }

    let mut subdivisions = 0;
    loop {
        let (total, error) = heap.iter().fold((T::zero(), 0.0), |(v, e), p| {
            (v.add(p.value), e + p.error)
        });
        let target = spec.absolute_tolerance.max(spec.relative_tolerance * total.norm());
        if error <= target {
            return Ok(Estimate {
                value: total,
                error,
                subdivisions,
            });
        }
        let worst = heap.pop().expect("heap is never empty");
        let mid = 0.5 * (worst.a + worst.b);
        let exhausted = subdivisions >= spec.max_subdivisions
            || !(worst.a < mid && mid < worst.b);
        if exhausted {
            heap.push(worst);
            return Err(QuadratureError::NotConverged {
                best: Estimate {
                    value: total,
                    error,
                    subdivisions,
                },
                target,
            });
        }
        heap.push(kronrod15(&f, worst.a, mid)?);
        heap.push(kronrod15(&f, mid, worst.b)?);
        subdivisions += 1;
    }
}

/// Integral over `[0, inf)` of an integrand carrying an `exp(-decay_scale * k)`
/// envelope. The range is cut at `evanescent_cutoff_scale / decay_scale`; the
/// discarded tail is bounded by the integrand at the cutoff and added to the
/// error estimate.
pub fn integrate_evanescent<T, F>(f: F, decay_scale: f64, spec: &QuadratureSpec) -> QuadResult<T>
where
    T: QuadValue,
    F: Fn(f64) -> T,
{
    integrate_evanescent_partitioned(f, decay_scale, &[], spec)
}

/// As [`integrate_evanescent`], with interior breakpoints (sorted, positive)
/// seeding the initial partition. Breakpoints beyond the cutoff are ignored.
pub fn integrate_evanescent_partitioned<T, F>(
    f: F,
    decay_scale: f64,
    interior: &[f64],
    spec: &QuadratureSpec,
) -> QuadResult<T>
where
    T: QuadValue,
    F: Fn(f64) -> T,
{
    if !(decay_scale > 0.0) || !decay_scale.is_finite() {
        return Err(QuadratureError::InvalidDecayScale(decay_scale));
    }
    spec.validate().map_err(QuadratureError::InvalidSpec)?;
    let cutoff = spec.evanescent_cutoff_scale / decay_scale;
    let mut points = Vec::with_capacity(interior.len() + 2);
    points.push(0.0);
    points.extend(interior.iter().copied().filter(|&p| p > 0.0 && p < cutoff));
    points.push(cutoff);
    points.dedup();

    let tail = 2.0 * f(cutoff).norm() / decay_scale;
    let add_tail = |mut e: Estimate<T>| {
        e.error += tail;
        e
    };
    match integrate_partitioned(f, &points, spec) {
        Ok(e) => Ok(add_tail(e)),
        Err(QuadratureError::NotConverged { best, target }) => Err(QuadratureError::NotConverged {
            best: add_tail(best),
            target,
        }),
        Err(e) => Err(e),
    }
}
