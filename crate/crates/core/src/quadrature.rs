//! Adaptive Gauss-Kronrod (7/15) integration and a grid convexity test.
//!
//! The integrator is the reference oracle every bound is checked against,
//! so the per-panel error estimate is the raw `|K15 - G7|` difference
//! (no QUADPACK-style rescaling), floored at a few ulps of the panel's
//! absolute integral.

use std::cmp::Ordering;
use std::collections::BinaryHeap;

use serde::Serialize;

use crate::error::{Error, Result};

/// Closed interval `[a, b]` with `a < b`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Interval {
    a: f64,
    b: f64,
}

impl Interval {
    pub fn new(a: f64, b: f64) -> Result<Self> {
        if !(a.is_finite() && b.is_finite() && a < b) {
            return Err(Error::InvalidInterval { a, b });
        }
        Ok(Self { a, b })
    }

    pub fn a(&self) -> f64 {
        self.a
    }

    pub fn b(&self) -> f64 {
        self.b
    }

    pub fn length(&self) -> f64 {
        self.b - self.a
    }

    pub fn midpoint(&self) -> f64 {
        0.5 * (self.a + self.b)
    }

    pub fn contains(&self, x: f64) -> bool {
        self.a <= x && x <= self.b
    }

    pub fn check_point(&self, x: f64) -> Result<()> {
        if self.contains(x) {
            Ok(())
        } else {
            Err(Error::PointOutsideInterval {
                x,
                a: self.a,
                b: self.b,
            })
        }
    }

    /// `count` uniformly spaced points including both endpoints.
    pub fn grid(&self, count: usize) -> Vec<f64> {
        match count {
            0 => Vec::new(),
            1 => vec![self.midpoint()],
            _ => {
                let h = self.length() / (count - 1) as f64;
                (0..count)
                    .map(|i| {
                        if i == count - 1 {
                            self.b
                        } else {
                            self.a + i as f64 * h
                        }
                    })
                    .collect()
            }
        }
    }
}

pub const DEFAULT_TOLERANCE: f64 = 1e-11;
pub const DEFAULT_MAX_SUBDIVISIONS: usize = 4000;
pub const CONVEXITY_GRID: usize = 513;
pub const CONVEXITY_TOLERANCE: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct QuadResult {
    pub value: f64,
    pub err_estimate: f64,
    pub subdivisions: usize,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadConfig {
    /// Target accuracy, applied as `max(tol, tol * |value|)`.
    pub tol: f64,
    pub max_subdivisions: usize,
}

impl Default for QuadConfig {
    fn default() -> Self {
        Self {
            tol: DEFAULT_TOLERANCE,
            max_subdivisions: DEFAULT_MAX_SUBDIVISIONS,
        }
    }
}

// 15-point Kronrod abscissae (non-negative half) and weights; the 7-point
// Gauss rule uses the odd-indexed abscissae.
#[allow(clippy::excessive_precision)]
const XGK: [f64; 8] = [
    0.991_455_371_120_812_639_206_854_697_526_329,
    0.949_107_912_342_758_524_526_189_684_047_851,
    0.864_864_423_359_769_072_789_712_788_640_926,
    0.741_531_185_599_394_439_863_864_773_280_788,
    0.586_087_235_467_691_130_294_144_845_693_013,
    0.405_845_151_377_397_166_906_606_412_076_961,
    0.207_784_955_007_898_467_600_689_403_773_245,
    0.0,
];
#[allow(clippy::excessive_precision)]
const WGK: [f64; 8] = [
    0.022_935_322_010_529_224_963_732_008_058_970,
    0.063_092_092_629_978_553_290_700_663_189_204,
    0.104_790_010_322_250_183_839_876_322_541_518,
    0.140_653_259_715_525_918_745_189_590_510_238,
    0.169_004_726_639_267_902_826_583_426_598_550,
    0.190_350_578_064_785_409_913_256_402_421_014,
    0.204_432_940_075_298_892_414_161_999_234_649,
    0.209_482_141_084_727_828_012_999_174_891_714,
];
#[allow(clippy::excessive_precision)]
const WG: [f64; 4] = [
    0.129_484_966_168_869_693_270_611_432_679_082,
    0.279_705_391_489_276_667_901_467_771_423_780,
    0.381_830_050_505_118_944_950_369_775_488_975,
    0.417_959_183_673_469_387_755_102_040_816_327,
];

#[derive(Debug, Clone, Copy)]
struct Panel {
    a: f64,
    b: f64,
    value: f64,
    err: f64,
    /// Error estimate is at the rounding floor; splitting cannot help.
    settled: bool,
}

impl PartialEq for Panel {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}

impl Eq for Panel {}

impl PartialOrd for Panel {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Panel {
    fn cmp(&self, other: &Self) -> Ordering {
        // max-heap on error; ties go to the leftmost panel
        self.err
            .total_cmp(&other.err)
            .then_with(|| other.a.total_cmp(&self.a))
    }
}

fn sample<F>(g: &F, t: f64) -> Result<f64>
where
    F: Fn(f64) -> Result<f64>,
{
    let v = g(t)?;
    if v.is_finite() {
        Ok(v)
    } else {
        Err(Error::NonFiniteSample { t })
    }
}

fn gk15<F>(g: &F, a: f64, b: f64) -> Result<Panel>
where
    F: Fn(f64) -> Result<f64>,
{
    let center = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let fc = sample(g, center)?;
    let mut kronrod = fc * WGK[7];
    let mut gauss = fc * WG[3];
    let mut abs_sum = fc.abs() * WGK[7];
    for j in 0..7 {
        let dx = half * XGK[j];
        let f1 = sample(g, center - dx)?;
        let f2 = sample(g, center + dx)?;
        kronrod += WGK[j] * (f1 + f2);
        abs_sum += WGK[j] * (f1.abs() + f2.abs());
        if j % 2 == 1 {
            gauss += WG[j / 2] * (f1 + f2);
        }
    }
    let value = kronrod * half;
    let abs_value = abs_sum * half.abs();
    let raw = ((kronrod - gauss) * half).abs();
    let floor = 50.0 * f64::EPSILON * abs_value;
    Ok(Panel {
        a,
        b,
        value,
        err: raw.max(floor),
        settled: raw <= floor,
    })
}

/// Integrate a fallible integrand; errors from `g` are propagated as-is.
pub fn try_integrate_with<F>(g: F, iv: Interval, cfg: &QuadConfig) -> Result<QuadResult>
where
    F: Fn(f64) -> Result<f64>,
{
    if cfg.tol.is_nan() || cfg.tol <= 0.0 {
        return Err(Error::ParamOutOfDomain(format!(
            "quadrature tolerance must be positive, got {}",
            cfg.tol
        )));
    }
    let first = gk15(&g, iv.a, iv.b)?;
    let (mut value, mut err) = (first.value, first.err);
    let mut heap = BinaryHeap::from([first]);
    let mut settled = Vec::new();
    let mut subdivisions = 0usize;
    loop {
        let target = cfg.tol.max(cfg.tol * value.abs());
        if err <= target || heap.is_empty() {
            heap.extend(settled);
            let (value, err) = totals(heap.into_vec());
            return Ok(QuadResult {
                value,
                err_estimate: err,
                subdivisions,
            });
        }
        if subdivisions >= cfg.max_subdivisions {
            return Err(Error::MaxSubdivisions {
                limit: cfg.max_subdivisions,
                err_estimate: err,
            });
        }
        let worst = heap.pop().expect("checked non-empty");
        if worst.settled {
            settled.push(worst);
            continue;
        }
        let mid = 0.5 * (worst.a + worst.b);
        if !(worst.a < mid && mid < worst.b) {
            // panel cannot be split further in double precision
            return Err(Error::MaxSubdivisions {
                limit: subdivisions,
                err_estimate: err,
            });
        }
        let left = gk15(&g, worst.a, mid)?;
        let right = gk15(&g, mid, worst.b)?;
        value += left.value + right.value - worst.value;
        err += left.err + right.err - worst.err;
        heap.push(left);
        heap.push(right);
        subdivisions += 1;
    }
}

/// Sums in left-to-right panel order.
fn totals(mut panels: Vec<Panel>) -> (f64, f64) {
    panels.sort_by(|p, q| p.a.total_cmp(&q.a));
    panels
        .iter()
        .fold((0.0, 0.0), |(v, e), p| (v + p.value, e + p.err))
}

pub fn try_integrate<F>(g: F, iv: Interval, tol: f64) -> Result<QuadResult>
where
    F: Fn(f64) -> Result<f64>,
{
    try_integrate_with(
        g,
        iv,
        &QuadConfig {
            tol,
            ..QuadConfig::default()
        },
    )
}

/// Integrate `g` over `iv` to accuracy `max(tol, tol*|I|)`.
pub fn integrate<F>(g: F, iv: Interval, tol: f64) -> Result<QuadResult>
where
    F: Fn(f64) -> f64,
{
    try_integrate(|t| Ok(g(t)), iv, tol)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ConvexityVerdict {
    pub convex: bool,
    /// Magnitude of the most negative second difference (0 if none).
    pub worst_violation: f64,
    pub grid_size: usize,
}

impl ConvexityVerdict {
    /// Verdict for a hypothesis that needs no convexity.
    pub fn not_required() -> Self {
        Self {
            convex: true,
            worst_violation: 0.0,
            grid_size: 0,
        }
    }
}

/// Second-difference convexity test on already sampled uniform-grid values.
pub fn convexity_of_samples(samples: &[f64]) -> ConvexityVerdict {
    let scale = samples.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    let tol = CONVEXITY_TOLERANCE.max(CONVEXITY_TOLERANCE * scale);
    let worst = samples
        .windows(3)
        .map(|w| w[0] - 2.0 * w[1] + w[2])
        .fold(0.0f64, |m, d| m.max(-d));
    ConvexityVerdict {
        convex: worst <= tol,
        worst_violation: worst,
        grid_size: samples.len(),
    }
}

pub fn try_check_convexity<F>(g: F, iv: Interval) -> Result<ConvexityVerdict>
where
    F: Fn(f64) -> Result<f64>,
{
    let samples = iv
        .grid(CONVEXITY_GRID)
        .into_iter()
        .map(|t| sample(&g, t))
        .collect::<Result<Vec<_>>>()?;
    Ok(convexity_of_samples(&samples))
}

/// Convexity of `g` on a 513-point uniform grid over `iv`.
pub fn check_convexity<F>(g: F, iv: Interval) -> Result<ConvexityVerdict>
where
    F: Fn(f64) -> f64,
{
    try_check_convexity(|t| Ok(g(t)), iv)
}
