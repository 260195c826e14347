//! Globally adaptive Gauss–Kronrod (7/15) quadrature on finite and
//! semi-infinite intervals.
//!
//! The semi-infinite piece `[T, ∞)` is mapped onto a finite interval with a
//! substitution picked from the declared tail class, and refined in the same
//! priority queue as the finite panels so one tolerance governs the total.

use std::cmp::Ordering;
use std::collections::BinaryHeap;

use crate::error::{Error, Result};

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

/// 7-point Gauss weights for the odd-indexed Kronrod nodes (last is the centre).
const WG: [f64; 4] = [
    0.129_484_966_168_869_693_270_611_432_679_082,
    0.279_705_391_489_276_667_901_467_771_423_780,
    0.381_830_050_505_118_944_950_369_775_488_975,
    0.417_959_183_673_469_387_755_102_040_816_327,
];

/// Tolerances and refinement limits.
#[derive(Debug, Clone, PartialEq)]
pub struct QuadratureSpec {
    pub abs_tol: f64,
    pub rel_tol: f64,
    pub max_subdivisions: usize,
    /// Interior break points; the largest one also ends the finite part of a
    /// semi-infinite integral.
    pub split_points: Vec<f64>,
}

impl Default for QuadratureSpec {
    fn default() -> Self {
        QuadratureSpec {
            abs_tol: 1e-12,
            rel_tol: 1e-10,
            max_subdivisions: 4000,
            split_points: Vec::new(),
        }
    }
}

impl QuadratureSpec {
    pub fn with_tolerances(abs_tol: f64, rel_tol: f64) -> Self {
        QuadratureSpec {
            abs_tol,
            rel_tol,
            ..Default::default()
        }
    }

    pub fn with_split_points(mut self, points: impl IntoIterator<Item = f64>) -> Self {
        self.split_points = points.into_iter().collect();
        self
    }

    fn validate(&self) -> Result<()> {
        if !(self.abs_tol > 0.0) || !(self.rel_tol > 0.0) {
            return Err(Error::invalid("quadrature tolerances must be positive"));
        }
        if self.max_subdivisions == 0 {
            return Err(Error::invalid("max_subdivisions must be at least 1"));
        }
        Ok(())
    }
}

/// Declared large-t behaviour of a semi-infinite integrand.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Tail {
    /// |f(t)| ≲ e^{-rate·t} times at most polynomial growth.
    Exponential { rate: f64 },
    /// |f(t)| ≲ t^{-decay}, decay > 1, with an expansion in integer powers of
    /// 1/t beyond the leading one.
    Algebraic { decay: f64 },
}

/// Integral value with its error estimate.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Quadrature {
    pub value: f64,
    pub error: f64,
    pub evaluations: usize,
}

struct Panel {
    a: f64,
    b: f64,
    segment: usize,
    value: f64,
    error: f64,
}

impl PartialEq for Panel {
    fn eq(&self, other: &Self) -> bool {
        self.error == other.error
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
        self.error.total_cmp(&other.error)
    }
}

fn rescale_error(err: f64, resabs: f64, resasc: f64) -> f64 {
    let mut e = err.abs();
    if resasc != 0.0 && e != 0.0 {
        e = resasc * (200.0 * e / resasc).powf(1.5).min(1.0);
    }
    if resabs > f64::MIN_POSITIVE / (50.0 * f64::EPSILON) {
        e = e.max(50.0 * f64::EPSILON * resabs);
    }
    e
}

fn gk15<F: Fn(f64) -> f64 + ?Sized>(f: &F, a: f64, b: f64) -> Result<(f64, f64)> {
    let centre = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let fc = f(centre);
    let mut kron = WGK[7] * fc;
    let mut gauss = WG[3] * fc;
    let mut resabs = WGK[7] * fc.abs();
    let mut fv1 = [0.0; 7];
    let mut fv2 = [0.0; 7];
    for j in 0..7 {
        let dx = half * XGK[j];
        let f1 = f(centre - dx);
        let f2 = f(centre + dx);
        fv1[j] = f1;
        fv2[j] = f2;
        kron += WGK[j] * (f1 + f2);
        resabs += WGK[j] * (f1.abs() + f2.abs());
        if j % 2 == 1 {
            gauss += WG[j / 2] * (f1 + f2);
        }
    }
    if !kron.is_finite() {
        return Err(Error::invalid(format!(
            "integrand is not finite on [{a}, {b}]"
        )));
    }
    let mean = 0.5 * kron;
    let mut resasc = WGK[7] * (fc - mean).abs();
    for j in 0..7 {
        resasc += WGK[j] * ((fv1[j] - mean).abs() + (fv2[j] - mean).abs());
    }
    let h = half.abs();
    let err = rescale_error((kron - gauss) * half, resabs * h, resasc * h);
    Ok((kron * half, err))
}

fn adaptive(
    segments: &[(&dyn Fn(f64) -> f64, f64, f64)],
    spec: &QuadratureSpec,
    context: &str,
) -> Result<Quadrature> {
    spec.validate()?;
    let mut heap = BinaryHeap::new();
    let mut value = 0.0;
    let mut error = 0.0;
    let mut evaluations = 0usize;
    for (i, &(f, a, b)) in segments.iter().enumerate() {
        if a == b {
            continue;
        }
        let (v, e) = gk15(f, a, b)?;
        evaluations += 15;
        value += v;
        error += e;
        heap.push(Panel {
            a,
            b,
            segment: i,
            value: v,
            error: e,
        });
    }
    let mut subdivisions = heap.len();
    loop {
        if error <= spec.abs_tol.max(spec.rel_tol * value.abs()) {
            return Ok(Quadrature {
                value,
                error,
                evaluations,
            });
        }
        let worst = match heap.pop() {
            Some(p) => p,
            None => {
                return Ok(Quadrature {
                    value,
                    error,
                    evaluations,
                })
            }
        };
        let mid = 0.5 * (worst.a + worst.b);
        if subdivisions >= spec.max_subdivisions || mid <= worst.a.min(worst.b) || mid >= worst.a.max(worst.b) {
            return Err(Error::NonConvergence {
                context: context.to_string(),
                value,
                error,
            });
        }
        let f = segments[worst.segment].0;
        let (v1, e1) = gk15(f, worst.a, mid)?;
        let (v2, e2) = gk15(f, mid, worst.b)?;
        evaluations += 30;
        subdivisions += 1;
        value += v1 + v2 - worst.value;
        error += e1 + e2 - worst.error;
        // guard against drift in the running error sum
        if subdivisions % 64 == 0 {
            error = heap.iter().map(|p| p.error).sum::<f64>() + e1 + e2;
        }
        heap.push(Panel {
            a: worst.a,
            b: mid,
            segment: worst.segment,
            value: v1,
            error: e1,
        });
        heap.push(Panel {
            a: mid,
            b: worst.b,
            segment: worst.segment,
            value: v2,
            error: e2,
        });
    }
}

fn breakpoints(a: f64, b: f64, splits: &[f64]) -> Vec<f64> {
    let mut pts = vec![a];
    let mut inner: Vec<f64> = splits.iter().copied().filter(|&p| p > a && p < b).collect();
    inner.sort_by(f64::total_cmp);
    inner.dedup();
    pts.extend(inner);
    pts.push(b);
    pts
}

/// ∫_a^b f(t) dt on a finite interval.
pub fn integrate<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, spec: &QuadratureSpec) -> Result<Quadrature> {
    if !a.is_finite() || !b.is_finite() || b < a {
        return Err(Error::invalid(format!("bad finite interval [{a}, {b}]")));
    }
    let pts = breakpoints(a, b, &spec.split_points);
    let segs: Vec<(&dyn Fn(f64) -> f64, f64, f64)> =
        pts.windows(2).map(|w| (&f as &dyn Fn(f64) -> f64, w[0], w[1])).collect();
    adaptive(&segs, spec, "finite-interval quadrature")
}

/// ∫_lower^∞ f(t) dt, with the tail beyond the largest split point (or
/// `lower + 1`) handled by a change of variables matched to `tail`.
pub fn integrate_semi_infinite<F: Fn(f64) -> f64>(
    f: F,
    lower: f64,
    tail: Tail,
    spec: &QuadratureSpec,
) -> Result<Quadrature> {
    if !lower.is_finite() {
        return Err(Error::invalid("lower limit must be finite"));
    }
    let cut = spec
        .split_points
        .iter()
        .copied()
        .filter(|&p| p > lower && p.is_finite())
        .fold(lower + 1.0, f64::max);
    let pts = breakpoints(lower, cut, &spec.split_points);
    let g = &f;

    let tail_fn: Box<dyn Fn(f64) -> f64 + '_> = match tail {
        Tail::Exponential { rate } => {
            if !(rate > 0.0) {
                return Err(Error::invalid("exponential tail needs a positive rate"));
            }
            // t = cut + s / (rate (1 − s)), s ∈ [0, 1)
            Box::new(move |s: f64| {
                let w = 1.0 - s;
                let t = cut + s / (rate * w);
                if !t.is_finite() {
                    return 0.0;
                }
                let v = g(t);
                if v == 0.0 {
                    0.0
                } else {
                    v / (rate * w * w)
                }
            })
        }
        Tail::Algebraic { decay } => {
            if !(decay > 1.0) {
                return Err(Error::invalid("algebraic tail needs decay > 1"));
            }
            // t = cut · u^{-q}, leading behaviour becomes a non-negative
            // integer power of u
            let excess = decay - 1.0;
            let k = (2.0 * excess).ceil().max(1.0);
            let q = k / excess;
            Box::new(move |u: f64| {
                if u <= 0.0 {
                    return 0.0;
                }
                let t = cut * u.powf(-q);
                if !t.is_finite() {
                    return 0.0;
                }
                let v = g(t);
                if v == 0.0 {
                    0.0
                } else {
                    v * q * t / u
                }
            })
        }
    };

    let mut segs: Vec<(&dyn Fn(f64) -> f64, f64, f64)> = pts
        .windows(2)
        .map(|w| (&f as &dyn Fn(f64) -> f64, w[0], w[1]))
        .collect();
    segs.push((tail_fn.as_ref(), 0.0, 1.0));
    adaptive(&segs, spec, "semi-infinite quadrature")
}
