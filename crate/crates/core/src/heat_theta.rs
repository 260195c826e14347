//! Heat kernels and theta functions.
//!
//! On the discrete torus the heat kernel is a Bessel series (one factor per
//! direction) and the theta function `θ^{G}(t) = tr e^{-tΔ}` is a finite sum
//! over the closed-form spectrum. On the limiting continuous torus the theta
//! function is a Gaussian lattice sum with a Poisson-dual representation that
//! converges fast for small `t`.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::bundle_graph::{circle_eigenvalues, TorusBundleSpec};
use crate::error::{Error, Result};
use crate::special::{bessel_i_complex, bessel_i_scaled};

const MAX_SERIES_TERMS: usize = 100_000;
const TAIL_FRACTION: f64 = 1e-16;

/// Limit torus: side ratios α_i > 0 and holonomies λ_i ∈ [0, 1].
#[derive(Debug, Clone, PartialEq)]
pub struct ContinuousTorusSpec {
    alpha: Vec<f64>,
    lambda: Vec<f64>,
}

impl ContinuousTorusSpec {
    pub fn new(alpha: Vec<f64>, lambda: Vec<f64>) -> Result<Self> {
        if alpha.is_empty() || alpha.len() != lambda.len() {
            return Err(Error::invalid(
                "alpha and lambda must be non-empty and of equal length",
            ));
        }
        if let Some(a) = alpha.iter().find(|a| !(a.is_finite() && **a > 0.0)) {
            return Err(Error::invalid(format!("alpha must be positive, got {a}")));
        }
        if let Some(l) = lambda.iter().find(|l| !(0.0..=1.0).contains(*l)) {
            return Err(Error::invalid(format!("lambda must lie in [0, 1], got {l}")));
        }
        Ok(ContinuousTorusSpec { alpha, lambda })
    }

    pub fn dimension(&self) -> usize {
        self.alpha.len()
    }

    pub fn alpha(&self) -> &[f64] {
        &self.alpha
    }

    pub fn lambda(&self) -> &[f64] {
        &self.lambda
    }

    /// λ with 1 identified with 0; the lattice sums only see λ mod 1.
    pub fn canonical_lambda(&self) -> Vec<f64> {
        self.lambda.iter().map(|&l| if l == 1.0 { 0.0 } else { l }).collect()
    }

    /// ∏ α_i.
    pub fn volume(&self) -> f64 {
        self.alpha.iter().product()
    }

    /// Some λ_i ∉ {0, 1}, so the continuous spectrum avoids zero.
    pub fn is_nontrivial(&self) -> bool {
        self.lambda.iter().any(|&l| l != 0.0 && l != 1.0)
    }

    /// Smallest eigenvalue 4π² min_K Σ ((k_i+λ_i)/α_i)².
    pub fn spectral_gap(&self) -> f64 {
        self.alpha
            .iter()
            .zip(self.canonical_lambda())
            .map(|(a, l)| {
                let d = l.min(1.0 - l);
                4.0 * PI * PI * (d / a).powi(2)
            })
            .sum()
    }
}

/// Which series to use for θ^∞.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ThetaForm {
    /// Σ_K exp(−4π²t Σ((k_i+λ_i)/α_i)²); fast for large t.
    Spectral,
    /// Poisson transform, fast for small t.
    Dual,
    /// Spectral for t ≥ 1, dual below.
    Auto,
}

/// `e^{-2t} I_0(2t)`, the heat kernel of Z at the origin.
pub fn free_kernel(t: f64) -> Result<f64> {
    bessel_i_scaled(0, 2.0 * t)
}

/// `ln(e^{-2t} I_0(2t))`, accurate also as t → 0.
pub(crate) fn ln_free_kernel(t: f64) -> Result<f64> {
    if t < 1.0 {
        // I_0(2t) − 1 = Σ_{j≥1} t^{2j} / (j!)²
        let q = t * t;
        let mut term = 1.0;
        let mut sum = 0.0;
        let mut j = 0.0;
        loop {
            j += 1.0;
            term *= q / (j * j);
            sum += term;
            if term < 1e-18 * sum || term == 0.0 {
                break;
            }
        }
        Ok(-2.0 * t + sum.ln_1p())
    } else {
        Ok(free_kernel(t)?.ln())
    }
}

/// `(e^{-2t} I_0(2t))^d`, the heat trace per vertex of Z^d.
pub fn lattice_heat_trace(d: usize, t: f64) -> Result<f64> {
    Ok((d as f64 * ln_free_kernel(t)?).exp())
}

/// Sum over k of `I_{|m0 + k·a|}(2t) · phase^k` (scaled by e^{-2t}) with a
/// ratio-test certificate on both tails.
fn bessel_lattice_sum(a: usize, m0: i64, t: f64, phase: Complex64) -> Result<Complex64> {
    let a = a as i64;
    let x = 2.0 * t;
    let mut sum = Complex64::new(bessel_i_scaled(m0.unsigned_abs(), x)?, 0.0);
    let mut up_done = false;
    let mut down_done = false;
    let mut pk = Complex64::new(1.0, 0.0);
    let mut pinv = Complex64::new(1.0, 0.0);
    let mut k = 0i64;
    while !(up_done && down_done) {
        k += 1;
        if k as usize > MAX_SERIES_TERMS {
            return Err(Error::NonConvergence {
                context: "Bessel series of the heat kernel".into(),
                value: sum.norm(),
                error: f64::NAN,
            });
        }
        pk *= phase;
        pinv *= phase.inv();
        for (side, done, p) in [(1i64, &mut up_done, pk), (-1i64, &mut down_done, pinv)] {
            if *done {
                continue;
            }
            let order = (m0 + side * k * a).unsigned_abs();
            let term = bessel_i_scaled(order, x)?;
            sum += p * term;
            // I_{m+a}/I_m ≤ (t/(m+1))^a
            let ratio = (t / (order as f64 + 1.0)).powi(a as i32);
            if ratio < 1.0 {
                let tail = term * ratio / (1.0 - ratio);
                if tail <= TAIL_FRACTION * sum.norm().max(f64::MIN_POSITIVE) || term == 0.0 {
                    *done = true;
                }
            }
        }
    }
    Ok(sum)
}

/// One-direction factor K_i(t, x) of the heat kernel, `0 ≤ x < a`.
pub fn heat_kernel_factor(weights: &[crate::UnitWeight], t: f64, x: usize) -> Result<Complex64> {
    let a = weights.len();
    if a == 0 || x >= a {
        return Err(Error::invalid("heat kernel coordinate out of range"));
    }
    // exponent of w_j is ceil((x + k a − j)/a) = k − floor((j − x)/a)
    let mut base = Complex64::new(1.0, 0.0);
    let mut total = Complex64::new(1.0, 0.0);
    for (j, w) in weights.iter().enumerate() {
        let e = (j as i64 - x as i64).div_euclid(a as i64);
        base *= w.value().powi(-e as i32);
        total *= w.value();
    }
    let s = bessel_lattice_sum(a, x as i64, t, total)?;
    Ok(base * s)
}

/// Heat kernel K(t, x) of the torus: the solution of (Δ + ∂_t)K = 0 with
/// K(0, ·) = δ_0. Coordinates are reduced modulo the sides.
pub fn heat_kernel(spec: &TorusBundleSpec, t: f64, x: &[i64]) -> Result<Complex64> {
    if !(t >= 0.0) || !t.is_finite() {
        return Err(Error::invalid(format!("heat kernel time must be finite and >= 0, got {t}")));
    }
    if x.len() != spec.dimension() {
        return Err(Error::invalid("lattice point has the wrong dimension"));
    }
    let mut k = Complex64::new(1.0, 0.0);
    for ((&a, w), &xi) in spec.sides().iter().zip(spec.weights()).zip(x) {
        let r = xi.rem_euclid(a as i64) as usize;
        k *= heat_kernel_factor(w, t, r)?;
    }
    Ok(k)
}

/// Both sides of Σ_k t^{kn} I_{kn}(z) = (1/n) Σ_j exp(z/2 (t^{-1}ω^j + t ω^{-j})),
/// ω = e^{2πi/n}.
pub fn besselgen_sides(n: usize, z: Complex64, t: Complex64) -> Result<(Complex64, Complex64)> {
    if n == 0 {
        return Err(Error::invalid("besselgen_sides needs n >= 1"));
    }
    if t.norm() == 0.0 || !t.norm().is_finite() {
        return Err(Error::invalid("besselgen_sides needs t != 0"));
    }
    let zn = z.norm();
    let mut lhs = bessel_i_complex(0, z)?;
    let tn = t.powi(n as i32);
    let mut up = Complex64::new(1.0, 0.0);
    let mut down = Complex64::new(1.0, 0.0);
    let big = t.norm().max(1.0 / t.norm());
    let mut k = 0usize;
    loop {
        k += 1;
        let order = (k * n) as u64;
        if order > 2_000 {
            return Err(Error::NonConvergence {
                context: "Bessel generating sum".into(),
                value: lhs.norm(),
                error: f64::NAN,
            });
        }
        up *= tn;
        down /= tn;
        let i = bessel_i_complex(order, z)?;
        lhs += (up + down) * i;
        // |I_m(z)| ≤ I_m(|z|); the term ratio is below (big^n |z|/(2(m+1)))^n
        let bound = bessel_i_scaled(order, zn)? * zn.exp() * 2.0 * big.powi(order as i32);
        if (order as f64) > big * zn && bound < 1e-18 * (1.0 + lhs.norm()) {
            break;
        }
    }
    let mut rhs = Complex64::new(0.0, 0.0);
    for j in 0..n {
        let w = Complex64::from_polar(1.0, 2.0 * PI * j as f64 / n as f64);
        rhs += (z * 0.5 * (t.inv() * w + t * w.conj())).exp();
    }
    rhs /= n as f64;
    Ok((lhs, rhs))
}

/// θ^{G}(t) = ∏_i Σ_j exp(−4t sin²(π(j+λ_i)/a_i)) = tr e^{−tΔ}.
pub fn theta_discrete(spec: &TorusBundleSpec, t: f64) -> f64 {
    spec.sides()
        .iter()
        .zip(spec.holonomies())
        .map(|(&a, &l)| circle_eigenvalues(a, l).iter().map(|e| (-t * e).exp()).sum::<f64>())
        .product()
}

/// e^{-2t} Σ_{k≥1} I_{ka}(2t) · 2cos(2πkλ): the non-leading part of a_i^{-1} θ_i.
fn bessel_theta_remainder(a: usize, lambda: f64, t: f64) -> Result<f64> {
    let x = 2.0 * t;
    let mut sum = 0.0;
    let mut k = 0usize;
    loop {
        k += 1;
        if k > MAX_SERIES_TERMS {
            return Err(Error::NonConvergence {
                context: "Bessel form of the theta function".into(),
                value: sum,
                error: f64::NAN,
            });
        }
        let order = (k * a) as u64;
        let term = bessel_i_scaled(order, x)?;
        sum += 2.0 * (2.0 * PI * k as f64 * lambda).cos() * term;
        let ratio = (t / (order as f64 + 1.0)).powi(a as i32);
        if ratio < 1.0 && (term == 0.0 || term * ratio / (1.0 - ratio) < 1e-17) {
            break;
        }
    }
    Ok(sum)
}

/// θ^{G}(t) through the Bessel series ∏ a_i e^{−2t} Σ_k I_{k a_i}(2t) e^{−2πikλ_i}.
pub fn theta_discrete_bessel(spec: &TorusBundleSpec, t: f64) -> Result<f64> {
    let g = free_kernel(t)?;
    let mut prod = 1.0;
    for (&a, &l) in spec.sides().iter().zip(spec.holonomies()) {
        prod *= a as f64 * (g + bessel_theta_remainder(a, l, t)?);
    }
    Ok(prod)
}

/// θ^{G}(t) − (∏a_i)(e^{−2t}I_0(2t))^d without cancellation at small t.
pub fn theta_discrete_excess(spec: &TorusBundleSpec, t: f64) -> Result<f64> {
    let d = spec.dimension();
    let volume = spec.vertex_count() as f64;
    if t <= 1.0 {
        let ln_g = ln_free_kernel(t)?;
        let g = ln_g.exp();
        let mut log_ratio = 0.0;
        for (&a, &l) in spec.sides().iter().zip(spec.holonomies()) {
            log_ratio += (bessel_theta_remainder(a, l, t)? / g).ln_1p();
        }
        Ok(volume * (d as f64 * ln_g).exp() * log_ratio.exp_m1())
    } else {
        Ok(theta_discrete(spec, t) - volume * lattice_heat_trace(d, t)?)
    }
}

fn theta_1d_spectral(alpha: f64, lambda: f64, t: f64) -> f64 {
    let c = 4.0 * PI * PI * t / (alpha * alpha);
    let k0 = (-lambda).round();
    let f = |k: f64| (-c * (k + lambda).powi(2)).exp();
    let mut sum = f(k0);
    for dir in [1.0, -1.0] {
        let mut k = k0;
        loop {
            k += dir;
            let term = f(k);
            sum += term;
            if term <= 1e-18 * sum {
                break;
            }
        }
    }
    sum
}

/// 2 Σ_{k≥1} exp(−(αk)²/4t) cos(2πλk), the non-leading part of the dual form.
fn theta_1d_dual_remainder(alpha: f64, lambda: f64, t: f64) -> f64 {
    let c = alpha * alpha / (4.0 * t);
    let mut sum = 0.0;
    let mut k = 0.0;
    loop {
        k += 1.0;
        let g = (-c * k * k).exp();
        sum += 2.0 * g * (2.0 * PI * lambda * k).cos();
        if g < 1e-18 * (1.0 + sum.abs()) {
            break;
        }
    }
    sum
}

/// θ^∞(t) for the continuous torus.
pub fn theta_continuous(spec: &ContinuousTorusSpec, t: f64, form: ThetaForm) -> Result<f64> {
    if !(t > 0.0) || !t.is_finite() {
        return Err(Error::invalid(format!("theta_continuous needs finite t > 0, got {t}")));
    }
    let form = match form {
        ThetaForm::Auto if t >= 1.0 => ThetaForm::Spectral,
        ThetaForm::Auto => ThetaForm::Dual,
        f => f,
    };
    let lambda = spec.canonical_lambda();
    let mut prod = 1.0;
    for (&a, &l) in spec.alpha().iter().zip(&lambda) {
        prod *= match form {
            ThetaForm::Spectral => theta_1d_spectral(a, l, t),
            _ => a / (4.0 * PI * t).sqrt() * (1.0 + theta_1d_dual_remainder(a, l, t)),
        };
    }
    Ok(prod)
}

/// θ^∞(t) − ∏α_i/(4πt)^{d/2}, assembled from the dual series so that the
/// difference is a product of explicitly small corrections.
pub fn theta_continuous_excess(spec: &ContinuousTorusSpec, t: f64) -> Result<f64> {
    if !(t > 0.0) || !t.is_finite() {
        return Err(Error::invalid(format!("theta_continuous_excess needs finite t > 0, got {t}")));
    }
    let d = spec.dimension() as f64;
    let lead = spec.volume() / (4.0 * PI * t).powf(0.5 * d);
    if t > 1.0 {
        return Ok(theta_continuous(spec, t, ThetaForm::Spectral)? - lead);
    }
    let lambda = spec.canonical_lambda();
    let log_ratio: f64 = spec
        .alpha()
        .iter()
        .zip(&lambda)
        .map(|(&a, &l)| theta_1d_dual_remainder(a, l, t).ln_1p())
        .sum();
    Ok(lead * log_ratio.exp_m1())
}
