//! Spectral zeta functions: Epstein–Hurwitz on the continuous torus, the
//! lattice constants c_d, ζ of Z^d and of a finite torus.

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::bundle_graph::{torus_eigenvalues, TorusBundleSpec};
use crate::error::{Error, Result};
use crate::heat_theta::{
    free_kernel, ln_free_kernel, theta_continuous, theta_continuous_excess, ContinuousTorusSpec,
    ThetaForm,
};
use crate::special::{
    hurwitz_zeta, integrate, integrate_semi_infinite, ln_gamma, rgamma, QuadratureSpec, Tail,
    EULER_GAMMA,
};

/// Largest torus for which [`zeta_gn`] enumerates the spectrum.
pub const DEFAULT_MAX_EIGENVALUES: usize = 1 << 24;

/// Lattice sums are used only this far to the right of the pole.
const LATTICE_MARGIN: f64 = 0.25;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ZetaMethod {
    Eigensum,
    IntegralSplit,
    ClosedFormD1,
    KroneckerD2,
    PoissonDual,
}

impl ZetaMethod {
    pub fn name(self) -> &'static str {
        match self {
            ZetaMethod::Eigensum => "eigensum",
            ZetaMethod::IntegralSplit => "integral_split",
            ZetaMethod::ClosedFormD1 => "closed_form_d1",
            ZetaMethod::KroneckerD2 => "kronecker_d2",
            ZetaMethod::PoissonDual => "poisson_dual",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ZetaEvaluation {
    pub value: f64,
    pub error_estimate: f64,
    pub method: ZetaMethod,
}

/// Tolerances used when the caller does not pass any.
pub fn default_quadrature() -> QuadratureSpec {
    QuadratureSpec::with_tolerances(1e-13, 1e-12)
}

/// Second Bernoulli polynomial x² − x + 1/6.
pub fn bernoulli_b2(x: f64) -> f64 {
    x * x - x + 1.0 / 6.0
}

/// √(4πt)·e^{−2t}I_0(2t) − 1 − 1/(16t) from the large-argument expansion;
/// accurate for t ≥ 15.
fn kernel_second_order(t: f64) -> f64 {
    let x8 = 16.0 * t;
    let mut term = 1.0 / x8;
    let mut sum = 0.0;
    for k in 2..200 {
        let k = k as f64;
        term *= (2.0 * k - 1.0).powi(2) / (k * x8);
        sum += term;
        if term.abs() < 1e-18 * sum.abs() {
            break;
        }
    }
    sum
}

/// (e^{−2t}I_0(2t))^d − (4πt)^{−d/2}(1 + d/(16t)).
fn lattice_trace_minus_asymptote(d: usize, t: f64) -> Result<f64> {
    let lead = (4.0 * PI * t).powf(-0.5 * d as f64);
    if t < 15.0 {
        let g = free_kernel(t)?;
        return Ok(g.powi(d as i32) - lead * (1.0 + d as f64 / (16.0 * t)));
    }
    let rho = kernel_second_order(t);
    let q = 1.0 / (16.0 * t) + rho;
    // (1+q)^d − 1 − d/(16t) = dρ + Σ_{j≥2} C(d,j) q^j
    let mut binom = d as f64;
    let mut qp = q;
    let mut higher = 0.0;
    for j in 2..=d {
        binom *= (d + 1 - j) as f64 / j as f64;
        qp *= q;
        higher += binom * qp;
    }
    Ok(lead * (d as f64 * rho + higher))
}

/// c_d = −∫_0^∞ ((e^{−2t}I_0(2t))^d − e^{−t}) dt/t.
pub fn c_d(d: usize) -> Result<ZetaEvaluation> {
    c_d_with(d, &default_quadrature())
}

pub fn c_d_with(d: usize, quad: &QuadratureSpec) -> Result<ZetaEvaluation> {
    if d == 0 || d > 10 {
        return Err(Error::invalid(format!("c_d is implemented for 1 <= d <= 10, got {d}")));
    }
    let df = d as f64;
    let near = |t: f64| -> f64 {
        if t == 0.0 {
            return 1.0 - 2.0 * df;
        }
        let ln_g = ln_free_kernel(t).unwrap_or(f64::NAN);
        (-t).exp() * (df * ln_g + t).exp_m1() / t
    };
    let far = |t: f64| -> f64 {
        let g = lattice_pow(d, t);
        (g - (-t).exp()) / t
    };
    let a = integrate(near, 0.0, 1.0, quad)?;
    let b = integrate_semi_infinite(far, 1.0, Tail::Algebraic { decay: 1.0 + 0.5 * df }, quad)?;
    check_finite(a.value + b.value, "c_d")?;
    Ok(ZetaEvaluation {
        value: -(a.value + b.value),
        error_estimate: a.error + b.error,
        method: ZetaMethod::IntegralSplit,
    })
}

fn lattice_pow(d: usize, t: f64) -> f64 {
    free_kernel(t).map(|g| g.powi(d as i32)).unwrap_or(f64::NAN)
}

fn check_finite(v: f64, what: &str) -> Result<()> {
    if v.is_finite() {
        Ok(())
    } else {
        Err(Error::NonConvergence { context: what.to_string(), value: v, error: f64::INFINITY })
    }
}

fn check_eh_domain(s: f64, spec: &ContinuousTorusSpec) -> Result<()> {
    if !spec.is_nontrivial() {
        return Err(Error::refused(
            "Epstein-Hurwitz zeta needs some lambda_i outside {0, 1}",
        ));
    }
    if !s.is_finite() {
        return Err(Error::invalid(format!("s must be finite, got {s}")));
    }
    let half_d = 0.5 * spec.dimension() as f64;
    if (s - half_d).abs() < 1e-10 {
        return Err(Error::refused(format!("s = {half_d} is the pole of the Epstein-Hurwitz zeta")));
    }
    Ok(())
}

/// ζ_EH(s; α; λ), choosing the lattice sum well right of the pole and the
/// integral split elsewhere.
pub fn zeta_eh(s: f64, spec: &ContinuousTorusSpec) -> Result<ZetaEvaluation> {
    check_eh_domain(s, spec)?;
    if s - 0.5 * spec.dimension() as f64 >= LATTICE_MARGIN {
        zeta_eh_lattice(s, spec)
    } else {
        zeta_eh_split(s, spec, &default_quadrature())
    }
}

/// Three-piece analytic continuation
/// Γ(s)ζ_EH = ∫_1^∞ θ^∞ t^{s−1} + ∫_0^1 (θ^∞ − ∏α/(4πt)^{d/2}) t^{s−1} + ∏α/((4π)^{d/2}(s − d/2)).
pub fn zeta_eh_split(s: f64, spec: &ContinuousTorusSpec, quad: &QuadratureSpec) -> Result<ZetaEvaluation> {
    check_eh_domain(s, spec)?;
    let d = spec.dimension() as f64;
    let large = |t: f64| {
        theta_continuous(spec, t, ThetaForm::Spectral).unwrap_or(f64::NAN) * t.powf(s - 1.0)
    };
    let small = |t: f64| {
        if t == 0.0 {
            return 0.0;
        }
        theta_continuous_excess(spec, t).unwrap_or(f64::NAN) * t.powf(s - 1.0)
    };
    let rate = spec.spectral_gap();
    let i1 = integrate_semi_infinite(large, 1.0, Tail::Exponential { rate }, quad)?;
    let i2 = integrate(small, 0.0, 1.0, quad)?;
    let pole = spec.volume() / ((4.0 * PI).powf(0.5 * d) * (s - 0.5 * d));
    let r = rgamma(s);
    let value = r * (i1.value + i2.value + pole);
    check_finite(value, "Epstein-Hurwitz integral split")?;
    Ok(ZetaEvaluation {
        value,
        error_estimate: r.abs() * (i1.error + i2.error) + 1e-15 * value.abs(),
        method: ZetaMethod::IntegralSplit,
    })
}

/// (2π)^{−2s} Σ_K (Σ ((k_i+λ_i)/α_i)²)^{−s}, for s ≥ d/2 + 1/4.
pub fn zeta_eh_lattice(s: f64, spec: &ContinuousTorusSpec) -> Result<ZetaEvaluation> {
    check_eh_domain(s, spec)?;
    let d = spec.dimension() as f64;
    if s - 0.5 * d < LATTICE_MARGIN {
        return Err(Error::refused(format!(
            "lattice sum converges too slowly for s = {s} (needs s >= {})",
            0.5 * d + LATTICE_MARGIN
        )));
    }
    let dims: Vec<(f64, f64)> = spec
        .alpha()
        .iter()
        .copied()
        .zip(spec.canonical_lambda())
        .collect();
    let sum = lattice_sum(&dims, 0.0, s)?;
    let value = (2.0 * PI).powf(-2.0 * s) * sum;
    check_finite(value, "Epstein-Hurwitz lattice sum")?;
    Ok(ZetaEvaluation {
        value,
        error_estimate: 1e-14 * value.abs(),
        method: ZetaMethod::Eigensum,
    })
}

/// Σ_{K ∈ Z^m} (c + Σ ((k_i+λ_i)/α_i)²)^{−s}. Beyond a cutoff in the first
/// index the inner sum is replaced by its integral; the Poisson correction
/// is below e^{−40}.
fn lattice_sum(dims: &[(f64, f64)], c: f64, s: f64) -> Result<f64> {
    let (alpha, lambda) = dims[0];
    let q = |k: i64| ((k as f64 + lambda) / alpha).powi(2);
    if dims.len() == 1 {
        let m = ((2.0 * alpha * c.sqrt()).ceil() as i64) + 2;
        let mut sum = 0.0;
        for k in -m..=m {
            let v = c + q(k);
            if v == 0.0 {
                return Err(Error::refused("lattice sum hit the zero mode"));
            }
            sum += v.powf(-s);
        }
        return Ok(sum + outer_1d(alpha, lambda, c, s, m)?);
    }
    let rest = &dims[1..];
    let m = rest.len() as f64;
    let alpha_min = rest.iter().map(|p| p.0).fold(f64::INFINITY, f64::min);
    let n = (6.4 * alpha / alpha_min).ceil() as i64 + 2;
    let mut sum = 0.0;
    for k in -n..=n {
        sum += lattice_sum(rest, c + q(k), s)?;
    }
    let sigma = s - 0.5 * m;
    let volume: f64 = rest.iter().map(|p| p.0).product();
    let a = volume * PI.powf(0.5 * m) * (ln_gamma(sigma) - ln_gamma(s)).exp();
    Ok(sum + a * outer_1d(alpha, lambda, c, sigma, n)?)
}

/// Σ_{|k| > n} (c + ((k+λ)/α)²)^{−σ}: a direct stretch, then a binomial
/// expansion in c α²/(k+λ)² summed with Hurwitz zeta values.
fn outer_1d(alpha: f64, lambda: f64, c: f64, sigma: f64, n: i64) -> Result<f64> {
    let m = n.max((2.0 * alpha * c.sqrt()).ceil() as i64 + 2);
    let mut direct = 0.0;
    for k in (n + 1)..=m {
        for kk in [k, -k] {
            direct += (c + ((kk as f64 + lambda) / alpha).powi(2)).powf(-sigma);
        }
    }
    let x = c * alpha * alpha;
    let (a_plus, a_minus) = (m as f64 + 1.0 + lambda, m as f64 + 1.0 - lambda);
    let mut coeff = 1.0;
    let mut xm = 1.0;
    let mut series = 0.0;
    for j in 0..400 {
        let p = 2.0 * sigma + 2.0 * j as f64;
        let term = coeff * xm * (hurwitz_zeta(p, a_plus)? + hurwitz_zeta(p, a_minus)?);
        series += term;
        if term.abs() <= 1e-18 * series.abs() || x == 0.0 {
            break;
        }
        // binom(−σ, j+1) = binom(−σ, j) · (−σ − j)/(j + 1)
        coeff *= (-sigma - j as f64) / (j as f64 + 1.0);
        xm *= x;
    }
    Ok(direct + alpha.powf(2.0 * sigma) * series)
}

/// d = 1 closed form (2π)^{−2s} α^{2s} (ζ(2s, λ) + ζ(2s, 1 − λ)).
pub fn zeta_eh_d1(s: f64, alpha: f64, lambda: f64) -> Result<ZetaEvaluation> {
    let spec = ContinuousTorusSpec::new(vec![alpha], vec![lambda])?;
    check_eh_domain(s, &spec)?;
    let z = hurwitz_zeta(2.0 * s, lambda)? + hurwitz_zeta(2.0 * s, 1.0 - lambda)?;
    let value = (alpha / (2.0 * PI)).powf(2.0 * s) * z;
    Ok(ZetaEvaluation {
        value,
        error_estimate: 1e-14 * value.abs().max(1e-300),
        method: ZetaMethod::ClosedFormD1,
    })
}

/// ζ'_EH(0) = ∫_1^∞ θ^∞ dt/t + ∫_0^1 (θ^∞ − ∏α(4πt)^{−d/2}) dt/t − (2/d)∏α(4π)^{−d/2}.
pub fn zeta_eh_deriv0(spec: &ContinuousTorusSpec) -> Result<ZetaEvaluation> {
    zeta_eh_deriv0_with(spec, &default_quadrature())
}

pub fn zeta_eh_deriv0_with(spec: &ContinuousTorusSpec, quad: &QuadratureSpec) -> Result<ZetaEvaluation> {
    if !spec.is_nontrivial() {
        return Err(Error::refused(
            "Epstein-Hurwitz zeta needs some lambda_i outside {0, 1}",
        ));
    }
    let d = spec.dimension() as f64;
    let large = |t: f64| theta_continuous(spec, t, ThetaForm::Spectral).unwrap_or(f64::NAN) / t;
    let small = |t: f64| {
        if t == 0.0 {
            0.0
        } else {
            theta_continuous_excess(spec, t).unwrap_or(f64::NAN) / t
        }
    };
    let i1 = integrate_semi_infinite(large, 1.0, Tail::Exponential { rate: spec.spectral_gap() }, quad)?;
    let i2 = integrate(small, 0.0, 1.0, quad)?;
    let value = i1.value + i2.value - 2.0 / d * spec.volume() * (4.0 * PI).powf(-0.5 * d);
    check_finite(value, "Epstein-Hurwitz derivative at 0")?;
    Ok(ZetaEvaluation {
        value,
        error_estimate: i1.error + i2.error,
        method: ZetaMethod::PoissonDual,
    })
}

/// Closed form for ζ'_EH(0) in dimension two:
/// 2π(α_1/α_2)B_2(λ_2) − 2 log ∏_{n∈Z} |1 − e^{2πiλ_1} e^{−2π(α_1/α_2)|n+λ_2|}|.
pub fn kronecker_deriv0(alpha1: f64, alpha2: f64, lambda1: f64, lambda2: f64) -> Result<f64> {
    let spec = ContinuousTorusSpec::new(vec![alpha1, alpha2], vec![lambda1, lambda2])?;
    if !spec.is_nontrivial() {
        return Err(Error::refused("Kronecker formula needs (lambda_1, lambda_2) not both in {0, 1}"));
    }
    let r = alpha1 / alpha2;
    let phase = Complex64::from_polar(1.0, 2.0 * PI * lambda1);
    // ln|1 − q| = ½ ln(1 − 2 Re q + |q|²)
    let log_factor = |dist: f64| {
        let m = (-2.0 * PI * r * dist).exp();
        let q = phase * m;
        (0.5 * (-2.0 * q.re + m * m).ln_1p(), m)
    };
    let mut log_prod = 0.0;
    for start in [lambda2, 1.0 - lambda2] {
        // n ≥ 0 gives |n+λ_2| = n + λ_2; n ≤ −1 gives (−n−1) + 1 − λ_2
        let mut k = 0.0;
        loop {
            let (lf, m) = log_factor(k + start);
            log_prod += lf;
            if m < 1e-17 {
                break;
            }
            k += 1.0;
        }
    }
    let value = 2.0 * PI * r * bernoulli_b2(lambda2) - 2.0 * log_prod;
    if !value.is_finite() {
        return Err(Error::refused("Kronecker product has a vanishing factor"));
    }
    Ok(value)
}

/// The two products of the λ-symmetry identity at α_1 = α_2:
/// ∏_{n≥1}(1 + e^{−2nπ}) / ∏_{n≥0}(1 − e^{−(2n+1)π}), and e^{π/8}/√2.
pub fn product_identity_sides() -> (f64, f64) {
    let mut num = 1.0;
    let mut den = 1.0;
    let mut n = 0.0;
    loop {
        let a = (-2.0 * (n + 1.0) * PI).exp();
        let b = (-(2.0 * n + 1.0) * PI).exp();
        num *= 1.0 + a;
        den *= 1.0 - b;
        if b < 1e-18 {
            break;
        }
        n += 1.0;
    }
    (num / den, (PI / 8.0).exp() / 2f64.sqrt())
}

fn check_zd_domain(s: f64, d: usize) -> Result<()> {
    if d == 0 || d > 10 {
        return Err(Error::invalid(format!("zeta of Z^d is implemented for 1 <= d <= 10, got {d}")));
    }
    let half_d = 0.5 * d as f64;
    if !(s > -1.0 && s < half_d + 2.0) {
        return Err(Error::refused(format!(
            "s = {s} is outside the implemented continuation window (-1, {})",
            half_d + 2.0
        )));
    }
    for pole in [half_d, half_d + 1.0] {
        if (s - pole).abs() < 1e-10 {
            return Err(Error::refused(format!("s = {pole} is a pole of the zeta function of Z^d")));
        }
    }
    Ok(())
}

/// A(s) = ∫_0^1 ((e^{−2t}I_0(2t))^d − 1) t^{s−1} dt, with t = v^{1/(s+1)}.
fn zd_near(s: f64, d: usize, quad: &QuadratureSpec) -> Result<(f64, f64)> {
    let df = d as f64;
    let p = 1.0 / (s + 1.0);
    let h = |v: f64| {
        if v == 0.0 {
            return -2.0 * df;
        }
        let t = v.powf(p);
        (df * ln_free_kernel(t).unwrap_or(f64::NAN)).exp_m1() / t
    };
    let r = integrate(h, 0.0, 1.0, quad)?;
    Ok((r.value * p, r.error * p))
}

/// B(s) = ∫_1^∞ (e^{−2t}I_0(2t))^d t^{s−1} dt continued past d/2 by
/// subtracting two terms of the large-t expansion.
fn zd_far(s: f64, d: usize, quad: &QuadratureSpec) -> Result<(f64, f64)> {
    let df = d as f64;
    let f = |t: f64| lattice_trace_minus_asymptote(d, t).unwrap_or(f64::NAN) * t.powf(s - 1.0);
    let decay = 0.5 * df + 3.0 - s;
    let r = integrate_semi_infinite(f, 1.0, Tail::Algebraic { decay }, quad)?;
    let analytic =
        (4.0 * PI).powf(-0.5 * df) * (1.0 / (0.5 * df - s) + (df / 16.0) / (0.5 * df + 1.0 - s));
    Ok((r.value + analytic, r.error))
}

/// Spectral zeta of Z^d, ζ(s) = Γ(s)^{−1} ∫_0^∞ (e^{−2t}I_0(2t))^d t^{s−1} dt,
/// continued to −1 < s < d/2 + 2.
pub fn zeta_zd(s: f64, d: usize) -> Result<ZetaEvaluation> {
    zeta_zd_with(s, d, &default_quadrature())
}

pub fn zeta_zd_with(s: f64, d: usize, quad: &QuadratureSpec) -> Result<ZetaEvaluation> {
    check_zd_domain(s, d)?;
    let (a, ea) = zd_near(s, d, quad)?;
    let (b, eb) = zd_far(s, d, quad)?;
    let r = rgamma(s);
    // ∫_0^1 t^{s−1} dt / Γ(s) = 1/Γ(s+1)
    let value = r * (a + b) + rgamma(s + 1.0);
    check_finite(value, "zeta of Z^d")?;
    Ok(ZetaEvaluation {
        value,
        error_estimate: r.abs() * (ea + eb),
        method: ZetaMethod::IntegralSplit,
    })
}

/// ζ'_{Z^d}(0) = γ + A(0) + B(0).
pub fn zeta_zd_deriv0(d: usize) -> Result<ZetaEvaluation> {
    zeta_zd_deriv0_with(d, &default_quadrature())
}

pub fn zeta_zd_deriv0_with(d: usize, quad: &QuadratureSpec) -> Result<ZetaEvaluation> {
    check_zd_domain(0.0, d)?;
    let (a, ea) = zd_near(0.0, d, quad)?;
    let (b, eb) = zd_far(0.0, d, quad)?;
    let value = EULER_GAMMA + a + b;
    check_finite(value, "zeta of Z^d at 0")?;
    Ok(ZetaEvaluation { value, error_estimate: ea + eb, method: ZetaMethod::IntegralSplit })
}

fn positive_spectrum(spec: &TorusBundleSpec, cap: usize) -> Result<Vec<f64>> {
    if spec.vertex_count() > cap {
        return Err(Error::CapExceeded { what: "torus vertex count", size: spec.vertex_count(), cap });
    }
    if spec.is_trivial() {
        return Err(Error::refused("trivial bundle: the constant function is a zero mode"));
    }
    let ev = torus_eigenvalues(spec);
    if ev.first().is_some_and(|&e| e <= 0.0) {
        return Err(Error::refused("the spectrum contains a zero eigenvalue"));
    }
    Ok(ev)
}

/// ζ_{G}(s) = Σ_j λ_j^{−s} over the torus spectrum; entire in s.
pub fn zeta_gn(s: Complex64, spec: &TorusBundleSpec) -> Result<Complex64> {
    let ev = positive_spectrum(spec, DEFAULT_MAX_EIGENVALUES)?;
    Ok(ev.iter().map(|&e| (-s * e.ln()).exp()).sum())
}

/// d/ds ζ_G at s = 0, that is −Σ log λ_j = −log det Δ.
pub fn zeta_gn_deriv0(spec: &TorusBundleSpec) -> Result<f64> {
    let ev = positive_spectrum(spec, DEFAULT_MAX_EIGENVALUES)?;
    Ok(-ev.iter().map(|e| e.ln()).sum::<f64>())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cont(alpha: &[f64], lambda: &[f64]) -> ContinuousTorusSpec {
        ContinuousTorusSpec::new(alpha.to_vec(), lambda.to_vec()).unwrap()
    }

    #[test]
    fn b2_values() {
        assert!((bernoulli_b2(0.5) + 1.0 / 12.0).abs() < 1e-16);
        assert!((bernoulli_b2(0.0) - 1.0 / 6.0).abs() < 1e-16);
    }

    #[test]
    fn c1_vanishes() {
        let c = c_d(1).unwrap();
        assert!(c.value.abs() < 1e-10, "{c:?}");
    }

    #[test]
    fn eh_half_shift_d1() {
        let spec = cont(&[1.0], &[0.5]);
        let v = zeta_eh(1.0, &spec).unwrap();
        assert!((v.value - 0.25).abs() < 1e-13);
        let w = zeta_eh_split(1.0, &spec, &default_quadrature()).unwrap();
        assert!((w.value - 0.25).abs() < 1e-10, "{w:?}");
    }

    #[test]
    fn eh_vanishes_at_zero() {
        let spec = cont(&[1.0, 2.0], &[0.3, 0.0]);
        assert_eq!(zeta_eh(0.0, &spec).unwrap().value, 0.0);
    }

    #[test]
    fn eh_refusals() {
        let spec = cont(&[1.0, 1.0], &[0.0, 1.0]);
        assert!(matches!(zeta_eh(2.0, &spec), Err(Error::Refused(_))));
        let spec = cont(&[1.0, 1.0], &[0.5, 0.0]);
        assert!(matches!(zeta_eh(1.0, &spec), Err(Error::Refused(_))));
    }

    #[test]
    fn deriv0_d1_closed_form() {
        for (alpha, lambda) in [(1.0, 0.5), (2.5, 0.3)] {
            let v = zeta_eh_deriv0(&cont(&[alpha], &[lambda])).unwrap();
            let exact = -2.0 * ((PI * lambda).sin().ln() + 2f64.ln());
            assert!((v.value - exact).abs() < 1e-9, "{alpha} {lambda}: {v:?} vs {exact}");
        }
    }

    #[test]
    fn kronecker_example_values() {
        let v = kronecker_deriv0(1.0, 1.0, 0.5, 0.0).unwrap();
        let mut prod = 1.0;
        for n in 1..40 {
            prod *= (1.0 + (-2.0 * PI * n as f64).exp()).powi(2);
        }
        let exact = 2.0 * PI / 6.0 - 2.0 * (2.0 * prod).ln();
        assert!((v - exact).abs() < 1e-14);
        let a = kronecker_deriv0(1.0, 1.0, 0.2, 0.6).unwrap();
        let b = kronecker_deriv0(1.0, 1.0, 0.6, 0.2).unwrap();
        assert!((a - b).abs() < 1e-10);
        assert!(kronecker_deriv0(1.0, 1.0, 0.0, 1.0).is_err());
    }

    #[test]
    fn product_identity() {
        let (l, r) = product_identity_sides();
        assert!((l - r).abs() < 1e-12);
    }

    #[test]
    fn zd_domain() {
        assert!(zeta_zd(1.0, 2).is_err());
        assert!(zeta_zd(2.0, 2).is_err());
        assert!(zeta_zd(-1.5, 2).is_err());
        assert!(zeta_zd(0.5, 2).is_ok());
        assert!((zeta_zd(0.0, 2).unwrap().value - 1.0).abs() < 1e-14);
    }

    #[test]
    fn asymptote_difference_is_continuous() {
        let below = lattice_trace_minus_asymptote(3, 15.0 - 1e-9).unwrap();
        let above = lattice_trace_minus_asymptote(3, 15.0).unwrap();
        assert!((below - above).abs() < 1e-14, "{below} {above}");
    }

    #[test]
    fn gn_small_cases() {
        let spec = TorusBundleSpec::with_holonomies(vec![2], &[0.5]).unwrap();
        let v = zeta_gn(Complex64::new(1.0, 0.0), &spec).unwrap();
        assert!((v.re - 1.0).abs() < 1e-15);
        let spec = TorusBundleSpec::with_holonomies(vec![3, 2], &[0.1, 0.7]).unwrap();
        assert!((zeta_gn(Complex64::new(0.0, 0.0), &spec).unwrap().re - 6.0).abs() < 1e-15);
        assert!(zeta_gn(Complex64::new(1.0, 0.0), &TorusBundleSpec::trivial(vec![3]).unwrap()).is_err());
    }
}
