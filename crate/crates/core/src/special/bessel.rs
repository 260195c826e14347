//! Exponentially scaled modified Bessel functions of the first kind,
//! `e^{-x} I_m(x)`, for integer order.
//!
//! Branches:
//! - `x <= 30`: ascending power series, summed in log-scaled form.
//! - `x > 30`, `m >= 50`: Debye uniform expansion.
//! - `x > 30`, `m < 50`: Hankel large-argument expansion when it reaches full
//!   precision, otherwise Miller backward recurrence normalised by
//!   `e^{-x}(I_0 + 2 Σ I_k) = 1`.

use std::sync::OnceLock;

use num_complex::Complex64;

use super::gamma::ln_gamma;
use crate::error::{Error, Result};

const SERIES_LIMIT: f64 = 30.0;
const DEBYE_MIN_ORDER: u64 = 50;
const MAX_ORDER: u64 = 1_000_000;

/// `e^{-x} I_order(x)` for `x >= 0`.
///
/// Negative integer orders are the caller's business: `I_{-m} = I_m`.
pub fn bessel_i_scaled(order: u64, x: f64) -> Result<f64> {
    if x.is_nan() {
        return Err(Error::invalid("bessel_i_scaled: NaN argument"));
    }
    if x < 0.0 || !x.is_finite() {
        return Err(Error::invalid(format!(
            "bessel_i_scaled requires finite x >= 0, got {x}"
        )));
    }
    if order > MAX_ORDER {
        return Err(Error::CapExceeded {
            what: "Bessel order",
            size: order as usize,
            cap: MAX_ORDER as usize,
        });
    }
    if x == 0.0 {
        return Ok(if order == 0 { 1.0 } else { 0.0 });
    }
    if x <= SERIES_LIMIT {
        return Ok(series_scaled(order, x));
    }
    if order >= DEBYE_MIN_ORDER {
        return Ok(debye_scaled(order as f64, x));
    }
    if let Some(v) = hankel_scaled(order as f64, x) {
        return Ok(v);
    }
    Ok(miller_scaled(order, x))
}

/// Ascending series Σ_j (x/2)^{2j+m} / (j! (j+m)!) times e^{-x}.
fn series_scaled(order: u64, x: f64) -> f64 {
    let m = order as f64;
    let half = 0.5 * x;
    let log_t0 = m * half.ln() - ln_gamma(m + 1.0) - x;
    if log_t0 < -745.0 - 2.0 * x {
        return 0.0;
    }
    // sum relative to the first term, then rescale; the relative series can
    // grow like e^{x} so rescale in log space at the end
    let q = half * half;
    let mut term = 1.0f64;
    let mut sum = 1.0f64;
    let mut log_scale = 0.0f64;
    let mut j = 0.0f64;
    loop {
        j += 1.0;
        term *= q / (j * (j + m));
        sum += term;
        if sum > 1e250 {
            sum *= 1e-250;
            term *= 1e-250;
            log_scale += 250.0 * std::f64::consts::LN_10;
        }
        if j > half && term < 1e-17 * sum {
            break;
        }
    }
    (log_t0 + log_scale + sum.ln()).exp()
}

/// Hankel expansion e^{-x} I_ν(x) ≈ (2πx)^{-1/2} Σ_k (-1)^k a_k(ν) / x^k.
/// Returns `None` if the asymptotic series stalls above double precision.
fn hankel_scaled(nu: f64, x: f64) -> Option<f64> {
    let mu = 4.0 * nu * nu;
    let mut term = 1.0f64;
    let mut sum = 1.0f64;
    let mut k = 0.0f64;
    loop {
        k += 1.0;
        let odd = 2.0 * k - 1.0;
        let next = -term * (mu - odd * odd) / (8.0 * k * x);
        if next == 0.0 {
            break;
        }
        if next.abs() > term.abs() {
            return None;
        }
        sum += next;
        term = next;
        if term.abs() < 1e-17 * sum.abs() {
            break;
        }
        if k > 200.0 {
            return None;
        }
    }
    Some(sum / (2.0 * std::f64::consts::PI * x).sqrt())
}

/// Coefficient polynomials u_k(p) of the Debye expansion, generated from
/// u_{k+1}(p) = ½p²(1−p²)u_k'(p) + ⅛∫_0^p (1−5t²) u_k(t) dt.
fn debye_polynomials() -> &'static Vec<Vec<f64>> {
    static POLYS: OnceLock<Vec<Vec<f64>>> = OnceLock::new();
    POLYS.get_or_init(|| {
        const TERMS: usize = 13;
        let mut polys: Vec<Vec<f64>> = vec![vec![1.0]];
        for k in 0..TERMS - 1 {
            let u = &polys[k];
            let deg = u.len() - 1;
            let mut next = vec![0.0; deg + 4];
            // ½ p² (1 − p²) u'(p)
            for (i, c) in u.iter().enumerate().skip(1) {
                let d = c * i as f64; // coefficient of p^{i-1} in u'
                next[i + 1] += 0.5 * d;
                next[i + 3] -= 0.5 * d;
            }
            // ⅛ ∫_0^p (1 − 5t²) u(t) dt
            for (i, c) in u.iter().enumerate() {
                next[i + 1] += 0.125 * c / (i as f64 + 1.0);
                next[i + 3] -= 0.625 * c / (i as f64 + 3.0);
            }
            while next.len() > 1 && *next.last().unwrap() == 0.0 {
                next.pop();
            }
            polys.push(next);
        }
        polys
    })
}

fn eval_poly(coeffs: &[f64], p: f64) -> f64 {
    coeffs.iter().rev().fold(0.0, |acc, c| acc * p + c)
}

/// Debye uniform expansion of e^{-x} I_ν(x), x = νz.
fn debye_scaled(nu: f64, x: f64) -> f64 {
    let z = x / nu;
    let root = (1.0 + z * z).sqrt();
    let p = 1.0 / root;
    // η − z with η = √(1+z²) + ln(z / (1 + √(1+z²)))
    let exponent = 1.0 / (root + z) + (z / (1.0 + root)).ln();
    let mut sum = 0.0;
    let mut inv_pow = 1.0;
    for u in debye_polynomials() {
        let term = eval_poly(u, p) * inv_pow;
        sum += term;
        if term.abs() < 1e-17 * sum.abs() {
            break;
        }
        inv_pow /= nu;
    }
    let prefactor = (2.0 * std::f64::consts::PI * nu).sqrt() * root.sqrt();
    (nu * exponent).exp() * sum / prefactor
}

/// Miller backward recurrence I_{k-1} = (2k/x) I_k + I_{k+1}, normalised with
/// the generating-function identity at t = 1.
fn miller_scaled(order: u64, x: f64) -> f64 {
    let start = order as usize + (12.0 * x.sqrt()).ceil() as usize + 40;
    let mut next = 0.0f64; // I_{k+1}
    let mut cur = 1e-300f64; // I_k
    let mut norm = 0.0f64; // I_0 + 2 Σ I_k over k <= start, in current units
    let mut target = 0.0f64;
    for k in (1..=start).rev() {
        if k == order as usize {
            target = cur;
        }
        norm += 2.0 * cur;
        let prev = (2.0 * k as f64 / x) * cur + next;
        next = cur;
        cur = prev;
        if cur > 1e250 {
            cur *= 1e-250;
            next *= 1e-250;
            norm *= 1e-250;
            target *= 1e-250;
        }
    }
    // cur now holds I_0
    norm += cur;
    if order == 0 {
        target = cur;
    }
    target / norm
}

/// Unscaled I_order(z) for complex z by the ascending series; |z| ≤ 25.
pub fn bessel_i_complex(order: u64, z: Complex64) -> Result<Complex64> {
    if z.re.is_nan() || z.im.is_nan() {
        return Err(Error::invalid("bessel_i_complex: NaN argument"));
    }
    if z.norm() > 25.0 {
        return Err(Error::refused(format!(
            "bessel_i_complex supports |z| <= 25, got |z| = {}",
            z.norm()
        )));
    }
    if z == Complex64::new(0.0, 0.0) {
        return Ok(Complex64::new(if order == 0 { 1.0 } else { 0.0 }, 0.0));
    }
    let m = order as f64;
    let half = z * 0.5;
    let log_mag = m * half.norm().ln() - ln_gamma(m + 1.0);
    if log_mag < -745.0 {
        return Ok(Complex64::new(0.0, 0.0));
    }
    let t0 = Complex64::from_polar(log_mag.exp(), m * half.arg());
    let q = half * half;
    let mut term = t0;
    let mut sum = t0;
    let mut bound_term = t0.norm();
    let mut bound = bound_term;
    let mut j = 0.0f64;
    loop {
        j += 1.0;
        term *= q / (j * (j + m));
        bound_term *= q.norm() / (j * (j + m));
        sum += term;
        bound += bound_term;
        if j > half.norm() && bound_term < 1e-18 * bound {
            break;
        }
    }
    Ok(sum)
}
