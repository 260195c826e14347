//! Log-gamma, reciprocal gamma and the Hurwitz zeta function.
//!
//! Both log-gamma and Hurwitz zeta use Euler–Maclaurin style asymptotic
//! series with Bernoulli-number coefficients after shifting the argument far
//! enough to the right.

use std::f64::consts::PI;

use crate::error::{Error, Result};

/// Euler–Mascheroni constant.
pub const EULER_GAMMA: f64 = 0.577_215_664_901_532_9;

/// ½·ln(2π).
pub const HALF_LN_2PI: f64 = 0.918_938_533_204_672_8;

/// B_2, B_4, …, B_24.
const BERNOULLI_EVEN: [f64; 12] = [
    1.0 / 6.0,
    -1.0 / 30.0,
    1.0 / 42.0,
    -1.0 / 30.0,
    5.0 / 66.0,
    -691.0 / 2730.0,
    7.0 / 6.0,
    -3617.0 / 510.0,
    43867.0 / 798.0,
    -174611.0 / 330.0,
    854513.0 / 138.0,
    -236364091.0 / 2730.0,
];

/// sin(πx), exact zero at the integers.
pub fn sin_pi(x: f64) -> f64 {
    if x.fract() == 0.0 {
        return 0.0;
    }
    // reduce to [-1, 1)
    let mut r = x % 2.0;
    if r >= 1.0 {
        r -= 2.0;
    } else if r < -1.0 {
        r += 2.0;
    }
    // fold into [-1/2, 1/2] using sin(π(1 - r)) = sin(πr)
    if r > 0.5 {
        r = 1.0 - r;
    } else if r < -0.5 {
        r = -1.0 - r;
    }
    (PI * r).sin()
}

/// ln Γ(x) for x > 0.
pub fn ln_gamma(x: f64) -> f64 {
    assert!(x > 0.0, "ln_gamma requires a positive argument, got {x}");
    const SHIFT: f64 = 10.0;
    let mut z = x;
    let mut prod = 1.0;
    while z < SHIFT {
        prod *= z;
        z += 1.0;
    }
    // Stirling series at z >= 10
    let inv = 1.0 / z;
    let inv2 = inv * inv;
    let mut series = 0.0;
    let mut pow = inv;
    for (k, b) in BERNOULLI_EVEN.iter().take(9).enumerate() {
        let n = 2.0 * (k as f64 + 1.0);
        series += b / (n * (n - 1.0)) * pow;
        pow *= inv2;
    }
    (z - 0.5) * z.ln() - z + HALF_LN_2PI + series - prod.ln()
}

/// Γ(x) for real x that is not a non-positive integer.
pub fn gamma(x: f64) -> f64 {
    if x > 0.0 {
        ln_gamma(x).exp()
    } else {
        PI / (sin_pi(x) * gamma(1.0 - x))
    }
}

/// 1/Γ(x) for all real x; zero at the non-positive integers.
pub fn rgamma(x: f64) -> f64 {
    if x > 0.0 {
        (-ln_gamma(x)).exp()
    } else {
        // reflection: 1/Γ(x) = Γ(1 - x) sin(πx) / π
        sin_pi(x) * ln_gamma(1.0 - x).exp() / PI
    }
}

/// Hurwitz zeta ζ(s, a) = Σ_{k≥0} (k + a)^{-s} for real s ≠ 1 and a > 0,
/// continued analytically in s.
pub fn hurwitz_zeta(s: f64, a: f64) -> Result<f64> {
    if s.is_nan() || a.is_nan() {
        return Err(Error::invalid("hurwitz_zeta: NaN argument"));
    }
    if s == 1.0 {
        return Err(Error::refused("hurwitz_zeta has a pole at s = 1"));
    }
    if a <= 0.0 {
        return Err(Error::invalid(format!(
            "hurwitz_zeta requires a > 0, got {a}"
        )));
    }
    // number of directly summed terms grows with |s| so the tail series
    // stays well inside its asymptotic regime
    let min_base = 15.0 + s.abs().min(60.0);
    let n = ((min_base - a).ceil()).max(0.0) as usize;

    let mut direct = 0.0;
    for k in 0..n {
        direct += (k as f64 + a).powf(-s);
    }
    let b = n as f64 + a;
    let b_pow = b.powf(-s);
    let mut tail = b * b_pow / (s - 1.0) + 0.5 * b_pow;

    // Σ_j B_{2j}/(2j)! · s(s+1)…(s+2j-2) · b^{-s-2j+1}
    let inv_b = 1.0 / b;
    let mut rising = s; // s (s+1) … (s + 2j - 2)
    let mut fact = 2.0; // (2j)!
    let mut pow = b_pow * inv_b; // b^{-s-2j+1}
    for (j, bern) in BERNOULLI_EVEN.iter().enumerate() {
        let term = bern / fact * rising * pow;
        tail += term;
        if term == 0.0 || term.abs() < 1e-17 * (direct + tail).abs() {
            break;
        }
        let jj = j as f64 + 1.0;
        rising *= (s + 2.0 * jj - 1.0) * (s + 2.0 * jj);
        fact *= (2.0 * jj + 1.0) * (2.0 * jj + 2.0);
        pow *= inv_b * inv_b;
    }
    Ok(direct + tail)
}

/// ∂ζ(s, a)/∂s at s = 0, via ζ'(0, a) = ln Γ(a) − ½ ln(2π).
pub fn hurwitz_zeta_deriv_s0(a: f64) -> Result<f64> {
    if !(a > 0.0) {
        return Err(Error::invalid(format!(
            "hurwitz_zeta_deriv_s0 requires a > 0, got {a}"
        )));
    }
    Ok(ln_gamma(a) - HALF_LN_2PI)
}
