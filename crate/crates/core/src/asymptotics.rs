//! Log-determinants of torus Laplacians and their large-torus asymptotics:
//! residual series, rescaled theta gaps and the product formula.

use std::sync::Arc;

use rayon::prelude::*;
use serde::Serialize;

use crate::bundle_graph::{build_torus, laplacian, torus_eigenvalues, TorusBundleSpec};
use crate::error::{Error, Result};
use crate::heat_theta::{
    lattice_heat_trace, theta_continuous, theta_discrete, theta_discrete_excess,
    ContinuousTorusSpec, ThetaForm,
};
use crate::special::{integrate, integrate_semi_infinite, Quadrature, Tail};
use crate::zeta::{c_d, default_quadrature, zeta_eh, zeta_eh_deriv0, zeta_gn, zeta_zd};

/// Tori up to this many vertices get a dense LU cross-check in [`log_det_report`].
pub const LU_CROSS_CHECK_MAX: usize = 2000;

/// Largest torus the spectral routines here will enumerate.
pub const DEFAULT_MAX_VERTICES: usize = 1 << 24;

type SideRule = Arc<dyn Fn(usize) -> Vec<usize> + Send + Sync>;

/// A sequence of tori G_n with a_i(n)/n → α_i and constant holonomies λ_i.
/// Each direction carries its whole holonomy on a single edge.
#[derive(Clone)]
pub struct TorusFamily {
    side_rule: SideRule,
    limit: ContinuousTorusSpec,
}

impl std::fmt::Debug for TorusFamily {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("TorusFamily").field("limit", &self.limit).finish_non_exhaustive()
    }
}

impl TorusFamily {
    /// a_i(n) = m_i · n, so α_i = m_i.
    pub fn scaled(multipliers: Vec<usize>, lambda: Vec<f64>) -> Result<Self> {
        if multipliers.contains(&0) {
            return Err(Error::invalid("side multipliers must be positive"));
        }
        let alpha = multipliers.iter().map(|&m| m as f64).collect();
        let limit = ContinuousTorusSpec::new(alpha, lambda)?;
        Ok(TorusFamily {
            side_rule: Arc::new(move |n| multipliers.iter().map(|m| m * n).collect()),
            limit,
        })
    }

    /// Arbitrary side rule; the caller vouches for a_i(n)/n → α_i.
    pub fn with_side_rule(
        side_rule: impl Fn(usize) -> Vec<usize> + Send + Sync + 'static,
        alpha: Vec<f64>,
        lambda: Vec<f64>,
    ) -> Result<Self> {
        let limit = ContinuousTorusSpec::new(alpha, lambda)?;
        Ok(TorusFamily { side_rule: Arc::new(side_rule), limit })
    }

    pub fn dimension(&self) -> usize {
        self.limit.dimension()
    }

    pub fn limit(&self) -> &ContinuousTorusSpec {
        &self.limit
    }

    pub fn sides(&self, n: usize) -> Vec<usize> {
        (self.side_rule)(n)
    }

    pub fn spec(&self, n: usize) -> Result<TorusBundleSpec> {
        let sides = self.sides(n);
        if sides.len() != self.dimension() {
            return Err(Error::invalid("side rule returned the wrong number of sides"));
        }
        let size = sides.iter().try_fold(1usize, |acc, &a| acc.checked_mul(a)).unwrap_or(usize::MAX);
        if size > DEFAULT_MAX_VERTICES {
            return Err(Error::CapExceeded { what: "torus vertex count", size, cap: DEFAULT_MAX_VERTICES });
        }
        TorusBundleSpec::with_holonomies(sides, self.limit.lambda())
    }
}

/// Residuals r(n) with a log–log slope fitted by unweighted least squares.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ResidualSeries {
    pub ns: Vec<usize>,
    pub residuals: Vec<f64>,
    pub slope: Option<f64>,
}

impl ResidualSeries {
    pub fn new(ns: Vec<usize>, residuals: Vec<f64>) -> Self {
        let pts: Vec<(f64, f64)> = ns
            .iter()
            .zip(&residuals)
            .filter(|(_, r)| **r != 0.0 && r.is_finite())
            .map(|(&n, r)| ((n as f64).ln(), r.abs().ln()))
            .collect();
        let slope = (pts.len() >= 2).then(|| {
            let k = pts.len() as f64;
            let mx = pts.iter().map(|p| p.0).sum::<f64>() / k;
            let my = pts.iter().map(|p| p.1).sum::<f64>() / k;
            let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
            let sxx: f64 = pts.iter().map(|p| (p.0 - mx).powi(2)).sum();
            sxy / sxx
        });
        ResidualSeries { ns, residuals, slope }
    }

    /// |r| strictly decreasing along the series.
    pub fn is_strictly_decreasing(&self) -> bool {
        self.residuals.windows(2).all(|w| w[1].abs() < w[0].abs())
    }
}

fn positive_log_det(spec: &TorusBundleSpec) -> Result<f64> {
    if spec.is_trivial() {
        return Err(Error::refused(
            "trivial bundle: the constant function is a zero mode, use log_det_star",
        ));
    }
    let ev = torus_eigenvalues(spec);
    if ev[0] <= 0.0 {
        return Err(Error::refused("the spectrum contains a zero eigenvalue"));
    }
    Ok(ev.iter().map(|e| e.ln()).sum())
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LogDetReport {
    pub eigen_logdet: f64,
    pub lu_logdet: Option<f64>,
    pub holonomies: Vec<f64>,
}

/// Eigenvalue log-determinant, plus the dense LU value on small tori.
pub fn log_det_report(spec: &TorusBundleSpec) -> Result<LogDetReport> {
    let eigen_logdet = positive_log_det(spec)?;
    let lu_logdet = if spec.vertex_count() <= LU_CROSS_CHECK_MAX {
        Some(laplacian(&build_torus(spec))?.log_abs_determinant())
    } else {
        None
    };
    if let Some(lu) = lu_logdet {
        let err = (lu - eigen_logdet).abs();
        if err > 1e-8 * (1.0 + eigen_logdet.abs()) {
            return Err(Error::NonConvergence {
                context: "log det cross-check against LU".into(),
                value: eigen_logdet,
                error: err,
            });
        }
    }
    Ok(LogDetReport { eigen_logdet, lu_logdet, holonomies: spec.holonomies().to_vec() })
}

/// log det Δ for a bundle with some nontrivial holonomy.
pub fn log_det(spec: &TorusBundleSpec) -> Result<f64> {
    Ok(log_det_report(spec)?.eigen_logdet)
}

/// log det* Δ of the trivial bundle: the one zero eigenvalue is dropped.
pub fn log_det_star(spec: &TorusBundleSpec) -> Result<f64> {
    if !spec.is_trivial() {
        return Err(Error::refused("log_det_star is for the trivial bundle, use log_det"));
    }
    let ev = torus_eigenvalues(spec);
    let max = ev.last().copied().unwrap_or(0.0);
    let threshold = 1e-12 * max;
    let zeros = ev.iter().filter(|&&e| e <= threshold).count();
    if zeros != 1 {
        return Err(Error::refused(format!("expected one zero eigenvalue, found {zeros}")));
    }
    Ok(ev.iter().filter(|&&e| e > threshold).map(|e| e.ln()).sum())
}

/// log F: log det* for an all-trivial holonomy, log det otherwise.
fn log_f(spec: &TorusBundleSpec) -> Result<f64> {
    if spec.is_trivial() {
        log_det_star(spec)
    } else {
        positive_log_det(spec)
    }
}

/// H_{d,n} = log det Δ − (∏a_i) c_d.
pub fn h_dn(spec: &TorusBundleSpec) -> Result<f64> {
    let c = c_d(spec.dimension())?;
    Ok(positive_log_det(spec)? - spec.vertex_count() as f64 * c.value)
}

/// H_{d,n} = −∫_0^∞ (θ^{G}(t) − (∏a_i)(e^{−2t}I_0(2t))^d) dt/t by quadrature.
pub fn h_dn_integral(spec: &TorusBundleSpec) -> Result<Quadrature> {
    if spec.is_trivial() {
        return Err(Error::refused("trivial bundle: the integral diverges"));
    }
    let d = spec.dimension();
    let volume = spec.vertex_count() as f64;
    let quad = default_quadrature();
    let near = |t: f64| {
        if t == 0.0 {
            return 0.0;
        }
        theta_discrete_excess(spec, t).unwrap_or(f64::NAN) / t
    };
    let far = |t: f64| {
        (theta_discrete(spec, t) - volume * lattice_heat_trace(d, t).unwrap_or(f64::NAN)) / t
    };
    let gap = torus_eigenvalues(spec)[0];
    let knee = (30.0 / gap).max(2.0);
    let a = integrate(near, 0.0, 1.0, &quad)?;
    let b = integrate_semi_infinite(
        far,
        1.0,
        Tail::Algebraic { decay: 1.0 + 0.5 * d as f64 },
        &quad.clone().with_split_points([knee]),
    )?;
    Ok(Quadrature {
        value: -(a.value + b.value),
        error: a.error + b.error,
        evaluations: a.evaluations + b.evaluations,
    })
}

/// r(n) = log det Δ_n − (∏a_i(n)) c_d + ζ'_EH(0; limit).
pub fn thm11_residuals(family: &TorusFamily, ns: &[usize]) -> Result<ResidualSeries> {
    let c = c_d(family.dimension())?.value;
    let z = zeta_eh_deriv0(family.limit())?.value;
    let residuals = ns
        .par_iter()
        .map(|&n| {
            let spec = family.spec(n)?;
            Ok(positive_log_det(&spec)? - spec.vertex_count() as f64 * c + z)
        })
        .collect::<Result<Vec<f64>>>()?;
    Ok(ResidualSeries::new(ns.to_vec(), residuals))
}

/// r(n) = (ζ_{G_n}(s) − (∏a_i(n)) ζ_{Z^d}(s) − ζ_EH(s) n^{2s}) / n^{2s}.
pub fn thm13_residuals(family: &TorusFamily, s: f64, ns: &[usize]) -> Result<ResidualSeries> {
    let zd = zeta_zd(s, family.dimension())?.value;
    let eh = zeta_eh(s, family.limit())?.value;
    let residuals = ns
        .par_iter()
        .map(|&n| {
            let spec = family.spec(n)?;
            let g = zeta_gn(num_complex::Complex64::new(s, 0.0), &spec)?.re;
            let scale = (n as f64).powf(2.0 * s);
            Ok((g - spec.vertex_count() as f64 * zd - eh * scale) / scale)
        })
        .collect::<Result<Vec<f64>>>()?;
    Ok(ResidualSeries::new(ns.to_vec(), residuals))
}

/// |θ^{G_n}(n² t) − θ^∞(t)|.
pub fn rescaled_theta_gap(family: &TorusFamily, n: usize, t: f64) -> Result<f64> {
    if !(t > 0.0) || !t.is_finite() {
        return Err(Error::invalid(format!("t must be positive and finite, got {t}")));
    }
    let spec = family.spec(n)?;
    let nf = n as f64;
    let discrete = theta_discrete(&spec, nf * nf * t);
    let limit = theta_continuous(family.limit(), t, ThetaForm::Auto)?;
    Ok((discrete - limit).abs())
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ProductFormulaCheck {
    /// log F of the (m_1 n, …, m_d n) torus at holonomies z.
    pub lhs: f64,
    /// Σ over roots u_i^{m_i} = z_i of log F of the (n, …, n) torus at u.
    pub rhs: f64,
}

impl ProductFormulaCheck {
    pub fn relative_error(&self) -> f64 {
        (self.lhs - self.rhs).abs() / (1.0 + self.lhs.abs())
    }
}

/// Both sides of F_{(m_1 n,…,m_d n)}(z) = ∏_{u_i^{m_i} = z_i} F_{(n,…,n)}(u), in logs.
pub fn product_formula_check(m: &[usize], n: usize, z: &[crate::UnitWeight]) -> Result<ProductFormulaCheck> {
    if m.is_empty() || m.len() != z.len() {
        return Err(Error::invalid("m and z must be non-empty and of equal length"));
    }
    if n == 0 || m.contains(&0) {
        return Err(Error::invalid("m_i and n must be positive"));
    }
    let d = m.len();
    let size = m
        .iter()
        .try_fold(1usize, |acc, &mi| acc.checked_mul(mi)?.checked_mul(n))
        .unwrap_or(usize::MAX);
    if size > DEFAULT_MAX_VERTICES {
        return Err(Error::CapExceeded { what: "torus vertex count", size, cap: DEFAULT_MAX_VERTICES });
    }
    let lambda: Vec<f64> = z.iter().map(|w| w.turns()).collect();
    let big_sides = m.iter().map(|mi| mi * n).collect();
    let lhs = log_f(&TorusBundleSpec::with_holonomies(big_sides, &lambda)?)?;

    let tuples: usize = m.iter().product();
    let mut rhs = 0.0;
    for idx in 0..tuples {
        let mut rem = idx;
        let mut u = vec![0.0; d];
        for i in (0..d).rev() {
            let k = rem % m[i];
            rem /= m[i];
            u[i] = (k as f64 + lambda[i]) / m[i] as f64;
        }
        rhs += log_f(&TorusBundleSpec::with_holonomies(vec![n; d], &u)?)?;
    }
    Ok(ProductFormulaCheck { lhs, rhs })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DivisibilityCheck {
    pub n: usize,
    /// F_{(2n,2n)}(1,1) / F_{(n,n)}(1,1) / 4.
    pub quotient: f64,
    pub nearest: f64,
    pub is_integer: bool,
}

/// The trivial-bundle determinant of the 2n × 2n torus is 4·(integer) times
/// that of the n × n torus.
pub fn divisibility_check(n: usize) -> Result<DivisibilityCheck> {
    if n == 0 {
        return Err(Error::invalid("n must be positive"));
    }
    let big = log_det_star(&TorusBundleSpec::trivial(vec![2 * n, 2 * n])?)?;
    let small = log_det_star(&TorusBundleSpec::trivial(vec![n, n])?)?;
    let quotient = (big - small).exp() / 4.0;
    let nearest = quotient.round();
    let is_integer = (quotient - nearest).abs() <= 1e-6 * quotient.abs().max(1.0) && nearest >= 1.0;
    Ok(DivisibilityCheck { n, quotient, nearest, is_integer })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::UnitWeight;

    #[test]
    fn log_det_examples() {
        let s = TorusBundleSpec::with_holonomies(vec![7], &[0.3]).unwrap();
        let exact = (4.0 * (std::f64::consts::PI * 0.3).sin().powi(2)).ln();
        assert!((log_det(&s).unwrap() - exact).abs() < 1e-12);
        let s = TorusBundleSpec::with_holonomies(vec![2, 2], &[0.5, 0.5]).unwrap();
        let r = log_det_report(&s).unwrap();
        assert!((r.eigen_logdet - 256f64.ln()).abs() < 1e-12);
        assert!((r.lu_logdet.unwrap() - 256f64.ln()).abs() < 1e-10);
        assert!(log_det(&TorusBundleSpec::trivial(vec![3]).unwrap()).is_err());
    }

    #[test]
    fn log_det_star_examples() {
        let v = log_det_star(&TorusBundleSpec::trivial(vec![3]).unwrap()).unwrap();
        assert!((v - 9f64.ln()).abs() < 1e-12);
        let v = log_det_star(&TorusBundleSpec::trivial(vec![2]).unwrap()).unwrap();
        assert!((v - 4f64.ln()).abs() < 1e-12);
        let v = log_det_star(&TorusBundleSpec::trivial(vec![1, 1]).unwrap()).unwrap();
        assert_eq!(v, 0.0);
    }

    #[test]
    fn residual_series_slope() {
        let r = ResidualSeries::new(vec![10, 100], vec![1.0, 0.01]);
        assert!((r.slope.unwrap() + 2.0).abs() < 1e-12);
        assert!(r.is_strictly_decreasing());
    }

    #[test]
    fn product_formula_small() {
        let z = [UnitWeight::ONE, UnitWeight::ONE];
        let c = product_formula_check(&[2, 2], 2, &z).unwrap();
        assert!(c.relative_error() < 1e-12, "{c:?}");
        let c = product_formula_check(&[2], 3, &[UnitWeight::from_turns(0.3)]).unwrap();
        assert!(c.relative_error() < 1e-12);
    }

    #[test]
    fn divisibility_small() {
        let c = divisibility_check(1).unwrap();
        assert!(c.is_integer && c.nearest == 32.0, "{c:?}");
    }
}
