//! Oracles and generators shared by the integration tests. Everything here is
//! computed independently of the library's own closed forms.

#![allow(dead_code)]

use std::f64::consts::PI;

use bundle_lab::{Edge, LineBundleGraph, TorusBundleSpec, UnitWeight};
use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::Rng;

pub fn random_weight<R: Rng>(rng: &mut R) -> UnitWeight {
    UnitWeight::from_turns(rng.random::<f64>())
}

pub fn random_cycle<R: Rng>(rng: &mut R, n: usize) -> LineBundleGraph {
    let w: Vec<UnitWeight> = (0..n).map(|_| random_weight(rng)).collect();
    LineBundleGraph::cycle(&w).unwrap()
}

pub fn random_torus<R: Rng>(rng: &mut R, sides: &[usize]) -> TorusBundleSpec {
    let weights = sides.iter().map(|&a| (0..a).map(|_| random_weight(rng)).collect()).collect();
    TorusBundleSpec::new(sides.to_vec(), weights).unwrap()
}

/// Complete graph on four vertices, random orientation-consistent weights.
pub fn random_k4<R: Rng>(rng: &mut R) -> LineBundleGraph {
    let mut edges = Vec::new();
    for i in 0..4 {
        for j in i + 1..4 {
            edges.push(Edge { tail: i, head: j, weight: random_weight(rng) });
        }
    }
    LineBundleGraph::new(4, edges).unwrap()
}

/// Bundle Laplacian assembled from scratch: (Δf)(v) = Σ_{e ∋ v} (f(v) − φ f(other)).
pub fn dense_laplacian(g: &LineBundleGraph) -> DMatrix<Complex64> {
    let n = g.vertex_count();
    let mut m = DMatrix::<Complex64>::zeros(n, n);
    for e in g.edges() {
        let w = e.weight.value();
        m[(e.head, e.head)] += 1.0;
        m[(e.head, e.tail)] -= w;
        m[(e.tail, e.tail)] += 1.0;
        m[(e.tail, e.head)] -= w.conj();
    }
    m
}

/// Eigen-decomposition of a Hermitian matrix, via nalgebra.
pub fn hermitian_eigen(m: &DMatrix<Complex64>) -> (Vec<f64>, DMatrix<Complex64>) {
    let e = m.clone().symmetric_eigen();
    (e.eigenvalues.iter().copied().collect(), e.eigenvectors)
}

/// exp(−tM) for Hermitian M through its spectral decomposition.
pub fn heat_matrix(m: &DMatrix<Complex64>, t: f64) -> DMatrix<Complex64> {
    let (vals, vecs) = hermitian_eigen(m);
    let n = vals.len();
    let mut out = DMatrix::<Complex64>::zeros(n, n);
    for (k, &l) in vals.iter().enumerate() {
        let c = (-t * l).exp();
        let v = vecs.column(k);
        for r in 0..n {
            for s in 0..n {
                out[(r, s)] += v[r] * v[s].conj() * c;
            }
        }
    }
    out
}

/// Row-major index of a torus point (last coordinate fastest).
pub fn torus_index(sides: &[usize], x: &[usize]) -> usize {
    sides.iter().zip(x).fold(0, |acc, (&a, &xi)| acc * a + xi)
}

/// All points of the torus in row-major order.
pub fn torus_points(sides: &[usize]) -> Vec<Vec<usize>> {
    let mut pts = vec![vec![]];
    for &a in sides {
        pts = pts
            .into_iter()
            .flat_map(|p| {
                (0..a).map(move |x| {
                    let mut q = p.clone();
                    q.push(x);
                    q
                })
            })
            .collect();
    }
    pts
}

/// Catalan's constant from the fast series
/// G = (π/8) ln(2 + √3) + (3/8) Σ_k 1 / ((2k+1)² C(2k, k)).
pub fn catalan() -> f64 {
    let mut sum = 0.0;
    let mut central = 1.0; // C(2k, k)
    for k in 0..60 {
        let kf = k as f64;
        if k > 0 {
            central *= (2.0 * kf) * (2.0 * kf - 1.0) / (kf * kf);
        }
        sum += 1.0 / ((2.0 * kf + 1.0).powi(2) * central);
    }
    PI / 8.0 * (2.0 + 3f64.sqrt()).ln() + 3.0 / 8.0 * sum
}

/// I_m(z) by its power series, fine for |z| ≲ 10.
pub fn bessel_i_series(m: u64, z: Complex64) -> Complex64 {
    let half = z * 0.5;
    let mut term = Complex64::new(1.0, 0.0);
    for k in 1..=m {
        term *= half / k as f64;
    }
    let mut sum = term;
    let q = half * half;
    for k in 1..200u64 {
        term *= q / (k as f64 * (m + k) as f64);
        sum += term;
        if term.norm() < 1e-18 * sum.norm() {
            break;
        }
    }
    sum
}

/// ln of the nonzero-eigenvalue product, straight from the dense matrix.
pub fn dense_log_det(m: &DMatrix<Complex64>) -> f64 {
    hermitian_eigen(m).0.iter().map(|l| l.ln()).sum()
}
