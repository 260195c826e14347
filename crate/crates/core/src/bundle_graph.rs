//! Line bundles on finite graphs, discrete tori, and the bundle Laplacian
//! `Δf(v) = Σ_{w∼v} (f(v) − φ_{w→v} f(w))`.
//!
//! Vertices of a torus `∏ Z/a_iZ` are indexed row-major over `(x_1, …, x_d)`
//! (the last coordinate varies fastest). Every vertex carries one oriented
//! edge along each `+e_i`, so sides of length 2 produce double edges and
//! sides of length 1 produce self-loops; each vertex has degree `2d`.
//!
//! A self-loop with weight `w` contributes `2 − w − w̄` to the diagonal. This
//! is the convention under which the closed-form torus spectrum also holds
//! for `a_i = 1`.

use std::f64::consts::PI;

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::error::{Error, Result};

/// Allowed deviation of `|w|` from 1.
pub const UNIT_TOLERANCE: f64 = 1e-12;

/// Largest dense operator assembled by default.
pub const DEFAULT_MAX_MATRIX_DIM: usize = 20_000;

/// A complex number of modulus one attached to an oriented edge.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct UnitWeight(Complex64);

impl UnitWeight {
    pub const ONE: UnitWeight = UnitWeight(Complex64 { re: 1.0, im: 0.0 });

    pub fn new(value: Complex64) -> Result<Self> {
        if !(value.re.is_finite() && value.im.is_finite()) {
            return Err(Error::invalid(format!("edge weight {value} is not finite")));
        }
        if (value.norm() - 1.0).abs() > UNIT_TOLERANCE {
            return Err(Error::invalid(format!(
                "edge weight {value} has modulus {}, expected 1 within {UNIT_TOLERANCE:e}",
                value.norm()
            )));
        }
        Ok(UnitWeight(value))
    }

    /// `e^{2πi·turns}`.
    pub fn from_turns(turns: f64) -> Self {
        UnitWeight(Complex64::from_polar(1.0, 2.0 * PI * turns))
    }

    pub fn value(self) -> Complex64 {
        self.0
    }

    /// Weight of the reverse orientation.
    pub fn inverse(self) -> Self {
        UnitWeight(self.0.conj())
    }

    /// Argument divided by 2π, reduced into `[0, 1)`.
    pub fn turns(self) -> f64 {
        turns_of(self.0)
    }
}

fn turns_of(z: Complex64) -> f64 {
    let t = (z.arg() / (2.0 * PI)).rem_euclid(1.0);
    if t >= 1.0 {
        0.0
    } else {
        t
    }
}

/// Oriented representative `tail → head` of an unoriented edge.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Edge {
    pub tail: usize,
    pub head: usize,
    pub weight: UnitWeight,
}

/// Connected finite graph with a unitary line bundle. Multi-edges and
/// self-loops are allowed.
#[derive(Debug, Clone, PartialEq)]
pub struct LineBundleGraph {
    vertex_count: usize,
    edges: Vec<Edge>,
}

impl LineBundleGraph {
    pub fn new(vertex_count: usize, edges: Vec<Edge>) -> Result<Self> {
        if vertex_count == 0 {
            return Err(Error::invalid("a graph needs at least one vertex"));
        }
        for (i, e) in edges.iter().enumerate() {
            if e.tail >= vertex_count || e.head >= vertex_count {
                return Err(Error::invalid(format!(
                    "edge {i} ({} -> {}) references a vertex outside 0..{vertex_count}",
                    e.tail, e.head
                )));
            }
            // re-validate in case the weight was built through `from_turns`
            UnitWeight::new(e.weight.value())?;
        }
        let g = LineBundleGraph {
            vertex_count,
            edges,
        };
        if !g.is_connected() {
            return Err(Error::invalid("graph is not connected"));
        }
        Ok(g)
    }

    /// Cycle `0 → 1 → … → n−1 → 0`; `weights[j]` sits on the edge `j → j+1`.
    pub fn cycle(weights: &[UnitWeight]) -> Result<Self> {
        let n = weights.len();
        let edges = weights
            .iter()
            .enumerate()
            .map(|(j, &w)| Edge {
                tail: j,
                head: (j + 1) % n,
                weight: w,
            })
            .collect();
        LineBundleGraph::new(n, edges)
    }

    pub fn vertex_count(&self) -> usize {
        self.vertex_count
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    /// Degree counting multiplicity; a self-loop counts twice.
    pub fn degree(&self, v: usize) -> usize {
        self.edges
            .iter()
            .map(|e| (e.tail == v) as usize + (e.head == v) as usize)
            .sum()
    }

    fn is_connected(&self) -> bool {
        let mut adj = vec![Vec::new(); self.vertex_count];
        for e in &self.edges {
            adj[e.tail].push(e.head);
            adj[e.head].push(e.tail);
        }
        let mut seen = vec![false; self.vertex_count];
        let mut stack = vec![0];
        seen[0] = true;
        while let Some(v) = stack.pop() {
            for &u in &adj[v] {
                if !seen[u] {
                    seen[u] = true;
                    stack.push(u);
                }
            }
        }
        seen.into_iter().all(|s| s)
    }

    /// Conjugate the bundle by the diagonal unitary `U = diag(phases)`:
    /// the weight on `t → h` becomes `u_h · w · ū_t`.
    pub fn gauge_transform(&self, phases: &[UnitWeight]) -> Result<Self> {
        if phases.len() != self.vertex_count {
            return Err(Error::invalid("one gauge phase per vertex is required"));
        }
        let edges = self
            .edges
            .iter()
            .map(|e| Edge {
                weight: UnitWeight(phases[e.head].0 * e.weight.0 * phases[e.tail].0.conj()),
                ..*e
            })
            .collect();
        Ok(LineBundleGraph {
            vertex_count: self.vertex_count,
            edges,
        })
    }
}

/// Discrete torus `∏ Z/a_iZ` with per-direction edge weights.
#[derive(Debug, Clone, PartialEq)]
pub struct TorusBundleSpec {
    sides: Vec<usize>,
    weights: Vec<Vec<UnitWeight>>,
    holonomies: Vec<f64>,
}

impl TorusBundleSpec {
    /// `weights[i][j]` is the weight on the oriented edge `j → j+1` of the
    /// i-th cyclic factor.
    pub fn new(sides: Vec<usize>, weights: Vec<Vec<UnitWeight>>) -> Result<Self> {
        if sides.is_empty() {
            return Err(Error::invalid("torus dimension must be at least 1"));
        }
        if sides.contains(&0) {
            return Err(Error::invalid("torus sides must be positive"));
        }
        if weights.len() != sides.len() {
            return Err(Error::invalid(format!(
                "{} weight lists for a {}-dimensional torus",
                weights.len(),
                sides.len()
            )));
        }
        for (i, (a, w)) in sides.iter().zip(&weights).enumerate() {
            if w.len() != *a {
                return Err(Error::invalid(format!(
                    "direction {i} has side {a} but {} weights",
                    w.len()
                )));
            }
            for x in w {
                UnitWeight::new(x.value())?;
            }
        }
        let holonomies = weights
            .iter()
            .map(|w| turns_of(w.iter().fold(Complex64::new(1.0, 0.0), |acc, x| acc * x.0)))
            .collect();
        Ok(TorusBundleSpec {
            sides,
            weights,
            holonomies,
        })
    }

    /// All edges trivial except `a_i − 1 → 0`, which carries `e^{2πiλ_i}`.
    pub fn with_holonomies(sides: Vec<usize>, lambdas: &[f64]) -> Result<Self> {
        if lambdas.len() != sides.len() {
            return Err(Error::invalid("one holonomy per direction is required"));
        }
        if let Some(l) = lambdas.iter().find(|l| !l.is_finite()) {
            return Err(Error::invalid(format!("holonomy {l} is not finite")));
        }
        let weights = sides
            .iter()
            .zip(lambdas)
            .map(|(&a, &l)| {
                let mut w = vec![UnitWeight::ONE; a];
                if a > 0 && l.rem_euclid(1.0) != 0.0 {
                    w[a - 1] = UnitWeight::from_turns(l);
                }
                w
            })
            .collect();
        TorusBundleSpec::new(sides, weights)
    }

    pub fn trivial(sides: Vec<usize>) -> Result<Self> {
        let zeros = vec![0.0; sides.len()];
        TorusBundleSpec::with_holonomies(sides, &zeros)
    }

    pub fn dimension(&self) -> usize {
        self.sides.len()
    }

    pub fn sides(&self) -> &[usize] {
        &self.sides
    }

    pub fn weights(&self) -> &[Vec<UnitWeight>] {
        &self.weights
    }

    /// Cached holonomies λ_i ∈ [0, 1).
    pub fn holonomies(&self) -> &[f64] {
        &self.holonomies
    }

    pub fn vertex_count(&self) -> usize {
        self.sides.iter().product()
    }

    /// True when every holonomy vanishes, i.e. Δ has a zero mode.
    pub fn is_trivial(&self) -> bool {
        self.holonomies.iter().all(|&l| l == 0.0)
    }
}

/// Row-major strides of the vertex grid.
pub(crate) fn strides(sides: &[usize]) -> Vec<usize> {
    let mut s = vec![1; sides.len()];
    for i in (0..sides.len().saturating_sub(1)).rev() {
        s[i] = s[i + 1] * sides[i + 1];
    }
    s
}

/// Cayley graph of `∏ Z/a_iZ` with the bundle of `spec`.
pub fn build_torus(spec: &TorusBundleSpec) -> LineBundleGraph {
    let sides = spec.sides();
    let stride = strides(sides);
    let n = spec.vertex_count();
    let mut edges = Vec::with_capacity(n * sides.len());
    for v in 0..n {
        for (i, &a) in sides.iter().enumerate() {
            let x = (v / stride[i]) % a;
            let up = v - x * stride[i] + ((x + 1) % a) * stride[i];
            edges.push(Edge {
                tail: v,
                head: up,
                weight: spec.weights()[i][x],
            });
        }
    }
    LineBundleGraph { vertex_count: n, edges }
}

/// Holonomies λ_i ∈ [0, 1) with `e^{2πiλ_i} = ∏_j w_{i,j}`.
pub fn holonomies(spec: &TorusBundleSpec) -> Vec<f64> {
    spec.holonomies().to_vec()
}

/// Dense complex Hermitian matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct HermitianOperator {
    matrix: DMatrix<Complex64>,
}

impl HermitianOperator {
    /// Wraps `matrix` after checking it is square and Hermitian.
    pub fn new(matrix: DMatrix<Complex64>) -> Result<Self> {
        if matrix.nrows() != matrix.ncols() || matrix.nrows() == 0 {
            return Err(Error::invalid("operator must be a non-empty square matrix"));
        }
        let op = HermitianOperator { matrix };
        if op.hermitian_defect() > 1e-12 * (1.0 + op.max_abs_entry()) {
            return Err(Error::invalid("matrix is not Hermitian"));
        }
        Ok(op)
    }

    pub fn size(&self) -> usize {
        self.matrix.nrows()
    }

    pub fn entry(&self, row: usize, col: usize) -> Complex64 {
        self.matrix[(row, col)]
    }

    pub fn matrix(&self) -> &DMatrix<Complex64> {
        &self.matrix
    }

    pub fn max_abs_entry(&self) -> f64 {
        self.matrix.iter().fold(0.0, |m, z| m.max(z.norm()))
    }

    /// max |A_pq − conj(A_qp)|.
    pub fn hermitian_defect(&self) -> f64 {
        let n = self.size();
        let mut worst = 0.0f64;
        for p in 0..n {
            for q in p..n {
                worst = worst.max((self.matrix[(p, q)] - self.matrix[(q, p)].conj()).norm());
            }
        }
        worst
    }

    /// Eigenvalues in ascending order from a dense Hermitian eigensolver.
    pub fn eigenvalues(&self) -> Vec<f64> {
        let mut ev: Vec<f64> = self.matrix.clone().symmetric_eigenvalues().iter().copied().collect();
        ev.sort_by(f64::total_cmp);
        ev
    }

    /// Determinant by LU with partial pivoting.
    pub fn determinant(&self) -> Complex64 {
        self.matrix.clone().lu().determinant()
    }

    /// ln|det| from the LU factors, robust against overflow.
    pub fn log_abs_determinant(&self) -> f64 {
        let lu = self.matrix.clone().lu();
        let u = lu.u();
        (0..self.size()).map(|i| u[(i, i)].norm().ln()).sum()
    }
}

/// Bundle Laplacian of `graph` as a dense Hermitian matrix.
pub fn laplacian(graph: &LineBundleGraph) -> Result<HermitianOperator> {
    laplacian_with_cap(graph, DEFAULT_MAX_MATRIX_DIM)
}

pub fn laplacian_with_cap(graph: &LineBundleGraph, max_dim: usize) -> Result<HermitianOperator> {
    let n = graph.vertex_count();
    if n > max_dim {
        return Err(Error::CapExceeded {
            what: "matrix dimension",
            size: n,
            cap: max_dim,
        });
    }
    let mut m = DMatrix::<Complex64>::zeros(n, n);
    for e in graph.edges() {
        UnitWeight::new(e.weight.value())?;
        let w = e.weight.value();
        m[(e.tail, e.tail)] += 1.0;
        m[(e.head, e.head)] += 1.0;
        if e.tail == e.head {
            m[(e.tail, e.tail)] -= w + w.conj();
        } else {
            // φ_{tail→head} acts at the head, its inverse at the tail
            m[(e.head, e.tail)] -= w;
            m[(e.tail, e.head)] -= w.conj();
        }
    }
    Ok(HermitianOperator { matrix: m })
}

/// 4 sin²(π m / a) with the argument folded so that m/a ≤ 1/2.
pub(crate) fn circle_eigenvalue(j: usize, lambda: f64, a: usize) -> f64 {
    let af = a as f64;
    let mut m = j as f64 + lambda;
    if m > 0.5 * af {
        m = af - m;
    }
    let s = (PI * m / af).sin();
    4.0 * s * s
}

/// Eigenvalues of one cyclic factor, `4 sin²(π(j + λ)/a)` for `0 ≤ j < a`.
pub fn circle_eigenvalues(a: usize, lambda: f64) -> Vec<f64> {
    (0..a).map(|j| circle_eigenvalue(j, lambda, a)).collect()
}

/// Closed-form Laplace spectrum of the torus, ascending.
pub fn torus_eigenvalues(spec: &TorusBundleSpec) -> Vec<f64> {
    let factors: Vec<Vec<f64>> = spec
        .sides()
        .iter()
        .zip(spec.holonomies())
        .map(|(&a, &l)| circle_eigenvalues(a, l))
        .collect();
    let mut out = vec![0.0f64];
    for f in &factors {
        let mut next = Vec::with_capacity(out.len() * f.len());
        for &base in &out {
            for &x in f {
                next.push(base + x);
            }
        }
        out = next;
    }
    out.sort_by(f64::total_cmp);
    out
}
