//! Cycle-rooted spanning forests (CRSFs) and the determinant identity
//! `det Δ = Σ_CRSF ∏_cycles (2 − w − 1/w)`.
//!
//! Enumeration walks all edge subsets of size `|V|` in lexicographic order
//! and keeps those in which every connected component has exactly one cycle.
//! Cost is `C(|E|, |V|)`, so the edge count is capped.

use num_complex::Complex64;

use crate::bundle_graph::{laplacian, LineBundleGraph};
use crate::error::{Error, Result};

/// Default cap on the number of edges for exhaustive enumeration.
pub const DEFAULT_MAX_EDGES: usize = 24;

/// One oriented cycle of a CRSF.
#[derive(Debug, Clone, PartialEq)]
pub struct CrsfCycle {
    /// Vertices in traversal order, starting at the smallest vertex index.
    pub vertices: Vec<usize>,
    /// Edge indices in traversal order.
    pub edges: Vec<usize>,
    /// Product of oriented edge weights along the traversal.
    pub monodromy: Complex64,
}

/// A cycle-rooted spanning forest: edge indices plus one cycle per component.
#[derive(Debug, Clone, PartialEq)]
pub struct Crsf {
    pub edges: Vec<usize>,
    pub cycles: Vec<CrsfCycle>,
}

/// `∏ (2 − w − 1/w)` over the cycles of `c`.
pub fn crsf_weight(c: &Crsf) -> f64 {
    c.cycles
        .iter()
        .map(|cy| cycle_factor(cy.monodromy))
        .product()
}

/// `2 − w − 1/w` for a unit-modulus monodromy.
pub fn cycle_factor(w: Complex64) -> f64 {
    let v = Complex64::new(2.0, 0.0) - w - w.inv();
    v.re
}

struct UnionFind {
    parent: Vec<usize>,
    cycles: Vec<u8>,
}

impl UnionFind {
    fn new(n: usize) -> Self {
        UnionFind {
            parent: (0..n).collect(),
            cycles: vec![0; n],
        }
    }

    fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    /// Adds an edge; returns false once some component has two cycles.
    fn add(&mut self, a: usize, b: usize) -> bool {
        let ra = self.find(a);
        let rb = self.find(b);
        if ra == rb {
            self.cycles[ra] += 1;
            self.cycles[ra] < 2
        } else {
            let c = self.cycles[ra] + self.cycles[rb];
            self.parent[ra] = rb;
            self.cycles[rb] = c;
            c < 2
        }
    }
}

/// Lazily enumerates the CRSFs of a graph in lexicographic subset order.
pub struct CrsfIter<'g> {
    graph: &'g LineBundleGraph,
    combo: Vec<usize>,
    done: bool,
}

impl<'g> CrsfIter<'g> {
    fn advance(&mut self) {
        let k = self.combo.len();
        let m = self.graph.edge_count();
        let mut i = k;
        while i > 0 {
            i -= 1;
            if self.combo[i] < m - k + i {
                self.combo[i] += 1;
                for j in i + 1..k {
                    self.combo[j] = self.combo[j - 1] + 1;
                }
                return;
            }
        }
        self.done = true;
    }

    fn is_crsf(&self) -> bool {
        let n = self.graph.vertex_count();
        let mut uf = UnionFind::new(n);
        for &e in &self.combo {
            let edge = &self.graph.edges()[e];
            if !uf.add(edge.tail, edge.head) {
                return false;
            }
        }
        // |E| = |V| and no component has two cycles, so none is a tree
        true
    }
}

impl Iterator for CrsfIter<'_> {
    type Item = Crsf;

    fn next(&mut self) -> Option<Crsf> {
        while !self.done {
            let hit = self.is_crsf();
            let subset = self.combo.clone();
            self.advance();
            if hit {
                return Some(decompose(self.graph, subset));
            }
        }
        None
    }
}

/// All CRSFs of `graph`, refusing graphs with more than [`DEFAULT_MAX_EDGES`] edges.
pub fn enumerate_crsfs(graph: &LineBundleGraph) -> Result<CrsfIter<'_>> {
    enumerate_crsfs_with_cap(graph, DEFAULT_MAX_EDGES)
}

pub fn enumerate_crsfs_with_cap(graph: &LineBundleGraph, max_edges: usize) -> Result<CrsfIter<'_>> {
    let m = graph.edge_count();
    if m > max_edges {
        return Err(Error::CapExceeded {
            what: "edge count for CRSF enumeration",
            size: m,
            cap: max_edges,
        });
    }
    let n = graph.vertex_count();
    Ok(CrsfIter {
        graph,
        combo: (0..n).collect(),
        done: n > m,
    })
}

/// Splits a CRSF edge set into its cycles by peeling leaves.
fn decompose(graph: &LineBundleGraph, subset: Vec<usize>) -> Crsf {
    let n = graph.vertex_count();
    let edges = graph.edges();
    let mut alive = subset.clone();
    let mut deg = vec![0usize; n];
    for &e in &alive {
        deg[edges[e].tail] += 1;
        deg[edges[e].head] += 1;
    }
    loop {
        let before = alive.len();
        alive.retain(|&e| {
            let (t, h) = (edges[e].tail, edges[e].head);
            if t != h && (deg[t] == 1 || deg[h] == 1) {
                deg[t] -= 1;
                deg[h] -= 1;
                false
            } else {
                true
            }
        });
        if alive.len() == before {
            break;
        }
    }

    // what remains is a disjoint union of cycles
    let mut used = vec![false; edges.len()];
    let mut starts: Vec<usize> = alive
        .iter()
        .flat_map(|&e| [edges[e].tail, edges[e].head])
        .collect();
    starts.sort_unstable();
    starts.dedup();
    let mut on_cycle = vec![false; n];
    let mut cycles = Vec::new();
    for v0 in starts {
        if on_cycle[v0] {
            continue;
        }
        let cycle = trace_cycle(graph, &alive, &mut used, v0);
        for &v in &cycle.vertices {
            on_cycle[v] = true;
        }
        cycles.push(cycle);
    }
    Crsf {
        edges: subset,
        cycles,
    }
}

/// Walks the cycle through `v0`: first step toward the smallest neighbour
/// (lowest edge index among parallel edges).
fn trace_cycle(graph: &LineBundleGraph, alive: &[usize], used: &mut [bool], v0: usize) -> CrsfCycle {
    let edges = graph.edges();
    let other = |e: usize, v: usize| {
        if edges[e].tail == v {
            edges[e].head
        } else {
            edges[e].tail
        }
    };
    let mut vertices = vec![v0];
    let mut path = Vec::new();
    let mut monodromy = Complex64::new(1.0, 0.0);
    let mut v = v0;
    loop {
        let next = alive
            .iter()
            .copied()
            .filter(|&e| !used[e] && (edges[e].tail == v || edges[e].head == v))
            .min_by_key(|&e| (other(e, v), e));
        let Some(e) = next else { break };
        used[e] = true;
        path.push(e);
        let edge = edges[e];
        if edge.tail == v {
            monodromy *= edge.weight.value();
        } else {
            monodromy *= edge.weight.inverse().value();
        }
        v = other(e, v);
        if v == v0 {
            break;
        }
        vertices.push(v);
    }
    CrsfCycle {
        vertices,
        edges: path,
        monodromy,
    }
}

/// Summary of a CRSF expansion next to the dense determinant.
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize)]
pub struct KenyonCheck {
    pub crsf_count: u64,
    pub kenyon_sum: f64,
    pub det: f64,
    pub abs_error: f64,
}

/// Σ over CRSFs of `crsf_weight`.
pub fn kenyon_sum(graph: &LineBundleGraph) -> Result<f64> {
    Ok(enumerate_crsfs(graph)?.map(|c| crsf_weight(&c)).sum())
}

/// CRSF count, Kenyon sum, and the LU determinant of the bundle Laplacian.
pub fn kenyon_check(graph: &LineBundleGraph, max_edges: usize) -> Result<KenyonCheck> {
    let mut count = 0u64;
    let mut sum = 0.0;
    for c in enumerate_crsfs_with_cap(graph, max_edges)? {
        count += 1;
        sum += crsf_weight(&c);
    }
    let det = laplacian(graph)?.determinant().re;
    Ok(KenyonCheck {
        crsf_count: count,
        kenyon_sum: sum,
        det,
        abs_error: (sum - det).abs(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bundle_graph::{build_torus, Edge, TorusBundleSpec, UnitWeight};

    #[test]
    fn cycle_has_exactly_one_crsf() {
        for n in 3..8 {
            let g = LineBundleGraph::cycle(&vec![UnitWeight::ONE; n]).unwrap();
            let all: Vec<_> = enumerate_crsfs(&g).unwrap().collect();
            assert_eq!(all.len(), 1);
            assert_eq!(all[0].cycles.len(), 1);
            assert_eq!(all[0].cycles[0].vertices.len(), n);
        }
    }

    #[test]
    fn self_loop_is_a_crsf() {
        let w = UnitWeight::from_turns(0.3);
        let g = LineBundleGraph::new(1, vec![Edge { tail: 0, head: 0, weight: w }]).unwrap();
        let all: Vec<_> = enumerate_crsfs(&g).unwrap().collect();
        assert_eq!(all.len(), 1);
        assert!((all[0].cycles[0].monodromy - w.value()).norm() < 1e-15);
    }

    #[test]
    fn weight_examples() {
        assert_eq!(cycle_factor(Complex64::new(-1.0, 0.0)), 4.0);
        assert_eq!(cycle_factor(Complex64::new(1.0, 0.0)), 0.0);
        let c = Crsf {
            edges: vec![],
            cycles: vec![
                CrsfCycle { vertices: vec![], edges: vec![], monodromy: Complex64::new(0.0, 1.0) },
                CrsfCycle { vertices: vec![], edges: vec![], monodromy: Complex64::new(-1.0, 0.0) },
            ],
        };
        assert!((crsf_weight(&c) - 8.0).abs() < 1e-15);
    }

    #[test]
    fn signed_triangle() {
        let g = LineBundleGraph::cycle(&[UnitWeight::ONE, UnitWeight::ONE, UnitWeight::new(Complex64::new(-1.0, 0.0)).unwrap()]).unwrap();
        assert!((kenyon_sum(&g).unwrap() - 4.0).abs() < 1e-14);
    }

    #[test]
    fn monodromy_orientation_convention() {
        // triangle 0→1→2→0 with weight z on 2→0: walking from 0 toward 1
        // traverses every edge forward
        let z = UnitWeight::from_turns(0.15);
        let g = LineBundleGraph::cycle(&[UnitWeight::ONE, UnitWeight::ONE, z]).unwrap();
        let c = enumerate_crsfs(&g).unwrap().next().unwrap();
        assert_eq!(c.cycles[0].vertices, vec![0, 1, 2]);
        assert!((c.cycles[0].monodromy - z.value()).norm() < 1e-15);
    }

    #[test]
    fn parallel_edges_form_two_cycle() {
        let a = UnitWeight::from_turns(0.1);
        let b = UnitWeight::from_turns(0.25);
        let g = LineBundleGraph::new(
            2,
            vec![Edge { tail: 0, head: 1, weight: a }, Edge { tail: 1, head: 0, weight: b }],
        )
        .unwrap();
        let all: Vec<_> = enumerate_crsfs(&g).unwrap().collect();
        assert_eq!(all.len(), 1);
        let m = all[0].cycles[0].monodromy;
        assert!((m - a.value() * b.value()).norm() < 1e-15);
        let det = laplacian(&g).unwrap().determinant().re;
        assert!((crsf_weight(&all[0]) - det).abs() < 1e-13);
    }

    #[test]
    fn cap_is_enforced() {
        let g = build_torus(&TorusBundleSpec::trivial(vec![5, 3]).unwrap()); // 30 edges
        match enumerate_crsfs(&g) {
            Err(Error::CapExceeded { size: 30, cap: 24, .. }) => {}
            Err(e) => panic!("unexpected error {e}"),
            Ok(_) => panic!("expected refusal"),
        }
    }
}
