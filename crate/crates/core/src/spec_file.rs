//! JSON documents describing a torus bundle or a general line-bundle graph.
//!
//! ```json
//! {"dimension": 1, "sides": [3], "weights": [[{"re": 1, "im": 0}, {"angle": 0.5}, {"angle": 0}]]}
//! {"vertices": 2, "edges": [{"tail": 0, "head": 1, "weight": {"angle": 0.25}}]}
//! ```
//!
//! Weights are either Cartesian `{re, im}` or `{angle}` in turns. Unknown
//! fields are rejected.

use std::path::Path;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::bundle_graph::{build_torus, Edge, LineBundleGraph, TorusBundleSpec, UnitWeight};
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum WeightDoc {
    Cartesian { re: f64, im: f64 },
    Angle { angle: f64 },
}

impl WeightDoc {
    pub fn to_weight(self) -> Result<UnitWeight> {
        match self {
            WeightDoc::Cartesian { re, im } => UnitWeight::new(Complex64::new(re, im)),
            WeightDoc::Angle { angle } if angle.is_finite() => Ok(UnitWeight::from_turns(angle)),
            WeightDoc::Angle { angle } => Err(Error::invalid(format!("angle {angle} is not finite"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TorusDoc {
    pub dimension: usize,
    pub sides: Vec<usize>,
    pub weights: Vec<Vec<WeightDoc>>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EdgeDoc {
    pub tail: usize,
    pub head: usize,
    pub weight: WeightDoc,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GraphDoc {
    pub vertices: usize,
    pub edges: Vec<EdgeDoc>,
}

/// A parsed and validated document.
#[derive(Debug, Clone, PartialEq)]
pub enum SpecDocument {
    Torus(TorusBundleSpec),
    Graph(LineBundleGraph),
}

impl SpecDocument {
    pub fn graph(&self) -> LineBundleGraph {
        match self {
            SpecDocument::Torus(t) => build_torus(t),
            SpecDocument::Graph(g) => g.clone(),
        }
    }
}

/// Reject anything the typed structs would silently accept, such as extra
/// keys inside a weight object.
fn check_weight_value(v: &Value) -> Result<()> {
    let obj = v.as_object().ok_or_else(|| Error::invalid("weight must be an object"))?;
    let mut keys: Vec<&str> = obj.keys().map(String::as_str).collect();
    keys.sort_unstable();
    if keys == ["im", "re"] || keys == ["angle"] {
        Ok(())
    } else {
        Err(Error::invalid(format!(
            "weight must have exactly {{re, im}} or {{angle}}, got {{{}}}",
            keys.join(", ")
        )))
    }
}

fn torus_from_doc(doc: TorusDoc) -> Result<TorusBundleSpec> {
    if doc.dimension != doc.sides.len() {
        return Err(Error::invalid(format!(
            "dimension is {} but {} sides are given",
            doc.dimension,
            doc.sides.len()
        )));
    }
    let weights = doc
        .weights
        .into_iter()
        .map(|row| row.into_iter().map(WeightDoc::to_weight).collect::<Result<Vec<_>>>())
        .collect::<Result<Vec<_>>>()?;
    TorusBundleSpec::new(doc.sides, weights)
}

fn graph_from_doc(doc: GraphDoc) -> Result<LineBundleGraph> {
    let edges = doc
        .edges
        .into_iter()
        .map(|e| Ok(Edge { tail: e.tail, head: e.head, weight: e.weight.to_weight()? }))
        .collect::<Result<Vec<_>>>()?;
    LineBundleGraph::new(doc.vertices, edges)
}

pub fn parse_spec(text: &str) -> Result<SpecDocument> {
    let value: Value = serde_json::from_str(text)?;
    let obj = value.as_object().ok_or_else(|| Error::invalid("document must be a JSON object"))?;
    if obj.contains_key("dimension") || obj.contains_key("sides") {
        if let Some(rows) = obj.get("weights").and_then(Value::as_array) {
            for w in rows.iter().filter_map(Value::as_array).flatten() {
                check_weight_value(w)?;
            }
        }
        Ok(SpecDocument::Torus(torus_from_doc(serde_json::from_value(value)?)?))
    } else if obj.contains_key("vertices") || obj.contains_key("edges") {
        if let Some(edges) = obj.get("edges").and_then(Value::as_array) {
            for w in edges.iter().filter_map(|e| e.get("weight")) {
                check_weight_value(w)?;
            }
        }
        Ok(SpecDocument::Graph(graph_from_doc(serde_json::from_value(value)?)?))
    } else {
        Err(Error::invalid(
            "document is neither a torus {dimension, sides, weights} nor a graph {vertices, edges}",
        ))
    }
}

pub fn load_spec(path: impl AsRef<Path>) -> Result<SpecDocument> {
    parse_spec(&std::fs::read_to_string(path)?)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_torus() {
        let doc = parse_spec(
            r#"{"dimension": 1, "sides": [3], "weights": [[{"re": 1, "im": 0}, {"angle": 0.5}, {"angle": 0}]]}"#,
        )
        .unwrap();
        match doc {
            SpecDocument::Torus(t) => assert!((t.holonomies()[0] - 0.5).abs() < 1e-15),
            _ => panic!("expected a torus"),
        }
    }

    #[test]
    fn parses_graph() {
        let doc = parse_spec(
            r#"{"vertices": 2, "edges": [{"tail": 0, "head": 1, "weight": {"angle": 0.25}},
                                         {"tail": 1, "head": 0, "weight": {"re": 1, "im": 0}}]}"#,
        )
        .unwrap();
        assert_eq!(doc.graph().edge_count(), 2);
    }

    #[test]
    fn rejects_unknown_fields() {
        assert!(parse_spec(r#"{"dimension": 1, "sides": [1], "weights": [[{"angle": 0}]], "x": 1}"#).is_err());
        assert!(parse_spec(r#"{"dimension": 1, "sides": [1], "weights": [[{"angle": 0, "re": 1}]]}"#).is_err());
        assert!(parse_spec(r#"{"vertices": 1, "edges": [{"tail": 0, "head": 0, "weight": {"angle": 0}, "w": 2}]}"#).is_err());
        assert!(parse_spec(r#"{"foo": 1}"#).is_err());
    }

    #[test]
    fn rejects_non_unit_and_mismatch() {
        assert!(parse_spec(r#"{"dimension": 1, "sides": [1], "weights": [[{"re": 2, "im": 0}]]}"#).is_err());
        assert!(parse_spec(r#"{"dimension": 2, "sides": [1], "weights": [[{"angle": 0}]]}"#).is_err());
    }
}
