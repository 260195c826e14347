use std::path::PathBuf;

use bundle_lab::*;

fn data(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("data").join(name)
}

#[test]
fn bundled_documents_load() {
    match load_spec(data("torus22.json")).unwrap() {
        SpecDocument::Torus(t) => {
            assert_eq!(t.sides(), &[2, 2]);
            assert!((t.holonomies()[0] - 0.4).abs() < 1e-12);
        }
        other => panic!("expected a torus, got {other:?}"),
    }
    match load_spec(data("cycle5.json")).unwrap() {
        SpecDocument::Graph(g) => assert_eq!((g.vertex_count(), g.edge_count()), (5, 5)),
        other => panic!("expected a graph, got {other:?}"),
    }
}

#[test]
fn weight_forms_are_equivalent() {
    let a = parse_spec(r#"{"vertices": 2, "edges": [{"tail": 0, "head": 1, "weight": {"angle": 0.25}}]}"#).unwrap();
    let b = parse_spec(r#"{"vertices": 2, "edges": [{"tail": 0, "head": 1, "weight": {"re": 0, "im": 1}}]}"#).unwrap();
    let (wa, wb) = (a.graph().edges()[0].weight.value(), b.graph().edges()[0].weight.value());
    assert!((wa - wb).norm() < 1e-15);
}

#[test]
fn malformed_documents_are_rejected() {
    let bad = [
        r#"[1, 2]"#,
        r#"{"foo": 1}"#,
        r#"{"dimension": 2, "sides": [3], "weights": [[{"angle": 0}, {"angle": 0}, {"angle": 0}]]}"#,
        r#"{"dimension": 1, "sides": [2], "weights": [[{"angle": 0}]]}"#,
        r#"{"dimension": 1, "sides": [1], "weights": [[{"re": 2, "im": 0}]]}"#,
        r#"{"dimension": 1, "sides": [1], "weights": [[{"angle": 0, "re": 1}]]}"#,
        r#"{"dimension": 1, "sides": [1], "weights": [[{"angle": 0}]], "extra": true}"#,
        r#"{"vertices": 2, "edges": [{"tail": 0, "head": 2, "weight": {"angle": 0}}]}"#,
        r#"{"vertices": 2, "edges": [{"tail": 0, "head": 1, "weight": {"angle": 0}, "w": 1}]}"#,
        r#"{"vertices": 2, "edges": "#,
    ];
    for text in bad {
        let err = parse_spec(text).unwrap_err();
        assert_eq!(err.exit_code(), 2, "{text}: {err}");
    }
}

#[test]
fn missing_file_is_an_io_error() {
    let err = load_spec(data("no-such-file.json")).unwrap_err();
    assert!(matches!(err, Error::Io(_)));
    assert_eq!(err.exit_code(), 1);
}
