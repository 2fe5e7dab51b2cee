//! JSON document formats.
//!
//! Graphs, edge cochains and Laurent data travel as small JSON documents;
//! every map is emitted in a fixed order so identical inputs serialize to
//! identical bytes. Malformed documents surface as `Syntax` errors and are
//! kept apart from domain failures, which only arise once a well-formed
//! document is handed to an operation.

use crate::graph::{Cochain, DualGraph, VertexFunction};
use crate::laurent::{LaurentPolynomial, LemmaCheck, NewtonPolygon};
use crate::padic::PadicContext;
use num_rational::BigRational;
use serde::{Deserialize, Serialize};
use serde_json::{Map, Value};
use std::collections::HashMap;
use std::path::Path;
use std::str::FromStr;
use std::sync::Arc;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum DocumentError {
    #[error("{0}")]
    Syntax(String),
    #[error("cannot read {path}: {source}")]
    Io {
        path: String,
        source: std::io::Error,
    },
}

fn syntax(msg: impl Into<String>) -> DocumentError {
    DocumentError::Syntax(msg.into())
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct GraphDoc {
    pub vertices: Vec<String>,
    pub edges: Vec<EdgeDoc>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct EdgeDoc {
    pub id: String,
    pub tail: String,
    pub head: String,
}

pub fn graph_to_doc(graph: &DualGraph) -> GraphDoc {
    GraphDoc {
        vertices: graph.vertex_names().to_vec(),
        edges: graph
            .edges()
            .iter()
            .map(|e| EdgeDoc {
                id: e.id.clone(),
                tail: graph.vertex_name(e.tail).to_string(),
                head: graph.vertex_name(e.head).to_string(),
            })
            .collect(),
    }
}

pub fn graph_from_doc(doc: GraphDoc) -> Result<DualGraph, DocumentError> {
    let edges = doc
        .edges
        .into_iter()
        .map(|e| (e.id, e.tail, e.head))
        .collect();
    DualGraph::new(doc.vertices, edges).map_err(|e| syntax(format!("bad graph document: {e}")))
}

pub fn parse_graph(text: &str) -> Result<DualGraph, DocumentError> {
    let doc: GraphDoc =
        serde_json::from_str(text).map_err(|e| syntax(format!("bad graph document: {e}")))?;
    graph_from_doc(doc)
}

pub fn graph_to_value(graph: &DualGraph) -> Value {
    serde_json::to_value(graph_to_doc(graph)).expect("graph documents serialize")
}

pub fn read_document(path: &Path) -> Result<String, DocumentError> {
    std::fs::read_to_string(path).map_err(|source| DocumentError::Io {
        path: path.display().to_string(),
        source,
    })
}

/// A cochain document holds a graph (inline, or a path to a graph document
/// resolved against `base_dir`) and one literal per edge id.
pub fn parse_cochain(
    text: &str,
    ctx: &PadicContext,
    base_dir: Option<&Path>,
) -> Result<Cochain, DocumentError> {
    let value: Value =
        serde_json::from_str(text).map_err(|e| syntax(format!("bad cochain document: {e}")))?;
    let top = value
        .as_object()
        .ok_or_else(|| syntax("cochain document must be a JSON object"))?;
    let graph = match top.get("graph") {
        Some(Value::String(path)) => {
            let mut full = path.clone().into();
            if let Some(dir) = base_dir {
                full = dir.join(path);
            }
            parse_graph(&read_document(&full)?)?
        }
        Some(inline @ Value::Object(_)) => {
            let doc: GraphDoc = serde_json::from_value(inline.clone())
                .map_err(|e| syntax(format!("bad graph document: {e}")))?;
            graph_from_doc(doc)?
        }
        Some(_) => return Err(syntax("graph must be an object or a path string")),
        None => return Err(syntax("cochain document is missing \"graph\"")),
    };
    let values = top
        .get("values")
        .and_then(Value::as_object)
        .ok_or_else(|| syntax("cochain document needs a \"values\" object"))?;
    let mut parsed = HashMap::with_capacity(values.len());
    for (id, literal) in values {
        let text = literal_text(literal)
            .ok_or_else(|| syntax(format!("value for edge {id} must be a literal string")))?;
        let number = ctx
            .parse(&text)
            .map_err(|e| syntax(format!("value for edge {id}: {e}")))?;
        parsed.insert(id.clone(), number);
    }
    Cochain::from_map(Arc::new(graph), parsed)
        .map_err(|e| syntax(format!("cochain does not match its graph: {e}")))
}

fn literal_text(v: &Value) -> Option<String> {
    match v {
        Value::String(s) => Some(s.clone()),
        Value::Number(n) => Some(n.to_string()),
        _ => None,
    }
}

pub fn cochain_to_value(cochain: &Cochain) -> Value {
    let mut top = Map::new();
    top.insert("graph".into(), graph_to_value(cochain.graph()));
    top.insert("values".into(), edge_value_map(cochain));
    Value::Object(top)
}

/// Edge id -> rendered literal, in stored edge order.
pub fn edge_value_map(cochain: &Cochain) -> Value {
    let mut map = Map::new();
    for (edge, value) in cochain.graph().edges().iter().zip(cochain.stored_values()) {
        map.insert(edge.id.clone(), Value::String(value.to_string()));
    }
    Value::Object(map)
}

/// Vertex name -> rendered literal, in vertex order.
pub fn vertex_value_map(f: &VertexFunction) -> Value {
    let mut map = Map::new();
    for (name, value) in f.graph().vertex_names().iter().zip(f.values()) {
        map.insert(name.clone(), Value::String(value.to_string()));
    }
    Value::Object(map)
}

pub fn decomposition_to_value(harmonic: &Cochain, gamma: &VertexFunction) -> Value {
    let mut top = Map::new();
    top.insert("harmonic".into(), edge_value_map(harmonic));
    top.insert("gamma".into(), vertex_value_map(gamma));
    Value::Object(top)
}

pub fn normalization_to_value(offsets: &VertexFunction, harmonic: &Cochain) -> Value {
    let mut top = Map::new();
    top.insert("offsets".into(), vertex_value_map(offsets));
    top.insert("harmonic".into(), edge_value_map(harmonic));
    Value::Object(top)
}

pub fn subdivision_to_value(
    original: &DualGraph,
    subdivided: &DualGraph,
    edge_map: &[Vec<usize>],
) -> Value {
    let mut map = Map::new();
    for (edge, path) in original.edges().iter().zip(edge_map) {
        let ids = path
            .iter()
            .map(|&i| Value::String(subdivided.edges()[i].id.clone()))
            .collect();
        map.insert(edge.id.clone(), Value::Array(ids));
    }
    let mut top = Map::new();
    top.insert("graph".into(), graph_to_value(subdivided));
    top.insert("edge_map".into(), Value::Object(map));
    Value::Object(top)
}

/// A Laurent document: `{"p": 5, "coeffs": {"-1": "5", "0": "1/3"}}`. The
/// coefficients must be exact rationals; a literal carrying an O(p^N) tail
/// is rejected, since a truncated coefficient pins down neither the Newton
/// polygon nor the residue.
pub fn parse_laurent(text: &str) -> Result<LaurentPolynomial, DocumentError> {
    let value: Value =
        serde_json::from_str(text).map_err(|e| syntax(format!("bad Laurent document: {e}")))?;
    let top = value
        .as_object()
        .ok_or_else(|| syntax("Laurent document must be a JSON object"))?;
    let p = top
        .get("p")
        .and_then(Value::as_u64)
        .ok_or_else(|| syntax("Laurent document needs an integer field \"p\""))?;
    PadicContext::new(p, 1).map_err(|e| syntax(format!("bad prime in Laurent document: {e}")))?;
    let coeffs = top
        .get("coeffs")
        .and_then(Value::as_object)
        .ok_or_else(|| syntax("Laurent document needs a \"coeffs\" object"))?;
    let mut parsed = Vec::with_capacity(coeffs.len());
    for (exp, literal) in coeffs {
        let i: i64 = exp
            .trim()
            .parse()
            .map_err(|_| syntax(format!("exponent {exp} is not an integer")))?;
        let text = literal_text(literal)
            .ok_or_else(|| syntax(format!("coefficient for exponent {exp} must be a literal")))?;
        let text = text.trim();
        if text.contains('O') {
            return Err(syntax(format!(
                "coefficient {text} for exponent {exp} is approximate: \
                 exact rational coefficients are required here"
            )));
        }
        let a = BigRational::from_str(text).map_err(|_| {
            syntax(format!(
                "coefficient {text} for exponent {exp} is not a rational literal"
            ))
        })?;
        parsed.push((i, a));
    }
    Ok(LaurentPolynomial::new(p, parsed))
}

pub fn laurent_to_value(f: &LaurentPolynomial) -> Value {
    let mut coeffs = Map::new();
    for (i, a) in f.coeffs() {
        coeffs.insert(i.to_string(), Value::String(a.to_string()));
    }
    let mut top = Map::new();
    top.insert("p".into(), Value::from(f.prime()));
    top.insert("coeffs".into(), Value::Object(coeffs));
    Value::Object(top)
}

pub fn polygon_to_value(polygon: &NewtonPolygon) -> Value {
    let vertices = polygon
        .vertices
        .iter()
        .map(|&(i, v)| Value::Array(vec![Value::from(i), Value::from(v)]))
        .collect();
    let segments = polygon
        .segments
        .iter()
        .map(|s| {
            let mut m = Map::new();
            m.insert("slope".into(), Value::String(s.slope.to_string()));
            m.insert("length".into(), Value::from(s.length));
            Value::Object(m)
        })
        .collect();
    let mut top = Map::new();
    top.insert("vertices".into(), Value::Array(vertices));
    top.insert("segments".into(), Value::Array(segments));
    Value::Object(top)
}

pub fn lemma_to_value(check: &LemmaCheck) -> Value {
    let mut top = Map::new();
    top.insert("residue".into(), Value::from(check.residue));
    top.insert("boundary".into(), Value::from(check.boundary));
    top.insert("equal".into(), Value::from(check.equal));
    Value::Object(top)
}
