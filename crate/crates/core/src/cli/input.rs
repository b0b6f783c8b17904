//! The versioned JSON document format for reduction graphs.
//!
//! ```json
//! {"format": "reduction-graph/1", "name": "II",
//!  "vertices": [{"id": "c", "multiplicity": 6, "genus": 0}, ...],
//!  "edges": [["c", "a1"], ...]}
//! ```
//!
//! Parallel edges are repeated pairs. Syntax errors, a wrong format tag and
//! duplicate vertex ids are parse errors; everything else is left to graph
//! validation.

use std::collections::HashSet;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::graph::{validate, RawGraph, RawVertex, ReductionGraph, ValidationReport};

pub const FORMAT_TAG: &str = "reduction-graph/1";

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GraphDocument {
    pub format: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
    pub vertices: Vec<RawVertex>,
    pub edges: Vec<[String; 2]>,
}

impl GraphDocument {
    pub fn from_graph(g: &ReductionGraph) -> Self {
        let raw = g.to_raw();
        GraphDocument {
            format: FORMAT_TAG.to_string(),
            name: raw.name,
            vertices: raw.vertices,
            edges: raw.edges.into_iter().map(|(a, b)| [a, b]).collect(),
        }
    }

    pub fn to_raw(&self) -> RawGraph {
        RawGraph {
            name: self.name.clone(),
            vertices: self.vertices.clone(),
            edges: self
                .edges
                .iter()
                .map(|[a, b]| (a.clone(), b.clone()))
                .collect(),
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("documents serialize")
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum InputError {
    #[error("parse error at line {line}, column {column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },
    #[error("invalid reduction graph:\n{0}")]
    Validation(ValidationReport),
}

impl InputError {
    fn parse_at(line: usize, message: impl Into<String>) -> Self {
        InputError::Parse {
            line,
            column: 0,
            message: message.into(),
        }
    }
}

/// Line (1-based) of the `occurrence`-th line mentioning both `"id"` and the
/// quoted value, or 0 when it cannot be located.
fn locate_id(text: &str, id: &str, occurrence: usize) -> usize {
    let quoted = serde_json::to_string(id).expect("strings serialize");
    text.lines()
        .enumerate()
        .filter(|(_, l)| l.contains("\"id\"") && l.contains(&quoted))
        .nth(occurrence)
        .map_or(0, |(k, _)| k + 1)
}

pub fn parse_document(bytes: &[u8]) -> Result<GraphDocument, InputError> {
    let text = std::str::from_utf8(bytes).map_err(|e| {
        let line = bytes[..e.valid_up_to()].iter().filter(|&&b| b == b'\n').count() + 1;
        InputError::parse_at(line, "input is not valid UTF-8")
    })?;
    let doc: GraphDocument = serde_json::from_str(text).map_err(|e| InputError::Parse {
        line: e.line(),
        column: e.column(),
        message: e.to_string(),
    })?;
    if doc.format != FORMAT_TAG {
        return Err(InputError::parse_at(
            locate_format(text),
            format!("unsupported format `{}`, expected `{FORMAT_TAG}`", doc.format),
        ));
    }
    let mut seen = HashSet::new();
    for v in &doc.vertices {
        if !seen.insert(v.id.as_str()) {
            return Err(InputError::parse_at(
                locate_id(text, &v.id, 1),
                format!("duplicate vertex id `{}`", v.id),
            ));
        }
    }
    Ok(doc)
}

fn locate_format(text: &str) -> usize {
    text.lines()
        .position(|l| l.contains("\"format\""))
        .map_or(0, |k| k + 1)
}

/// Parses and validates a document.
pub fn parse_input(bytes: &[u8]) -> Result<ReductionGraph, InputError> {
    let doc = parse_document(bytes)?;
    let raw = doc.to_raw();
    let report = validate(&raw);
    if !report.is_pass() {
        return Err(InputError::Validation(report));
    }
    Ok(ReductionGraph::from_raw(&raw).expect("validated"))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog::{kodaira_graph, KodairaType};
    use crate::graph::Invariant;

    #[test]
    fn round_trip_kodaira_ii() {
        let g = kodaira_graph(KodairaType::II).unwrap();
        let text = GraphDocument::from_graph(&g).to_json();
        let back = parse_input(text.as_bytes()).unwrap();
        assert_eq!(back, g);
        assert_eq!(back.vertex_count(), 4);
    }

    #[test]
    fn duplicate_id_is_a_parse_error() {
        let text = r#"{"format": "reduction-graph/1",
  "vertices": [
    {"id": "a", "multiplicity": 1, "genus": 1},
    {"id": "a", "multiplicity": 1, "genus": 0}
  ],
  "edges": []}"#;
        match parse_input(text.as_bytes()) {
            Err(InputError::Parse { line, message, .. }) => {
                assert_eq!(line, 4);
                assert!(message.contains("duplicate"));
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn loop_is_a_validation_error() {
        let text = r#"{"format": "reduction-graph/1",
  "vertices": [{"id": "a", "multiplicity": 1, "genus": 1}],
  "edges": [["a", "a"]]}"#;
        match parse_input(text.as_bytes()) {
            Err(InputError::Validation(r)) => {
                assert!(r.violates(Invariant::NoLoops));
                assert!(r.to_string().contains("loops forbidden"));
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn syntax_and_format_errors() {
        assert!(matches!(
            parse_input(b"{\"format\": \n  \"reduction-graph/1\",, }"),
            Err(InputError::Parse { line: 2, .. })
        ));
        let text = r#"{"format": "reduction-graph/2", "vertices": [], "edges": []}"#;
        assert!(matches!(parse_input(text.as_bytes()), Err(InputError::Parse { .. })));
        assert!(matches!(parse_input(&[0xff, 0xfe]), Err(InputError::Parse { .. })));
    }
}
