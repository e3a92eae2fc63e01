//! File formats and DOT export.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::fs;
use std::path::{Path as FsPath, PathBuf};
use std::sync::Arc;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::colimit::Diagram;
use crate::cube::FaceWord;
use crate::model::{CellId, ModelError, Phda, RawPhda};
use crate::morphism::{validate_morphism, Morphism};

#[derive(Debug, Error)]
pub enum IoError {
    #[error("cannot read {path}: {source}")]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error("{path}:{line}:{column}: {message}")]
    Parse {
        path: PathBuf,
        line: usize,
        column: usize,
        message: String,
    },
    #[error("{path}: {message}")]
    Validation {
        path: PathBuf,
        message: String,
        violations: Vec<String>,
    },
}

impl IoError {
    fn validation(path: &FsPath, message: impl Into<String>, violations: Vec<String>) -> Self {
        IoError::Validation {
            path: path.to_path_buf(),
            message: message.into(),
            violations,
        }
    }
}

fn read(path: &FsPath) -> Result<String, IoError> {
    fs::read_to_string(path).map_err(|source| IoError::Io {
        path: path.to_path_buf(),
        source,
    })
}

fn parse<T: for<'de> Deserialize<'de>>(path: &FsPath, text: &str) -> Result<T, IoError> {
    serde_json::from_str(text).map_err(|e| IoError::Parse {
        path: path.to_path_buf(),
        line: e.line(),
        column: e.column(),
        message: e.to_string(),
    })
}

/// Saturates when requested and validates.
pub fn build_model(path: &FsPath, raw: RawPhda) -> Result<Arc<Phda>, IoError> {
    match Phda::new(raw) {
        Ok(x) => Ok(Arc::new(x)),
        Err(ModelError::Invalid(v)) => Err(IoError::validation(
            path,
            format!("{} violation(s)", v.len()),
            v.iter().map(|v| format!("{:?}: {v}", v.kind())).collect(),
        )),
        Err(e) => Err(IoError::validation(path, e.to_string(), vec![])),
    }
}

pub fn parse_model(path: &FsPath, text: &str) -> Result<Arc<Phda>, IoError> {
    build_model(path, parse(path, text)?)
}

pub fn load_model(path: impl AsRef<FsPath>) -> Result<Arc<Phda>, IoError> {
    let path = path.as_ref();
    parse_model(path, &read(path)?)
}

/// A model given by a path relative to the referring file, or inline.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(untagged)]
pub enum ModelRef {
    File(String),
    Inline(RawPhda),
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct MorphismFile {
    pub source: ModelRef,
    pub target: ModelRef,
    pub map: BTreeMap<CellId, CellId>,
}

fn resolve(base: &FsPath, r: &ModelRef) -> Result<Arc<Phda>, IoError> {
    match r {
        ModelRef::File(p) => {
            let dir = base.parent().unwrap_or_else(|| FsPath::new("."));
            load_model(dir.join(p))
        }
        ModelRef::Inline(raw) => build_model(base, raw.clone()),
    }
}

pub fn load_morphism(path: impl AsRef<FsPath>) -> Result<Morphism, IoError> {
    let path = path.as_ref();
    let file: MorphismFile = parse(path, &read(path)?)?;
    let source = resolve(path, &file.source)?;
    let target = resolve(path, &file.target)?;
    let f = Morphism {
        source,
        target,
        map: file.map,
    };
    let violations = validate_morphism(&f);
    if violations.is_empty() {
        Ok(f)
    } else {
        Err(IoError::validation(
            path,
            format!("{} violation(s)", violations.len()),
            violations.iter().map(|v| format!("{:?}: {v}", v.kind())).collect(),
        ))
    }
}

pub fn load_diagram(path: impl AsRef<FsPath>) -> Result<Diagram, IoError> {
    let path = path.as_ref();
    let d: Diagram = parse(path, &read(path)?)?;
    d.validate()
        .map_err(|e| IoError::validation(path, e.to_string(), vec![]))?;
    Ok(d)
}

pub fn model_to_json(x: &Phda) -> String {
    serde_json::to_string_pretty(&x.to_raw()).expect("serializable model")
}

/// A morphism with both models inline.
pub fn morphism_to_json(f: &Morphism) -> String {
    let file = MorphismFile {
        source: ModelRef::Inline(f.source.to_raw()),
        target: ModelRef::Inline(f.target.to_raw()),
        map: f.map.clone(),
    };
    serde_json::to_string_pretty(&file).expect("serializable morphism")
}

fn quote(s: &str) -> String {
    format!("\"{}\"", s.replace('\\', "\\\\").replace('"', "\\\""))
}

/// Graphviz text: points as nodes, edges as labelled arrows from their past
/// to their future end, higher cells as comments listing their faces.
pub fn export_dot(x: &Phda) -> String {
    let mut out = String::new();
    out.push_str("digraph phda {\n  rankdir=LR;\n");
    for c in x.cells_of_dim(0) {
        let shape = if c.id == *x.initial() { "doublecircle" } else { "circle" };
        let _ = writeln!(out, "  {} [shape={shape}];", quote(c.id.as_str()));
    }
    for e in x.cells_of_dim(1) {
        let end = |bit: u8| {
            let w = FaceWord::from_pairs(&[(1, bit)]).expect("single face");
            match x.face_of(&e.id, &w) {
                Some(v) => (quote(v.as_str()), None),
                None => {
                    let marker = format!("{}~{bit}", e.id);
                    (quote(&marker), Some(marker))
                }
            }
        };
        let (from, from_marker) = end(0);
        let (to, to_marker) = end(1);
        for m in [from_marker, to_marker].into_iter().flatten() {
            let _ = writeln!(
                out,
                "  {} [shape=circle, style=dashed, label=\"\", class=\"dangling\"];",
                quote(&m)
            );
        }
        let _ = writeln!(
            out,
            "  {from} -> {to} [label={}, id={}];",
            quote(&e.label.to_string()),
            quote(e.id.as_str())
        );
    }
    let higher: Vec<_> = x.cells().filter(|c| c.dim >= 2).collect();
    if !higher.is_empty() {
        out.push_str("  // higher cells\n");
        for c in higher {
            let faces: Vec<String> = x
                .faces_of(&c.id)
                .filter(|(w, _)| w.len() == 1)
                .map(|(w, t)| format!("{}={t}", w.faces()[0]))
                .collect();
            let _ = writeln!(out, "  // {} [{}]: {}", c.id, c.label, faces.join(" "));
        }
    }
    out.push_str("}\n");
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    fn counts(dot: &str) -> (usize, usize, usize, usize) {
        let nodes = dot.lines().filter(|l| l.contains("[shape=") && !l.contains("dangling")).count();
        let dangling = dot.lines().filter(|l| l.contains("dangling")).count();
        let edges = dot.lines().filter(|l| l.contains(" -> ")).count();
        let higher = dot.lines().filter(|l| l.trim_start().starts_with("// ") && l.contains('[')).count();
        (nodes, edges, dangling, higher)
    }

    #[test]
    fn dot_examples() {
        assert_eq!(counts(&export_dot(&fixtures::star())), (1, 0, 0, 0));
        assert_eq!(counts(&export_dot(&fixtures::square_full())), (4, 4, 0, 1));
        assert_eq!(counts(&export_dot(&fixtures::split_segment())), (2, 1, 2, 0));
        let sq = fixtures::square_full();
        assert_eq!(export_dot(&sq), export_dot(&sq));
        assert!(export_dot(&sq).contains("\"v00\" [shape=doublecircle]"));
    }

    #[test]
    fn model_round_trip() {
        for (name, x) in fixtures::all() {
            let text = model_to_json(&x);
            let back = parse_model(FsPath::new(name), &text).unwrap();
            assert_eq!(*back, x, "{name}");
        }
    }

    #[test]
    fn parse_errors_carry_position() {
        let err = parse_model(FsPath::new("bad.json"), "{\n  \"alphabet\": [\"a\"],\n  oops\n}").unwrap_err();
        match err {
            IoError::Parse { line, .. } => assert_eq!(line, 3),
            other => panic!("unexpected {other}"),
        }
    }
}
