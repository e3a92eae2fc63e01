//! Paths, spines and path shapes.
//!
//! A path is a sequence of cells linked by single steps: a start `(j,0)`
//! goes up one dimension (`x_{k-1}` is the `(j;0)` face of `x_k`) and a
//! finish `(j,1)` goes down (`x_k` is the `(j;1)` face of `x_{k-1}`).
//! Paths carry no reference to their host; functions that need the host
//! take it explicitly.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::cube::{Direction, Face, FaceWord, LabelWord};
use crate::model::{CellId, ModelError, Phda, RawPhda};
use crate::morphism::Morphism;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PathError {
    #[error("a path must start at the initial state {expected}, found {found}")]
    BadStart { expected: CellId, found: String },
    #[error("step {0} is not a face relation of the host")]
    BadStep(usize),
    #[error("a path with {steps} steps needs {} cells, found {cells}", .steps + 1)]
    Malformed { cells: usize, steps: usize },
    #[error("invalid spine at step {step}: {detail}")]
    InvalidSpine { step: usize, detail: String },
    #[error("not a path shape: {0}")]
    NotAPathShape(String),
    #[error("the path does not live in the given host")]
    DifferentHosts,
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Path {
    pub cells: Vec<CellId>,
    pub steps: Vec<Face>,
}

impl Path {
    /// The empty path at the initial state of `host`.
    pub fn empty(host: &Phda) -> Self {
        Path {
            cells: vec![host.initial().clone()],
            steps: Vec::new(),
        }
    }

    /// Builds a path from its first cell and `(step, cell)` pairs.
    pub fn from_parts(start: &str, rest: &[((usize, u8), &str)]) -> Self {
        let mut p = Path {
            cells: vec![CellId::new(start)],
            steps: Vec::new(),
        };
        for &((index, bit), cell) in rest {
            let dir = Direction::from_bit(bit).expect("direction bit");
            p.steps.push(Face::new(index, dir));
            p.cells.push(CellId::new(cell));
        }
        p
    }

    pub fn len(&self) -> usize {
        self.steps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.steps.is_empty()
    }

    pub fn end(&self) -> &CellId {
        self.cells.last().expect("a path has at least one cell")
    }

    pub fn extended(&self, step: Face, cell: CellId) -> Path {
        let mut p = self.clone();
        p.steps.push(step);
        p.cells.push(cell);
        p
    }

    /// The prefix with `len` steps.
    pub fn prefix(&self, len: usize) -> Path {
        Path {
            cells: self.cells[..=len].to_vec(),
            steps: self.steps[..len].to_vec(),
        }
    }
}

impl fmt::Display for Path {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.cells[0])?;
        for (step, cell) in self.steps.iter().zip(&self.cells[1..]) {
            write!(f, " -{step}-> {cell}")?;
        }
        Ok(())
    }
}

/// Whether `x_prev -(step)-> x_next` is a step of `host`.
pub fn is_step(host: &Phda, prev: &CellId, step: Face, next: &CellId) -> bool {
    let word = FaceWord::single(step);
    match step.dir {
        Direction::Past => host.face_of(next, &word) == Some(prev),
        Direction::Future => host.face_of(prev, &word) == Some(next),
    }
}

/// Checks that `p` is a path of `host`, reporting the first violation.
pub fn validate_path(host: &Phda, p: &Path) -> Result<(), PathError> {
    if p.cells.len() != p.steps.len() + 1 {
        return Err(PathError::Malformed {
            cells: p.cells.len(),
            steps: p.steps.len(),
        });
    }
    if &p.cells[0] != host.initial() {
        return Err(PathError::BadStart {
            expected: host.initial().clone(),
            found: p.cells[0].to_string(),
        });
    }
    for (k, step) in p.steps.iter().enumerate() {
        let (prev, next) = (&p.cells[k], &p.cells[k + 1]);
        if !host.contains(prev) || !host.contains(next) || !is_step(host, prev, *step, next) {
            return Err(PathError::BadStep(k + 1));
        }
    }
    Ok(())
}

/// The label-level shadow of a path: `(dimension, label)` per cell.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Spine {
    pub entries: Vec<(usize, LabelWord)>,
    pub steps: Vec<Face>,
}

impl Spine {
    pub fn trivial() -> Self {
        Spine {
            entries: vec![(0, LabelWord::empty())],
            steps: Vec::new(),
        }
    }

    /// Builds a spine from labels and steps; dimensions are label lengths.
    pub fn from_parts(labels: &[&str], steps: &[(usize, u8)]) -> Self {
        Spine {
            entries: labels
                .iter()
                .map(|l| (l.chars().count(), LabelWord::from(*l)))
                .collect(),
            steps: steps
                .iter()
                .map(|&(i, a)| Face::new(i, Direction::from_bit(a).expect("direction bit")))
                .collect(),
        }
    }

    pub fn len(&self) -> usize {
        self.steps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.steps.is_empty()
    }

    pub fn prefix(&self, len: usize) -> Spine {
        Spine {
            entries: self.entries[..=len].to_vec(),
            steps: self.steps[..len].to_vec(),
        }
    }

    pub fn is_prefix_of(&self, other: &Spine) -> bool {
        self.len() <= other.len() && other.prefix(self.len()) == *self
    }

    pub fn validate(&self) -> Result<(), PathError> {
        let bad = |step: usize, detail: String| Err(PathError::InvalidSpine { step, detail });
        if self.entries.len() != self.steps.len() + 1 {
            return bad(0, format!("{} entries for {} steps", self.entries.len(), self.steps.len()));
        }
        if self.entries[0] != (0, LabelWord::empty()) {
            return bad(0, "the first entry must be (0,ε)".into());
        }
        for (d, w) in &self.entries {
            if *d != w.len() {
                return bad(0, format!("label {w} does not have length {d}"));
            }
        }
        for (k, step) in self.steps.iter().enumerate() {
            let (lo, hi) = match step.dir {
                Direction::Past => (&self.entries[k], &self.entries[k + 1]),
                Direction::Future => (&self.entries[k + 1], &self.entries[k]),
            };
            if hi.0 != lo.0 + 1 || step.index > hi.0 {
                return bad(k + 1, format!("dimensions {} and {} do not fit {step}", lo.0, hi.0));
            }
            if hi.1.delete(step.index).ok().as_ref() != Some(&lo.1) {
                return bad(k + 1, format!("deleting letter {} of {} does not give {}", step.index, hi.1, lo.1));
            }
        }
        Ok(())
    }
}

impl fmt::Display for Spine {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let (d, w) = &self.entries[0];
        write!(f, "({d},{w})")?;
        for (step, (d, w)) in self.steps.iter().zip(&self.entries[1..]) {
            write!(f, " -{step}-> ({d},{w})")?;
        }
        Ok(())
    }
}

pub fn spine_of(host: &Phda, p: &Path) -> Spine {
    Spine {
        entries: p
            .cells
            .iter()
            .map(|c| (host.dim(c), host.label(c).clone()))
            .collect(),
        steps: p.steps.clone(),
    }
}

/// The path shape of a spine: cells `"0"`..`"n"`, the step faces as
/// generators, closed under the lax law.
pub fn path_shape(spine: &Spine, alphabet: &BTreeSet<char>) -> Result<Phda, PathError> {
    spine.validate()?;
    let mut raw = RawPhda {
        alphabet: alphabet.iter().copied().collect(),
        cells: Vec::new(),
        initial: CellId::new("0"),
        faces: Vec::new(),
        saturate: true,
    };
    for (k, (d, w)) in spine.entries.iter().enumerate() {
        raw.cells.push(crate::model::Cell {
            id: CellId::new(k.to_string()),
            dim: *d,
            label: w.clone(),
        });
    }
    for (k, step) in spine.steps.iter().enumerate() {
        let (from, to) = match step.dir {
            Direction::Past => (k + 1, k),
            Direction::Future => (k, k + 1),
        };
        raw.faces.push(crate::model::FaceEntry {
            from: CellId::new(from.to_string()),
            word: FaceWord::single(*step),
            to: CellId::new(to.to_string()),
        });
    }
    Phda::new(raw).map_err(|e| match e {
        ModelError::Invalid(v) => PathError::InvalidSpine {
            step: 0,
            detail: v.iter().map(|v| v.to_string()).collect::<Vec<_>>().join("; "),
        },
        other => PathError::InvalidSpine {
            step: 0,
            detail: other.to_string(),
        },
    })
}

/// The morphism from the path shape of `p` into `host`, sending `k` to `x_k`.
pub fn path_to_morphism(host: &Arc<Phda>, p: &Path) -> Result<Morphism, PathError> {
    validate_path(host, p)?;
    let shape = Arc::new(path_shape(&spine_of(host, p), host.alphabet())?);
    let map = p
        .cells
        .iter()
        .enumerate()
        .map(|(k, c)| (CellId::new(k.to_string()), c.clone()))
        .collect();
    Morphism::new(shape, host.clone(), map).map_err(|e| PathError::NotAPathShape(e.to_string()))
}

/// Recovers the spine of a path shape whose cells are named `"0"`..`"n"`.
pub fn spine_of_shape(shape: &Phda) -> Result<Spine, PathError> {
    let n = shape.len();
    let id = |k: usize| CellId::new(k.to_string());
    if n == 0 || (0..n).any(|k| !shape.contains(&id(k))) || shape.initial() != &id(0) {
        return Err(PathError::NotAPathShape("cells must be named 0..n with initial 0".into()));
    }
    let mut steps = Vec::with_capacity(n - 1);
    for k in 1..n {
        let (prev, next) = (id(k - 1), id(k));
        let step = shape
            .faces_of(&next)
            .chain(shape.faces_of(&prev))
            .filter_map(|(w, to)| match w.faces() {
                [f] if f.dir == Direction::Past && to == &prev => Some(*f),
                [f] if f.dir == Direction::Future && to == &next => Some(*f),
                _ => None,
            })
            .next()
            .ok_or_else(|| PathError::NotAPathShape(format!("no step between {prev} and {next}")))?;
        steps.push(step);
    }
    let spine = Spine {
        entries: (0..n)
            .map(|k| (shape.dim(&id(k)), shape.label(&id(k)).clone()))
            .collect(),
        steps,
    };
    let rebuilt = path_shape(&spine, shape.alphabet())
        .map_err(|e| PathError::NotAPathShape(e.to_string()))?;
    if &rebuilt != shape {
        return Err(PathError::NotAPathShape("faces differ from the generated shape".into()));
    }
    Ok(spine)
}

/// The path classified by a morphism out of a path shape.
pub fn morphism_to_path(f: &Morphism) -> Result<Path, PathError> {
    let spine = spine_of_shape(&f.source)?;
    Ok(Path {
        cells: (0..=spine.len())
            .map(|k| f.apply(&CellId::new(k.to_string())).clone())
            .collect(),
        steps: spine.steps,
    })
}

/// The image of a path under a morphism.
pub fn map_path(f: &Morphism, p: &Path) -> Result<Path, PathError> {
    let cells = p
        .cells
        .iter()
        .map(|c| f.map.get(c).cloned().ok_or(PathError::DifferentHosts))
        .collect::<Result<_, _>>()?;
    Ok(Path {
        cells,
        steps: p.steps.clone(),
    })
}

/// Every path of length at most `max_len`, by length and then in order.
pub fn enumerate_paths(host: &Phda, max_len: usize) -> Vec<Path> {
    let mut out = vec![Path::empty(host)];
    let mut frontier = out.clone();
    let mut steps: BTreeMap<CellId, Vec<(Face, CellId)>> = BTreeMap::new();
    for _ in 0..max_len {
        let mut next = Vec::new();
        for p in &frontier {
            let succ = steps
                .entry(p.end().clone())
                .or_insert_with(|| host.steps_from(p.end()));
            for (step, cell) in succ.iter() {
                next.push(p.extended(*step, cell.clone()));
            }
        }
        if next.is_empty() {
            break;
        }
        next.sort();
        out.extend(next.iter().cloned());
        frontier = next;
    }
    out
}

/// Paths of length at most `max_len` ending at `cell`.
pub fn paths_to(host: &Phda, cell: &CellId, max_len: usize) -> Vec<Path> {
    enumerate_paths(host, max_len)
        .into_iter()
        .filter(|p| p.end() == cell)
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use crate::morphism::validate_morphism;

    fn pi() -> Path {
        fixtures::path_x_pi()
    }

    #[test]
    fn path_x_example() {
        let x = fixtures::path_x();
        assert_eq!(validate_path(&x, &pi()), Ok(()));
        assert_eq!(validate_path(&x, &Path::empty(&x)), Ok(()));
        let mut bad = pi();
        bad.steps[2] = Face::future(2);
        assert_eq!(validate_path(&x, &bad), Err(PathError::BadStep(3)));
        let mut wrong_start = pi();
        wrong_start.cells[0] = CellId::new("1");
        assert!(matches!(validate_path(&x, &wrong_start), Err(PathError::BadStart { .. })));
    }

    #[test]
    fn spine_of_pi() {
        let x = fixtures::path_x();
        let s = spine_of(&x, &pi());
        assert_eq!(s, Spine::from_parts(&["", "a", "ab", "b"], &[(1, 0), (2, 0), (1, 1)]));
        assert_eq!(s.to_string(), "(0,ε) -(1,0)-> (1,a) -(2,0)-> (2,ab) -(1,1)-> (1,b)");
        assert_eq!(spine_of(&x, &Path::empty(&x)), Spine::trivial());
        assert_eq!(pi().to_string(), "0 -(1,0)-> β -(2,0)-> c -(1,1)-> γ");
    }

    #[test]
    fn path_shape_of_pi() {
        let x = fixtures::path_x();
        let s = spine_of(&x, &pi());
        let shape = path_shape(&s, x.alphabet()).unwrap();
        assert_eq!(shape.len(), 4);
        assert_eq!(shape.validate(), vec![]);
        let id = |s: &str| CellId::new(s);
        let w = |p: &[(usize, u8)]| FaceWord::from_pairs(p).unwrap();
        assert_eq!(shape.face_of(&id("2"), &w(&[(2, 0)])), Some(&id("1")));
        assert_eq!(shape.face_of(&id("2"), &w(&[(1, 1)])), Some(&id("3")));
        assert_eq!(shape.face_of(&id("1"), &w(&[(1, 0)])), Some(&id("0")));
        assert_eq!(shape.face_of(&id("2"), &w(&[(1, 0), (2, 0)])), Some(&id("0")));
        assert_eq!(shape.face_of(&id("2"), &w(&[(1, 0)])), None);
        assert!(!shape.is_hda());
        let star = path_shape(&Spine::trivial(), x.alphabet()).unwrap();
        assert_eq!(star.len(), 1);
        assert!(star.is_hda());
    }

    #[test]
    fn invalid_spines() {
        let a: BTreeSet<char> = "ab".chars().collect();
        let bad = Spine::from_parts(&["", "a", "b"], &[(1, 0), (1, 1)]);
        assert!(matches!(path_shape(&bad, &a), Err(PathError::InvalidSpine { .. })));
        let bad = Spine::from_parts(&["a"], &[]);
        assert!(bad.validate().is_err());
    }

    #[test]
    fn path_morphism_round_trip() {
        let x = Arc::new(fixtures::path_x());
        let f = path_to_morphism(&x, &pi()).unwrap();
        assert_eq!(validate_morphism(&f), vec![]);
        assert_eq!(morphism_to_path(&f).unwrap(), pi());
        let e = path_to_morphism(&x, &Path::empty(&x)).unwrap();
        assert_eq!(e.source.len(), 1);
        assert_eq!(morphism_to_path(&e).unwrap(), Path::empty(&x));
    }

    #[test]
    fn non_shape_is_rejected() {
        let sq = Arc::new(fixtures::square_full());
        assert!(matches!(
            morphism_to_path(&Morphism::identity(&sq)),
            Err(PathError::NotAPathShape(_))
        ));
    }

    #[test]
    fn enumeration() {
        let sq = fixtures::square_full();
        assert_eq!(enumerate_paths(&sq, 0), vec![Path::empty(&sq)]);
        let all = enumerate_paths(&sq, 4);
        let ends: Vec<_> = all.iter().filter(|p| p.end().as_str() == "v11").collect();
        let texts: BTreeSet<String> = ends.iter().map(|p| p.to_string()).collect();
        assert!(texts.contains("v00 -(1,0)-> ea0 -(1,1)-> v10 -(1,0)-> eb1 -(1,1)-> v11"));
        assert!(texts.contains("v00 -(1,0)-> eb0 -(1,1)-> v01 -(1,0)-> ea1 -(1,1)-> v11"));
        assert!(texts.contains("v00 -(1,0)-> ea0 -(2,0)-> s -(2,1)-> ea1 -(1,1)-> v11"));
        assert!(texts.contains("v00 -(1,0)-> eb0 -(1,0)-> s -(1,1)-> eb1 -(1,1)-> v11"));
        assert!(enumerate_paths(&fixtures::path_x(), 3).contains(&pi()));
        for p in &all {
            assert_eq!(validate_path(&sq, p), Ok(()));
            assert_eq!(spine_of(&sq, p).validate(), Ok(()));
        }
    }

    #[test]
    fn full_segment_shape_is_total() {
        let a: BTreeSet<char> = "a".chars().collect();
        let s = Spine::from_parts(&["", "a", ""], &[(1, 0), (1, 1)]);
        assert!(path_shape(&s, &a).unwrap().is_hda());
    }
}
