//! Partial HDA: graded cells, a partial composite-face table, labels and an
//! initial point.

use std::borrow::Borrow;
use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

use crate::cube::{delete_letters, Direction, Face, FaceWord, LabelWord};

/// Opaque cell identifier.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct CellId(Arc<str>);

impl CellId {
    pub fn new(s: impl AsRef<str>) -> Self {
        CellId(Arc::from(s.as_ref()))
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }
}

impl fmt::Debug for CellId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", &*self.0)
    }
}

impl fmt::Display for CellId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl Borrow<str> for CellId {
    fn borrow(&self) -> &str {
        &self.0
    }
}

impl From<&str> for CellId {
    fn from(s: &str) -> Self {
        CellId::new(s)
    }
}

impl From<String> for CellId {
    fn from(s: String) -> Self {
        CellId(Arc::from(s))
    }
}

impl Serialize for CellId {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.serialize_str(&self.0)
    }
}

impl<'de> Deserialize<'de> for CellId {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        Ok(CellId::from(String::deserialize(deserializer)?))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Cell {
    pub id: CellId,
    pub dim: usize,
    pub label: LabelWord,
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub struct FaceEntry {
    pub from: CellId,
    pub word: FaceWord,
    pub to: CellId,
}

/// The unvalidated form of a model, as read from or written to JSON.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RawPhda {
    pub alphabet: Vec<char>,
    pub cells: Vec<Cell>,
    pub initial: CellId,
    #[serde(default)]
    pub faces: Vec<FaceEntry>,
    #[serde(default)]
    pub saturate: bool,
}

impl RawPhda {
    pub fn new(alphabet: &str, initial: &str) -> Self {
        RawPhda {
            alphabet: alphabet.chars().collect(),
            cells: Vec::new(),
            initial: CellId::new(initial),
            faces: Vec::new(),
            saturate: false,
        }
    }

    /// Adds a cell whose dimension is the length of its label.
    pub fn cell(mut self, id: &str, label: &str) -> Self {
        let label = LabelWord::from(label);
        self.cells.push(Cell {
            id: CellId::new(id),
            dim: label.len(),
            label,
        });
        self
    }

    pub fn face(mut self, from: &str, word: &[(usize, u8)], to: &str) -> Self {
        self.faces.push(FaceEntry {
            from: CellId::new(from),
            word: FaceWord::from_pairs(word).expect("fixture face word"),
            to: CellId::new(to),
        });
        self
    }

    pub fn saturated(mut self) -> Self {
        self.saturate = true;
        self
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum ViolationKind {
    NotFunctional,
    DimensionMismatch,
    LaxLawViolation,
    LabelViolation,
    BadInitial,
    UnknownCell,
}

#[derive(Debug, Clone, PartialEq, Eq, Error, Serialize)]
#[serde(tag = "kind")]
pub enum Violation {
    #[error("cell {cell} has two definitions or the face {word} of {cell} has targets {targets:?}")]
    NotFunctional {
        cell: CellId,
        word: FaceWord,
        targets: Vec<CellId>,
    },
    #[error("dimension mismatch at {cell} {word}: {detail}")]
    DimensionMismatch {
        cell: CellId,
        word: FaceWord,
        detail: String,
    },
    #[error("{cell} {first} = {middle} and {middle} {second} = {end}, but {cell} {composite} is {found}")]
    LaxLawViolation {
        cell: CellId,
        first: FaceWord,
        middle: CellId,
        second: FaceWord,
        end: CellId,
        composite: FaceWord,
        found: String,
    },
    #[error("label violation at {cell} {word}: {detail}")]
    LabelViolation {
        cell: CellId,
        word: FaceWord,
        detail: String,
    },
    #[error("initial state {cell} is {detail}")]
    BadInitial { cell: CellId, detail: String },
    #[error("unknown cell {cell} referenced by a face entry")]
    UnknownCell { cell: CellId },
}

impl Violation {
    pub fn kind(&self) -> ViolationKind {
        match self {
            Violation::NotFunctional { .. } => ViolationKind::NotFunctional,
            Violation::DimensionMismatch { .. } => ViolationKind::DimensionMismatch,
            Violation::LaxLawViolation { .. } => ViolationKind::LaxLawViolation,
            Violation::LabelViolation { .. } => ViolationKind::LabelViolation,
            Violation::BadInitial { .. } => ViolationKind::BadInitial,
            Violation::UnknownCell { .. } => ViolationKind::UnknownCell,
        }
    }
}

/// The set of violation kinds in a report.
pub fn kinds(report: &[Violation]) -> BTreeSet<ViolationKind> {
    report.iter().map(Violation::kind).collect()
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ModelError {
    #[error("invalid model: {}", summarize(.0))]
    Invalid(Vec<Violation>),
    #[error("unknown cell {0}")]
    UnknownCell(CellId),
}

fn summarize(violations: &[Violation]) -> String {
    let shown: Vec<String> = violations.iter().take(3).map(|v| v.to_string()).collect();
    let mut out = shown.join("; ");
    if violations.len() > 3 {
        out.push_str(&format!(" (and {} more)", violations.len() - 3));
    }
    out
}

/// Checks every invariant of a model and returns all violations found.
pub fn validate_phda(raw: &RawPhda) -> Vec<Violation> {
    let mut out = Vec::new();
    let mut cells: BTreeMap<&CellId, &Cell> = BTreeMap::new();
    let alphabet: BTreeSet<char> = raw.alphabet.iter().copied().collect();

    for cell in &raw.cells {
        if cells.insert(&cell.id, cell).is_some() {
            out.push(Violation::NotFunctional {
                cell: cell.id.clone(),
                word: FaceWord::empty(),
                targets: vec![cell.id.clone()],
            });
        }
        if cell.label.len() != cell.dim {
            out.push(Violation::DimensionMismatch {
                cell: cell.id.clone(),
                word: FaceWord::empty(),
                detail: format!("label {} has length {}, dim is {}", cell.label, cell.label.len(), cell.dim),
            });
        }
        if let Some(c) = cell.label.letters().iter().find(|c| !alphabet.contains(c)) {
            out.push(Violation::LabelViolation {
                cell: cell.id.clone(),
                word: FaceWord::empty(),
                detail: format!("letter {c:?} is not in the alphabet"),
            });
        }
    }

    match cells.get(&raw.initial) {
        None => out.push(Violation::BadInitial {
            cell: raw.initial.clone(),
            detail: "not a cell".into(),
        }),
        Some(c) if c.dim != 0 => out.push(Violation::BadInitial {
            cell: raw.initial.clone(),
            detail: format!("of dimension {}", c.dim),
        }),
        Some(_) => {}
    }

    let mut table: BTreeMap<(&CellId, &FaceWord), BTreeSet<&CellId>> = BTreeMap::new();
    for entry in &raw.faces {
        let mut known = true;
        for id in [&entry.from, &entry.to] {
            if !cells.contains_key(id) {
                out.push(Violation::UnknownCell { cell: id.clone() });
                known = false;
            }
        }
        if !known {
            continue;
        }
        if entry.word.is_empty() && entry.from != entry.to {
            out.push(Violation::NotFunctional {
                cell: entry.from.clone(),
                word: FaceWord::empty(),
                targets: vec![entry.from.clone(), entry.to.clone()],
            });
            continue;
        }
        table.entry((&entry.from, &entry.word)).or_default().insert(&entry.to);
    }

    let mut functional: BTreeMap<(&CellId, &FaceWord), &CellId> = BTreeMap::new();
    for (&(from, word), targets) in &table {
        if targets.len() > 1 {
            out.push(Violation::NotFunctional {
                cell: from.clone(),
                word: word.clone(),
                targets: targets.iter().map(|&t| t.clone()).collect(),
            });
        }
        let to = *targets.iter().next().expect("non-empty target set");
        functional.insert((from, word), to);

        let (x, y) = (cells[from], cells[to]);
        if !word.fits(x.dim) || x.dim < word.len() || y.dim != x.dim - word.len() {
            out.push(Violation::DimensionMismatch {
                cell: from.clone(),
                word: word.clone(),
                detail: format!("{} has dim {}, {} has dim {}", from, x.dim, to, y.dim),
            });
            continue;
        }
        if let Ok(expected) = delete_letters(word, &x.label) {
            if expected != y.label {
                out.push(Violation::LabelViolation {
                    cell: from.clone(),
                    word: word.clone(),
                    detail: format!("expected label {expected}, {to} has {}", y.label),
                });
            }
        }
    }

    let mut by_source: BTreeMap<&CellId, Vec<(&FaceWord, &CellId)>> = BTreeMap::new();
    for (&(from, word), &to) in &functional {
        if !word.is_empty() {
            by_source.entry(from).or_default().push((word, to));
        }
    }
    for (&x, firsts) in &by_source {
        for &(first, y) in firsts {
            for &(second, z) in by_source.get(y).map(Vec::as_slice).unwrap_or(&[]) {
                let composite = first.star(second);
                let found = functional.get(&(x, &composite)).copied();
                if found != Some(z) {
                    out.push(Violation::LaxLawViolation {
                        cell: x.clone(),
                        first: first.clone(),
                        middle: y.clone(),
                        second: second.clone(),
                        end: z.clone(),
                        composite,
                        found: found.map_or("undefined".into(), |c| c.to_string()),
                    });
                }
            }
        }
    }
    out
}

/// Closes the face table under the lax law. Entries that would conflict with
/// an existing one are left out so that validation reports them.
pub fn saturate(raw: &mut RawPhda) {
    let mut table: BTreeMap<(CellId, FaceWord), CellId> = BTreeMap::new();
    for e in &raw.faces {
        table
            .entry((e.from.clone(), e.word.clone()))
            .or_insert_with(|| e.to.clone());
    }
    loop {
        let mut by_source: BTreeMap<&CellId, Vec<(&FaceWord, &CellId)>> = BTreeMap::new();
        for ((from, word), to) in &table {
            by_source.entry(from).or_default().push((word, to));
        }
        let mut fresh = Vec::new();
        for (&x, firsts) in &by_source {
            for &(first, y) in firsts {
                for &(second, z) in by_source.get(y).map(Vec::as_slice).unwrap_or(&[]) {
                    let key = (x.clone(), first.star(second));
                    if !table.contains_key(&key) {
                        fresh.push((key, z.clone()));
                    }
                }
            }
        }
        if fresh.is_empty() {
            break;
        }
        for (key, to) in fresh {
            table.entry(key).or_insert(to);
        }
    }
    let extra: Vec<FaceEntry> = table
        .into_iter()
        .map(|((from, word), to)| FaceEntry { from, word, to })
        .filter(|e| !raw.faces.contains(e))
        .collect();
    raw.faces.extend(extra);
    raw.saturate = false;
}

/// A validated, indexed model.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Phda {
    alphabet: BTreeSet<char>,
    cells: BTreeMap<CellId, Cell>,
    initial: CellId,
    faces: BTreeMap<CellId, BTreeMap<FaceWord, CellId>>,
    past_cofaces: BTreeMap<CellId, Vec<(Face, CellId)>>,
}

impl Phda {
    /// Saturates when the raw model asks for it, then validates.
    pub fn new(mut raw: RawPhda) -> Result<Self, ModelError> {
        if raw.saturate {
            saturate(&mut raw);
        }
        let violations = validate_phda(&raw);
        if violations.is_empty() {
            Ok(Phda::from_raw_unchecked(raw))
        } else {
            Err(ModelError::Invalid(violations))
        }
    }

    pub(crate) fn from_raw_unchecked(raw: RawPhda) -> Self {
        let cells: BTreeMap<CellId, Cell> =
            raw.cells.into_iter().map(|c| (c.id.clone(), c)).collect();
        let mut faces: BTreeMap<CellId, BTreeMap<FaceWord, CellId>> =
            cells.keys().map(|id| (id.clone(), BTreeMap::new())).collect();
        let mut past_cofaces: BTreeMap<CellId, Vec<(Face, CellId)>> = BTreeMap::new();
        for e in raw.faces {
            if e.word.is_empty() {
                continue;
            }
            if let [face] = e.word.faces() {
                if face.dir == Direction::Past {
                    past_cofaces
                        .entry(e.to.clone())
                        .or_default()
                        .push((*face, e.from.clone()));
                }
            }
            faces.entry(e.from).or_default().insert(e.word, e.to);
        }
        for list in past_cofaces.values_mut() {
            list.sort();
            list.dedup();
        }
        Phda {
            alphabet: raw.alphabet.into_iter().collect(),
            cells,
            initial: raw.initial,
            faces,
            past_cofaces,
        }
    }

    /// The explicit form: every face entry listed, sorted, unsaturated flag.
    pub fn to_raw(&self) -> RawPhda {
        RawPhda {
            alphabet: self.alphabet.iter().copied().collect(),
            cells: self.cells.values().cloned().collect(),
            initial: self.initial.clone(),
            faces: self.entries().collect(),
            saturate: false,
        }
    }

    pub fn validate(&self) -> Vec<Violation> {
        validate_phda(&self.to_raw())
    }

    pub fn alphabet(&self) -> &BTreeSet<char> {
        &self.alphabet
    }

    pub fn initial(&self) -> &CellId {
        &self.initial
    }

    pub fn cells(&self) -> impl Iterator<Item = &Cell> {
        self.cells.values()
    }

    pub fn cell_ids(&self) -> impl Iterator<Item = &CellId> {
        self.cells.keys()
    }

    pub fn len(&self) -> usize {
        self.cells.len()
    }

    pub fn is_empty(&self) -> bool {
        self.cells.is_empty()
    }

    pub fn contains(&self, id: &CellId) -> bool {
        self.cells.contains_key(id)
    }

    pub fn cell(&self, id: &CellId) -> Option<&Cell> {
        self.cells.get(id)
    }

    pub fn cell_by_name(&self, id: &str) -> Option<&Cell> {
        self.cells.get(id)
    }

    /// Dimension of a known cell.
    pub fn dim(&self, id: &CellId) -> usize {
        self.cells[id].dim
    }

    /// Label of a known cell.
    pub fn label(&self, id: &CellId) -> &LabelWord {
        &self.cells[id].label
    }

    pub fn max_dim(&self) -> usize {
        self.cells.values().map(|c| c.dim).max().unwrap_or(0)
    }

    pub fn cells_of_dim(&self, dim: usize) -> impl Iterator<Item = &Cell> {
        self.cells.values().filter(move |c| c.dim == dim)
    }

    /// Face-table lookup; the empty word returns the cell itself.
    pub fn face(&self, cell: &CellId, w: &FaceWord) -> Result<Option<CellId>, ModelError> {
        if !self.contains(cell) {
            return Err(ModelError::UnknownCell(cell.clone()));
        }
        Ok(self.face_of(cell, w).cloned())
    }

    pub fn face_of<'a>(&'a self, cell: &'a CellId, w: &FaceWord) -> Option<&'a CellId> {
        if w.is_empty() {
            return self.cells.get_key_value(cell).map(|(k, _)| k);
        }
        self.faces.get(cell)?.get(w)
    }

    /// Defined non-trivial faces of a cell, ordered by word.
    pub fn faces_of(&self, cell: &CellId) -> impl Iterator<Item = (&FaceWord, &CellId)> {
        self.faces.get(cell).into_iter().flatten()
    }

    /// All face entries, ordered by source then word.
    pub fn entries(&self) -> impl Iterator<Item = FaceEntry> + '_ {
        self.faces.iter().flat_map(|(from, m)| {
            m.iter().map(move |(word, to)| FaceEntry {
                from: from.clone(),
                word: word.clone(),
                to: to.clone(),
            })
        })
    }

    /// Cells `y` with `(y, (j;0)) = cell`: the targets of start steps.
    pub fn past_cofaces(&self, cell: &CellId) -> &[(Face, CellId)] {
        self.past_cofaces.get(cell).map(Vec::as_slice).unwrap_or(&[])
    }

    /// Every single path step out of `cell`: starts (past cofaces) and
    /// finishes (future faces), sorted by step.
    pub fn steps_from(&self, cell: &CellId) -> Vec<(Face, CellId)> {
        let mut out: Vec<(Face, CellId)> = self.past_cofaces(cell).to_vec();
        for (word, to) in self.faces_of(cell) {
            if let [face] = word.faces() {
                if face.dir == Direction::Future {
                    out.push((*face, to.clone()));
                }
            }
        }
        out.sort();
        out
    }

    /// Whether every single face of every positive-dimensional cell is
    /// defined, i.e. the model is a total HDA.
    pub fn is_hda(&self) -> bool {
        self.cells.values().all(|c| {
            (1..=c.dim).all(|i| {
                Direction::BOTH
                    .iter()
                    .all(|&dir| self.face_of(&c.id, &FaceWord::single(Face::new(i, dir))).is_some())
            })
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    fn w(pairs: &[(usize, u8)]) -> FaceWord {
        FaceWord::from_pairs(pairs).unwrap()
    }

    #[test]
    fn fixtures_validate() {
        for (name, raw) in fixtures::all_raw() {
            let mut raw = raw;
            if raw.saturate {
                saturate(&mut raw);
            }
            assert_eq!(validate_phda(&raw), vec![], "{name}");
        }
    }

    #[test]
    fn missing_lax_composite_is_reported() {
        let raw = RawPhda::new("ab", "z")
            .cell("x", "ab")
            .cell("y", "b")
            .cell("z", "")
            .face("x", &[(1, 0)], "y")
            .face("y", &[(1, 1)], "z");
        assert_eq!(
            kinds(&validate_phda(&raw)),
            BTreeSet::from([ViolationKind::LaxLawViolation])
        );
    }

    #[test]
    fn other_violation_kinds() {
        let raw = RawPhda::new("a", "e")
            .cell("e", "a")
            .cell("v", "")
            .cell("u", "")
            .face("e", &[(1, 0)], "v")
            .face("e", &[(1, 0)], "u");
        let k = kinds(&validate_phda(&raw));
        assert!(k.contains(&ViolationKind::NotFunctional));
        assert!(k.contains(&ViolationKind::BadInitial));

        let raw = RawPhda::new("ab", "v")
            .cell("e", "a")
            .cell("f", "b")
            .cell("v", "")
            .face("e", &[(1, 0)], "f");
        assert!(kinds(&validate_phda(&raw)).contains(&ViolationKind::DimensionMismatch));

        let raw = RawPhda::new("ab", "v")
            .cell("s", "ab")
            .cell("e", "b")
            .cell("v", "")
            .face("s", &[(2, 0)], "e");
        assert_eq!(
            kinds(&validate_phda(&raw)),
            BTreeSet::from([ViolationKind::LabelViolation])
        );

        let raw = RawPhda::new("a", "v").cell("v", "").face("v", &[], "ghost");
        assert!(kinds(&validate_phda(&raw)).contains(&ViolationKind::UnknownCell));
    }

    #[test]
    fn face_lookup() {
        let sq = fixtures::square_full();
        let s = CellId::new("s");
        assert_eq!(sq.face(&s, &w(&[(1, 0), (2, 0)])).unwrap(), Some(CellId::new("v00")));
        assert_eq!(sq.face(&s, &FaceWord::empty()).unwrap(), Some(s.clone()));
        let split = fixtures::split_segment();
        assert_eq!(split.face(&CellId::new("e"), &w(&[(1, 0)])).unwrap(), None);
        assert!(matches!(
            sq.face(&CellId::new("nope"), &FaceWord::empty()),
            Err(ModelError::UnknownCell(_))
        ));
    }

    #[test]
    fn hda_recognition() {
        assert!(fixtures::square_full().is_hda());
        assert!(!fixtures::split_segment().is_hda());
        assert!(!fixtures::missing_cube().is_hda());
        assert!(fixtures::star().is_hda());
    }

    #[test]
    fn missing_cube_composites_agree() {
        let cube = fixtures::missing_cube();
        let c = CellId::new("***");
        let one = FaceWord::single(Face::future(1));
        let two = FaceWord::single(Face::future(2));
        let p2 = FaceWord::single(Face::past(2));
        let a = one.star(&p2).star(&one);
        let b = two.star(&p2).star(&one);
        assert_eq!(a, b);
        assert_eq!(cube.face_of(&c, &a), Some(&CellId::new("110")));
    }

    #[test]
    fn decompositions_agree_on_fixtures() {
        for (name, x) in fixtures::all() {
            for cell in x.cells() {
                for (word, target) in x.faces_of(&cell.id) {
                    for (first, mid) in x.faces_of(&cell.id) {
                        for (second, end) in x.faces_of(mid) {
                            if &first.star(second) == word {
                                assert_eq!(end, target, "{name}");
                            }
                        }
                    }
                }
            }
        }
    }
}
