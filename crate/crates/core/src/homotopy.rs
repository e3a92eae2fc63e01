//! Confluent homotopy: paths are identified when a block of consecutive
//! finishes is replaced by another block of finishes with the same composite
//! face and the same endpoints.

use std::collections::{BTreeSet, VecDeque};

use serde::Serialize;

use crate::cube::{Direction, Face, FaceWord};
use crate::model::{CellId, ModelError, Phda};
use crate::paths::{enumerate_paths, validate_path, Path, PathError};

/// One token of the necessary-condition key.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub enum KeyToken {
    Start(Face),
    Finishes(FaceWord),
}

/// Invariant of confluent homotopy: length, endpoint, the start steps in
/// order and the composite of each maximal run of finishes.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct HomotopyKey {
    pub len: usize,
    pub end: CellId,
    pub tokens: Vec<KeyToken>,
}

pub fn homotopy_key(p: &Path) -> HomotopyKey {
    let mut tokens = Vec::new();
    let mut run: Option<FaceWord> = None;
    for step in &p.steps {
        match step.dir {
            Direction::Past => {
                if let Some(w) = run.take() {
                    tokens.push(KeyToken::Finishes(w));
                }
                tokens.push(KeyToken::Start(*step));
            }
            Direction::Future => {
                run = Some(run.unwrap_or_default().then(*step));
            }
        }
    }
    if let Some(w) = run {
        tokens.push(KeyToken::Finishes(w));
    }
    HomotopyKey {
        len: p.len(),
        end: p.end().clone(),
        tokens,
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct HomotopyClass {
    pub representative: Path,
    pub members: BTreeSet<Path>,
    pub key: HomotopyKey,
}

/// All sequences of finishes from `from` of length `len` whose composite is
/// `target` and which end at `to`, as `(steps, intermediate cells)`.
fn factorizations(
    host: &Phda,
    from: &CellId,
    target: &FaceWord,
    len: usize,
    to: Option<&CellId>,
    found: &mut Vec<(Vec<Face>, Vec<CellId>)>,
) {
    fn go(
        host: &Phda,
        cell: &CellId,
        acc: &FaceWord,
        target: &FaceWord,
        len: usize,
        to: Option<&CellId>,
        steps: &mut Vec<Face>,
        cells: &mut Vec<CellId>,
        found: &mut Vec<(Vec<Face>, Vec<CellId>)>,
    ) {
        if steps.len() == len {
            if acc == target && to.is_none_or(|t| t == cell) {
                found.push((steps.clone(), cells.clone()));
            }
            return;
        }
        for (word, next) in host.faces_of(cell) {
            let [face] = word.faces() else { continue };
            if face.dir != Direction::Future {
                continue;
            }
            let extended = acc.then(*face);
            if !extended.is_subword_of(target) {
                continue;
            }
            steps.push(*face);
            cells.push(next.clone());
            go(host, next, &extended, target, len, to, steps, cells, found);
            steps.pop();
            cells.pop();
        }
    }
    go(
        host,
        from,
        &FaceWord::empty(),
        target,
        len,
        to,
        &mut Vec::new(),
        &mut Vec::new(),
        found,
    );
}

/// Paths obtained from `p` by one elementary confluent homotopy.
pub fn elementary_neighbors(host: &Phda, p: &Path) -> BTreeSet<Path> {
    let mut out = BTreeSet::new();
    let n = p.len();
    // Steps are numbered 1..=n; step k links cells k-1 and k.
    for s in 1..=n {
        if p.steps[s - 1].dir != Direction::Future {
            continue;
        }
        let mut composite = FaceWord::single(p.steps[s - 1]);
        for t in s + 1..=n {
            if p.steps[t - 1].dir != Direction::Future {
                break;
            }
            composite = composite.then(p.steps[t - 1]);
            let mut found = Vec::new();
            factorizations(
                host,
                &p.cells[s - 1],
                &composite,
                t - s + 1,
                Some(&p.cells[t]),
                &mut found,
            );
            for (steps, cells) in found {
                let mut q = p.clone();
                q.steps.splice(s - 1..t, steps);
                q.cells.splice(s..=t, cells);
                if &q != p {
                    out.insert(q);
                }
            }
        }
    }
    out
}

/// The confluent homotopy class of `p`, by breadth-first closure.
pub fn homotopy_closure(host: &Phda, p: &Path) -> BTreeSet<Path> {
    let mut seen = BTreeSet::from([p.clone()]);
    let mut queue = VecDeque::from([p.clone()]);
    while let Some(q) = queue.pop_front() {
        for r in elementary_neighbors(host, &q) {
            if seen.insert(r.clone()) {
                queue.push_back(r);
            }
        }
    }
    seen
}

pub fn homotopy_class(host: &Phda, p: &Path) -> HomotopyClass {
    let members = homotopy_closure(host, p);
    HomotopyClass {
        representative: members.iter().next().expect("non-empty class").clone(),
        key: homotopy_key(p),
        members,
    }
}

pub fn are_confluently_homotopic(host: &Phda, p: &Path, q: &Path) -> Result<bool, PathError> {
    for path in [p, q] {
        validate_path(host, path).map_err(|_| PathError::DifferentHosts)?;
    }
    if homotopy_key(p) != homotopy_key(q) {
        return Ok(false);
    }
    let mut seen = BTreeSet::from([p.clone()]);
    let mut queue = VecDeque::from([p.clone()]);
    while let Some(r) = queue.pop_front() {
        if &r == q {
            return Ok(true);
        }
        for s in elementary_neighbors(host, &r) {
            if seen.insert(s.clone()) {
                queue.push_back(s);
            }
        }
    }
    Ok(false)
}

/// Groups a set of paths into confluent homotopy classes, in order of their
/// least member.
pub fn group_into_classes(host: &Phda, paths: impl IntoIterator<Item = Path>) -> Vec<HomotopyClass> {
    let mut pending: BTreeSet<Path> = paths.into_iter().collect();
    let mut out = Vec::new();
    while let Some(p) = pending.pop_first() {
        let class = homotopy_class(host, &p);
        for m in &class.members {
            pending.remove(m);
        }
        out.push(class);
    }
    out
}

/// Classes of paths of length at most `max_len` ending at `cell`.
pub fn classes_to(
    host: &Phda,
    cell: &CellId,
    max_len: usize,
) -> Result<Vec<HomotopyClass>, ModelError> {
    if !host.contains(cell) {
        return Err(ModelError::UnknownCell(cell.clone()));
    }
    let paths = enumerate_paths(host, max_len)
        .into_iter()
        .filter(|p| p.end() == cell);
    Ok(group_into_classes(host, paths))
}

/// Number of distinct paths of length at most `max_len` to `cell`, i.e. the
/// class count when no paths are identified.
pub fn strict_path_count(host: &Phda, cell: &CellId, max_len: usize) -> usize {
    enumerate_paths(host, max_len)
        .iter()
        .filter(|p| p.end() == cell)
        .count()
}

/// Face entries that no chain of single faces realises.
pub fn find_shortcuts(host: &Phda) -> Vec<(CellId, FaceWord)> {
    let mut out = Vec::new();
    for cell in host.cells() {
        for (word, target) in host.faces_of(&cell.id) {
            if word.len() < 2 {
                continue;
            }
            if !has_chain(host, &cell.id, &FaceWord::empty(), word, target) {
                out.push((cell.id.clone(), word.clone()));
            }
        }
    }
    out
}

fn has_chain(host: &Phda, cell: &CellId, acc: &FaceWord, target: &FaceWord, end: &CellId) -> bool {
    if acc.len() == target.len() {
        return acc == target && cell == end;
    }
    host.faces_of(cell).any(|(word, next)| {
        let [face] = word.faces() else { return false };
        let extended = acc.then(*face);
        extended.is_subword_of(target) && has_chain(host, next, &extended, target, end)
    })
}
