//! Depth-bounded unfolding and tree recognition.
//!
//! States of the unfolding are confluent homotopy classes of paths. A state
//! named `"v@n"` is the `n`-th class found, in breadth-first order, among the
//! classes of paths ending at `v`.

use std::collections::BTreeMap;
use std::sync::Arc;

use serde::Serialize;
use thiserror::Error;

use crate::cube::{Direction, FaceWord};
use crate::homotopy::{find_shortcuts, group_into_classes, HomotopyClass};
use crate::model::{Cell, CellId, FaceEntry, Phda, RawPhda};
use crate::morphism::Morphism;
use crate::paths::{enumerate_paths, Path};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum UnfoldError {
    #[error("not a tree: {0}")]
    NotATree(String),
    #[error("the unfolding is not a valid model: {0}")]
    Internal(String),
}

#[derive(Debug, Clone)]
pub struct Unfolding {
    pub tree: Arc<Phda>,
    /// `[π] ↦ e(π)`.
    pub unf: Morphism,
    pub truncated: bool,
    pub depth: usize,
    /// State of every path of length at most `depth`.
    pub state_of: BTreeMap<Path, CellId>,
}

pub fn unfold(x: &Arc<Phda>, depth: usize) -> Result<Unfolding, UnfoldError> {
    let paths = enumerate_paths(x, depth);
    let classes = group_into_classes(x, paths.iter().cloned());
    let mut class_index: BTreeMap<&Path, usize> = BTreeMap::new();
    for (n, class) in classes.iter().enumerate() {
        for m in &class.members {
            class_index.insert(m, n);
        }
    }

    let mut names: Vec<Option<CellId>> = vec![None; classes.len()];
    let mut ordinal: BTreeMap<&CellId, usize> = BTreeMap::new();
    for p in &paths {
        let n = class_index[p];
        if names[n].is_none() {
            let next = ordinal.entry(p.end()).or_insert(0);
            names[n] = Some(CellId::new(format!("{}@{}", p.end(), next)));
            *next += 1;
        }
    }
    let names: Vec<CellId> = names.into_iter().map(|n| n.expect("named class")).collect();
    let state_of: BTreeMap<Path, CellId> = paths
        .iter()
        .map(|p| (p.clone(), names[class_index[p]].clone()))
        .collect();

    let mut raw = RawPhda {
        alphabet: x.alphabet().iter().copied().collect(),
        cells: Vec::new(),
        initial: state_of[&Path::empty(x)].clone(),
        faces: Vec::new(),
        saturate: true,
    };
    let mut truncated = false;
    for (n, class) in classes.iter().enumerate() {
        let end = &class.key.end;
        raw.cells.push(Cell {
            id: names[n].clone(),
            dim: x.dim(end),
            label: x.label(end).clone(),
        });
        for p in &class.members {
            if let Some(last) = p.steps.last() {
                if last.dir == Direction::Past {
                    raw.faces.push(FaceEntry {
                        from: names[n].clone(),
                        word: FaceWord::single(*last),
                        to: state_of[&p.prefix(p.len() - 1)].clone(),
                    });
                }
            }
            for (word, to) in x.faces_of(end) {
                let [face] = word.faces() else { continue };
                if face.dir != Direction::Future {
                    continue;
                }
                match state_of.get(&p.extended(*face, to.clone())) {
                    Some(next) => raw.faces.push(FaceEntry {
                        from: names[n].clone(),
                        word: word.clone(),
                        to: next.clone(),
                    }),
                    None => truncated = true,
                }
            }
            if p.len() == depth && !x.past_cofaces(end).is_empty() {
                truncated = true;
            }
        }
    }
    raw.faces.sort();
    raw.faces.dedup();
    let tree = Arc::new(Phda::new(raw).map_err(|e| UnfoldError::Internal(e.to_string()))?);
    let unf = Morphism {
        source: tree.clone(),
        target: x.clone(),
        map: classes
            .iter()
            .enumerate()
            .map(|(n, c)| (names[n].clone(), c.key.end.clone()))
            .collect(),
    };
    Ok(Unfolding {
        tree,
        unf,
        truncated,
        depth,
        state_of,
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "verdict")]
pub enum TreeCertificate {
    Tree,
    Shortcut { cell: CellId, word: FaceWord },
    Inaccessible { cell: CellId },
    MultipleClasses { cell: CellId, witnesses: (Path, Path) },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TreeVerdict {
    pub is_tree: bool,
    pub certificate: TreeCertificate,
}

impl TreeVerdict {
    fn no(certificate: TreeCertificate) -> Self {
        TreeVerdict {
            is_tree: false,
            certificate,
        }
    }
}

/// Decides whether `x` has no shortcut and exactly one class of paths to
/// every cell. Paths up to length `|cells|` suffice: a longer path repeats a
/// cell at two different lengths, and such prefixes are never homotopic.
pub fn is_tree(x: &Phda) -> TreeVerdict {
    if let Some((cell, word)) = find_shortcuts(x).into_iter().next() {
        return TreeVerdict::no(TreeCertificate::Shortcut { cell, word });
    }
    let cutoff = x.len();
    let mut first: BTreeMap<CellId, Path> = BTreeMap::new();
    let mut by_cell: BTreeMap<CellId, Vec<Path>> = BTreeMap::new();
    let mut frontier = vec![Path::empty(x)];
    for len in 0..=cutoff {
        for p in &frontier {
            match first.get(p.end()) {
                Some(q) if q.len() != p.len() => {
                    return TreeVerdict::no(TreeCertificate::MultipleClasses {
                        cell: p.end().clone(),
                        witnesses: (q.clone(), p.clone()),
                    });
                }
                Some(_) => {}
                None => {
                    first.insert(p.end().clone(), p.clone());
                }
            }
            by_cell.entry(p.end().clone()).or_default().push(p.clone());
        }
        if len == cutoff {
            break;
        }
        let mut next = Vec::new();
        for p in &frontier {
            for (step, cell) in x.steps_from(p.end()) {
                next.push(p.extended(step, cell));
            }
        }
        next.sort();
        frontier = next;
    }
    if let Some(cell) = x.cell_ids().find(|c| !first.contains_key(*c)) {
        return TreeVerdict::no(TreeCertificate::Inaccessible { cell: cell.clone() });
    }
    for (cell, paths) in by_cell {
        let classes: Vec<HomotopyClass> = group_into_classes(x, paths);
        if classes.len() > 1 {
            return TreeVerdict::no(TreeCertificate::MultipleClasses {
                cell,
                witnesses: (
                    classes[0].representative.clone(),
                    classes[1].representative.clone(),
                ),
            });
        }
    }
    TreeVerdict {
        is_tree: true,
        certificate: TreeCertificate::Tree,
    }
}

/// For a tree, the isomorphism `x → U(x)` sending each cell to its unique
/// class, together with the unfolding it lands in.
pub fn tree_unit(x: &Arc<Phda>) -> Result<(Unfolding, Morphism), UnfoldError> {
    let verdict = is_tree(x);
    if !verdict.is_tree {
        return Err(UnfoldError::NotATree(format!("{:?}", verdict.certificate)));
    }
    let u = unfold(x, x.len())?;
    let mut map = BTreeMap::new();
    for (p, state) in &u.state_of {
        map.entry(p.end().clone()).or_insert_with(|| state.clone());
    }
    let eta = Morphism {
        source: x.clone(),
        target: u.tree.clone(),
        map,
    };
    Ok((u, eta))
}

/// Depth of every accessible cell of a tree: the common length of its paths.
pub fn depths(x: &Phda) -> BTreeMap<CellId, usize> {
    let mut out = BTreeMap::new();
    for p in enumerate_paths(x, x.len()) {
        out.entry(p.end().clone()).or_insert(p.len());
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::colimit::colimit;
    use crate::fixtures;
    use crate::morphism::{compose, validate_morphism};
    use crate::paths::{path_shape, Spine};

    #[test]
    fn star_unfolds_to_itself() {
        let x = Arc::new(fixtures::star());
        let u = unfold(&x, 5).unwrap();
        assert_eq!(u.tree.len(), 1);
        assert!(!u.truncated);
        assert!(is_tree(&x).is_tree);
    }

    #[test]
    fn path_shape_is_fixed() {
        let s = Spine::from_parts(&["", "a", "ab", "b"], &[(1, 0), (2, 0), (1, 1)]);
        let x = Arc::new(path_shape(&s, &"ab".chars().collect()).unwrap());
        let u = unfold(&x, s.len()).unwrap();
        assert!(u.unf.is_bijective());
        assert_eq!(validate_morphism(&u.unf), vec![]);
        assert!(!u.truncated);
        let (_, eta) = tree_unit(&x).unwrap();
        assert!(compose(&u.unf, &eta).unwrap().is_identity());
    }

    #[test]
    fn square_unfolding() {
        let x = Arc::new(fixtures::square_full());
        let u = unfold(&x, 4).unwrap();
        let over = |c: &str| u.unf.map.values().filter(|v| v.as_str() == c).count();
        assert_eq!(over("v11"), 4);
        assert_eq!(over("s"), 2);
        assert!(!u.truncated);
        assert!(is_tree(&u.tree).is_tree);
        let short = unfold(&x, 2).unwrap();
        assert!(short.truncated);
        assert!(is_tree(&short.tree).is_tree);
    }

    #[test]
    fn verdicts() {
        assert!(is_tree(&colimit(&fixtures::pushout_diagram()).unwrap().apex).is_tree);
        assert!(matches!(
            is_tree(&fixtures::square_full()).certificate,
            TreeCertificate::MultipleClasses { .. }
        ));
        assert!(matches!(
            is_tree(&fixtures::split_segment()).certificate,
            TreeCertificate::Inaccessible { .. }
        ));
        assert!(matches!(
            is_tree(&fixtures::looped()).certificate,
            TreeCertificate::MultipleClasses { .. }
        ));
        assert!(matches!(tree_unit(&Arc::new(fixtures::square_full())), Err(UnfoldError::NotATree(_))));
    }

    #[test]
    fn loop_unfolding_is_truncated() {
        let x = Arc::new(fixtures::looped());
        let u = unfold(&x, 3).unwrap();
        assert!(u.truncated);
        assert_eq!(u.tree.len(), 4);
        assert!(is_tree(&u.tree).is_tree);
    }

    #[test]
    fn depth_is_well_defined_on_trees() {
        let t = colimit(&fixtures::pushout_diagram()).unwrap().apex;
        let d = depths(&t);
        for p in enumerate_paths(&t, t.len()) {
            assert_eq!(d[p.end()], p.len());
        }
    }
}
