//! Open maps, coverings and lifts against trees.

use std::collections::{BTreeMap, BTreeSet};
use std::sync::Arc;

use serde::Serialize;
use thiserror::Error;

use crate::cube::{Direction, FaceWord};
use crate::model::{CellId, Phda};
use crate::morphism::{compose, same_model, validate_morphism, Morphism};
use crate::paths::{enumerate_paths, map_path, path_shape, spine_of, Path, Spine};
use crate::unfolding::{depths, is_tree, unfold, TreeVerdict};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LiftError {
    #[error("the domain is not a tree")]
    NotATree,
    #[error("the morphism is not open: {0}")]
    NotOpen(String),
    #[error("the morphisms do not share a codomain")]
    Mismatch,
    #[error("the lift is not a covering")]
    NotCovering,
}

/// A lifting square that failed: `path` in the domain, `extension` in the
/// codomain starting with the image of `path`, and the number of lifts.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Square {
    pub path: Path,
    pub extension: Path,
    pub lifts: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct LiftVerdict {
    pub holds: bool,
    pub squares: usize,
    pub counterexample: Option<Square>,
}

fn verdict(squares: usize, counterexample: Option<Square>) -> LiftVerdict {
    LiftVerdict {
        holds: counterexample.is_none(),
        squares,
        counterexample,
    }
}

/// Squares against one-step extensions of paths of length at most
/// `max_len`, with the number of lifts of each.
fn prefix_squares(f: &Morphism, max_len: usize) -> Vec<Square> {
    let mut out = Vec::new();
    for p in enumerate_paths(&f.source, max_len) {
        let image = map_path(f, &p).expect("path of the domain");
        for (step, next) in f.target.steps_from(image.end()) {
            let lifts = f
                .source
                .steps_from(p.end())
                .into_iter()
                .filter(|(s, x)| *s == step && f.apply(x) == &next)
                .count();
            out.push(Square {
                path: p.clone(),
                extension: image.extended(step, next),
                lifts,
            });
        }
    }
    out
}

/// Right lifting property against path-shape morphisms. Prefix mode checks
/// one-step extensions; exhaustive mode enumerates every morphism between
/// the path shapes involved.
pub fn is_open(f: &Morphism, max_len: usize, exhaustive: bool) -> LiftVerdict {
    if exhaustive {
        return exhaustive_open(f, max_len);
    }
    let squares = prefix_squares(f, max_len);
    let bad = squares.iter().find(|s| s.lifts == 0).cloned();
    verdict(squares.len(), bad)
}

/// Open with unique lifts.
pub fn is_covering(f: &Morphism, max_len: usize) -> LiftVerdict {
    let squares = prefix_squares(f, max_len);
    let bad = squares.iter().find(|s| s.lifts != 1).cloned();
    verdict(squares.len(), bad)
}

fn exhaustive_open(f: &Morphism, max_len: usize) -> LiftVerdict {
    let dom_paths = enumerate_paths(&f.source, max_len + 1);
    let mut over: BTreeMap<Path, Vec<&Path>> = BTreeMap::new();
    for p in &dom_paths {
        over.entry(map_path(f, p).expect("path of the domain")).or_default().push(p);
    }
    let cod_paths = enumerate_paths(&f.target, max_len + 1);
    let mut shape_maps: BTreeMap<(Spine, Spine), Vec<BTreeMap<usize, usize>>> = BTreeMap::new();
    let mut squares = 0;
    for p in dom_paths.iter().filter(|p| p.len() <= max_len) {
        let sp = spine_of(&f.source, p);
        for r in &cod_paths {
            let sr = spine_of(&f.target, r);
            let maps = shape_maps
                .entry((sp.clone(), sr.clone()))
                .or_insert_with(|| shape_morphisms(&sp, &sr, f.target.alphabet()));
            for g in maps.iter() {
                if g.iter().any(|(&k, &l)| f.apply(&p.cells[k]) != &r.cells[l]) {
                    continue;
                }
                squares += 1;
                let lifts = over
                    .get(r)
                    .map(|cands| {
                        cands
                            .iter()
                            .filter(|t| g.iter().all(|(&k, &l)| t.cells[l] == p.cells[k]))
                            .count()
                    })
                    .unwrap_or(0);
                if lifts == 0 {
                    return verdict(
                        squares,
                        Some(Square {
                            path: p.clone(),
                            extension: r.clone(),
                            lifts,
                        }),
                    );
                }
            }
        }
    }
    verdict(squares, None)
}

/// Every morphism between the path shapes of two spines, as index maps.
pub fn shape_morphisms(
    from: &Spine,
    to: &Spine,
    alphabet: &BTreeSet<char>,
) -> Vec<BTreeMap<usize, usize>> {
    let (Ok(a), Ok(b)) = (path_shape(from, alphabet), path_shape(to, alphabet)) else {
        return Vec::new();
    };
    let (a, b) = (Arc::new(a), Arc::new(b));
    enumerate_morphisms(&a, &b, None, usize::MAX)
        .into_iter()
        .map(|m| {
            m.map
                .iter()
                .map(|(k, l)| (k.as_str().parse().unwrap(), l.as_str().parse().unwrap()))
                .collect()
        })
        .collect()
}

/// All morphisms `src → tgt`, optionally restricted to those `h` with
/// `f ∘ h = g`, stopping after `cap` results.
pub fn enumerate_morphisms(
    src: &Arc<Phda>,
    tgt: &Arc<Phda>,
    constraint: Option<(&Morphism, &Morphism)>,
    cap: usize,
) -> Vec<Morphism> {
    let mut order: Vec<CellId> = src.cell_ids().cloned().collect();
    order.sort_by_key(|c| (src.dim(c), c.clone()));
    let candidates: Vec<Vec<CellId>> = order
        .iter()
        .map(|x| {
            tgt.cells()
                .filter(|y| y.dim == src.dim(x) && &y.label == src.label(x))
                .filter(|y| x != src.initial() || &y.id == tgt.initial())
                .filter(|y| match constraint {
                    Some((f, g)) => f.map.get(&y.id) == g.map.get(x),
                    None => true,
                })
                .map(|y| y.id.clone())
                .collect()
        })
        .collect();
    let position: BTreeMap<&CellId, usize> = order.iter().enumerate().map(|(n, c)| (c, n)).collect();
    // Face entries checked once both ends are assigned, keyed by the later end.
    let mut checks: Vec<Vec<(CellId, FaceWord, CellId)>> = vec![Vec::new(); order.len()];
    for e in src.entries() {
        let at = position[&e.from].max(position[&e.to]);
        checks[at].push((e.from, e.word, e.to));
    }
    let mut out = Vec::new();
    let mut assigned: BTreeMap<CellId, CellId> = BTreeMap::new();
    search(src, tgt, &order, &candidates, &checks, 0, &mut assigned, cap, &mut out);
    out
}

#[allow(clippy::too_many_arguments)]
fn search(
    src: &Arc<Phda>,
    tgt: &Arc<Phda>,
    order: &[CellId],
    candidates: &[Vec<CellId>],
    checks: &[Vec<(CellId, FaceWord, CellId)>],
    n: usize,
    assigned: &mut BTreeMap<CellId, CellId>,
    cap: usize,
    out: &mut Vec<Morphism>,
) {
    if out.len() >= cap {
        return;
    }
    if n == order.len() {
        out.push(Morphism {
            source: src.clone(),
            target: tgt.clone(),
            map: assigned.clone(),
        });
        return;
    }
    for y in &candidates[n] {
        assigned.insert(order[n].clone(), y.clone());
        let ok = checks[n]
            .iter()
            .all(|(from, word, to)| tgt.face_of(&assigned[from], word) == Some(&assigned[to]));
        if ok {
            search(src, tgt, order, candidates, checks, n + 1, assigned, cap, out);
        }
        assigned.remove(&order[n]);
    }
}

/// A lift `h` of `g : X → Z` along `f : Y → Z` with `f ∘ h = g`, for a tree
/// `X` and an open `f`.
pub fn construct_lift(g: &Morphism, f: &Morphism) -> Result<Morphism, LiftError> {
    construct_lift_with(g, f, |_| {})
}

/// As [`construct_lift`], with `arrange` permuting the cells of each depth
/// before they are processed.
pub fn construct_lift_with(
    g: &Morphism,
    f: &Morphism,
    mut arrange: impl FnMut(&mut Vec<CellId>),
) -> Result<Morphism, LiftError> {
    if !same_model(&g.target, &f.target) {
        return Err(LiftError::Mismatch);
    }
    let x = &g.source;
    if !is_tree(x).is_tree {
        return Err(LiftError::NotATree);
    }
    // The last step of some path to each cell, with its source.
    let mut last: BTreeMap<CellId, (crate::cube::Face, CellId)> = BTreeMap::new();
    for p in enumerate_paths(x, x.len()) {
        if let (Some(step), true) = (p.steps.last(), p.len() > 0) {
            last.entry(p.end().clone())
                .or_insert((*step, p.cells[p.len() - 1].clone()));
        }
    }
    let mut levels: BTreeMap<usize, Vec<CellId>> = BTreeMap::new();
    for (cell, depth) in depths(x) {
        levels.entry(depth).or_default().push(cell);
    }
    let mut h: BTreeMap<CellId, CellId> = BTreeMap::new();
    for (depth, mut cells) in levels {
        arrange(&mut cells);
        for cell in cells {
            if depth == 0 {
                h.insert(cell, f.source.initial().clone());
                continue;
            }
            let (step, prev) = &last[&cell];
            let hp = h[prev].clone();
            let image = match step.dir {
                Direction::Past => f
                    .source
                    .past_cofaces(&hp)
                    .iter()
                    .filter(|(s, y)| s == step && f.apply(y) == g.apply(&cell))
                    .map(|(_, y)| y.clone())
                    .min(),
                Direction::Future => f.source.face_of(&hp, &FaceWord::single(*step)).cloned(),
            };
            let image = image.ok_or_else(|| {
                LiftError::NotOpen(format!("no lift for {cell} above {}", g.apply(&cell)))
            })?;
            h.insert(cell, image);
        }
    }
    let lift = Morphism {
        source: x.clone(),
        target: f.source.clone(),
        map: h,
    };
    let violations = validate_morphism(&lift);
    if !violations.is_empty() {
        return Err(LiftError::NotOpen(violations[0].to_string()));
    }
    if compose(f, &lift).ok().as_ref().map(|m| &m.map) != Some(&g.map) {
        return Err(LiftError::NotOpen("the lift does not commute".into()));
    }
    Ok(lift)
}

/// For a covering `f : Y → X` out of a tree and a covering `g : Z → X`, the
/// map `h : Y → Z` with `g ∘ h = f`, checked to be a covering.
pub fn factor_universal(f: &Morphism, g: &Morphism, max_len: usize) -> Result<Morphism, LiftError> {
    let h = construct_lift(f, g)?;
    if !is_covering(&h, max_len).holds {
        return Err(LiftError::NotCovering);
    }
    Ok(h)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CorpusCheck {
    pub index: usize,
    pub squares: usize,
    pub lifted: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CofibrancyReport {
    pub is_cofibrant: bool,
    pub tree: TreeVerdict,
    /// Whether the identity lifts along the unfolding map.
    pub unfolding_lift: bool,
    pub corpus: Vec<CorpusCheck>,
    /// Whether the evidence agrees with the verdict.
    pub consistent: bool,
}

/// Cofibrancy is decided as tree-ness. The identity square against the
/// unfolding map and the corpus of open maps are used as cross-checks:
/// for a tree every square must lift.
pub fn is_cofibrant(x: &Arc<Phda>, corpus: &[Morphism]) -> CofibrancyReport {
    let tree = is_tree(x);
    let unfolding_lift = match unfold(x, x.len()) {
        Ok(u) => {
            let id = Morphism::identity(x);
            !enumerate_morphisms(x, &u.tree, Some((&u.unf, &id)), 1).is_empty()
        }
        Err(_) => false,
    };
    let mut checks = Vec::new();
    let mut all_lift = true;
    for (index, f) in corpus.iter().enumerate() {
        let gs = enumerate_morphisms(x, &f.target, None, 64);
        let mut lifted = 0;
        for g in &gs {
            if !enumerate_morphisms(x, &f.source, Some((f, g)), 1).is_empty() {
                lifted += 1;
            }
        }
        all_lift &= lifted == gs.len();
        checks.push(CorpusCheck {
            index,
            squares: gs.len(),
            lifted,
        });
    }
    let consistent = unfolding_lift == tree.is_tree && (!tree.is_tree || all_lift);
    CofibrancyReport {
        is_cofibrant: tree.is_tree,
        tree,
        unfolding_lift,
        corpus: checks,
        consistent,
    }
}
