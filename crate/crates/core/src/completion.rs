//! Completion of a partial HDA into a total one.
//!
//! Cells of the completion are classes of abstract faces `(w, x)` under the
//! least equivalence that identifies `(w, x)` with `(ε, y)` whenever the
//! face `w` of `x` is `y`, and that is a congruence for appending a single
//! face.

use std::collections::BTreeMap;
use std::sync::Arc;

use thiserror::Error;

use crate::cube::{delete_letters, Direction, Face, FaceWord};
use crate::model::{Cell, CellId, FaceEntry, Phda, RawPhda};
use crate::morphism::Morphism;
use crate::union_find::UnionFind;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CompletionError {
    #[error("the model is not a total HDA")]
    NotTotalHDA,
    #[error("the completions do not match the morphism's domain and codomain")]
    Mismatch,
}

#[derive(Debug, Clone)]
pub struct Completion {
    pub source: Arc<Phda>,
    pub hda: Arc<Phda>,
    /// The unit: `x ↦ ⟪ε, x⟫`.
    pub unit: Morphism,
    /// Class of every abstract face.
    pub class_of: BTreeMap<(CellId, FaceWord), CellId>,
    /// Least member of every class.
    pub representative: BTreeMap<CellId, (CellId, FaceWord)>,
}

impl Completion {
    pub fn class(&self, cell: &CellId, w: &FaceWord) -> &CellId {
        &self.class_of[&(cell.clone(), w.clone())]
    }
}

pub fn class_name(cell: &CellId, w: &FaceWord) -> CellId {
    CellId::new(format!("{cell}#{w}"))
}

pub fn complete(x: &Arc<Phda>) -> Completion {
    let mut universe: Vec<(CellId, FaceWord)> = Vec::new();
    for cell in x.cells() {
        for w in FaceWord::all_fitting(cell.dim) {
            universe.push((cell.id.clone(), w));
        }
    }
    universe.sort();
    let index: BTreeMap<(CellId, FaceWord), usize> = universe
        .iter()
        .enumerate()
        .map(|(n, k)| (k.clone(), n))
        .collect();
    let remaining = |n: usize| x.dim(&universe[n].0) - universe[n].1.len();

    let mut uf = UnionFind::new(universe.len());
    for entry in x.entries() {
        uf.union(
            index[&(entry.from.clone(), entry.word.clone())],
            index[&(entry.to.clone(), FaceWord::empty())],
        );
    }

    // extension[n][k] is the abstract face (w ⋆ f_k, x) for the k-th single
    // face f_k applicable to element n.
    let extension: Vec<Vec<usize>> = (0..universe.len())
        .map(|n| {
            let (cell, w) = &universe[n];
            single_faces(remaining(n))
                .into_iter()
                .map(|f| index[&(cell.clone(), w.then(f))])
                .collect()
        })
        .collect();
    loop {
        let mut changed = false;
        for n in 0..universe.len() {
            let root = uf.find(n);
            if root == n {
                continue;
            }
            for k in 0..extension[n].len() {
                changed |= uf.union(extension[n][k], extension[root][k]);
            }
        }
        if !changed {
            break;
        }
    }

    let mut least: BTreeMap<usize, usize> = BTreeMap::new();
    for n in 0..universe.len() {
        least.entry(uf.find(n)).or_insert(n);
    }
    let name_of = |uf: &mut UnionFind, n: usize| {
        let (cell, w) = &universe[least[&uf.find(n)]];
        class_name(cell, w)
    };

    let initial = name_of(&mut uf, index[&(x.initial().clone(), FaceWord::empty())]);
    let mut raw = RawPhda {
        alphabet: x.alphabet().iter().copied().collect(),
        cells: Vec::new(),
        initial,
        faces: Vec::new(),
        saturate: false,
    };
    let mut representative = BTreeMap::new();
    for &rep in least.values() {
        let (cell, w) = &universe[rep];
        let id = class_name(cell, w);
        let label = delete_letters(w, x.label(cell)).expect("fitting word");
        raw.cells.push(Cell {
            id: id.clone(),
            dim: label.len(),
            label,
        });
        for v in FaceWord::all_fitting(remaining(rep)) {
            if v.is_empty() {
                continue;
            }
            let target = index[&(cell.clone(), w.star(&v))];
            raw.faces.push(FaceEntry {
                from: id.clone(),
                word: v,
                to: name_of(&mut uf, target),
            });
        }
        representative.insert(id, (cell.clone(), w.clone()));
    }
    let class_of: BTreeMap<(CellId, FaceWord), CellId> = (0..universe.len())
        .map(|n| (universe[n].clone(), name_of(&mut uf, n)))
        .collect();
    let hda = Arc::new(Phda::from_raw_unchecked(raw));
    let unit = Morphism {
        source: x.clone(),
        target: hda.clone(),
        map: x
            .cell_ids()
            .map(|c| (c.clone(), class_of[&(c.clone(), FaceWord::empty())].clone()))
            .collect(),
    };
    Completion {
        source: x.clone(),
        hda,
        unit,
        class_of,
        representative,
    }
}

fn single_faces(dim: usize) -> Vec<Face> {
    (1..=dim)
        .flat_map(|i| Direction::BOTH.map(|d| Face::new(i, d)))
        .collect()
}

/// `μ : χX → X`, `⟪w, x⟫ ↦` the face `w` of `x`. Defined when `X` is total.
pub fn counit(c: &Completion) -> Result<Morphism, CompletionError> {
    if !c.source.is_hda() {
        return Err(CompletionError::NotTotalHDA);
    }
    let map = c
        .representative
        .iter()
        .map(|(class, (cell, w))| {
            let face = c.source.face_of(cell, w).ok_or(CompletionError::NotTotalHDA)?;
            Ok((class.clone(), face.clone()))
        })
        .collect::<Result<_, _>>()?;
    Ok(Morphism {
        source: c.hda.clone(),
        target: c.source.clone(),
        map,
    })
}

/// `χ(f) : χX → χY`, `⟪w, x⟫ ↦ ⟪w, f(x)⟫`.
pub fn apply_chi(
    f: &Morphism,
    dom: &Completion,
    cod: &Completion,
) -> Result<Morphism, CompletionError> {
    if dom.source != f.source || cod.source != f.target {
        return Err(CompletionError::Mismatch);
    }
    let map = dom
        .representative
        .iter()
        .map(|(class, (cell, w))| (class.clone(), cod.class(f.apply(cell), w).clone()))
        .collect();
    Ok(Morphism {
        source: dom.hda.clone(),
        target: cod.hda.clone(),
        map,
    })
}

/// Checks `∂_i^a ∂_j^b = ∂_j^b ∂_{i+1}^a` for `j ≤ i` wherever the sides
/// apply, returning the failures.
pub fn local_equation_failures(x: &Phda) -> Vec<String> {
    let mut out = Vec::new();
    for cell in x.cells() {
        if cell.dim < 2 {
            continue;
        }
        for i in 1..cell.dim {
            for j in 1..=i {
                for a in Direction::BOTH {
                    for b in Direction::BOTH {
                        let single = |f: Face| FaceWord::single(f);
                        let lhs = x
                            .face_of(&cell.id, &single(Face::new(j, b)))
                            .and_then(|y| x.face_of(y, &single(Face::new(i, a))));
                        let rhs = x
                            .face_of(&cell.id, &single(Face::new(i + 1, a)))
                            .and_then(|y| x.face_of(y, &single(Face::new(j, b))));
                        if lhs.is_none() || lhs != rhs {
                            out.push(format!("{} i={i} j={j} a={a} b={b}", cell.id));
                        }
                    }
                }
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use crate::morphism::{compose, validate_morphism};

    #[test]
    fn split_segment_completion() {
        let x = Arc::new(fixtures::split_segment());
        let c = complete(&x);
        let ids: Vec<&str> = c.hda.cell_ids().map(|c| c.as_str()).collect();
        assert_eq!(ids, vec!["e#[(1,0)]", "e#[(1,1)]", "e#[]", "v0#[]", "v1#[]"]);
        assert!(c.hda.is_hda());
        assert_eq!(validate_morphism(&c.unit), vec![]);
    }

    #[test]
    fn missing_cube_vertices_merge() {
        let x = Arc::new(fixtures::missing_cube());
        let c = complete(&x);
        let cube = CellId::new("***");
        let a = FaceWord::from_pairs(&[(1, 1)]).unwrap();
        let p = FaceWord::from_pairs(&[(2, 0)]).unwrap();
        let b = FaceWord::from_pairs(&[(2, 1)]).unwrap();
        let first = a.star(&p).star(&a);
        let second = b.star(&p).star(&a);
        assert_eq!(c.class(&cube, &first), c.class(&cube, &second));
        assert!(c.hda.is_hda());
        assert_eq!(c.hda.validate(), vec![]);
        assert!(local_equation_failures(&c.hda).is_empty());
    }

    #[test]
    fn total_hda_is_fixed() {
        let x = Arc::new(fixtures::square_full());
        let c = complete(&x);
        let mu = counit(&c).unwrap();
        assert_eq!(validate_morphism(&mu), vec![]);
        assert!(mu.is_bijective());
        assert!(compose(&mu, &c.unit).unwrap().is_identity());
        assert_eq!(counit(&complete(&Arc::new(fixtures::split_segment()))).err(), Some(CompletionError::NotTotalHDA));
        let star = complete(&Arc::new(fixtures::star()));
        assert_eq!(star.hda.len(), 1);
    }

    #[test]
    fn naturality_and_triangle() {
        for (name, x) in fixtures::all() {
            let x = Arc::new(x);
            let cx = complete(&x);
            assert_eq!(cx.hda.validate(), vec![], "{name}");
            let id = apply_chi(&Morphism::identity(&x), &cx, &cx).unwrap();
            assert!(id.is_identity(), "{name}");
            let ccx = complete(&cx.hda);
            let chi_eta = apply_chi(&cx.unit, &cx, &ccx).unwrap();
            let mu = counit(&ccx).unwrap();
            assert!(compose(&mu, &chi_eta).unwrap().is_identity(), "{name}");
        }
        for f in fixtures::morphism_corpus() {
            let (cx, cy) = (complete(&f.source), complete(&f.target));
            let chi_f = apply_chi(&f, &cx, &cy).unwrap();
            assert_eq!(validate_morphism(&chi_f), vec![]);
            assert_eq!(
                compose(&chi_f, &cx.unit).unwrap(),
                compose(&cy.unit, &f).unwrap()
            );
        }
    }
}
