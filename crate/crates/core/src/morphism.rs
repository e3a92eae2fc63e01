//! Morphisms of partial HDA: total, label preserving cell maps under which
//! every defined face stays defined.

use std::collections::{BTreeMap, BTreeSet};
use std::sync::Arc;

use serde::Serialize;
use thiserror::Error;

use crate::cube::FaceWord;
use crate::model::{CellId, Phda};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum MorphismViolationKind {
    NotTotal,
    LabelViolation,
    InitialViolation,
    FaceNotPreserved,
}

#[derive(Debug, Clone, PartialEq, Eq, Error, Serialize)]
#[serde(tag = "kind")]
pub enum MorphismViolation {
    #[error("cell {cell} is {detail}")]
    NotTotal { cell: CellId, detail: String },
    #[error("{cell} and its image {image} differ in dimension or label")]
    LabelViolation { cell: CellId, image: CellId },
    #[error("the initial state maps to {image}, not to the target's initial state")]
    InitialViolation { image: CellId },
    #[error("{cell} {word} = {face}, but {image} {word} is {found}")]
    FaceNotPreserved {
        cell: CellId,
        word: FaceWord,
        face: CellId,
        image: CellId,
        found: String,
    },
}

impl MorphismViolation {
    pub fn kind(&self) -> MorphismViolationKind {
        match self {
            MorphismViolation::NotTotal { .. } => MorphismViolationKind::NotTotal,
            MorphismViolation::LabelViolation { .. } => MorphismViolationKind::LabelViolation,
            MorphismViolation::InitialViolation { .. } => MorphismViolationKind::InitialViolation,
            MorphismViolation::FaceNotPreserved { .. } => MorphismViolationKind::FaceNotPreserved,
        }
    }
}

pub fn violation_kinds(report: &[MorphismViolation]) -> BTreeSet<MorphismViolationKind> {
    report.iter().map(MorphismViolation::kind).collect()
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum MorphismError {
    #[error("invalid morphism: {}", .0.iter().map(|v| v.to_string()).collect::<Vec<_>>().join("; "))]
    Invalid(Vec<MorphismViolation>),
    #[error("cannot compose: the codomain of the right factor is not the domain of the left one")]
    DomainMismatch,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Morphism {
    pub source: Arc<Phda>,
    pub target: Arc<Phda>,
    pub map: BTreeMap<CellId, CellId>,
}

/// Checks totality, labels, the initial state and face preservation.
pub fn validate_morphism(f: &Morphism) -> Vec<MorphismViolation> {
    let mut out = Vec::new();
    for cell in f.source.cells() {
        match f.map.get(&cell.id) {
            None => out.push(MorphismViolation::NotTotal {
                cell: cell.id.clone(),
                detail: "not mapped".into(),
            }),
            Some(image) => match f.target.cell(image) {
                None => out.push(MorphismViolation::NotTotal {
                    cell: cell.id.clone(),
                    detail: format!("mapped to the unknown cell {image}"),
                }),
                Some(t) if t.dim != cell.dim || t.label != cell.label => {
                    out.push(MorphismViolation::LabelViolation {
                        cell: cell.id.clone(),
                        image: image.clone(),
                    })
                }
                Some(_) => {}
            },
        }
    }
    for key in f.map.keys() {
        if !f.source.contains(key) {
            out.push(MorphismViolation::NotTotal {
                cell: key.clone(),
                detail: "not a cell of the source".into(),
            });
        }
    }
    if let Some(image) = f.map.get(f.source.initial()) {
        if image != f.target.initial() {
            out.push(MorphismViolation::InitialViolation {
                image: image.clone(),
            });
        }
    }
    for entry in f.source.entries() {
        let (Some(image), Some(face_image)) = (f.map.get(&entry.from), f.map.get(&entry.to)) else {
            continue;
        };
        if !f.target.contains(image) {
            continue;
        }
        let found = f.target.face_of(image, &entry.word);
        if found != Some(face_image) {
            out.push(MorphismViolation::FaceNotPreserved {
                cell: entry.from.clone(),
                word: entry.word.clone(),
                face: entry.to.clone(),
                image: image.clone(),
                found: found.map_or("undefined".into(), |c| c.to_string()),
            });
        }
    }
    out
}

impl Morphism {
    pub fn new(
        source: Arc<Phda>,
        target: Arc<Phda>,
        map: BTreeMap<CellId, CellId>,
    ) -> Result<Self, MorphismError> {
        let f = Morphism { source, target, map };
        let violations = validate_morphism(&f);
        if violations.is_empty() {
            Ok(f)
        } else {
            Err(MorphismError::Invalid(violations))
        }
    }

    /// Builds a morphism from `(source cell, target cell)` name pairs.
    pub fn from_pairs(
        source: &Arc<Phda>,
        target: &Arc<Phda>,
        pairs: &[(&str, &str)],
    ) -> Result<Self, MorphismError> {
        let map = pairs
            .iter()
            .map(|&(a, b)| (CellId::new(a), CellId::new(b)))
            .collect();
        Morphism::new(source.clone(), target.clone(), map)
    }

    pub fn identity(x: &Arc<Phda>) -> Self {
        Morphism {
            source: x.clone(),
            target: x.clone(),
            map: x.cell_ids().map(|id| (id.clone(), id.clone())).collect(),
        }
    }

    /// Image of a source cell.
    pub fn apply(&self, cell: &CellId) -> &CellId {
        &self.map[cell]
    }

    pub fn is_identity(&self) -> bool {
        same_model(&self.source, &self.target) && self.map.iter().all(|(a, b)| a == b)
    }

    pub fn is_injective(&self) -> bool {
        self.map.values().collect::<BTreeSet<_>>().len() == self.map.len()
    }

    pub fn is_bijective(&self) -> bool {
        self.is_injective() && self.map.len() == self.target.len()
    }
}

pub(crate) fn same_model(a: &Arc<Phda>, b: &Arc<Phda>) -> bool {
    Arc::ptr_eq(a, b) || a == b
}

/// `f ∘ g`: first `g`, then `f`.
pub fn compose(f: &Morphism, g: &Morphism) -> Result<Morphism, MorphismError> {
    if !same_model(&g.target, &f.source) {
        return Err(MorphismError::DomainMismatch);
    }
    Ok(Morphism {
        source: g.source.clone(),
        target: f.target.clone(),
        map: g
            .map
            .iter()
            .map(|(x, y)| (x.clone(), f.map[y].clone()))
            .collect(),
    })
}

pub fn identity(x: &Arc<Phda>) -> Morphism {
    Morphism::identity(x)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    #[test]
    fn identity_validates() {
        for (name, x) in fixtures::all() {
            let x = Arc::new(x);
            assert_eq!(validate_morphism(&identity(&x)), vec![], "{name}");
        }
    }

    #[test]
    fn segment_to_split_segment_is_rejected() {
        let seg = Arc::new(fixtures::segment());
        let split = Arc::new(fixtures::split_segment());
        let f = Morphism {
            source: seg.clone(),
            target: split,
            map: seg.cell_ids().map(|c| (c.clone(), c.clone())).collect(),
        };
        assert_eq!(
            violation_kinds(&validate_morphism(&f)),
            BTreeSet::from([MorphismViolationKind::FaceNotPreserved])
        );
    }

    #[test]
    fn split_segment_to_segment_is_accepted() {
        let seg = Arc::new(fixtures::segment());
        let split = Arc::new(fixtures::split_segment());
        let f = Morphism {
            source: split.clone(),
            target: seg,
            map: split.cell_ids().map(|c| (c.clone(), c.clone())).collect(),
        };
        assert_eq!(validate_morphism(&f), vec![]);
    }

    #[test]
    fn other_violations() {
        let seg = Arc::new(fixtures::segment());
        let f = Morphism {
            source: seg.clone(),
            target: seg.clone(),
            map: [("v0", "v1"), ("v1", "v1"), ("e", "v0")]
                .iter()
                .map(|&(a, b)| (CellId::new(a), CellId::new(b)))
                .collect(),
        };
        let k = violation_kinds(&validate_morphism(&f));
        assert!(k.contains(&MorphismViolationKind::InitialViolation));
        assert!(k.contains(&MorphismViolationKind::LabelViolation));
        let partial = Morphism {
            source: seg.clone(),
            target: seg,
            map: BTreeMap::new(),
        };
        assert!(violation_kinds(&validate_morphism(&partial))
            .contains(&MorphismViolationKind::NotTotal));
    }

    #[test]
    fn composition() {
        let two = Arc::new(fixtures::two_branch());
        let one = Arc::new(fixtures::one_branch());
        let fold = fixtures::fold_two_to_one(&two, &one);
        let id = identity(&two);
        assert_eq!(compose(&fold, &id).unwrap(), fold);
        assert_eq!(compose(&identity(&one), &fold).unwrap(), fold);
        assert_eq!(compose(&fold, &fold), Err(MorphismError::DomainMismatch));
        let incl = fixtures::include_one_in_two(&one, &two);
        let back = compose(&fold, &incl).unwrap();
        assert!(back.is_identity());
        assert_eq!(validate_morphism(&back), vec![]);
    }
}
