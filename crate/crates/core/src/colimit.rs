//! Colimits of finite diagrams of path shapes.
//!
//! Positions `(u, k)` of all spines are glued along the arrows and at the
//! root, then classes reached from a common class by runs of finishes with
//! equal composite are identified until nothing changes.

use std::collections::{BTreeMap, BTreeSet};
use std::sync::Arc;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::cube::{Direction, Face, FaceWord};
use crate::model::{Cell, CellId, FaceEntry, Phda, RawPhda};
use crate::morphism::{validate_morphism, Morphism};
use crate::paths::{path_shape, Spine};
use crate::union_find::UnionFind;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ColimitError {
    #[error("invalid diagram: {0}")]
    InvalidDiagram(String),
    #[error("not a cocone: {0}")]
    NotACocone(String),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Arrow {
    pub name: String,
    pub src: String,
    pub dst: String,
    pub map: BTreeMap<usize, usize>,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Diagram {
    pub objects: BTreeMap<String, Spine>,
    #[serde(default)]
    pub arrows: Vec<Arrow>,
}

impl Diagram {
    /// Letters used by the spines.
    pub fn alphabet(&self) -> BTreeSet<char> {
        self.objects
            .values()
            .flat_map(|s| s.entries.iter().flat_map(|(_, w)| w.letters().to_vec()))
            .collect()
    }

    /// The path shape of every object.
    pub fn shapes(&self) -> Result<BTreeMap<String, Arc<Phda>>, ColimitError> {
        let alphabet = self.alphabet();
        self.objects
            .iter()
            .map(|(u, s)| {
                path_shape(s, &alphabet)
                    .map(|p| (u.clone(), Arc::new(p)))
                    .map_err(|e| ColimitError::InvalidDiagram(format!("object {u}: {e}")))
            })
            .collect()
    }

    /// The morphism between path shapes named by an arrow.
    pub fn arrow_morphism(
        &self,
        arrow: &Arrow,
        shapes: &BTreeMap<String, Arc<Phda>>,
    ) -> Result<Morphism, ColimitError> {
        let invalid = |m: String| ColimitError::InvalidDiagram(format!("arrow {}: {m}", arrow.name));
        let (Some(src), Some(dst)) = (shapes.get(&arrow.src), shapes.get(&arrow.dst)) else {
            return Err(invalid("unknown endpoint".into()));
        };
        let f = Morphism {
            source: src.clone(),
            target: dst.clone(),
            map: arrow
                .map
                .iter()
                .map(|(k, l)| (CellId::new(k.to_string()), CellId::new(l.to_string())))
                .collect(),
        };
        let violations = validate_morphism(&f);
        if violations.is_empty() {
            Ok(f)
        } else {
            Err(invalid(
                violations.iter().map(|v| v.to_string()).collect::<Vec<_>>().join("; "),
            ))
        }
    }

    pub fn validate(&self) -> Result<BTreeMap<String, Arc<Phda>>, ColimitError> {
        let shapes = self.shapes()?;
        for arrow in &self.arrows {
            self.arrow_morphism(arrow, &shapes)?;
        }
        Ok(shapes)
    }
}

#[derive(Debug, Clone)]
pub struct Colimit {
    pub apex: Arc<Phda>,
    pub injections: BTreeMap<String, Morphism>,
    pub shapes: BTreeMap<String, Arc<Phda>>,
}

struct Positions {
    objects: Vec<(String, Spine)>,
    offset: Vec<usize>,
    total: usize,
}

impl Positions {
    fn new(d: &Diagram) -> Self {
        let objects: Vec<(String, Spine)> =
            d.objects.iter().map(|(u, s)| (u.clone(), s.clone())).collect();
        let mut offset = Vec::with_capacity(objects.len());
        let mut total = 1;
        for (_, s) in &objects {
            offset.push(total);
            total += s.entries.len();
        }
        Positions { objects, offset, total }
    }

    fn index(&self, obj: usize, k: usize) -> usize {
        self.offset[obj] + k
    }

    fn object_index(&self, u: &str) -> usize {
        self.objects.iter().position(|(v, _)| v == u).expect("known object")
    }
}

pub fn colimit(d: &Diagram) -> Result<Colimit, ColimitError> {
    let shapes = d.validate()?;
    let pos = Positions::new(d);
    let mut uf = UnionFind::new(pos.total);
    for (o, _) in pos.objects.iter().enumerate() {
        uf.union(0, pos.index(o, 0));
    }
    for arrow in &d.arrows {
        let (u, v) = (pos.object_index(&arrow.src), pos.object_index(&arrow.dst));
        for (k, l) in &arrow.map {
            uf.union(pos.index(u, *k), pos.index(v, *l));
        }
    }

    loop {
        let mut edges: BTreeMap<usize, BTreeSet<(Face, usize)>> = BTreeMap::new();
        for (o, (_, s)) in pos.objects.iter().enumerate() {
            for (k, step) in s.steps.iter().enumerate() {
                if step.dir == Direction::Future {
                    let from = uf.find(pos.index(o, k));
                    let to = uf.find(pos.index(o, k + 1));
                    edges.entry(from).or_default().insert((*step, to));
                }
            }
        }
        let mut changed = false;
        let starts: Vec<usize> = edges.keys().copied().collect();
        for start in starts {
            let mut states: BTreeSet<(usize, FaceWord)> =
                BTreeSet::from([(uf.find(start), FaceWord::empty())]);
            while !states.is_empty() {
                let mut next = BTreeSet::new();
                for (class, word) in &states {
                    for (step, to) in edges.get(class).into_iter().flatten() {
                        next.insert((*to, word.then(*step)));
                    }
                }
                let mut by_word: BTreeMap<&FaceWord, Vec<usize>> = BTreeMap::new();
                for (class, word) in &next {
                    by_word.entry(word).or_default().push(*class);
                }
                for group in by_word.values() {
                    for pair in group.windows(2) {
                        changed |= uf.union(pair[0], pair[1]);
                    }
                }
                states = next;
            }
        }
        if !changed {
            break;
        }
    }

    let mut names: BTreeMap<usize, (String, usize)> = BTreeMap::new();
    for (o, (u, s)) in pos.objects.iter().enumerate() {
        for k in 0..s.entries.len() {
            let root = uf.find(pos.index(o, k));
            let cand = (u.clone(), k);
            names
                .entry(root)
                .and_modify(|cur| {
                    if cand < *cur {
                        *cur = cand.clone();
                    }
                })
                .or_insert(cand);
        }
    }
    let name = |uf: &mut UnionFind, n: usize| match names.get(&uf.find(n)) {
        Some((u, k)) => CellId::new(format!("{u}:{k}")),
        None => CellId::new("ε"),
    };

    let alphabet = d.alphabet();
    let mut raw = RawPhda {
        alphabet: alphabet.iter().copied().collect(),
        cells: Vec::new(),
        initial: name(&mut uf, 0),
        faces: Vec::new(),
        saturate: true,
    };
    let mut seen = BTreeSet::new();
    if pos.objects.is_empty() {
        raw.cells.push(Cell {
            id: raw.initial.clone(),
            dim: 0,
            label: Default::default(),
        });
    }
    for (o, (_, s)) in pos.objects.iter().enumerate() {
        for (k, (dim, label)) in s.entries.iter().enumerate() {
            let id = name(&mut uf, pos.index(o, k));
            if seen.insert(id.clone()) {
                raw.cells.push(Cell {
                    id,
                    dim: *dim,
                    label: label.clone(),
                });
            }
        }
        for (k, step) in s.steps.iter().enumerate() {
            let (from, to) = match step.dir {
                Direction::Past => (k + 1, k),
                Direction::Future => (k, k + 1),
            };
            raw.faces.push(FaceEntry {
                from: name(&mut uf, pos.index(o, from)),
                word: FaceWord::single(*step),
                to: name(&mut uf, pos.index(o, to)),
            });
        }
    }
    raw.faces.sort();
    raw.faces.dedup();
    let apex = Arc::new(Phda::new(raw).map_err(|e| ColimitError::InvalidDiagram(e.to_string()))?);

    let mut injections = BTreeMap::new();
    for (o, (u, s)) in pos.objects.iter().enumerate() {
        let map = (0..s.entries.len())
            .map(|k| (CellId::new(k.to_string()), name(&mut uf, pos.index(o, k))))
            .collect();
        injections.insert(
            u.clone(),
            Morphism {
                source: shapes[u].clone(),
                target: apex.clone(),
                map,
            },
        );
    }
    Ok(Colimit {
        apex,
        injections,
        shapes,
    })
}

/// Whether `legs` form a cocone over `d`: every leg validates, all share a
/// target, and every arrow triangle commutes.
pub fn check_cocone(d: &Diagram, legs: &BTreeMap<String, Morphism>) -> bool {
    cocone_failure(d, legs).is_none()
}

fn cocone_failure(d: &Diagram, legs: &BTreeMap<String, Morphism>) -> Option<String> {
    let mut apex: Option<&Arc<Phda>> = None;
    for u in d.objects.keys() {
        let Some(leg) = legs.get(u) else {
            return Some(format!("no leg for {u}"));
        };
        if !validate_morphism(leg).is_empty() {
            return Some(format!("leg {u} is not a morphism"));
        }
        match apex {
            None => apex = Some(&leg.target),
            Some(a) if a != &leg.target => return Some(format!("leg {u} has another target")),
            Some(_) => {}
        }
    }
    for arrow in &d.arrows {
        let (ku, kv) = (&legs[&arrow.src], &legs[&arrow.dst]);
        for (k, l) in &arrow.map {
            let (a, b) = (CellId::new(k.to_string()), CellId::new(l.to_string()));
            if kv.map.get(&b) != ku.map.get(&a) {
                return Some(format!("triangle of {} fails at {k}", arrow.name));
            }
        }
    }
    None
}

/// The unique morphism `Φ` out of the colimit with `Φ ∘ ι_u = κ_u`.
pub fn mediate(
    d: &Diagram,
    colim: &Colimit,
    legs: &BTreeMap<String, Morphism>,
) -> Result<Morphism, ColimitError> {
    if let Some(why) = cocone_failure(d, legs) {
        return Err(ColimitError::NotACocone(why));
    }
    let target = match legs.values().next() {
        Some(leg) => leg.target.clone(),
        None => return Err(ColimitError::NotACocone("empty diagram".into())),
    };
    let mut map: BTreeMap<CellId, CellId> = BTreeMap::new();
    for (u, inj) in &colim.injections {
        for (k, class) in &inj.map {
            let image = legs[u].apply(k).clone();
            if let Some(prev) = map.insert(class.clone(), image.clone()) {
                if prev != image {
                    return Err(ColimitError::NotACocone(format!(
                        "{class} would map to both {prev} and {image}"
                    )));
                }
            }
        }
    }
    let phi = Morphism {
        source: colim.apex.clone(),
        target,
        map,
    };
    let violations = validate_morphism(&phi);
    if violations.is_empty() {
        Ok(phi)
    } else {
        Err(ColimitError::NotACocone(
            violations.iter().map(|v| v.to_string()).collect::<Vec<_>>().join("; "),
        ))
    }
}
