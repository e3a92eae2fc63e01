//! Index algebra of the cube category.
//!
//! A [`FaceWord`] names a composite face `(i1 < ... < ik ; a1, ..., ak)`: the
//! indices are positions in the *source* cube and the directions are the bits
//! fixed there. Composition of faces is the `star` product, and
//! [`eval_coface`] gives the literal coface (bit insertion) semantics used to
//! check it.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CubeError {
    #[error("index {index} out of range for a word of length {len}")]
    IndexOutOfRange { index: usize, len: usize },
    #[error("face indices must be positive and strictly increasing, got {0:?}")]
    NotCanonical(Vec<(usize, u8)>),
    #[error("direction must be 0 or 1, got {0}")]
    BadDirection(u8),
    #[error("cannot parse face word `{0}`")]
    Parse(String),
}

/// Past (0) or future (1) face.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Direction {
    Past,
    Future,
}

impl Direction {
    pub const BOTH: [Direction; 2] = [Direction::Past, Direction::Future];

    pub fn bit(self) -> u8 {
        match self {
            Direction::Past => 0,
            Direction::Future => 1,
        }
    }

    pub fn from_bit(bit: u8) -> Result<Self, CubeError> {
        match bit {
            0 => Ok(Direction::Past),
            1 => Ok(Direction::Future),
            other => Err(CubeError::BadDirection(other)),
        }
    }
}

impl fmt::Display for Direction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.bit())
    }
}

/// A single face `(i; a)`. Also used as the step label of a path.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Face {
    pub index: usize,
    pub dir: Direction,
}

impl Face {
    pub fn new(index: usize, dir: Direction) -> Self {
        assert!(index >= 1, "face indices start at 1");
        Face { index, dir }
    }

    pub fn past(index: usize) -> Self {
        Face::new(index, Direction::Past)
    }

    pub fn future(index: usize) -> Self {
        Face::new(index, Direction::Future)
    }
}

impl fmt::Display for Face {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{})", self.index, self.dir)
    }
}

impl Serialize for Face {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        (self.index, self.dir.bit()).serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for Face {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let (index, bit) = <(usize, u8)>::deserialize(deserializer)?;
        if index == 0 {
            return Err(serde::de::Error::custom("face indices start at 1"));
        }
        let dir = Direction::from_bit(bit).map_err(serde::de::Error::custom)?;
        Ok(Face { index, dir })
    }
}

/// A canonical composite face word. Indices are strictly increasing; the
/// empty word is the identity.
#[derive(Debug, Clone, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct FaceWord(Vec<Face>);

impl FaceWord {
    pub fn empty() -> Self {
        FaceWord(Vec::new())
    }

    pub fn single(face: Face) -> Self {
        FaceWord(vec![face])
    }

    pub fn new(faces: Vec<Face>) -> Result<Self, CubeError> {
        let canonical = faces.first().is_none_or(|f| f.index >= 1)
            && faces.windows(2).all(|w| w[0].index < w[1].index);
        if canonical {
            Ok(FaceWord(faces))
        } else {
            Err(CubeError::NotCanonical(
                faces.iter().map(|f| (f.index, f.dir.bit())).collect(),
            ))
        }
    }

    /// Builds a word from `(index, bit)` pairs.
    pub fn from_pairs(pairs: &[(usize, u8)]) -> Result<Self, CubeError> {
        let mut faces = Vec::with_capacity(pairs.len());
        for &(index, bit) in pairs {
            if index == 0 {
                return Err(CubeError::NotCanonical(pairs.to_vec()));
            }
            faces.push(Face {
                index,
                dir: Direction::from_bit(bit)?,
            });
        }
        FaceWord::new(faces)
    }

    pub fn faces(&self) -> &[Face] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Largest index, 0 for the empty word.
    pub fn max_index(&self) -> usize {
        self.0.last().map_or(0, |f| f.index)
    }

    /// Whether the word can be applied to a cell of dimension `dim`.
    pub fn fits(&self, dim: usize) -> bool {
        self.max_index() <= dim
    }

    /// `self ⋆ rhs`: the face obtained by taking `self` first and then `rhs`
    /// on the result. The right operand's indices are shifted past every
    /// left entry already emitted.
    pub fn star(&self, rhs: &FaceWord) -> FaceWord {
        let (lhs, rhs) = (&self.0, &rhs.0);
        let mut out = Vec::with_capacity(lhs.len() + rhs.len());
        let (mut p, mut q) = (0, 0);
        while p < lhs.len() && q < rhs.len() {
            let shifted = rhs[q].index + p;
            if lhs[p].index <= shifted {
                out.push(lhs[p]);
                p += 1;
            } else {
                out.push(Face {
                    index: shifted,
                    dir: rhs[q].dir,
                });
                q += 1;
            }
        }
        out.extend_from_slice(&lhs[p..]);
        out.extend(rhs[q..].iter().map(|f| Face {
            index: f.index + p,
            dir: f.dir,
        }));
        FaceWord(out)
    }

    /// `self ⋆ (face)`.
    pub fn then(&self, face: Face) -> FaceWord {
        self.star(&FaceWord::single(face))
    }

    /// Whether every entry of `self` also occurs in `other`. A left factor of
    /// a star product is always contained in the product.
    pub fn is_subword_of(&self, other: &FaceWord) -> bool {
        let mut it = other.0.iter();
        self.0.iter().all(|f| it.any(|g| g == f))
    }

    /// Folds a sequence of single faces with `star`, left to right.
    pub fn compose_steps<'a>(steps: impl IntoIterator<Item = &'a Face>) -> FaceWord {
        steps
            .into_iter()
            .fold(FaceWord::empty(), |acc, face| acc.then(*face))
    }

    /// Every canonical word applicable to a cell of dimension `dim`,
    /// including the empty word. There are `3^dim` of them.
    pub fn all_fitting(dim: usize) -> Vec<FaceWord> {
        let mut out = vec![FaceWord::empty()];
        for index in 1..=dim {
            let mut next = Vec::with_capacity(out.len() * 3);
            for word in &out {
                next.push(word.clone());
                for dir in Direction::BOTH {
                    let mut faces = word.0.clone();
                    faces.push(Face { index, dir });
                    next.push(FaceWord(faces));
                }
            }
            out = next;
        }
        out.sort();
        out
    }
}

impl fmt::Display for FaceWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for (n, face) in self.0.iter().enumerate() {
            if n > 0 {
                write!(f, ",")?;
            }
            write!(f, "{face}")?;
        }
        write!(f, "]")
    }
}

impl FromStr for FaceWord {
    type Err = CubeError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bad = || CubeError::Parse(s.to_string());
        let inner = s
            .trim()
            .strip_prefix('[')
            .and_then(|r| r.strip_suffix(']'))
            .ok_or_else(bad)?
            .trim();
        if inner.is_empty() {
            return Ok(FaceWord::empty());
        }
        let mut pairs = Vec::new();
        for chunk in inner.split(')') {
            let chunk = chunk.trim().trim_start_matches(',').trim();
            if chunk.is_empty() {
                continue;
            }
            let body = chunk.strip_prefix('(').ok_or_else(bad)?;
            let (i, a) = body.split_once(',').ok_or_else(bad)?;
            let i: usize = i.trim().parse().map_err(|_| bad())?;
            let a: u8 = a.trim().parse().map_err(|_| bad())?;
            pairs.push((i, a));
        }
        FaceWord::from_pairs(&pairs)
    }
}

impl Serialize for FaceWord {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        let pairs: Vec<(usize, u8)> = self.0.iter().map(|f| (f.index, f.dir.bit())).collect();
        pairs.serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for FaceWord {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let pairs = Vec::<(usize, u8)>::deserialize(deserializer)?;
        FaceWord::from_pairs(&pairs).map_err(serde::de::Error::custom)
    }
}

/// A word over the alphabet; the label of an n-cell has n letters.
#[derive(Debug, Clone, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct LabelWord(Vec<char>);

impl LabelWord {
    pub fn new(letters: Vec<char>) -> Self {
        LabelWord(letters)
    }

    pub fn empty() -> Self {
        LabelWord(Vec::new())
    }

    pub fn letters(&self) -> &[char] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Removes the letter at 1-based position `index`.
    pub fn delete(&self, index: usize) -> Result<LabelWord, CubeError> {
        if index == 0 || index > self.0.len() {
            return Err(CubeError::IndexOutOfRange {
                index,
                len: self.0.len(),
            });
        }
        let mut letters = self.0.clone();
        letters.remove(index - 1);
        Ok(LabelWord(letters))
    }
}

impl From<&str> for LabelWord {
    fn from(s: &str) -> Self {
        LabelWord(s.chars().collect())
    }
}

impl fmt::Display for LabelWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return write!(f, "ε");
        }
        for c in &self.0 {
            write!(f, "{c}")?;
        }
        Ok(())
    }
}

impl Serialize for LabelWord {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.serialize_str(&self.0.iter().collect::<String>())
    }
}

impl<'de> Deserialize<'de> for LabelWord {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        Ok(LabelWord::from(s.as_str()))
    }
}

/// Label of the face `w` of a cell labelled `label`: the positions named by
/// `w` are deleted, highest index first.
pub fn delete_letters(w: &FaceWord, label: &LabelWord) -> Result<LabelWord, CubeError> {
    w.faces()
        .iter()
        .rev()
        .try_fold(label.clone(), |acc, face| acc.delete(face.index))
}

/// The coface map of `w` on a vertex of the smaller cube: bits are inserted
/// so that position `i_k` of the result carries `a_k`.
pub fn eval_coface(w: &FaceWord, bits: &[u8]) -> Result<Vec<u8>, CubeError> {
    let mut out = bits.to_vec();
    for face in w.faces() {
        if face.index > out.len() + 1 {
            return Err(CubeError::IndexOutOfRange {
                index: face.index,
                len: out.len(),
            });
        }
        out.insert(face.index - 1, face.dir.bit());
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn w(pairs: &[(usize, u8)]) -> FaceWord {
        FaceWord::from_pairs(pairs).unwrap()
    }

    #[test]
    fn star_examples() {
        assert_eq!(FaceWord::empty().star(&w(&[(1, 0), (3, 1)])), w(&[(1, 0), (3, 1)]));
        assert_eq!(w(&[(1, 0)]).star(&w(&[(1, 1)])), w(&[(1, 0), (2, 1)]));
        assert_eq!(w(&[(2, 1)]).star(&w(&[(1, 0)])), w(&[(1, 0), (2, 1)]));
        assert_eq!(w(&[(1, 1), (3, 0)]).star(&FaceWord::empty()), w(&[(1, 1), (3, 0)]));
    }

    #[test]
    fn local_equation_identity() {
        // (j;b) ⋆ (i;a) = (j < i+1; b, a) = (i+1;a) ⋆ (j;b) for j <= i
        for i in 1..=4 {
            for j in 1..=i {
                for a in [0, 1] {
                    for b in [0, 1] {
                        let lhs = w(&[(j, b)]).star(&w(&[(i, a)]));
                        let rhs = w(&[(i + 1, a)]).star(&w(&[(j, b)]));
                        assert_eq!(lhs, w(&[(j, b), (i + 1, a)]));
                        assert_eq!(lhs, rhs);
                    }
                }
            }
        }
    }

    #[test]
    fn delete_letters_examples() {
        let ab = LabelWord::from("ab");
        assert_eq!(delete_letters(&w(&[(1, 0)]), &ab).unwrap(), LabelWord::from("b"));
        assert_eq!(delete_letters(&FaceWord::empty(), &ab).unwrap(), ab);
        assert_eq!(delete_letters(&w(&[(1, 0), (2, 1)]), &ab).unwrap(), LabelWord::empty());
        assert_eq!(
            delete_letters(&w(&[(3, 0)]), &ab),
            Err(CubeError::IndexOutOfRange { index: 3, len: 2 })
        );
    }

    #[test]
    fn eval_coface_examples() {
        assert_eq!(eval_coface(&w(&[(1, 0)]), &[1]).unwrap(), vec![0, 1]);
        assert_eq!(eval_coface(&FaceWord::empty(), &[0, 1]).unwrap(), vec![0, 1]);
        assert_eq!(eval_coface(&w(&[(1, 0), (2, 1)]), &[]).unwrap(), vec![0, 1]);
        assert!(matches!(
            eval_coface(&w(&[(3, 0)]), &[]),
            Err(CubeError::IndexOutOfRange { .. })
        ));
    }

    #[test]
    fn rejects_non_canonical() {
        assert!(FaceWord::from_pairs(&[(2, 0), (1, 0)]).is_err());
        assert!(FaceWord::from_pairs(&[(1, 0), (1, 1)]).is_err());
        assert!(FaceWord::from_pairs(&[(0, 0)]).is_err());
        assert!(FaceWord::from_pairs(&[(1, 2)]).is_err());
    }

    #[test]
    fn text_form_round_trips() {
        let word = w(&[(1, 0), (3, 1)]);
        assert_eq!(word.to_string(), "[(1,0),(3,1)]");
        assert_eq!("[(1,0),(3,1)]".parse::<FaceWord>().unwrap(), word);
        assert_eq!(FaceWord::empty().to_string(), "[]");
        assert_eq!("[]".parse::<FaceWord>().unwrap(), FaceWord::empty());
        assert!("[(2,0),(1,1)]".parse::<FaceWord>().is_err());
    }

    #[test]
    fn all_fitting_counts() {
        assert_eq!(FaceWord::all_fitting(0).len(), 1);
        assert_eq!(FaceWord::all_fitting(2).len(), 9);
        assert_eq!(FaceWord::all_fitting(3).len(), 27);
        assert!(FaceWord::all_fitting(3).iter().all(|x| x.fits(3)));
    }

    fn arb_word(max_index: usize, max_len: usize) -> impl Strategy<Value = FaceWord> {
        proptest::collection::btree_map(1..=max_index, 0u8..=1, 0..=max_len)
            .prop_map(|m| FaceWord::from_pairs(&m.into_iter().collect::<Vec<_>>()).unwrap())
    }

    proptest! {
        #[test]
        fn star_is_canonical_and_additive(a in arb_word(5, 3), b in arb_word(5, 3)) {
            let c = a.star(&b);
            prop_assert_eq!(c.len(), a.len() + b.len());
            prop_assert!(FaceWord::new(c.faces().to_vec()).is_ok());
            prop_assert!(a.is_subword_of(&c));
        }

        #[test]
        fn star_is_associative(a in arb_word(4, 3), b in arb_word(4, 3), c in arb_word(4, 3)) {
            prop_assert_eq!(a.star(&b).star(&c), a.star(&b.star(&c)));
        }

        #[test]
        fn label_deletion_is_compatible(a in arb_word(3, 2), b in arb_word(3, 2)) {
            let label = LabelWord::from("abcdefgh");
            let composite = a.star(&b);
            prop_assume!(composite.fits(label.len()) && a.fits(label.len()));
            let stepwise = delete_letters(&a, &label).and_then(|l| delete_letters(&b, &l));
            if let Ok(stepwise) = stepwise {
                prop_assert_eq!(delete_letters(&composite, &label).unwrap(), stepwise);
            }
        }
    }
}
