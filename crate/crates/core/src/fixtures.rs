//! Small hand-built models, diagrams and morphisms used by the tests, the
//! acceptance suite and the example files.

use std::collections::BTreeMap;
use std::sync::Arc;

use crate::colimit::{colimit, Arrow, Colimit, Diagram};
use crate::completion::complete;
use crate::model::{Phda, RawPhda};
use crate::morphism::Morphism;
use crate::paths::{path_shape, path_to_morphism, Path, Spine};
use crate::unfolding::unfold;

fn build(raw: RawPhda) -> Phda {
    Phda::new(raw).expect("fixture is valid")
}

/// A single point.
pub fn star_raw() -> RawPhda {
    RawPhda::new("ab", "0").cell("0", "")
}

/// One `a`-labelled edge from `v0` to `v1`.
pub fn segment_raw() -> RawPhda {
    RawPhda::new("a", "v0")
        .cell("v0", "")
        .cell("v1", "")
        .cell("e", "a")
        .face("e", &[(1, 0)], "v0")
        .face("e", &[(1, 1)], "v1")
}

/// The cells of the segment with no face defined.
pub fn split_segment_raw() -> RawPhda {
    RawPhda::new("a", "v0").cell("v0", "").cell("v1", "").cell("e", "a")
}

fn square_cells(with_square: bool) -> RawPhda {
    let mut raw = RawPhda::new("ab", "v00")
        .cell("v00", "")
        .cell("v10", "")
        .cell("v01", "")
        .cell("v11", "")
        .cell("ea0", "a")
        .cell("ea1", "a")
        .cell("eb0", "b")
        .cell("eb1", "b");
    // ea_b runs along the first coordinate at second coordinate b; eb_a
    // runs along the second coordinate at first coordinate a.
    for b in 0..2u8 {
        raw = raw
            .face(&format!("ea{b}"), &[(1, 0)], &format!("v0{b}"))
            .face(&format!("ea{b}"), &[(1, 1)], &format!("v1{b}"))
            .face(&format!("eb{b}"), &[(1, 0)], &format!("v{b}0"))
            .face(&format!("eb{b}"), &[(1, 1)], &format!("v{b}1"));
    }
    if with_square {
        raw = raw.cell("s", "ab");
        for a in 0..2u8 {
            raw = raw
                .face("s", &[(1, a)], &format!("eb{a}"))
                .face("s", &[(2, a)], &format!("ea{a}"));
        }
    }
    raw.saturated()
}

/// The full square: `a` and `b` at the same time.
pub fn square_full_raw() -> RawPhda {
    square_cells(true)
}

/// The boundary of the square: `a` and `b` in either order.
pub fn hollow_square_raw() -> RawPhda {
    square_cells(false)
}

fn cube_face(pattern: &str, index: usize, bit: u8) -> String {
    let mut seen = 0;
    pattern
        .chars()
        .map(|c| {
            if c == '*' {
                seen += 1;
                if seen == index {
                    return char::from(b'0' + bit);
                }
            }
            c
        })
        .collect()
}

/// The 3-cube without the square `**0` and the edge `11*`. Cells are named
/// by their position in `{0,1,*}^3`.
pub fn missing_cube_raw() -> RawPhda {
    let mut patterns = Vec::new();
    for n in 0..27 {
        let p: String = [n % 3, (n / 3) % 3, n / 9]
            .iter()
            .map(|d| ['0', '1', '*'][*d])
            .collect();
        if p != "**0" && p != "11*" {
            patterns.push(p);
        }
    }
    patterns.sort();
    let mut raw = RawPhda::new("abc", "000");
    for p in &patterns {
        let label: String = p
            .chars()
            .zip("abc".chars())
            .filter(|(c, _)| *c == '*')
            .map(|(_, l)| l)
            .collect();
        raw = raw.cell(p, &label);
    }
    for p in &patterns {
        let dim = p.chars().filter(|c| *c == '*').count();
        for i in 1..=dim {
            for bit in 0..2u8 {
                let q = cube_face(p, i, bit);
                if patterns.contains(&q) {
                    raw = raw.face(p, &[(i, bit)], &q);
                }
            }
        }
    }
    raw.saturated()
}

/// A square `c` of which only the left edge `α`, the bottom edge `β` and the
/// right edge `γ` exist, with points `0`, `1`, `2`.
pub fn path_x_raw() -> RawPhda {
    RawPhda::new("ab", "0")
        .cell("0", "")
        .cell("1", "")
        .cell("2", "")
        .cell("α", "b")
        .cell("β", "a")
        .cell("γ", "b")
        .cell("c", "ab")
        .face("α", &[(1, 0)], "0")
        .face("β", &[(1, 0)], "0")
        .face("β", &[(1, 1)], "1")
        .face("γ", &[(1, 0)], "1")
        .face("γ", &[(1, 1)], "2")
        .face("c", &[(1, 0)], "α")
        .face("c", &[(2, 0)], "β")
        .face("c", &[(1, 1)], "γ")
        .saturated()
}

/// `0 -(1,0)-> β -(2,0)-> c -(1,1)-> γ` in [`path_x`].
pub fn path_x_pi() -> Path {
    Path::from_parts("0", &[((1, 0), "β"), ((2, 0), "c"), ((1, 1), "γ")])
}

/// One vertex with an `a`-labelled loop.
pub fn looped_raw() -> RawPhda {
    RawPhda::new("a", "v")
        .cell("v", "")
        .cell("l", "a")
        .face("l", &[(1, 0)], "v")
        .face("l", &[(1, 1)], "v")
}

/// A cycle of two `a`-edges, which covers [`looped`].
pub fn loop_cover_raw() -> RawPhda {
    RawPhda::new("a", "v0")
        .cell("v0", "")
        .cell("v1", "")
        .cell("e0", "a")
        .cell("e1", "a")
        .face("e0", &[(1, 0)], "v0")
        .face("e0", &[(1, 1)], "v1")
        .face("e1", &[(1, 0)], "v1")
        .face("e1", &[(1, 1)], "v0")
}

pub fn star() -> Phda {
    build(star_raw())
}

pub fn segment() -> Phda {
    build(segment_raw())
}

pub fn split_segment() -> Phda {
    build(split_segment_raw())
}

pub fn square_full() -> Phda {
    build(square_full_raw())
}

pub fn hollow_square() -> Phda {
    build(hollow_square_raw())
}

pub fn missing_cube() -> Phda {
    build(missing_cube_raw())
}

pub fn path_x() -> Phda {
    build(path_x_raw())
}

pub fn looped() -> Phda {
    build(looped_raw())
}

pub fn loop_cover() -> Phda {
    build(loop_cover_raw())
}

/// The covering of the loop by the two-cycle.
pub fn loop_cover_map(cover: &Arc<Phda>, base: &Arc<Phda>) -> Morphism {
    Morphism::from_pairs(cover, base, &[("v0", "v"), ("v1", "v"), ("e0", "l"), ("e1", "l")])
        .expect("covering map")
}

/// One `a` action: start, then finish.
pub fn branch_spine(letter: &str) -> Spine {
    Spine::from_parts(&["", letter, ""], &[(1, 0), (1, 1)])
}

/// Two consecutive actions `a` then `b`.
pub fn long_branch_spine() -> Spine {
    Spine::from_parts(&["", "a", "", "b", ""], &[(1, 0), (1, 1), (1, 0), (1, 1)])
}

/// Disjoint branches glued at the root.
pub fn branches(spines: &[(&str, Spine)]) -> Phda {
    let d = Diagram {
        objects: spines.iter().map(|(u, s)| (u.to_string(), s.clone())).collect(),
        arrows: vec![],
    };
    colimit(&d).expect("branch diagram").apex.as_ref().clone()
}

/// Two `a` branches from the root: points `l:0`, `l:2`, `r:2`, edges `l:1`,
/// `r:1`.
pub fn two_branch() -> Phda {
    branches(&[("l", branch_spine("a")), ("r", branch_spine("a"))])
}

/// A single `a` branch, as a path shape.
pub fn one_branch() -> Phda {
    path_shape(&branch_spine("a"), &"a".chars().collect()).expect("branch shape")
}

/// Sends both branches onto the single one.
pub fn fold_two_to_one(two: &Arc<Phda>, one: &Arc<Phda>) -> Morphism {
    Morphism::from_pairs(
        two,
        one,
        &[("l:0", "0"), ("l:1", "1"), ("l:2", "2"), ("r:1", "1"), ("r:2", "2")],
    )
    .expect("fold")
}

/// Includes the single branch as the left one.
pub fn include_one_in_two(one: &Arc<Phda>, two: &Arc<Phda>) -> Morphism {
    Morphism::from_pairs(one, two, &[("0", "l:0"), ("1", "l:1"), ("2", "l:2")]).expect("inclusion")
}

/// `A` starts `b` then `a`; `B` then finishes `a` then `b`; `C` finishes
/// `b` then `a`. Both arrows include `A` as a prefix.
pub fn pushout_diagram() -> Diagram {
    let a = Spine::from_parts(&["", "b", "ab"], &[(1, 0), (1, 0)]);
    let b = Spine::from_parts(&["", "b", "ab", "b", ""], &[(1, 0), (1, 0), (1, 1), (1, 1)]);
    let c = Spine::from_parts(&["", "b", "ab", "a", ""], &[(1, 0), (1, 0), (2, 1), (1, 1)]);
    let prefix: BTreeMap<usize, usize> = (0..3).map(|k| (k, k)).collect();
    Diagram {
        objects: BTreeMap::from([("A".into(), a), ("B".into(), b), ("C".into(), c)]),
        arrows: vec![
            Arrow {
                name: "f".into(),
                src: "A".into(),
                dst: "B".into(),
                map: prefix.clone(),
            },
            Arrow {
                name: "g".into(),
                src: "A".into(),
                dst: "C".into(),
                map: prefix,
            },
        ],
    }
}

pub fn pushout() -> Phda {
    colimit(&pushout_diagram()).expect("pushout").apex.as_ref().clone()
}

/// Through the top edge of the square.
pub fn pushout_red_path() -> Path {
    Path::from_parts(
        "A:0",
        &[((1, 0), "A:1"), ((1, 0), "A:2"), ((2, 1), "C:3"), ((1, 1), "B:4")],
    )
}

/// Through the right edge of the square.
pub fn pushout_blue_path() -> Path {
    Path::from_parts(
        "A:0",
        &[((1, 0), "A:1"), ((1, 0), "A:2"), ((1, 1), "B:3"), ((1, 1), "B:4")],
    )
}

/// The cocone from the pushout diagram into the full square.
pub fn pushout_square_cocone(c: &Colimit) -> BTreeMap<String, Morphism> {
    let sq = Arc::new(square_full());
    let base = [("0", "v00"), ("1", "eb0"), ("2", "s")];
    let mut legs = BTreeMap::new();
    for (u, extra) in [
        ("A", vec![]),
        ("B", vec![("3", "eb1"), ("4", "v11")]),
        ("C", vec![("3", "ea1"), ("4", "v11")]),
    ] {
        let pairs: Vec<(&str, &str)> = base.iter().copied().chain(extra).collect();
        legs.insert(
            u.to_string(),
            Morphism::from_pairs(&c.shapes[u], &sq, &pairs).expect("cocone leg"),
        );
    }
    legs
}

/// Every fixture model with a name.
pub fn all_raw() -> Vec<(&'static str, RawPhda)> {
    vec![
        ("star", star_raw()),
        ("segment", segment_raw()),
        ("split_segment", split_segment_raw()),
        ("square", square_full_raw()),
        ("hollow_square", hollow_square_raw()),
        ("missing_cube", missing_cube_raw()),
        ("path_x", path_x_raw()),
        ("loop", looped_raw()),
        ("loop_cover", loop_cover_raw()),
        ("two_branch", two_branch().to_raw()),
        ("one_branch", one_branch().to_raw()),
        ("pushoutD", pushout().to_raw()),
    ]
}

pub fn all() -> Vec<(&'static str, Phda)> {
    all_raw().into_iter().map(|(n, r)| (n, build(r))).collect()
}

/// Valid morphisms between fixtures, for transport and naturality checks.
pub fn morphism_corpus() -> Vec<Morphism> {
    let mut out = Vec::new();
    for (_, x) in all() {
        out.push(Morphism::identity(&Arc::new(x)));
    }
    let seg = Arc::new(segment());
    let split = Arc::new(split_segment());
    out.push(
        Morphism::from_pairs(&split, &seg, &[("v0", "v0"), ("v1", "v1"), ("e", "e")])
            .expect("split into segment"),
    );
    let hollow = Arc::new(hollow_square());
    let sq = Arc::new(square_full());
    let pairs: Vec<(String, String)> = hollow.cell_ids().map(|c| (c.to_string(), c.to_string())).collect();
    let pairs: Vec<(&str, &str)> = pairs.iter().map(|(a, b)| (a.as_str(), b.as_str())).collect();
    out.push(Morphism::from_pairs(&hollow, &sq, &pairs).expect("boundary inclusion"));
    let two = Arc::new(two_branch());
    let one = Arc::new(one_branch());
    out.push(fold_two_to_one(&two, &one));
    out.push(include_one_in_two(&one, &two));
    let lp = Arc::new(looped());
    let cover = Arc::new(loop_cover());
    out.push(loop_cover_map(&cover, &lp));
    let px = Arc::new(path_x());
    out.push(path_to_morphism(&px, &path_x_pi()).expect("path morphism"));
    for x in [&sq, &px, &lp, &cover] {
        out.push(unfold(x, 4).expect("unfolding").unf);
    }
    for x in [&split, &px, &Arc::new(missing_cube())] {
        out.push(complete(x).unit);
    }
    out
}

/// Open maps used to cross-check cofibrancy.
pub fn open_corpus() -> Vec<Morphism> {
    let two = Arc::new(two_branch());
    let one = Arc::new(one_branch());
    let lp = Arc::new(looped());
    let cover = Arc::new(loop_cover());
    let sq = Arc::new(square_full());
    let d = Arc::new(pushout());
    let chi_d = complete(&d).hda;
    vec![
        Morphism::identity(&Arc::new(star())),
        fold_two_to_one(&two, &one),
        loop_cover_map(&cover, &lp),
        unfold(&sq, 4).expect("unfolding").unf,
        unfold(&chi_d, 4).expect("unfolding").unf,
        Morphism::identity(&sq),
    ]
}

/// `(g, f)` pairs with a tree domain for `g` and an open `f` over the same
/// codomain.
pub fn lift_triples() -> Vec<(Morphism, Morphism)> {
    let mut out = Vec::new();

    let sq = Arc::new(square_full());
    let u = unfold(&sq, 4).expect("unfolding").unf;
    out.push((u.clone(), u));

    let st = Arc::new(star());
    out.push((Morphism::identity(&st), Morphism::identity(&st)));

    let d = Arc::new(pushout());
    let chi = complete(&d);
    let f = unfold(&chi.hda, 4).expect("unfolding").unf;
    out.push((chi.unit, f));

    let two = Arc::new(two_branch());
    let one = Arc::new(one_branch());
    let fold = fold_two_to_one(&two, &one);
    out.push((fold.clone(), fold));

    let lp = Arc::new(looped());
    let cover = Arc::new(loop_cover());
    out.push((unfold(&lp, 4).expect("unfolding").unf, loop_cover_map(&cover, &lp)));

    let px = Arc::new(path_x());
    let g = path_to_morphism(&px, &path_x_pi()).expect("path morphism");
    out.push((g, unfold(&px, 3).expect("unfolding").unf));
    out
}

/// Section and retraction pairs `(s : R → T, r : T → R)` with `T` a tree.
pub fn retract_pairs() -> Vec<(Morphism, Morphism)> {
    let mut out = Vec::new();

    let two = Arc::new(two_branch());
    let one = Arc::new(one_branch());
    out.push((include_one_in_two(&one, &two), fold_two_to_one(&two, &one)));

    let three = Arc::new(branches(&[
        ("p", branch_spine("a")),
        ("q", branch_spine("a")),
        ("r", branch_spine("b")),
    ]));
    let ab = Arc::new(branches(&[("p", branch_spine("a")), ("r", branch_spine("b"))]));
    let ids = ["p:0", "p:1", "p:2", "r:1", "r:2"];
    let pairs: Vec<(&str, &str)> = ids.iter().map(|c| (*c, *c)).collect();
    let s = Morphism::from_pairs(&ab, &three, &pairs).expect("section");
    let mut back = pairs.clone();
    back.extend([("q:1", "p:1"), ("q:2", "p:2")]);
    let r = Morphism::from_pairs(&three, &ab, &back).expect("retraction");
    out.push((s, r));

    let long = long_branch_spine();
    let twin = Arc::new(branches(&[("l", long.clone()), ("r", long.clone())]));
    let single = Arc::new(path_shape(&long, twin.alphabet()).expect("shape"));
    let s_pairs: Vec<(String, String)> = (0..=4).map(|k| (k.to_string(), format!("l:{k}"))).collect();
    let s_pairs: Vec<(&str, &str)> = s_pairs.iter().map(|(a, b)| (a.as_str(), b.as_str())).collect();
    let s = Morphism::from_pairs(&single, &twin, &s_pairs).expect("section");
    let mut r_pairs: Vec<(String, String)> = (0..=4).map(|k| (format!("l:{k}"), k.to_string())).collect();
    r_pairs.extend((1..=4).map(|k| (format!("r:{k}"), k.to_string())));
    let r_pairs: Vec<(&str, &str)> = r_pairs.iter().map(|(a, b)| (a.as_str(), b.as_str())).collect();
    let r = Morphism::from_pairs(&twin, &single, &r_pairs).expect("retraction");
    out.push((s, r));

    let d = Arc::new(pushout());
    out.push((Morphism::identity(&d), Morphism::identity(&d)));
    out
}
