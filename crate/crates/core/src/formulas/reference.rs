//! Classical compact finite-difference weights (Collatz/Lele family), used to
//! validate the flat limit of every catalogued formula. Weights are
//! nondimensional (`alpha * h^p`).

use super::FormulaId;
use crate::kernels::Offset;
use crate::series::{rational, Rational};

type Nodes = Vec<(Offset, Rational)>;

/// Values listed from the far left node inward, ending with the centre when
/// `with_centre`; the right half is mirrored (negated if `odd`).
fn line(vals: &[(i64, i64)], odd: bool, with_centre: bool) -> Nodes {
    let reach = vals.len() as i32 - with_centre as i32;
    let mut out = vec![];
    for (i, &(p, q)) in vals.iter().enumerate() {
        let j = reach - i as i32;
        let v = rational(p, q);
        if j == 0 {
            out.push(([0, 0], v));
        } else {
            out.push(([-j, 0], v.clone()));
            out.push(([j, 0], if odd { -v } else { v }));
        }
    }
    out
}

fn axis(r: i32, v: Rational) -> Nodes {
    [[r, 0], [-r, 0], [0, r], [0, -r]].into_iter().map(|o| (o, v.clone())).collect()
}

fn diagonal(v: Rational) -> Nodes {
    [[1, 1], [1, -1], [-1, 1], [-1, -1]].into_iter().map(|o| (o, v.clone())).collect()
}

fn centre(v: Rational) -> Nodes {
    vec![([0, 0], v)]
}

fn cat(parts: Vec<Nodes>) -> Nodes {
    let mut v: Nodes = parts.into_iter().flatten().collect();
    v.sort_by_key(|a| a.0);
    v
}

/// Reference `(alpha, beta)` node weights, sorted by offset.
pub fn reference_flat(id: FormulaId) -> (Nodes, Nodes) {
    use FormulaId::*;
    let r = rational;
    let (a, b) = match id {
        D1_4 => (line(&[(-3, 4), (0, 1)], true, true), line(&[(-1, 4)], false, false)),
        D1_6 => (line(&[(-1, 36), (-7, 9), (0, 1)], true, true), line(&[(-1, 3)], false, false)),
        D1_8 => (
            line(&[(-25, 216), (-20, 27), (0, 1)], true, true),
            line(&[(-1, 36), (-4, 9)], false, false),
        ),
        D1_10 => (
            line(&[(-1, 600), (-101, 600), (-17, 24), (0, 1)], true, true),
            line(&[(-1, 20), (-1, 2)], false, false),
        ),
        D2_4 => (line(&[(6, 5), (-12, 5)], false, true), line(&[(-1, 10)], false, false)),
        D2_6 => (line(&[(3, 44), (12, 11), (-51, 22)], false, true), line(&[(-2, 11)], false, false)),
        D2_8 => (
            line(&[(155, 786), (320, 393), (-265, 131)], false, true),
            line(&[(-23, 2358), (-344, 1179)], false, false),
        ),
        D2_10 => (
            line(&[(79, 16182), (519, 1798), (1065, 1798), (-14335, 8091)], false, true),
            line(&[(-43, 1798), (-334, 899)], false, false),
        ),
        LAP_2 => (cat(vec![centre(r(-4, 1)), axis(1, r(1, 1))]), vec![]),
        LAP_4 => (
            cat(vec![centre(r(-5, 1)), axis(1, r(1, 1)), diagonal(r(1, 4))]),
            cat(vec![axis(1, r(-1, 8))]),
        ),
        LAP_6 => (
            cat(vec![centre(r(-105, 23)), axis(1, r(12, 23)), diagonal(r(12, 23)), axis(2, r(9, 92))]),
            cat(vec![axis(1, r(-5, 23)), diagonal(r(-1, 46))]),
        ),
    };
    (cat(vec![a]), cat(vec![b]))
}
