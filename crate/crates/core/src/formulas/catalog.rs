use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::Error;
use crate::kernels::{Offset, OperatorKind};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
#[allow(non_camel_case_types)]
pub enum FormulaId {
    D1_4,
    D1_6,
    D1_8,
    D1_10,
    D2_4,
    D2_6,
    D2_8,
    D2_10,
    LAP_2,
    LAP_4,
    LAP_6,
}

impl FormulaId {
    pub const ALL: [FormulaId; 11] = [
        FormulaId::D1_4,
        FormulaId::D1_6,
        FormulaId::D1_8,
        FormulaId::D1_10,
        FormulaId::D2_4,
        FormulaId::D2_6,
        FormulaId::D2_8,
        FormulaId::D2_10,
        FormulaId::LAP_2,
        FormulaId::LAP_4,
        FormulaId::LAP_6,
    ];

    pub fn operator(self) -> OperatorKind {
        use FormulaId::*;
        match self {
            D1_4 | D1_6 | D1_8 | D1_10 => OperatorKind::FirstDerivative1D,
            D2_4 | D2_6 | D2_8 | D2_10 => OperatorKind::SecondDerivative1D,
            LAP_2 | LAP_4 | LAP_6 => OperatorKind::Laplacian2D,
        }
    }

    /// Nominal accuracy `m`.
    pub fn order(self) -> u32 {
        use FormulaId::*;
        match self {
            LAP_2 => 2,
            D1_4 | D2_4 | LAP_4 => 4,
            D1_6 | D2_6 | LAP_6 => 6,
            D1_8 | D2_8 => 8,
            D1_10 | D2_10 => 10,
        }
    }

    pub fn dim(self) -> usize {
        self.operator().dim()
    }

    pub fn name(self) -> &'static str {
        use FormulaId::*;
        match self {
            D1_4 => "d1-4",
            D1_6 => "d1-6",
            D1_8 => "d1-8",
            D1_10 => "d1-10",
            D2_4 => "d2-4",
            D2_6 => "d2-6",
            D2_8 => "d2-8",
            D2_10 => "d2-10",
            LAP_2 => "lap-2",
            LAP_4 => "lap-4",
            LAP_6 => "lap-6",
        }
    }
}

impl fmt::Display for FormulaId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for FormulaId {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self, Error> {
        let key = s.trim().to_ascii_lowercase().replace('_', "-");
        FormulaId::ALL
            .into_iter()
            .find(|f| f.name() == key)
            .ok_or_else(|| Error::Parse(format!("unknown formula {s:?}")))
    }
}

impl Serialize for FormulaId {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(self.name())
    }
}

impl<'de> Deserialize<'de> for FormulaId {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// Nodes sharing one unknown. The first member is the representative (sign +1)
/// and carries the collocation row; weight at a member is `sign * value`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SymClass {
    pub members: Vec<(Offset, i32)>,
}

impl SymClass {
    pub fn representative(&self) -> Offset {
        self.members[0].0
    }

    pub fn sign_sum(&self) -> i64 {
        self.members.iter().map(|&(_, s)| s as i64).sum()
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StencilSpec {
    pub id: FormulaId,
    pub operator: OperatorKind,
    pub order: u32,
    pub s_classes: Vec<SymClass>,
    pub mu_classes: Vec<SymClass>,
    /// 0: constants; 1: `{1, x, y}`. The `x`, `y` multipliers vanish under the
    /// D4 symmetry of the Laplacian stencils, so only the constant row is kept.
    pub poly_degree: u32,
}

impl StencilSpec {
    pub fn s_offsets(&self) -> Vec<Offset> {
        sorted_nodes(&self.s_classes)
    }

    pub fn mu_offsets(&self) -> Vec<Offset> {
        sorted_nodes(&self.mu_classes)
    }

    /// Number of unknowns of the reduced system (classes plus one multiplier).
    pub fn unknowns(&self) -> usize {
        self.s_classes.len() + self.mu_classes.len() + 1
    }

    /// Largest squared distance between two nodes of the stencil.
    pub fn max_sq_distance(&self) -> i64 {
        let nodes: Vec<Offset> = self.s_offsets().into_iter().chain(self.mu_offsets()).collect();
        let mut k = 0;
        for a in &nodes {
            for b in &nodes {
                let (dx, dy) = ((a[0] - b[0]) as i64, (a[1] - b[1]) as i64);
                k = k.max(dx * dx + dy * dy);
            }
        }
        k
    }
}

fn sorted_nodes(classes: &[SymClass]) -> Vec<Offset> {
    let mut v: Vec<Offset> = classes.iter().flat_map(|c| c.members.iter().map(|m| m.0)).collect();
    v.sort();
    v
}

fn line_classes(reach: &[i32], antisymmetric: bool) -> Vec<SymClass> {
    reach
        .iter()
        .map(|&j| {
            if j == 0 {
                SymClass { members: vec![([0, 0], 1)] }
            } else {
                SymClass { members: vec![([-j, 0], 1), ([j, 0], if antisymmetric { -1 } else { 1 })] }
            }
        })
        .collect()
}

/// Orbit of `(a, b)` under the symmetries of the square, representative first.
fn orbit(a: i32, b: i32) -> Vec<(Offset, i32)> {
    let mut pts = vec![];
    for (x, y) in [(a, b), (b, a)] {
        for sx in [1, -1] {
            for sy in [1, -1] {
                let p = [sx * x, sy * y];
                if !pts.contains(&p) {
                    pts.push(p);
                }
            }
        }
    }
    let rep = [a, b];
    pts.sort_by_key(|p| (*p != rep, *p));
    pts.into_iter().map(|p| (p, 1)).collect()
}

fn square_classes(reps: &[&[(i32, i32)]]) -> Vec<SymClass> {
    reps.iter()
        .map(|group| SymClass { members: group.iter().flat_map(|&(a, b)| orbit(a, b)).collect() })
        .collect()
}

pub fn catalog(id: FormulaId) -> StencilSpec {
    use FormulaId::*;
    let (s_classes, mu_classes) = match id {
        D1_4 => (line_classes(&[1, 0], true), line_classes(&[1], false)),
        D1_6 => (line_classes(&[2, 1, 0], true), line_classes(&[1], false)),
        D1_8 => (line_classes(&[2, 1, 0], true), line_classes(&[2, 1], false)),
        D1_10 => (line_classes(&[3, 2, 1, 0], true), line_classes(&[2, 1], false)),
        D2_4 => (line_classes(&[1, 0], false), line_classes(&[1], false)),
        D2_6 => (line_classes(&[2, 1, 0], false), line_classes(&[1], false)),
        D2_8 => (line_classes(&[2, 1, 0], false), line_classes(&[2, 1], false)),
        D2_10 => (line_classes(&[3, 2, 1, 0], false), line_classes(&[2, 1], false)),
        LAP_2 => (square_classes(&[&[(0, 0)], &[(1, 0)]]), vec![]),
        LAP_4 => (square_classes(&[&[(0, 0)], &[(1, 0)], &[(1, 1)]]), square_classes(&[&[(1, 0)]])),
        // The sixth-order Laplacian shares one weight between the axis and the
        // diagonal neighbours.
        LAP_6 => (
            square_classes(&[&[(0, 0)], &[(1, 0), (1, 1)], &[(2, 0)]]),
            square_classes(&[&[(1, 0)], &[(1, 1)]]),
        ),
    };
    StencilSpec {
        id,
        operator: id.operator(),
        order: id.order(),
        s_classes,
        mu_classes,
        poly_degree: if id.dim() == 2 { 1 } else { 0 },
    }
}
