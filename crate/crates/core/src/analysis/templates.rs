//! Closed-form leading truncation-error polynomials, one row per formula:
//! `tau0 = h^m * prefactor * sum_i bracket_i z^i`, each bracket coefficient an
//! integer combination of derivatives at the reference point.

use crate::formulas::FormulaId;

/// `(power of z, integer coefficient, derivative multi-indices summed)`.
pub(crate) type Term = (usize, i64, &'static [(usize, usize)]);

pub(crate) struct Template {
    pub prefactor: (i64, i64),
    pub terms: &'static [Term],
}

const X1: &[(usize, usize)] = &[(1, 0)];
const X2: &[(usize, usize)] = &[(2, 0)];
const X3: &[(usize, usize)] = &[(3, 0)];
const X4: &[(usize, usize)] = &[(4, 0)];
const X5: &[(usize, usize)] = &[(5, 0)];
const X6: &[(usize, usize)] = &[(6, 0)];
const X7: &[(usize, usize)] = &[(7, 0)];
const X8: &[(usize, usize)] = &[(8, 0)];
const X9: &[(usize, usize)] = &[(9, 0)];
const X10: &[(usize, usize)] = &[(10, 0)];
const X11: &[(usize, usize)] = &[(11, 0)];
const X12: &[(usize, usize)] = &[(12, 0)];

const LAP: &[(usize, usize)] = &[(2, 0), (0, 2)];
const BI4: &[(usize, usize)] = &[(4, 0), (0, 4)];
const MIX22: &[(usize, usize)] = &[(2, 2)];
const P6: &[(usize, usize)] = &[(6, 0), (0, 6)];
const MIX24: &[(usize, usize)] = &[(2, 4), (4, 2)];
const P8: &[(usize, usize)] = &[(8, 0), (0, 8)];
const MIX26: &[(usize, usize)] = &[(2, 6), (6, 2)];

pub(crate) fn template(id: FormulaId) -> Template {
    use FormulaId::*;
    let (prefactor, terms): ((i64, i64), &'static [Term]) = match id {
        D1_4 => ((1, 120), &[(2, -60, X1), (1, -20, X3), (0, -1, X5)]),
        D1_6 => ((1, 1260), &[(3, 840, X1), (2, 420, X3), (1, 42, X5), (0, 1, X7)]),
        D1_8 => ((1, 22680), &[(4, -15120, X1), (3, -10080, X3), (2, -1512, X5), (1, -72, X7), (0, -1, X9)]),
        D1_10 => (
            (1, 277200),
            &[(5, 332640, X1), (4, 277200, X3), (3, 55440, X5), (2, 3960, X7), (1, 110, X9), (0, 1, X11)],
        ),
        D2_4 => ((1, 200), &[(2, -140, X2), (1, -28, X4), (0, -1, X6)]),
        D2_6 => ((23, 55440), &[(3, 2520, X2), (2, 756, X4), (1, 54, X6), (0, 1, X8)]),
        D2_8 => ((-79, 2971080), &[(4, 55440, X2), (3, 22176, X4), (2, 2376, X6), (1, 88, X8), (0, 1, X10)]),
        D2_10 => (
            (619, 299043360),
            &[(5, 1441440, X2), (4, 720720, X4), (3, 102960, X6), (2, 5720, X8), (1, 130, X10), (0, 1, X12)],
        ),
        LAP_2 => ((1, 12), &[(0, 1, BI4), (1, 9, LAP)]),
        LAP_4 => ((1, 480), &[(2, -240, LAP), (1, -75, BI4), (1, 130, MIX22), (0, -3, P6), (0, 5, MIX24)]),
        LAP_6 => (
            (1, 3052560),
            &[
                (3, -8605128, LAP),
                (2, -1371468, BI4),
                (2, -1364496, MIX22),
                (1, -123522, MIX24),
                (0, 1817, P8),
                (0, -3318, MIX26),
            ],
        ),
    };
    Template { prefactor, terms }
}
