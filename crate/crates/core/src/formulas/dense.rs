//! Small dense LU solver in double-double.

use crate::dd::Dd;
use crate::error::{Error, Result};

pub(crate) struct Lu {
    lu: Vec<Vec<Dd>>,
    piv: Vec<usize>,
}

impl Lu {
    pub(crate) fn factor(a: &[Vec<Dd>]) -> Result<Self> {
        let n = a.len();
        let mut lu = a.to_vec();
        let mut piv: Vec<usize> = (0..n).collect();
        for k in 0..n {
            let p = (k..n)
                .max_by(|&i, &j| lu[i][k].abs().partial_cmp(&lu[j][k].abs()).unwrap_or(std::cmp::Ordering::Equal))
                .unwrap();
            if lu[p][k].hi == 0.0 || !lu[p][k].hi.is_finite() {
                return Err(Error::Singular);
            }
            lu.swap(k, p);
            piv.swap(k, p);
            for i in k + 1..n {
                let f = lu[i][k] / lu[k][k];
                lu[i][k] = f;
                for j in k + 1..n {
                    let d = f * lu[k][j];
                    lu[i][j] = lu[i][j] - d;
                }
            }
        }
        Ok(Lu { lu, piv })
    }

    pub(crate) fn solve(&self, b: &[Dd]) -> Vec<Dd> {
        let n = b.len();
        let mut y: Vec<Dd> = self.piv.iter().map(|&p| b[p]).collect();
        for i in 0..n {
            for j in 0..i {
                y[i] = y[i] - self.lu[i][j] * y[j];
            }
        }
        for i in (0..n).rev() {
            for j in i + 1..n {
                y[i] = y[i] - self.lu[i][j] * y[j];
            }
            y[i] = y[i] / self.lu[i][i];
        }
        y
    }
}

fn norm1(a: &[Vec<Dd>]) -> f64 {
    let n = a.len();
    (0..n).map(|j| a.iter().map(|r| r[j].to_f64().abs()).sum::<f64>()).fold(0.0, f64::max)
}

/// Solution after one step of residual refinement, with the 1-norm condition
/// number (the explicit inverse is cheap at these sizes).
pub(crate) fn solve_refined(a: &[Vec<Dd>], b: &[Dd]) -> Result<(Vec<Dd>, f64)> {
    let n = b.len();
    let lu = Lu::factor(a)?;
    let mut x = lu.solve(b);
    let r: Vec<Dd> = (0..n).map(|i| (0..n).fold(b[i], |acc, j| acc - a[i][j] * x[j])).collect();
    let dx = lu.solve(&r);
    for (xi, d) in x.iter_mut().zip(dx) {
        *xi = *xi + d;
    }
    let mut inv = vec![vec![Dd::ZERO; n]; n];
    for j in 0..n {
        let mut e = vec![Dd::ZERO; n];
        e[j] = Dd::ONE;
        for (i, v) in lu.solve(&e).into_iter().enumerate() {
            inv[i][j] = v;
        }
    }
    let cond = norm1(a) * norm1(&inv);
    if x.iter().any(|v| !v.to_f64().is_finite()) {
        return Err(Error::Singular);
    }
    Ok((x, cond))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m(rows: &[&[f64]]) -> Vec<Vec<Dd>> {
        rows.iter().map(|r| r.iter().map(|&x| Dd::new(x)).collect()).collect()
    }

    #[test]
    fn solves_and_reports_condition() {
        let a = m(&[&[0.0, 2.0, 1.0], &[1.0, 1.0, 0.0], &[3.0, 0.0, 1.0]]);
        let b = [Dd::new(7.0), Dd::new(3.0), Dd::new(6.0)];
        let (x, cond) = solve_refined(&a, &b).unwrap();
        for (xi, want) in x.iter().zip([1.0, 2.0, 3.0]) {
            assert!((*xi - Dd::new(want)).abs().to_f64() < 1e-30);
        }
        assert!(cond > 1.0 && cond < 100.0);
    }

    #[test]
    fn singular_matrix_is_rejected() {
        let a = m(&[&[1.0, 1.0], &[1.0, 1.0]]);
        assert_eq!(solve_refined(&a, &[Dd::ONE, Dd::ONE]).unwrap_err(), Error::Singular);
    }

    #[test]
    fn hilbert_system_keeps_double_double_accuracy() {
        let n = 8;
        let a: Vec<Vec<Dd>> = (0..n).map(|i| (0..n).map(|j| Dd::ONE / Dd::new((i + j + 1) as f64)).collect()).collect();
        let ones = vec![Dd::ONE; n];
        let b: Vec<Dd> = a.iter().map(|r| r.iter().fold(Dd::ZERO, |s, &v| s + v)).collect();
        let (x, cond) = solve_refined(&a, &b).unwrap();
        assert!(cond > 1e9);
        for (xi, oi) in x.iter().zip(ones) {
            assert!((*xi - oi).abs().to_f64() < 1e-20);
        }
    }
}
