//! Real roots of low-degree real polynomials (coefficients in ascending order).

use nalgebra::{DMatrix, Schur};

use crate::series::horner;

fn trim(c: &[f64]) -> &[f64] {
    let n = c.iter().rposition(|&x| x != 0.0).map_or(0, |i| i + 1);
    &c[..n]
}

pub(crate) fn derivative(c: &[f64]) -> Vec<f64> {
    c.iter().enumerate().skip(1).map(|(i, &a)| i as f64 * a).collect()
}

fn polish(c: &[f64], mut x: f64) -> f64 {
    let d = derivative(c);
    for _ in 0..8 {
        let f = horner(c, x);
        let fp = horner(&d, x);
        if fp == 0.0 || !fp.is_finite() {
            break;
        }
        let step = f / fp;
        let next = x - step;
        if !next.is_finite() || horner(c, next).abs() > f.abs() {
            break;
        }
        x = next;
        if step.abs() <= 1e-16 * x.abs() {
            break;
        }
    }
    x
}

fn quadratic(c: f64, b: f64, a: f64) -> Vec<f64> {
    let disc = b * b - 4.0 * a * c;
    if disc < 0.0 {
        return vec![];
    }
    let q = -0.5 * (b + b.signum() * disc.sqrt());
    if q == 0.0 {
        return vec![0.0, 0.0];
    }
    vec![q / a, c / q]
}

fn cubic(c: &[f64]) -> Vec<f64> {
    let (a, b, cc) = (c[2] / c[3], c[1] / c[3], c[0] / c[3]);
    // x = y - a/3 gives y^3 + p y + q = 0.
    let p = b - a * a / 3.0;
    let q = 2.0 * a * a * a / 27.0 - a * b / 3.0 + cc;
    let shift = -a / 3.0;
    let disc = (q / 2.0).powi(2) + (p / 3.0).powi(3);
    if disc > 0.0 {
        let s = disc.sqrt();
        let y = (-q / 2.0 + s).cbrt() + (-q / 2.0 - s).cbrt();
        vec![y + shift]
    } else if p == 0.0 {
        vec![shift]
    } else {
        let r = 2.0 * (-p / 3.0).sqrt();
        let arg = (3.0 * q / (p * r)).clamp(-1.0, 1.0);
        let phi = arg.acos() / 3.0;
        (0..3).map(|k| r * (phi - 2.0 * std::f64::consts::PI * k as f64 / 3.0).cos() + shift).collect()
    }
}

fn companion(c: &[f64]) -> Vec<f64> {
    let n = c.len() - 1;
    let lead = c[n];
    let m = DMatrix::from_fn(n, n, |i, j| if j == n - 1 { -c[i] / lead } else if i == j + 1 { 1.0 } else { 0.0 });
    // Unshifted QR can stall on symmetric root sets (x^4 + 1); a diagonal
    // shift breaks the symmetry without changing the eigenvectors.
    let eig = [0.0, 0.3141, -0.5772, 1.3]
        .iter()
        .find_map(|&s| {
            let shifted = &m + DMatrix::identity(n, n) * s;
            Schur::try_new(shifted, f64::EPSILON, 2000).map(|d| d.complex_eigenvalues().map(|z| z - s))
        })
        .expect("companion eigenvalues did not converge");
    let rho = eig.iter().map(|z| z.norm()).fold(0.0, f64::max);
    eig.iter().filter(|z| z.im.abs() <= 1e-10 * rho.max(f64::MIN_POSITIVE)).map(|z| z.re).collect()
}

/// All real roots, sorted ascending; repeated roots appear repeatedly.
pub fn real_roots(coeffs: &[f64]) -> Vec<f64> {
    let c = trim(coeffs);
    let mut roots = match c.len() {
        0 | 1 => vec![],
        2 => vec![-c[0] / c[1]],
        3 => quadratic(c[0], c[1], c[2]),
        4 => cubic(c),
        _ => companion(c),
    };
    for r in roots.iter_mut() {
        *r = polish(c, *r);
    }
    roots.sort_by(|a, b| a.partial_cmp(b).unwrap());
    roots
}
