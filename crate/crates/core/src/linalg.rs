//! Small dense symmetric-definite eigenvalue machinery.
//!
//! The bases here stay below ~60 elements, so the pencil `A c = lambda B c`
//! is reduced by a Cholesky factorization of `B` and the largest eigenvalue
//! of `L^-1 A L^-T` is found by plain power iteration with a residual-based
//! stop. Everything is deterministic: fixed start vector, fixed iteration
//! order, no randomized pivoting.

use crate::error::{Error, Result};

pub(crate) type Matrix = Vec<Vec<f64>>;

/// Relative pivot floor for the positive-definiteness check.
pub(crate) const PD_TOLERANCE: f64 = 1e-10;

/// Residual target of the eigen refinement, relative to the eigenvalue.
pub(crate) const EIGEN_TOLERANCE: f64 = 1e-12;

const MAX_POWER_ITERATIONS: usize = 500_000;

/// Lower-triangular Cholesky factor of a symmetric matrix, or a
/// degenerate-basis error when a pivot falls below `PD_TOLERANCE` times the
/// diagonal scale.
pub(crate) fn cholesky(a: &Matrix) -> Result<Matrix> {
    let n = a.len();
    let scale = a
        .iter()
        .enumerate()
        .map(|(i, row)| row[i].abs())
        .fold(0.0f64, f64::max)
        .max(f64::MIN_POSITIVE);
    let mut l = vec![vec![0.0; n]; n];
    for i in 0..n {
        for j in 0..=i {
            let mut s = a[i][j];
            for m in 0..j {
                s -= l[i][m] * l[j][m];
            }
            if i == j {
                if s <= PD_TOLERANCE * scale {
                    return Err(Error::Degenerate(format!(
                        "matrix is not positive definite: pivot {s:.3e} at index {i} \
                         (scale {scale:.3e})"
                    )));
                }
                l[i][j] = s.sqrt();
            } else {
                l[i][j] = s / l[j][j];
            }
        }
    }
    Ok(l)
}

/// Solves `L x = b` (forward substitution).
fn solve_lower(l: &Matrix, b: &[f64]) -> Vec<f64> {
    let n = l.len();
    let mut x = b.to_vec();
    for i in 0..n {
        for j in 0..i {
            let lij = l[i][j];
            x[i] -= lij * x[j];
        }
        x[i] /= l[i][i];
    }
    x
}

/// Solves `L^T x = b` (back substitution against the lower factor).
pub(crate) fn solve_lower_transpose(l: &Matrix, b: &[f64]) -> Vec<f64> {
    let n = l.len();
    let mut x = b.to_vec();
    for i in (0..n).rev() {
        for j in i + 1..n {
            x[i] -= l[j][i] * x[j];
        }
        x[i] /= l[i][i];
    }
    x
}

fn matvec(a: &Matrix, v: &[f64]) -> Vec<f64> {
    a.iter()
        .map(|row| row.iter().zip(v).map(|(x, y)| x * y).sum())
        .collect()
}

fn norm(v: &[f64]) -> f64 {
    v.iter().map(|x| x * x).sum::<f64>().sqrt()
}

/// `L^-1 A L^-T` for symmetric `A`.
fn reduce_pencil(a: &Matrix, l: &Matrix) -> Matrix {
    let n = a.len();
    // W = L^-1 A, column by column of A.
    let mut w = vec![vec![0.0; n]; n];
    for j in 0..n {
        let col: Vec<f64> = (0..n).map(|i| a[i][j]).collect();
        let solved = solve_lower(l, &col);
        for i in 0..n {
            w[i][j] = solved[i];
        }
    }
    // B = W L^-T: solve L (row of B)^T = (row of W)^T, i.e. apply the same
    // forward substitution to each row of W.
    let mut b = vec![vec![0.0; n]; n];
    for (i, w_row) in w.iter().enumerate() {
        let solved = solve_lower(l, w_row);
        b[i].copy_from_slice(&solved);
    }
    // Symmetrize away the last-bit asymmetry from the two solves.
    for i in 0..n {
        for j in 0..i {
            let avg = 0.5 * (b[i][j] + b[j][i]);
            b[i][j] = avg;
            b[j][i] = avg;
        }
    }
    b
}

/// Largest eigenvalue and eigenvector of a symmetric PSD matrix by power
/// iteration. Returns `(lambda, vector, residual)` where `residual` is
/// `||B v - lambda v||` for the unit vector returned.
pub(crate) fn largest_eigenpair(b: &Matrix) -> (f64, Vec<f64>, f64) {
    let n = b.len();
    if n == 1 {
        return (b[0][0], vec![1.0], 0.0);
    }
    // Deterministic start, tilted so it is not orthogonal to anything by
    // symmetry accidents.
    let mut v: Vec<f64> = (0..n).map(|i| 1.0 + 1e-3 * i as f64).collect();
    let nv = norm(&v);
    v.iter_mut().for_each(|x| *x /= nv);

    let mut rho = 0.0;
    let mut residual = f64::INFINITY;
    for _ in 0..MAX_POWER_ITERATIONS {
        let w = matvec(b, &v);
        rho = v.iter().zip(&w).map(|(x, y)| x * y).sum();
        let mut r = 0.0;
        for i in 0..n {
            let d = w[i] - rho * v[i];
            r += d * d;
        }
        residual = r.sqrt();
        if residual <= EIGEN_TOLERANCE * rho.abs().max(f64::MIN_POSITIVE) {
            return (rho, v, residual);
        }
        let nw = norm(&w);
        if nw == 0.0 {
            // B annihilates v: the zero matrix case.
            return (0.0, v, 0.0);
        }
        v = w.into_iter().map(|x| x / nw).collect();
    }
    (rho, v, residual)
}

/// Largest generalized eigenvalue of the symmetric-definite pencil
/// `A c = lambda B c`. Returns `(lambda, c, residual)` with `c` of unit
/// length, its first significant entry positive, and
/// `residual = ||A c - lambda B c||`.
pub(crate) fn largest_generalized_eigenpair(
    a: &Matrix,
    b: &Matrix,
) -> Result<(f64, Vec<f64>, f64)> {
    let l = cholesky(b)?;
    let reduced = reduce_pencil(a, &l);
    let (lambda, u, _) = largest_eigenpair(&reduced);
    let mut c = solve_lower_transpose(&l, &u);
    let nc = norm(&c);
    if nc > 0.0 {
        c.iter_mut().for_each(|x| *x /= nc);
    }
    let cmax = c.iter().fold(0.0f64, |m, &x| m.max(x.abs()));
    if let Some(first) = c
        .iter()
        .find(|x| x.abs() > 1e-12 * cmax.max(f64::MIN_POSITIVE))
    {
        if *first < 0.0 {
            c.iter_mut().for_each(|x| *x = -*x);
        }
    }
    let av = matvec(a, &c);
    let bv = matvec(b, &c);
    let mut r = 0.0;
    for i in 0..a.len() {
        let d = av[i] - lambda * bv[i];
        r += d * d;
    }
    Ok((lambda, c, r.sqrt()))
}

/// `c^T A c / c^T B c`.
pub(crate) fn rayleigh_quotient(a: &Matrix, b: &Matrix, c: &[f64]) -> f64 {
    let num: f64 = c.iter().zip(matvec(a, c)).map(|(x, y)| x * y).sum();
    let den: f64 = c.iter().zip(matvec(b, c)).map(|(x, y)| x * y).sum();
    num / den
}
