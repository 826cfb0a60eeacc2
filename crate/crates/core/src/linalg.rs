//! Dense exact matrices as row lists. Vectors are row vectors and matrices
//! act on the right.

use crate::error::{Error, Result};
use crate::exactfield::{FieldSpec, Scalar};

pub type Matrix = Vec<Vec<Scalar>>;

pub fn identity(field: FieldSpec, n: usize) -> Matrix {
    (0..n)
        .map(|i| {
            (0..n)
                .map(|j| if i == j { field.one() } else { field.zero() })
                .collect()
        })
        .collect()
}

pub fn zero_row(field: FieldSpec, n: usize) -> Vec<Scalar> {
    vec![field.zero(); n]
}

/// Row vector times matrix.
pub fn vec_mat(field: FieldSpec, v: &[Scalar], m: &[Vec<Scalar>], ncols: usize) -> Vec<Scalar> {
    let mut out = zero_row(field, ncols);
    for (coef, row) in v.iter().zip(m) {
        if coef.is_zero() {
            continue;
        }
        for (o, x) in out.iter_mut().zip(row) {
            if !x.is_zero() {
                *o = &*o + &(coef * x);
            }
        }
    }
    out
}

pub fn mat_mul(field: FieldSpec, a: &[Vec<Scalar>], b: &[Vec<Scalar>], ncols: usize) -> Matrix {
    a.iter().map(|row| vec_mat(field, row, b, ncols)).collect()
}

pub fn transpose(m: &[Vec<Scalar>], ncols: usize) -> Matrix {
    (0..ncols)
        .map(|j| m.iter().map(|row| row[j].clone()).collect())
        .collect()
}

/// In-place reduced row echelon form. Returns pivot columns; zero rows are
/// dropped from `rows`.
pub fn rref_in_place(rows: &mut Matrix, ncols: usize) -> Vec<usize> {
    let mut pivots = Vec::new();
    let mut r = 0;
    for col in 0..ncols {
        if r == rows.len() {
            break;
        }
        let Some(found) = (r..rows.len()).find(|&i| !rows[i][col].is_zero()) else {
            continue;
        };
        rows.swap(r, found);
        let inv = rows[r][col].inv().expect("nonzero pivot");
        if !inv.is_one() {
            for x in rows[r].iter_mut() {
                *x = &*x * &inv;
            }
        }
        let pivot_row = rows[r].clone();
        for (i, row) in rows.iter_mut().enumerate() {
            if i == r || row[col].is_zero() {
                continue;
            }
            let factor = row[col].clone();
            for (x, p) in row.iter_mut().zip(&pivot_row).skip(col) {
                if !p.is_zero() {
                    *x = &*x - &(&factor * p);
                }
            }
        }
        pivots.push(col);
        r += 1;
    }
    rows.truncate(r);
    pivots
}

pub fn rank(m: &[Vec<Scalar>], ncols: usize) -> usize {
    let mut rows = m.to_vec();
    rref_in_place(&mut rows, ncols).len()
}

/// Basis of `{u : u · M = 0}` where `M` has `m.len()` rows of width `ncols`.
pub fn left_kernel(field: FieldSpec, m: &[Vec<Scalar>], ncols: usize) -> Matrix {
    let nrows = m.len();
    let mut aug: Matrix = m
        .iter()
        .enumerate()
        .map(|(i, row)| {
            let mut r = row.clone();
            r.extend((0..nrows).map(|j| if i == j { field.one() } else { field.zero() }));
            r
        })
        .collect();
    let pivots = rref_in_place(&mut aug, ncols + nrows);
    aug.into_iter()
        .zip(pivots)
        .filter(|(_, p)| *p >= ncols)
        .map(|(row, _)| row[ncols..].to_vec())
        .collect()
}

pub fn inverse(field: FieldSpec, m: &[Vec<Scalar>]) -> Result<Matrix> {
    let n = m.len();
    if m.iter().any(|r| r.len() != n) {
        return Err(Error::DimensionMismatch {
            expected: n,
            found: m.iter().map(Vec::len).find(|&l| l != n).unwrap_or(n),
        });
    }
    let mut aug: Matrix = m
        .iter()
        .zip(identity(field, n))
        .map(|(row, id)| row.iter().cloned().chain(id).collect())
        .collect();
    let pivots = rref_in_place(&mut aug, 2 * n);
    if n > 0 && (pivots.len() < n || pivots[n - 1] >= n) {
        return Err(Error::SingularMatrix);
    }
    Ok(aug.into_iter().map(|row| row[n..].to_vec()).collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn inverse_roundtrip_over_q() {
        let q = FieldSpec::rational();
        let m: Matrix = vec![
            vec![q.from_i64(2), q.from_i64(1)],
            vec![q.from_i64(1), q.from_i64(1)],
        ];
        let inv = inverse(q, &m).unwrap();
        assert_eq!(mat_mul(q, &m, &inv, 2), identity(q, 2));
    }

    #[test]
    fn singular_matrix_rejected() {
        let f = FieldSpec::prime(3).unwrap();
        let m: Matrix = vec![vec![f.one(), f.from_i64(2)], vec![f.from_i64(2), f.one()]];
        assert_eq!(inverse(f, &m), Err(Error::SingularMatrix));
    }

    #[test]
    fn left_kernel_of_dependent_rows() {
        let f = FieldSpec::prime(5).unwrap();
        let m: Matrix = vec![
            vec![f.one(), f.from_i64(2)],
            vec![f.from_i64(2), f.from_i64(4)],
        ];
        let k = left_kernel(f, &m, 2);
        assert_eq!(k.len(), 1);
        assert!(vec_mat(f, &k[0], &m, 2).iter().all(Scalar::is_zero));
    }
}
