//! Gaussian elimination over [`Scalar`].
//!
//! Matrices are plain row-major `Vec<Vec<Scalar>>`; every routine is exact.

use thiserror::Error;

use crate::scalar::Scalar;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LinalgError {
    #[error("linear system is inconsistent")]
    Inconsistent,
    #[error("matrix is singular")]
    Singular,
    #[error("dimension mismatch: {0}")]
    Shape(String),
}

pub type Matrix = Vec<Vec<Scalar>>;

/// Reduces `rows` in place to reduced row echelon form and returns the pivot
/// columns. Zero rows end up at the bottom.
pub fn rref(rows: &mut Matrix) -> Vec<usize> {
    let height = rows.len();
    let width = rows.first().map_or(0, Vec::len);
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..width {
        if r == height {
            break;
        }
        let Some(p) = (r..height).find(|&i| !rows[i][c].is_zero()) else {
            continue;
        };
        rows.swap(r, p);
        let inv = rows[r][c].inv().expect("pivot is nonzero");
        for x in rows[r].iter_mut() {
            *x = &*x * &inv;
        }
        let pivot_row = rows[r].clone();
        for (i, row) in rows.iter_mut().enumerate() {
            if i == r || row[c].is_zero() {
                continue;
            }
            let f = row[c].clone();
            for (x, p) in row.iter_mut().zip(&pivot_row).skip(c) {
                if !p.is_zero() {
                    *x -= &(&f * p);
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    pivots
}

/// A basis (in reduced echelon form) of the row span of `rows`.
pub fn row_space_basis(rows: &[Vec<Scalar>]) -> Matrix {
    let mut m = rows.to_vec();
    let rank = rref(&mut m).len();
    m.truncate(rank);
    m
}

pub fn rank(rows: &[Vec<Scalar>]) -> usize {
    row_space_basis(rows).len()
}

/// Solves `matrix · x = rhs`. Free variables are set to zero.
pub fn solve(matrix: &[Vec<Scalar>], rhs: &[Scalar]) -> Result<Vec<Scalar>, LinalgError> {
    if matrix.len() != rhs.len() {
        return Err(LinalgError::Shape(format!(
            "{} rows but {} right-hand sides",
            matrix.len(),
            rhs.len()
        )));
    }
    let width = matrix.first().map_or(0, Vec::len);
    let mut aug: Matrix = matrix
        .iter()
        .zip(rhs)
        .map(|(row, b)| {
            let mut r = row.clone();
            r.push(b.clone());
            r
        })
        .collect();
    let pivots = rref(&mut aug);
    if pivots.last() == Some(&width) {
        return Err(LinalgError::Inconsistent);
    }
    let mut x = vec![Scalar::zero(); width];
    for (r, &c) in pivots.iter().enumerate() {
        x[c] = aug[r][width].clone();
    }
    Ok(x)
}

pub fn inverse(matrix: &[Vec<Scalar>]) -> Result<Matrix, LinalgError> {
    let n = matrix.len();
    if matrix.iter().any(|r| r.len() != n) {
        return Err(LinalgError::Shape("inverse of a non-square matrix".into()));
    }
    if n == 0 {
        return Ok(Vec::new());
    }
    let mut aug: Matrix = matrix
        .iter()
        .enumerate()
        .map(|(i, row)| {
            let mut r = row.clone();
            r.extend((0..n).map(|j| if i == j { Scalar::one() } else { Scalar::zero() }));
            r
        })
        .collect();
    let pivots = rref(&mut aug);
    if pivots.len() < n || pivots[n - 1] != n - 1 {
        return Err(LinalgError::Singular);
    }
    Ok(aug.into_iter().map(|r| r[n..].to_vec()).collect())
}

pub fn mat_vec(matrix: &[Vec<Scalar>], v: &[Scalar]) -> Vec<Scalar> {
    matrix
        .iter()
        .map(|row| {
            row.iter()
                .zip(v)
                .filter(|(a, b)| !a.is_zero() && !b.is_zero())
                .map(|(a, b)| a * b)
                .sum()
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m(rows: &[&[i64]]) -> Matrix {
        rows.iter()
            .map(|r| r.iter().map(|&x| Scalar::from_int(x)).collect())
            .collect()
    }

    #[test]
    fn rank_of_dependent_rows() {
        let a = m(&[&[1, 2, 3], &[2, 4, 6], &[0, 1, 1]]);
        assert_eq!(rank(&a), 2);
        assert_eq!(rank(&m(&[&[0, 0], &[0, 0]])), 0);
        assert_eq!(rank(&[]), 0);
    }

    #[test]
    fn solve_unique_and_free() {
        let a = m(&[&[2, 1], &[1, 3]]);
        let b = vec![Scalar::from_int(3), Scalar::from_int(5)];
        let x = solve(&a, &b).unwrap();
        assert_eq!(mat_vec(&a, &x), b);
        assert_eq!(x[0], Scalar::ratio(4, 5).unwrap());

        // x0 + x1 = 1 with x1 free -> (1, 0)
        let x = solve(&m(&[&[1, 1]]), &[Scalar::one()]).unwrap();
        assert_eq!(x, vec![Scalar::one(), Scalar::zero()]);
    }

    #[test]
    fn solve_inconsistent() {
        let a = m(&[&[1, 1], &[2, 2]]);
        let b = vec![Scalar::one(), Scalar::one()];
        assert_eq!(solve(&a, &b), Err(LinalgError::Inconsistent));
    }

    #[test]
    fn inverse_round_trip() {
        let a = m(&[&[1, 2, 0], &[0, 1, 4], &[5, 6, 0]]);
        let inv = inverse(&a).unwrap();
        for i in 0..3 {
            let col: Vec<Scalar> = inv.iter().map(|r| r[i].clone()).collect();
            let e = mat_vec(&a, &col);
            for (k, x) in e.iter().enumerate() {
                assert_eq!(x.is_one(), k == i);
                assert!(k == i || x.is_zero());
            }
        }
        assert_eq!(inverse(&m(&[&[1, 2], &[2, 4]])), Err(LinalgError::Singular));
    }
}
