//! Small dense linear algebra over [`Field`].
//!
//! Matrices are `Vec<Vec<T>>` in row-major order. Dimensions in this crate
//! stay small (at most 16 for algebras, 256 rows for the parallel-field
//! system), so nothing here tries to be clever about storage.

use num::bigint::BigInt;
use num::integer::Integer;
use num::traits::{One, Zero};

use crate::scalar::{Field, Rational};

pub type Matrix<T> = Vec<Vec<T>>;

pub fn identity<T: Field>(n: usize) -> Matrix<T> {
    (0..n)
        .map(|i| (0..n).map(|j| if i == j { T::one() } else { T::zero() }).collect())
        .collect()
}

pub fn zeros<T: Field>(rows: usize, cols: usize) -> Matrix<T> {
    vec![vec![T::zero(); cols]; rows]
}

pub fn mat_mul<T: Field>(a: &Matrix<T>, b: &Matrix<T>) -> Matrix<T> {
    let inner = b.len();
    let cols = b.first().map_or(0, Vec::len);
    a.iter()
        .map(|row| {
            (0..cols)
                .map(|j| {
                    (0..inner).fold(T::zero(), |acc, k| acc + row[k].clone() * b[k][j].clone())
                })
                .collect()
        })
        .collect()
}

pub fn mat_vec<T: Field>(a: &Matrix<T>, v: &[T]) -> Vec<T> {
    a.iter()
        .map(|row| {
            row.iter()
                .zip(v)
                .fold(T::zero(), |acc, (x, y)| acc + x.clone() * y.clone())
        })
        .collect()
}

pub fn transpose<T: Field>(a: &Matrix<T>) -> Matrix<T> {
    let cols = a.first().map_or(0, Vec::len);
    (0..cols).map(|j| a.iter().map(|row| row[j].clone()).collect()).collect()
}

/// Row index of the pivot for column `col` among rows `from..`.
///
/// Picks the entry of largest magnitude among the non-negligible ones; in
/// exact mode every nonzero entry qualifies, so the choice only affects
/// floating stability.
fn pick_pivot<T: Field>(m: &Matrix<T>, from: usize, col: usize) -> Option<usize> {
    (from..m.len())
        .filter(|&r| !m[r][col].is_negligible())
        .max_by(|&a, &b| {
            m[a][col]
                .abs_f64()
                .partial_cmp(&m[b][col].abs_f64())
                .unwrap_or(std::cmp::Ordering::Equal)
        })
}

/// Inverse by Gauss–Jordan elimination, `None` when singular.
pub fn inverse<T: Field>(a: &Matrix<T>) -> Option<Matrix<T>> {
    let n = a.len();
    let mut m: Matrix<T> = a
        .iter()
        .zip(identity::<T>(n))
        .map(|(row, id)| row.iter().cloned().chain(id).collect())
        .collect();
    for col in 0..n {
        let p = pick_pivot(&m, col, col)?;
        m.swap(col, p);
        let pivot = m[col][col].clone();
        for x in m[col].iter_mut() {
            *x = x.clone() / pivot.clone();
        }
        for r in 0..n {
            if r == col || m[r][col].is_zero() {
                continue;
            }
            let factor = m[r][col].clone();
            for c in 0..2 * n {
                let sub = factor.clone() * m[col][c].clone();
                m[r][c] = m[r][c].clone() - sub;
            }
        }
    }
    Some(m.into_iter().map(|row| row[n..].to_vec()).collect())
}

pub fn determinant<T: Field>(a: &Matrix<T>) -> T {
    let n = a.len();
    let mut m = a.clone();
    let mut det = T::one();
    for col in 0..n {
        let Some(p) = pick_pivot(&m, col, col) else {
            return T::zero();
        };
        if p != col {
            m.swap(col, p);
            det = -det;
        }
        let pivot = m[col][col].clone();
        det = det * pivot.clone();
        for r in col + 1..n {
            let factor = m[r][col].clone() / pivot.clone();
            for c in col..n {
                let sub = factor.clone() * m[col][c].clone();
                m[r][c] = m[r][c].clone() - sub;
            }
        }
    }
    det
}

/// Leading-principal-minor test for a symmetric matrix.
///
/// Elimination without row exchanges produces pivots `D_k / D_{k-1}`, so all
/// pivots are positive exactly when every leading principal minor is.
pub fn is_positive_definite<T: Field>(a: &Matrix<T>) -> bool {
    let n = a.len();
    let mut m = a.clone();
    for col in 0..n {
        let pivot = m[col][col].clone();
        if !pivot.is_strictly_positive() {
            return false;
        }
        for r in col + 1..n {
            let factor = m[r][col].clone() / pivot.clone();
            for c in col..n {
                let sub = factor.clone() * m[col][c].clone();
                m[r][c] = m[r][c].clone() - sub;
            }
        }
    }
    true
}

/// Basis of `{x : A x = 0}` by reduced row echelon form.
///
/// Each basis vector has a 1 in one free column and 0 in the others.
pub fn nullspace<T: Field>(a: &Matrix<T>, cols: usize) -> Vec<Vec<T>> {
    let mut m = a.clone();
    let mut pivots = Vec::new();
    let mut row = 0;
    for col in 0..cols {
        if row == m.len() {
            break;
        }
        let Some(p) = pick_pivot(&m, row, col) else {
            continue;
        };
        m.swap(row, p);
        let pivot = m[row][col].clone();
        for x in m[row].iter_mut() {
            *x = x.clone() / pivot.clone();
        }
        for r in 0..m.len() {
            if r == row || m[r][col].is_zero() {
                continue;
            }
            let factor = m[r][col].clone();
            for c in 0..cols {
                let sub = factor.clone() * m[row][c].clone();
                m[r][c] = m[r][c].clone() - sub;
            }
        }
        pivots.push(col);
        row += 1;
    }
    (0..cols)
        .filter(|c| !pivots.contains(c))
        .map(|free| {
            let mut x = vec![T::zero(); cols];
            x[free] = T::one();
            for (r, &pc) in pivots.iter().enumerate() {
                x[pc] = -m[r][free].clone();
            }
            x
        })
        .collect()
}

/// Exact nullspace via fraction-free elimination over the integers.
///
/// Each row is cleared of denominators, then eliminated with integer
/// cross-multiplication; rows are divided by the gcd of their entries after
/// every step to keep coefficients small. No division by a pivot ever
/// happens until back substitution, where the result is a rational vector
/// with a 1 in its free column.
pub fn nullspace_exact(a: &Matrix<Rational>, cols: usize) -> Vec<Vec<Rational>> {
    let mut m: Vec<Vec<BigInt>> = a.iter().map(|row| clear_denominators(row)).collect();
    let mut pivots = Vec::new();
    let mut row = 0;
    for col in 0..cols {
        if row == m.len() {
            break;
        }
        let Some(p) = (row..m.len()).find(|&r| !m[r][col].is_zero()) else {
            continue;
        };
        m.swap(row, p);
        let (head, tail) = m.split_at_mut(row + 1);
        let pivot_row = &head[row];
        for other in tail.iter_mut() {
            if other[col].is_zero() {
                continue;
            }
            let lead = other[col].clone();
            let pivot = pivot_row[col].clone();
            for c in 0..cols {
                other[c] = &other[c] * &pivot - &lead * &pivot_row[c];
            }
            primitive(other);
        }
        pivots.push(col);
        row += 1;
    }

    (0..cols)
        .filter(|c| !pivots.contains(c))
        .map(|free| {
            let mut x = vec![Rational::zero(); cols];
            x[free] = Rational::one();
            for (r, &pc) in pivots.iter().enumerate().rev() {
                let mut acc = Rational::zero();
                for c in pc + 1..cols {
                    if !m[r][c].is_zero() {
                        acc += Rational::from_integer(m[r][c].clone()) * &x[c];
                    }
                }
                x[pc] = -acc / Rational::from_integer(m[r][pc].clone());
            }
            x
        })
        .collect()
}

fn clear_denominators(row: &[Rational]) -> Vec<BigInt> {
    let lcm = row
        .iter()
        .fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
    let mut out: Vec<BigInt> = row
        .iter()
        .map(|x| x.numer() * (&lcm / x.denom()))
        .collect();
    primitive(&mut out);
    out
}

fn primitive(row: &mut [BigInt]) {
    let g = row.iter().fold(BigInt::zero(), |acc, x| acc.gcd(x));
    if !g.is_zero() && !g.is_one() {
        for x in row.iter_mut() {
            *x = &*x / &g;
        }
    }
}
