//! Seeded random rationals, vectors and orthonormal frames.

use num::traits::{One, Zero};
use rand::Rng;

use crate::algebra::Vector;
use crate::linalg::{self, Matrix};
use crate::scalar::{Field, Rational};

/// Largest numerator magnitude and denominator drawn by [`random_rational`].
pub const NUMERATOR_BOUND: i64 = 9;
pub const DENOMINATOR_BOUND: i64 = 9;

pub fn random_rational<R: Rng + ?Sized>(rng: &mut R) -> Rational {
    let num = rng.gen_range(-NUMERATOR_BOUND..=NUMERATOR_BOUND);
    let den = rng.gen_range(1..=DENOMINATOR_BOUND);
    Rational::ratio(num, den)
}

/// A nonzero rational in the open interval (-1, 1).
pub fn random_unit_interval<R: Rng + ?Sized>(rng: &mut R) -> Rational {
    let den = rng.gen_range(2..=DENOMINATOR_BOUND);
    let mut num = 0;
    while num == 0 {
        num = rng.gen_range(-(den - 1)..=den - 1);
    }
    Rational::ratio(num, den)
}

pub fn random_vector<R: Rng + ?Sized>(rng: &mut R, dim: usize) -> Vector<Rational> {
    Vector::new((0..dim).map(|_| random_rational(rng)).collect())
}

pub fn random_nonzero_vector<R: Rng + ?Sized>(rng: &mut R, dim: usize) -> Vector<Rational> {
    loop {
        let v = random_vector(rng, dim);
        if !v.is_zero() {
            return v;
        }
    }
}

/// Orthogonal matrix `(I - A)(I + A)^{-1}` for a skew-symmetric `A`.
///
/// `I + A` is always invertible because the eigenvalues of `A` are imaginary.
pub fn cayley<T: Field>(skew: &Matrix<T>) -> Matrix<T> {
    let n = skew.len();
    let id = linalg::identity::<T>(n);
    let mut minus = id.clone();
    let mut plus = id;
    for i in 0..n {
        for j in 0..n {
            minus[i][j] = minus[i][j].clone() - skew[i][j].clone();
            plus[i][j] = plus[i][j].clone() + skew[i][j].clone();
        }
    }
    let inv = linalg::inverse(&plus).expect("I + A is invertible for skew A");
    linalg::mat_mul(&minus, &inv)
}

/// A random rational orthogonal matrix.
pub fn random_orthogonal<R: Rng + ?Sized>(rng: &mut R, dim: usize) -> Matrix<Rational> {
    let mut skew = vec![vec![Rational::zero(); dim]; dim];
    for i in 0..dim {
        for j in i + 1..dim {
            let x = random_rational(rng);
            skew[j][i] = -x.clone();
            skew[i][j] = x;
        }
    }
    cayley(&skew)
}

/// A random pair of rational vectors orthonormal for the identity metric.
pub fn random_orthonormal_pair<R: Rng + ?Sized>(rng: &mut R, dim: usize) -> (Vector<Rational>, Vector<Rational>) {
    let q = random_orthogonal(rng, dim);
    let column = |k: usize| Vector::new(q.iter().map(|row| row[k].clone()).collect());
    (column(0), column(1))
}

/// Random drift `Σ q_k b_k` over the given basis with identity-metric norm
/// below one; returns the coefficients and the vector.
pub fn random_drift<R: Rng + ?Sized>(
    rng: &mut R,
    basis: &[Vector<Rational>],
) -> (Vec<Rational>, Vector<Rational>) {
    let dim = basis.first().map_or(0, Vector::dim);
    loop {
        let coeffs: Vec<Rational> = basis.iter().map(|_| random_unit_interval(rng)).collect();
        let drift = basis
            .iter()
            .zip(&coeffs)
            .fold(Vector::zeros(dim), |acc, (b, q)| acc.add_scaled(q, b));
        if drift.dot(&drift) < Rational::one() {
            return (coeffs, drift);
        }
    }
}
