//! Lie algebras given by structure constants, inner products on them, and
//! checks for para-hypercomplex structures.

use std::fmt;
use std::ops::{Add, Index, Neg, Sub};

use crate::error::{Error, Result};
use crate::linalg::{self, Matrix};
use crate::scalar::{Field, Rational, Scalar};

/// Coordinates of an element of the algebra in its basis.
#[derive(Clone, Debug, PartialEq)]
pub struct Vector<T>(Vec<T>);

impl<T: Field> Vector<T> {
    pub fn new(coeffs: Vec<T>) -> Self {
        Vector(coeffs)
    }

    pub fn zeros(dim: usize) -> Self {
        Vector(vec![T::zero(); dim])
    }

    /// The `index`-th basis vector.
    pub fn basis(dim: usize, index: usize) -> Self {
        let mut v = Self::zeros(dim);
        v.0[index] = T::one();
        v
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn coeffs(&self) -> &[T] {
        &self.0
    }

    pub fn into_coeffs(self) -> Vec<T> {
        self.0
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(Field::is_negligible)
    }

    pub fn scale(&self, factor: &T) -> Self {
        Vector(self.0.iter().map(|x| x.clone() * factor.clone()).collect())
    }

    /// `self + factor * other`.
    pub fn add_scaled(&self, factor: &T, other: &Self) -> Self {
        Vector(
            self.0
                .iter()
                .zip(&other.0)
                .map(|(a, b)| a.clone() + factor.clone() * b.clone())
                .collect(),
        )
    }

    /// Euclidean coordinate dot product (not the metric inner product).
    pub fn dot(&self, other: &Self) -> T {
        self.0
            .iter()
            .zip(&other.0)
            .fold(T::zero(), |acc, (a, b)| acc + a.clone() * b.clone())
    }

    pub fn to_f64(&self) -> Vector<f64> {
        Vector(self.0.iter().map(Field::to_f64).collect())
    }

    pub fn to_scalars(&self) -> Vec<Scalar> {
        self.0.iter().map(Field::to_scalar).collect()
    }

    pub fn ensure_dim(&self, dim: usize) -> Result<()> {
        if self.dim() == dim {
            Ok(())
        } else {
            Err(Error::DimensionMismatch { expected: dim, found: self.dim() })
        }
    }
}

impl<T: Field> Index<usize> for Vector<T> {
    type Output = T;
    fn index(&self, i: usize) -> &T {
        &self.0[i]
    }
}

impl<T: Field> Add for &Vector<T> {
    type Output = Vector<T>;
    fn add(self, rhs: Self) -> Vector<T> {
        self.add_scaled(&T::one(), rhs)
    }
}

impl<T: Field> Sub for &Vector<T> {
    type Output = Vector<T>;
    fn sub(self, rhs: Self) -> Vector<T> {
        self.add_scaled(&-T::one(), rhs)
    }
}

impl<T: Field> Neg for &Vector<T> {
    type Output = Vector<T>;
    fn neg(self) -> Vector<T> {
        self.scale(&-T::one())
    }
}

impl<T: Field> From<Vec<T>> for Vector<T> {
    fn from(coeffs: Vec<T>) -> Self {
        Vector(coeffs)
    }
}

impl From<&[i64]> for Vector<Rational> {
    fn from(coeffs: &[i64]) -> Self {
        Vector(coeffs.iter().map(|&x| Rational::from_i64(x)).collect())
    }
}

impl<T: Field> fmt::Display for Vector<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, x) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{x}")?;
        }
        write!(f, ")")
    }
}

/// A real Lie algebra with dense structure constants `[e_i, e_j] = Σ_k c[i][j][k] e_k`.
#[derive(Clone, Debug, PartialEq)]
pub struct LieAlgebra<T> {
    labels: Vec<String>,
    structure: Vec<T>,
}

/// Outcome of [`LieAlgebra::check_jacobi`].
#[derive(Clone, Debug, PartialEq)]
pub struct JacobiReport<T> {
    /// Index triples `(i, j, k)` with `c[i][j][k] != -c[j][i][k]`.
    pub antisymmetry_violations: Vec<(usize, usize, usize)>,
    /// Basis triples `i < j < k` with a nonzero cyclic sum, and that sum.
    pub violations: Vec<((usize, usize, usize), Vector<T>)>,
}

impl<T> JacobiReport<T> {
    pub fn passed(&self) -> bool {
        self.antisymmetry_violations.is_empty() && self.violations.is_empty()
    }
}

impl<T: Field> LieAlgebra<T> {
    /// Builds the algebra from brackets `[e_i, e_j]` given for `i < j` only.
    ///
    /// The remaining constants follow from antisymmetry. Each `(i, j)` pair
    /// may appear at most once.
    pub fn from_brackets(
        labels: Vec<String>,
        brackets: impl IntoIterator<Item = (usize, usize, Vector<T>)>,
    ) -> Result<Self> {
        let dim = labels.len();
        if dim == 0 {
            return Err(Error::Input("an algebra needs at least one basis vector".into()));
        }
        let mut structure = vec![T::zero(); dim * dim * dim];
        let mut seen = vec![false; dim * dim];
        for (i, j, value) in brackets {
            if i >= j || j >= dim {
                return Err(Error::Input(format!(
                    "bracket indices ({i}, {j}) must satisfy i < j < {dim}"
                )));
            }
            if std::mem::replace(&mut seen[i * dim + j], true) {
                return Err(Error::Input(format!("bracket ({i}, {j}) given more than once")));
            }
            value.ensure_dim(dim)?;
            for (k, c) in value.into_coeffs().into_iter().enumerate() {
                structure[(j * dim + i) * dim + k] = -c.clone();
                structure[(i * dim + j) * dim + k] = c;
            }
        }
        Ok(LieAlgebra { labels, structure })
    }

    /// Builds the algebra from a full `dim × dim × dim` table without
    /// completing or validating it. Use [`check_jacobi`](Self::check_jacobi)
    /// to validate.
    pub fn from_structure_constants(labels: Vec<String>, table: Vec<Vec<Vec<T>>>) -> Result<Self> {
        let dim = labels.len();
        let mut structure = Vec::with_capacity(dim * dim * dim);
        if table.len() != dim {
            return Err(Error::DimensionMismatch { expected: dim, found: table.len() });
        }
        for row in table {
            if row.len() != dim {
                return Err(Error::DimensionMismatch { expected: dim, found: row.len() });
            }
            for entry in row {
                if entry.len() != dim {
                    return Err(Error::DimensionMismatch { expected: dim, found: entry.len() });
                }
                structure.extend(entry);
            }
        }
        Ok(LieAlgebra { labels, structure })
    }

    /// The abelian algebra with the given labels.
    pub fn abelian(labels: Vec<String>) -> Self {
        let dim = labels.len();
        LieAlgebra { labels, structure: vec![T::zero(); dim * dim * dim] }
    }

    pub fn dim(&self) -> usize {
        self.labels.len()
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn constant(&self, i: usize, j: usize, k: usize) -> &T {
        let n = self.dim();
        &self.structure[(i * n + j) * n + k]
    }

    /// `[e_i, e_j]`.
    pub fn bracket_basis(&self, i: usize, j: usize) -> Vector<T> {
        let n = self.dim();
        Vector(self.structure[(i * n + j) * n..(i * n + j + 1) * n].to_vec())
    }

    pub fn bracket(&self, u: &Vector<T>, v: &Vector<T>) -> Result<Vector<T>> {
        u.ensure_dim(self.dim())?;
        v.ensure_dim(self.dim())?;
        Ok(self.bracket_unchecked(u, v))
    }

    pub(crate) fn bracket_unchecked(&self, u: &Vector<T>, v: &Vector<T>) -> Vector<T> {
        let n = self.dim();
        let mut out = vec![T::zero(); n];
        for i in 0..n {
            if u[i].is_zero() {
                continue;
            }
            for j in 0..n {
                if v[j].is_zero() || i == j {
                    continue;
                }
                let w = u[i].clone() * v[j].clone();
                for (k, o) in out.iter_mut().enumerate() {
                    let c = self.constant(i, j, k);
                    if !c.is_zero() {
                        *o = o.clone() + w.clone() * c.clone();
                    }
                }
            }
        }
        Vector(out)
    }

    pub fn check_antisymmetry(&self) -> Vec<(usize, usize, usize)> {
        let n = self.dim();
        let mut bad = Vec::new();
        for i in 0..n {
            for j in i..n {
                for k in 0..n {
                    let sum = self.constant(i, j, k).clone() + self.constant(j, i, k).clone();
                    if !sum.is_negligible() {
                        bad.push((i, j, k));
                    }
                }
            }
        }
        bad
    }

    /// Checks antisymmetry, then the Jacobi identity on every basis triple.
    ///
    /// With antisymmetry in place the cyclic sum is totally antisymmetric, so
    /// triples `i < j < k` cover everything.
    pub fn check_jacobi(&self) -> JacobiReport<T> {
        let antisymmetry_violations = self.check_antisymmetry();
        let n = self.dim();
        let mut violations = Vec::new();
        if antisymmetry_violations.is_empty() {
            for i in 0..n {
                for j in i + 1..n {
                    for k in j + 1..n {
                        let e = |m| Vector::basis(n, m);
                        let residual = &(&self.bracket_unchecked(&self.bracket_basis(i, j), &e(k))
                            + &self.bracket_unchecked(&self.bracket_basis(j, k), &e(i)))
                            + &self.bracket_unchecked(&self.bracket_basis(k, i), &e(j));
                        if !residual.is_zero() {
                            violations.push(((i, j, k), residual));
                        }
                    }
                }
            }
        }
        JacobiReport { antisymmetry_violations, violations }
    }

    pub fn to_f64(&self) -> LieAlgebra<f64> {
        LieAlgebra {
            labels: self.labels.clone(),
            structure: self.structure.iter().map(Field::to_f64).collect(),
        }
    }
}

/// Gram matrix of an inner product on the algebra.
#[derive(Clone, Debug, PartialEq)]
pub struct MetricTensor<T> {
    gram: Matrix<T>,
}

impl<T: Field> MetricTensor<T> {
    /// Validates symmetry and positive definiteness.
    pub fn new(gram: Matrix<T>) -> Result<Self> {
        let n = gram.len();
        if let Some(row) = gram.iter().find(|row| row.len() != n) {
            return Err(Error::DimensionMismatch { expected: n, found: row.len() });
        }
        for i in 0..n {
            for j in i + 1..n {
                if !(gram[i][j].clone() - gram[j][i].clone()).is_negligible() {
                    return Err(Error::Input(format!("Gram matrix is not symmetric at ({i}, {j})")));
                }
            }
        }
        if !linalg::is_positive_definite(&gram) {
            return Err(Error::NotPositiveDefinite);
        }
        Ok(MetricTensor { gram })
    }

    pub fn identity(dim: usize) -> Self {
        MetricTensor { gram: linalg::identity(dim) }
    }

    pub fn dim(&self) -> usize {
        self.gram.len()
    }

    pub fn gram(&self) -> &Matrix<T> {
        &self.gram
    }

    pub fn entry(&self, i: usize, j: usize) -> &T {
        &self.gram[i][j]
    }

    pub fn inner(&self, u: &Vector<T>, v: &Vector<T>) -> T {
        let n = self.dim();
        let mut acc = T::zero();
        for i in 0..n {
            if u[i].is_zero() {
                continue;
            }
            for j in 0..n {
                if v[j].is_zero() || self.gram[i][j].is_zero() {
                    continue;
                }
                acc = acc + u[i].clone() * self.gram[i][j].clone() * v[j].clone();
            }
        }
        acc
    }

    pub fn norm_squared(&self, u: &Vector<T>) -> T {
        self.inner(u, u)
    }

    /// Gram determinant `g(u,u) g(v,v) - g(u,v)^2` of the pair.
    pub fn pair_determinant(&self, u: &Vector<T>, v: &Vector<T>) -> T {
        let uv = self.inner(u, v);
        self.norm_squared(u) * self.norm_squared(v) - uv.clone() * uv
    }

    /// Orthogonalizes the coordinate basis by Gram–Schmidt without normalizing,
    /// so rational input stays rational.
    pub fn orthogonal_frame(&self) -> Vec<Vector<T>> {
        let n = self.dim();
        let mut frame: Vec<(Vector<T>, T)> = Vec::with_capacity(n);
        for i in 0..n {
            let mut v = Vector::basis(n, i);
            for (f, norm) in &frame {
                let coeff = self.inner(&v, f) / norm.clone();
                v = v.add_scaled(&-coeff, f);
            }
            let norm = self.norm_squared(&v);
            frame.push((v, norm));
        }
        frame.into_iter().map(|(v, _)| v).collect()
    }

    pub fn to_f64(&self) -> MetricTensor<f64> {
        MetricTensor {
            gram: self.gram.iter().map(|r| r.iter().map(Field::to_f64).collect()).collect(),
        }
    }
}

/// Linear map on the algebra, `J(e_j) = Σ_i matrix[i][j] e_i`.
#[derive(Clone, Debug, PartialEq)]
pub struct Endomorphism<T> {
    matrix: Matrix<T>,
}

impl<T: Field> Endomorphism<T> {
    pub fn new(matrix: Matrix<T>) -> Result<Self> {
        let n = matrix.len();
        if let Some(row) = matrix.iter().find(|row| row.len() != n) {
            return Err(Error::DimensionMismatch { expected: n, found: row.len() });
        }
        Ok(Endomorphism { matrix })
    }

    /// Builds `J` from the images of the basis vectors.
    pub fn from_images(images: Vec<Vector<T>>) -> Result<Self> {
        let n = images.len();
        for img in &images {
            img.ensure_dim(n)?;
        }
        let matrix = (0..n).map(|i| (0..n).map(|j| images[j][i].clone()).collect()).collect();
        Ok(Endomorphism { matrix })
    }

    pub fn identity(dim: usize) -> Self {
        Endomorphism { matrix: linalg::identity(dim) }
    }

    pub fn dim(&self) -> usize {
        self.matrix.len()
    }

    pub fn matrix(&self) -> &Matrix<T> {
        &self.matrix
    }

    pub fn apply(&self, v: &Vector<T>) -> Vector<T> {
        Vector(linalg::mat_vec(&self.matrix, v.coeffs()))
    }

    /// `self ∘ other`.
    pub fn compose(&self, other: &Self) -> Self {
        Endomorphism { matrix: linalg::mat_mul(&self.matrix, &other.matrix) }
    }

    pub fn scale(&self, factor: &T) -> Self {
        Endomorphism {
            matrix: self
                .matrix
                .iter()
                .map(|r| r.iter().map(|x| x.clone() * factor.clone()).collect())
                .collect(),
        }
    }

    pub fn approx_eq(&self, other: &Self) -> bool {
        self.matrix
            .iter()
            .flatten()
            .zip(other.matrix.iter().flatten())
            .all(|(a, b)| (a.clone() - b.clone()).is_negligible())
    }
}

/// Sign convention of the Nijenhuis tensor.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum StructureKind {
    /// `J² = -1`: the tensor ends in `- [u, v]`.
    Complex,
    /// `J² = +1`: the tensor ends in `+ [u, v]`.
    Product,
}

/// `N(u,v) = [Ju, Jv] - J([u, Jv] + [Ju, v]) ∓ [u, v]`, with `-` for complex
/// and `+` for product structures.
pub fn nijenhuis<T: Field>(
    alg: &LieAlgebra<T>,
    j: &Endomorphism<T>,
    kind: StructureKind,
    u: &Vector<T>,
    v: &Vector<T>,
) -> Result<Vector<T>> {
    let n = alg.dim();
    if j.dim() != n {
        return Err(Error::DimensionMismatch { expected: n, found: j.dim() });
    }
    u.ensure_dim(n)?;
    v.ensure_dim(n)?;
    let ju = j.apply(u);
    let jv = j.apply(v);
    let mixed = &alg.bracket_unchecked(u, &jv) + &alg.bracket_unchecked(&ju, v);
    let base = &alg.bracket_unchecked(&ju, &jv) - &j.apply(&mixed);
    let plain = alg.bracket_unchecked(u, v);
    Ok(match kind {
        StructureKind::Complex => &base - &plain,
        StructureKind::Product => &base + &plain,
    })
}

/// Per-axiom outcome of [`check_para_hypercomplex`].
#[derive(Clone, Debug, PartialEq)]
pub struct ParaHypercomplexReport {
    /// `J1² = -1`.
    pub j1_complex: bool,
    /// `J2² = 1` and `J2 ≠ ±1`.
    pub j2_product: bool,
    /// `J1 J2 = J3` and `J2 J1 = -J3`.
    pub anticommute: bool,
    /// `N1` vanishes on all basis pairs.
    pub n1_vanishes: bool,
    /// `N2` and `N3` vanish on all basis pairs.
    pub n2_n3_vanish: bool,
    /// Basis pairs `(structure index, i, j)` where a Nijenhuis tensor is nonzero.
    pub nijenhuis_failures: Vec<(usize, usize, usize)>,
}

impl ParaHypercomplexReport {
    pub fn passed(&self) -> bool {
        self.j1_complex && self.j2_product && self.anticommute && self.n1_vanishes && self.n2_n3_vanish
    }
}

pub fn check_para_hypercomplex<T: Field>(
    alg: &LieAlgebra<T>,
    j1: &Endomorphism<T>,
    j2: &Endomorphism<T>,
    j3: &Endomorphism<T>,
) -> Result<ParaHypercomplexReport> {
    let n = alg.dim();
    for j in [j1, j2, j3] {
        if j.dim() != n {
            return Err(Error::DimensionMismatch { expected: n, found: j.dim() });
        }
    }
    let id = Endomorphism::identity(n);
    let minus_id = id.scale(&-T::one());

    let j1_complex = j1.compose(j1).approx_eq(&minus_id);
    let j2_product = j2.compose(j2).approx_eq(&id) && !j2.approx_eq(&id) && !j2.approx_eq(&minus_id);
    let anticommute =
        j1.compose(j2).approx_eq(j3) && j2.compose(j1).approx_eq(&j3.scale(&-T::one()));

    let mut failures = Vec::new();
    let structures = [
        (j1, StructureKind::Complex),
        (j2, StructureKind::Product),
        (j3, StructureKind::Product),
    ];
    for (idx, (j, kind)) in structures.into_iter().enumerate() {
        for a in 0..n {
            for b in a + 1..n {
                let value = nijenhuis(alg, j, kind, &Vector::basis(n, a), &Vector::basis(n, b))?;
                if !value.is_zero() {
                    failures.push((idx + 1, a, b));
                }
            }
        }
    }
    Ok(ParaHypercomplexReport {
        j1_complex,
        j2_product,
        anticommute,
        n1_vanishes: !failures.iter().any(|f| f.0 == 1),
        n2_n3_vanish: !failures.iter().any(|f| f.0 != 1),
        nijenhuis_failures: failures,
    })
}
