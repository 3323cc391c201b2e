//! Levi-Civita connection, curvature tensor, and sectional/scalar curvature
//! of a left-invariant metric, all computed on the Lie algebra.
//!
//! Curvature follows `R(U,V)W = ∇_U ∇_V W - ∇_V ∇_U W - ∇_[U,V] W`, so that
//! the sectional curvature of the plane spanned by `u, v` is
//! `g(R(v,u)u, v) / (g(u,u) g(v,v) - g(u,v)^2)`.

use crate::algebra::{LieAlgebra, MetricTensor, Vector};
use crate::error::{Error, Result};
use crate::linalg;
use crate::scalar::Field;

/// Christoffel table of a left-invariant connection:
/// `∇_{e_i} e_j = Σ_k gamma[i][j][k] e_k`.
#[derive(Clone, Debug, PartialEq)]
pub struct Connection<T> {
    gamma: Vec<T>,
    algebra: LieAlgebra<T>,
    metric: MetricTensor<T>,
}

impl<T: Field> Connection<T> {
    pub fn dim(&self) -> usize {
        self.algebra.dim()
    }

    pub fn algebra(&self) -> &LieAlgebra<T> {
        &self.algebra
    }

    pub fn metric(&self) -> &MetricTensor<T> {
        &self.metric
    }

    pub fn gamma(&self, i: usize, j: usize, k: usize) -> &T {
        let n = self.dim();
        &self.gamma[(i * n + j) * n + k]
    }

    /// `∇_{e_i} e_j`.
    pub fn covariant_basis(&self, i: usize, j: usize) -> Vector<T> {
        let n = self.dim();
        Vector::new(self.gamma[(i * n + j) * n..(i * n + j + 1) * n].to_vec())
    }

    /// `∇_u v` for left-invariant fields `u`, `v`.
    pub fn covariant(&self, u: &Vector<T>, v: &Vector<T>) -> Result<Vector<T>> {
        u.ensure_dim(self.dim())?;
        v.ensure_dim(self.dim())?;
        Ok(self.covariant_unchecked(u, v))
    }

    pub(crate) fn covariant_unchecked(&self, u: &Vector<T>, v: &Vector<T>) -> Vector<T> {
        let n = self.dim();
        let mut out = vec![T::zero(); n];
        for i in 0..n {
            if u[i].is_zero() {
                continue;
            }
            for j in 0..n {
                if v[j].is_zero() {
                    continue;
                }
                let w = u[i].clone() * v[j].clone();
                for (k, o) in out.iter_mut().enumerate() {
                    let g = self.gamma(i, j, k);
                    if !g.is_zero() {
                        *o = o.clone() + w.clone() * g.clone();
                    }
                }
            }
        }
        Vector::new(out)
    }

    /// Pairs `(i, j)` where `∇_{e_i} e_j - ∇_{e_j} e_i ≠ [e_i, e_j]`.
    pub fn torsion_violations(&self) -> Vec<(usize, usize)> {
        let n = self.dim();
        let mut bad = Vec::new();
        for i in 0..n {
            for j in i + 1..n {
                let torsion = &(&self.covariant_basis(i, j) - &self.covariant_basis(j, i))
                    - &self.algebra.bracket_basis(i, j);
                if !torsion.is_zero() {
                    bad.push((i, j));
                }
            }
        }
        bad
    }

    /// Triples `(i, j, k)` where `<∇_i e_j, e_k> + <e_j, ∇_i e_k> ≠ 0`.
    pub fn metric_compatibility_violations(&self) -> Vec<(usize, usize, usize)> {
        let n = self.dim();
        let e = |m| Vector::basis(n, m);
        let mut bad = Vec::new();
        for i in 0..n {
            for j in 0..n {
                for k in j..n {
                    let s = self.metric.inner(&self.covariant_basis(i, j), &e(k))
                        + self.metric.inner(&e(j), &self.covariant_basis(i, k));
                    if !s.is_negligible() {
                        bad.push((i, j, k));
                    }
                }
            }
        }
        bad
    }
}

/// Levi-Civita connection of a left-invariant metric, from the Koszul formula
/// `2<∇_U V, W> = <[U,V],W> - <[V,W],U> + <[W,U],V>`.
///
/// For each pair of basis vectors the right-hand side is assembled against
/// every `e_k` and the resulting covector is raised with the inverse Gram
/// matrix.
pub fn levi_civita<T: Field>(alg: &LieAlgebra<T>, g: &MetricTensor<T>) -> Result<Connection<T>> {
    let n = alg.dim();
    if g.dim() != n {
        return Err(Error::DimensionMismatch { expected: n, found: g.dim() });
    }
    if !alg.check_antisymmetry().is_empty() {
        return Err(Error::Input("structure constants are not antisymmetric".into()));
    }
    if !linalg::is_positive_definite(g.gram()) {
        return Err(Error::NotPositiveDefinite);
    }
    let inv = linalg::inverse(g.gram()).ok_or(Error::NotPositiveDefinite)?;
    let half = T::ratio(1, 2);

    // lowered[a][b][c] = <[e_a, e_b], e_c>
    let mut lowered = vec![T::zero(); n * n * n];
    for a in 0..n {
        for b in 0..n {
            let br = alg.bracket_basis(a, b);
            for c in 0..n {
                lowered[(a * n + b) * n + c] = g.inner(&br, &Vector::basis(n, c));
            }
        }
    }
    let low = |a: usize, b: usize, c: usize| lowered[(a * n + b) * n + c].clone();

    let mut gamma = Vec::with_capacity(n * n * n);
    for i in 0..n {
        for j in 0..n {
            let rhs: Vec<T> = (0..n)
                .map(|k| half.clone() * (low(i, j, k) - low(j, k, i) + low(k, i, j)))
                .collect();
            gamma.extend(linalg::mat_vec(&inv, &rhs));
        }
    }
    Ok(Connection { gamma, algebra: alg.clone(), metric: g.clone() })
}

/// Curvature table `R(e_i, e_j) e_k = Σ_l r[i][j][k][l] e_l`.
#[derive(Clone, Debug, PartialEq)]
pub struct CurvatureTensor<T> {
    r: Vec<T>,
    connection: Connection<T>,
}

/// Index tuples at which each curvature identity fails.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct CurvatureSymmetryReport {
    pub first_pair: Vec<(usize, usize, usize, usize)>,
    pub last_pair: Vec<(usize, usize, usize, usize)>,
    pub pair_symmetry: Vec<(usize, usize, usize, usize)>,
    pub bianchi: Vec<(usize, usize, usize)>,
}

impl CurvatureSymmetryReport {
    pub fn passed(&self) -> bool {
        self.first_pair.is_empty()
            && self.last_pair.is_empty()
            && self.pair_symmetry.is_empty()
            && self.bianchi.is_empty()
    }
}

impl<T: Field> CurvatureTensor<T> {
    pub fn dim(&self) -> usize {
        self.connection.dim()
    }

    pub fn connection(&self) -> &Connection<T> {
        &self.connection
    }

    pub fn entry(&self, i: usize, j: usize, k: usize, l: usize) -> &T {
        let n = self.dim();
        &self.r[((i * n + j) * n + k) * n + l]
    }

    /// `R(e_i, e_j) e_k`.
    pub fn apply_basis(&self, i: usize, j: usize, k: usize) -> Vector<T> {
        let n = self.dim();
        let start = ((i * n + j) * n + k) * n;
        Vector::new(self.r[start..start + n].to_vec())
    }

    /// `<R(e_i, e_j) e_k, e_l>` in the metric of the connection.
    pub fn lowered(&self, i: usize, j: usize, k: usize, l: usize) -> T {
        let n = self.dim();
        self.connection.metric().inner(&self.apply_basis(i, j, k), &Vector::basis(n, l))
    }

    /// Checks both antisymmetries, pair symmetry, and the first Bianchi identity.
    pub fn check_symmetries(&self) -> CurvatureSymmetryReport {
        let n = self.dim();
        let mut report = CurvatureSymmetryReport::default();
        let mut low = vec![T::zero(); n * n * n * n];
        for i in 0..n {
            for j in 0..n {
                for k in 0..n {
                    for l in 0..n {
                        low[((i * n + j) * n + k) * n + l] = self.lowered(i, j, k, l);
                    }
                }
            }
        }
        let at = |i: usize, j: usize, k: usize, l: usize| low[((i * n + j) * n + k) * n + l].clone();
        for i in 0..n {
            for j in 0..n {
                for k in 0..n {
                    for l in 0..n {
                        if !(self.entry(i, j, k, l).clone() + self.entry(j, i, k, l).clone())
                            .is_negligible()
                        {
                            report.first_pair.push((i, j, k, l));
                        }
                        if !(at(i, j, k, l) + at(i, j, l, k)).is_negligible() {
                            report.last_pair.push((i, j, k, l));
                        }
                        if !(at(i, j, k, l) - at(k, l, i, j)).is_negligible() {
                            report.pair_symmetry.push((i, j, k, l));
                        }
                    }
                    let cyclic = &(&self.apply_basis(i, j, k) + &self.apply_basis(j, k, i))
                        + &self.apply_basis(k, i, j);
                    if !cyclic.is_zero() {
                        report.bianchi.push((i, j, k));
                    }
                }
            }
        }
        report
    }

    /// `R(u, v) w` by trilinear contraction.
    pub fn apply(&self, u: &Vector<T>, v: &Vector<T>, w: &Vector<T>) -> Result<Vector<T>> {
        let n = self.dim();
        u.ensure_dim(n)?;
        v.ensure_dim(n)?;
        w.ensure_dim(n)?;
        Ok(self.apply_unchecked(u, v, w))
    }

    pub(crate) fn apply_unchecked(&self, u: &Vector<T>, v: &Vector<T>, w: &Vector<T>) -> Vector<T> {
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
                let uv = u[i].clone() * v[j].clone();
                for k in 0..n {
                    if w[k].is_zero() {
                        continue;
                    }
                    let c = uv.clone() * w[k].clone();
                    for (l, o) in out.iter_mut().enumerate() {
                        let r = self.entry(i, j, k, l);
                        if !r.is_zero() {
                            *o = o.clone() + c.clone() * r.clone();
                        }
                    }
                }
            }
        }
        Vector::new(out)
    }
}

/// `R(e_i,e_j)e_k = ∇_i(∇_j e_k) - ∇_j(∇_i e_k) - ∇_{[e_i,e_j]} e_k`, with the
/// outer derivatives expanded linearly over the Christoffel table.
pub fn riemann_tensor<T: Field>(conn: &Connection<T>) -> CurvatureTensor<T> {
    let n = conn.dim();
    let mut r = Vec::with_capacity(n * n * n * n);
    for i in 0..n {
        let ei = Vector::basis(n, i);
        for j in 0..n {
            let ej = Vector::basis(n, j);
            let bracket = conn.algebra().bracket_basis(i, j);
            for k in 0..n {
                let ek = Vector::basis(n, k);
                let value = &(&conn.covariant_unchecked(&ei, &conn.covariant_basis(j, k))
                    - &conn.covariant_unchecked(&ej, &conn.covariant_basis(i, k)))
                    - &conn.covariant_unchecked(&bracket, &ek);
                r.extend(value.into_coeffs());
            }
        }
    }
    CurvatureTensor { r, connection: conn.clone() }
}

/// Sectional curvature of a plane: the unnormalized numerator
/// `g(R(v,u)u, v)` and the normalized value.
#[derive(Clone, Debug, PartialEq)]
pub struct Sectional<T> {
    pub numerator: T,
    pub value: T,
}

pub fn sectional<T: Field>(
    rt: &CurvatureTensor<T>,
    g: &MetricTensor<T>,
    u: &Vector<T>,
    v: &Vector<T>,
) -> Result<Sectional<T>> {
    let n = rt.dim();
    if g.dim() != n {
        return Err(Error::DimensionMismatch { expected: n, found: g.dim() });
    }
    u.ensure_dim(n)?;
    v.ensure_dim(n)?;
    let area = g.pair_determinant(u, v);
    if area.is_negligible() {
        return Err(Error::DegeneratePlane);
    }
    let numerator = g.inner(&rt.apply_unchecked(v, u, u), v);
    let value = numerator.clone() / area;
    Ok(Sectional { numerator, value })
}

/// Normalized sectional value before and after a change of spanning pair.
#[derive(Clone, Debug, PartialEq)]
pub struct PlaneInvariance<T> {
    pub original: T,
    pub transformed: T,
}

impl<T: Field> PlaneInvariance<T> {
    pub fn consistent(&self) -> bool {
        (self.original.clone() - self.transformed.clone()).is_negligible()
    }
}

/// Compares the sectional curvature of `(u, v)` with that of
/// `(a u + b v, c u + d v)` for `transform = [a, b, c, d]`.
pub fn sectional_plane_invariance_check<T: Field>(
    rt: &CurvatureTensor<T>,
    g: &MetricTensor<T>,
    u: &Vector<T>,
    v: &Vector<T>,
    transform: [T; 4],
) -> Result<PlaneInvariance<T>> {
    let [a, b, c, d] = transform;
    if (a.clone() * d.clone() - b.clone() * c.clone()).is_negligible() {
        return Err(Error::SingularTransform);
    }
    let original = sectional(rt, g, u, v)?.value;
    let u2 = u.scale(&a).add_scaled(&b, v);
    let v2 = u.scale(&c).add_scaled(&d, v);
    let transformed = sectional(rt, g, &u2, &v2)?.value;
    Ok(PlaneInvariance { original, transformed })
}

/// Sum of normalized sectional curvatures over ordered pairs `j ≠ k` of a
/// g-orthogonal frame.
///
/// Each unordered plane is counted twice. The frame vectors need not be
/// unit length since the normalization divides it out.
pub fn scalar_curvature_in_frame<T: Field>(
    rt: &CurvatureTensor<T>,
    g: &MetricTensor<T>,
    frame: &[Vector<T>],
) -> Result<T> {
    let mut sum = T::zero();
    for (j, fj) in frame.iter().enumerate() {
        for fk in &frame[j + 1..] {
            let k = sectional(rt, g, fj, fk)?.value;
            sum = sum + k.clone() + k;
        }
    }
    Ok(sum)
}

/// Scalar curvature from a Gram–Schmidt frame of `g`.
pub fn scalar_curvature<T: Field>(rt: &CurvatureTensor<T>, g: &MetricTensor<T>) -> Result<T> {
    if g.dim() != rt.dim() {
        return Err(Error::DimensionMismatch { expected: rt.dim(), found: g.dim() });
    }
    scalar_curvature_in_frame(rt, g, &g.orthogonal_frame())
}
