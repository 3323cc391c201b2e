//! Randers metrics `F(y) = sqrt(g(y,y)) + g(Q,y)` built from a left-invariant
//! metric and a left-invariant drift `Q`, with their fundamental tensor and
//! flag curvature in the Berwald case.
//!
//! When `Q` is parallel the Chern connection of `F` is the Levi-Civita
//! connection of `g`, so the Riemannian curvature tensor is the one to use in
//! the flag-curvature quotient. Non-parallel drifts are rejected there.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::algebra::{MetricTensor, Vector};
use crate::error::{Error, Result};
use crate::linalg;
use crate::riemann::{Connection, CurvatureTensor};
use crate::scalar::{Field, Scalar};

/// Default finite-difference step for [`g_y_hessian_oracle`].
pub const ORACLE_STEP: f64 = 1e-4;

/// Basis of the left-invariant fields `Q` with `∇_{e_i} Q = 0` for every `i`.
///
/// The condition is linear in `Q`: row `(i, k)` of the system holds
/// `Σ_j gamma[i][j][k] Q_j`. Exact mode uses fraction-free elimination, so
/// the dimension of the answer never depends on a tolerance.
pub fn parallel_fields<T: Field>(conn: &Connection<T>) -> Vec<Vector<T>> {
    let n = conn.dim();
    let mut rows = Vec::with_capacity(n * n);
    for i in 0..n {
        for k in 0..n {
            let row: Vec<T> = (0..n).map(|j| conn.gamma(i, j, k).clone()).collect();
            if row.iter().any(|x| !x.is_zero()) {
                rows.push(row);
            }
        }
    }
    T::nullspace(&rows, n).into_iter().map(Vector::new).collect()
}

pub fn is_parallel<T: Field>(conn: &Connection<T>, q: &Vector<T>) -> bool {
    let n = conn.dim();
    (0..n).all(|i| conn.covariant_unchecked(&Vector::basis(n, i), q).is_zero())
}

#[derive(Clone, Debug, PartialEq)]
pub struct RandersMetric<T> {
    base: MetricTensor<T>,
    drift: Vector<T>,
    drift_norm_squared: T,
    drift_norm: Scalar,
    berwald: bool,
}

/// Builds the Randers metric of `g` and `drift`, recording whether the drift
/// is parallel for `conn`.
pub fn build_randers<T: Field>(
    g: &MetricTensor<T>,
    drift: &Vector<T>,
    conn: &Connection<T>,
) -> Result<RandersMetric<T>> {
    let n = g.dim();
    drift.ensure_dim(n)?;
    if conn.dim() != n {
        return Err(Error::DimensionMismatch { expected: n, found: conn.dim() });
    }
    let norm_squared = g.norm_squared(drift);
    if !(T::one() - norm_squared.clone()).is_strictly_positive() {
        return Err(Error::NormBound { norm_squared: norm_squared.to_string() });
    }
    let drift_norm = match norm_squared.sqrt_exact() {
        Some(r) => r.to_scalar(),
        None => Scalar::Float(norm_squared.to_f64().sqrt()),
    };
    Ok(RandersMetric {
        base: g.clone(),
        drift: drift.clone(),
        drift_norm_squared: norm_squared,
        drift_norm,
        berwald: is_parallel(conn, drift),
    })
}

impl<T: Field> RandersMetric<T> {
    pub fn base(&self) -> &MetricTensor<T> {
        &self.base
    }

    pub fn drift(&self) -> &Vector<T> {
        &self.drift
    }

    pub fn drift_norm(&self) -> &Scalar {
        &self.drift_norm
    }

    pub fn drift_norm_squared(&self) -> &T {
        &self.drift_norm_squared
    }

    pub fn is_berwald(&self) -> bool {
        self.berwald
    }

    pub fn dim(&self) -> usize {
        self.base.dim()
    }

    pub fn to_f64(&self) -> RandersMetric<f64> {
        RandersMetric {
            base: self.base.to_f64(),
            drift: self.drift.to_f64(),
            drift_norm_squared: self.drift_norm_squared.to_f64(),
            drift_norm: Scalar::Float(self.drift_norm.to_f64()),
            berwald: self.berwald,
        }
    }
}

fn randers_value<S: Field>(base: &MetricTensor<S>, drift: &Vector<S>, y: &Vector<S>) -> S {
    let alpha = base.norm_squared(y).sqrt_exact().unwrap_or_else(S::zero);
    alpha + base.inner(drift, y)
}

/// `F(y) = sqrt(g(y,y)) + g(Q,y)`, exact when `g(y,y)` is a rational square.
pub fn randers_norm<T: Field>(rm: &RandersMetric<T>, y: &Vector<T>) -> Result<Scalar> {
    y.ensure_dim(rm.dim())?;
    if rm.base.norm_squared(y).sqrt_exact().is_some() {
        Ok(randers_value(&rm.base, &rm.drift, y).to_scalar())
    } else {
        let f = rm.to_f64();
        Ok(Scalar::Float(randers_value(&f.base, &f.drift, &y.to_f64())))
    }
}

/// Closed-form fundamental tensor at a fixed pole `ybar` with `|ybar|` known.
struct FundamentalTensor<'a, S> {
    base: &'a MetricTensor<S>,
    drift: &'a Vector<S>,
    pole: &'a Vector<S>,
    pole_norm: S,
}

impl<S: Field> FundamentalTensor<'_, S> {
    /// `g(U,V) + g(Q,U) g(Q,V) - g(Q,Ȳ) g(Ȳ,V) g(Ȳ,U) / |Ȳ|³
    ///  + (g(Q,U) g(Ȳ,V) + g(Q,Ȳ) g(U,V) + g(Q,V) g(Ȳ,U)) / |Ȳ|`.
    fn eval(&self, u: &Vector<S>, v: &Vector<S>) -> S {
        let g = self.base;
        let uv = g.inner(u, v);
        let qu = g.inner(self.drift, u);
        let qv = g.inner(self.drift, v);
        let qy = g.inner(self.drift, self.pole);
        let yu = g.inner(self.pole, u);
        let yv = g.inner(self.pole, v);
        let n = self.pole_norm.clone();
        let n3 = n.clone() * n.clone() * n.clone();
        uv.clone() + qu.clone() * qv.clone() - qy.clone() * yv.clone() * yu.clone() / n3
            + (qu * yv + qy * uv + qv * yu) / n
    }
}

/// Runs `f` exactly when `|pole|` is rational, otherwise in floating point.
fn with_fundamental<T: Field>(
    rm: &RandersMetric<T>,
    pole: &Vector<T>,
    vectors: &[&Vector<T>],
    exact: impl FnOnce(&FundamentalTensor<'_, T>, &[&Vector<T>]) -> Result<T>,
    float: impl FnOnce(&FundamentalTensor<'_, f64>, &[&Vector<f64>]) -> Result<f64>,
) -> Result<Scalar> {
    let n = rm.dim();
    pole.ensure_dim(n)?;
    for v in vectors {
        v.ensure_dim(n)?;
    }
    let norm_squared = rm.base.norm_squared(pole);
    if pole.is_zero() || norm_squared.is_negligible() {
        return Err(Error::ZeroDirection);
    }
    // Every term dividing by |pole| carries a drift factor.
    let exact_norm = if rm.drift.is_zero() { Some(T::one()) } else { norm_squared.sqrt_exact() };
    match exact_norm {
        Some(pole_norm) => {
            let ft = FundamentalTensor { base: &rm.base, drift: &rm.drift, pole, pole_norm };
            exact(&ft, vectors).map(|x| x.to_scalar())
        }
        None => {
            let rf = rm.to_f64();
            let pf = pole.to_f64();
            let vf: Vec<Vector<f64>> = vectors.iter().map(|v| v.to_f64()).collect();
            let refs: Vec<&Vector<f64>> = vf.iter().collect();
            let pole_norm = rf.base.norm_squared(&pf).sqrt();
            let ft = FundamentalTensor { base: &rf.base, drift: &rf.drift, pole: &pf, pole_norm };
            float(&ft, &refs).map(Scalar::Float)
        }
    }
}

/// Fundamental tensor `g_ȳ(u, v)` of the Randers metric, in closed form.
pub fn g_y<T: Field>(
    rm: &RandersMetric<T>,
    ybar: &Vector<T>,
    u: &Vector<T>,
    v: &Vector<T>,
) -> Result<Scalar> {
    with_fundamental(
        rm,
        ybar,
        &[u, v],
        |ft, w| Ok(ft.eval(w[0], w[1])),
        |ft, w| Ok(ft.eval(w[0], w[1])),
    )
}

/// `½ ∂²/∂s∂t F²(ȳ + s u + t v)` at `s = t = 0` by a central mixed difference
/// with step `h`, evaluated in floating point.
pub fn g_y_hessian_oracle<T: Field>(
    rm: &RandersMetric<T>,
    ybar: &Vector<T>,
    u: &Vector<T>,
    v: &Vector<T>,
    h: f64,
) -> Result<f64> {
    let n = rm.dim();
    for w in [ybar, u, v] {
        w.ensure_dim(n)?;
    }
    if ybar.is_zero() {
        return Err(Error::ZeroDirection);
    }
    if h.is_nan() || h <= 0.0 {
        return Err(Error::Input(format!("finite-difference step must be positive, got {h}")));
    }
    let rf = rm.to_f64();
    let (y, u, v) = (ybar.to_f64(), u.to_f64(), v.to_f64());
    let f2 = |s: f64, t: f64| {
        let p = y.add_scaled(&s, &u).add_scaled(&t, &v);
        let f = randers_value(&rf.base, &rf.drift, &p);
        f * f
    };
    let mixed = f2(h, h) - f2(h, -h) - f2(-h, h) + f2(-h, -h);
    Ok(0.5 * mixed / (4.0 * h * h))
}

/// A pole direction together with a transverse edge spanning the flag's plane.
#[derive(Clone, Debug, PartialEq)]
pub struct Flag<T> {
    pole: Vector<T>,
    edge: Vector<T>,
}

impl<T: Field> Flag<T> {
    /// Validates that the pole is nonzero and the pair spans a plane in `g`.
    pub fn new(pole: Vector<T>, edge: Vector<T>, g: &MetricTensor<T>) -> Result<Self> {
        pole.ensure_dim(g.dim())?;
        edge.ensure_dim(g.dim())?;
        if pole.is_zero() {
            return Err(Error::ZeroDirection);
        }
        if g.pair_determinant(&pole, &edge).is_negligible() {
            return Err(Error::DegeneratePlane);
        }
        Ok(Flag { pole, edge })
    }

    pub fn pole(&self) -> &Vector<T> {
        &self.pole
    }

    pub fn edge(&self) -> &Vector<T> {
        &self.edge
    }
}

/// Flag curvature `g_Y(R(U,Y)Y, U) / (g_Y(Y,Y) g_Y(U,U) - g_Y(Y,U)²)` with
/// pole `Y` and edge `U`.
pub fn flag_curvature<T: Field>(
    rm: &RandersMetric<T>,
    rt: &CurvatureTensor<T>,
    flag: &Flag<T>,
) -> Result<Scalar> {
    if !rm.berwald {
        return Err(Error::NonBerwald);
    }
    if rt.dim() != rm.dim() {
        return Err(Error::DimensionMismatch { expected: rm.dim(), found: rt.dim() });
    }
    let (y, u) = (&flag.pole, &flag.edge);
    let r = rt.apply_unchecked(u, y, y);
    fn quotient<S: Field>(ft: &FundamentalTensor<'_, S>, w: &[&Vector<S>]) -> Result<S> {
        let (r, u) = (w[0], w[1]);
        let y = ft.pole;
        let yu = ft.eval(y, u);
        let area = ft.eval(y, y) * ft.eval(u, u) - yu.clone() * yu;
        if area.is_negligible() {
            return Err(Error::DegeneratePlane);
        }
        Ok(ft.eval(r, u) / area)
    }
    with_fundamental(rm, y, &[&r, u], quotient, quotient)
}

/// Result of [`check_finsler_positivity`].
#[derive(Clone, Debug, PartialEq)]
pub struct PositivityReport {
    pub samples: usize,
    /// Sampled directions at which `[g_y(e_i, e_j)]` was not positive definite.
    pub failures: Vec<Vector<f64>>,
}

impl PositivityReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

/// Samples directions uniformly from the cube `[-1, 1]^n` and checks that the
/// fundamental tensor is positive definite at each.
pub fn check_finsler_positivity<T: Field>(
    rm: &RandersMetric<T>,
    samples: usize,
    seed: u64,
) -> PositivityReport {
    let rf = rm.to_f64();
    let n = rf.dim();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut failures = Vec::new();
    let mut taken = 0;
    while taken < samples {
        let y = Vector::new((0..n).map(|_| rng.gen_range(-1.0..=1.0)).collect::<Vec<f64>>());
        if rf.base.norm_squared(&y) < 1e-6 {
            continue;
        }
        taken += 1;
        let ft = FundamentalTensor {
            base: &rf.base,
            drift: &rf.drift,
            pole: &y,
            pole_norm: rf.base.norm_squared(&y).sqrt(),
        };
        let m: Vec<Vec<f64>> = (0..n)
            .map(|i| (0..n).map(|j| ft.eval(&Vector::basis(n, i), &Vector::basis(n, j))).collect())
            .collect();
        if !linalg::is_positive_definite(&m) {
            failures.push(y);
        }
    }
    PositivityReport { samples, failures }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::LieAlgebra;
    use crate::riemann::{levi_civita, riemann_tensor};
    use crate::scalar::Rational;

    fn v(c: &[i64]) -> Vector<Rational> {
        Vector::from(c)
    }

    fn q(n: i64, d: i64) -> Rational {
        Rational::ratio(n, d)
    }

    fn case1_conn() -> Connection<Rational> {
        let labels = ["X", "Y", "Z", "W"].map(String::from).to_vec();
        let a = LieAlgebra::from_brackets(labels, vec![(0, 1, v(&[0, 1, 0, 0])), (0, 3, v(&[0, 0, 0, 1]))])
            .unwrap();
        levi_civita(&a, &MetricTensor::identity(4)).unwrap()
    }

    fn drift(c: [Rational; 4]) -> Vector<Rational> {
        Vector::new(c.to_vec())
    }

    fn z(scale: Rational) -> Vector<Rational> {
        drift([q(0, 1), q(0, 1), scale, q(0, 1)])
    }

    #[test]
    fn case1_parallel_space_is_z() {
        assert_eq!(parallel_fields(&case1_conn()), vec![v(&[0, 0, 1, 0])]);
    }

    #[test]
    fn build_randers_examples() {
        let conn = case1_conn();
        let g = MetricTensor::identity(4);
        assert!(build_randers(&g, &z(q(1, 2)), &conn).unwrap().is_berwald());
        assert!(matches!(build_randers(&g, &z(q(2, 1)), &conn), Err(Error::NormBound { .. })));
        assert!(matches!(build_randers(&g, &z(q(1, 1)), &conn), Err(Error::NormBound { .. })));
        let x = drift([q(1, 2), q(0, 1), q(0, 1), q(0, 1)]);
        assert!(!build_randers(&g, &x, &conn).unwrap().is_berwald());
    }

    #[test]
    fn norm_examples() {
        let conn = case1_conn();
        let g = MetricTensor::identity(4);
        let rm = build_randers(&g, &z(q(1, 2)), &conn).unwrap();
        assert_eq!(randers_norm(&rm, &v(&[0, 0, 1, 0])).unwrap(), Scalar::Exact(q(3, 2)));
        assert_eq!(randers_norm(&rm, &v(&[0, 0, -1, 0])).unwrap(), Scalar::Exact(q(1, 2)));
        let flat = build_randers(&g, &Vector::zeros(4), &conn).unwrap();
        assert_eq!(randers_norm(&flat, &v(&[1, 0, 0, 0])).unwrap(), Scalar::Exact(q(1, 1)));
        assert_eq!(randers_norm(&flat, &Vector::zeros(4)).unwrap(), Scalar::Exact(q(0, 1)));
        assert!(!randers_norm(&rm, &v(&[1, 1, 0, 0])).unwrap().is_exact());
    }

    #[test]
    fn g_y_at_zero_direction_is_an_error() {
        let conn = case1_conn();
        let rm = build_randers(&MetricTensor::identity(4), &z(q(1, 2)), &conn).unwrap();
        let e = v(&[1, 0, 0, 0]);
        assert_eq!(g_y(&rm, &Vector::zeros(4), &e, &e).unwrap_err(), Error::ZeroDirection);
        assert!(g_y_hessian_oracle(&rm, &Vector::zeros(4), &e, &e, 1e-4).is_err());
    }

    #[test]
    fn zero_drift_gives_base_metric() {
        let conn = case1_conn();
        let rm = build_randers(&MetricTensor::identity(4), &Vector::zeros(4), &conn).unwrap();
        let val = g_y(&rm, &v(&[1, 2, 2, 0]), &v(&[1, 1, 0, 3]), &v(&[2, -1, 5, 1])).unwrap();
        assert_eq!(val, Scalar::Exact(q(4, 1)));
    }

    #[test]
    fn oracle_matches_closed_form_on_case1() {
        let conn = case1_conn();
        let rm = build_randers(&MetricTensor::identity(4), &z(q(1, 2)), &conn).unwrap();
        let y = v(&[1, 0, 1, 0]);
        let closed = g_y(&rm, &y, &y, &y).unwrap().to_f64();
        let fd = g_y_hessian_oracle(&rm, &y, &y, &y, ORACLE_STEP).unwrap();
        assert!((closed - fd).abs() < 1e-6, "{closed} vs {fd}");
    }

    #[test]
    fn non_berwald_flag_curvature_is_refused() {
        let conn = case1_conn();
        let g = MetricTensor::identity(4);
        let rm = build_randers(&g, &drift([q(1, 2), q(0, 1), q(0, 1), q(0, 1)]), &conn).unwrap();
        let rt = riemann_tensor(&conn);
        let flag = Flag::new(v(&[1, 0, 0, 0]), v(&[0, 1, 0, 0]), &g).unwrap();
        assert_eq!(flag_curvature(&rm, &rt, &flag).unwrap_err(), Error::NonBerwald);
    }

    #[test]
    fn flag_validation() {
        let g = MetricTensor::<Rational>::identity(4);
        assert_eq!(Flag::new(Vector::zeros(4), v(&[1, 0, 0, 0]), &g).unwrap_err(), Error::ZeroDirection);
        assert_eq!(
            Flag::new(v(&[1, 1, 0, 0]), v(&[2, 2, 0, 0]), &g).unwrap_err(),
            Error::DegeneratePlane
        );
    }

    #[test]
    fn case1_flag_curvature_is_minus_one() {
        let conn = case1_conn();
        let g = MetricTensor::identity(4);
        let rm = build_randers(&g, &z(q(1, 2)), &conn).unwrap();
        let rt = riemann_tensor(&conn);
        let flag = Flag::new(v(&[1, 0, 0, 0]), v(&[0, 1, 0, 0]), &g).unwrap();
        assert_eq!(flag_curvature(&rm, &rt, &flag).unwrap(), Scalar::Exact(q(-1, 1)));
    }

    #[test]
    fn positivity_near_the_norm_bound() {
        let conn = case1_conn();
        let g = MetricTensor::identity(4);
        for d in [z(q(1, 2)), z(q(999, 1000)), Vector::zeros(4)] {
            let rm = build_randers(&g, &d, &conn).unwrap();
            let report = check_finsler_positivity(&rm, 100, 7);
            assert!(report.passed(), "{report:?}");
            assert_eq!(report.samples, 100);
        }
    }
}
