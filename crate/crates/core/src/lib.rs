//! Left-invariant Riemannian and Randers geometry of Lie groups, computed
//! from the structure constants of the Lie algebra.
//!
//! The pipeline runs [`riemann::levi_civita`] → [`riemann::riemann_tensor`] →
//! sectional and scalar curvature, then [`randers::parallel_fields`] →
//! [`randers::build_randers`] → [`randers::flag_curvature`]. Everything is
//! generic over [`Field`], so the same code runs in exact rational arithmetic
//! and in `f64`.

// Index loops read closest to the tensor formulas.
#![allow(clippy::needless_range_loop)]

pub mod algebra;
pub mod catalog;
pub mod document;
pub mod error;
pub mod expr;
pub mod linalg;
pub mod randers;
pub mod riemann;
pub mod sampling;
pub mod scalar;

pub use algebra::{
    check_para_hypercomplex, nijenhuis, Endomorphism, LieAlgebra, MetricTensor, StructureKind, Vector,
};
pub use error::{Error, Result};
pub use randers::{
    build_randers, check_finsler_positivity, flag_curvature, g_y, g_y_hessian_oracle, parallel_fields,
    randers_norm, Flag, RandersMetric,
};
pub use riemann::{
    levi_civita, riemann_tensor, scalar_curvature, sectional, sectional_plane_invariance_check,
    Connection, CurvatureTensor,
};
pub use scalar::{Field, Rational, Scalar, TOLERANCE};
