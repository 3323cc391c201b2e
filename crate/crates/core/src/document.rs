//! JSON description of a Lie algebra with a metric and an optional drift.
//!
//! ```json
//! {
//!   "dim": 4,
//!   "basis": ["X", "Y", "Z", "W"],
//!   "brackets": [{"i": 0, "j": 1, "coeffs": ["0", "1", "0", "0"]}],
//!   "metric": "identity",
//!   "drift": ["0", "0", "1/2", "0"]
//! }
//! ```
//!
//! Coefficients are formulas in the [`expr`](crate::expr) language and may
//! refer to `alpha` and `beta` from `params`. Any decimal literal puts the
//! whole document in floating mode.

use std::collections::BTreeSet;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::algebra::{LieAlgebra, MetricTensor, Vector};
use crate::error::{Error, Result};
use crate::expr::{Bindings, Expr, Value};
use crate::scalar::{Field, Rational, Scalar};

/// A coefficient formula. JSON numbers are accepted and kept verbatim.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Formula(pub String);

impl Formula {
    pub fn parse(&self) -> Result<Expr> {
        Expr::parse(&self.0)
    }
}

impl fmt::Display for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl From<&str> for Formula {
    fn from(s: &str) -> Self {
        Formula(s.to_string())
    }
}

impl From<&Scalar> for Formula {
    fn from(s: &Scalar) -> Self {
        Formula(s.to_string())
    }
}

impl Serialize for Formula {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.serialize_str(&self.0)
    }
}

impl<'de> Deserialize<'de> for Formula {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Raw {
            Text(String),
            Number(serde_json::Number),
        }
        Ok(match Raw::deserialize(deserializer)? {
            Raw::Text(s) => Formula(s),
            Raw::Number(n) => Formula(n.to_string()),
        })
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BracketEntry {
    pub i: usize,
    pub j: usize,
    pub coeffs: Vec<Formula>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum MetricSpec {
    Named(String),
    Gram(Vec<Vec<Formula>>),
}

impl Default for MetricSpec {
    fn default() -> Self {
        MetricSpec::Named("identity".into())
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Params {
    pub alpha: Scalar,
    pub beta: Scalar,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AlgebraDocument {
    pub dim: usize,
    pub basis: Vec<String>,
    #[serde(default)]
    pub brackets: Vec<BracketEntry>,
    #[serde(default)]
    pub metric: MetricSpec,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub drift: Option<Vec<Formula>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub params: Option<Params>,
}

/// A document resolved to concrete numbers.
#[derive(Clone, Debug)]
pub struct Model<T> {
    pub algebra: LieAlgebra<T>,
    pub metric: MetricTensor<T>,
    pub drift: Option<Vector<T>>,
}

impl Model<Rational> {
    pub fn to_f64(&self) -> Model<f64> {
        Model {
            algebra: self.algebra.to_f64(),
            metric: self.metric.to_f64(),
            drift: self.drift.as_ref().map(Vector::to_f64),
        }
    }
}

/// Either an exact or a floating model, decided by the document's literals.
#[derive(Clone, Debug)]
pub enum ResolvedModel {
    Exact(Model<Rational>),
    Float(Model<f64>),
}

impl ResolvedModel {
    pub fn is_exact(&self) -> bool {
        matches!(self, ResolvedModel::Exact(_))
    }
}

fn field_error(path: &str, err: Error) -> Error {
    match err {
        Error::Parse(msg) => Error::Parse(format!("{path}: {msg}")),
        Error::Input(msg) => Error::Input(format!("{path}: {msg}")),
        Error::DimensionMismatch { expected, found } => {
            Error::Input(format!("{path}: expected {expected} entries, found {found}"))
        }
        other => other,
    }
}

impl AlgebraDocument {
    /// Parses a document; syntax errors carry the JSON line and column.
    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("documents always serialize")
    }

    /// Serializes a concrete model; coefficients are written as exact
    /// rationals or plain decimals.
    pub fn from_model<T: Field>(model: &Model<T>) -> Self {
        let alg = &model.algebra;
        let dim = alg.dim();
        let mut brackets = Vec::new();
        for i in 0..dim {
            for j in i + 1..dim {
                let v = alg.bracket_basis(i, j);
                if !v.is_zero() {
                    let coeffs = v.coeffs().iter().map(|c| Formula::from(&c.to_scalar())).collect();
                    brackets.push(BracketEntry { i, j, coeffs });
                }
            }
        }
        let gram = model.metric.gram();
        let is_identity = (0..dim).all(|i| {
            (0..dim).all(|j| if i == j { gram[i][j].is_one() } else { gram[i][j].is_zero() })
        });
        let metric = if is_identity {
            MetricSpec::default()
        } else {
            MetricSpec::Gram(
                gram.iter()
                    .map(|row| row.iter().map(|x| Formula::from(&x.to_scalar())).collect())
                    .collect(),
            )
        };
        AlgebraDocument {
            dim,
            basis: alg.labels().to_vec(),
            brackets,
            metric,
            drift: model
                .drift
                .as_ref()
                .map(|d| d.coeffs().iter().map(|c| Formula::from(&c.to_scalar())).collect()),
            params: None,
        }
    }

    fn formulas(&self) -> impl Iterator<Item = &Formula> {
        let gram: Vec<&Formula> = match &self.metric {
            MetricSpec::Gram(rows) => rows.iter().flatten().collect(),
            MetricSpec::Named(_) => Vec::new(),
        };
        self.brackets
            .iter()
            .flat_map(|b| b.coeffs.iter())
            .chain(gram)
            .chain(self.drift.iter().flatten())
    }

    /// True when any literal in the document is a decimal.
    pub fn is_floating(&self) -> bool {
        let params_float = self
            .params
            .as_ref()
            .is_some_and(|p| !p.alpha.is_exact() || !p.beta.is_exact());
        params_float
            || self
                .formulas()
                .any(|f| f.parse().map(|e| e.has_float_literal()).unwrap_or(false))
    }

    /// Checks the shape of the document without evaluating any formula.
    pub fn validate_shape(&self) -> Result<()> {
        let dim = self.dim;
        if dim == 0 {
            return Err(Error::Input("dim: must be positive".into()));
        }
        if self.basis.len() != dim {
            return Err(Error::Input(format!(
                "basis: expected {dim} labels, found {}",
                self.basis.len()
            )));
        }
        let mut labels = BTreeSet::new();
        for (k, label) in self.basis.iter().enumerate() {
            let valid = label.chars().next().is_some_and(|c| c.is_alphabetic() || c == '_')
                && label.chars().all(|c| c.is_alphanumeric() || c == '_');
            if !valid {
                return Err(Error::Input(format!("basis[{k}]: `{label}` is not a valid label")));
            }
            if !labels.insert(label) {
                return Err(Error::Input(format!("basis[{k}]: duplicate label `{label}`")));
            }
        }
        let mut seen = BTreeSet::new();
        for (k, b) in self.brackets.iter().enumerate() {
            if b.i >= b.j || b.j >= dim {
                return Err(Error::Parse(format!(
                    "brackets[{k}]: indices ({}, {}) must satisfy i < j < {dim}",
                    b.i, b.j
                )));
            }
            if !seen.insert((b.i, b.j)) {
                return Err(Error::Parse(format!(
                    "brackets[{k}]: duplicate bracket ({}, {})",
                    b.i, b.j
                )));
            }
            if b.coeffs.len() != dim {
                return Err(Error::Input(format!(
                    "brackets[{k}].coeffs: expected {dim} entries, found {}",
                    b.coeffs.len()
                )));
            }
        }
        match &self.metric {
            MetricSpec::Named(name) if name == "identity" => {}
            MetricSpec::Named(name) => {
                return Err(Error::Input(format!("metric: unknown metric `{name}`")));
            }
            MetricSpec::Gram(rows) => {
                if rows.len() != dim || rows.iter().any(|r| r.len() != dim) {
                    return Err(Error::Input(format!("metric: Gram matrix must be {dim}x{dim}")));
                }
            }
        }
        if let Some(drift) = &self.drift {
            if drift.len() != dim {
                return Err(Error::Input(format!(
                    "drift: expected {dim} entries, found {}",
                    drift.len()
                )));
            }
        }
        Ok(())
    }

    pub fn resolve(&self) -> Result<ResolvedModel> {
        self.validate_shape()?;
        if self.is_floating() {
            self.resolve_as::<f64>().map(ResolvedModel::Float)
        } else {
            self.resolve_as::<Rational>().map(ResolvedModel::Exact)
        }
    }

    /// Resolves in a caller-chosen field regardless of the literals used.
    pub fn resolve_as<T: Field>(&self) -> Result<Model<T>> {
        self.validate_shape()?;
        let mut env = Bindings::<T>::new();
        if let Some(p) = &self.params {
            env.insert("alpha".into(), Value::Scalar(T::from_scalar(&p.alpha)));
            env.insert("beta".into(), Value::Scalar(T::from_scalar(&p.beta)));
        }
        let eval = |path: String, f: &Formula| -> Result<T> {
            f.parse()
                .and_then(|e| e.eval_scalar(&env))
                .map_err(|e| field_error(&path, e))
        };
        let mut brackets = Vec::with_capacity(self.brackets.len());
        for (k, b) in self.brackets.iter().enumerate() {
            let coeffs = b
                .coeffs
                .iter()
                .enumerate()
                .map(|(c, f)| eval(format!("brackets[{k}].coeffs[{c}]"), f))
                .collect::<Result<Vec<T>>>()?;
            brackets.push((b.i, b.j, Vector::new(coeffs)));
        }
        let algebra = LieAlgebra::from_brackets(self.basis.clone(), brackets)
            .map_err(|e| field_error("brackets", e))?;
        let metric = match &self.metric {
            MetricSpec::Named(_) => MetricTensor::identity(self.dim),
            MetricSpec::Gram(rows) => {
                let mut gram = Vec::with_capacity(self.dim);
                for (r, row) in rows.iter().enumerate() {
                    gram.push(
                        row.iter()
                            .enumerate()
                            .map(|(c, f)| eval(format!("metric[{r}][{c}]"), f))
                            .collect::<Result<Vec<T>>>()?,
                    );
                }
                MetricTensor::new(gram).map_err(|e| field_error("metric", e))?
            }
        };
        let drift = match &self.drift {
            None => None,
            Some(d) => Some(Vector::new(
                d.iter()
                    .enumerate()
                    .map(|(c, f)| eval(format!("drift[{c}]"), f))
                    .collect::<Result<Vec<T>>>()?,
            )),
        };
        Ok(Model { algebra, metric, drift })
    }
}
