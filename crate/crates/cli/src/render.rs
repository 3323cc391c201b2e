use liegeom::catalog::format_combination;
use liegeom::scalar::round_significant;
use liegeom::{Field, Scalar, Vector};
use serde_json::{json, Value};

/// Number formatting shared by the text and JSON outputs.
#[derive(Clone, Copy, Debug)]
pub struct Style {
    pub precision: usize,
}

impl Style {
    /// Rationals as `"p/q"` strings, floats as numbers rounded to the precision.
    pub fn scalar(&self, s: &Scalar) -> Value {
        match s {
            Scalar::Exact(r) => Value::String(r.to_string()),
            Scalar::Float(x) => json!(round_significant(*x, self.precision)),
        }
    }

    pub fn num<T: Field>(&self, x: &T) -> Value {
        self.scalar(&x.to_scalar())
    }

    pub fn vector<T: Field>(&self, v: &Vector<T>) -> Value {
        Value::Array(v.coeffs().iter().map(|x| self.num(x)).collect())
    }

    pub fn text<T: Field>(&self, x: &T) -> String {
        self.text_scalar(&x.to_scalar())
    }

    pub fn text_scalar(&self, s: &Scalar) -> String {
        s.format(self.precision)
    }

    /// A vector as a combination of basis labels.
    pub fn combination<T: Field>(&self, labels: &[String], v: &Vector<T>) -> String {
        if T::EXACT {
            return format_combination(labels, v);
        }
        let rounded: Vec<f64> = v.coeffs().iter().map(|x| round_significant(x.to_f64(), self.precision)).collect();
        format_combination(labels, &Vector::new(rounded))
    }
}
