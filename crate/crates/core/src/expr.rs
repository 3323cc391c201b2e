//! A tiny expression language for closed-form formulas.
//!
//! Supports `+ - * / ^`, parentheses, integer and decimal literals, and named
//! variables. Variables may be bound to scalars or to vectors (basis labels
//! such as `X` are usually bound to basis vectors), so a formula like
//! `(a*bt-b*at)*(b*X-a*Y)` evaluates to a vector.

use std::collections::BTreeMap;
use std::fmt;

use crate::error::{Error, Result};
use crate::scalar::{parse_rational, Field, Scalar};

#[derive(Clone, Debug, PartialEq)]
pub enum Expr {
    Literal(Scalar),
    Var(String),
    Neg(Box<Expr>),
    Add(Box<Expr>, Box<Expr>),
    Sub(Box<Expr>, Box<Expr>),
    Mul(Box<Expr>, Box<Expr>),
    Div(Box<Expr>, Box<Expr>),
    Pow(Box<Expr>, u32),
}

/// Result of evaluating an [`Expr`].
#[derive(Clone, Debug, PartialEq)]
pub enum Value<T> {
    Scalar(T),
    Vector(Vec<T>),
}

impl<T: Field> Value<T> {
    /// Interprets a scalar zero as the zero vector of length `dim`.
    pub fn into_vector(self, dim: usize) -> Result<Vec<T>> {
        match self {
            Value::Vector(v) if v.len() == dim => Ok(v),
            Value::Vector(v) => Err(Error::DimensionMismatch { expected: dim, found: v.len() }),
            Value::Scalar(s) if s.is_zero() => Ok(vec![T::zero(); dim]),
            Value::Scalar(s) => Err(Error::Input(format!("expected a vector, got scalar {s}"))),
        }
    }

    pub fn into_scalar(self) -> Result<T> {
        match self {
            Value::Scalar(s) => Ok(s),
            Value::Vector(_) => Err(Error::Input("expected a scalar, got a vector".into())),
        }
    }
}

pub type Bindings<T> = BTreeMap<String, Value<T>>;

impl Expr {
    pub fn parse(text: &str) -> Result<Expr> {
        let tokens = tokenize(text)?;
        let mut parser = Parser { tokens: &tokens, pos: 0, source: text };
        let expr = parser.expr()?;
        if parser.pos != tokens.len() {
            return Err(parser.error("unexpected trailing input"));
        }
        Ok(expr)
    }

    /// True when the formula contains a decimal literal.
    pub fn has_float_literal(&self) -> bool {
        match self {
            Expr::Literal(s) => !s.is_exact(),
            Expr::Var(_) => false,
            Expr::Neg(e) | Expr::Pow(e, _) => e.has_float_literal(),
            Expr::Add(a, b) | Expr::Sub(a, b) | Expr::Mul(a, b) | Expr::Div(a, b) => {
                a.has_float_literal() || b.has_float_literal()
            }
        }
    }

    pub fn variables(&self) -> Vec<String> {
        let mut out = Vec::new();
        self.collect_variables(&mut out);
        out.sort();
        out.dedup();
        out
    }

    fn collect_variables(&self, out: &mut Vec<String>) {
        match self {
            Expr::Literal(_) => {}
            Expr::Var(name) => out.push(name.clone()),
            Expr::Neg(e) | Expr::Pow(e, _) => e.collect_variables(out),
            Expr::Add(a, b) | Expr::Sub(a, b) | Expr::Mul(a, b) | Expr::Div(a, b) => {
                a.collect_variables(out);
                b.collect_variables(out);
            }
        }
    }

    pub fn eval<T: Field>(&self, env: &Bindings<T>) -> Result<Value<T>> {
        match self {
            Expr::Literal(s) => Ok(Value::Scalar(T::from_scalar(s))),
            Expr::Var(name) => env
                .get(name)
                .cloned()
                .ok_or_else(|| Error::Input(format!("unbound variable `{name}`"))),
            Expr::Neg(e) => Ok(match e.eval(env)? {
                Value::Scalar(s) => Value::Scalar(-s),
                Value::Vector(v) => Value::Vector(v.into_iter().map(|x| -x).collect()),
            }),
            Expr::Add(a, b) => combine(a.eval(env)?, b.eval(env)?, |x, y| x + y),
            Expr::Sub(a, b) => combine(a.eval(env)?, b.eval(env)?, |x, y| x - y),
            Expr::Mul(a, b) => match (a.eval(env)?, b.eval(env)?) {
                (Value::Scalar(x), Value::Scalar(y)) => Ok(Value::Scalar(x * y)),
                (Value::Scalar(s), Value::Vector(v)) | (Value::Vector(v), Value::Scalar(s)) => {
                    Ok(Value::Vector(v.into_iter().map(|x| x * s.clone()).collect()))
                }
                (Value::Vector(_), Value::Vector(_)) => {
                    Err(Error::Input("cannot multiply two vectors".into()))
                }
            },
            Expr::Div(a, b) => {
                let den = b.eval(env)?.into_scalar()?;
                if den.is_zero() {
                    return Err(Error::Input(format!("division by zero in `{self}`")));
                }
                Ok(match a.eval(env)? {
                    Value::Scalar(x) => Value::Scalar(x / den),
                    Value::Vector(v) => Value::Vector(v.into_iter().map(|x| x / den.clone()).collect()),
                })
            }
            Expr::Pow(e, n) => {
                let base = e.eval(env)?.into_scalar()?;
                Ok(Value::Scalar((0..*n).fold(T::one(), |acc, _| acc * base.clone())))
            }
        }
    }

    pub fn eval_scalar<T: Field>(&self, env: &Bindings<T>) -> Result<T> {
        self.eval(env)?.into_scalar()
    }
}

fn combine<T: Field>(a: Value<T>, b: Value<T>, op: impl Fn(T, T) -> T) -> Result<Value<T>> {
    match (a, b) {
        (Value::Scalar(x), Value::Scalar(y)) => Ok(Value::Scalar(op(x, y))),
        (Value::Vector(x), Value::Vector(y)) if x.len() == y.len() => {
            Ok(Value::Vector(x.into_iter().zip(y).map(|(p, q)| op(p, q)).collect()))
        }
        (Value::Vector(x), Value::Vector(y)) => {
            Err(Error::DimensionMismatch { expected: x.len(), found: y.len() })
        }
        // A literal zero next to a vector stands for the zero vector.
        (Value::Scalar(s), Value::Vector(v)) if s.is_zero() => {
            Ok(Value::Vector(v.into_iter().map(|y| op(T::zero(), y)).collect()))
        }
        (Value::Vector(v), Value::Scalar(s)) if s.is_zero() => {
            Ok(Value::Vector(v.into_iter().map(|x| op(x, T::zero())).collect()))
        }
        _ => Err(Error::Input("cannot add a nonzero scalar to a vector".into())),
    }
}

impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Expr::Literal(s) => write!(f, "{s}"),
            Expr::Var(v) => write!(f, "{v}"),
            Expr::Neg(e) => write!(f, "-({e})"),
            Expr::Add(a, b) => write!(f, "({a} + {b})"),
            Expr::Sub(a, b) => write!(f, "({a} - {b})"),
            Expr::Mul(a, b) => write!(f, "{a}*{b}"),
            Expr::Div(a, b) => write!(f, "{a}/({b})"),
            Expr::Pow(e, n) => write!(f, "({e})^{n}"),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
enum Token {
    Number(String),
    Ident(String),
    Op(char),
}

fn tokenize(text: &str) -> Result<Vec<Token>> {
    let chars: Vec<char> = text.chars().collect();
    let mut tokens = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        if c.is_whitespace() {
            i += 1;
        } else if c.is_ascii_digit() || c == '.' {
            let start = i;
            while i < chars.len() && (chars[i].is_ascii_digit() || chars[i] == '.') {
                i += 1;
            }
            // exponent: 1e-3, 2.5E4
            if i < chars.len() && (chars[i] == 'e' || chars[i] == 'E') {
                let mut j = i + 1;
                if j < chars.len() && (chars[j] == '+' || chars[j] == '-') {
                    j += 1;
                }
                if j < chars.len() && chars[j].is_ascii_digit() {
                    i = j;
                    while i < chars.len() && chars[i].is_ascii_digit() {
                        i += 1;
                    }
                }
            }
            tokens.push(Token::Number(chars[start..i].iter().collect()));
        } else if c.is_alphabetic() || c == '_' {
            let start = i;
            while i < chars.len() && (chars[i].is_alphanumeric() || chars[i] == '_') {
                i += 1;
            }
            tokens.push(Token::Ident(chars[start..i].iter().collect()));
        } else if "+-*/^()".contains(c) {
            tokens.push(Token::Op(c));
            i += 1;
        } else {
            return Err(Error::Parse(format!("unexpected character `{c}` in `{text}`")));
        }
    }
    Ok(tokens)
}

struct Parser<'a> {
    tokens: &'a [Token],
    pos: usize,
    source: &'a str,
}

impl Parser<'_> {
    fn error(&self, msg: &str) -> Error {
        Error::Parse(format!("{msg} at token {} in `{}`", self.pos, self.source))
    }

    fn peek_op(&self) -> Option<char> {
        match self.tokens.get(self.pos) {
            Some(Token::Op(c)) => Some(*c),
            _ => None,
        }
    }

    fn expr(&mut self) -> Result<Expr> {
        let mut lhs = self.term()?;
        while let Some(op @ ('+' | '-')) = self.peek_op() {
            self.pos += 1;
            let rhs = self.term()?;
            lhs = if op == '+' {
                Expr::Add(Box::new(lhs), Box::new(rhs))
            } else {
                Expr::Sub(Box::new(lhs), Box::new(rhs))
            };
        }
        Ok(lhs)
    }

    fn term(&mut self) -> Result<Expr> {
        let mut lhs = self.unary()?;
        while let Some(op @ ('*' | '/')) = self.peek_op() {
            self.pos += 1;
            let rhs = self.unary()?;
            lhs = if op == '*' {
                Expr::Mul(Box::new(lhs), Box::new(rhs))
            } else {
                Expr::Div(Box::new(lhs), Box::new(rhs))
            };
        }
        Ok(lhs)
    }

    fn unary(&mut self) -> Result<Expr> {
        match self.peek_op() {
            Some('-') => {
                self.pos += 1;
                Ok(Expr::Neg(Box::new(self.unary()?)))
            }
            Some('+') => {
                self.pos += 1;
                self.unary()
            }
            _ => self.power(),
        }
    }

    fn power(&mut self) -> Result<Expr> {
        let base = self.atom()?;
        if self.peek_op() == Some('^') {
            self.pos += 1;
            match self.tokens.get(self.pos) {
                Some(Token::Number(n)) => {
                    let exp = n.parse::<u32>().map_err(|_| self.error("exponent must be a non-negative integer"))?;
                    self.pos += 1;
                    return Ok(Expr::Pow(Box::new(base), exp));
                }
                _ => return Err(self.error("exponent must be a non-negative integer")),
            }
        }
        Ok(base)
    }

    fn atom(&mut self) -> Result<Expr> {
        match self.tokens.get(self.pos).cloned() {
            Some(Token::Number(n)) => {
                self.pos += 1;
                let literal = match parse_rational(&n) {
                    Ok(r) => Scalar::Exact(r),
                    Err(_) => Scalar::Float(n.parse().map_err(|_| self.error("malformed number"))?),
                };
                Ok(Expr::Literal(literal))
            }
            Some(Token::Ident(name)) => {
                self.pos += 1;
                Ok(Expr::Var(name))
            }
            Some(Token::Op('(')) => {
                self.pos += 1;
                let inner = self.expr()?;
                if self.peek_op() != Some(')') {
                    return Err(self.error("expected `)`"));
                }
                self.pos += 1;
                Ok(inner)
            }
            _ => Err(self.error("expected a number, variable or `(`")),
        }
    }
}

/// Binds each basis label to its basis vector.
pub fn basis_bindings<T: Field>(labels: &[String]) -> Bindings<T> {
    let n = labels.len();
    labels
        .iter()
        .enumerate()
        .map(|(i, l)| {
            let mut v = vec![T::zero(); n];
            v[i] = T::one();
            (l.clone(), Value::Vector(v))
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::Rational;

    fn env() -> Bindings<Rational> {
        let mut env = basis_bindings(&["X".to_string(), "Y".to_string()]);
        env.insert("a".into(), Value::Scalar(Rational::ratio(1, 2)));
        env.insert("b".into(), Value::Scalar(Rational::ratio(-3, 1)));
        env
    }

    fn eval(text: &str) -> Value<Rational> {
        Expr::parse(text).unwrap().eval(&env()).unwrap()
    }

    #[test]
    fn precedence_and_unary_minus() {
        assert_eq!(eval("1+2*3"), Value::Scalar(Rational::ratio(7, 1)));
        assert_eq!(eval("-a^2"), Value::Scalar(Rational::ratio(-1, 4)));
        assert_eq!(eval("(1+a)^2/2"), Value::Scalar(Rational::ratio(9, 8)));
        assert_eq!(eval("3/4"), Value::Scalar(Rational::ratio(3, 4)));
        assert_eq!(eval("1-2-3"), Value::Scalar(Rational::ratio(-4, 1)));
    }

    #[test]
    fn vector_valued_formulas() {
        let v = eval("-(a*X + b*Y)/2");
        assert_eq!(v, Value::Vector(vec![Rational::ratio(-1, 4), Rational::ratio(3, 2)]));
        assert_eq!(eval("0").into_vector(2).unwrap(), vec![Rational::ratio(0, 1); 2]);
    }

    #[test]
    fn type_errors() {
        let e = env();
        assert!(Expr::parse("X*Y").unwrap().eval(&e).is_err());
        assert!(Expr::parse("1+X").unwrap().eval(&e).is_err());
        assert!(Expr::parse("X^2").unwrap().eval(&e).is_err());
        assert!(Expr::parse("a/(b+3)").unwrap().eval(&e).is_err());
        assert!(Expr::parse("q").unwrap().eval(&e).is_err());
    }

    #[test]
    fn syntax_errors() {
        for bad in ["1+", "(a", "a b", "2^x", "a $ b", ""] {
            assert!(Expr::parse(bad).is_err(), "{bad}");
        }
    }

    #[test]
    fn decimal_literals_mark_floating_mode() {
        assert!(Expr::parse("0.5*alpha").unwrap().has_float_literal());
        assert!(Expr::parse("1e-3").unwrap().has_float_literal());
        assert!(!Expr::parse("1/2*alpha").unwrap().has_float_literal());
        let mut env = Bindings::<f64>::new();
        env.insert("alpha".into(), Value::Scalar(4.0));
        assert_eq!(Expr::parse("0.5*alpha").unwrap().eval_scalar(&env).unwrap(), 2.0);
    }

    #[test]
    fn variable_listing() {
        let e = Expr::parse("(a*bt-b*at)^2 + q*c").unwrap();
        assert_eq!(e.variables(), ["a", "at", "b", "bt", "c", "q"]);
    }
}
