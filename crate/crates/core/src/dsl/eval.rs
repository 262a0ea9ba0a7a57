use std::fmt;

use crate::error::Error;
use crate::oracle::{pair, TestFunction};
use crate::projection::{classify, order_zero_partial, project, FunctionKind, StandardDistribution};
use crate::scalar::{Rational, ScalarCoeff};
use crate::sphere::SphericalSymbol;
use crate::thick::{thick_partial, Multiplier, ThickDistribution};

use super::parser::{Expr, ExprKind, Expression, Span};

/// Result of evaluating an expression.
#[derive(Clone, Debug, PartialEq)]
pub enum Value {
    Scalar(ScalarCoeff),
    /// A smooth function away from the origin: a sum of `r^k ψ(n)`.
    Multiplier(Multiplier),
    Thick(ThickDistribution),
    Standard(StandardDistribution),
    Test(TestFunction),
    Real(f64),
}

impl Value {
    pub fn kind_name(&self) -> &'static str {
        match self {
            Value::Scalar(_) => "scalar",
            Value::Multiplier(_) => "function",
            Value::Thick(_) => "thick distribution",
            Value::Standard(_) => "distribution",
            Value::Test(_) => "test function",
            Value::Real(_) => "real number",
        }
    }
}

/// Evaluation failure, located at the sub-expression that caused it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EvalError {
    pub message: String,
    pub span: Span,
}

impl fmt::Display for EvalError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.message)
    }
}

impl std::error::Error for EvalError {}

type EResult<T> = Result<T, EvalError>;

fn fail<T>(span: Span, message: impl Into<String>) -> EResult<T> {
    Err(EvalError { message: message.into(), span })
}

fn lift(span: Span) -> impl Fn(Error) -> EvalError {
    move |e| EvalError { message: e.to_string(), span }
}

/// Evaluates a parsed expression.
pub fn evaluate(expr: &Expression) -> Result<Value, EvalError> {
    Evaluator { dim: expr.dim }.eval(&expr.root)
}

struct Evaluator {
    dim: usize,
}

impl Evaluator {
    fn eval(&self, e: &Expr) -> EResult<Value> {
        let dim = self.dim;
        let span = e.span;
        match &e.kind {
            ExprKind::Int(v) => Ok(Value::Scalar(ScalarCoeff::from_rational(Rational::from_integer(v.clone())))),
            ExprKind::C => Ok(Value::Scalar(ScalarCoeff::c())),
            ExprKind::R => Ok(Value::Multiplier(Multiplier::r_power(dim, 1))),
            ExprKind::N(i) => Ok(Value::Multiplier(Multiplier::n(dim, *i))),
            ExprKind::X(i) => Ok(Value::Multiplier(Multiplier::x(dim, *i))),
            ExprKind::Gauss => Ok(Value::Test(TestFunction::gaussian(dim))),
            ExprKind::Neg(a) => self.negate(self.eval(a)?, span),
            ExprKind::Add(a, b) => self.add(self.eval(a)?, self.eval(b)?, span),
            ExprKind::Sub(a, b) => {
                let rhs = self.negate(self.eval(b)?, span)?;
                self.add(self.eval(a)?, rhs, span)
            }
            ExprKind::Mul(a, b) => self.mul(self.eval(a)?, self.eval(b)?, span),
            ExprKind::Div(a, b) => {
                let inverse = self.power(self.eval(b)?, -1, b.span)?;
                self.mul(self.eval(a)?, inverse, span)
            }
            ExprKind::Pow(a, k) => self.power(self.eval(a)?, *k, span),
            ExprKind::Pf(a) => Ok(Value::Thick(ThickDistribution::pf_of(&self.function(self.eval(a)?, a.span, "Pf")?))),
            ExprKind::Pv(a) => self.principal_value(self.function(self.eval(a)?, a.span, "pv")?, span),
            ExprKind::ThickDelta { order, density } => {
                let g = self.density(self.eval(density)?, density.span)?;
                Ok(Value::Thick(ThickDistribution::delta(*order, g)))
            }
            ExprKind::Delta => Ok(Value::Standard(StandardDistribution::delta(dim, ScalarCoeff::one()))),
            ExprKind::DeltaDerivative(alpha) => Ok(Value::Standard(StandardDistribution::delta_derivative(alpha.clone(), ScalarCoeff::one()))),
            ExprKind::DStar(axis, a) => {
                let t = self.thick(self.eval(a)?, a.span, "dstar")?;
                Ok(Value::Thick(thick_partial(*axis, &t)))
            }
            ExprKind::DZero(axis, a) => {
                let t = self.thick(self.eval(a)?, a.span, "dzero")?;
                order_zero_partial(*axis, &t).map(Value::Thick).map_err(lift(a.span))
            }
            ExprKind::Project(a) => {
                let t = self.thick(self.eval(a)?, a.span, "project")?;
                Ok(Value::Standard(project(&t)))
            }
            ExprKind::Moment(a) => {
                let g = self.density(self.eval(a)?, a.span)?;
                Ok(Value::Scalar(g.sphere_moment()))
            }
            ExprKind::Pair(a, b) => {
                let t = self.thick(self.eval(a)?, a.span, "pair")?;
                let phi = match self.eval(b)? {
                    Value::Test(phi) => phi,
                    other => return fail(b.span, format!("pair expects a test function such as `n1*r^-2*gauss`, found a {}", other.kind_name())),
                };
                pair(&t, &phi).map(Value::Real).map_err(lift(span))
            }
        }
    }

    fn negate(&self, v: Value, _span: Span) -> EResult<Value> {
        Ok(match v {
            Value::Scalar(c) => Value::Scalar(-c),
            Value::Multiplier(m) => Value::Multiplier(-&m),
            Value::Thick(t) => Value::Thick(-t),
            Value::Standard(s) => Value::Standard(-s),
            Value::Test(t) => Value::Test(t.scale(&-Rational::from_integer(1.into()))),
            Value::Real(x) => Value::Real(-x),
        })
    }

    fn as_function(&self, v: &Value) -> Option<Multiplier> {
        match v {
            Value::Scalar(c) => Some(Multiplier::constant(self.dim, c.clone())),
            Value::Multiplier(m) => Some(m.clone()),
            _ => None,
        }
    }

    fn function(&self, v: Value, span: Span, what: &str) -> EResult<Multiplier> {
        match self.as_function(&v) {
            Some(m) => Ok(m),
            None => fail(span, format!("{what} expects a function of n and r, found a {}", v.kind_name())),
        }
    }

    /// A function of `n` alone, as a density on the sphere.
    fn density(&self, v: Value, span: Span) -> EResult<SphericalSymbol> {
        let m = self.function(v, span, "a density")?;
        if m.is_zero() {
            return Ok(SphericalSymbol::zero(self.dim));
        }
        match m.as_homogeneous() {
            Some((0, p)) => Ok(p.clone()),
            _ => fail(span, "a density must be a polynomial in n1..n_dim without powers of r"),
        }
    }

    /// Thick value; plain functions are read as their finite part.
    fn thick(&self, v: Value, span: Span, what: &str) -> EResult<ThickDistribution> {
        match v {
            Value::Thick(t) => Ok(t),
            other => match self.as_function(&other) {
                Some(m) => Ok(ThickDistribution::pf_of(&m)),
                None => fail(span, format!("{what} expects a thick distribution, found a {}", other.kind_name())),
            },
        }
    }

    fn principal_value(&self, m: Multiplier, span: Span) -> EResult<Value> {
        let mut out = StandardDistribution::zero(self.dim);
        for (k, p) in m.terms() {
            if classify(self.dim, k, p) != FunctionKind::PrincipalValue {
                return fail(span, format!("pv needs degree -{} and zero sphere mean; r^{k} term does not qualify", self.dim));
            }
            out = out + StandardDistribution::homogeneous(k, p.clone());
        }
        Ok(Value::Standard(out))
    }

    fn standard_of(m: &Multiplier) -> StandardDistribution {
        m.terms().fold(StandardDistribution::zero(m.dim()), |acc, (k, p)| acc + StandardDistribution::homogeneous(k, p.clone()))
    }

    fn add(&self, a: Value, b: Value, span: Span) -> EResult<Value> {
        use Value::*;
        let dims = lift(span);
        match (a, b) {
            (Scalar(x), Scalar(y)) => Ok(Scalar(x + y)),
            (Real(x), Real(y)) => Ok(Real(x + y)),
            (Real(x), Scalar(c)) | (Scalar(c), Real(x)) => Ok(Real(x + c.evaluate(self.dim))),
            (Thick(x), Thick(y)) => x.checked_add(&y).map(Thick).map_err(dims),
            (Standard(x), Standard(y)) => x.checked_add(&y).map(Standard).map_err(dims),
            (Test(x), Test(y)) => x.checked_add(&y).map(Test).map_err(dims),
            (Standard(s), other) | (other, Standard(s)) if self.as_function(&other).is_some() => {
                let m = self.as_function(&other).expect("checked");
                s.checked_add(&Self::standard_of(&m)).map(Standard).map_err(dims)
            }
            (a, b) => match (self.as_function(&a), self.as_function(&b)) {
                (Some(x), Some(y)) => x.checked_add(&y).map(Multiplier).map_err(dims),
                _ => fail(span, format!("cannot add a {} and a {}", a.kind_name(), b.kind_name())),
            },
        }
    }

    fn mul(&self, a: Value, b: Value, span: Span) -> EResult<Value> {
        use Value::*;
        let dims = lift(span);
        match (a, b) {
            (Scalar(x), Scalar(y)) => Ok(Scalar(x * y)),
            (Real(x), Real(y)) => Ok(Real(x * y)),
            (Real(x), Scalar(c)) | (Scalar(c), Real(x)) => Ok(Real(x * c.evaluate(self.dim))),
            (Scalar(c), Thick(t)) | (Thick(t), Scalar(c)) => Ok(Thick(t.scale(&c))),
            (Scalar(c), Standard(s)) | (Standard(s), Scalar(c)) => Ok(Standard(s.scale(&c))),
            (Multiplier(m), Thick(t)) | (Thick(t), Multiplier(m)) => m.apply(&t).map(Thick).map_err(dims),
            (Multiplier(m), Standard(s)) | (Standard(s), Multiplier(m)) => match m.as_constant() {
                Some(c) => Ok(Standard(s.scale(&c))),
                None => fail(span, "only constants can multiply a classical distribution"),
            },
            (Test(phi), other) | (other, Test(phi)) => match self.as_function(&other) {
                Some(m) => {
                    let mut out = TestFunction::zero(self.dim);
                    for (k, p) in m.terms() {
                        let part = phi.times_homogeneous(k, p).ok_or_else(|| EvalError {
                            message: "test function coefficients must be rational (no C)".into(),
                            span,
                        })?;
                        out = out.checked_add(&part).map_err(lift(span))?;
                    }
                    Ok(Test(out))
                }
                None => fail(span, format!("cannot multiply a test function by a {}", other.kind_name())),
            },
            (a, b) => match (self.as_function(&a), self.as_function(&b)) {
                (Some(x), Some(y)) => x.checked_mul(&y).map(Multiplier).map_err(dims),
                _ => fail(span, format!("cannot multiply a {} by a {}", a.kind_name(), b.kind_name())),
            },
        }
    }

    fn power(&self, v: Value, k: i32, span: Span) -> EResult<Value> {
        match v {
            Value::Scalar(c) if k >= 0 => Ok(Value::Scalar(c.pow(k as u32))),
            Value::Scalar(c) => match c.inverse() {
                Some(inv) => Ok(Value::Scalar(inv.pow(k.unsigned_abs()))),
                None if c.is_zero() => fail(span, "division by zero"),
                None => fail(span, "only single-term coefficients can be inverted"),
            },
            Value::Real(x) => Ok(Value::Real(x.powi(k))),
            Value::Multiplier(m) => {
                if k < 0 && m.is_zero() {
                    return fail(span, "division by zero");
                }
                m.powi(k).map(Value::Multiplier).map_err(lift(span))
            }
            other => fail(span, format!("cannot raise a {} to a power", other.kind_name())),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dsl::parse;

    fn eval(text: &str, dim: usize) -> Value {
        evaluate(&parse(text, dim).unwrap()).unwrap()
    }

    #[test]
    fn derivative_of_pf_one() {
        let want = ThickDistribution::delta(-2, SphericalSymbol::n(3, 1).scale(&ScalarCoeff::c()));
        assert_eq!(eval("dstar(1, Pf(1))", 3), Value::Thick(want));
    }

    #[test]
    fn moments() {
        assert_eq!(eval("moment(n1^2*n2^2)", 3), Value::Scalar(ScalarCoeff::ratio(1, 15) * ScalarCoeff::c()));
        assert_eq!(eval("project(delta[0](n1*n2))", 3), Value::Standard(StandardDistribution::zero(3)));
    }

    #[test]
    fn type_errors() {
        let e = evaluate(&parse("Pf(Pf(1))", 3).unwrap()).unwrap_err();
        assert!(e.message.contains("Pf expects"), "{}", e.message);
        assert!(evaluate(&parse("pv(1/r^3)", 3).unwrap()).is_err());
        assert!(evaluate(&parse("delta[0](r)", 3).unwrap()).is_err());
        assert!(evaluate(&parse("dzero(1, dstar(1, Pf(1)))", 3).unwrap()).is_err());
    }

    #[test]
    fn pairing_literal() {
        match eval("pair(delta*, gauss)", 3) {
            Value::Real(x) => assert!((x - 1.0).abs() < 1e-14),
            other => panic!("{other:?}"),
        }
    }
}
