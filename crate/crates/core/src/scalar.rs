//! Exact coefficients: Laurent polynomials in the sphere-area symbol `C`
//! with rational coefficients.
//!
//! `C` stands for the surface area of the unit sphere in the ambient
//! dimension. It is a rational multiple of a power of pi for every
//! dimension, so it is kept as an independent transcendental symbol and
//! only turned into a number by [`ScalarCoeff::evaluate`].

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

/// Shorthand for the exact rational type used throughout the crate.
pub type Rational = BigRational;

/// Builds the rational `num / den`.
///
/// # Panics
///
/// Panics if `den` is zero.
pub fn rational(num: i64, den: i64) -> Rational {
    Rational::new(BigInt::from(num), BigInt::from(den))
}

/// An element of `Q[C, 1/C]`.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ScalarCoeff {
    // power of C -> nonzero rational
    terms: BTreeMap<i32, Rational>,
}

impl ScalarCoeff {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::from_rational(Rational::one())
    }

    /// The symbol `C` itself.
    pub fn c() -> Self {
        Self::c_power(1)
    }

    /// `C^power`.
    pub fn c_power(power: i32) -> Self {
        Self::monomial(Rational::one(), power)
    }

    /// `value * C^power`.
    pub fn monomial(value: Rational, power: i32) -> Self {
        let mut terms = BTreeMap::new();
        if !value.is_zero() {
            terms.insert(power, value);
        }
        Self { terms }
    }

    pub fn from_rational(value: Rational) -> Self {
        Self::monomial(value, 0)
    }

    pub fn from_integer(value: i64) -> Self {
        Self::from_rational(Rational::from_integer(value.into()))
    }

    /// `num / den` as a constant.
    pub fn ratio(num: i64, den: i64) -> Self {
        Self::from_rational(rational(num, den))
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.terms.len() == 1 && self.terms.get(&0).is_some_and(|v| v.is_one())
    }

    /// Iterates over `(power of C, coefficient)` pairs in increasing power.
    pub fn terms(&self) -> impl Iterator<Item = (i32, &Rational)> {
        self.terms.iter().map(|(p, v)| (*p, v))
    }

    /// Number of distinct powers of `C` present.
    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Coefficient of `C^power`.
    pub fn coefficient(&self, power: i32) -> Rational {
        self.terms.get(&power).cloned().unwrap_or_else(Rational::zero)
    }

    /// The value as a plain rational, if no power of `C` other than zero occurs.
    pub fn as_rational(&self) -> Option<Rational> {
        match self.terms.len() {
            0 => Some(Rational::zero()),
            1 => self.terms.get(&0).cloned(),
            _ => None,
        }
    }

    /// The single `(coefficient, power)` pair, if this is a monomial in `C`.
    pub fn as_monomial(&self) -> Option<(&Rational, i32)> {
        if self.terms.len() == 1 {
            self.terms.iter().next().map(|(p, v)| (v, *p))
        } else {
            None
        }
    }

    /// Multiplicative inverse; only monomials in `C` are units of the ring.
    pub fn inverse(&self) -> Option<Self> {
        let (value, power) = self.as_monomial()?;
        Some(Self::monomial(value.recip(), -power))
    }

    /// Multiplies by `C^shift`.
    pub fn shift(&self, shift: i32) -> Self {
        Self {
            terms: self.terms.iter().map(|(p, v)| (p + shift, v.clone())).collect(),
        }
    }

    pub fn scale(&self, factor: &Rational) -> Self {
        if factor.is_zero() {
            return Self::zero();
        }
        Self {
            terms: self.terms.iter().map(|(p, v)| (*p, v * factor)).collect(),
        }
    }

    pub fn pow(&self, exponent: u32) -> Self {
        (0..exponent).fold(Self::one(), |acc, _| &acc * self)
    }

    /// Numerical value with `C` replaced by the area of the unit sphere in
    /// `dim` dimensions.
    pub fn evaluate(&self, dim: usize) -> f64 {
        let c = sphere_area(dim);
        self.terms
            .iter()
            .map(|(p, v)| v.to_f64().unwrap_or(f64::NAN) * c.powi(*p))
            .sum()
    }

    /// Rewrites the coefficient as a Laurent polynomial in pi for a concrete
    /// dimension, using `C = rho * pi^(dim/2 rounded down)` with rho rational.
    pub fn to_pi_form(&self, dim: usize) -> PiCoeff {
        let (rho, pi_power) = area_in_pi(dim);
        let mut terms = BTreeMap::new();
        for (p, v) in &self.terms {
            let factor = rational_pow(&rho, *p);
            let value = v * factor;
            if !value.is_zero() {
                *terms.entry(p * pi_power).or_insert_with(Rational::zero) += value;
            }
        }
        terms.retain(|_, v: &mut Rational| !v.is_zero());
        PiCoeff { terms }
    }

    fn insert_add(&mut self, power: i32, value: Rational) {
        if value.is_zero() {
            return;
        }
        let entry = self.terms.entry(power).or_insert_with(Rational::zero);
        *entry += value;
        if entry.is_zero() {
            self.terms.remove(&power);
        }
    }
}

fn rational_pow(base: &Rational, exponent: i32) -> Rational {
    let mut out = Rational::one();
    for _ in 0..exponent.unsigned_abs() {
        out *= base;
    }
    if exponent < 0 {
        out.recip()
    } else {
        out
    }
}

/// Surface area of the unit sphere in `dim` dimensions, `2 pi^(dim/2) / Gamma(dim/2)`.
pub fn sphere_area(dim: usize) -> f64 {
    let (rho, pi_power) = area_in_pi(dim);
    rho.to_f64().unwrap_or(f64::NAN) * std::f64::consts::PI.powi(pi_power)
}

/// `(rho, h)` with `C = rho * pi^h` exactly.
pub fn area_in_pi(dim: usize) -> (Rational, i32) {
    assert!(dim >= 1, "dimension must be positive");
    let m = dim / 2;
    if dim.is_multiple_of(2) {
        // 2 pi^m / (m-1)!
        let fact: BigInt = (1..m).map(BigInt::from).product();
        (Rational::new(BigInt::from(2), fact), m as i32)
    } else {
        // 2^(2m+1) m! pi^m / (2m)!
        let num: BigInt = BigInt::from(2).pow(2 * m as u32 + 1) * (1..=m).map(BigInt::from).product::<BigInt>();
        let den: BigInt = (1..=2 * m).map(BigInt::from).product();
        (Rational::new(num, den), m as i32)
    }
}

impl From<Rational> for ScalarCoeff {
    fn from(value: Rational) -> Self {
        Self::from_rational(value)
    }
}

impl From<i64> for ScalarCoeff {
    fn from(value: i64) -> Self {
        Self::from_integer(value)
    }
}

impl Add<&ScalarCoeff> for &ScalarCoeff {
    type Output = ScalarCoeff;
    fn add(self, rhs: &ScalarCoeff) -> ScalarCoeff {
        let mut out = self.clone();
        out += rhs;
        out
    }
}

impl AddAssign<&ScalarCoeff> for ScalarCoeff {
    fn add_assign(&mut self, rhs: &ScalarCoeff) {
        for (p, v) in &rhs.terms {
            self.insert_add(*p, v.clone());
        }
    }
}

impl Sub<&ScalarCoeff> for &ScalarCoeff {
    type Output = ScalarCoeff;
    fn sub(self, rhs: &ScalarCoeff) -> ScalarCoeff {
        self + &(-rhs)
    }
}

impl Mul<&ScalarCoeff> for &ScalarCoeff {
    type Output = ScalarCoeff;
    fn mul(self, rhs: &ScalarCoeff) -> ScalarCoeff {
        let mut out = ScalarCoeff::zero();
        for (p, a) in &self.terms {
            for (q, b) in &rhs.terms {
                out.insert_add(p + q, a * b);
            }
        }
        out
    }
}

impl Neg for &ScalarCoeff {
    type Output = ScalarCoeff;
    fn neg(self) -> ScalarCoeff {
        ScalarCoeff {
            terms: self.terms.iter().map(|(p, v)| (*p, -v)).collect(),
        }
    }
}

impl Neg for ScalarCoeff {
    type Output = ScalarCoeff;
    fn neg(self) -> ScalarCoeff {
        -&self
    }
}

macro_rules! forward_owned_binop {
    ($imp:ident, $method:ident) => {
        impl $imp<ScalarCoeff> for ScalarCoeff {
            type Output = ScalarCoeff;
            fn $method(self, rhs: ScalarCoeff) -> ScalarCoeff {
                (&self).$method(&rhs)
            }
        }
        impl $imp<&ScalarCoeff> for ScalarCoeff {
            type Output = ScalarCoeff;
            fn $method(self, rhs: &ScalarCoeff) -> ScalarCoeff {
                (&self).$method(rhs)
            }
        }
        impl $imp<ScalarCoeff> for &ScalarCoeff {
            type Output = ScalarCoeff;
            fn $method(self, rhs: ScalarCoeff) -> ScalarCoeff {
                self.$method(&rhs)
            }
        }
    };
}

forward_owned_binop!(Add, add);
forward_owned_binop!(Sub, sub);
forward_owned_binop!(Mul, mul);

impl fmt::Display for ScalarCoeff {
    /// Plain-text form accepted by the expression parser, e.g. `(1/3)*C`,
    /// `-C^-1`, `(2 + C)`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for (p, v) in self.terms.iter().rev() {
            let negative = v.is_negative();
            if first {
                if negative {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if negative { '-' } else { '+' })?;
            }
            first = false;
            write!(f, "{}", FactorForm { value: &v.abs(), power: *p })?;
        }
        Ok(())
    }
}

/// A positive rational times `C^power`, written as a product of factors.
struct FactorForm<'a> {
    value: &'a Rational,
    power: i32,
}

impl fmt::Display for FactorForm<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let c_part = match self.power {
            0 => None,
            1 => Some("C".to_string()),
            p => Some(format!("C^{p}")),
        };
        match (self.value.is_one(), c_part) {
            (true, Some(c)) => write!(f, "{c}"),
            (true, None) => write!(f, "1"),
            (false, c) => {
                if self.value.is_integer() {
                    write!(f, "{}", self.value.numer())?;
                } else if c.is_some() {
                    write!(f, "({}/{})", self.value.numer(), self.value.denom())?;
                } else {
                    write!(f, "{}/{}", self.value.numer(), self.value.denom())?;
                }
                if let Some(c) = c {
                    write!(f, "*{c}")?;
                }
                Ok(())
            }
        }
    }
}

/// A coefficient rewritten as a Laurent polynomial in pi for one dimension.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PiCoeff {
    terms: BTreeMap<i32, Rational>,
}

impl PiCoeff {
    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (i32, &Rational)> {
        self.terms.iter().map(|(p, v)| (*p, v))
    }

    /// LaTeX rendering, e.g. `\frac{4\pi}{15}`.
    pub fn to_latex(&self) -> String {
        if self.terms.is_empty() {
            return "0".into();
        }
        let mut out = String::new();
        for (i, (p, v)) in self.terms.iter().rev().enumerate() {
            let negative = v.is_negative();
            if i == 0 {
                if negative {
                    out.push('-');
                }
            } else {
                out.push_str(if negative { " - " } else { " + " });
            }
            let v = v.abs();
            let pi = match *p {
                0 => String::new(),
                1 => "\\pi".into(),
                p => format!("\\pi^{{{p}}}"),
            };
            let numer = v.numer().to_string();
            let numer = match (numer.as_str(), pi.is_empty()) {
                ("1", false) => pi.clone(),
                (_, true) => numer,
                (n, false) => format!("{n}{pi}"),
            };
            if v.is_integer() {
                out.push_str(&numer);
            } else {
                out.push_str(&format!("\\frac{{{numer}}}{{{}}}", v.denom()));
            }
        }
        out
    }
}

impl fmt::Display for PiCoeff {
    /// Unicode form such as `4π/15`, `-2π`, `π^2/3`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (i, (p, v)) in self.terms.iter().rev().enumerate() {
            let negative = v.is_negative();
            if i == 0 {
                if negative {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if negative { '−' } else { '+' })?;
            }
            let v = v.abs();
            let pi = match *p {
                0 => String::new(),
                1 => "π".into(),
                p => format!("π^{p}"),
            };
            let numer = v.numer().to_string();
            let head = match (numer.as_str(), pi.is_empty()) {
                ("1", false) => pi,
                (_, true) => numer,
                (n, false) => format!("{n}{pi}"),
            };
            if v.is_integer() {
                write!(f, "{head}")?;
            } else {
                write!(f, "{head}/{}", v.denom())?;
            }
        }
        Ok(())
    }
}
