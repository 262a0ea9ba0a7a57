//! Polynomial algebra on the unit sphere.
//!
//! A [`SphericalSymbol`] is a polynomial in `n_1, ..., n_dim` whose
//! coefficients are [`ScalarCoeff`]s. It stands for the function it defines
//! on the unit sphere, so two symbols are the same density when they agree
//! modulo `n_1^2 + ... + n_dim^2 - 1`. The canonical representative keeps
//! the exponent of the last coordinate at most one.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_traits::Zero;

use crate::error::{check_axis, check_dims, Result};
use crate::scalar::{Rational, ScalarCoeff};

/// Exponent vector of a monomial `n^a`, one entry per coordinate.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct MultiIndex(Vec<u32>);

impl MultiIndex {
    pub fn new(exponents: Vec<u32>) -> Self {
        Self(exponents)
    }

    pub fn zeros(dim: usize) -> Self {
        Self(vec![0; dim])
    }

    /// The unit index `e_axis` (axes are 1-based).
    pub fn unit(dim: usize, axis: usize) -> Self {
        let mut out = Self::zeros(dim);
        out.0[axis - 1] = 1;
        out
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    /// Total degree `|a|`.
    pub fn order(&self) -> u32 {
        self.0.iter().sum()
    }

    pub fn exponents(&self) -> &[u32] {
        &self.0
    }

    /// Exponent of the 1-based `axis`.
    pub fn get(&self, axis: usize) -> u32 {
        self.0[axis - 1]
    }

    pub fn with_added(&self, other: &MultiIndex) -> MultiIndex {
        assert_eq!(self.dim(), other.dim(), "multi-index dimension mismatch");
        Self(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    /// Adds `delta` to the exponent of the 1-based `axis`.
    pub fn bumped(&self, axis: usize, delta: i32) -> MultiIndex {
        let mut out = self.clone();
        let e = &mut out.0[axis - 1];
        *e = (*e as i64 + delta as i64)
            .try_into()
            .expect("negative exponent in multi-index");
        out
    }

    /// `a_1! a_2! ... a_dim!`
    pub fn factorial(&self) -> BigInt {
        self.0
            .iter()
            .flat_map(|&a| (1..=a).map(BigInt::from))
            .product()
    }

    pub fn all_even(&self) -> bool {
        self.0.iter().all(|a| a % 2 == 0)
    }

    /// All multi-indices of length `dim` and total order `order`, in
    /// lexicographic order.
    pub fn all_of_order(dim: usize, order: u32) -> Vec<MultiIndex> {
        fn fill(slot: usize, left: u32, current: &mut Vec<u32>, out: &mut Vec<MultiIndex>) {
            if slot + 1 == current.len() {
                current[slot] = left;
                out.push(MultiIndex(current.clone()));
                return;
            }
            for a in 0..=left {
                current[slot] = a;
                fill(slot + 1, left - a, current, out);
            }
        }
        let mut out = Vec::new();
        if dim == 0 {
            return out;
        }
        fill(0, order, &mut vec![0; dim], &mut out);
        out
    }
}

impl fmt::Display for MultiIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, a) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{a}")?;
        }
        write!(f, ")")
    }
}

/// A polynomial density on the unit sphere of `R^dim`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct SphericalSymbol {
    dim: usize,
    terms: BTreeMap<MultiIndex, ScalarCoeff>,
}

impl SphericalSymbol {
    pub fn zero(dim: usize) -> Self {
        Self {
            dim,
            terms: BTreeMap::new(),
        }
    }

    pub fn one(dim: usize) -> Self {
        Self::constant(dim, ScalarCoeff::one())
    }

    pub fn constant(dim: usize, value: ScalarCoeff) -> Self {
        Self::monomial(MultiIndex::zeros(dim), value)
    }

    /// The coordinate function `n_axis` (1-based).
    pub fn n(dim: usize, axis: usize) -> Self {
        assert!((1..=dim).contains(&axis), "axis {axis} out of range for dimension {dim}");
        Self::monomial(MultiIndex::unit(dim, axis), ScalarCoeff::one())
    }

    pub fn monomial(index: MultiIndex, coeff: ScalarCoeff) -> Self {
        let dim = index.dim();
        let mut out = Self::zero(dim);
        out.add_term(index, coeff);
        out
    }

    /// Builds a symbol from `(exponents, coefficient)` pairs, merging repeats.
    pub fn from_terms<I>(dim: usize, terms: I) -> Self
    where
        I: IntoIterator<Item = (MultiIndex, ScalarCoeff)>,
    {
        let mut out = Self::zero(dim);
        for (index, coeff) in terms {
            assert_eq!(index.dim(), dim, "multi-index length must equal the dimension");
            out.add_term(index, coeff);
        }
        out
    }

    /// `n_1^2 + ... + n_dim^2 - 1`, which vanishes on the sphere.
    pub fn sphere_relation(dim: usize) -> Self {
        let mut out = -Self::one(dim);
        for axis in 1..=dim {
            out.add_term(MultiIndex::unit(dim, axis).bumped(axis, 1), ScalarCoeff::one());
        }
        out
    }

    /// Kronecker delta as a constant symbol.
    pub fn kronecker(dim: usize, i: usize, j: usize) -> Self {
        if i == j {
            Self::one(dim)
        } else {
            Self::zero(dim)
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&MultiIndex, &ScalarCoeff)> {
        self.terms.iter()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coefficient(&self, index: &MultiIndex) -> ScalarCoeff {
        self.terms.get(index).cloned().unwrap_or_default()
    }

    /// The value if this is a constant polynomial.
    pub fn as_constant(&self) -> Option<ScalarCoeff> {
        match self.terms.len() {
            0 => Some(ScalarCoeff::zero()),
            1 => self.terms.get(&MultiIndex::zeros(self.dim)).cloned(),
            _ => None,
        }
    }

    /// Highest total degree, or `None` for the zero symbol.
    pub fn degree(&self) -> Option<u32> {
        self.terms.keys().map(MultiIndex::order).max()
    }

    pub fn scale(&self, factor: &ScalarCoeff) -> Self {
        let mut out = Self::zero(self.dim);
        for (index, coeff) in &self.terms {
            out.add_term(index.clone(), coeff * factor);
        }
        out
    }

    pub fn pow(&self, exponent: u32) -> Self {
        (0..exponent).fold(Self::one(self.dim), |acc, _| &acc * self)
    }

    fn add_term(&mut self, index: MultiIndex, coeff: ScalarCoeff) {
        if coeff.is_zero() {
            return;
        }
        match self.terms.get_mut(&index) {
            Some(existing) => {
                *existing += &coeff;
                if existing.is_zero() {
                    self.terms.remove(&index);
                }
            }
            None => {
                self.terms.insert(index, coeff);
            }
        }
    }

    /// True when no monomial has the last coordinate raised to a power above one.
    pub fn is_normal(&self) -> bool {
        self.terms.keys().all(|m| m.get(self.dim) <= 1)
    }

    /// Canonical representative modulo the sphere relation, obtained by
    /// repeatedly rewriting `n_dim^2` as `1 - n_1^2 - ... - n_(dim-1)^2`.
    pub fn normalize(&self) -> Self {
        let dim = self.dim;
        let mut out = Self::zero(dim);
        let mut pending = self.terms.clone();
        while !pending.is_empty() {
            let mut next = Self::zero(dim);
            for (index, coeff) in pending {
                if index.get(dim) < 2 {
                    out.add_term(index, coeff);
                    continue;
                }
                let base = index.bumped(dim, -2);
                for axis in 1..dim {
                    next.add_term(base.bumped(axis, 2), -&coeff);
                }
                next.add_term(base, coeff);
            }
            pending = next.terms;
        }
        out
    }

    /// Whether `self` and `other` define the same function on the sphere.
    pub fn equal_on_sphere(&self, other: &Self) -> Result<bool> {
        check_dims(self.dim, other.dim)?;
        Ok((self - other).normalize().is_zero())
    }

    /// The delta-derivative `δ/δx_j`: differentiate the degree-0 homogeneous
    /// extension and restrict back to the sphere. On monomials,
    /// `δ(n^a)/δx_j = a_j n^(a - e_j) - |a| n_j n^a`. The result is normalized.
    ///
    /// # Panics
    ///
    /// Panics if `axis` is not in `1..=dim`.
    pub fn delta_derivative(&self, axis: usize) -> Self {
        check_axis(axis, self.dim).expect("delta_derivative axis");
        let mut out = Self::zero(self.dim);
        for (index, coeff) in &self.terms {
            let a_j = index.get(axis);
            if a_j > 0 {
                let scaled = coeff.scale(&Rational::from_integer(a_j.into()));
                out.add_term(index.bumped(axis, -1), scaled);
            }
            let total = index.order();
            if total > 0 {
                let scaled = coeff.scale(&-Rational::from_integer(total.into()));
                out.add_term(index.bumped(axis, 1), scaled);
            }
        }
        out.normalize()
    }

    /// Exact `∫_S p dσ`, a multiple of `C` times the coefficients of `p`.
    ///
    /// For a monomial with all exponents even,
    /// `∫_S n^a dσ / C = Π (a_i - 1)!! / (dim (dim + 2) ... (dim + |a| - 2))`;
    /// any odd exponent gives zero.
    pub fn sphere_moment(&self) -> ScalarCoeff {
        let mut total = ScalarCoeff::zero();
        for (index, coeff) in &self.terms {
            let ratio = monomial_moment_ratio(index);
            if !ratio.is_zero() {
                total += &coeff.scale(&ratio).shift(1);
            }
        }
        total
    }
}

/// `∫_S n^a dσ / C` as an exact rational.
pub fn monomial_moment_ratio(index: &MultiIndex) -> Rational {
    if !index.all_even() {
        return Rational::zero();
    }
    let dim = index.dim() as u64;
    let numer: BigInt = index
        .exponents()
        .iter()
        .flat_map(|&a| (1..a).step_by(2).map(BigInt::from))
        .product();
    let half = index.order() as u64 / 2;
    let denom: BigInt = (0..half).map(|t| BigInt::from(dim + 2 * t)).product();
    Rational::new(numer, denom)
}

impl Add<&SphericalSymbol> for &SphericalSymbol {
    type Output = SphericalSymbol;
    fn add(self, rhs: &SphericalSymbol) -> SphericalSymbol {
        assert_eq!(self.dim, rhs.dim, "spherical symbol dimension mismatch");
        let mut out = self.clone();
        for (index, coeff) in &rhs.terms {
            out.add_term(index.clone(), coeff.clone());
        }
        out
    }
}

impl Sub<&SphericalSymbol> for &SphericalSymbol {
    type Output = SphericalSymbol;
    fn sub(self, rhs: &SphericalSymbol) -> SphericalSymbol {
        self + &(-rhs)
    }
}

impl Mul<&SphericalSymbol> for &SphericalSymbol {
    type Output = SphericalSymbol;
    fn mul(self, rhs: &SphericalSymbol) -> SphericalSymbol {
        assert_eq!(self.dim, rhs.dim, "spherical symbol dimension mismatch");
        let mut out = SphericalSymbol::zero(self.dim);
        for (a, x) in &self.terms {
            for (b, y) in &rhs.terms {
                out.add_term(a.with_added(b), x * y);
            }
        }
        out
    }
}

impl Neg for &SphericalSymbol {
    type Output = SphericalSymbol;
    fn neg(self) -> SphericalSymbol {
        SphericalSymbol {
            dim: self.dim,
            terms: self.terms.iter().map(|(m, c)| (m.clone(), -c)).collect(),
        }
    }
}

impl Neg for SphericalSymbol {
    type Output = SphericalSymbol;
    fn neg(self) -> SphericalSymbol {
        -&self
    }
}

macro_rules! forward_owned_binop {
    ($imp:ident, $method:ident) => {
        impl $imp<SphericalSymbol> for SphericalSymbol {
            type Output = SphericalSymbol;
            fn $method(self, rhs: SphericalSymbol) -> SphericalSymbol {
                (&self).$method(&rhs)
            }
        }
        impl $imp<&SphericalSymbol> for SphericalSymbol {
            type Output = SphericalSymbol;
            fn $method(self, rhs: &SphericalSymbol) -> SphericalSymbol {
                (&self).$method(rhs)
            }
        }
        impl $imp<SphericalSymbol> for &SphericalSymbol {
            type Output = SphericalSymbol;
            fn $method(self, rhs: SphericalSymbol) -> SphericalSymbol {
                self.$method(&rhs)
            }
        }
    };
}

forward_owned_binop!(Add, add);
forward_owned_binop!(Sub, sub);
forward_owned_binop!(Mul, mul);

impl fmt::Display for SphericalSymbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&crate::dsl::render_poly_plain(self))
    }
}

/// `δ_ij - n_i n_j`, the delta-derivative of `n_i` along `x_j`.
pub fn mu(dim: usize, i: usize, j: usize) -> SphericalSymbol {
    (SphericalSymbol::kronecker(dim, i, j) - SphericalSymbol::n(dim, i) * SphericalSymbol::n(dim, j))
        .normalize()
}
