use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_traits::{One, ToPrimitive, Zero};

use crate::error::{check_axis, check_dims, Result};
use crate::scalar::{Rational, ScalarCoeff};
use crate::sphere::{MultiIndex, SphericalSymbol};

/// A finite sum `Σ c n^a r^m e^{-r²}` with rational `c`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct TestFunction {
    dim: usize,
    terms: BTreeMap<(MultiIndex, i32), Rational>,
}

impl TestFunction {
    pub fn zero(dim: usize) -> Self {
        Self { dim, terms: BTreeMap::new() }
    }

    /// `e^{-r²}`.
    pub fn gaussian(dim: usize) -> Self {
        Self::generator(MultiIndex::zeros(dim), 0, Rational::one())
    }

    /// `coeff n^a r^m e^{-r²}`.
    pub fn generator(a: MultiIndex, m: i32, coeff: Rational) -> Self {
        let mut out = Self::zero(a.dim());
        out.add_term(a, m, coeff);
        out
    }

    /// Adds `coeff n^a r^m e^{-r²}`, with `n^a` reduced to normal form so
    /// that equal functions compare equal.
    fn add_term(&mut self, a: MultiIndex, m: i32, coeff: Rational) {
        assert_eq!(a.dim(), self.dim, "test function dimension mismatch");
        if a.get(self.dim) < 2 {
            self.merge(a, m, coeff);
            return;
        }
        let reduced = SphericalSymbol::monomial(a, ScalarCoeff::one()).normalize();
        for (b, c) in reduced.terms() {
            let c = c.as_rational().expect("normal form of a monomial has rational coefficients");
            self.merge(b.clone(), m, &coeff * c);
        }
    }

    fn merge(&mut self, a: MultiIndex, m: i32, coeff: Rational) {
        let key = (a, m);
        let merged = self.terms.remove(&key).unwrap_or_else(Rational::zero) + coeff;
        if !merged.is_zero() {
            self.terms.insert(key, merged);
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// `(a, m, coeff)` for each generator, ordered by `m` then `a`.
    pub fn terms(&self) -> impl Iterator<Item = (&MultiIndex, i32, &Rational)> {
        let mut v: Vec<_> = self.terms.iter().map(|((a, m), c)| (a, *m, c)).collect();
        v.sort_by(|x, y| x.1.cmp(&y.1).then_with(|| y.0.order().cmp(&x.0.order())).then_with(|| y.0.cmp(x.0)));
        v.into_iter()
    }

    pub fn checked_add(&self, other: &Self) -> Result<Self> {
        check_dims(self.dim, other.dim)?;
        let mut out = self.clone();
        for ((a, m), c) in &other.terms {
            out.add_term(a.clone(), *m, c.clone());
        }
        Ok(out)
    }

    pub fn scale(&self, factor: &Rational) -> Self {
        let mut out = Self::zero(self.dim);
        for ((a, m), c) in &self.terms {
            out.add_term(a.clone(), *m, c * factor);
        }
        out
    }

    /// Product with the homogeneous function `r^k p(n)`; every coefficient
    /// of `p` must be rational.
    pub fn times_homogeneous(&self, k: i32, p: &SphericalSymbol) -> Option<Self> {
        let mut out = Self::zero(self.dim);
        for ((a, m), c) in &self.terms {
            for (b, coeff) in p.terms() {
                let v = coeff.as_rational()?;
                out.add_term(a.with_added(b), m + k, c * v);
            }
        }
        Some(out)
    }

    /// Expansion coefficient `a_q(w)` at the origin.
    pub fn expansion_coefficient(&self, q: i32) -> SphericalSymbol {
        let terms = self.terms.iter().filter_map(|((a, m), c)| {
            let gap = q - m;
            if gap < 0 || gap % 2 != 0 {
                return None;
            }
            let half = (gap / 2) as u32;
            let fact: BigInt = (1..=half).map(BigInt::from).product();
            let sign = if half.is_multiple_of(2) { Rational::one() } else { -Rational::one() };
            let value = sign * c / Rational::from_integer(fact);
            Some((a.clone(), ScalarCoeff::from_rational(value)))
        });
        SphericalSymbol::from_terms(self.dim, terms)
    }

    /// `∂φ/∂x_axis`, computed generator by generator:
    /// `∂_i(n^a r^m g) = (a_i n^{a-e_i} + (m - |a|) n_i n^a) r^{m-1} g - 2 n_i n^a r^{m+1} g`.
    ///
    /// # Panics
    ///
    /// Panics if `axis` is not in `1..=dim`.
    pub fn partial(&self, axis: usize) -> Self {
        check_axis(axis, self.dim).expect("test function derivative axis");
        let mut out = Self::zero(self.dim);
        for ((a, m), c) in &self.terms {
            let ai = a.get(axis);
            let lifted = a.bumped(axis, 1);
            if ai > 0 {
                out.add_term(a.bumped(axis, -1), m - 1, c * Rational::from_integer(ai.into()));
            }
            let shift = Rational::from_integer((*m - a.order() as i32).into());
            out.add_term(lifted.clone(), m - 1, c * shift);
            out.add_term(lifted, m + 1, c * Rational::from_integer((-2).into()));
        }
        out
    }

    /// Pointwise value at `x ≠ 0`.
    pub fn evaluate(&self, x: &[f64]) -> f64 {
        assert_eq!(x.len(), self.dim, "point dimension mismatch");
        let r = x.iter().map(|v| v * v).sum::<f64>().sqrt();
        let gauss = (-r * r).exp();
        self.terms
            .iter()
            .map(|((a, m), c)| {
                let mono: f64 = a.exponents().iter().zip(x).map(|(e, v)| (v / r).powi(*e as i32)).product();
                c.to_f64().unwrap_or(f64::NAN) * mono * r.powi(*m) * gauss
            })
            .sum()
    }
}
