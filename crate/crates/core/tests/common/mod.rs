//! Shared proptest strategies.
#![allow(dead_code)]

use proptest::prelude::*;
use thickdist::oracle::TestFunction;
use thickdist::{rational, MultiIndex, Multiplier, ScalarCoeff, SphericalSymbol, ThickDistribution};

pub fn index(dim: usize, max_order: usize) -> impl Strategy<Value = MultiIndex> {
    prop::collection::vec(0..dim, 0..=max_order).prop_map(move |axes| {
        let mut exps = vec![0u32; dim];
        for a in axes {
            exps[a] += 1;
        }
        MultiIndex::new(exps)
    })
}

fn coeff(with_c: bool) -> impl Strategy<Value = ScalarCoeff> {
    let shift = if with_c { -1..=1 } else { 0..=0 };
    ((-6i64..=6).prop_filter("nonzero", |v| *v != 0), 1i64..=4, shift).prop_map(|(num, den, s)| ScalarCoeff::ratio(num, den).shift(s))
}

/// Normalized polynomial in `n` of degree at most `max_degree`; may be zero.
pub fn symbol(dim: usize, max_degree: usize, with_c: bool) -> impl Strategy<Value = SphericalSymbol> {
    prop::collection::vec((index(dim, max_degree), coeff(with_c)), 1..=3)
        .prop_map(move |terms| SphericalSymbol::from_terms(dim, terms).normalize())
}

/// Like [`symbol`] but never zero.
pub fn nonzero_symbol(dim: usize, max_degree: usize, with_c: bool) -> impl Strategy<Value = SphericalSymbol> {
    symbol(dim, max_degree, with_c).prop_map(move |p| if p.is_zero() { SphericalSymbol::n(dim, 1) } else { p })
}

pub fn thick(dim: usize) -> impl Strategy<Value = ThickDistribution> {
    let pf = prop::collection::vec((-5i32..=2, symbol(dim, 3, false)), 0..=2);
    let deltas = prop::collection::vec((-3i32..=2, symbol(dim, 3, true)), 0..=2);
    (pf, deltas).prop_map(move |(pf, deltas)| {
        let mut out = ThickDistribution::zero(dim);
        for (k, p) in pf {
            out = out + ThickDistribution::pf(k, p);
        }
        for (q, g) in deltas {
            out = out + ThickDistribution::delta(q, g);
        }
        out
    })
}

pub fn multiplier(dim: usize) -> impl Strategy<Value = Multiplier> {
    (-3i32..=3, symbol(dim, 3, false)).prop_map(|(k, p)| Multiplier::homogeneous(k, p))
}

pub fn test_function(dim: usize) -> impl Strategy<Value = TestFunction> {
    prop::collection::vec((index(dim, 3), -2i32..=3, (-3i64..=3).prop_filter("nonzero", |v| *v != 0), 1i64..=2), 1..=3).prop_map(
        move |terms| {
            terms.into_iter().fold(TestFunction::zero(dim), |acc, (a, m, num, den)| {
                acc.checked_add(&TestFunction::generator(a, m, rational(num, den))).unwrap()
            })
        },
    )
}

pub fn dim() -> impl Strategy<Value = usize> {
    2usize..=4
}

/// `(dim, axis)` with `axis` in `1..=dim`.
pub fn dim_axis() -> impl Strategy<Value = (usize, usize)> {
    dim().prop_flat_map(|d| (Just(d), 1..=d))
}

/// `(dim, i, j)`.
pub fn dim_axes() -> impl Strategy<Value = (usize, usize, usize)> {
    dim().prop_flat_map(|d| (Just(d), 1..=d, 1..=d))
}
