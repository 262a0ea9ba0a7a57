//! Thick distributions with the thick point at the origin.
//!
//! A [`ThickDistribution`] is a finite sum of two species of terms:
//!
//! * `Pf(r^k ψ₀(n))`, the spherical finite part of a homogeneous function of
//!   degree `k` (grade `k`);
//! * `g(n) δ∗^[q]`, a thick delta of order `q` with polynomial density `g`
//!   (grade `-dim - q`).
//!
//! Homogeneous functions are always carried as a degree together with their
//! degree-0 profile, so derivatives never leave the sphere algebra.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Neg, Sub};

use crate::error::{check_axis, check_dims, Error, Result};
use crate::scalar::ScalarCoeff;
use crate::sphere::{mu, SphericalSymbol};

/// Ordinary partial derivative of `r^k ψ₀` along `x_axis`, returned as the
/// degree-0 profile of the degree `k - 1` result:
/// `∂(r^k ψ₀)/∂x_i = r^(k-1) (k n_i ψ₀ + δψ₀/δx_i)`.
pub fn homogeneous_partial_profile(axis: usize, degree: i32, profile: &SphericalSymbol) -> SphericalSymbol {
    let dim = profile.dim();
    let radial = (SphericalSymbol::n(dim, axis) * profile).scale(&ScalarCoeff::from_integer(degree.into()));
    (radial + profile.delta_derivative(axis)).normalize()
}

/// A finite sum of homogeneous functions `Σ r^k ψ₀_k(n)`.
///
/// These are the multipliers the engine can apply to thick distributions,
/// and the arguments accepted by `Pf`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Multiplier {
    dim: usize,
    terms: BTreeMap<i32, SphericalSymbol>,
}

impl Multiplier {
    pub fn zero(dim: usize) -> Self {
        Self {
            dim,
            terms: BTreeMap::new(),
        }
    }

    pub fn one(dim: usize) -> Self {
        Self::homogeneous(0, SphericalSymbol::one(dim))
    }

    /// `r^degree * profile`.
    pub fn homogeneous(degree: i32, profile: SphericalSymbol) -> Self {
        let mut out = Self::zero(profile.dim());
        out.add_term(degree, profile);
        out
    }

    pub fn constant(dim: usize, value: ScalarCoeff) -> Self {
        Self::homogeneous(0, SphericalSymbol::constant(dim, value))
    }

    /// `r^degree`.
    pub fn r_power(dim: usize, degree: i32) -> Self {
        Self::homogeneous(degree, SphericalSymbol::one(dim))
    }

    /// The unit direction `n_axis`.
    pub fn n(dim: usize, axis: usize) -> Self {
        Self::homogeneous(0, SphericalSymbol::n(dim, axis))
    }

    /// The coordinate `x_axis = r n_axis`.
    pub fn x(dim: usize, axis: usize) -> Self {
        Self::homogeneous(1, SphericalSymbol::n(dim, axis))
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// `(degree, profile)` pairs, increasing in degree; profiles are normalized.
    pub fn terms(&self) -> impl Iterator<Item = (i32, &SphericalSymbol)> {
        self.terms.iter().map(|(k, p)| (*k, p))
    }

    /// The single homogeneous component, if there is exactly one.
    pub fn as_homogeneous(&self) -> Option<(i32, &SphericalSymbol)> {
        if self.terms.len() == 1 {
            self.terms.iter().next().map(|(k, p)| (*k, p))
        } else {
            None
        }
    }

    /// The value if this multiplier is a constant.
    pub fn as_constant(&self) -> Option<ScalarCoeff> {
        match self.terms.len() {
            0 => Some(ScalarCoeff::zero()),
            1 => self.terms.get(&0).and_then(SphericalSymbol::as_constant),
            _ => None,
        }
    }

    fn add_term(&mut self, degree: i32, profile: SphericalSymbol) {
        assert_eq!(profile.dim(), self.dim, "multiplier dimension mismatch");
        let merged = match self.terms.remove(&degree) {
            Some(existing) => existing + profile,
            None => profile,
        };
        let merged = merged.normalize();
        if !merged.is_zero() {
            self.terms.insert(degree, merged);
        }
    }

    pub fn scale(&self, factor: &ScalarCoeff) -> Self {
        let mut out = Self::zero(self.dim);
        for (k, p) in &self.terms {
            out.add_term(*k, p.scale(factor));
        }
        out
    }

    pub fn checked_add(&self, other: &Self) -> Result<Self> {
        check_dims(self.dim, other.dim)?;
        let mut out = self.clone();
        for (k, p) in &other.terms {
            out.add_term(*k, p.clone());
        }
        Ok(out)
    }

    pub fn checked_mul(&self, other: &Self) -> Result<Self> {
        check_dims(self.dim, other.dim)?;
        let mut out = Self::zero(self.dim);
        for (k, p) in &self.terms {
            for (l, q) in &other.terms {
                out.add_term(k + l, p * q);
            }
        }
        Ok(out)
    }

    /// Integer power; negative powers only exist for single-term multipliers
    /// whose profile is a constant, i.e. `c r^k`.
    pub fn powi(&self, exponent: i32) -> Result<Self> {
        if exponent >= 0 {
            let mut out = Self::one(self.dim);
            for _ in 0..exponent {
                out = out.checked_mul(self)?;
            }
            return Ok(out);
        }
        let inverse = self
            .as_homogeneous()
            .and_then(|(k, p)| p.as_constant().and_then(|c| c.inverse()).map(|c| (k, c)))
            .map(|(k, c)| Self::homogeneous(-k, SphericalSymbol::constant(self.dim, c)))
            .ok_or_else(|| Error::Unsupported("only c*r^k can be raised to a negative power".into()))?;
        inverse.powi(-exponent)
    }

    /// Ordinary partial derivative along `x_axis`.
    ///
    /// # Panics
    ///
    /// Panics if `axis` is not in `1..=dim`.
    pub fn partial(&self, axis: usize) -> Self {
        check_axis(axis, self.dim).expect("multiplier partial axis");
        let mut out = Self::zero(self.dim);
        for (k, p) in &self.terms {
            out.add_term(k - 1, homogeneous_partial_profile(axis, *k, p));
        }
        out
    }

    /// Multiplies a thick distribution by this multiplier.
    pub fn apply(&self, value: &ThickDistribution) -> Result<ThickDistribution> {
        check_dims(self.dim, value.dim)?;
        let mut out = ThickDistribution::zero(self.dim);
        for (k, p) in &self.terms {
            out = out + multiply_homogeneous(*k, p, value);
        }
        Ok(out)
    }
}

impl Neg for &Multiplier {
    type Output = Multiplier;
    fn neg(self) -> Multiplier {
        self.scale(&-ScalarCoeff::one())
    }
}

/// A finite sum of `Pf` terms and thick deltas.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ThickDistribution {
    dim: usize,
    // degree k -> normalized nonzero profile ψ₀ of Pf(r^k ψ₀)
    pf: BTreeMap<i32, SphericalSymbol>,
    // order q -> normalized nonzero density g of g δ∗^[q]
    deltas: BTreeMap<i32, SphericalSymbol>,
}

/// One term of a [`ThickDistribution`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ThickTerm<'a> {
    FinitePart { degree: i32, profile: &'a SphericalSymbol },
    Delta { order: i32, density: &'a SphericalSymbol },
}

impl ThickTerm<'_> {
    /// Homogeneity degree of the term.
    pub fn grade(&self, dim: usize) -> i32 {
        match self {
            ThickTerm::FinitePart { degree, .. } => *degree,
            ThickTerm::Delta { order, .. } => -(dim as i32) - order,
        }
    }
}

impl ThickDistribution {
    pub fn zero(dim: usize) -> Self {
        Self {
            dim,
            pf: BTreeMap::new(),
            deltas: BTreeMap::new(),
        }
    }

    /// `Pf(r^degree * profile)`.
    pub fn pf(degree: i32, profile: SphericalSymbol) -> Self {
        let mut out = Self::zero(profile.dim());
        out.add_pf(degree, profile);
        out
    }

    /// `Pf(1)`.
    pub fn pf_one(dim: usize) -> Self {
        Self::pf(0, SphericalSymbol::one(dim))
    }

    /// `Pf` of every homogeneous component of `m`.
    pub fn pf_of(m: &Multiplier) -> Self {
        let mut out = Self::zero(m.dim());
        for (k, p) in m.terms() {
            out.add_pf(k, p.clone());
        }
        out
    }

    /// `density * δ∗^[order]`.
    pub fn delta(order: i32, density: SphericalSymbol) -> Self {
        let mut out = Self::zero(density.dim());
        out.add_delta(order, density);
        out
    }

    /// The plain thick delta `δ∗`.
    pub fn delta_star(dim: usize) -> Self {
        Self::delta(0, SphericalSymbol::one(dim))
    }

    fn add_pf(&mut self, degree: i32, profile: SphericalSymbol) {
        merge_into(&mut self.pf, self.dim, degree, profile);
    }

    fn add_delta(&mut self, order: i32, density: SphericalSymbol) {
        merge_into(&mut self.deltas, self.dim, order, density);
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn is_zero(&self) -> bool {
        self.pf.is_empty() && self.deltas.is_empty()
    }

    /// `(degree, profile)` of every `Pf` term, increasing in degree.
    pub fn pf_terms(&self) -> impl Iterator<Item = (i32, &SphericalSymbol)> {
        self.pf.iter().map(|(k, p)| (*k, p))
    }

    /// `(order, density)` of every thick delta, increasing in order.
    pub fn delta_terms(&self) -> impl Iterator<Item = (i32, &SphericalSymbol)> {
        self.deltas.iter().map(|(q, g)| (*q, g))
    }

    /// Profile of the `Pf` term of the given degree (zero if absent).
    pub fn pf_profile(&self, degree: i32) -> SphericalSymbol {
        self.pf.get(&degree).cloned().unwrap_or_else(|| SphericalSymbol::zero(self.dim))
    }

    /// Density of the thick delta of the given order (zero if absent).
    pub fn delta_density(&self, order: i32) -> SphericalSymbol {
        self.deltas.get(&order).cloned().unwrap_or_else(|| SphericalSymbol::zero(self.dim))
    }

    /// All terms, ordered by decreasing grade; `Pf` before delta on ties.
    pub fn terms(&self) -> Vec<ThickTerm<'_>> {
        let mut out: Vec<ThickTerm<'_>> = self
            .pf
            .iter()
            .map(|(k, p)| ThickTerm::FinitePart { degree: *k, profile: p })
            .chain(self.deltas.iter().map(|(q, g)| ThickTerm::Delta { order: *q, density: g }))
            .collect();
        let dim = self.dim;
        out.sort_by_key(|t| {
            let species = matches!(t, ThickTerm::Delta { .. }) as u8;
            (-t.grade(dim), species)
        });
        out
    }

    /// Distinct grades present, decreasing.
    pub fn grades(&self) -> Vec<i32> {
        let mut g: Vec<i32> = self.terms().iter().map(|t| t.grade(self.dim)).collect();
        g.dedup();
        g
    }

    /// Lowest order of any thick delta.
    pub fn min_delta_order(&self) -> Option<i32> {
        self.deltas.keys().next().copied()
    }

    pub fn checked_add(&self, other: &Self) -> Result<Self> {
        check_dims(self.dim, other.dim)?;
        let mut out = self.clone();
        for (k, p) in &other.pf {
            out.add_pf(*k, p.clone());
        }
        for (q, g) in &other.deltas {
            out.add_delta(*q, g.clone());
        }
        Ok(out)
    }

    pub fn checked_sub(&self, other: &Self) -> Result<Self> {
        self.checked_add(&-other)
    }

    pub fn scale(&self, factor: &ScalarCoeff) -> Self {
        let mut out = Self::zero(self.dim);
        for (k, p) in &self.pf {
            out.add_pf(*k, p.scale(factor));
        }
        for (q, g) in &self.deltas {
            out.add_delta(*q, g.scale(factor));
        }
        out
    }

    /// Keeps only the terms for which `keep` returns true.
    pub(crate) fn filter_deltas(&self, keep: impl Fn(i32) -> bool) -> Self {
        let mut out = self.clone();
        out.deltas.retain(|q, _| keep(*q));
        out
    }

    /// Thick partial derivative `∂∗/∂x_axis`.
    ///
    /// # Panics
    ///
    /// Panics if `axis` is not in `1..=dim`.
    pub fn partial(&self, axis: usize) -> Self {
        thick_partial(axis, self)
    }
}

fn merge_into(map: &mut BTreeMap<i32, SphericalSymbol>, dim: usize, key: i32, value: SphericalSymbol) {
    assert_eq!(value.dim(), dim, "thick distribution dimension mismatch");
    let merged = match map.remove(&key) {
        Some(existing) => existing + value,
        None => value,
    };
    let merged = merged.normalize();
    if !merged.is_zero() {
        map.insert(key, merged);
    }
}

impl Add<&ThickDistribution> for &ThickDistribution {
    type Output = ThickDistribution;
    /// # Panics
    ///
    /// Panics on a dimension mismatch; use [`ThickDistribution::checked_add`]
    /// to get an error instead.
    fn add(self, rhs: &ThickDistribution) -> ThickDistribution {
        self.checked_add(rhs).expect("adding thick distributions")
    }
}

impl Add for ThickDistribution {
    type Output = ThickDistribution;
    fn add(self, rhs: ThickDistribution) -> ThickDistribution {
        &self + &rhs
    }
}

impl Sub<&ThickDistribution> for &ThickDistribution {
    type Output = ThickDistribution;
    fn sub(self, rhs: &ThickDistribution) -> ThickDistribution {
        self + &(-rhs)
    }
}

impl Sub for ThickDistribution {
    type Output = ThickDistribution;
    fn sub(self, rhs: ThickDistribution) -> ThickDistribution {
        &self - &rhs
    }
}

impl Neg for &ThickDistribution {
    type Output = ThickDistribution;
    fn neg(self) -> ThickDistribution {
        self.scale(&-ScalarCoeff::one())
    }
}

impl Neg for ThickDistribution {
    type Output = ThickDistribution;
    fn neg(self) -> ThickDistribution {
        -&self
    }
}

/// Product of the homogeneous multiplier `r^degree ψ₀` with `value`.
///
/// `Pf` terms absorb the multiplier (`ψ Pf(φ) = Pf(ψ φ)`), while thick deltas
/// shift order because `r^k δ∗^[q] = δ∗^[q-k]`.
pub fn multiply_homogeneous(degree: i32, profile: &SphericalSymbol, value: &ThickDistribution) -> ThickDistribution {
    assert_eq!(profile.dim(), value.dim, "multiplier dimension mismatch");
    let mut out = ThickDistribution::zero(value.dim);
    for (k, p) in &value.pf {
        out.add_pf(k + degree, profile * p);
    }
    for (q, g) in &value.deltas {
        out.add_delta(q - degree, profile * g);
    }
    out
}

/// Thick partial derivative along `x_axis`:
///
/// * `∂∗_i Pf(r^k ψ₀) = Pf(r^(k-1) (k n_i ψ₀ + δψ₀/δx_i)) + C n_i ψ₀ δ∗^[1-n-k]`
/// * `∂∗_i (g δ∗^[q]) = (δg/δx_i - (q+n) n_i g) δ∗^[q+1]`
///
/// # Panics
///
/// Panics if `axis` is not in `1..=dim`.
pub fn thick_partial(axis: usize, value: &ThickDistribution) -> ThickDistribution {
    let dim = value.dim;
    check_axis(axis, dim).expect("thick_partial axis");
    let n_i = SphericalSymbol::n(dim, axis);
    let c = ScalarCoeff::c();
    let mut out = ThickDistribution::zero(dim);
    for (k, p) in &value.pf {
        out.add_pf(k - 1, homogeneous_partial_profile(axis, *k, p));
        out.add_delta(1 - dim as i32 - k, (&n_i * p).scale(&c));
    }
    for (q, g) in &value.deltas {
        let weight = ScalarCoeff::from_integer(-(*q as i64 + dim as i64));
        let density = g.delta_derivative(axis) + (&n_i * g).scale(&weight);
        out.add_delta(q + 1, density);
    }
    out
}

/// Closed form of `∂∗_i ∂∗_j Pf(r^k ψ₀)`:
///
/// `Pf(∂_i ∂_j ψ) + C ((δ_ij + 2(k-1) n_i n_j) ψ₀ + n_j δψ₀/δx_i + n_i δψ₀/δx_j) δ∗^[2-n-k]`,
///
/// where the profile of `∂_i ∂_j ψ` is expanded as
/// `k(k-2) n_i n_j ψ₀ + k δ_ij ψ₀ + (k-1) n_i δψ₀/δx_j + k n_j δψ₀/δx_i + δ/δx_i δψ₀/δx_j`.
///
/// # Panics
///
/// Panics if `i` or `j` is not in `1..=dim`.
pub fn second_partial_closed_form(i: usize, j: usize, degree: i32, profile: &SphericalSymbol) -> ThickDistribution {
    let dim = profile.dim();
    check_axis(i, dim).expect("second_partial_closed_form axis i");
    check_axis(j, dim).expect("second_partial_closed_form axis j");
    let k = degree as i64;
    let int = |v: i64| ScalarCoeff::from_integer(v);
    let n_i = SphericalSymbol::n(dim, i);
    let n_j = SphericalSymbol::n(dim, j);
    let n_ij = &n_i * &n_j;
    let kron = SphericalSymbol::kronecker(dim, i, j);
    let d_i = profile.delta_derivative(i);
    let d_j = profile.delta_derivative(j);
    let d_ij = d_j.delta_derivative(i);

    let pf_profile = (&n_ij * profile).scale(&int(k * (k - 2)))
        + (&kron * profile).scale(&int(k))
        + (&n_i * &d_j).scale(&int(k - 1))
        + (&n_j * &d_i).scale(&int(k))
        + d_ij;

    let density = (&kron * profile)
        + (&n_ij * profile).scale(&int(2 * (k - 1)))
        + &n_j * &d_i
        + &n_i * &d_j;

    ThickDistribution::pf(degree - 2, pf_profile)
        + ThickDistribution::delta(2 - dim as i32 - degree, density.scale(&ScalarCoeff::c()))
}

/// `μ_ij = δ_ij - n_i n_j` as the degree-(-1) multiplier `∂n_i/∂x_j`.
pub fn direction_partial(dim: usize, i: usize, j: usize) -> Multiplier {
    Multiplier::homogeneous(-1, mu(dim, i, j))
}

impl fmt::Display for ThickDistribution {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&crate::dsl::render_thick_plain(self))
    }
}

impl fmt::Display for Multiplier {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&crate::dsl::render_multiplier_plain(self))
    }
}
