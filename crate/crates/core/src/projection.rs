//! Classical distributions, the projection `Π` from thick distributions, and
//! the order-0 restriction `Π₀` with the derivative `∂₀∗` it induces.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Neg, Sub};

use num_bigint::BigInt;

use crate::error::{check_axis, check_dims, Error, Result};
use crate::scalar::{Rational, ScalarCoeff};
use crate::sphere::{MultiIndex, SphericalSymbol};
use crate::thick::{homogeneous_partial_profile, thick_partial, ThickDistribution};

/// How a homogeneous function term is read as a classical distribution.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum FunctionKind {
    /// Degree above `-dim`: locally integrable, a regular distribution.
    Regular,
    /// Degree exactly `-dim` with zero sphere mean: principal value.
    PrincipalValue,
    /// Every other case: spherical finite part.
    FinitePart,
}

/// One term of a [`StandardDistribution`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum StandardTerm {
    RegularHomogeneous { degree: i32, profile: SphericalSymbol },
    PrincipalValue { degree: i32, profile: SphericalSymbol },
    FinitePartTerm { degree: i32, profile: SphericalSymbol },
    /// `coeff * D^alpha δ(x)`.
    DeltaDerivative { alpha: MultiIndex, coeff: ScalarCoeff },
}

/// Classifies the homogeneous function `r^degree profile` in `R^dim`.
pub fn classify(dim: usize, degree: i32, profile: &SphericalSymbol) -> FunctionKind {
    let n = dim as i32;
    if degree > -n {
        FunctionKind::Regular
    } else if degree == -n && profile.sphere_moment().is_zero() {
        FunctionKind::PrincipalValue
    } else {
        FunctionKind::FinitePart
    }
}

/// An element of `D'(R^dim)` built from homogeneous function terms and
/// derivatives of `δ`.
///
/// Function terms are stored as degree and normalized profile; their
/// regular / p.v. / finite-part reading is derived by [`classify`].
/// Delta terms store the coefficient of the genuine distributional
/// derivative `D^alpha δ`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct StandardDistribution {
    dim: usize,
    functions: BTreeMap<i32, SphericalSymbol>,
    deltas: BTreeMap<MultiIndex, ScalarCoeff>,
}

impl StandardDistribution {
    pub fn zero(dim: usize) -> Self {
        Self {
            dim,
            functions: BTreeMap::new(),
            deltas: BTreeMap::new(),
        }
    }

    /// The homogeneous function `r^degree profile`, read as a distribution
    /// (regular, p.v. or finite part according to [`classify`]).
    pub fn homogeneous(degree: i32, profile: SphericalSymbol) -> Self {
        let mut out = Self::zero(profile.dim());
        out.add_function(degree, profile);
        out
    }

    /// `coeff * D^alpha δ`.
    pub fn delta_derivative(alpha: MultiIndex, coeff: ScalarCoeff) -> Self {
        let mut out = Self::zero(alpha.dim());
        out.add_delta(alpha, coeff);
        out
    }

    /// `coeff * δ`.
    pub fn delta(dim: usize, coeff: ScalarCoeff) -> Self {
        Self::delta_derivative(MultiIndex::zeros(dim), coeff)
    }

    fn add_function(&mut self, degree: i32, profile: SphericalSymbol) {
        assert_eq!(profile.dim(), self.dim, "standard distribution dimension mismatch");
        let merged = match self.functions.remove(&degree) {
            Some(existing) => existing + profile,
            None => profile,
        }
        .normalize();
        if !merged.is_zero() {
            self.functions.insert(degree, merged);
        }
    }

    fn add_delta(&mut self, alpha: MultiIndex, coeff: ScalarCoeff) {
        assert_eq!(alpha.dim(), self.dim, "standard distribution dimension mismatch");
        let merged = match self.deltas.remove(&alpha) {
            Some(existing) => existing + coeff,
            None => coeff,
        };
        if !merged.is_zero() {
            self.deltas.insert(alpha, merged);
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn is_zero(&self) -> bool {
        self.functions.is_empty() && self.deltas.is_empty()
    }

    /// `(degree, profile)` of every function term, increasing in degree.
    pub fn function_terms(&self) -> impl Iterator<Item = (i32, &SphericalSymbol)> {
        self.functions.iter().map(|(k, p)| (*k, p))
    }

    /// `(alpha, coeff)` of every `D^alpha δ` term, lexicographic in `alpha`.
    pub fn delta_terms(&self) -> impl Iterator<Item = (&MultiIndex, &ScalarCoeff)> {
        self.deltas.iter()
    }

    /// Profile of the function term of the given degree (zero if absent).
    pub fn function_profile(&self, degree: i32) -> SphericalSymbol {
        self.functions.get(&degree).cloned().unwrap_or_else(|| SphericalSymbol::zero(self.dim))
    }

    /// Coefficient of `D^alpha δ`.
    pub fn delta_coefficient_of(&self, alpha: &MultiIndex) -> ScalarCoeff {
        self.deltas.get(alpha).cloned().unwrap_or_default()
    }

    /// Coefficient of `δ` itself.
    pub fn delta_coefficient(&self) -> ScalarCoeff {
        self.delta_coefficient_of(&MultiIndex::zeros(self.dim))
    }

    /// The same distribution with every `D^alpha δ` term removed.
    pub fn function_part(&self) -> Self {
        Self {
            dim: self.dim,
            functions: self.functions.clone(),
            deltas: BTreeMap::new(),
        }
    }

    /// The same distribution with every function term removed.
    pub fn point_part(&self) -> Self {
        Self {
            dim: self.dim,
            functions: BTreeMap::new(),
            deltas: self.deltas.clone(),
        }
    }

    /// Classified terms: function terms by decreasing degree, then delta
    /// derivatives by increasing order and lexicographic multi-index.
    pub fn terms(&self) -> Vec<StandardTerm> {
        let mut out = Vec::new();
        for (k, p) in self.functions.iter().rev() {
            let (degree, profile) = (*k, p.clone());
            out.push(match classify(self.dim, degree, p) {
                FunctionKind::Regular => StandardTerm::RegularHomogeneous { degree, profile },
                FunctionKind::PrincipalValue => StandardTerm::PrincipalValue { degree, profile },
                FunctionKind::FinitePart => StandardTerm::FinitePartTerm { degree, profile },
            });
        }
        let mut deltas: Vec<_> = self.deltas.iter().collect();
        deltas.sort_by(|a, b| a.0.order().cmp(&b.0.order()).then_with(|| b.0.cmp(a.0)));
        for (alpha, coeff) in deltas {
            out.push(StandardTerm::DeltaDerivative {
                alpha: alpha.clone(),
                coeff: coeff.clone(),
            });
        }
        out
    }

    pub fn checked_add(&self, other: &Self) -> Result<Self> {
        check_dims(self.dim, other.dim)?;
        let mut out = self.clone();
        for (k, p) in &other.functions {
            out.add_function(*k, p.clone());
        }
        for (a, c) in &other.deltas {
            out.add_delta(a.clone(), c.clone());
        }
        Ok(out)
    }

    pub fn checked_sub(&self, other: &Self) -> Result<Self> {
        self.checked_add(&-other)
    }

    pub fn scale(&self, factor: &ScalarCoeff) -> Self {
        let mut out = Self::zero(self.dim);
        for (k, p) in &self.functions {
            out.add_function(*k, p.scale(factor));
        }
        for (a, c) in &self.deltas {
            out.add_delta(a.clone(), c * factor);
        }
        out
    }

    /// Distributional derivative `∂̄/∂x_axis`.
    ///
    /// # Panics
    ///
    /// Panics if `axis` is not in `1..=dim`.
    pub fn partial(&self, axis: usize) -> Self {
        standard_partial(axis, self)
    }
}

impl Add<&StandardDistribution> for &StandardDistribution {
    type Output = StandardDistribution;
    /// # Panics
    ///
    /// Panics on a dimension mismatch.
    fn add(self, rhs: &StandardDistribution) -> StandardDistribution {
        self.checked_add(rhs).expect("adding standard distributions")
    }
}

impl Add for StandardDistribution {
    type Output = StandardDistribution;
    fn add(self, rhs: StandardDistribution) -> StandardDistribution {
        &self + &rhs
    }
}

impl Sub<&StandardDistribution> for &StandardDistribution {
    type Output = StandardDistribution;
    fn sub(self, rhs: &StandardDistribution) -> StandardDistribution {
        self + &(-rhs)
    }
}

impl Sub for StandardDistribution {
    type Output = StandardDistribution;
    fn sub(self, rhs: StandardDistribution) -> StandardDistribution {
        &self - &rhs
    }
}

impl Neg for &StandardDistribution {
    type Output = StandardDistribution;
    fn neg(self) -> StandardDistribution {
        self.scale(&-ScalarCoeff::one())
    }
}

impl Neg for StandardDistribution {
    type Output = StandardDistribution;
    fn neg(self) -> StandardDistribution {
        -&self
    }
}

impl fmt::Display for StandardDistribution {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&crate::dsl::render_standard_plain(self))
    }
}

fn signed_by_parity(order: u32) -> Rational {
    if order.is_multiple_of(2) {
        Rational::from_integer(1.into())
    } else {
        Rational::from_integer((-1).into())
    }
}

fn inverse_factorial(alpha: &MultiIndex) -> Rational {
    Rational::new(BigInt::from(1), alpha.factorial())
}

/// The projection `Π` onto `D'(R^dim)`.
///
/// `Pf` terms become homogeneous function terms; a thick delta of order
/// `q ≥ 0` becomes `((-1)^q / C) Σ_{|α|=q} ⟨g, w^α⟩ / α! D^α δ`; thick deltas of
/// negative order project to zero.
pub fn project(value: &ThickDistribution) -> StandardDistribution {
    let dim = value.dim();
    let mut out = StandardDistribution::zero(dim);
    for (k, p) in value.pf_terms() {
        out.add_function(k, p.clone());
    }
    let inv_c = ScalarCoeff::c_power(-1);
    for (q, g) in value.delta_terms() {
        if q < 0 {
            continue;
        }
        let q = q as u32;
        for alpha in MultiIndex::all_of_order(dim, q) {
            let w_alpha = SphericalSymbol::monomial(alpha.clone(), ScalarCoeff::one());
            let moment = (g * &w_alpha).sphere_moment();
            if moment.is_zero() {
                continue;
            }
            let weight = signed_by_parity(q) * inverse_factorial(&alpha);
            out.add_delta(alpha, (&moment * &inv_c).scale(&weight));
        }
    }
    out
}

/// Distributional derivative of the homogeneous function `r^degree profile`,
/// evaluated directly from the three cases for the degree:
///
/// * `k > 1-n`: the ordinary derivative, a regular distribution;
/// * `k = 1-n`: `p.v.(∂ψ/∂x_i) + A δ` with `A = ⟨ψ₀, n_i⟩`;
/// * `k < 1-n`: `Pf(∂ψ/∂x_i) + (-1)^q Σ_{|α|=q} ⟨n_i ψ₀, w^α⟩/α! D^α δ`, `q = 1-n-k`.
///
/// # Panics
///
/// Panics if `axis` is not in `1..=dim`.
pub fn standard_partial_homogeneous(axis: usize, degree: i32, profile: &SphericalSymbol) -> StandardDistribution {
    let dim = profile.dim();
    check_axis(axis, dim).expect("standard_partial_homogeneous axis");
    let n = dim as i32;
    let derivative = homogeneous_partial_profile(axis, degree, profile);
    let mut out = StandardDistribution::homogeneous(degree - 1, derivative);
    let weighted = SphericalSymbol::n(dim, axis) * profile;
    if degree == 1 - n {
        out.add_delta(MultiIndex::zeros(dim), weighted.sphere_moment());
    } else if degree < 1 - n {
        let q = (1 - n - degree) as u32;
        for alpha in MultiIndex::all_of_order(dim, q) {
            let w_alpha = SphericalSymbol::monomial(alpha.clone(), ScalarCoeff::one());
            let moment = (&weighted * &w_alpha).sphere_moment();
            let weight = signed_by_parity(q) * inverse_factorial(&alpha);
            out.add_delta(alpha, moment.scale(&weight));
        }
    }
    out
}

/// Distributional derivative of a classical value, term by term:
/// function terms via [`standard_partial_homogeneous`], and
/// `c D^α δ ↦ c D^(α+e_i) δ`.
///
/// # Panics
///
/// Panics if `axis` is not in `1..=dim`.
pub fn standard_partial(axis: usize, value: &StandardDistribution) -> StandardDistribution {
    let dim = value.dim;
    check_axis(axis, dim).expect("standard_partial axis");
    let mut out = StandardDistribution::zero(dim);
    for (k, p) in &value.functions {
        out = out + standard_partial_homogeneous(axis, *k, p);
    }
    for (alpha, c) in &value.deltas {
        out.add_delta(alpha.bumped(axis, 1), c.clone());
    }
    out
}

/// Restriction `Π₀` to test functions whose expansion starts at order 0:
/// thick deltas of negative order vanish there, everything else is kept.
pub fn project_order_zero(value: &ThickDistribution) -> ThickDistribution {
    value.filter_deltas(|q| q >= 0)
}

/// `∂₀∗_i`: the thick derivative of the canonical extension followed by
/// `Π₀`. The input must be an order-0 value (no negative-order deltas).
pub fn order_zero_partial(axis: usize, value: &ThickDistribution) -> Result<ThickDistribution> {
    check_axis(axis, value.dim())?;
    if let Some(order) = value.min_delta_order().filter(|q| *q < 0) {
        return Err(Error::NegativeOrderDelta { order });
    }
    Ok(project_order_zero(&thick_partial(axis, value)))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn n(dim: usize, axis: usize) -> SphericalSymbol {
        SphericalSymbol::n(dim, axis)
    }

    fn c() -> ScalarCoeff {
        ScalarCoeff::c()
    }

    #[test]
    fn projects_thick_delta_to_mean() {
        for dim in 2..=4 {
            let g = n(dim, 1).pow(2) + n(dim, 2);
            let got = project(&ThickDistribution::delta(0, g.clone()));
            let want = StandardDistribution::delta(dim, &g.sphere_moment() * &ScalarCoeff::c_power(-1));
            assert_eq!(got, want);
            assert_eq!(project(&ThickDistribution::delta_star(dim)), StandardDistribution::delta(dim, ScalarCoeff::one()));
        }
    }

    #[test]
    fn projects_nn_delta_in_three_dims() {
        for i in 1..=3 {
            for j in 1..=3 {
                let got = project(&ThickDistribution::delta(0, n(3, i) * n(3, j)));
                let coeff = if i == j { ScalarCoeff::ratio(1, 3) } else { ScalarCoeff::zero() };
                assert_eq!(got, StandardDistribution::delta(3, coeff));
            }
        }
    }

    #[test]
    fn negative_orders_project_to_zero() {
        for dim in 2..=4 {
            let t = ThickDistribution::delta(1 - dim as i32, n(dim, 1).scale(&c()));
            assert!(project(&t).is_zero());
        }
    }

    #[test]
    fn bowen_coefficient_projection() {
        let g = (n(3, 1).pow(2) * n(3, 2).pow(2)).scale(&c());
        let got = project(&ThickDistribution::delta(0, g));
        assert_eq!(got.delta_coefficient(), ScalarCoeff::ratio(1, 15) * c());
        assert_eq!(got.delta_coefficient().to_pi_form(3).to_string(), "4π/15");
    }

    #[test]
    fn direct_derivative_of_n_over_r_squared() {
        for i in 1..=3 {
            for j in 1..=3 {
                let got = standard_partial_homogeneous(i, -2, &n(3, j));
                let profile = SphericalSymbol::kronecker(3, i, j) - (n(3, i) * n(3, j)).scale(&ScalarCoeff::from_integer(3));
                assert!(profile.sphere_moment().is_zero());
                let delta = if i == j { ScalarCoeff::ratio(1, 3) * c() } else { ScalarCoeff::zero() };
                let want = StandardDistribution::homogeneous(-3, profile) + StandardDistribution::delta(3, delta);
                assert_eq!(got, want);
                assert!(matches!(got.terms()[0], StandardTerm::PrincipalValue { degree: -3, .. }));
            }
        }
    }

    #[test]
    fn derivative_of_constant_is_zero() {
        for dim in 2..=4 {
            for i in 1..=dim {
                assert!(standard_partial_homogeneous(i, 0, &SphericalSymbol::one(dim)).is_zero());
            }
        }
    }

    #[test]
    fn higher_order_point_part_in_the_plane() {
        // ψ = n1 / r^3 in R^2, derivative along x1
        let got = standard_partial_homogeneous(1, -3, &n(2, 1));
        let e = |a: u32, b: u32| MultiIndex::new(vec![a, b]);
        assert_eq!(got.delta_coefficient_of(&e(2, 0)), ScalarCoeff::ratio(3, 16) * c());
        assert_eq!(got.delta_coefficient_of(&e(0, 2)), ScalarCoeff::ratio(1, 16) * c());
        assert!(got.delta_coefficient_of(&e(1, 1)).is_zero());
        assert_eq!(got.delta_coefficient_of(&e(2, 0)).to_pi_form(2).to_string(), "3π/8");
        assert_eq!(got.delta_coefficient_of(&e(0, 2)).to_pi_form(2).to_string(), "π/8");
        let profile = homogeneous_partial_profile(1, -3, &n(2, 1));
        assert_eq!(got.function_part(), StandardDistribution::homogeneous(-4, profile));
        assert!(matches!(got.terms()[0], StandardTerm::FinitePartTerm { degree: -4, .. }));
    }

    #[test]
    fn derivative_of_delta_raises_multi_index() {
        let d = StandardDistribution::delta(3, ScalarCoeff::one());
        let got = standard_partial(2, &d);
        assert_eq!(got, StandardDistribution::delta_derivative(MultiIndex::unit(3, 2), ScalarCoeff::one()));
    }

    #[test]
    fn frahm_by_repeated_standard_derivatives() {
        let inv_r = StandardDistribution::homogeneous(-1, SphericalSymbol::one(3));
        for i in 1..=3 {
            for j in 1..=3 {
                let got = inv_r.partial(j).partial(i);
                let kron = SphericalSymbol::kronecker(3, i, j);
                let profile = (n(3, i) * n(3, j)).scale(&ScalarCoeff::from_integer(3)) - &kron;
                let delta = if i == j { -(ScalarCoeff::ratio(1, 3) * c()) } else { ScalarCoeff::zero() };
                let want = StandardDistribution::homogeneous(-3, profile) + StandardDistribution::delta(3, delta);
                assert_eq!(got, want);
            }
        }
    }

    #[test]
    fn order_zero_projection_and_derivative() {
        let t = ThickDistribution::delta(-1, n(2, 1).scale(&c()));
        assert!(project_order_zero(&t).is_zero());
        let kept = ThickDistribution::delta(0, n(3, 1) * n(3, 2)) + ThickDistribution::pf(-5, SphericalSymbol::one(3));
        assert_eq!(project_order_zero(&kept), kept);
        assert!(matches!(order_zero_partial(1, &t), Err(Error::NegativeOrderDelta { order: -1 })));
        assert!(order_zero_partial(3, &kept).is_ok());
        assert!(order_zero_partial(4, &kept).is_err());
    }

    #[test]
    fn classification_boundary() {
        assert_eq!(classify(3, -2, &SphericalSymbol::one(3)), FunctionKind::Regular);
        assert_eq!(classify(3, -3, &n(3, 1)), FunctionKind::PrincipalValue);
        assert_eq!(classify(3, -3, &SphericalSymbol::one(3)), FunctionKind::FinitePart);
        assert_eq!(classify(3, -4, &n(3, 1)), FunctionKind::FinitePart);
    }
}
