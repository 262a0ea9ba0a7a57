//! Numerical pairing of thick distributions with Gaussian test functions.
//!
//! The thick derivative is defined by duality, `⟨∂∗T, φ⟩ = -⟨T, ∂φ⟩`. This
//! module evaluates both sides with quadrature so the symbolic derivative
//! can be checked against the definition.

mod probes;
mod quadrature;
mod radial;
mod test_function;

pub use probes::{probes, random_symbol, random_test_function, random_thick, run_check, CheckReport, ClassReport, Probe, ProbeClass, PROBE_COUNT};
pub use quadrature::{GaussLegendre, SphereQuadrature};
pub use radial::{radial_finite_part, RadialFinitePartTable};
pub use test_function::TestFunction;

use crate::error::{check_axis, check_dims, Result};
use crate::sphere::SphericalSymbol;
use crate::thick::{thick_partial, ThickDistribution};

/// `⟨T, φ⟩`.
///
/// Finite-part terms use `⟨Pf(r^k ψ₀), n^a r^m e^{-r²}⟩ = ⟨ψ₀ n^a⟩ F(k+m+dim-1)`;
/// thick deltas use `⟨g δ∗^[q], φ⟩ = ⟨g a_q⟩ / C`. `C` is substituted numerically.
pub fn pair(value: &ThickDistribution, phi: &TestFunction) -> Result<f64> {
    check_dims(value.dim(), phi.dim())?;
    let dim = value.dim();
    let mut total = 0.0;
    for (k, profile) in value.pf_terms() {
        for (a, m, c) in phi.terms() {
            let mono = SphericalSymbol::monomial(a.clone(), c.clone().into());
            let moment = (profile * &mono).sphere_moment().evaluate(dim);
            if moment != 0.0 {
                total += moment * radial_finite_part(k + m + dim as i32 - 1);
            }
        }
    }
    let area = crate::scalar::sphere_area(dim);
    for (q, density) in value.delta_terms() {
        let coefficient = phi.expansion_coefficient(q);
        total += (density * &coefficient).sphere_moment().evaluate(dim) / area;
    }
    Ok(total)
}

/// `|⟨∂∗_i T, φ⟩ + ⟨T, ∂_i φ⟩| / (1 + |⟨∂∗_i T, φ⟩|)`.
pub fn duality_residual(value: &ThickDistribution, axis: usize, phi: &TestFunction) -> Result<f64> {
    check_dims(value.dim(), phi.dim())?;
    check_axis(axis, value.dim())?;
    let lhs = pair(&thick_partial(axis, value), phi)?;
    let rhs = pair(value, &phi.partial(axis))?;
    Ok((lhs + rhs).abs() / (1.0 + lhs.abs()))
}

/// `∫_S n^a dσ` by product-angle quadrature.
pub fn numeric_sphere_moment(exponents: &[u32]) -> f64 {
    SphereQuadrature::new(exponents.len()).monomial_integral(exponents)
}
