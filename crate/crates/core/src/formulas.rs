//! Named results: Bowen's derivative and its invalid product-rule variant,
//! Frahm's formula, and the order-0 second derivatives.
//!
//! Index arguments are 1-based axes. Every function panics on an axis out
//! of range.

use std::fmt::Write as _;

use num_traits::{One, Signed};

use crate::projection::{classify, project, project_order_zero, order_zero_partial, standard_partial_homogeneous, FunctionKind, StandardDistribution};
use crate::scalar::ScalarCoeff;
use crate::sphere::{MultiIndex, SphericalSymbol};
use crate::thick::{thick_partial, Multiplier, ThickDistribution};

const SPACE: usize = 3;

fn check_space_axes(axes: &[usize]) {
    for &a in axes {
        assert!((1..=SPACE).contains(&a), "axis {a} out of range 1..=3");
    }
}

/// `n_{j1} n_{j2} ... n_{jk}` in dimension 3.
pub fn bowen_profile(indices: &[usize]) -> SphericalSymbol {
    check_space_axes(indices);
    indices.iter().fold(SphericalSymbol::one(SPACE), |acc, &j| acc * SphericalSymbol::n(SPACE, j))
}

/// `∂̄_i (n_{j1}...n_{jk} / r²)` by the direct homogeneous formula.
pub fn bowen_direct(indices: &[usize], i: usize) -> StandardDistribution {
    check_space_axes(&[i]);
    standard_partial_homogeneous(i, -2, &bowen_profile(indices))
}

/// The same derivative by induction on `k` with the thick product rule,
/// projected at the end.
pub fn bowen_inductive(indices: &[usize], i: usize) -> StandardDistribution {
    check_space_axes(indices);
    check_space_axes(&[i]);
    let mut thick = thick_partial(i, &ThickDistribution::pf(-2, SphericalSymbol::one(SPACE)));
    let mut prefix = SphericalSymbol::one(SPACE);
    for &j in indices {
        let below = ThickDistribution::pf(-2, prefix.clone());
        let d_n = Multiplier::n(SPACE, j).partial(i);
        let first = d_n.apply(&below).expect("same dimension");
        let second = Multiplier::n(SPACE, j).apply(&thick).expect("same dimension");
        thick = first + second;
        prefix = prefix * SphericalSymbol::n(SPACE, j);
    }
    project(&thick)
}

/// `∂̄_i (n_{j1}...n_{jk} / r²)` in `R^3`, computed by both routes.
///
/// # Panics
///
/// Panics if `indices` is empty, if an axis is outside `1..=3`, or if the
/// two routes disagree.
pub fn bowen_derivative(indices: &[usize], i: usize) -> StandardDistribution {
    assert!(!indices.is_empty(), "need at least one index");
    let direct = bowen_direct(indices, i);
    let inductive = bowen_inductive(indices, i);
    assert_eq!(direct, inductive, "direct and inductive routes disagree");
    direct
}

/// `∫_S n^a dσ`: the delta coefficient of Bowen's derivative when `a` is
/// the exponent pattern of `n_i n_{j1} ... n_{jk}`.
pub fn bowen_coefficient(exponents: &MultiIndex) -> ScalarCoeff {
    SphericalSymbol::monomial(exponents.clone(), ScalarCoeff::one()).sphere_moment()
}

/// The two parts of the invalid product-rule route for
/// `∂̄_i (n_{j1} n_{j2} n_{j3} / r²)`: the function part ("Normal") and the
/// symmetrized source coefficient obtained by replacing the mean of a
/// product with the product of the means.
pub fn bowen_naive_parts(j1: usize, j2: usize, j3: usize, i: usize) -> (StandardDistribution, ScalarCoeff) {
    check_space_axes(&[j1, j2, j3, i]);
    let normal = {
        let pair = SphericalSymbol::n(SPACE, j1) * SphericalSymbol::n(SPACE, j2);
        let single = SphericalSymbol::n(SPACE, j3);
        let a = &pair * &crate::thick::homogeneous_partial_profile(i, -2, &single);
        let b = &single * &crate::thick::homogeneous_partial_profile(i, 0, &pair);
        StandardDistribution::homogeneous(-3, a + b)
    };
    let source = |a: usize, b: usize, c: usize| {
        let point = standard_partial_homogeneous(i, -2, &SphericalSymbol::n(SPACE, c)).delta_coefficient();
        let mean = (SphericalSymbol::n(SPACE, a) * SphericalSymbol::n(SPACE, b)).sphere_moment() * ScalarCoeff::c_power(-1);
        point * mean
    };
    let sym = (source(j1, j2, j3) + source(j3, j2, j1) + source(j1, j3, j2)) * ScalarCoeff::ratio(1, 3);
    (normal, sym)
}

/// Deliberately wrong value of `∂̄_i (n_{j1} n_{j2} n_{j3} / r²)`.
///
/// Its function part is correct; its delta coefficient is
/// `(C/27)(δ_{ij1}δ_{j2j3} + δ_{ij2}δ_{j1j3} + δ_{ij3}δ_{j1j2})` instead of
/// `⟨n_i n_{j1} n_{j2} n_{j3}⟩`. Use it as a counterexample.
pub fn bowen_naive(j1: usize, j2: usize, j3: usize, i: usize) -> StandardDistribution {
    let (normal, sym) = bowen_naive_parts(j1, j2, j3, i);
    normal + StandardDistribution::delta(SPACE, sym)
}

fn inverse_r() -> ThickDistribution {
    ThickDistribution::pf(-1, SphericalSymbol::one(SPACE))
}

/// `∂∗_i ∂∗_j Pf(1/r)` in `R^3`.
pub fn pd9(i: usize, j: usize) -> ThickDistribution {
    check_space_axes(&[i, j]);
    thick_partial(i, &thick_partial(j, &inverse_r()))
}

/// `∂̄_i ∂̄_j (1/r)` in `R^3`, the projection of [`pd9`].
pub fn frahm(i: usize, j: usize) -> StandardDistribution {
    project(&pd9(i, j))
}

/// `Δ(1/r)` in `R^3`, the trace of [`frahm`].
pub fn laplacian_inverse_r() -> StandardDistribution {
    (1..=SPACE).fold(StandardDistribution::zero(SPACE), |acc, i| acc + frahm(i, i))
}

/// `∂∗_i ∂∗_j Pf(1)` in `R^dim`.
pub fn h4(dim: usize, i: usize, j: usize) -> ThickDistribution {
    let one = ThickDistribution::pf_one(dim);
    thick_partial(i, &thick_partial(j, &one))
}

/// In `R^2`: `(∂₀_i ∂₀_j Pf(1), Π₀(∂∗_i ∂∗_j Pf(1)))`.
pub fn h5(i: usize, j: usize) -> (ThickDistribution, ThickDistribution) {
    let one = ThickDistribution::pf_one(2);
    let composed = order_zero_partial(j, &one).and_then(|t| order_zero_partial(i, &t)).expect("Pf(1) is an order-0 value");
    (composed, project_order_zero(&h4(2, i, j)))
}

/// `Π₀(∂∗_i ∂∗_j Pf(1/r))` in `R^3`.
pub fn h6(i: usize, j: usize) -> ThickDistribution {
    project_order_zero(&pd9(i, j))
}

/// `∂₀_i ∂₀_j Pf(1/r)` in `R^3`, composing the order-0 derivative.
pub fn h7(i: usize, j: usize) -> ThickDistribution {
    check_space_axes(&[i, j]);
    order_zero_partial(j, &inverse_r())
        .and_then(|t| order_zero_partial(i, &t))
        .expect("Pf(1/r) is an order-0 value")
}

/// `a δ_ij + b n_i n_j` with constant `a`, `b`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IsotropicPair {
    pub a: ScalarCoeff,
    pub b: ScalarCoeff,
}

/// One species of term in an [`IndexedFormula`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum IndexedTerm {
    /// `r^degree (a δ_ij + b n_i n_j)` under the given reading.
    Function { kind: FunctionKind, degree: i32, pair: IsotropicPair },
    /// `Pf(r^degree (a δ_ij + b n_i n_j))` in a thick value.
    FinitePart { degree: i32, pair: IsotropicPair },
    /// `(a δ_ij + b n_i n_j) δ∗^[order]`.
    ThickDelta { order: i32, pair: IsotropicPair },
    /// `a δ_ij δ`.
    Point { a: ScalarCoeff },
}

/// A rank-2 family of values written with free indices `i`, `j`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IndexedFormula {
    pub dim: usize,
    pub terms: Vec<IndexedTerm>,
}

fn fit_pair(dim: usize, component: impl Fn(usize, usize) -> SphericalSymbol) -> Option<IsotropicPair> {
    let off = component(1, 2).normalize();
    let mixed = MultiIndex::unit(dim, 1).with_added(&MultiIndex::unit(dim, 2));
    let b = off.coefficient(&mixed);
    let n1 = SphericalSymbol::n(dim, 1);
    let a = (component(1, 1) - (&n1 * &n1).scale(&b)).normalize().as_constant()?;
    let pair = IsotropicPair { a, b };
    for i in 1..=dim {
        for j in 1..=dim {
            let want = SphericalSymbol::kronecker(dim, i, j).scale(&pair.a) + (SphericalSymbol::n(dim, i) * SphericalSymbol::n(dim, j)).scale(&pair.b);
            if !component(i, j).equal_on_sphere(&want).ok()? {
                return None;
            }
        }
    }
    Some(pair)
}

impl IndexedFormula {
    /// Fits every component of a thick family to the isotropic form.
    pub fn from_thick(dim: usize, family: impl Fn(usize, usize) -> ThickDistribution) -> Option<Self> {
        let comps: Vec<Vec<ThickDistribution>> = (1..=dim).map(|i| (1..=dim).map(|j| family(i, j)).collect()).collect();
        let get = |i: usize, j: usize| &comps[i - 1][j - 1];
        let mut degrees: Vec<i32> = comps.iter().flatten().flat_map(|t| t.pf_terms().map(|(k, _)| k).collect::<Vec<_>>()).collect();
        let mut orders: Vec<i32> = comps.iter().flatten().flat_map(|t| t.delta_terms().map(|(q, _)| q).collect::<Vec<_>>()).collect();
        degrees.sort_unstable_by(|a, b| b.cmp(a));
        degrees.dedup();
        orders.sort_unstable();
        orders.dedup();
        let mut terms = Vec::new();
        for k in degrees {
            let pair = fit_pair(dim, |i, j| get(i, j).pf_profile(k))?;
            terms.push(IndexedTerm::FinitePart { degree: k, pair });
        }
        for q in orders {
            let pair = fit_pair(dim, |i, j| get(i, j).delta_density(q))?;
            terms.push(IndexedTerm::ThickDelta { order: q, pair });
        }
        Some(Self { dim, terms })
    }

    /// Fits every component of a classical family to the isotropic form.
    pub fn from_standard(dim: usize, family: impl Fn(usize, usize) -> StandardDistribution) -> Option<Self> {
        let comps: Vec<Vec<StandardDistribution>> = (1..=dim).map(|i| (1..=dim).map(|j| family(i, j)).collect()).collect();
        let get = |i: usize, j: usize| &comps[i - 1][j - 1];
        let mut degrees: Vec<i32> = comps.iter().flatten().flat_map(|t| t.function_terms().map(|(k, _)| k).collect::<Vec<_>>()).collect();
        degrees.sort_unstable_by(|a, b| b.cmp(a));
        degrees.dedup();
        let mut terms = Vec::new();
        for k in degrees {
            let pair = fit_pair(dim, |i, j| get(i, j).function_profile(k))?;
            let diagonal = SphericalSymbol::constant(dim, pair.a.clone()) + (SphericalSymbol::n(dim, 1) * SphericalSymbol::n(dim, 1)).scale(&pair.b);
            terms.push(IndexedTerm::Function { kind: classify(dim, k, &diagonal), degree: k, pair });
        }
        let zero = MultiIndex::zeros(dim);
        for s in comps.iter().flatten() {
            if s.delta_terms().any(|(alpha, _)| *alpha != zero) {
                return None;
            }
        }
        let a = get(1, 1).delta_coefficient();
        for i in 1..=dim {
            for j in 1..=dim {
                let want = if i == j { a.clone() } else { ScalarCoeff::zero() };
                if get(i, j).delta_coefficient() != want {
                    return None;
                }
            }
        }
        if !a.is_zero() {
            terms.push(IndexedTerm::Point { a });
        }
        Some(Self { dim, terms })
    }

    /// Unicode rendering with `C` written in terms of π, e.g.
    /// `2π(δij − 2 ni nj) δ∗`.
    pub fn to_unicode(&self) -> String {
        self.render(&UNICODE)
    }

    /// LaTeX rendering, e.g. `\mathrm{p.v.}\left(\frac{3x_{i}x_{j} - r^{2}\delta_{ij}}{r^{5}}\right) - \frac{4\pi}{3}\delta_{ij}\delta(\mathbf{x})`.
    pub fn to_latex(&self) -> String {
        self.render(&LATEX)
    }

    fn render(&self, s: &Symbols) -> String {
        let mut out = String::new();
        for (idx, term) in self.terms.iter().enumerate() {
            let (negative, body) = self.term(term, s);
            match (idx, negative) {
                (0, true) => out.push_str(s.neg),
                (0, false) => {}
                (_, true) => out.push_str(s.minus),
                (_, false) => out.push_str(" + "),
            }
            out.push_str(&body);
        }
        if out.is_empty() {
            out.push('0');
        }
        out
    }

    fn coeff(&self, c: &ScalarCoeff, s: &Symbols) -> String {
        let pi = c.to_pi_form(self.dim);
        if s.latex { pi.to_latex() } else { pi.to_string() }
    }

    /// `(negative, body)` for one term.
    fn term(&self, term: &IndexedTerm, s: &Symbols) -> (bool, String) {
        match term {
            IndexedTerm::Function { kind, degree, pair } => {
                let wrapper = match kind {
                    FunctionKind::Regular => None,
                    FunctionKind::PrincipalValue => Some(s.pv),
                    FunctionKind::FinitePart => Some(s.pf),
                };
                (false, self.function(wrapper, *degree, pair, s))
            }
            IndexedTerm::FinitePart { degree, pair } => (false, self.function(Some(s.pf), *degree, pair, s)),
            IndexedTerm::ThickDelta { order, pair } => {
                let (neg, factor, inner, compound) = self.factored(pair, s);
                let delta = if *order == 0 { s.delta_star.to_string() } else { (s.delta_star_q)(*order) };
                let body = match (factor.as_str(), compound) {
                    ("1", false) => format!("{inner}{}{delta}", s.gap),
                    ("1", true) => format!("{}{inner}{}{}{delta}", s.open, s.close, s.gap),
                    (f, true) => format!("{f}{}{inner}{}{}{delta}", s.open, s.close, s.gap),
                    (f, false) => format!("{f}{}{inner}{}{delta}", s.gap, s.gap),
                };
                (neg, body)
            }
            IndexedTerm::Point { a } => {
                let neg = a.terms().last().is_some_and(|(_, v)| v.is_negative());
                let mag = if neg { -a.clone() } else { a.clone() };
                let c = self.coeff(&mag, s);
                let c = if c == "1" { String::new() } else if s.latex { c } else { format!("({c})") };
                (neg, format!("{c}{}{}{}{}", if c.is_empty() { "" } else { s.gap }, s.kron, s.gap, s.delta))
            }
        }
    }

    /// `(negative, factor, inner, compound)` with `inner` one of `δij`,
    /// `ni nj`, `δij − 2 ni nj` and the factor a positive coefficient.
    fn factored(&self, pair: &IsotropicPair, s: &Symbols) -> (bool, String, String, bool) {
        let lead = if pair.a.is_zero() { &pair.b } else { &pair.a };
        let ratio = if pair.a.is_zero() {
            None
        } else {
            pair.b.as_monomial().zip(pair.a.as_monomial()).filter(|(b, a)| b.1 == a.1).map(|(b, a)| b.0 / a.0)
        };
        let lead_negative = lead.as_monomial().is_some_and(|(v, _)| v.is_negative());
        let factor_coeff = if lead_negative { -lead.clone() } else { lead.clone() };
        let factor = self.coeff(&factor_coeff, s);
        if pair.b.is_zero() {
            return (lead_negative, factor, s.kron.to_string(), false);
        }
        if pair.a.is_zero() {
            return (lead_negative, factor, s.nn.to_string(), false);
        }
        match ratio {
            Some(r) => {
                let r = if lead_negative { -r } else { r };
                let mut inner = s.kron.to_string();
                let negative = r.is_negative();
                inner.push_str(if negative { s.minus } else { " + " });
                let abs = if negative { -r } else { r };
                if !abs.is_one() {
                    let _ = write!(inner, "{}{}", rational(&abs, s), s.gap);
                }
                inner.push_str(s.nn);
                (lead_negative, factor, inner, true)
            }
            None => {
                let inner = format!("{}{}{} + {}{}{}", self.coeff(&pair.a, s), s.gap, s.kron, self.coeff(&pair.b, s), s.gap, s.nn);
                (false, "1".into(), inner, true)
            }
        }
    }

    /// `r^degree (a δ_ij + b n_i n_j)` written as `(b x_i x_j + a r² δ_ij)/r^(2-degree)`.
    fn function(&self, wrapper: Option<(&str, &str)>, degree: i32, pair: &IsotropicPair, s: &Symbols) -> String {
        let mut numer = String::new();
        let mut push = |c: &ScalarCoeff, sym: &str| {
            if c.is_zero() {
                return;
            }
            let negative = c.as_monomial().is_some_and(|(v, _)| v.is_negative());
            let mag = if negative { -c.clone() } else { c.clone() };
            let text = self.coeff(&mag, s);
            match (numer.is_empty(), negative) {
                (true, true) => numer.push_str(s.neg),
                (true, false) => {}
                (false, true) => numer.push_str(s.minus),
                (false, false) => numer.push_str(" + "),
            }
            if text != "1" {
                numer.push_str(&text);
                numer.push_str(s.gap);
            }
            numer.push_str(sym);
        };
        push(&pair.b, s.xx);
        push(&pair.a, s.r2_kron);
        let power = 2 - degree;
        let body = (s.fraction)(&numer, power);
        match wrapper {
            Some((open, close)) => format!("{open}{body}{close}"),
            None => body,
        }
    }
}

fn rational(v: &crate::scalar::Rational, s: &Symbols) -> String {
    if v.is_integer() {
        v.numer().to_string()
    } else if s.latex {
        format!("\\frac{{{}}}{{{}}}", v.numer(), v.denom())
    } else {
        format!("{}/{}", v.numer(), v.denom())
    }
}

struct Symbols {
    latex: bool,
    neg: &'static str,
    minus: &'static str,
    gap: &'static str,
    open: &'static str,
    close: &'static str,
    kron: &'static str,
    nn: &'static str,
    xx: &'static str,
    r2_kron: &'static str,
    delta: &'static str,
    delta_star: &'static str,
    delta_star_q: fn(i32) -> String,
    pv: (&'static str, &'static str),
    pf: (&'static str, &'static str),
    fraction: fn(&str, i32) -> String,
}

const UNICODE: Symbols = Symbols {
    latex: false,
    neg: "−",
    minus: " − ",
    gap: " ",
    open: "(",
    close: ")",
    kron: "δij",
    nn: "ni nj",
    xx: "xi xj",
    r2_kron: "r^2 δij",
    delta: "δ",
    delta_star: "δ∗",
    delta_star_q: |q| format!("δ∗^[{q}]"),
    pv: ("p.v.(", ")"),
    pf: ("Pf(", ")"),
    fraction: |numer, power| match power {
        0 => numer.to_string(),
        p if p > 0 => format!("({numer})/r^{p}"),
        p => format!("({numer}) r^{}", -p),
    },
};

const LATEX: Symbols = Symbols {
    latex: true,
    neg: "-",
    minus: " - ",
    gap: " ",
    open: "\\left(",
    close: "\\right)",
    kron: "\\delta_{ij}",
    nn: "n_{i} n_{j}",
    xx: "x_{i} x_{j}",
    r2_kron: "r^{2} \\delta_{ij}",
    delta: "\\delta(\\mathbf{x})",
    delta_star: "\\delta_{\\ast}",
    delta_star_q: |q| format!("\\delta_{{\\ast}}^{{[{q}]}}"),
    pv: ("\\mathrm{p.v.}\\left(", "\\right)"),
    pf: ("\\mathcal{P}f\\left(", "\\right)"),
    fraction: |numer, power| match power {
        0 => numer.to_string(),
        p if p > 0 => format!("\\frac{{{numer}}}{{r^{{{p}}}}}"),
        p => format!("\\left({numer}\\right) r^{{{}}}", -p),
    },
};

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bowen_single_index() {
        for i in 1..=3 {
            for j in 1..=3 {
                let got = bowen_derivative(&[j], i);
                let want = if i == j { ScalarCoeff::ratio(1, 3) * ScalarCoeff::c() } else { ScalarCoeff::zero() };
                assert_eq!(got.delta_coefficient(), want);
            }
        }
    }

    #[test]
    fn naive_route_coefficient() {
        let naive = bowen_naive(1, 1, 2, 2);
        assert_eq!(naive.delta_coefficient().to_pi_form(3).to_string(), "4π/27");
        let right = bowen_derivative(&[1, 1, 2], 2);
        assert_eq!(right.delta_coefficient().to_pi_form(3).to_string(), "4π/15");
        assert_eq!(naive.function_part(), right.function_part());
    }

    #[test]
    fn h4_in_the_plane() {
        let f = IndexedFormula::from_thick(2, |i, j| h4(2, i, j)).unwrap();
        assert_eq!(f.to_unicode(), "2π(δij − 2 ni nj) δ∗");
    }

    #[test]
    fn frahm_symbolic() {
        let f = IndexedFormula::from_standard(3, frahm).unwrap();
        assert_eq!(f.to_unicode(), "p.v.((3 xi xj − r^2 δij)/r^5) − (4π/3) δij δ");
        let latex = f.to_latex();
        assert!(latex.contains("\\mathrm{p.v.}") && latex.contains("\\delta_{ij}"), "{latex}");
    }

    #[test]
    fn pd9_symbolic() {
        let f = IndexedFormula::from_thick(3, pd9).unwrap();
        assert_eq!(f.to_unicode(), "Pf((3 xi xj − r^2 δij)/r^5) + 4π(δij − 4 ni nj) δ∗");
        let h7 = IndexedFormula::from_thick(3, h7).unwrap();
        assert_eq!(h7.to_unicode(), "Pf((3 xi xj − r^2 δij)/r^5) − 4π ni nj δ∗");
    }
}
