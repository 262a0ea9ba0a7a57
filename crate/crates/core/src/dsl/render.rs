//! Plain-text and LaTeX renderers.
//!
//! Plain output is accepted back by the parser: `parse(render(T))` gives the
//! same canonical value for every thick distribution.

use num_traits::{One, Signed};

use crate::oracle::TestFunction;
use crate::projection::{StandardDistribution, StandardTerm};
use crate::scalar::{Rational, ScalarCoeff};
use crate::sphere::{MultiIndex, SphericalSymbol};
use crate::thick::{Multiplier, ThickDistribution, ThickTerm};

/// A signed summand: `(negative, body)`; the body never starts with `-`.
type Summand = (bool, String);

fn join(terms: &[Summand]) -> String {
    if terms.is_empty() {
        return "0".into();
    }
    let mut out = String::new();
    for (idx, (neg, body)) in terms.iter().enumerate() {
        match (idx, neg) {
            (0, true) => out.push('-'),
            (0, false) => {}
            (_, true) => out.push_str(" - "),
            (_, false) => out.push_str(" + "),
        }
        out.push_str(body);
    }
    out
}

fn sorted_terms(poly: &SphericalSymbol) -> Vec<(&MultiIndex, &ScalarCoeff)> {
    let mut terms: Vec<_> = poly.terms().collect();
    terms.sort_by(|a, b| b.0.order().cmp(&a.0.order()).then_with(|| b.0.cmp(a.0)));
    terms
}

trait Style {
    fn monomial(index: &MultiIndex) -> String;
    fn rational(value: &Rational, grouped: bool) -> String;
    fn c_power(power: i32) -> String;
    fn group(inner: &str) -> String;
    const TIMES: &'static str;
}

struct PlainStyle;
struct LatexStyle;

impl Style for PlainStyle {
    fn monomial(index: &MultiIndex) -> String {
        let parts: Vec<String> = index
            .exponents()
            .iter()
            .enumerate()
            .filter(|(_, e)| **e > 0)
            .map(|(i, e)| if *e == 1 { format!("n{}", i + 1) } else { format!("n{}^{}", i + 1, e) })
            .collect();
        parts.join("*")
    }

    fn rational(value: &Rational, grouped: bool) -> String {
        if value.is_integer() {
            value.numer().to_string()
        } else if grouped {
            format!("({}/{})", value.numer(), value.denom())
        } else {
            format!("{}/{}", value.numer(), value.denom())
        }
    }

    fn c_power(power: i32) -> String {
        if power == 1 { "C".into() } else { format!("C^{power}") }
    }

    fn group(inner: &str) -> String {
        format!("({inner})")
    }

    const TIMES: &'static str = "*";
}

impl Style for LatexStyle {
    fn monomial(index: &MultiIndex) -> String {
        let parts: Vec<String> = index
            .exponents()
            .iter()
            .enumerate()
            .filter(|(_, e)| **e > 0)
            .map(|(i, e)| if *e == 1 { format!("n_{{{}}}", i + 1) } else { format!("n_{{{}}}^{{{}}}", i + 1, e) })
            .collect();
        parts.join(" ")
    }

    fn rational(value: &Rational, _grouped: bool) -> String {
        if value.is_integer() {
            value.numer().to_string()
        } else {
            format!("\\frac{{{}}}{{{}}}", value.numer(), value.denom())
        }
    }

    fn c_power(power: i32) -> String {
        if power == 1 { "C".into() } else { format!("C^{{{power}}}") }
    }

    fn group(inner: &str) -> String {
        format!("\\left({inner}\\right)")
    }

    const TIMES: &'static str = " ";
}

/// Signed summands of a scalar coefficient.
fn coeff_terms<S: Style>(c: &ScalarCoeff) -> Vec<Summand> {
    c.terms()
        .collect::<Vec<_>>()
        .into_iter()
        .rev()
        .map(|(p, v)| {
            let body = product::<S>(&v.abs(), p, "");
            (v.is_negative(), body)
        })
        .collect()
}

/// `value * C^power * tail` as a product of factors, `value > 0`.
fn product<S: Style>(value: &Rational, power: i32, tail: &str) -> String {
    let mut parts = Vec::new();
    let more = power != 0 || !tail.is_empty();
    if !value.is_one() || !more {
        parts.push(S::rational(value, more));
    }
    if power != 0 {
        parts.push(S::c_power(power));
    }
    if !tail.is_empty() {
        parts.push(tail.to_string());
    }
    parts.join(S::TIMES)
}

/// Coefficient times a trailing factor string, as one signed summand.
fn scaled<S: Style>(c: &ScalarCoeff, tail: &str) -> Summand {
    match c.as_monomial() {
        Some((v, p)) => (v.is_negative(), product::<S>(&v.abs(), p, tail)),
        None => {
            let grouped = S::group(&join(&coeff_terms::<S>(c)));
            if tail.is_empty() {
                (false, grouped)
            } else {
                (false, format!("{grouped}{}{tail}", S::TIMES))
            }
        }
    }
}

fn poly_terms<S: Style>(poly: &SphericalSymbol) -> Vec<Summand> {
    sorted_terms(poly)
        .into_iter()
        .map(|(idx, c)| scaled::<S>(c, &S::monomial(idx)))
        .collect()
}

fn poly<S: Style>(p: &SphericalSymbol) -> String {
    join(&poly_terms::<S>(p))
}

fn is_compound(terms: &[Summand]) -> bool {
    terms.len() > 1 || terms.first().is_some_and(|(_, b)| b.contains('/') && !b.starts_with('('))
}

/// The homogeneous function `r^degree profile` as one signed summand.
fn hom_plain(degree: i32, profile: &SphericalSymbol) -> Summand {
    let terms = poly_terms::<PlainStyle>(profile);
    if degree == 0 {
        return if terms.len() == 1 { terms[0].clone() } else { (false, join(&terms)) };
    }
    let (neg, base) = if is_compound(&terms) {
        (false, format!("({})", join(&terms)))
    } else {
        terms.into_iter().next().unwrap_or((false, "0".into()))
    };
    let r = match degree.abs() {
        1 => "r".to_string(),
        k => format!("r^{k}"),
    };
    if degree < 0 {
        (neg, format!("{base}/{r}"))
    } else if base == "1" {
        (neg, r)
    } else {
        (neg, format!("{base}*{r}"))
    }
}

fn hom_latex(degree: i32, profile: &SphericalSymbol) -> Summand {
    let terms = poly_terms::<LatexStyle>(profile);
    let single = terms.len() == 1;
    let (neg, base) = if single { terms[0].clone() } else { (false, join(&terms)) };
    let r = match degree.abs() {
        1 => "r".to_string(),
        k => format!("r^{{{k}}}"),
    };
    match degree {
        0 => (neg, base),
        d if d < 0 => (neg, format!("\\frac{{{base}}}{{{r}}}")),
        _ if base == "1" => (neg, r),
        _ if single => (neg, format!("{base}\\, {r}")),
        _ => (false, format!("\\left({base}\\right) {r}")),
    }
}

/// Moves a leading sign out of a signed summand's parenthesized wrapper.
fn wrap(term: Summand, open: &str, close: &str) -> Summand {
    (term.0, format!("{open}{}{close}", term.1))
}

pub fn render_poly_plain(p: &SphericalSymbol) -> String {
    poly::<PlainStyle>(p)
}

pub fn render_poly_latex(p: &SphericalSymbol) -> String {
    poly::<LatexStyle>(p)
}

pub fn render_scalar_plain(c: &ScalarCoeff) -> String {
    join(&coeff_terms::<PlainStyle>(c))
}

pub fn render_scalar_latex(c: &ScalarCoeff) -> String {
    join(&coeff_terms::<LatexStyle>(c))
}

/// Sum of homogeneous terms; degree-0 polynomials are spliced in term by term.
pub fn render_multiplier_plain(m: &Multiplier) -> String {
    let mut terms = Vec::new();
    for (k, p) in m.terms().collect::<Vec<_>>().into_iter().rev() {
        if k == 0 {
            terms.extend(poly_terms::<PlainStyle>(p));
        } else {
            terms.push(hom_plain(k, p));
        }
    }
    join(&terms)
}

pub fn render_multiplier_latex(m: &Multiplier) -> String {
    let terms: Vec<_> = m.terms().collect::<Vec<_>>().into_iter().rev().map(|(k, p)| hom_latex(k, p)).collect();
    join(&terms)
}

fn thick_terms<S: Style>(t: &ThickDistribution, hom: fn(i32, &SphericalSymbol) -> Summand, pf: (&str, &str), delta: fn(i32) -> String) -> Vec<Summand> {
    t.terms()
        .into_iter()
        .map(|term| match term {
            ThickTerm::FinitePart { degree, profile } => {
                let h = hom(degree, profile);
                if profile.len() == 1 { wrap(h, pf.0, pf.1) } else { (false, format!("{}{}{}", pf.0, h.1, pf.1)) }
            }
            ThickTerm::Delta { order, density } => density_times::<S>(density, &delta(order)),
        })
        .collect()
}

fn density_times<S: Style>(density: &SphericalSymbol, tail: &str) -> Summand {
    let terms = sorted_terms(density);
    if terms.len() == 1 {
        let (idx, c) = terms[0];
        let mono = S::monomial(idx);
        let tail = if mono.is_empty() { tail.to_string() } else { format!("{mono}{}{tail}", S::TIMES) };
        scaled::<S>(c, &tail)
    } else {
        (false, format!("{}{}{tail}", S::group(&poly::<S>(density)), S::TIMES))
    }
}

fn plain_delta_star(order: i32) -> String {
    if order == 0 { "delta*".into() } else { format!("delta*[{order}]") }
}

fn latex_delta_star(order: i32) -> String {
    if order == 0 { "\\delta_{\\ast}".into() } else { format!("\\delta_{{\\ast}}^{{[{order}]}}") }
}

/// Plain rendering, e.g. `Pf((3*n1^2 - 1)/r^3) + C*n1*delta*[-2]`.
pub fn render_thick_plain(t: &ThickDistribution) -> String {
    join(&thick_terms::<PlainStyle>(t, hom_plain, ("Pf(", ")"), plain_delta_star))
}

pub fn render_thick_latex(t: &ThickDistribution) -> String {
    join(&thick_terms::<LatexStyle>(t, hom_latex, ("\\mathcal{P}f\\left(", "\\right)"), latex_delta_star))
}

fn point_plain(alpha: &MultiIndex) -> String {
    if alpha.order() == 0 {
        "delta".into()
    } else {
        let parts: Vec<String> = alpha.exponents().iter().map(|e| e.to_string()).collect();
        format!("D[{}]delta", parts.join(","))
    }
}

fn point_latex(alpha: &MultiIndex) -> String {
    if alpha.order() == 0 {
        "\\delta(\\mathbf{x})".into()
    } else {
        format!("D^{{{alpha}}}\\delta(\\mathbf{{x}})")
    }
}

fn standard_terms(s: &StandardDistribution, latex: bool) -> Vec<Summand> {
    let hom = if latex { hom_latex } else { hom_plain };
    let (pv, fp) = if latex {
        (("\\mathrm{p.v.}\\left(", "\\right)"), ("\\mathcal{P}f\\left(", "\\right)"))
    } else {
        (("pv(", ")"), ("Pf(", ")"))
    };
    s.terms()
        .into_iter()
        .map(|term| match term {
            StandardTerm::RegularHomogeneous { degree, profile } => {
                let h = hom(degree, &profile);
                if latex || (profile.len() == 1 && degree != 0) { h } else { (false, format!("({})", h.1)) }
            }
            StandardTerm::PrincipalValue { degree, profile } => wrap_hom(hom(degree, &profile), profile.len(), pv),
            StandardTerm::FinitePartTerm { degree, profile } => wrap_hom(hom(degree, &profile), profile.len(), fp),
            StandardTerm::DeltaDerivative { alpha, coeff } => {
                if latex {
                    scaled::<LatexStyle>(&coeff, &point_latex(&alpha))
                } else {
                    scaled::<PlainStyle>(&coeff, &point_plain(&alpha))
                }
            }
        })
        .collect()
}

fn wrap_hom(h: Summand, len: usize, (open, close): (&str, &str)) -> Summand {
    if len == 1 { wrap(h, open, close) } else { (false, format!("{open}{}{close}", h.1)) }
}

/// Plain rendering, e.g. `pv((3*n1^2 - 1)/r^3) - (1/3)*C*delta`.
pub fn render_standard_plain(s: &StandardDistribution) -> String {
    join(&standard_terms(s, false))
}

pub fn render_standard_latex(s: &StandardDistribution) -> String {
    join(&standard_terms(s, true))
}

fn test_terms<S: Style>(phi: &TestFunction, gauss: &str, r_pow: fn(i32) -> String) -> Vec<Summand> {
    phi.terms()
        .map(|(a, m, c)| {
            let mut tail = vec![S::monomial(a)];
            if m != 0 {
                tail.push(r_pow(m));
            }
            tail.push(gauss.to_string());
            let tail: Vec<String> = tail.into_iter().filter(|s| !s.is_empty()).collect();
            (c.is_negative(), product::<S>(&c.abs(), 0, &tail.join(S::TIMES)))
        })
        .collect()
}

/// Plain rendering of a Gaussian test function, e.g. `n1*r^-2*gauss`.
pub fn render_test_plain(phi: &TestFunction) -> String {
    join(&test_terms::<PlainStyle>(phi, "gauss", |m| if m == 1 { "r".into() } else { format!("r^{m}") }))
}

pub fn render_test_latex(phi: &TestFunction) -> String {
    join(&test_terms::<LatexStyle>(phi, "e^{-r^{2}}", |m| if m == 1 { "r".into() } else { format!("r^{{{m}}}") }))
}
