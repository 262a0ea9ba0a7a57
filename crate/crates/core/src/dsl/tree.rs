//! Lossless JSON serialization: nested `{kind, dim, children | payload}`
//! records.

use serde::{Deserialize, Serialize};
use serde_json::Value as Json;

use crate::oracle::TestFunction;
use crate::projection::{StandardDistribution, StandardTerm};
use crate::scalar::{Rational, ScalarCoeff};
use crate::sphere::{MultiIndex, SphericalSymbol};
use crate::thick::{Multiplier, ThickDistribution, ThickTerm};

use super::eval::Value;

/// One record of the tree schema.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Node {
    pub kind: String,
    pub dim: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub children: Option<Vec<Node>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub payload: Option<Json>,
}

#[derive(Serialize, Deserialize)]
struct CoeffTerm {
    c_power: i32,
    value: String,
}

#[derive(Serialize, Deserialize)]
struct PolyTerm {
    exponents: Vec<u32>,
    coeff: Vec<CoeffTerm>,
}

#[derive(Serialize, Deserialize)]
struct Hom {
    degree: i32,
    profile: Vec<PolyTerm>,
}

#[derive(Serialize, Deserialize)]
struct DeltaPayload {
    order: i32,
    density: Vec<PolyTerm>,
}

#[derive(Serialize, Deserialize)]
struct PointPayload {
    alpha: Vec<u32>,
    coeff: Vec<CoeffTerm>,
}

#[derive(Serialize, Deserialize)]
struct GaussPayload {
    exponents: Vec<u32>,
    m: i32,
    coeff: String,
}

#[derive(Serialize, Deserialize)]
struct ScalarPayload {
    coeff: Vec<CoeffTerm>,
}

#[derive(Serialize, Deserialize)]
struct RealPayload {
    value: f64,
}

/// Malformed tree input.
#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
#[error("invalid tree: {0}")]
pub struct TreeError(pub String);

fn coeff_out(c: &ScalarCoeff) -> Vec<CoeffTerm> {
    c.terms().map(|(p, v)| CoeffTerm { c_power: p, value: v.to_string() }).collect()
}

fn coeff_in(terms: Vec<CoeffTerm>) -> Result<ScalarCoeff, TreeError> {
    let mut out = ScalarCoeff::zero();
    for t in terms {
        let v: Rational = t.value.parse().map_err(|_| TreeError(format!("bad rational `{}`", t.value)))?;
        out += &ScalarCoeff::monomial(v, t.c_power);
    }
    Ok(out)
}

fn poly_out(p: &SphericalSymbol) -> Vec<PolyTerm> {
    p.terms()
        .map(|(a, c)| PolyTerm {
            exponents: a.exponents().to_vec(),
            coeff: coeff_out(c),
        })
        .collect()
}

fn poly_in(dim: usize, terms: Vec<PolyTerm>) -> Result<SphericalSymbol, TreeError> {
    let mut pairs = Vec::new();
    for t in terms {
        if t.exponents.len() != dim {
            return Err(TreeError(format!("exponent list of length {} in dimension {dim}", t.exponents.len())));
        }
        pairs.push((MultiIndex::new(t.exponents), coeff_in(t.coeff)?));
    }
    Ok(SphericalSymbol::from_terms(dim, pairs).normalize())
}

fn leaf<T: Serialize>(kind: &str, dim: usize, payload: T) -> Node {
    Node {
        kind: kind.into(),
        dim,
        children: None,
        payload: Some(serde_json::to_value(payload).expect("payload serializes")),
    }
}

fn branch(kind: &str, dim: usize, children: Vec<Node>) -> Node {
    Node {
        kind: kind.into(),
        dim,
        children: Some(children),
        payload: None,
    }
}

fn hom(kind: &str, dim: usize, degree: i32, p: &SphericalSymbol) -> Node {
    leaf(kind, dim, Hom { degree, profile: poly_out(p) })
}

/// Tree form of a value; `dim` is recorded for scalars and reals.
pub fn to_tree(value: &Value, dim: usize) -> Node {
    match value {
        Value::Scalar(c) => leaf("scalar", dim, ScalarPayload { coeff: coeff_out(c) }),
        Value::Real(x) => leaf("real", dim, RealPayload { value: *x }),
        Value::Multiplier(m) => branch("function", m.dim(), m.terms().map(|(k, p)| hom("hom", m.dim(), k, p)).collect()),
        Value::Thick(t) => thick_tree(t),
        Value::Standard(s) => standard_tree(s),
        Value::Test(phi) => {
            let d = phi.dim();
            let kids = phi
                .terms()
                .map(|(a, m, c)| {
                    leaf(
                        "gaussian",
                        d,
                        GaussPayload {
                            exponents: a.exponents().to_vec(),
                            m,
                            coeff: c.to_string(),
                        },
                    )
                })
                .collect();
            branch("test", d, kids)
        }
    }
}

fn thick_tree(t: &ThickDistribution) -> Node {
    let d = t.dim();
    let kids = t
        .terms()
        .into_iter()
        .map(|term| match term {
            ThickTerm::FinitePart { degree, profile } => hom("pf", d, degree, profile),
            ThickTerm::Delta { order, density } => leaf("thick_delta", d, DeltaPayload { order, density: poly_out(density) }),
        })
        .collect();
    branch("thick", d, kids)
}

fn standard_tree(s: &StandardDistribution) -> Node {
    let d = s.dim();
    let kids = s
        .terms()
        .into_iter()
        .map(|term| match term {
            StandardTerm::RegularHomogeneous { degree, profile } => hom("regular", d, degree, &profile),
            StandardTerm::PrincipalValue { degree, profile } => hom("pv", d, degree, &profile),
            StandardTerm::FinitePartTerm { degree, profile } => hom("finite_part", d, degree, &profile),
            StandardTerm::DeltaDerivative { alpha, coeff } => leaf(
                "point",
                d,
                PointPayload {
                    alpha: alpha.exponents().to_vec(),
                    coeff: coeff_out(&coeff),
                },
            ),
        })
        .collect();
    branch("standard", d, kids)
}

/// Compact single-line JSON.
pub fn render_tree(value: &Value, dim: usize) -> String {
    serde_json::to_string(&to_tree(value, dim)).expect("tree serializes")
}

fn payload<T: for<'de> Deserialize<'de>>(node: &Node) -> Result<T, TreeError> {
    let p = node.payload.clone().ok_or_else(|| TreeError(format!("`{}` node needs a payload", node.kind)))?;
    serde_json::from_value(p).map_err(|e| TreeError(format!("`{}` payload: {e}", node.kind)))
}

fn children(node: &Node) -> Result<&[Node], TreeError> {
    node.children.as_deref().ok_or_else(|| TreeError(format!("`{}` node needs children", node.kind)))
}

fn check_child(parent: &Node, child: &Node) -> Result<(), TreeError> {
    if child.dim != parent.dim {
        return Err(TreeError(format!("child dimension {} inside dimension {}", child.dim, parent.dim)));
    }
    Ok(())
}

/// Inverse of [`to_tree`].
pub fn from_tree(node: &Node) -> Result<Value, TreeError> {
    let dim = node.dim;
    if dim < 2 {
        return Err(TreeError(format!("dimension must be at least 2, got {dim}")));
    }
    match node.kind.as_str() {
        "scalar" => Ok(Value::Scalar(coeff_in(payload::<ScalarPayload>(node)?.coeff)?)),
        "real" => Ok(Value::Real(payload::<RealPayload>(node)?.value)),
        "function" => {
            let mut m = Multiplier::zero(dim);
            for c in children(node)? {
                check_child(node, c)?;
                let h: Hom = payload(c)?;
                m = m.checked_add(&Multiplier::homogeneous(h.degree, poly_in(dim, h.profile)?)).map_err(|e| TreeError(e.to_string()))?;
            }
            Ok(Value::Multiplier(m))
        }
        "thick" => {
            let mut t = ThickDistribution::zero(dim);
            for c in children(node)? {
                check_child(node, c)?;
                let part = match c.kind.as_str() {
                    "pf" => {
                        let h: Hom = payload(c)?;
                        ThickDistribution::pf(h.degree, poly_in(dim, h.profile)?)
                    }
                    "thick_delta" => {
                        let d: DeltaPayload = payload(c)?;
                        ThickDistribution::delta(d.order, poly_in(dim, d.density)?)
                    }
                    other => return Err(TreeError(format!("unexpected `{other}` inside a thick value"))),
                };
                t = t + part;
            }
            Ok(Value::Thick(t))
        }
        "standard" => {
            let mut s = StandardDistribution::zero(dim);
            for c in children(node)? {
                check_child(node, c)?;
                let part = match c.kind.as_str() {
                    "regular" | "pv" | "finite_part" => {
                        let h: Hom = payload(c)?;
                        StandardDistribution::homogeneous(h.degree, poly_in(dim, h.profile)?)
                    }
                    "point" => {
                        let p: PointPayload = payload(c)?;
                        if p.alpha.len() != dim {
                            return Err(TreeError("multi-index length differs from the dimension".into()));
                        }
                        StandardDistribution::delta_derivative(MultiIndex::new(p.alpha), coeff_in(p.coeff)?)
                    }
                    other => return Err(TreeError(format!("unexpected `{other}` inside a distribution"))),
                };
                s = s + part;
            }
            Ok(Value::Standard(s))
        }
        "test" => {
            let mut phi = TestFunction::zero(dim);
            for c in children(node)? {
                check_child(node, c)?;
                let g: GaussPayload = payload(c)?;
                if g.exponents.len() != dim {
                    return Err(TreeError("exponent list length differs from the dimension".into()));
                }
                let coeff: Rational = g.coeff.parse().map_err(|_| TreeError(format!("bad rational `{}`", g.coeff)))?;
                phi = phi
                    .checked_add(&TestFunction::generator(MultiIndex::new(g.exponents), g.m, coeff))
                    .map_err(|e| TreeError(e.to_string()))?;
            }
            Ok(Value::Test(phi))
        }
        other => Err(TreeError(format!("unknown kind `{other}`"))),
    }
}

/// Parses the JSON produced by [`render_tree`].
pub fn parse_tree(text: &str) -> Result<Value, TreeError> {
    let node: Node = serde_json::from_str(text).map_err(|e| TreeError(e.to_string()))?;
    from_tree(&node)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn thick_round_trip() {
        let t = ThickDistribution::pf(-3, SphericalSymbol::n(3, 1) * SphericalSymbol::n(3, 2))
            + ThickDistribution::delta(-2, SphericalSymbol::n(3, 1).scale(&(ScalarCoeff::ratio(-1, 3) * ScalarCoeff::c())));
        let v = Value::Thick(t);
        let text = render_tree(&v, 3);
        assert!(text.starts_with("{\"kind\":\"thick\",\"dim\":3,\"children\":["), "{text}");
        assert_eq!(parse_tree(&text).unwrap(), v);
    }

    #[test]
    fn standard_and_scalar_round_trip() {
        let s = StandardDistribution::homogeneous(-3, SphericalSymbol::n(3, 1))
            + StandardDistribution::delta_derivative(MultiIndex::new(vec![0, 2, 1]), ScalarCoeff::ratio(5, 7));
        for v in [Value::Standard(s), Value::Scalar(ScalarCoeff::c() + ScalarCoeff::one()), Value::Real(-0.25)] {
            assert_eq!(parse_tree(&render_tree(&v, 3)).unwrap(), v);
        }
    }

    #[test]
    fn rejects_unknown_kind() {
        assert!(parse_tree(r#"{"kind":"matrix","dim":3}"#).is_err());
        assert!(parse_tree(r#"{"kind":"thick","dim":3}"#).is_err());
    }
}
