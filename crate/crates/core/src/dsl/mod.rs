//! Expression language for thick-distribution computations.
//!
//! [`parse`] builds a checked syntax tree, [`evaluate`] dispatches into the
//! calculus, and [`render`] prints the result as plain text, LaTeX or JSON.

mod eval;
mod parser;
mod render;
mod tree;

use std::fmt;
use std::str::FromStr;

pub use eval::{evaluate, EvalError, Value};
pub use parser::{parse, Expr, ExprKind, Expression, ParseError, Span};
pub use render::{
    render_multiplier_latex, render_multiplier_plain, render_poly_latex, render_poly_plain, render_scalar_latex, render_scalar_plain,
    render_standard_latex, render_standard_plain, render_test_latex, render_test_plain, render_thick_latex, render_thick_plain,
};
pub use tree::{from_tree, parse_tree, render_tree, to_tree, Node, TreeError};

/// Output encoding.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash)]
pub enum Format {
    #[default]
    Plain,
    Latex,
    Tree,
}

impl FromStr for Format {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "plain" => Ok(Format::Plain),
            "latex" => Ok(Format::Latex),
            "tree" => Ok(Format::Tree),
            other => Err(format!("unknown format `{other}` (expected plain, latex or tree)")),
        }
    }
}

impl fmt::Display for Format {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Format::Plain => "plain",
            Format::Latex => "latex",
            Format::Tree => "tree",
        })
    }
}

/// Renders a value; `dim` is only needed for the tree form of scalars and
/// reals.
pub fn render(value: &Value, format: Format, dim: usize) -> String {
    match format {
        Format::Tree => render_tree(value, dim),
        Format::Plain => match value {
            Value::Scalar(c) => render_scalar_plain(c),
            Value::Multiplier(m) => render_multiplier_plain(m),
            Value::Thick(t) => render_thick_plain(t),
            Value::Standard(s) => render_standard_plain(s),
            Value::Test(phi) => render_test_plain(phi),
            Value::Real(x) => format!("{x}"),
        },
        Format::Latex => match value {
            Value::Scalar(c) => render_scalar_latex(c),
            Value::Multiplier(m) => render_multiplier_latex(m),
            Value::Thick(t) => render_thick_latex(t),
            Value::Standard(s) => render_standard_latex(s),
            Value::Test(phi) => render_test_latex(phi),
            Value::Real(x) => format!("{x}"),
        },
    }
}

/// Failure of [`run`]: either stage, kept apart for exit codes.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum RunError {
    Parse(ParseError),
    Eval(EvalError),
}

impl fmt::Display for RunError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RunError::Parse(e) => write!(f, "{e}"),
            RunError::Eval(e) => write!(f, "{e}"),
        }
    }
}

impl std::error::Error for RunError {}

/// `render(evaluate(parse(text, dim)), format)`.
pub fn run(text: &str, dim: usize, format: Format) -> Result<String, RunError> {
    let expr = parse(text, dim).map_err(RunError::Parse)?;
    let value = evaluate(&expr).map_err(RunError::Eval)?;
    Ok(render(&value, format, dim))
}
