//! `thickdist`: evaluate thick-distribution expressions, print the named
//! formulas, and run the numerical duality check.
//!
//! Exit codes: 0 success, 1 failed check, 2 parse error, 3 evaluation error,
//! 4 unknown command, name or bad usage.

use std::fs;
use std::io::{self, BufRead, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use thickdist::dsl::{self, render, Format, RunError, Value};
use thickdist::formulas::{self, bowen_derivative, bowen_naive, IndexedFormula};
use thickdist::oracle::run_check;
use thickdist::{MultiIndex, StandardDistribution, ThickDistribution};

const EXIT_CHECK_FAILED: u8 = 1;
const EXIT_PARSE: u8 = 2;
const EXIT_EVAL: u8 = 3;
const EXIT_USAGE: u8 = 4;

const NAMES: [&str; 7] = ["bowen", "bowen-naive", "frahm", "pd9", "h6", "h7", "h4"];

#[derive(Clone, Copy, Debug, ValueEnum)]
enum FormatArg {
    Plain,
    Latex,
    Tree,
}

impl From<FormatArg> for Format {
    fn from(f: FormatArg) -> Self {
        match f {
            FormatArg::Plain => Format::Plain,
            FormatArg::Latex => Format::Latex,
            FormatArg::Tree => Format::Tree,
        }
    }
}

#[derive(Debug, Parser)]
#[command(name = "thickdist", version, about = "Symbolic calculus of thick distributions")]
struct Cli {
    /// Space dimension n (at least 2).
    #[arg(long, global = true, default_value_t = 3)]
    dim: usize,
    /// Output encoding.
    #[arg(long, global = true, value_enum, default_value_t = FormatArg::Plain)]
    format: FormatArg,
    /// Duality residual tolerance for `check`.
    #[arg(long, global = true, default_value_t = 1e-8)]
    tolerance: f64,
    /// Seed for the randomized probes of `check`.
    #[arg(long, global = true, default_value_t = 7)]
    seed: u64,
    /// File with one expression per line (`-` for stdin); `#` starts a comment.
    #[arg(long, global = true)]
    batch: Option<PathBuf>,
    #[command(subcommand)]
    command: Option<Command>,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Evaluate an expression, or every line of `--batch`.
    Eval { expression: Option<String> },
    /// Print a named formula: bowen, bowen-naive, frahm, pd9, h6, h7, h4.
    Paper {
        name: String,
        /// Indices j1,...,jk for bowen and bowen-naive.
        #[arg(long, value_delimiter = ',', default_values_t = [1, 1, 2])]
        indices: Vec<usize>,
        /// Derivative axis i for bowen and bowen-naive.
        #[arg(long = "i", default_value_t = 2)]
        axis: usize,
    },
    /// Run the 200-probe duality check.
    Check,
}

/// Validated global options.
#[derive(Clone, Debug)]
struct RunConfig {
    dim: usize,
    format: Format,
    tolerance: f64,
    seed: u64,
    batch: Option<PathBuf>,
}

struct Failure {
    code: u8,
    message: String,
}

impl Failure {
    fn new(code: u8, message: impl Into<String>) -> Self {
        Self { code, message: message.into() }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            if !f.message.is_empty() {
                eprintln!("{}", f.message);
            }
            ExitCode::from(f.code)
        }
    }
}

fn run(cli: Cli) -> Result<(), Failure> {
    if cli.dim < 2 {
        return Err(Failure::new(EXIT_USAGE, format!("error: --dim must be at least 2, got {}", cli.dim)));
    }
    if cli.tolerance.is_nan() || cli.tolerance <= 0.0 {
        return Err(Failure::new(EXIT_USAGE, format!("error: --tolerance must be positive, got {}", cli.tolerance)));
    }
    let config = RunConfig {
        dim: cli.dim,
        format: cli.format.into(),
        tolerance: cli.tolerance,
        seed: cli.seed,
        batch: cli.batch,
    };
    match cli.command {
        Some(Command::Eval { expression }) => cmd_eval(&config, expression.as_deref()),
        None if config.batch.is_some() => cmd_eval(&config, None),
        None => Err(Failure::new(EXIT_USAGE, "error: missing command (eval, paper or check); see --help")),
        Some(Command::Paper { name, indices, axis }) => cmd_paper(&config, &name, &indices, axis),
        Some(Command::Check) => cmd_check(&config),
    }
}

fn describe(err: &RunError, text: &str) -> Failure {
    match err {
        RunError::Parse(e) => Failure::new(EXIT_PARSE, e.render()),
        RunError::Eval(e) => {
            let col = text[..e.span.start.min(text.len())].chars().count();
            Failure::new(EXIT_EVAL, format!("error: {}\n  {}\n  {}^", e.message, text, " ".repeat(col)))
        }
    }
}

fn cmd_eval(config: &RunConfig, expression: Option<&str>) -> Result<(), Failure> {
    match (expression, &config.batch) {
        (Some(text), None) => {
            let out = dsl::run(text, config.dim, config.format).map_err(|e| describe(&e, text))?;
            println!("{out}");
            Ok(())
        }
        (None, Some(path)) => run_batch(config, path),
        (Some(_), Some(_)) => Err(Failure::new(EXIT_USAGE, "error: give either an expression or --batch, not both")),
        (None, None) => Err(Failure::new(EXIT_USAGE, "error: eval needs an expression or --batch FILE")),
    }
}

/// Streams results line by line; keeps going after a failing line and
/// exits with the code of the first failure.
fn run_batch(config: &RunConfig, path: &PathBuf) -> Result<(), Failure> {
    let reader: Box<dyn BufRead> = if path.as_os_str() == "-" {
        Box::new(io::stdin().lock())
    } else {
        let file = fs::File::open(path).map_err(|e| Failure::new(EXIT_USAGE, format!("error: cannot read {}: {e}", path.display())))?;
        Box::new(io::BufReader::new(file))
    };
    let stdout = io::stdout();
    let mut first_failure = None;
    for (idx, line) in reader.lines().enumerate() {
        let line = line.map_err(|e| Failure::new(EXIT_USAGE, format!("error: reading {}: {e}", path.display())))?;
        let text = line.trim();
        if text.is_empty() || text.starts_with('#') {
            continue;
        }
        match dsl::run(text, config.dim, config.format) {
            Ok(out) => {
                let mut lock = stdout.lock();
                let _ = writeln!(lock, "{out}");
                let _ = lock.flush();
            }
            Err(e) => {
                let f = describe(&e, text);
                eprintln!("line {}: {}", idx + 1, f.message);
                first_failure.get_or_insert(f.code);
            }
        }
    }
    match first_failure {
        Some(code) => Err(Failure::new(code, "")),
        None => Ok(()),
    }
}

fn require_space(config: &RunConfig, name: &str) -> Result<(), Failure> {
    if config.dim == 3 {
        Ok(())
    } else {
        Err(Failure::new(EXIT_EVAL, format!("error: `{name}` is stated in R^3; got --dim {}", config.dim)))
    }
}

fn check_axes(axes: &[usize]) -> Result<(), Failure> {
    match axes.iter().find(|a| !(1..=3).contains(*a)) {
        Some(a) => Err(Failure::new(EXIT_EVAL, format!("error: axis {a} out of range 1..=3"))),
        None => Ok(()),
    }
}

fn pi_form(c: &thickdist::ScalarCoeff, format: Format) -> String {
    let pi = c.to_pi_form(3);
    if format == Format::Latex { pi.to_latex() } else { pi.to_string() }
}

fn print_indexed(config: &RunConfig, fit: Option<IndexedFormula>, components: Vec<Value>) {
    match (config.format, fit) {
        (Format::Plain, Some(f)) => println!("{}", f.to_unicode()),
        (Format::Latex, Some(f)) => println!("{}", f.to_latex()),
        (format, _) => {
            for v in components {
                println!("{}", render(&v, format, config.dim));
            }
        }
    }
}

fn thick_family(config: &RunConfig, family: impl Fn(usize, usize) -> ThickDistribution) {
    let d = config.dim;
    let comps = (1..=d).flat_map(|i| (1..=d).map(move |j| (i, j))).map(|(i, j)| Value::Thick(family(i, j))).collect();
    print_indexed(config, IndexedFormula::from_thick(d, &family), comps);
}

fn standard_family(config: &RunConfig, family: impl Fn(usize, usize) -> StandardDistribution) {
    let d = config.dim;
    let comps = (1..=d).flat_map(|i| (1..=d).map(move |j| (i, j))).map(|(i, j)| Value::Standard(family(i, j))).collect();
    print_indexed(config, IndexedFormula::from_standard(d, &family), comps);
}

fn cmd_paper(config: &RunConfig, name: &str, indices: &[usize], axis: usize) -> Result<(), Failure> {
    if !NAMES.contains(&name) {
        return Err(Failure::new(EXIT_USAGE, format!("error: unknown formula `{name}` (expected one of: {})", NAMES.join(", "))));
    }
    if name == "h4" {
        thick_family(config, |i, j| formulas::h4(config.dim, i, j));
        return Ok(());
    }
    require_space(config, name)?;
    match name {
        "frahm" => standard_family(config, formulas::frahm),
        "pd9" => thick_family(config, formulas::pd9),
        "h6" => thick_family(config, formulas::h6),
        "h7" => thick_family(config, formulas::h7),
        "bowen" | "bowen-naive" => paper_bowen(config, name, indices, axis)?,
        _ => unreachable!("name checked above"),
    }
    Ok(())
}

fn paper_bowen(config: &RunConfig, name: &str, indices: &[usize], axis: usize) -> Result<(), Failure> {
    check_axes(indices)?;
    check_axes(&[axis])?;
    if indices.is_empty() {
        return Err(Failure::new(EXIT_EVAL, "error: --indices needs at least one axis"));
    }
    let right = bowen_derivative(indices, axis);
    let value = if name == "bowen" {
        right.clone()
    } else {
        let [j1, j2, j3] = indices else {
            return Err(Failure::new(EXIT_EVAL, format!("error: bowen-naive takes exactly three indices, got {}", indices.len())));
        };
        bowen_naive(*j1, *j2, *j3, axis)
    };
    println!("{}", render(&Value::Standard(value.clone()), config.format, 3));
    if config.format == Format::Tree {
        return Ok(());
    }
    let exponents = indices.iter().fold(MultiIndex::unit(3, axis), |acc, &j| acc.bumped(j, 1));
    let found = value.delta_coefficient();
    let exact = right.delta_coefficient();
    debug_assert_eq!(exact, formulas::bowen_coefficient(&exponents));
    if name == "bowen" {
        println!("delta coefficient {} for exponent pattern {exponents}", pi_form(&found, config.format));
    } else {
        let verdict = if found == exact { "agrees" } else { "WRONG" };
        println!(
            "delta coefficient {} (bowen-naive) vs {} (bowen): {verdict}",
            pi_form(&found, config.format),
            pi_form(&exact, config.format)
        );
    }
    Ok(())
}

fn cmd_check(config: &RunConfig) -> Result<(), Failure> {
    let report = run_check(config.seed, config.tolerance);
    println!("{report}");
    if report.all_pass() {
        Ok(())
    } else {
        Err(Failure::new(EXIT_CHECK_FAILED, ""))
    }
}
