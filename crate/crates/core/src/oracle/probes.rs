use std::fmt;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{duality_residual, TestFunction};
use crate::scalar::{Rational, ScalarCoeff};
use crate::sphere::{MultiIndex, SphericalSymbol};
use crate::thick::{thick_partial, ThickDistribution};

pub const PROBE_COUNT: usize = 200;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum ProbeClass {
    FinitePart,
    ThickDelta,
    Mixed,
    Derivative,
}

impl ProbeClass {
    pub const ALL: [ProbeClass; 4] = [Self::FinitePart, Self::ThickDelta, Self::Mixed, Self::Derivative];

    pub fn name(self) -> &'static str {
        match self {
            Self::FinitePart => "finite-part",
            Self::ThickDelta => "thick-delta",
            Self::Mixed => "mixed",
            Self::Derivative => "derivative",
        }
    }
}

/// One randomized duality check.
#[derive(Clone, Debug)]
pub struct Probe {
    pub class: ProbeClass,
    pub axis: usize,
    pub value: ThickDistribution,
    pub phi: TestFunction,
}

impl Probe {
    pub fn residual(&self) -> f64 {
        duality_residual(&self.value, self.axis, &self.phi).expect("probe is well-dimensioned")
    }
}

fn random_index<R: Rng>(rng: &mut R, dim: usize, max_order: u32) -> MultiIndex {
    let order = rng.random_range(0..=max_order);
    let mut exps = vec![0u32; dim];
    for _ in 0..order {
        exps[rng.random_range(0..dim)] += 1;
    }
    MultiIndex::new(exps)
}

fn nonzero_int<R: Rng>(rng: &mut R, bound: i64) -> i64 {
    let v = rng.random_range(1..=bound);
    if rng.random_bool(0.5) { -v } else { v }
}

/// Random polynomial in `n` of degree at most `max_degree`, with small
/// rational coefficients, optionally carrying a factor `C^{±1}`.
pub fn random_symbol<R: Rng>(rng: &mut R, dim: usize, max_degree: u32, with_c: bool) -> SphericalSymbol {
    let count = rng.random_range(1..=3);
    let terms = (0..count).map(|_| {
        let a = random_index(rng, dim, max_degree);
        let mut c = ScalarCoeff::ratio(nonzero_int(rng, 4), rng.random_range(1..=3));
        if with_c {
            c = c.shift(rng.random_range(-1..=1));
        }
        (a, c)
    });
    let out = SphericalSymbol::from_terms(dim, terms.collect::<Vec<_>>()).normalize();
    if out.is_zero() { SphericalSymbol::n(dim, 1) } else { out }
}

/// Random thick distribution with finite-part degrees in `[-5, 2]` and
/// thick-delta densities of degree at most 3.
pub fn random_thick<R: Rng>(rng: &mut R, dim: usize, pf_terms: usize, delta_terms: usize) -> ThickDistribution {
    let mut out = ThickDistribution::zero(dim);
    for _ in 0..pf_terms {
        let k = rng.random_range(-5..=2);
        out = out + ThickDistribution::pf(k, random_symbol(rng, dim, 3, false));
    }
    for _ in 0..delta_terms {
        let q = rng.random_range(-4..=2);
        out = out + ThickDistribution::delta(q, random_symbol(rng, dim, 3, true));
    }
    out
}

/// Random Gaussian test function with `|a| ≤ 3` and `m ∈ [-2, 3]`.
pub fn random_test_function<R: Rng>(rng: &mut R, dim: usize) -> TestFunction {
    let count = rng.random_range(1..=3);
    let mut out = TestFunction::zero(dim);
    for _ in 0..count {
        let a = random_index(rng, dim, 3);
        let m = rng.random_range(-2..=3);
        let c = Rational::new(nonzero_int(rng, 3).into(), rng.random_range(1..=2i64).into());
        out = out.checked_add(&TestFunction::generator(a, m, c)).expect("same dimension");
    }
    out
}

/// The deterministic probe set for a seed: 50 probes per class, dims 2 to 4,
/// axes cycling through every coordinate.
pub fn probes(seed: u64) -> Vec<Probe> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let per_class = PROBE_COUNT / ProbeClass::ALL.len();
    let mut out = Vec::with_capacity(PROBE_COUNT);
    for class in ProbeClass::ALL {
        for idx in 0..per_class {
            let dim = 2 + idx % 3;
            let axis = 1 + (idx / 3) % dim;
            let count = rng.random_range(1..=2);
            let value = match class {
                ProbeClass::FinitePart => random_thick(&mut rng, dim, count, 0),
                ProbeClass::ThickDelta => random_thick(&mut rng, dim, 0, count),
                ProbeClass::Mixed => random_thick(&mut rng, dim, 1, 1),
                ProbeClass::Derivative => {
                    let base = random_thick(&mut rng, dim, 1, 1);
                    thick_partial(rng.random_range(1..=dim), &base)
                }
            };
            let phi = random_test_function(&mut rng, dim);
            out.push(Probe { class, axis, value, phi });
        }
    }
    out
}

#[derive(Clone, Debug, PartialEq)]
pub struct ClassReport {
    pub class: ProbeClass,
    pub passed: usize,
    pub total: usize,
    pub max_residual: f64,
}

/// Outcome of the duality probe suite.
#[derive(Clone, Debug, PartialEq)]
pub struct CheckReport {
    pub seed: u64,
    pub tolerance: f64,
    pub classes: Vec<ClassReport>,
}

impl CheckReport {
    pub fn passed(&self) -> usize {
        self.classes.iter().map(|c| c.passed).sum()
    }

    pub fn total(&self) -> usize {
        self.classes.iter().map(|c| c.total).sum()
    }

    pub fn max_residual(&self) -> f64 {
        self.classes.iter().map(|c| c.max_residual).fold(0.0, f64::max)
    }

    pub fn all_pass(&self) -> bool {
        self.passed() == self.total()
    }
}

impl fmt::Display for CheckReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "seed {}, tolerance {:e}", self.seed, self.tolerance)?;
        for c in &self.classes {
            let status = if c.passed == c.total { "PASS" } else { "FAIL" };
            writeln!(
                f,
                "  {:<12} {}/{} pass, max residual {:.1e}  {}",
                c.class.name(),
                c.passed,
                c.total,
                c.max_residual,
                status
            )?;
        }
        write!(f, "{}/{} probes pass, max residual {:.1e}", self.passed(), self.total(), self.max_residual())
    }
}

/// Runs the 200-probe duality suite. Probes are evaluated on worker threads
/// and collected in probe order, so the report depends only on the seed.
pub fn run_check(seed: u64, tolerance: f64) -> CheckReport {
    let all = probes(seed);
    let workers = std::thread::available_parallelism().map_or(1, |n| n.get()).min(8);
    let chunk = all.len().div_ceil(workers);
    let residuals: Vec<f64> = std::thread::scope(|scope| {
        let handles: Vec<_> = all
            .chunks(chunk)
            .map(|part| scope.spawn(move || part.iter().map(Probe::residual).collect::<Vec<_>>()))
            .collect();
        handles.into_iter().flat_map(|h| h.join().expect("probe worker panicked")).collect()
    });
    let classes = ProbeClass::ALL
        .iter()
        .map(|&class| {
            let rs: Vec<f64> = all.iter().zip(&residuals).filter(|(p, _)| p.class == class).map(|(_, r)| *r).collect();
            ClassReport {
                class,
                passed: rs.iter().filter(|r| **r <= tolerance).count(),
                total: rs.len(),
                max_residual: rs.iter().copied().fold(0.0, f64::max),
            }
        })
        .collect();
    CheckReport { seed, tolerance, classes }
}
