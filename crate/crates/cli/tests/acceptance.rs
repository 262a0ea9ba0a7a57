//! Acceptance suite. Runs every criterion, prints one PASS/FAIL line each
//! with its wall time, and exits nonzero if any criterion fails or runs
//! over its time budget.

use std::process::{Command, ExitCode};
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use statrs::function::gamma::gamma;

use thickdist::dsl::{evaluate, parse, render_thick_plain, render_tree, parse_tree, Value};
use thickdist::formulas::{bowen_derivative, bowen_naive, frahm, h5, h6, h7, laplacian_inverse_r, pd9};
use thickdist::oracle::{numeric_sphere_moment, radial_finite_part, random_symbol, random_thick, run_check};
use thickdist::{
    classify, project, second_partial_closed_form, standard_partial_homogeneous, thick_partial, FunctionKind, MultiIndex, Multiplier,
    ScalarCoeff, SphericalSymbol, StandardDistribution, ThickDistribution,
};

type Outcome = Result<String, String>;

struct Criterion {
    id: u32,
    name: &'static str,
    budget: Duration,
    run: fn() -> Outcome,
}

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond { Ok(()) } else { Err(msg()) }
}

fn c() -> ScalarCoeff {
    ScalarCoeff::c()
}

fn n(dim: usize, axis: usize) -> SphericalSymbol {
    SphericalSymbol::n(dim, axis)
}

fn kron(i: usize, j: usize) -> i64 {
    i64::from(i == j)
}

fn pairs(dim: usize) -> impl Iterator<Item = (usize, usize)> {
    (1..=dim).flat_map(move |i| (1..=dim).map(move |j| (i, j)))
}

/// `∫_S n^a dσ` in `R^3` for the patterns quoted with the formula.
fn quoted_bowen(pattern: &[u32]) -> ScalarCoeff {
    let mut sorted = pattern.to_vec();
    sorted.sort_unstable_by(|a, b| b.cmp(a));
    match sorted.as_slice() {
        [4, 0, 0] => c() * ScalarCoeff::ratio(1, 5),
        [2, 2, 0] => c() * ScalarCoeff::ratio(1, 15),
        p if p.iter().any(|e| e % 2 == 1) => ScalarCoeff::zero(),
        p => panic!("pattern {p:?} not quoted"),
    }
}

fn bowen_coefficients() -> Outcome {
    let mut checked = 0;
    for i in 1..=3 {
        for j1 in 1..=3 {
            for j2 in 1..=3 {
                for j3 in 1..=3 {
                    let got = bowen_derivative(&[j1, j2, j3], i).delta_coefficient();
                    let mut pattern = [0u32; 3];
                    for a in [i, j1, j2, j3] {
                        pattern[a - 1] += 1;
                    }
                    let want = quoted_bowen(&pattern);
                    ensure(got == want, || format!("i={i} j=({j1},{j2},{j3}): got {got}, want {want}"))?;
                    checked += 1;
                }
            }
        }
    }
    let shown = bowen_derivative(&[1, 1, 2], 2).delta_coefficient().to_pi_form(3).to_string();
    ensure(shown == "4π/15", || format!("(2,2,0) prints as {shown}"))?;
    let shown = bowen_derivative(&[1, 1, 1], 1).delta_coefficient().to_pi_form(3).to_string();
    ensure(shown == "4π/5", || format!("(4,0,0) prints as {shown}"))?;
    Ok(format!("{checked} index choices"))
}

fn wrong_route() -> Outcome {
    let naive = bowen_naive(1, 1, 2, 2);
    let right = bowen_derivative(&[1, 1, 2], 2);
    let (a, b) = (naive.delta_coefficient(), right.delta_coefficient());
    ensure(a == c() * ScalarCoeff::ratio(1, 27), || format!("naive coefficient {a}"))?;
    ensure(b == c() * ScalarCoeff::ratio(1, 15), || format!("correct coefficient {b}"))?;
    ensure(naive.function_part() == right.function_part(), || "function parts differ".into())?;
    let mut differing = 0;
    for (i, j1, j2, j3) in (1..=3).flat_map(|i| (1..=3).flat_map(move |a| (1..=3).flat_map(move |b| (1..=3).map(move |c| (i, a, b, c))))) {
        let naive = bowen_naive(j1, j2, j3, i);
        let right = bowen_derivative(&[j1, j2, j3], i);
        ensure(naive.function_part() == right.function_part(), || format!("function parts differ at i={i} j=({j1},{j2},{j3})"))?;
        if naive != right {
            differing += 1;
        }
    }
    Ok(format!("{} vs {}, {differing}/81 index choices differ", a.to_pi_form(3), b.to_pi_form(3)))
}

fn frahm_formula() -> Outcome {
    for (i, j) in pairs(3) {
        let profile = (&n(3, i) * &n(3, j)).scale(&ScalarCoeff::from_integer(3)) - SphericalSymbol::kronecker(3, i, j);
        ensure(classify(3, -3, &profile) == FunctionKind::PrincipalValue, || format!("({i},{j}) profile is not p.v."))?;
        let want = StandardDistribution::homogeneous(-3, profile) + StandardDistribution::delta(3, c() * ScalarCoeff::ratio(-kron(i, j), 3));
        let got = frahm(i, j);
        ensure(got == want, || format!("({i},{j}): got {got}, want {want}"))?;
    }
    let trace = laplacian_inverse_r();
    ensure(trace.function_terms().all(|(_, p)| p.is_zero()), || format!("trace has a function part: {trace}"))?;
    ensure(trace == StandardDistribution::delta(3, -c()), || format!("trace {trace}"))?;
    Ok(format!("trace {}δ", trace.delta_coefficient().to_pi_form(3)))
}

fn second_derivative() -> Outcome {
    for (i, j) in pairs(3) {
        let profile = (&n(3, i) * &n(3, j)).scale(&ScalarCoeff::from_integer(3)) - SphericalSymbol::kronecker(3, i, j);
        let density = (SphericalSymbol::kronecker(3, i, j) - (&n(3, i) * &n(3, j)).scale(&ScalarCoeff::from_integer(4))).scale(&c());
        let want = ThickDistribution::pf(-3, profile) + ThickDistribution::delta(0, density);
        let got = pd9(i, j);
        ensure(got == want, || format!("({i},{j}): got {got}, want {want}"))?;
    }
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let mut cases = 0;
    for dim in 2..=4 {
        for k in -6..=3 {
            for _ in 0..3 {
                let profile = random_symbol(&mut rng, dim, 4, false);
                for (i, j) in pairs(dim) {
                    let composed = thick_partial(i, &thick_partial(j, &ThickDistribution::pf(k, profile.clone())));
                    let closed = second_partial_closed_form(i, j, k, &profile);
                    ensure(composed == closed, || format!("dim {dim} k {k} ({i},{j}) profile {profile}"))?;
                    cases += 1;
                }
            }
        }
    }
    Ok(format!("{cases} closed-form cases"))
}

fn order_zero() -> Outcome {
    for (i, j) in pairs(2) {
        let (composed, projected) = h5(i, j);
        ensure(composed.is_zero(), || format!("dim 2 ({i},{j}): composed is {composed}"))?;
        let density = (SphericalSymbol::kronecker(2, i, j) - (&n(2, i) * &n(2, j)).scale(&ScalarCoeff::from_integer(2))).scale(&c());
        let want = ThickDistribution::delta(0, density);
        ensure(projected == want, || format!("dim 2 ({i},{j}): got {projected}, want {want}"))?;
    }
    for (i, j) in pairs(3) {
        let (a, b) = (h6(i, j), h7(i, j));
        ensure(a != b, || format!("({i},{j}): thick values agree"))?;
        let want = StandardDistribution::delta(3, c() * ScalarCoeff::ratio(-kron(i, j), 3));
        for (label, v) in [("Π₀ of the thick derivative", &a), ("composed order-0", &b)] {
            let point = project(v).point_part();
            ensure(point == want, || format!("({i},{j}) {label}: point part {point}"))?;
        }
        ensure(project(&a) == project(&b), || format!("({i},{j}): projections differ"))?;
    }
    Ok("dim 2 and dim 3 index pairs".into())
}

fn two_routes() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    let (mut above, mut at, mut below, mut multi) = (0, 0, 0, 0);
    for case in 0..500 {
        let dim = rng.random_range(2..=4);
        let axis = rng.random_range(1..=dim);
        let edge = 1 - dim as i32;
        let k = match case % 3 {
            0 => rng.random_range(edge + 1..=3),
            1 => edge,
            _ => rng.random_range(edge - 4..edge),
        };
        let profile = random_symbol(&mut rng, dim, 4, false);
        let direct = standard_partial_homogeneous(axis, k, &profile);
        let via_thick = project(&thick_partial(axis, &ThickDistribution::pf(k, profile.clone())));
        ensure(direct == via_thick, || format!("case {case}: dim {dim} axis {axis} k {k} profile {profile}"))?;
        match k.cmp(&edge) {
            std::cmp::Ordering::Greater => above += 1,
            std::cmp::Ordering::Equal => at += 1,
            std::cmp::Ordering::Less => {
                below += 1;
                if direct.delta_terms().any(|(a, _)| a.order() >= 1) {
                    multi += 1;
                }
            }
        }
    }
    ensure(above > 0 && at > 0 && below > 0 && multi > 0, || format!("branch coverage {above}/{at}/{below}/{multi}"))?;
    Ok(format!("branches k>1-n {above}, k=1-n {at}, k<1-n {below} ({multi} with D^α terms)"))
}

fn duality_oracle() -> Outcome {
    let report = run_check(7, 1e-8);
    ensure(report.all_pass(), || format!("{report}"))?;
    let mut radial_err: f64 = 0.0;
    for s in 0..=12 {
        let want = gamma((f64::from(s) + 1.0) / 2.0) / 2.0;
        let got = radial_finite_part(s);
        let err = (got - want).abs() / want.abs().max(1.0);
        ensure(err <= 1e-12, || format!("F({s}) = {got}, want {want}"))?;
        radial_err = radial_err.max(err);
    }
    let mut moment_err: f64 = 0.0;
    let mut moments = 0;
    for dim in 2..=4 {
        for order in 0..=8 {
            for a in MultiIndex::all_of_order(dim, order) {
                let exact = SphericalSymbol::monomial(a.clone(), ScalarCoeff::one()).sphere_moment().evaluate(dim);
                let numeric = numeric_sphere_moment(a.exponents());
                let err = (exact - numeric).abs();
                ensure(err <= 1e-9, || format!("moment {a} in dim {dim}: exact {exact}, quadrature {numeric}"))?;
                moment_err = moment_err.max(err);
                moments += 1;
            }
        }
    }
    Ok(format!(
        "{}/{} probes, max residual {:.1e}; radial {radial_err:.1e}; {moments} moments, max error {moment_err:.1e}",
        report.passed(),
        report.total(),
        report.max_residual()
    ))
}

fn algebra_properties() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    const INSTANCES: usize = 120;
    for idx in 0..INSTANCES {
        let dim = 2 + idx % 3;
        let (i, j) = (rng.random_range(1..=dim), rng.random_range(1..=dim));
        let t = random_thick(&mut rng, dim, 2, 2);

        let ij = thick_partial(i, &thick_partial(j, &t));
        let ji = thick_partial(j, &thick_partial(i, &t));
        ensure(ij == ji, || format!("partials {i},{j} do not commute on {t}"))?;

        let m = Multiplier::homogeneous(rng.random_range(-3..=3), random_symbol(&mut rng, dim, 3, false));
        let lhs = thick_partial(i, &m.apply(&t).unwrap());
        let rhs = m.partial(i).apply(&t).unwrap() + m.apply(&thick_partial(i, &t)).unwrap();
        ensure(lhs == rhs, || format!("product rule fails for {m} times {t}"))?;

        let single = if idx % 2 == 0 { random_thick(&mut rng, dim, 1, 0) } else { random_thick(&mut rng, dim, 0, 1) };
        let grade = single.grades();
        let lowered = thick_partial(i, &single).grades();
        ensure(grade.len() == 1 && lowered.iter().all(|g| *g == grade[0] - 1), || format!("grades {grade:?} -> {lowered:?}"))?;

        let p = random_symbol(&mut rng, dim, 4, true);
        let in_ideal = &SphericalSymbol::sphere_relation(dim) * &p;
        ensure(!in_ideal.is_zero() && in_ideal.delta_derivative(j).is_zero(), || format!("δ/δx_{j} of ({p}) times the sphere relation"))?;

        let f = random_symbol(&mut rng, dim, 5, true);
        let lhs = f.delta_derivative(j).sphere_moment();
        let rhs = (&n(dim, j) * &f).sphere_moment().scale(&thickdist::rational(dim as i64 - 1, 1));
        ensure(lhs == rhs, || format!("integration by parts fails for {f} along {j}"))?;
    }
    Ok(format!("{INSTANCES} instances of each property"))
}

fn run_cli(args: &[&str]) -> Option<i32> {
    Command::new(env!("CARGO_BIN_EXE_thickdist")).args(args).output().ok()?.status.code()
}

fn dsl_round_trip() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    for idx in 0..100 {
        let dim = 2 + idx % 3;
        let (pf_terms, delta_terms) = (rng.random_range(0..=2), rng.random_range(0..=2));
        let t = random_thick(&mut rng, dim, pf_terms, delta_terms);
        let text = render_thick_plain(&t);
        let expr = parse(&text, dim).map_err(|e| format!("`{text}` does not parse: {}", e.render()))?;
        let back = evaluate(&expr).map_err(|e| format!("`{text}` does not evaluate: {}", e.message))?;
        let want = if t.is_zero() { None } else { Some(Value::Thick(t.clone())) };
        match (&back, want) {
            (Value::Thick(b), _) => ensure(*b == t, || format!("`{text}` reads back as {b}"))?,
            (Value::Scalar(s), None) => ensure(s.is_zero(), || format!("`{text}` reads back as {s}"))?,
            (other, _) => return Err(format!("`{text}` reads back as a {}", other.kind_name())),
        }
        let again = match &back {
            Value::Thick(b) => render_thick_plain(b),
            _ => text.clone(),
        };
        ensure(again == text, || format!("rendering drifts: `{text}` then `{again}`"))?;
        let tree = render_tree(&Value::Thick(t.clone()), dim);
        let from = parse_tree(&tree).map_err(|e| e.to_string())?;
        ensure(from == Value::Thick(t.clone()) && render_tree(&from, dim) == tree, || format!("tree round trip fails for {t}"))?;
    }
    let contract: [(&[&str], i32); 8] = [
        (&["eval", "Pf(n1/r^2)"], 0),
        (&["eval", "Pf(n1"], 2),
        (&["eval", "1/0"], 2),
        (&["eval", "dstar(4, Pf(1))"], 2),
        (&["eval", "Pf(1) * Pf(1)"], 3),
        (&["eval", "dzero(1, delta*[-1])"], 3),
        (&["paper", "nope"], 4),
        (&["frobnicate"], 4),
    ];
    for (args, want) in contract {
        let got = run_cli(args);
        ensure(got == Some(want), || format!("thickdist {args:?} exited {got:?}, want {want}"))?;
    }
    Ok("100 values, 8 exit-code cases".into())
}

fn main() -> ExitCode {
    let criteria = [
        Criterion { id: 1, name: "bowen coefficient", budget: Duration::from_secs(1), run: bowen_coefficients },
        Criterion { id: 2, name: "wrong-route witness", budget: Duration::from_secs(1), run: wrong_route },
        Criterion { id: 3, name: "frahm formula and trace", budget: Duration::from_secs(1), run: frahm_formula },
        Criterion { id: 4, name: "thick second derivative", budget: Duration::from_secs(10), run: second_derivative },
        Criterion { id: 5, name: "order-0 anomaly", budget: Duration::from_secs(1), run: order_zero },
        Criterion { id: 6, name: "two-route derivative", budget: Duration::from_secs(30), run: two_routes },
        Criterion { id: 7, name: "duality oracle", budget: Duration::from_secs(60), run: duality_oracle },
        Criterion { id: 8, name: "algebra properties", budget: Duration::from_secs(30), run: algebra_properties },
        Criterion { id: 9, name: "dsl round trip", budget: Duration::from_secs(5), run: dsl_round_trip },
    ];
    let mut failed = 0;
    for crit in &criteria {
        let start = Instant::now();
        let outcome = std::panic::catch_unwind(crit.run).unwrap_or_else(|_| Err("panicked".into()));
        let elapsed = start.elapsed();
        let outcome = match outcome {
            Ok(_) if elapsed > crit.budget => Err(format!("took {elapsed:.2?}, budget {:?}", crit.budget)),
            other => other,
        };
        match outcome {
            Ok(detail) => println!("criterion {} {:<26} PASS  {:>9.2?}  {detail}", crit.id, crit.name, elapsed),
            Err(why) => {
                failed += 1;
                println!("criterion {} {:<26} FAIL  {:>9.2?}  {why}", crit.id, crit.name, elapsed);
            }
        }
    }
    println!("{}/{} criteria pass", criteria.len() - failed, criteria.len());
    if failed == 0 { ExitCode::SUCCESS } else { ExitCode::FAILURE }
}
