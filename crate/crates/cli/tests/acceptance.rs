//! Acceptance criteria. Runs every criterion, prints one line each, and
//! exits non-zero if any fails. All comparisons are exact unless a
//! tolerance is stated.

use std::process::{Command, ExitCode};
use std::time::{Duration, Instant};

use onebound_core::bounds::{corollary_bound, independent_exactly_one, lower_bound_exactly_one, BoundInput};
use onebound_core::construction::{
    construct_extremal, extremal_mass, occupancy_probability, select_level, verify_r_independence,
    SymmetricDistribution,
};
use onebound_core::events::EventExpr;
use onebound_core::exactmath::{rational_parse, ratio};
use onebound_core::lp::{
    build_atom_lp, build_symmetric_lp, optimal_levels, pairwise_constraints, simplex_solve,
    GeneralProblem, LpResult, MomentProblem, Sense,
};
use onebound_core::verify::{chebyshev_gap, sample, second_moment_closed_form, second_moment_value};
use onebound_core::Rational;

type Outcome = Result<String, String>;

/// Monte Carlo band half-width in standard errors.
const MC_SIGMAS: i64 = 4;
const MC_TRIALS: u64 = 100_000;
/// Reference decimal and tolerance for the independent value at n=40, c=1.
const FIG_REFERENCE: &str = "0.3724";
const FIG_TOLERANCE: &str = "1/10000";

fn grid(steps: i64) -> Vec<Rational> {
    (0..=steps).map(|i| ratio(i, steps)).collect()
}

fn bound_input(n: u32, p: &Rational) -> BoundInput {
    BoundInput::new(n, p.clone()).expect("grid point is valid")
}

/// Solves the moment LP and checks its certificate.
fn moment(n: u32, r: u32, m: u32, p: &Rational, sense: Sense) -> Result<LpResult, String> {
    let mp = MomentProblem::new(n, r, m, p.clone(), sense).map_err(|e| e.to_string())?;
    let lp = build_symmetric_lp(&mp);
    let res = simplex_solve(&lp).map_err(|e| e.to_string())?;
    res.verify(&lp).map_err(|e| format!("n={n} r={r} m={m} p={p}: certificate: {e}"))?;
    Ok(res)
}

fn value_of(res: &LpResult) -> Result<Rational, String> {
    res.value().cloned().ok_or_else(|| format!("not optimal: {res:?}"))
}

fn lower_bound_exactness() -> Outcome {
    let mut checked = 0;
    for n in 2..=10u32 {
        for p in grid(40) {
            let got = value_of(&moment(n, 2, 1, &p, Sense::Minimize)?)?;
            let want = lower_bound_exactly_one(&bound_input(n, &p));
            if got != want {
                return Err(format!("n={n} p={p}: LP min {got} != closed form {want}"));
            }
            checked += 1;
        }
    }
    Ok(format!("{checked} grid points, LP min = np(1-(n-1)p)+ exactly"))
}

fn attainment() -> Outcome {
    let mut checked = 0;
    for n in 2..=10u32 {
        for p in grid(40) {
            let d = construct_extremal(n, &p).map_err(|e| e.to_string())?;
            if !SymmetricDistribution::violations(n, d.levels()).is_empty() {
                return Err(format!("n={n} p={p}: not a distribution"));
            }
            if !verify_r_independence(&d, 2, &p).map_err(|e| e.to_string())? {
                return Err(format!("n={n} p={p}: moment conditions fail"));
            }
            let got = occupancy_probability(&d, 1).map_err(|e| e.to_string())?;
            let want = lower_bound_exactly_one(&bound_input(n, &p));
            if got != want {
                return Err(format!("n={n} p={p}: P(N=1) = {got} != {want}"));
            }
            let k = select_level(n, &p).map_err(|e| e.to_string())?;
            let s = extremal_mass(n, &p, k);
            if s > Rational::one() {
                return Err(format!("n={n} p={p}: s = {s} > 1"));
            }
            checked += 1;
        }
    }
    Ok(format!("{checked} grid points, normalization + moments + s<=1 + attainment exact"))
}

fn oracle_equivalence() -> Outcome {
    let mut checked = 0;
    for n in 2..=5u32 {
        for p in grid(10) {
            for m in 0..=n {
                for sense in [Sense::Minimize, Sense::Maximize] {
                    let sym = value_of(&moment(n, 2, m, &p, sense)?)?;
                    let gp = GeneralProblem::new(n, pairwise_constraints(n, &p), EventExpr::CountEq(m), sense)
                        .map_err(|e| e.to_string())?;
                    let lp = build_atom_lp(&gp);
                    let res = simplex_solve(&lp).map_err(|e| e.to_string())?;
                    res.verify(&lp).map_err(|e| format!("atom LP certificate: {e}"))?;
                    let atom = value_of(&res)?;
                    if atom != sym {
                        return Err(format!("n={n} p={p} m={m} {sense:?}: atom {atom} != symmetric {sym}"));
                    }
                    checked += 1;
                }
            }
        }
    }
    Ok(format!("{checked} (n, p, m, sense) cases agree, all certificates verified"))
}

fn corollary() -> Outcome {
    let mut checked = 0;
    for n in 2..=8u32 {
        for p in grid(20) {
            let got = value_of(&moment(n, 2, n - 1, &p, Sense::Minimize)?)?;
            let want = corollary_bound(&bound_input(n, &p));
            let reflected = lower_bound_exactly_one(&bound_input(n, &(Rational::one() - &p)));
            if got != want || want != reflected {
                return Err(format!("n={n} p={p}: min P(N=n-1) = {got}, P(n,q) = {reflected}"));
            }
            checked += 1;
        }
    }
    Ok(format!("{checked} grid points, min P(N=n-1) = P(n,1-p) exactly"))
}

fn independence_collapse() -> Outcome {
    let mut checked = 0;
    for n in 2..=6u32 {
        for p in grid(10) {
            let want = independent_exactly_one(&bound_input(n, &p));
            for sense in [Sense::Minimize, Sense::Maximize] {
                let got = value_of(&moment(n, n, 1, &p, sense)?)?;
                if got != want {
                    return Err(format!("n={n} p={p} {sense:?}: {got} != npq^(n-1) = {want}"));
                }
            }
            checked += 1;
        }
    }
    Ok(format!("{checked} grid points, min = max = npq^(n-1)"))
}

fn second_moment_identity() -> Outcome {
    let mut checked = 0;
    for n in 2..=10u32 {
        let limit = Rational::new(1, n - 1);
        for p in grid(40) {
            let closed = second_moment_closed_form(n, &p);
            let res = moment(n, 2, 1, &p, Sense::Minimize)?;
            let optimizer = optimal_levels(n, &res).ok_or("LP optimizer is not a distribution")?;
            let constructed = construct_extremal(n, &p).map_err(|e| e.to_string())?;
            for (label, d) in [("LP optimizer", &optimizer), ("construction", &constructed)] {
                let second = second_moment_value(d);
                if second != closed {
                    return Err(format!("n={n} p={p} {label}: E(N-1)^2 = {second} != {closed}"));
                }
                let gap = chebyshev_gap(d, &p).map_err(|e| format!("n={n} p={p} {label}: {e}"))?;
                if gap.is_negative() {
                    return Err(format!("n={n} p={p} {label}: negative gap {gap}"));
                }
            }
            let gap = chebyshev_gap(&constructed, &p).map_err(|e| e.to_string())?;
            if p <= limit && !gap.is_zero() {
                return Err(format!("n={n} p={p}: construction gap {gap} != 0"));
            }
            checked += 2;
        }
    }
    Ok(format!("{checked} distributions, identity exact, gap >= 0, construction tight"))
}

fn figure_data() -> Outcome {
    let output = Command::new(env!("CARGO_BIN_EXE_onebound"))
        .arg("figure")
        .output()
        .map_err(|e| e.to_string())?;
    if !output.status.success() {
        return Err(format!("figure exited with {}", output.status));
    }
    let text = String::from_utf8(output.stdout).map_err(|e| e.to_string())?;
    let mut lines = text.lines();
    let header = lines.next().ok_or("empty output")?;
    let columns: Vec<&str> = header.split(',').collect();
    if columns[..5] != ["n", "c", "p", "independent", "pairwise_min"] {
        return Err(format!("unexpected header {header}"));
    }
    let mut rows = 0;
    let mut rendered = None;
    for line in lines {
        rows += 1;
        let f: Vec<&str> = line.split(',').collect();
        let n: u32 = f[0].parse().map_err(|_| format!("bad n in {line}"))?;
        let c = rational_parse(f[1]).map_err(|e| e.to_string())?;
        let independent = rational_parse(f[3]).map_err(|e| e.to_string())?;
        let pairwise = rational_parse(f[4]).map_err(|e| e.to_string())?;
        if c == Rational::one() && pairwise != Rational::new(1, n) {
            return Err(format!("c=1 n={n}: pairwise_min {pairwise} != 1/{n}"));
        }
        if c == ratio(11, 10) && n >= 11 && !pairwise.is_zero() {
            return Err(format!("c=11/10 n={n}: pairwise_min {pairwise} != 0"));
        }
        if (c == ratio(1, 2) || c == ratio(9, 10)) && !pairwise.is_positive() {
            return Err(format!("c={c} n={n}: pairwise_min not positive"));
        }
        if c == Rational::one() && n == 40 {
            rendered = Some(independent.to_decimal(4));
        }
    }
    if rows != 4 * 38 {
        return Err(format!("{rows} rows, expected 152"));
    }
    let rendered = rendered.ok_or("no (n=40, c=1) row")?;
    let deviation = (rational_parse(&rendered).unwrap() - rational_parse(FIG_REFERENCE).unwrap()).abs();
    if deviation > rational_parse(FIG_TOLERANCE).unwrap() {
        return Err(format!("independent(40, c=1) renders to {rendered}, off {FIG_REFERENCE} by {deviation}"));
    }
    Ok(format!("152 rows; c=1 gives 1/n; c=11/10 zero from n=11; independent(40,1) renders {rendered}"))
}

/// `|estimate - exact| <= 4 sqrt(exact (1 - exact) / trials)`, squared so
/// the comparison stays exact.
fn within_band(label: &str, estimate: &Rational, exact: &Rational, trials: u64) -> Result<(), String> {
    let diff = estimate - exact;
    let variance = exact * (Rational::one() - exact) / Rational::from(trials);
    let bound = Rational::from(MC_SIGMAS * MC_SIGMAS) * variance;
    if &diff * &diff > bound {
        return Err(format!("{label}: estimate {} vs exact {exact}", estimate.to_decimal(5)));
    }
    Ok(())
}

fn monte_carlo() -> Outcome {
    let p = ratio(1, 3);
    let cases = [
        ("construction", construct_extremal(3, &p).map_err(|e| e.to_string())?, 42u64),
        ("binomial", SymmetricDistribution::binomial(3, &p).map_err(|e| e.to_string())?, 7u64),
    ];
    let mut summary = Vec::new();
    for (label, d, seed) in cases {
        let report = sample(&d, MC_TRIALS, seed).map_err(|e| e.to_string())?;
        let again = sample(&d, MC_TRIALS, seed).map_err(|e| e.to_string())?;
        let first = serde_json::to_string(&report).unwrap();
        if first != serde_json::to_string(&again).unwrap() {
            return Err(format!("{label}: reports differ across runs with seed {seed}"));
        }
        let exact_one = occupancy_probability(&d, 1).map_err(|e| e.to_string())?;
        within_band(&format!("{label} P(A1)"), &report.first_event_estimate(), &p, MC_TRIALS)?;
        let pair = report.pair_estimate().ok_or("missing pair estimate")?;
        within_band(&format!("{label} P(A1&A2)"), &pair, &p.pow(2), MC_TRIALS)?;
        within_band(&format!("{label} P(N=1)"), &report.exactly_one_estimate(), &exact_one, MC_TRIALS)?;
        summary.push(format!(
            "{label}: A1 {} pair {} N=1 {}",
            report.first_event, report.pair.as_deref().unwrap_or("-"), report.exactly_one
        ));
    }
    Ok(format!("within {MC_SIGMAS} s.e., reproducible; {}", summary.join("; ")))
}

struct Criterion {
    id: u32,
    name: &'static str,
    budget: Duration,
    run: fn() -> Outcome,
}

fn main() -> ExitCode {
    let criteria = [
        Criterion { id: 1, name: "lower bound exactness", budget: Duration::from_secs(60), run: lower_bound_exactness },
        Criterion { id: 2, name: "attainment", budget: Duration::from_secs(5), run: attainment },
        Criterion { id: 3, name: "oracle equivalence", budget: Duration::from_secs(120), run: oracle_equivalence },
        Criterion { id: 4, name: "corollary", budget: Duration::from_secs(30), run: corollary },
        Criterion { id: 5, name: "full-independence collapse", budget: Duration::from_secs(30), run: independence_collapse },
        Criterion { id: 6, name: "second-moment identity", budget: Duration::from_secs(10), run: second_moment_identity },
        Criterion { id: 7, name: "figure data", budget: Duration::from_secs(5), run: figure_data },
        Criterion { id: 8, name: "monte carlo", budget: Duration::from_secs(10), run: monte_carlo },
    ];
    let mut failures = 0;
    for c in &criteria {
        let start = Instant::now();
        let outcome = (c.run)();
        let elapsed = start.elapsed();
        let (status, detail) = match outcome {
            Ok(detail) if elapsed <= c.budget => ("PASS", detail),
            Ok(detail) => ("FAIL", format!("{detail}; over budget {:?}", c.budget)),
            Err(detail) => ("FAIL", detail),
        };
        if status == "FAIL" {
            failures += 1;
        }
        println!(
            "[{status}] AC{} {} ({:.2}s / {}s): {detail}",
            c.id,
            c.name,
            elapsed.as_secs_f64(),
            c.budget.as_secs()
        );
    }
    println!("{} of {} criteria passed", criteria.len() - failures, criteria.len());
    if failures == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
