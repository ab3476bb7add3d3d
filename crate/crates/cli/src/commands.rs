use std::fs;
use std::path::Path;

use onebound_core::bounds::{
    corollary_bound, independence_constraint_counts, independent_exactly_one, independent_max,
    lower_bound_exactly_one, BoundInput, ConstraintCounts,
};
use onebound_core::construction::{
    construct_extremal, extremal_mass, intersection_probability, occupancy_probability,
    select_level, verify_r_independence, LevelsFile, SymmetricDistribution,
};
use onebound_core::events::AtomDistribution;
use onebound_core::figure::{default_cs, figure_rows, to_csv};
use onebound_core::lp::{
    build_atom_lp, build_symmetric_lp, optimal_atoms, optimal_levels, simplex_solve,
    GeneralProblem, GeneralProblemFile, LpResult, MomentProblem, Sense,
};
use onebound_core::verify::{
    chebyshev_gap, sample, second_moment_closed_form, second_moment_value, SampleReport,
};
use onebound_core::Rational;
use serde::Serialize;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("internal invariant breached: {0}")]
    Internal(String),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Usage(_) => 2,
            CliError::Internal(_) => 3,
        }
    }
}

fn usage(err: impl std::fmt::Display) -> CliError {
    CliError::Usage(err.to_string())
}

/// What to print and the process exit code (0 success, 1 failed check).
pub struct Outcome {
    pub stdout: String,
    pub code: u8,
}

impl Outcome {
    fn json(value: &impl Serialize, code: u8) -> Result<Self, CliError> {
        let mut stdout = serde_json::to_string_pretty(value)
            .map_err(|e| CliError::Internal(e.to_string()))?;
        stdout.push('\n');
        Ok(Outcome { stdout, code })
    }
}

fn write_json(path: &Path, value: &impl Serialize) -> Result<(), CliError> {
    let mut text = serde_json::to_string_pretty(value).map_err(|e| CliError::Internal(e.to_string()))?;
    text.push('\n');
    fs::write(path, text).map_err(|e| usage(format!("cannot write {}: {e}", path.display())))
}

fn read_json<T: serde::de::DeserializeOwned>(path: &Path) -> Result<T, CliError> {
    let text = fs::read_to_string(path).map_err(|e| usage(format!("cannot read {}: {e}", path.display())))?;
    serde_json::from_str(&text).map_err(|e| usage(format!("invalid JSON in {}: {e}", path.display())))
}

#[derive(Serialize)]
struct Decimals {
    lower_bound: String,
    independent_value: String,
    corollary_bound: String,
}

#[derive(Serialize)]
struct IndependentMax {
    argmax: Rational,
    value: Rational,
}

#[derive(Serialize)]
struct BoundReport {
    n: u32,
    p: Rational,
    lower_bound: Rational,
    independent_value: Rational,
    corollary_bound: Rational,
    independent_max: IndependentMax,
    constraint_counts: ConstraintCounts,
    #[serde(skip_serializing_if = "Option::is_none")]
    decimal: Option<Decimals>,
}

pub fn bound(n: u32, p: Rational, digits: Option<usize>) -> Result<Outcome, CliError> {
    let input = BoundInput::new(n, p.clone()).map_err(usage)?;
    let lower_bound = lower_bound_exactly_one(&input);
    let independent_value = independent_exactly_one(&input);
    let corollary = corollary_bound(&input);
    let (argmax, value) = independent_max(n).map_err(usage)?;
    let decimal = digits.map(|d| Decimals {
        lower_bound: lower_bound.to_decimal(d),
        independent_value: independent_value.to_decimal(d),
        corollary_bound: corollary.to_decimal(d),
    });
    let report = BoundReport {
        n,
        p,
        lower_bound,
        independent_value,
        corollary_bound: corollary,
        independent_max: IndependentMax { argmax, value },
        constraint_counts: independence_constraint_counts(n).map_err(usage)?,
        decimal,
    };
    Outcome::json(&report, 0)
}

#[derive(Serialize)]
struct ConstructChecks {
    nonnegative: bool,
    normalization: bool,
    marginal: bool,
    pairwise: bool,
    attains_bound: bool,
}

#[derive(Serialize)]
struct ConstructReport {
    n: u32,
    p: Rational,
    level: u32,
    levels: Vec<Rational>,
    off_zero_mass: Rational,
    exactly_one: Rational,
    lower_bound: Rational,
    checks: ConstructChecks,
    #[serde(skip_serializing_if = "Option::is_none")]
    out: Option<String>,
}

pub fn construct(n: u32, p: Rational, out: Option<&Path>) -> Result<Outcome, CliError> {
    if n < 2 {
        return Err(usage(format!(
            "the extremal construction needs n >= 2 (got n={n}); use `onebound bound --n {n} --p {p}` for the closed form"
        )));
    }
    let d = construct_extremal(n, &p).map_err(usage)?;
    let k = select_level(n, &p).map_err(usage)?;
    let violations = SymmetricDistribution::violations(n, d.levels());
    let exactly_one = occupancy_probability(&d, 1).map_err(|e| CliError::Internal(e.to_string()))?;
    let lower_bound = lower_bound_exactly_one(&BoundInput::new(n, p.clone()).map_err(usage)?);
    let checks = ConstructChecks {
        nonnegative: d.levels().iter().all(|x| !x.is_negative()),
        normalization: violations.is_empty(),
        marginal: intersection_probability(&d, 1).ok().as_ref() == Some(&p),
        pairwise: verify_r_independence(&d, 2, &p).unwrap_or(false),
        attains_bound: exactly_one == lower_bound,
    };
    if !(checks.nonnegative && checks.normalization && checks.marginal && checks.pairwise && checks.attains_bound) {
        return Err(CliError::Internal(format!("extremal distribution failed its checks at n={n}, p={p}")));
    }
    if let Some(path) = out {
        write_json(path, &d)?;
    }
    let report = ConstructReport {
        n,
        level: k,
        off_zero_mass: extremal_mass(n, &p, k),
        levels: d.levels().to_vec(),
        exactly_one,
        lower_bound,
        checks,
        out: out.map(|p| p.display().to_string()),
        p,
    };
    Outcome::json(&report, 0)
}

#[derive(Serialize)]
struct LpReport {
    n: u32,
    r: u32,
    m: u32,
    p: Rational,
    sense: Sense,
    #[serde(skip_serializing_if = "Option::is_none")]
    value: Option<Rational>,
    #[serde(skip_serializing_if = "Option::is_none")]
    value_decimal: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    levels: Option<Vec<Rational>>,
    certificate_verified: bool,
    result: LpResult,
}

pub fn lp(
    n: u32,
    r: u32,
    m: u32,
    p: Rational,
    sense: Sense,
    lp_out: Option<&Path>,
    digits: Option<usize>,
) -> Result<Outcome, CliError> {
    let mp = MomentProblem::new(n, r, m, p.clone(), sense).map_err(usage)?;
    let program = build_symmetric_lp(&mp);
    if let Some(path) = lp_out {
        write_json(path, &program)?;
    }
    let result = simplex_solve(&program).map_err(|e| CliError::Internal(e.to_string()))?;
    let certificate_verified = result.verify(&program).is_ok();
    if !certificate_verified {
        return Err(CliError::Internal("LP certificate failed verification".into()));
    }
    let value = result.value().cloned();
    let report = LpReport {
        n,
        r,
        m,
        p,
        sense,
        value_decimal: value.as_ref().zip(digits).map(|(v, d)| v.to_decimal(d)),
        value,
        levels: optimal_levels(n, &result).map(|d| d.levels().to_vec()),
        certificate_verified,
        result,
    };
    Outcome::json(&report, 0)
}

#[derive(Serialize)]
struct GeneralReport {
    n: u32,
    target: String,
    sense: Sense,
    #[serde(skip_serializing_if = "Option::is_none")]
    value_decimal: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    distribution: Option<AtomDistribution>,
    certificate_verified: bool,
    #[serde(flatten)]
    result: LpResult,
}

pub fn general(path: &Path, digits: Option<usize>) -> Result<Outcome, CliError> {
    let file: GeneralProblemFile = read_json(path)?;
    let problem = GeneralProblem::try_from(&file).map_err(usage)?;
    let program = build_atom_lp(&problem);
    let result = simplex_solve(&program).map_err(|e| CliError::Internal(e.to_string()))?;
    let certificate_verified = result.verify(&program).is_ok();
    if !certificate_verified {
        return Err(CliError::Internal("LP certificate failed verification".into()));
    }
    let report = GeneralReport {
        n: file.n,
        target: file.target.clone(),
        sense: file.sense,
        value_decimal: result.value().zip(digits).map(|(v, d)| v.to_decimal(d)),
        distribution: optimal_atoms(file.n, &result),
        certificate_verified,
        result,
    };
    Outcome::json(&report, 0)
}

#[derive(Serialize)]
struct FigureSummary {
    rows: usize,
    out: String,
}

pub fn figure(
    n_min: u32,
    n_max: u32,
    cs: Vec<Rational>,
    digits: usize,
    out: Option<&Path>,
) -> Result<Outcome, CliError> {
    if n_min > n_max {
        return Err(usage(format!("empty n-range {n_min}..={n_max}")));
    }
    let cs = if cs.is_empty() { default_cs() } else { cs };
    if let Some(c) = cs.iter().find(|c| c.is_negative()) {
        return Err(usage(format!("c must be nonnegative, got {c}")));
    }
    let rows = figure_rows(n_min, n_max, &cs).map_err(|e| usage(format!("{e} (need c/n <= 1 on every row)")))?;
    let csv = to_csv(&rows, digits);
    match out {
        Some(path) => {
            fs::write(path, &csv).map_err(|e| usage(format!("cannot write {}: {e}", path.display())))?;
            Outcome::json(&FigureSummary { rows: rows.len(), out: path.display().to_string() }, 0)
        }
        None => Ok(Outcome { stdout: csv, code: 0 }),
    }
}

#[derive(Serialize)]
struct Check {
    name: &'static str,
    pass: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    detail: Option<String>,
}

impl Check {
    fn new(name: &'static str, pass: bool, detail: Option<String>) -> Self {
        Check { name, pass, detail }
    }
}

#[derive(Serialize)]
struct VerifyReport {
    n: u32,
    #[serde(skip_serializing_if = "Option::is_none")]
    p: Option<Rational>,
    checks: Vec<Check>,
    #[serde(skip_serializing_if = "Option::is_none")]
    second_moment: Option<Rational>,
    #[serde(skip_serializing_if = "Option::is_none")]
    second_moment_closed_form: Option<Rational>,
    #[serde(skip_serializing_if = "Option::is_none")]
    chebyshev_gap: Option<Rational>,
    #[serde(skip_serializing_if = "Option::is_none")]
    sample: Option<SampleReport>,
    all_passed: bool,
}

pub fn verify(path: &Path, p: Option<Rational>, trials: u64, seed: u64) -> Result<Outcome, CliError> {
    let file: LevelsFile = read_json(path)?;
    if trials == 0 {
        return Err(usage("--trials must be at least 1"));
    }
    if let Some(p) = p.as_ref().filter(|p| !p.is_probability()) {
        return Err(usage(format!("p={p} is outside [0, 1]")));
    }
    let n = file.n;
    let mut report = VerifyReport {
        n,
        p: None,
        checks: Vec::new(),
        second_moment: None,
        second_moment_closed_form: None,
        chebyshev_gap: None,
        sample: None,
        all_passed: false,
    };

    let violations = SymmetricDistribution::violations(n, &file.levels);
    let negative: Vec<String> = violations
        .iter()
        .filter(|v| matches!(v, onebound_core::error::DistributionError::NegativeLevel { .. }))
        .map(ToString::to_string)
        .collect();
    if let Some(count) = violations
        .iter()
        .find(|v| matches!(v, onebound_core::error::DistributionError::LevelCount { .. }))
    {
        report.checks.push(Check::new("level_count", false, Some(count.to_string())));
        return Outcome::json(&report, 1);
    }
    report.checks.push(Check::new("nonnegative", negative.is_empty(), (!negative.is_empty()).then(|| negative.join("; "))));
    let normalization = violations
        .iter()
        .find(|v| matches!(v, onebound_core::error::DistributionError::Normalization(_)));
    report.checks.push(Check::new("normalization", normalization.is_none(), normalization.map(ToString::to_string)));

    let Ok(d) = SymmetricDistribution::try_from(file) else {
        return Outcome::json(&report, 1);
    };
    let marginal = intersection_probability(&d, 1).map_err(|e| CliError::Internal(e.to_string()))?;
    let p = p.unwrap_or_else(|| marginal.clone());
    report.checks.push(Check::new(
        "marginal",
        marginal == p,
        (marginal != p).then(|| format!("P(A_j) = {marginal}, expected {p}")),
    ));
    if n >= 2 {
        let pair = intersection_probability(&d, 2).map_err(|e| CliError::Internal(e.to_string()))?;
        let expected = p.pow(2);
        report.checks.push(Check::new(
            "pairwise",
            pair == expected,
            (pair != expected).then(|| format!("P(A_i & A_j) = {pair}, expected {expected}")),
        ));
    }
    let second = second_moment_value(&d);
    let closed = second_moment_closed_form(n, &p);
    report.checks.push(Check::new(
        "second_moment_identity",
        second == closed,
        (second != closed).then(|| format!("E(N-1)^2 = {second}, expected {closed}")),
    ));
    match chebyshev_gap(&d, &p) {
        Ok(gap) => {
            report.checks.push(Check::new(
                "chebyshev_gap_nonnegative",
                !gap.is_negative(),
                gap.is_negative().then(|| format!("gap {gap} is negative")),
            ));
            report.chebyshev_gap = Some(gap);
        }
        Err(e) => report.checks.push(Check::new("chebyshev_gap_nonnegative", false, Some(e.to_string()))),
    }
    report.second_moment = Some(second);
    report.second_moment_closed_form = Some(closed);
    report.sample = Some(sample(&d, trials, seed).map_err(usage)?);
    report.p = Some(p);
    report.all_passed = report.checks.iter().all(|c| c.pass);
    let code = if report.all_passed { 0 } else { 1 };
    Outcome::json(&report, code)
}
