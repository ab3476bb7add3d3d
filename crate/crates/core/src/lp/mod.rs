//! Exact linear programs over event probabilities.
//!
//! Two formulations are provided:
//!
//! * the **moment LP** over exchangeable distributions, with variables
//!   `x_0..x_n` and one constraint per intersection size `t <= r`;
//! * the **atom LP** with one variable per atom `C_J` (so `2^n` variables),
//!   accepting arbitrary event constraints.
//!
//! Both are solved by the same exact simplex core, which returns a certificate
//! with every answer (dual multipliers, a Farkas row, or a recession ray) that
//! [`LpResult::verify`] checks with exact arithmetic.
//!
//! The moment LP is not a relaxation. Averaging a feasible atom distribution
//! over all `n!` relabelings of the events preserves every constraint and every
//! `P(N = m)`, because both are invariant under relabeling and linear in the
//! atom masses; the average is exchangeable. So the two formulations have the
//! same optimum whenever the constraints are permutation invariant.
//!
//! "r-wise independent" is taken to mean that every sub-family of *at most*
//! `r` events is independent, so all product equations with `|J| <= r` are
//! imposed, not only those with `|J| = r`. Contradictory constraint sets are
//! reported as infeasible with a Farkas certificate; nothing is dropped or
//! repaired.

mod simplex;

use serde::{Deserialize, Serialize};

use crate::construction::SymmetricDistribution;
use crate::error::{CertificateError, EventError, LpError, ParameterError};
use crate::events::{
    atoms, compile_to_atoms, parse_event, AtomDistribution, EventExpr, MAX_ATOM_EVENTS,
};
use crate::exactmath::{binomial_rational, Rational};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Sense {
    #[serde(rename = "min")]
    Minimize,
    #[serde(rename = "max")]
    Maximize,
}

impl std::str::FromStr for Sense {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "min" => Ok(Sense::Minimize),
            "max" => Ok(Sense::Maximize),
            other => Err(format!("unknown sense {other:?}, expected \"min\" or \"max\"")),
        }
    }
}

/// `optimize objective·x  subject to  matrix·x = rhs, x >= 0`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LinearProgram {
    pub sense: Sense,
    pub objective: Vec<Rational>,
    pub matrix: Vec<Vec<Rational>>,
    pub rhs: Vec<Rational>,
}

impl LinearProgram {
    pub fn new(
        sense: Sense,
        objective: Vec<Rational>,
        matrix: Vec<Vec<Rational>>,
        rhs: Vec<Rational>,
    ) -> Result<Self, LpError> {
        let lp = LinearProgram { sense, objective, matrix, rhs };
        lp.check_dimensions()?;
        Ok(lp)
    }

    pub fn num_vars(&self) -> usize {
        self.objective.len()
    }

    pub fn num_constraints(&self) -> usize {
        self.matrix.len()
    }

    fn check_dimensions(&self) -> Result<(), LpError> {
        if self.rhs.len() != self.matrix.len() {
            return Err(LpError::DimensionMismatch(format!(
                "{} rows but {} right-hand sides",
                self.matrix.len(),
                self.rhs.len()
            )));
        }
        if let Some((i, row)) =
            self.matrix.iter().enumerate().find(|(_, r)| r.len() != self.objective.len())
        {
            return Err(LpError::DimensionMismatch(format!(
                "row {i} has {} entries, objective has {}",
                row.len(),
                self.objective.len()
            )));
        }
        Ok(())
    }

    fn objective_value(&self, x: &[Rational]) -> Rational {
        self.objective.iter().zip(x).map(|(c, v)| c * v).sum()
    }

    fn row_value(&self, i: usize, x: &[Rational]) -> Rational {
        self.matrix[i].iter().zip(x).map(|(a, v)| a * v).sum()
    }

    fn column_value(&self, j: usize, y: &[Rational]) -> Rational {
        self.matrix.iter().zip(y).map(|(row, v)| &row[j] * v).sum()
    }
}

/// Outcome of [`simplex_solve`] together with its certificate.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "status", rename_all = "lowercase")]
pub enum LpResult {
    /// `dual` satisfies `Aᵀy <= c` (minimize) or `Aᵀy >= c` (maximize) and
    /// `bᵀy = value`.
    Optimal {
        value: Rational,
        primal: Vec<Rational>,
        dual: Vec<Rational>,
    },
    /// `Aᵀy >= 0` and `bᵀy < 0`, so no `x >= 0` solves `Ax = b`.
    Infeasible { farkas: Vec<Rational> },
    /// `primal` is feasible and `primal + λ·ray` stays feasible while the
    /// objective improves without bound.
    Unbounded {
        primal: Vec<Rational>,
        ray: Vec<Rational>,
    },
}

impl LpResult {
    pub fn value(&self) -> Option<&Rational> {
        match self {
            LpResult::Optimal { value, .. } => Some(value),
            _ => None,
        }
    }

    pub fn primal(&self) -> Option<&[Rational]> {
        match self {
            LpResult::Optimal { primal, .. } | LpResult::Unbounded { primal, .. } => Some(primal),
            LpResult::Infeasible { .. } => None,
        }
    }

    pub fn is_optimal(&self) -> bool {
        matches!(self, LpResult::Optimal { .. })
    }

    pub fn is_infeasible(&self) -> bool {
        matches!(self, LpResult::Infeasible { .. })
    }

    /// Checks the certificate against `lp` in exact arithmetic.
    pub fn verify(&self, lp: &LinearProgram) -> Result<(), CertificateError> {
        match self {
            LpResult::Optimal { value, primal, dual } => {
                check_primal(lp, primal)?;
                let actual = lp.objective_value(primal);
                if *value != actual {
                    return Err(CertificateError::ValueMismatch {
                        reported: value.clone(),
                        actual,
                    });
                }
                check_len(dual.len(), lp.num_constraints())?;
                for j in 0..lp.num_vars() {
                    let aty = lp.column_value(j, dual);
                    let ok = match lp.sense {
                        Sense::Minimize => aty <= lp.objective[j],
                        Sense::Maximize => aty >= lp.objective[j],
                    };
                    if !ok {
                        return Err(CertificateError::DualInfeasible(j));
                    }
                }
                let dual_value: Rational = lp.rhs.iter().zip(dual).map(|(b, y)| b * y).sum();
                if dual_value != actual {
                    return Err(CertificateError::DualityGap { primal: actual, dual: dual_value });
                }
                Ok(())
            }
            LpResult::Infeasible { farkas } => {
                check_len(farkas.len(), lp.num_constraints())?;
                if let Some(j) =
                    (0..lp.num_vars()).find(|&j| lp.column_value(j, farkas).is_negative())
                {
                    return Err(CertificateError::FarkasColumn(j));
                }
                let separation: Rational = lp.rhs.iter().zip(farkas).map(|(b, y)| b * y).sum();
                if !separation.is_negative() {
                    return Err(CertificateError::FarkasRhs);
                }
                Ok(())
            }
            LpResult::Unbounded { primal, ray } => {
                check_primal(lp, primal)?;
                if ray.len() != lp.num_vars()
                    || ray.iter().any(Rational::is_negative)
                    || (0..lp.num_constraints()).any(|i| !lp.row_value(i, ray).is_zero())
                {
                    return Err(CertificateError::InvalidRay);
                }
                let slope = lp.objective_value(ray);
                let improving = match lp.sense {
                    Sense::Minimize => slope.is_negative(),
                    Sense::Maximize => slope.is_positive(),
                };
                if !improving {
                    return Err(CertificateError::InvalidRay);
                }
                Ok(())
            }
        }
    }
}

fn check_len(got: usize, expected: usize) -> Result<(), CertificateError> {
    if got != expected {
        return Err(CertificateError::CertificateLength { expected, got });
    }
    Ok(())
}

fn check_primal(lp: &LinearProgram, x: &[Rational]) -> Result<(), CertificateError> {
    if x.len() != lp.num_vars() {
        return Err(CertificateError::PrimalLength { expected: lp.num_vars(), got: x.len() });
    }
    if let Some(j) = x.iter().position(Rational::is_negative) {
        return Err(CertificateError::NegativePrimal(j));
    }
    if let Some(i) = (0..lp.num_constraints()).find(|&i| lp.row_value(i, x) != lp.rhs[i]) {
        return Err(CertificateError::PrimalInfeasible(i));
    }
    Ok(())
}

/// Solves `lp` exactly. The pivot sequence is deterministic.
pub fn simplex_solve(lp: &LinearProgram) -> Result<LpResult, LpError> {
    simplex::solve(lp)
}

/// Optimize `P(N = m)` over distributions of `n` exchangeable events whose
/// every sub-family of at most `r` events is independent with marginal `p`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MomentProblem {
    n: u32,
    r: u32,
    target: u32,
    p: Rational,
    sense: Sense,
}

impl MomentProblem {
    pub fn new(n: u32, r: u32, target: u32, p: Rational, sense: Sense) -> Result<Self, ParameterError> {
        if n < 1 {
            return Err(ParameterError::TooFewEvents { n, min: 1 });
        }
        if r < 1 || r > n {
            return Err(ParameterError::OrderOutOfRange { r, n });
        }
        if target > n {
            return Err(ParameterError::IndexOutOfRange { index: target, max: n });
        }
        if !p.is_probability() {
            return Err(ParameterError::ProbabilityOutOfRange(p));
        }
        Ok(MomentProblem { n, r, target, p, sense })
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn r(&self) -> u32 {
        self.r
    }

    pub fn target(&self) -> u32 {
        self.target
    }

    pub fn p(&self) -> &Rational {
        &self.p
    }

    pub fn sense(&self) -> Sense {
        self.sense
    }
}

/// Variables `x_0..x_n`. Row `t` (for `t = 0..=r`) reads
/// `Σ_m C(n-t, m-t) x_m = p^t`; row 0 is normalization.
pub fn build_symmetric_lp(mp: &MomentProblem) -> LinearProgram {
    let n = mp.n;
    let matrix = (0..=mp.r)
        .map(|t| {
            (0..=n)
                .map(|m| binomial_rational(n - t, i64::from(m) - i64::from(t)))
                .collect()
        })
        .collect();
    let rhs = (0..=mp.r).map(|t| mp.p.pow(t)).collect();
    let mut objective = vec![Rational::zero(); n as usize + 1];
    objective[mp.target as usize] = binomial_rational(n, mp.target.into());
    LinearProgram { sense: mp.sense, objective, matrix, rhs }
}

/// Exact optimum of `P(N = m)` under `r`-wise independence.
pub fn solve_moment_problem(mp: &MomentProblem) -> Result<LpResult, LpError> {
    simplex_solve(&build_symmetric_lp(mp))
}

/// Optimize `P(target)` over all distributions on the atoms of `n` events
/// subject to prescribed event probabilities.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GeneralProblem {
    n: u32,
    constraints: Vec<(EventExpr, Rational)>,
    target: EventExpr,
    sense: Sense,
}

impl GeneralProblem {
    pub fn new(
        n: u32,
        constraints: Vec<(EventExpr, Rational)>,
        target: EventExpr,
        sense: Sense,
    ) -> Result<Self, LpError> {
        if !(1..=MAX_ATOM_EVENTS).contains(&n) {
            return Err(LpError::TooManyEvents { n, max: MAX_ATOM_EVENTS });
        }
        for (event, p) in &constraints {
            event.validate(n)?;
            if !p.is_probability() {
                return Err(ParameterError::ProbabilityOutOfRange(p.clone()).into());
            }
        }
        target.validate(n)?;
        Ok(GeneralProblem { n, constraints, target, sense })
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn constraints(&self) -> &[(EventExpr, Rational)] {
        &self.constraints
    }

    pub fn target(&self) -> &EventExpr {
        &self.target
    }

    pub fn sense(&self) -> Sense {
        self.sense
    }
}

/// JSON shape of a [`GeneralProblem`]; events are expression strings.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GeneralProblemFile {
    pub n: u32,
    #[serde(default)]
    pub constraints: Vec<ConstraintEntry>,
    pub target: String,
    pub sense: Sense,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConstraintEntry {
    pub event: String,
    pub p: Rational,
}

impl TryFrom<&GeneralProblemFile> for GeneralProblem {
    type Error = LpError;

    fn try_from(file: &GeneralProblemFile) -> Result<Self, Self::Error> {
        if file.n < 1 || file.n > MAX_ATOM_EVENTS {
            return Err(LpError::TooManyEvents { n: file.n, max: MAX_ATOM_EVENTS });
        }
        let constraints = file
            .constraints
            .iter()
            .map(|c| Ok((parse_event(&c.event, file.n)?, c.p.clone())))
            .collect::<Result<Vec<_>, EventError>>()?;
        let target = parse_event(&file.target, file.n)?;
        GeneralProblem::new(file.n, constraints, target, file.sense)
    }
}

/// One variable per atom bitmask. Row 0 is normalization; row `i` is the
/// indicator of the atoms of constraint `i-1`.
pub fn build_atom_lp(gp: &GeneralProblem) -> LinearProgram {
    let n = gp.n;
    let mut matrix = vec![vec![Rational::one(); 1 << n]];
    let mut rhs = vec![Rational::one()];
    for (event, p) in &gp.constraints {
        matrix.push(compile_to_atoms(event, n).indicator());
        rhs.push(p.clone());
    }
    let objective = compile_to_atoms(&gp.target, n).indicator();
    LinearProgram { sense: gp.sense, objective, matrix, rhs }
}

pub fn solve_general(gp: &GeneralProblem) -> Result<LpResult, LpError> {
    simplex_solve(&build_atom_lp(gp))
}

/// The optimal atom distribution of a solved general problem.
pub fn optimal_atoms(n: u32, result: &LpResult) -> Option<AtomDistribution> {
    match result {
        LpResult::Optimal { primal, .. } => AtomDistribution::new(n, primal.clone()).ok(),
        _ => None,
    }
}

/// The optimal level weights of a solved moment problem.
pub fn optimal_levels(n: u32, result: &LpResult) -> Option<SymmetricDistribution> {
    match result {
        LpResult::Optimal { primal, .. } => SymmetricDistribution::new(n, primal.clone()).ok(),
        _ => None,
    }
}

/// `P(∩_J A_j) = p^|J|` for every nonempty `J` with `|J| <= r`.
pub fn r_independence_constraints(n: u32, r: u32, p: &Rational) -> Vec<(EventExpr, Rational)> {
    let mut subsets: Vec<u32> = atoms(n)
        .map(|a| a.0)
        .filter(|&mask| mask != 0 && mask.count_ones() <= r)
        .collect();
    subsets.sort_by_key(|&mask| (mask.count_ones(), mask));
    subsets
        .into_iter()
        .map(|mask| {
            let members = (1..=n).filter(move |&j| mask >> (j - 1) & 1 == 1);
            (EventExpr::all_of(members), p.pow(mask.count_ones()))
        })
        .collect()
}

/// `P(A_j) = p` and `P(A_i ∩ A_j) = p²` for all `i < j`.
pub fn pairwise_constraints(n: u32, p: &Rational) -> Vec<(EventExpr, Rational)> {
    r_independence_constraints(n, 2.min(n), p)
}

/// Averages an atom distribution over all relabelings of the events:
/// `x_m = (mass of atoms with m events) / C(n, m)`.
pub fn symmetrize(a: &AtomDistribution) -> SymmetricDistribution {
    let n = a.n();
    let mut mass = vec![Rational::zero(); n as usize + 1];
    for atom in atoms(n) {
        mass[atom.count() as usize] += a.probability(atom);
    }
    let levels = mass
        .into_iter()
        .enumerate()
        .map(|(m, w)| w / binomial_rational(n, m as i64))
        .collect();
    SymmetricDistribution::new(n, levels).expect("averaging keeps mass nonnegative and total 1")
}
