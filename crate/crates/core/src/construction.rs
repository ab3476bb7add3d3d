//! Exchangeable distributions over `n` events and the extremal one that
//! attains the pairwise lower bound.
//!
//! An exchangeable distribution gives every atom `C_J` with `|J| = m` the same
//! probability `x_m`. It is pairwise independent with marginal `p` iff
//!
//! ```text
//! Σ_m C(n, m)     x_m = 1
//! Σ_m C(n-1, m-1) x_m = p
//! Σ_m C(n-2, m-2) x_m = p²
//! ```
//!
//! The extremal distribution puts mass only on levels `0`, `k` and `k+1`,
//! where `k` is chosen so that `(k-1)/(n-1) <= p <= k/(n-1)`.

use serde::{Deserialize, Serialize};

use crate::error::{DistributionError, ParameterError};
use crate::exactmath::{binomial_rational, Rational};

/// Level weights `x_0..x_n` of an exchangeable distribution on `2^[n]`.
///
/// `x_m` is the probability of each single atom with exactly `m` events
/// occurring, not of the whole level.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SymmetricDistribution {
    n: u32,
    levels: Vec<Rational>,
}

/// Serialized form, accepted without validation.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LevelsFile {
    pub n: u32,
    pub levels: Vec<Rational>,
}

impl SymmetricDistribution {
    /// Validates nonnegativity and `Σ C(n,m) x_m = 1`.
    pub fn new(n: u32, levels: Vec<Rational>) -> Result<Self, DistributionError> {
        if let Some(violation) = Self::violations(n, &levels).into_iter().next() {
            return Err(violation);
        }
        Ok(SymmetricDistribution { n, levels })
    }

    /// Every invariant violation of a candidate level sequence, in a fixed
    /// order: count, then negative levels, then normalization.
    pub fn violations(n: u32, levels: &[Rational]) -> Vec<DistributionError> {
        let expected = n as usize + 1;
        if levels.len() != expected {
            return vec![DistributionError::LevelCount { n, expected, got: levels.len() }];
        }
        let mut out: Vec<DistributionError> = levels
            .iter()
            .enumerate()
            .filter(|(_, x)| x.is_negative())
            .map(|(m, x)| DistributionError::NegativeLevel { level: m as u32, value: x.clone() })
            .collect();
        let total = total_mass(n, levels);
        if total != Rational::one() {
            out.push(DistributionError::Normalization(total));
        }
        out
    }

    /// Point mass on level `m` spread uniformly over its `C(n, m)` atoms.
    pub fn point_mass(n: u32, m: u32) -> Result<Self, ParameterError> {
        if m > n {
            return Err(ParameterError::IndexOutOfRange { index: m, max: n });
        }
        let mut levels = vec![Rational::zero(); n as usize + 1];
        levels[m as usize] = Rational::one() / binomial_rational(n, m.into());
        Ok(SymmetricDistribution { n, levels })
    }

    /// Fully independent events: `x_m = p^m q^(n-m)`.
    pub fn binomial(n: u32, p: &Rational) -> Result<Self, ParameterError> {
        check_probability(p)?;
        let q = Rational::one() - p;
        let levels = (0..=n).map(|m| p.pow(m) * q.pow(n - m)).collect();
        Ok(SymmetricDistribution { n, levels })
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn levels(&self) -> &[Rational] {
        &self.levels
    }

    pub fn into_file(self) -> LevelsFile {
        LevelsFile { n: self.n, levels: self.levels }
    }
}

impl TryFrom<LevelsFile> for SymmetricDistribution {
    type Error = DistributionError;

    fn try_from(file: LevelsFile) -> Result<Self, Self::Error> {
        SymmetricDistribution::new(file.n, file.levels)
    }
}

fn total_mass(n: u32, levels: &[Rational]) -> Rational {
    levels
        .iter()
        .enumerate()
        .map(|(m, x)| binomial_rational(n, m as i64) * x)
        .sum()
}

fn check_probability(p: &Rational) -> Result<(), ParameterError> {
    if p.is_probability() {
        Ok(())
    } else {
        Err(ParameterError::ProbabilityOutOfRange(p.clone()))
    }
}

fn check_pair(n: u32, p: &Rational) -> Result<(), ParameterError> {
    if n < 2 {
        return Err(ParameterError::TooFewEvents { n, min: 2 });
    }
    check_probability(p)
}

/// Smallest `k` in `1..=n-1` with `(k-1)/(n-1) <= p <= k/(n-1)`.
pub fn select_level(n: u32, p: &Rational) -> Result<u32, ParameterError> {
    check_pair(n, p)?;
    let scaled = Rational::from(n - 1) * p;
    let k: u32 = scaled.ceil().try_into().expect("ceil of p(n-1) fits in u32");
    Ok(k.max(1))
}

fn is_admissible(n: u32, p: &Rational, k: u32) -> bool {
    if k < 1 || k > n - 1 {
        return false;
    }
    let scaled = Rational::from(n - 1) * p;
    Rational::from(k - 1) <= scaled && scaled <= Rational::from(k)
}

/// The extremal distribution at the smallest admissible level.
pub fn construct_extremal(n: u32, p: &Rational) -> Result<SymmetricDistribution, ParameterError> {
    let k = select_level(n, p)?;
    construct_with_level(n, p, k)
}

/// The extremal distribution built at an explicit level `k`. At boundary
/// values `p = k/(n-1)` both neighbouring levels are admissible and give the
/// same weights.
pub fn construct_with_level(
    n: u32,
    p: &Rational,
    k: u32,
) -> Result<SymmetricDistribution, ParameterError> {
    check_pair(n, p)?;
    if !is_admissible(n, p, k) {
        return Err(ParameterError::InadmissibleLevel { n, p: p.clone(), k });
    }
    let np = Rational::from(n) * p;
    let n_minus_1_p = Rational::from(n - 1) * p;
    let kr = Rational::from(k);
    let k1 = Rational::from(k + 1);

    let x_k = &np / &kr * (&kr - &n_minus_1_p) / binomial_rational(n, k.into());
    let x_k1 = &np / &k1 * (&n_minus_1_p - Rational::from(k - 1))
        / binomial_rational(n, (k + 1).into());

    let mut levels = vec![Rational::zero(); n as usize + 1];
    levels[k as usize] = x_k;
    levels[k as usize + 1] = x_k1;
    levels[0] = Rational::one() - extremal_mass(n, p, k);
    Ok(SymmetricDistribution { n, levels })
}

/// `s = n p (2k - (n-1) p) / (k (k+1))`, the mass the extremal
/// distribution places off level 0.
pub fn extremal_mass(n: u32, p: &Rational, k: u32) -> Rational {
    let np = Rational::from(n) * p;
    let numer = np * (Rational::from(2 * k) - Rational::from(n - 1) * p);
    numer / Rational::from(u64::from(k) * u64::from(k + 1))
}

/// `P(N = m) = C(n, m) x_m`.
pub fn occupancy_probability(d: &SymmetricDistribution, m: u32) -> Result<Rational, ParameterError> {
    if m > d.n {
        return Err(ParameterError::IndexOutOfRange { index: m, max: d.n });
    }
    Ok(binomial_rational(d.n, m.into()) * &d.levels[m as usize])
}

/// Probability that `t` specified events all occur:
/// `Σ_{m>=t} C(n-t, m-t) x_m`.
pub fn intersection_probability(
    d: &SymmetricDistribution,
    t: u32,
) -> Result<Rational, ParameterError> {
    if t > d.n {
        return Err(ParameterError::IndexOutOfRange { index: t, max: d.n });
    }
    Ok(intersection_sum(d.n, &d.levels, t))
}

pub(crate) fn intersection_sum(n: u32, levels: &[Rational], t: u32) -> Rational {
    (t..=n)
        .map(|m| binomial_rational(n - t, i64::from(m - t)) * &levels[m as usize])
        .sum()
}

/// True iff every `t`-wise intersection has probability `p^t` for
/// `t = 1..=r`.
pub fn verify_r_independence(
    d: &SymmetricDistribution,
    r: u32,
    p: &Rational,
) -> Result<bool, ParameterError> {
    if r < 1 || r > d.n {
        return Err(ParameterError::OrderOutOfRange { r, n: d.n });
    }
    Ok((1..=r).all(|t| intersection_sum(d.n, &d.levels, t) == p.pow(t)))
}

/// Exchange occurrences and non-occurrences: `x'_m = x_(n-m)`.
pub fn reflect(d: &SymmetricDistribution) -> SymmetricDistribution {
    let mut levels = d.levels.clone();
    levels.reverse();
    SymmetricDistribution { n: d.n, levels }
}
