//! Second-moment identity, the Chebyshev–Markov gap, and a seeded sampler.
//!
//! For any pairwise independent events with marginal `p`,
//! `E(N-1)² = 1 - n p (1 - (n-1) p)` regardless of the higher-order
//! structure, and `P(N != 1) = P((N-1)² >= 1) <= E(N-1)²`. The gap in that
//! inequality is zero exactly when `N` never exceeds 2.

use num_traits::ToPrimitive;
use rand::seq::index;
use rand::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::construction::{
    occupancy_probability, verify_r_independence, SymmetricDistribution,
};
use crate::error::VerifyError;
use crate::exactmath::{binomial_rational, Rational};

/// `E(N-1)² = Σ_m (m-1)² C(n,m) x_m`.
pub fn second_moment_value(d: &SymmetricDistribution) -> Rational {
    let n = d.n();
    d.levels()
        .iter()
        .enumerate()
        .map(|(m, x)| {
            let dev = m as i64 - 1;
            Rational::from(dev * dev) * binomial_rational(n, m as i64) * x
        })
        .sum()
}

/// `1 - n p (1 - (n-1) p)`, the value `E(N-1)²` takes under any pairwise
/// independent distribution.
pub fn second_moment_closed_form(n: u32, p: &Rational) -> Rational {
    let inner = Rational::one() - Rational::from(n - 1) * p;
    Rational::one() - Rational::from(n) * p * inner
}

/// `E(N-1)² - P(N != 1)`; requires `d` to be pairwise independent with
/// marginal `p`.
pub fn chebyshev_gap(d: &SymmetricDistribution, p: &Rational) -> Result<Rational, VerifyError> {
    let order = d.n().min(2);
    let pairwise = verify_r_independence(d, order, p).unwrap_or(false);
    if !pairwise {
        return Err(VerifyError::NotPairwiseIndependent { p: p.clone() });
    }
    let not_one = Rational::one() - occupancy_probability(d, 1).expect("n >= 1");
    Ok(second_moment_value(d) - not_one)
}

/// Empirical frequencies from repeated draws of a symmetric distribution.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SampleReport {
    pub trials: u64,
    pub seed: u64,
    pub n: u32,
    /// Total occurrences over all events; the mean marginal frequency is
    /// `marginal_count / (n · trials)`.
    pub marginal_count: u64,
    pub first_event_count: u64,
    /// Joint occurrences of `A1` and `A2`; absent for `n = 1`.
    pub pair_count: Option<u64>,
    pub exactly_one_count: u64,
    pub marginal: String,
    pub first_event: String,
    pub pair: Option<String>,
    pub exactly_one: String,
}

impl SampleReport {
    pub fn marginal_estimate(&self) -> Rational {
        Rational::new(self.marginal_count, u64::from(self.n) * self.trials)
    }

    pub fn first_event_estimate(&self) -> Rational {
        Rational::new(self.first_event_count, self.trials)
    }

    pub fn pair_estimate(&self) -> Option<Rational> {
        self.pair_count.map(|c| Rational::new(c, self.trials))
    }

    pub fn exactly_one_estimate(&self) -> Rational {
        Rational::new(self.exactly_one_count, self.trials)
    }
}

/// Draws `trials` outcomes: a level `m` with probability `C(n,m) x_m`, then a
/// uniformly random set of `m` occurring events.
///
/// The generator is ChaCha8 seeded through `seed_from_u64`, so reports are
/// identical across platforms for the same `(d, trials, seed)`. Level
/// selection compares a uniform 64-bit word against exact cumulative
/// thresholds `ceil(F_m · 2^64)`.
pub fn sample(d: &SymmetricDistribution, trials: u64, seed: u64) -> Result<SampleReport, VerifyError> {
    if trials == 0 {
        return Err(VerifyError::NoTrials);
    }
    let n = d.n();
    let thresholds = level_thresholds(d);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);

    let (mut marginal_count, mut first_event_count, mut pair_count, mut exactly_one_count) =
        (0u64, 0u64, 0u64, 0u64);
    for _ in 0..trials {
        let u = u128::from(rng.next_u64());
        let m = thresholds.iter().position(|&t| u < t).expect("last threshold is 2^64");
        let chosen = index::sample(&mut rng, n as usize, m);
        let (mut a1, mut a2) = (false, false);
        for j in chosen.iter() {
            a1 |= j == 0;
            a2 |= j == 1;
        }
        marginal_count += m as u64;
        first_event_count += u64::from(a1);
        pair_count += u64::from(a1 && a2);
        exactly_one_count += u64::from(m == 1);
    }

    let pair_count = (n >= 2).then_some(pair_count);
    Ok(SampleReport {
        trials,
        seed,
        n,
        marginal_count,
        first_event_count,
        pair_count,
        exactly_one_count,
        marginal: format!("{marginal_count}/{}", u64::from(n) * trials),
        first_event: format!("{first_event_count}/{trials}"),
        pair: pair_count.map(|c| format!("{c}/{trials}")),
        exactly_one: format!("{exactly_one_count}/{trials}"),
    })
}

fn level_thresholds(d: &SymmetricDistribution) -> Vec<u128> {
    let scale = Rational::from(1u128 << 64);
    let mut cumulative = Rational::zero();
    (0..=d.n())
        .map(|m| {
            cumulative += occupancy_probability(d, m).expect("m <= n");
            (&cumulative * &scale).ceil().to_u128().expect("threshold <= 2^64")
        })
        .collect()
}
