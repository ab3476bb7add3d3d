//! Closed-form "exactly one" probabilities.
//!
//! For `n` events of common probability `p`:
//!
//! * under full independence, `P(N = 1) = n p q^(n-1)` with `q = 1 - p`;
//! * under pairwise independence only, the sharp minimum of `P(N = 1)` is
//!   `n p (1 - (n-1) p)_+`.
//!
//! The second bound drops to zero as soon as `p >= 1/(n-1)`, which is where
//! the two regimes part ways.

use num_bigint::BigInt;
use num_traits::One;
use serde::Serialize;

use crate::error::ParameterError;
use crate::exactmath::{binomial, serialize_display, Rational};

/// Number of events and their common probability.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BoundInput {
    n: u32,
    p: Rational,
}

impl BoundInput {
    pub fn new(n: u32, p: Rational) -> Result<Self, ParameterError> {
        if n < 1 {
            return Err(ParameterError::TooFewEvents { n, min: 1 });
        }
        if !p.is_probability() {
            return Err(ParameterError::ProbabilityOutOfRange(p));
        }
        Ok(BoundInput { n, p })
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn p(&self) -> &Rational {
        &self.p
    }

    /// `1 - p`.
    pub fn q(&self) -> Rational {
        Rational::one() - &self.p
    }
}

/// Sharp lower bound `n p (1 - (n-1) p)_+` on `P(N = 1)` for pairwise
/// independent events.
pub fn lower_bound_exactly_one(input: &BoundInput) -> Rational {
    let n = Rational::from(input.n);
    let inner = Rational::one() - (&n - Rational::one()) * input.p();
    n * input.p() * inner.positive_part()
}

/// `n p q^(n-1)`: the value of `P(N = 1)` when the events are independent.
pub fn independent_exactly_one(input: &BoundInput) -> Rational {
    Rational::from(input.n) * input.p() * input.q().pow(input.n - 1)
}

/// Maximizer and maximum of `p -> n p q^(n-1)`: `(1/n, (1 - 1/n)^(n-1))`.
pub fn independent_max(n: u32) -> Result<(Rational, Rational), ParameterError> {
    if n < 1 {
        return Err(ParameterError::TooFewEvents { n, min: 1 });
    }
    let argmax = Rational::new(1, n);
    let value = (Rational::one() - &argmax).pow(n - 1);
    Ok((argmax, value))
}

/// Sharp lower bound on `P(N = n-1)`: the exactly-one bound with `p` and `q`
/// exchanged.
pub fn corollary_bound(input: &BoundInput) -> Rational {
    let flipped = BoundInput { n: input.n, p: input.q() };
    lower_bound_exactly_one(&flipped)
}

/// How the `2^n` product equations `P(∩_J A_j) = Π_J P(A_j)` split up.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ConstraintCounts {
    /// All subsets `J` of `[n]`.
    #[serde(serialize_with = "serialize_display")]
    pub total: BigInt,
    /// `|J| <= 1`; these hold for any events.
    #[serde(serialize_with = "serialize_display")]
    pub trivial: BigInt,
    /// `|J| = 2`.
    #[serde(serialize_with = "serialize_display")]
    pub pairwise: BigInt,
    /// `|J| >= 3`; required by full but not by pairwise independence.
    #[serde(serialize_with = "serialize_display")]
    pub extra: BigInt,
}

pub fn independence_constraint_counts(n: u32) -> Result<ConstraintCounts, ParameterError> {
    if n < 1 {
        return Err(ParameterError::TooFewEvents { n, min: 1 });
    }
    let total = BigInt::one() << n;
    let trivial = BigInt::from(n) + 1u32;
    let pairwise = binomial(n, 2);
    let extra = &total - &trivial - &pairwise;
    Ok(ConstraintCounts { total, trivial, pairwise, extra })
}
