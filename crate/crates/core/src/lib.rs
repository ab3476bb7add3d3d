//! Exact bounds on the probability that exactly one of `n` events occurs.
//!
//! Given events `A_1..A_n`, each of probability `p`, let `N` count how many
//! occur. Under full independence `P(N = 1) = n p (1-p)^(n-1)`. Under pairwise
//! independence alone the smallest possible value is `n p (1 - (n-1) p)_+`.
//! This crate computes both, builds an exchangeable distribution attaining the
//! pairwise minimum, and solves the underlying linear programs in exact
//! rational arithmetic, including generalizations to `r`-wise independence,
//! arbitrary occupancy targets and arbitrary event constraints.
//!
//! Modules:
//!
//! * [`exactmath`]: [`Rational`], binomial coefficients, parsing, rendering.
//! * [`bounds`]: closed forms.
//! * [`construction`]: exchangeable distributions and the extremal one.
//! * [`events`]: atoms, event expressions, atom distributions.
//! * [`lp`]: exact simplex, moment LPs, atom LPs.
//! * [`verify`]: second-moment identity, Chebyshev gap, sampling.
//! * [`figure`]: the `p = c/n` comparison table.

pub mod bounds;
pub mod construction;
pub mod error;
pub mod events;
pub mod exactmath;
pub mod figure;
pub mod lp;
pub mod verify;

pub use exactmath::Rational;
