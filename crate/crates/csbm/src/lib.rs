//! Laboratory for exact community recovery in the two-community stochastic
//! block model with colored edges.
//!
//! A graph on `n` vertices is split into two planted communities of size
//! `n/2`. Every vertex pair draws one outcome from `{color 1..m, no edge}`:
//! within a community the color probabilities are `p_i = α_i ln n / n`,
//! across communities `q_i = β_i ln n / n`. The crate provides
//!
//! * [`model`] — validated parameters, decoder weights, and divergence
//!   functionals (`Σ(√α_i − √β_i)²`, squared Hellinger distance),
//! * [`sampler`] — seeded, order-independent graph generation plus the
//!   edge-count statistics the decoder and the bounds consume,
//! * [`decoder`] — exhaustive maximum-likelihood decoding over balanced
//!   bipartitions, swap refinement, and per-vertex failure events,
//! * [`ldp`] — the pair-difference law, its log-MGF with the exact
//!   `C(θ)/D(θ)` expansion, the Cramér rate function, and closed-form
//!   probability bounds,
//! * [`oracle`] — independent brute-force ground truth (exhaustive argmax,
//!   exact convolution, Monte Carlo) used to validate everything else.

pub mod decoder;
pub mod ldp;
pub mod model;
pub mod oracle;
pub mod sampler;

#[cfg(test)]
pub(crate) mod test_support;

pub use decoder::{DecodeResult, FailureReport};
pub use ldp::{BoundReport, DiscreteLaw, RateResult};
pub use model::{DivergenceReport, ModelParams, Weights};
pub use sampler::{ColoredGraph, Community, Partition};
