//! Model parameters and divergence functionals.
//!
//! Everything downstream is parameterized by `(n, α, β)`: the edge
//! probabilities are `p_i = α_i ln n / n` within a community and
//! `q_i = β_i ln n / n` across, and the maximum-likelihood decoder weighs an
//! inner edge of color `i` by `w_i = ln(p_i/q_i) = ln(α_i/β_i)` (the
//! `ln n / n` factor cancels). Natural logarithm throughout; the recovery
//! threshold compares `Σ(√α_i − √β_i)²` against 2.

use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error, PartialEq)]
pub enum ParamsError {
    #[error("vertex count {0} is odd; communities must have equal size")]
    OddVertexCount(usize),
    #[error("vertex count {0} is below the minimum of 4")]
    VertexCountTooSmall(usize),
    #[error("color vectors are empty; at least one color is required")]
    NoColors,
    #[error("alpha has {alphas} entries but beta has {betas}")]
    LengthMismatch { alphas: usize, betas: usize },
    #[error("{name}[{index}] = {value} must be positive and finite")]
    NonpositiveRate {
        name: &'static str,
        index: usize,
        value: f64,
    },
    #[error("within-community edge mass Σp_i = {0} must stay below 1")]
    WithinMassTooLarge(f64),
    #[error("cross-community edge mass Σq_i = {0} must stay below 1")]
    CrossMassTooLarge(f64),
    #[error("alpha and beta are identical; at least one color must differ")]
    AllRatesEqual,
}

/// Validated model parameters together with the derived per-color edge
/// probabilities.
///
/// Immutable after construction; safe to share across worker threads.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawParams", into = "RawParams")]
pub struct ModelParams {
    n: usize,
    alphas: Vec<f64>,
    betas: Vec<f64>,
    p: Vec<f64>,
    q: Vec<f64>,
}

/// Wire form: `{"n": …, "alphas": […], "betas": […]}`.
#[derive(Debug, Clone, Serialize, Deserialize)]
struct RawParams {
    n: usize,
    alphas: Vec<f64>,
    betas: Vec<f64>,
}

impl TryFrom<RawParams> for ModelParams {
    type Error = ParamsError;

    fn try_from(raw: RawParams) -> Result<Self, Self::Error> {
        make_params(raw.n, raw.alphas, raw.betas)
    }
}

impl From<ModelParams> for RawParams {
    fn from(params: ModelParams) -> Self {
        RawParams {
            n: params.n,
            alphas: params.alphas,
            betas: params.betas,
        }
    }
}

/// Builds validated parameters; `p_i = α_i ln n / n` and `q_i = β_i ln n / n`
/// are derived here once.
pub fn make_params(n: usize, alphas: Vec<f64>, betas: Vec<f64>) -> Result<ModelParams, ParamsError> {
    if n % 2 != 0 {
        return Err(ParamsError::OddVertexCount(n));
    }
    if n < 4 {
        return Err(ParamsError::VertexCountTooSmall(n));
    }
    if alphas.is_empty() && betas.is_empty() {
        return Err(ParamsError::NoColors);
    }
    if alphas.len() != betas.len() {
        return Err(ParamsError::LengthMismatch {
            alphas: alphas.len(),
            betas: betas.len(),
        });
    }
    check_positive("alpha", &alphas)?;
    check_positive("beta", &betas)?;

    let scale = (n as f64).ln() / n as f64;
    let p: Vec<f64> = alphas.iter().map(|a| a * scale).collect();
    let q: Vec<f64> = betas.iter().map(|b| b * scale).collect();
    let p_star: f64 = p.iter().sum();
    let q_star: f64 = q.iter().sum();
    if p_star >= 1.0 {
        return Err(ParamsError::WithinMassTooLarge(p_star));
    }
    if q_star >= 1.0 {
        return Err(ParamsError::CrossMassTooLarge(q_star));
    }
    if alphas.iter().zip(&betas).all(|(a, b)| a == b) {
        return Err(ParamsError::AllRatesEqual);
    }

    Ok(ModelParams {
        n,
        alphas,
        betas,
        p,
        q,
    })
}

impl ModelParams {
    pub fn new(n: usize, alphas: Vec<f64>, betas: Vec<f64>) -> Result<Self, ParamsError> {
        make_params(n, alphas, betas)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Number of edge colors `m`.
    pub fn color_count(&self) -> usize {
        self.alphas.len()
    }

    pub fn alphas(&self) -> &[f64] {
        &self.alphas
    }

    pub fn betas(&self) -> &[f64] {
        &self.betas
    }

    /// Within-community color probabilities `p_i = α_i ln n / n`.
    pub fn p(&self) -> &[f64] {
        &self.p
    }

    /// Cross-community color probabilities `q_i = β_i ln n / n`.
    pub fn q(&self) -> &[f64] {
        &self.q
    }

    /// `α* = Σ α_i`.
    pub fn alpha_star(&self) -> f64 {
        self.alphas.iter().sum()
    }

    /// `β* = Σ β_i`.
    pub fn beta_star(&self) -> f64 {
        self.betas.iter().sum()
    }

    /// `Σ p_i`, the probability that a within-community pair is connected.
    pub fn p_star(&self) -> f64 {
        self.p.iter().sum()
    }

    /// `Σ q_i`.
    pub fn q_star(&self) -> f64 {
        self.q.iter().sum()
    }

    /// `ln n / n`, the common scale of all edge probabilities.
    pub fn log_scale(&self) -> f64 {
        (self.n as f64).ln() / self.n as f64
    }

    /// Decoder weights `w_i = ln(α_i/β_i)`; independent of `n`.
    pub fn weights(&self) -> Weights {
        Weights::from_rates(&self.alphas, &self.betas)
    }

    /// Divergence functionals of this parameter set.
    pub fn divergence_report(&self) -> DivergenceReport {
        let d_plus = divergence_sum(&self.alphas, &self.betas)
            .expect("validated params always have matching positive rates");
        let h2 = hellinger_sq(self);
        DivergenceReport {
            d_plus,
            hellinger_sq: h2,
            n_normalized: h2 * self.n as f64 / (self.n as f64).ln(),
        }
    }
}

/// Per-color ML score weights.
#[derive(Debug, Clone, PartialEq)]
pub struct Weights {
    values: Vec<f64>,
}

impl Weights {
    /// `w_i = ln(α_i/β_i)`; zero exactly when `α_i = β_i`.
    pub fn from_rates(alphas: &[f64], betas: &[f64]) -> Self {
        let values = alphas
            .iter()
            .zip(betas)
            .map(|(a, b)| if a == b { 0.0 } else { (a / b).ln() })
            .collect();
        Weights { values }
    }

    /// Arbitrary weight vector, for hand-built decoder instances.
    pub fn from_values(values: Vec<f64>) -> Self {
        Weights { values }
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }
}

impl std::ops::Index<usize> for Weights {
    type Output = f64;

    fn index(&self, i: usize) -> &f64 {
        &self.values[i]
    }
}

/// Divergence summary: `d_plus = Σ(√α_i − √β_i)²` decides recoverability
/// (threshold 2), `hellinger_sq` is the (m+1)-outcome squared Hellinger
/// distance between the within- and cross-pair laws, and `n_normalized`
/// is `hellinger_sq · n / ln n`, which tends to `d_plus` as `n` grows.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DivergenceReport {
    pub d_plus: f64,
    pub hellinger_sq: f64,
    pub n_normalized: f64,
}

/// `Σ(√α_i − √β_i)²` over matching positive vectors.
pub fn divergence_sum(alphas: &[f64], betas: &[f64]) -> Result<f64, ParamsError> {
    if alphas.len() != betas.len() {
        return Err(ParamsError::LengthMismatch {
            alphas: alphas.len(),
            betas: betas.len(),
        });
    }
    check_positive("alpha", alphas)?;
    check_positive("beta", betas)?;
    Ok(alphas
        .iter()
        .zip(betas)
        .map(|(a, b)| {
            let d = a.sqrt() - b.sqrt();
            d * d
        })
        .sum())
}

/// Squared Hellinger distance over the `m+1` pair outcomes
/// (each color plus "no edge"):
/// `Σ_{i=1..m}(√p_i − √q_i)² + (√(1−Σp) − √(1−Σq))²`.
pub fn hellinger_sq(params: &ModelParams) -> f64 {
    let colors: f64 = params
        .p()
        .iter()
        .zip(params.q())
        .map(|(p, q)| {
            let d = p.sqrt() - q.sqrt();
            d * d
        })
        .sum();
    let d = (1.0 - params.p_star()).sqrt() - (1.0 - params.q_star()).sqrt();
    colors + d * d
}

fn check_positive(name: &'static str, values: &[f64]) -> Result<(), ParamsError> {
    for (index, &value) in values.iter().enumerate() {
        if !(value > 0.0) || !value.is_finite() {
            return Err(ParamsError::NonpositiveRate { name, index, value });
        }
    }
    Ok(())
}
