//! Large-deviation machinery for the pair-difference variable.
//!
//! `Z − W` is the weighted contribution of one cross pair minus one within
//! pair: `W` takes value `w_k = ln(p_k/q_k)` with probability `p_k` (zero
//! otherwise), `Z` the same values with probability `q_k`. The difference
//! has the finite support law built by [`pair_diff_distribution`], whose
//! moment generating function expands exactly — not asymptotically — as
//!
//! ```text
//! E[e^{θ(Z−W)}] = 1 + C(θ)·(ln n / n) + D(θ)·(ln n / n)²
//! ```
//!
//! with closed-form `C(θ)`, `D(θ)` in the model constants `α, β`. The
//! Cramér rate function `I(a) = sup_θ (θa − ln E[e^{θX}])` is evaluated by
//! derivative bisection plus golden-section polish, and [`bounds`] turns it
//! into the explicit probability bounds used by the achievability and
//! converse arguments.

mod bounds;

pub use bounds::{
    chebyshev_tail, cramer_lower_bound, cramer_upper_bound, delta_complement_bound,
    ml_failure_union_bound, pnk_theoretical_bound, BoundFormula, BoundReport,
};

use crate::model::ModelParams;
use serde::Serialize;
use thiserror::Error;

/// θ range searched by the rate solver; beyond it `e^{θ·atom}` overflows
/// 64-bit floats for every admissible parameter set.
pub const THETA_BRACKET: f64 = 64.0;

/// Atom values closer than `1e-12·(1 + |v|)` are considered identical.
const MERGE_TOLERANCE: f64 = 1e-12;

/// Law probabilities must sum to 1 within this slack.
const PROB_SUM_TOLERANCE: f64 = 1e-12;

#[derive(Debug, Error, PartialEq)]
pub enum LdpError {
    #[error("law has no atoms with positive probability")]
    EmptyLaw,
    #[error("atom {index} has invalid value {value} or probability {prob}")]
    BadAtom { index: usize, value: f64, prob: f64 },
    #[error("law probabilities sum to {0}, not 1")]
    ProbSum(f64),
    #[error("θ = {theta} overflows the MGF for atom magnitude {max_abs}")]
    Overflow { theta: f64, max_abs: f64 },
    #[error("k = {k} out of range 1..={max}")]
    KOutOfRange { k: usize, max: usize },
    #[error("n = {n} is below {min}; iterated logarithms are not meaningful")]
    NTooSmall { n: usize, min: usize },
    #[error("epsilon must be positive; got {0}")]
    NonpositiveEpsilon(f64),
    #[error("variance must be nonnegative; got {0}")]
    NegativeVariance(f64),
    #[error("t must be positive; got {0}")]
    NonpositiveT(f64),
}

/// One support point of a finite discrete law.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Atom {
    pub value: f64,
    pub prob: f64,
}

/// Finite-support law with sorted, merged atoms and probabilities summing
/// to 1.
#[derive(Debug, Clone, PartialEq)]
pub struct DiscreteLaw {
    atoms: Vec<Atom>,
}

impl DiscreteLaw {
    /// Sorts, merges near-identical values, drops zero-probability atoms,
    /// and validates the total mass.
    pub fn from_atoms(raw: Vec<(f64, f64)>) -> Result<Self, LdpError> {
        for (index, &(value, prob)) in raw.iter().enumerate() {
            if !value.is_finite() || !prob.is_finite() || prob < 0.0 {
                return Err(LdpError::BadAtom { index, value, prob });
            }
        }
        let total: f64 = raw.iter().map(|&(_, p)| p).sum();
        if (total - 1.0).abs() > PROB_SUM_TOLERANCE {
            return Err(LdpError::ProbSum(total));
        }
        let mut sorted: Vec<(f64, f64)> = raw.into_iter().filter(|&(_, p)| p > 0.0).collect();
        if sorted.is_empty() {
            return Err(LdpError::EmptyLaw);
        }
        sorted.sort_by(|a, b| a.0.partial_cmp(&b.0).expect("finite values"));
        let mut atoms: Vec<Atom> = Vec::with_capacity(sorted.len());
        for (value, prob) in sorted {
            match atoms.last_mut() {
                Some(last) if (value - last.value).abs() <= merge_window(last.value, value) => {
                    last.prob += prob;
                }
                _ => atoms.push(Atom { value, prob }),
            }
        }
        Ok(DiscreteLaw { atoms })
    }

    pub fn atoms(&self) -> &[Atom] {
        &self.atoms
    }

    pub fn min_value(&self) -> f64 {
        self.atoms[0].value
    }

    pub fn max_value(&self) -> f64 {
        self.atoms[self.atoms.len() - 1].value
    }

    pub fn mean(&self) -> f64 {
        self.atoms.iter().map(|a| a.value * a.prob).sum()
    }

    pub fn variance(&self) -> f64 {
        let mean = self.mean();
        self.atoms
            .iter()
            .map(|a| (a.value - mean).powi(2) * a.prob)
            .sum()
    }

    /// Largest |value| over the support.
    pub fn max_abs_value(&self) -> f64 {
        self.min_value().abs().max(self.max_value().abs())
    }

    /// `ln E[e^{θX}]`, log-sum-exp stabilized; finite for every θ.
    pub fn log_mgf_at(&self, theta: f64) -> f64 {
        let shift_max = self
            .atoms
            .iter()
            .map(|a| theta * a.value + a.prob.ln())
            .fold(f64::NEG_INFINITY, f64::max);
        let sum: f64 = self
            .atoms
            .iter()
            .map(|a| (theta * a.value + a.prob.ln() - shift_max).exp())
            .sum();
        shift_max + sum.ln()
    }

    /// Mean and variance of the exponentially tilted law
    /// `e^{θx} p(x) / E[e^{θX}]`.
    pub fn tilted_moments(&self, theta: f64) -> (f64, f64) {
        let shift_max = self
            .atoms
            .iter()
            .map(|a| theta * a.value + a.prob.ln())
            .fold(f64::NEG_INFINITY, f64::max);
        let mut wsum = 0.0;
        let mut vsum = 0.0;
        for a in &self.atoms {
            let w = (theta * a.value + a.prob.ln() - shift_max).exp();
            wsum += w;
            vsum += w * a.value;
        }
        let mean = vsum / wsum;
        let var = self
            .atoms
            .iter()
            .map(|a| {
                let w = (theta * a.value + a.prob.ln() - shift_max).exp();
                w * (a.value - mean).powi(2)
            })
            .sum::<f64>()
            / wsum;
        (mean, var)
    }
}

fn merge_window(a: f64, b: f64) -> f64 {
    MERGE_TOLERANCE * (1.0 + a.abs().max(b.abs()))
}

/// The exact law of `Z − W` for one cross pair and one within pair.
///
/// Support: `0`; `+w_i` with probability `(1−Σp)q_i`; `−w_i` with
/// probability `p_i(1−Σq)`; `w_j − w_i` with probability `p_i q_j` for
/// `i ≠ j`; and `0` again with probability `Σ p_k q_k + (1−Σp)(1−Σq)`.
/// Values are built from the n-free weights `w_i = ln(α_i/β_i)` so equal
/// differences merge exactly.
pub fn pair_diff_distribution(params: &ModelParams) -> DiscreteLaw {
    let p = params.p();
    let q = params.q();
    let w = params.weights();
    let p_star = params.p_star();
    let q_star = params.q_star();
    let m = params.color_count();

    let mut raw = Vec::with_capacity(1 + 2 * m + m * m);
    let zero_mass: f64 =
        p.iter().zip(q).map(|(a, b)| a * b).sum::<f64>() + (1.0 - p_star) * (1.0 - q_star);
    raw.push((0.0, zero_mass));
    for i in 0..m {
        raw.push((w[i], (1.0 - p_star) * q[i]));
        raw.push((-w[i], p[i] * (1.0 - q_star)));
    }
    for i in 0..m {
        for j in 0..m {
            if i != j {
                raw.push((w[j] - w[i], p[i] * q[j]));
            }
        }
    }
    DiscreteLaw::from_atoms(raw).expect("pair-difference masses sum to 1 for valid params")
}

/// Log-MGF of `Z − W` at `θ`, with the exact expansion coefficients.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct LogMgf {
    /// `ln Σ prob·e^{θ·value}`, summed directly over the support.
    pub value: f64,
    /// `C(θ) = −α* − β* + Σ α_i e^{−θw_i} + β_i e^{θw_i}`.
    pub c_theta: f64,
    /// `D(θ)`, the coefficient of `(ln n / n)²`.
    pub d_theta: f64,
}

/// Evaluates the log-MGF of the pair difference two ways: directly over the
/// atoms (returned as `value`) and through the closed-form `C(θ)/D(θ)`
/// coefficients. `value = ln(1 + C(θ)·ln n/n + D(θ)·(ln n/n)²)` holds to
/// machine precision because the expansion is an identity for this law.
pub fn log_mgf(params: &ModelParams, theta: f64) -> Result<LogMgf, LdpError> {
    let law = pair_diff_distribution(params);
    let max_abs = law.max_abs_value();
    if !theta.is_finite() || theta.abs() * max_abs > 700.0 {
        return Err(LdpError::Overflow { theta, max_abs });
    }
    // Direct sum, written as Σ p·(e^{θv} − 1) plus the float residue of
    // Σp − 1 so that near-cancellation at small ln n/n keeps full relative
    // precision.
    let mut small_sum = 0.0;
    let mut prob_sum = 0.0;
    for atom in law.atoms() {
        small_sum += atom.prob * (theta * atom.value).exp_m1();
        prob_sum += atom.prob;
    }
    let value = (small_sum + (prob_sum - 1.0)).ln_1p();
    Ok(LogMgf {
        value,
        c_theta: c_coefficient(params, theta),
        d_theta: d_coefficient(params, theta),
    })
}

/// Analytic first and second derivatives of the log-MGF at `θ`, from the
/// `C/D` closed forms: with `M = 1 + C·L + D·L²`,
/// `Λ' = (C'L + D'L²)/M` and `Λ'' = (C''L + D''L²)/M − Λ'²`.
pub fn log_mgf_derivatives(params: &ModelParams, theta: f64) -> (f64, f64) {
    let scale = params.log_scale();
    let m = 1.0 + c_coefficient(params, theta) * scale
        + d_coefficient(params, theta) * scale * scale;
    let first = (c_prime(params, theta) * scale + d_prime(params, theta) * scale * scale) / m;
    let second = (c_double_prime(params, theta) * scale
        + d_double_prime(params, theta) * scale * scale)
        / m
        - first * first;
    (first, second)
}

pub(crate) fn c_coefficient(params: &ModelParams, theta: f64) -> f64 {
    let w = params.weights();
    let mut sum = -params.alpha_star() - params.beta_star();
    for (i, (&a, &b)) in params.alphas().iter().zip(params.betas()).enumerate() {
        sum += a * (-theta * w[i]).exp() + b * (theta * w[i]).exp();
    }
    sum
}

pub(crate) fn d_coefficient(params: &ModelParams, theta: f64) -> f64 {
    let alphas = params.alphas();
    let betas = params.betas();
    let w = params.weights();
    let a_star = params.alpha_star();
    let b_star = params.beta_star();
    let mut sum = a_star * b_star;
    for i in 0..alphas.len() {
        sum += alphas[i] * betas[i];
        sum -= a_star * betas[i] * (theta * w[i]).exp() + b_star * alphas[i] * (-theta * w[i]).exp();
    }
    for i in 0..alphas.len() {
        for j in 0..alphas.len() {
            if i != j {
                sum += alphas[i] * betas[j] * (theta * (w[j] - w[i])).exp();
            }
        }
    }
    sum
}

fn c_prime(params: &ModelParams, theta: f64) -> f64 {
    let w = params.weights();
    params
        .alphas()
        .iter()
        .zip(params.betas())
        .enumerate()
        .map(|(i, (&a, &b))| w[i] * (b * (theta * w[i]).exp() - a * (-theta * w[i]).exp()))
        .sum()
}

fn c_double_prime(params: &ModelParams, theta: f64) -> f64 {
    let w = params.weights();
    params
        .alphas()
        .iter()
        .zip(params.betas())
        .enumerate()
        .map(|(i, (&a, &b))| w[i] * w[i] * (b * (theta * w[i]).exp() + a * (-theta * w[i]).exp()))
        .sum()
}

fn d_prime(params: &ModelParams, theta: f64) -> f64 {
    let alphas = params.alphas();
    let betas = params.betas();
    let w = params.weights();
    let a_star = params.alpha_star();
    let b_star = params.beta_star();
    let mut sum = 0.0;
    for i in 0..alphas.len() {
        sum -= w[i]
            * (a_star * betas[i] * (theta * w[i]).exp()
                - b_star * alphas[i] * (-theta * w[i]).exp());
    }
    for i in 0..alphas.len() {
        for j in 0..alphas.len() {
            if i != j {
                let d = w[j] - w[i];
                sum += alphas[i] * betas[j] * d * (theta * d).exp();
            }
        }
    }
    sum
}

fn d_double_prime(params: &ModelParams, theta: f64) -> f64 {
    let alphas = params.alphas();
    let betas = params.betas();
    let w = params.weights();
    let a_star = params.alpha_star();
    let b_star = params.beta_star();
    let mut sum = 0.0;
    for i in 0..alphas.len() {
        sum -= w[i]
            * w[i]
            * (a_star * betas[i] * (theta * w[i]).exp()
                + b_star * alphas[i] * (-theta * w[i]).exp());
    }
    for i in 0..alphas.len() {
        for j in 0..alphas.len() {
            if i != j {
                let d = w[j] - w[i];
                sum += alphas[i] * betas[j] * d * d * (theta * d).exp();
            }
        }
    }
    sum
}

/// Result of a rate-function evaluation `I(a)`.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct RateResult {
    pub a: f64,
    /// `I(a) ≥ 0`; `+∞` when `a` lies outside the support hull.
    pub rate: f64,
    /// Maximizing θ (clamped to ±[`THETA_BRACKET`] at the hull boundary).
    pub theta_star: f64,
    /// Solver iterations (bisection plus golden-section).
    pub iterations: u32,
    /// `a` lies strictly outside the convex hull of the support.
    pub outside_hull: bool,
    /// The supremum was capped at the θ bracket edge.
    pub bracket_clamped: bool,
}

/// Legendre–Fenchel transform `I(a) = sup_θ (θa − ln E[e^{θX}])` of a
/// finite law.
///
/// Interior points are solved by bisection of `g'(θ) = a − Λ'(θ)` down to a
/// bracket width of 1e−10 followed by a golden-section polish inside that
/// bracket. At the hull boundary the exact limit `−ln P(X = extreme)` is
/// returned; outside the hull the rate is `+∞` with
/// [`RateResult::outside_hull`] set.
pub fn rate_function(law: &DiscreteLaw, a: f64) -> RateResult {
    let tol = merge_window(law.min_value(), law.max_value());
    let (lo_v, hi_v) = (law.min_value(), law.max_value());

    if a > hi_v + tol || a < lo_v - tol {
        return RateResult {
            a,
            rate: f64::INFINITY,
            theta_star: f64::NAN,
            iterations: 0,
            outside_hull: true,
            bracket_clamped: false,
        };
    }
    if (a - hi_v).abs() <= tol {
        let p = law.atoms().last().expect("nonempty").prob;
        return boundary_result(a, p, THETA_BRACKET);
    }
    if (a - lo_v).abs() <= tol {
        let p = law.atoms()[0].prob;
        return boundary_result(a, p, -THETA_BRACKET);
    }

    let g = |theta: f64| theta * a - law.log_mgf_at(theta);
    let g_prime = |theta: f64| a - law.tilted_moments(theta).0;

    let mut iterations = 0u32;
    let (mut lo, mut hi) = (-THETA_BRACKET, THETA_BRACKET);
    if g_prime(lo) <= 0.0 {
        return RateResult {
            a,
            rate: g(lo).max(0.0),
            theta_star: lo,
            iterations: 1,
            outside_hull: false,
            bracket_clamped: true,
        };
    }
    if g_prime(hi) >= 0.0 {
        return RateResult {
            a,
            rate: g(hi).max(0.0),
            theta_star: hi,
            iterations: 1,
            outside_hull: false,
            bracket_clamped: true,
        };
    }
    // The tilted mean has no catastrophic cancellation, so the derivative
    // sign is trustworthy down to the target width; value comparisons are
    // not (g is flat to double precision near its maximum).
    while hi - lo > 1e-10 {
        let mid = 0.5 * (lo + hi);
        if g_prime(mid) > 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
        iterations += 1;
    }
    // Golden-section polish inside the final bracket.
    const INV_PHI: f64 = 0.618_033_988_749_894_9;
    let mut c = hi - INV_PHI * (hi - lo);
    let mut d = lo + INV_PHI * (hi - lo);
    let mut gc = g(c);
    let mut gd = g(d);
    for _ in 0..8 {
        if gc > gd {
            hi = d;
            d = c;
            gd = gc;
            c = hi - INV_PHI * (hi - lo);
            gc = g(c);
        } else {
            lo = c;
            c = d;
            gc = gd;
            d = lo + INV_PHI * (hi - lo);
            gd = g(d);
        }
        iterations += 1;
    }
    let theta_star = 0.5 * (lo + hi);
    RateResult {
        a,
        rate: g(theta_star).max(0.0),
        theta_star,
        iterations,
        outside_hull: false,
        bracket_clamped: false,
    }
}

fn boundary_result(a: f64, boundary_prob: f64, theta_edge: f64) -> RateResult {
    RateResult {
        a,
        rate: -boundary_prob.ln(),
        theta_star: theta_edge,
        iterations: 0,
        outside_hull: false,
        bracket_clamped: true,
    }
}
