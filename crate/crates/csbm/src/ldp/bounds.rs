//! Closed-form probability bounds built on the rate function.
//!
//! Upper bounds may exceed 1 and lower bounds may clamp at 0; neither is
//! silently truncated into the unit interval. Instead [`BoundReport`]
//! carries a `vacuous` flag so experiments can tell informative from
//! degenerate regimes apart.

use super::{c_coefficient, d_coefficient, log_mgf, rate_function, DiscreteLaw, LdpError};
use crate::model::ModelParams;
use serde::Serialize;

/// Which bound produced the value, with its inputs echoed.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(tag = "formula_id", rename_all = "snake_case")]
pub enum BoundFormula {
    /// `2·exp(−N·inf_{x ≥ threshold} I(x))` for the sample mean of N terms.
    CramerUpper { n_terms: usize, threshold: f64 },
    /// `exp(−N(I(a) + ε|η*|))·max(0, 1 − σ²/(Nε²))`.
    CramerLower {
        n_terms: usize,
        a: f64,
        epsilon: f64,
        eta_star: f64,
        sigma_sq: f64,
    },
    /// `2·exp(−2k(n/2−k)·(−Λ(0.5)))`, the swap-failure bound at θ = 1/2.
    PnkChernoff { n: usize, k: usize, n_terms: usize },
    /// `Σ_k C(n/2,k)²·P_n^(k)-bound`, the union bound over swap sizes.
    MlFailureUnion { n: usize, k_max: usize },
    /// Chernoff bound on a vertex having heavy weighted degree inside the
    /// first `n/ln³n` vertices.
    DeltaComplement { n: usize, alpha_sum: f64 },
    /// `max(0, 1 − variance/t²)` lower bound on `P(S ≥ mean − t)`.
    ChebyshevTail { mean: f64, variance: f64, t: f64 },
}

/// A bound evaluation: nonnegative `value`, flagged vacuous when an upper
/// bound reaches 1 or a lower bound collapses to 0.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct BoundReport {
    #[serde(flatten)]
    pub formula: BoundFormula,
    pub value: f64,
    pub vacuous: bool,
}

/// Cramér upper bound `P((1/N)ΣX_i ≥ threshold) ≤ 2·exp(−N·inf I)`.
///
/// For `threshold ≤ mean` the infimum is 0 (the bound is a vacuous 2); for
/// `threshold > mean` convexity puts the infimum at the threshold itself.
pub fn cramer_upper_bound(law: &DiscreteLaw, n_terms: usize, threshold: f64) -> BoundReport {
    let inf_rate = if threshold <= law.mean() {
        0.0
    } else {
        rate_function(law, threshold).rate
    };
    let value = 2.0 * (-(n_terms as f64) * inf_rate).exp();
    BoundReport {
        formula: BoundFormula::CramerUpper { n_terms, threshold },
        value,
        vacuous: value >= 1.0,
    }
}

/// Cramér lower bound on `P((1/N)ΣX_i ∈ (a−ε, a+ε))`.
///
/// `η*` minimizes the log-MGF of the centered variable `X − a` (which is
/// the maximizer of the Legendre transform at `a`) and `σ²` is the variance
/// of the `η*`-tilted law. An interval outside the support hull yields a
/// zero (vacuous) bound.
pub fn cramer_lower_bound(
    law: &DiscreteLaw,
    n_terms: usize,
    a: f64,
    epsilon: f64,
) -> Result<BoundReport, LdpError> {
    if !(epsilon > 0.0) {
        return Err(LdpError::NonpositiveEpsilon(epsilon));
    }
    let rate = rate_function(law, a);
    if rate.outside_hull {
        return Ok(BoundReport {
            formula: BoundFormula::CramerLower {
                n_terms,
                a,
                epsilon,
                eta_star: f64::NAN,
                sigma_sq: f64::NAN,
            },
            value: 0.0,
            vacuous: true,
        });
    }
    let eta_star = rate.theta_star;
    let (_, sigma_sq) = law.tilted_moments(eta_star);
    let n = n_terms as f64;
    let exponential = (-n * (rate.rate + epsilon * eta_star.abs())).exp();
    let correction = (1.0 - sigma_sq / (n * epsilon * epsilon)).max(0.0);
    let value = exponential * correction;
    Ok(BoundReport {
        formula: BoundFormula::CramerLower {
            n_terms,
            a,
            epsilon,
            eta_star,
            sigma_sq,
        },
        value,
        vacuous: value <= 0.0,
    })
}

/// The swap-failure probability bound
/// `P_n^(k) ≤ 2·exp(−2k(n/2−k)·(−Λ(0.5)))`.
///
/// `Λ(0.5) = ln(1 + C(0.5)·L + D(0.5)·L²)` is the exact log-MGF at
/// θ = 1/2, so the second-order correction is absorbed exactly instead of
/// hiding in an unnamed constant.
pub fn pnk_theoretical_bound(params: &ModelParams, k: usize) -> Result<BoundReport, LdpError> {
    let n = params.n();
    if k == 0 || k > n / 4 {
        return Err(LdpError::KOutOfRange { k, max: n / 4 });
    }
    let n_terms = 2 * k * (n / 2 - k);
    let lambda_half = log_mgf(params, 0.5)?.value;
    let value = 2.0 * ((n_terms as f64) * lambda_half).exp();
    Ok(BoundReport {
        formula: BoundFormula::PnkChernoff { n, k, n_terms },
        value,
        vacuous: value >= 1.0,
    })
}

/// Union bound `P(F) ≤ Σ_{k=1}^{n/4} C(n/2,k)²·P_n^(k)-bound`, accumulated
/// in log space so the binomials cannot overflow.
pub fn ml_failure_union_bound(params: &ModelParams) -> BoundReport {
    let n = params.n();
    let k_max = n / 4;
    let scale = params.log_scale();
    let c_half = c_coefficient(params, 0.5);
    let d_half = d_coefficient(params, 0.5);
    let lambda_half = (c_half * scale + d_half * scale * scale).ln_1p();

    let half = n / 2;
    let mut log_binom = 0.0f64; // ln C(n/2, k), updated incrementally
    let mut log_total = f64::NEG_INFINITY;
    for k in 1..=k_max {
        log_binom += ((half - k + 1) as f64 / k as f64).ln();
        let n_terms = 2 * k * (half - k);
        let log_term = std::f64::consts::LN_2 + 2.0 * log_binom + n_terms as f64 * lambda_half;
        log_total = log_sum_exp(log_total, log_term);
    }
    let value = if log_total > 700.0 {
        f64::INFINITY
    } else {
        log_total.exp()
    };
    BoundReport {
        formula: BoundFormula::MlFailureUnion { n, k_max },
        value,
        vacuous: value >= 1.0,
    }
}

fn log_sum_exp(a: f64, b: f64) -> f64 {
    if a == f64::NEG_INFINITY {
        return b;
    }
    let (hi, lo) = if a >= b { (a, b) } else { (b, a) };
    hi + (lo - hi).exp().ln_1p()
}

/// Chernoff bound on `1 − P(Δ)`: the probability that some vertex among the
/// first `n/ln³n` carries weighted degree at least `ln n / ln ln n` inside
/// that set. Evaluates
/// `exp[ln(n/ln³n) − (ln n/ln ln n)·ln(ln³n/(e·ln ln n·Σα))]`.
pub fn delta_complement_bound(n: usize, alphas: &[f64]) -> Result<BoundReport, LdpError> {
    if n < 16 {
        return Err(LdpError::NTooSmall { n, min: 16 });
    }
    let alpha_sum: f64 = alphas.iter().sum();
    let ln_n = (n as f64).ln();
    let ln_ln_n = ln_n.ln();
    let ln_cubed = ln_n.powi(3);
    let exponent = (n as f64 / ln_cubed).ln()
        - (ln_n / ln_ln_n) * (ln_cubed / (std::f64::consts::E * ln_ln_n * alpha_sum)).ln();
    let value = exponent.exp();
    Ok(BoundReport {
        formula: BoundFormula::DeltaComplement { n, alpha_sum },
        value,
        vacuous: value >= 1.0,
    })
}

/// Chebyshev lower bound `P(S ≥ mean − t) ≥ max(0, 1 − variance/t²)`.
pub fn chebyshev_tail(mean: f64, variance: f64, t: f64) -> Result<BoundReport, LdpError> {
    if variance < 0.0 {
        return Err(LdpError::NegativeVariance(variance));
    }
    if !(t > 0.0) {
        return Err(LdpError::NonpositiveT(t));
    }
    let value = (1.0 - variance / (t * t)).max(0.0);
    Ok(BoundReport {
        formula: BoundFormula::ChebyshevTail { mean, variance, t },
        value,
        vacuous: value <= 0.0,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ldp::pair_diff_distribution;
    use crate::model::make_params;
    use approx::assert_relative_eq;

    fn params_9_1(n: usize) -> ModelParams {
        make_params(n, vec![9.0], vec![1.0]).unwrap()
    }

    #[test]
    fn upper_bound_is_vacuous_at_the_mean() {
        let law = pair_diff_distribution(&params_9_1(100));
        let report = cramer_upper_bound(&law, 10, law.mean());
        assert_relative_eq!(report.value, 2.0, epsilon = 1e-9);
        assert!(report.vacuous);
    }

    #[test]
    fn upper_bound_decays_past_the_mean() {
        let law = pair_diff_distribution(&params_9_1(100));
        let report = cramer_upper_bound(&law, 40, 0.0);
        assert!(report.value < 1.0);
        assert!(!report.vacuous);
        // Tighter thresholds only shrink it.
        let further = cramer_upper_bound(&law, 40, 0.5);
        assert!(further.value <= report.value);
    }

    #[test]
    fn upper_bound_beyond_hull_is_zero() {
        let law = pair_diff_distribution(&params_9_1(100));
        let report = cramer_upper_bound(&law, 5, law.max_value() + 1.0);
        assert_eq!(report.value, 0.0);
    }

    #[test]
    fn lower_bound_clamps_small_samples_to_zero() {
        let law = pair_diff_distribution(&params_9_1(100));
        // σ²/(Nε²) ≥ 1 for tiny N and ε.
        let report = cramer_lower_bound(&law, 1, law.mean(), 1e-3).unwrap();
        assert_eq!(report.value, 0.0);
        assert!(report.vacuous);
    }

    #[test]
    fn lower_bound_tends_to_one_at_the_mean() {
        let law = pair_diff_distribution(&params_9_1(100));
        let report = cramer_lower_bound(&law, 10_000_000, law.mean(), 0.05).unwrap();
        assert!(report.value > 0.99, "value = {}", report.value);
        assert!((report.formula_eta_star()).abs() < 1e-8);
    }

    #[test]
    fn lower_bound_outside_hull_is_flagged_zero() {
        let law = pair_diff_distribution(&params_9_1(100));
        let report = cramer_lower_bound(&law, 10, law.max_value() + 2.0, 0.1).unwrap();
        assert_eq!(report.value, 0.0);
        assert!(report.vacuous);
    }

    #[test]
    fn lower_bound_rejects_bad_epsilon() {
        let law = pair_diff_distribution(&params_9_1(100));
        assert!(matches!(
            cramer_lower_bound(&law, 10, 0.0, 0.0),
            Err(LdpError::NonpositiveEpsilon(_))
        ));
    }

    #[test]
    fn pnk_bound_known_value() {
        // 2·(1 − 4L − 12L²)^30 at n = 32, k = 1, evaluated at 50-digit
        // precision.
        let report = pnk_theoretical_bound(&params_9_1(32), 1).unwrap();
        assert_relative_eq!(report.value, 1.5278879891429312e-11, max_relative = 1e-10);
        assert!(!report.vacuous);
        let report = pnk_theoretical_bound(&params_9_1(32), 2).unwrap();
        assert_relative_eq!(report.value, 3.5433291897679146e-21, max_relative = 1e-10);
    }

    #[test]
    fn pnk_bound_rejects_out_of_range_k() {
        let params = params_9_1(32);
        assert!(matches!(
            pnk_theoretical_bound(&params, 0),
            Err(LdpError::KOutOfRange { .. })
        ));
        assert!(matches!(
            pnk_theoretical_bound(&params, 9),
            Err(LdpError::KOutOfRange { k: 9, max: 8 })
        ));
    }

    #[test]
    fn pnk_exponent_peaks_at_quarter() {
        let n = 32;
        let best = 2 * (n / 4) * (n / 2 - n / 4);
        for k in 1..=n / 4 {
            assert!(2 * k * (n / 2 - k) <= best);
        }
        assert_eq!(best, n * n / 8);
    }

    #[test]
    fn zero_weight_colors_drop_out_of_pnk() {
        // α = β on color 2 contributes nothing to C or D, so the bound
        // matches the single-color evaluation exactly.
        let single = pnk_theoretical_bound(&params_9_1(100), 1).unwrap();
        let padded = pnk_theoretical_bound(
            &make_params(100, vec![9.0, 2.0], vec![1.0, 2.0]).unwrap(),
            1,
        )
        .unwrap();
        assert_relative_eq!(single.value, padded.value, max_relative = 1e-12);
    }

    #[test]
    fn union_bound_decays_for_supercritical_divergence() {
        // Divergence 4 > 2: evaluations at 50-digit precision.
        let b1000 = ml_failure_union_bound(&params_9_1(1000));
        assert_relative_eq!(b1000.value, 1.9911028476880339e-7, max_relative = 1e-9);
        assert!(!b1000.vacuous);
        let b10k = ml_failure_union_bound(&params_9_1(10_000));
        assert_relative_eq!(b10k.value, 4.2487949570230414e-9, max_relative = 1e-9);
        let b100k = ml_failure_union_bound(&params_9_1(100_000));
        assert!(b100k.value < b10k.value && b10k.value < b1000.value);
    }

    #[test]
    fn union_bound_vacuous_for_subcritical_divergence() {
        // Divergence 8 − 4√3 ≈ 1.07 < 2.
        for n in [1000, 10_000, 100_000] {
            let params = make_params(n, vec![3.0, 1.0], vec![1.0, 3.0]).unwrap();
            let report = ml_failure_union_bound(&params);
            assert!(report.vacuous, "n = {n}: value = {}", report.value);
            assert!(report.value >= 1.0);
        }
    }

    #[test]
    fn union_bound_term_count() {
        let report = ml_failure_union_bound(&make_params(8, vec![2.0], vec![0.5]).unwrap());
        match report.formula {
            BoundFormula::MlFailureUnion { k_max, .. } => assert_eq!(k_max, 2),
            other => panic!("unexpected formula {other:?}"),
        }
    }

    #[test]
    fn delta_bound_frozen_values() {
        // exp[ln(n/ln³n) − (ln n/ln ln n)·ln(ln³n/(e·ln ln n·Σα))] at
        // 50-digit precision for Σα = 9. The asymptotic exponent is
        // −2·ln n + o(ln n), but the o(ln n) part is still large at these
        // sizes: the value sits near n^{-0.98} at n = 10^6, far above
        // n^{-1.5}.
        let cases = [
            (10_000usize, 2.0141584433394342e-4),
            (100_000, 1.5381710475301419e-5),
            (1_000_000, 1.2318567989196033e-6),
        ];
        let mut last = f64::INFINITY;
        for (n, want) in cases {
            let report = delta_complement_bound(n, &[9.0]).unwrap();
            assert_relative_eq!(report.value, want, max_relative = 1e-10);
            assert!(report.value < last);
            last = report.value;
        }
    }

    #[test]
    fn delta_bound_grows_with_alpha_mass() {
        let small = delta_complement_bound(1_000_000, &[9.0]).unwrap();
        let large = delta_complement_bound(1_000_000, &[18.0]).unwrap();
        assert!(large.value > small.value);
    }

    #[test]
    fn delta_bound_rejects_tiny_n() {
        assert!(matches!(
            delta_complement_bound(8, &[9.0]),
            Err(LdpError::NTooSmall { n: 8, min: 16 })
        ));
    }

    #[test]
    fn chebyshev_limits() {
        let wide = chebyshev_tail(5.0, 2.0, 1e9).unwrap();
        assert!(wide.value > 1.0 - 1e-12);
        let degenerate = chebyshev_tail(5.0, 0.0, 0.01).unwrap();
        assert_eq!(degenerate.value, 1.0);
        let hopeless = chebyshev_tail(5.0, 100.0, 1.0).unwrap();
        assert_eq!(hopeless.value, 0.0);
        assert!(hopeless.vacuous);
        assert!(chebyshev_tail(0.0, -1.0, 1.0).is_err());
        assert!(chebyshev_tail(0.0, 1.0, 0.0).is_err());
    }

    #[test]
    fn bound_report_serializes_with_formula_id() {
        let law = pair_diff_distribution(&params_9_1(100));
        let report = cramer_upper_bound(&law, 10, 0.0);
        let json = serde_json::to_value(report).unwrap();
        assert_eq!(json["formula_id"], "cramer_upper");
        assert_eq!(json["n_terms"], 10);
        assert!(json["value"].is_number());
        assert!(json["vacuous"].is_boolean());
    }

    impl BoundReport {
        fn formula_eta_star(&self) -> f64 {
            match self.formula {
                BoundFormula::CramerLower { eta_star, .. } => eta_star,
                _ => panic!("not a lower bound"),
            }
        }
    }
}
