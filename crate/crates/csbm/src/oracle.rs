//! Independent brute-force ground truth.
//!
//! Everything here validates the production paths without sharing code with
//! them: [`brute_force_ml`] re-derives the exhaustive argmax with a
//! different enumeration order and a different score accumulation,
//! [`exact_sum_distribution`] computes N-fold convolutions exactly, and
//! [`monte_carlo_pnk`] estimates swap-failure probabilities by simulation.

use crate::decoder::{DecodeResult, SCORE_TIE_TOLERANCE};
use crate::ldp::{pair_diff_distribution, DiscreteLaw};
use crate::model::{ModelParams, Weights};
use crate::sampler::{derive_seed, ColoredGraph, Community, Partition};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use thiserror::Error;

/// Largest vertex count the exhaustive enumerators accept.
pub const ENUMERATION_CAP: usize = 24;

/// Convolution atom budget; beyond it the law is declared intractable.
pub const ATOM_CAP: usize = 1_000_000;

#[derive(Debug, Error, PartialEq)]
pub enum OracleError {
    #[error("n = {0} must be even")]
    OddVertexCount(usize),
    #[error("n = {n} exceeds the enumeration cap {cap}")]
    TooLarge { n: usize, cap: usize },
    #[error("convolution support reached {atoms} atoms (cap {cap}); use Monte Carlo instead")]
    AtomBlowup { atoms: usize, cap: usize },
    #[error("k = {k} out of range 1..={max}")]
    KOutOfRange { k: usize, max: usize },
    #[error("at least one trial is required")]
    ZeroTrials,
    #[error("weights cover {got} colors but the graph has {expected}")]
    WeightMismatch { expected: usize, got: usize },
}

/// All `C(n, n/2)/2` canonical balanced bipartitions (vertex 0 pinned to
/// community A), in lexicographic order of the A-side label string.
pub fn enumerate_balanced_partitions(
    n: usize,
) -> Result<impl Iterator<Item = Partition>, OracleError> {
    if n % 2 != 0 {
        return Err(OracleError::OddVertexCount(n));
    }
    if n > ENUMERATION_CAP {
        return Err(OracleError::TooLarge {
            n,
            cap: ENUMERATION_CAP,
        });
    }
    let k = n / 2 - 1;
    // Successor iteration over k-subsets of {1..n-1}.
    let first: Vec<usize> = (1..=k).collect();
    Ok(
        std::iter::successors(Some(first), move |prev| next_combination(prev, n - 1, k)).map(
            move |combo| {
                let mut a_set = Vec::with_capacity(k + 1);
                a_set.push(0);
                a_set.extend_from_slice(&combo);
                Partition::from_a_set(n, &a_set).expect("combination is balanced")
            },
        ),
    )
}

/// Lexicographic successor of a k-subset of {1..universe}; None at the end.
fn next_combination(combo: &[usize], universe: usize, k: usize) -> Option<Vec<usize>> {
    if k == 0 {
        return None;
    }
    let mut next = combo.to_vec();
    let mut i = k;
    loop {
        if i == 0 {
            return None;
        }
        i -= 1;
        if next[i] < universe - (k - 1 - i) {
            next[i] += 1;
            for j in i + 1..k {
                next[j] = next[j - 1] + 1;
            }
            return Some(next);
        }
    }
}

/// Exhaustive ML argmax, independently coded: bitmask enumeration over the
/// non-pinned vertices and per-edge floating accumulation instead of count
/// vectors. Same tie rule as the decoder (band of [`SCORE_TIE_TOLERANCE`]
/// around the maximum, lexicographically smallest label string wins).
pub fn brute_force_ml(graph: &ColoredGraph, weights: &Weights) -> Result<DecodeResult, OracleError> {
    let n = graph.n();
    if n % 2 != 0 {
        return Err(OracleError::OddVertexCount(n));
    }
    if n > ENUMERATION_CAP {
        return Err(OracleError::TooLarge {
            n,
            cap: ENUMERATION_CAP,
        });
    }
    if weights.len() != graph.color_count() {
        return Err(OracleError::WeightMismatch {
            expected: graph.color_count(),
            got: weights.len(),
        });
    }

    let score_of = |mask: u32| -> f64 {
        // Vertex 0 is always on the A side; bit v-1 places vertex v in A.
        let side = |v: usize| -> bool { v == 0 || mask >> (v - 1) & 1 == 1 };
        let mut score = 0.0;
        for e in graph.edges() {
            if side(e.u as usize) == side(e.v as usize) {
                score += weights[e.color as usize - 1];
            }
        }
        score
    };

    let want = (n / 2 - 1) as u32;
    let mut best_score = f64::NEG_INFINITY;
    let mut explored = 0u64;
    for mask in 0u32..1 << (n - 1) {
        if mask.count_ones() != want {
            continue;
        }
        explored += 1;
        best_score = best_score.max(score_of(mask));
    }

    let mut band_count = 0u64;
    let mut best_labels: Option<Vec<Community>> = None;
    for mask in 0u32..1 << (n - 1) {
        if mask.count_ones() != want {
            continue;
        }
        let s = score_of(mask);
        if s >= best_score - SCORE_TIE_TOLERANCE {
            band_count += 1;
            let labels: Vec<Community> = (0..n)
                .map(|v| {
                    if v == 0 || mask >> (v - 1) & 1 == 1 {
                        Community::A
                    } else {
                        Community::B
                    }
                })
                .collect();
            let better = match &best_labels {
                None => true,
                Some(current) => label_key(&labels) < label_key(current),
            };
            if better {
                best_labels = Some(labels);
            }
        }
    }
    let best = Partition::from_labels(best_labels.expect("at least one candidate"))
        .expect("mask is balanced");
    let best_score = score_of(mask_of(&best));
    Ok(DecodeResult {
        best,
        best_score,
        tie: band_count >= 2,
        explored,
    })
}

fn label_key(labels: &[Community]) -> Vec<u8> {
    labels
        .iter()
        .map(|c| match c {
            Community::A => 0u8,
            Community::B => 1u8,
        })
        .collect()
}

fn mask_of(partition: &Partition) -> u32 {
    let mut mask = 0u32;
    for v in 1..partition.len() {
        if partition.side(v) == Community::A {
            mask |= 1 << (v - 1);
        }
    }
    mask
}

/// Exact law of a sum of `n_terms` i.i.d. copies of a finite law.
#[derive(Debug, Clone, PartialEq)]
pub struct ExactLaw {
    atoms: Vec<(f64, f64)>,
}

impl ExactLaw {
    pub fn atoms(&self) -> &[(f64, f64)] {
        &self.atoms
    }

    pub fn mean(&self) -> f64 {
        self.atoms.iter().map(|&(v, p)| v * p).sum()
    }

    /// `P(S ≥ t)`, with a hair of slack so lattice points that land on `t`
    /// up to float rounding are counted.
    pub fn tail_ge(&self, t: f64) -> f64 {
        let fuzz = 1e-9 * (1.0 + t.abs());
        self.atoms
            .iter()
            .filter(|&&(v, _)| v >= t - fuzz)
            .map(|&(_, p)| p)
            .sum()
    }

    /// `P(lo < S < hi)` with strictly interior atoms.
    pub fn interval_open(&self, lo: f64, hi: f64) -> f64 {
        let fuzz = 1e-12 * (1.0 + lo.abs().max(hi.abs()));
        self.atoms
            .iter()
            .filter(|&&(v, _)| v > lo + fuzz && v < hi - fuzz)
            .map(|&(_, p)| p)
            .sum()
    }
}

/// N-fold convolution by iterated merge-convolve. Requires
/// `n_terms·|support| ≤ ATOM_CAP` and errors out if the merged support
/// outgrows [`ATOM_CAP`] anyway (incommensurate atom values).
pub fn exact_sum_distribution(law: &DiscreteLaw, n_terms: usize) -> Result<ExactLaw, OracleError> {
    let support = law.atoms().len();
    if n_terms.saturating_mul(support) > ATOM_CAP {
        return Err(OracleError::AtomBlowup {
            atoms: n_terms.saturating_mul(support),
            cap: ATOM_CAP,
        });
    }
    let base: Vec<(f64, f64)> = law.atoms().iter().map(|a| (a.value, a.prob)).collect();
    let mut result = vec![(0.0, 1.0)];
    for _ in 0..n_terms {
        result = convolve_merge(&result, &base)?;
    }
    Ok(ExactLaw { atoms: result })
}

fn convolve_merge(a: &[(f64, f64)], b: &[(f64, f64)]) -> Result<Vec<(f64, f64)>, OracleError> {
    let mut raw = Vec::with_capacity(a.len() * b.len());
    for &(va, pa) in a {
        for &(vb, pb) in b {
            raw.push((va + vb, pa * pb));
        }
    }
    raw.sort_by(|x, y| x.0.partial_cmp(&y.0).expect("finite values"));
    let mut merged: Vec<(f64, f64)> = Vec::new();
    for (v, p) in raw {
        match merged.last_mut() {
            Some(last) if (v - last.0).abs() <= 1e-12 * (1.0 + v.abs().max(last.0.abs())) => {
                last.1 += p;
            }
            _ => merged.push((v, p)),
        }
    }
    if merged.len() > ATOM_CAP {
        return Err(OracleError::AtomBlowup {
            atoms: merged.len(),
            cap: ATOM_CAP,
        });
    }
    Ok(merged)
}

/// Monte Carlo estimate of `P_n^(k) = P(Σ_{i=1}^{2k(n/2−k)} (Z−W) ≥ 0)`
/// with its binomial standard error. Trials use seeds derived from
/// `(seed, trial)`, so the estimate is reproducible and independent of the
/// parallel schedule.
pub fn monte_carlo_pnk(
    params: &ModelParams,
    k: usize,
    trials: usize,
    seed: u64,
) -> Result<(f64, f64), OracleError> {
    let n = params.n();
    if k == 0 || k > n / 4 {
        return Err(OracleError::KOutOfRange { k, max: n / 4 });
    }
    if trials == 0 {
        return Err(OracleError::ZeroTrials);
    }
    let n_terms = 2 * k * (n / 2 - k);
    let law = pair_diff_distribution(params);
    let mut cumulative = Vec::with_capacity(law.atoms().len());
    let mut acc = 0.0;
    for atom in law.atoms() {
        acc += atom.prob;
        cumulative.push((acc, atom.value));
    }

    let hits: u64 = (0..trials as u64)
        .into_par_iter()
        .map(|trial| {
            let mut rng = ChaCha8Rng::seed_from_u64(derive_seed(seed, trial));
            let mut sum = 0.0;
            for _ in 0..n_terms {
                let u: f64 = rng.gen();
                let value = cumulative
                    .iter()
                    .find(|&&(c, _)| u < c)
                    .map(|&(_, v)| v)
                    .unwrap_or_else(|| cumulative.last().expect("nonempty").1);
                sum += value;
            }
            (sum >= -1e-9) as u64
        })
        .sum();

    let estimate = hits as f64 / trials as f64;
    let std_error = (estimate * (1.0 - estimate) / trials as f64).sqrt();
    Ok((estimate, std_error))
}
