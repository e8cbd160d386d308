//! Maximum-likelihood decoding and failure-event detection.
//!
//! The ML estimate maximizes the weighted inner-edge count
//! `Σ_i l_i · w_i` over balanced bipartitions. [`ml_decode_exact`] does this
//! exhaustively (one canonical representative per partition/complement
//! pair), [`local_refine`] walks best-improving vertex swaps, and
//! [`vertex_failure_events`] tests each vertex of the planted partition for
//! the per-community failure witnesses: a vertex fails when its weighted
//! edge count toward the other community strictly exceeds the one toward
//! its own.

use crate::model::Weights;
use crate::sampler::{inner_and_cross_counts, ColoredGraph, Community, Partition};
use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

/// Largest `n` the exhaustive decoder accepts; C(24,12)/2 ≈ 1.35e6 scores.
pub const EXACT_DECODE_CAP: usize = 24;

/// Two scores within this absolute distance count as a tie.
pub const SCORE_TIE_TOLERANCE: f64 = 1e-9;

#[derive(Debug, Error, PartialEq)]
pub enum DecodeError {
    #[error("partition has {got} labels but the graph has {expected} vertices")]
    SizeMismatch { expected: usize, got: usize },
    #[error("weights cover {got} colors but the graph has {expected}")]
    WeightMismatch { expected: usize, got: usize },
    #[error("exact decoding is capped at n = {cap}; got n = {n} (use local_refine)")]
    TooLarge { n: usize, cap: usize },
    #[error("exact decoding requires an even vertex count; got {0}")]
    OddVertexCount(usize),
}

/// Outcome of an exhaustive decode.
#[derive(Debug, Clone, Serialize)]
pub struct DecodeResult {
    /// Canonical best partition (vertex 0 in A).
    #[serde(rename = "labels")]
    pub best: Partition,
    /// Score of `best`; equals `score_partition(graph, weights, best)`.
    #[serde(rename = "score")]
    pub best_score: f64,
    /// Another balanced partition attains the best score (within
    /// [`SCORE_TIE_TOLERANCE`]).
    pub tie: bool,
    /// Number of canonical partitions scored.
    pub explored: u64,
}

/// Per-vertex failure witnesses for a planted partition.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FailureReport {
    pub f_a_vertices: Vec<usize>,
    pub f_b_vertices: Vec<usize>,
    pub f_a: bool,
    pub f_b: bool,
}

/// `Σ_i l_i(partition) · w_i`: the weighted number of inner edges.
pub fn score_partition(
    graph: &ColoredGraph,
    weights: &Weights,
    partition: &Partition,
) -> Result<f64, DecodeError> {
    check_weights(graph, weights)?;
    let (inner, _) = inner_and_cross_counts(graph, partition).map_err(|_| {
        DecodeError::SizeMismatch {
            expected: graph.n(),
            got: partition.len(),
        }
    })?;
    Ok(dot_counts(&inner, weights))
}

fn dot_counts(counts: &[u64], weights: &Weights) -> f64 {
    counts
        .iter()
        .zip(weights.values())
        .map(|(&c, &w)| c as f64 * w)
        .sum()
}

fn check_weights(graph: &ColoredGraph, weights: &Weights) -> Result<(), DecodeError> {
    if weights.len() != graph.color_count() {
        return Err(DecodeError::WeightMismatch {
            expected: graph.color_count(),
            got: weights.len(),
        });
    }
    Ok(())
}

/// Pascal triangle up to `n`, for combination unranking.
fn binomial_table(n: usize) -> Vec<Vec<u64>> {
    let mut table = vec![vec![0u64; n + 1]; n + 1];
    for (i, row) in table.iter_mut().enumerate() {
        row[0] = 1;
        for j in 1..=i {
            row[j] = if j == i { 1 } else { 0 };
        }
    }
    for i in 1..=n {
        for j in 1..i {
            table[i][j] = table[i - 1][j - 1] + table[i - 1][j];
        }
    }
    table
}

/// Writes the A-side mask of the canonical partition with lexicographic
/// `rank` among "vertex 0 plus k of {1..n-1}" combinations.
fn unrank_into_mask(mut rank: u64, n: usize, k: usize, binom: &[Vec<u64>], mask: &mut [bool]) {
    mask.iter_mut().for_each(|b| *b = false);
    mask[0] = true;
    let mut pool = n - 1;
    let mut next = 1usize;
    let mut remaining = k;
    while remaining > 0 {
        let with_next = binom[pool - 1][remaining - 1];
        if rank < with_next {
            mask[next] = true;
            remaining -= 1;
        } else {
            rank -= with_next;
        }
        next += 1;
        pool -= 1;
    }
}

fn score_mask(graph: &ColoredGraph, weights: &Weights, mask: &[bool], counts: &mut [u64]) -> f64 {
    counts.iter_mut().for_each(|c| *c = 0);
    for e in graph.edges() {
        if mask[e.u as usize] == mask[e.v as usize] {
            counts[e.color as usize - 1] += 1;
        }
    }
    dot_counts(counts, weights)
}

/// Exhaustive ML decode over all `C(n, n/2)/2` canonical balanced
/// bipartitions.
///
/// Ties within [`SCORE_TIE_TOLERANCE`] of the maximum are detected and the
/// reported partition is the lexicographically smallest label string among
/// them, so the result does not depend on scheduling.
pub fn ml_decode_exact(graph: &ColoredGraph, weights: &Weights) -> Result<DecodeResult, DecodeError> {
    let n = graph.n();
    if n > EXACT_DECODE_CAP {
        return Err(DecodeError::TooLarge {
            n,
            cap: EXACT_DECODE_CAP,
        });
    }
    if n % 2 != 0 || n == 0 {
        return Err(DecodeError::OddVertexCount(n));
    }
    check_weights(graph, weights)?;

    let k = n / 2 - 1;
    let binom = binomial_table(n);
    let total = binom[n - 1][k];

    let scratch = || (vec![false; n], vec![0u64; graph.color_count()]);

    let max_score = (0..total)
        .into_par_iter()
        .fold(
            || (scratch(), f64::NEG_INFINITY),
            |((mut mask, mut counts), best), rank| {
                unrank_into_mask(rank, n, k, &binom, &mut mask);
                let s = score_mask(graph, weights, &mask, &mut counts);
                ((mask, counts), best.max(s))
            },
        )
        .map(|(_, best)| best)
        .reduce(|| f64::NEG_INFINITY, f64::max);

    let (band_count, min_rank) = (0..total)
        .into_par_iter()
        .fold(
            || (scratch(), (0u64, u64::MAX)),
            |((mut mask, mut counts), (count, min_rank)), rank| {
                unrank_into_mask(rank, n, k, &binom, &mut mask);
                let s = score_mask(graph, weights, &mask, &mut counts);
                let hit = s >= max_score - SCORE_TIE_TOLERANCE;
                (
                    (mask, counts),
                    (
                        count + hit as u64,
                        if hit { min_rank.min(rank) } else { min_rank },
                    ),
                )
            },
        )
        .map(|(_, acc)| acc)
        .reduce(
            || (0u64, u64::MAX),
            |(c1, r1), (c2, r2)| (c1 + c2, r1.min(r2)),
        );

    let mut mask = vec![false; n];
    unrank_into_mask(min_rank, n, k, &binom, &mut mask);
    let a_set: Vec<usize> = (0..n).filter(|&v| mask[v]).collect();
    let best = Partition::from_a_set(n, &a_set).expect("mask is balanced by construction");
    let best_score = score_partition(graph, weights, &best)?;
    Ok(DecodeResult {
        best,
        best_score,
        tie: band_count >= 2,
        explored: total,
    })
}

/// Repeatedly applies the best-improving `(v_A, v_B)` swap until no swap
/// improves the score by more than [`SCORE_TIE_TOLERANCE`], or `max_rounds`
/// is exhausted. Returns `init` unchanged when it is already swap-locally
/// maximal.
pub fn local_refine(
    graph: &ColoredGraph,
    weights: &Weights,
    init: &Partition,
    max_rounds: usize,
) -> Result<Partition, DecodeError> {
    check_weights(graph, weights)?;
    if init.len() != graph.n() {
        return Err(DecodeError::SizeMismatch {
            expected: graph.n(),
            got: init.len(),
        });
    }
    let n = graph.n();
    let mut labels: Vec<Community> = init.labels().to_vec();

    // Static lookup of the weight carried by each present edge.
    let mut edge_weight = std::collections::HashMap::new();
    for e in graph.edges() {
        edge_weight.insert((e.u as usize, e.v as usize), weights[e.color as usize - 1]);
    }
    let pair_w = |u: usize, v: usize| -> f64 {
        let key = if u < v { (u, v) } else { (v, u) };
        edge_weight.get(&key).copied().unwrap_or(0.0)
    };

    for _ in 0..max_rounds {
        // gap(v) = weighted degree toward the other community minus the one
        // toward its own; a swap (u, v) gains gap(u) + gap(v) − 2·w(u,v).
        let mut gap = vec![0.0f64; n];
        for e in graph.edges() {
            let (u, v) = (e.u as usize, e.v as usize);
            let w = weights[e.color as usize - 1];
            let sign = if labels[u] == labels[v] { -1.0 } else { 1.0 };
            gap[u] += sign * w;
            gap[v] += sign * w;
        }
        let mut best_gain = f64::NEG_INFINITY;
        let mut best_pair = (usize::MAX, usize::MAX);
        for u in 0..n {
            if labels[u] != Community::A {
                continue;
            }
            for v in 0..n {
                if labels[v] != Community::B {
                    continue;
                }
                let gain = gap[u] + gap[v] - 2.0 * pair_w(u, v);
                if gain > best_gain {
                    best_gain = gain;
                    best_pair = (u, v);
                }
            }
        }
        if best_gain <= SCORE_TIE_TOLERANCE {
            break;
        }
        labels[best_pair.0] = Community::B;
        labels[best_pair.1] = Community::A;
    }
    Ok(Partition::from_labels(labels).expect("swaps preserve balance"))
}

/// Tests every vertex of the planted partition for the failure witnesses.
///
/// A vertex `v ∈ A` fails when `Σ E_i[v,A]·w_i < Σ E_i[v,B]·w_i`; a vertex
/// `v ∈ B` fails when `Σ E_i[v,A]·w_i > Σ E_i[v,B]·w_i`. Equality counts as
/// non-failure on both sides.
pub fn vertex_failure_events(
    graph: &ColoredGraph,
    weights: &Weights,
    planted: &Partition,
) -> Result<FailureReport, DecodeError> {
    let margins = vertex_margins(graph, weights, planted)?;
    let mut f_a_vertices = Vec::new();
    let mut f_b_vertices = Vec::new();
    for (v, &margin) in margins.iter().enumerate() {
        if margin > 0.0 {
            match planted.side(v) {
                Community::A => f_a_vertices.push(v),
                Community::B => f_b_vertices.push(v),
            }
        }
    }
    Ok(FailureReport {
        f_a: !f_a_vertices.is_empty(),
        f_b: !f_b_vertices.is_empty(),
        f_a_vertices,
        f_b_vertices,
    })
}

/// Per-vertex failure margin: the weighted edge sum toward the other
/// community minus the one toward its own. Positive margin means the
/// vertex witnesses a failure event.
pub fn vertex_margins(
    graph: &ColoredGraph,
    weights: &Weights,
    partition: &Partition,
) -> Result<Vec<f64>, DecodeError> {
    check_weights(graph, weights)?;
    if partition.len() != graph.n() {
        return Err(DecodeError::SizeMismatch {
            expected: graph.n(),
            got: partition.len(),
        });
    }
    let n = graph.n();
    let mut own = vec![0.0f64; n];
    let mut cross = vec![0.0f64; n];
    for e in graph.edges() {
        let (u, v) = (e.u as usize, e.v as usize);
        let w = weights[e.color as usize - 1];
        if partition.side(u) == partition.side(v) {
            own[u] += w;
            own[v] += w;
        } else {
            cross[u] += w;
            cross[v] += w;
        }
    }
    Ok((0..n).map(|v| cross[v] - own[v]).collect())
}

/// True when the partitions agree exactly or up to swapping the two
/// community labels.
pub fn partitions_equal_up_to_swap(p1: &Partition, p2: &Partition) -> Result<bool, DecodeError> {
    if p1.len() != p2.len() {
        return Err(DecodeError::SizeMismatch {
            expected: p1.len(),
            got: p2.len(),
        });
    }
    Ok(p1 == p2 || *p1 == p2.complement())
}
