//! Seeded generation of colored-SBM graphs and edge-count statistics.
//!
//! Every unordered vertex pair draws a single categorical outcome: one of
//! the `m` colors or "no edge". The draw for pair `(u, v)` comes from a
//! stream derived from `(seed, u, v)` by a stable mixing function, so the
//! sampled graph does not depend on iteration or scheduling order and a
//! `(params, partition, seed)` triple always produces bit-identical output.

use crate::model::ModelParams;
use serde::{Deserialize, Serialize, Serializer};
use thiserror::Error;

#[derive(Debug, Error, PartialEq)]
pub enum GraphError {
    #[error("partition has {got} labels but the graph/model has {expected} vertices")]
    SizeMismatch { expected: usize, got: usize },
    #[error("partition must have equal community sizes; got {a} A-labels of {n}")]
    Unbalanced { a: usize, n: usize },
    #[error("vertex {0} out of range for {1} vertices")]
    VertexOutOfRange(usize, usize),
    #[error("self-loop at vertex {0}")]
    SelfLoop(usize),
    #[error("duplicate edge between {0} and {1}")]
    DuplicatePair(usize, usize),
    #[error("color {color} out of range 1..={colors}")]
    ColorOutOfRange { color: usize, colors: usize },
    #[error("line {line}: malformed input: {reason}")]
    Malformed { line: usize, reason: String },
}

/// Community label of a single vertex.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Community {
    A,
    B,
}

impl Community {
    pub fn flipped(self) -> Community {
        match self {
            Community::A => Community::B,
            Community::B => Community::A,
        }
    }
}

/// Balanced two-community labeling.
///
/// Canonical form puts vertex 0 in community A, so that a partition and its
/// complement share one representative.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Partition {
    labels: Vec<Community>,
}

impl Partition {
    /// Validates balance; does not canonicalize.
    pub fn from_labels(labels: Vec<Community>) -> Result<Self, GraphError> {
        let n = labels.len();
        let a = labels.iter().filter(|&&c| c == Community::A).count();
        if a * 2 != n {
            return Err(GraphError::Unbalanced { a, n });
        }
        Ok(Partition { labels })
    }

    /// The planted layout: vertices `0..n/2` in A, the rest in B.
    pub fn planted(n: usize) -> Self {
        let labels = (0..n)
            .map(|v| if v < n / 2 { Community::A } else { Community::B })
            .collect();
        Partition { labels }
    }

    /// Builds a partition from the set of A-side vertices.
    pub fn from_a_set(n: usize, a_set: &[usize]) -> Result<Self, GraphError> {
        let mut labels = vec![Community::B; n];
        for &v in a_set {
            if v >= n {
                return Err(GraphError::VertexOutOfRange(v, n));
            }
            labels[v] = Community::A;
        }
        Partition::from_labels(labels)
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn side(&self, v: usize) -> Community {
        self.labels[v]
    }

    pub fn labels(&self) -> &[Community] {
        &self.labels
    }

    pub fn complement(&self) -> Partition {
        Partition {
            labels: self.labels.iter().map(|c| c.flipped()).collect(),
        }
    }

    /// The representative with vertex 0 in A.
    pub fn canonical(&self) -> Partition {
        if self.labels[0] == Community::A {
            self.clone()
        } else {
            self.complement()
        }
    }

    /// Uniformly random balanced labeling, deterministic in the seed.
    pub fn random_balanced(n: usize, seed: u64) -> Result<Self, GraphError> {
        if n % 2 != 0 {
            return Err(GraphError::Unbalanced { a: n / 2, n });
        }
        use rand::seq::SliceRandom;
        use rand::SeedableRng;
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
        let mut vertices: Vec<usize> = (0..n).collect();
        vertices.shuffle(&mut rng);
        Partition::from_a_set(n, &vertices[..n / 2])
    }

    /// One character per vertex, `A` or `B`.
    pub fn to_label_string(&self) -> String {
        self.labels
            .iter()
            .map(|c| match c {
                Community::A => 'A',
                Community::B => 'B',
            })
            .collect()
    }
}

impl Serialize for Partition {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.serialize_str(&self.to_label_string())
    }
}

impl<'de> Deserialize<'de> for Partition {
    fn deserialize<D>(deserializer: D) -> Result<Self, D::Error>
    where
        D: serde::Deserializer<'de>,
    {
        let text = String::deserialize(deserializer)?;
        parse_partition(&text).map_err(serde::de::Error::custom)
    }
}

/// Partition file format: a single line of `A`/`B` characters.
pub fn parse_partition(text: &str) -> Result<Partition, GraphError> {
    let line = text.trim_end_matches(['\n', '\r']);
    let mut labels = Vec::with_capacity(line.len());
    for (i, ch) in line.chars().enumerate() {
        match ch {
            'A' => labels.push(Community::A),
            'B' => labels.push(Community::B),
            other => {
                return Err(GraphError::Malformed {
                    line: 1,
                    reason: format!("unexpected character {other:?} at position {i}"),
                })
            }
        }
    }
    Partition::from_labels(labels)
}

pub fn serialize_partition(partition: &Partition) -> String {
    let mut s = partition.to_label_string();
    s.push('\n');
    s
}

/// A single colored edge `u < v` with a 1-indexed color.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct ColoredEdge {
    pub u: u32,
    pub v: u32,
    pub color: u32,
}

/// Simple undirected graph where each present edge carries one color.
///
/// Immutable after construction; all counting helpers are read-only.
#[derive(Debug, Clone, PartialEq)]
pub struct ColoredGraph {
    n: usize,
    colors: usize,
    edges: Vec<ColoredEdge>,
    adjacency: Vec<Vec<(u32, u32)>>,
}

impl ColoredGraph {
    /// Validates, normalizes to `u < v`, sorts, and builds adjacency.
    pub fn new(
        n: usize,
        colors: usize,
        raw_edges: Vec<(usize, usize, usize)>,
    ) -> Result<Self, GraphError> {
        let mut edges = Vec::with_capacity(raw_edges.len());
        for (u, v, color) in raw_edges {
            if u >= n {
                return Err(GraphError::VertexOutOfRange(u, n));
            }
            if v >= n {
                return Err(GraphError::VertexOutOfRange(v, n));
            }
            if u == v {
                return Err(GraphError::SelfLoop(u));
            }
            if color == 0 || color > colors {
                return Err(GraphError::ColorOutOfRange { color, colors });
            }
            let (u, v) = if u < v { (u, v) } else { (v, u) };
            edges.push(ColoredEdge {
                u: u as u32,
                v: v as u32,
                color: color as u32,
            });
        }
        edges.sort_unstable_by_key(|e| (e.u, e.v));
        for pair in edges.windows(2) {
            if pair[0].u == pair[1].u && pair[0].v == pair[1].v {
                return Err(GraphError::DuplicatePair(
                    pair[0].u as usize,
                    pair[0].v as usize,
                ));
            }
        }
        let mut adjacency = vec![Vec::new(); n];
        for e in &edges {
            adjacency[e.u as usize].push((e.v, e.color));
            adjacency[e.v as usize].push((e.u, e.color));
        }
        Ok(ColoredGraph {
            n,
            colors,
            edges,
            adjacency,
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn color_count(&self) -> usize {
        self.colors
    }

    pub fn edges(&self) -> &[ColoredEdge] {
        &self.edges
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    /// Neighbors of `v` as `(neighbor, color)` pairs.
    pub fn neighbors(&self, v: usize) -> &[(u32, u32)] {
        &self.adjacency[v]
    }
}

const GOLDEN_GAMMA: u64 = 0x9E3779B97F4A7C15;

/// splitmix64 finalizer; bijective on u64.
fn mix64(mut z: u64) -> u64 {
    z = z.wrapping_add(GOLDEN_GAMMA);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58476D1CE4E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D049BB133111EB);
    z ^ (z >> 31)
}

/// Uniform draw in `[0, 1)` for pair `(u, v)` under `seed`; depends only on
/// the triple, never on call order.
fn pair_uniform(seed: u64, u: u32, v: u32) -> f64 {
    let key = mix64(seed ^ mix64(((u as u64) << 32) | v as u64));
    (key >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
}

/// Derives an independent stream seed from a master seed, so workers can
/// draw from disjoint deterministic streams regardless of scheduling.
pub fn derive_seed(seed: u64, stream: u64) -> u64 {
    mix64(seed ^ mix64(stream))
}

/// Samples a colored graph with the given planted partition.
///
/// Within-community pairs draw from `(p_1..p_m, 1−Σp)`, cross pairs from
/// `(q_1..q_m, 1−Σq)`.
pub fn sample_graph(
    params: &ModelParams,
    partition: &Partition,
    seed: u64,
) -> Result<ColoredGraph, GraphError> {
    let n = params.n();
    if partition.len() != n {
        return Err(GraphError::SizeMismatch {
            expected: n,
            got: partition.len(),
        });
    }
    let m = params.color_count();
    let mut cum_p = Vec::with_capacity(m);
    let mut cum_q = Vec::with_capacity(m);
    let mut acc = 0.0;
    for &p in params.p() {
        acc += p;
        cum_p.push(acc);
    }
    acc = 0.0;
    for &q in params.q() {
        acc += q;
        cum_q.push(acc);
    }

    let mut edges = Vec::new();
    for u in 0..n as u32 {
        for v in (u + 1)..n as u32 {
            let same = partition.side(u as usize) == partition.side(v as usize);
            let cum = if same { &cum_p } else { &cum_q };
            let draw = pair_uniform(seed, u, v);
            if let Some(color) = cum.iter().position(|&c| draw < c) {
                edges.push(ColoredEdge {
                    u,
                    v,
                    color: color as u32 + 1,
                });
            }
        }
    }
    let mut adjacency = vec![Vec::new(); n];
    for e in &edges {
        adjacency[e.u as usize].push((e.v, e.color));
        adjacency[e.v as usize].push((e.u, e.color));
    }
    Ok(ColoredGraph {
        n,
        colors: m,
        edges,
        adjacency,
    })
}

/// `E_i[v, S]`: per-color counts of edges between `v` and the vertex set
/// `S`. Membership of `v` itself in `S` is ignored.
pub fn count_colored_edges(
    graph: &ColoredGraph,
    v: usize,
    s: &[usize],
) -> Result<Vec<u64>, GraphError> {
    if v >= graph.n() {
        return Err(GraphError::VertexOutOfRange(v, graph.n()));
    }
    let mut mask = vec![false; graph.n()];
    for &x in s {
        if x >= graph.n() {
            return Err(GraphError::VertexOutOfRange(x, graph.n()));
        }
        mask[x] = true;
    }
    let mut counts = vec![0u64; graph.color_count()];
    for &(nbr, color) in graph.neighbors(v) {
        if mask[nbr as usize] {
            counts[color as usize - 1] += 1;
        }
    }
    Ok(counts)
}

/// `(l_i, x_i)`: per-color counts of within-community and cross-community
/// edges under `partition`. `l_i + x_i` is the total number of i-edges.
pub fn inner_and_cross_counts(
    graph: &ColoredGraph,
    partition: &Partition,
) -> Result<(Vec<u64>, Vec<u64>), GraphError> {
    if partition.len() != graph.n() {
        return Err(GraphError::SizeMismatch {
            expected: graph.n(),
            got: partition.len(),
        });
    }
    let mut inner = vec![0u64; graph.color_count()];
    let mut cross = vec![0u64; graph.color_count()];
    for e in graph.edges() {
        let idx = e.color as usize - 1;
        if partition.side(e.u as usize) == partition.side(e.v as usize) {
            inner[idx] += 1;
        } else {
            cross[idx] += 1;
        }
    }
    Ok((inner, cross))
}

/// Graph file format: header `n m`, then one `u v c` line per edge with
/// 0-indexed vertices and 1-indexed colors, ascending `(u, v)`.
pub fn parse_graph(text: &str) -> Result<ColoredGraph, GraphError> {
    let mut lines = text.lines().enumerate();
    let (_, header) = lines.next().ok_or(GraphError::Malformed {
        line: 1,
        reason: "empty input".into(),
    })?;
    let mut parts = header.split_whitespace();
    let n: usize = parse_field(&mut parts, 1, "vertex count")?;
    let m: usize = parse_field(&mut parts, 1, "color count")?;
    if parts.next().is_some() {
        return Err(GraphError::Malformed {
            line: 1,
            reason: "trailing fields after header".into(),
        });
    }
    let mut edges = Vec::new();
    for (idx, line) in lines {
        if line.trim().is_empty() {
            continue;
        }
        let mut parts = line.split_whitespace();
        let u: usize = parse_field(&mut parts, idx + 1, "source vertex")?;
        let v: usize = parse_field(&mut parts, idx + 1, "target vertex")?;
        let c: usize = parse_field(&mut parts, idx + 1, "color")?;
        if parts.next().is_some() {
            return Err(GraphError::Malformed {
                line: idx + 1,
                reason: "trailing fields after edge".into(),
            });
        }
        edges.push((u, v, c));
    }
    ColoredGraph::new(n, m, edges)
}

pub fn serialize_graph(graph: &ColoredGraph) -> String {
    let mut out = format!("{} {}\n", graph.n(), graph.color_count());
    for e in graph.edges() {
        out.push_str(&format!("{} {} {}\n", e.u, e.v, e.color));
    }
    out
}

fn parse_field<'a, I: Iterator<Item = &'a str>>(
    parts: &mut I,
    line: usize,
    what: &str,
) -> Result<usize, GraphError> {
    parts
        .next()
        .ok_or_else(|| GraphError::Malformed {
            line,
            reason: format!("missing {what}"),
        })?
        .parse()
        .map_err(|e| GraphError::Malformed {
            line,
            reason: format!("bad {what}: {e}"),
        })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::make_params;
    use proptest::prelude::*;

    fn tiny_graph() -> ColoredGraph {
        ColoredGraph::new(4, 1, vec![(0, 1, 1), (2, 3, 1)]).unwrap()
    }

    #[test]
    fn sampling_is_deterministic() {
        let params = make_params(50, vec![4.0, 1.0], vec![1.0, 2.0]).unwrap();
        let partition = Partition::planted(50);
        let a = sample_graph(&params, &partition, 7).unwrap();
        let b = sample_graph(&params, &partition, 7).unwrap();
        assert_eq!(a, b);
        let c = sample_graph(&params, &partition, 8).unwrap();
        assert_ne!(a, c);
    }

    #[test]
    fn sampling_rejects_size_mismatch() {
        let params = make_params(50, vec![4.0], vec![1.0]).unwrap();
        let partition = Partition::planted(10);
        assert!(matches!(
            sample_graph(&params, &partition, 0),
            Err(GraphError::SizeMismatch { .. })
        ));
    }

    #[test]
    fn mean_edge_count_matches_expectation() {
        // Mean total edges = 2·C(n/2,2)·p + (n/2)²·q; check 200 seeds stay
        // within 3 standard deviations of a Bernoulli-sum.
        let n = 1000;
        let params = make_params(n, vec![9.0], vec![1.0]).unwrap();
        let partition = Partition::planted(n);
        let half = n as f64 / 2.0;
        let p = params.p()[0];
        let q = params.q()[0];
        let within_pairs = half * (half - 1.0); // two communities of C(500,2)
        let cross_pairs = half * half;
        let mean = within_pairs * p + cross_pairs * q;
        let var = within_pairs * p * (1.0 - p) + cross_pairs * q * (1.0 - q);

        let seeds = 200;
        let mut total = 0.0;
        for seed in 0..seeds {
            total += sample_graph(&params, &partition, seed).unwrap().edge_count() as f64;
        }
        let observed = total / seeds as f64;
        let sigma_of_mean = (var / seeds as f64).sqrt();
        assert!(
            (observed - mean).abs() < 3.0 * sigma_of_mean,
            "observed {observed} vs mean {mean} (sigma {sigma_of_mean})"
        );
    }

    #[test]
    fn cross_edges_shrink_with_beta_at_fixed_seed() {
        // The per-pair draw is shared, so shrinking q shrinks the edge set
        // pair by pair.
        let n = 200;
        let partition = Partition::planted(n);
        let mut last = usize::MAX;
        for beta in [2.0, 1.0, 0.5, 0.1, 0.01] {
            let params = make_params(n, vec![4.0], vec![beta]).unwrap();
            let graph = sample_graph(&params, &partition, 99).unwrap();
            let (_, cross) = inner_and_cross_counts(&graph, &partition).unwrap();
            let total: u64 = cross.iter().sum();
            assert!(
                (total as usize) <= last,
                "cross edges must not grow as beta shrinks"
            );
            last = total as usize;
        }
    }

    #[test]
    fn count_colored_edges_cases() {
        let g = tiny_graph();
        assert_eq!(count_colored_edges(&g, 0, &[1, 2, 3]).unwrap(), vec![1]);
        assert_eq!(count_colored_edges(&g, 0, &[]).unwrap(), vec![0]);
        let empty = ColoredGraph::new(4, 2, vec![]).unwrap();
        assert_eq!(count_colored_edges(&empty, 0, &[1, 2]).unwrap(), vec![0, 0]);
        assert!(matches!(
            count_colored_edges(&g, 9, &[0]),
            Err(GraphError::VertexOutOfRange(9, 4))
        ));
        assert!(matches!(
            count_colored_edges(&g, 0, &[4]),
            Err(GraphError::VertexOutOfRange(4, 4))
        ));
    }

    #[test]
    fn inner_and_cross_counts_cases() {
        let g = tiny_graph();
        let aligned = Partition::planted(4);
        assert_eq!(
            inner_and_cross_counts(&g, &aligned).unwrap(),
            (vec![2], vec![0])
        );
        let crossed = Partition::from_a_set(4, &[0, 2]).unwrap();
        assert_eq!(
            inner_and_cross_counts(&g, &crossed).unwrap(),
            (vec![0], vec![2])
        );
        let empty = ColoredGraph::new(4, 1, vec![]).unwrap();
        assert_eq!(
            inner_and_cross_counts(&empty, &aligned).unwrap(),
            (vec![0], vec![0])
        );
    }

    #[test]
    fn graph_text_round_trip() {
        let text = "4 1\n0 1 1\n2 3 1\n";
        let g = parse_graph(text).unwrap();
        assert_eq!(g.edge_count(), 2);
        assert_eq!(serialize_graph(&g), text);
    }

    #[test]
    fn graph_text_rejects_bad_lines() {
        assert!(matches!(
            parse_graph("4 1\n0 0 1\n"),
            Err(GraphError::SelfLoop(0))
        ));
        assert!(matches!(
            parse_graph("4 1\n0 1 2\n"),
            Err(GraphError::ColorOutOfRange { color: 2, colors: 1 })
        ));
        assert!(matches!(
            parse_graph("4 1\n0 1 1\n1 0 1\n"),
            Err(GraphError::DuplicatePair(0, 1))
        ));
        assert!(matches!(
            parse_graph("4 1\n0 1\n"),
            Err(GraphError::Malformed { line: 2, .. })
        ));
        assert!(matches!(
            parse_graph("4 1\n0 4 1\n"),
            Err(GraphError::VertexOutOfRange(4, 4))
        ));
    }

    #[test]
    fn partition_text_round_trip() {
        let p = parse_partition("ABAB\n").unwrap();
        assert_eq!(p.side(0), Community::A);
        assert_eq!(p.side(1), Community::B);
        assert_eq!(serialize_partition(&p), "ABAB\n");
        assert!(parse_partition("AAB").is_err()); // odd length
        assert!(parse_partition("AAAB").is_err()); // unbalanced
        assert!(parse_partition("AXAB").is_err());
    }

    #[test]
    fn canonical_form_pins_vertex_zero() {
        let p = parse_partition("BABA").unwrap();
        let c = p.canonical();
        assert_eq!(c.side(0), Community::A);
        assert_eq!(c, p.complement());
        assert_eq!(c.canonical(), c);
    }

    #[test]
    fn per_pair_color_frequencies_match_model() {
        // Chi-squared sanity check on ~2·10^4 within pairs and 10^4 cross
        // pairs against the categorical (p, 1−Σp) / (q, 1−Σq).
        let n = 200;
        let params = make_params(n, vec![20.0, 8.0], vec![8.0, 12.0]).unwrap();
        let partition = Partition::planted(n);

        let mut within_obs = vec![0u64; 3]; // color1, color2, none
        let mut cross_obs = vec![0u64; 3];
        let mut within_pairs = 0u64;
        let mut cross_pairs = 0u64;
        let seeds = 4;
        for seed in 0..seeds {
            let graph = sample_graph(&params, &partition, 1000 + seed).unwrap();
            let mut seen = std::collections::HashMap::new();
            for e in graph.edges() {
                seen.insert((e.u, e.v), e.color);
            }
            for u in 0..n as u32 {
                for v in (u + 1)..n as u32 {
                    let same = (u as usize) < n / 2 && (v as usize) < n / 2
                        || (u as usize) >= n / 2 && (v as usize) >= n / 2;
                    let slot = match seen.get(&(u, v)) {
                        Some(&c) => c as usize - 1,
                        None => 2,
                    };
                    if same {
                        within_obs[slot] += 1;
                        within_pairs += 1;
                    } else {
                        cross_obs[slot] += 1;
                        cross_pairs += 1;
                    }
                }
            }
        }

        let chi2 = |obs: &[u64], probs: &[f64], total: u64| -> f64 {
            obs.iter()
                .zip(probs)
                .map(|(&o, &p)| {
                    let e = p * total as f64;
                    (o as f64 - e).powi(2) / e
                })
                .sum()
        };
        let p_probs = [params.p()[0], params.p()[1], 1.0 - params.p_star()];
        let q_probs = [params.q()[0], params.q()[1], 1.0 - params.q_star()];
        // 2 degrees of freedom; 99.9% quantile is 13.8.
        assert!(chi2(&within_obs, &p_probs, within_pairs) < 13.8);
        assert!(chi2(&cross_obs, &q_probs, cross_pairs) < 13.8);
    }

    proptest! {
        #[test]
        fn handshake_identity(seed in 0u64..500) {
            // Σ_{v∈A} E_i[v, A] = 2·l_i(A).
            let n = 20;
            let params = make_params(n, vec![3.0, 1.0], vec![0.5, 1.5]).unwrap();
            let partition = Partition::planted(n);
            let graph = sample_graph(&params, &partition, seed).unwrap();
            let a_set: Vec<usize> = (0..n / 2).collect();
            let mut sums = vec![0u64; 2];
            for &v in &a_set {
                let counts = count_colored_edges(&graph, v, &a_set).unwrap();
                for (s, c) in sums.iter_mut().zip(&counts) {
                    *s += c;
                }
            }
            let mut inner_a = vec![0u64; 2];
            for e in graph.edges() {
                if (e.u as usize) < n / 2 && (e.v as usize) < n / 2 {
                    inner_a[e.color as usize - 1] += 1;
                }
            }
            for (s, l) in sums.iter().zip(&inner_a) {
                prop_assert_eq!(*s, 2 * l);
            }
        }

        #[test]
        fn inner_plus_cross_accounts_for_all_edges(seed in 0u64..500, a_offset in 0usize..10) {
            let n = 16;
            let params = make_params(n, vec![3.0, 1.0], vec![1.0, 2.0]).unwrap();
            let planted = Partition::planted(n);
            let graph = sample_graph(&params, &planted, seed).unwrap();
            // Any partition, not just the planted one.
            let a_set: Vec<usize> = (0..n / 2).map(|i| (i + a_offset) % n).collect();
            let mut labels = vec![Community::B; n];
            let mut count = 0;
            for &v in &a_set {
                if labels[v] == Community::B {
                    labels[v] = Community::A;
                    count += 1;
                }
            }
            // Fill up to n/2 A labels if offsets collided.
            for l in labels.iter_mut() {
                if count == n / 2 {
                    break;
                }
                if *l == Community::B {
                    *l = Community::A;
                    count += 1;
                }
            }
            let partition = Partition::from_labels(labels).unwrap();
            let (inner, cross) = inner_and_cross_counts(&graph, &partition).unwrap();
            let total: u64 = inner.iter().chain(cross.iter()).sum();
            prop_assert_eq!(total as usize, graph.edge_count());
        }

        #[test]
        fn serialize_parse_round_trip(seed in 0u64..200) {
            let params = make_params(24, vec![3.0, 1.5], vec![0.5, 2.0]).unwrap();
            let graph = sample_graph(&params, &Partition::planted(24), seed).unwrap();
            let text = serialize_graph(&graph);
            let back = parse_graph(&text).unwrap();
            prop_assert_eq!(&back, &graph);
            prop_assert_eq!(serialize_graph(&back), text);
        }
    }
}
