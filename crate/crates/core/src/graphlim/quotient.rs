//! Weighted quotients of graphs, the κ/γ correspondence, randomized
//! rounding on blow-ups, and edge-coloring quotients of the cycle rank.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use super::cut::{cut_capacity_oracle, CutNormalization};
use super::graph::{BlowUp, SimpleGraph};
use crate::error::{Error, Result};
use crate::limits::{check_cap, Limits};
use crate::matroid::cycle_rank_oracle;
use crate::rational::{int, Rational};
use crate::setfn::{quotient_point_with, subset_unions, QuotientPoint, SubsetMask};

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct WeightedQuotient {
    pub k: usize,
    /// `|V_i| / |V|`.
    #[serde(with = "crate::rational::exact_vec")]
    pub alpha: Vec<Rational>,
    /// `e(V_i, V_j) / (|V_i||V_j|)`, zero when a class is empty.
    #[serde(serialize_with = "crate::rational::exact_matrix::serialize")]
    pub beta: Vec<Vec<Rational>>,
    /// `α_i α_j β_ij = e(V_i, V_j) / |V|²`.
    #[serde(serialize_with = "crate::rational::exact_matrix::serialize")]
    pub gamma: Vec<Vec<Rational>>,
}

/// Class masks of a labeling `labels[v] ∈ 0..k`.
pub fn class_masks(labels: &[usize], k: usize) -> Result<Vec<u64>> {
    if k == 0 {
        return Err(Error::InvalidPartition("no classes".into()));
    }
    if labels.len() > 64 {
        return Err(Error::InvalidPartition(format!("{} nodes", labels.len())));
    }
    let mut masks = vec![0u64; k];
    for (v, &l) in labels.iter().enumerate() {
        if l >= k {
            return Err(Error::InvalidPartition(format!("node {v} has class {l} ≥ {k}")));
        }
        masks[l] |= 1 << v;
    }
    Ok(masks)
}

fn check_labels(g: &SimpleGraph, labels: &[usize]) -> Result<()> {
    if labels.len() != g.node_count() {
        return Err(Error::InvalidPartition(format!(
            "{} labels for {} nodes",
            labels.len(),
            g.node_count()
        )));
    }
    Ok(())
}

/// `G/P` for the partition given by `labels` (empty classes allowed).
pub fn weighted_quotient(g: &SimpleGraph, labels: &[usize], k: usize) -> Result<WeightedQuotient> {
    check_labels(g, labels)?;
    let n = g.node_count() as i64;
    if n == 0 {
        return Err(Error::InvalidPartition("graph without nodes".into()));
    }
    let masks = class_masks(labels, k)?;
    let size = |i: usize| masks[i].count_ones() as i64;
    let alpha = (0..k).map(|i| Rational::new(size(i), n)).collect();
    let mut beta = vec![vec![int(0); k]; k];
    let mut gamma = vec![vec![int(0); k]; k];
    for i in 0..k {
        for j in 0..k {
            let e = g.e(masks[i], masks[j]) as i64;
            gamma[i][j] = Rational::new(e, n * n);
            if size(i) > 0 && size(j) > 0 {
                beta[i][j] = Rational::new(e, size(i) * size(j));
            }
        }
    }
    Ok(WeightedQuotient {
        k,
        alpha,
        beta,
        gamma,
    })
}

/// `(κ_G/P)(A) = Σ_{i∈A, j∉A} γ_ij`, the cut capacity quotient under
/// node-squared normalization.
pub fn kappa_from_gamma(wq: &WeightedQuotient) -> QuotientPoint {
    let k = wq.k;
    let coords = (0..1usize << k)
        .map(|a| {
            let mut sum = int(0);
            for i in (0..k).filter(|i| a >> i & 1 == 1) {
                for j in (0..k).filter(|j| a >> j & 1 == 0) {
                    sum += wq.gamma[i][j];
                }
            }
            sum
        })
        .collect();
    QuotientPoint::from_raw(k, coords)
}

/// `γ_ij = ½(κ(V_i) + κ(V_j) − κ(V_i ∪ V_j))` for `i ≠ j`. The diagonal is
/// not determined by κ and is returned as 0.
pub fn gamma_from_kappa(kappa: &QuotientPoint) -> Vec<Vec<Rational>> {
    let k = kappa.k();
    let half = Rational::new(1, 2);
    let mut gamma = vec![vec![int(0); k]; k];
    for i in 0..k {
        for j in (0..k).filter(|&j| j != i) {
            gamma[i][j] =
                half * (kappa.at(1 << i) + kappa.at(1 << j) - kappa.at(1 << i | 1 << j));
        }
    }
    gamma
}

/// `κ_G/P` under the given normalization, directly from the oracle.
pub fn cut_quotient(
    g: &SimpleGraph,
    labels: &[usize],
    k: usize,
    norm: CutNormalization,
) -> Result<QuotientPoint> {
    check_labels(g, labels)?;
    let masks = class_masks(labels, k)?;
    let oracle = cut_capacity_oracle(g, norm)?;
    let tuple = masks
        .iter()
        .map(|&m| SubsetMask::new(g.node_count(), m))
        .collect::<Result<Vec<_>>>()?;
    let limits = Limits {
        max_k: k.max(Limits::default().max_k),
        ..Limits::default()
    };
    quotient_point_with(&oracle, &tuple, &limits)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Rounding {
    /// Partition of the blow-up that never splits a class.
    pub rounded: Vec<usize>,
    /// The same partition read on the base graph.
    pub base_labels: Vec<usize>,
    /// `‖κ/P − κ/P′‖∞` under node-squared normalization.
    #[serde(with = "crate::rational::exact_str")]
    pub deviation: Rational,
    pub seed: u64,
}

/// Moves each blow-up class `V_u` wholly into class `i` with probability
/// `|U_i ∩ V_u| / t`, by copying the label of a uniformly chosen member.
pub fn rounding_partition(blow: &BlowUp, labels: &[usize], k: usize, seed: u64) -> Result<Rounding> {
    let g = &blow.graph;
    check_labels(g, labels)?;
    if blow.base_nodes * blow.t != g.node_count() {
        return Err(Error::Invalid("blow-up class structure does not match the graph".into()));
    }
    class_masks(labels, k)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let base_labels: Vec<usize> = (0..blow.base_nodes)
        .map(|u| labels[u * blow.t + rng.gen_range(0..blow.t)])
        .collect();
    let rounded: Vec<usize> = (0..g.node_count())
        .map(|x| base_labels[blow.class_of(x)])
        .collect();
    let before = cut_quotient(g, labels, k, CutNormalization::NodesSquared)?;
    let after = cut_quotient(g, &rounded, k, CutNormalization::NodesSquared)?;
    let deviation = before
        .coords()
        .iter()
        .zip(after.coords())
        .map(|(a, b)| crate::rational::abs_diff(a, b))
        .max()
        .unwrap_or_else(|| int(0));
    Ok(Rounding {
        rounded,
        base_labels,
        deviation,
        seed,
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ColoringQuotient {
    /// `ρ_G/c` with `ρ_G = r_G/|V|`.
    pub point: QuotientPoint,
    /// `components[c][u]`: size of the component of `u` in the color-`c`
    /// subgraph.
    pub components: Vec<Vec<usize>>,
}

/// Quotient of the normalized cycle rank by the color classes of an edge
/// coloring (`coloring[e]` for edges in canonical order).
pub fn edge_coloring_quotient(g: &SimpleGraph, coloring: &[usize], colors: usize) -> Result<ColoringQuotient> {
    edge_coloring_quotient_with(g, coloring, colors, &Limits::default())
}

pub fn edge_coloring_quotient_with(
    g: &SimpleGraph,
    coloring: &[usize],
    colors: usize,
    limits: &Limits,
) -> Result<ColoringQuotient> {
    check_cap("color count", colors, limits.max_colors)?;
    if colors == 0 {
        return Err(Error::InvalidColor("at least one color is needed".into()));
    }
    if coloring.len() != g.edge_count() {
        return Err(Error::InvalidColor(format!(
            "{} colors for {} edges",
            coloring.len(),
            g.edge_count()
        )));
    }
    let mut classes = vec![0u64; colors];
    for (e, &c) in coloring.iter().enumerate() {
        if c >= colors {
            return Err(Error::InvalidColor(format!("edge {e} has color {c} ≥ {colors}")));
        }
        classes[c] |= 1 << e;
    }
    let oracle = cycle_rank_oracle(g)?;
    let coords = subset_unions(&classes)
        .into_iter()
        .map(|u| oracle.eval_bits(u))
        .collect();
    Ok(ColoringQuotient {
        point: QuotientPoint::from_raw(colors, coords),
        components: classes.iter().map(|&m| g.component_sizes(m)).collect(),
    })
}
