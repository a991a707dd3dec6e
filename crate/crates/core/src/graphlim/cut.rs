//! Cut distances and cut-capacity setfunctions.

use std::str::FromStr;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::graph::{blow_up, SimpleGraph};
use crate::error::{Error, Result};
use crate::limits::Limits;
use crate::rational::{int, Rational};
use crate::setfn::{full_bits, GroundSet, SetFunctionOracle};

/// Denominator used for cut capacities.
///
/// `Edges` is `|E|`, `TwiceEdges` is `2|E|` (the step-graphon convention,
/// since `∫W_G = 2|E|/|V|²`), `NodesSquared` is `|V|²` (the convention under
/// which cut capacities are compared with the labeled cut distance).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum CutNormalization {
    Edges,
    TwiceEdges,
    NodesSquared,
}

impl CutNormalization {
    pub fn name(&self) -> &'static str {
        match self {
            CutNormalization::Edges => "edges",
            CutNormalization::TwiceEdges => "twice-edges",
            CutNormalization::NodesSquared => "nodes-squared",
        }
    }

    pub fn denominator(&self, g: &SimpleGraph) -> Result<i64> {
        let m = g.edge_count() as i64;
        let n = g.node_count() as i64;
        let d = match self {
            CutNormalization::Edges => m,
            CutNormalization::TwiceEdges => 2 * m,
            CutNormalization::NodesSquared => n * n,
        };
        if d == 0 {
            return Err(Error::DegenerateNormalization { norm: self.name() });
        }
        Ok(d)
    }
}

impl FromStr for CutNormalization {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "edges" => Ok(CutNormalization::Edges),
            "twice-edges" => Ok(CutNormalization::TwiceEdges),
            "nodes-squared" => Ok(CutNormalization::NodesSquared),
            other => Err(Error::Invalid(format!(
                "unknown normalization {other:?} (edges, twice-edges, nodes-squared)"
            ))),
        }
    }
}

/// `κ(X) = e(X, V∖X) / denominator` on the node set.
pub fn cut_capacity_oracle(g: &SimpleGraph, norm: CutNormalization) -> Result<SetFunctionOracle> {
    let denom = norm.denominator(g)?;
    let graph = g.clone();
    let full = full_bits(g.node_count());
    let oracle = SetFunctionOracle::new(
        GroundSet::new(g.node_count())?,
        format!(
            "cut capacity ({}) of a graph with {} nodes and {} edges",
            norm.name(),
            g.node_count(),
            g.edge_count()
        ),
        move |x| Rational::new(graph.e(x, full & !x) as i64, denom),
    )?;
    Ok(oracle.with_normalization(int(denom)))
}

/// Largest `|e_G(S,T) − e_H(S,T)|` over all `S, T`, as a raw count, with a
/// maximizing pair.
///
/// With `S` fixed the objective is `Σ_{v∈T} c_S(v)` where
/// `c_S(v) = Σ_{u∈S} (A_G − A_H)(u, v)`, so the best `T` takes all positive
/// (or all negative) columns. `S` runs over a Gray code per chunk.
pub(crate) fn max_cut_discrepancy(g: &SimpleGraph, h: &SimpleGraph) -> (i64, u64, u64) {
    let n = g.node_count();
    let diff: Vec<Vec<i64>> = (0..n)
        .map(|u| {
            (0..n)
                .map(|v| g.is_adjacent(u, v) as i64 - h.is_adjacent(u, v) as i64)
                .collect()
        })
        .collect();
    let high = n.min(6);
    let low = n - high;
    (0..1u64 << high)
        .into_par_iter()
        .map(|prefix| {
            let base = prefix << low;
            let mut col = vec![0i64; n];
            for u in (0..n).filter(|&u| base >> u & 1 == 1) {
                for v in 0..n {
                    col[v] += diff[u][v];
                }
            }
            let mut best = (-1i64, 0u64, 0u64);
            let mut s = base;
            let mut consider = |s: u64, col: &[i64]| {
                let (mut pos, mut neg, mut tpos, mut tneg) = (0i64, 0i64, 0u64, 0u64);
                for (v, &c) in col.iter().enumerate() {
                    if c > 0 {
                        pos += c;
                        tpos |= 1 << v;
                    } else if c < 0 {
                        neg -= c;
                        tneg |= 1 << v;
                    }
                }
                let cand = if pos >= neg { (pos, s, tpos) } else { (neg, s, tneg) };
                if cand.0 > best.0 {
                    best = cand;
                }
            };
            consider(s, &col);
            for step in 1..1u64 << low {
                let bit = step.trailing_zeros() as usize;
                let adding = s >> bit & 1 == 0;
                s ^= 1 << bit;
                for v in 0..n {
                    if adding {
                        col[v] += diff[bit][v];
                    } else {
                        col[v] -= diff[bit][v];
                    }
                }
                consider(s, &col);
            }
            best
        })
        .reduce(
            || (-1, 0, 0),
            |a, b| match a.0.cmp(&b.0) {
                std::cmp::Ordering::Less => b,
                std::cmp::Ordering::Greater => a,
                std::cmp::Ordering::Equal => a.min(b),
            },
        )
}

/// `d_□(G, H) = max_{S,T} |e_G(S,T) − e_H(S,T)| / |V|²` on a common node
/// set.
pub fn cut_dist_labeled(g: &SimpleGraph, h: &SimpleGraph) -> Result<Rational> {
    cut_dist_labeled_with(g, h, &Limits::default())
}

pub fn cut_dist_labeled_with(g: &SimpleGraph, h: &SimpleGraph, limits: &Limits) -> Result<Rational> {
    let n = g.node_count();
    if n != h.node_count() {
        return Err(Error::NodeSetMismatch {
            left: n,
            right: h.node_count(),
        });
    }
    crate::limits::check_cap("node count for exact cut distance", n, limits.max_cut_nodes)?;
    if n == 0 {
        return Ok(int(0));
    }
    let (best, _, _) = max_cut_discrepancy(g, h);
    Ok(Rational::new(best, (n * n) as i64))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct UnlabeledBound {
    /// An upper bound on the unlabeled cut distance, never the distance
    /// itself.
    #[serde(with = "crate::rational::exact_str")]
    pub upper: Rational,
    /// Blow-up parameter at which the bound was found: with
    /// `L = lcm(|V(G)|, |V(H)|)` the compared graphs are `G(L·t/|V(G)|)` and
    /// `H(L·t/|V(H)|)`.
    pub t: usize,
    /// Node `x` of the blown-up `H` is placed at `bijection[x]`.
    pub bijection: Vec<usize>,
    /// Whether every bijection was tried at this `t`.
    pub exhaustive: bool,
}

const EXHAUSTIVE_NODES: usize = 8;
const LOCAL_SEARCH_NODES: usize = 16;

/// Upper bound on `δ_□(G, H)` from labeled distances of `G(mt)` and
/// `H(nt)^β` over `t ≤ t_max` and sampled, locally improved bijections `β`.
/// Bijections are exhausted when the blow-ups have at most 8 nodes.
pub fn cut_dist_unlabeled_upper(
    g: &SimpleGraph,
    h: &SimpleGraph,
    t_max: usize,
    trials: usize,
    seed: u64,
) -> Result<UnlabeledBound> {
    cut_dist_unlabeled_upper_with(g, h, t_max, trials, seed, &Limits::default())
}

pub fn cut_dist_unlabeled_upper_with(
    g: &SimpleGraph,
    h: &SimpleGraph,
    t_max: usize,
    trials: usize,
    seed: u64,
    limits: &Limits,
) -> Result<UnlabeledBound> {
    if t_max == 0 {
        return Err(Error::Invalid("t_max must be at least 1".into()));
    }
    let (n, m) = (g.node_count(), h.node_count());
    if n == 0 || m == 0 {
        return Err(Error::Invalid("graphs must have nodes".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut best: Option<UnlabeledBound> = None;
    for t in 1..=t_max {
        let base = num_integer::lcm(n, m);
        let size = base * t;
        if size > limits.max_cut_nodes {
            if t == 1 {
                crate::limits::check_cap("blow-up size for cut distance", size, limits.max_cut_nodes)?;
            }
            break;
        }
        let gg = blow_up(g, base / n * t)?.graph;
        let hh = blow_up(h, base / m * t)?.graph;
        let eval = |perm: &[usize]| max_cut_discrepancy(&gg, &hh.permuted(perm)).0;
        let (raw, perm, exhaustive) = if size <= EXHAUSTIVE_NODES {
            let (raw, perm) = best_over_all_permutations(size, &eval);
            (raw, perm, true)
        } else {
            let mut perm: Vec<usize> = (0..size).collect();
            let mut raw = eval(&perm);
            for _ in 0..trials {
                let mut cand: Vec<usize> = (0..size).collect();
                cand.shuffle(&mut rng);
                let mut v = eval(&cand);
                if size <= LOCAL_SEARCH_NODES {
                    v = improve_by_swaps(&mut cand, v, &eval, &mut rng);
                }
                if v < raw {
                    raw = v;
                    perm = cand;
                }
            }
            (raw, perm, false)
        };
        let upper = Rational::new(raw, (size * size) as i64);
        if best.as_ref().map_or(true, |b| upper < b.upper) {
            best = Some(UnlabeledBound {
                upper,
                t,
                bijection: perm,
                exhaustive,
            });
        }
        if raw == 0 {
            break;
        }
    }
    Ok(best.expect("t = 1 always evaluated"))
}

fn best_over_all_permutations(size: usize, eval: &dyn Fn(&[usize]) -> i64) -> (i64, Vec<usize>) {
    // Heap's algorithm
    let mut perm: Vec<usize> = (0..size).collect();
    let mut best = (eval(&perm), perm.clone());
    let mut c = vec![0usize; size];
    let mut i = 0;
    while i < size {
        if c[i] < i {
            if i % 2 == 0 {
                perm.swap(0, i);
            } else {
                perm.swap(c[i], i);
            }
            let v = eval(&perm);
            if v < best.0 {
                best = (v, perm.clone());
                if v == 0 {
                    break;
                }
            }
            c[i] += 1;
            i = 0;
        } else {
            c[i] = 0;
            i += 1;
        }
    }
    best
}

fn improve_by_swaps(
    perm: &mut [usize],
    mut value: i64,
    eval: &dyn Fn(&[usize]) -> i64,
    rng: &mut ChaCha8Rng,
) -> i64 {
    let size = perm.len();
    let max_passes = 4;
    for _ in 0..max_passes {
        let mut improved = false;
        let offset = rng.gen_range(0..size);
        for a in 0..size {
            for b in a + 1..size {
                let (x, y) = ((a + offset) % size, (b + offset) % size);
                perm.swap(x, y);
                let v = eval(perm);
                if v < value {
                    value = v;
                    improved = true;
                } else {
                    perm.swap(x, y);
                }
            }
        }
        if !improved || value == 0 {
            break;
        }
    }
    value
}
