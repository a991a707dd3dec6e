//! Matroid rank oracles, closure and flats, the richness condition, matroid
//! union, and the lattice embeddings between finite linear spaces.

use std::collections::{HashSet, VecDeque};
use std::fmt;
use std::sync::Arc;

use petgraph::unionfind::UnionFind;

use crate::error::{Error, Result};
use crate::graphlim::SimpleGraph;
use crate::limits::Limits;
use crate::rational::{int, Rational};
use crate::setfn::{bit_iter, full_bits, GroundSet, SetFunctionOracle, SubsetMask};

mod embed;
mod linear;
mod union;

pub use embed::{gfq_direct_sum_flat, gfqn_rank_preserving_embed, gfqn_stretch_embed};
pub use linear::LinearMatroid;
pub use union::{
    disjoint_bases, matroid_union, matroid_union_rank, min_formula_rank, min_formula_rank_with, DisjointBases,
    UnionSolution,
};

/// A matroid given by its rank function on subsets of `0..ground_size()`.
pub trait Matroid: Send + Sync + fmt::Debug {
    fn ground_size(&self) -> usize;

    /// Rank of the subset encoded by `bits`; bits beyond the ground are a
    /// caller bug.
    fn rank_bits(&self, bits: u64) -> usize;

    fn describe(&self) -> String;

    fn full_rank(&self) -> usize {
        self.rank_bits(full_bits(self.ground_size()))
    }

    fn is_independent_bits(&self, bits: u64) -> bool {
        self.rank_bits(bits) == bits.count_ones() as usize
    }
}

fn check_width(m: &dyn Matroid, x: &SubsetMask) -> Result<()> {
    if x.width() != m.ground_size() {
        Err(Error::MaskWidth {
            expected: m.ground_size(),
            found: x.width(),
        })
    } else {
        Ok(())
    }
}

pub fn rank(m: &dyn Matroid, x: &SubsetMask) -> Result<usize> {
    check_width(m, x)?;
    Ok(m.rank_bits(x.bits()))
}

pub(crate) fn closure_bits(m: &dyn Matroid, bits: u64) -> u64 {
    let r = m.rank_bits(bits);
    let outside = full_bits(m.ground_size()) & !bits;
    bit_iter(outside)
        .filter(|&e| m.rank_bits(bits | 1 << e) == r)
        .fold(bits, |acc, e| acc | 1 << e)
}

/// `{e : r(X ∪ {e}) = r(X)}`.
pub fn closure(m: &dyn Matroid, x: &SubsetMask) -> Result<SubsetMask> {
    check_width(m, x)?;
    SubsetMask::new(x.width(), closure_bits(m, x.bits()))
}

pub fn is_flat(m: &dyn Matroid, x: &SubsetMask) -> Result<bool> {
    Ok(closure(m, x)? == *x)
}

/// Rank oracle scaled by `1/normalization`; remembers the matroid so that
/// flat-restricted enumeration is available.
pub fn rank_oracle(m: Arc<dyn Matroid>, normalization: i64) -> Result<SetFunctionOracle> {
    if normalization <= 0 {
        return Err(Error::Invalid(format!(
            "normalization must be positive, got {normalization}"
        )));
    }
    let ground = GroundSet::new(m.ground_size())?;
    let inner = m.clone();
    let description = if normalization == 1 {
        format!("rank of {}", m.describe())
    } else {
        format!("rank/{normalization} of {}", m.describe())
    };
    let oracle = SetFunctionOracle::new(ground, description, move |x| {
        Rational::new(inner.rank_bits(x) as i64, normalization)
    })?;
    Ok(oracle.with_normalization(int(normalization)).with_matroid(m))
}

/// `ρ = r / r(E)` (plain rank when `r(E) = 0`).
pub fn normalized_rank_oracle(m: Arc<dyn Matroid>) -> Result<SetFunctionOracle> {
    let total = m.full_rank().max(1) as i64;
    rank_oracle(m, total)
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, serde::Serialize)]
pub struct Flat {
    pub rank: usize,
    pub mask: SubsetMask,
}

/// All flats, by breadth-first closure of single-element extensions,
/// sorted by `(rank, bits)`.
pub fn enumerate_flats(m: &dyn Matroid) -> Result<Vec<Flat>> {
    enumerate_flats_with(m, &Limits::default())
}

pub fn enumerate_flats_with(m: &dyn Matroid, limits: &Limits) -> Result<Vec<Flat>> {
    let n = m.ground_size();
    if n > limits.max_flat_ground {
        return Err(Error::GroundTooLarge {
            size: n,
            cap: limits.max_flat_ground,
        });
    }
    let full = full_bits(n);
    let bottom = closure_bits(m, 0);
    let mut seen: HashSet<u64> = HashSet::from([bottom]);
    let mut queue = VecDeque::from([bottom]);
    while let Some(f) = queue.pop_front() {
        for e in bit_iter(full & !f) {
            let g = closure_bits(m, f | 1 << e);
            if seen.insert(g) {
                if seen.len() > limits.max_flats {
                    return Err(Error::FlatExplosion {
                        cap: limits.max_flats,
                    });
                }
                queue.push_back(g);
            }
        }
    }
    let mut flats: Vec<Flat> = seen
        .into_iter()
        .map(|bits| Flat {
            rank: m.rank_bits(bits),
            mask: SubsetMask::new(n, bits).expect("closure stays in ground"),
        })
        .collect();
    flats.sort();
    Ok(flats)
}

#[derive(Debug, Clone, PartialEq, Eq, serde::Serialize)]
pub struct RichnessReport {
    pub holds: bool,
    /// `(F, A)` with `F ⊆ A`, `r(A) ≥ m` and `|A∖F| < k·(r(A) − r(F))`.
    pub witness: Option<(Flat, Flat)>,
}

/// Condition R(k, m): for flats `F ⊆ A` with `r(A) ≥ m`,
/// `|A∖F| ≥ k·(r(A) − r(F))`.
pub fn check_richness(m: &dyn Matroid, k: usize, min_rank: usize) -> Result<RichnessReport> {
    check_richness_with(m, k, min_rank, &Limits::default())
}

pub fn check_richness_with(
    m: &dyn Matroid,
    k: usize,
    min_rank: usize,
    limits: &Limits,
) -> Result<RichnessReport> {
    if m.full_rank() < min_rank {
        return Ok(RichnessReport {
            holds: true,
            witness: None,
        });
    }
    let flats = enumerate_flats_with(m, limits)?;
    for a in flats.iter().filter(|a| a.rank >= min_rank) {
        for f in flats.iter().filter(|f| f.rank <= a.rank) {
            if !f.mask.is_subset_of(&a.mask) {
                continue;
            }
            let gap = (a.mask.bits() & !f.mask.bits()).count_ones() as usize;
            if gap < k * (a.rank - f.rank) {
                return Ok(RichnessReport {
                    holds: false,
                    witness: Some((f.clone(), a.clone())),
                });
            }
        }
    }
    Ok(RichnessReport {
        holds: true,
        witness: None,
    })
}

/// Cycle matroid of a simple graph; the ground set is the edge list in the
/// graph's canonical order.
#[derive(Debug, Clone)]
pub struct GraphicMatroid {
    graph: SimpleGraph,
}

impl GraphicMatroid {
    pub fn new(graph: SimpleGraph) -> Result<Self> {
        if graph.edge_count() > 64 {
            return Err(Error::GroundTooLarge {
                size: graph.edge_count(),
                cap: 64,
            });
        }
        Ok(GraphicMatroid { graph })
    }

    pub fn graph(&self) -> &SimpleGraph {
        &self.graph
    }
}

impl Matroid for GraphicMatroid {
    fn ground_size(&self) -> usize {
        self.graph.edge_count()
    }

    fn rank_bits(&self, bits: u64) -> usize {
        let mut uf = UnionFind::<usize>::new(self.graph.node_count());
        let edges = self.graph.edges();
        bit_iter(bits)
            .filter(|&e| {
                let (u, v) = edges[e];
                uf.union(u, v)
            })
            .count()
    }

    fn describe(&self) -> String {
        format!(
            "cycle matroid of a graph with {} nodes and {} edges",
            self.graph.node_count(),
            self.graph.edge_count()
        )
    }
}

/// `ρ_G = r_G / |V|`, the cycle-matroid rank normalized by node count.
pub fn cycle_rank_oracle(graph: &SimpleGraph) -> Result<SetFunctionOracle> {
    let n = graph.node_count().max(1) as i64;
    rank_oracle(Arc::new(GraphicMatroid::new(graph.clone())?), n)
}

/// Disjoint union of matroids; part `i` occupies a contiguous block of the
/// ground set.
#[derive(Debug, Clone)]
pub struct DirectSumMatroid {
    parts: Vec<Arc<dyn Matroid>>,
    offsets: Vec<usize>,
    size: usize,
}

impl DirectSumMatroid {
    pub fn new(parts: Vec<Arc<dyn Matroid>>) -> Result<Self> {
        let mut offsets = Vec::with_capacity(parts.len());
        let mut size = 0;
        for p in &parts {
            offsets.push(size);
            size += p.ground_size();
        }
        if size > 64 {
            return Err(Error::GroundTooLarge { size, cap: 64 });
        }
        Ok(DirectSumMatroid {
            parts,
            offsets,
            size,
        })
    }

    /// Ground-set block of part `i`.
    pub fn block(&self, i: usize) -> SubsetMask {
        let bits = full_bits(self.parts[i].ground_size()) << self.offsets[i];
        SubsetMask::new(self.size, bits).expect("block inside ground")
    }
}

impl Matroid for DirectSumMatroid {
    fn ground_size(&self) -> usize {
        self.size
    }

    fn rank_bits(&self, bits: u64) -> usize {
        self.parts
            .iter()
            .zip(&self.offsets)
            .map(|(p, &off)| p.rank_bits((bits >> off) & full_bits(p.ground_size())))
            .sum()
    }

    fn describe(&self) -> String {
        let inner: Vec<String> = self.parts.iter().map(|p| p.describe()).collect();
        format!("direct sum of [{}]", inner.join("; "))
    }
}

/// The uniform matroid `U_{r,n}`.
#[derive(Debug, Clone)]
pub struct UniformMatroid {
    pub rank: usize,
    pub size: usize,
}

impl Matroid for UniformMatroid {
    fn ground_size(&self) -> usize {
        self.size
    }

    fn rank_bits(&self, bits: u64) -> usize {
        (bits.count_ones() as usize).min(self.rank)
    }

    fn describe(&self) -> String {
        format!("U({},{})", self.rank, self.size)
    }
}

/// `X ↦ r(X ∩ A)`: the matroid restricted to `A`, everything else a loop.
#[derive(Debug, Clone)]
pub struct Restriction<'a> {
    pub inner: &'a dyn Matroid,
    pub mask: u64,
}

impl Matroid for Restriction<'_> {
    fn ground_size(&self) -> usize {
        self.inner.ground_size()
    }

    fn rank_bits(&self, bits: u64) -> usize {
        self.inner.rank_bits(bits & self.mask)
    }

    fn describe(&self) -> String {
        format!("{} restricted to {:#x}", self.inner.describe(), self.mask)
    }
}
