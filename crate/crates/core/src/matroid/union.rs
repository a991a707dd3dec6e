//! Matroid union by augmenting paths in the exchange graph.
//!
//! The solver keeps disjoint sets `I_1, …, I_k` with `I_i` independent in
//! `M_i` and inserts ground elements one at a time along shortest
//! augmenting paths. When no element can be added, the elements reachable
//! from the uncovered ones form a set `R`, and `Y = E∖R` attains the
//! min-formula `r_Σ(E) = min_Y |Y| + Σ r_i(E∖Y)`.

use std::collections::VecDeque;

use super::{Matroid, Restriction};
use crate::error::{Error, Result};
use crate::limits::Limits;
use crate::setfn::{bit_iter, full_bits, SubsetMask};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct UnionSolution {
    /// `parts[i]` is independent in matroid `i`; parts are disjoint.
    pub parts: Vec<u64>,
    pub rank: usize,
    /// `Y` minimizing `|Y| + Σ r_i(E∖Y)`.
    pub certificate: u64,
}

fn common_ground(matroids: &[&dyn Matroid]) -> Result<usize> {
    let n = matroids
        .first()
        .map(|m| m.ground_size())
        .ok_or_else(|| Error::Invalid("matroid union of an empty list".into()))?;
    if let Some(m) = matroids.iter().find(|m| m.ground_size() != n) {
        return Err(Error::MaskWidth {
            expected: n,
            found: m.ground_size(),
        });
    }
    Ok(n)
}

struct Solver<'a> {
    matroids: &'a [&'a dyn Matroid],
    n: usize,
    parts: Vec<u64>,
    owner: Vec<Option<usize>>,
}

impl<'a> Solver<'a> {
    fn can_insert(&self, i: usize, x: usize) -> bool {
        self.matroids[i].is_independent_bits(self.parts[i] | 1 << x)
    }

    fn can_exchange(&self, i: usize, x: usize, y: usize) -> bool {
        self.matroids[i].is_independent_bits((self.parts[i] & !(1 << y)) | 1 << x)
    }

    /// Breadth-first search from `sources`. Returns the last element and
    /// the matroid that accepts it when an augmenting path exists; `pred`
    /// records `(previous element, matroid)` for each reached element.
    fn search(
        &self,
        sources: &[usize],
        pred: &mut [Option<(usize, usize)>],
        reached: &mut [bool],
    ) -> Option<(usize, usize)> {
        let mut queue: VecDeque<usize> = sources.iter().copied().collect();
        for &s in sources {
            reached[s] = true;
        }
        while let Some(x) = queue.pop_front() {
            for i in 0..self.matroids.len() {
                if self.owner[x] == Some(i) {
                    continue;
                }
                if self.can_insert(i, x) {
                    return Some((x, i));
                }
            }
            for i in 0..self.matroids.len() {
                if self.owner[x] == Some(i) {
                    continue;
                }
                for y in bit_iter(self.parts[i]) {
                    if !reached[y] && self.can_exchange(i, x, y) {
                        reached[y] = true;
                        pred[y] = Some((x, i));
                        queue.push_back(y);
                    }
                }
            }
        }
        None
    }

    fn augment(&mut self, s: usize) -> bool {
        let mut pred = vec![None; self.n];
        let mut reached = vec![false; self.n];
        let Some((mut cur, mut target)) = self.search(&[s], &mut pred, &mut reached) else {
            return false;
        };
        loop {
            if let Some(old) = self.owner[cur] {
                self.parts[old] &= !(1 << cur);
            }
            self.parts[target] |= 1 << cur;
            self.owner[cur] = Some(target);
            if cur == s {
                return true;
            }
            let (prev, via) = pred[cur].expect("path reaches back to the source");
            cur = prev;
            target = via;
        }
    }
}

/// Maximum-size union of independent sets, with a min-formula certificate.
pub fn matroid_union(matroids: &[&dyn Matroid]) -> Result<UnionSolution> {
    let n = common_ground(matroids)?;
    let mut solver = Solver {
        matroids,
        n,
        parts: vec![0; matroids.len()],
        owner: vec![None; n],
    };
    for s in 0..n {
        solver.augment(s);
    }
    let uncovered: Vec<usize> = (0..n).filter(|&e| solver.owner[e].is_none()).collect();
    let mut pred = vec![None; n];
    let mut reached = vec![false; n];
    let found = solver.search(&uncovered, &mut pred, &mut reached);
    debug_assert!(found.is_none(), "final union must be maximal");
    let reachable = (0..n)
        .filter(|&e| reached[e])
        .fold(0u64, |acc, e| acc | 1 << e);
    let rank = solver.parts.iter().map(|p| p.count_ones() as usize).sum();
    Ok(UnionSolution {
        parts: solver.parts,
        rank,
        certificate: full_bits(n) & !reachable,
    })
}

pub fn matroid_union_rank(matroids: &[&dyn Matroid]) -> Result<usize> {
    Ok(matroid_union(matroids)?.rank)
}

/// `min_{Y ⊆ E} |Y| + Σ r_i(E∖Y)` by scanning every `Y`.
pub fn min_formula_rank(matroids: &[&dyn Matroid]) -> Result<usize> {
    min_formula_rank_with(matroids, &Limits::default())
}

pub fn min_formula_rank_with(matroids: &[&dyn Matroid], limits: &Limits) -> Result<usize> {
    let n = common_ground(matroids)?;
    if n > limits.max_union_brute_ground {
        return Err(Error::GroundTooLarge {
            size: n,
            cap: limits.max_union_brute_ground,
        });
    }
    let full = full_bits(n);
    Ok((0..=full)
        .map(|y| {
            y.count_ones() as usize
                + matroids
                    .iter()
                    .map(|m| m.rank_bits(full & !y))
                    .sum::<usize>()
        })
        .min()
        .expect("at least the empty Y"))
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum DisjointBases {
    /// `bases[i] ⊆ A_i` is a basis of `A_i`; the bases are pairwise disjoint.
    Found(Vec<SubsetMask>),
    /// No disjoint bases exist: `|Y| + Σ r(A_i∖Y) = value < Σ r(A_i)`.
    Deficient {
        certificate: SubsetMask,
        value: usize,
        required: usize,
    },
}

/// Disjoint `B_i ⊆ A_i` with each `B_i` a basis of `A_i`, via the union of
/// the restrictions `X ↦ r(X ∩ A_i)`. Works for any sets; the usual
/// inputs are flats.
pub fn disjoint_bases(m: &dyn Matroid, sets: &[SubsetMask]) -> Result<DisjointBases> {
    let n = m.ground_size();
    if let Some(bad) = sets.iter().find(|a| a.width() != n) {
        return Err(Error::MaskWidth {
            expected: n,
            found: bad.width(),
        });
    }
    if sets.is_empty() {
        return Ok(DisjointBases::Found(Vec::new()));
    }
    let restrictions: Vec<Restriction> = sets
        .iter()
        .map(|a| Restriction {
            inner: m,
            mask: a.bits(),
        })
        .collect();
    let refs: Vec<&dyn Matroid> = restrictions.iter().map(|r| r as &dyn Matroid).collect();
    let solution = matroid_union(&refs)?;
    let required: usize = sets.iter().map(|a| m.rank_bits(a.bits())).sum();
    if solution.rank == required {
        let bases = solution
            .parts
            .iter()
            .map(|&b| SubsetMask::new(n, b).expect("parts stay in ground"))
            .collect();
        return Ok(DisjointBases::Found(bases));
    }
    let y = solution.certificate;
    let value = y.count_ones() as usize
        + sets
            .iter()
            .map(|a| m.rank_bits(a.bits() & !y))
            .sum::<usize>();
    Ok(DisjointBases::Deficient {
        certificate: SubsetMask::new(n, y).expect("certificate stays in ground"),
        value,
        required,
    })
}
