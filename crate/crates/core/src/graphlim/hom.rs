//! Homomorphism densities and the complement-density setfunction τ.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use rayon::prelude::*;

use super::graph::SimpleGraph;
use super::graphon::StepGraphon;
use crate::error::{Error, Result};
use crate::limits::{check_cap, Limits};
use crate::rational::{int, Rational};
use crate::setfn::{full_bits, GroundSet, SetFunctionOracle};

/// For each pattern node, the earlier nodes it is adjacent to.
fn back_neighbors(f: &SimpleGraph) -> Vec<Vec<usize>> {
    (0..f.node_count())
        .map(|v| (0..v).filter(|&u| f.is_adjacent(u, v)).collect())
        .collect()
}

/// Number of homomorphisms `F → G`.
pub fn hom_count(f: &SimpleGraph, g: &SimpleGraph) -> u128 {
    let back = back_neighbors(f);
    let p = f.node_count();
    if p == 0 {
        return 1;
    }
    let n = g.node_count();
    let all = full_bits(n);
    (0..n)
        .into_par_iter()
        .map(|first| {
            let mut image = vec![0usize; p];
            image[0] = first;
            extend(g, &back, &mut image, 1, all)
        })
        .sum()
}

fn extend(g: &SimpleGraph, back: &[Vec<usize>], image: &mut [usize], v: usize, all: u64) -> u128 {
    if v == image.len() {
        return 1;
    }
    let candidates = back[v]
        .iter()
        .fold(all, |acc, &u| acc & g.adjacency(image[u]));
    let mut total = 0;
    let mut rest = candidates;
    while rest != 0 {
        let x = rest.trailing_zeros() as usize;
        rest &= rest - 1;
        image[v] = x;
        total += extend(g, back, image, v + 1, all);
    }
    total
}

/// `t(F, G) = hom(F, G) / |V(G)|^{|V(F)|}`.
pub fn hom_density(f: &SimpleGraph, g: &SimpleGraph) -> Result<Rational> {
    hom_density_with(f, g, &Limits::default())
}

pub fn hom_density_with(f: &SimpleGraph, g: &SimpleGraph, limits: &Limits) -> Result<Rational> {
    check_cap("pattern node count", f.node_count(), limits.max_pattern_nodes)?;
    check_cap("target node count", g.node_count(), limits.max_target_nodes)?;
    if f.node_count() == 0 {
        return Ok(int(1));
    }
    if g.node_count() == 0 {
        return Err(Error::Invalid("homomorphism density into a graph without nodes".into()));
    }
    let maps = (g.node_count() as i64).pow(f.node_count() as u32);
    Ok(Rational::new(hom_count(f, g) as i64, maps))
}

/// `t(F, W) = Σ_c Π_v |step c(v)| · Π_{uv∈E(F)} W(c(u), c(v))` over step
/// assignments `c`.
pub fn hom_density_step(f: &SimpleGraph, w: &StepGraphon) -> Result<Rational> {
    hom_density_step_with(f, w, &Limits::default())
}

pub fn hom_density_step_with(f: &SimpleGraph, w: &StepGraphon, limits: &Limits) -> Result<Rational> {
    check_cap("pattern node count", f.node_count(), limits.max_pattern_nodes)?;
    check_cap("graphon step count", w.steps(), limits.max_steps)?;
    let big = |r: &Rational| BigRational::new(BigInt::from(*r.numer()), BigInt::from(*r.denom()));
    let widths: Vec<BigRational> = w.widths().iter().map(big).collect();
    let values: Vec<Vec<BigRational>> = w
        .values()
        .iter()
        .map(|row| row.iter().map(big).collect())
        .collect();
    let back = back_neighbors(f);
    let p = f.node_count();
    if p == 0 {
        return Ok(int(1));
    }
    let r = w.steps();
    let total: BigRational = (0..r)
        .into_par_iter()
        .map(|first| {
            let mut image = vec![0usize; p];
            image[0] = first;
            step_sum(&widths, &values, &back, &mut image, 1, widths[first].clone())
        })
        .reduce(BigRational::zero, |a, b| a + b);
    let num = total.numer().to_i64();
    let den = total.denom().to_i64();
    match (num, den) {
        (Some(n), Some(d)) => Ok(Rational::new(n, d)),
        _ => Err(Error::Invalid("homomorphism density does not fit in 64-bit rationals".into())),
    }
}

fn step_sum(
    widths: &[BigRational],
    values: &[Vec<BigRational>],
    back: &[Vec<usize>],
    image: &mut [usize],
    v: usize,
    weight: BigRational,
) -> BigRational {
    if weight.is_zero() {
        return weight;
    }
    if v == image.len() {
        return weight;
    }
    let mut total = BigRational::zero();
    for c in 0..widths.len() {
        let mut wv = weight.clone() * &widths[c];
        for &u in &back[v] {
            wv *= &values[image[u]][c];
        }
        image[v] = c;
        total += step_sum(widths, values, back, image, v + 1, wv);
    }
    total
}

/// `τ_{F,G}(X) = 1 − t(F, G_{E∖X})` on the edge set of `G`.
///
/// `τ(∅) = 1 − t(F, G)` is usually nonzero, so the oracle is built
/// unchecked; profile it through [`SetFunctionOracle::grounded`].
pub fn tau_oracle(f: &SimpleGraph, g: &SimpleGraph) -> Result<SetFunctionOracle> {
    tau_oracle_with(f, g, &Limits::default())
}

pub fn tau_oracle_with(f: &SimpleGraph, g: &SimpleGraph, limits: &Limits) -> Result<SetFunctionOracle> {
    check_cap("pattern node count", f.node_count(), limits.max_pattern_nodes)?;
    check_cap("target node count", g.node_count(), limits.max_target_nodes)?;
    if g.node_count() == 0 {
        return Err(Error::Invalid("τ needs a graph with nodes".into()));
    }
    let ground = GroundSet::new(g.edge_count())?;
    let full = full_bits(g.edge_count());
    let (pattern, target) = (f.clone(), g.clone());
    let maps = (g.node_count() as i64).pow(f.node_count() as u32);
    Ok(SetFunctionOracle::new_unchecked(
        ground,
        format!(
            "tau of a {}-node pattern in a graph with {} nodes and {} edges",
            f.node_count(),
            g.node_count(),
            g.edge_count()
        ),
        move |x| {
            let rest = target.edge_subgraph(full & !x);
            Rational::one() - Rational::new(hom_count(&pattern, &rest) as i64, maps)
        },
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graphlim::graph::blow_up;
    use crate::rational::rat;
    use crate::setfn::{check_monotone, check_submodular};

    /// Map enumeration without pruning.
    fn brute_hom(f: &SimpleGraph, g: &SimpleGraph) -> u128 {
        let (p, n) = (f.node_count(), g.node_count());
        let mut count = 0;
        for code in 0..n.pow(p as u32) {
            let image: Vec<usize> = (0..p).map(|i| code / n.pow(i as u32) % n).collect();
            if f.edges().iter().all(|&(u, v)| g.is_adjacent(image[u], image[v])) {
                count += 1;
            }
        }
        count
    }

    #[test]
    fn small_densities() {
        let k2 = SimpleGraph::complete(2);
        let k3 = SimpleGraph::complete(3);
        assert_eq!(hom_density(&k2, &k3).unwrap(), rat(2, 3));
        assert_eq!(hom_density(&k3, &k3).unwrap(), rat(2, 9));
        assert_eq!(hom_density(&k2, &SimpleGraph::empty(4)).unwrap(), int(0));
        assert_eq!(hom_density(&SimpleGraph::empty(2), &k3).unwrap(), int(1));
    }

    #[test]
    fn backtracking_matches_map_enumeration() {
        let patterns = [
            SimpleGraph::complete(2),
            SimpleGraph::path(3),
            SimpleGraph::complete(3),
            SimpleGraph::cycle(4),
        ];
        let targets = [
            SimpleGraph::cycle(5),
            SimpleGraph::complete_bipartite(2, 3),
            SimpleGraph::new(5, [(0, 1), (1, 2), (0, 2), (2, 3)]).unwrap(),
        ];
        for f in &patterns {
            for g in &targets {
                assert_eq!(hom_count(f, g), brute_hom(f, g));
            }
        }
    }

    #[test]
    fn blow_up_keeps_triangle_density() {
        let k3 = SimpleGraph::complete(3);
        let b = blow_up(&k3, 2).unwrap();
        assert_eq!(hom_density(&k3, &b.graph).unwrap(), rat(2, 9));
    }

    #[test]
    fn caps() {
        let big = SimpleGraph::complete(6);
        assert!(hom_density(&big, &big).unwrap_err().is_cap());
    }

    #[test]
    fn step_density_matches_graph_density() {
        let k2 = SimpleGraph::complete(2);
        let k3 = SimpleGraph::complete(3);
        let w = StepGraphon::from_graph(&k3).unwrap();
        assert_eq!(hom_density_step(&k2, &w).unwrap(), rat(2, 3));
        let half = StepGraphon::constant(rat(1, 2)).unwrap();
        assert_eq!(hom_density_step(&k3, &half).unwrap(), rat(1, 8));
        assert_eq!(hom_density_step(&k2, &half).unwrap(), rat(1, 2));
    }

    #[test]
    fn tau_values() {
        let k2 = SimpleGraph::complete(2);
        let k3 = SimpleGraph::complete(3);
        let tau = tau_oracle(&k2, &k3).unwrap();
        assert_eq!(tau.eval_bits(0), rat(1, 3));
        assert_eq!(tau.eval_bits(0b111), int(1));
        let tri = tau_oracle(&k3, &k3).unwrap();
        assert_eq!(tri.eval_bits(0b001), int(1));
    }

    #[test]
    fn tau_is_submodular_and_increasing() {
        let tau = tau_oracle(&SimpleGraph::complete(3), &SimpleGraph::complete(4)).unwrap();
        assert!(check_submodular(&tau).unwrap().is_empty());
        assert!(check_monotone(&tau).unwrap().is_empty());
    }
}
