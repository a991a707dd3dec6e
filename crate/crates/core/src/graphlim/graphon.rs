use num_traits::{One, Zero};
use serde::Serialize;

use super::graph::SimpleGraph;
use crate::error::{Error, Result};
use crate::rational::{int, Rational};
use crate::setfn::{bit_iter, full_bits, GroundSet, SetFunctionOracle};

/// Symmetric step function on `[0,1]²`: constant `values[i][j]` on
/// `[b_i, b_{i+1}) × [b_j, b_{j+1})`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct StepGraphon {
    /// `0 = b_0 < b_1 < … < b_r = 1`.
    #[serde(with = "crate::rational::exact_vec")]
    bounds: Vec<Rational>,
    #[serde(serialize_with = "crate::rational::exact_matrix::serialize")]
    values: Vec<Vec<Rational>>,
}

impl StepGraphon {
    pub fn new(bounds: Vec<Rational>, values: Vec<Vec<Rational>>) -> Result<Self> {
        let r = bounds.len().checked_sub(1).unwrap_or(0);
        if r == 0 || !bounds[0].is_zero() || !bounds[r].is_one() {
            return Err(Error::Invalid("breakpoints must run from 0 to 1".into()));
        }
        if bounds.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::Invalid("breakpoints must increase strictly".into()));
        }
        if values.len() != r || values.iter().any(|row| row.len() != r) {
            return Err(Error::DimensionMismatch {
                left: r,
                right: values.len(),
            });
        }
        for i in 0..r {
            for j in 0..r {
                let v = values[i][j];
                if v < int(0) || v > int(1) {
                    return Err(Error::Invalid(format!("value {v} at ({i},{j}) outside [0,1]")));
                }
                if v != values[j][i] {
                    return Err(Error::Invalid(format!("values not symmetric at ({i},{j})")));
                }
            }
        }
        Ok(StepGraphon { bounds, values })
    }

    /// `W ≡ p`.
    pub fn constant(p: Rational) -> Result<Self> {
        StepGraphon::new(vec![int(0), int(1)], vec![vec![p]])
    }

    /// `W_G`: node `u` owns `[u/n, (u+1)/n)`, value 1 on adjacent pairs.
    pub fn from_graph(g: &SimpleGraph) -> Result<Self> {
        let n = g.node_count();
        if n == 0 {
            return Err(Error::Invalid("graph without nodes".into()));
        }
        let bounds = (0..=n).map(|i| Rational::new(i as i64, n as i64)).collect();
        let values = (0..n)
            .map(|u| (0..n).map(|v| int(g.is_adjacent(u, v) as i64)).collect())
            .collect();
        StepGraphon::new(bounds, values)
    }

    pub fn steps(&self) -> usize {
        self.values.len()
    }

    pub fn bounds(&self) -> &[Rational] {
        &self.bounds
    }

    pub fn values(&self) -> &[Vec<Rational>] {
        &self.values
    }

    pub fn widths(&self) -> Vec<Rational> {
        self.bounds.windows(2).map(|w| w[1] - w[0]).collect()
    }

    /// `∫∫ W`.
    pub fn total_weight(&self) -> Rational {
        let w = self.widths();
        let mut total = int(0);
        for i in 0..w.len() {
            for j in 0..w.len() {
                total += w[i] * w[j] * self.values[i][j];
            }
        }
        total
    }

    /// The same function on a finer set of breakpoints, which must contain
    /// the current ones.
    pub fn refine(&self, bounds: &[Rational]) -> Result<StepGraphon> {
        if let Some(b) = self.bounds.iter().find(|b| !bounds.contains(b)) {
            return Err(Error::Invalid(format!("refinement drops breakpoint {b}")));
        }
        let owner: Vec<usize> = bounds
            .windows(2)
            .map(|w| self.bounds.iter().rposition(|b| *b <= w[0]).unwrap_or(0))
            .collect();
        let values = owner
            .iter()
            .map(|&i| owner.iter().map(|&j| self.values[i][j]).collect())
            .collect();
        StepGraphon::new(bounds.to_vec(), values)
    }
}

/// `κ_W(X) = ∫_{X×X^c} W / ∫∫ W` for `X` a union of steps (bit `i` = step
/// `i`).
pub fn graphon_cut_capacity(w: &StepGraphon, steps: u64) -> Result<Rational> {
    let r = w.steps();
    if steps & !full_bits(r) != 0 {
        return Err(Error::MaskWidth {
            expected: r,
            found: 64 - steps.leading_zeros() as usize,
        });
    }
    let total = w.total_weight();
    if total.is_zero() {
        return Err(Error::ZeroTotalWeight);
    }
    Ok(crossing_weight(w, &w.widths(), steps) / total)
}

fn crossing_weight(w: &StepGraphon, widths: &[Rational], steps: u64) -> Rational {
    let outside = full_bits(w.steps()) & !steps;
    let mut sum = int(0);
    for i in bit_iter(steps) {
        for j in bit_iter(outside) {
            sum += widths[i] * widths[j] * w.values[i][j];
        }
    }
    sum
}

/// `κ_W` as a setfunction on the steps of `W`.
pub fn graphon_cut_oracle(w: &StepGraphon) -> Result<SetFunctionOracle> {
    let total = w.total_weight();
    if total.is_zero() {
        return Err(Error::ZeroTotalWeight);
    }
    let widths = w.widths();
    let graphon = w.clone();
    SetFunctionOracle::new(
        GroundSet::new(w.steps())?,
        format!("cut capacity of a step graphon with {} steps", w.steps()),
        move |x| crossing_weight(&graphon, &widths, x) / total,
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graphlim::cut::{cut_capacity_oracle, CutNormalization};
    use crate::rational::rat;

    #[test]
    fn rejects_bad_graphons() {
        assert!(StepGraphon::new(vec![int(0), rat(1, 2)], vec![vec![int(0)]]).is_err());
        assert!(StepGraphon::constant(rat(3, 2)).is_err());
        let asym = vec![vec![int(0), int(1)], vec![int(0), int(0)]];
        assert!(StepGraphon::new(vec![int(0), rat(1, 2), int(1)], asym).is_err());
    }

    #[test]
    fn constant_half_split() {
        let w = StepGraphon::constant(rat(1, 3)).unwrap();
        let w = w.refine(&[int(0), rat(1, 2), int(1)]).unwrap();
        assert_eq!(graphon_cut_capacity(&w, 0b01).unwrap(), rat(1, 4));
        assert_eq!(graphon_cut_capacity(&w, 0).unwrap(), int(0));
    }

    #[test]
    fn zero_graphon() {
        let w = StepGraphon::constant(int(0)).unwrap();
        assert_eq!(graphon_cut_capacity(&w, 1), Err(Error::ZeroTotalWeight));
    }

    #[test]
    fn agrees_with_twice_edges() {
        let g = SimpleGraph::new(5, [(0, 1), (1, 2), (2, 3), (3, 4), (0, 2)]).unwrap();
        let w = StepGraphon::from_graph(&g).unwrap();
        let kw = graphon_cut_oracle(&w).unwrap();
        let kg = cut_capacity_oracle(&g, CutNormalization::TwiceEdges).unwrap();
        for x in 0..32 {
            assert_eq!(kw.eval_bits(x), kg.eval_bits(x));
        }
        let k2 = StepGraphon::from_graph(&SimpleGraph::complete(2)).unwrap();
        assert_eq!(graphon_cut_capacity(&k2, 0b01).unwrap(), rat(1, 2));
    }

    #[test]
    fn refine_preserves_integral() {
        let g = SimpleGraph::path(3);
        let w = StepGraphon::from_graph(&g).unwrap();
        let fine: Vec<Rational> = (0..=6).map(|i| rat(i, 6)).collect();
        let r = w.refine(&fine).unwrap();
        assert_eq!(r.total_weight(), w.total_weight());
        assert_eq!(r.steps(), 6);
        assert!(w.refine(&[int(0), int(1)]).is_err());
    }
}
