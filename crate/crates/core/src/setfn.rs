//! Ground sets, subset masks, exact setfunction oracles and quotient points.
//!
//! Subsets of a ground set of `n ≤ 64` elements are bit masks: element `i`
//! is in the subset iff bit `i` is set. A quotient point on `k` parts stores
//! `2^k` coordinates; the coordinate of `I ⊆ [k]` lives at index
//! `Σ_{i∈I} 2^{i-1}`, so part `i` (1-based) is bit `i-1` of the index.

use std::collections::HashMap;
use std::fmt;
use std::sync::Arc;

use num_traits::{Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::limits::Limits;
use crate::matroid::Matroid;
use crate::rational::{exact_vec, int, Rational};

pub const MAX_MASK_WIDTH: usize = 64;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GroundSet {
    size: usize,
    labels: Option<Vec<String>>,
}

impl GroundSet {
    pub fn new(size: usize) -> Result<Self> {
        if size > MAX_MASK_WIDTH {
            return Err(Error::GroundTooLarge {
                size,
                cap: MAX_MASK_WIDTH,
            });
        }
        Ok(GroundSet { size, labels: None })
    }

    pub fn with_labels(labels: Vec<String>) -> Result<Self> {
        let mut g = GroundSet::new(labels.len())?;
        g.labels = Some(labels);
        Ok(g)
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub fn labels(&self) -> Option<&[String]> {
        self.labels.as_deref()
    }

    pub fn full_bits(&self) -> u64 {
        full_bits(self.size)
    }

    pub fn full(&self) -> SubsetMask {
        SubsetMask {
            bits: self.full_bits(),
            width: self.size,
        }
    }

    pub fn empty(&self) -> SubsetMask {
        SubsetMask {
            bits: 0,
            width: self.size,
        }
    }

    pub fn mask(&self, bits: u64) -> Result<SubsetMask> {
        SubsetMask::new(self.size, bits)
    }
}

pub(crate) fn full_bits(width: usize) -> u64 {
    if width >= 64 {
        u64::MAX
    } else {
        (1u64 << width) - 1
    }
}

/// Iterates the indices of set bits, lowest first.
pub(crate) fn bit_iter(mut bits: u64) -> impl Iterator<Item = usize> {
    std::iter::from_fn(move || {
        if bits == 0 {
            None
        } else {
            let i = bits.trailing_zeros() as usize;
            bits &= bits - 1;
            Some(i)
        }
    })
}

#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SubsetMask {
    bits: u64,
    width: usize,
}

impl SubsetMask {
    pub fn new(width: usize, bits: u64) -> Result<Self> {
        if width > MAX_MASK_WIDTH {
            return Err(Error::GroundTooLarge {
                size: width,
                cap: MAX_MASK_WIDTH,
            });
        }
        if bits & !full_bits(width) != 0 {
            return Err(Error::Invalid(format!(
                "mask {bits:#x} has bits beyond width {width}"
            )));
        }
        Ok(SubsetMask { bits, width })
    }

    pub fn from_elements(width: usize, elements: impl IntoIterator<Item = usize>) -> Result<Self> {
        let mut bits = 0u64;
        for e in elements {
            if e >= width {
                return Err(Error::Invalid(format!(
                    "element {e} outside ground of size {width}"
                )));
            }
            bits |= 1 << e;
        }
        SubsetMask::new(width, bits)
    }

    pub fn empty(width: usize) -> Self {
        SubsetMask { bits: 0, width }
    }

    pub fn full(width: usize) -> Self {
        SubsetMask {
            bits: full_bits(width),
            width,
        }
    }

    pub fn bits(&self) -> u64 {
        self.bits
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn len(&self) -> usize {
        self.bits.count_ones() as usize
    }

    pub fn is_empty(&self) -> bool {
        self.bits == 0
    }

    pub fn contains(&self, e: usize) -> bool {
        e < self.width && self.bits >> e & 1 == 1
    }

    pub fn elements(&self) -> impl Iterator<Item = usize> {
        bit_iter(self.bits)
    }

    pub fn is_subset_of(&self, other: &SubsetMask) -> bool {
        self.bits & !other.bits == 0
    }

    pub fn union(&self, other: &SubsetMask) -> Result<SubsetMask> {
        self.same_width(other)?;
        Ok(SubsetMask {
            bits: self.bits | other.bits,
            width: self.width,
        })
    }

    pub fn intersection(&self, other: &SubsetMask) -> Result<SubsetMask> {
        self.same_width(other)?;
        Ok(SubsetMask {
            bits: self.bits & other.bits,
            width: self.width,
        })
    }

    pub fn complement(&self) -> SubsetMask {
        SubsetMask {
            bits: !self.bits & full_bits(self.width),
            width: self.width,
        }
    }

    fn same_width(&self, other: &SubsetMask) -> Result<()> {
        if self.width != other.width {
            Err(Error::MaskWidth {
                expected: self.width,
                found: other.width,
            })
        } else {
            Ok(())
        }
    }
}

impl Serialize for SubsetMask {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        use serde::ser::SerializeStruct;
        let mut st = s.serialize_struct("SubsetMask", 2)?;
        st.serialize_field("width", &self.width)?;
        st.serialize_field("elements", &self.elements().collect::<Vec<_>>())?;
        st.end()
    }
}

impl fmt::Debug for SubsetMask {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.elements()).finish()
    }
}

type EvalFn = dyn Fn(u64) -> Rational + Send + Sync;

/// A finite ground set plus an exact evaluator on all of its subsets.
///
/// Oracles are immutable and cheap to clone; the evaluator is shared.
#[derive(Clone)]
pub struct SetFunctionOracle {
    ground: GroundSet,
    eval: Arc<EvalFn>,
    normalization: Rational,
    description: String,
    matroid: Option<Arc<dyn Matroid>>,
}

impl fmt::Debug for SetFunctionOracle {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("SetFunctionOracle")
            .field("ground", &self.ground.size)
            .field("normalization", &self.normalization)
            .field("description", &self.description)
            .finish()
    }
}

impl SetFunctionOracle {
    /// Builds an oracle; the value on the empty set must be zero.
    pub fn new<F>(ground: GroundSet, description: impl Into<String>, eval: F) -> Result<Self>
    where
        F: Fn(u64) -> Rational + Send + Sync + 'static,
    {
        let oracle = Self::new_unchecked(ground, description, eval);
        let empty = oracle.eval_bits(0);
        if !empty.is_zero() {
            return Err(Error::NonzeroEmpty(crate::rational::to_exact_string(&empty)));
        }
        Ok(oracle)
    }

    /// Builds an oracle that may be nonzero on the empty set.
    ///
    /// Quotient points cannot be taken from such an oracle directly; use
    /// [`SetFunctionOracle::grounded`] first.
    pub fn new_unchecked<F>(ground: GroundSet, description: impl Into<String>, eval: F) -> Self
    where
        F: Fn(u64) -> Rational + Send + Sync + 'static,
    {
        SetFunctionOracle {
            ground,
            eval: Arc::new(eval),
            normalization: int(1),
            description: description.into(),
            matroid: None,
        }
    }

    pub fn with_normalization(mut self, normalization: Rational) -> Self {
        self.normalization = normalization;
        self
    }

    pub(crate) fn with_matroid(mut self, matroid: Arc<dyn Matroid>) -> Self {
        self.matroid = Some(matroid);
        self
    }

    pub fn ground(&self) -> &GroundSet {
        &self.ground
    }

    pub fn size(&self) -> usize {
        self.ground.size
    }

    pub fn normalization(&self) -> &Rational {
        &self.normalization
    }

    pub fn description(&self) -> &str {
        &self.description
    }

    /// The matroid whose (scaled) rank this oracle evaluates, if any.
    pub fn matroid(&self) -> Option<&Arc<dyn Matroid>> {
        self.matroid.as_ref()
    }

    pub fn empty_value(&self) -> Rational {
        self.eval_bits(0)
    }

    pub fn is_grounded(&self) -> bool {
        self.empty_value().is_zero()
    }

    /// `X ↦ φ(X) − φ(∅)`, which is grounded and keeps submodularity and
    /// monotonicity.
    pub fn grounded(&self) -> SetFunctionOracle {
        let shift = self.empty_value();
        if shift.is_zero() {
            return self.clone();
        }
        let inner = self.eval.clone();
        SetFunctionOracle {
            ground: self.ground.clone(),
            eval: Arc::new(move |x| inner(x) - shift),
            normalization: self.normalization,
            description: format!("{} (grounded)", self.description),
            matroid: None,
        }
    }

    /// Raw evaluation without width checks. Bits beyond the ground are a
    /// caller bug.
    pub fn eval_bits(&self, bits: u64) -> Rational {
        (self.eval)(bits)
    }

    pub fn check_mask(&self, x: &SubsetMask) -> Result<()> {
        if x.width() != self.ground.size {
            Err(Error::MaskWidth {
                expected: self.ground.size,
                found: x.width(),
            })
        } else {
            Ok(())
        }
    }

    /// Value table over all `2^n` subsets, as dense value ids.
    pub fn tabulate(&self, limits: &Limits) -> Result<ValueTable> {
        ValueTable::build(self, limits)
    }
}

pub fn evaluate(oracle: &SetFunctionOracle, x: &SubsetMask) -> Result<Rational> {
    oracle.check_mask(x)?;
    Ok(oracle.eval_bits(x.bits()))
}

/// Values of an oracle on every subset, stored as ids into a list of the
/// distinct values. Enumeration kernels compare ids instead of rationals.
#[derive(Debug, Clone)]
pub struct ValueTable {
    pub(crate) ids: Vec<u32>,
    pub(crate) values: Vec<Rational>,
}

impl ValueTable {
    fn build(oracle: &SetFunctionOracle, limits: &Limits) -> Result<Self> {
        let n = oracle.size();
        if n > limits.max_ground {
            return Err(Error::GroundTooLarge {
                size: n,
                cap: limits.max_ground,
            });
        }
        let mut index: HashMap<Rational, u32> = HashMap::new();
        let mut values = Vec::new();
        let ids = (0..1u64 << n)
            .map(|bits| {
                let v = oracle.eval_bits(bits);
                *index.entry(v).or_insert_with(|| {
                    values.push(v);
                    (values.len() - 1) as u32
                })
            })
            .collect();
        Ok(ValueTable { ids, values })
    }

    pub fn id(&self, bits: u64) -> u32 {
        self.ids[bits as usize]
    }

    pub fn value(&self, bits: u64) -> &Rational {
        &self.values[self.ids[bits as usize] as usize]
    }

    pub fn value_of_id(&self, id: u32) -> &Rational {
        &self.values[id as usize]
    }
}

/// `φ/A` for a tuple `A = (A_1, …, A_k)`: the setfunction on `2^[k]` with
/// `(φ/A)(I) = φ(∪_{i∈I} A_i)`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct QuotientPoint {
    k: usize,
    #[serde(with = "exact_vec")]
    coords: Vec<Rational>,
}

impl QuotientPoint {
    pub fn new(k: usize, coords: Vec<Rational>) -> Result<Self> {
        if k == 0 || k > 16 {
            return Err(Error::KTooLarge { k, cap: 16 });
        }
        if coords.len() != 1 << k {
            return Err(Error::DimensionMismatch {
                left: 1 << k,
                right: coords.len(),
            });
        }
        if !coords[0].is_zero() {
            return Err(Error::NonzeroEmpty(crate::rational::to_exact_string(&coords[0])));
        }
        Ok(QuotientPoint { k, coords })
    }

    pub(crate) fn from_raw(k: usize, coords: Vec<Rational>) -> Self {
        debug_assert_eq!(coords.len(), 1 << k);
        QuotientPoint { k, coords }
    }

    pub fn zero(k: usize) -> Self {
        QuotientPoint {
            k,
            coords: vec![Rational::zero(); 1 << k],
        }
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn coords(&self) -> &[Rational] {
        &self.coords
    }

    /// Coordinate at subset index `I = Σ 2^{i-1}`.
    pub fn at(&self, index: usize) -> &Rational {
        &self.coords[index]
    }

    /// Coordinate of the singleton `{i}` for a 1-based part `i`.
    pub fn singleton(&self, part: usize) -> &Rational {
        &self.coords[1 << (part - 1)]
    }

    pub fn top(&self) -> &Rational {
        &self.coords[(1 << self.k) - 1]
    }

    pub fn scaled(&self, factor: &Rational) -> QuotientPoint {
        QuotientPoint {
            k: self.k,
            coords: self.coords.iter().map(|c| c * factor).collect(),
        }
    }

    /// The point as a setfunction on the ground set `[k]`.
    pub fn as_oracle(&self) -> SetFunctionOracle {
        let coords = Arc::new(self.coords.clone());
        let ground = GroundSet::new(self.k).expect("k ≤ 16");
        SetFunctionOracle::new_unchecked(ground, format!("quotient point on {} parts", self.k), move |x| {
            coords[x as usize]
        })
    }

    /// `(φ/A)/X` for a tuple `X` of subsets of `[k]` (given as index masks).
    pub fn compose(&self, outer: &[u64]) -> Result<QuotientPoint> {
        let m = outer.len();
        if m == 0 || m > 16 {
            return Err(Error::KTooLarge { k: m, cap: 16 });
        }
        let full = full_bits(self.k);
        if outer.iter().any(|x| x & !full != 0) {
            return Err(Error::Invalid("outer tuple leaves [k]".into()));
        }
        let unions = subset_unions(outer);
        Ok(QuotientPoint {
            k: m,
            coords: unions.iter().map(|&u| self.coords[u as usize]).collect(),
        })
    }
}

/// `unions[I] = ∪_{i∈I} parts[i]` for every `I ⊆ [parts.len()]`.
pub(crate) fn subset_unions(parts: &[u64]) -> Vec<u64> {
    let k = parts.len();
    let mut unions = vec![0u64; 1 << k];
    for idx in 1..1usize << k {
        let low = idx.trailing_zeros() as usize;
        unions[idx] = unions[idx & (idx - 1)] | parts[low];
    }
    unions
}

pub fn quotient_point(oracle: &SetFunctionOracle, tuple: &[SubsetMask]) -> Result<QuotientPoint> {
    quotient_point_with(oracle, tuple, &Limits::default())
}

pub fn quotient_point_with(
    oracle: &SetFunctionOracle,
    tuple: &[SubsetMask],
    limits: &Limits,
) -> Result<QuotientPoint> {
    let k = tuple.len();
    if k == 0 || k > limits.max_k {
        return Err(Error::KTooLarge {
            k,
            cap: limits.max_k,
        });
    }
    for a in tuple {
        oracle.check_mask(a)?;
    }
    if !oracle.is_grounded() {
        return Err(Error::NonzeroEmpty(crate::rational::to_exact_string(
            &oracle.empty_value(),
        )));
    }
    let parts: Vec<u64> = tuple.iter().map(|a| a.bits()).collect();
    let coords = subset_unions(&parts)
        .into_iter()
        .map(|u| oracle.eval_bits(u))
        .collect();
    Ok(QuotientPoint { k, coords })
}

/// A pair witnessing a failed inequality, with the signed slack.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Violation {
    pub x: SubsetMask,
    pub y: SubsetMask,
    /// For submodularity `φ(X)+φ(Y)−φ(X∩Y)−φ(X∪Y)`; for monotonicity
    /// `φ(Y)−φ(X)`. Negative on a violation.
    #[serde(with = "crate::rational::exact_str")]
    pub slack: Rational,
}

fn submodular_slack(t: &dyn Fn(u64) -> Rational, x: u64, y: u64) -> Rational {
    t(x) + t(y) - t(x & y) - t(x | y)
}

/// Exhaustive check of `φ(X)+φ(Y) ≥ φ(X∩Y)+φ(X∪Y)`.
///
/// Comparable pairs are skipped since they satisfy the inequality with
/// equality; each unordered pair is reported once. At most
/// `limits.max_reported_violations` violations are returned.
pub fn check_submodular(oracle: &SetFunctionOracle) -> Result<Vec<Violation>> {
    check_submodular_with(oracle, &Limits::default())
}

pub fn check_submodular_with(oracle: &SetFunctionOracle, limits: &Limits) -> Result<Vec<Violation>> {
    let n = oracle.size();
    if n > limits.max_submodular_ground {
        return Err(Error::GroundTooLarge {
            size: n,
            cap: limits.max_submodular_ground,
        });
    }
    let table = oracle.tabulate(limits)?;
    let lookup = |b: u64| *table.value(b);
    let mut out = Vec::new();
    for x in 0..1u64 << n {
        for y in x + 1..1u64 << n {
            if x & y == x || x & y == y {
                continue;
            }
            let slack = submodular_slack(&lookup, x, y);
            if slack.is_negative() {
                out.push(violation(n, x, y, slack));
                if out.len() >= limits.max_reported_violations {
                    return Ok(out);
                }
            }
        }
    }
    Ok(out)
}

/// Same contract as [`check_submodular`] on `samples` seeded random pairs.
pub fn check_submodular_sampled(
    oracle: &SetFunctionOracle,
    seed: u64,
    samples: usize,
) -> Vec<Violation> {
    let n = oracle.size();
    let full = full_bits(n);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let f = |b: u64| oracle.eval_bits(b);
    let mut out = Vec::new();
    for _ in 0..samples {
        let x = rng.gen::<u64>() & full;
        let y = rng.gen::<u64>() & full;
        let slack = submodular_slack(&f, x, y);
        if slack.is_negative() {
            out.push(violation(n, x, y, slack));
        }
    }
    out
}

/// Exhaustive monotonicity check.
///
/// A setfunction is increasing iff `φ(X) ≤ φ(X ∪ {e})` for every `X` and
/// `e ∉ X`, so only those covering pairs are scanned and reported.
pub fn check_monotone(oracle: &SetFunctionOracle) -> Result<Vec<Violation>> {
    check_monotone_with(oracle, &Limits::default())
}

pub fn check_monotone_with(oracle: &SetFunctionOracle, limits: &Limits) -> Result<Vec<Violation>> {
    let n = oracle.size();
    let table = oracle.tabulate(limits)?;
    let mut out = Vec::new();
    for x in 0..1u64 << n {
        for e in 0..n {
            if x >> e & 1 == 1 {
                continue;
            }
            let y = x | 1 << e;
            let slack = table.value(y) - table.value(x);
            if slack.is_negative() {
                out.push(violation(n, x, y, slack));
                if out.len() >= limits.max_reported_violations {
                    return Ok(out);
                }
            }
        }
    }
    Ok(out)
}

/// Same contract as [`check_monotone`] on seeded random covering pairs.
pub fn check_monotone_sampled(oracle: &SetFunctionOracle, seed: u64, samples: usize) -> Vec<Violation> {
    let n = oracle.size();
    if n == 0 {
        return Vec::new();
    }
    let full = full_bits(n);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::new();
    for _ in 0..samples {
        let y = rng.gen::<u64>() & full;
        let e = rng.gen_range(0..n);
        let x = y & !(1 << e);
        let slack = oracle.eval_bits(y | 1 << e) - oracle.eval_bits(x);
        if slack.is_negative() {
            out.push(violation(n, x, y | 1 << e, slack));
        }
    }
    out
}

fn violation(n: usize, x: u64, y: u64, slack: Rational) -> Violation {
    Violation {
        x: SubsetMask { bits: x, width: n },
        y: SubsetMask { bits: y, width: n },
        slack,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::rat;

    fn cardinality_squared(n: usize) -> SetFunctionOracle {
        SetFunctionOracle::new(GroundSet::new(n).unwrap(), "|X|^2", |x| {
            let c = x.count_ones() as i64;
            int(c * c)
        })
        .unwrap()
    }

    #[test]
    fn empty_set_is_zero() {
        let o = cardinality_squared(3);
        assert_eq!(evaluate(&o, &SubsetMask::empty(3)).unwrap(), int(0));
    }

    #[test]
    fn width_mismatch_is_rejected() {
        let o = cardinality_squared(3);
        assert_eq!(
            evaluate(&o, &SubsetMask::empty(4)),
            Err(Error::MaskWidth {
                expected: 3,
                found: 4
            })
        );
    }

    #[test]
    fn nonzero_empty_rejected_by_checked_constructor() {
        let r = SetFunctionOracle::new(GroundSet::new(2).unwrap(), "c", |_| int(1));
        assert!(matches!(r, Err(Error::NonzeroEmpty(_))));
    }

    #[test]
    fn supermodular_function_is_flagged() {
        let v = check_submodular(&cardinality_squared(3)).unwrap();
        assert!(!v.is_empty());
        let first = &v[0];
        // X={0}, Y={1}: 1 + 1 - 0 - 4 = -2
        assert_eq!(first.x.bits(), 0b001);
        assert_eq!(first.y.bits(), 0b010);
        assert_eq!(first.slack, int(-2));
    }

    #[test]
    fn decreasing_function_is_flagged() {
        let o = SetFunctionOracle::new(GroundSet::new(3).unwrap(), "-|X|", |x| {
            int(-(x.count_ones() as i64))
        })
        .unwrap();
        assert!(!check_monotone(&o).unwrap().is_empty());
        assert!(check_submodular(&o).unwrap().is_empty());
    }

    #[test]
    fn quotient_point_of_empty_tuple_is_zero() {
        let o = cardinality_squared(4);
        let tuple = vec![SubsetMask::empty(4); 3];
        assert_eq!(quotient_point(&o, &tuple).unwrap(), QuotientPoint::zero(3));
    }

    #[test]
    fn quotient_point_k1_full_ground() {
        let o = cardinality_squared(3);
        let p = quotient_point(&o, &[SubsetMask::full(3)]).unwrap();
        assert_eq!(p.coords(), &[int(0), int(9)]);
    }

    #[test]
    fn k_cap_is_enforced() {
        let o = cardinality_squared(2);
        let tuple = vec![SubsetMask::empty(2); 9];
        assert_eq!(
            quotient_point(&o, &tuple),
            Err(Error::KTooLarge { k: 9, cap: 8 })
        );
        assert!(quotient_point(&o, &[]).is_err());
    }

    #[test]
    fn index_convention() {
        // coords[I] for I = {2} lives at index 2, I = {1,2} at index 3
        let o = cardinality_squared(3);
        let a = SubsetMask::from_elements(3, [0]).unwrap();
        let b = SubsetMask::from_elements(3, [1, 2]).unwrap();
        let p = quotient_point(&o, &[a, b]).unwrap();
        assert_eq!(p.singleton(1), &int(1));
        assert_eq!(p.singleton(2), &int(4));
        assert_eq!(p.top(), &int(9));
    }

    #[test]
    fn compose_matches_direct_union() {
        let o = cardinality_squared(4);
        let parts: Vec<SubsetMask> = (0..4)
            .map(|i| SubsetMask::from_elements(4, [i]).unwrap())
            .collect();
        let p = quotient_point(&o, &parts).unwrap();
        let q = p.compose(&[0b0011, 0b1100]).unwrap();
        assert_eq!(q.coords(), &[int(0), int(4), int(4), int(16)]);
    }

    #[test]
    fn grounded_shift() {
        let o = SetFunctionOracle::new_unchecked(GroundSet::new(2).unwrap(), "1+|X|", |x| {
            int(1 + x.count_ones() as i64)
        });
        assert!(!o.is_grounded());
        assert!(quotient_point(&o, &[SubsetMask::full(2)]).is_err());
        let g = o.grounded();
        assert_eq!(g.eval_bits(0b11), int(2));
        assert_eq!(g.normalization(), &rat(1, 1));
    }
}
