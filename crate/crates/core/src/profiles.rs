//! Profile sets `Q_k`, `T_k`, `T_k^Δ`, `T_k^∇` of a setfunction as finite
//! point clouds, their compositions, and the inclusion and approximation
//! checks between them.
//!
//! A tuple `(A_1, …, A_k)` is enumerated element by element: each ground
//! element picks a membership pattern `P ⊆ [k]` (the parts it belongs to).
//! The modes differ only in the allowed patterns: singletons for `Q`,
//! singletons or nothing for `T^Δ`, nonempty patterns for `T^∇`, anything
//! for `T`.

use std::collections::{BTreeMap, BTreeSet, HashSet};
use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use num_bigint::BigUint;
use num_traits::{Signed, ToPrimitive, Zero};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::limits::Limits;
use crate::matroid::{check_richness_with, enumerate_flats_with, normalized_rank_oracle, Matroid, RichnessReport};
use crate::metric::{hausdorff, HausdorffReport};
use crate::rational::{int, parse_rational, to_exact_string, Rational};
use crate::setfn::{full_bits, subset_unions, QuotientPoint, SetFunctionOracle, ValueTable};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum ProfileMode {
    /// Partitions of the ground set (parts may be empty).
    #[serde(rename = "Q")]
    Q,
    /// Arbitrary tuples.
    #[serde(rename = "T")]
    T,
    /// Pairwise disjoint tuples.
    #[serde(rename = "T-delta")]
    TDelta,
    /// Covering tuples.
    #[serde(rename = "T-nabla")]
    TNabla,
}

impl ProfileMode {
    pub const ALL: [ProfileMode; 4] = [ProfileMode::Q, ProfileMode::TDelta, ProfileMode::TNabla, ProfileMode::T];

    pub fn name(&self) -> &'static str {
        match self {
            ProfileMode::Q => "Q",
            ProfileMode::T => "T",
            ProfileMode::TDelta => "T-delta",
            ProfileMode::TNabla => "T-nabla",
        }
    }

    /// Membership patterns an element may take.
    pub fn patterns(&self, k: usize) -> Vec<u64> {
        let all = 0..1u64 << k;
        match self {
            ProfileMode::Q => (0..k).map(|i| 1 << i).collect(),
            ProfileMode::TDelta => std::iter::once(0).chain((0..k).map(|i| 1 << i)).collect(),
            ProfileMode::TNabla => all.skip(1).collect(),
            ProfileMode::T => all.collect(),
        }
    }

    fn allows_flats(&self) -> bool {
        matches!(self, ProfileMode::T | ProfileMode::TNabla)
    }
}

impl fmt::Display for ProfileMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for ProfileMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "q" => Ok(ProfileMode::Q),
            "t" => Ok(ProfileMode::T),
            "t-delta" | "tdelta" | "delta" => Ok(ProfileMode::TDelta),
            "t-nabla" | "tnabla" | "nabla" => Ok(ProfileMode::TNabla),
            _ => Err(Error::Invalid(format!(
                "unknown mode {s:?} (Q, T, T-delta, T-nabla)"
            ))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum EnumStrategy {
    Exact,
    /// Inner approximation from `samples` random tuples plus a fixed
    /// portfolio of structured tuples.
    Sampled { seed: u64, samples: usize },
    /// Tuples of flats; exact for `T` and `T^∇` of matroid rank oracles.
    FlatsOnly,
}

impl EnumStrategy {
    pub fn name(&self) -> &'static str {
        match self {
            EnumStrategy::Exact => "exact",
            EnumStrategy::Sampled { .. } => "sampled",
            EnumStrategy::FlatsOnly => "flats-only",
        }
    }

    /// Whether the resulting profile is the complete set.
    pub fn is_exact(&self) -> bool {
        !matches!(self, EnumStrategy::Sampled { .. })
    }
}

/// A deduplicated set of quotient points on `k` parts.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ProfileSet {
    k: usize,
    mode: ProfileMode,
    strategy: EnumStrategy,
    source: String,
    points: BTreeSet<QuotientPoint>,
}

pub const PROFILE_FORMAT: &str = "quolab-profile";
pub const PROFILE_VERSION: u32 = 1;

#[derive(Serialize, Deserialize)]
struct ProfileWire {
    format: String,
    version: u32,
    k: usize,
    mode: ProfileMode,
    strategy: EnumStrategy,
    source: String,
    /// Coordinates in subset-index order `I ↦ Σ_{i∈I} 2^{i−1}`.
    points: Vec<Vec<String>>,
}

impl Serialize for ProfileSet {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        ProfileWire {
            format: PROFILE_FORMAT.into(),
            version: PROFILE_VERSION,
            k: self.k,
            mode: self.mode,
            strategy: self.strategy,
            source: self.source.clone(),
            points: self
                .points
                .iter()
                .map(|p| p.coords().iter().map(to_exact_string).collect())
                .collect(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for ProfileSet {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error as _;
        let wire = ProfileWire::deserialize(d)?;
        if wire.format != PROFILE_FORMAT || wire.version != PROFILE_VERSION {
            return Err(D::Error::custom(format!(
                "unsupported profile format {} v{}",
                wire.format, wire.version
            )));
        }
        let points = wire
            .points
            .iter()
            .map(|coords| {
                let coords = coords
                    .iter()
                    .map(|c| parse_rational(c))
                    .collect::<Result<Vec<_>>>()?;
                QuotientPoint::new(wire.k, coords)
            })
            .collect::<Result<BTreeSet<_>>>()
            .map_err(D::Error::custom)?;
        Ok(ProfileSet {
            k: wire.k,
            mode: wire.mode,
            strategy: wire.strategy,
            source: wire.source,
            points,
        })
    }
}

impl ProfileSet {
    pub fn from_points(
        k: usize,
        mode: ProfileMode,
        strategy: EnumStrategy,
        source: impl Into<String>,
        points: impl IntoIterator<Item = QuotientPoint>,
    ) -> Result<Self> {
        let points: BTreeSet<QuotientPoint> = points.into_iter().collect();
        for p in &points {
            if p.k() != k {
                return Err(Error::DimensionMismatch { left: k, right: p.k() });
            }
            if !p.at(0).is_zero() {
                return Err(Error::NonzeroEmpty(to_exact_string(p.at(0))));
            }
        }
        Ok(ProfileSet {
            k,
            mode,
            strategy,
            source: source.into(),
            points,
        })
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn mode(&self) -> ProfileMode {
        self.mode
    }

    pub fn strategy(&self) -> EnumStrategy {
        self.strategy
    }

    pub fn source(&self) -> &str {
        &self.source
    }

    pub fn points(&self) -> &BTreeSet<QuotientPoint> {
        &self.points
    }

    pub fn point_vec(&self) -> Vec<QuotientPoint> {
        self.points.iter().cloned().collect()
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn contains(&self, p: &QuotientPoint) -> bool {
        self.points.contains(p)
    }

    /// The first point of `self` missing from `other`, if any.
    pub fn first_outside(&self, other: &ProfileSet) -> Option<&QuotientPoint> {
        self.points.iter().find(|p| !other.points.contains(p))
    }

    pub fn is_subset_of(&self, other: &ProfileSet) -> bool {
        self.first_outside(other).is_none()
    }

    /// Points scaled by `factor`, keeping the metadata.
    pub fn scaled(&self, factor: &Rational) -> ProfileSet {
        ProfileSet {
            points: self.points.iter().map(|p| p.scaled(factor)).collect(),
            ..self.clone()
        }
    }

    /// Per-coordinate minimum and maximum.
    pub fn coordinate_ranges(&self) -> Vec<(Rational, Rational)> {
        (0..1usize << self.k)
            .map(|i| {
                let vals = self.points.iter().map(|p| *p.at(i));
                let lo = vals.clone().min().unwrap_or_else(|| int(0));
                let hi = vals.max().unwrap_or_else(|| int(0));
                (lo, hi)
            })
            .collect()
    }
}

/// Leaves visited by exact enumeration: `|patterns|^n`.
pub fn exact_iterations(n: usize, k: usize, mode: ProfileMode) -> u128 {
    let base = mode.patterns(k).len() as u128;
    (0..n).try_fold(1u128, |acc, _| acc.checked_mul(base)).unwrap_or(u128::MAX)
}

fn check_k(k: usize, limits: &Limits) -> Result<()> {
    if k == 0 || k > limits.max_k {
        return Err(Error::KTooLarge { k, cap: limits.max_k });
    }
    Ok(())
}

fn invalid_strategy(strategy: EnumStrategy, mode: ProfileMode, reason: &'static str) -> Error {
    Error::InvalidStrategy {
        strategy: strategy.name().into(),
        mode: mode.name().into(),
        reason,
    }
}

/// Exact when the enumeration fits the cap, flats-only when that is valid,
/// otherwise the cap error of the exact enumeration.
pub fn exact_strategy_for(oracle: &SetFunctionOracle, k: usize, mode: ProfileMode, limits: &Limits) -> Result<EnumStrategy> {
    let iterations = exact_iterations(oracle.size(), k, mode);
    if iterations <= limits.max_iterations && oracle.size() <= limits.max_ground {
        return Ok(EnumStrategy::Exact);
    }
    if mode.allows_flats() && oracle.matroid().is_some() {
        return Ok(EnumStrategy::FlatsOnly);
    }
    if oracle.size() > limits.max_ground {
        return Err(Error::GroundTooLarge {
            size: oracle.size(),
            cap: limits.max_ground,
        });
    }
    Err(Error::EnumCap {
        iterations,
        cap: limits.max_iterations,
    })
}

pub fn profile(oracle: &SetFunctionOracle, k: usize, mode: ProfileMode, strategy: EnumStrategy) -> Result<ProfileSet> {
    profile_with(oracle, k, mode, strategy, &Limits::default())
}

pub fn profile_with(
    oracle: &SetFunctionOracle,
    k: usize,
    mode: ProfileMode,
    strategy: EnumStrategy,
    limits: &Limits,
) -> Result<ProfileSet> {
    check_k(k, limits)?;
    if !oracle.is_grounded() {
        return Err(Error::NonzeroEmpty(to_exact_string(&oracle.empty_value())));
    }
    let points = match strategy {
        EnumStrategy::Exact => exact_points(oracle, k, mode, limits)?,
        EnumStrategy::FlatsOnly => flat_points(oracle, k, mode, limits)?,
        EnumStrategy::Sampled { seed, samples } => sampled_points(oracle, k, mode, seed, samples, limits),
    };
    Ok(ProfileSet {
        k,
        mode,
        strategy,
        source: oracle.description().to_string(),
        points,
    })
}

fn point_from_parts(oracle: &SetFunctionOracle, parts: &[u64]) -> QuotientPoint {
    let coords = subset_unions(parts)
        .into_iter()
        .map(|u| oracle.eval_bits(u))
        .collect();
    QuotientPoint::from_raw(parts.len(), coords)
}

fn exact_points(
    oracle: &SetFunctionOracle,
    k: usize,
    mode: ProfileMode,
    limits: &Limits,
) -> Result<BTreeSet<QuotientPoint>> {
    let n = oracle.size();
    let iterations = exact_iterations(n, k, mode);
    if iterations > limits.max_iterations {
        return Err(Error::EnumCap {
            iterations,
            cap: limits.max_iterations,
        });
    }
    let table = oracle.tabulate(limits)?;
    let patterns = mode.patterns(k);
    let base = patterns.len();
    // split the first `depth` elements into independent parallel tasks
    let mut depth = 0;
    let mut tasks = 1usize;
    while depth < n && tasks < 1024 {
        tasks *= base;
        depth += 1;
    }
    let walker = Walker {
        table: &table,
        patterns: &patterns,
        k,
        n,
    };
    let keys = (0..tasks)
        .into_par_iter()
        .fold(HashSet::new, |mut seen: HashSet<Vec<u32>>, code| {
            let mut parts = vec![0u64; k];
            let mut c = code;
            for e in 0..depth {
                walker.place(&mut parts, e, patterns[c % base]);
                c /= base;
            }
            let mut key = vec![0u32; (1 << k) - 1];
            let mut unions = vec![0u64; 1 << k];
            walker.walk(&mut parts, depth, &mut key, &mut unions, &mut seen);
            seen
        })
        .reduce(HashSet::new, |mut a, b| {
            if a.len() < b.len() {
                return b.into_iter().chain(a).collect();
            }
            a.extend(b);
            a
        });
    Ok(keys
        .into_iter()
        .map(|key| {
            let coords = std::iter::once(int(0))
                .chain(key.iter().map(|&id| *table.value_of_id(id)))
                .collect();
            QuotientPoint::from_raw(k, coords)
        })
        .collect())
}

struct Walker<'a> {
    table: &'a ValueTable,
    patterns: &'a [u64],
    k: usize,
    n: usize,
}

impl Walker<'_> {
    fn place(&self, parts: &mut [u64], e: usize, pattern: u64) {
        for (i, part) in parts.iter_mut().enumerate() {
            if pattern >> i & 1 == 1 {
                *part |= 1 << e;
            }
        }
    }

    fn walk(
        &self,
        parts: &mut [u64],
        e: usize,
        key: &mut [u32],
        unions: &mut [u64],
        seen: &mut HashSet<Vec<u32>>,
    ) {
        if e == self.n {
            for idx in 1..1usize << self.k {
                let low = idx.trailing_zeros() as usize;
                unions[idx] = unions[idx & (idx - 1)] | parts[low];
                key[idx - 1] = self.table.id(unions[idx]);
            }
            if !seen.contains(&*key) {
                seen.insert(key.to_vec());
            }
            return;
        }
        let bit = 1u64 << e;
        for &pattern in self.patterns {
            self.place(parts, e, pattern);
            self.walk(parts, e + 1, key, unions, seen);
            for part in parts.iter_mut() {
                *part &= !bit;
            }
        }
    }
}

fn flat_masks(oracle: &SetFunctionOracle, limits: &Limits) -> Result<Vec<u64>> {
    let m = oracle
        .matroid()
        .ok_or_else(|| invalid_strategy(EnumStrategy::FlatsOnly, ProfileMode::T, "oracle is not a matroid rank function"))?;
    Ok(enumerate_flats_with(m.as_ref(), limits)?
        .into_iter()
        .map(|f| f.mask.bits())
        .collect())
}

fn flat_points(
    oracle: &SetFunctionOracle,
    k: usize,
    mode: ProfileMode,
    limits: &Limits,
) -> Result<BTreeSet<QuotientPoint>> {
    if !mode.allows_flats() {
        return Err(invalid_strategy(
            EnumStrategy::FlatsOnly,
            mode,
            "tuples of flats only represent T and T-nabla; partitions and disjoint tuples need not consist of flats",
        ));
    }
    if oracle.matroid().is_none() {
        return Err(invalid_strategy(EnumStrategy::FlatsOnly, mode, "oracle is not a matroid rank function"));
    }
    let flats = flat_masks(oracle, limits)?;
    let f = flats.len();
    let tuples = (0..k)
        .try_fold(1u128, |acc, _| acc.checked_mul(f as u128))
        .unwrap_or(u128::MAX);
    if tuples > limits.max_iterations {
        return Err(Error::EnumCap {
            iterations: tuples,
            cap: limits.max_iterations,
        });
    }
    let full = full_bits(oracle.size());
    let points = (0..tuples as usize)
        .into_par_iter()
        .filter_map(|code| {
            let mut c = code;
            let parts: Vec<u64> = (0..k)
                .map(|_| {
                    let m = flats[c % f];
                    c /= f;
                    m
                })
                .collect();
            if mode == ProfileMode::TNabla && parts.iter().fold(0, |a, p| a | p) != full {
                return None;
            }
            Some(point_from_parts(oracle, &parts))
        })
        .collect::<HashSet<_>>();
    Ok(points.into_iter().collect())
}

/// Structured tuples tried before random ones: everything in one part, and
/// elements dealt round-robin.
fn portfolio(n: usize, k: usize) -> Vec<Vec<u64>> {
    let full = full_bits(n);
    let mut tuples: Vec<Vec<u64>> = (0..k)
        .map(|i| (0..k).map(|j| if i == j { full } else { 0 }).collect())
        .collect();
    let mut dealt = vec![0u64; k];
    for e in 0..n {
        dealt[e % k] |= 1 << e;
    }
    tuples.push(dealt);
    tuples
}

fn sampled_points(
    oracle: &SetFunctionOracle,
    k: usize,
    mode: ProfileMode,
    seed: u64,
    samples: usize,
    limits: &Limits,
) -> BTreeSet<QuotientPoint> {
    let n = oracle.size();
    let patterns = mode.patterns(k);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut tuples = portfolio(n, k);
    if mode.allows_flats() && oracle.matroid().is_some() {
        if let Ok(flats) = flat_masks(oracle, limits) {
            let full = full_bits(n);
            for _ in 0..samples.min(256) {
                let parts: Vec<u64> = (0..k).map(|_| *flats.choose(&mut rng).expect("a flat")).collect();
                if mode == ProfileMode::T || parts.iter().fold(0, |a, p| a | p) == full {
                    tuples.push(parts);
                }
            }
        }
    }
    for _ in 0..samples {
        let mut parts = vec![0u64; k];
        for e in 0..n {
            let pattern = patterns[rng.gen_range(0..patterns.len())];
            for (i, part) in parts.iter_mut().enumerate() {
                if pattern >> i & 1 == 1 {
                    *part |= 1 << e;
                }
            }
        }
        tuples.push(parts);
    }
    tuples
        .par_iter()
        .map(|parts| point_from_parts(oracle, parts))
        .collect::<HashSet<_>>()
        .into_iter()
        .collect()
}

/// Profile of a quotient point read as a setfunction on its parts.
pub fn derived_profile(point: &QuotientPoint, k: usize, mode: ProfileMode) -> Result<ProfileSet> {
    derived_profile_with(point, k, mode, &Limits::default())
}

pub fn derived_profile_with(point: &QuotientPoint, k: usize, mode: ProfileMode, limits: &Limits) -> Result<ProfileSet> {
    check_k(point.k(), limits)?;
    profile_with(&point.as_oracle(), k, mode, EnumStrategy::Exact, limits)
}

/// `⋃_{ψ ∈ inner} outer_mode_k(ψ)` for a given inner profile.
pub fn compose_over(inner: &ProfileSet, outer_k: usize, outer_mode: ProfileMode, limits: &Limits) -> Result<ProfileSet> {
    let parts = inner
        .points
        .par_iter()
        .map(|psi| derived_profile_with(psi, outer_k, outer_mode, limits).map(|p| p.points))
        .collect::<Result<Vec<_>>>()?;
    let points: BTreeSet<QuotientPoint> = parts.into_iter().flatten().collect();
    Ok(ProfileSet {
        k: outer_k,
        mode: outer_mode,
        strategy: if inner.strategy.is_exact() {
            EnumStrategy::Exact
        } else {
            inner.strategy
        },
        source: format!(
            "{}_{} of {}_{} of {}",
            outer_mode, outer_k, inner.mode, inner.k, inner.source
        ),
        points,
    })
}

/// Profile of profiles, e.g. `Q_k ∘ T_a`: the union of the outer profiles of
/// every point of the inner profile.
pub fn compose(
    oracle: &SetFunctionOracle,
    outer_k: usize,
    inner_m: usize,
    outer_mode: ProfileMode,
    inner_mode: ProfileMode,
) -> Result<ProfileSet> {
    compose_with(oracle, outer_k, inner_m, outer_mode, inner_mode, &Limits::default())
}

pub fn compose_with(
    oracle: &SetFunctionOracle,
    outer_k: usize,
    inner_m: usize,
    outer_mode: ProfileMode,
    inner_mode: ProfileMode,
    limits: &Limits,
) -> Result<ProfileSet> {
    let strategy = exact_strategy_for(oracle, inner_m, inner_mode, limits)?;
    let inner = profile_with(oracle, inner_m, inner_mode, strategy, limits)?;
    compose_over(&inner, outer_k, outer_mode, limits)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct InclusionCheck {
    pub subset: ProfileMode,
    pub superset: ProfileMode,
    pub holds: bool,
    pub witness: Option<QuotientPoint>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct InclusionReport {
    pub k: usize,
    pub sizes: BTreeMap<ProfileMode, usize>,
    pub strategies: BTreeMap<ProfileMode, EnumStrategy>,
    pub checks: Vec<InclusionCheck>,
    pub zero_in_t: bool,
    pub zero_in_q: bool,
    pub all_hold: bool,
}

/// `Q_k ⊆ T_k^Δ ⊆ T_k` and `Q_k ⊆ T_k^∇ ⊆ T_k` on exact profiles.
pub fn verify_inclusions(oracle: &SetFunctionOracle, k: usize) -> Result<InclusionReport> {
    verify_inclusions_with(oracle, k, &Limits::default())
}

pub fn verify_inclusions_with(oracle: &SetFunctionOracle, k: usize, limits: &Limits) -> Result<InclusionReport> {
    let mut sets = BTreeMap::new();
    let mut strategies = BTreeMap::new();
    for mode in ProfileMode::ALL {
        let strategy = exact_strategy_for(oracle, k, mode, limits)?;
        strategies.insert(mode, strategy);
        sets.insert(mode, profile_with(oracle, k, mode, strategy, limits)?);
    }
    use ProfileMode::*;
    let checks: Vec<InclusionCheck> = [(Q, TDelta), (TDelta, T), (Q, TNabla), (TNabla, T)]
        .into_iter()
        .map(|(a, b)| {
            let witness = sets[&a].first_outside(&sets[&b]).cloned();
            InclusionCheck {
                subset: a,
                superset: b,
                holds: witness.is_none(),
                witness,
            }
        })
        .collect();
    let zero = QuotientPoint::zero(k);
    Ok(InclusionReport {
        k,
        sizes: sets.iter().map(|(m, s)| (*m, s.len())).collect(),
        strategies,
        all_hold: checks.iter().all(|c| c.holds),
        checks,
        zero_in_t: sets[&T].contains(&zero),
        zero_in_q: sets[&Q].contains(&zero),
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ApproxBoundReport {
    pub k: usize,
    pub m: usize,
    pub richness: RichnessReport,
    /// `k·m / r(E)`.
    #[serde(with = "crate::rational::exact_str")]
    pub bound: Rational,
    /// `d(T_k, T_k^Δ)`; absent when the richness precondition fails.
    pub t_vs_tdelta: Option<HausdorffReport>,
    /// `d(T_k^∇, Q_k)`.
    pub tnabla_vs_q: Option<HausdorffReport>,
    pub strategies: BTreeMap<ProfileMode, EnumStrategy>,
    /// `None` when the precondition is unmet and no bound is claimed.
    pub holds: Option<bool>,
}

/// Hausdorff distances `T_k` to `T_k^Δ` and `T_k^∇` to `Q_k` of the
/// normalized rank, against the bound `k·m/r(E)` under condition `R(k, m)`.
pub fn delta_approx_bound_check(m: Arc<dyn Matroid>, k: usize, min_rank: usize) -> Result<ApproxBoundReport> {
    delta_approx_bound_check_with(m, k, min_rank, &Limits::default())
}

pub fn delta_approx_bound_check_with(
    m: Arc<dyn Matroid>,
    k: usize,
    min_rank: usize,
    limits: &Limits,
) -> Result<ApproxBoundReport> {
    let richness = check_richness_with(m.as_ref(), k, min_rank, limits)?;
    let total = m.full_rank().max(1) as i64;
    let bound = Rational::new((k * min_rank) as i64, total);
    let mut report = ApproxBoundReport {
        k,
        m: min_rank,
        richness,
        bound,
        t_vs_tdelta: None,
        tnabla_vs_q: None,
        strategies: BTreeMap::new(),
        holds: None,
    };
    if !report.richness.holds {
        return Ok(report);
    }
    let oracle = normalized_rank_oracle(m)?;
    let mut sets = BTreeMap::new();
    for mode in ProfileMode::ALL {
        let strategy = exact_strategy_for(&oracle, k, mode, limits)?;
        report.strategies.insert(mode, strategy);
        sets.insert(mode, profile_with(&oracle, k, mode, strategy, limits)?);
    }
    use ProfileMode::*;
    let a = hausdorff(&sets[&T], &sets[&TDelta])?;
    let b = hausdorff(&sets[&TNabla], &sets[&Q])?;
    report.holds = Some(a.distance <= bound && b.distance <= bound);
    report.t_vs_tdelta = Some(a);
    report.tnabla_vs_q = Some(b);
    Ok(report)
}

/// Threshold on `max_i ψ({i})` for the limit-set filter.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum LimitThreshold {
    /// `1 − log_q(k)/n`, the finite-`n` form for GF(q)^n.
    FiniteN { q: u32, n: usize },
    /// Exactly 1, the description of the limit set.
    One,
}

/// Whether `value ≥ 1 − log_q(k)/n`, decided exactly: with
/// `n(1 − value) = a/b` the inequality reads `q^a ≤ k^b`.
pub fn meets_log_threshold(value: &Rational, q: u32, n: usize, k: usize) -> Result<bool> {
    if n == 0 || q < 2 || k == 0 {
        return Err(Error::Invalid("threshold needs n ≥ 1, q ≥ 2, k ≥ 1".into()));
    }
    let gap = Rational::from_integer(n as i64) * (int(1) - value);
    if !gap.is_positive() {
        return Ok(true);
    }
    let too_big = || Error::Invalid(format!("threshold exponent {gap} too large"));
    let a = gap.numer().to_u32().ok_or_else(too_big)?;
    let b = gap.denom().to_u32().ok_or_else(too_big)?;
    Ok(BigUint::from(q).pow(a) <= BigUint::from(k).pow(b))
}

/// Points with `max_i ψ({i})` at or above the threshold.
pub fn limit_set_filter(tset: &ProfileSet, threshold: LimitThreshold) -> Result<ProfileSet> {
    let k = tset.k;
    let mut kept = BTreeSet::new();
    for p in &tset.points {
        let best = (1..=k).map(|i| *p.singleton(i)).max().expect("k ≥ 1");
        let pass = match threshold {
            LimitThreshold::One => best >= int(1),
            LimitThreshold::FiniteN { q, n } => meets_log_threshold(&best, q, n, k)?,
        };
        if pass {
            kept.insert(p.clone());
        }
    }
    Ok(ProfileSet {
        points: kept,
        source: format!("{} (limit-set filter)", tset.source),
        ..tset.clone()
    })
}
