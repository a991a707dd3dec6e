//! Named verification suites. Each returns named checks with details and,
//! on failure, a witness.

use std::collections::BTreeSet;
use std::sync::Arc;

use itertools::Itertools;
use quolab_core::graphlim::{
    blow_up, cut_dist_labeled_with, cut_capacity_oracle, cut_quotient, gamma_from_kappa, graphon_cut_oracle,
    hom_density_with, kappa_from_gamma, tau_oracle_with, weighted_quotient, CutNormalization, SimpleGraph,
    StepGraphon, WeightedQuotient,
};
use quolab_core::matroid::{
    check_richness_with, closure, cycle_rank_oracle, disjoint_bases, enumerate_flats_with,
    gfqn_rank_preserving_embed, gfqn_stretch_embed, is_flat, matroid_union, min_formula_rank_with,
    normalized_rank_oracle, DisjointBases, GraphicMatroid, LinearMatroid, Matroid, UniformMatroid,
};
use quolab_core::metric::hausdorff_points;
use quolab_core::profiles::{
    compose_over, delta_approx_bound_check_with, meets_log_threshold, profile_with, verify_inclusions_with,
    EnumStrategy, ProfileMode, ProfileSet,
};
use quolab_core::rational::{int, rat, to_exact_string};
use quolab_core::setfn::{check_monotone_with, check_submodular_with, QuotientPoint, SetFunctionOracle, SubsetMask};
use quolab_core::{Limits, Rational};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use serde_json::{json, Value};

use crate::family::example51;
use crate::report::{num, point};
use crate::CliResult;

pub const DEFAULT_SEED: u64 = 1;

pub const SUITES: &[(&str, &str)] = &[
    ("lemma32", "T_2 = Q_2∘T_3 = T_2∘T_3 = T_2∘Q_4 on the small-matroid corpus"),
    ("inclusion-chains", "Q ⊆ T-delta ⊆ T and Q ⊆ T-nabla ⊆ T for every bundled oracle, k = 2"),
    ("lemma39", "d(T_2, T_2-delta) and d(T_2-nabla, Q_2) within k·m/r(E) for GF(2)^4"),
    ("richness", "R(k, 2k) for GF(2)^n with n ≤ 4 and k ≤ 3"),
    ("matroid-union", "union rank against the min formula; two disjoint bases of GF(2)^3"),
    ("edge2cut", "κ from γ and back on every partition of every graph with at most 6 nodes"),
    ("blowup-density", "t(F, G(t)) = t(F, G) for F in K2, P3, K3, C4 and G with at most 5 nodes"),
    ("dq-dg", "Hausdorff distance of Q_2 cut profiles at most the labeled cut distance"),
    ("tau", "τ_{F,G} submodular and increasing with τ(∅) = 1 − t(F,G) and τ(E) = 1"),
    ("qqk1", "every Q_2 point of GF(2)^n has max_i ψ({i}) ≥ 1 − 1/n"),
    ("metric", "Hausdorff symmetry, identity and triangle inequality on random clouds"),
    ("embeddings", "GF(2)^m → GF(2)^n embeddings keep flats, ranks, joins and meets"),
];

#[derive(Debug, Clone, Serialize)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    pub detail: Value,
}

#[derive(Debug, Clone, Serialize)]
pub struct SuiteResult {
    pub suite: &'static str,
    pub passed: bool,
    pub checks: Vec<Check>,
}

fn check(name: impl Into<String>, passed: bool, detail: Value) -> Check {
    Check {
        name: name.into(),
        passed,
        detail,
    }
}

pub fn run(name: &str, seed: u64, limits: &Limits) -> CliResult<SuiteResult> {
    let (suite, checks) = match name {
        "lemma32" => ("lemma32", composition(limits)?),
        "inclusion-chains" => ("inclusion-chains", inclusion_chains(limits)?),
        "lemma39" => ("lemma39", approximation(limits)?),
        "richness" => ("richness", richness(limits)?),
        "matroid-union" => ("matroid-union", union_suite(seed, limits)?),
        "edge2cut" => ("edge2cut", edge2cut()?),
        "blowup-density" => ("blowup-density", blowup_density(limits)?),
        "dq-dg" => ("dq-dg", dq_dg(seed, limits)?),
        "tau" => ("tau", tau(limits)?),
        "qqk1" => ("qqk1", qqk1(limits)?),
        "metric" => ("metric", metric(seed)?),
        "embeddings" => ("embeddings", embeddings(limits)?),
        other => unreachable!("suite {other} is not registered"),
    };
    Ok(SuiteResult {
        suite,
        passed: checks.iter().all(|c| c.passed),
        checks,
    })
}

fn rank_of(m: impl Matroid + 'static) -> quolab_core::Result<SetFunctionOracle> {
    normalized_rank_oracle(Arc::new(m))
}

/// Small oracles with ground sets of at most 8 elements.
pub fn corpus() -> CliResult<Vec<(String, SetFunctionOracle)>> {
    let graphon = StepGraphon::new(
        vec![int(0), rat(1, 3), rat(1, 2), int(1)],
        vec![
            vec![int(0), int(1), rat(1, 2)],
            vec![int(1), rat(1, 4), int(0)],
            vec![rat(1, 2), int(0), int(1)],
        ],
    )?;
    Ok(vec![
        ("cycle matroid of K4".into(), rank_of(GraphicMatroid::new(SimpleGraph::complete(4))?)?),
        ("GF(2)^2".into(), rank_of(LinearMatroid::full_space(2, 2)?)?),
        ("GF(2)^3".into(), rank_of(LinearMatroid::full_space(2, 3)?)?),
        ("GF(3)^1".into(), rank_of(LinearMatroid::full_space(3, 1)?)?),
        ("U(2,4)".into(), rank_of(UniformMatroid { rank: 2, size: 4 })?),
        ("example51 n=4".into(), cycle_rank_oracle(&example51(4)?)?),
        ("example51 n=5".into(), cycle_rank_oracle(&example51(5)?)?),
        ("cut C5, edges".into(), cut_capacity_oracle(&SimpleGraph::cycle(5), CutNormalization::Edges)?),
        (
            "cut K3,2, nodes-squared".into(),
            cut_capacity_oracle(&SimpleGraph::complete_bipartite(3, 2), CutNormalization::NodesSquared)?,
        ),
        ("cut P4, twice-edges".into(), cut_capacity_oracle(&SimpleGraph::path(4), CutNormalization::TwiceEdges)?),
        (
            "tau K2 in K4, grounded".into(),
            tau_oracle_with(&SimpleGraph::complete(2), &SimpleGraph::complete(4), &Limits::default())?.grounded(),
        ),
        ("three-step graphon cut".into(), graphon_cut_oracle(&graphon)?),
    ])
}

fn exact(oracle: &SetFunctionOracle, k: usize, mode: ProfileMode, limits: &Limits) -> CliResult<ProfileSet> {
    Ok(profile_with(oracle, k, mode, EnumStrategy::Exact, limits)?)
}

fn set_equality(name: String, a: &ProfileSet, b: &ProfileSet) -> Check {
    let witness = a.first_outside(b).or_else(|| b.first_outside(a));
    check(
        name,
        witness.is_none(),
        json!({ "sizes": [a.len(), b.len()], "witness": witness.map(point) }),
    )
}

fn composition(limits: &Limits) -> CliResult<Vec<Check>> {
    let oracles = vec![
        ("cycle matroid of K4", rank_of(GraphicMatroid::new(SimpleGraph::complete(4))?)?),
        ("GF(2)^2", rank_of(LinearMatroid::full_space(2, 2)?)?),
        ("U(2,4)", rank_of(UniformMatroid { rank: 2, size: 4 })?),
    ];
    let mut checks = Vec::new();
    for (label, oracle) in oracles {
        let t2 = exact(&oracle, 2, ProfileMode::T, limits)?;
        let t3 = exact(&oracle, 3, ProfileMode::T, limits)?;
        let q4 = exact(&oracle, 4, ProfileMode::Q, limits)?;
        for (name, inner, outer) in [
            ("Q_2∘T_3", &t3, ProfileMode::Q),
            ("T_2∘T_3", &t3, ProfileMode::T),
            ("T_2∘Q_4", &q4, ProfileMode::T),
        ] {
            let composed = compose_over(inner, 2, outer, limits)?;
            checks.push(set_equality(format!("{label}: T_2 = {name}"), &t2, &composed));
        }
    }
    Ok(checks)
}

fn inclusion_chains(limits: &Limits) -> CliResult<Vec<Check>> {
    let mut checks = Vec::new();
    for (label, oracle) in corpus()? {
        let r = verify_inclusions_with(&oracle, 2, limits)?;
        let failing: Vec<Value> = r
            .checks
            .iter()
            .filter(|c| !c.holds)
            .map(|c| json!({ "subset": c.subset, "superset": c.superset, "witness": c.witness.as_ref().map(point) }))
            .collect();
        checks.push(check(
            format!("{label}: inclusion chains"),
            r.all_hold && r.zero_in_t,
            json!({ "ground": oracle.size(), "sizes": r.sizes, "zero_in_t": r.zero_in_t, "failures": failing }),
        ));
    }
    Ok(checks)
}

fn approximation(limits: &Limits) -> CliResult<Vec<Check>> {
    let m: Arc<dyn Matroid> = Arc::new(LinearMatroid::full_space(2, 4)?);
    let r = delta_approx_bound_check_with(m, 2, 4, limits)?;
    let a = r.t_vs_tdelta.as_ref();
    let b = r.tnabla_vs_q.as_ref();
    let below_one = a.zip(b).is_some_and(|(a, b)| a.distance < int(1) && b.distance < int(1));
    let detail = json!({
        "richness": r.richness.holds,
        "bound": num(&r.bound),
        "t_vs_tdelta": a.map(|h| num(&h.distance)),
        "tnabla_vs_q": b.map(|h| num(&h.distance)),
        "strategies": r.strategies,
    });
    Ok(vec![
        check("GF(2)^4, k=2, m=4: richness precondition", r.richness.holds, json!(r.richness.witness)),
        check("GF(2)^4, k=2, m=4: distances within the bound", r.holds == Some(true), detail.clone()),
        check("GF(2)^4, k=2, m=4: distances below 1", below_one, detail),
    ])
}

fn richness(limits: &Limits) -> CliResult<Vec<Check>> {
    let mut checks = Vec::new();
    for n in 1..=4 {
        let m = LinearMatroid::full_space(2, n)?;
        for k in 1..=3 {
            let r = check_richness_with(&m, k, 2 * k, limits)?;
            checks.push(check(format!("GF(2)^{n}: R({k},{})", 2 * k), r.holds, json!(r.witness)));
        }
    }
    Ok(checks)
}

fn random_matroid(rng: &mut ChaCha8Rng, ground: usize) -> CliResult<Arc<dyn Matroid>> {
    Ok(match rng.gen_range(0..4) {
        0 | 1 => {
            let q = if rng.gen_bool(0.5) { 2 } else { 3 };
            let dim = rng.gen_range(1..=4);
            let columns = (0..ground)
                .map(|_| (0..dim).map(|_| rng.gen_range(0..q) as u8).collect())
                .collect();
            let field = Arc::new(quolab_core::field::GaloisField::new(q)?);
            Arc::new(LinearMatroid::new(field, dim, columns)?)
        }
        2 => Arc::new(UniformMatroid {
            rank: rng.gen_range(0..=ground),
            size: ground,
        }),
        _ => {
            let n = 6;
            let mut pairs: Vec<(usize, usize)> = (0..n).tuple_combinations().collect();
            pairs.shuffle(rng);
            pairs.truncate(ground);
            Arc::new(GraphicMatroid::new(SimpleGraph::new(n, pairs.clone())?)?)
        }
    })
}

fn union_suite(seed: u64, limits: &Limits) -> CliResult<Vec<Check>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut mismatches = Vec::new();
    let mut certificate_failures = 0usize;
    let instances = 200;
    for i in 0..instances {
        let ground = rng.gen_range(1..=12);
        let count = rng.gen_range(2..=3);
        // a graph on 6 nodes has 15 edges, enough for any ground size
        let ms = (0..count).map(|_| random_matroid(&mut rng, ground)).collect::<CliResult<Vec<_>>>()?;
        let refs: Vec<&dyn Matroid> = ms.iter().map(|m| m.as_ref()).collect();
        let sol = matroid_union(&refs)?;
        let brute = min_formula_rank_with(&refs, limits)?;
        if sol.rank != brute {
            mismatches.push(json!({ "instance": i, "algorithm": sol.rank, "min_formula": brute }));
        }
        let disjoint = sol.parts.iter().tuple_combinations().all(|(a, b)| a & b == 0);
        let independent = sol.parts.iter().zip(&refs).all(|(&p, m)| m.is_independent_bits(p));
        let sizes: usize = sol.parts.iter().map(|p| p.count_ones() as usize).sum();
        let full = (1u64 << ground) - 1;
        let y = sol.certificate;
        let value = y.count_ones() as usize + refs.iter().map(|m| m.rank_bits(full & !y)).sum::<usize>();
        if !(disjoint && independent && sizes == sol.rank && value == sol.rank) {
            certificate_failures += 1;
        }
    }
    let space = LinearMatroid::full_space(2, 3)?;
    let full = SubsetMask::full(space.ground_size());
    let bases = disjoint_bases(&space, &[full.clone(), full])?;
    let bases_ok = match &bases {
        DisjointBases::Found(b) => {
            b.len() == 2 && b.iter().all(|x| x.len() == 3 && space.is_independent_bits(x.bits())) && b[0].bits() & b[1].bits() == 0
        }
        DisjointBases::Deficient { .. } => false,
    };
    let bases_detail = match &bases {
        DisjointBases::Found(b) => json!({ "bases": b.iter().map(|x| x.elements().collect::<Vec<_>>()).collect::<Vec<_>>() }),
        DisjointBases::Deficient { value, required, .. } => json!({ "value": value, "required": required }),
    };
    Ok(vec![
        check(
            format!("{instances} random instances: union rank = min formula"),
            mismatches.is_empty(),
            json!({ "mismatches": mismatches }),
        ),
        check(
            format!("{instances} random instances: certificates"),
            certificate_failures == 0,
            json!({ "failures": certificate_failures }),
        ),
        check("GF(2)^3: two disjoint bases", bases_ok, bases_detail),
    ])
}

/// Every graph on `n` labeled nodes.
fn all_graphs(n: usize) -> impl Iterator<Item = SimpleGraph> {
    let pairs: Vec<(usize, usize)> = (0..n).tuple_combinations().collect();
    (0u64..1 << pairs.len()).map(move |mask| {
        let edges = pairs.iter().enumerate().filter(|(i, _)| mask >> i & 1 == 1).map(|(_, e)| *e);
        SimpleGraph::new(n, edges).expect("valid edges")
    })
}

/// One graph per isomorphism class on `n` nodes, by minimal edge mask.
fn isomorphism_classes(n: usize) -> Vec<SimpleGraph> {
    let pairs: Vec<(usize, usize)> = (0..n).tuple_combinations().collect();
    let index = |u: usize, v: usize| pairs.iter().position(|&p| p == (u.min(v), u.max(v))).expect("pair");
    let perms: Vec<Vec<usize>> = (0..n).permutations(n).map(|p| p.iter().map(|&x| x).collect()).collect();
    let images: Vec<Vec<usize>> = perms
        .iter()
        .map(|p| pairs.iter().map(|&(u, v)| index(p[u], p[v])).collect())
        .collect();
    let mut seen = BTreeSet::new();
    let mut reps = Vec::new();
    for mask in 0u64..1 << pairs.len() {
        let canon = images
            .iter()
            .map(|img| img.iter().enumerate().filter(|(i, _)| mask >> i & 1 == 1).fold(0u64, |acc, (_, &j)| acc | 1 << j))
            .min()
            .expect("identity");
        if seen.insert(canon) {
            let edges = pairs.iter().enumerate().filter(|(i, _)| canon >> i & 1 == 1).map(|(_, e)| *e);
            reps.push(SimpleGraph::new(n, edges).expect("valid edges"));
        }
    }
    reps
}

/// Set partitions of `0..n` as restricted growth strings.
fn set_partitions(n: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut labels = vec![0usize; n];
    fn go(i: usize, blocks: usize, labels: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if i == labels.len() {
            out.push(labels.clone());
            return;
        }
        for b in 0..=blocks {
            labels[i] = b;
            go(i + 1, blocks.max(b + 1), labels, out);
        }
    }
    if n > 0 {
        go(1, 1, &mut labels, &mut out);
    }
    out
}

fn edge2cut() -> CliResult<Vec<Check>> {
    let mut checks = Vec::new();
    for n in 1..=6 {
        let (graphs, scope): (Vec<SimpleGraph>, &str) = if n <= 5 {
            (all_graphs(n).collect(), "all labeled graphs")
        } else {
            (isomorphism_classes(n), "one graph per isomorphism class")
        };
        let partitions = set_partitions(n);
        let mut pairs = 0usize;
        let mut witness = None;
        'graphs: for g in &graphs {
            for labels in &partitions {
                let k = labels.iter().max().map_or(1, |m| m + 1);
                pairs += 1;
                let wq = weighted_quotient(g, labels, k)?;
                let kappa = kappa_from_gamma(&wq);
                let direct = cut_quotient(g, labels, k, CutNormalization::NodesSquared)?;
                let gamma = gamma_from_kappa(&kappa);
                let off_diagonal = (0..k).all(|i| (0..k).all(|j| i == j || gamma[i][j] == wq.gamma[i][j]));
                let back = kappa_from_gamma(&WeightedQuotient { gamma, ..wq.clone() });
                if kappa != direct || !off_diagonal || back != kappa {
                    witness = Some(json!({ "edges": g.edges(), "labels": labels }));
                    break 'graphs;
                }
            }
        }
        checks.push(check(
            format!("n={n}: round trip"),
            witness.is_none(),
            json!({ "graphs": graphs.len(), "scope": scope, "pairs": pairs, "witness": witness }),
        ));
    }
    Ok(checks)
}

fn blowup_density(limits: &Limits) -> CliResult<Vec<Check>> {
    let patterns = [
        ("K2", SimpleGraph::complete(2)),
        ("P3", SimpleGraph::path(3)),
        ("K3", SimpleGraph::complete(3)),
        ("C4", SimpleGraph::cycle(4)),
    ];
    let mut checks = Vec::new();
    for (name, f) in &patterns {
        let mut tested = 0usize;
        let mut witness = None;
        'graphs: for n in 1..=5 {
            for g in all_graphs(n) {
                let base = hom_density_with(f, &g, limits)?;
                for t in 2..=3 {
                    tested += 1;
                    let big = blow_up(&g, t)?.graph;
                    let d = hom_density_with(f, &big, limits)?;
                    if d != base {
                        witness = Some(json!({ "edges": g.edges(), "nodes": n, "t": t, "base": num(&base), "blown_up": num(&d) }));
                        break 'graphs;
                    }
                }
            }
        }
        checks.push(check(
            format!("F = {name}"),
            witness.is_none(),
            json!({ "comparisons": tested, "witness": witness }),
        ));
    }
    Ok(checks)
}

fn random_graph(rng: &mut ChaCha8Rng, n: usize) -> SimpleGraph {
    let p: f64 = rng.gen_range(0.1..0.9);
    let edges: Vec<(usize, usize)> = (0..n).tuple_combinations().filter(|_| rng.gen_bool(p)).collect();
    SimpleGraph::new(n, edges).expect("valid edges")
}

fn dq_dg(seed: u64, limits: &Limits) -> CliResult<Vec<Check>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let pairs = 100;
    let mut witness = None;
    let mut tight = 0usize;
    for i in 0..pairs {
        let n = rng.gen_range(2..=9);
        let g = random_graph(&mut rng, n);
        let h = random_graph(&mut rng, n);
        let norm = CutNormalization::NodesSquared;
        let pg = exact(&cut_capacity_oracle(&g, norm)?, 2, ProfileMode::Q, limits)?;
        let ph = exact(&cut_capacity_oracle(&h, norm)?, 2, ProfileMode::Q, limits)?;
        let d_haus = hausdorff_points(&pg.point_vec(), &ph.point_vec())?.distance;
        let d_cut = cut_dist_labeled_with(&g, &h, limits)?;
        if d_haus == d_cut {
            tight += 1;
        }
        if d_haus > d_cut && witness.is_none() {
            witness = Some(json!({ "pair": i, "hausdorff": num(&d_haus), "cut": num(&d_cut), "g": g.edges(), "h": h.edges() }));
        }
    }
    Ok(vec![check(
        format!("{pairs} random same-node pairs, nodes-squared"),
        witness.is_none(),
        json!({ "equalities": tight, "witness": witness }),
    )])
}

fn tau(limits: &Limits) -> CliResult<Vec<Check>> {
    let mut checks = Vec::new();
    for (fname, f) in [("K2", SimpleGraph::complete(2)), ("K3", SimpleGraph::complete(3))] {
        for (gname, g) in [
            ("K4", SimpleGraph::complete(4)),
            ("C5", SimpleGraph::cycle(5)),
            ("K3,2", SimpleGraph::complete_bipartite(3, 2)),
        ] {
            let oracle = tau_oracle_with(&f, &g, limits)?;
            let sub = check_submodular_with(&oracle, limits)?;
            let mono = check_monotone_with(&oracle, limits)?;
            let t = hom_density_with(&f, &g, limits)?;
            let empty = oracle.eval_bits(0);
            let full = oracle.eval_bits(oracle.ground().full_bits());
            let ends = empty == int(1) - t && full == int(1);
            checks.push(check(
                format!("F={fname}, G={gname}"),
                sub.is_empty() && mono.is_empty() && ends,
                json!({
                    "edges": g.edge_count(),
                    "density": num(&t),
                    "empty_value": num(&empty),
                    "full_value": num(&full),
                    "submodularity_violations": sub,
                    "monotonicity_violations": mono,
                }),
            ));
        }
    }
    Ok(checks)
}

fn qqk1(limits: &Limits) -> CliResult<Vec<Check>> {
    let mut checks = Vec::new();
    for n in 2..=4 {
        let oracle = rank_of(LinearMatroid::full_space(2, n)?)?;
        let q2 = exact(&oracle, 2, ProfileMode::Q, limits)?;
        let mut lowest: Option<Rational> = None;
        let mut witness = None;
        for p in q2.points() {
            let top = *p.singleton(1).max(p.singleton(2));
            if !meets_log_threshold(&top, 2, n, 2)? && witness.is_none() {
                witness = Some(point(p));
            }
            lowest = Some(lowest.map_or(top, |l| l.min(top)));
        }
        let lowest = lowest.expect("profiles are nonempty");
        checks.push(check(
            format!("GF(2)^{n}"),
            witness.is_none(),
            json!({
                "points": q2.len(),
                "threshold": num(&(int(1) - rat(1, n as i64))),
                "lowest_max_singleton": num(&lowest),
                "witness": witness,
            }),
        ));
    }
    Ok(checks)
}

fn random_cloud(rng: &mut ChaCha8Rng) -> Vec<QuotientPoint> {
    let size = rng.gen_range(1..=50);
    (0..size)
        .map(|_| {
            let mut coords = vec![int(0)];
            for _ in 1..4 {
                let den = rng.gen_range(1..=12);
                coords.push(rat(rng.gen_range(0..=den), den));
            }
            QuotientPoint::new(2, coords).expect("k = 2")
        })
        .collect()
}

fn metric(seed: u64) -> CliResult<Vec<Check>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let clouds = 1000;
    let (mut symmetry, mut identity, mut triangle) = (None, None, None);
    for i in 0..clouds {
        let a = random_cloud(&mut rng);
        let b = random_cloud(&mut rng);
        let c = random_cloud(&mut rng);
        let d = |x: &[QuotientPoint], y: &[QuotientPoint]| hausdorff_points(x, y).map(|r| r.distance);
        let (ab, ba, aa) = (d(&a, &b)?, d(&b, &a)?, d(&a, &a)?);
        let (ac, bc) = (d(&a, &c)?, d(&b, &c)?);
        if ab != ba && symmetry.is_none() {
            symmetry = Some(json!({ "cloud": i, "ab": num(&ab), "ba": num(&ba) }));
        }
        if aa != int(0) && identity.is_none() {
            identity = Some(json!({ "cloud": i, "aa": num(&aa) }));
        }
        if ac > ab + bc && triangle.is_none() {
            triangle = Some(json!({ "cloud": i, "ac": num(&ac), "ab": num(&ab), "bc": num(&bc) }));
        }
    }
    Ok(vec![
        check(format!("{clouds} clouds: symmetry"), symmetry.is_none(), json!({ "witness": symmetry })),
        check(format!("{clouds} clouds: identity"), identity.is_none(), json!({ "witness": identity })),
        check(format!("{clouds} clouds: triangle inequality"), triangle.is_none(), json!({ "witness": triangle })),
    ])
}

type Embed = fn(u32, usize, usize, &SubsetMask) -> quolab_core::Result<SubsetMask>;

fn lattice_check(m: usize, n: usize, kind: &str, embed: Embed, limits: &Limits) -> CliResult<Check> {
    let source = LinearMatroid::full_space(2, m)?;
    let target = LinearMatroid::full_space(2, n)?;
    let flats = enumerate_flats_with(&source, limits)?;
    let stretch = kind == "stretch";
    let factor = if stretch { n / m } else { 1 };
    let mut failures = Vec::new();
    let images = flats
        .iter()
        .map(|f| embed(2, m, n, &f.mask))
        .collect::<quolab_core::Result<Vec<_>>>()?;
    for (f, img) in flats.iter().zip(&images) {
        if !is_flat(&target, img)? || target.rank_bits(img.bits()) != factor * f.rank {
            failures.push(json!({ "flat": f.mask.elements().collect::<Vec<_>>(), "problem": "rank or flatness" }));
        }
    }
    let distinct: BTreeSet<u64> = images.iter().map(|x| x.bits()).collect();
    if distinct.len() != images.len() {
        failures.push(json!({ "problem": "not injective" }));
    }
    for (i, j) in (0..flats.len()).tuple_combinations() {
        let (a, b) = (&flats[i].mask, &flats[j].mask);
        let meet = embed(2, m, n, &a.intersection(b)?)?;
        let join = embed(2, m, n, &closure(&source, &a.union(b)?)?)?;
        let meet_img = images[i].intersection(&images[j])?;
        let join_img = closure(&target, &images[i].union(&images[j])?)?;
        if meet != meet_img || join != join_img {
            failures.push(json!({ "pair": [i, j], "problem": "join or meet" }));
            break;
        }
    }
    Ok(check(
        format!("{kind} GF(2)^{m} → GF(2)^{n}"),
        failures.is_empty(),
        json!({ "flats": flats.len(), "failures": failures }),
    ))
}

fn embeddings(limits: &Limits) -> CliResult<Vec<Check>> {
    let mut checks = Vec::new();
    for m in 1..=3 {
        for n in m..=4 {
            checks.push(lattice_check(m, n, "rank-preserving", gfqn_rank_preserving_embed, limits)?);
            if n % m == 0 {
                checks.push(lattice_check(m, n, "stretch", gfqn_stretch_embed, limits)?);
            }
        }
    }
    let t2 = |n: usize| -> CliResult<ProfileSet> {
        exact(&rank_of(LinearMatroid::full_space(2, n)?)?, 2, ProfileMode::T, limits)
    };
    let (t1, t2_2, t2_3) = (t2(1)?, t2(2)?, t2(3)?);
    for (label, small, big) in [("GF(2)^1 in GF(2)^2", &t1, &t2_2), ("GF(2)^1 in GF(2)^3", &t1, &t2_3)] {
        let w = small.first_outside(big);
        checks.push(check(
            format!("stretch: T_2 of {label}"),
            w.is_none(),
            json!({ "witness": w.map(point) }),
        ));
    }
    for (label, small, big, c, c2) in [
        ("GF(2)^1 in GF(2)^2", &t1, &t2_2, 1, 2),
        ("GF(2)^2 in GF(2)^3", &t2_2, &t2_3, 2, 3),
    ] {
        let scaled = big.scaled(&rat(c2, c));
        let w = small.first_outside(&scaled);
        checks.push(check(
            format!("rank-preserving: T_2 of {label}, scaled by {}", to_exact_string(&rat(c2, c))),
            w.is_none(),
            json!({ "witness": w.map(point) }),
        ));
    }
    Ok(checks)
}
