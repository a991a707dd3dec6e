//! Acceptance criteria. Each check compares library output against an
//! oracle computed here from first principles, then prints one PASS/FAIL
//! line. Runs without the libtest harness so the lines always show.

use std::collections::{BTreeSet, HashSet};
use std::process::Command;
use std::sync::Arc;
use std::time::{Duration, Instant};

use quolab_cli::example51;
use quolab_cli::suites::corpus;
use quolab_core::graphlim::{
    blow_up, cut_capacity_oracle, cut_dist_labeled, cut_quotient, gamma_from_kappa, hom_density, kappa_from_gamma,
    tau_oracle, weighted_quotient, CutNormalization, SimpleGraph, WeightedQuotient,
};
use quolab_core::matroid::{
    check_richness, cycle_rank_oracle, disjoint_bases, matroid_union_rank, normalized_rank_oracle, DisjointBases,
    GraphicMatroid, LinearMatroid, Matroid, UniformMatroid,
};
use quolab_core::field::GaloisField;
use quolab_core::metric::{hausdorff, hausdorff_points};
use quolab_core::profiles::{
    compose_over, delta_approx_bound_check, profile, verify_inclusions, EnumStrategy, ProfileMode, ProfileSet,
};
use quolab_core::setfn::{QuotientPoint, SetFunctionOracle, SubsetMask};
use quolab_core::{Limits, Rational};
use num_traits::Signed;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Outcome = Result<String, String>;
type Points = BTreeSet<Vec<Rational>>;

fn r(n: i64, d: i64) -> Rational {
    Rational::new(n, d)
}

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn fail<E: std::fmt::Display>(e: E) -> String {
    e.to_string()
}

// ---------- independent oracles ----------

fn forest_rank(n: usize, edges: &[(usize, usize)], bits: u64) -> usize {
    let mut parent: Vec<usize> = (0..n).collect();
    fn find(p: &mut [usize], mut x: usize) -> usize {
        while p[x] != x {
            p[x] = p[p[x]];
            x = p[x];
        }
        x
    }
    let mut rank = 0;
    for (i, &(u, v)) in edges.iter().enumerate() {
        if bits >> i & 1 == 1 {
            let (a, b) = (find(&mut parent, u), find(&mut parent, v));
            if a != b {
                parent[a] = b;
                rank += 1;
            }
        }
    }
    rank
}

/// Rank over the prime field GF(p) of the selected columns.
fn linear_rank(p: u32, columns: &[Vec<u8>], bits: u64) -> usize {
    let inverse = |a: u32| (1..p).find(|b| a * b % p == 1).expect("prime field");
    let mut basis: Vec<(usize, Vec<u32>)> = Vec::new();
    for (i, col) in columns.iter().enumerate() {
        if bits >> i & 1 == 0 {
            continue;
        }
        let mut v: Vec<u32> = col.iter().map(|&x| x as u32 % p).collect();
        for (pivot, b) in &basis {
            let c = v[*pivot];
            if c != 0 {
                for (x, y) in v.iter_mut().zip(b) {
                    *x = (*x + p * p - c * y % p) % p;
                }
            }
        }
        if let Some(pivot) = v.iter().position(|&x| x != 0) {
            let inv = inverse(v[pivot]);
            for x in v.iter_mut() {
                *x = *x * inv % p;
            }
            basis.push((pivot, v));
        }
    }
    basis.len()
}

fn rank_table(n: usize, rank: impl Fn(u64) -> usize) -> Vec<usize> {
    (0..1u64 << n).map(rank).collect()
}

fn normalized(ranks: &[usize]) -> Vec<Rational> {
    let top = *ranks.last().expect("nonempty") as i64;
    ranks.iter().map(|&x| if top == 0 { r(0, 1) } else { r(x as i64, top) }).collect()
}

#[derive(Clone, Copy, Debug)]
enum Kind {
    Q,
    Delta,
    Nabla,
    T,
}

impl Kind {
    fn allows(self, membership: usize) -> bool {
        let c = membership.count_ones();
        match self {
            Kind::Q => c == 1,
            Kind::Delta => c <= 1,
            Kind::Nabla => c >= 1,
            Kind::T => true,
        }
    }

    fn mode(self) -> ProfileMode {
        match self {
            Kind::Q => ProfileMode::Q,
            Kind::Delta => ProfileMode::TDelta,
            Kind::Nabla => ProfileMode::TNabla,
            Kind::T => ProfileMode::T,
        }
    }
}

/// Every k-tuple of subsets allowed by `kind`, element by element.
fn brute(n: usize, k: usize, kind: Kind, table: &[Rational]) -> Points {
    let allowed: Vec<usize> = (0..1usize << k).filter(|&m| kind.allows(m)).collect();
    let mut out = BTreeSet::new();
    let mut parts = vec![0u64; k];
    fn rec(e: usize, n: usize, allowed: &[usize], parts: &mut [u64], table: &[Rational], out: &mut Points) {
        if e == n {
            let k = parts.len();
            let point = (0..1usize << k)
                .map(|i| {
                    let u = (0..k).filter(|j| i >> j & 1 == 1).fold(0u64, |acc, j| acc | parts[j]);
                    table[u as usize]
                })
                .collect();
            out.insert(point);
            return;
        }
        for &m in allowed {
            for (j, part) in parts.iter_mut().enumerate() {
                if m >> j & 1 == 1 {
                    *part |= 1 << e;
                }
            }
            rec(e + 1, n, allowed, parts, table, out);
            for part in parts.iter_mut() {
                *part &= !(1 << e);
            }
        }
    }
    rec(0, n, &allowed, &mut parts, table, &mut out);
    out
}

fn compose(inner: &Points, m: usize, k: usize, kind: Kind) -> Points {
    inner.iter().flat_map(|psi| brute(m, k, kind, psi)).collect()
}

fn linf(a: &[Rational], b: &[Rational]) -> Rational {
    a.iter().zip(b).map(|(x, y)| (x - y).abs()).max().unwrap_or_default()
}

fn directed(a: &Points, b: &Points) -> Rational {
    a.iter()
        .map(|x| b.iter().map(|y| linf(x, y)).min().expect("nonempty"))
        .max()
        .unwrap_or_default()
}

fn haus(a: &Points, b: &Points) -> Rational {
    directed(a, b).max(directed(b, a))
}

fn set_of(p: &ProfileSet) -> Points {
    p.points().iter().map(|q| q.coords().to_vec()).collect()
}

fn table_of(oracle: &SetFunctionOracle) -> Vec<Rational> {
    (0..1u64 << oracle.size()).map(|b| oracle.eval_bits(b)).collect()
}

fn exact(oracle: &SetFunctionOracle, k: usize, kind: Kind) -> Result<ProfileSet, String> {
    profile(oracle, k, kind.mode(), EnumStrategy::Exact).map_err(fail)
}

fn hom_brute(f: &SimpleGraph, g: &SimpleGraph) -> Rational {
    let (p, n) = (f.node_count(), g.node_count());
    let total = (n as u64).pow(p as u32);
    let mut count = 0u64;
    let mut map = vec![0usize; p];
    for code in 0..total {
        let mut c = code;
        for slot in map.iter_mut() {
            *slot = (c % n as u64) as usize;
            c /= n as u64;
        }
        if f.edges().iter().all(|&(u, v)| g.is_adjacent(map[u], map[v])) {
            count += 1;
        }
    }
    r(count as i64, total as i64)
}

/// Ordered-pair edge count between node sets.
fn e_count(g: &SimpleGraph, s: u64, t: u64) -> i64 {
    g.edges()
        .iter()
        .map(|&(u, v)| {
            let (su, sv, tu, tv) = (s >> u & 1, s >> v & 1, t >> u & 1, t >> v & 1);
            (su & tv) as i64 + (sv & tu) as i64
        })
        .sum()
}

/// max over S, T of |e_G(S,T) − e_H(S,T)| / n², optimising T per S.
fn cut_distance_brute(g: &SimpleGraph, h: &SimpleGraph) -> Rational {
    let n = g.node_count();
    let adj = |x: &SimpleGraph, u: usize, v: usize| x.is_adjacent(u, v) as i64;
    let mut best = 0i64;
    for s in 0u64..1 << n {
        let (mut pos, mut neg) = (0i64, 0i64);
        for v in 0..n {
            let d: i64 = (0..n).filter(|u| s >> u & 1 == 1).map(|u| adj(g, u, v) - adj(h, u, v)).sum();
            if d > 0 {
                pos += d;
            } else {
                neg -= d;
            }
        }
        best = best.max(pos).max(neg);
    }
    r(best, (n * n) as i64)
}

fn all_graphs(n: usize) -> Vec<SimpleGraph> {
    let pairs: Vec<(usize, usize)> = (0..n).flat_map(|u| (u + 1..n).map(move |v| (u, v))).collect();
    (0u64..1 << pairs.len())
        .map(|mask| {
            let edges = pairs.iter().enumerate().filter(|(i, _)| mask >> i & 1 == 1).map(|(_, e)| *e);
            SimpleGraph::new(n, edges).expect("valid")
        })
        .collect()
}

fn set_partitions(n: usize) -> Vec<Vec<usize>> {
    let mut out = vec![vec![0]];
    for _ in 1..n {
        out = out
            .into_iter()
            .flat_map(|p| {
                let blocks = p.iter().max().map_or(0, |m| m + 1);
                (0..=blocks).map(move |b| {
                    let mut q = p.clone();
                    q.push(b);
                    q
                })
            })
            .collect();
    }
    out
}

fn random_graph(rng: &mut ChaCha8Rng, n: usize) -> SimpleGraph {
    let p: f64 = rng.gen_range(0.1..0.9);
    let mut edges = Vec::new();
    for u in 0..n {
        for v in u + 1..n {
            if rng.gen_bool(p) {
                edges.push((u, v));
            }
        }
    }
    SimpleGraph::new(n, edges).expect("valid")
}

// ---------- criteria ----------

fn divergence() -> Outcome {
    let start = Instant::now();
    let (g8, g9) = (example51(8).map_err(fail)?, example51(9).map_err(fail)?);
    ensure(g8.edge_count() == 14 && forest_rank(8, g8.edges(), (1 << 14) - 1) == 7, || {
        "G_8 is not a pair of spanning trees".into()
    })?;
    ensure(g9.edge_count() == 8 && forest_rank(9, g9.edges(), (1 << 8) - 1) == 8, || {
        "G_9 is not a spanning tree".into()
    })?;
    let brute_q2 = |g: &SimpleGraph| {
        let n = g.node_count() as i64;
        let t: Vec<Rational> = rank_table(g.edge_count(), |b| forest_rank(g.node_count(), g.edges(), b))
            .into_iter()
            .map(|x| r(x as i64, n))
            .collect();
        brute(g.edge_count(), 2, Kind::Q, &t)
    };
    let (b8, b9) = (brute_q2(&g8), brute_q2(&g9));
    let p8 = exact(&cycle_rank_oracle(&g8).map_err(fail)?, 2, Kind::Q)?;
    let p9 = exact(&cycle_rank_oracle(&g9).map_err(fail)?, 2, Kind::Q)?;
    ensure(set_of(&p8) == b8 && set_of(&p9) == b9, || "Q_2 differs from brute force".into())?;
    let two_trees = vec![r(0, 1), r(7, 8), r(7, 8), r(7, 8)];
    ensure(b8.contains(&two_trees), || "(7/8,7/8,7/8) missing from Q_2(G_8)".into())?;
    let single: Points = [two_trees].into_iter().collect();
    let d_point = directed(&single, &b9);
    ensure(d_point == r(31, 72), || format!("directed distance {d_point}, expected 31/72"))?;
    let d = hausdorff(&p8, &p9).map_err(fail)?.distance;
    ensure(d == haus(&b8, &b9), || "hausdorff differs from brute force".into())?;
    ensure(d >= r(31, 72), || format!("d(G_8, G_9) = {d} < 31/72"))?;
    let mut trend = Vec::new();
    for n in (4..=12).step_by(2) {
        let a = exact(&cycle_rank_oracle(&example51(n).map_err(fail)?).map_err(fail)?, 2, Kind::Q)?;
        let b = exact(&cycle_rank_oracle(&example51(n + 1).map_err(fail)?).map_err(fail)?, 2, Kind::Q)?;
        trend.push(hausdorff(&a, &b).map_err(fail)?.distance);
    }
    ensure(trend.windows(2).all(|w| w[0] < w[1]) && trend.iter().all(|x| *x < r(1, 2)), || {
        format!("d(G_n, G_n+1) not increasing below 1/2: {trend:?}")
    })?;
    let elapsed = start.elapsed();
    ensure(elapsed < Duration::from_secs(5), || format!("took {elapsed:?}"))?;
    let trend: Vec<String> = trend.iter().map(|x| x.to_string()).collect();
    Ok(format!("d = {d}, directed from (7/8,7/8,7/8) = {d_point}, n = 4..12: {}, {elapsed:.2?}", trend.join(" < ")))
}

fn composition_identities() -> Outcome {
    let start = Instant::now();
    let k4 = SimpleGraph::complete(4);
    let gf = LinearMatroid::full_space(2, 2).map_err(fail)?;
    let cases: Vec<(&str, SetFunctionOracle, Vec<Rational>)> = vec![
        (
            "K4",
            normalized_rank_oracle(Arc::new(GraphicMatroid::new(k4.clone()).map_err(fail)?)).map_err(fail)?,
            normalized(&rank_table(6, |b| forest_rank(4, k4.edges(), b))),
        ),
        (
            "GF(2)^2",
            normalized_rank_oracle(Arc::new(gf.clone())).map_err(fail)?,
            normalized(&rank_table(4, |b| linear_rank(2, gf.columns(), b))),
        ),
    ];
    let limits = Limits::default();
    let mut sizes = Vec::new();
    for (name, oracle, table) in cases {
        let n = oracle.size();
        ensure(n <= 6, || format!("{name}: ground {n} > 6"))?;
        ensure(table_of(&oracle) == table, || format!("{name}: oracle disagrees with test rank"))?;
        let t2 = brute(n, 2, Kind::T, &table);
        let t3 = brute(n, 3, Kind::T, &table);
        let q4 = brute(n, 4, Kind::Q, &table);
        let forms = [
            ("Q_2∘T_3", compose(&t3, 3, 2, Kind::Q)),
            ("T_2∘T_3", compose(&t3, 3, 2, Kind::T)),
            ("T_2∘Q_4", compose(&q4, 4, 2, Kind::T)),
        ];
        for (label, set) in &forms {
            ensure(*set == t2, || format!("{name}: T_2 ≠ {label} (brute force)"))?;
        }
        let core_t2 = exact(&oracle, 2, Kind::T)?;
        let core_t3 = exact(&oracle, 3, Kind::T)?;
        let core_q4 = exact(&oracle, 4, Kind::Q)?;
        ensure(set_of(&core_t2) == t2, || format!("{name}: library T_2 differs"))?;
        for (label, inner, mode) in [
            ("Q_2∘T_3", &core_t3, ProfileMode::Q),
            ("T_2∘T_3", &core_t3, ProfileMode::T),
            ("T_2∘Q_4", &core_q4, ProfileMode::T),
        ] {
            let composed = compose_over(inner, 2, mode, &limits).map_err(fail)?;
            ensure(set_of(&composed) == t2, || format!("{name}: library {label} ≠ T_2"))?;
        }
        sizes.push(format!("{name} |T_2| = {}", t2.len()));
    }
    let elapsed = start.elapsed();
    ensure(elapsed < Duration::from_secs(60), || format!("took {elapsed:?}"))?;
    Ok(format!("{}, {elapsed:.2?}", sizes.join(", ")))
}

fn inclusion_chains() -> Outcome {
    let mut names = 0;
    for (name, oracle) in corpus().map_err(fail)? {
        let n = oracle.size();
        ensure(n <= 8, || format!("{name}: ground {n} > 8"))?;
        let table = table_of(&oracle);
        let [q, d, nb, t] = [Kind::Q, Kind::Delta, Kind::Nabla, Kind::T].map(|k| brute(n, 2, k, &table));
        for (kind, set) in [(Kind::Q, &q), (Kind::Delta, &d), (Kind::Nabla, &nb), (Kind::T, &t)] {
            ensure(set_of(&exact(&oracle, 2, kind)?) == *set, || format!("{name}: library {kind:?} differs"))?;
        }
        ensure(q.is_subset(&d) && d.is_subset(&t) && q.is_subset(&nb) && nb.is_subset(&t), || {
            format!("{name}: chain broken")
        })?;
        ensure(verify_inclusions(&oracle, 2).map_err(fail)?.all_hold, || format!("{name}: library report fails"))?;
        names += 1;
    }
    Ok(format!("{names} oracles, k = 2"))
}

fn approximation_bounds() -> Outcome {
    let start = Instant::now();
    let m = LinearMatroid::full_space(2, 4).map_err(fail)?;
    let ranks = rank_table(16, |b| linear_rank(2, m.columns(), b));
    let zero = m.columns().iter().position(|c| c.iter().all(|&x| x == 0)).expect("zero vector");
    let nz: u64 = 0xffff & !(1 << zero);
    let mut t = HashSet::new();
    let independent: Vec<u64> = (0u64..1 << 16).filter(|&b| b & nz == b && ranks[b as usize] == b.count_ones() as usize).collect();
    for &a in &independent {
        for &b in &independent {
            t.insert((ranks[a as usize], ranks[b as usize], ranks[(a | b) as usize]));
        }
    }
    let (mut delta, mut nabla, mut q) = (HashSet::new(), HashSet::new(), HashSet::new());
    for a in 0u64..1 << 16 {
        if a & nz != a {
            continue;
        }
        let rest = nz & !a;
        q.insert((ranks[a as usize], ranks[rest as usize], 4));
        let mut b = rest;
        loop {
            delta.insert((ranks[a as usize], ranks[b as usize], ranks[(a | b) as usize]));
            if b == 0 {
                break;
            }
            b = (b - 1) & rest;
        }
        let mut s = a;
        loop {
            nabla.insert((ranks[a as usize], ranks[(rest | s) as usize], 4));
            if s == 0 {
                break;
            }
            s = (s - 1) & a;
        }
    }
    let points = |set: HashSet<(usize, usize, usize)>| -> Points {
        set.into_iter()
            .map(|(a, b, c)| vec![r(0, 1), r(a as i64, 4), r(b as i64, 4), r(c as i64, 4)])
            .collect()
    };
    let (t, delta, nabla, q) = (points(t), points(delta), points(nabla), points(q));
    let d1 = haus(&t, &delta);
    let d2 = haus(&nabla, &q);
    let report = delta_approx_bound_check(Arc::new(m), 2, 4).map_err(fail)?;
    let lib = |h: &Option<quolab_core::metric::HausdorffReport>| h.as_ref().map(|x| x.distance);
    ensure(lib(&report.t_vs_tdelta) == Some(d1) && lib(&report.tnabla_vs_q) == Some(d2), || {
        format!("library distances {:?} {:?} differ from {d1} {d2}", lib(&report.t_vs_tdelta), lib(&report.tnabla_vs_q))
    })?;
    ensure(report.bound == r(2, 1), || format!("bound {}", report.bound))?;
    ensure(d1 <= r(2, 1) && d2 <= r(2, 1) && report.holds == Some(true), || "bound violated".into())?;
    ensure(d1 < r(1, 1) && d2 < r(1, 1), || "distance reaches the coordinate diameter".into())?;
    let elapsed = start.elapsed();
    ensure(elapsed < Duration::from_secs(300), || format!("took {elapsed:?}"))?;
    Ok(format!("d(T_2, T_2^Δ) = {d1}, d(T_2^∇, Q_2) = {d2}, bound 2, {elapsed:.2?}"))
}

fn richness() -> Outcome {
    let mut checked = 0;
    for n in 1..=4usize {
        let m = LinearMatroid::full_space(2, n).map_err(fail)?;
        let size = 1usize << n;
        let ranks = rank_table(size, |b| linear_rank(2, m.columns(), b));
        let flats: Vec<u64> = (0u64..1 << size)
            .filter(|&s| (0..size).all(|e| s >> e & 1 == 1 || ranks[(s | 1 << e) as usize] > ranks[s as usize]))
            .collect();
        for k in 1..=3usize {
            let brute_holds = flats.iter().all(|&a| {
                let ra = ranks[a as usize];
                ra < 2 * k
                    || flats.iter().filter(|&&f| f & a == f).all(|&f| {
                        ((a & !f).count_ones() as usize) >= k * (ra - ranks[f as usize])
                    })
            });
            let lib = check_richness(&m, k, 2 * k).map_err(fail)?.holds;
            ensure(brute_holds && lib, || format!("GF(2)^{n}, k = {k}: brute {brute_holds}, library {lib}"))?;
            checked += 1;
        }
    }
    Ok(format!("{checked} (n, k) pairs"))
}

enum Recipe {
    Linear { p: u32, dim: usize, columns: Vec<Vec<u8>> },
    Uniform { rank: usize },
    Graphic { edges: Vec<(usize, usize)> },
}

impl Recipe {
    fn rank(&self, bits: u64) -> usize {
        match self {
            Recipe::Linear { p, columns, .. } => linear_rank(*p, columns, bits),
            Recipe::Uniform { rank } => (*rank).min(bits.count_ones() as usize),
            Recipe::Graphic { edges } => forest_rank(6, edges, bits),
        }
    }

    fn build(&self, ground: usize) -> Box<dyn Matroid> {
        match self {
            Recipe::Linear { p, dim, columns } => {
                let field = Arc::new(GaloisField::new(*p).expect("prime"));
                Box::new(LinearMatroid::new(field, *dim, columns.clone()).expect("valid"))
            }
            Recipe::Uniform { rank } => Box::new(UniformMatroid { rank: *rank, size: ground }),
            Recipe::Graphic { edges } => {
                Box::new(GraphicMatroid::new(SimpleGraph::new(6, edges.clone()).expect("valid")).expect("valid"))
            }
        }
    }
}

fn matroid_union() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    let instances = 200;
    let mut max_ground = 0;
    for i in 0..instances {
        let ground = rng.gen_range(1..=12usize);
        max_ground = max_ground.max(ground);
        let count = rng.gen_range(2..=3);
        let recipes: Vec<Recipe> = (0..count)
            .map(|_| match rng.gen_range(0..3) {
                0 => {
                    let p = if rng.gen_bool(0.5) { 2 } else { 3 };
                    let dim = rng.gen_range(1..=4);
                    let columns = (0..ground).map(|_| (0..dim).map(|_| rng.gen_range(0..p) as u8).collect()).collect();
                    Recipe::Linear { p, dim, columns }
                }
                1 => Recipe::Uniform { rank: rng.gen_range(0..=ground) },
                _ => {
                    let mut all: Vec<(usize, usize)> = (0..6).flat_map(|u| (u + 1..6).map(move |v| (u, v))).collect();
                    for j in (1..all.len()).rev() {
                        all.swap(j, rng.gen_range(0..=j));
                    }
                    all.truncate(ground);
                    // element i is the i-th edge in the graph's own order
                    let edges = SimpleGraph::new(6, all).expect("valid").edges().to_vec();
                    Recipe::Graphic { edges }
                }
            })
            .collect();
        let full = (1u64 << ground) - 1;
        let formula = (0..=full)
            .map(|y| y.count_ones() as usize + recipes.iter().map(|s| s.rank(full & !y)).sum::<usize>())
            .min()
            .expect("nonempty");
        let built: Vec<Box<dyn Matroid>> = recipes.iter().map(|s| s.build(ground)).collect();
        let refs: Vec<&dyn Matroid> = built.iter().map(|b| b.as_ref()).collect();
        let lib = matroid_union_rank(&refs).map_err(fail)?;
        ensure(lib == formula, || format!("instance {i}: algorithm {lib}, min formula {formula}"))?;
    }
    let space = LinearMatroid::full_space(2, 3).map_err(fail)?;
    let full = SubsetMask::full(8);
    match disjoint_bases(&space, &[full.clone(), full]).map_err(fail)? {
        DisjointBases::Found(b) => {
            let ok = b.len() == 2
                && b.iter().all(|x| x.len() == 3 && linear_rank(2, space.columns(), x.bits()) == 3)
                && b[0].bits() & b[1].bits() == 0;
            ensure(ok, || format!("returned sets are not two disjoint bases: {b:?}"))?;
        }
        DisjointBases::Deficient { .. } => return Err("GF(2)^3 reported without two disjoint bases".into()),
    }
    Ok(format!("{instances} instances up to ground {max_ground}, two disjoint bases of GF(2)^3"))
}

fn cut_machinery() -> Outcome {
    let start = Instant::now();
    // (a) every partition of every labeled graph on at most 6 nodes
    let mut pairs = 0u64;
    for n in 1..=6usize {
        let partitions = set_partitions(n);
        let nn = (n * n) as i64;
        for g in all_graphs(n) {
            for labels in &partitions {
                let k = labels.iter().max().map_or(1, |m| m + 1);
                let class = |i: usize| labels.iter().enumerate().filter(|(_, &l)| l == i).fold(0u64, |acc, (v, _)| acc | 1 << v);
                let classes: Vec<u64> = (0..k).map(class).collect();
                let full = (1u64 << n) - 1;
                let kappa: Vec<Rational> = (0..1usize << k)
                    .map(|a| {
                        let x = (0..k).filter(|i| a >> i & 1 == 1).fold(0u64, |acc, i| acc | classes[i]);
                        r(e_count(&g, x, full & !x), nn)
                    })
                    .collect();
                let wq = weighted_quotient(&g, labels, k).map_err(fail)?;
                let lib_kappa = kappa_from_gamma(&wq);
                let direct = cut_quotient(&g, labels, k, CutNormalization::NodesSquared).map_err(fail)?;
                let gamma = gamma_from_kappa(&lib_kappa);
                let gamma_ok = (0..k).all(|i| {
                    (0..k).all(|j| i == j || (gamma[i][j] == wq.gamma[i][j] && gamma[i][j] == r(e_count(&g, classes[i], classes[j]), nn)))
                });
                let back = kappa_from_gamma(&WeightedQuotient { gamma, ..wq.clone() });
                ensure(lib_kappa.coords() == kappa.as_slice() && direct == lib_kappa && gamma_ok && back == lib_kappa, || {
                    format!("round trip fails on {:?} with labels {labels:?}", g.edges())
                })?;
                pairs += 1;
            }
        }
    }
    // (b) Hausdorff distance of cut profiles against the labeled cut distance
    let mut rng = ChaCha8Rng::seed_from_u64(77);
    let mut equalities = 0;
    for i in 0..100 {
        let n = rng.gen_range(2..=9usize);
        let (g, h) = (random_graph(&mut rng, n), random_graph(&mut rng, n));
        let q2 = |x: &SimpleGraph| -> Points {
            let full = (1u64 << n) - 1;
            (0..=full)
                .map(|a| {
                    let c = r(e_count(x, a, full & !a), (n * n) as i64);
                    vec![r(0, 1), c, c, r(0, 1)]
                })
                .collect()
        };
        let (bg, bh) = (q2(&g), q2(&h));
        let norm = CutNormalization::NodesSquared;
        let pg = exact(&cut_capacity_oracle(&g, norm).map_err(fail)?, 2, Kind::Q)?;
        let ph = exact(&cut_capacity_oracle(&h, norm).map_err(fail)?, 2, Kind::Q)?;
        ensure(set_of(&pg) == bg && set_of(&ph) == bh, || format!("pair {i}: Q_2 of κ differs"))?;
        let d_haus = hausdorff(&pg, &ph).map_err(fail)?.distance;
        let d_cut = cut_dist_labeled(&g, &h).map_err(fail)?;
        ensure(d_haus == haus(&bg, &bh) && d_cut == cut_distance_brute(&g, &h), || {
            format!("pair {i}: library distances differ from brute force")
        })?;
        ensure(d_haus <= d_cut, || format!("pair {i}: {d_haus} > {d_cut}"))?;
        equalities += (d_haus == d_cut) as usize;
    }
    // (c) homomorphism densities are blow-up invariant
    let patterns = [SimpleGraph::complete(2), SimpleGraph::path(3), SimpleGraph::complete(3), SimpleGraph::cycle(4)];
    let mut comparisons = 0;
    for n in 1..=5 {
        for g in all_graphs(n) {
            for f in &patterns {
                let base = hom_brute(f, &g);
                ensure(hom_density(f, &g).map_err(fail)? == base, || format!("t(F, G) differs on {:?}", g.edges()))?;
                for t in 2..=3 {
                    let big = blow_up(&g, t).map_err(fail)?.graph;
                    ensure(big.node_count() == n * t && big.edge_count() == g.edge_count() * t * t, || {
                        "blow-up has the wrong size".into()
                    })?;
                    let d = hom_density(f, &big).map_err(fail)?;
                    ensure(d == base, || format!("t(F, G({t})) = {d} ≠ {base} on {:?}", g.edges()))?;
                    comparisons += 1;
                }
            }
        }
    }
    Ok(format!(
        "(a) {pairs} graph/partition pairs, (b) 100 pairs with {equalities} equalities, (c) {comparisons} comparisons, {:.2?}",
        start.elapsed()
    ))
}

fn tau_functions() -> Outcome {
    let mut cases = 0;
    for f in [SimpleGraph::complete(2), SimpleGraph::complete(3)] {
        for g in [SimpleGraph::complete(4), SimpleGraph::cycle(5), SimpleGraph::complete_bipartite(3, 2)] {
            let m = g.edge_count();
            ensure(m <= 10, || "too many edges".into())?;
            let oracle = tau_oracle(&f, &g).map_err(fail)?;
            let full = (1u64 << m) - 1;
            let values: Vec<Rational> = (0..=full).map(|x| oracle.eval_bits(x)).collect();
            for x in 0..=full {
                let rest = SimpleGraph::new(g.node_count(), g.edges().iter().enumerate().filter(|(i, _)| x >> i & 1 == 0).map(|(_, e)| *e))
                    .map_err(fail)?;
                let expected = r(1, 1) - hom_brute(&f, &rest);
                ensure(values[x as usize] == expected, || format!("τ({x:b}) = {}, expected {expected}", values[x as usize]))?;
            }
            for a in 0..=full {
                for b in 0..=full {
                    let (va, vb) = (values[a as usize], values[b as usize]);
                    ensure(va + vb >= values[(a & b) as usize] + values[(a | b) as usize], || {
                        format!("submodularity fails at {a:b}, {b:b}")
                    })?;
                    ensure(a & b != a || va <= vb, || format!("monotonicity fails at {a:b} ⊆ {b:b}"))?;
                }
            }
            ensure(values[0] == r(1, 1) - hom_brute(&f, &g) && values[full as usize] == r(1, 1), || {
                "endpoint values wrong".into()
            })?;
            cases += 1;
        }
    }
    Ok(format!("{cases} (F, G) pairs"))
}

fn singleton_threshold() -> Outcome {
    let mut summary = Vec::new();
    for n in 2..=3usize {
        let m = LinearMatroid::full_space(2, n).map_err(fail)?;
        let size = 1 << n;
        let table = normalized(&rank_table(size, |b| linear_rank(2, m.columns(), b)));
        let q2 = brute(size, 2, Kind::Q, &table);
        let lib = exact(&normalized_rank_oracle(Arc::new(m)).map_err(fail)?, 2, Kind::Q)?;
        ensure(set_of(&lib) == q2, || format!("GF(2)^{n}: library Q_2 differs"))?;
        let threshold = r(1, 1) - r(1, n as i64);
        let lowest = q2.iter().map(|p| p[1].max(p[2])).min().expect("nonempty");
        ensure(lowest >= threshold, || format!("GF(2)^{n}: max singleton {lowest} < {threshold}"))?;
        summary.push(format!("GF(2)^{n}: min max ψ({{i}}) = {lowest} ≥ {threshold}"));
    }
    Ok(summary.join(", "))
}

fn metric_soundness() -> Outcome {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(99);
    let cloud = |rng: &mut ChaCha8Rng| -> Vec<QuotientPoint> {
        (0..rng.gen_range(1..=50))
            .map(|_| {
                let mut c = vec![r(0, 1)];
                for _ in 0..3 {
                    let den = rng.gen_range(1..=16);
                    c.push(r(rng.gen_range(0..=den), den));
                }
                QuotientPoint::new(2, c).expect("k = 2")
            })
            .collect()
    };
    let as_set = |c: &[QuotientPoint]| -> Points { c.iter().map(|p| p.coords().to_vec()).collect() };
    for i in 0..1000 {
        let (a, b, c) = (cloud(&mut rng), cloud(&mut rng), cloud(&mut rng));
        let d = |x: &[QuotientPoint], y: &[QuotientPoint]| hausdorff_points(x, y).map(|h| h.distance).map_err(fail);
        let (ab, ba, aa, ac, bc) = (d(&a, &b)?, d(&b, &a)?, d(&a, &a)?, d(&a, &c)?, d(&b, &c)?);
        ensure(ab == haus(&as_set(&a), &as_set(&b)), || format!("triple {i}: differs from brute force"))?;
        ensure(ab == ba, || format!("triple {i}: asymmetric"))?;
        ensure(aa == r(0, 1), || format!("triple {i}: d(A, A) = {aa}"))?;
        ensure(ac <= ab + bc, || format!("triple {i}: triangle inequality fails"))?;
    }
    let elapsed = start.elapsed();
    ensure(elapsed < Duration::from_secs(30), || format!("took {elapsed:?}"))?;
    Ok(format!("1000 triples, {elapsed:.2?}"))
}

fn determinism() -> Outcome {
    let runs: [&[&str]; 7] = [
        &["profile", "--family", "gf-space", "--q", "2", "--n", "3", "--k", "2", "--strategy", "sampled", "--seed", "11", "--samples", "300"],
        &["converge", "--family", "example51", "--range", "5..8"],
        &["verify", "dq-dg", "--seed", "5"],
        &["verify", "metric", "--seed", "5"],
        &["cutdist", "C5", "K3,2", "--seed", "3"],
        &["hom", "C4", "K3,2"],
        &["cutcap", "C5", "P5", "--norm", "nodes-squared"],
    ];
    for args in runs {
        let run = || {
            Command::new(env!("CARGO_BIN_EXE_quolab"))
                .args(args)
                .output()
                .map_err(fail)
        };
        let (a, b) = (run()?, run()?);
        ensure(a.status.success(), || format!("{args:?} exited with {}", a.status))?;
        ensure(!a.stdout.is_empty() && a.stdout == b.stdout, || format!("{args:?} reports differ"))?;
    }
    Ok(format!("{} commands run twice, byte-identical", runs.len()))
}

fn main() {
    let criteria: [(&str, &str, fn() -> Outcome); 11] = [
        ("1", "counterexample divergence", divergence),
        ("2", "composition identities", composition_identities),
        ("3", "inclusion chains", inclusion_chains),
        ("4", "approximation bounds", approximation_bounds),
        ("5", "richness", richness),
        ("6", "matroid union", matroid_union),
        ("7", "cut machinery", cut_machinery),
        ("8", "τ setfunctions", tau_functions),
        ("9", "singleton threshold", singleton_threshold),
        ("10", "metric soundness", metric_soundness),
        ("11", "determinism", determinism),
    ];
    println!("acceptance criteria (tolerance: exact rational equality throughout, zero slack)");
    let mut failed = 0;
    for (id, name, run) in criteria {
        match run() {
            Ok(detail) => println!("PASS {id:>2} {name}: {detail}"),
            Err(why) => {
                failed += 1;
                println!("FAIL {id:>2} {name}: {why}");
            }
        }
    }
    println!("{} passed, {failed} failed", criteria.len() - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
