use std::path::{Path, PathBuf};

use quolab_core::graphlim::{
    cut_capacity_oracle, cut_dist_labeled_with, cut_dist_unlabeled_upper_with, graphon_cut_oracle, hom_density_step_with,
    hom_density_with, CutNormalization, SimpleGraph, StepGraphon,
};
use quolab_core::metric::{cauchy_diagnostic, hausdorff, matrix_csv, CauchyConfig};
use quolab_core::profiles::{profile_with, EnumStrategy, ProfileSet};
use quolab_core::rational::int;
use quolab_core::setfn::SetFunctionOracle;
use quolab_core::Rational;
use serde_json::{json, Value};

use crate::config::{ConfigFile, Format, Settings};
use crate::family::Family;
use crate::inputs::{load_graph, load_graphon};
use crate::report::{self, hausdorff_json, matrix, num, nums, points_csv, profile_json, RunReport, Timer};
use crate::suites;
use crate::{Cli, CliError, CliResult, Command, ProfileArgs};

pub struct Outcome {
    pub report: RunReport,
    pub failed: bool,
}

/// What a command produced before formatting.
struct Produced {
    command: &'static str,
    settings: Settings,
    extra_config: Value,
    seeds: Vec<u64>,
    results: Value,
    csv: Option<String>,
    failed: bool,
}

pub fn execute(cli: Cli) -> CliResult<Outcome> {
    let file = match &cli.output.config {
        Some(p) => ConfigFile::load(p)?,
        None => ConfigFile::default(),
    };
    let mut timer = Timer::new(cli.output.timings);
    let format = cli.output.format;
    let produced = match cli.command {
        Command::Profile { family, n, profile } => {
            let mut s = Settings::resolve(&file, &profile, format);
            s.norm = family.norm.unwrap_or(s.norm);
            let family = Family::from_args(&family, s.norm)?;
            cmd_profile(&family, n, s, &mut timer)?
        }
        Command::Converge { family, range, profile } => {
            let mut s = Settings::resolve(&file, &profile, format);
            s.norm = family.norm.unwrap_or(s.norm);
            let family = Family::from_args(&family, s.norm)?;
            cmd_converge(&family, range.indices().collect(), s, &mut timer)?
        }
        Command::Verify { suite, seed } => {
            let profile = ProfileArgs {
                seed,
                ..ProfileArgs::default()
            };
            cmd_verify(&suite, Settings::resolve(&file, &profile, format), &mut timer)?
        }
        Command::Cutdist { a, b, t_max, trials, seed } => {
            let profile = ProfileArgs {
                seed,
                ..ProfileArgs::default()
            };
            let mut s = Settings::resolve(&file, &profile, format);
            s.t_max = t_max.unwrap_or(s.t_max);
            s.trials = trials.unwrap_or(s.trials);
            cmd_cutdist(&a, &b, s, &mut timer)?
        }
        Command::Hom { f, g, graphon } => {
            let s = Settings::resolve(&file, &ProfileArgs::default(), format);
            cmd_hom(&f, g.as_deref(), graphon.as_deref(), s, &mut timer)?
        }
        Command::Cutcap {
            graphs,
            graphon,
            norm,
            profile,
        } => {
            let mut s = Settings::resolve(&file, &profile, format);
            s.norm = norm.unwrap_or(s.norm);
            cmd_cutcap(&graphs, graphon.as_deref(), s, &mut timer)?
        }
    };
    emit(produced, cli.output.out.as_deref(), timer)
}

fn emit(p: Produced, out: Option<&Path>, timer: Timer) -> CliResult<Outcome> {
    let mut config = serde_json::to_value(&p.settings).expect("settings serialize");
    if let (Some(obj), Value::Object(extra)) = (config.as_object_mut(), p.extra_config) {
        obj.extend(extra);
    }
    let report = RunReport::new(p.command, config, p.seeds, p.results, timer);
    match p.settings.format {
        Format::Json => {
            report::write_text(&report.to_json(), out)?;
            if let (Some(path), Some(csv)) = (out, &p.csv) {
                if p.command == "converge" {
                    report::write_text(csv, Some(&sibling_csv(path)))?;
                }
            }
        }
        Format::Csv => {
            let csv = p.csv.as_ref().ok_or_else(|| {
                CliError::Usage(format!("{} has no CSV output; use --format json", p.command))
            })?;
            report::write_text(csv, out)?;
        }
    }
    Ok(Outcome {
        report,
        failed: p.failed,
    })
}

fn sibling_csv(path: &Path) -> PathBuf {
    if path.extension().is_some_and(|e| e == "csv") {
        let mut name = path.file_stem().unwrap_or_default().to_os_string();
        name.push(".matrix.csv");
        path.with_file_name(name)
    } else {
        path.with_extension("csv")
    }
}

fn seeds_of(strategies: &[EnumStrategy]) -> Vec<u64> {
    let mut seeds: Vec<u64> = strategies
        .iter()
        .filter_map(|s| match s {
            EnumStrategy::Sampled { seed, .. } => Some(*seed),
            _ => None,
        })
        .collect();
    seeds.dedup();
    seeds
}

fn profile_of(oracle: &SetFunctionOracle, s: &Settings) -> CliResult<ProfileSet> {
    let strategy = s.strategy_for(oracle, s.k, s.mode)?;
    Ok(profile_with(oracle, s.k, s.mode, strategy, &s.limits)?)
}

fn cmd_profile(family: &Family, n: usize, s: Settings, timer: &mut Timer) -> CliResult<Produced> {
    let member = family.member(n, &s.limits)?;
    timer.step("generate");
    let p = profile_of(&member.oracle, &s)?;
    timer.step("profile");
    let csv = Some(points_csv(&p)?);
    Ok(Produced {
        command: "profile",
        extra_config: json!({ "sequence": family.describe(), "n": n }),
        seeds: seeds_of(&[p.strategy()]),
        results: json!({
            "member": member.info,
            "oracle": member.oracle.description(),
            "profile": profile_json(&p),
        }),
        csv,
        failed: false,
        settings: s,
    })
}

fn cmd_converge(family: &Family, indices: Vec<usize>, s: Settings, timer: &mut Timer) -> CliResult<Produced> {
    let mut sets = Vec::new();
    let mut members = Vec::new();
    let mut labels = Vec::new();
    for &n in &indices {
        let member = family.member(n, &s.limits)?;
        let p = profile_of(&member.oracle, &s)?;
        timer.step(format!("profile {}", member.label));
        members.push(json!({
            "info": member.info,
            "oracle": member.oracle.description(),
            "strategy": p.strategy(),
            "point_count": p.len(),
        }));
        labels.push(member.label);
        sets.push(p);
    }
    let config = CauchyConfig::default();
    let diag = cauchy_diagnostic(&sets, &config)?;
    timer.step("distances");
    let consecutive = sets
        .windows(2)
        .zip(indices.windows(2))
        .map(|(pair, idx)| {
            hausdorff(&pair[0], &pair[1]).map(|h| json!({ "from": idx[0], "to": idx[1], "hausdorff": hausdorff_json(&h) }))
        })
        .collect::<quolab_core::Result<Vec<_>>>()?;
    timer.step("witnesses");
    let strategies: Vec<EnumStrategy> = sets.iter().map(|p| p.strategy()).collect();
    let heuristic = strategies.iter().any(|st| !st.is_exact());
    let csv = Some(matrix_csv(&labels, &diag.pairwise, true)?);
    Ok(Produced {
        command: "converge",
        extra_config: json!({
            "sequence": family.describe(),
            "range": indices,
            "cauchy": { "decrease": num(&config.decrease), "stall": num(&config.stall) },
        }),
        seeds: seeds_of(&strategies),
        results: json!({
            "members": members,
            "labels": labels,
            "pairwise": matrix(&diag.pairwise),
            "tail_sup": nums(&diag.tail_sup),
            "verdict": diag.verdict,
            "witness": diag.witness,
            "consecutive": consecutive,
            "heuristic": heuristic,
        }),
        csv,
        failed: false,
        settings: s,
    })
}

fn cmd_verify(name: &str, s: Settings, timer: &mut Timer) -> CliResult<Produced> {
    let names: Vec<&str> = if name == "all" {
        suites::SUITES.iter().map(|(n, _)| *n).collect()
    } else if suites::SUITES.iter().any(|(n, _)| *n == name) {
        vec![name]
    } else {
        let list: Vec<String> = suites::SUITES.iter().map(|(n, d)| format!("  {n:<18} {d}")).collect();
        return Err(CliError::Usage(format!(
            "unknown suite {name:?}; available suites (or `all`):\n{}",
            list.join("\n")
        )));
    };
    let seed = s.seed.unwrap_or(suites::DEFAULT_SEED);
    let mut results = Vec::new();
    for n in names {
        let r = suites::run(n, seed, &s.limits)?;
        timer.step(n);
        results.push(r);
    }
    let passed = results.iter().all(|r| r.passed);
    Ok(Produced {
        command: "verify",
        extra_config: json!({ "suite": name }),
        seeds: vec![seed],
        results: json!({ "passed": passed, "suites": results }),
        csv: None,
        failed: !passed,
        settings: s,
    })
}

fn cmd_cutdist(a: &str, b: &str, s: Settings, timer: &mut Timer) -> CliResult<Produced> {
    let g = load_graph(a)?;
    let h = load_graph(b)?;
    let labeled = if g.node_count() == h.node_count() {
        Some(cut_dist_labeled_with(&g, &h, &s.limits)?)
    } else {
        None
    };
    timer.step("labeled");
    let seed = s.seed.unwrap_or(0);
    let unlabeled = match cut_dist_unlabeled_upper_with(&g, &h, s.t_max, s.trials, seed, &s.limits) {
        Ok(b) => json!({
            "upper": num(&b.upper),
            "t": b.t,
            "blow_up_nodes": b.bijection.len(),
            "bijection": b.bijection,
            "exhaustive": b.exhaustive,
        }),
        Err(e) if labeled.is_some() && e.is_cap() => json!({ "skipped": e.to_string() }),
        Err(e) => return Err(e.into()),
    };
    timer.step("unlabeled");
    Ok(Produced {
        command: "cutdist",
        extra_config: json!({ "a": a, "b": b }),
        seeds: vec![seed],
        results: json!({
            "nodes": [g.node_count(), h.node_count()],
            "edges": [g.edge_count(), h.edge_count()],
            "labeled": labeled.as_ref().map(num),
            "labeled_normalization": "nodes-squared",
            "unlabeled_upper_bound": unlabeled,
        }),
        csv: None,
        failed: false,
        settings: s,
    })
}

fn cmd_hom(f: &str, g: Option<&str>, graphon: Option<&Path>, s: Settings, timer: &mut Timer) -> CliResult<Produced> {
    if g.is_none() && graphon.is_none() {
        return Err(CliError::Usage("hom needs a graph G, a --graphon file, or both".into()));
    }
    let pattern = load_graph(f)?;
    let mut results = json!({ "pattern": { "nodes": pattern.node_count(), "edges": pattern.edges() } });
    let obj = results.as_object_mut().expect("object");
    let mut failed = false;
    if let Some(g) = g {
        let graph = load_graph(g)?;
        let direct = hom_density_with(&pattern, &graph, &s.limits)?;
        let via_graphon = hom_density_step_with(&pattern, &StepGraphon::from_graph(&graph)?, &s.limits)?;
        let agree = direct == via_graphon;
        failed |= !agree;
        obj.insert(
            "graph".into(),
            json!({
                "nodes": graph.node_count(),
                "edges": graph.edge_count(),
                "density": num(&direct),
                "density_of_step_graphon": num(&via_graphon),
                "cross_check": agree,
            }),
        );
        timer.step("graph");
    }
    if let Some(path) = graphon {
        let w = load_graphon(path)?;
        let d = hom_density_step_with(&pattern, &w, &s.limits)?;
        obj.insert(
            "graphon".into(),
            json!({ "steps": w.steps(), "density": num(&d) }),
        );
        timer.step("graphon");
    }
    Ok(Produced {
        command: "hom",
        extra_config: json!({ "f": f, "g": g, "graphon": graphon }),
        seeds: Vec::new(),
        results,
        csv: None,
        failed,
        settings: s,
    })
}

fn cmd_cutcap(graphs: &[String], graphon: Option<&Path>, s: Settings, timer: &mut Timer) -> CliResult<Produced> {
    if graphs.is_empty() && graphon.is_none() {
        return Err(CliError::Usage("cutcap needs at least one graph or a --graphon file".into()));
    }
    let loaded: Vec<SimpleGraph> = graphs.iter().map(|a| load_graph(a)).collect::<CliResult<_>>()?;
    let mut labels: Vec<String> = graphs.to_vec();
    let mut oracles = Vec::new();
    for g in &loaded {
        oracles.push(cut_capacity_oracle(g, s.norm)?);
    }
    if let Some(path) = graphon {
        oracles.push(graphon_cut_oracle(&load_graphon(path)?)?);
        labels.push(format!("graphon:{}", path.display()));
    }
    let sets = oracles.iter().map(|o| profile_of(o, &s)).collect::<CliResult<Vec<_>>>()?;
    timer.step("profiles");
    let len = sets.len();
    let mut hausdorff_m = vec![vec![int(0); len]; len];
    for i in 0..len {
        for j in i + 1..len {
            let d = hausdorff(&sets[i], &sets[j])?.distance;
            hausdorff_m[i][j] = d;
            hausdorff_m[j][i] = d;
        }
    }
    let same_nodes = loaded.len() >= 2 && loaded.iter().all(|g| g.node_count() == loaded[0].node_count());
    let mut failed = false;
    let cut = if same_nodes {
        let n = loaded.len();
        let mut cut_m: Vec<Vec<Rational>> = vec![vec![int(0); n]; n];
        for i in 0..n {
            for j in i + 1..n {
                let d = cut_dist_labeled_with(&loaded[i], &loaded[j], &s.limits)?;
                cut_m[i][j] = d;
                cut_m[j][i] = d;
            }
        }
        let exact = sets.iter().all(|p| p.strategy().is_exact());
        let check = (s.norm == CutNormalization::NodesSquared && exact).then(|| {
            (0..n).all(|i| (0..n).all(|j| hausdorff_m[i][j] <= cut_m[i][j]))
        });
        failed = check == Some(false);
        json!({ "labeled": matrix(&cut_m), "hausdorff_within_cut_distance": check })
    } else {
        Value::Null
    };
    timer.step("distances");
    let csv = if len == 1 {
        points_csv(&sets[0])?
    } else {
        matrix_csv(&labels, &hausdorff_m, true)?
    };
    let strategies: Vec<EnumStrategy> = sets.iter().map(|p| p.strategy()).collect();
    let inputs: Vec<Value> = labels
        .iter()
        .zip(&oracles)
        .zip(&sets)
        .map(|((l, o), p)| json!({ "label": l, "oracle": o.description(), "profile": profile_json(p) }))
        .collect();
    let hausdorff_json = (len >= 2).then(|| matrix(&hausdorff_m));
    Ok(Produced {
        command: "cutcap",
        extra_config: json!({ "inputs": labels }),
        seeds: seeds_of(&strategies),
        results: json!({
            "inputs": inputs,
            "hausdorff": hausdorff_json,
            "cut_distance": cut,
        }),
        csv: Some(csv),
        failed,
        settings: s,
    })
}
