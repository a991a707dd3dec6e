//! Report payloads: exact `num/den` strings next to float renderings.

use std::collections::BTreeMap;
use std::path::Path;
use std::time::Instant;

use quolab_core::metric::HausdorffReport;
use quolab_core::profiles::ProfileSet;
use quolab_core::rational::{to_exact_string, to_f64};
use quolab_core::setfn::QuotientPoint;
use quolab_core::Rational;
use serde::Serialize;
use serde_json::{json, Value};

use crate::{CliError, CliResult};

pub const TOOL: &str = "quolab";

pub fn num(r: &Rational) -> Value {
    json!({ "exact": to_exact_string(r), "float": to_f64(r) })
}

pub fn nums(v: &[Rational]) -> Value {
    json!({
        "exact": v.iter().map(to_exact_string).collect::<Vec<_>>(),
        "float": v.iter().map(to_f64).collect::<Vec<_>>(),
    })
}

pub fn matrix(m: &[Vec<Rational>]) -> Value {
    json!({
        "exact": m.iter().map(|row| row.iter().map(to_exact_string).collect::<Vec<_>>()).collect::<Vec<_>>(),
        "float": m.iter().map(|row| row.iter().map(to_f64).collect::<Vec<_>>()).collect::<Vec<_>>(),
    })
}

pub fn point(p: &QuotientPoint) -> Value {
    nums(p.coords())
}

/// `{}`, `{1}`, `{2}`, `{1,2}`, … for subset index `I = Σ 2^{i−1}`.
pub fn subset_label(index: usize, k: usize) -> String {
    let parts: Vec<String> = (0..k).filter(|i| index >> i & 1 == 1).map(|i| (i + 1).to_string()).collect();
    format!("{{{}}}", parts.join(","))
}

pub fn profile_json(p: &ProfileSet) -> Value {
    let ranges: Vec<Value> = p
        .coordinate_ranges()
        .iter()
        .enumerate()
        .map(|(i, (lo, hi))| json!({ "subset": subset_label(i, p.k()), "min": num(lo), "max": num(hi) }))
        .collect();
    json!({
        "k": p.k(),
        "mode": p.mode(),
        "strategy": p.strategy(),
        "exact": p.strategy().is_exact(),
        "source": p.source(),
        "point_count": p.len(),
        "coordinate_ranges": ranges,
        "points": p.points().iter().map(point).collect::<Vec<_>>(),
    })
}

pub fn hausdorff_json(r: &HausdorffReport) -> Value {
    json!({
        "distance": num(&r.distance),
        "directed_ab": num(&r.directed_ab),
        "directed_ba": num(&r.directed_ba),
        "witness_ab": point(&r.witness_ab),
        "witness_ba": point(&r.witness_ba),
    })
}

/// Points as CSV rows, one column per subset.
pub fn points_csv(p: &ProfileSet) -> CliResult<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    let header: Vec<String> = (0..1usize << p.k()).map(|i| subset_label(i, p.k())).collect();
    let err = |e: csv::Error| CliError::Usage(format!("csv: {e}"));
    w.write_record(&header).map_err(err)?;
    for q in p.points() {
        w.write_record(q.coords().iter().map(to_exact_string)).map_err(err)?;
    }
    let bytes = w.into_inner().map_err(|e| CliError::Usage(format!("csv: {e}")))?;
    Ok(String::from_utf8(bytes).expect("utf-8"))
}

#[derive(Debug, Serialize)]
pub struct RunReport {
    pub tool: &'static str,
    pub version: &'static str,
    pub command: &'static str,
    pub config: Value,
    pub seeds: Vec<u64>,
    pub results: Value,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub timings: Option<BTreeMap<String, f64>>,
}

impl RunReport {
    pub fn new(command: &'static str, config: Value, seeds: Vec<u64>, results: Value, timer: Timer) -> Self {
        RunReport {
            tool: TOOL,
            version: env!("CARGO_PKG_VERSION"),
            command,
            config,
            seeds,
            results,
            timings: timer.finish(),
        }
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report serializes");
        s.push('\n');
        s
    }
}

/// Per-step wall-clock timings, recorded only when asked for.
pub struct Timer {
    enabled: bool,
    last: Instant,
    steps: BTreeMap<String, f64>,
}

impl Timer {
    pub fn new(enabled: bool) -> Self {
        Timer {
            enabled,
            last: Instant::now(),
            steps: BTreeMap::new(),
        }
    }

    pub fn step(&mut self, name: impl Into<String>) {
        if self.enabled {
            let now = Instant::now();
            self.steps.insert(name.into(), (now - self.last).as_secs_f64());
            self.last = now;
        }
    }

    fn finish(self) -> Option<BTreeMap<String, f64>> {
        self.enabled.then_some(self.steps)
    }
}

pub fn write_text(text: &str, out: Option<&Path>) -> CliResult<()> {
    match out {
        Some(path) => std::fs::write(path, text).map_err(|source| CliError::Io {
            path: path.to_path_buf(),
            source,
        }),
        None => {
            use std::io::Write;
            let mut stdout = std::io::stdout().lock();
            stdout
                .write_all(text.as_bytes())
                .and_then(|_| stdout.flush())
                .map_err(|source| CliError::Io {
                    path: "<stdout>".into(),
                    source,
                })
        }
    }
}
