//! Sequence generators.

use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use clap::ValueEnum;
use quolab_core::graphlim::{blow_up, cut_capacity_oracle, tau_oracle_with, CutNormalization, SimpleGraph};
use quolab_core::matroid::{cycle_rank_oracle, normalized_rank_oracle, GraphicMatroid, LinearMatroid, Matroid};
use quolab_core::setfn::SetFunctionOracle;
use quolab_core::{Error, Limits};
use serde::Serialize;
use serde_json::{json, Value};

use crate::inputs::load_graph;
use crate::{CliError, CliResult, FamilyArgs};

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum FamilyName {
    /// Normalized rank of the cycle matroid of K_{n+1}.
    CompleteCycle,
    /// Normalized rank of GF(q)^n (all q^n vectors).
    GfSpace,
    /// r/|V| of the cycle matroid of G_n: a path for odd n, two spanning
    /// trees for even n.
    Example51,
    /// r/|V| of the cycle matroid of G(n), the n-fold blow-up of --graph.
    Blowup,
    /// τ_{F,G_n} for F = --pattern, grounded.
    Tau,
    /// Cut capacity of G_n under --norm.
    Cutcap,
    /// Normalized rank of the matroid of --matrix; the index is ignored.
    Linear,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum GraphSeqName {
    /// K_{n+1}.
    Complete,
    Example51,
    /// G(n) for the base --graph.
    Blowup,
}

/// Inclusive index range `a..b` (or `a..=b`, or a single index).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct IndexRange {
    pub start: usize,
    pub end: usize,
}

impl IndexRange {
    pub fn indices(&self) -> impl Iterator<Item = usize> {
        self.start..=self.end
    }
}

impl FromStr for IndexRange {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        let bad = || format!("expected a range like 5..10, found {s:?}");
        let (a, b) = match s.split_once("..") {
            Some((a, b)) => (a, b.strip_prefix('=').unwrap_or(b)),
            None => (s, s),
        };
        let start: usize = a.trim().parse().map_err(|_| bad())?;
        let end: usize = b.trim().parse().map_err(|_| bad())?;
        if start == 0 || end < start {
            return Err(format!("range {s:?} must be positive and increasing"));
        }
        Ok(IndexRange { start, end })
    }
}

impl fmt::Display for IndexRange {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}..{}", self.start, self.end)
    }
}

/// `G_n`: `K_1`, `K_2`, the path for odd `n`, and for even `n ≥ 4` the path
/// `0-1-…-(n−1)` together with the tree `{0-2, 0-3, …, 0-(n−1), 1-(n−1)}`.
pub fn example51(n: usize) -> quolab_core::Result<SimpleGraph> {
    match n {
        0 => Err(Error::Invalid("example51 indices start at 1".into())),
        1 | 2 => Ok(SimpleGraph::complete(n)),
        _ if n % 2 == 1 => Ok(SimpleGraph::path(n)),
        _ => {
            let (a, b) = example51_trees(n);
            SimpleGraph::new(n, a.into_iter().chain(b))
        }
    }
}

fn example51_trees(n: usize) -> (Vec<(usize, usize)>, Vec<(usize, usize)>) {
    let path = (0..n - 1).map(|i| (i, i + 1)).collect();
    let mut star: Vec<(usize, usize)> = (2..n).map(|j| (0, j)).collect();
    star.push((1, n - 1));
    (path, star)
}

/// Spanning-tree certificate for `G_n`, checked against the cycle matroid.
pub fn example51_certificate(n: usize, g: &SimpleGraph) -> CliResult<Value> {
    let m = GraphicMatroid::new(g.clone())?;
    let trees: Vec<Vec<(usize, usize)>> = if n >= 4 && n % 2 == 0 {
        let (a, b) = example51_trees(n);
        vec![a, b]
    } else {
        vec![g.edges().to_vec()]
    };
    let masks: Vec<u64> = trees
        .iter()
        .map(|t| {
            t.iter()
                .map(|&(u, v)| 1u64 << g.edge_index(u, v).expect("tree edge in graph"))
                .fold(0, |a, b| a | b)
        })
        .collect();
    let spanning = masks
        .iter()
        .zip(&trees)
        .all(|(&mask, t)| t.len() == n - 1 && m.rank_bits(mask) == n - 1);
    let disjoint = masks.iter().fold((0u64, true), |(seen, ok), &x| (seen | x, ok && seen & x == 0)).1;
    Ok(json!({
        "trees": trees,
        "edge_count": g.edge_count(),
        "rank": m.full_rank(),
        "spanning": spanning,
        "disjoint": disjoint,
    }))
}

/// One member of a sequence.
pub struct Member {
    pub index: usize,
    pub label: String,
    pub oracle: SetFunctionOracle,
    pub info: Value,
}

/// A family with its parameters resolved.
pub struct Family {
    pub name: FamilyName,
    q: u32,
    graph: Option<(String, SimpleGraph)>,
    pattern: Option<(String, SimpleGraph)>,
    graphs: GraphSeqName,
    matroid: Option<Arc<LinearMatroid>>,
    norm: CutNormalization,
}

fn graph_json(g: &SimpleGraph) -> Value {
    json!({ "nodes": g.node_count(), "edges": g.edges() })
}

fn check_ground(size: usize, limits: &Limits) -> CliResult<()> {
    if size > limits.max_ground.min(64) {
        return Err(Error::GroundTooLarge {
            size,
            cap: limits.max_ground.min(64),
        }
        .into());
    }
    Ok(())
}

impl Family {
    pub fn from_args(args: &FamilyArgs, norm: CutNormalization) -> CliResult<Family> {
        let need = |what: &str| CliError::Usage(format!("family {:?} needs {what}", args.family.name()));
        let graph = args
            .graph
            .as_ref()
            .map(|s| load_graph(s).map(|g| (s.clone(), g)))
            .transpose()?;
        let pattern = args
            .pattern
            .as_ref()
            .map(|s| load_graph(s).map(|g| (s.clone(), g)))
            .transpose()?;
        let graphs = args.graphs.unwrap_or(GraphSeqName::Blowup);
        let uses_graphs = matches!(args.family, FamilyName::Tau | FamilyName::Cutcap);
        if (args.family == FamilyName::Blowup || (uses_graphs && graphs == GraphSeqName::Blowup)) && graph.is_none() {
            return Err(need("--graph"));
        }
        if args.family == FamilyName::Tau && pattern.is_none() {
            return Err(need("--pattern"));
        }
        let matroid = match (&args.matrix, args.family) {
            (Some(p), _) => Some(Arc::new(crate::inputs::load_matrix(p)?)),
            (None, FamilyName::Linear) => return Err(need("--matrix")),
            (None, _) => None,
        };
        let q = args.q.unwrap_or(2);
        if args.family == FamilyName::GfSpace {
            quolab_core::field::GaloisField::new(q)?;
        }
        Ok(Family {
            name: args.family,
            q,
            graph,
            pattern,
            graphs,
            matroid,
            norm,
        })
    }

    /// Parameters echoed into reports.
    pub fn describe(&self) -> Value {
        let mut v = json!({ "family": self.name });
        let obj = v.as_object_mut().expect("object");
        match self.name {
            FamilyName::GfSpace => {
                obj.insert("q".into(), json!(self.q));
            }
            FamilyName::Blowup => {
                obj.insert("graph".into(), json!(self.graph.as_ref().map(|g| &g.0)));
            }
            FamilyName::Tau | FamilyName::Cutcap => {
                obj.insert("graphs".into(), json!(self.graphs));
                if self.graphs == GraphSeqName::Blowup {
                    obj.insert("graph".into(), json!(self.graph.as_ref().map(|g| &g.0)));
                }
                if self.name == FamilyName::Tau {
                    obj.insert("pattern".into(), json!(self.pattern.as_ref().map(|g| &g.0)));
                } else {
                    obj.insert("norm".into(), json!(self.norm));
                }
            }
            FamilyName::Linear => {
                let m = self.matroid.as_ref().expect("checked");
                obj.insert("q".into(), json!(m.field().size()));
                obj.insert("rows".into(), json!(m.dim()));
                obj.insert("columns".into(), json!(m.ground_size()));
            }
            FamilyName::CompleteCycle | FamilyName::Example51 => {}
        }
        v
    }

    fn graph_at(&self, n: usize, seq: GraphSeqName) -> CliResult<SimpleGraph> {
        Ok(match seq {
            GraphSeqName::Complete => SimpleGraph::complete(n + 1),
            GraphSeqName::Example51 => example51(n)?,
            GraphSeqName::Blowup => blow_up(&self.graph.as_ref().expect("checked").1, n)?.graph,
        })
    }

    pub fn member(&self, n: usize, limits: &Limits) -> CliResult<Member> {
        if n == 0 {
            return Err(CliError::Usage("family indices start at 1".into()));
        }
        let mut info = json!({ "index": n });
        let obj = info.as_object_mut().expect("object");
        let oracle = match self.name {
            FamilyName::CompleteCycle => {
                let g = SimpleGraph::complete(n + 1);
                check_ground(g.edge_count(), limits)?;
                obj.insert("graph".into(), graph_json(&g));
                normalized_rank_oracle(Arc::new(GraphicMatroid::new(g)?))?
            }
            FamilyName::GfSpace => {
                let size = (self.q as u128).checked_pow(n as u32).unwrap_or(u128::MAX);
                check_ground(size.min(usize::MAX as u128) as usize, limits)?;
                obj.insert("q".into(), json!(self.q));
                normalized_rank_oracle(Arc::new(LinearMatroid::full_space(self.q, n)?))?
            }
            FamilyName::Example51 => {
                let g = example51(n)?;
                check_ground(g.edge_count(), limits)?;
                obj.insert("graph".into(), graph_json(&g));
                obj.insert("certificate".into(), example51_certificate(n, &g)?);
                cycle_rank_oracle(&g)?
            }
            FamilyName::Blowup => {
                let g = self.graph_at(n, GraphSeqName::Blowup)?;
                check_ground(g.edge_count(), limits)?;
                obj.insert("graph".into(), graph_json(&g));
                cycle_rank_oracle(&g)?
            }
            FamilyName::Tau => {
                let g = self.graph_at(n, self.graphs)?;
                check_ground(g.edge_count(), limits)?;
                obj.insert("graph".into(), graph_json(&g));
                let f = &self.pattern.as_ref().expect("checked").1;
                let tau = tau_oracle_with(f, &g, limits)?;
                obj.insert("empty_value".into(), crate::report::num(&tau.empty_value()));
                tau.grounded()
            }
            FamilyName::Cutcap => {
                let g = self.graph_at(n, self.graphs)?;
                check_ground(g.node_count(), limits)?;
                obj.insert("graph".into(), graph_json(&g));
                cut_capacity_oracle(&g, self.norm)?
            }
            FamilyName::Linear => {
                let m = self.matroid.clone().expect("checked");
                check_ground(m.ground_size(), limits)?;
                normalized_rank_oracle(m)?
            }
        };
        obj.insert("ground".into(), json!(oracle.size()));
        Ok(Member {
            index: n,
            label: format!("n={n}"),
            oracle,
            info,
        })
    }
}

impl FamilyName {
    pub fn name(&self) -> &'static str {
        match self {
            FamilyName::CompleteCycle => "complete-cycle",
            FamilyName::GfSpace => "gf-space",
            FamilyName::Example51 => "example51",
            FamilyName::Blowup => "blowup",
            FamilyName::Tau => "tau",
            FamilyName::Cutcap => "cutcap",
            FamilyName::Linear => "linear",
        }
    }
}
