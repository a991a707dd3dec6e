//! Graphs, graphons and matrices named on the command line.

use std::path::Path;

use quolab_core::graphlim::{SimpleGraph, StepGraphon};
use quolab_core::io::{parse_edge_list, parse_gf_matrix, parse_graphon};
use quolab_core::matroid::LinearMatroid;

use crate::{CliError, CliResult};

fn read(path: &Path) -> CliResult<String> {
    std::fs::read_to_string(path).map_err(|source| CliError::Io {
        path: path.to_path_buf(),
        source,
    })
}

fn with_path<T>(path: &Path, r: quolab_core::Result<T>) -> CliResult<T> {
    r.map_err(|e| match e {
        quolab_core::Error::Parse { line, message } => {
            CliError::Usage(format!("{}: line {line}: {message}", path.display()))
        }
        other => other.into(),
    })
}

/// `K4`, `C5`, `P3`, `E2` (edgeless) or `K3,2`.
pub fn named_graph(name: &str) -> Option<SimpleGraph> {
    let (kind, rest) = name.split_at(name.find(|c: char| c.is_ascii_digit())?);
    if let Some((a, b)) = rest.split_once(',') {
        let (a, b) = (a.parse().ok()?, b.parse().ok()?);
        return (kind == "K").then(|| SimpleGraph::complete_bipartite(a, b));
    }
    let n: usize = rest.parse().ok()?;
    match kind {
        "K" => Some(SimpleGraph::complete(n)),
        "C" if n >= 3 => Some(SimpleGraph::cycle(n)),
        "P" => Some(SimpleGraph::path(n)),
        "E" => Some(SimpleGraph::empty(n)),
        _ => None,
    }
}

/// A named graph, else an edge-list file.
pub fn load_graph(arg: &str) -> CliResult<SimpleGraph> {
    if let Some(g) = named_graph(arg) {
        return Ok(g);
    }
    let path = Path::new(arg);
    if !path.exists() {
        return Err(CliError::Usage(format!(
            "{arg:?} is neither a graph name (K4, C5, P3, E2, K3,2) nor an existing file"
        )));
    }
    with_path(path, parse_edge_list(&read(path)?))
}

pub fn load_graphon(path: &Path) -> CliResult<StepGraphon> {
    with_path(path, parse_graphon(&read(path)?))
}

pub fn load_matrix(path: &Path) -> CliResult<LinearMatroid> {
    with_path(path, parse_gf_matrix(&read(path)?))
}
