//! Text formats for graphs, step graphons and GF(q) matrices.
//!
//! All formats are whitespace separated; `#` starts a comment that runs to
//! the end of the line. Errors carry 1-based line numbers.
//!
//! * edge list: `n m`, then `m` lines `u v` with 0-based nodes;
//! * step graphon: `r`, then the `r` breakpoints `b_1 < … < b_r = 1`
//!   (`b_0 = 0` is implicit), then `r` rows of `r` rationals;
//! * GF(q) matrix: `q n c`, then `n` rows of `c` entries in `0..q`; the
//!   columns are the ground set.

use std::str::FromStr;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::field::GaloisField;
use crate::graphlim::{SimpleGraph, StepGraphon};
use crate::matroid::LinearMatroid;
use crate::rational::{int, parse_rational, Rational};

/// Non-empty lines with comments stripped, as `(line number, tokens)`.
fn lines(text: &str) -> Vec<(usize, Vec<&str>)> {
    text.lines()
        .enumerate()
        .filter_map(|(i, l)| {
            let l = l.split('#').next().unwrap_or("");
            let tokens: Vec<&str> = l.split_whitespace().collect();
            (!tokens.is_empty()).then_some((i + 1, tokens))
        })
        .collect()
}

struct Tokens<'a> {
    items: Vec<(usize, &'a str)>,
    pos: usize,
    last_line: usize,
}

impl<'a> Tokens<'a> {
    fn new(text: &'a str) -> Self {
        let items: Vec<(usize, &str)> = lines(text)
            .into_iter()
            .flat_map(|(n, toks)| toks.into_iter().map(move |t| (n, t)))
            .collect();
        let last_line = text.lines().count().max(1);
        Tokens {
            items,
            pos: 0,
            last_line,
        }
    }

    fn next(&mut self, what: &str) -> Result<(usize, &'a str)> {
        let item = self
            .items
            .get(self.pos)
            .copied()
            .ok_or_else(|| Error::parse(self.last_line, format!("unexpected end of input, expected {what}")))?;
        self.pos += 1;
        Ok(item)
    }

    fn parse<T: FromStr>(&mut self, what: &str) -> Result<T> {
        let (line, tok) = self.next(what)?;
        tok.parse()
            .map_err(|_| Error::parse(line, format!("expected {what}, found {tok:?}")))
    }

    fn rational(&mut self, what: &str) -> Result<(usize, Rational)> {
        let (line, tok) = self.next(what)?;
        let r = parse_rational(tok).map_err(|_| Error::parse(line, format!("expected {what}, found {tok:?}")))?;
        Ok((line, r))
    }

    fn finish(&self) -> Result<()> {
        match self.items.get(self.pos) {
            Some((line, tok)) => Err(Error::parse(*line, format!("unexpected trailing token {tok:?}"))),
            None => Ok(()),
        }
    }
}

pub fn parse_edge_list(text: &str) -> Result<SimpleGraph> {
    let rows = lines(text);
    let (first, header) = rows.first().ok_or_else(|| Error::parse(1, "empty edge list"))?;
    if header.len() != 2 {
        return Err(Error::parse(*first, "header must be \"n m\""));
    }
    let num = |line: usize, t: &str, what: &str| -> Result<usize> {
        t.parse()
            .map_err(|_| Error::parse(line, format!("expected {what}, found {t:?}")))
    };
    let n = num(*first, header[0], "node count")?;
    let m = num(*first, header[1], "edge count")?;
    let body = &rows[1..];
    if body.len() != m {
        let line = body.get(m).map_or(text.lines().count().max(1), |r| r.0);
        return Err(Error::parse(line, format!("header announces {m} edges, found {}", body.len())));
    }
    let mut edges = Vec::with_capacity(m);
    for (line, toks) in body {
        if toks.len() != 2 {
            return Err(Error::parse(*line, "edge line must be \"u v\""));
        }
        let u = num(*line, toks[0], "node")?;
        let v = num(*line, toks[1], "node")?;
        if u >= n || v >= n {
            return Err(Error::parse(*line, format!("edge {u}-{v} outside 0..{n}")));
        }
        if u == v {
            return Err(Error::parse(*line, format!("loop at node {u}")));
        }
        if edges.contains(&(u.min(v), u.max(v))) {
            return Err(Error::parse(*line, format!("duplicate edge {u}-{v}")));
        }
        edges.push((u.min(v), u.max(v)));
    }
    SimpleGraph::new(n, edges).map_err(|e| Error::parse(*first, e.to_string()))
}

pub fn write_edge_list(g: &SimpleGraph) -> String {
    let mut out = format!("{} {}\n", g.node_count(), g.edge_count());
    for (u, v) in g.edges() {
        out.push_str(&format!("{u} {v}\n"));
    }
    out
}

pub fn parse_graphon(text: &str) -> Result<StepGraphon> {
    let mut t = Tokens::new(text);
    let r: usize = t.parse("step count")?;
    if r == 0 {
        return Err(Error::parse(1, "step count must be positive"));
    }
    let mut bounds = vec![int(0)];
    for _ in 0..r {
        let (line, b) = t.rational("breakpoint")?;
        if b <= *bounds.last().expect("starts with 0") {
            return Err(Error::parse(line, "breakpoints must increase from 0"));
        }
        bounds.push(b);
    }
    let mut values = vec![Vec::with_capacity(r); r];
    let mut first_value_line = 0;
    for (i, row) in values.iter_mut().enumerate() {
        for _ in 0..r {
            let (line, v) = t.rational("graphon value")?;
            if i == 0 && row.is_empty() {
                first_value_line = line;
            }
            if v < int(0) || v > int(1) {
                return Err(Error::parse(line, format!("value {v} outside [0,1]")));
            }
            row.push(v);
        }
    }
    t.finish()?;
    StepGraphon::new(bounds, values).map_err(|e| Error::parse(first_value_line, e.to_string()))
}

pub fn parse_gf_matrix(text: &str) -> Result<LinearMatroid> {
    let mut t = Tokens::new(text);
    let (qline, _) = t.items.first().copied().ok_or_else(|| Error::parse(1, "empty matrix file"))?;
    let q: u32 = t.parse("field size q")?;
    let n: usize = t.parse("row count n")?;
    let c: usize = t.parse("column count")?;
    let field = GaloisField::new(q).map_err(|e| Error::parse(qline, e.to_string()))?;
    let mut columns = vec![vec![0u8; n]; c];
    for i in 0..n {
        for col in columns.iter_mut() {
            let (line, tok) = t.next("matrix entry")?;
            let v: u32 = tok
                .parse()
                .map_err(|_| Error::parse(line, format!("expected an entry, found {tok:?}")))?;
            if v >= q {
                return Err(Error::parse(line, format!("entry {v} outside GF({q})")));
            }
            col[i] = v as u8;
        }
    }
    t.finish()?;
    LinearMatroid::new(Arc::new(field), n, columns).map_err(|e| Error::parse(qline, e.to_string()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matroid::Matroid;
    use crate::rational::rat;

    #[test]
    fn edge_list_round_trip() {
        let g = SimpleGraph::cycle(5);
        assert_eq!(parse_edge_list(&write_edge_list(&g)).unwrap(), g);
    }

    #[test]
    fn edge_list_with_comments() {
        let g = parse_edge_list("# triangle\n3 3\n0 1\n\n1 2 # last but one\n2 0\n").unwrap();
        assert_eq!(g, SimpleGraph::complete(3));
    }

    #[test]
    fn edge_list_errors_name_lines() {
        let err = |s: &str| match parse_edge_list(s) {
            Err(Error::Parse { line, .. }) => line,
            other => panic!("{other:?}"),
        };
        assert_eq!(err("3 2\n0 1\n1 x\n"), 3);
        assert_eq!(err("3 2\n0 1\n1 5\n"), 3);
        assert_eq!(err("3 2\n0 1\n"), 2);
        assert_eq!(err("3 1\n0 1\n1 2\n"), 3);
        assert_eq!(err("3 2\n0 1\n1 0\n"), 3);
        assert_eq!(err("3\n"), 1);
    }

    #[test]
    fn graphon_file() {
        let w = parse_graphon("2\n1/2 1\n0 1\n1 1/3\n").unwrap();
        assert_eq!(w.bounds(), &[int(0), rat(1, 2), int(1)]);
        assert_eq!(w.values()[1][1], rat(1, 3));
        assert!(matches!(
            parse_graphon("2\n1/2 1\n0 1\n0 0\n"),
            Err(Error::Parse { line: 3, .. })
        ));
        assert!(matches!(parse_graphon("1\n1\n3/2\n"), Err(Error::Parse { line: 3, .. })));
        assert!(matches!(parse_graphon("1\n1\n"), Err(Error::Parse { .. })));
    }

    #[test]
    fn gf_matrix_file() {
        let m = parse_gf_matrix("3 2 3\n1 0 1\n0 1 2\n").unwrap();
        assert_eq!(m.ground_size(), 3);
        assert_eq!(m.full_rank(), 2);
        assert!(matches!(
            parse_gf_matrix("3 2 3\n1 0 1\n0 1 3\n"),
            Err(Error::Parse { line: 3, .. })
        ));
        assert!(matches!(parse_gf_matrix("6 1 1\n1\n"), Err(Error::Parse { line: 1, .. })));
    }
}
