//! Text formats: degree files, edge lists and CSV.
//!
//! A degree file holds one entry per line. A line with one integer is a
//! single degree; a line `<degree> <count>` adds `count` vertices of that
//! degree. Everything after `#` is a comment.

use std::fmt::Write as _;
use std::path::Path;

use crate::degseq::DegreeSequence;
use crate::error::{Error, Result};
use crate::graph::LabeledGraph;

fn parse_err(line: usize, msg: impl Into<String>) -> Error {
    Error::Parse { line, msg: msg.into() }
}

/// Parses a degree file into the raw degree list (zeros kept).
pub fn parse_degrees(text: &str) -> Result<Vec<u32>> {
    let mut out = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let content = raw.split('#').next().unwrap_or("");
        let tokens: Vec<&str> = content.split_whitespace().collect();
        let degree = |tok: &str| tok.parse::<u32>().map_err(|_| parse_err(line, format!("invalid degree {tok:?}")));
        match tokens.as_slice() {
            [] => {}
            [d] => out.push(degree(d)?),
            [d, c] => {
                let d = degree(d)?;
                let c: usize = c.parse().map_err(|_| parse_err(line, format!("invalid count {c:?}")))?;
                out.extend(std::iter::repeat_n(d, c));
            }
            _ => {
                return Err(parse_err(
                    line,
                    format!("expected `<degree>` or `<degree> <count>`, got {:?}", content.trim()),
                ))
            }
        }
    }
    Ok(out)
}

pub fn parse_degree_sequence(text: &str) -> Result<DegreeSequence> {
    DegreeSequence::new(parse_degrees(text)?)
}

pub fn read_degree_file(path: &Path) -> Result<DegreeSequence> {
    parse_degree_sequence(&std::fs::read_to_string(path)?)
}

/// `<degree> <count>` lines in increasing degree order.
pub fn format_degree_counts(d: &DegreeSequence) -> String {
    let mut out = String::new();
    for (k, c) in d.counts() {
        let _ = writeln!(out, "{k} {c}");
    }
    out
}

/// `u v` per line, 0-indexed, sorted.
pub fn format_edge_list(g: &LabeledGraph) -> String {
    format_edges(&g.sorted_edges())
}

pub fn format_edges(edges: &[(u32, u32)]) -> String {
    let mut out = String::with_capacity(edges.len() * 12);
    for (u, v) in edges {
        let _ = writeln!(out, "{u} {v}");
    }
    out
}

/// Parses an edge list; `n` is one more than the largest endpoint unless given.
pub fn parse_edge_list(text: &str, n: Option<usize>) -> Result<LabeledGraph> {
    let mut edges = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let content = raw.split('#').next().unwrap_or("");
        let tokens: Vec<&str> = content.split_whitespace().collect();
        match tokens.as_slice() {
            [] => {}
            [a, b] => {
                let parse = |t: &str| t.parse::<u32>().map_err(|_| parse_err(line, format!("invalid vertex {t:?}")));
                edges.push((parse(a)?, parse(b)?));
            }
            _ => return Err(parse_err(line, "expected `u v`")),
        }
    }
    let n = n.unwrap_or_else(|| edges.iter().map(|&(a, b)| a.max(b) as usize + 1).max().unwrap_or(0));
    LabeledGraph::from_edges(n, edges)
}
