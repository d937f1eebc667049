//! Plain-text graph files.
//!
//! ```text
//! # comment lines start with '#'
//! n m
//! u v w      (m lines, 1-based vertex ids)
//! ```
//!
//! A file whose weights all parse as integers is read with `i64` weights,
//! otherwise with `f64`.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::weight::Weight;

#[derive(Clone, Debug, PartialEq)]
pub enum AnyGraph {
    Int(Graph<i64>),
    Float(Graph<f64>),
}

impl AnyGraph {
    pub fn n(&self) -> usize {
        match self {
            AnyGraph::Int(g) => g.n(),
            AnyGraph::Float(g) => g.n(),
        }
    }

    pub fn m(&self) -> usize {
        match self {
            AnyGraph::Int(g) => g.m(),
            AnyGraph::Float(g) => g.m(),
        }
    }

    pub fn count_negative(&self) -> usize {
        match self {
            AnyGraph::Int(g) => g.count_negative(),
            AnyGraph::Float(g) => g.count_negative(),
        }
    }

    pub fn to_text(&self) -> String {
        match self {
            AnyGraph::Int(g) => write_graph(g),
            AnyGraph::Float(g) => write_graph(g),
        }
    }
}

fn parse_err(line: usize, msg: impl Into<String>) -> Error {
    Error::Parse { line, msg: msg.into() }
}

pub fn parse_graph(text: &str) -> Result<AnyGraph> {
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'));
    let (hline, header) = lines.next().ok_or_else(|| parse_err(1, "missing \"n m\" header"))?;
    let mut fields = header.split_whitespace();
    let mut count = |what: &str| -> Result<usize> {
        fields
            .next()
            .ok_or_else(|| parse_err(hline, format!("header is missing {what}")))?
            .parse()
            .map_err(|_| parse_err(hline, format!("header field {what} is not a count")))
    };
    let n = count("n")?;
    let m = count("m")?;
    if fields.next().is_some() {
        return Err(parse_err(hline, "header has more than two fields"));
    }

    let mut raw = Vec::with_capacity(m);
    for (line, text) in lines {
        if raw.len() == m {
            return Err(parse_err(line, format!("more than {m} edge lines")));
        }
        let f: Vec<&str> = text.split_whitespace().collect();
        if f.len() != 3 {
            return Err(parse_err(line, "expected \"u v w\""));
        }
        let vertex = |s: &str| -> Result<usize> {
            let v: usize = s.parse().map_err(|_| parse_err(line, format!("bad vertex id {s:?}")))?;
            if v == 0 || v > n {
                return Err(parse_err(line, format!("vertex {v} outside 1..={n}")));
            }
            Ok(v - 1)
        };
        raw.push((line, vertex(f[0])?, vertex(f[1])?, f[2]));
    }
    if raw.len() < m {
        return Err(parse_err(text.lines().count(), format!("expected {m} edge lines, found {}", raw.len())));
    }

    if raw.iter().all(|&(_, _, _, w)| i64::parse_text(w).is_some()) {
        Ok(AnyGraph::Int(build(n, &raw)?))
    } else {
        Ok(AnyGraph::Float(build(n, &raw)?))
    }
}

fn build<W: Weight>(n: usize, raw: &[(usize, usize, usize, &str)]) -> Result<Graph<W>> {
    let mut edges = Vec::with_capacity(raw.len());
    for &(line, u, v, w) in raw {
        let w = W::parse_text(w).ok_or_else(|| parse_err(line, format!("bad weight {w:?}")))?;
        if !w.is_admissible() {
            return Err(parse_err(line, format!("weight {w} out of range")));
        }
        edges.push((u, v, w));
    }
    Graph::from_weighted_edges(n, edges)
}

/// Serializes in the graph's internal edge order, so equal graphs give
/// byte-identical files.
pub fn write_graph<W: Weight>(g: &Graph<W>) -> String {
    let mut out = String::with_capacity(16 * (g.m() + 1));
    let _ = writeln!(out, "{} {}", g.n(), g.m());
    for e in g.edges() {
        let _ = writeln!(out, "{} {} {}", e.src + 1, e.dst + 1, e.weight.to_text());
    }
    out
}

pub fn read_graph_file(path: &Path) -> Result<AnyGraph> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
    parse_graph(&text)
}

pub fn write_graph_file<W: Weight>(path: &Path, g: &Graph<W>) -> Result<()> {
    if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
        std::fs::create_dir_all(dir).map_err(|e| Error::Io(format!("{}: {e}", dir.display())))?;
    }
    std::fs::write(path, write_graph(g)).map_err(|e| Error::Io(format!("{}: {e}", path.display())))
}

/// `<dir>/<tag>/<seed>.graph`.
pub fn corpus_path(dir: &Path, tag: &str, seed: u64) -> PathBuf {
    dir.join(tag).join(format!("{seed}.graph"))
}
