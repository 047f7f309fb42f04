//! Line-oriented text formats for labeled instances and plain digraphs.
//!
//! ```text
//! realizability v1
//! n=3 k=2 directed=1 variant=logcfl
//! label 1 2
//! edge 0 1 push
//! edge 1 2 pop
//! s=0 t=2
//! ```
//!
//! ```text
//! digraph v1
//! n=3
//! arc 0 1
//! s=0 t=2
//! ```
//!
//! `#` starts a comment. Reflexive ε loops are added by the loader. In
//! undirected instance files every edge implies its reverse.

use std::collections::BTreeMap;
use std::fmt::Write;

use crate::digraph::Digraph;
use crate::error::{Error, Result};
use crate::instance::{EdgeLabel, LabeledGraph, ProblemVariant};

pub const INSTANCE_HEADER: &str = "realizability v1";
pub const DIGRAPH_HEADER: &str = "digraph v1";

/// Largest vertex count a file may declare.
pub const MAX_FILE_N: usize = 1 << 16;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct InstanceFile {
    pub graph: LabeledGraph,
    pub variant: ProblemVariant,
    pub pair: Option<(usize, usize)>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DigraphFile {
    pub digraph: Digraph,
    pub pair: Option<(usize, usize)>,
}

fn perr(line: usize, msg: impl Into<String>) -> Error {
    Error::Parse { line, msg: msg.into() }
}

/// Non-empty lines with comments stripped, numbered from 1.
fn statements(text: &str) -> impl Iterator<Item = (usize, &str)> {
    text.lines().enumerate().filter_map(|(i, l)| {
        let l = l.split('#').next().unwrap_or("").trim();
        (!l.is_empty()).then_some((i + 1, l))
    })
}

fn key_values(line: usize, s: &str) -> Result<BTreeMap<&str, &str>> {
    let mut out = BTreeMap::new();
    for tok in s.split_whitespace() {
        let (k, v) = tok.split_once('=').ok_or_else(|| perr(line, format!("expected key=value, got `{tok}`")))?;
        if out.insert(k, v).is_some() {
            return Err(perr(line, format!("`{k}` given twice")));
        }
    }
    Ok(out)
}

fn number<T: std::str::FromStr>(line: usize, what: &str, s: &str) -> Result<T> {
    s.parse().map_err(|_| perr(line, format!("{what}: `{s}` is not a valid number")))
}

fn vertex(line: usize, s: &str, n: usize) -> Result<usize> {
    let v: usize = number(line, "vertex", s)?;
    if v >= n {
        return Err(perr(line, format!("vertex {v} out of range for n = {n}")));
    }
    Ok(v)
}

fn parse_pair(line: usize, s: &str, n: usize) -> Result<(usize, usize)> {
    let kv = key_values(line, s)?;
    match (kv.get("s"), kv.get("t"), kv.len()) {
        (Some(a), Some(b), 2) => Ok((vertex(line, a, n)?, vertex(line, b, n)?)),
        _ => Err(perr(line, "expected `s=<int> t=<int>`")),
    }
}

fn declared_n(line: usize, s: &str) -> Result<usize> {
    let n: usize = number(line, "n", s)?;
    if n > MAX_FILE_N {
        return Err(perr(line, format!("n = {n} exceeds the file limit of {MAX_FILE_N}")));
    }
    Ok(n)
}

/// Parses an instance file. The graph is not validated; see
/// [`crate::instance::validate`].
pub fn parse_instance(text: &str) -> Result<InstanceFile> {
    let mut lines = statements(text);
    match lines.next() {
        Some((_, INSTANCE_HEADER)) => {}
        Some((l, other)) => return Err(perr(l, format!("expected `{INSTANCE_HEADER}`, got `{other}`"))),
        None => return Err(perr(1, "empty file")),
    }
    let (pl, params) = lines.next().ok_or_else(|| perr(1, "missing parameter line"))?;
    let kv = key_values(pl, params)?;
    let get = |k: &str| kv.get(k).copied().ok_or_else(|| perr(pl, format!("missing `{k}=`")));
    if kv.len() != 4 {
        return Err(perr(pl, "parameter line takes exactly n, k, directed and variant"));
    }
    let n = declared_n(pl, get("n")?)?;
    let k: u32 = number(pl, "k", get("k")?)?;
    let directed = match get("directed")? {
        "0" => false,
        "1" => true,
        d => return Err(perr(pl, format!("directed must be 0 or 1, got `{d}`"))),
    };
    let variant: ProblemVariant = get("variant")?.parse().map_err(|e: String| perr(pl, e))?;

    let mut graph = LabeledGraph::new(n, k, directed);
    let mut pair = None;
    for (l, s) in lines {
        let toks: Vec<&str> = s.split_whitespace().collect();
        match toks.as_slice() {
            ["label", v, i] => {
                let v = vertex(l, v, n)?;
                graph.set_label(v, number(l, "label", i)?);
            }
            ["edge", u, v, lab] => {
                let (u, v) = (vertex(l, u, n)?, vertex(l, v, n)?);
                let label: EdgeLabel = lab.parse().map_err(|e: String| perr(l, e))?;
                graph.add_symmetric_edge(u, v, label);
            }
            _ if s.starts_with("s=") => {
                if pair.is_some() {
                    return Err(perr(l, "distinguished pair given twice"));
                }
                pair = Some(parse_pair(l, s, n)?);
            }
            _ => return Err(perr(l, format!("unrecognized statement `{s}`"))),
        }
    }
    graph.add_reflexive_loops();
    Ok(InstanceFile { graph, variant, pair })
}

/// Canonical text for an instance: labels other than 1, then edges in order,
/// omitting ε loops and, for undirected graphs, edges implied by a mirror.
pub fn write_instance(graph: &LabeledGraph, variant: ProblemVariant, pair: Option<(usize, usize)>) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "{INSTANCE_HEADER}");
    let _ = writeln!(out, "n={} k={} directed={} variant={}", graph.n, graph.k, u8::from(graph.directed), variant);
    for (v, &l) in graph.labels.iter().enumerate() {
        if l != 1 {
            let _ = writeln!(out, "label {v} {l}");
        }
    }
    let edges = graph.sorted_edges();
    for e in &edges {
        if e.u == e.v && e.label == EdgeLabel::Eps {
            continue;
        }
        if !graph.directed {
            let mirror = crate::instance::Edge { u: e.v, v: e.u, label: e.label.reversed() };
            let implied = match e.label {
                EdgeLabel::Pop => true,
                EdgeLabel::Eps => e.u > e.v,
                EdgeLabel::Push => false,
            };
            if implied && edges.binary_search(&mirror).is_ok() {
                continue;
            }
        }
        let _ = writeln!(out, "edge {} {} {}", e.u, e.v, e.label);
    }
    if let Some((s, t)) = pair {
        let _ = writeln!(out, "s={s} t={t}");
    }
    out
}

pub fn parse_digraph(text: &str) -> Result<DigraphFile> {
    let mut lines = statements(text);
    match lines.next() {
        Some((_, DIGRAPH_HEADER)) => {}
        Some((l, other)) => return Err(perr(l, format!("expected `{DIGRAPH_HEADER}`, got `{other}`"))),
        None => return Err(perr(1, "empty file")),
    }
    let (nl, nline) = lines.next().ok_or_else(|| perr(1, "missing `n=` line"))?;
    let n = match nline.strip_prefix("n=") {
        Some(v) => declared_n(nl, v.trim())?,
        None => return Err(perr(nl, "expected `n=<int>`")),
    };
    let mut digraph = Digraph::new(n);
    let mut pair = None;
    for (l, s) in lines {
        let toks: Vec<&str> = s.split_whitespace().collect();
        match toks.as_slice() {
            ["arc", u, v] => {
                let (u, v) = (vertex(l, u, n)?, vertex(l, v, n)?);
                digraph.add_arc(u, v);
            }
            _ if s.starts_with("s=") => {
                if pair.is_some() {
                    return Err(perr(l, "distinguished pair given twice"));
                }
                pair = Some(parse_pair(l, s, n)?);
            }
            _ => return Err(perr(l, format!("unrecognized statement `{s}`"))),
        }
    }
    Ok(DigraphFile { digraph, pair })
}

pub fn write_digraph(d: &Digraph, pair: Option<(usize, usize)>) -> String {
    let mut out = format!("{DIGRAPH_HEADER}\nn={}\n", d.n);
    for (u, v) in &d.arcs {
        let _ = writeln!(out, "arc {u} {v}");
    }
    if let Some((s, t)) = pair {
        let _ = writeln!(out, "s={s} t={t}");
    }
    out
}
