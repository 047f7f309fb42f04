//! Labeled graphs, problem variants, validation and gap-matrix initialization.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::grammar::GrammarVariant;
use crate::matrix::{GapMatrix, StandardMatrix};

/// Default cap on n for building an instance; Υ holds n⁴ bits.
pub const DEFAULT_MAX_N: usize = 128;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum EdgeLabel {
    Push,
    Pop,
    Eps,
}

impl EdgeLabel {
    /// Label of the same edge traversed backwards in a symmetric graph.
    pub fn reversed(self) -> EdgeLabel {
        match self {
            EdgeLabel::Push => EdgeLabel::Pop,
            EdgeLabel::Pop => EdgeLabel::Push,
            EdgeLabel::Eps => EdgeLabel::Eps,
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            EdgeLabel::Push => "push",
            EdgeLabel::Pop => "pop",
            EdgeLabel::Eps => "eps",
        }
    }
}

impl fmt::Display for EdgeLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for EdgeLabel {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s {
            "push" | "(" => Ok(EdgeLabel::Push),
            "pop" | ")" => Ok(EdgeLabel::Pop),
            "eps" | "ε" | "epsilon" => Ok(EdgeLabel::Eps),
            _ => Err(format!("unknown edge label `{s}`")),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum ProblemVariant {
    LogCfl,
    SLogCfl,
    SgsLogCfl,
    OneLogCfl,
    OneSLogCfl,
    OneSgsLogCfl,
}

impl ProblemVariant {
    pub const ALL: [ProblemVariant; 6] = [
        ProblemVariant::LogCfl,
        ProblemVariant::SLogCfl,
        ProblemVariant::SgsLogCfl,
        ProblemVariant::OneLogCfl,
        ProblemVariant::OneSLogCfl,
        ProblemVariant::OneSgsLogCfl,
    ];

    /// Single vertex label (k = 1) versus several (k ≥ 2).
    pub fn single_label(self) -> bool {
        matches!(self, ProblemVariant::OneLogCfl | ProblemVariant::OneSLogCfl | ProblemVariant::OneSgsLogCfl)
    }

    pub fn standard_symmetric(self) -> bool {
        !matches!(self, ProblemVariant::LogCfl | ProblemVariant::OneLogCfl)
    }

    pub fn gap_symmetric(self) -> bool {
        matches!(self, ProblemVariant::SgsLogCfl | ProblemVariant::OneSgsLogCfl)
    }

    pub fn grammar(self) -> GrammarVariant {
        match (self.single_label(), self.gap_symmetric()) {
            (false, false) => GrammarVariant::Standard,
            (false, true) => GrammarVariant::SymmetricGap,
            (true, false) => GrammarVariant::One,
            (true, true) => GrammarVariant::OneSymmetricGap,
        }
    }

    /// Same symmetry class with several labels allowed.
    pub fn multi_label(self) -> ProblemVariant {
        match self {
            ProblemVariant::OneLogCfl => ProblemVariant::LogCfl,
            ProblemVariant::OneSLogCfl => ProblemVariant::SLogCfl,
            ProblemVariant::OneSgsLogCfl => ProblemVariant::SgsLogCfl,
            v => v,
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            ProblemVariant::LogCfl => "logcfl",
            ProblemVariant::SLogCfl => "slogcfl",
            ProblemVariant::SgsLogCfl => "sgslogcfl",
            ProblemVariant::OneLogCfl => "1logcfl",
            ProblemVariant::OneSLogCfl => "1slogcfl",
            ProblemVariant::OneSgsLogCfl => "1sgslogcfl",
        }
    }
}

impl fmt::Display for ProblemVariant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for ProblemVariant {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        let lower = s.to_ascii_lowercase();
        ProblemVariant::ALL
            .into_iter()
            .find(|v| v.as_str() == lower)
            .ok_or_else(|| format!("unknown variant `{s}`"))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Edge {
    pub u: usize,
    pub v: usize,
    pub label: EdgeLabel,
}

/// Vertex-labeled, edge-labeled graph. Labels are 1-based, vertices 0-based.
///
/// Edges are kept as a list so that malformed inputs (multi-edges, missing
/// loops) can be represented and reported by [`validate`].
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LabeledGraph {
    pub n: usize,
    pub k: u32,
    pub labels: Vec<u32>,
    pub edges: Vec<Edge>,
    pub directed: bool,
}

impl LabeledGraph {
    /// All vertices labeled 1, no edges at all (not even loops).
    pub fn new(n: usize, k: u32, directed: bool) -> Self {
        LabeledGraph { n, k, labels: vec![1; n], edges: Vec::new(), directed }
    }

    /// Like [`LabeledGraph::new`] but with the reflexive ε loops in place.
    pub fn with_loops(n: usize, k: u32, directed: bool) -> Self {
        let mut g = LabeledGraph::new(n, k, directed);
        g.add_reflexive_loops();
        g
    }

    pub fn set_label(&mut self, v: usize, label: u32) {
        self.labels[v] = label;
    }

    pub fn add_edge(&mut self, u: usize, v: usize, label: EdgeLabel) {
        let e = Edge { u, v, label };
        if !self.edges.contains(&e) {
            self.edges.push(e);
        }
    }

    /// Adds `(u,v,label)` and, for undirected graphs, its mirror `(v,u,label⁻¹)`.
    pub fn add_symmetric_edge(&mut self, u: usize, v: usize, label: EdgeLabel) {
        self.add_edge(u, v, label);
        if !self.directed {
            self.add_edge(v, u, label.reversed());
        }
    }

    pub fn add_reflexive_loops(&mut self) {
        for u in 0..self.n {
            self.add_edge(u, u, EdgeLabel::Eps);
        }
    }

    pub fn label(&self, v: usize) -> u32 {
        self.labels[v]
    }

    pub fn edges_with(&self, label: EdgeLabel) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.edges.iter().filter(move |e| e.label == label).map(|e| (e.u, e.v))
    }

    /// Edge map; on multi-edges the last one wins, so validate first.
    pub fn edge_map(&self) -> BTreeMap<(usize, usize), EdgeLabel> {
        self.edges.iter().map(|e| ((e.u, e.v), e.label)).collect()
    }

    pub fn sorted_edges(&self) -> Vec<Edge> {
        let mut es = self.edges.clone();
        es.sort();
        es.dedup();
        es
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub enum Violation {
    NoVertices,
    LabelCountForVariant { k: u32, variant: ProblemVariant },
    DirectedFlagForVariant { directed: bool, variant: ProblemVariant },
    LabelArrayLength { expected: usize, found: usize },
    LabelOutOfRange { vertex: usize, label: u32, k: u32 },
    EndpointOutOfRange { u: usize, v: usize, n: usize },
    MultiEdge { u: usize, v: usize },
    MissingReflexiveLoops { vertices: Vec<usize> },
    EpsLabelMismatch { u: usize, v: usize },
    AsymmetricPushPop { u: usize, v: usize },
    AsymmetricEps { u: usize, v: usize },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::NoVertices => write!(f, "graph has no vertices"),
            Violation::LabelCountForVariant { k, variant } => {
                let want = if variant.single_label() { "k = 1" } else { "k >= 2" };
                write!(f, "variant {variant} requires {want}, got k = {k}")
            }
            Violation::DirectedFlagForVariant { directed, variant } => write!(
                f,
                "variant {variant} requires directed={}, got directed={}",
                u8::from(!variant.standard_symmetric()),
                u8::from(*directed)
            ),
            Violation::LabelArrayLength { expected, found } => {
                write!(f, "expected {expected} vertex labels, found {found}")
            }
            Violation::LabelOutOfRange { vertex, label, k } => {
                write!(f, "label out of range: vertex {vertex} has label {label}, k = {k}")
            }
            Violation::EndpointOutOfRange { u, v, n } => {
                write!(f, "edge ({u},{v}) has an endpoint outside 0..{n}")
            }
            Violation::MultiEdge { u, v } => write!(f, "multi-edge on ordered pair ({u},{v})"),
            Violation::MissingReflexiveLoops { vertices } => {
                write!(f, "missing reflexive ε edges at vertices {vertices:?}")
            }
            Violation::EpsLabelMismatch { u, v } => {
                write!(f, "ε edge ({u},{v}) joins different labels")
            }
            Violation::AsymmetricPushPop { u, v } => {
                write!(f, "asymmetric push/pop: edge ({u},{v}) lacks its mirror")
            }
            Violation::AsymmetricEps { u, v } => {
                write!(f, "asymmetric ε: edge ({u},{v}) lacks its mirror")
            }
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct ValidationReport {
    pub violations: Vec<Violation>,
}

impl ValidationReport {
    pub fn is_ok(&self) -> bool {
        self.violations.is_empty()
    }
}

impl fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for v in &self.violations {
            writeln!(f, "{v}")?;
        }
        Ok(())
    }
}

/// Lists every structural problem of `graph` with respect to `variant`.
pub fn validate(graph: &LabeledGraph, variant: ProblemVariant) -> ValidationReport {
    let mut out = Vec::new();
    let n = graph.n;
    if n == 0 {
        out.push(Violation::NoVertices);
    }
    let k_ok = if variant.single_label() { graph.k == 1 } else { graph.k >= 2 };
    if !k_ok {
        out.push(Violation::LabelCountForVariant { k: graph.k, variant });
    }
    if graph.directed == variant.standard_symmetric() {
        out.push(Violation::DirectedFlagForVariant { directed: graph.directed, variant });
    }
    if graph.labels.len() != n {
        out.push(Violation::LabelArrayLength { expected: n, found: graph.labels.len() });
    }
    for (v, &l) in graph.labels.iter().enumerate() {
        if l == 0 || l > graph.k {
            out.push(Violation::LabelOutOfRange { vertex: v, label: l, k: graph.k });
        }
    }
    let label = |v: usize| graph.labels.get(v).copied();

    let mut seen: BTreeMap<(usize, usize), EdgeLabel> = BTreeMap::new();
    let mut multi = BTreeSet::new();
    for e in &graph.edges {
        if e.u >= n || e.v >= n {
            out.push(Violation::EndpointOutOfRange { u: e.u, v: e.v, n });
            continue;
        }
        if let Some(prev) = seen.insert((e.u, e.v), e.label) {
            if prev != e.label {
                multi.insert((e.u, e.v));
            }
        }
    }
    out.extend(multi.iter().map(|&(u, v)| Violation::MultiEdge { u, v }));

    let missing: Vec<usize> =
        (0..n).filter(|&u| seen.get(&(u, u)) != Some(&EdgeLabel::Eps)).collect();
    if !missing.is_empty() {
        out.push(Violation::MissingReflexiveLoops { vertices: missing });
    }

    for (&(u, v), &lab) in &seen {
        if lab == EdgeLabel::Eps && label(u) != label(v) {
            out.push(Violation::EpsLabelMismatch { u, v });
        }
    }

    if !graph.directed {
        for (&(u, v), &lab) in &seen {
            if u == v && lab == EdgeLabel::Eps {
                continue;
            }
            if seen.get(&(v, u)) != Some(&lab.reversed()) {
                out.push(match lab {
                    EdgeLabel::Eps => Violation::AsymmetricEps { u, v },
                    _ => Violation::AsymmetricPushPop { u, v },
                });
            }
        }
    }
    ValidationReport { violations: out }
}

/// A validated graph together with its initial standard and gap matrices.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Instance {
    pub graph: LabeledGraph,
    pub e: StandardMatrix,
    pub gap: GapMatrix,
    pub variant: ProblemVariant,
}

impl Instance {
    pub fn n(&self) -> usize {
        self.graph.n
    }

    pub fn label(&self, v: usize) -> u32 {
        self.graph.labels[v]
    }
}

/// Builds the initial matrices, refusing graphs larger than [`DEFAULT_MAX_N`].
pub fn initialize(graph: &LabeledGraph, variant: ProblemVariant) -> Result<Instance> {
    initialize_capped(graph, variant, DEFAULT_MAX_N)
}

pub fn initialize_capped(graph: &LabeledGraph, variant: ProblemVariant, max_n: usize) -> Result<Instance> {
    let report = validate(graph, variant);
    if !report.is_ok() {
        return Err(Error::Invalid(report));
    }
    let n = graph.n;
    if n > max_n {
        return Err(Error::TooLarge { n, cap: max_n });
    }
    let l = &graph.labels;

    let mut e = StandardMatrix::new(n);
    for (u, v) in graph.edges_with(EdgeLabel::Eps) {
        e.set(u, v);
    }

    let mut gap = GapMatrix::new(n);
    let pushes: Vec<_> = graph.edges_with(EdgeLabel::Push).collect();
    let pops: Vec<_> = graph.edges_with(EdgeLabel::Pop).collect();
    for &(a, c) in &pushes {
        for &(d, b) in &pops {
            if l[a] == l[b] && l[c] == l[d] {
                gap.set(a, c, d, b);
            }
        }
    }
    for a in 0..n {
        gap.set(a, a, a, a);
        for b in 0..n {
            gap.set(a, a, b, b);
        }
    }
    if variant.gap_symmetric() {
        gap.symmetrize();
    }
    Ok(Instance { graph: graph.clone(), e, gap, variant })
}

/// Deletes push and pop edges that can never be matched, to a fixpoint.
///
/// A push edge `(u,v)` with labels `(i,j)` survives only while some pop edge
/// other than `(v,u)` carries labels `(j,i)`; pops are treated the same way.
/// Each round removes simultaneously, which keeps undirected graphs symmetric.
pub fn prune_unmatched(graph: &LabeledGraph) -> LabeledGraph {
    let mut g = graph.clone();
    loop {
        let l = &g.labels;
        let mut by_labels: BTreeMap<(EdgeLabel, u32, u32), Vec<(usize, usize)>> = BTreeMap::new();
        for e in &g.edges {
            if e.label != EdgeLabel::Eps {
                by_labels.entry((e.label, l[e.u], l[e.v])).or_default().push((e.u, e.v));
            }
        }
        let doomed: Vec<Edge> = g
            .edges
            .iter()
            .filter(|e| {
                if e.label == EdgeLabel::Eps {
                    return false;
                }
                let partners = by_labels.get(&(e.label.reversed(), l[e.v], l[e.u]));
                !partners.is_some_and(|ps| ps.iter().any(|&p| p != (e.v, e.u)))
            })
            .copied()
            .collect();
        if doomed.is_empty() {
            return g;
        }
        g.edges.retain(|e| !doomed.contains(e));
    }
}
