//! Instance-to-instance constructions and generators for test families.

use std::collections::{BTreeMap, VecDeque};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::digraph::{Digraph, EdgeClass};
use crate::error::{Error, Result};
use crate::instance::{initialize_capped, EdgeLabel, Instance, LabeledGraph, ProblemVariant};

/// Reductions may grow instances past the usual cap; Υ is still n⁴ bits.
pub const REDUCTION_MAX_N: usize = 256;

/// Traceability record for one construction.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ReductionCert {
    /// Name of the construction.
    pub reduction: String,
    /// Problem the input belongs to.
    pub source: String,
    /// Problem the output belongs to.
    pub target: String,
    pub target_n: usize,
    /// `vertex_map[u]` is the output vertex standing for input vertex `u`.
    pub vertex_map: Vec<usize>,
    pub params: BTreeMap<String, Value>,
}

impl ReductionCert {
    fn new(reduction: &str, source: &str, target: &str, target_n: usize, vertex_map: Vec<usize>) -> Self {
        ReductionCert {
            reduction: reduction.into(),
            source: source.into(),
            target: target.into(),
            target_n,
            vertex_map,
            params: BTreeMap::new(),
        }
    }

    fn with(mut self, key: &str, v: Value) -> Self {
        self.params.insert(key.into(), v);
        self
    }

    /// Header line, then one `{"from":u,"to":v}` line per source vertex.
    pub fn to_jsonl(&self) -> String {
        let header = json!({
            "reduction": self.reduction,
            "source": self.source,
            "target": self.target,
            "target_n": self.target_n,
            "params": self.params,
        });
        let mut out = header.to_string();
        out.push('\n');
        for (u, v) in self.vertex_map.iter().enumerate() {
            out.push_str(&json!({ "from": u, "to": v }).to_string());
            out.push('\n');
        }
        out
    }

    /// Inverse of [`ReductionCert::to_jsonl`].
    pub fn from_jsonl(text: &str) -> Result<Self> {
        let bad = |line: usize, msg: String| Error::Parse { line, msg };
        let mut lines = text.lines().enumerate().filter(|(_, l)| !l.trim().is_empty());
        let (_, head) = lines.next().ok_or_else(|| bad(1, "empty certificate".into()))?;
        #[derive(Deserialize)]
        struct Header {
            reduction: String,
            source: String,
            target: String,
            target_n: usize,
            params: BTreeMap<String, Value>,
        }
        #[derive(Deserialize)]
        struct Entry {
            from: usize,
            to: usize,
        }
        let h: Header = serde_json::from_str(head).map_err(|e| bad(1, e.to_string()))?;
        let mut vertex_map = Vec::new();
        for (i, l) in lines {
            let e: Entry = serde_json::from_str(l).map_err(|e| bad(i + 1, e.to_string()))?;
            if e.from != vertex_map.len() {
                return Err(bad(i + 1, format!("expected source vertex {}, found {}", vertex_map.len(), e.from)));
            }
            vertex_map.push(e.to);
        }
        Ok(ReductionCert {
            reduction: h.reduction,
            source: h.source,
            target: h.target,
            target_n: h.target_n,
            vertex_map,
            params: h.params,
        })
    }
}

fn build(graph: &LabeledGraph, variant: ProblemVariant) -> Result<Instance> {
    initialize_capped(graph, variant, REDUCTION_MAX_N)
}

/// Replaces every non-loop ε edge `(u,v)` by `u -push-> w -pop-> v` through a
/// fresh vertex `w` carrying a new label `k+1`. Undirected instances get one
/// fresh vertex per undirected ε edge, with the mirrored pop/push edges.
pub fn eliminate_epsilon(inst: &Instance) -> Result<(Instance, ReductionCert)> {
    let src = &inst.graph;
    let k2 = src.k + 1;
    let mut g = LabeledGraph::new(src.n, k2, src.directed);
    g.labels = src.labels.clone();
    let mut fresh = 0;
    for e in src.sorted_edges() {
        let splittable = e.label == EdgeLabel::Eps && e.u != e.v && (src.directed || e.u < e.v);
        if !splittable {
            if e.label != EdgeLabel::Eps || e.u == e.v {
                g.add_edge(e.u, e.v, e.label);
            }
            continue;
        }
        let w = g.n;
        g.n += 1;
        g.labels.push(k2);
        g.add_symmetric_edge(e.u, w, EdgeLabel::Push);
        g.add_symmetric_edge(w, e.v, EdgeLabel::Pop);
        fresh += 1;
    }
    g.add_reflexive_loops();
    let variant = inst.variant.multi_label();
    let out = build(&g, variant)?;
    let cert = ReductionCert::new("eliminate-epsilon", inst.variant.as_str(), variant.as_str(), g.n, (0..src.n).collect())
        .with("k", json!(k2))
        .with("fresh_vertices", json!(fresh));
    Ok((out, cert))
}

/// Directed reachability as single-label realizability: each arc becomes a
/// push into a fresh vertex followed by a pop out of it.
pub fn stconn_to_1logcfl(d: &Digraph, s: usize, t: usize) -> Result<(Instance, ReductionCert)> {
    check_pair(d, s, t)?;
    let arcs: Vec<_> = d.arcs.iter().filter(|(u, v)| u != v).copied().collect();
    let mut g = LabeledGraph::new(d.n + arcs.len(), 1, true);
    for (i, &(u, v)) in arcs.iter().enumerate() {
        let w = d.n + i;
        g.add_edge(u, w, EdgeLabel::Push);
        g.add_edge(w, v, EdgeLabel::Pop);
    }
    g.add_reflexive_loops();
    let out = build(&g, ProblemVariant::OneLogCfl)?;
    let cert = ReductionCert::new("stconn-to-1logcfl", "stconn", "1logcfl", g.n, (0..d.n).collect())
        .with("s", json!(s))
        .with("t", json!(t));
    Ok((out, cert))
}

fn balanced_graph(d: &Digraph) -> LabeledGraph {
    let mut g = LabeledGraph::new(d.n, 1, false);
    for (u, v, class) in d.underlying_edges() {
        match class {
            EdgeClass::Neutral => g.add_symmetric_edge(u, v, EdgeLabel::Eps),
            EdgeClass::Forward => g.add_symmetric_edge(u, v, EdgeLabel::Push),
            EdgeClass::Backward => g.add_symmetric_edge(v, u, EdgeLabel::Push),
        }
    }
    g.add_reflexive_loops();
    g
}

/// Balanced walks as single-label symmetric-gap realizability: neutral edges
/// become ε both ways, a one-way arc `(u,v)` becomes push forward, pop back.
pub fn balanced_to_1sgs(d: &Digraph, s: usize, t: usize) -> Result<(Instance, ReductionCert)> {
    check_pair(d, s, t)?;
    let g = balanced_graph(d);
    let out = build(&g, ProblemVariant::OneSgsLogCfl)?;
    let cert = ReductionCert::new("balanced-to-1sgs", "balanced", "1sgslogcfl", g.n, (0..d.n).collect())
        .with("s", json!(s))
        .with("t", json!(t));
    Ok((out, cert))
}

/// Same labeling as [`balanced_to_1sgs`], read with the grammar lacking
/// `pop S push`, which captures the prefix condition of positive walks.
pub fn positive_balanced_to_1s(d: &Digraph, s: usize, t: usize) -> Result<(Instance, ReductionCert)> {
    check_pair(d, s, t)?;
    let g = balanced_graph(d);
    let out = build(&g, ProblemVariant::OneSLogCfl)?;
    let cert = ReductionCert::new("positive-balanced-to-1s", "positive-balanced", "1slogcfl", g.n, (0..d.n).collect())
        .with("s", json!(s))
        .with("t", json!(t));
    Ok((out, cert))
}

/// Inverse of [`balanced_to_1sgs`]: ε pairs become arcs both ways, a push/pop
/// pair becomes the single arc along the push.
pub fn onesgs_to_balanced(inst: &Instance, s: usize, t: usize) -> Result<(Digraph, ReductionCert)> {
    let g = &inst.graph;
    if g.k != 1 || g.directed {
        return Err(Error::InvalidParameter("expected a single-label undirected instance".into()));
    }
    if s >= g.n || t >= g.n {
        return Err(Error::OutOfRange(format!("pair ({s},{t}) with n = {}", g.n)));
    }
    let mut d = Digraph::new(g.n);
    for e in &g.edges {
        if e.u == e.v {
            continue;
        }
        match e.label {
            EdgeLabel::Eps | EdgeLabel::Push => d.add_arc(e.u, e.v),
            EdgeLabel::Pop => {}
        }
    }
    let cert = ReductionCert::new("onesgs-to-balanced", inst.variant.as_str(), "balanced", g.n, (0..g.n).collect())
        .with("s", json!(s))
        .with("t", json!(t));
    Ok((d, cert))
}

/// Appends a fresh directed path `t' → … → t` of `k` arcs, so that k-balanced
/// `s`–`t` walks correspond to balanced `s`–`t'` walks.
pub fn k_balanced_reduce(d: &Digraph, s: usize, t: usize, k: usize) -> Result<(Digraph, usize, usize, ReductionCert)> {
    check_pair(d, s, t)?;
    let mut out = d.clone();
    let mut t2 = t;
    if k > 0 {
        out.n = d.n + k;
        // Fresh vertices n..n+k-1; t' = n, then n+1, …, ending at t.
        let path: Vec<usize> = (d.n..d.n + k).chain([t]).collect();
        for w in path.windows(2) {
            out.add_arc(w[0], w[1]);
        }
        t2 = d.n;
    }
    let cert = ReductionCert::new("k-balanced", "k-balanced", "balanced", out.n, (0..d.n).collect())
        .with("k", json!(k))
        .with("s", json!(s))
        .with("t", json!(t2));
    Ok((out, s, t2, cert))
}

/// Digraph whose only balanced `s`–`t` walks have length `n/2 + (n/2)²`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ThetaFamily {
    pub digraph: Digraph,
    pub s: usize,
    pub t: usize,
    /// Path vertex carrying the cycle.
    pub v: usize,
    /// Cycle vertex at the head of the single directed cycle edge.
    pub u: usize,
}

impl ThetaFamily {
    pub fn min_balanced_len(n: usize) -> usize {
        n / 2 + (n / 2) * (n / 2)
    }
}

/// A directed path `s → … → t` of `n/2` arcs, and a cycle of length `n/2` at
/// the path vertex `v` at position `⌈n/4⌉`. Cycle edges are neutral except
/// the single arc `(v,u)`, so each lap around it can cancel one forward arc.
pub fn gen_theta_n2(n: usize) -> Result<ThetaFamily> {
    if n < 8 || n % 2 != 0 {
        return Err(Error::InvalidParameter(format!("theta family needs an even n >= 8, got {n}")));
    }
    let half = n / 2;
    let mut d = Digraph::new(n);
    for i in 0..half {
        d.add_arc(i, i + 1);
    }
    let v = half.div_ceil(2);
    let cycle: Vec<usize> = std::iter::once(v).chain(half + 1..n).collect();
    for w in cycle.windows(2) {
        d.add_arc(w[0], w[1]);
        d.add_arc(w[1], w[0]);
    }
    let u = n - 1;
    d.add_arc(v, u);
    Ok(ThetaFamily { digraph: d, s: 0, t: half, v, u })
}

/// Seeded random instance honoring the variant's label count and symmetry.
pub fn gen_random(n: usize, k: u32, variant: ProblemVariant, density: f64, seed: u64) -> Result<Instance> {
    let graph = gen_random_graph(n, k, variant, density, seed)?;
    initialize_capped(&graph, variant, REDUCTION_MAX_N)
}

pub fn gen_random_graph(n: usize, k: u32, variant: ProblemVariant, density: f64, seed: u64) -> Result<LabeledGraph> {
    if n == 0 {
        return Err(Error::InvalidParameter("n must be positive".into()));
    }
    if !(0.0..=1.0).contains(&density) {
        return Err(Error::InvalidParameter(format!("density {density} outside [0,1]")));
    }
    if variant.single_label() != (k == 1) || k == 0 {
        return Err(Error::InvalidParameter(format!("variant {variant} cannot have k = {k}")));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let directed = !variant.standard_symmetric();
    let mut g = LabeledGraph::new(n, k, directed);
    for v in 0..n {
        g.labels[v] = rng.gen_range(1..=k);
    }
    for u in 0..n {
        let start = if directed { 0 } else { u + 1 };
        for v in start..n {
            if u == v || !rng.gen_bool(density) {
                continue;
            }
            let choices: &[EdgeLabel] = if g.labels[u] == g.labels[v] {
                &[EdgeLabel::Push, EdgeLabel::Pop, EdgeLabel::Eps]
            } else {
                &[EdgeLabel::Push, EdgeLabel::Pop]
            };
            let lab = choices[rng.gen_range(0..choices.len())];
            g.add_symmetric_edge(u, v, lab);
        }
    }
    g.add_reflexive_loops();
    Ok(g)
}

/// Seeded random digraph without self-loops.
pub fn gen_random_digraph(n: usize, density: f64, seed: u64) -> Result<Digraph> {
    if !(0.0..=1.0).contains(&density) {
        return Err(Error::InvalidParameter(format!("density {density} outside [0,1]")));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut d = Digraph::new(n);
    for u in 0..n {
        for v in 0..n {
            if u != v && rng.gen_bool(density) {
                d.add_arc(u, v);
            }
        }
    }
    Ok(d)
}

/// Undirected connectivity as an all-ε single-label instance.
pub fn ustconn_instance(n: usize, edges: &[(usize, usize)]) -> Result<Instance> {
    let mut g = LabeledGraph::new(n, 1, false);
    for &(u, v) in edges {
        if u >= n || v >= n {
            return Err(Error::OutOfRange(format!("edge ({u},{v}) with n = {n}")));
        }
        g.add_symmetric_edge(u, v, EdgeLabel::Eps);
    }
    g.add_reflexive_loops();
    build(&g, ProblemVariant::OneSgsLogCfl)
}

/// Restricts an instance to vertices that lie on some `s → t` walk: reachable
/// from `s` and reaching `t`. Returns the new instance and, per old vertex,
/// its new index. Realizability of `(s,t)` is unchanged since every walk from
/// `s` to `t` stays inside the kept set.
pub fn restrict_relevant(inst: &Instance, s: usize, t: usize) -> Result<(Instance, Vec<Option<usize>>)> {
    let g = &inst.graph;
    if s >= g.n || t >= g.n {
        return Err(Error::OutOfRange(format!("pair ({s},{t}) with n = {}", g.n)));
    }
    let mut fwd = vec![Vec::new(); g.n];
    let mut bwd = vec![Vec::new(); g.n];
    for e in &g.edges {
        fwd[e.u].push(e.v);
        bwd[e.v].push(e.u);
    }
    let reach = |adj: &Vec<Vec<usize>>, from: usize| {
        let mut seen = vec![false; g.n];
        seen[from] = true;
        let mut q = VecDeque::from([from]);
        while let Some(x) = q.pop_front() {
            for &y in &adj[x] {
                if !seen[y] {
                    seen[y] = true;
                    q.push_back(y);
                }
            }
        }
        seen
    };
    let (a, b) = (reach(&fwd, s), reach(&bwd, t));
    let mut map = vec![None; g.n];
    let mut out = LabeledGraph::new(0, g.k, g.directed);
    for v in 0..g.n {
        if (a[v] && b[v]) || v == s || v == t {
            map[v] = Some(out.n);
            out.n += 1;
            out.labels.push(g.labels[v]);
        }
    }
    for e in &g.edges {
        if let (Some(u), Some(v)) = (map[e.u], map[e.v]) {
            out.add_edge(u, v, e.label);
        }
    }
    Ok((build(&out, inst.variant)?, map))
}

fn check_pair(d: &Digraph, s: usize, t: usize) -> Result<()> {
    if s >= d.n || t >= d.n {
        return Err(Error::OutOfRange(format!("pair ({s},{t}) with n = {}", d.n)));
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::closure::closure_auto;
    use crate::instance::validate;
    use crate::oracle::{balanced_walk_dp, saturate_realizable, BalanceMode};

    #[test]
    fn eps_edge_is_split() {
        let mut g = LabeledGraph::with_loops(2, 2, true);
        g.add_edge(0, 1, EdgeLabel::Eps);
        let inst = crate::instance::initialize(&g, ProblemVariant::LogCfl).unwrap();
        let (out, cert) = eliminate_epsilon(&inst).unwrap();
        assert_eq!(out.n(), 3);
        assert_eq!(out.graph.k, 3);
        assert!(out.graph.edges.iter().all(|e| e.label != EdgeLabel::Eps || e.u == e.v));
        assert!(saturate_realizable(&out).get(0, 1));
        assert_eq!(cert.vertex_map, vec![0, 1]);
    }

    #[test]
    fn eliminate_epsilon_maps_single_label_variants() {
        let mut g = LabeledGraph::with_loops(2, 1, false);
        g.add_symmetric_edge(0, 1, EdgeLabel::Eps);
        let inst = crate::instance::initialize(&g, ProblemVariant::OneSgsLogCfl).unwrap();
        let (out, _) = eliminate_epsilon(&inst).unwrap();
        assert_eq!(out.variant, ProblemVariant::SgsLogCfl);
        assert_eq!(out.n(), 3);
        assert!(saturate_realizable(&out).get(1, 0));
    }

    #[test]
    fn stconn_path() {
        let d = Digraph::from_arcs(4, [(0, 1), (1, 2)]);
        let (inst, _) = stconn_to_1logcfl(&d, 0, 2).unwrap();
        let r = closure_auto(&inst).unwrap();
        assert!(r.query(0, 2).unwrap());
        assert!(!r.query(0, 3).unwrap());
        assert!(!r.query(2, 0).unwrap());
    }

    #[test]
    fn balanced_v_shape() {
        let d = Digraph::from_arcs(3, [(0, 1), (2, 1)]);
        let (inst, _) = balanced_to_1sgs(&d, 0, 2).unwrap();
        assert!(closure_auto(&inst).unwrap().query(0, 2).unwrap());
        let (inst, _) = positive_balanced_to_1s(&d, 0, 2).unwrap();
        assert!(closure_auto(&inst).unwrap().query(0, 2).unwrap());
        let d = Digraph::from_arcs(3, [(1, 0), (1, 2)]);
        let (inst, _) = positive_balanced_to_1s(&d, 0, 2).unwrap();
        assert!(!closure_auto(&inst).unwrap().query(0, 2).unwrap());
    }

    #[test]
    fn onesgs_round_trip() {
        let d = Digraph::from_arcs(4, [(0, 1), (1, 0), (1, 2), (3, 2)]);
        let (inst, _) = balanced_to_1sgs(&d, 0, 3).unwrap();
        let (back, _) = onesgs_to_balanced(&inst, 0, 3).unwrap();
        assert_eq!(back, d);
    }

    #[test]
    fn k_balanced_path() {
        let d = Digraph::from_arcs(2, [(0, 1)]);
        let (same, _, t, _) = k_balanced_reduce(&d, 0, 1, 0).unwrap();
        assert_eq!((same.clone(), t), (d.clone(), 1));
        let (out, s, t2, _) = k_balanced_reduce(&d, 0, 1, 1).unwrap();
        assert_eq!(t2, 2);
        assert_eq!(balanced_walk_dp(&out, s, t2, 8, BalanceMode::Balanced), Some(2));
        assert_eq!(balanced_walk_dp(&d, 0, 1, 8, BalanceMode::KBalanced(1)), Some(1));
    }

    #[test]
    fn theta_n8() {
        let f = gen_theta_n2(8).unwrap();
        assert_eq!(f.digraph.n, 8);
        assert_eq!(balanced_walk_dp(&f.digraph, f.s, f.t, 32, BalanceMode::Balanced), Some(20));
        assert_eq!(balanced_walk_dp(&f.digraph, f.s, f.t, 19, BalanceMode::Balanced), None);
        assert!(gen_theta_n2(9).is_err());
        assert!(gen_theta_n2(6).is_err());
    }

    #[test]
    fn random_generation() {
        let a = gen_random(6, 2, ProblemVariant::SgsLogCfl, 0.4, 1).unwrap();
        let b = gen_random(6, 2, ProblemVariant::SgsLogCfl, 0.4, 1).unwrap();
        assert_eq!(a, b);
        assert!(validate(&a.graph, a.variant).is_ok());
        let z = gen_random(5, 1, ProblemVariant::OneLogCfl, 0.0, 9).unwrap();
        assert_eq!(z.graph.edges.len(), 5);
        assert!(gen_random(5, 2, ProblemVariant::OneLogCfl, 0.5, 1).is_err());
    }

    #[test]
    fn cert_jsonl_round_trip() {
        let d = Digraph::from_arcs(3, [(0, 1)]);
        let (_, cert) = stconn_to_1logcfl(&d, 0, 1).unwrap();
        let text = cert.to_jsonl();
        assert_eq!(text.lines().count(), 4);
        assert_eq!(ReductionCert::from_jsonl(&text).unwrap(), cert);
    }

    #[test]
    fn restriction_keeps_answer() {
        let inst = gen_random(7, 1, ProblemVariant::OneLogCfl, 0.3, 4).unwrap();
        let full = saturate_realizable(&inst);
        for s in 0..7 {
            for t in 0..7 {
                let (small, map) = restrict_relevant(&inst, s, t).unwrap();
                let r = saturate_realizable(&small);
                assert_eq!(r.get(map[s].unwrap(), map[t].unwrap()), full.get(s, t));
            }
        }
    }
}
