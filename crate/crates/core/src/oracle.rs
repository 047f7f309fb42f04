//! Ground-truth checkers that share no code with the tensor and closure modules:
//! worklist saturation, bounded walk enumeration, bounded gap-pair search and
//! a counter DP for balanced walks.

use std::collections::{HashMap, HashSet};

use crate::digraph::Digraph;
use crate::error::{Error, Result};
use crate::grammar::{is_realizable_string, GrammarVariant, LabelString, WalkState};
use crate::instance::{EdgeLabel, Instance};
use crate::matrix::StandardMatrix;

/// Default cap on explored walk states.
pub const DEFAULT_WORK_BUDGET: u64 = 20_000_000;

/// Realizable pairs by exhaustive rule application.
pub fn saturate_realizable(inst: &Instance) -> StandardMatrix {
    let n = inst.n();
    let g = inst.variant.grammar();
    let l = &inst.graph.labels;
    let pushes: Vec<_> = inst.graph.edges_with(EdgeLabel::Push).collect();
    let pops: Vec<_> = inst.graph.edges_with(EdgeLabel::Pop).collect();

    let mut r = vec![vec![false; n]; n];
    for (u, row) in r.iter_mut().enumerate() {
        row[u] = true;
    }
    for (u, v) in inst.graph.edges_with(EdgeLabel::Eps) {
        r[u][v] = true;
    }
    loop {
        let mut changed = false;
        let mut nest = |open: &[(usize, usize)], close: &[(usize, usize)], r: &mut Vec<Vec<bool>>| {
            for &(a, c) in open {
                for &(d, b) in close {
                    if !r[a][b] && r[c][d] && g.same(l[a], l[b]) && g.same(l[c], l[d]) {
                        r[a][b] = true;
                        changed = true;
                    }
                }
            }
        };
        nest(&pushes, &pops, &mut r);
        if g.allows_pop_push() {
            nest(&pops, &pushes, &mut r);
        }
        for m in 0..n {
            for a in 0..n {
                if r[a][m] {
                    for b in 0..n {
                        if r[m][b] && !r[a][b] {
                            r[a][b] = true;
                            changed = true;
                        }
                    }
                }
            }
        }
        if !changed {
            break;
        }
    }
    StandardMatrix::from_fn(n, |a, b| r[a][b])
}

fn out_edges(inst: &Instance) -> Vec<Vec<(usize, EdgeLabel)>> {
    let mut adj = vec![Vec::new(); inst.n()];
    for e in inst.graph.sorted_edges() {
        // Reflexive ε loops never change a prefix state; skipping them only
        // shortens walks.
        if e.u == e.v && e.label == EdgeLabel::Eps {
            continue;
        }
        adj[e.u].push((e.v, e.label));
    }
    adj
}

/// Is there a walk `s → t` with at most `max_len` edges whose label string is
/// realizable under `g`?
///
/// Depth-first over walks, pruned by the recognizer prefix state; a visited
/// `(vertex, state)` is skipped when it was already explored with at least as
/// many remaining steps. Every accepted walk is re-checked with CYK.
pub fn enumerate_walk_check(
    inst: &Instance,
    s: usize,
    t: usize,
    max_len: usize,
    g: GrammarVariant,
    budget: u64,
) -> Result<bool> {
    let n = inst.n();
    if s >= n || t >= n {
        return Err(Error::OutOfRange(format!("vertex pair ({s},{t}) with n = {n}")));
    }
    struct Search<'a> {
        inst: &'a Instance,
        adj: Vec<Vec<(usize, EdgeLabel)>>,
        g: GrammarVariant,
        t: usize,
        seen: HashMap<(usize, WalkState), usize>,
        work: u64,
        budget: u64,
        labels: Vec<u32>,
        edges: Vec<EdgeLabel>,
    }
    impl Search<'_> {
        fn go(&mut self, v: usize, st: WalkState, left: usize) -> Result<bool> {
            self.work += 1;
            if self.work > self.budget {
                return Err(Error::OracleBudget(self.budget));
            }
            if v == self.t && st.accepts() {
                let s = LabelString::new(self.labels.clone(), self.edges.clone())?;
                if is_realizable_string(&s, self.g) {
                    return Ok(true);
                }
                debug_assert!(false, "recognizer and CYK disagree on {s}");
            }
            if left == 0 {
                return Ok(false);
            }
            match self.seen.get(&(v, st.clone())) {
                Some(&l) if l >= left => return Ok(false),
                _ => {
                    self.seen.insert((v, st.clone()), left);
                }
            }
            let lv = self.inst.label(v);
            for i in 0..self.adj[v].len() {
                let (w, e) = self.adj[v][i];
                let lw = self.inst.label(w);
                let Some(next) = self.g.step(&st, lv, e, lw) else { continue };
                if next.pending() > left - 1 {
                    continue;
                }
                self.labels.push(lw);
                self.edges.push(e);
                let found = self.go(w, next, left - 1)?;
                self.labels.pop();
                self.edges.pop();
                if found {
                    return Ok(true);
                }
            }
            Ok(false)
        }
    }
    let mut search = Search {
        inst,
        adj: out_edges(inst),
        g,
        t,
        seen: HashMap::new(),
        work: 0,
        budget,
        labels: vec![inst.label(s)],
        edges: vec![],
    };
    search.go(s, g.start(inst.label(s)), max_len)
}

/// Breadth-first layer expansion of `(vertex, state)` pairs from `seeds`.
/// Returns every pair reached within `steps` edges whose pending work still
/// fits into `slack(steps_taken)` further edges.
fn expand(
    inst: &Instance,
    adj: &[Vec<(usize, EdgeLabel)>],
    g: GrammarVariant,
    seeds: Vec<(usize, WalkState)>,
    steps: usize,
    slack: impl Fn(usize) -> usize,
    work: &mut u64,
    budget: u64,
) -> Result<HashSet<(usize, WalkState)>> {
    let mut seen: HashSet<(usize, WalkState)> = seeds.iter().cloned().collect();
    let mut frontier = seeds;
    for taken in 1..=steps {
        let mut next = Vec::new();
        for (v, st) in &frontier {
            let lv = inst.label(*v);
            for &(w, e) in &adj[*v] {
                let Some(ns) = g.step(st, lv, e, inst.label(w)) else { continue };
                if ns.pending() > slack(taken) {
                    continue;
                }
                *work += 1;
                if *work > budget {
                    return Err(Error::OracleBudget(budget));
                }
                let key = (w, ns);
                if !seen.contains(&key) {
                    seen.insert(key.clone());
                    next.push(key);
                }
            }
        }
        if next.is_empty() {
            break;
        }
        frontier = next;
    }
    Ok(seen)
}

/// Walks `a → c` (≤ `b1` edges) and `d → b` (≤ `b2` edges) whose joined label
/// string, with `c` and `d` identified, is realizable under `g`.
#[allow(clippy::too_many_arguments)]
pub fn gap_pair_check(
    inst: &Instance,
    a: usize,
    c: usize,
    d: usize,
    b: usize,
    b1: usize,
    b2: usize,
    g: GrammarVariant,
    budget: u64,
) -> Result<bool> {
    let n = inst.n();
    if [a, b, c, d].iter().any(|&x| x >= n) {
        return Err(Error::OutOfRange(format!("gap tuple ({a},({c},{d}),{b}) with n = {n}")));
    }
    if !g.same(inst.label(a), inst.label(b)) || !g.same(inst.label(c), inst.label(d)) {
        return Ok(false);
    }
    let adj = out_edges(inst);
    let mut work = 0;
    let first = expand(inst, &adj, g, vec![(a, g.start(inst.label(a)))], b1, |t| b1 - t + b2, &mut work, budget)?;
    let seeds: Vec<_> = first.into_iter().filter(|(v, _)| *v == c).map(|(_, st)| (d, st)).collect();
    let second = expand(inst, &adj, g, seeds, b2, |t| b2 - t, &mut work, budget)?;
    Ok(second.iter().any(|(v, st)| *v == b && st.accepts()))
}

/// All witnessed gap tuples at once: `out[((a*n+b)*n+c)*n+d]`.
pub fn gap_witness_table(inst: &Instance, b1: usize, b2: usize, g: GrammarVariant, budget: u64) -> Result<Vec<bool>> {
    let n = inst.n();
    let adj = out_edges(inst);
    let mut out = vec![false; n * n * n * n];
    let mut work = 0;
    for a in 0..n {
        let first = expand(inst, &adj, g, vec![(a, g.start(inst.label(a)))], b1, |t| b1 - t + b2, &mut work, budget)?;
        let mut at: Vec<Vec<WalkState>> = vec![Vec::new(); n];
        for (v, st) in first {
            at[v].push(st);
        }
        for c in 0..n {
            if at[c].is_empty() {
                continue;
            }
            for d in 0..n {
                if !g.same(inst.label(c), inst.label(d)) {
                    continue;
                }
                let seeds = at[c].iter().map(|st| (d, st.clone())).collect();
                let second = expand(inst, &adj, g, seeds, b2, |t| b2 - t, &mut work, budget)?;
                for (b, st) in second {
                    if st.accepts() && g.same(inst.label(a), inst.label(b)) {
                        out[((a * n + b) * n + c) * n + d] = true;
                    }
                }
            }
        }
    }
    Ok(out)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum BalanceMode {
    /// `#forward = #backward`.
    Balanced,
    /// Balanced, and no prefix has more backward than forward edges.
    Positive,
    /// `#forward = #backward + k`.
    KBalanced(usize),
    /// `KBalanced` with the prefix condition of `Positive`.
    PositiveKBalanced(usize),
}

impl BalanceMode {
    fn target(self) -> i64 {
        match self {
            BalanceMode::Balanced | BalanceMode::Positive => 0,
            BalanceMode::KBalanced(k) | BalanceMode::PositiveKBalanced(k) => k as i64,
        }
    }

    fn nonnegative(self) -> bool {
        matches!(self, BalanceMode::Positive | BalanceMode::PositiveKBalanced(_))
    }
}

/// Minimal walk length from `s` to every vertex in the underlying undirected
/// graph meeting `mode`, considering walks of at most `max_len` edges.
pub fn balanced_walk_dp_all(g: &Digraph, s: usize, max_len: usize, mode: BalanceMode) -> Vec<Option<usize>> {
    let adj = g.undirected_adjacency();
    let span = max_len as i64;
    let width = 2 * max_len + 1;
    let idx = |v: usize, bal: i64| v * width + (bal + span) as usize;
    let mut seen = vec![false; g.n * width];
    let mut best = vec![None; g.n];
    let target = mode.target();
    let mut layer = vec![(s, 0i64)];
    seen[idx(s, 0)] = true;
    for len in 0..=max_len {
        for &(v, bal) in &layer {
            if bal == target && best[v].is_none() {
                best[v] = Some(len);
            }
        }
        if len == max_len {
            break;
        }
        let mut next = Vec::new();
        for &(v, bal) in &layer {
            for &(w, class) in &adj[v] {
                let nb = bal + class.delta();
                if nb.abs() > span || (mode.nonnegative() && nb < 0) {
                    continue;
                }
                let i = idx(w, nb);
                if !seen[i] {
                    seen[i] = true;
                    next.push((w, nb));
                }
            }
        }
        layer = next;
    }
    best
}

pub fn balanced_walk_dp(g: &Digraph, s: usize, t: usize, max_len: usize, mode: BalanceMode) -> Option<usize> {
    balanced_walk_dp_all(g, s, max_len, mode)[t]
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::instance::{initialize, LabeledGraph, ProblemVariant};

    fn chain() -> Instance {
        let mut g = LabeledGraph::with_loops(3, 1, true);
        g.add_edge(0, 1, EdgeLabel::Push);
        g.add_edge(1, 2, EdgeLabel::Pop);
        initialize(&g, ProblemVariant::OneLogCfl).unwrap()
    }

    #[test]
    fn saturation_on_chain() {
        let r = saturate_realizable(&chain());
        assert!(r.get(0, 2));
        assert!(!r.get(0, 1));
        assert!(!r.get(1, 2));
    }

    #[test]
    fn saturation_of_eps_graph_is_reflexive_transitive_closure() {
        let mut g = LabeledGraph::with_loops(4, 1, true);
        g.add_edge(0, 1, EdgeLabel::Eps);
        g.add_edge(1, 2, EdgeLabel::Eps);
        let r = saturate_realizable(&initialize(&g, ProblemVariant::OneLogCfl).unwrap());
        let want = [(0, 0), (0, 1), (0, 2), (1, 1), (1, 2), (2, 2), (3, 3)];
        assert_eq!(r.ones().collect::<Vec<_>>(), want);
    }

    #[test]
    fn walk_check_bounds() {
        let inst = chain();
        let g = inst.variant.grammar();
        assert!(enumerate_walk_check(&inst, 1, 1, 0, g, DEFAULT_WORK_BUDGET).unwrap());
        assert!(!enumerate_walk_check(&inst, 0, 2, 1, g, DEFAULT_WORK_BUDGET).unwrap());
        assert!(enumerate_walk_check(&inst, 0, 2, 2, g, DEFAULT_WORK_BUDGET).unwrap());
    }

    #[test]
    fn walk_check_budget_is_an_error() {
        let mut g = LabeledGraph::with_loops(2, 1, true);
        g.add_edge(0, 1, EdgeLabel::Push);
        g.add_edge(1, 0, EdgeLabel::Push);
        let inst = initialize(&g, ProblemVariant::OneLogCfl).unwrap();
        let r = enumerate_walk_check(&inst, 0, 1, 40, GrammarVariant::One, 10);
        assert!(matches!(r, Err(Error::OracleBudget(10))));
    }

    #[test]
    fn gap_checks() {
        let mut g = LabeledGraph::with_loops(4, 2, true);
        g.set_label(1, 2);
        g.set_label(2, 2);
        g.add_edge(0, 1, EdgeLabel::Push);
        g.add_edge(2, 3, EdgeLabel::Pop);
        let inst = initialize(&g, ProblemVariant::LogCfl).unwrap();
        let gr = GrammarVariant::Standard;
        assert!(gap_pair_check(&inst, 0, 1, 2, 3, 2, 2, gr, DEFAULT_WORK_BUDGET).unwrap());
        assert!(gap_pair_check(&inst, 0, 0, 3, 3, 0, 0, gr, DEFAULT_WORK_BUDGET).unwrap());
        assert!(!gap_pair_check(&inst, 0, 1, 1, 0, 4, 4, gr, DEFAULT_WORK_BUDGET).unwrap());
        let table = gap_witness_table(&inst, 2, 2, gr, DEFAULT_WORK_BUDGET).unwrap();
        for a in 0..4 {
            for b in 0..4 {
                for c in 0..4 {
                    for d in 0..4 {
                        let one = gap_pair_check(&inst, a, c, d, b, 2, 2, gr, DEFAULT_WORK_BUDGET).unwrap();
                        assert_eq!(table[((a * 4 + b) * 4 + c) * 4 + d], one);
                    }
                }
            }
        }
    }

    #[test]
    fn balanced_examples() {
        // s=0, m=1, t=2
        let g = Digraph::from_arcs(3, [(0, 1), (2, 1)]);
        assert_eq!(balanced_walk_dp(&g, 0, 2, 4, BalanceMode::Balanced), Some(2));
        assert_eq!(balanced_walk_dp(&g, 0, 1, 4, BalanceMode::KBalanced(1)), Some(1));
        assert_eq!(balanced_walk_dp(&g, 0, 2, 4, BalanceMode::Positive), Some(2));
        let g = Digraph::from_arcs(3, [(1, 0), (1, 2)]);
        assert_eq!(balanced_walk_dp(&g, 0, 2, 8, BalanceMode::Positive), None);
        assert_eq!(balanced_walk_dp(&g, 0, 2, 8, BalanceMode::Balanced), Some(2));
    }

    #[test]
    fn all_neutral_graph_is_plain_connectivity() {
        let g = Digraph::from_arcs(5, [(0, 1), (1, 0), (1, 2), (2, 1), (3, 4), (4, 3)]);
        let d = balanced_walk_dp_all(&g, 0, 5, BalanceMode::Balanced);
        assert_eq!(d, vec![Some(0), Some(1), Some(2), None, None]);
    }
}
