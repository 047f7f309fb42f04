//! Plain unlabeled digraphs and their underlying undirected graphs.

use std::collections::{BTreeSet, VecDeque};

use serde::{Deserialize, Serialize};

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Digraph {
    pub n: usize,
    pub arcs: BTreeSet<(usize, usize)>,
}

/// How an undirected edge `{u,v}` looks when walked from `u` to `v`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum EdgeClass {
    /// Both `(u,v)` and `(v,u)` are arcs.
    Neutral,
    /// Only `(u,v)`.
    Forward,
    /// Only `(v,u)`.
    Backward,
}

impl EdgeClass {
    /// Contribution to `#forward - #backward`.
    pub fn delta(self) -> i64 {
        match self {
            EdgeClass::Neutral => 0,
            EdgeClass::Forward => 1,
            EdgeClass::Backward => -1,
        }
    }
}

impl Digraph {
    pub fn new(n: usize) -> Self {
        Digraph { n, arcs: BTreeSet::new() }
    }

    pub fn from_arcs(n: usize, arcs: impl IntoIterator<Item = (usize, usize)>) -> Self {
        Digraph { n, arcs: arcs.into_iter().collect() }
    }

    pub fn add_arc(&mut self, u: usize, v: usize) {
        self.arcs.insert((u, v));
    }

    pub fn has_arc(&self, u: usize, v: usize) -> bool {
        self.arcs.contains(&(u, v))
    }

    /// Classification of the step `u → v` in the underlying undirected graph,
    /// or `None` when `u` and `v` are not adjacent (or equal).
    pub fn classify(&self, u: usize, v: usize) -> Option<EdgeClass> {
        if u == v {
            return None;
        }
        match (self.has_arc(u, v), self.has_arc(v, u)) {
            (true, true) => Some(EdgeClass::Neutral),
            (true, false) => Some(EdgeClass::Forward),
            (false, true) => Some(EdgeClass::Backward),
            (false, false) => None,
        }
    }

    /// Each undirected edge `{u,v}` once, with `u < v`, classified for `u → v`.
    pub fn underlying_edges(&self) -> Vec<(usize, usize, EdgeClass)> {
        let pairs: BTreeSet<(usize, usize)> = self
            .arcs
            .iter()
            .filter(|(u, v)| u != v)
            .map(|&(u, v)| (u.min(v), u.max(v)))
            .collect();
        pairs
            .into_iter()
            .map(|(u, v)| (u, v, self.classify(u, v).expect("adjacent")))
            .collect()
    }

    /// Adjacency of the underlying undirected graph with step classes.
    pub fn undirected_adjacency(&self) -> Vec<Vec<(usize, EdgeClass)>> {
        let mut adj = vec![Vec::new(); self.n];
        for (u, v, c) in self.underlying_edges() {
            adj[u].push((v, c));
            let back = match c {
                EdgeClass::Neutral => EdgeClass::Neutral,
                EdgeClass::Forward => EdgeClass::Backward,
                EdgeClass::Backward => EdgeClass::Forward,
            };
            adj[v].push((u, back));
        }
        adj
    }

    /// Vertices reachable from `s` along arcs (including `s`).
    pub fn reachable_from(&self, s: usize) -> Vec<bool> {
        let mut succ = vec![Vec::new(); self.n];
        for &(u, v) in &self.arcs {
            succ[u].push(v);
        }
        let mut seen = vec![false; self.n];
        let mut queue = VecDeque::from([s]);
        seen[s] = true;
        while let Some(u) = queue.pop_front() {
            for &v in &succ[u] {
                if !seen[v] {
                    seen[v] = true;
                    queue.push_back(v);
                }
            }
        }
        seen
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn classification() {
        let g = Digraph::from_arcs(2, [(0, 1), (1, 0)]);
        assert_eq!(g.classify(0, 1), Some(EdgeClass::Neutral));
        let g = Digraph::from_arcs(2, [(0, 1)]);
        assert_eq!(g.classify(0, 1), Some(EdgeClass::Forward));
        let g = Digraph::from_arcs(2, [(1, 0)]);
        assert_eq!(g.classify(0, 1), Some(EdgeClass::Backward));
        assert_eq!(g.underlying_edges(), vec![(0, 1, EdgeClass::Backward)]);
    }

    #[test]
    fn reachability() {
        let g = Digraph::from_arcs(4, [(0, 1), (1, 2), (3, 0)]);
        assert_eq!(g.reachable_from(0), vec![true, true, true, false]);
    }
}
