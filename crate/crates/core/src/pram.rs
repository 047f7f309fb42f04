//! Synchronous-round simulation of the hook-and-contract connectivity
//! algorithm over both vertices (s-components) and unordered vertex pairs
//! (g-components).
//!
//! Every parallel step reads the previous arrays and writes a fresh buffer,
//! so the simulation is deterministic and mirrors CREW semantics.

use serde::{Deserialize, Serialize};

use crate::bits::words_for;
use crate::closure::{ceil_log2, ClosureMethod, ClosureResult};
use crate::error::{Error, Result};
use crate::instance::Instance;
use crate::matrix::{GapMatrix, StandardMatrix};

/// Round and processor accounting for one run of [`connect`].
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct PramMetrics {
    pub n: usize,
    /// Outer iterations, counting the final one that changed nothing.
    pub outer_iterations: usize,
    /// Pointer-jumping rounds summed over all outer iterations.
    pub pointer_jump_steps: usize,
    /// One processor per gap tuple: `n⁴`.
    pub logical_processors: u64,
    #[serde(skip)]
    pub jump_rounds_per_iteration: Vec<usize>,
}

#[derive(Clone, Debug, Default)]
pub struct ConnectOptions {
    /// Outer iteration cap; defaults to `8·⌈log₂(n+1)⌉ + 8`.
    pub max_outer: Option<usize>,
    /// Pointer-jumping cap per iteration; defaults to `⌈log₂(n²)⌉ + 1`.
    pub max_jump_rounds: Option<usize>,
}

/// Parent pointers produced by one hooking round.
///
/// Checked to be a forest of rooted trees (every cycle is a self-loop) whose
/// roots are the minimum node of their tree.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Pseudoforest {
    parent: Vec<usize>,
}

impl Pseudoforest {
    /// `nodes` lists the indices that take part; others are ignored.
    pub fn new(parent: Vec<usize>, nodes: &[usize]) -> Result<Self> {
        const FRESH: u8 = 0;
        const OPEN: u8 = 1;
        const DONE: u8 = 2;
        let mut mark = vec![FRESH; parent.len()];
        let mut root = vec![usize::MAX; parent.len()];
        let mut path = Vec::new();
        for &start in nodes {
            let mut x = start;
            while mark[x] == FRESH {
                mark[x] = OPEN;
                path.push(x);
                x = parent[x];
            }
            let r = if mark[x] == OPEN {
                // A fresh cycle, entered at `x`.
                if parent[x] != x {
                    return Err(Error::Pseudoforest(format!("cycle through {x} longer than one")));
                }
                x
            } else {
                root[x]
            };
            for y in path.drain(..) {
                mark[y] = DONE;
                root[y] = r;
            }
        }
        for &x in nodes {
            if root[x] > x {
                return Err(Error::Pseudoforest(format!("root {} is not the minimum of its tree (contains {x})", root[x])));
            }
        }
        Ok(Pseudoforest { parent })
    }

    pub fn parents(&self) -> &[usize] {
        &self.parent
    }
}

/// Component labels and the matrices being grown.
#[derive(Clone, Debug)]
pub struct PramState {
    n: usize,
    x_e: Vec<usize>,
    /// Indexed by normalized pair `min·n + max`; other slots are unused.
    x_g: Vec<usize>,
    pub e_star: StandardMatrix,
    pub gap_star: GapMatrix,
    pub metrics: PramMetrics,
    /// Row mask selecting the diagonal columns `(k,k)` of Υ*.
    diag: Vec<u64>,
}

impl PramState {
    pub fn new(inst: &Instance) -> Self {
        let n = inst.n();
        let mut diag = vec![0u64; words_for(n * n)];
        for k in 0..n {
            let c = k * n + k;
            diag[c / 64] |= 1 << (c % 64);
        }
        PramState {
            n,
            x_e: (0..n).collect(),
            x_g: (0..n * n).collect(),
            e_star: inst.e.clone(),
            gap_star: inst.gap.clone(),
            metrics: PramMetrics {
                n,
                outer_iterations: 0,
                pointer_jump_steps: 0,
                logical_processors: (n as u64).pow(4),
                jump_rounds_per_iteration: Vec::new(),
            },
            diag,
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    #[inline]
    fn norm(&self, i: usize, j: usize) -> usize {
        if i <= j {
            i * self.n + j
        } else {
            j * self.n + i
        }
    }

    pub fn x_e(&self, i: usize) -> usize {
        self.x_e[i]
    }

    /// Representative of the unordered pair `{i,j}`, as `(min, max)`.
    pub fn x_gap(&self, i: usize, j: usize) -> (usize, usize) {
        let r = self.x_g[self.norm(i, j)];
        (r / self.n, r % self.n)
    }

    fn pair_nodes(&self) -> Vec<usize> {
        let n = self.n;
        (0..n).flat_map(|i| (i..n).map(move |j| i * n + j)).collect()
    }

    /// Smallest foreign s-component label adjacent to `i`, through E* or
    /// through a closed gap `Υ*[i,(k,k),j]`; `X_E(i)` if there is none.
    pub fn standard_hook(&self, i: usize) -> usize {
        let own = self.x_e[i];
        let mut best = usize::MAX;
        for j in self.e_star.bits().row_ones(i) {
            let x = self.x_e[j];
            if x != own {
                best = best.min(x);
            }
        }
        let gb = self.gap_star.bits();
        for j in 0..self.n {
            let x = self.x_e[j];
            if x == own || x >= best {
                continue;
            }
            if gb.row(i * self.n + j).iter().zip(&self.diag).any(|(r, d)| r & d != 0) {
                best = x;
            }
        }
        if best == usize::MAX {
            own
        } else {
            best
        }
    }

    /// Smallest foreign g-component label adjacent to `{i,j}`, via Υ* edges or
    /// by replacing one endpoint with an E*-neighbor. Both orientations of the
    /// pair are examined. Returns a normalized pair index.
    pub fn gap_hook(&self, i: usize, j: usize) -> usize {
        let n = self.n;
        let own = self.x_g[self.norm(i, j)];
        let mut best = usize::MAX;
        let gb = self.gap_star.bits();
        for (p, q) in [(i, j), (j, i)] {
            for col in gb.row_ones(p * n + q) {
                let x = self.x_g[self.norm(col / n, col % n)];
                if x != own {
                    best = best.min(x);
                }
            }
            for k in self.e_star.bits().row_ones(p) {
                let x = self.x_g[self.norm(k, q)];
                if x != own {
                    best = best.min(x);
                }
            }
        }
        if best == usize::MAX {
            own
        } else {
            best
        }
    }

    /// One outer iteration; returns whether anything changed.
    pub fn iterate(&mut self, max_jump_rounds: usize) -> Result<bool> {
        let vertex_nodes: Vec<usize> = (0..self.n).collect();
        let pair_nodes = self.pair_nodes();

        let hooks_e: Vec<usize> = (0..self.n).map(|i| self.standard_hook(i)).collect();
        let mut hooks_g = self.x_g.clone();
        for &p in &pair_nodes {
            hooks_g[p] = self.gap_hook(p / self.n, p % self.n);
        }

        let mut temp_e = min_merge(&self.x_e, &hooks_e, &vertex_nodes);
        let mut temp_g = min_merge(&self.x_g, &hooks_g, &pair_nodes);
        root_two_cycles(&mut temp_e, &vertex_nodes);
        root_two_cycles(&mut temp_g, &pair_nodes);
        Pseudoforest::new(temp_e.clone(), &vertex_nodes)?;
        Pseudoforest::new(temp_g.clone(), &pair_nodes)?;

        let old_e = std::mem::replace(&mut self.x_e, temp_e.clone());
        let old_g = std::mem::replace(&mut self.x_g, temp_g.clone());

        let re = pointer_jump(&mut temp_e, &vertex_nodes, max_jump_rounds)?;
        let rg = pointer_jump(&mut temp_g, &pair_nodes, max_jump_rounds)?;
        let rounds = re.max(rg);
        self.metrics.pointer_jump_steps += rounds;
        self.metrics.jump_rounds_per_iteration.push(rounds);

        let x_e: Vec<usize> = vertex_nodes.iter().map(|&i| temp_e[i].min(self.x_e[temp_e[i]])).collect();
        let mut x_g = self.x_g.clone();
        for &p in &pair_nodes {
            x_g[p] = temp_g[p].min(self.x_g[temp_g[p]]);
        }
        self.x_e = x_e;
        self.x_g = x_g;

        let mut changed = self.x_e != old_e || self.x_g != old_g;
        changed |= self.fill_from_labels();
        Ok(changed)
    }

    /// Sets `E*[i,j]` for co-labelled vertices and `Υ*[i,(k,l),j]` for
    /// co-labelled pairs. Returns whether any bit was new.
    fn fill_from_labels(&mut self) -> bool {
        let n = self.n;
        let mut e = StandardMatrix::new(n);
        let mut by_label: Vec<Vec<usize>> = vec![Vec::new(); n];
        for i in 0..n {
            by_label[self.x_e[i]].push(i);
        }
        for class in &by_label {
            for &i in class {
                for &j in class {
                    e.set(i, j);
                }
            }
        }
        let mut groups: Vec<Vec<usize>> = vec![Vec::new(); n * n];
        for i in 0..n {
            for j in 0..n {
                groups[self.x_g[self.norm(i, j)]].push(i * n + j);
            }
        }
        let mut g = GapMatrix::new(n);
        for group in groups.iter().filter(|g| !g.is_empty()) {
            let mut mask = vec![0u64; words_for(n * n)];
            for &c in group {
                mask[c / 64] |= 1 << (c % 64);
            }
            for &r in group {
                for (w, m) in g.bits.row_mut(r).iter_mut().zip(&mask) {
                    *w |= m;
                }
            }
        }
        let a = self.e_star.or_assign(&e);
        let b = self.gap_star.or_assign(&g);
        a || b
    }
}

/// Steps 7–8 of the hooking round: each representative takes the least
/// hook target proposed by its members, or keeps its label.
fn min_merge(x: &[usize], hooks: &[usize], nodes: &[usize]) -> Vec<usize> {
    let mut best = vec![usize::MAX; x.len()];
    for &j in nodes {
        let r = x[j];
        if hooks[j] != r {
            best[r] = best[r].min(hooks[j]);
        }
    }
    let mut out = x.to_vec();
    for &i in nodes {
        if best[i] != usize::MAX {
            out[i] = best[i];
        }
    }
    out
}

/// Min-hooking over a symmetric neighbor relation only closes 2-cycles;
/// the smaller node of each becomes a root.
fn root_two_cycles(parent: &mut [usize], nodes: &[usize]) {
    let snapshot = parent.to_vec();
    for &i in nodes {
        let p = snapshot[i];
        if p != i && snapshot[p] == i && i < p {
            parent[i] = i;
        }
    }
}

/// Pointer doubling until every node points at its root; returns the number
/// of rounds that changed something.
pub fn pointer_jump(parent: &mut [usize], nodes: &[usize], max_rounds: usize) -> Result<usize> {
    let mut rounds = 0;
    loop {
        let next: Vec<usize> = nodes.iter().map(|&i| parent[parent[i]]).collect();
        if nodes.iter().zip(&next).all(|(&i, &v)| parent[i] == v) {
            return Ok(rounds);
        }
        if rounds == max_rounds {
            return Err(Error::Pseudoforest(format!("trees not collapsed after {max_rounds} jumping rounds")));
        }
        for (&i, v) in nodes.iter().zip(next) {
            parent[i] = v;
        }
        rounds += 1;
    }
}

pub fn default_max_outer(n: usize) -> usize {
    8 * ceil_log2(n + 1) + 8
}

/// `⌈log₂(n²)⌉ + 1`.
pub fn default_max_jump_rounds(n: usize) -> usize {
    ceil_log2(n * n) + 1
}

pub fn connect(inst: &Instance) -> Result<(ClosureResult, PramMetrics)> {
    connect_with(inst, &ConnectOptions::default())
}

/// Runs hook-and-contract to a fixpoint. The result coincides with the
/// SymmetricSquare closure, so it is reported under that method.
pub fn connect_with(inst: &Instance, opts: &ConnectOptions) -> Result<(ClosureResult, PramMetrics)> {
    if !inst.variant.gap_symmetric() {
        return Err(Error::IncompatibleMethod { method: "connect".into(), variant: inst.variant.to_string() });
    }
    let n = inst.n();
    let max_outer = opts.max_outer.unwrap_or_else(|| default_max_outer(n));
    let max_jump = opts.max_jump_rounds.unwrap_or_else(|| default_max_jump_rounds(n));
    let mut state = PramState::new(inst);
    for it in 1..=max_outer {
        let changed = state.iterate(max_jump)?;
        state.metrics.outer_iterations = it;
        if !changed {
            let result = ClosureResult {
                e_star: state.e_star,
                gap_star: state.gap_star,
                iterations: it,
                method: ClosureMethod::SymmetricSquare,
            };
            return Ok((result, state.metrics));
        }
    }
    Err(Error::OuterBudgetExceeded(max_outer))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::closure::transitive_closure;
    use crate::instance::{initialize, EdgeLabel, LabeledGraph, ProblemVariant};
    use crate::reductions::gen_random;
    use proptest::prelude::*;

    fn eps_pair() -> Instance {
        let mut g = LabeledGraph::with_loops(2, 1, false);
        g.add_symmetric_edge(0, 1, EdgeLabel::Eps);
        initialize(&g, ProblemVariant::OneSgsLogCfl).unwrap()
    }

    #[test]
    fn isolated_vertex_hooks_to_itself() {
        let g = LabeledGraph::with_loops(3, 1, false);
        let inst = initialize(&g, ProblemVariant::OneSgsLogCfl).unwrap();
        let st = PramState::new(&inst);
        assert_eq!(st.standard_hook(2), 2);
        assert_eq!(st.gap_hook(0, 2), st.norm(0, 2));
    }

    #[test]
    fn standard_hook_takes_the_minimum_neighbor() {
        let st = PramState::new(&eps_pair());
        assert_eq!(st.standard_hook(1), 0);
        assert_eq!(st.standard_hook(0), 1);
    }

    #[test]
    fn closed_gap_hooks_endpoints_together() {
        // 0 -push-> 2 -pop-> 3 with the mirrored edges: Υ[0,(2,2),3] holds.
        let mut g = LabeledGraph::with_loops(4, 1, false);
        g.add_symmetric_edge(0, 2, EdgeLabel::Push);
        g.add_symmetric_edge(2, 3, EdgeLabel::Pop);
        let inst = initialize(&g, ProblemVariant::OneSgsLogCfl).unwrap();
        assert!(inst.gap.get(0, 2, 2, 3));
        let st = PramState::new(&inst);
        assert_eq!(st.standard_hook(3), 0);
    }

    #[test]
    fn gap_hook_replaces_an_endpoint_along_e_star() {
        let mut g = LabeledGraph::with_loops(5, 1, false);
        g.add_symmetric_edge(0, 4, EdgeLabel::Eps);
        let inst = initialize(&g, ProblemVariant::OneSgsLogCfl).unwrap();
        let st = PramState::new(&inst);
        // Pair {4,3} sees {0,3} through E*[4,0].
        assert_eq!(st.gap_hook(4, 3), st.norm(0, 3));
    }

    #[test]
    fn gap_init_entry_joins_its_two_pairs() {
        let mut g = LabeledGraph::with_loops(3, 1, false);
        g.add_symmetric_edge(0, 1, EdgeLabel::Push);
        g.add_symmetric_edge(1, 2, EdgeLabel::Pop);
        let inst = initialize(&g, ProblemVariant::OneSgsLogCfl).unwrap();
        let (res, _) = connect(&inst).unwrap();
        assert!(res.gap_star.get(0, 1, 1, 2));
        let sym = transitive_closure(&inst, ClosureMethod::SymmetricSquare, None).unwrap();
        assert_eq!(res.gap_star, sym.gap_star);
    }

    #[test]
    fn single_eps_edge() {
        let (res, m) = connect(&eps_pair()).unwrap();
        assert!(res.e_star.get(0, 1));
        assert_eq!(m.logical_processors, 16);
        assert!(m.outer_iterations <= 2);
    }

    #[test]
    fn chain_of_eight_collapses_in_three_rounds() {
        let mut parent: Vec<usize> = (0..9).map(|i: usize| i.saturating_sub(1)).collect();
        parent[0] = 0;
        let nodes: Vec<usize> = (0..9).collect();
        assert_eq!(pointer_jump(&mut parent, &nodes, 10).unwrap(), 3);
        assert!(parent.iter().all(|&p| p == 0));
    }

    #[test]
    fn star_needs_no_rounds() {
        let mut parent = vec![0, 0, 0, 0];
        assert_eq!(pointer_jump(&mut parent, &[0, 1, 2, 3], 5).unwrap(), 0);
    }

    #[test]
    fn jump_matches_traversal_on_random_forest() {
        let mut x = 0x9e3779b97f4a7c15u64;
        for _ in 0..50 {
            let mut parent = vec![0usize; 16];
            for (i, p) in parent.iter_mut().enumerate() {
                x ^= x << 13;
                x ^= x >> 7;
                x ^= x << 17;
                *p = if i == 0 || x % 4 == 0 { i } else { (x as usize) % i };
            }
            let nodes: Vec<usize> = (0..16).collect();
            let forest = Pseudoforest::new(parent.clone(), &nodes).unwrap();
            let mut jumped = forest.parents().to_vec();
            pointer_jump(&mut jumped, &nodes, default_max_jump_rounds(4)).unwrap();
            for i in 0..16 {
                let mut r = i;
                while parent[r] != r {
                    r = parent[r];
                }
                assert_eq!(jumped[i], r);
            }
        }
    }

    #[test]
    fn pseudoforest_rejects_long_cycles_and_non_minimal_roots() {
        assert!(Pseudoforest::new(vec![1, 0], &[0, 1]).is_err());
        assert!(Pseudoforest::new(vec![1, 1], &[0, 1]).is_err());
        assert!(Pseudoforest::new(vec![0, 0], &[0, 1]).is_ok());
    }

    #[test]
    fn rejects_non_symmetric_variants() {
        let g = LabeledGraph::with_loops(2, 2, true);
        let inst = initialize(&g, ProblemVariant::LogCfl).unwrap();
        assert!(matches!(connect(&inst), Err(Error::IncompatibleMethod { .. })));
    }

    #[test]
    fn metrics_serialize_in_camel_case() {
        let (_, m) = connect(&eps_pair()).unwrap();
        let v = serde_json::to_value(&m).unwrap();
        for key in ["n", "outerIterations", "pointerJumpSteps", "logicalProcessors"] {
            assert!(v.get(key).is_some(), "{key}");
        }
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(60))]
        #[test]
        fn agrees_with_symmetric_square(seed in any::<u64>(), n in 1usize..8, one in any::<bool>(), density in 0.05f64..0.5) {
            let (variant, k) = if one { (ProblemVariant::OneSgsLogCfl, 1) } else { (ProblemVariant::SgsLogCfl, 2) };
            let inst = gen_random(n, k, variant, density, seed).unwrap();
            let (res, m) = connect(&inst).unwrap();
            let sym = transitive_closure(&inst, ClosureMethod::SymmetricSquare, None).unwrap();
            prop_assert_eq!(&res.e_star, &sym.e_star);
            prop_assert_eq!(&res.gap_star, &sym.gap_star);
            prop_assert!(m.outer_iterations <= 4 * ceil_log2(n + 1) + 4);
            prop_assert!(m.jump_rounds_per_iteration.iter().all(|&r| r <= default_max_jump_rounds(n)));
        }
    }
}
