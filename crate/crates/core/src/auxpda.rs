//! Auxiliary pushdown automata at desk scale: the machine model, inverse
//! transitions, symmetric closure, the surface-configuration graph and a
//! direct breadth-first simulator.
//!
//! Conventions:
//! - The input tape holds `<`, the word, `>`; the head starts on `<`.
//! - The work tape (if any) starts filled with the first work symbol.
//! - The stack starts as `$`. Push triples are written `[a, 1, a, b]`
//!   (top `a`, push `b`), pops `[a, b, -1, a]` (pop `b`, revealing `a`) and
//!   stack-neutral moves `[a, 0, a]`.
//! - Tape triples are `[a, 0, b]` (read `a`, write `b`, stay) or
//!   `[a, b, ±1, c, d]`, which peek at the neighbor in the direction of
//!   motion, rewrite both cells and move onto the neighbor.
//! - Acceptance means reaching a final state with the stack back at `$`.

use std::collections::{HashMap, HashSet, VecDeque};

use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::error::{Error, Result};
use crate::instance::{initialize_capped, EdgeLabel, Instance, LabeledGraph, ProblemVariant};
use crate::reductions::REDUCTION_MAX_N;

pub const BOTTOM: &str = "$";
pub const LEFT_END: &str = "<";
pub const RIGHT_END: &str = ">";

/// Default cap on the surface-configuration space enumerated by [`config_graph`].
pub const DEFAULT_CONFIG_BUDGET: u128 = 1 << 20;

/// A stack or tape triple `(before, dir, after)`.
///
/// In JSON it is one flat array: the `before` symbols, the direction as an
/// integer, then the `after` symbols.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "Vec<Value>", into = "Vec<Value>")]
pub struct Triple {
    pub before: Vec<String>,
    pub dir: i8,
    pub after: Vec<String>,
}

impl Triple {
    pub fn new(before: &[&str], dir: i8, after: &[&str]) -> Self {
        Triple {
            before: before.iter().map(|s| s.to_string()).collect(),
            dir,
            after: after.iter().map(|s| s.to_string()).collect(),
        }
    }

    /// `(a,D,b) ↦ (b,−D,a)`.
    pub fn inverse(&self) -> Triple {
        Triple { before: self.after.clone(), dir: -self.dir, after: self.before.clone() }
    }
}

impl TryFrom<Vec<Value>> for Triple {
    type Error = String;

    fn try_from(items: Vec<Value>) -> std::result::Result<Self, String> {
        let pos = items
            .iter()
            .position(Value::is_number)
            .ok_or_else(|| "triple has no direction".to_string())?;
        let dir = items[pos].as_i64().filter(|d| (-1..=1).contains(d)).ok_or("direction must be -1, 0 or 1")? as i8;
        let sym = |v: &Value| v.as_str().map(str::to_string).ok_or_else(|| format!("expected a symbol, got {v}"));
        let before = items[..pos].iter().map(sym).collect::<std::result::Result<_, _>>()?;
        let after = items[pos + 1..].iter().map(sym).collect::<std::result::Result<_, _>>()?;
        Ok(Triple { before, dir, after })
    }
}

impl From<Triple> for Vec<Value> {
    fn from(t: Triple) -> Self {
        let mut v: Vec<Value> = t.before.into_iter().map(Value::String).collect();
        v.push(Value::from(t.dir));
        v.extend(t.after.into_iter().map(Value::String));
        v
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Transition {
    pub from: String,
    pub to: String,
    pub stack: Triple,
    /// Input tape triple, then the work tape triple if the machine has one.
    pub tapes: Vec<Triple>,
}

impl Transition {
    /// `δ⁻¹`: endpoints swapped and every triple inverted.
    pub fn inverse(&self) -> Transition {
        Transition {
            from: self.to.clone(),
            to: self.from.clone(),
            stack: self.stack.inverse(),
            tapes: self.tapes.iter().map(Triple::inverse).collect(),
        }
    }
}

pub fn inverse_transition(t: &Transition) -> Transition {
    t.inverse()
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase", deny_unknown_fields)]
pub struct Machine {
    pub states: Vec<String>,
    pub initial: String,
    pub finals: Vec<String>,
    pub input_alphabet: Vec<String>,
    pub stack_alphabet: Vec<String>,
    #[serde(default)]
    pub work_alphabet: Vec<String>,
    #[serde(default)]
    pub work_tape_length: usize,
    pub transitions: Vec<Transition>,
}

impl Machine {
    pub fn from_json(text: &str) -> Result<Machine> {
        let m: Machine = serde_json::from_str(text).map_err(|e| Error::Machine(e.to_string()))?;
        m.compile()?;
        Ok(m)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("machine serializes")
    }

    /// Whether `δ⁻¹ ∈ Δ` for every `δ ∈ Δ`.
    pub fn is_symmetric(&self) -> bool {
        let set: HashSet<&Transition> = self.transitions.iter().collect();
        self.transitions.iter().all(|t| set.contains(&t.inverse()))
    }

    fn compile(&self) -> Result<Compiled> {
        Compiled::new(self)
    }
}

/// `Δ ∪ Δ⁻¹`, keeping the original order and appending missing inverses.
pub fn symmetric_closure(m: &Machine) -> Machine {
    let mut out = m.clone();
    let mut seen: HashSet<Transition> = m.transitions.iter().cloned().collect();
    for t in &m.transitions {
        let inv = t.inverse();
        if seen.insert(inv.clone()) {
            out.transitions.push(inv);
        }
    }
    out
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum StackOp {
    Keep(u16),
    /// Top, pushed symbol.
    Push(u16, u16),
    /// Revealed symbol, popped top.
    Pop(u16, u16),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum TapeOp {
    Stay { read: u16, write: u16 },
    Move { dir: i8, read: [u16; 2], write: [u16; 2] },
}

impl TapeOp {
    /// Applies the move to `tape` with the head at `head`; returns the new head.
    fn apply(&self, tape: &mut [u16], head: usize) -> Option<usize> {
        match *self {
            TapeOp::Stay { read, write } => {
                if tape[head] != read {
                    return None;
                }
                tape[head] = write;
                Some(head)
            }
            TapeOp::Move { dir, read, write } => {
                let (lo, next) = if dir > 0 {
                    (head, head + 1)
                } else {
                    (head.checked_sub(1)?, head - 1)
                };
                if lo + 1 >= tape.len() || tape[lo] != read[0] || tape[lo + 1] != read[1] {
                    return None;
                }
                tape[lo] = write[0];
                tape[lo + 1] = write[1];
                Some(next)
            }
        }
    }

    /// Like `apply` but without writing; for the read-only input tape.
    fn peek(&self, tape: &[u16], head: usize) -> Option<usize> {
        match *self {
            TapeOp::Stay { read, .. } => (tape[head] == read).then_some(head),
            TapeOp::Move { dir, read, .. } => {
                let lo = if dir > 0 { head } else { head.checked_sub(1)? };
                (lo + 1 < tape.len() && tape[lo] == read[0] && tape[lo + 1] == read[1])
                    .then_some(if dir > 0 { head + 1 } else { head - 1 })
            }
        }
    }
}

#[derive(Clone, Debug)]
struct CompiledTransition {
    from: usize,
    to: usize,
    stack: StackOp,
    input: TapeOp,
    work: Option<TapeOp>,
}

#[derive(Clone, Debug)]
struct Compiled {
    initial: usize,
    finals: Vec<bool>,
    /// `<`, the input symbols, `>`.
    input_symbols: Vec<String>,
    bottom: u16,
    stack_size: usize,
    work_size: usize,
    work_len: usize,
    by_state: Vec<Vec<CompiledTransition>>,
}

fn index_of(list: &[String], sym: &str, what: &str) -> Result<u16> {
    list.iter()
        .position(|s| s == sym)
        .map(|i| i as u16)
        .ok_or_else(|| Error::Machine(format!("unknown {what} `{sym}`")))
}

fn check_unique(list: &[String], what: &str) -> Result<()> {
    let set: HashSet<&String> = list.iter().collect();
    if set.len() != list.len() {
        return Err(Error::Machine(format!("duplicate {what}")));
    }
    Ok(())
}

fn compile_tape(t: &Triple, alphabet: &[String], what: &str, read_only: bool) -> Result<TapeOp> {
    let idx = |s: &String| index_of(alphabet, s, what);
    let op = match (t.dir, t.before.as_slice(), t.after.as_slice()) {
        (0, [a], [b]) => TapeOp::Stay { read: idx(a)?, write: idx(b)? },
        (d, [a, b], [c, e]) if d != 0 => TapeOp::Move { dir: d, read: [idx(a)?, idx(b)?], write: [idx(c)?, idx(e)?] },
        _ => return Err(Error::Machine(format!("malformed {what} triple {:?}", t))),
    };
    if read_only {
        let ok = match op {
            TapeOp::Stay { read, write } => read == write,
            TapeOp::Move { read, write, .. } => read == write,
        };
        if !ok {
            return Err(Error::Machine(format!("input triple {:?} writes to the read-only tape", t)));
        }
    }
    Ok(op)
}

impl Compiled {
    fn new(m: &Machine) -> Result<Compiled> {
        if m.states.is_empty() {
            return Err(Error::Machine("no states".into()));
        }
        check_unique(&m.states, "state")?;
        check_unique(&m.input_alphabet, "input symbol")?;
        check_unique(&m.stack_alphabet, "stack symbol")?;
        check_unique(&m.work_alphabet, "work symbol")?;
        for s in &m.input_alphabet {
            if s.chars().count() != 1 || s == LEFT_END || s == RIGHT_END {
                return Err(Error::Machine(format!("input symbol `{s}` must be one character other than `<` and `>`")));
            }
        }
        if m.stack_alphabet.len() > u16::MAX as usize || m.work_alphabet.len() > u16::MAX as usize {
            return Err(Error::Machine("alphabet too large".into()));
        }
        let bottom = index_of(&m.stack_alphabet, BOTTOM, "stack symbol")?;
        if m.work_tape_length > 0 && m.work_alphabet.is_empty() {
            return Err(Error::Machine("a work tape needs a nonempty work alphabet".into()));
        }
        let state = |s: &String| index_of(&m.states, s, "state").map(usize::from);
        let initial = state(&m.initial)?;
        let mut finals = vec![false; m.states.len()];
        for f in &m.finals {
            finals[state(f)?] = true;
        }
        let mut input_symbols = vec![LEFT_END.to_string()];
        input_symbols.extend(m.input_alphabet.iter().cloned());
        input_symbols.push(RIGHT_END.to_string());

        let tapes = 1 + usize::from(m.work_tape_length > 0);
        let mut by_state = vec![Vec::new(); m.states.len()];
        for t in &m.transitions {
            if t.tapes.len() != tapes {
                return Err(Error::Machine(format!("transition {}→{} has {} tape triples, expected {tapes}", t.from, t.to, t.tapes.len())));
            }
            let sym = |s: &String| index_of(&m.stack_alphabet, s, "stack symbol");
            let st = &t.stack;
            let stack = match (st.dir, st.before.as_slice(), st.after.as_slice()) {
                (0, [a], [b]) if a == b => StackOp::Keep(sym(a)?),
                (1, [a], [a2, b]) if a == a2 => StackOp::Push(sym(a)?, sym(b)?),
                (-1, [a, b], [a2]) if a == a2 => StackOp::Pop(sym(a)?, sym(b)?),
                _ => {
                    return Err(Error::Machine(format!(
                        "stack triple {:?} must be [a,0,a], [a,1,a,b] or [a,b,-1,a]; rewriting the top is not supported",
                        st
                    )))
                }
            };
            match stack {
                StackOp::Push(_, b) | StackOp::Pop(_, b) if b == bottom => {
                    return Err(Error::Machine("the bottom marker can be neither pushed nor popped".into()))
                }
                _ => {}
            }
            let input = compile_tape(&t.tapes[0], &input_symbols, "input symbol", true)?;
            let work = match t.tapes.get(1) {
                Some(w) => Some(compile_tape(w, &m.work_alphabet, "work symbol", false)?),
                None => None,
            };
            let from = state(&t.from)?;
            by_state[from].push(CompiledTransition { from, to: state(&t.to)?, stack, input, work });
        }
        Ok(Compiled {
            initial,
            finals,
            input_symbols,
            bottom,
            stack_size: m.stack_alphabet.len(),
            work_size: m.work_alphabet.len().max(1),
            work_len: m.work_tape_length,
            by_state,
        })
    }

    fn encode_input(&self, input: &str) -> Result<Vec<u16>> {
        let mut out = vec![0u16];
        for ch in input.chars() {
            let s = ch.to_string();
            let i = self.input_symbols[1..self.input_symbols.len() - 1]
                .iter()
                .position(|x| *x == s)
                .ok_or_else(|| Error::Machine(format!("input symbol `{ch}` is not in the input alphabet")))?;
            out.push(i as u16 + 1);
        }
        out.push(self.input_symbols.len() as u16 - 1);
        Ok(out)
    }

    fn start(&self) -> SurfaceConfig {
        SurfaceConfig {
            state: self.initial,
            input_pos: 0,
            work: vec![0; self.work_len],
            work_head: 0,
            top: self.bottom,
        }
    }

    /// Successors of a surface configuration with the stack effect of each move.
    fn moves(&self, word: &[u16], c: &SurfaceConfig) -> Vec<(SurfaceConfig, StackEffect)> {
        let mut out = Vec::new();
        for t in &self.by_state[c.state] {
            let (effect, top) = match t.stack {
                StackOp::Keep(a) if a == c.top => (StackEffect::Keep, a),
                StackOp::Push(a, b) if a == c.top => (StackEffect::Push(b), b),
                StackOp::Pop(a, b) if b == c.top => (StackEffect::Pop(a), a),
                _ => continue,
            };
            let Some(input_pos) = t.input.peek(word, c.input_pos) else { continue };
            let mut work = c.work.clone();
            let work_head = match &t.work {
                Some(op) => match op.apply(&mut work, c.work_head) {
                    Some(h) => h,
                    None => continue,
                },
                None => c.work_head,
            };
            out.push((SurfaceConfig { state: t.to, input_pos, work, work_head, top }, effect));
        }
        debug_assert!(self.by_state[c.state].iter().all(|t| t.from == c.state));
        out
    }

    fn space_size(&self, input_len: usize) -> u128 {
        let mut size = self.by_state.len() as u128 * (input_len as u128 + 2) * self.stack_size as u128;
        for _ in 0..self.work_len {
            size = size.saturating_mul(self.work_size as u128);
        }
        size.saturating_mul(self.work_len.max(1) as u128)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum StackEffect {
    Keep,
    Push(u16),
    /// Pop the top, which must reveal this symbol.
    Pop(u16),
}

/// State, input head, work tape with its head, and the top stack symbol.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SurfaceConfig {
    pub state: usize,
    pub input_pos: usize,
    pub work: Vec<u16>,
    pub work_head: usize,
    pub top: u16,
}

#[derive(Clone, Debug)]
pub struct ConfigGraphOptions {
    /// Cap on `|Q|·(|w|+2)·|Γ|^len·len·|Σ_α|`.
    pub budget: u128,
    /// Keep only configurations on some start-to-halt walk.
    pub prune: bool,
    pub max_n: usize,
}

impl Default for ConfigGraphOptions {
    fn default() -> Self {
        ConfigGraphOptions { budget: DEFAULT_CONFIG_BUDGET, prune: true, max_n: REDUCTION_MAX_N }
    }
}

/// A configuration graph together with its start and halt vertices.
#[derive(Clone, Debug)]
pub struct ConfigGraph {
    pub instance: Instance,
    pub s: usize,
    pub t: usize,
    /// Surface configuration of every vertex except the halt vertex `t`.
    pub configs: Vec<SurfaceConfig>,
}

pub fn config_graph(m: &Machine, input: &str) -> Result<ConfigGraph> {
    config_graph_with(m, input, &ConfigGraphOptions::default())
}

/// Builds the labeled graph whose vertices are surface configurations
/// reachable from the start, plus one halt vertex that every accepting
/// configuration (final state over an empty stack) joins by an ε edge.
///
/// Vertex labels are top stack symbols; edges are labeled by the stack
/// effect of the move. Symmetric machines give undirected instances of the
/// symmetric variant, others directed instances of the general one.
pub fn config_graph_with(m: &Machine, input: &str, opts: &ConfigGraphOptions) -> Result<ConfigGraph> {
    let c = m.compile()?;
    let word = c.encode_input(input)?;
    let size = c.space_size(word.len() - 2);
    if size > opts.budget {
        return Err(Error::ConfigBudget(size));
    }
    let symmetric = m.is_symmetric();

    let start = c.start();
    let mut index: HashMap<SurfaceConfig, usize> = HashMap::from([(start.clone(), 0)]);
    let mut configs = vec![start];
    let mut edges: HashMap<(usize, usize), EdgeLabel> = HashMap::new();
    let mut i = 0;
    while i < configs.len() {
        let cur = configs[i].clone();
        for (next, effect) in c.moves(&word, &cur) {
            let j = *index.entry(next.clone()).or_insert_with(|| {
                configs.push(next);
                configs.len() - 1
            });
            let label = match effect {
                StackEffect::Keep => EdgeLabel::Eps,
                StackEffect::Push(_) => EdgeLabel::Push,
                StackEffect::Pop(_) => EdgeLabel::Pop,
            };
            if let Some(&old) = edges.get(&(i, j)) {
                if old != label {
                    return Err(Error::Machine(format!("configurations {i} and {j} are joined by both {old} and {label} moves")));
                }
            }
            edges.insert((i, j), label);
        }
        i += 1;
    }
    let halt = configs.len();
    for (v, cfg) in configs.iter().enumerate() {
        if c.finals[cfg.state] && cfg.top == c.bottom {
            edges.insert((v, halt), EdgeLabel::Eps);
            if symmetric {
                edges.insert((halt, v), EdgeLabel::Eps);
            }
        }
    }

    let mut keep: Vec<usize> = (0..=halt).collect();
    if opts.prune {
        let mut fwd = vec![Vec::new(); halt + 1];
        let mut bwd = vec![Vec::new(); halt + 1];
        for &(u, v) in edges.keys() {
            fwd[u].push(v);
            bwd[v].push(u);
        }
        let (a, b) = (reach(&fwd, 0), reach(&bwd, halt));
        keep.retain(|&v| (a[v] && b[v]) || v == 0 || v == halt);
    }
    let mut map = vec![usize::MAX; halt + 1];
    for (new, &old) in keep.iter().enumerate() {
        map[old] = new;
    }
    if keep.len() > opts.max_n {
        return Err(Error::TooLarge { n: keep.len(), cap: opts.max_n });
    }

    let k = c.stack_size.max(2) as u32;
    let mut g = LabeledGraph::new(keep.len(), k, !symmetric);
    for (new, &old) in keep.iter().enumerate() {
        let top = if old == halt { c.bottom } else { configs[old].top };
        g.set_label(new, top as u32 + 1);
    }
    let mut sorted: Vec<_> = edges.into_iter().collect();
    sorted.sort();
    for ((u, v), label) in sorted {
        if map[u] != usize::MAX && map[v] != usize::MAX {
            g.add_edge(map[u], map[v], label);
        }
    }
    g.add_reflexive_loops();
    let variant = if symmetric { ProblemVariant::SLogCfl } else { ProblemVariant::LogCfl };
    let instance = initialize_capped(&g, variant, opts.max_n)?;
    let kept_configs = keep.iter().filter(|&&v| v != halt).map(|&v| configs[v].clone()).collect();
    Ok(ConfigGraph { instance, s: map[0], t: map[halt], configs: kept_configs })
}

fn reach(adj: &[Vec<usize>], from: usize) -> Vec<bool> {
    let mut seen = vec![false; adj.len()];
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
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase", tag = "result")]
pub enum SimOutcome {
    Accept { steps: usize },
    Reject,
    /// Neither accepted nor exhausted within the step and stack bounds.
    Budget,
}

/// Breadth-first search over full configurations (surface plus the whole
/// stack), independent of the graph construction.
pub fn direct_simulate(m: &Machine, input: &str, step_bound: usize, stack_bound: usize) -> Result<SimOutcome> {
    if step_bound == 0 || stack_bound == 0 {
        return Err(Error::InvalidParameter("simulation bounds must be positive".into()));
    }
    let c = m.compile()?;
    let word = c.encode_input(input)?;
    let accepting = |cfg: &SurfaceConfig, stack: &[u16]| c.finals[cfg.state] && stack.len() == 1;

    let start = (c.start(), vec![c.bottom]);
    if accepting(&start.0, &start.1) {
        return Ok(SimOutcome::Accept { steps: 0 });
    }
    let mut seen: HashSet<(SurfaceConfig, Vec<u16>)> = HashSet::from([start.clone()]);
    let mut frontier = vec![start];
    let mut truncated = false;
    for step in 1..=step_bound {
        let mut next_frontier = Vec::new();
        for (cfg, stack) in &frontier {
            for (next, effect) in c.moves(&word, cfg) {
                let mut st = stack.clone();
                match effect {
                    StackEffect::Keep => {}
                    StackEffect::Push(b) => {
                        if st.len() >= stack_bound {
                            truncated = true;
                            continue;
                        }
                        st.push(b);
                    }
                    StackEffect::Pop(a) => {
                        if st.len() < 2 || st[st.len() - 2] != a {
                            continue;
                        }
                        st.pop();
                    }
                }
                if accepting(&next, &st) {
                    return Ok(SimOutcome::Accept { steps: step });
                }
                let key = (next, st);
                if seen.insert(key.clone()) {
                    next_frontier.push(key);
                }
            }
        }
        if next_frontier.is_empty() {
            return Ok(if truncated { SimOutcome::Budget } else { SimOutcome::Reject });
        }
        frontier = next_frontier;
    }
    Ok(SimOutcome::Budget)
}

fn tr(from: &str, to: &str, stack: Triple, tapes: Vec<Triple>) -> Transition {
    Transition { from: from.into(), to: to.into(), stack, tapes }
}

fn strings(xs: &[&str]) -> Vec<String> {
    xs.iter().map(|s| s.to_string()).collect()
}

/// Deterministic one-way PDA for balanced parentheses over `(` and `)`.
pub fn dyck_machine() -> Machine {
    let right = ["(", ")", ">"];
    let mut ts = Vec::new();
    for c in ["(", ")", ">"] {
        ts.push(tr("q", "q", Triple::new(&["$"], 0, &["$"]), vec![Triple::new(&["<", c], 1, &["<", c])]));
    }
    for c in right {
        for a in ["$", "X"] {
            ts.push(tr("q", "q", Triple::new(&[a], 1, &[a, "X"]), vec![Triple::new(&["(", c], 1, &["(", c])]));
            ts.push(tr("q", "q", Triple::new(&[a, "X"], -1, &[a]), vec![Triple::new(&[")", c], 1, &[")", c])]));
        }
    }
    ts.push(tr("q", "f", Triple::new(&["$"], 0, &["$"]), vec![Triple::new(&[">"], 0, &[">"])]));
    Machine {
        states: strings(&["q", "f"]),
        initial: "q".into(),
        finals: strings(&["f"]),
        input_alphabet: strings(&["(", ")"]),
        stack_alphabet: strings(&["$", "X"]),
        work_alphabet: Vec::new(),
        work_tape_length: 0,
        transitions: ts,
    }
}

/// Symmetric closure of a one-way machine for `aⁿbⁿ` over input symbols
/// `a`, `b`. A one-cell work tape records whether a `b` has been read.
pub fn anbn_symmetric_machine() -> Machine {
    let right = ["a", "b", ">"];
    let mut ts = Vec::new();
    let stay = |x: &str| Triple::new(&[x], 0, &[x]);
    for c in right {
        ts.push(tr("q", "q", stay("$"), vec![Triple::new(&["<", c], 1, &["<", c]), stay("0")]));
        for a in ["$", "A"] {
            ts.push(tr("q", "q", Triple::new(&[a], 1, &[a, "A"]), vec![Triple::new(&["a", c], 1, &["a", c]), stay("0")]));
        }
        for (from, to) in [("0", "1"), ("1", "1")] {
            for a in ["$", "A"] {
                ts.push(tr(
                    "q",
                    "q",
                    Triple::new(&[a, "A"], -1, &[a]),
                    vec![Triple::new(&["b", c], 1, &["b", c]), Triple::new(&[from], 0, &[to])],
                ));
            }
        }
    }
    for w in ["0", "1"] {
        ts.push(tr("q", "f", stay("$"), vec![stay(">"), stay(w)]));
    }
    let m = Machine {
        states: strings(&["q", "f"]),
        initial: "q".into(),
        finals: strings(&["f"]),
        input_alphabet: strings(&["a", "b"]),
        stack_alphabet: strings(&["$", "A"]),
        work_alphabet: strings(&["0", "1"]),
        work_tape_length: 1,
        transitions: ts,
    };
    symmetric_closure(&m)
}

/// All words over `alphabet` of length at most `max_len`, shortest first.
pub fn all_words(alphabet: &[String], max_len: usize) -> Vec<String> {
    let mut out = vec![String::new()];
    let mut layer = vec![String::new()];
    for _ in 0..max_len {
        let mut next = Vec::new();
        for w in &layer {
            for a in alphabet {
                next.push(format!("{w}{a}"));
            }
        }
        out.extend(next.iter().cloned());
        layer = next;
    }
    out
}
