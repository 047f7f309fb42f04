//! Realizable label strings: the four grammars, a CYK membership test and an
//! equivalent left-to-right recognizer used to prune walk searches.

use std::collections::HashSet;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::instance::EdgeLabel;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum GrammarVariant {
    /// push ... pop nesting with vertex-label agreement.
    Standard,
    /// Standard plus pop ... push nesting.
    SymmetricGap,
    /// Standard with vertex labels ignored.
    One,
    /// SymmetricGap with vertex labels ignored.
    OneSymmetricGap,
}

impl GrammarVariant {
    pub fn ignores_labels(self) -> bool {
        matches!(self, GrammarVariant::One | GrammarVariant::OneSymmetricGap)
    }

    pub fn allows_pop_push(self) -> bool {
        matches!(self, GrammarVariant::SymmetricGap | GrammarVariant::OneSymmetricGap)
    }

    #[inline]
    pub fn same(self, x: u32, y: u32) -> bool {
        self.ignores_labels() || x == y
    }
}

impl FromStr for GrammarVariant {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s.to_ascii_lowercase().as_str() {
            "standard" => Ok(GrammarVariant::Standard),
            "symmetric-gap" | "sgs" => Ok(GrammarVariant::SymmetricGap),
            "one" => Ok(GrammarVariant::One),
            "one-symmetric-gap" | "1sgs" => Ok(GrammarVariant::OneSymmetricGap),
            _ => Err(format!("unknown grammar `{s}`")),
        }
    }
}

/// Alternating vertex-label / edge-label sequence `α e α e ... α`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct LabelString {
    labels: Vec<u32>,
    edges: Vec<EdgeLabel>,
}

impl LabelString {
    pub fn new(labels: Vec<u32>, edges: Vec<EdgeLabel>) -> Result<Self> {
        if labels.len() != edges.len() + 1 {
            return Err(Error::LabelShape(format!(
                "{} vertex tokens need {} edge tokens, found {}",
                labels.len(),
                labels.len().saturating_sub(1),
                edges.len()
            )));
        }
        Ok(LabelString { labels, edges })
    }

    pub fn single(label: u32) -> Self {
        LabelString { labels: vec![label], edges: Vec::new() }
    }

    pub fn labels(&self) -> &[u32] {
        &self.labels
    }

    pub fn edges(&self) -> &[EdgeLabel] {
        &self.edges
    }

    pub fn first(&self) -> u32 {
        self.labels[0]
    }

    pub fn last(&self) -> u32 {
        *self.labels.last().expect("non-empty")
    }

    /// Number of edge tokens.
    pub fn len(&self) -> usize {
        self.edges.len()
    }

    pub fn is_empty(&self) -> bool {
        self.edges.is_empty()
    }

    /// `self` followed by `other`, sharing the middle vertex token.
    pub fn join(&self, other: &LabelString) -> Option<LabelString> {
        if self.last() != other.first() {
            return None;
        }
        let mut labels = self.labels.clone();
        labels.extend_from_slice(&other.labels[1..]);
        let mut edges = self.edges.clone();
        edges.extend_from_slice(&other.edges);
        Some(LabelString { labels, edges })
    }

    /// `α_outer e1 inner e2 α_outer`.
    pub fn wrap(outer: u32, e1: EdgeLabel, inner: &LabelString, e2: EdgeLabel) -> LabelString {
        let mut labels = vec![outer];
        labels.extend_from_slice(&inner.labels);
        labels.push(outer);
        let mut edges = vec![e1];
        edges.extend_from_slice(&inner.edges);
        edges.push(e2);
        LabelString { labels, edges }
    }
}

impl fmt::Display for LabelString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "α{}", self.labels[0])?;
        for (e, l) in self.edges.iter().zip(&self.labels[1..]) {
            write!(f, " {e} α{l}")?;
        }
        Ok(())
    }
}

impl FromStr for LabelString {
    type Err = Error;

    /// Accepts whitespace-separated tokens; vertex tokens are `α3`, `a3` or `3`.
    fn from_str(s: &str) -> Result<Self> {
        let mut labels = Vec::new();
        let mut edges = Vec::new();
        for (i, tok) in s.split_whitespace().enumerate() {
            if i % 2 == 0 {
                let digits = tok.trim_start_matches(['α', 'a']);
                let l: u32 = digits
                    .parse()
                    .map_err(|_| Error::LabelShape(format!("token {i}: expected a vertex label, found `{tok}`")))?;
                if l == 0 {
                    return Err(Error::LabelShape(format!("token {i}: labels start at 1")));
                }
                labels.push(l);
            } else {
                let e: EdgeLabel = tok
                    .parse()
                    .map_err(|_| Error::LabelShape(format!("token {i}: expected an edge label, found `{tok}`")))?;
                edges.push(e);
            }
        }
        if labels.is_empty() {
            return Err(Error::LabelShape("empty string".into()));
        }
        LabelString::new(labels, edges)
    }
}

/// CYK-style interval membership test.
///
/// `r[i][j]` says the substring between vertex tokens `i` and `j` is derivable.
/// Edge `t` (1-based) sits between vertex tokens `t-1` and `t`.
pub fn is_realizable_string(s: &LabelString, g: GrammarVariant) -> bool {
    let m = s.edges.len();
    let lab = &s.labels;
    let edge = |t: usize| s.edges[t - 1];
    let mut r = vec![vec![false; m + 1]; m + 1];
    for i in 0..=m {
        r[i][i] = true;
    }
    for span in 1..=m {
        for i in 0..=m - span {
            let j = i + span;
            let mut ok = span == 1 && edge(j) == EdgeLabel::Eps && g.same(lab[i], lab[j]);
            if !ok && span >= 2 && g.same(lab[i], lab[j]) && r[i + 1][j - 1] {
                let (open, close) = (edge(i + 1), edge(j));
                ok = (open == EdgeLabel::Push && close == EdgeLabel::Pop)
                    || (g.allows_pop_push() && open == EdgeLabel::Pop && close == EdgeLabel::Push);
            }
            if !ok {
                ok = (i + 1..j).any(|mid| r[i][mid] && r[mid][j]);
            }
            r[i][j] = ok;
        }
    }
    r[0][m]
}

/// All derivable strings with at most `max_edges` edge tokens over labels `1..=k`,
/// produced by applying the grammar rules bottom-up.
pub fn derivable_strings(max_edges: usize, k: u32, g: GrammarVariant) -> HashSet<LabelString> {
    let mut by_len: Vec<HashSet<LabelString>> = Vec::with_capacity(max_edges + 1);
    for m in 0..=max_edges {
        let mut cur = HashSet::new();
        match m {
            0 => cur.extend((1..=k).map(LabelString::single)),
            1 => {
                for i in 1..=k {
                    cur.insert(LabelString { labels: vec![i, i], edges: vec![EdgeLabel::Eps] });
                }
            }
            _ => {}
        }
        if m >= 2 {
            for inner in &by_len[m - 2] {
                for outer in 1..=k {
                    cur.insert(LabelString::wrap(outer, EdgeLabel::Push, inner, EdgeLabel::Pop));
                    if g.allows_pop_push() {
                        cur.insert(LabelString::wrap(outer, EdgeLabel::Pop, inner, EdgeLabel::Push));
                    }
                }
            }
        }
        for a in 1..m {
            for s1 in &by_len[a] {
                for s2 in &by_len[m - a] {
                    if let Some(j) = s1.join(s2) {
                        cur.insert(j);
                    }
                }
            }
        }
        by_len.push(cur);
    }
    by_len.into_iter().flatten().collect()
}

/// One signed generator of the free groupoid on labels: a push from label
/// `from` to label `to`, or its inverse.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Generator {
    pub inverse: bool,
    pub from: u32,
    pub to: u32,
}

/// Prefix state of the left-to-right recognizer.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum WalkState {
    /// Label stack for `Standard`; bottom entry is the start label.
    Stack(Vec<u32>),
    /// Freely reduced word for `SymmetricGap`.
    Word(Vec<Generator>),
    /// Nesting height for the label-free grammars.
    Height(i64),
}

impl WalkState {
    /// Lower bound on the number of further edges needed to accept.
    pub fn pending(&self) -> usize {
        match self {
            WalkState::Stack(s) => s.len() - 1,
            WalkState::Word(w) => w.len(),
            WalkState::Height(h) => h.unsigned_abs() as usize,
        }
    }

    pub fn accepts(&self) -> bool {
        self.pending() == 0
    }
}

impl GrammarVariant {
    pub fn start(self, label: u32) -> WalkState {
        match self {
            GrammarVariant::Standard => WalkState::Stack(vec![label]),
            GrammarVariant::SymmetricGap => WalkState::Word(Vec::new()),
            GrammarVariant::One | GrammarVariant::OneSymmetricGap => WalkState::Height(0),
        }
    }

    /// Extends a prefix ending at label `from` by edge `e` to label `to`.
    /// `None` means no extension of the new prefix can ever be accepted.
    pub fn step(self, st: &WalkState, from: u32, e: EdgeLabel, to: u32) -> Option<WalkState> {
        if e == EdgeLabel::Eps {
            return self.same(from, to).then(|| st.clone());
        }
        match st {
            WalkState::Height(h) => {
                let nh = if e == EdgeLabel::Push { h + 1 } else { h - 1 };
                (nh >= 0 || self.allows_pop_push()).then_some(WalkState::Height(nh))
            }
            WalkState::Stack(s) => {
                if *s.last()? != from {
                    return None;
                }
                let mut s = s.clone();
                if e == EdgeLabel::Push {
                    s.push(to);
                } else {
                    if s.len() < 2 {
                        return None;
                    }
                    s.pop();
                    if *s.last()? != to {
                        return None;
                    }
                }
                Some(WalkState::Stack(s))
            }
            WalkState::Word(w) => {
                let gen = if e == EdgeLabel::Push {
                    Generator { inverse: false, from, to }
                } else {
                    Generator { inverse: true, from: to, to: from }
                };
                let mut w = w.clone();
                match w.last() {
                    Some(top) if top.from == gen.from && top.to == gen.to && top.inverse != gen.inverse => {
                        w.pop();
                    }
                    _ => w.push(gen),
                }
                Some(WalkState::Word(w))
            }
        }
    }

    /// Runs the recognizer over a whole string.
    pub fn recognizes(self, s: &LabelString) -> bool {
        let mut st = self.start(s.labels[0]);
        for (t, &e) in s.edges.iter().enumerate() {
            match self.step(&st, s.labels[t], e, s.labels[t + 1]) {
                Some(n) => st = n,
                None => return false,
            }
        }
        st.accepts()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    const ALL: [GrammarVariant; 4] = [
        GrammarVariant::Standard,
        GrammarVariant::SymmetricGap,
        GrammarVariant::One,
        GrammarVariant::OneSymmetricGap,
    ];

    fn ls(s: &str) -> LabelString {
        s.parse().unwrap()
    }

    #[test]
    fn spec_examples() {
        let std = GrammarVariant::Standard;
        let sgs = GrammarVariant::SymmetricGap;
        assert!(is_realizable_string(&ls("α1"), std));
        assert!(is_realizable_string(&ls("α1 push α1 pop α1"), std));
        assert!(!is_realizable_string(&ls("α1 pop α1 push α1"), std));
        assert!(is_realizable_string(&ls("α1 pop α1 push α1"), sgs));
        assert!(is_realizable_string(&ls("α1 push α2 pop α1"), std));
        assert!(!is_realizable_string(&ls("α1 push α1"), std));
        assert!(!is_realizable_string(&ls("α1 eps α2"), sgs));
        assert!(is_realizable_string(&ls("a1 eps a2"), GrammarVariant::One));
    }

    #[test]
    fn malformed_strings_rejected() {
        assert!(matches!("α1 push".parse::<LabelString>(), Err(Error::LabelShape(_))));
        assert!(matches!("push α1".parse::<LabelString>(), Err(Error::LabelShape(_))));
        assert!(matches!("α1 α1".parse::<LabelString>(), Err(Error::LabelShape(_))));
        assert!(matches!("".parse::<LabelString>(), Err(Error::LabelShape(_))));
        assert!(matches!("α0".parse::<LabelString>(), Err(Error::LabelShape(_))));
    }

    #[test]
    fn display_round_trips() {
        let s = ls("1 push 2 eps 2 pop 1");
        assert_eq!(s.to_string(), "α1 push α2 eps α2 pop α1");
        assert_eq!(s.to_string().parse::<LabelString>().unwrap(), s);
    }

    /// Direct transcription of the recursive rules, memoized on intervals.
    fn naive(s: &LabelString, g: GrammarVariant) -> bool {
        use std::collections::HashMap;
        fn go(
            s: &LabelString,
            g: GrammarVariant,
            i: usize,
            j: usize,
            memo: &mut HashMap<(usize, usize), bool>,
        ) -> bool {
            if let Some(&v) = memo.get(&(i, j)) {
                return v;
            }
            let l = s.labels();
            let e = s.edges();
            let v = if i == j {
                true
            } else if !g.same(l[i], l[j]) {
                false
            } else if j == i + 1 && e[i] == EdgeLabel::Eps {
                true
            } else {
                let nested = j >= i + 2
                    && ((e[i] == EdgeLabel::Push && e[j - 1] == EdgeLabel::Pop)
                        || (g.allows_pop_push() && e[i] == EdgeLabel::Pop && e[j - 1] == EdgeLabel::Push))
                    && go(s, g, i + 1, j - 1, memo);
                nested
                    || (i + 1..j).any(|m| g.same(l[m], l[i]) && go(s, g, i, m, memo) && go(s, g, m, j, memo))
            };
            memo.insert((i, j), v);
            v
        }
        go(s, g, 0, s.len(), &mut HashMap::new())
    }

    fn all_strings(m: usize, k: u32) -> Vec<LabelString> {
        let mut out = vec![];
        let total_l = (k as usize).pow(m as u32 + 1);
        for le in 0..3usize.pow(m as u32) {
            let edges: Vec<EdgeLabel> = (0..m)
                .map(|t| [EdgeLabel::Push, EdgeLabel::Pop, EdgeLabel::Eps][le / 3usize.pow(t as u32) % 3])
                .collect();
            for ll in 0..total_l {
                let labels: Vec<u32> =
                    (0..=m).map(|t| (ll / (k as usize).pow(t as u32) % k as usize) as u32 + 1).collect();
                out.push(LabelString::new(labels, edges.clone()).unwrap());
            }
        }
        out
    }

    #[test]
    fn cyk_matches_naive_and_recognizer_exhaustively() {
        for m in 0..=6 {
            for s in all_strings(m, 2) {
                for g in ALL {
                    let c = is_realizable_string(&s, g);
                    assert_eq!(c, naive(&s, g), "naive {s} {g:?}");
                    assert_eq!(c, g.recognizes(&s), "recognizer {s} {g:?}");
                }
            }
        }
    }

    #[test]
    fn derivable_set_matches_cyk() {
        for g in [GrammarVariant::Standard, GrammarVariant::SymmetricGap] {
            let d = derivable_strings(5, 2, g);
            for m in 0..=5 {
                for s in all_strings(m, 2) {
                    assert_eq!(d.contains(&s), is_realizable_string(&s, g), "{s}");
                }
            }
        }
    }

    proptest! {
        #[test]
        fn standard_accepts_imply_symmetric_gap_accepts(
            edges in proptest::collection::vec(0usize..3, 0..10),
            labels in proptest::collection::vec(1u32..=3, 11),
        ) {
            let e: Vec<EdgeLabel> = edges.iter().map(|&i| [EdgeLabel::Push, EdgeLabel::Pop, EdgeLabel::Eps][i]).collect();
            let s = LabelString::new(labels[..=e.len()].to_vec(), e).unwrap();
            if is_realizable_string(&s, GrammarVariant::Standard) {
                prop_assert!(is_realizable_string(&s, GrammarVariant::SymmetricGap));
            }
            for g in ALL {
                prop_assert_eq!(is_realizable_string(&s, g), g.recognizes(&s));
            }
        }
    }
}
