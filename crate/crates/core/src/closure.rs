//! Squaring steps and the transitive closure ⟨Υ*, E*⟩.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::instance::Instance;
use crate::matrix::{GapMatrix, StandardMatrix};
use crate::tensor::{compose, contract, extend, substitute, ExtendMode};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum ClosureMethod {
    Square,
    SimpleSquare,
    SymmetricSquare,
}

impl ClosureMethod {
    pub fn as_str(self) -> &'static str {
        match self {
            ClosureMethod::Square => "square",
            ClosureMethod::SimpleSquare => "simple",
            ClosureMethod::SymmetricSquare => "symmetric",
        }
    }
}

impl fmt::Display for ClosureMethod {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for ClosureMethod {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s {
            "square" => Ok(ClosureMethod::Square),
            "simple" | "simple-square" => Ok(ClosureMethod::SimpleSquare),
            "symmetric" | "symmetric-square" => Ok(ClosureMethod::SymmetricSquare),
            _ => Err(format!("unknown closure method `{s}`")),
        }
    }
}

/// The pair ⟨Υ, E⟩ a squaring step acts on.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Matrices {
    pub gap: GapMatrix,
    pub e: StandardMatrix,
}

impl Matrices {
    pub fn of(inst: &Instance) -> Self {
        Matrices { gap: inst.gap.clone(), e: inst.e.clone() }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ClosureResult {
    pub e_star: StandardMatrix,
    pub gap_star: GapMatrix,
    /// Squaring applications performed, counting the last one that changed nothing.
    pub iterations: usize,
    pub method: ClosureMethod,
}

impl ClosureResult {
    pub fn n(&self) -> usize {
        self.e_star.n()
    }

    /// `s ⇝ t`?
    pub fn query(&self, s: usize, t: usize) -> Result<bool> {
        let n = self.n();
        if s >= n || t >= n {
            return Err(Error::OutOfRange(format!("pair ({s},{t}) with n = {n}")));
        }
        Ok(self.e_star.get(s, t))
    }

    /// `Υ*[a,(c,d),b]`.
    pub fn query_gap(&self, a: usize, c: usize, d: usize, b: usize) -> Result<bool> {
        let n = self.n();
        if [a, b, c, d].iter().any(|&x| x >= n) {
            return Err(Error::OutOfRange(format!("gap tuple ({a},({c},{d}),{b}) with n = {n}")));
        }
        Ok(self.gap_star.get(a, c, d, b))
    }

    /// `E a b` lines, then `G a b c d` lines (meaning `Υ*[a,(c,d),b]`), sorted.
    pub fn dump(&self) -> String {
        dump_matrices(&self.e_star, &self.gap_star)
    }
}

pub fn dump_matrices(e: &StandardMatrix, gap: &GapMatrix) -> String {
    use std::fmt::Write;
    let mut out = String::new();
    for (a, b) in e.ones() {
        let _ = writeln!(out, "E {a} {b}");
    }
    for (a, c, d, b) in gap.ones() {
        let _ = writeln!(out, "G {a} {b} {c} {d}");
    }
    out
}

fn or_into(gap: &mut GapMatrix, add: Result<GapMatrix>) -> Result<()> {
    gap.or_assign(&add?);
    Ok(())
}

/// One application of the tensor-form Square:
/// `E ∪= Υ⊗2((Υ⊗2E)⊗1E)`, then
/// `Υ ∪= Υ⊗5((Υ⊗5Υ)⊗3E) ∪ Υ⊗5((Υ⊗2E)⊗4Υ)` using the updated E.
pub fn square_step(m: &Matrices) -> Result<Matrices> {
    let Matrices { gap, e } = m;
    let mut e2 = e.clone();
    let inner = compose(&contract(gap, e)?, e)?;
    e2.or_assign(&contract(gap, &inner)?);

    let mut g2 = gap.clone();
    let left = extend(&substitute(gap, gap)?, &e2, ExtendMode::AfterB)?;
    or_into(&mut g2, substitute(gap, &left))?;
    let right = extend(gap, &contract(gap, &e2)?, ExtendMode::BeforeA)?;
    or_into(&mut g2, substitute(gap, &right))?;
    Ok(Matrices { gap: g2, e: e2 })
}

/// The seven assignments `E⊗1E, Υ⊗2E, Υ⊗3E, E⊗4Υ, Υ⊗5Υ, Υ⊗6E, Υ⊗7E`,
/// each OR-accumulated into the running matrices in that order.
pub fn simple_square_step(m: &Matrices) -> Result<Matrices> {
    let mut e = m.e.clone();
    let mut gap = m.gap.clone();
    let t = compose(&e, &e)?;
    e.or_assign(&t);
    let t = contract(&gap, &e)?;
    e.or_assign(&t);
    let t = extend(&gap, &e, ExtendMode::AfterB);
    or_into(&mut gap, t)?;
    let t = extend(&gap, &e, ExtendMode::BeforeA);
    or_into(&mut gap, t)?;
    let t = substitute(&gap, &gap);
    or_into(&mut gap, t)?;
    let t = extend(&gap, &e, ExtendMode::IntoD);
    or_into(&mut gap, t)?;
    let t = extend(&gap, &e, ExtendMode::IntoC);
    or_into(&mut gap, t)?;
    Ok(Matrices { gap, e })
}

/// `E⊗1E, Υ⊗2E, Υ⊗3E, Υ⊗5Υ`, then re-closure under the symmetry identities.
/// The other three products are images of these under the symmetry.
pub fn symmetric_square_step(m: &Matrices) -> Result<Matrices> {
    if !m.gap.is_symmetric() || !m.e.is_symmetric() {
        return Err(Error::SymmetryViolation);
    }
    let mut e = m.e.clone();
    let mut gap = m.gap.clone();
    let t = compose(&e, &e)?;
    e.or_assign(&t);
    let t = contract(&gap, &e)?;
    e.or_assign(&t);
    let t = extend(&gap, &e, ExtendMode::AfterB);
    or_into(&mut gap, t)?;
    let t = substitute(&gap, &gap);
    or_into(&mut gap, t)?;
    gap.symmetrize();
    e.symmetrize();
    Ok(Matrices { gap, e })
}

pub fn step(method: ClosureMethod, m: &Matrices) -> Result<Matrices> {
    match method {
        ClosureMethod::Square => square_step(m),
        ClosureMethod::SimpleSquare => simple_square_step(m),
        ClosureMethod::SymmetricSquare => symmetric_square_step(m),
    }
}

/// `8·⌈log₂(n+1)⌉ + 8`.
pub fn default_max_iters(n: usize) -> usize {
    8 * ceil_log2(n + 1) + 8
}

pub fn ceil_log2(x: usize) -> usize {
    if x <= 1 {
        0
    } else {
        (usize::BITS - (x - 1).leading_zeros()) as usize
    }
}

/// Iterates `method` until the matrices stop changing.
///
/// `observe` sees the matrices after every application; `bench` uses it.
pub fn transitive_closure_observed(
    inst: &Instance,
    method: ClosureMethod,
    max_iters: Option<usize>,
    mut observe: impl FnMut(usize, &Matrices),
) -> Result<ClosureResult> {
    if method == ClosureMethod::SymmetricSquare && !inst.variant.gap_symmetric() {
        return Err(Error::IncompatibleMethod { method: method.to_string(), variant: inst.variant.to_string() });
    }
    let limit = max_iters.unwrap_or_else(|| default_max_iters(inst.n()));
    let mut cur = Matrices::of(inst);
    for it in 1..=limit {
        let next = step(method, &cur)?;
        observe(it, &next);
        if next == cur {
            return Ok(ClosureResult { e_star: cur.e, gap_star: cur.gap, iterations: it, method });
        }
        cur = next;
    }
    Err(Error::IterationBudgetExceeded(limit))
}

pub fn transitive_closure(inst: &Instance, method: ClosureMethod, max_iters: Option<usize>) -> Result<ClosureResult> {
    transitive_closure_observed(inst, method, max_iters, |_, _| {})
}

/// Closure with the method suited to the variant: SymmetricSquare for the
/// gap-symmetric variants, Square otherwise.
pub fn closure_auto(inst: &Instance) -> Result<ClosureResult> {
    let method = if inst.variant.gap_symmetric() { ClosureMethod::SymmetricSquare } else { ClosureMethod::Square };
    transitive_closure(inst, method, None)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::instance::{initialize, EdgeLabel, LabeledGraph, ProblemVariant};

    /// Square written as the explicit quintuple sums, OR-accumulated.
    fn square_step_explicit(m: &Matrices) -> Matrices {
        let n = m.e.n();
        let (g, e) = (&m.gap, &m.e);
        let mut e2 = e.clone();
        for a in 0..n {
            for b in 0..n {
                for c in 0..n {
                    for d in 0..n {
                        if !g.get(a, c, d, b) {
                            continue;
                        }
                        for ee in 0..n {
                            for f in 0..n {
                                for gg in 0..n {
                                    if g.get(c, ee, f, gg) && e.get(ee, f) && e.get(gg, d) {
                                        e2.set(a, b);
                                    }
                                }
                            }
                        }
                    }
                }
            }
        }
        let e = &e2;
        let mut g2 = g.clone();
        for (a, c1, d1, b) in g.ones() {
            for e1 in 0..n {
                for f1 in 0..n {
                    for g1 in 0..n {
                        if !g.get(c1, e1, f1, g1) {
                            continue;
                        }
                        for c in 0..n {
                            for d in 0..n {
                                let first = g.get(e1, c, d, f1) && e.get(g1, d1);
                                let second = e.get(e1, f1) && g.get(g1, c, d, d1);
                                if first || second {
                                    g2.set(a, c, d, b);
                                }
                            }
                        }
                    }
                }
            }
        }
        Matrices { gap: g2, e: e2 }
    }

    fn chain() -> Instance {
        let mut g = LabeledGraph::with_loops(3, 1, true);
        g.add_edge(0, 1, EdgeLabel::Push);
        g.add_edge(1, 2, EdgeLabel::Pop);
        initialize(&g, ProblemVariant::OneLogCfl).unwrap()
    }

    #[test]
    fn chain_closes_in_one_step() {
        let inst = chain();
        for method in [ClosureMethod::Square, ClosureMethod::SimpleSquare] {
            let m = step(method, &Matrices::of(&inst)).unwrap();
            assert!(m.e.get(0, 2));
            let r = transitive_closure(&inst, method, None).unwrap();
            assert!(r.query(0, 2).unwrap());
            assert!(!r.query(0, 1).unwrap());
            assert!(r.query_gap(0, 0, 1, 1).unwrap());
        }
    }

    #[test]
    fn trivial_and_path_instances() {
        let g = LabeledGraph::with_loops(1, 1, true);
        let r = transitive_closure(&initialize(&g, ProblemVariant::OneLogCfl).unwrap(), ClosureMethod::Square, None)
            .unwrap();
        assert!(r.iterations <= 1 && r.query(0, 0).unwrap());

        let mut g = LabeledGraph::with_loops(8, 1, true);
        for u in 0..7 {
            g.add_edge(u, u + 1, EdgeLabel::Eps);
        }
        let inst = initialize(&g, ProblemVariant::OneLogCfl).unwrap();
        let r = transitive_closure(&inst, ClosureMethod::SimpleSquare, None).unwrap();
        assert!(r.query(0, 7).unwrap());
        assert!(r.iterations <= 4, "{}", r.iterations);
    }

    #[test]
    fn symmetric_method_rejects_asymmetric_variant() {
        assert!(matches!(
            transitive_closure(&chain(), ClosureMethod::SymmetricSquare, None),
            Err(Error::IncompatibleMethod { .. })
        ));
        let mut m = Matrices::of(&chain());
        m.e.set(0, 1);
        assert!(matches!(symmetric_square_step(&m), Err(Error::SymmetryViolation)));
    }

    #[test]
    fn budget_exceeded() {
        let inst = chain();
        assert!(matches!(
            transitive_closure(&inst, ClosureMethod::Square, Some(1)),
            Err(Error::IterationBudgetExceeded(1))
        ));
    }

    #[test]
    fn log2() {
        assert_eq!([1, 2, 3, 4, 5, 8, 9].map(ceil_log2), [0, 1, 2, 2, 3, 3, 4]);
        assert_eq!(default_max_iters(1), 16);
    }

    #[test]
    fn dump_format() {
        let r = transitive_closure(&chain(), ClosureMethod::Square, None).unwrap();
        let d = r.dump();
        assert!(d.starts_with("E 0 0\nE 0 2\n"));
        assert!(d.contains("G 0 2 1 1\n"));
    }

    #[test]
    fn explicit_square_matches_tensor_form() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(5);
        for trial in 0..40 {
            let n = 2 + trial % 4;
            let mut g = LabeledGraph::with_loops(n, 1, true);
            for u in 0..n {
                for v in 0..n {
                    if u != v && rng.gen_bool(0.3) {
                        g.add_edge(u, v, [EdgeLabel::Push, EdgeLabel::Pop, EdgeLabel::Eps][rng.gen_range(0..3)]);
                    }
                }
            }
            let inst = initialize(&g, ProblemVariant::OneLogCfl).unwrap();
            let mut m = Matrices::of(&inst);
            for _ in 0..3 {
                let t = square_step(&m).unwrap();
                assert_eq!(t, square_step_explicit(&m), "trial {trial}");
                m = t;
            }
        }
    }
}
