//! The seven boolean products that move realizability facts between the
//! standard matrix E and the gap matrix Υ.
//!
//! All outputs are fresh matrices; closure code OR-accumulates them itself.

use crate::bits::{or_bits, read_bits, words_for, BitMatrix};
use crate::error::{Error, Result};
use crate::matrix::{GapMatrix, StandardMatrix};

/// Which gap endpoint a single-edge extension moves.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum ExtendMode {
    /// `Υ[a,(c,d),b] ∧ E[b,z] ⇒ Υ[a,(c,d),z]`
    AfterB,
    /// `E[z,a] ∧ Υ[a,(c,d),b] ⇒ Υ[z,(c,d),b]`
    BeforeA,
    /// `Υ[a,(c,d),b] ∧ E[z,d] ⇒ Υ[a,(c,z),b]`
    IntoD,
    /// `Υ[a,(c,d),b] ∧ E[c,z] ⇒ Υ[a,(z,d),b]`
    IntoC,
}

fn same_n(x: usize, y: usize, what: &str) -> Result<()> {
    if x != y {
        return Err(Error::Dimension(format!("{what}: {x} vs {y} vertices")));
    }
    Ok(())
}

/// `out[a,b] = ∨_z E1[a,z] ∧ E2[z,b]`
pub fn compose(e1: &StandardMatrix, e2: &StandardMatrix) -> Result<StandardMatrix> {
    same_n(e1.n(), e2.n(), "compose")?;
    Ok(StandardMatrix { bits: e1.bits.mul(&e2.bits) })
}

/// `out[a,b] = ∨_{c,d} Υ[a,(c,d),b] ∧ E[c,d]`
pub fn contract(gap: &GapMatrix, e: &StandardMatrix) -> Result<StandardMatrix> {
    gap.check_same_n(e)?;
    let n = e.n();
    // E flattened row-major is exactly a column-pair bit vector.
    let mut flat = vec![0u64; words_for(n * n)];
    for c in 0..n {
        or_bits(&mut flat, c * n, e.bits.row(c), n);
    }
    let mut out = StandardMatrix::new(n);
    for a in 0..n {
        for b in 0..n {
            let row = gap.bits.row(a * n + b);
            if row.iter().zip(&flat).any(|(x, y)| x & y != 0) {
                out.set(a, b);
            }
        }
    }
    Ok(out)
}

/// Single-edge extension of one gap endpoint, per [`ExtendMode`].
pub fn extend(gap: &GapMatrix, e: &StandardMatrix, mode: ExtendMode) -> Result<GapMatrix> {
    gap.check_same_n(e)?;
    let n = e.n();
    let mut out = GapMatrix::new(n);
    let src = &gap.bits;
    match mode {
        ExtendMode::AfterB => {
            for a in 0..n {
                for b in 0..n {
                    for z in e.bits.row_ones(b) {
                        out.bits.or_row_from(a * n + z, src, a * n + b);
                    }
                }
            }
        }
        ExtendMode::BeforeA => {
            for z in 0..n {
                for a in e.bits.row_ones(z) {
                    for b in 0..n {
                        out.bits.or_row_from(z * n + b, src, a * n + b);
                    }
                }
            }
        }
        ExtendMode::IntoD | ExtendMode::IntoC => {
            // Each gap row, read as an n×n matrix M over (c,d), becomes
            // M·Eᵀ (IntoD) or Eᵀ·M (IntoC).
            let et = e.bits.transpose();
            let w = words_for(n);
            let mut segs = vec![0u64; n * w];
            let mut acc = vec![0u64; w];
            for r in 0..n * n {
                let row = src.row(r);
                if row.iter().all(|&x| x == 0) {
                    continue;
                }
                for c in 0..n {
                    read_bits(row, c * n, n, &mut segs[c * w..(c + 1) * w]);
                }
                let dst = out.bits.row_mut(r);
                for x in 0..n {
                    acc.fill(0);
                    match mode {
                        ExtendMode::IntoD => {
                            for d in crate::bits::Ones::new(&segs[x * w..(x + 1) * w]) {
                                for (p, q) in acc.iter_mut().zip(et.row(d)) {
                                    *p |= *q;
                                }
                            }
                        }
                        _ => {
                            for c in et.row_ones(x) {
                                for (p, q) in acc.iter_mut().zip(&segs[c * w..(c + 1) * w]) {
                                    *p |= *q;
                                }
                            }
                        }
                    }
                    or_bits(dst, x * n, &acc, n);
                }
            }
        }
    }
    Ok(out)
}

/// `out[a,(e,f),b] = ∨_{c,d} Υ1[a,(c,d),b] ∧ Υ2[c,(e,f),d]`, the flat n²×n² product.
pub fn substitute(g1: &GapMatrix, g2: &GapMatrix) -> Result<GapMatrix> {
    same_n(g1.n(), g2.n(), "substitute")?;
    let bits: BitMatrix = g1.bits.mul(&g2.bits);
    let mut out = GapMatrix::new(g1.n());
    out.bits = bits;
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn random_std(n: usize, p: f64, rng: &mut ChaCha8Rng) -> StandardMatrix {
        let mut m = StandardMatrix::new(n);
        for a in 0..n {
            for b in 0..n {
                if rng.gen_bool(p) {
                    m.set(a, b);
                }
            }
        }
        m
    }

    fn random_gap(n: usize, p: f64, rng: &mut ChaCha8Rng) -> GapMatrix {
        let mut g = GapMatrix::new(n);
        for a in 0..n {
            for b in 0..n {
                for c in 0..n {
                    for d in 0..n {
                        if rng.gen_bool(p) {
                            g.set(a, c, d, b);
                        }
                    }
                }
            }
        }
        g
    }

    fn extend_by_loops(g: &GapMatrix, e: &StandardMatrix, mode: ExtendMode) -> GapMatrix {
        let n = e.n();
        let mut out = GapMatrix::new(n);
        for a in 0..n {
            for b in 0..n {
                for c in 0..n {
                    for d in 0..n {
                        for z in 0..n {
                            match mode {
                                ExtendMode::AfterB if g.get(a, c, d, b) && e.get(b, z) => out.set(a, c, d, z),
                                ExtendMode::BeforeA if e.get(z, a) && g.get(a, c, d, b) => out.set(z, c, d, b),
                                ExtendMode::IntoD if g.get(a, c, d, b) && e.get(z, d) => out.set(a, c, z, b),
                                ExtendMode::IntoC if g.get(a, c, d, b) && e.get(c, z) => out.set(a, z, d, b),
                                _ => {}
                            }
                        }
                    }
                }
            }
        }
        out
    }

    const MODES: [ExtendMode; 4] = [ExtendMode::AfterB, ExtendMode::BeforeA, ExtendMode::IntoD, ExtendMode::IntoC];

    #[test]
    fn spec_examples() {
        let mut e = StandardMatrix::identity(3);
        e.set(0, 1);
        e.set(1, 2);
        assert!(compose(&e, &e).unwrap().get(0, 2));
        assert_eq!(compose(&e, &StandardMatrix::identity(3)).unwrap(), e);

        let mut g = GapMatrix::new(4);
        g.set(0, 1, 1, 2);
        let mut e = StandardMatrix::new(4);
        e.set(1, 1);
        assert!(contract(&g, &e).unwrap().get(0, 2));
        assert!(contract(&GapMatrix::new(4), &e).unwrap().bits().is_zero());

        e.set(2, 3);
        assert!(extend(&g, &e, ExtendMode::AfterB).unwrap().get(0, 1, 1, 3));
        for m in MODES {
            assert_eq!(extend(&g, &StandardMatrix::identity(4), m).unwrap(), g);
        }

        let mut g1 = GapMatrix::new(5);
        g1.set(0, 1, 2, 3);
        let mut g2 = GapMatrix::new(5);
        g2.set(1, 4, 4, 2);
        assert!(substitute(&g1, &g2).unwrap().get(0, 4, 4, 3));
        assert_eq!(substitute(&g1, &GapMatrix::identity(5)).unwrap(), g1);
    }

    #[test]
    fn dimension_mismatch() {
        assert!(matches!(compose(&StandardMatrix::new(2), &StandardMatrix::new(3)), Err(Error::Dimension(_))));
        assert!(matches!(contract(&GapMatrix::new(2), &StandardMatrix::new(3)), Err(Error::Dimension(_))));
    }

    #[test]
    fn products_match_loop_definitions() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for trial in 0..30 {
            let n = 1 + trial % 5;
            let e1 = random_std(n, 0.3, &mut rng);
            let e2 = random_std(n, 0.3, &mut rng);
            let c = compose(&e1, &e2).unwrap();
            let want = StandardMatrix::from_fn(n, |a, b| (0..n).any(|z| e1.get(a, z) && e2.get(z, b)));
            assert_eq!(c, want);

            let g = random_gap(n, 0.1, &mut rng);
            let k = contract(&g, &e1).unwrap();
            let want = StandardMatrix::from_fn(n, |a, b| {
                (0..n).any(|c| (0..n).any(|d| g.get(a, c, d, b) && e1.get(c, d)))
            });
            assert_eq!(k, want);

            for m in MODES {
                assert_eq!(extend(&g, &e1, m).unwrap(), extend_by_loops(&g, &e1, m), "{m:?} n={n}");
            }

            let h = random_gap(n, 0.1, &mut rng);
            let s = substitute(&g, &h).unwrap();
            let mut want = GapMatrix::new(n);
            for (a, c, d, b) in g.ones() {
                for e in 0..n {
                    for f in 0..n {
                        if h.get(c, e, f, d) {
                            want.set(a, e, f, b);
                        }
                    }
                }
            }
            assert_eq!(s, want);
        }
    }

    #[test]
    fn large_extensions_cross_word_boundaries() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for n in [9, 11] {
            let g = random_gap(n, 0.02, &mut rng);
            let e = random_std(n, 0.2, &mut rng);
            for m in MODES {
                assert_eq!(extend(&g, &e, m).unwrap(), extend_by_loops(&g, &e, m));
            }
        }
    }

    #[test]
    fn symmetric_inputs_mirror_after_and_before() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for n in 1..=4 {
            let mut g = random_gap(n, 0.05, &mut rng);
            g.symmetrize();
            let mut e = random_std(n, 0.3, &mut rng);
            e.symmetrize();
            let after = extend(&g, &e, ExtendMode::AfterB).unwrap();
            let before = extend(&g, &e, ExtendMode::BeforeA).unwrap();
            for a in 0..n {
                for b in 0..n {
                    for c in 0..n {
                        for d in 0..n {
                            assert_eq!(after.get(a, c, d, b), before.get(b, d, c, a));
                        }
                    }
                }
            }
        }
    }

    proptest! {
        #[test]
        fn compose_is_associative(seed in any::<u64>(), n in 1usize..=5) {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let a = random_std(n, 0.3, &mut rng);
            let b = random_std(n, 0.3, &mut rng);
            let c = random_std(n, 0.3, &mut rng);
            let left = compose(&compose(&a, &b).unwrap(), &c).unwrap();
            let right = compose(&a, &compose(&b, &c).unwrap()).unwrap();
            prop_assert_eq!(left, right);
        }

        #[test]
        fn products_are_monotone(seed in any::<u64>(), n in 1usize..=4, bit in any::<u32>()) {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let g = random_gap(n, 0.1, &mut rng);
            let e = random_std(n, 0.3, &mut rng);
            let mut g2 = g.clone();
            let i = bit as usize % (n * n * n * n);
            g2.set(i / (n * n * n), i / (n * n) % n, i / n % n, i % n);
            let mut e2 = e.clone();
            e2.set(i / n % n, i % n);
            prop_assert!(contract(&g, &e).unwrap().is_subset_of(&contract(&g2, &e2).unwrap()));
            prop_assert!(substitute(&g, &g).unwrap().is_subset_of(&substitute(&g2, &g2).unwrap()));
            for m in MODES {
                prop_assert!(extend(&g, &e, m).unwrap().is_subset_of(&extend(&g2, &e2, m).unwrap()));
            }
        }
    }
}
