//! The standard matrix (realizable pairs) and the gap matrix (paths with a gap).

use crate::bits::BitMatrix;
use crate::error::{Error, Result};

/// n×n matrix; bit `[a,b]` means `a ⇝ b`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct StandardMatrix {
    pub(crate) bits: BitMatrix,
}

impl StandardMatrix {
    pub fn new(n: usize) -> Self {
        StandardMatrix { bits: BitMatrix::new(n, n) }
    }

    pub fn identity(n: usize) -> Self {
        StandardMatrix { bits: BitMatrix::identity(n) }
    }

    pub fn n(&self) -> usize {
        self.bits.rows()
    }

    pub fn get(&self, a: usize, b: usize) -> bool {
        self.bits.get(a, b)
    }

    pub fn set(&mut self, a: usize, b: usize) {
        self.bits.set(a, b)
    }

    pub fn bits(&self) -> &BitMatrix {
        &self.bits
    }

    pub fn count_ones(&self) -> u64 {
        self.bits.count_ones()
    }

    pub fn or_assign(&mut self, other: &StandardMatrix) -> bool {
        self.bits.or_assign(&other.bits)
    }

    pub fn is_subset_of(&self, other: &StandardMatrix) -> bool {
        self.bits.is_subset_of(&other.bits)
    }

    pub fn is_symmetric(&self) -> bool {
        let n = self.n();
        (0..n).all(|a| self.bits.row_ones(a).all(|b| self.get(b, a)))
    }

    /// Adds the transpose; returns whether anything changed.
    pub fn symmetrize(&mut self) -> bool {
        let t = self.bits.transpose();
        self.bits.or_assign(&t)
    }

    /// Set pairs in ascending lexicographic order.
    pub fn ones(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        (0..self.n()).flat_map(move |a| self.bits.row_ones(a).map(move |b| (a, b)))
    }

    pub fn from_fn(n: usize, f: impl Fn(usize, usize) -> bool) -> Self {
        let mut m = StandardMatrix::new(n);
        for a in 0..n {
            for b in 0..n {
                if f(a, b) {
                    m.set(a, b);
                }
            }
        }
        m
    }
}

/// n²×n² matrix; entry `Υ[a,(c,d),b]` lives at row `a·n+b`, column `c·n+d`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct GapMatrix {
    n: usize,
    pub(crate) bits: BitMatrix,
}

impl GapMatrix {
    pub fn new(n: usize) -> Self {
        GapMatrix { n, bits: BitMatrix::new(n * n, n * n) }
    }

    /// Only the `Υ[c,(c,d),d]` entries: the neutral element of substitution.
    pub fn identity(n: usize) -> Self {
        GapMatrix { n, bits: BitMatrix::identity(n * n) }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn pair(&self, x: usize, y: usize) -> usize {
        x * self.n + y
    }

    /// `Υ[a,(c,d),b]`.
    #[inline]
    pub fn get(&self, a: usize, c: usize, d: usize, b: usize) -> bool {
        self.bits.get(a * self.n + b, c * self.n + d)
    }

    #[inline]
    pub fn set(&mut self, a: usize, c: usize, d: usize, b: usize) {
        let n = self.n;
        self.bits.set(a * n + b, c * n + d)
    }

    pub fn bits(&self) -> &BitMatrix {
        &self.bits
    }

    pub fn count_ones(&self) -> u64 {
        self.bits.count_ones()
    }

    pub fn or_assign(&mut self, other: &GapMatrix) -> bool {
        self.bits.or_assign(&other.bits)
    }

    pub fn is_subset_of(&self, other: &GapMatrix) -> bool {
        self.bits.is_subset_of(&other.bits)
    }

    /// Set entries as `(a, c, d, b)`, ordered by row pair `(a,b)` then column pair `(c,d)`.
    pub fn ones(&self) -> impl Iterator<Item = (usize, usize, usize, usize)> + '_ {
        let n = self.n;
        (0..n * n).flat_map(move |r| {
            self.bits.row_ones(r).map(move |col| (r / n, col / n, col % n, r % n))
        })
    }

    fn orbit(&self, r: usize, col: usize) -> [(usize, usize); 8] {
        let n = self.n;
        let rev = |p: usize| (p % n) * n + p / n;
        let (rr, cr) = (rev(r), rev(col));
        [
            (r, col),
            (rr, col),
            (r, cr),
            (rr, cr),
            (col, r),
            (cr, r),
            (col, rr),
            (cr, rr),
        ]
    }

    /// Whether the matrix is invariant under swapping its row pair with its
    /// column pair and under reversing either pair.
    pub fn is_symmetric(&self) -> bool {
        let nn = self.n * self.n;
        (0..nn).all(|r| {
            self.bits
                .row_ones(r)
                .all(|col| self.orbit(r, col).iter().all(|&(x, y)| self.bits.get(x, y)))
        })
    }

    /// Closes the matrix under the four-way symmetry; returns whether anything changed.
    pub fn symmetrize(&mut self) -> bool {
        let nn = self.n * self.n;
        let mut add = Vec::new();
        for r in 0..nn {
            for col in self.bits.row_ones(r) {
                for (x, y) in self.orbit(r, col) {
                    if !self.bits.get(x, y) {
                        add.push((x, y));
                    }
                }
            }
        }
        for &(x, y) in &add {
            self.bits.set(x, y);
        }
        !add.is_empty()
    }

    pub(crate) fn check_same_n(&self, e: &StandardMatrix) -> Result<()> {
        if self.n != e.n() {
            return Err(Error::Dimension(format!(
                "gap matrix over {} vertices, standard matrix over {}",
                self.n,
                e.n()
            )));
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gap_addressing_uses_row_ab_column_cd() {
        let mut g = GapMatrix::new(3);
        g.set(0, 1, 2, 2);
        assert!(g.bits().get(2, 5));
        assert_eq!(g.ones().collect::<Vec<_>>(), vec![(0, 1, 2, 2)]);
    }

    #[test]
    fn symmetrize_adds_whole_orbit() {
        let mut g = GapMatrix::new(4);
        g.set(0, 1, 2, 3);
        assert!(!g.is_symmetric());
        g.symmetrize();
        assert!(g.is_symmetric());
        for (a, c, d, b) in [(0, 1, 2, 3), (3, 1, 2, 0), (0, 2, 1, 3), (1, 0, 3, 2), (2, 3, 0, 1)] {
            assert!(g.get(a, c, d, b), "{a} {c} {d} {b}");
        }
        assert_eq!(g.count_ones(), 8);
        assert!(!g.symmetrize());
    }
}
