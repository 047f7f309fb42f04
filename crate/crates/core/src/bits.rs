//! Row-packed boolean matrices over `u64` words.

/// Number of 64-bit words needed to hold `bits` bits.
#[inline]
pub fn words_for(bits: usize) -> usize {
    bits.div_ceil(64)
}

/// Dense boolean matrix, each row padded to a whole number of words.
///
/// Padding bits past `cols` are kept zero by every mutator, so whole-row
/// comparisons and popcounts are exact.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct BitMatrix {
    rows: usize,
    cols: usize,
    stride: usize,
    data: Vec<u64>,
}

impl std::fmt::Debug for BitMatrix {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "BitMatrix({}x{}, {} ones)", self.rows, self.cols, self.count_ones())
    }
}

impl BitMatrix {
    pub fn new(rows: usize, cols: usize) -> Self {
        let stride = words_for(cols);
        BitMatrix { rows, cols, stride, data: vec![0; rows * stride] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = BitMatrix::new(n, n);
        for i in 0..n {
            m.set(i, i);
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn stride(&self) -> usize {
        self.stride
    }

    #[inline]
    pub fn get(&self, r: usize, c: usize) -> bool {
        debug_assert!(r < self.rows && c < self.cols);
        self.data[r * self.stride + c / 64] >> (c % 64) & 1 == 1
    }

    #[inline]
    pub fn set(&mut self, r: usize, c: usize) {
        debug_assert!(r < self.rows && c < self.cols);
        self.data[r * self.stride + c / 64] |= 1 << (c % 64);
    }

    #[inline]
    pub fn put(&mut self, r: usize, c: usize, v: bool) {
        let w = &mut self.data[r * self.stride + c / 64];
        if v {
            *w |= 1 << (c % 64);
        } else {
            *w &= !(1 << (c % 64));
        }
    }

    #[inline]
    pub fn row(&self, r: usize) -> &[u64] {
        &self.data[r * self.stride..(r + 1) * self.stride]
    }

    #[inline]
    pub fn row_mut(&mut self, r: usize) -> &mut [u64] {
        &mut self.data[r * self.stride..(r + 1) * self.stride]
    }

    /// OR row `src` of `other` into row `dst` of `self`.
    #[inline]
    pub fn or_row_from(&mut self, dst: usize, other: &BitMatrix, src: usize) {
        debug_assert_eq!(self.stride, other.stride);
        let d = &mut self.data[dst * self.stride..(dst + 1) * self.stride];
        for (x, y) in d.iter_mut().zip(other.row(src)) {
            *x |= *y;
        }
    }

    /// Bitwise OR of `other` into `self`; returns whether any bit changed.
    pub fn or_assign(&mut self, other: &BitMatrix) -> bool {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        let mut changed = false;
        for (x, y) in self.data.iter_mut().zip(&other.data) {
            let nx = *x | *y;
            changed |= nx != *x;
            *x = nx;
        }
        changed
    }

    pub fn is_subset_of(&self, other: &BitMatrix) -> bool {
        self.data.iter().zip(&other.data).all(|(x, y)| x & !y == 0)
    }

    pub fn count_ones(&self) -> u64 {
        self.data.iter().map(|w| w.count_ones() as u64).sum()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|&w| w == 0)
    }

    /// Column indices of the set bits in row `r`, ascending.
    pub fn row_ones(&self, r: usize) -> Ones<'_> {
        Ones::new(self.row(r))
    }

    /// Boolean product `self · other`.
    pub fn mul(&self, other: &BitMatrix) -> BitMatrix {
        assert_eq!(self.cols, other.rows);
        if self.cols >= 512 {
            return self.mul_four_russians(other);
        }
        self.mul_by_rows(other)
    }

    /// Product by OR-ing the rows of `other` selected by each set bit.
    pub fn mul_by_rows(&self, other: &BitMatrix) -> BitMatrix {
        assert_eq!(self.cols, other.rows);
        let mut out = BitMatrix::new(self.rows, other.cols);
        for r in 0..self.rows {
            let base = r * out.stride;
            for z in self.row_ones(r) {
                let src = other.row(z);
                for (x, y) in out.data[base..base + out.stride].iter_mut().zip(src) {
                    *x |= *y;
                }
            }
        }
        out
    }

    /// Product via 8-row lookup tables over `other` (method of Four Russians).
    pub fn mul_four_russians(&self, other: &BitMatrix) -> BitMatrix {
        assert_eq!(self.cols, other.rows);
        let stride = words_for(other.cols);
        let mut out = BitMatrix::new(self.rows, other.cols);
        let mut table = vec![0u64; 256 * stride];
        for group in 0..self.cols.div_ceil(8) {
            let base = group * 8;
            let width = (self.cols - base).min(8);
            let word = base / 64;
            let shift = base % 64;
            // Skip groups where no row of `self` has a bit.
            if (0..self.rows).all(|r| (self.data[r * self.stride + word] >> shift) & 0xff == 0) {
                continue;
            }
            table[..stride].fill(0);
            for idx in 1usize..(1 << width) {
                let low = idx.trailing_zeros() as usize;
                let prev = idx & (idx - 1);
                let src = other.row(base + low);
                let (head, tail) = table.split_at_mut(idx * stride);
                let dst = &mut tail[..stride];
                dst.copy_from_slice(&head[prev * stride..(prev + 1) * stride]);
                for (x, y) in dst.iter_mut().zip(src) {
                    *x |= *y;
                }
            }
            for r in 0..self.rows {
                let byte = ((self.data[r * self.stride + word] >> shift) & 0xff) as usize;
                if byte == 0 {
                    continue;
                }
                let entry = &table[byte * stride..(byte + 1) * stride];
                let o = &mut out.data[r * stride..(r + 1) * stride];
                for (x, y) in o.iter_mut().zip(entry) {
                    *x |= *y;
                }
            }
        }
        out
    }

    pub fn transpose(&self) -> BitMatrix {
        let mut out = BitMatrix::new(self.cols, self.rows);
        for r in 0..self.rows {
            for c in self.row_ones(r) {
                out.set(c, r);
            }
        }
        out
    }
}

/// Iterator over set-bit positions of a word slice.
pub struct Ones<'a> {
    words: &'a [u64],
    idx: usize,
    cur: u64,
}

impl<'a> Ones<'a> {
    pub fn new(words: &'a [u64]) -> Self {
        Ones { words, idx: 0, cur: words.first().copied().unwrap_or(0) }
    }
}

impl Iterator for Ones<'_> {
    type Item = usize;

    #[inline]
    fn next(&mut self) -> Option<usize> {
        loop {
            if self.cur != 0 {
                let b = self.cur.trailing_zeros() as usize;
                self.cur &= self.cur - 1;
                return Some(self.idx * 64 + b);
            }
            self.idx += 1;
            if self.idx >= self.words.len() {
                return None;
            }
            self.cur = self.words[self.idx];
        }
    }
}

/// Copy `len` bits of `src` starting at bit `offset` into `dst` (starting at bit 0).
/// Bits of `dst` beyond `len` are cleared.
pub fn read_bits(src: &[u64], offset: usize, len: usize, dst: &mut [u64]) {
    let nw = words_for(len);
    let (wo, sh) = (offset / 64, offset % 64);
    for i in 0..nw {
        let lo = src.get(wo + i).copied().unwrap_or(0);
        let v = if sh == 0 {
            lo
        } else {
            let hi = src.get(wo + i + 1).copied().unwrap_or(0);
            (lo >> sh) | (hi << (64 - sh))
        };
        dst[i] = v;
    }
    if len % 64 != 0 {
        dst[nw - 1] &= (1u64 << (len % 64)) - 1;
    }
    for w in dst.iter_mut().skip(nw) {
        *w = 0;
    }
}

/// OR the low `len` bits of `src` into `dst` starting at bit `offset`.
/// `src` must have no set bits at or beyond `len`.
pub fn or_bits(dst: &mut [u64], offset: usize, src: &[u64], len: usize) {
    let nw = words_for(len);
    let (wo, sh) = (offset / 64, offset % 64);
    for (i, &v) in src.iter().take(nw).enumerate() {
        if v == 0 {
            continue;
        }
        dst[wo + i] |= v << sh;
        if sh != 0 {
            let hi = v >> (64 - sh);
            if hi != 0 {
                dst[wo + i + 1] |= hi;
            }
        }
    }
}
