//! Bit-packed linear algebra over GF(2).
//!
//! Rows are stored as runs of `u64` words, least significant bit first. Every
//! operation keeps the bits past the logical length cleared, so word-wise
//! equality and popcounts are exact.

use std::fmt;

use crate::error::{Error, Result};

const WORD_BITS: usize = 64;

#[inline]
fn words_for(bits: usize) -> usize {
    bits.div_ceil(WORD_BITS)
}

#[inline]
fn tail_mask(bits: usize) -> u64 {
    match bits % WORD_BITS {
        0 => u64::MAX,
        r => (1u64 << r) - 1,
    }
}

/// A fixed-length vector over GF(2).
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct BitVector {
    len: usize,
    words: Vec<u64>,
}

impl BitVector {
    pub fn zeros(len: usize) -> Self {
        Self {
            len,
            words: vec![0; words_for(len)],
        }
    }

    /// Builds a vector from anything that yields booleans.
    pub fn from_bools<I: IntoIterator<Item = bool>>(bits: I) -> Self {
        let mut v = Self::zeros(0);
        for b in bits {
            v.push(b);
        }
        v
    }

    /// Vector with ones exactly at `support`.
    pub fn from_support(len: usize, support: &[usize]) -> Self {
        let mut v = Self::zeros(len);
        for &i in support {
            v.set(i, true);
        }
        v
    }

    /// Parses a string of `0`/`1` characters.
    pub fn parse(bits: &str) -> Result<Self> {
        let mut v = Self::zeros(0);
        for c in bits.chars() {
            match c {
                '0' => v.push(false),
                '1' => v.push(true),
                _ => return Err(Error::Parse(format!("invalid bit character {c:?}"))),
            }
        }
        Ok(v)
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    #[inline]
    pub fn get(&self, i: usize) -> bool {
        assert!(i < self.len, "bit index {i} out of range {}", self.len);
        (self.words[i / WORD_BITS] >> (i % WORD_BITS)) & 1 == 1
    }

    #[inline]
    pub fn set(&mut self, i: usize, value: bool) {
        assert!(i < self.len, "bit index {i} out of range {}", self.len);
        let mask = 1u64 << (i % WORD_BITS);
        if value {
            self.words[i / WORD_BITS] |= mask;
        } else {
            self.words[i / WORD_BITS] &= !mask;
        }
    }

    #[inline]
    pub fn flip(&mut self, i: usize) {
        assert!(i < self.len, "bit index {i} out of range {}", self.len);
        self.words[i / WORD_BITS] ^= 1u64 << (i % WORD_BITS);
    }

    pub fn push(&mut self, value: bool) {
        if self.len.is_multiple_of(WORD_BITS) {
            self.words.push(0);
        }
        self.len += 1;
        self.set(self.len - 1, value);
    }

    pub fn weight(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn is_zero(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    /// Indices of the set bits, ascending.
    pub fn support(&self) -> Vec<usize> {
        self.iter_ones().collect()
    }

    pub fn iter_ones(&self) -> impl Iterator<Item = usize> + '_ {
        self.words.iter().enumerate().flat_map(|(wi, &w)| {
            let mut w = w;
            std::iter::from_fn(move || {
                if w == 0 {
                    None
                } else {
                    let t = w.trailing_zeros() as usize;
                    w &= w - 1;
                    Some(wi * WORD_BITS + t)
                }
            })
        })
    }

    pub fn iter(&self) -> impl Iterator<Item = bool> + '_ {
        (0..self.len).map(move |i| self.get(i))
    }

    pub fn xor_assign(&mut self, other: &BitVector) {
        assert_eq!(self.len, other.len, "xor of vectors with different lengths");
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a ^= *b;
        }
    }

    pub fn xor(&self, other: &BitVector) -> BitVector {
        let mut out = self.clone();
        out.xor_assign(other);
        out
    }

    /// Parity of the bitwise AND.
    pub fn dot(&self, other: &BitVector) -> bool {
        assert_eq!(self.len, other.len, "dot of vectors with different lengths");
        parity_and(&self.words, &other.words)
    }

    /// Copies `[start, start + len)` into a new vector.
    pub fn slice(&self, start: usize, len: usize) -> BitVector {
        assert!(start + len <= self.len);
        BitVector::from_bools((start..start + len).map(|i| self.get(i)))
    }

    /// Concatenation `self ‖ other`.
    pub fn concat(&self, other: &BitVector) -> BitVector {
        let mut out = self.clone();
        for b in other.iter() {
            out.push(b);
        }
        out
    }

    pub fn words(&self) -> &[u64] {
        &self.words
    }

    /// Packs bits into bytes, least significant bit first.
    pub fn to_bytes(&self) -> Vec<u8> {
        let nbytes = self.len.div_ceil(8);
        let mut out = Vec::with_capacity(nbytes);
        for b in 0..nbytes {
            let w = self.words[b / 8];
            out.push((w >> ((b % 8) * 8)) as u8);
        }
        out
    }

    /// Inverse of [`BitVector::to_bytes`]. Padding bits in the final byte must be zero.
    pub fn from_bytes(len: usize, bytes: &[u8]) -> Result<Self> {
        if bytes.len() != len.div_ceil(8) {
            return Err(Error::Parse(format!(
                "expected {} bytes for {len} bits, got {}",
                len.div_ceil(8),
                bytes.len()
            )));
        }
        let mut v = Self::zeros(len);
        for (b, &byte) in bytes.iter().enumerate() {
            v.words[b / 8] |= (byte as u64) << ((b % 8) * 8);
        }
        if len > 0 && v.words[words_for(len) - 1] & !tail_mask(len) != 0 {
            return Err(Error::Parse("nonzero padding bits".into()));
        }
        Ok(v)
    }
}

impl fmt::Debug for BitVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "BitVector({self})")
    }
}

impl fmt::Display for BitVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for b in self.iter() {
            f.write_str(if b { "1" } else { "0" })?;
        }
        Ok(())
    }
}

#[inline]
fn parity_and(a: &[u64], b: &[u64]) -> bool {
    a.iter()
        .zip(b)
        .fold(0u32, |acc, (x, y)| acc ^ (x & y).count_ones())
        & 1
        == 1
}

/// A dense row-major matrix over GF(2).
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct BitMatrix {
    rows: usize,
    cols: usize,
    stride: usize,
    data: Vec<u64>,
}

/// Output of [`BitMatrix::row_reduce`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RowEchelon {
    pub reduced: BitMatrix,
    pub rank: usize,
    pub pivot_cols: Vec<usize>,
}

impl BitMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        let stride = words_for(cols);
        Self {
            rows,
            cols,
            stride,
            data: vec![0; rows * stride],
        }
    }

    pub fn identity(size: usize) -> Self {
        let mut m = Self::zeros(size, size);
        for i in 0..size {
            m.set(i, i, true);
        }
        m
    }

    /// Builds a matrix from nested `0`/`1` rows. Panics on ragged input.
    pub fn from_rows<R: AsRef<[u8]>>(rows: &[R]) -> Self {
        let cols = rows.first().map_or(0, |r| r.as_ref().len());
        let mut m = Self::zeros(rows.len(), cols);
        for (r, row) in rows.iter().enumerate() {
            let row = row.as_ref();
            assert_eq!(row.len(), cols, "ragged row {r}");
            for (c, &v) in row.iter().enumerate() {
                m.set(r, c, v != 0);
            }
        }
        m
    }

    /// Stacks vectors of equal length as rows.
    pub fn from_bit_rows(cols: usize, rows: &[BitVector]) -> Self {
        let mut m = Self::zeros(rows.len(), cols);
        for (r, v) in rows.iter().enumerate() {
            assert_eq!(v.len(), cols);
            m.row_words_mut(r).copy_from_slice(v.words());
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn get(&self, r: usize, c: usize) -> bool {
        assert!(r < self.rows && c < self.cols);
        (self.data[r * self.stride + c / WORD_BITS] >> (c % WORD_BITS)) & 1 == 1
    }

    #[inline]
    pub fn set(&mut self, r: usize, c: usize, value: bool) {
        assert!(r < self.rows && c < self.cols);
        let w = &mut self.data[r * self.stride + c / WORD_BITS];
        let mask = 1u64 << (c % WORD_BITS);
        if value {
            *w |= mask;
        } else {
            *w &= !mask;
        }
    }

    #[inline]
    fn row_words(&self, r: usize) -> &[u64] {
        &self.data[r * self.stride..(r + 1) * self.stride]
    }

    #[inline]
    fn row_words_mut(&mut self, r: usize) -> &mut [u64] {
        &mut self.data[r * self.stride..(r + 1) * self.stride]
    }

    pub fn row(&self, r: usize) -> BitVector {
        BitVector {
            len: self.cols,
            words: self.row_words(r).to_vec(),
        }
    }

    pub fn column(&self, c: usize) -> BitVector {
        BitVector::from_bools((0..self.rows).map(|r| self.get(r, c)))
    }

    /// Column indices of the ones in row `r`, ascending.
    pub fn row_support(&self, r: usize) -> Vec<usize> {
        self.row(r).support()
    }

    pub fn row_weight(&self, r: usize) -> usize {
        self.row_words(r)
            .iter()
            .map(|w| w.count_ones() as usize)
            .sum()
    }

    pub fn col_weight(&self, c: usize) -> usize {
        (0..self.rows).filter(|&r| self.get(r, c)).count()
    }

    pub fn nnz(&self) -> usize {
        self.data.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|&w| w == 0)
    }

    fn xor_row_into(&mut self, src: usize, dst: usize) {
        debug_assert_ne!(src, dst);
        let stride = self.stride;
        let (s, d) = if src < dst {
            let (a, b) = self.data.split_at_mut(dst * stride);
            (&a[src * stride..(src + 1) * stride], &mut b[..stride])
        } else {
            let (a, b) = self.data.split_at_mut(src * stride);
            (
                &b[..stride] as &[u64],
                &mut a[dst * stride..(dst + 1) * stride],
            )
        };
        for (x, y) in d.iter_mut().zip(s) {
            *x ^= *y;
        }
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for w in 0..self.stride {
            self.data.swap(a * self.stride + w, b * self.stride + w);
        }
    }

    pub fn transpose(&self) -> BitMatrix {
        let mut t = BitMatrix::zeros(self.cols, self.rows);
        for r in 0..self.rows {
            for c in self.row(r).iter_ones() {
                t.set(c, r, true);
            }
        }
        t
    }

    /// Matrix-vector product `A·x` over GF(2).
    pub fn mul(&self, x: &BitVector) -> Result<BitVector> {
        if x.len() != self.cols {
            return Err(Error::Dimension {
                op: "mul",
                expected: self.cols,
                found: x.len(),
            });
        }
        Ok(BitVector::from_bools(
            (0..self.rows).map(|r| parity_and(self.row_words(r), x.words())),
        ))
    }

    /// Matrix product `A·B` over GF(2).
    pub fn matmul(&self, other: &BitMatrix) -> Result<BitMatrix> {
        if self.cols != other.rows {
            return Err(Error::Dimension {
                op: "matmul",
                expected: self.cols,
                found: other.rows,
            });
        }
        let mut out = BitMatrix::zeros(self.rows, other.cols);
        for r in 0..self.rows {
            for k in self.row(r).iter_ones() {
                let src = other.row_words(k);
                for (d, s) in out.row_words_mut(r).iter_mut().zip(src) {
                    *d ^= *s;
                }
            }
        }
        Ok(out)
    }

    /// Kronecker product `A ⊗ B`.
    pub fn kron(&self, other: &BitMatrix) -> BitMatrix {
        let mut out = BitMatrix::zeros(self.rows * other.rows, self.cols * other.cols);
        for r1 in 0..self.rows {
            for c1 in self.row(r1).iter_ones() {
                for r2 in 0..other.rows {
                    for c2 in other.row(r2).iter_ones() {
                        out.set(r1 * other.rows + r2, c1 * other.cols + c2, true);
                    }
                }
            }
        }
        out
    }

    /// Horizontal concatenation `[A | B]`.
    pub fn hstack(&self, other: &BitMatrix) -> Result<BitMatrix> {
        if self.rows != other.rows {
            return Err(Error::Dimension {
                op: "hstack",
                expected: self.rows,
                found: other.rows,
            });
        }
        let mut out = BitMatrix::zeros(self.rows, self.cols + other.cols);
        for r in 0..self.rows {
            for c in self.row(r).iter_ones() {
                out.set(r, c, true);
            }
            for c in other.row(r).iter_ones() {
                out.set(r, self.cols + c, true);
            }
        }
        Ok(out)
    }

    /// Vertical concatenation `[A ; B]`.
    pub fn vstack(&self, other: &BitMatrix) -> Result<BitMatrix> {
        if self.cols != other.cols {
            return Err(Error::Dimension {
                op: "vstack",
                expected: self.cols,
                found: other.cols,
            });
        }
        let mut data = self.data.clone();
        data.extend_from_slice(&other.data);
        Ok(BitMatrix {
            rows: self.rows + other.rows,
            cols: self.cols,
            stride: self.stride,
            data,
        })
    }

    /// Reduced row echelon form by Gauss-Jordan elimination. Pivots are taken in
    /// increasing column order, zero rows sink to the bottom.
    pub fn row_reduce(&self) -> RowEchelon {
        let mut m = self.clone();
        let mut pivot_cols = Vec::new();
        let mut rank = 0;
        for c in 0..m.cols {
            if rank == m.rows {
                break;
            }
            let Some(p) = (rank..m.rows).find(|&r| m.get(r, c)) else {
                continue;
            };
            m.swap_rows(rank, p);
            for r in 0..m.rows {
                if r != rank && m.get(r, c) {
                    m.xor_row_into(rank, r);
                }
            }
            pivot_cols.push(c);
            rank += 1;
        }
        RowEchelon {
            reduced: m,
            rank,
            pivot_cols,
        }
    }

    pub fn rank(&self) -> usize {
        self.row_reduce().rank
    }

    /// Whether `v` is a GF(2) combination of the rows of `self`.
    pub fn in_rowspace(&self, v: &BitVector) -> Result<bool> {
        if v.len() != self.cols {
            return Err(Error::Dimension {
                op: "in_rowspace",
                expected: self.cols,
                found: v.len(),
            });
        }
        let ech = self.row_reduce();
        Ok(ech.reduce_vector(v).is_zero())
    }

    /// Solves `A·x = b`. Free variables are fixed to zero, so the answer is
    /// deterministic. Returns `None` when `b` is outside the column space.
    pub fn solve(&self, b: &BitVector) -> Result<Option<BitVector>> {
        if b.len() != self.rows {
            return Err(Error::Dimension {
                op: "solve",
                expected: self.rows,
                found: b.len(),
            });
        }
        // Eliminate on [A | b].
        let mut aug = BitMatrix::zeros(self.rows, self.cols + 1);
        for r in 0..self.rows {
            aug.row_words_mut(r)[..self.stride].copy_from_slice(self.row_words(r));
            if b.get(r) {
                aug.set(r, self.cols, true);
            }
        }
        let ech = aug.row_reduce();
        if ech.pivot_cols.last() == Some(&self.cols) {
            return Ok(None);
        }
        let mut x = BitVector::zeros(self.cols);
        for (r, &c) in ech.pivot_cols.iter().enumerate() {
            if ech.reduced.get(r, self.cols) {
                x.set(c, true);
            }
        }
        Ok(Some(x))
    }

    /// A basis of the right kernel `{x : A·x = 0}`, one vector per free column.
    pub fn kernel(&self) -> Vec<BitVector> {
        let ech = self.row_reduce();
        let mut is_pivot = vec![false; self.cols];
        for &c in &ech.pivot_cols {
            is_pivot[c] = true;
        }
        (0..self.cols)
            .filter(|&f| !is_pivot[f])
            .map(|f| {
                let mut v = BitVector::zeros(self.cols);
                v.set(f, true);
                for (r, &c) in ech.pivot_cols.iter().enumerate() {
                    if ech.reduced.get(r, f) {
                        v.set(c, true);
                    }
                }
                v
            })
            .collect()
    }

    /// Inverse of a square matrix, or `None` when singular.
    pub fn inverse(&self) -> Option<BitMatrix> {
        if self.rows != self.cols {
            return None;
        }
        let n = self.rows;
        let aug = self.hstack(&BitMatrix::identity(n)).ok()?;
        let ech = aug.row_reduce();
        if ech.pivot_cols.iter().take(n).copied().ne(0..n) {
            return None;
        }
        let mut inv = BitMatrix::zeros(n, n);
        for r in 0..n {
            for c in 0..n {
                if ech.reduced.get(r, n + c) {
                    inv.set(r, c, true);
                }
            }
        }
        Some(inv)
    }
}

impl RowEchelon {
    /// Reduces `v` against the pivot rows; the result is zero iff `v` lies in
    /// the row space.
    pub fn reduce_vector(&self, v: &BitVector) -> BitVector {
        let mut v = v.clone();
        for (r, &c) in self.pivot_cols.iter().enumerate() {
            if v.get(c) {
                for (x, y) in v.words.iter_mut().zip(self.reduced.row_words(r)) {
                    *x ^= *y;
                }
            }
        }
        v
    }
}

impl fmt::Debug for BitMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "BitMatrix {}x{} [", self.rows, self.cols)?;
        for r in 0..self.rows {
            writeln!(f, "  {}", self.row(r))?;
        }
        write!(f, "]")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    pub(crate) fn hamming() -> BitMatrix {
        BitMatrix::from_rows(&[
            [1, 0, 1, 0, 1, 0, 1],
            [0, 1, 1, 0, 0, 1, 1],
            [0, 0, 0, 1, 1, 1, 1],
        ])
    }

    /// Every vector in the row span, by enumerating all 2^rows combinations.
    fn span(a: &BitMatrix) -> Vec<BitVector> {
        assert!(a.rows() <= 16);
        (0u32..1 << a.rows())
            .map(|mask| {
                let mut v = BitVector::zeros(a.cols());
                for r in 0..a.rows() {
                    if mask >> r & 1 == 1 {
                        v.xor_assign(&a.row(r));
                    }
                }
                v
            })
            .collect()
    }

    fn brute_rank(a: &BitMatrix) -> usize {
        let mut vs = span(a);
        vs.sort_by(|x, y| x.words().cmp(y.words()));
        vs.dedup();
        vs.len().trailing_zeros() as usize
    }

    fn arb_matrix(max_rows: usize, max_cols: usize) -> impl Strategy<Value = BitMatrix> {
        (1..=max_rows, 1..=max_cols).prop_flat_map(|(r, c)| {
            proptest::collection::vec(proptest::bool::ANY, r * c).prop_map(move |bits| {
                let mut m = BitMatrix::zeros(r, c);
                for (i, b) in bits.into_iter().enumerate() {
                    m.set(i / c, i % c, b);
                }
                m
            })
        })
    }

    #[test]
    fn mul_examples() {
        let x = BitVector::parse("101").unwrap();
        assert_eq!(BitMatrix::identity(3).mul(&x).unwrap(), x);
        assert!(BitMatrix::zeros(2, 3).mul(&x).unwrap().is_zero());
        let h = hamming();
        let e0 = BitVector::from_support(7, &[0]);
        assert_eq!(h.mul(&e0).unwrap(), h.column(0));
        assert!(matches!(
            h.mul(&BitVector::zeros(6)),
            Err(Error::Dimension { .. })
        ));
    }

    #[test]
    fn row_reduce_examples() {
        let ech = BitMatrix::identity(4).row_reduce();
        assert_eq!(ech.rank, 4);
        assert_eq!(ech.pivot_cols, vec![0, 1, 2, 3]);
        assert_eq!(hamming().rank(), 3);
        assert_eq!(brute_rank(&hamming()), 3);
        let dup = BitMatrix::from_rows(&[[1, 1, 0, 1], [1, 1, 0, 1]]);
        assert_eq!(dup.rank(), 1);
    }

    #[test]
    fn in_rowspace_examples() {
        let a = hamming();
        assert!(a.in_rowspace(&BitVector::zeros(7)).unwrap());
        assert!(BitMatrix::identity(3)
            .in_rowspace(&BitVector::parse("110").unwrap())
            .unwrap());
        let e0 = BitVector::from_support(7, &[0]);
        assert!(!span(&a).contains(&e0));
        assert!(!a.in_rowspace(&e0).unwrap());
    }

    #[test]
    fn solve_examples() {
        let b = BitVector::parse("010").unwrap();
        assert_eq!(BitMatrix::identity(3).solve(&b).unwrap(), Some(b.clone()));
        assert_eq!(BitMatrix::zeros(3, 4).solve(&b).unwrap(), None);
        let h = hamming();
        let e = BitVector::parse("0110010").unwrap();
        let s = h.mul(&e).unwrap();
        let x = h.solve(&s).unwrap().unwrap();
        assert_eq!(h.mul(&x).unwrap(), s);
        assert!(h.solve(&BitVector::zeros(2)).is_err());
    }

    #[test]
    fn kernel_and_inverse() {
        let h = hamming();
        let k = h.kernel();
        assert_eq!(k.len(), 4);
        for v in &k {
            assert!(h.mul(v).unwrap().is_zero());
        }
        let m = BitMatrix::from_rows(&[[1, 1, 0], [0, 1, 1], [0, 0, 1]]);
        let inv = m.inverse().unwrap();
        assert_eq!(m.matmul(&inv).unwrap(), BitMatrix::identity(3));
        assert!(BitMatrix::from_rows(&[[1, 1], [1, 1]]).inverse().is_none());
    }

    #[test]
    fn byte_packing() {
        let v = BitVector::parse("1011000011").unwrap();
        let bytes = v.to_bytes();
        assert_eq!(bytes, vec![0b0000_1101, 0b11]);
        assert_eq!(BitVector::from_bytes(10, &bytes).unwrap(), v);
        assert!(BitVector::from_bytes(10, &[0, 0b100]).is_err());
    }

    proptest! {
        #[test]
        fn mul_is_linear(a in arb_matrix(8, 70), seed in any::<u64>()) {
            let n = a.cols();
            let x = BitVector::from_bools((0..n).map(|i| (seed >> (i % 64)) & 1 == 1));
            let y = BitVector::from_bools((0..n).map(|i| (seed.rotate_left(7) >> (i % 64)) & 1 == 0));
            let lhs = a.mul(&x.xor(&y)).unwrap();
            let rhs = a.mul(&x).unwrap().xor(&a.mul(&y).unwrap());
            prop_assert_eq!(lhs, rhs);
        }

        #[test]
        fn rank_matches_span_enumeration(a in arb_matrix(10, 12)) {
            prop_assert_eq!(a.rank(), brute_rank(&a));
            let ech = a.row_reduce();
            prop_assert!(ech.pivot_cols.windows(2).all(|w| w[0] < w[1]));
        }

        #[test]
        fn rowspace_matches_enumeration(a in arb_matrix(8, 10), bits in any::<u16>()) {
            let v = BitVector::from_bools((0..a.cols()).map(|i| bits >> i & 1 == 1));
            prop_assert_eq!(a.in_rowspace(&v).unwrap(), span(&a).contains(&v));
        }

        #[test]
        fn solve_satisfies_system(a in arb_matrix(10, 12), bits in any::<u16>()) {
            let b = BitVector::from_bools((0..a.rows()).map(|i| bits >> i & 1 == 1));
            let brute = (0u32..1 << a.cols()).any(|x| {
                let xv = BitVector::from_bools((0..a.cols()).map(|i| x >> i & 1 == 1));
                a.mul(&xv).unwrap() == b
            });
            match a.solve(&b).unwrap() {
                Some(x) => prop_assert_eq!(a.mul(&x).unwrap(), b),
                None => prop_assert!(!brute),
            }
        }
    }
}
