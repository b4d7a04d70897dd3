//! Dense linear algebra over the two-element field.
//!
//! Vectors are packed 64 entries per `u64` word. Matrices are stored as a
//! list of row vectors. All elimination routines pivot on the first nonzero
//! column and take the lowest available row, so bases produced here are
//! reproducible across runs and platforms.

use std::fmt;

use crate::error::{Error, Result};

const WORD: usize = 64;

#[inline]
fn words_for(len: usize) -> usize {
    len.div_ceil(WORD)
}

/// A vector in `F_2^len`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct BitVector {
    len: usize,
    words: Vec<u64>,
}

impl BitVector {
    pub fn zeros(len: usize) -> Self {
        BitVector {
            len,
            words: vec![0; words_for(len)],
        }
    }

    /// The standard basis vector `e_index`.
    pub fn unit(len: usize, index: usize) -> Self {
        let mut v = Self::zeros(len);
        v.set(index, true);
        v
    }

    pub fn from_bools<I: IntoIterator<Item = bool>>(bits: I) -> Self {
        let bits: Vec<bool> = bits.into_iter().collect();
        let mut v = Self::zeros(bits.len());
        for (i, b) in bits.into_iter().enumerate() {
            if b {
                v.set(i, true);
            }
        }
        v
    }

    /// Builds a vector of length `len` with ones at `ones`.
    pub fn from_ones(len: usize, ones: &[usize]) -> Self {
        let mut v = Self::zeros(len);
        for &i in ones {
            v.flip(i);
        }
        v
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.len
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    #[inline]
    pub fn get(&self, i: usize) -> bool {
        assert!(i < self.len, "index {i} out of range for length {}", self.len);
        (self.words[i / WORD] >> (i % WORD)) & 1 == 1
    }

    #[inline]
    pub fn set(&mut self, i: usize, value: bool) {
        assert!(i < self.len, "index {i} out of range for length {}", self.len);
        let mask = 1u64 << (i % WORD);
        if value {
            self.words[i / WORD] |= mask;
        } else {
            self.words[i / WORD] &= !mask;
        }
    }

    #[inline]
    pub fn flip(&mut self, i: usize) {
        assert!(i < self.len, "index {i} out of range for length {}", self.len);
        self.words[i / WORD] ^= 1u64 << (i % WORD);
    }

    /// Entrywise XOR.
    pub fn add_assign(&mut self, other: &BitVector) {
        assert_eq!(self.len, other.len, "length mismatch in vector addition");
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a ^= *b;
        }
    }

    pub fn is_zero(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    pub fn count_ones(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    /// Inner product over `F_2`.
    pub fn dot(&self, other: &BitVector) -> bool {
        assert_eq!(self.len, other.len, "length mismatch in dot product");
        let ones: u32 = self
            .words
            .iter()
            .zip(&other.words)
            .map(|(a, b)| (a & b).count_ones())
            .sum();
        ones % 2 == 1
    }

    pub fn first_one(&self) -> Option<usize> {
        self.words
            .iter()
            .enumerate()
            .find(|(_, &w)| w != 0)
            .map(|(i, w)| i * WORD + w.trailing_zeros() as usize)
    }

    pub fn iter_ones(&self) -> impl Iterator<Item = usize> + '_ {
        self.words.iter().enumerate().flat_map(|(wi, &w)| {
            let mut w = w;
            std::iter::from_fn(move || {
                if w == 0 {
                    return None;
                }
                let tz = w.trailing_zeros() as usize;
                w &= w - 1;
                Some(wi * WORD + tz)
            })
        })
    }

    /// Concatenation `self ++ other`.
    pub fn concat(&self, other: &BitVector) -> BitVector {
        let mut out = BitVector::zeros(self.len + other.len);
        for i in self.iter_ones() {
            out.set(i, true);
        }
        for i in other.iter_ones() {
            out.set(self.len + i, true);
        }
        out
    }

    /// The entries in `start..start + len`.
    pub fn slice(&self, start: usize, len: usize) -> BitVector {
        assert!(start + len <= self.len);
        let mut out = BitVector::zeros(len);
        for i in self.iter_ones() {
            if i >= start && i < start + len {
                out.set(i - start, true);
            }
        }
        out
    }
}

impl fmt::Debug for BitVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for i in 0..self.len {
            write!(f, "{}", if self.get(i) { '1' } else { '0' })?;
        }
        write!(f, "]")
    }
}

/// A `rows x cols` matrix over `F_2`, row-major.
///
/// Throughout the crate a matrix represents a linear map acting on column
/// vectors: columns index the source basis and rows index the target basis.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct BitMatrix {
    rows: usize,
    cols: usize,
    data: Vec<BitVector>,
}

impl BitMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        BitMatrix {
            rows,
            cols,
            data: vec![BitVector::zeros(cols); rows],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.set(i, i, true);
        }
        m
    }

    /// Builds a matrix from row vectors, all of length `cols`.
    pub fn from_rows(cols: usize, rows: Vec<BitVector>) -> Self {
        for r in &rows {
            assert_eq!(r.len(), cols, "row length mismatch");
        }
        BitMatrix {
            rows: rows.len(),
            cols,
            data: rows,
        }
    }

    /// Builds a matrix whose `j`-th column is `columns[j]`.
    pub fn from_columns(rows: usize, columns: &[BitVector]) -> Self {
        let mut m = Self::zeros(rows, columns.len());
        for (j, c) in columns.iter().enumerate() {
            assert_eq!(c.len(), rows, "column length mismatch");
            for i in c.iter_ones() {
                m.set(i, j, true);
            }
        }
        m
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> bool) -> Self {
        let mut m = Self::zeros(rows, cols);
        for i in 0..rows {
            for j in 0..cols {
                if f(i, j) {
                    m.set(i, j, true);
                }
            }
        }
        m
    }

    /// Parses rows of `0`/`1` characters, ignoring whitespace.
    pub fn from_strs(cols: usize, rows: &[&str]) -> Self {
        let data = rows
            .iter()
            .map(|r| BitVector::from_bools(r.chars().filter(|c| !c.is_whitespace()).map(|c| c == '1')))
            .collect();
        Self::from_rows(cols, data)
    }

    #[inline]
    pub fn rows(&self) -> usize {
        self.rows
    }

    #[inline]
    pub fn cols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> bool {
        self.data[i].get(j)
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, value: bool) {
        self.data[i].set(j, value)
    }

    pub fn row(&self, i: usize) -> &BitVector {
        &self.data[i]
    }

    pub fn row_vectors(&self) -> &[BitVector] {
        &self.data
    }

    pub fn column(&self, j: usize) -> BitVector {
        BitVector::from_bools((0..self.rows).map(|i| self.get(i, j)))
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(BitVector::is_zero)
    }

    pub fn transpose(&self) -> BitMatrix {
        let mut t = BitMatrix::zeros(self.cols, self.rows);
        for (i, row) in self.data.iter().enumerate() {
            for j in row.iter_ones() {
                t.set(j, i, true);
            }
        }
        t
    }

    /// `self * v` for a column vector `v`.
    pub fn mul_vec(&self, v: &BitVector) -> BitVector {
        assert_eq!(self.cols, v.len(), "dimension mismatch in matrix-vector product");
        BitVector::from_bools(self.data.iter().map(|row| row.dot(v)))
    }

    /// The matrix product `self * other`.
    pub fn mul(&self, other: &BitMatrix) -> BitMatrix {
        assert_eq!(self.cols, other.rows, "dimension mismatch in matrix product");
        let data = self
            .data
            .iter()
            .map(|row| {
                let mut acc = BitVector::zeros(other.cols);
                for k in row.iter_ones() {
                    acc.add_assign(&other.data[k]);
                }
                acc
            })
            .collect();
        BitMatrix {
            rows: self.rows,
            cols: other.cols,
            data,
        }
    }

    pub fn add(&self, other: &BitMatrix) -> BitMatrix {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        let mut out = self.clone();
        for (a, b) in out.data.iter_mut().zip(&other.data) {
            a.add_assign(b);
        }
        out
    }

    /// Reduced row echelon form together with the pivot columns.
    pub fn rref(&self) -> (BitMatrix, Vec<usize>) {
        let mut rows = self.data.clone();
        let mut pivots = Vec::new();
        let mut next = 0;
        for col in 0..self.cols {
            let Some(p) = (next..rows.len()).find(|&r| rows[r].get(col)) else {
                continue;
            };
            rows.swap(next, p);
            let pivot_row = rows[next].clone();
            for (r, row) in rows.iter_mut().enumerate() {
                if r != next && row.get(col) {
                    row.add_assign(&pivot_row);
                }
            }
            pivots.push(col);
            next += 1;
            if next == rows.len() {
                break;
            }
        }
        (
            BitMatrix {
                rows: self.rows,
                cols: self.cols,
                data: rows,
            },
            pivots,
        )
    }

    /// Dimension of the row space.
    pub fn rank(&self) -> usize {
        self.rref().1.len()
    }

    /// The canonical echelon basis of `{ v : self * v = 0 }`, one vector per
    /// pivot-free column, ordered by that column.
    pub fn kernel_basis(&self) -> Vec<BitVector> {
        let (r, pivots) = self.rref();
        let mut is_pivot = vec![false; self.cols];
        for &p in &pivots {
            is_pivot[p] = true;
        }
        (0..self.cols)
            .filter(|&c| !is_pivot[c])
            .map(|free| {
                let mut v = BitVector::unit(self.cols, free);
                for (row, &p) in pivots.iter().enumerate() {
                    if r.get(row, free) {
                        v.set(p, true);
                    }
                }
                v
            })
            .collect()
    }

    /// Stacks `self` on top of `other`.
    pub fn vstack(&self, other: &BitMatrix) -> BitMatrix {
        assert_eq!(self.cols, other.cols);
        let mut data = self.data.clone();
        data.extend(other.data.iter().cloned());
        BitMatrix {
            rows: self.rows + other.rows,
            cols: self.cols,
            data,
        }
    }

    /// Block-diagonal sum.
    pub fn block_diag(blocks: &[BitMatrix]) -> BitMatrix {
        let rows: usize = blocks.iter().map(|b| b.rows).sum();
        let cols: usize = blocks.iter().map(|b| b.cols).sum();
        let mut m = BitMatrix::zeros(rows, cols);
        let (mut r0, mut c0) = (0, 0);
        for b in blocks {
            for i in 0..b.rows {
                for j in b.data[i].iter_ones() {
                    m.set(r0 + i, c0 + j, true);
                }
            }
            r0 += b.rows;
            c0 += b.cols;
        }
        m
    }
}

impl fmt::Debug for BitMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "BitMatrix {}x{}", self.rows, self.cols)?;
        for row in &self.data {
            writeln!(f, "  {row:?}")?;
        }
        Ok(())
    }
}

/// `dim ker(d_out) - rank(d_in)` for a composable pair `d_in: A -> V`,
/// `d_out: V -> B` with `d_out * d_in = 0`.
pub fn cohomology_dim(d_in: &BitMatrix, d_out: &BitMatrix) -> Result<usize> {
    if d_out.cols() != d_in.rows() {
        return Err(Error::DimensionMismatch {
            left: d_out.cols(),
            right: d_in.rows(),
        });
    }
    if !d_out.mul(d_in).is_zero() {
        return Err(Error::BrokenComplex(
            "composite of consecutive differentials is nonzero".into(),
        ));
    }
    let kernel = d_out.cols() - d_out.rank();
    Ok(kernel - d_in.rank())
}

/// A subspace of `F_2^ambient` kept in reduced echelon form.
///
/// Vectors are inserted one at a time; independent insertions are numbered
/// `0, 1, 2, ...` and [`Subspace::coordinates`] expresses members in terms of
/// them.
#[derive(Clone, Debug)]
pub struct Subspace {
    ambient: usize,
    rows: Vec<BitVector>,
    pivots: Vec<usize>,
    combos: Vec<BitVector>,
    generators: Vec<BitVector>,
}

impl Subspace {
    pub fn new(ambient: usize) -> Self {
        Subspace {
            ambient,
            rows: Vec::new(),
            pivots: Vec::new(),
            combos: Vec::new(),
            generators: Vec::new(),
        }
    }

    pub fn spanned_by<'a, I: IntoIterator<Item = &'a BitVector>>(ambient: usize, vectors: I) -> Self {
        let mut s = Self::new(ambient);
        for v in vectors {
            s.insert(v);
        }
        s
    }

    pub fn ambient(&self) -> usize {
        self.ambient
    }

    pub fn dim(&self) -> usize {
        self.rows.len()
    }

    pub fn pivots(&self) -> &[usize] {
        &self.pivots
    }

    /// The independent vectors accepted so far, in insertion order.
    pub fn generators(&self) -> &[BitVector] {
        &self.generators
    }

    /// Reduces `v` against the echelon rows, returning the remainder and the
    /// combination of generators that was subtracted.
    fn reduce_tracking(&self, v: &BitVector) -> (BitVector, BitVector) {
        assert_eq!(v.len(), self.ambient, "vector does not live in the ambient space");
        let mut rem = v.clone();
        let mut combo = BitVector::zeros(self.generators.len());
        for ((row, &p), c) in self.rows.iter().zip(&self.pivots).zip(&self.combos) {
            if rem.get(p) {
                rem.add_assign(row);
                let mut c = c.clone();
                resize(&mut c, self.generators.len());
                combo.add_assign(&c);
            }
        }
        (rem, combo)
    }

    /// The canonical representative of `v` modulo this subspace: zero at
    /// every pivot column.
    pub fn reduce(&self, v: &BitVector) -> BitVector {
        self.reduce_tracking(v).0
    }

    pub fn contains(&self, v: &BitVector) -> bool {
        self.reduce(v).is_zero()
    }

    /// Adds `v`; returns `true` if it was independent of what was there.
    pub fn insert(&mut self, v: &BitVector) -> bool {
        let (rem, mut combo) = self.reduce_tracking(v);
        let Some(p) = rem.first_one() else {
            return false;
        };
        let g = self.generators.len();
        self.generators.push(v.clone());
        resize(&mut combo, g + 1);
        combo.set(g, true);
        for c in &mut self.combos {
            resize(c, g + 1);
        }
        for i in 0..self.rows.len() {
            if self.rows[i].get(p) {
                self.rows[i].add_assign(&rem);
                let c = combo.clone();
                self.combos[i].add_assign(&c);
            }
        }
        let at = self.pivots.partition_point(|&q| q < p);
        self.rows.insert(at, rem);
        self.pivots.insert(at, p);
        self.combos.insert(at, combo);
        true
    }

    /// Coordinates of `v` with respect to [`Subspace::generators`], or
    /// `None` if `v` is not in the subspace.
    pub fn coordinates(&self, v: &BitVector) -> Option<BitVector> {
        let (rem, combo) = self.reduce_tracking(v);
        rem.is_zero().then_some(combo)
    }

    /// Columns not used as pivots; their unit vectors span a complement.
    pub fn complement_columns(&self) -> Vec<usize> {
        let mut is_pivot = vec![false; self.ambient];
        for &p in &self.pivots {
            is_pivot[p] = true;
        }
        (0..self.ambient).filter(|&c| !is_pivot[c]).collect()
    }
}

fn resize(v: &mut BitVector, len: usize) {
    if v.len() != len {
        let mut w = BitVector::zeros(len);
        for i in v.iter_ones() {
            w.set(i, true);
        }
        *v = w;
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn rank_examples() {
        assert_eq!(BitMatrix::identity(2).rank(), 2);
        assert_eq!(BitMatrix::from_strs(2, &["11"]).rank(), 1);
        assert_eq!(BitMatrix::from_strs(3, &["111", "111", "111"]).rank(), 1);
    }

    #[test]
    fn kernel_examples() {
        let k = BitMatrix::zeros(2, 3).kernel_basis();
        assert_eq!(k, vec![BitVector::unit(3, 0), BitVector::unit(3, 1), BitVector::unit(3, 2)]);
        let k = BitMatrix::from_strs(2, &["11"]).kernel_basis();
        assert_eq!(k, vec![BitVector::from_ones(2, &[0, 1])]);
        assert!(BitMatrix::identity(2).kernel_basis().is_empty());
    }

    #[test]
    fn cohomology_examples() {
        let v = 4;
        assert_eq!(cohomology_dim(&BitMatrix::zeros(v, 0), &BitMatrix::zeros(0, v)).unwrap(), 4);
        let d_in = BitMatrix::from_strs(1, &["1", "0"]);
        let d_out = BitMatrix::from_strs(2, &["01"]);
        assert_eq!(cohomology_dim(&d_in, &d_out).unwrap(), 0);
        assert_eq!(
            cohomology_dim(&BitMatrix::zeros(3, 2), &BitMatrix::identity(3)).unwrap(),
            0
        );
    }

    #[test]
    fn cohomology_rejects_broken_complex() {
        let d = BitMatrix::identity(2);
        assert!(matches!(cohomology_dim(&d, &d), Err(Error::BrokenComplex(_))));
    }

    #[test]
    fn subspace_coordinates() {
        let a = BitVector::from_ones(4, &[0, 1]);
        let b = BitVector::from_ones(4, &[1, 2]);
        let mut s = Subspace::new(4);
        assert!(s.insert(&a));
        assert!(s.insert(&b));
        assert!(!s.insert(&BitVector::from_ones(4, &[0, 2])));
        let c = s.coordinates(&BitVector::from_ones(4, &[0, 2])).unwrap();
        assert_eq!(c, BitVector::from_ones(2, &[0, 1]));
        assert!(s.coordinates(&BitVector::unit(4, 3)).is_none());
        assert_eq!(s.complement_columns(), vec![2, 3]);
    }

    fn brute_span(vectors: &[BitVector], len: usize) -> Vec<BitVector> {
        let mut span = vec![BitVector::zeros(len)];
        for v in vectors {
            let shifted: Vec<_> = span
                .iter()
                .map(|w| {
                    let mut w = w.clone();
                    w.add_assign(v);
                    w
                })
                .collect();
            for w in shifted {
                if !span.contains(&w) {
                    span.push(w);
                }
            }
        }
        span
    }

    fn arb_matrix(max_rows: usize, max_cols: usize) -> impl Strategy<Value = BitMatrix> {
        (0..=max_rows, 0..=max_cols).prop_flat_map(|(r, c)| {
            proptest::collection::vec(any::<bool>(), r * c)
                .prop_map(move |bits| BitMatrix::from_fn(r, c, |i, j| bits[i * c + j]))
        })
    }

    proptest! {
        #[test]
        fn rank_nullity(m in arb_matrix(9, 70)) {
            let kernel = m.kernel_basis();
            prop_assert_eq!(m.rank() + kernel.len(), m.cols());
            for v in &kernel {
                prop_assert!(m.mul_vec(v).is_zero());
            }
            let mut s = Subspace::new(m.cols());
            for v in &kernel {
                prop_assert!(s.insert(v));
            }
        }

        #[test]
        fn rank_invariant_under_row_permutation(m in arb_matrix(8, 12), seed in any::<u64>()) {
            let mut rows: Vec<BitVector> = m.row_vectors().to_vec();
            let mut x = seed;
            for i in (1..rows.len()).rev() {
                x = x.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
                rows.swap(i, (x >> 33) as usize % (i + 1));
            }
            let p = BitMatrix::from_rows(m.cols(), rows);
            prop_assert_eq!(p.rank(), m.rank());
        }

        #[test]
        fn cohomology_matches_enumeration(
            a in 0usize..5, v in 1usize..9, b in 0usize..5, bits in proptest::collection::vec(any::<bool>(), 200)
        ) {
            // d_out random, d_in built from kernel vectors of d_out so the pair composes to zero
            let d_out = BitMatrix::from_fn(b, v, |i, j| bits[i * v + j]);
            let kernel = d_out.kernel_basis();
            let cols: Vec<BitVector> = (0..a)
                .map(|c| {
                    let mut acc = BitVector::zeros(v);
                    for (t, kv) in kernel.iter().enumerate() {
                        if bits[100 + (c * 7 + t) % 100] {
                            acc.add_assign(kv);
                        }
                    }
                    acc
                })
                .collect();
            let d_in = BitMatrix::from_columns(v, &cols);
            let all: Vec<BitVector> = (0..1usize << v)
                .map(|x| BitVector::from_bools((0..v).map(|i| x >> i & 1 == 1)))
                .collect();
            let ker = all.iter().filter(|x| d_out.mul_vec(x).is_zero()).count();
            let im = brute_span(&cols, v).len();
            // |ker| / |im| = 2^(dim H)
            let expected = (ker / im).trailing_zeros() as usize;
            prop_assert_eq!(cohomology_dim(&d_in, &d_out).unwrap(), expected);
        }
    }
}
