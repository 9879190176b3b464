//! Binary matrices with cached margins.
//!
//! Cells are packed 64 to a word twice over: once row-major and once
//! column-major. Every chain step reads a row or a column and then toggles a
//! handful of cells, so keeping both layouts in sync is cheaper than
//! transposing on demand.

use std::fmt;
use std::str::FromStr;

use thiserror::Error;

const WORD: usize = 64;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum MatrixError {
    #[error("matrix must have at least one row and one column")]
    Empty,
    #[error("row {row} has {found} cells, expected {expected}")]
    Ragged { row: usize, expected: usize, found: usize },
    #[error("non-binary entry {value} at ({row},{col})")]
    NonBinary { row: usize, col: usize, value: i64 },
    #[error("line {line}, column {column}: {message}")]
    Parse { line: usize, column: usize, message: String },
    #[error("quad {0} must use two distinct rows and two distinct columns")]
    DegenerateQuad(SwapQuad),
    #[error("quad {quad} is out of bounds for a {rows}x{cols} matrix")]
    OutOfBounds { quad: SwapQuad, rows: usize, cols: usize },
    #[error("quad {0} is not a checkerboard unit")]
    NotCheckerboard(SwapQuad),
    #[error("dimension mismatch: {0}x{1} vs {2}x{3}")]
    DimensionMismatch(usize, usize, usize, usize),
    #[error("margin vectors must be non-empty")]
    EmptyMargins,
}

/// The corners of a 2x2 submatrix: rows `r1`,`r2` and columns `c1`,`c2`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SwapQuad {
    pub r1: usize,
    pub r2: usize,
    pub c1: usize,
    pub c2: usize,
}

impl SwapQuad {
    pub fn new(r1: usize, r2: usize, c1: usize, c2: usize) -> Result<Self, MatrixError> {
        let quad = SwapQuad { r1, r2, c1, c2 };
        if r1 == r2 || c1 == c2 {
            return Err(MatrixError::DegenerateQuad(quad));
        }
        Ok(quad)
    }

    /// Same cells with rows and columns listed in increasing order.
    pub fn normalized(self) -> Self {
        SwapQuad {
            r1: self.r1.min(self.r2),
            r2: self.r1.max(self.r2),
            c1: self.c1.min(self.c2),
            c2: self.c1.max(self.c2),
        }
    }
}

impl fmt::Display for SwapQuad {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(rows {},{}; cols {},{})", self.r1, self.r2, self.c1, self.c2)
    }
}

/// Row and column sums of a binary matrix.
///
/// Feasibility is not checked here; see [`crate::feasibility`].
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Margins {
    rows: Vec<usize>,
    cols: Vec<usize>,
}

impl Margins {
    pub fn new(rows: Vec<usize>, cols: Vec<usize>) -> Result<Self, MatrixError> {
        if rows.is_empty() || cols.is_empty() {
            return Err(MatrixError::EmptyMargins);
        }
        Ok(Margins { rows, cols })
    }

    pub fn rows(&self) -> &[usize] {
        &self.rows
    }

    pub fn cols(&self) -> &[usize] {
        &self.cols
    }

    pub fn m(&self) -> usize {
        self.rows.len()
    }

    pub fn n(&self) -> usize {
        self.cols.len()
    }
}

impl fmt::Display for Margins {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "r={:?} c={:?}", self.rows, self.cols)
    }
}

/// Ordered token identifying a matrix: its cells as a row-major bit string.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CanonicalKey {
    // MSB-first so that word order matches bit-string order.
    words: Vec<u64>,
    len: usize,
}

impl CanonicalKey {
    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    fn bit(&self, k: usize) -> bool {
        self.words[k / WORD] >> (WORD - 1 - k % WORD) & 1 == 1
    }
}

impl fmt::Display for CanonicalKey {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for k in 0..self.len {
            f.write_str(if self.bit(k) { "1" } else { "0" })?;
        }
        Ok(())
    }
}

/// Dense 0/1 matrix with cached row and column sums.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct BinaryMatrix {
    m: usize,
    n: usize,
    row_stride: usize,
    col_stride: usize,
    row_bits: Vec<u64>,
    col_bits: Vec<u64>,
    row_sums: Vec<usize>,
    col_sums: Vec<usize>,
}

fn words_for(bits: usize) -> usize {
    bits.div_ceil(WORD)
}

/// Index of the `k`-th set bit (0-based) in a packed word slice.
fn select_one(words: &[u64], mut k: usize) -> Option<usize> {
    for (w, &word) in words.iter().enumerate() {
        let ones = word.count_ones() as usize;
        if k < ones {
            let mut x = word;
            for _ in 0..k {
                x &= x - 1;
            }
            return Some(w * WORD + x.trailing_zeros() as usize);
        }
        k -= ones;
    }
    None
}

fn is_comment(line: &str) -> bool {
    line.trim_start().starts_with('#')
}

impl BinaryMatrix {
    pub fn zeros(m: usize, n: usize) -> Result<Self, MatrixError> {
        if m == 0 || n == 0 {
            return Err(MatrixError::Empty);
        }
        let row_stride = words_for(n);
        let col_stride = words_for(m);
        Ok(BinaryMatrix {
            m,
            n,
            row_stride,
            col_stride,
            row_bits: vec![0; m * row_stride],
            col_bits: vec![0; n * col_stride],
            row_sums: vec![0; m],
            col_sums: vec![0; n],
        })
    }

    /// Builds a matrix from rows of integers, each of which must be 0 or 1.
    pub fn from_grid<R: AsRef<[T]>, T: Copy + Into<i64>>(grid: &[R]) -> Result<Self, MatrixError> {
        let m = grid.len();
        let n = grid.first().map_or(0, |r| r.as_ref().len());
        let mut out = BinaryMatrix::zeros(m, n)?;
        for (i, row) in grid.iter().enumerate() {
            let row = row.as_ref();
            if row.len() != n {
                return Err(MatrixError::Ragged { row: i, expected: n, found: row.len() });
            }
            for (j, &v) in row.iter().enumerate() {
                match v.into() {
                    0 => {}
                    1 => out.flip(i, j),
                    value => return Err(MatrixError::NonBinary { row: i, col: j, value }),
                }
            }
        }
        Ok(out)
    }

    pub fn from_fn(m: usize, n: usize, mut f: impl FnMut(usize, usize) -> bool) -> Result<Self, MatrixError> {
        let mut out = BinaryMatrix::zeros(m, n)?;
        for i in 0..m {
            for j in 0..n {
                if f(i, j) {
                    out.flip(i, j);
                }
            }
        }
        Ok(out)
    }

    /// Parses the text format: one row per line, cells `0`/`1` separated by
    /// spaces. Blank lines and lines starting with `#` are ignored.
    pub fn from_text(text: &str) -> Result<Self, MatrixError> {
        let mut grid: Vec<Vec<u8>> = Vec::new();
        for (ln, line) in text.lines().enumerate() {
            if line.trim().is_empty() || is_comment(line) {
                continue;
            }
            let mut row = Vec::new();
            for (col, tok) in line.split_whitespace().enumerate() {
                let v = match tok {
                    "0" => 0,
                    "1" => 1,
                    other => {
                        return Err(MatrixError::Parse {
                            line: ln + 1,
                            column: col + 1,
                            message: format!("expected 0 or 1, found {other:?}"),
                        })
                    }
                };
                row.push(v);
            }
            if let Some(first) = grid.first() {
                if first.len() != row.len() {
                    return Err(MatrixError::Parse {
                        line: ln + 1,
                        column: row.len().min(first.len()) + 1,
                        message: format!("expected {} cells, found {}", first.len(), row.len()),
                    });
                }
            }
            grid.push(row);
        }
        Self::from_grid(&grid)
    }

    /// Parses a sequence of matrices separated by blank lines.
    pub fn parse_many(text: &str) -> Result<Vec<Self>, MatrixError> {
        let mut out = Vec::new();
        let mut block = String::new();
        let mut block_start = 0;
        let mut flush = |block: &mut String, start: usize| -> Result<(), MatrixError> {
            if !block.trim().is_empty() {
                let parsed = Self::from_text(block).map_err(|e| match e {
                    MatrixError::Parse { line, column, message } => {
                        MatrixError::Parse { line: line + start, column, message }
                    }
                    other => other,
                })?;
                out.push(parsed);
            }
            block.clear();
            Ok(())
        };
        for (ln, line) in text.lines().enumerate() {
            if line.trim().is_empty() {
                flush(&mut block, block_start)?;
                block_start = ln + 1;
            } else if block.is_empty() && is_comment(line) {
                block_start = ln + 1;
            } else {
                block.push_str(line);
                block.push('\n');
            }
        }
        flush(&mut block, block_start)?;
        Ok(out)
    }

    pub fn rows(&self) -> usize {
        self.m
    }

    pub fn cols(&self) -> usize {
        self.n
    }

    pub fn row_sums(&self) -> &[usize] {
        &self.row_sums
    }

    pub fn col_sums(&self) -> &[usize] {
        &self.col_sums
    }

    pub fn margins(&self) -> Margins {
        Margins { rows: self.row_sums.clone(), cols: self.col_sums.clone() }
    }

    pub fn ones(&self) -> usize {
        self.row_sums.iter().sum()
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> bool {
        assert!(i < self.m && j < self.n, "cell ({i},{j}) out of bounds");
        self.row_bits[i * self.row_stride + j / WORD] >> (j % WORD) & 1 == 1
    }

    /// Packed bits of row `i`, LSB-first; trailing padding bits are zero.
    pub fn row_words(&self, i: usize) -> &[u64] {
        &self.row_bits[i * self.row_stride..(i + 1) * self.row_stride]
    }

    /// Packed bits of column `j`, LSB-first; trailing padding bits are zero.
    pub fn col_words(&self, j: usize) -> &[u64] {
        &self.col_bits[j * self.col_stride..(j + 1) * self.col_stride]
    }

    /// Column index of the `k`-th 1 in row `i`.
    pub fn nth_one_in_row(&self, i: usize, k: usize) -> Option<usize> {
        select_one(self.row_words(i), k)
    }

    /// Row index of the `k`-th 1 in column `j`.
    pub fn nth_one_in_col(&self, j: usize, k: usize) -> Option<usize> {
        select_one(self.col_words(j), k)
    }

    /// Column index of the `k`-th 0 in row `i`.
    pub fn nth_zero_in_row(&self, i: usize, mut k: usize) -> Option<usize> {
        for (w, &word) in self.row_words(i).iter().enumerate() {
            let width = WORD.min(self.n - w * WORD);
            let zeros = width - word.count_ones() as usize;
            if k < zeros {
                return select_one(&[!word], k).map(|b| w * WORD + b);
            }
            k -= zeros;
        }
        None
    }

    /// Row index of the `k`-th 0 in column `j`.
    pub fn nth_zero_in_col(&self, j: usize, mut k: usize) -> Option<usize> {
        for (w, &word) in self.col_words(j).iter().enumerate() {
            let width = WORD.min(self.m - w * WORD);
            let zeros = width - word.count_ones() as usize;
            if k < zeros {
                return select_one(&[!word], k).map(|b| w * WORD + b);
            }
            k -= zeros;
        }
        None
    }

    /// Toggles one cell, keeping both bit layouts and the cached sums in step.
    pub(crate) fn flip(&mut self, i: usize, j: usize) {
        let rw = i * self.row_stride + j / WORD;
        let cw = j * self.col_stride + i / WORD;
        let was_set = self.row_bits[rw] >> (j % WORD) & 1 == 1;
        self.row_bits[rw] ^= 1 << (j % WORD);
        self.col_bits[cw] ^= 1 << (i % WORD);
        if was_set {
            self.row_sums[i] -= 1;
            self.col_sums[j] -= 1;
        } else {
            self.row_sums[i] += 1;
            self.col_sums[j] += 1;
        }
    }

    pub fn check_quad(&self, q: SwapQuad) -> Result<(), MatrixError> {
        if q.r1 == q.r2 || q.c1 == q.c2 {
            return Err(MatrixError::DegenerateQuad(q));
        }
        if q.r1.max(q.r2) >= self.m || q.c1.max(q.c2) >= self.n {
            return Err(MatrixError::OutOfBounds { quad: q, rows: self.m, cols: self.n });
        }
        Ok(())
    }

    /// True iff the 2x2 submatrix at `q` is `[[1,0],[0,1]]` or `[[0,1],[1,0]]`.
    ///
    /// Panics if `q` lies outside the matrix.
    #[inline]
    pub fn is_checkerboard(&self, q: SwapQuad) -> bool {
        let a = self.get(q.r1, q.c1);
        a == self.get(q.r2, q.c2) && a != self.get(q.r1, q.c2) && a != self.get(q.r2, q.c1)
    }

    /// Swaps the checkerboard unit at `q` in place. Margins are unchanged.
    pub fn swap_in_place(&mut self, q: SwapQuad) -> Result<(), MatrixError> {
        self.check_quad(q)?;
        if !self.is_checkerboard(q) {
            return Err(MatrixError::NotCheckerboard(q));
        }
        self.flip_quad(q);
        Ok(())
    }

    /// Unchecked variant for the chain hot paths; caller guarantees a checkerboard.
    #[inline]
    pub(crate) fn flip_quad(&mut self, q: SwapQuad) {
        self.flip(q.r1, q.c1);
        self.flip(q.r1, q.c2);
        self.flip(q.r2, q.c1);
        self.flip(q.r2, q.c2);
    }

    /// Value-semantic swap: returns a copy with the checkerboard at `q` swapped.
    pub fn apply_swap(&self, q: SwapQuad) -> Result<BinaryMatrix, MatrixError> {
        let mut out = self.clone();
        out.swap_in_place(q)?;
        Ok(out)
    }

    pub fn canonical_key(&self) -> CanonicalKey {
        let len = self.m * self.n;
        let mut words = vec![0u64; words_for(len)];
        for i in 0..self.m {
            for j in self.ones_in_row(i) {
                let k = i * self.n + j;
                words[k / WORD] |= 1 << (WORD - 1 - k % WORD);
            }
        }
        CanonicalKey { words, len }
    }

    /// Column indices of the 1s in row `i`, ascending.
    pub fn ones_in_row(&self, i: usize) -> impl Iterator<Item = usize> + '_ {
        self.row_words(i).iter().enumerate().flat_map(|(w, &word)| {
            let mut x = word;
            std::iter::from_fn(move || {
                if x == 0 {
                    return None;
                }
                let b = x.trailing_zeros() as usize;
                x &= x - 1;
                Some(w * WORD + b)
            })
        })
    }

    /// Row-major grid of 0/1 values.
    pub fn to_grid(&self) -> Vec<Vec<u8>> {
        (0..self.m).map(|i| (0..self.n).map(|j| self.get(i, j) as u8).collect()).collect()
    }

    /// Returns the first row or column whose cached sum disagrees with a
    /// fresh recount, if any.
    pub fn verify_sums(&self) -> Result<(), String> {
        for i in 0..self.m {
            let count = (0..self.n).filter(|&j| self.get(i, j)).count();
            if count != self.row_sums[i] {
                return Err(format!("row {i}: cached {} vs counted {count}", self.row_sums[i]));
            }
        }
        for j in 0..self.n {
            let count = (0..self.m).filter(|&i| self.get(i, j)).count();
            if count != self.col_sums[j] {
                return Err(format!("col {j}: cached {} vs counted {count}", self.col_sums[j]));
            }
            let packed: usize = self.col_words(j).iter().map(|w| w.count_ones() as usize).sum();
            if packed != count {
                return Err(format!("col {j}: column layout out of sync"));
            }
        }
        Ok(())
    }

    /// Number of cells where `self` and `other` differ.
    pub fn hamming(&self, other: &BinaryMatrix) -> Result<usize, MatrixError> {
        if self.m != other.m || self.n != other.n {
            return Err(MatrixError::DimensionMismatch(self.m, self.n, other.m, other.n));
        }
        Ok(self.row_bits.iter().zip(&other.row_bits).map(|(a, b)| (a ^ b).count_ones() as usize).sum())
    }
}

impl fmt::Display for BinaryMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.m {
            for j in 0..self.n {
                if j > 0 {
                    f.write_str(" ")?;
                }
                f.write_str(if self.get(i, j) { "1" } else { "0" })?;
            }
            f.write_str("\n")?;
        }
        Ok(())
    }
}

impl fmt::Debug for BinaryMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "BinaryMatrix({}x{}, {:?})", self.m, self.n, self.to_grid())
    }
}

impl FromStr for BinaryMatrix {
    type Err = MatrixError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Self::from_text(s)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn example_a() -> BinaryMatrix {
        BinaryMatrix::from_grid(&[[0, 1, 0], [1, 0, 1], [0, 1, 0]]).unwrap()
    }

    fn example_b() -> BinaryMatrix {
        BinaryMatrix::from_grid(&[[0, 1, 0], [1, 1, 0], [0, 0, 1]]).unwrap()
    }

    #[test]
    fn from_grid_caches_sums() {
        let m = BinaryMatrix::from_grid(&[[0, 1], [1, 0]]).unwrap();
        assert_eq!(m.row_sums(), &[1, 1]);
        assert_eq!(m.col_sums(), &[1, 1]);

        let a = example_a();
        assert_eq!(a.row_sums(), &[1, 2, 1]);
        assert_eq!(a.col_sums(), &[1, 2, 1]);
    }

    #[test]
    fn from_grid_rejects_bad_input() {
        assert_eq!(
            BinaryMatrix::from_grid(&[[0, 2]]).unwrap_err(),
            MatrixError::NonBinary { row: 0, col: 1, value: 2 }
        );
        let ragged = vec![vec![0u8, 1], vec![1]];
        assert!(matches!(BinaryMatrix::from_grid(&ragged), Err(MatrixError::Ragged { row: 1, .. })));
        let empty: Vec<Vec<u8>> = vec![];
        assert_eq!(BinaryMatrix::from_grid(&empty).unwrap_err(), MatrixError::Empty);
    }

    #[test]
    fn checkerboard_detection() {
        let id = BinaryMatrix::from_grid(&[[1, 0], [0, 1]]).unwrap();
        let q = SwapQuad::new(0, 1, 0, 1).unwrap();
        assert!(id.is_checkerboard(q));
        let not = BinaryMatrix::from_grid(&[[1, 1], [0, 1]]).unwrap();
        assert!(!not.is_checkerboard(q));
        assert!(example_a().is_checkerboard(q));
    }

    #[test]
    fn swap_flips_quad() {
        let id = BinaryMatrix::from_grid(&[[1, 0], [0, 1]]).unwrap();
        let q = SwapQuad::new(0, 1, 0, 1).unwrap();
        let anti = id.apply_swap(q).unwrap();
        assert_eq!(anti, BinaryMatrix::from_grid(&[[0, 1], [1, 0]]).unwrap());
        assert_eq!(anti.apply_swap(q).unwrap(), id);

        // B -> A through rows {2,3}, cols {2,3} (one-indexed).
        let q = SwapQuad::new(1, 2, 1, 2).unwrap();
        assert_eq!(example_b().apply_swap(q).unwrap(), example_a());
    }

    #[test]
    fn swap_rejects_non_checkerboard() {
        let m = BinaryMatrix::from_grid(&[[1, 1], [0, 1]]).unwrap();
        let q = SwapQuad::new(0, 1, 0, 1).unwrap();
        assert_eq!(m.apply_swap(q).unwrap_err(), MatrixError::NotCheckerboard(q));
        assert!(SwapQuad::new(0, 0, 0, 1).is_err());
        let far = SwapQuad { r1: 0, r2: 5, c1: 0, c2: 1 };
        assert!(matches!(m.apply_swap(far), Err(MatrixError::OutOfBounds { .. })));
    }

    #[test]
    fn canonical_key_is_row_major_bits() {
        let m = BinaryMatrix::from_grid(&[[1, 0], [0, 1]]).unwrap();
        assert_eq!(m.canonical_key().to_string(), "1001");
        assert_eq!(m.canonical_key(), m.clone().canonical_key());
        let a = BinaryMatrix::from_grid(&[[0, 1], [1, 0]]).unwrap();
        assert!(a.canonical_key() < m.canonical_key());
    }

    #[test]
    fn select_helpers() {
        let m = BinaryMatrix::from_grid(&[[0, 1, 0, 1, 1], [1, 0, 0, 0, 0]]).unwrap();
        assert_eq!(m.nth_one_in_row(0, 0), Some(1));
        assert_eq!(m.nth_one_in_row(0, 2), Some(4));
        assert_eq!(m.nth_one_in_row(0, 3), None);
        assert_eq!(m.nth_zero_in_row(0, 1), Some(2));
        assert_eq!(m.nth_zero_in_row(0, 2), None);
        assert_eq!(m.nth_one_in_col(0, 0), Some(1));
        assert_eq!(m.nth_zero_in_col(0, 0), Some(0));
        assert_eq!(m.nth_zero_in_col(2, 1), Some(1));
        assert_eq!(m.nth_zero_in_col(2, 2), None);
        assert_eq!(m.ones_in_row(0).collect::<Vec<_>>(), vec![1, 3, 4]);
    }

    #[test]
    fn wide_rows_cross_word_boundaries() {
        let m = BinaryMatrix::from_fn(3, 130, |i, j| (i + j) % 3 == 0).unwrap();
        m.verify_sums().unwrap();
        let ones: Vec<_> = m.ones_in_row(1).collect();
        assert_eq!(ones.len(), m.row_sums()[1]);
        for (k, &j) in ones.iter().enumerate() {
            assert_eq!(m.nth_one_in_row(1, k), Some(j));
        }
        let zeros: Vec<_> = (0..130).filter(|&j| !m.get(1, j)).collect();
        for (k, &j) in zeros.iter().enumerate() {
            assert_eq!(m.nth_zero_in_row(1, k), Some(j));
        }
        assert_eq!(m.nth_zero_in_row(1, zeros.len()), None);
    }

    #[test]
    fn text_round_trip_and_errors() {
        let a = example_a();
        let text = a.to_string();
        assert_eq!(text, "0 1 0\n1 0 1\n0 1 0\n");
        assert_eq!(text.parse::<BinaryMatrix>().unwrap(), a);

        let err = BinaryMatrix::from_text("0 1\n1 2\n").unwrap_err();
        assert!(matches!(err, MatrixError::Parse { line: 2, column: 2, .. }));
        let err = BinaryMatrix::from_text("0 1\n1\n").unwrap_err();
        assert!(matches!(err, MatrixError::Parse { line: 2, .. }));

        let many = format!("{a}\n{}\n", example_b());
        assert_eq!(BinaryMatrix::parse_many(&many).unwrap(), vec![a.clone(), example_b()]);
        let err = BinaryMatrix::parse_many("0 1\n1 0\n\n1 0\n0 x\n").unwrap_err();
        assert!(matches!(err, MatrixError::Parse { line: 5, column: 2, .. }));

        let commented = format!("# seed=1\n{a}\n# next\n{}", example_b());
        assert_eq!(BinaryMatrix::parse_many(&commented).unwrap(), vec![a.clone(), example_b()]);
        let err = BinaryMatrix::parse_many("# x\n0 1\n1 0\n\n# y\n1 0\n0 x\n").unwrap_err();
        assert!(matches!(err, MatrixError::Parse { line: 7, column: 2, .. }));
    }

    fn grid_strategy() -> impl Strategy<Value = Vec<Vec<u8>>> {
        (2usize..9, 2usize..80)
            .prop_flat_map(|(m, n)| proptest::collection::vec(proptest::collection::vec(0u8..2, n), m))
    }

    proptest! {
        #[test]
        fn swaps_preserve_margins_and_cached_sums(
            grid in grid_strategy(),
            picks in proptest::collection::vec((0usize..1000, 0usize..1000, 0usize..1000, 0usize..1000), 1..200),
        ) {
            let mut a = BinaryMatrix::from_grid(&grid).unwrap();
            let (m, n) = (a.rows(), a.cols());
            let margins = a.margins();
            for (r1, r2, c1, c2) in picks {
                let (r1, r2, c1, c2) = (r1 % m, r2 % m, c1 % n, c2 % n);
                let Ok(q) = SwapQuad::new(r1, r2, c1, c2) else { continue };
                if a.is_checkerboard(q) {
                    let before = a.clone();
                    a.swap_in_place(q).unwrap();
                    prop_assert_eq!(a.hamming(&before).unwrap(), 4);
                    prop_assert_eq!(a.apply_swap(q).unwrap(), before);
                } else {
                    prop_assert!(a.apply_swap(q).is_err());
                }
            }
            prop_assert_eq!(a.margins(), margins);
            prop_assert!(a.verify_sums().is_ok());
        }
    }
}
