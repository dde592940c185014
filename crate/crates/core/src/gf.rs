//! Prime-field arithmetic and sparse matrices over F_q.
//!
//! Matrices are stored as sorted sparse rows. Elimination switches between a
//! bit-packed dense kernel (q = 2), a dense kernel for other q, and a sparse
//! Markowitz-style kernel for rank-only queries on large sparse inputs.

use std::fmt;

use thiserror::Error;

/// Dense elimination is used by `rank` below this many entries.
pub const DENSE_RANK_LIMIT: usize = 64 * 64;

/// Above this many entries elimination reports progress.
pub const PROGRESS_THRESHOLD: usize = 1_000_000;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GfError {
    #[error("{0} is not a prime")]
    NotPrime(u64),
    #[error("field order {0} is too large (max 2^31)")]
    TooLarge(u64),
    #[error("entry {value} at ({row}, {col}) is not in [0, {q})")]
    EntryOutOfRange {
        row: usize,
        col: usize,
        value: u32,
        q: u32,
    },
    #[error("dimension mismatch: {op} of {left:?} and {right:?}")]
    DimensionMismatch {
        op: &'static str,
        left: (usize, usize),
        right: (usize, usize),
    },
    #[error("field mismatch: F_{0} vs F_{1}")]
    FieldMismatch(u32, u32),
    #[error("block ({block_row}, {block_col}) is {found:?}, expected {expected:?}")]
    BlockMismatch {
        block_row: usize,
        block_col: usize,
        expected: (usize, usize),
        found: (usize, usize),
    },
    #[error("block {kind} {index} has no block to fix its size")]
    EmptyBlockLine { kind: &'static str, index: usize },
    #[error("ragged dense input: row {row} has {found} entries, expected {expected}")]
    Ragged {
        row: usize,
        expected: usize,
        found: usize,
    },
}

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2u64;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

/// The prime field F_q.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Field {
    q: u32,
}

impl Field {
    pub fn new(q: u64) -> Result<Self, GfError> {
        if q >= 1 << 31 {
            return Err(GfError::TooLarge(q));
        }
        if !is_prime(q) {
            return Err(GfError::NotPrime(q));
        }
        Ok(Field { q: q as u32 })
    }

    pub fn binary() -> Self {
        Field { q: 2 }
    }

    #[inline]
    pub fn q(self) -> u32 {
        self.q
    }

    #[inline]
    pub fn add(self, a: u32, b: u32) -> u32 {
        let s = a as u64 + b as u64;
        (s % self.q as u64) as u32
    }

    #[inline]
    pub fn sub(self, a: u32, b: u32) -> u32 {
        self.add(a, self.neg(b))
    }

    #[inline]
    pub fn neg(self, a: u32) -> u32 {
        if a == 0 {
            0
        } else {
            self.q - a
        }
    }

    #[inline]
    pub fn mul(self, a: u32, b: u32) -> u32 {
        ((a as u64 * b as u64) % self.q as u64) as u32
    }

    pub fn pow(self, a: u32, mut e: u64) -> u32 {
        let mut base = a % self.q;
        let mut acc = 1 % self.q;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            e >>= 1;
        }
        acc
    }

    /// Multiplicative inverse. Panics on zero.
    pub fn inv(self, a: u32) -> u32 {
        assert!(a % self.q != 0, "inverse of zero in F_{}", self.q);
        self.pow(a, self.q as u64 - 2)
    }

    pub fn from_i64(self, x: i64) -> u32 {
        x.rem_euclid(self.q as i64) as u32
    }

    /// Maps a sign to the field: +1 -> 1, -1 -> q - 1.
    pub fn sign(self, positive: bool) -> u32 {
        if positive {
            1 % self.q
        } else {
            self.neg(1 % self.q)
        }
    }

    /// Square root of `a`, if one exists.
    pub fn sqrt(self, a: u32) -> Option<u32> {
        let a = a % self.q;
        (0..self.q).find(|&x| self.mul(x, x) == a)
    }
}

impl fmt::Display for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "F_{}", self.q)
    }
}

/// Sparse matrix over a prime field, rows kept sorted by column.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Matrix {
    field: Field,
    rows: usize,
    cols: usize,
    data: Vec<Vec<(usize, u32)>>,
}

impl fmt::Debug for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "Matrix {}x{} over {}", self.rows, self.cols, self.field)?;
        if self.rows * self.cols <= 64 * 64 {
            for row in self.to_dense() {
                let line: Vec<String> = row.iter().map(|v| v.to_string()).collect();
                writeln!(f, "  [{}]", line.join(" "))?;
            }
        }
        Ok(())
    }
}

/// Result of full row reduction.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Reduction {
    pub rank: usize,
    /// Pivot column of each nonzero row of the reduced echelon form.
    pub pivots: Vec<usize>,
    /// Nonzero rows of the reduced row echelon form (dense).
    pub rref: Vec<Vec<u32>>,
    /// Basis of the right kernel, one vector per free column.
    pub kernel: Vec<Vec<u32>>,
}

/// One signed block of a block matrix.
#[derive(Debug, Clone, Copy)]
pub struct Block<'a> {
    pub negate: bool,
    pub matrix: &'a Matrix,
}

impl<'a> Block<'a> {
    pub fn pos(matrix: &'a Matrix) -> Self {
        Block {
            negate: false,
            matrix,
        }
    }

    pub fn neg(matrix: &'a Matrix) -> Self {
        Block {
            negate: true,
            matrix,
        }
    }
}

impl Matrix {
    pub fn zeros(field: Field, rows: usize, cols: usize) -> Self {
        Matrix {
            field,
            rows,
            cols,
            data: vec![Vec::new(); rows],
        }
    }

    pub fn identity(field: Field, n: usize) -> Self {
        let mut m = Matrix::zeros(field, n, n);
        for i in 0..n {
            m.data[i].push((i, 1));
        }
        m
    }

    pub fn from_dense(field: Field, rows: &[Vec<u32>]) -> Result<Self, GfError> {
        let cols = rows.first().map_or(0, |r| r.len());
        Self::from_dense_with_cols(field, rows, cols)
    }

    pub fn from_dense_with_cols(
        field: Field,
        rows: &[Vec<u32>],
        cols: usize,
    ) -> Result<Self, GfError> {
        let mut m = Matrix::zeros(field, rows.len(), cols);
        for (i, row) in rows.iter().enumerate() {
            if row.len() != cols {
                return Err(GfError::Ragged {
                    row: i,
                    expected: cols,
                    found: row.len(),
                });
            }
            for (j, &v) in row.iter().enumerate() {
                if v >= field.q {
                    return Err(GfError::EntryOutOfRange {
                        row: i,
                        col: j,
                        value: v,
                        q: field.q,
                    });
                }
                if v != 0 {
                    m.data[i].push((j, v));
                }
            }
        }
        Ok(m)
    }

    /// Builds a matrix from (row, col, value) triples; repeated positions add up.
    pub fn from_triplets(
        field: Field,
        rows: usize,
        cols: usize,
        triplets: impl IntoIterator<Item = (usize, usize, u32)>,
    ) -> Self {
        let mut data: Vec<Vec<(usize, u32)>> = vec![Vec::new(); rows];
        for (i, j, v) in triplets {
            assert!(i < rows && j < cols, "triplet ({i}, {j}) out of {rows}x{cols}");
            let v = v % field.q;
            if v != 0 {
                data[i].push((j, v));
            }
        }
        for row in data.iter_mut() {
            normalize_row(field, row);
        }
        Matrix {
            field,
            rows,
            cols,
            data,
        }
    }

    /// Builds a matrix from already sparse rows (unsorted, duplicates summed).
    pub fn from_sparse_rows(field: Field, cols: usize, mut rows: Vec<Vec<(usize, u32)>>) -> Self {
        for row in rows.iter_mut() {
            for e in row.iter_mut() {
                assert!(e.0 < cols, "column {} out of range {cols}", e.0);
                e.1 %= field.q;
            }
            normalize_row(field, row);
        }
        Matrix {
            field,
            rows: rows.len(),
            cols,
            data: rows,
        }
    }

    #[inline]
    pub fn field(&self) -> Field {
        self.field
    }

    #[inline]
    pub fn rows(&self) -> usize {
        self.rows
    }

    #[inline]
    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn shape(&self) -> (usize, usize) {
        (self.rows, self.cols)
    }

    #[inline]
    pub fn row(&self, i: usize) -> &[(usize, u32)] {
        &self.data[i]
    }

    pub fn get(&self, i: usize, j: usize) -> u32 {
        match self.data[i].binary_search_by_key(&j, |e| e.0) {
            Ok(p) => self.data[i][p].1,
            Err(_) => 0,
        }
    }

    pub fn set(&mut self, i: usize, j: usize, v: u32) {
        assert!(j < self.cols);
        let v = v % self.field.q;
        let row = &mut self.data[i];
        match row.binary_search_by_key(&j, |e| e.0) {
            Ok(p) => {
                if v == 0 {
                    row.remove(p);
                } else {
                    row[p].1 = v;
                }
            }
            Err(p) => {
                if v != 0 {
                    row.insert(p, (j, v));
                }
            }
        }
    }

    pub fn nnz(&self) -> usize {
        self.data.iter().map(|r| r.len()).sum()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|r| r.is_empty())
    }

    /// All nonzero entries as (row, col, value), sorted by (row, col).
    pub fn triplets(&self) -> impl Iterator<Item = (usize, usize, u32)> + '_ {
        self.data
            .iter()
            .enumerate()
            .flat_map(|(i, r)| r.iter().map(move |&(j, v)| (i, j, v)))
    }

    pub fn to_dense(&self) -> Vec<Vec<u32>> {
        let mut out = vec![vec![0u32; self.cols]; self.rows];
        for (i, j, v) in self.triplets() {
            out[i][j] = v;
        }
        out
    }

    pub fn dense_row(&self, i: usize) -> Vec<u32> {
        let mut out = vec![0u32; self.cols];
        for &(j, v) in &self.data[i] {
            out[j] = v;
        }
        out
    }

    pub fn transpose(&self) -> Matrix {
        let mut data: Vec<Vec<(usize, u32)>> = vec![Vec::new(); self.cols];
        for (i, j, v) in self.triplets() {
            data[j].push((i, v));
        }
        Matrix {
            field: self.field,
            rows: self.cols,
            cols: self.rows,
            data,
        }
    }

    fn check_field(&self, other: &Matrix) -> Result<(), GfError> {
        if self.field != other.field {
            return Err(GfError::FieldMismatch(self.field.q, other.field.q));
        }
        Ok(())
    }

    pub fn mul(&self, other: &Matrix) -> Result<Matrix, GfError> {
        self.check_field(other)?;
        if self.cols != other.rows {
            return Err(GfError::DimensionMismatch {
                op: "product",
                left: self.shape(),
                right: other.shape(),
            });
        }
        let f = self.field;
        let q = f.q as u64;
        let mut acc = vec![0u64; other.cols];
        let mut seen = vec![false; other.cols];
        let mut touched: Vec<usize> = Vec::new();
        let mut data = Vec::with_capacity(self.rows);
        for row in &self.data {
            for &(k, a) in row {
                for &(j, b) in &other.data[k] {
                    if !seen[j] {
                        seen[j] = true;
                        touched.push(j);
                    }
                    acc[j] = (acc[j] + a as u64 * b as u64) % q;
                }
            }
            touched.sort_unstable();
            let mut out = Vec::with_capacity(touched.len());
            for &j in &touched {
                if acc[j] != 0 {
                    out.push((j, acc[j] as u32));
                }
                acc[j] = 0;
                seen[j] = false;
            }
            touched.clear();
            data.push(out);
        }
        Ok(Matrix {
            field: f,
            rows: self.rows,
            cols: other.cols,
            data,
        })
    }

    /// M x for a dense vector x.
    pub fn mul_vec(&self, x: &[u32]) -> Vec<u32> {
        assert_eq!(x.len(), self.cols, "vector length mismatch");
        let f = self.field;
        self.data
            .iter()
            .map(|row| {
                let mut s = 0u64;
                for &(j, v) in row {
                    s += v as u64 * x[j] as u64;
                }
                (s % f.q as u64) as u32
            })
            .collect()
    }

    pub fn add(&self, other: &Matrix) -> Result<Matrix, GfError> {
        self.check_field(other)?;
        if self.shape() != other.shape() {
            return Err(GfError::DimensionMismatch {
                op: "sum",
                left: self.shape(),
                right: other.shape(),
            });
        }
        let rows = self
            .data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| {
                let mut r: Vec<(usize, u32)> = a.iter().chain(b.iter()).copied().collect();
                normalize_row(self.field, &mut r);
                r
            })
            .collect();
        Ok(Matrix {
            field: self.field,
            rows: self.rows,
            cols: self.cols,
            data: rows,
        })
    }

    pub fn scale(&self, c: u32) -> Matrix {
        let f = self.field;
        let c = c % f.q;
        let data = self
            .data
            .iter()
            .map(|r| {
                r.iter()
                    .filter_map(|&(j, v)| {
                        let x = f.mul(v, c);
                        (x != 0).then_some((j, x))
                    })
                    .collect()
            })
            .collect();
        Matrix {
            field: f,
            rows: self.rows,
            cols: self.cols,
            data,
        }
    }

    pub fn neg(&self) -> Matrix {
        self.scale(self.field.neg(1 % self.field.q))
    }

    /// Kronecker product: entry (i m_b + k, j n_b + l) = A[i,j] B[k,l].
    pub fn kron(&self, other: &Matrix) -> Result<Matrix, GfError> {
        self.check_field(other)?;
        let f = self.field;
        let (mb, nb) = other.shape();
        let mut data = Vec::with_capacity(self.rows * mb);
        for ra in &self.data {
            for rb in &other.data {
                let mut row = Vec::with_capacity(ra.len() * rb.len());
                for &(j, a) in ra {
                    for &(l, b) in rb {
                        row.push((j * nb + l, f.mul(a, b)));
                    }
                }
                data.push(row);
            }
        }
        Ok(Matrix {
            field: f,
            rows: self.rows * mb,
            cols: self.cols * nb,
            data,
        })
    }

    /// Assembles a block matrix. Block sizes are inferred from the present
    /// blocks; every block row and block column needs at least one block.
    pub fn block_assemble(field: Field, grid: &[Vec<Option<Block<'_>>>]) -> Result<Matrix, GfError> {
        let nbr = grid.len();
        let nbc = grid.first().map_or(0, |r| r.len());
        let mut heights: Vec<Option<usize>> = vec![None; nbr];
        let mut widths: Vec<Option<usize>> = vec![None; nbc];
        for (bi, line) in grid.iter().enumerate() {
            if line.len() != nbc {
                return Err(GfError::Ragged {
                    row: bi,
                    expected: nbc,
                    found: line.len(),
                });
            }
            for (bj, b) in line.iter().enumerate() {
                let Some(b) = b else { continue };
                if b.matrix.field != field {
                    return Err(GfError::FieldMismatch(field.q, b.matrix.field.q));
                }
                let (r, c) = b.matrix.shape();
                let eh = *heights[bi].get_or_insert(r);
                let ew = *widths[bj].get_or_insert(c);
                if (eh, ew) != (r, c) {
                    return Err(GfError::BlockMismatch {
                        block_row: bi,
                        block_col: bj,
                        expected: (eh, ew),
                        found: (r, c),
                    });
                }
            }
        }
        let heights: Vec<usize> = heights
            .into_iter()
            .enumerate()
            .map(|(i, h)| h.ok_or(GfError::EmptyBlockLine { kind: "row", index: i }))
            .collect::<Result<_, _>>()?;
        let widths: Vec<usize> = widths
            .into_iter()
            .enumerate()
            .map(|(i, w)| w.ok_or(GfError::EmptyBlockLine { kind: "column", index: i }))
            .collect::<Result<_, _>>()?;
        Ok(Self::assemble_sized(field, &heights, &widths, grid))
    }

    /// Block assembly with explicit block sizes; absent blocks are zero.
    pub fn block_assemble_sized(
        field: Field,
        heights: &[usize],
        widths: &[usize],
        grid: &[Vec<Option<Block<'_>>>],
    ) -> Result<Matrix, GfError> {
        for (bi, line) in grid.iter().enumerate() {
            for (bj, b) in line.iter().enumerate() {
                if let Some(b) = b {
                    if b.matrix.shape() != (heights[bi], widths[bj]) {
                        return Err(GfError::BlockMismatch {
                            block_row: bi,
                            block_col: bj,
                            expected: (heights[bi], widths[bj]),
                            found: b.matrix.shape(),
                        });
                    }
                }
            }
        }
        Ok(Self::assemble_sized(field, heights, widths, grid))
    }

    fn assemble_sized(
        field: Field,
        heights: &[usize],
        widths: &[usize],
        grid: &[Vec<Option<Block<'_>>>],
    ) -> Matrix {
        let rows: usize = heights.iter().sum();
        let cols: usize = widths.iter().sum();
        let mut col_off = vec![0usize; widths.len()];
        for j in 1..widths.len() {
            col_off[j] = col_off[j - 1] + widths[j - 1];
        }
        let mut data = Vec::with_capacity(rows);
        for (bi, &h) in heights.iter().enumerate() {
            for i in 0..h {
                let mut row = Vec::new();
                for (bj, b) in grid[bi].iter().enumerate() {
                    if let Some(b) = b {
                        for &(j, v) in b.matrix.row(i) {
                            let v = if b.negate { field.neg(v) } else { v };
                            row.push((col_off[bj] + j, v));
                        }
                    }
                }
                data.push(row);
            }
        }
        Matrix {
            field,
            rows,
            cols,
            data,
        }
    }

    pub fn hstack(&self, other: &Matrix) -> Result<Matrix, GfError> {
        Self::block_assemble(self.field, &[vec![Some(Block::pos(self)), Some(Block::pos(other))]])
    }

    pub fn vstack(&self, other: &Matrix) -> Result<Matrix, GfError> {
        Self::block_assemble(
            self.field,
            &[vec![Some(Block::pos(self))], vec![Some(Block::pos(other))]],
        )
    }

    /// Row i of the result is row `row_perm[i]` of self, likewise for columns:
    /// result[i][j] = self[row_perm[i]][col_perm[j]].
    pub fn permute(&self, row_perm: &[usize], col_perm: &[usize]) -> Matrix {
        assert_eq!(row_perm.len(), self.rows);
        assert_eq!(col_perm.len(), self.cols);
        let mut inv_col = vec![usize::MAX; self.cols];
        for (j, &c) in col_perm.iter().enumerate() {
            inv_col[c] = j;
        }
        let data = row_perm
            .iter()
            .map(|&r| {
                let mut row: Vec<(usize, u32)> =
                    self.data[r].iter().map(|&(j, v)| (inv_col[j], v)).collect();
                row.sort_unstable();
                row
            })
            .collect();
        Matrix {
            field: self.field,
            rows: self.rows,
            cols: self.cols,
            data,
        }
    }

    /// Multiplies column j by `scales[j]`.
    pub fn scale_columns(&self, scales: &[u32]) -> Matrix {
        let f = self.field;
        let data = self
            .data
            .iter()
            .map(|r| {
                r.iter()
                    .filter_map(|&(j, v)| {
                        let x = f.mul(v, scales[j]);
                        (x != 0).then_some((j, x))
                    })
                    .collect()
            })
            .collect();
        Matrix {
            field: f,
            rows: self.rows,
            cols: self.cols,
            data,
        }
    }

    pub fn row_weights(&self) -> Vec<usize> {
        self.data.iter().map(|r| r.len()).collect()
    }

    pub fn col_weights(&self) -> Vec<usize> {
        let mut w = vec![0usize; self.cols];
        for r in &self.data {
            for &(j, _) in r {
                w[j] += 1;
            }
        }
        w
    }

    pub fn max_row_weight(&self) -> usize {
        self.data.iter().map(|r| r.len()).max().unwrap_or(0)
    }

    pub fn max_col_weight(&self) -> usize {
        self.col_weights().into_iter().max().unwrap_or(0)
    }

    /// Full reduction to reduced row echelon form with right-kernel basis.
    /// Pivots are the first nonzero entry in column order.
    pub fn gauss_reduce(&self) -> Reduction {
        self.gauss_reduce_with_progress(&mut |_, _| {})
    }

    /// As `gauss_reduce`; `progress(done, total)` is called per pivot column
    /// when the matrix has more than `PROGRESS_THRESHOLD` entries.
    pub fn gauss_reduce_with_progress(&self, progress: &mut dyn FnMut(usize, usize)) -> Reduction {
        let report = self.rows.saturating_mul(self.cols) > PROGRESS_THRESHOLD;
        let (pivots, rref) = if self.field.q == 2 {
            rref_binary(self, report, progress)
        } else {
            rref_dense(self, report, progress)
        };
        let kernel = kernel_from_rref(self.field, self.cols, &pivots, &rref);
        Reduction {
            rank: pivots.len(),
            pivots,
            rref,
            kernel,
        }
    }

    pub fn rank(&self) -> usize {
        self.rank_with_progress(&mut |_, _| {})
    }

    pub fn rank_with_progress(&self, progress: &mut dyn FnMut(usize, usize)) -> usize {
        if self.rows == 0 || self.cols == 0 {
            return 0;
        }
        let entries = self.rows.saturating_mul(self.cols);
        if entries <= DENSE_RANK_LIMIT {
            return self.gauss_reduce().rank;
        }
        sparse_rank(self, entries > PROGRESS_THRESHOLD, progress)
    }

    pub fn kernel(&self) -> Vec<Vec<u32>> {
        self.gauss_reduce().kernel
    }

    /// Basis of the row space (the nonzero rows of the reduced form).
    pub fn row_space(&self) -> RowSpace {
        let red = self.gauss_reduce();
        RowSpace {
            field: self.field,
            cols: self.cols,
            pivots: red.pivots,
            rows: red.rref,
        }
    }

    pub fn row_space_eq(&self, other: &Matrix) -> bool {
        if self.cols != other.cols || self.field != other.field {
            return false;
        }
        let a = self.row_space();
        let b = other.row_space();
        a.pivots == b.pivots && a.rows == b.rows
    }

    pub fn is_full_row_rank(&self) -> bool {
        self.rank() == self.rows
    }
}

/// Row space in reduced echelon form, for membership tests.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RowSpace {
    field: Field,
    cols: usize,
    pivots: Vec<usize>,
    rows: Vec<Vec<u32>>,
}

impl RowSpace {
    pub fn dim(&self) -> usize {
        self.pivots.len()
    }

    pub fn basis(&self) -> &[Vec<u32>] {
        &self.rows
    }

    pub fn pivots(&self) -> &[usize] {
        &self.pivots
    }

    /// Reduces `v` modulo the space; the result is zero iff v is in the space.
    pub fn reduce(&self, v: &[u32]) -> Vec<u32> {
        assert_eq!(v.len(), self.cols);
        let f = self.field;
        let mut out = v.to_vec();
        for (row, &p) in self.rows.iter().zip(&self.pivots) {
            let c = out[p];
            if c != 0 {
                let c = f.neg(c);
                for (o, &r) in out.iter_mut().zip(row) {
                    if r != 0 {
                        *o = f.add(*o, f.mul(c, r));
                    }
                }
            }
        }
        out
    }

    pub fn contains(&self, v: &[u32]) -> bool {
        self.reduce(v).iter().all(|&x| x == 0)
    }

    /// Picks candidates that are independent modulo this space (and of each
    /// other), keeping their original form. Returns their indices.
    pub fn extend_basis(&self, candidates: &[Vec<u32>]) -> Vec<usize> {
        let f = self.field;
        let mut extra: Vec<(usize, Vec<u32>)> = Vec::new();
        let mut picked = Vec::new();
        for (idx, c) in candidates.iter().enumerate() {
            let mut v = self.reduce(c);
            for (p, row) in &extra {
                let x = v[*p];
                if x != 0 {
                    vector::add_scaled(f, &mut v, f.neg(x), row);
                }
            }
            if let Some(p) = v.iter().position(|&x| x != 0) {
                let inv = f.inv(v[p]);
                for x in v.iter_mut() {
                    *x = f.mul(*x, inv);
                }
                extra.push((p, v));
                picked.push(idx);
            }
        }
        picked
    }
}

fn normalize_row(field: Field, row: &mut Vec<(usize, u32)>) {
    row.sort_unstable_by_key(|e| e.0);
    let mut out: Vec<(usize, u32)> = Vec::with_capacity(row.len());
    for &(j, v) in row.iter() {
        match out.last_mut() {
            Some(last) if last.0 == j => last.1 = field.add(last.1, v),
            _ => out.push((j, v)),
        }
    }
    out.retain(|e| e.1 != 0);
    *row = out;
}

fn rref_binary(
    m: &Matrix,
    report: bool,
    progress: &mut dyn FnMut(usize, usize),
) -> (Vec<usize>, Vec<Vec<u32>>) {
    let words = m.cols.div_ceil(64);
    let mut rows: Vec<Vec<u64>> = m
        .data
        .iter()
        .map(|r| {
            let mut bits = vec![0u64; words];
            for &(j, _) in r {
                bits[j / 64] |= 1 << (j % 64);
            }
            bits
        })
        .collect();
    let mut pivots = Vec::new();
    let mut rank = 0;
    for col in 0..m.cols {
        if rank == rows.len() {
            break;
        }
        let (w, b) = (col / 64, 1u64 << (col % 64));
        let Some(p) = (rank..rows.len()).find(|&i| rows[i][w] & b != 0) else {
            continue;
        };
        rows.swap(rank, p);
        let pivot = std::mem::take(&mut rows[rank]);
        for (i, row) in rows.iter_mut().enumerate() {
            if i != rank && row[w] & b != 0 {
                for k in w..words {
                    row[k] ^= pivot[k];
                }
            }
        }
        rows[rank] = pivot;
        pivots.push(col);
        rank += 1;
        if report {
            progress(col + 1, m.cols);
        }
    }
    let rref = rows[..rank]
        .iter()
        .map(|bits| (0..m.cols).map(|j| ((bits[j / 64] >> (j % 64)) & 1) as u32).collect())
        .collect();
    (pivots, rref)
}

fn rref_dense(
    m: &Matrix,
    report: bool,
    progress: &mut dyn FnMut(usize, usize),
) -> (Vec<usize>, Vec<Vec<u32>>) {
    let f = m.field;
    let q = f.q as u64;
    let mut rows = m.to_dense();
    let mut pivots = Vec::new();
    let mut rank = 0;
    for col in 0..m.cols {
        if rank == rows.len() {
            break;
        }
        let Some(p) = (rank..rows.len()).find(|&i| rows[i][col] != 0) else {
            continue;
        };
        rows.swap(rank, p);
        let inv = f.inv(rows[rank][col]);
        for v in rows[rank][col..].iter_mut() {
            *v = f.mul(*v, inv);
        }
        let pivot = std::mem::take(&mut rows[rank]);
        for (i, row) in rows.iter_mut().enumerate() {
            let c = row.get(col).copied().unwrap_or(0);
            if i != rank && c != 0 {
                let c = q - c as u64;
                for (x, &pv) in row[col..].iter_mut().zip(&pivot[col..]) {
                    if pv != 0 {
                        *x = ((*x as u64 + c * pv as u64) % q) as u32;
                    }
                }
            }
        }
        rows[rank] = pivot;
        pivots.push(col);
        rank += 1;
        if report {
            progress(col + 1, m.cols);
        }
    }
    rows.truncate(rank);
    (pivots, rows)
}

fn kernel_from_rref(field: Field, cols: usize, pivots: &[usize], rref: &[Vec<u32>]) -> Vec<Vec<u32>> {
    let mut is_pivot = vec![false; cols];
    for &p in pivots {
        is_pivot[p] = true;
    }
    (0..cols)
        .filter(|&c| !is_pivot[c])
        .map(|free| {
            let mut v = vec![0u32; cols];
            v[free] = 1;
            for (row, &p) in rref.iter().zip(pivots) {
                v[p] = field.neg(row[free]);
            }
            v
        })
        .collect()
}

/// Rank by sparse elimination. Pivot choice: the active column of smallest
/// count, then its shortest row; ties go to the lowest (column, row). When
/// fill-in makes the active part dense it is finished by dense elimination.
fn sparse_rank(m: &Matrix, report: bool, progress: &mut dyn FnMut(usize, usize)) -> usize {
    use std::collections::BTreeSet;
    let f = m.field;
    let mut rows: Vec<Vec<(usize, u32)>> = m.data.clone();
    let mut col_rows: Vec<BTreeSet<usize>> = vec![BTreeSet::new(); m.cols];
    for (i, r) in rows.iter().enumerate() {
        for &(j, _) in r {
            col_rows[j].insert(i);
        }
    }
    let mut queue: BTreeSet<(usize, usize)> = (0..m.cols)
        .filter(|&j| !col_rows[j].is_empty())
        .map(|j| (col_rows[j].len(), j))
        .collect();
    let mut row_alive = vec![true; m.rows];
    let mut active_rows = m.rows;
    let mut active_cols = queue.len();
    let mut nnz: usize = m.nnz();
    let mut rank = 0;
    let total = m.cols;
    while let Some(&(cnt, col)) = queue.iter().next() {
        queue.remove(&(cnt, col));
        if active_rows > 64
            && active_cols > 64
            && nnz * 8 > active_rows * active_cols
            && active_rows.saturating_mul(active_cols) <= 1 << 28
        {
            queue.insert((cnt, col));
            let live: Vec<usize> = (0..m.rows).filter(|&i| row_alive[i]).collect();
            let mut cols: Vec<usize> = queue.iter().map(|e| e.1).collect();
            cols.sort_unstable();
            let mut remap = vec![usize::MAX; m.cols];
            for (k, &c) in cols.iter().enumerate() {
                remap[c] = k;
            }
            let sub = Matrix::from_sparse_rows(
                f,
                cols.len(),
                live.iter()
                    .map(|&i| rows[i].iter().map(|&(j, v)| (remap[j], v)).collect())
                    .collect(),
            );
            return rank + sub.gauss_reduce_with_progress(&mut |_, _| {}).rank;
        }
        let pr = *col_rows[col]
            .iter()
            .min_by_key(|&&i| (rows[i].len(), i))
            .expect("queued column has rows");
        let prow = std::mem::take(&mut rows[pr]);
        row_alive[pr] = false;
        active_rows -= 1;
        active_cols -= 1;
        nnz -= prow.len();
        let pval = prow.iter().find(|e| e.0 == col).unwrap().1;
        let pinv = f.inv(pval);
        for &(j, _) in &prow {
            if j != col {
                let old = col_rows[j].len();
                col_rows[j].remove(&pr);
                queue.remove(&(old, j));
                if old > 1 {
                    queue.insert((old - 1, j));
                } else {
                    active_cols -= 1;
                }
            }
        }
        let targets: Vec<usize> = col_rows[col].iter().copied().filter(|&i| i != pr).collect();
        col_rows[col].clear();
        for i in targets {
            let a = rows[i].iter().find(|e| e.0 == col).unwrap().1;
            let c = f.neg(f.mul(a, pinv));
            let old = std::mem::take(&mut rows[i]);
            nnz -= old.len();
            let merged = axpy_sparse(f, &old, c, &prow);
            // update column membership for changed columns
            let mut a_it = old.iter().peekable();
            let mut b_it = merged.iter().peekable();
            loop {
                let (ja, jb) = (a_it.peek().map(|e| e.0), b_it.peek().map(|e| e.0));
                match (ja, jb) {
                    (None, None) => break,
                    (Some(x), Some(y)) if x == y => {
                        a_it.next();
                        b_it.next();
                    }
                    (Some(x), y) if y.is_none() || x < y.unwrap() => {
                        a_it.next();
                        if x != col {
                            let old_c = col_rows[x].len();
                            col_rows[x].remove(&i);
                            queue.remove(&(old_c, x));
                            if old_c > 1 {
                                queue.insert((old_c - 1, x));
                            } else {
                                active_cols -= 1;
                            }
                        }
                    }
                    (_, Some(y)) => {
                        b_it.next();
                        let old_c = col_rows[y].len();
                        col_rows[y].insert(i);
                        if old_c > 0 {
                            queue.remove(&(old_c, y));
                        } else {
                            active_cols += 1;
                        }
                        queue.insert((old_c + 1, y));
                    }
                    _ => unreachable!(),
                }
            }
            nnz += merged.len();
            if merged.is_empty() {
                row_alive[i] = false;
                active_rows -= 1;
            }
            rows[i] = merged;
        }
        rank += 1;
        if report {
            progress(rank, total);
        }
    }
    rank
}

/// a + c b for sorted sparse rows.
fn axpy_sparse(f: Field, a: &[(usize, u32)], c: u32, b: &[(usize, u32)]) -> Vec<(usize, u32)> {
    let mut out = Vec::with_capacity(a.len() + b.len());
    let (mut i, mut j) = (0, 0);
    while i < a.len() || j < b.len() {
        if j == b.len() || (i < a.len() && a[i].0 < b[j].0) {
            out.push(a[i]);
            i += 1;
        } else if i == a.len() || b[j].0 < a[i].0 {
            let v = f.mul(c, b[j].1);
            if v != 0 {
                out.push((b[j].0, v));
            }
            j += 1;
        } else {
            let v = f.add(a[i].1, f.mul(c, b[j].1));
            if v != 0 {
                out.push((a[i].0, v));
            }
            i += 1;
            j += 1;
        }
    }
    out
}

/// Dense vector helpers shared by the higher modules.
pub mod vector {
    use super::Field;

    pub fn weight(v: &[u32]) -> usize {
        v.iter().filter(|&&x| x != 0).count()
    }

    pub fn add_scaled(f: Field, acc: &mut [u32], c: u32, v: &[u32]) {
        if c == 0 {
            return;
        }
        for (a, &x) in acc.iter_mut().zip(v) {
            if x != 0 {
                *a = f.add(*a, f.mul(c, x));
            }
        }
    }

    pub fn sub(f: Field, a: &[u32], b: &[u32]) -> Vec<u32> {
        a.iter().zip(b).map(|(&x, &y)| f.sub(x, y)).collect()
    }

    pub fn support(v: &[u32]) -> Vec<usize> {
        v.iter()
            .enumerate()
            .filter(|e| *e.1 != 0)
            .map(|e| e.0)
            .collect()
    }
}
