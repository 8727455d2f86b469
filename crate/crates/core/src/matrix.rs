//! Sparse integer matrices and Smith normal form.

use std::collections::{BinaryHeap, HashSet};
use std::cmp::Reverse;

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum MatrixError {
    #[error("integer overflow during elimination")]
    Overflow,
    #[error("dimension mismatch: {0}")]
    Dimension(String),
}

/// Column-compressed integer matrix; each column is sorted by row.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SparseMatrix {
    pub rows: usize,
    pub cols: usize,
    columns: Vec<Vec<(usize, i64)>>,
}

impl SparseMatrix {
    pub fn zero(rows: usize, cols: usize) -> Self {
        SparseMatrix { rows, cols, columns: vec![Vec::new(); cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zero(n, n);
        for i in 0..n {
            m.columns[i].push((i, 1));
        }
        m
    }

    /// Build from (row, col, value) triplets; duplicates are summed.
    pub fn from_triplets(rows: usize, cols: usize, t: impl IntoIterator<Item = (usize, usize, i64)>) -> Self {
        let mut columns: Vec<Vec<(usize, i64)>> = vec![Vec::new(); cols];
        for (r, c, v) in t {
            debug_assert!(r < rows && c < cols);
            columns[c].push((r, v));
        }
        for col in columns.iter_mut() {
            normalize(col);
        }
        SparseMatrix { rows, cols, columns }
    }

    pub fn from_columns(rows: usize, mut columns: Vec<Vec<(usize, i64)>>) -> Self {
        for col in columns.iter_mut() {
            normalize(col);
        }
        SparseMatrix { rows, cols: columns.len(), columns }
    }

    pub fn column(&self, c: usize) -> &[(usize, i64)] {
        &self.columns[c]
    }

    pub fn nnz(&self) -> usize {
        self.columns.iter().map(|c| c.len()).sum()
    }

    pub fn is_zero(&self) -> bool {
        self.columns.iter().all(|c| c.is_empty())
    }

    pub fn get(&self, r: usize, c: usize) -> i64 {
        self.columns[c]
            .binary_search_by_key(&r, |e| e.0)
            .map(|i| self.columns[c][i].1)
            .unwrap_or(0)
    }

    pub fn triplets(&self) -> impl Iterator<Item = (usize, usize, i64)> + '_ {
        self.columns
            .iter()
            .enumerate()
            .flat_map(|(c, col)| col.iter().map(move |&(r, v)| (r, c, v)))
    }

    /// self ∘ rhs
    pub fn mul(&self, rhs: &SparseMatrix) -> Result<SparseMatrix, MatrixError> {
        if self.cols != rhs.rows {
            return Err(MatrixError::Dimension(format!(
                "{}x{} * {}x{}",
                self.rows, self.cols, rhs.rows, rhs.cols
            )));
        }
        let mut out = Vec::with_capacity(rhs.cols);
        let mut acc: Vec<i64> = vec![0; self.rows];
        let mut touched = Vec::new();
        for col in &rhs.columns {
            for &(k, b) in col {
                for &(r, a) in &self.columns[k] {
                    if acc[r] == 0 {
                        touched.push(r);
                    }
                    acc[r] = a
                        .checked_mul(b)
                        .and_then(|p| acc[r].checked_add(p))
                        .ok_or(MatrixError::Overflow)?;
                }
            }
            let mut c: Vec<(usize, i64)> = touched.iter().map(|&r| (r, acc[r])).filter(|e| e.1 != 0).collect();
            for &r in &touched {
                acc[r] = 0;
            }
            touched.clear();
            c.sort_unstable();
            c.dedup_by_key(|e| e.0);
            out.push(c);
        }
        Ok(SparseMatrix { rows: self.rows, cols: rhs.cols, columns: out })
    }

    pub fn add(&self, o: &SparseMatrix) -> SparseMatrix {
        assert_eq!((self.rows, self.cols), (o.rows, o.cols));
        let columns = self
            .columns
            .iter()
            .zip(&o.columns)
            .map(|(a, b)| {
                let mut c: Vec<(usize, i64)> = a.iter().chain(b).copied().collect();
                normalize(&mut c);
                c
            })
            .collect();
        SparseMatrix { rows: self.rows, cols: self.cols, columns }
    }

    pub fn neg(&self) -> SparseMatrix {
        SparseMatrix {
            rows: self.rows,
            cols: self.cols,
            columns: self.columns.iter().map(|c| c.iter().map(|&(r, v)| (r, -v)).collect()).collect(),
        }
    }

    pub fn sub(&self, o: &SparseMatrix) -> SparseMatrix {
        self.add(&o.neg())
    }

    pub fn transpose(&self) -> SparseMatrix {
        SparseMatrix::from_triplets(self.cols, self.rows, self.triplets().map(|(r, c, v)| (c, r, v)))
    }

    /// Restriction to the given rows and columns, renumbered in order.
    pub fn submatrix(&self, rows: &[usize], cols: &[usize]) -> SparseMatrix {
        let mut rmap = vec![usize::MAX; self.rows];
        for (i, &r) in rows.iter().enumerate() {
            rmap[r] = i;
        }
        let columns = cols
            .iter()
            .map(|&c| {
                self.columns[c]
                    .iter()
                    .filter(|e| rmap[e.0] != usize::MAX)
                    .map(|&(r, v)| (rmap[r], v))
                    .collect()
            })
            .collect();
        SparseMatrix { rows: rows.len(), cols: cols.len(), columns }
    }

    pub fn to_dense(&self) -> DenseMatrix {
        let mut d = DenseMatrix::zero(self.rows, self.cols);
        for (r, c, v) in self.triplets() {
            d.set(r, c, v as i128);
        }
        d
    }

    pub fn apply(&self, v: &[i64]) -> Vec<i64> {
        let mut out = vec![0; self.rows];
        for (c, col) in self.columns.iter().enumerate() {
            if v[c] == 0 {
                continue;
            }
            for &(r, a) in col {
                out[r] += a * v[c];
            }
        }
        out
    }
}

fn normalize(col: &mut Vec<(usize, i64)>) {
    col.sort_unstable_by_key(|e| e.0);
    let mut out: Vec<(usize, i64)> = Vec::with_capacity(col.len());
    for &(r, v) in col.iter() {
        match out.last_mut() {
            Some(last) if last.0 == r => last.1 += v,
            _ => out.push((r, v)),
        }
    }
    out.retain(|e| e.1 != 0);
    *col = out;
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DenseMatrix {
    pub rows: usize,
    pub cols: usize,
    pub data: Vec<i128>,
}

impl DenseMatrix {
    pub fn zero(rows: usize, cols: usize) -> Self {
        DenseMatrix { rows, cols, data: vec![0; rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zero(n, n);
        for i in 0..n {
            m.set(i, i, 1);
        }
        m
    }

    pub fn from_rows(rows: &[Vec<i128>]) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, |x| x.len());
        let mut m = Self::zero(r, c);
        for (i, row) in rows.iter().enumerate() {
            assert_eq!(row.len(), c);
            for (j, &v) in row.iter().enumerate() {
                m.set(i, j, v);
            }
        }
        m
    }

    pub fn get(&self, r: usize, c: usize) -> i128 {
        self.data[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, v: i128) {
        self.data[r * self.cols + c] = v;
    }

    pub fn mul(&self, o: &DenseMatrix) -> DenseMatrix {
        assert_eq!(self.cols, o.rows);
        let mut m = DenseMatrix::zero(self.rows, o.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a == 0 {
                    continue;
                }
                for j in 0..o.cols {
                    m.data[i * o.cols + j] += a * o.get(k, j);
                }
            }
        }
        m
    }

    /// Determinant by fraction-free elimination.
    pub fn determinant(&self) -> i128 {
        assert_eq!(self.rows, self.cols);
        let n = self.rows;
        let mut a = self.clone();
        let mut sign = 1;
        let mut prev = 1i128;
        for k in 0..n {
            let Some(p) = (k..n).find(|&i| a.get(i, k) != 0) else {
                return 0;
            };
            if p != k {
                a.swap_rows(p, k);
                sign = -sign;
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    let v = (a.get(i, j) * a.get(k, k) - a.get(i, k) * a.get(k, j)) / prev;
                    a.set(i, j, v);
                }
            }
            prev = a.get(k, k);
        }
        sign * if n == 0 { 1 } else { a.get(n - 1, n - 1) }
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.data.swap(a * self.cols + j, b * self.cols + j);
        }
    }

    fn swap_cols(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for i in 0..self.rows {
            self.data.swap(i * self.cols + a, i * self.cols + b);
        }
    }

    /// row[dst] += k * row[src]
    fn add_row(&mut self, dst: usize, src: usize, k: i128) -> Result<(), MatrixError> {
        for j in 0..self.cols {
            let v = checked_axpy(self.get(dst, j), k, self.get(src, j))?;
            self.set(dst, j, v);
        }
        Ok(())
    }

    /// col[dst] += k * col[src]
    fn add_col(&mut self, dst: usize, src: usize, k: i128) -> Result<(), MatrixError> {
        for i in 0..self.rows {
            let v = checked_axpy(self.get(i, dst), k, self.get(i, src))?;
            self.set(i, dst, v);
        }
        Ok(())
    }

    fn negate_row(&mut self, r: usize) {
        for j in 0..self.cols {
            let v = -self.get(r, j);
            self.set(r, j, v);
        }
    }
}

fn checked_axpy(y: i128, k: i128, x: i128) -> Result<i128, MatrixError> {
    k.checked_mul(x).and_then(|p| y.checked_add(p)).ok_or(MatrixError::Overflow)
}

/// Invariant factors and, optionally, transforms with U·M·V = D.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SnfResult {
    /// Nonzero invariant factors, each dividing the next.
    pub factors: Vec<i128>,
    pub transforms: Option<(DenseMatrix, DenseMatrix, DenseMatrix)>,
}

impl SnfResult {
    pub fn rank(&self) -> usize {
        self.factors.len()
    }
}

/// Smith normal form of a dense matrix, pivoting on the smallest magnitude.
pub fn smith_normal_form(m: &DenseMatrix, track: bool) -> Result<SnfResult, MatrixError> {
    let (rows, cols) = (m.rows, m.cols);
    let mut a = m.clone();
    let mut u = track.then(|| DenseMatrix::identity(rows));
    let mut v = track.then(|| DenseMatrix::identity(cols));
    let mut factors = Vec::new();
    for t in 0..rows.min(cols) {
        loop {
            let mut best: Option<(usize, usize, i128)> = None;
            for i in t..rows {
                for j in t..cols {
                    let x = a.get(i, j).abs();
                    if x != 0 && best.is_none_or(|b| x < b.2) {
                        best = Some((i, j, x));
                    }
                }
            }
            let Some((pi, pj, _)) = best else {
                return finish(a, factors, u, v);
            };
            a.swap_rows(t, pi);
            a.swap_cols(t, pj);
            if let Some(u) = u.as_mut() {
                u.swap_rows(t, pi);
            }
            if let Some(v) = v.as_mut() {
                v.swap_cols(t, pj);
            }
            let p = a.get(t, t);
            let mut dirty = false;
            for i in t + 1..rows {
                let q = a.get(i, t) / p;
                if q != 0 {
                    a.add_row(i, t, -q)?;
                    if let Some(u) = u.as_mut() {
                        u.add_row(i, t, -q)?;
                    }
                }
                dirty |= a.get(i, t) != 0;
            }
            for j in t + 1..cols {
                let q = a.get(t, j) / p;
                if q != 0 {
                    a.add_col(j, t, -q)?;
                    if let Some(v) = v.as_mut() {
                        v.add_col(j, t, -q)?;
                    }
                }
                dirty |= a.get(t, j) != 0;
            }
            if dirty {
                continue;
            }
            let bad = (t + 1..rows).find(|&i| (t + 1..cols).any(|j| a.get(i, j) % p != 0));
            if let Some(i) = bad {
                a.add_row(t, i, 1)?;
                if let Some(u) = u.as_mut() {
                    u.add_row(t, i, 1)?;
                }
                continue;
            }
            if p < 0 {
                a.negate_row(t);
                if let Some(u) = u.as_mut() {
                    u.negate_row(t);
                }
            }
            factors.push(a.get(t, t));
            break;
        }
    }
    finish(a, factors, u, v)
}

fn finish(
    d: DenseMatrix,
    factors: Vec<i128>,
    u: Option<DenseMatrix>,
    v: Option<DenseMatrix>,
) -> Result<SnfResult, MatrixError> {
    let transforms = match (u, v) {
        (Some(u), Some(v)) => Some((u, d, v)),
        _ => None,
    };
    Ok(SnfResult { factors, transforms })
}

/// Invariant factors of a sparse matrix: unit pivots are eliminated sparsely,
/// the remaining block goes through dense Smith normal form.
pub fn invariant_factors(m: &SparseMatrix) -> Result<Vec<i128>, MatrixError> {
    let mut rows: Vec<Vec<(usize, i64)>> = vec![Vec::new(); m.rows];
    for (r, c, v) in m.triplets() {
        rows[r].push((c, v));
    }
    for r in rows.iter_mut() {
        r.sort_unstable();
    }
    let mut col_rows: Vec<HashSet<usize>> = vec![HashSet::new(); m.cols];
    for (r, row) in rows.iter().enumerate() {
        for &(c, _) in row {
            col_rows[c].insert(r);
        }
    }
    let mut units = 0usize;
    loop {
        let mut progress = false;
        let mut heap: BinaryHeap<Reverse<(usize, usize)>> = (0..m.cols)
            .filter(|&c| !col_rows[c].is_empty())
            .map(|c| Reverse((col_rows[c].len(), c)))
            .collect();
        while let Some(Reverse((len, c))) = heap.pop() {
            let cur = col_rows[c].len();
            if cur == 0 {
                continue;
            }
            if cur != len {
                heap.push(Reverse((cur, c)));
                continue;
            }
            // shortest row with a unit entry in column c
            let pivot = col_rows[c]
                .iter()
                .filter_map(|&r| {
                    let v = row_get(&rows[r], c);
                    (v == 1 || v == -1).then_some((rows[r].len(), r, v))
                })
                .min();
            let Some((_, pr, pv)) = pivot else {
                continue;
            };
            let prow = std::mem::take(&mut rows[pr]);
            for &(cc, _) in &prow {
                col_rows[cc].remove(&pr);
            }
            let others: Vec<usize> = col_rows[c].iter().copied().collect();
            for r in others {
                let f = row_get(&rows[r], c) * pv;
                let old = std::mem::take(&mut rows[r]);
                let new = row_axpy(&old, -f, &prow)?;
                // update column membership for changed support
                let (mut i, mut j) = (0, 0);
                while i < old.len() || j < new.len() {
                    let a = old.get(i).map(|e| e.0);
                    let b = new.get(j).map(|e| e.0);
                    match (a, b) {
                        (Some(x), Some(y)) if x == y => {
                            i += 1;
                            j += 1;
                        }
                        (Some(x), Some(y)) if x < y => {
                            col_rows[x].remove(&r);
                            i += 1;
                        }
                        (Some(x), None) => {
                            col_rows[x].remove(&r);
                            i += 1;
                        }
                        (_, Some(y)) => {
                            col_rows[y].insert(r);
                            j += 1;
                        }
                        (None, None) => unreachable!(),
                    }
                }
                rows[r] = new;
            }
            units += 1;
            progress = true;
        }
        if !progress {
            break;
        }
    }
    // dense remainder
    let live_rows: Vec<usize> = (0..m.rows).filter(|&r| !rows[r].is_empty()).collect();
    let mut live_cols: Vec<usize> = live_rows.iter().flat_map(|&r| rows[r].iter().map(|e| e.0)).collect();
    live_cols.sort_unstable();
    live_cols.dedup();
    let mut factors = vec![1i128; units];
    if !live_rows.is_empty() {
        let mut d = DenseMatrix::zero(live_rows.len(), live_cols.len());
        for (i, &r) in live_rows.iter().enumerate() {
            for &(c, v) in &rows[r] {
                let j = live_cols.binary_search(&c).unwrap();
                d.set(i, j, v as i128);
            }
        }
        factors.extend(smith_normal_form(&d, false)?.factors);
    }
    Ok(factors)
}

fn row_get(row: &[(usize, i64)], c: usize) -> i64 {
    row.binary_search_by_key(&c, |e| e.0).map(|i| row[i].1).unwrap_or(0)
}

/// a + k·b for sorted sparse rows.
fn row_axpy(a: &[(usize, i64)], k: i64, b: &[(usize, i64)]) -> Result<Vec<(usize, i64)>, MatrixError> {
    let mut out = Vec::with_capacity(a.len() + b.len());
    let (mut i, mut j) = (0, 0);
    while i < a.len() || j < b.len() {
        let take_a = j >= b.len() || (i < a.len() && a[i].0 < b[j].0);
        let take_b = i >= a.len() || (j < b.len() && b[j].0 < a[i].0);
        if take_a {
            out.push(a[i]);
            i += 1;
        } else if take_b {
            let v = k.checked_mul(b[j].1).ok_or(MatrixError::Overflow)?;
            out.push((b[j].0, v));
            j += 1;
        } else {
            let v = k
                .checked_mul(b[j].1)
                .and_then(|p| a[i].1.checked_add(p))
                .ok_or(MatrixError::Overflow)?;
            if v != 0 {
                out.push((a[i].0, v));
            }
            i += 1;
            j += 1;
        }
    }
    Ok(out)
}
