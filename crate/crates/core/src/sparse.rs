//! Tensor-product qudit spaces and compressed-row complex matrices.

use std::io::Write;

use nalgebra::DMatrix;
use num_complex::Complex64;
use rayon::prelude::*;

use crate::error::{QdError, Result};

/// Entries with magnitude at or below this are not stored.
pub const DROP_TOL: f64 = 1e-14;

/// Largest total dimension a [`HilbertSpace`] may have.
pub const MAX_TOTAL_DIM: usize = 1 << 31;

/// `num_edges` qudits of dimension `qudit_dim`; edge 0 is the fastest-varying digit.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct HilbertSpace {
    qudit_dim: usize,
    num_edges: usize,
    total_dim: usize,
}

impl HilbertSpace {
    pub fn new(qudit_dim: usize, num_edges: usize) -> Result<Self> {
        Self::with_limit(qudit_dim, num_edges, MAX_TOTAL_DIM)
    }

    pub fn with_limit(qudit_dim: usize, num_edges: usize, limit: usize) -> Result<Self> {
        if qudit_dim == 0 {
            return Err(QdError::Argument("qudit dimension must be positive".into()));
        }
        let mut total: usize = 1;
        for _ in 0..num_edges {
            total = total
                .checked_mul(qudit_dim)
                .filter(|&t| t <= limit)
                .ok_or_else(|| QdError::Capacity(format!("{qudit_dim}^{num_edges} exceeds {limit}")))?;
        }
        Ok(HilbertSpace { qudit_dim, num_edges, total_dim: total })
    }

    pub fn qudit_dim(&self) -> usize {
        self.qudit_dim
    }

    pub fn num_edges(&self) -> usize {
        self.num_edges
    }

    pub fn total_dim(&self) -> usize {
        self.total_dim
    }

    pub fn stride(&self, edge: usize) -> usize {
        self.qudit_dim.pow(edge as u32)
    }

    pub fn digit(&self, index: usize, edge: usize) -> usize {
        (index / self.stride(edge)) % self.qudit_dim
    }

    pub fn digits(&self, mut index: usize) -> Vec<usize> {
        (0..self.num_edges)
            .map(|_| {
                let d = index % self.qudit_dim;
                index /= self.qudit_dim;
                d
            })
            .collect()
    }

    pub fn index(&self, digits: &[usize]) -> usize {
        digits.iter().rev().fold(0, |acc, &d| acc * self.qudit_dim + d)
    }
}

/// Square complex matrix in compressed sparse row form, column indices sorted.
#[derive(Debug, Clone, PartialEq)]
pub struct SparseOperator {
    dim: usize,
    indptr: Vec<usize>,
    indices: Vec<usize>,
    values: Vec<Complex64>,
}

fn zero() -> Complex64 {
    Complex64::new(0.0, 0.0)
}

impl SparseOperator {
    pub fn zeros(dim: usize) -> Self {
        SparseOperator { dim, indptr: vec![0; dim + 1], indices: Vec::new(), values: Vec::new() }
    }

    pub fn identity(dim: usize) -> Self {
        Self::from_diagonal(vec![Complex64::new(1.0, 0.0); dim])
    }

    pub fn from_diagonal(diag: Vec<Complex64>) -> Self {
        let dim = diag.len();
        let mut op = Self::zeros(dim);
        for (i, v) in diag.into_iter().enumerate() {
            if v.norm() > DROP_TOL {
                op.indices.push(i);
                op.values.push(v);
            }
            op.indptr[i + 1] = op.indices.len();
        }
        op
    }

    /// The permutation matrix sending `|j⟩` to `|image[j]⟩`.
    pub fn from_permutation(image: &[usize]) -> Result<Self> {
        let dim = image.len();
        let mut source = vec![usize::MAX; dim];
        for (j, &i) in image.iter().enumerate() {
            if i >= dim || source[i] != usize::MAX {
                return Err(QdError::Argument("image is not a permutation".into()));
            }
            source[i] = j;
        }
        Ok(SparseOperator {
            dim,
            indptr: (0..=dim).collect(),
            indices: source,
            values: vec![Complex64::new(1.0, 0.0); dim],
        })
    }

    /// Builds from `(row, col, value)` triplets; duplicates are summed.
    pub fn from_triplets(dim: usize, triplets: impl IntoIterator<Item = (usize, usize, Complex64)>) -> Result<Self> {
        let mut rows: Vec<Vec<(usize, Complex64)>> = vec![Vec::new(); dim];
        for (r, c, v) in triplets {
            if r >= dim || c >= dim {
                return Err(QdError::Argument(format!("entry ({r}, {c}) outside {dim}x{dim}")));
            }
            rows[r].push((c, v));
        }
        Ok(Self::from_rows(dim, rows.into_iter().map(compress_row).collect()))
    }

    fn from_rows(dim: usize, rows: Vec<(Vec<usize>, Vec<Complex64>)>) -> Self {
        let mut op = Self::zeros(dim);
        for (i, (cols, vals)) in rows.into_iter().enumerate() {
            op.indices.extend(cols);
            op.values.extend(vals);
            op.indptr[i + 1] = op.indices.len();
        }
        op
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn nnz(&self) -> usize {
        self.values.len()
    }

    pub fn row(&self, i: usize) -> impl Iterator<Item = (usize, Complex64)> + '_ {
        let r = self.indptr[i]..self.indptr[i + 1];
        self.indices[r.clone()].iter().copied().zip(self.values[r].iter().copied())
    }

    pub fn get(&self, i: usize, j: usize) -> Complex64 {
        let r = self.indptr[i]..self.indptr[i + 1];
        match self.indices[r.clone()].binary_search(&j) {
            Ok(k) => self.values[r.start + k],
            Err(_) => zero(),
        }
    }

    pub fn triplets(&self) -> impl Iterator<Item = (usize, usize, Complex64)> + '_ {
        (0..self.dim).flat_map(move |i| self.row(i).map(move |(j, v)| (i, j, v)))
    }

    pub fn diagonal(&self) -> Vec<Complex64> {
        (0..self.dim).map(|i| self.get(i, i)).collect()
    }

    pub fn is_diagonal(&self) -> bool {
        self.triplets().all(|(i, j, _)| i == j)
    }

    pub fn trace(&self) -> Complex64 {
        (0..self.dim).map(|i| self.get(i, i)).sum()
    }

    pub fn max_abs(&self) -> f64 {
        self.values.iter().map(|v| v.norm()).fold(0.0, f64::max)
    }

    fn check_dim(&self, other: &SparseOperator) -> Result<()> {
        if self.dim != other.dim {
            return Err(QdError::Argument(format!("dimension mismatch: {} vs {}", self.dim, other.dim)));
        }
        Ok(())
    }

    pub fn scale(&self, c: Complex64) -> Self {
        if c.norm() <= DROP_TOL {
            return Self::zeros(self.dim);
        }
        let rows = (0..self.dim).map(|i| compress_row(self.row(i).map(|(j, v)| (j, v * c)).collect())).collect();
        Self::from_rows(self.dim, rows)
    }

    pub fn scale_real(&self, c: f64) -> Self {
        self.scale(Complex64::new(c, 0.0))
    }

    /// `self + c·other`.
    pub fn add_scaled(&self, other: &SparseOperator, c: Complex64) -> Result<Self> {
        self.check_dim(other)?;
        let rows = (0..self.dim)
            .into_par_iter()
            .map(|i| {
                let mut row: Vec<(usize, Complex64)> = self.row(i).collect();
                row.extend(other.row(i).map(|(j, v)| (j, v * c)));
                compress_row(row)
            })
            .collect();
        Ok(Self::from_rows(self.dim, rows))
    }

    pub fn add(&self, other: &SparseOperator) -> Result<Self> {
        self.add_scaled(other, Complex64::new(1.0, 0.0))
    }

    pub fn sub(&self, other: &SparseOperator) -> Result<Self> {
        self.add_scaled(other, Complex64::new(-1.0, 0.0))
    }

    /// `Σ c_k · op_k` over operators of equal dimension.
    pub fn linear_combination<'a>(
        dim: usize,
        terms: impl IntoIterator<Item = (Complex64, &'a SparseOperator)>,
    ) -> Result<Self> {
        let terms: Vec<_> = terms.into_iter().filter(|(c, _)| c.norm() > DROP_TOL).collect();
        for (_, op) in &terms {
            if op.dim != dim {
                return Err(QdError::Argument(format!("dimension mismatch: {} vs {dim}", op.dim)));
            }
        }
        let rows = (0..dim)
            .into_par_iter()
            .map(|i| compress_row(terms.iter().flat_map(|(c, op)| op.row(i).map(move |(j, v)| (j, v * c))).collect()))
            .collect();
        Ok(Self::from_rows(dim, rows))
    }

    pub fn matmul(&self, other: &SparseOperator) -> Result<Self> {
        self.check_dim(other)?;
        let rows = (0..self.dim)
            .into_par_iter()
            .map(|i| {
                let mut row = Vec::new();
                for (k, a) in self.row(i) {
                    row.extend(other.row(k).map(|(j, b)| (j, a * b)));
                }
                compress_row(row)
            })
            .collect();
        Ok(Self::from_rows(self.dim, rows))
    }

    pub fn adjoint(&self) -> Self {
        let mut rows: Vec<Vec<(usize, Complex64)>> = vec![Vec::new(); self.dim];
        for (i, j, v) in self.triplets() {
            rows[j].push((i, v.conj()));
        }
        Self::from_rows(self.dim, rows.into_iter().map(compress_row).collect())
    }

    /// Largest entrywise difference `max |self − other|`.
    pub fn max_abs_diff(&self, other: &SparseOperator) -> Result<f64> {
        Ok(self.sub(other)?.max_abs())
    }

    /// `[self, other] = self·other − other·self`.
    pub fn commutator(&self, other: &SparseOperator) -> Result<Self> {
        self.matmul(other)?.sub(&other.matmul(self)?)
    }

    pub fn commutator_norm(&self, other: &SparseOperator) -> Result<f64> {
        Ok(self.commutator(other)?.max_abs())
    }

    /// Largest entry of `self − self†`.
    pub fn hermiticity_residue(&self) -> f64 {
        self.sub(&self.adjoint()).map(|d| d.max_abs()).unwrap_or(f64::INFINITY)
    }

    /// Largest entry of `self² − self`.
    pub fn idempotency_residue(&self) -> f64 {
        self.matmul(self).and_then(|sq| sq.sub(self)).map(|d| d.max_abs()).unwrap_or(f64::INFINITY)
    }

    pub fn apply(&self, x: &[Complex64]) -> Result<Vec<Complex64>> {
        if x.len() != self.dim {
            return Err(QdError::Argument(format!("vector length {} vs dimension {}", x.len(), self.dim)));
        }
        Ok((0..self.dim).into_par_iter().map(|i| self.row(i).map(|(j, v)| v * x[j]).sum()).collect())
    }

    pub fn to_dense(&self) -> DMatrix<Complex64> {
        let mut m = DMatrix::from_element(self.dim, self.dim, zero());
        for (i, j, v) in self.triplets() {
            m[(i, j)] = v;
        }
        m
    }

    pub fn from_dense(m: &DMatrix<Complex64>) -> Result<Self> {
        if m.nrows() != m.ncols() {
            return Err(QdError::Argument("matrix is not square".into()));
        }
        let n = m.nrows();
        Self::from_triplets(n, (0..n).flat_map(|i| (0..n).map(move |j| (i, j, m[(i, j)]))))
    }

    /// Restricts to the rows and columns in `basis` (in that order).
    pub fn submatrix(&self, basis: &[usize]) -> DMatrix<Complex64> {
        let mut pos = std::collections::HashMap::with_capacity(basis.len());
        for (k, &b) in basis.iter().enumerate() {
            pos.insert(b, k);
        }
        let mut m = DMatrix::from_element(basis.len(), basis.len(), zero());
        for (k, &i) in basis.iter().enumerate() {
            for (j, v) in self.row(i) {
                if let Some(&l) = pos.get(&j) {
                    m[(k, l)] = v;
                }
            }
        }
        m
    }

    /// Coordinate-list dump: header `dim nnz`, then `row col re im` per entry.
    pub fn write_coo<W: Write>(&self, mut out: W) -> std::io::Result<()> {
        writeln!(out, "{} {}", self.dim, self.nnz())?;
        for (i, j, v) in self.triplets() {
            writeln!(out, "{i} {j} {:e} {:e}", v.re, v.im)?;
        }
        Ok(())
    }

    pub fn read_coo(text: &str) -> Result<Self> {
        let mut lines = text.lines().filter(|l| !l.trim().is_empty());
        let header = lines.next().ok_or_else(|| QdError::Parse("empty operator dump".into()))?;
        let nums: Vec<usize> = header
            .split_whitespace()
            .map(|t| t.parse().map_err(|_| QdError::Parse(format!("bad header {header:?}"))))
            .collect::<Result<_>>()?;
        let [dim, nnz] = nums[..] else {
            return Err(QdError::Parse(format!("bad header {header:?}")));
        };
        let mut triplets = Vec::with_capacity(nnz);
        for line in lines {
            let t: Vec<&str> = line.split_whitespace().collect();
            if t.len() != 4 {
                return Err(QdError::Parse(format!("bad entry {line:?}")));
            }
            let bad = |_| QdError::Parse(format!("bad entry {line:?}"));
            let i: usize = t[0].parse().map_err(|_| QdError::Parse(format!("bad entry {line:?}")))?;
            let j: usize = t[1].parse().map_err(|_| QdError::Parse(format!("bad entry {line:?}")))?;
            let re: f64 = t[2].parse().map_err(bad)?;
            let im: f64 = t[3].parse().map_err(bad)?;
            triplets.push((i, j, Complex64::new(re, im)));
        }
        if triplets.len() != nnz {
            return Err(QdError::Parse(format!("header says {nnz} entries, found {}", triplets.len())));
        }
        Self::from_triplets(dim, triplets)
    }
}

fn compress_row(mut row: Vec<(usize, Complex64)>) -> (Vec<usize>, Vec<Complex64>) {
    row.sort_unstable_by_key(|&(j, _)| j);
    let mut cols = Vec::with_capacity(row.len());
    let mut vals: Vec<Complex64> = Vec::with_capacity(row.len());
    for (j, v) in row {
        if cols.last() == Some(&j) {
            *vals.last_mut().unwrap() += v;
        } else {
            cols.push(j);
            vals.push(v);
        }
    }
    let keep: Vec<bool> = vals.iter().map(|v| v.norm() > DROP_TOL).collect();
    if keep.iter().all(|&k| k) {
        return (cols, vals);
    }
    let mut k = keep.iter();
    let cols = cols.into_iter().filter(|_| *k.next().unwrap()).collect();
    let mut k = keep.iter();
    let vals = vals.into_iter().filter(|_| *k.next().unwrap()).collect();
    (cols, vals)
}
