//! Spectra of Hermitian sparse operators.
//!
//! Full mode splits the matrix into the connected components of its sparsity
//! graph and diagonalizes each block densely; the dimension limit applies per
//! block. Low-k mode runs a restarted block Krylov iteration with
//! Rayleigh–Ritz extraction for the `k` lowest eigenvalues.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{QdError, Result};
use crate::sparse::SparseOperator;

/// Eigenvalues closer than this are one level.
pub const CLUSTER_TOL: f64 = 1e-8;
/// Inputs with `max |H − H†|` above this are rejected.
pub const HERMITICITY_TOL: f64 = 1e-9;
/// Largest block diagonalized densely.
pub const MAX_BLOCK_DIM: usize = 4096;
/// Largest total dimension accepted in full mode.
pub const MAX_FULL_DIM: usize = 1 << 20;
/// Largest dimension accepted by the Krylov solver.
pub const MAX_LOWK_DIM: usize = 1 << 22;
pub const MAX_LOWK: usize = 64;
/// A tag is attached to a level when its weight on the level exceeds `TAG_TOL`.
pub const TAG_TOL: f64 = 1e-8;

const MAX_KRYLOV_DEPTH: usize = 24;
const MAX_RESTARTS: usize = 500;
const MAX_KRYLOV_ENTRIES: usize = 1 << 27;
const KRYLOV_COST_BUDGET: f64 = 1073741824.0;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SpectrumMode {
    Full,
    LowK(usize),
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Level {
    pub eigenvalue: f64,
    pub multiplicity: usize,
    pub sectors: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SpectrumReport {
    pub dim: usize,
    pub mode: String,
    pub levels: Vec<Level>,
    pub ground_energy: f64,
    pub ground_degeneracy: usize,
    /// Low-k mode only: the highest level may have more states than were computed.
    pub truncated: bool,
}

impl SpectrumReport {
    pub fn eigenvalues(&self) -> Vec<f64> {
        self.levels.iter().map(|l| l.eigenvalue).collect()
    }

    pub fn multiplicities(&self) -> Vec<usize> {
        self.levels.iter().map(|l| l.multiplicity).collect()
    }
}

/// Eigenpairs of one invariant block; `vectors` columns live on `basis`.
#[derive(Debug, Clone)]
pub struct BlockEigen {
    pub basis: Vec<usize>,
    pub values: Vec<f64>,
    pub vectors: DMatrix<Complex64>,
}

fn check_hermitian(h: &SparseOperator) -> Result<()> {
    let r = h.hermiticity_residue();
    if r > HERMITICITY_TOL {
        return Err(QdError::Argument(format!("operator is not Hermitian (residue {r:.3e})")));
    }
    Ok(())
}

/// Index sets of the connected components of the sparsity graph.
pub fn invariant_blocks(h: &SparseOperator) -> Vec<Vec<usize>> {
    let n = h.dim();
    let mut parent: Vec<usize> = (0..n).collect();
    fn find(p: &mut [usize], mut x: usize) -> usize {
        while p[x] != x {
            p[x] = p[p[x]];
            x = p[x];
        }
        x
    }
    for (i, j, _) in h.triplets() {
        let (a, b) = (find(&mut parent, i), find(&mut parent, j));
        if a != b {
            parent[a.max(b)] = a.min(b);
        }
    }
    let mut slot = vec![usize::MAX; n];
    let mut blocks: Vec<Vec<usize>> = Vec::new();
    for i in 0..n {
        let r = find(&mut parent, i);
        if slot[r] == usize::MAX {
            slot[r] = blocks.len();
            blocks.push(Vec::new());
        }
        blocks[slot[r]].push(i);
    }
    blocks
}

/// All eigenpairs, block by block.
pub fn full_eigen(h: &SparseOperator) -> Result<Vec<BlockEigen>> {
    check_hermitian(h)?;
    let blocks = invariant_blocks(h);
    if let Some(b) = blocks.iter().find(|b| b.len() > MAX_BLOCK_DIM) {
        return Err(QdError::Capacity(format!(
            "invariant block of dimension {} exceeds the dense limit {MAX_BLOCK_DIM}; use low-k mode",
            b.len()
        )));
    }
    Ok(blocks
        .into_par_iter()
        .map(|basis| {
            let m = h.submatrix(&basis);
            let m = (&m + m.adjoint()) * Complex64::new(0.5, 0.0);
            let eig = m.symmetric_eigen();
            BlockEigen { basis, values: eig.eigenvalues.iter().copied().collect(), vectors: eig.eigenvectors }
        })
        .collect())
}

/// A state vector stored on a subset of basis indices.
struct SupportedVector<'a> {
    basis: &'a [usize],
    amps: Vec<Complex64>,
}

fn expectation(op: &SparseOperator, v: &SupportedVector) -> Complex64 {
    let mut pos = std::collections::HashMap::with_capacity(v.basis.len());
    for (k, &b) in v.basis.iter().enumerate() {
        pos.insert(b, k);
    }
    let mut acc = Complex64::new(0.0, 0.0);
    for (k, &i) in v.basis.iter().enumerate() {
        let mut row = Complex64::new(0.0, 0.0);
        for (j, x) in op.row(i) {
            if let Some(&l) = pos.get(&j) {
                row += x * v.amps[l];
            }
        }
        acc += v.amps[k].conj() * row;
    }
    acc
}

fn cluster(mut pairs: Vec<(f64, usize)>) -> Vec<(f64, Vec<usize>)> {
    pairs.sort_by(|a, b| a.0.total_cmp(&b.0));
    let mut out: Vec<(f64, Vec<usize>, f64)> = Vec::new();
    for (e, id) in pairs {
        match out.last_mut() {
            Some((sum, ids, last)) if e - *last <= CLUSTER_TOL => {
                *sum += e;
                ids.push(id);
                *last = e;
            }
            _ => out.push((e, vec![id], e)),
        }
    }
    out.into_iter().map(|(sum, ids, _)| (sum / ids.len() as f64, ids)).collect()
}

fn tag_level(vectors: &[SupportedVector], tags: &[(String, SparseOperator)]) -> Vec<String> {
    tags.iter()
        .filter(|(_, op)| {
            let weight: f64 = vectors.iter().map(|v| expectation(op, v).re).sum();
            weight > TAG_TOL
        })
        .map(|(name, _)| name.clone())
        .collect()
}

/// Spectrum without sector tags.
/// Errors when a space of dimension `dim` is too large for `mode`; call it
/// before building a Hamiltonian to fail fast.
pub fn check_capacity(dim: usize, mode: SpectrumMode) -> Result<()> {
    let (limit, name) = match mode {
        SpectrumMode::Full => (MAX_FULL_DIM, "full"),
        SpectrumMode::LowK(_) => (MAX_LOWK_DIM, "low-k"),
    };
    if dim > limit {
        return Err(QdError::Capacity(format!("dimension {dim} exceeds the {name} mode limit {limit}")));
    }
    Ok(())
}

pub fn spectrum(h: &SparseOperator, mode: SpectrumMode) -> Result<SpectrumReport> {
    spectrum_tagged(h, mode, &[])
}

/// Spectrum with each level tagged by the projectors carrying weight on it.
///
/// The weight of projector `P` on a level with spectral projector `Π` is
/// `Tr(P Π)`, so tags are independent of the eigenbasis chosen inside a
/// degenerate level. Tags are meant to be orthogonal projectors summing to one.
pub fn spectrum_tagged(
    h: &SparseOperator,
    mode: SpectrumMode,
    tags: &[(String, SparseOperator)],
) -> Result<SpectrumReport> {
    check_capacity(h.dim(), mode)?;
    for (name, op) in tags {
        if op.dim() != h.dim() {
            return Err(QdError::Argument(format!("tag {name} has dimension {} vs {}", op.dim(), h.dim())));
        }
    }
    match mode {
        SpectrumMode::Full => {
            let blocks = full_eigen(h)?;
            let mut pairs = Vec::with_capacity(h.dim());
            let mut index = Vec::with_capacity(h.dim());
            for (b, blk) in blocks.iter().enumerate() {
                for (k, &e) in blk.values.iter().enumerate() {
                    pairs.push((e, index.len()));
                    index.push((b, k));
                }
            }
            let levels = cluster(pairs)
                .into_par_iter()
                .map(|(e, ids)| {
                    let sectors = if tags.is_empty() {
                        Vec::new()
                    } else {
                        let vectors: Vec<SupportedVector> = ids
                            .iter()
                            .map(|&id| {
                                let (b, k) = index[id];
                                SupportedVector {
                                    basis: &blocks[b].basis,
                                    amps: blocks[b].vectors.column(k).iter().copied().collect(),
                                }
                            })
                            .collect();
                        tag_level(&vectors, tags)
                    };
                    Level { eigenvalue: e, multiplicity: ids.len(), sectors }
                })
                .collect();
            Ok(report(h.dim(), "full", levels, false))
        }
        SpectrumMode::LowK(k) => {
            let (values, vectors) = lowest_eigenpairs(h, k)?;
            let all: Vec<usize> = (0..h.dim()).collect();
            let pairs = values.iter().copied().zip(0..).collect();
            let levels = cluster(pairs)
                .into_iter()
                .map(|(e, ids)| {
                    let sectors = if tags.is_empty() {
                        Vec::new()
                    } else {
                        let vs: Vec<SupportedVector> = ids
                            .iter()
                            .map(|&i| SupportedVector {
                                basis: &all,
                                amps: vectors.column(i).iter().copied().collect(),
                            })
                            .collect();
                        tag_level(&vs, tags)
                    };
                    Level { eigenvalue: e, multiplicity: ids.len(), sectors }
                })
                .collect();
            Ok(report(h.dim(), "lowk", levels, k < h.dim()))
        }
    }
}

fn report(dim: usize, mode: &str, levels: Vec<Level>, truncated: bool) -> SpectrumReport {
    let (ground_energy, ground_degeneracy) = levels.first().map(|l| (l.eigenvalue, l.multiplicity)).unwrap_or((0.0, 0));
    SpectrumReport { dim, mode: mode.into(), levels, ground_energy, ground_degeneracy, truncated }
}

/// Projector onto the lowest level, by full diagonalization.
pub fn groundspace_projector(h: &SparseOperator) -> Result<SparseOperator> {
    let blocks = full_eigen(h)?;
    let ground = blocks.iter().flat_map(|b| b.values.iter().copied()).fold(f64::INFINITY, f64::min);
    let mut triplets = Vec::new();
    for b in &blocks {
        for (k, &e) in b.values.iter().enumerate() {
            if e - ground > CLUSTER_TOL {
                continue;
            }
            let v = b.vectors.column(k);
            for (x, &i) in b.basis.iter().enumerate() {
                for (y, &j) in b.basis.iter().enumerate() {
                    triplets.push((i, j, v[x] * v[y].conj()));
                }
            }
        }
    }
    SparseOperator::from_triplets(h.dim(), triplets)
}

fn apply_columns(h: &SparseOperator, q: &DMatrix<Complex64>) -> Result<DMatrix<Complex64>> {
    let n = q.nrows();
    let cols: Vec<Vec<Complex64>> =
        (0..q.ncols()).into_par_iter().map(|j| h.apply(&q.as_slice()[j * n..(j + 1) * n])).collect::<Result<_>>()?;
    Ok(DMatrix::from_iterator(n, q.ncols(), cols.into_iter().flatten()))
}

// Tall-skinny products on the raw column-major storage; nalgebra's generic
// complex kernels are far slower at these shapes.

/// `a[:, ..k]ᴴ b`.
fn adjoint_mul(a: &DMatrix<Complex64>, k: usize, b: &DMatrix<Complex64>) -> DMatrix<Complex64> {
    let n = a.nrows();
    let (sa, sb) = (a.as_slice(), b.as_slice());
    let vals: Vec<Complex64> = (0..k * b.ncols())
        .into_par_iter()
        .map(|idx| {
            let (i, j) = (idx % k, idx / k);
            sa[i * n..(i + 1) * n].iter().zip(&sb[j * n..(j + 1) * n]).map(|(x, y)| x.conj() * y).sum()
        })
        .collect();
    DMatrix::from_vec(k, b.ncols(), vals)
}

/// `aᴴ H a` from `ha = H a`, computing one triangle and mirroring it.
fn projected_hermitian(a: &DMatrix<Complex64>, ha: &DMatrix<Complex64>) -> DMatrix<Complex64> {
    let (n, m) = a.shape();
    let (sa, sh) = (a.as_slice(), ha.as_slice());
    let pairs: Vec<(usize, usize)> = (0..m).flat_map(|j| (0..=j).map(move |i| (i, j))).collect();
    let vals: Vec<Complex64> = pairs
        .par_iter()
        .map(|&(i, j)| sa[i * n..(i + 1) * n].iter().zip(&sh[j * n..(j + 1) * n]).map(|(x, y)| x.conj() * y).sum())
        .collect();
    let mut t = DMatrix::zeros(m, m);
    for (&(i, j), v) in pairs.iter().zip(vals) {
        t[(i, j)] = v;
        t[(j, i)] = v.conj();
    }
    for i in 0..m {
        t[(i, i)].im = 0.0;
    }
    t
}

/// `out += sign · a[:, ..k] · coef`.
fn add_mul(out: &mut DMatrix<Complex64>, a: &DMatrix<Complex64>, k: usize, coef: &DMatrix<Complex64>, sign: f64) {
    let n = a.nrows();
    let sa = a.as_slice();
    out.as_mut_slice().par_chunks_mut(n).enumerate().for_each(|(j, col)| {
        for i in 0..k {
            let c = coef[(i, j)] * sign;
            if c != Complex64::new(0.0, 0.0) {
                for (o, x) in col.iter_mut().zip(&sa[i * n..(i + 1) * n]) {
                    *o += x * c;
                }
            }
        }
    });
}

/// `a[:, ..k] · coef`.
fn mul(a: &DMatrix<Complex64>, k: usize, coef: &DMatrix<Complex64>) -> DMatrix<Complex64> {
    let mut out = DMatrix::zeros(a.nrows(), coef.ncols());
    add_mul(&mut out, a, k, coef, 1.0);
    out
}

fn orthonormal_basis(m: DMatrix<Complex64>) -> DMatrix<Complex64> {
    m.qr().q()
}

/// Orthonormal basis of `[x, Hx, H²x, …]` with up to `depth` blocks, built by
/// block Gram–Schmidt with reorthogonalization. Columns that vanish after
/// projection are dropped; nearly dependent ones become arbitrary directions
/// orthogonal to the basis, which Rayleigh–Ritz tolerates.
fn krylov_basis(h: &SparseOperator, x: &DMatrix<Complex64>, depth: usize) -> Result<DMatrix<Complex64>> {
    let (n, block) = x.shape();
    let mut q = DMatrix::zeros(n, block * depth);
    q.columns_mut(0, block).copy_from(x);
    let mut filled = block;
    let mut cur = x.clone();
    for _ in 1..depth {
        let mut next = apply_columns(h, &cur)?;
        let scale = next.column_iter().map(|c| c.norm()).fold(0.0, f64::max);
        if scale == 0.0 {
            break;
        }
        for _ in 0..2 {
            let overlap = adjoint_mul(&q, filled, &next);
            add_mul(&mut next, &q, filled, &overlap, -1.0);
        }
        let qr = next.qr();
        let r = qr.r();
        let keep: Vec<usize> = (0..r.nrows().min(r.ncols())).filter(|&j| r[(j, j)].norm() > 1e-13 * scale).collect();
        if keep.is_empty() {
            break;
        }
        let full = qr.q();
        let mut fresh = DMatrix::from_fn(n, keep.len(), |i, c| full[(i, keep[c])]);
        for _ in 0..2 {
            let overlap = adjoint_mul(&q, filled, &fresh);
            add_mul(&mut fresh, &q, filled, &overlap, -1.0);
            fresh = orthonormal_basis(fresh);
        }
        q.columns_mut(filled, fresh.ncols()).copy_from(&fresh);
        filled += fresh.ncols();
        cur = fresh;
    }
    Ok(q.columns(0, filled).into_owned())
}

/// The `k` lowest eigenpairs by restarted block Krylov iteration.
pub fn lowest_eigenpairs(h: &SparseOperator, k: usize) -> Result<(Vec<f64>, DMatrix<Complex64>)> {
    let n = h.dim();
    if k == 0 || k > MAX_LOWK {
        return Err(QdError::Argument(format!("k must be in 1..={MAX_LOWK}, got {k}")));
    }
    if n > MAX_LOWK_DIM {
        return Err(QdError::Capacity(format!("dimension {n} exceeds {MAX_LOWK_DIM}")));
    }
    check_hermitian(h)?;
    let k = k.min(n);
    let block = (k + 8).min(n);
    if n.saturating_mul(block * 2) > MAX_KRYLOV_ENTRIES {
        return Err(QdError::Capacity(format!("Krylov basis of {} x {} is too large", n, block * 2)));
    }
    // cap the basis width so that orthogonalization, O(n · width²), stays affordable
    let width_cap = ((KRYLOV_COST_BUDGET / n as f64).sqrt() as usize).max(2 * block);
    let depth =
        (MAX_KRYLOV_ENTRIES / (n * block)).min(MAX_KRYLOV_DEPTH).min(width_cap / block).min(n.div_ceil(block)).max(2);
    if n <= MAX_BLOCK_DIM && n <= block * depth {
        let eig = h.to_dense().symmetric_eigen();
        let mut order: Vec<usize> = (0..n).collect();
        order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));
        let values = order[..k].iter().map(|&i| eig.eigenvalues[i]).collect();
        let vectors = DMatrix::from_fn(n, k, |r, c| eig.eigenvectors[(r, order[c])]);
        return Ok((values, vectors));
    }

    let mut rng = ChaCha8Rng::seed_from_u64(0x10c7);
    let mut x = orthonormal_basis(DMatrix::from_fn(n, block, |_, _| {
        Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))
    }));
    let mut residual = f64::INFINITY;
    for _ in 0..MAX_RESTARTS {
        let q = krylov_basis(h, &x, depth)?;
        let hq = apply_columns(h, &q)?;
        let t = projected_hermitian(&q, &hq);
        let eig = t.symmetric_eigen();
        let mut order: Vec<usize> = (0..eig.eigenvalues.len()).collect();
        order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));
        let keep = block.min(order.len());
        let y = DMatrix::from_fn(q.ncols(), keep, |r, c| eig.eigenvectors[(r, order[c])]);
        let theta: Vec<f64> = order[..keep].iter().map(|&i| eig.eigenvalues[i]).collect();
        x = mul(&q, q.ncols(), &y);
        let hx = mul(&hq, hq.ncols(), &y);
        let scale = eig.eigenvalues.iter().fold(1.0f64, |m, e| m.max(e.abs()));
        residual = (0..k)
            .map(|c| {
                let r: DVector<Complex64> = hx.column(c) - x.column(c) * Complex64::new(theta[c], 0.0);
                r.norm()
            })
            .fold(0.0, f64::max);
        if residual <= 1e-9 * scale {
            let vectors = x.columns(0, k).into_owned();
            return Ok((theta[..k].to_vec(), vectors));
        }
        if keep < block {
            let extra = DMatrix::from_fn(n, block - keep, |_, _| Complex64::new(rng.gen_range(-1.0..1.0), 0.0));
            let mut full = DMatrix::zeros(n, block);
            full.columns_mut(0, keep).copy_from(&x);
            full.columns_mut(keep, block - keep).copy_from(&extra);
            x = orthonormal_basis(full);
        }
    }
    Err(QdError::NoConvergence { iterations: MAX_RESTARTS, residual })
}
