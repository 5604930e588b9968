//! Dense complex linear algebra with explicit tolerances.
//!
//! Every matrix in the crate is a [`CMatrix`]: a column-major
//! `nalgebra::DMatrix<Complex<f64>>`. Equality of matrices is always judged by
//! a norm-based relative comparison against a [`Tolerance`].

use std::ops::Range;

use nalgebra::{DMatrix, DVector};
use num_complex::Complex;
use rand::Rng;
use rand_distr::StandardNormal;

use crate::error::{invalid, Error, Result};

pub type C64 = Complex<f64>;
pub type CMatrix = DMatrix<C64>;
pub type CVector = DVector<C64>;

/// Relative gap below which two eigenvalues are treated as one cluster.
pub const SPECTRAL_GAP: f64 = 1e-6;

pub const ZERO: C64 = Complex { re: 0.0, im: 0.0 };
pub const ONE: C64 = Complex { re: 1.0, im: 0.0 };

/// Threshold used for all approximate comparisons.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Tolerance {
    pub eps: f64,
}

impl Tolerance {
    pub fn new(eps: f64) -> Result<Self> {
        if eps.is_nan() || eps <= 0.0 || !eps.is_finite() {
            return Err(invalid(format!("tolerance must be positive, got {eps}")));
        }
        Ok(Self { eps })
    }
}

impl Default for Tolerance {
    fn default() -> Self {
        Self { eps: 1e-9 }
    }
}

pub fn c(re: f64, im: f64) -> C64 {
    Complex::new(re, im)
}

pub fn identity(n: usize) -> CMatrix {
    CMatrix::identity(n, n)
}

/// The matrix unit `E_{ij}` in `M_n`.
pub fn matrix_unit(n: usize, i: usize, j: usize) -> CMatrix {
    let mut m = CMatrix::zeros(n, n);
    m[(i, j)] = ONE;
    m
}

pub fn from_real_diagonal(values: &[f64]) -> CMatrix {
    let n = values.len();
    let mut m = CMatrix::zeros(n, n);
    for (i, &v) in values.iter().enumerate() {
        m[(i, i)] = c(v, 0.0);
    }
    m
}

/// Build a matrix from real row-major entries.
pub fn from_real_rows(rows: usize, cols: usize, entries: &[f64]) -> CMatrix {
    assert_eq!(entries.len(), rows * cols);
    CMatrix::from_fn(rows, cols, |i, j| c(entries[i * cols + j], 0.0))
}

/// Kronecker product `a ⊗ b`, with the row index of `a` most significant.
pub fn kron(a: &CMatrix, b: &CMatrix) -> CMatrix {
    a.kronecker(b)
}

/// Iterated Kronecker product of a non-empty list.
pub fn kron_all(factors: &[&CMatrix]) -> CMatrix {
    let mut out = CMatrix::from_element(1, 1, ONE);
    for f in factors {
        out = kron(&out, f);
    }
    out
}

/// Block-diagonal direct sum of square matrices.
pub fn direct_sum(blocks: &[CMatrix]) -> Result<CMatrix> {
    if let Some(bad) = blocks.iter().find(|b| !b.is_square()) {
        return Err(Error::Shape(format!(
            "direct_sum needs square blocks, got {}x{}",
            bad.nrows(),
            bad.ncols()
        )));
    }
    let n: usize = blocks.iter().map(|b| b.nrows()).sum();
    let mut out = CMatrix::zeros(n, n);
    let mut off = 0;
    for b in blocks {
        let k = b.nrows();
        out.view_mut((off, off), (k, k)).copy_from(b);
        off += k;
    }
    Ok(out)
}

pub fn commutator(a: &CMatrix, b: &CMatrix) -> CMatrix {
    a * b - b * a
}

pub fn trace(m: &CMatrix) -> C64 {
    m.trace()
}

/// Operator norm: the largest singular value.
pub fn op_norm(m: &CMatrix) -> f64 {
    if m.is_empty() {
        return 0.0;
    }
    m.singular_values().iter().cloned().fold(0.0, f64::max)
}

/// `‖a − b‖_F / max(1, ‖a‖_F, ‖b‖_F)`.
pub fn rel_diff(a: &CMatrix, b: &CMatrix) -> f64 {
    let scale = 1f64.max(a.norm()).max(b.norm());
    (a - b).norm() / scale
}

pub fn approx_eq(a: &CMatrix, b: &CMatrix, tol: Tolerance) -> bool {
    a.shape() == b.shape() && rel_diff(a, b) <= tol.eps
}

pub fn hermitian_residual(m: &CMatrix) -> f64 {
    (m - m.adjoint()).norm() / 1f64.max(m.norm())
}

pub fn is_hermitian(m: &CMatrix, tol: Tolerance) -> bool {
    m.is_square() && hermitian_residual(m) <= tol.eps
}

/// True iff `m` is (approximately) an orthogonal projection.
pub fn is_projection(m: &CMatrix, tol: Tolerance) -> bool {
    if !m.is_square() {
        return false;
    }
    let idem = (m * m - m).norm();
    let herm = (m - m.adjoint()).norm();
    idem <= tol.eps * 1f64.max(m.norm()) && herm <= tol.eps * 1f64.max(m.norm())
}

pub fn is_unitary(m: &CMatrix, tol: Tolerance) -> bool {
    m.is_square() && rel_diff(&(m.adjoint() * m), &identity(m.nrows())) <= tol.eps
}

/// Spectral data of a Hermitian matrix, eigenvalues ascending.
#[derive(Clone, Debug)]
pub struct HermitianEigen {
    pub values: Vec<f64>,
    pub vectors: CMatrix,
}

impl HermitianEigen {
    /// Group eigenvalues whose consecutive distance is at most `gap · max(1, spectral radius)`.
    pub fn clusters(&self, gap: f64) -> Vec<Range<usize>> {
        let scale = self.values.iter().fold(0f64, |acc, v| acc.max(v.abs())).max(1.0);
        cluster_sorted(&self.values, gap * scale)
    }

    /// Orthonormal basis of the eigenvectors in `range`.
    pub fn cluster_basis(&self, range: Range<usize>) -> CMatrix {
        self.vectors.columns(range.start, range.len()).into_owned()
    }

    /// Spectral projections onto clustered eigenvalues, with the mean eigenvalue of each cluster.
    pub fn spectral_projections(&self, gap: f64) -> Vec<(f64, CMatrix)> {
        self.clusters(gap)
            .into_iter()
            .map(|r| {
                let mean = self.values[r.clone()].iter().sum::<f64>() / r.len() as f64;
                let q = self.cluster_basis(r);
                (mean, &q * q.adjoint())
            })
            .collect()
    }

    pub fn reconstruct(&self) -> CMatrix {
        let d = from_real_diagonal(&self.values);
        &self.vectors * d * self.vectors.adjoint()
    }
}

fn cluster_sorted(values: &[f64], gap: f64) -> Vec<Range<usize>> {
    let mut out = Vec::new();
    let mut start = 0;
    for i in 1..=values.len() {
        if i == values.len() || values[i] - values[i - 1] > gap {
            if i > start {
                out.push(start..i);
            }
            start = i;
        }
    }
    out
}

/// Eigen-decomposition of a Hermitian matrix.
pub fn eig_hermitian(m: &CMatrix, tol: Tolerance) -> Result<HermitianEigen> {
    if !m.is_square() {
        return Err(Error::Shape(format!(
            "eig_hermitian needs a square matrix, got {}x{}",
            m.nrows(),
            m.ncols()
        )));
    }
    let res = hermitian_residual(m);
    if res > tol.eps {
        return Err(Error::NotHermitian(res));
    }
    Ok(eig_hermitian_unchecked(m))
}

/// Eigen-decomposition of the Hermitian part `(m + m*)/2`.
pub(crate) fn eig_hermitian_unchecked(m: &CMatrix) -> HermitianEigen {
    let n = m.nrows();
    if n == 0 {
        return HermitianEigen {
            values: Vec::new(),
            vectors: CMatrix::zeros(0, 0),
        };
    }
    let h = (m + m.adjoint()).scale(0.5);
    let eig = nalgebra::SymmetricEigen::new(h);
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));
    let values = order.iter().map(|&i| eig.eigenvalues[i]).collect();
    let vectors = CMatrix::from_fn(n, n, |r, col| eig.eigenvectors[(r, order[col])]);
    HermitianEigen { values, vectors }
}

fn sorted_svd(m: &CMatrix, want_u: bool, want_v: bool) -> (Vec<f64>, Option<CMatrix>, Option<CMatrix>) {
    let svd = m.clone().svd(want_u, want_v);
    let k = svd.singular_values.len();
    let mut order: Vec<usize> = (0..k).collect();
    order.sort_by(|&a, &b| svd.singular_values[b].total_cmp(&svd.singular_values[a]));
    let values = order.iter().map(|&i| svd.singular_values[i]).collect();
    let u = svd.u.map(|u| CMatrix::from_fn(u.nrows(), k, |r, c| u[(r, order[c])]));
    let v = svd
        .v_t
        .map(|vt| CMatrix::from_fn(vt.ncols(), k, |r, c| vt[(order[c], r)].conj()));
    (values, u, v)
}

/// Orthonormal basis (as columns) of `{v : ‖m v‖ ≤ tol·‖m‖·‖v‖}`.
pub fn nullspace(m: &CMatrix, tol: Tolerance) -> CMatrix {
    let (rows, cols) = m.shape();
    if cols == 0 {
        return CMatrix::zeros(0, 0);
    }
    let work = if rows < cols {
        let mut padded = CMatrix::zeros(cols, cols);
        padded.view_mut((0, 0), (rows, cols)).copy_from(m);
        padded
    } else {
        m.clone()
    };
    let (values, _, v) = sorted_svd(&work, false, true);
    let v = v.expect("right singular vectors requested");
    let smax = values.first().copied().unwrap_or(0.0);
    let keep: Vec<usize> = (0..values.len())
        .filter(|&i| values[i] <= tol.eps * smax || smax == 0.0)
        .collect();
    CMatrix::from_fn(cols, keep.len(), |r, c| v[(r, keep[c])])
}

/// Orthonormal basis (as columns) of the column range of `m`.
pub fn range_basis(m: &CMatrix, tol: Tolerance) -> CMatrix {
    let (rows, cols) = m.shape();
    if rows == 0 || cols == 0 {
        return CMatrix::zeros(rows, 0);
    }
    let (values, u, _) = sorted_svd(m, true, false);
    let u = u.expect("left singular vectors requested");
    let smax = values.first().copied().unwrap_or(0.0);
    let keep = values.iter().take_while(|&&s| s > tol.eps * smax.max(1.0)).count();
    u.columns(0, keep).into_owned()
}

/// Numerical rank; singular values below `eps · max(1, σ_max)` count as zero.
pub fn rank(m: &CMatrix, tol: Tolerance) -> usize {
    if m.is_empty() {
        return 0;
    }
    let sv = m.singular_values();
    let smax = sv.iter().cloned().fold(0.0, f64::max);
    sv.iter().filter(|&&s| s > tol.eps * smax.max(1.0)).count()
}

/// Column-stack a list of matrices of equal shape into one matrix of flattened columns.
pub fn flatten_columns(ms: &[CMatrix]) -> CMatrix {
    let len = ms.first().map(|m| m.len()).unwrap_or(0);
    let mut out = CMatrix::zeros(len, ms.len());
    for (j, m) in ms.iter().enumerate() {
        out.column_mut(j).copy_from_slice(m.as_slice());
    }
    out
}

/// Incremental orthonormal basis for a span of flat vectors (twice-iterated Gram–Schmidt).
#[derive(Clone, Debug)]
pub struct SpanBuilder {
    len: usize,
    rel_tol: f64,
    basis: Vec<CVector>,
}

impl SpanBuilder {
    pub fn new(len: usize, rel_tol: f64) -> Self {
        Self {
            len,
            rel_tol,
            basis: Vec::new(),
        }
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn basis(&self) -> &[CVector] {
        &self.basis
    }

    pub fn into_basis(self) -> Vec<CVector> {
        self.basis
    }

    /// Component of `v` orthogonal to the current span.
    pub fn residual(&self, v: &CVector) -> CVector {
        let mut r = v.clone();
        for _ in 0..2 {
            for b in &self.basis {
                let coef = b.dotc(&r);
                r.axpy(-coef, b, ONE);
            }
        }
        r
    }

    /// Add `v` if it leaves the span; returns whether the span grew.
    pub fn push(&mut self, v: &CVector) -> bool {
        assert_eq!(v.len(), self.len, "span vector length mismatch");
        let norm = v.norm();
        if norm == 0.0 || !norm.is_finite() {
            return false;
        }
        let r = self.residual(v);
        let rn = r.norm();
        if rn <= self.rel_tol * norm {
            return false;
        }
        self.basis.push(r.unscale(rn));
        true
    }

    pub fn push_matrix(&mut self, m: &CMatrix) -> bool {
        self.push(&CVector::from_column_slice(m.as_slice()))
    }

    /// Relative distance of `v` from the span.
    pub fn distance(&self, v: &CVector) -> f64 {
        let n = v.norm();
        if n == 0.0 {
            return 0.0;
        }
        self.residual(v).norm() / n
    }

    pub fn contains_matrix(&self, m: &CMatrix) -> bool {
        self.distance(&CVector::from_column_slice(m.as_slice())) <= self.rel_tol
    }
}

/// Reshape a flat column-major vector back into an `rows × cols` matrix.
pub fn unflatten(v: &CVector, rows: usize, cols: usize) -> CMatrix {
    CMatrix::from_column_slice(rows, cols, v.as_slice())
}

/// Standard complex Gaussian sample with `E|z|² = 1`.
pub fn complex_gaussian<R: Rng + ?Sized>(rng: &mut R) -> C64 {
    let re: f64 = rng.sample(StandardNormal);
    let im: f64 = rng.sample(StandardNormal);
    c(re, im) * std::f64::consts::FRAC_1_SQRT_2
}

pub fn random_gaussian<R: Rng + ?Sized>(rows: usize, cols: usize, rng: &mut R) -> CMatrix {
    let entries: Vec<C64> = (0..rows * cols).map(|_| complex_gaussian(rng)).collect();
    CMatrix::from_column_slice(rows, cols, &entries)
}

pub fn random_hermitian<R: Rng + ?Sized>(n: usize, rng: &mut R) -> CMatrix {
    let g = random_gaussian(n, n, rng);
    (&g + g.adjoint()).scale(0.5)
}

/// Haar-distributed unitary: QR of a complex Gaussian with phase-normalised diagonal.
pub fn haar_unitary<R: Rng + ?Sized>(n: usize, rng: &mut R) -> CMatrix {
    let z = random_gaussian(n, n, rng);
    let qr = z.qr();
    let mut q = qr.q();
    let r = qr.r();
    for j in 0..n {
        let d = r[(j, j)];
        let phase = if d.norm() > 0.0 { d / d.norm() } else { ONE };
        let mut col = q.column_mut(j);
        col *= phase;
    }
    q
}
