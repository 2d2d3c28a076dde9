//! Validated density matrices over tensor-product spaces, with the support
//! machinery (eigen-splits, projectors, logarithms on support) that the
//! entropy layer builds on.
//!
//! Subsystem convention: `dims = [d0, d1, ...]` indexes subsystems left to
//! right with the leftmost most significant, i.e. basis state `|i0, i1, ...>`
//! has row index `i0 * d1 * d2 * ... + i1 * d2 * ... + ...`.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::linalg::{self, CMatrix, CVector};
use crate::tol;

/// A Hermitian, unit-trace, positive-semidefinite matrix together with the
/// subsystem dimensions of the space it acts on.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrix {
    data: CMatrix,
    dims: Vec<usize>,
}

/// A Hermitian operator with subsystem structure; no trace or positivity
/// constraint.
#[derive(Debug, Clone, PartialEq)]
pub struct HermitianOperator {
    data: CMatrix,
    dims: Vec<usize>,
}

/// Eigendecomposition of a state split into support and kernel at a cutoff.
/// Eigenvalues are non-increasing; the first `rank` columns of `vectors`
/// span the support.
#[derive(Debug, Clone)]
pub struct SupportDecomposition {
    eigenvalues: Vec<f64>,
    vectors: CMatrix,
    rank: usize,
    cutoff: f64,
}

/// Result of a commutation check: the Frobenius norm of `[A, B]` and whether
/// it falls below the requested tolerance.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CommutationCheck {
    pub residual: f64,
    pub commutes: bool,
}

fn check_shape(data: &CMatrix, dims: &[usize]) -> Result<()> {
    let size: usize = dims.iter().product();
    if data.nrows() != data.ncols()
        || dims.is_empty()
        || dims.iter().any(|&d| d == 0)
        || size != data.nrows()
    {
        return Err(Error::BadShape {
            dims: dims.to_vec(),
            size: data.nrows(),
        });
    }
    Ok(())
}

impl DensityMatrix {
    /// Validates and wraps a matrix with the default tolerance
    /// [`tol::VALIDATION`].
    pub fn new(data: CMatrix, dims: Vec<usize>) -> Result<Self> {
        Self::with_tol(data, dims, tol::VALIDATION)
    }

    /// Validates Hermiticity, unit trace, and positive semidefiniteness to
    /// `tolerance`, then stores the Hermitian part of the input. Rejection
    /// reports which property failed and by how much.
    pub fn with_tol(data: CMatrix, dims: Vec<usize>, tolerance: f64) -> Result<Self> {
        check_shape(&data, &dims)?;
        let deviation = linalg::hermitian_deviation(&data);
        if deviation > tolerance {
            return Err(Error::NotHermitian {
                deviation,
                tol: tolerance,
            });
        }
        let data = linalg::symmetrize(&data);
        let trace = linalg::trace_re(&data);
        if (trace - 1.0).abs() > tolerance {
            return Err(Error::NotUnitTrace {
                deviation: (trace - 1.0).abs(),
                tol: tolerance,
            });
        }
        let eigenvalues = linalg::eigvalsh(&data)?;
        let min = *eigenvalues.last().expect("nonempty spectrum");
        if min < -tolerance {
            return Err(Error::NotPositive {
                min_eigenvalue: min,
            });
        }
        Ok(Self { data, dims })
    }

    /// Wraps a matrix that is Hermitian, unit-trace, and PSD by construction
    /// (unitary conjugation of a valid state, partial trace, convex mixture,
    /// tensor product). Only the Hermitian part is stored; no spectral work
    /// is done.
    pub(crate) fn from_trusted(data: CMatrix, dims: Vec<usize>) -> Self {
        debug_assert!(check_shape(&data, &dims).is_ok());
        let data = linalg::symmetrize(&data);
        Self { data, dims }
    }

    /// |v><v| / <v|v> as a state on the given subsystem layout.
    pub fn from_pure(v: &CVector, dims: Vec<usize>) -> Result<Self> {
        let norm = v.norm();
        if norm == 0.0 {
            return Err(Error::NotPositive {
                min_eigenvalue: 0.0,
            });
        }
        let normalized = v.unscale(norm);
        let data = linalg::outer(&normalized);
        check_shape(&data, &dims)?;
        Ok(Self { data, dims })
    }

    /// Computational basis state |index><index| on one subsystem of size
    /// `dim`.
    pub fn basis_state(dim: usize, index: usize) -> Result<Self> {
        if dim == 0 || index >= dim {
            return Err(Error::IndexOutOfRange {
                index,
                count: dim,
            });
        }
        let mut v = CVector::zeros(dim);
        v[index] = Complex64::new(1.0, 0.0);
        Self::from_pure(&v, vec![dim])
    }

    /// I/dim on one subsystem.
    pub fn maximally_mixed(dim: usize) -> Result<Self> {
        if dim == 0 {
            return Err(Error::BadDimension {
                reason: "maximally mixed state needs dim >= 1".into(),
            });
        }
        let data = linalg::identity(dim).unscale(dim as f64);
        Ok(Self {
            data,
            dims: vec![dim],
        })
    }

    /// Diagonal state from a probability vector (validated to the default
    /// tolerance).
    pub fn from_probabilities(p: &[f64]) -> Result<Self> {
        let sum: f64 = p.iter().sum();
        if (sum - 1.0).abs() > tol::VALIDATION {
            return Err(Error::NotNormalized { sum });
        }
        if let Some((i, &v)) = p.iter().enumerate().find(|&(_, &v)| v < 0.0) {
            return Err(Error::NegativeProbability { index: i, value: v });
        }
        let diag = CVector::from_iterator(p.len(), p.iter().map(|&x| Complex64::new(x, 0.0)));
        Ok(Self {
            data: CMatrix::from_diagonal(&diag),
            dims: vec![p.len()],
        })
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.data
    }

    /// Subsystem dimensions, leftmost most significant.
    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    /// Total Hilbert-space dimension.
    pub fn dim(&self) -> usize {
        self.data.nrows()
    }

    pub fn subsystem_count(&self) -> usize {
        self.dims.len()
    }

    /// Reinterprets the same matrix with a different subsystem split (the
    /// product of `dims` must equal the total dimension).
    pub fn reshaped(&self, dims: Vec<usize>) -> Result<Self> {
        check_shape(&self.data, &dims)?;
        Ok(Self {
            data: self.data.clone(),
            dims,
        })
    }

    /// Kronecker product; subsystem lists concatenate, left factor most
    /// significant. Entry `(i*db + k, j*db + l)` equals `a_ij * b_kl`.
    pub fn tensor(&self, other: &Self) -> Self {
        let data = self.data.kronecker(&other.data);
        let mut dims = self.dims.clone();
        dims.extend_from_slice(&other.dims);
        Self::from_trusted(data, dims)
    }

    /// Reduced state on the subsystems in `keep` (treated as a set; output
    /// order is ascending original order). Trace and positivity are
    /// preserved exactly by the index contraction.
    pub fn partial_trace(&self, keep: &[usize]) -> Result<Self> {
        let n = self.dims.len();
        if keep.is_empty() {
            return Err(Error::EmptyKeepSet);
        }
        let mut kept: Vec<usize> = keep.to_vec();
        kept.sort_unstable();
        kept.dedup();
        if let Some(&bad) = kept.iter().find(|&&k| k >= n) {
            return Err(Error::IndexOutOfRange {
                index: bad,
                count: n,
            });
        }
        let kept_dims: Vec<usize> = kept.iter().map(|&k| self.dims[k]).collect();
        let out = reduce_matrix(&self.data, &self.dims, &kept);
        Ok(Self::from_trusted(out, kept_dims))
    }

    /// Eigen-split into support and kernel. `cutoff = None` uses the default
    /// relative rule `SUPPORT_CUTOFF_SCALE * lambda_max`; `Some(c)` uses the
    /// absolute cutoff `c`. Eigenvalues strictly above the cutoff count as
    /// support.
    pub fn support_decompose(&self, cutoff: Option<f64>) -> Result<SupportDecomposition> {
        let (eigenvalues, vectors) = linalg::eigh(&self.data)?;
        let lambda_max = eigenvalues[0];
        if lambda_max <= 0.0 {
            return Err(Error::NotPositive {
                min_eigenvalue: lambda_max,
            });
        }
        let cutoff = cutoff.unwrap_or(tol::SUPPORT_CUTOFF_SCALE * lambda_max);
        let rank = eigenvalues.iter().take_while(|&&l| l > cutoff).count();
        Ok(SupportDecomposition {
            eigenvalues,
            vectors,
            rank,
            cutoff,
        })
    }

    /// Spectral logarithm restricted to the support: sum over support
    /// eigenpairs of `ln(lambda) |v><v|`; the kernel maps to zero.
    pub fn log_on_support(&self, cutoff: Option<f64>) -> Result<HermitianOperator> {
        let sd = self.support_decompose(cutoff)?;
        Ok(HermitianOperator::from_trusted(
            sd.log_matrix(),
            self.dims.clone(),
        ))
    }

    /// U rho U^dag with the same subsystem layout. `u` must be unitary to
    /// tolerance `tol::VALIDATION`.
    pub fn conjugate_by(&self, u: &CMatrix) -> Result<Self> {
        if u.nrows() != self.dim() || u.ncols() != self.dim() {
            return Err(Error::DimensionMismatch {
                left: u.nrows(),
                right: self.dim(),
            });
        }
        let deviation = linalg::unitary_deviation(u);
        if deviation > tol::VALIDATION {
            return Err(Error::NotUnitary { deviation });
        }
        let data = u * &self.data * u.adjoint();
        Ok(Self::from_trusted(data, self.dims.clone()))
    }

    /// lam * self + (1 - lam) * other; both operands must share dimensions.
    pub fn mix(&self, other: &Self, lam: f64) -> Result<Self> {
        if self.dim() != other.dim() {
            return Err(Error::DimensionMismatch {
                left: self.dim(),
                right: other.dim(),
            });
        }
        if !(0.0..=1.0).contains(&lam) {
            return Err(Error::BadMixtureWeight { lambda: lam });
        }
        let data = self.data.scale(lam) + other.data.scale(1.0 - lam);
        Ok(Self::from_trusted(data, self.dims.clone()))
    }
}

/// Row offsets of all multi-indices over `dims_sel` placed at subsystem
/// `positions`, enumerated row-major (leftmost of `dims_sel` most
/// significant). An empty selection yields the single offset zero.
fn index_offsets(dims_sel: &[usize], positions: &[usize], stride: &[usize]) -> Vec<usize> {
    let total: usize = dims_sel.iter().product::<usize>().max(1);
    let mut out = Vec::with_capacity(total);
    for combined in 0..total {
        let mut c = combined;
        let mut off = 0usize;
        for pos in (0..dims_sel.len()).rev() {
            let d = dims_sel[pos];
            off += (c % d) * stride[positions[pos]];
            c /= d;
        }
        out.push(off);
    }
    out
}

/// Partial-trace core: sums the diagonal over the non-kept subsystems.
/// `kept` must be sorted, deduplicated, and in range.
pub(crate) fn reduce_matrix(data: &CMatrix, dims: &[usize], kept: &[usize]) -> CMatrix {
    let n = dims.len();
    let traced: Vec<usize> = (0..n).filter(|i| !kept.contains(i)).collect();
    let mut stride = vec![1usize; n];
    for i in (0..n.saturating_sub(1)).rev() {
        stride[i] = stride[i + 1] * dims[i + 1];
    }
    let kept_dims: Vec<usize> = kept.iter().map(|&k| dims[k]).collect();
    let kept_offsets = index_offsets(&kept_dims, kept, &stride);
    let traced_dims: Vec<usize> = traced.iter().map(|&k| dims[k]).collect();
    let traced_offsets = index_offsets(&traced_dims, &traced, &stride);

    let out_dim: usize = kept_dims.iter().product();
    let mut out = CMatrix::zeros(out_dim, out_dim);
    for (i, &ri) in kept_offsets.iter().enumerate() {
        for (j, &rj) in kept_offsets.iter().enumerate() {
            let mut acc = Complex64::new(0.0, 0.0);
            for &t in &traced_offsets {
                acc += data[(ri + t, rj + t)];
            }
            out[(i, j)] = acc;
        }
    }
    out
}

/// Embeds an operator acting on the subsystems listed in `keep` into the full
/// space described by `dims`, acting as the identity on the complement. This
/// is the adjoint of `partial_trace`: Tr[embed(X)·ρ] = Tr[X·Tr_rest(ρ)].
pub fn embed_operator(op: &CMatrix, dims: &[usize], keep: &[usize]) -> Result<CMatrix> {
    let n = dims.len();
    if keep.is_empty() {
        return Err(Error::EmptyKeepSet);
    }
    let mut kept: Vec<usize> = keep.to_vec();
    kept.sort_unstable();
    kept.dedup();
    if let Some(&bad) = kept.iter().find(|&&k| k >= n) {
        return Err(Error::IndexOutOfRange {
            index: bad,
            count: n,
        });
    }
    let traced: Vec<usize> = (0..n).filter(|i| !kept.contains(i)).collect();

    let mut stride = vec![1usize; n];
    for i in (0..n.saturating_sub(1)).rev() {
        stride[i] = stride[i + 1] * dims[i + 1];
    }
    let kept_dims: Vec<usize> = kept.iter().map(|&k| dims[k]).collect();
    let kept_dim: usize = kept_dims.iter().product();
    if op.nrows() != kept_dim || op.ncols() != kept_dim {
        return Err(Error::DimensionMismatch {
            left: op.nrows(),
            right: kept_dim,
        });
    }
    let kept_offsets = index_offsets(&kept_dims, &kept, &stride);
    let traced_dims: Vec<usize> = traced.iter().map(|&k| dims[k]).collect();
    let traced_offsets = index_offsets(&traced_dims, &traced, &stride);

    let full: usize = dims.iter().product();
    let mut out = CMatrix::zeros(full, full);
    for (i, &ri) in kept_offsets.iter().enumerate() {
        for (j, &rj) in kept_offsets.iter().enumerate() {
            let v = op[(i, j)];
            if v != Complex64::new(0.0, 0.0) {
                for &t in &traced_offsets {
                    out[(ri + t, rj + t)] = v;
                }
            }
        }
    }
    Ok(out)
}

impl HermitianOperator {
    pub fn new(data: CMatrix, dims: Vec<usize>, tolerance: f64) -> Result<Self> {
        check_shape(&data, &dims)?;
        let deviation = linalg::hermitian_deviation(&data);
        if deviation > tolerance {
            return Err(Error::NotHermitian {
                deviation,
                tol: tolerance,
            });
        }
        Ok(Self {
            data: linalg::symmetrize(&data),
            dims,
        })
    }

    pub(crate) fn from_trusted(data: CMatrix, dims: Vec<usize>) -> Self {
        debug_assert!(check_shape(&data, &dims).is_ok());
        let data = linalg::symmetrize(&data);
        Self { data, dims }
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.data
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn dim(&self) -> usize {
        self.data.nrows()
    }
}

impl SupportDecomposition {
    /// Eigenvalues, non-increasing.
    pub fn eigenvalues(&self) -> &[f64] {
        &self.eigenvalues
    }

    /// Eigenvector columns matching [`Self::eigenvalues`].
    pub fn vectors(&self) -> &CMatrix {
        &self.vectors
    }

    /// Number of eigenvalues strictly above the cutoff.
    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn kernel_dim(&self) -> usize {
        self.eigenvalues.len() - self.rank
    }

    pub fn cutoff(&self) -> f64 {
        self.cutoff
    }

    /// Orthogonal projector onto the support.
    pub fn support_projector(&self) -> CMatrix {
        let cols = self.vectors.columns(0, self.rank);
        &cols * cols.adjoint()
    }

    /// Sum over support eigenpairs of `ln(lambda) |v><v|`.
    pub fn log_matrix(&self) -> CMatrix {
        let n = self.eigenvalues.len();
        let mut out = CMatrix::zeros(n, n);
        for k in 0..self.rank {
            let v = self.vectors.column(k);
            let log = Complex64::new(self.eigenvalues[k].ln(), 0.0);
            // out += ln(l_k) v v^dag
            out.gerc(log, &v, &v, Complex64::new(1.0, 0.0));
        }
        out
    }

    /// Squared Frobenius norm of `(I - P_other) P_self`, the support overlap
    /// defect used in support-inclusion tests.
    pub fn inclusion_defect_sq(&self, other: &Self) -> f64 {
        // ||(I - P2) P1||_F^2 = sum over support vectors v of self of
        // (1 - ||P2 v||^2), evaluated against other's support columns.
        let other_cols = other.vectors.columns(0, other.rank);
        let mut defect = 0.0f64;
        for k in 0..self.rank {
            let v = self.vectors.column(k);
            let coeffs = other_cols.adjoint() * v;
            defect += (1.0 - coeffs.norm_squared()).max(0.0);
        }
        defect
    }
}

/// Frobenius norm of the commutator `[a, b]`, with a verdict against `tol`.
pub fn commutation(a: &CMatrix, b: &CMatrix, tolerance: f64) -> Result<CommutationCheck> {
    if a.nrows() != b.nrows() || a.ncols() != b.ncols() {
        return Err(Error::DimensionMismatch {
            left: a.nrows(),
            right: b.nrows(),
        });
    }
    let commutator = a * b - b * a;
    let residual = commutator.norm();
    Ok(CommutationCheck {
        residual,
        commutes: residual <= tolerance,
    })
}

/// Trace distance (1/2)||a - b||_1 between two states.
pub fn trace_distance(a: &DensityMatrix, b: &DensityMatrix) -> Result<f64> {
    linalg::trace_distance(a.matrix(), b.matrix())
}

pub use crate::linalg::{CMatrix as Matrix, CVector as Vector};
