//! Phase-space representations and their Fock-space counterparts.
//!
//! A [`PhaseSpaceDistribution`] is a probability density sampled on a
//! rectangular `(x, p)` grid with trapezoid quadrature. [`p_construct`]
//! assembles the corresponding density matrix as a positive combination of
//! coherent-state projectors, which is the bridge between the classical and
//! quantum sides of the crate: moments of the constructed state converge to
//! grid moments of the density as `hbar` shrinks, and [`hbar_sweep`] tabulates
//! that convergence. The module also builds the cyclic block-banded matrix
//! whose quadratic form governs Gaussian moment exponents, together with its
//! closed-form eigensystem and an independent numerical cross-check.

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::linalg::{CMatrix, CVector};
use crate::state::DensityMatrix;
use crate::tol;

const I: Complex64 = Complex64::new(0.0, 1.0);

/// Rectangular phase-space grid with uniform spacing in each direction.
///
/// Quadrature is the product trapezoid rule: edge nodes carry half weight,
/// corner nodes quarter weight. Values are stored row-major with `x` as the
/// slow index.
#[derive(Debug, Clone, PartialEq)]
pub struct GridSpec {
    x_min: f64,
    x_max: f64,
    nx: usize,
    p_min: f64,
    p_max: f64,
    np: usize,
}

impl GridSpec {
    pub fn new(
        x_min: f64,
        x_max: f64,
        nx: usize,
        p_min: f64,
        p_max: f64,
        np: usize,
    ) -> Result<Self> {
        if !(x_min.is_finite() && x_max.is_finite() && p_min.is_finite() && p_max.is_finite()) {
            return Err(Error::BadDimension {
                reason: "grid bounds must be finite".into(),
            });
        }
        if x_min >= x_max || p_min >= p_max {
            return Err(Error::BadDimension {
                reason: "grid bounds must satisfy min < max".into(),
            });
        }
        if nx < 2 || np < 2 {
            return Err(Error::BadDimension {
                reason: "grid needs at least two nodes per axis".into(),
            });
        }
        Ok(Self {
            x_min,
            x_max,
            nx,
            p_min,
            p_max,
            np,
        })
    }

    /// Square grid `[-half_width, half_width]^2` with `n` nodes per axis.
    pub fn symmetric(half_width: f64, n: usize) -> Result<Self> {
        if !(half_width.is_finite() && half_width > 0.0) {
            return Err(Error::BadDimension {
                reason: "half width must be positive and finite".into(),
            });
        }
        Self::new(-half_width, half_width, n, -half_width, half_width, n)
    }

    pub fn nx(&self) -> usize {
        self.nx
    }

    pub fn np(&self) -> usize {
        self.np
    }

    pub fn node_count(&self) -> usize {
        self.nx * self.np
    }

    pub fn dx(&self) -> f64 {
        (self.x_max - self.x_min) / (self.nx - 1) as f64
    }

    pub fn dp(&self) -> f64 {
        (self.p_max - self.p_min) / (self.np - 1) as f64
    }

    pub fn x(&self, i: usize) -> f64 {
        self.x_min + self.dx() * i as f64
    }

    pub fn p(&self, j: usize) -> f64 {
        self.p_min + self.dp() * j as f64
    }

    /// Trapezoid quadrature weight of node `(i, j)`.
    pub fn weight(&self, i: usize, j: usize) -> f64 {
        let wx = if i == 0 || i == self.nx - 1 { 0.5 } else { 1.0 };
        let wp = if j == 0 || j == self.np - 1 { 0.5 } else { 1.0 };
        wx * wp * self.dx() * self.dp()
    }

    /// Largest `|alpha|^2 = (x^2 + p^2) / (2 hbar)` over the grid corners.
    pub fn max_alpha_sq(&self, hbar: f64) -> f64 {
        let x2 = self.x_min.powi(2).max(self.x_max.powi(2));
        let p2 = self.p_min.powi(2).max(self.p_max.powi(2));
        (x2 + p2) / (2.0 * hbar)
    }

    /// Whether negating both coordinates maps the node set onto itself:
    /// node `(i, j)` reflects to `(nx-1-i, np-1-j)`.
    pub fn is_negation_symmetric(&self) -> bool {
        let sx = 1e-12 * (self.x_max - self.x_min);
        let sp = 1e-12 * (self.p_max - self.p_min);
        (self.x_min + self.x_max).abs() <= sx && (self.p_min + self.p_max).abs() <= sp
    }

    /// Index of the node at the origin, present only on negation-symmetric
    /// grids with odd node counts.
    pub fn origin_index(&self) -> Option<(usize, usize)> {
        if self.is_negation_symmetric() && self.nx % 2 == 1 && self.np % 2 == 1 {
            Some(((self.nx - 1) / 2, (self.np - 1) / 2))
        } else {
            None
        }
    }
}

/// Probability density on a [`GridSpec`], normalized under trapezoid
/// quadrature.
#[derive(Debug, Clone, PartialEq)]
pub struct PhaseSpaceDistribution {
    grid: GridSpec,
    values: Vec<f64>,
}

impl PhaseSpaceDistribution {
    /// Validates nonnegativity and quadrature normalization within
    /// [`tol::DENSITY_NORMALIZATION`].
    pub fn new(grid: GridSpec, values: Vec<f64>) -> Result<Self> {
        if values.len() != grid.node_count() {
            return Err(Error::LengthMismatch {
                left: values.len(),
                right: grid.node_count(),
            });
        }
        for (idx, &v) in values.iter().enumerate() {
            if !v.is_finite() || v < 0.0 {
                return Err(Error::NegativeProbability { index: idx, value: v });
            }
        }
        let dist = Self { grid, values };
        let sum = dist.quadrature_sum();
        if (sum - 1.0).abs() > tol::DENSITY_NORMALIZATION {
            return Err(Error::NotNormalized { sum });
        }
        Ok(dist)
    }

    /// Gaussian density centered at `(x0, p0)` with standard deviations
    /// `(sx, sp)`, renormalized so the quadrature sum is exactly one.
    pub fn gaussian(grid: GridSpec, x0: f64, p0: f64, sx: f64, sp: f64) -> Result<Self> {
        if !(sx > 0.0 && sp > 0.0 && sx.is_finite() && sp.is_finite()) {
            return Err(Error::BadDimension {
                reason: "gaussian widths must be positive and finite".into(),
            });
        }
        let mut values = vec![0.0; grid.node_count()];
        let norm = 1.0 / (2.0 * std::f64::consts::PI * sx * sp);
        for i in 0..grid.nx() {
            let ex = -0.5 * ((grid.x(i) - x0) / sx).powi(2);
            for j in 0..grid.np() {
                let ep = -0.5 * ((grid.p(j) - p0) / sp).powi(2);
                values[i * grid.np() + j] = norm * (ex + ep).exp();
            }
        }
        let mut sum = 0.0;
        for i in 0..grid.nx() {
            for j in 0..grid.np() {
                sum += grid.weight(i, j) * values[i * grid.np() + j];
            }
        }
        if sum <= 0.0 {
            return Err(Error::BadDimension {
                reason: "gaussian mass vanishes on this grid".into(),
            });
        }
        for v in &mut values {
            *v /= sum;
        }
        Self::new(grid, values)
    }

    pub fn grid(&self) -> &GridSpec {
        &self.grid
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn value(&self, i: usize, j: usize) -> f64 {
        self.values[i * self.grid.np() + j]
    }

    pub fn quadrature_sum(&self) -> f64 {
        self.expectation(|_, _| 1.0)
    }

    /// Quadrature expectation of `f(x, p)` under the density.
    pub fn expectation(&self, f: impl Fn(f64, f64) -> f64) -> f64 {
        let mut acc = 0.0;
        for i in 0..self.grid.nx() {
            let x = self.grid.x(i);
            for j in 0..self.grid.np() {
                let p = self.grid.p(j);
                acc += self.grid.weight(i, j) * self.value(i, j) * f(x, p);
            }
        }
        acc
    }

    pub fn mean_x(&self) -> f64 {
        self.expectation(|x, _| x)
    }

    pub fn mean_p(&self) -> f64 {
        self.expectation(|_, p| p)
    }

    pub fn mean_x2(&self) -> f64 {
        self.expectation(|x, _| x * x)
    }

    pub fn mean_p2(&self) -> f64 {
        self.expectation(|_, p| p * p)
    }
}

/// Truncated Fock-space parameters: dimension of the truncation and the value
/// of `hbar` tying phase-space coordinates to ladder operators.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FockConfig {
    dim: usize,
    hbar: f64,
}

impl FockConfig {
    pub fn new(dim: usize, hbar: f64) -> Result<Self> {
        if dim < 2 {
            return Err(Error::BadDimension {
                reason: format!("Fock dimension must be at least 2, got {dim}"),
            });
        }
        if !(hbar.is_finite() && hbar > 0.0) {
            return Err(Error::BadDimension {
                reason: format!("hbar must be positive and finite, got {hbar}"),
            });
        }
        Ok(Self { dim, hbar })
    }

    /// Dimension large enough that every grid node's coherent state fits
    /// under the truncation-tail tolerance, but never below `min_dim`.
    pub fn auto_for_grid(grid: &GridSpec, hbar: f64, min_dim: usize) -> Result<Self> {
        let auto = auto_fock_dim(grid.max_alpha_sq(hbar));
        Self::new(auto.max(min_dim).max(2), hbar)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn hbar(&self) -> f64 {
        self.hbar
    }
}

/// Truncation dimension for coherent states with `|alpha|^2` up to
/// `max_alpha_sq`: mean occupation plus eight standard deviations of the
/// Poisson number distribution plus a constant floor, which keeps the lost
/// tail below roughly `1e-9` for the amplitudes the grids here produce.
pub fn auto_fock_dim(max_alpha_sq: f64) -> usize {
    let a = max_alpha_sq.max(0.0);
    (a + 8.0 * a.sqrt() + 10.0).ceil() as usize
}

/// Coherent state `|alpha>` with `alpha = (x + i p) / sqrt(2 hbar)` on the
/// truncated Fock space, renormalized after truncation.
///
/// Fails with [`Error::TruncationInsufficient`] when the truncated tail mass
/// exceeds [`tol::TRUNCATION_TAIL`].
pub fn coherent_state(x: f64, p: f64, cfg: &FockConfig) -> Result<CVector> {
    let mut c = CVector::zeros(cfg.dim());
    let tail = coherent_amplitudes(x, p, cfg, &mut c)?;
    let _ = tail;
    Ok(c)
}

/// Fills `out` with the normalized coherent-state amplitudes and returns the
/// truncated tail mass. `out.len()` must equal `cfg.dim()`.
fn coherent_amplitudes(x: f64, p: f64, cfg: &FockConfig, out: &mut CVector) -> Result<f64> {
    let dim = cfg.dim();
    debug_assert_eq!(out.len(), dim);
    let alpha = Complex64::new(x, p) / (2.0 * cfg.hbar()).sqrt();
    // c_m = e^{-|alpha|^2/2} alpha^m / sqrt(m!), built by recurrence.
    let mut amp = Complex64::new((-0.5 * alpha.norm_sqr()).exp(), 0.0);
    let mut norm_sq = 0.0;
    for m in 0..dim {
        if m > 0 {
            amp *= alpha / (m as f64).sqrt();
        }
        out[m] = amp;
        norm_sq += amp.norm_sqr();
    }
    let tail = (1.0 - norm_sq).max(0.0);
    if tail > tol::TRUNCATION_TAIL {
        return Err(Error::TruncationInsufficient {
            tail,
            tol: tol::TRUNCATION_TAIL,
            dim,
        });
    }
    let scale = 1.0 / norm_sq.sqrt();
    for m in 0..dim {
        out[m] *= scale;
    }
    Ok(tail)
}

/// Density matrix `sum_ij w_ij P(x_i, p_j) |alpha_ij><alpha_ij|` on the
/// truncated Fock space, renormalized to unit trace.
///
/// The state is positive by construction. The quadrature trace may drift from
/// one; a drift beyond [`tol::TRACE_DRIFT_MAX`] reports
/// [`Error::GridTooCoarse`] instead of renormalizing silently.
pub fn p_construct(dist: &PhaseSpaceDistribution, cfg: &FockConfig) -> Result<DensityMatrix> {
    const CHUNK: usize = 1024;
    let dim = cfg.dim();
    let grid = dist.grid();
    let mut rho = CMatrix::zeros(dim, dim);
    let mut cols = CMatrix::zeros(dim, CHUNK);
    let mut column = CVector::zeros(dim);
    let mut filled = 0;
    for i in 0..grid.nx() {
        for j in 0..grid.np() {
            // Tail validation runs for every node, including zero-weight ones:
            // acceptability of the truncation must not depend on the density.
            let tail = coherent_amplitudes(grid.x(i), grid.p(j), cfg, &mut column)?;
            let _ = tail;
            let mass = grid.weight(i, j) * dist.value(i, j);
            if mass <= 0.0 {
                continue;
            }
            let scale = Complex64::new(mass.sqrt(), 0.0);
            cols.set_column(filled, &(&column * scale));
            filled += 1;
            if filled == CHUNK {
                accumulate_outer(&mut rho, &cols, filled);
                filled = 0;
            }
        }
    }
    if filled > 0 {
        accumulate_outer(&mut rho, &cols, filled);
    }
    let trace: f64 = (0..dim).map(|k| rho[(k, k)].re).sum();
    let drift = (trace - 1.0).abs();
    if drift > tol::TRACE_DRIFT_MAX {
        return Err(Error::GridTooCoarse {
            drift,
            limit: tol::TRACE_DRIFT_MAX,
        });
    }
    rho.unscale_mut(trace);
    Ok(DensityMatrix::from_trusted(rho, vec![dim]))
}

/// `rho += C C^dag` over the first `filled` columns of `cols`.
fn accumulate_outer(rho: &mut CMatrix, cols: &CMatrix, filled: usize) {
    let block = cols.columns(0, filled);
    rho.gemm(
        Complex64::new(1.0, 0.0),
        &block,
        &block.adjoint(),
        Complex64::new(1.0, 0.0),
    );
}

/// Raw quantum moment `Tr[rho1 (rho2 / hbar)^(n-1)]` for `n >= 2`.
///
/// The trace of a product of Hermitian positive operators is real; an
/// imaginary residue beyond rounding is reported as a verification failure.
pub fn moment_quantum(
    rho1: &DensityMatrix,
    rho2: &DensityMatrix,
    n: usize,
    hbar: f64,
) -> Result<f64> {
    if n < 2 {
        return Err(Error::BadMomentOrder { n });
    }
    if rho1.dim() != rho2.dim() {
        return Err(Error::DimensionMismatch {
            left: rho1.dim(),
            right: rho2.dim(),
        });
    }
    if !(hbar.is_finite() && hbar > 0.0) {
        return Err(Error::BadDimension {
            reason: format!("hbar must be positive and finite, got {hbar}"),
        });
    }
    let scaled = rho2.matrix().unscale(hbar);
    let mut acc = rho1.matrix().clone();
    for _ in 1..n {
        acc = acc * &scaled;
    }
    let t = acc.trace();
    let tol = 1e-10 * t.re.abs().max(1.0);
    if t.im.abs() > tol {
        return Err(Error::VerificationFailure {
            residual: t.im.abs(),
            tol,
        });
    }
    Ok(t.re)
}

/// Classical moment `integral P1 P2^(n-1) dx dp` by trapezoid quadrature.
/// Both densities must live on the same grid.
pub fn moment_classical(
    p1: &PhaseSpaceDistribution,
    p2: &PhaseSpaceDistribution,
    n: usize,
) -> Result<f64> {
    if n < 2 {
        return Err(Error::BadMomentOrder { n });
    }
    if p1.grid() != p2.grid() {
        return Err(Error::GridMismatch);
    }
    let grid = p1.grid();
    let mut acc = 0.0;
    for i in 0..grid.nx() {
        for j in 0..grid.np() {
            acc += grid.weight(i, j) * p1.value(i, j) * p2.value(i, j).powi(n as i32 - 1);
        }
    }
    Ok(acc)
}

/// A valid `hbar` schedule is nonempty, positive, and strictly decreasing.
pub(crate) fn check_schedule(schedule: &[f64]) -> Result<()> {
    if schedule.is_empty()
        || schedule.iter().any(|h| !h.is_finite() || *h <= 0.0)
        || schedule.windows(2).any(|w| w[1] >= w[0])
    {
        return Err(Error::BadSchedule);
    }
    Ok(())
}

/// One row of an `hbar` sweep: raw and rescaled quantum moments against the
/// classical grid moment at a single `hbar`.
#[derive(Debug, Clone, Serialize)]
pub struct SweepRow {
    pub hbar: f64,
    pub n: usize,
    pub quantum_raw: f64,
    pub quantum: f64,
    pub classical: f64,
    pub rel_error: f64,
}

/// Tabulates the quantum-to-classical moment convergence over a strictly
/// decreasing `hbar` schedule.
///
/// For each `hbar` the densities are rebuilt into Fock states via
/// [`p_construct`], with the truncation dimension auto-scaled from the grid
/// corners (never below `template.dim()`). The rescaled column divides the
/// raw moment by `(2 pi)^(n-1)`, which is the normalization under which it
/// converges to the classical grid moment.
pub fn hbar_sweep(
    p1: &PhaseSpaceDistribution,
    p2: &PhaseSpaceDistribution,
    n: usize,
    schedule: &[f64],
    template: &FockConfig,
) -> Result<Vec<SweepRow>> {
    check_schedule(schedule)?;
    if p1.grid() != p2.grid() {
        return Err(Error::GridMismatch);
    }
    let classical = moment_classical(p1, p2, n)?;
    let same_inputs = p1 == p2;
    let mut rows = Vec::with_capacity(schedule.len());
    for &hbar in schedule {
        let cfg = FockConfig::auto_for_grid(p1.grid(), hbar, template.dim())?;
        let rho1 = p_construct(p1, &cfg)?;
        let rho2 = if same_inputs {
            rho1.clone()
        } else {
            p_construct(p2, &cfg)?
        };
        let quantum_raw = moment_quantum(&rho1, &rho2, n, hbar)?;
        let quantum = quantum_raw / (2.0 * std::f64::consts::PI).powi(n as i32 - 1);
        let rel_error = if classical != 0.0 {
            ((quantum - classical) / classical).abs()
        } else {
            f64::NAN
        };
        rows.push(SweepRow {
            hbar,
            n,
            quantum_raw,
            quantum,
            classical,
            rel_error,
        });
    }
    Ok(rows)
}

/// The `2n x 2n` cyclic block-banded matrix `V = I + kron(S, B^T) +
/// kron(S^T, B)` with `S` the cyclic shift and `B = -(1 - sigma_y)/2`.
///
/// Indices interleave node and component: entry `2m + c` is component `c` of
/// node `m`. The matrix is normal, so it has an orthonormal eigenbasis; the
/// constructor verifies normality.
#[derive(Debug, Clone)]
pub struct VMatrix {
    n: usize,
    data: CMatrix,
}

/// `B = -(1 - sigma_y)/2 = [[-1/2, -i/2], [i/2, -1/2]]`, Hermitian.
fn block_b() -> [[Complex64; 2]; 2] {
    let h = Complex64::new(-0.5, 0.0);
    [[h, -0.5 * I], [0.5 * I, h]]
}

pub fn build_v_matrix(n: usize) -> Result<VMatrix> {
    if n < 2 {
        return Err(Error::BadSize { n });
    }
    let b = block_b();
    let dim = 2 * n;
    let mut data = CMatrix::zeros(dim, dim);
    for m in 0..n {
        let next = (m + 1) % n;
        for r in 0..2 {
            data[(2 * m + r, 2 * m + r)] = Complex64::new(1.0, 0.0);
            for c in 0..2 {
                // Super-diagonal block (m, m+1) carries B^T, sub-diagonal B.
                data[(2 * m + r, 2 * next + c)] += b[c][r];
                data[(2 * next + r, 2 * m + c)] += b[r][c];
            }
        }
    }
    let commutator = &data * data.adjoint() - data.adjoint() * &data;
    let residual = commutator.norm();
    if residual > 1e-12 {
        return Err(Error::VerificationFailure {
            residual,
            tol: 1e-12,
        });
    }
    Ok(VMatrix { n, data })
}

impl VMatrix {
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn dim(&self) -> usize {
        2 * self.n
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.data
    }

    /// Eigenvalues from a general-purpose dense solver (complex Schur
    /// decomposition), independent of the closed-form construction.
    pub fn numerical_eigenvalues(&self) -> Result<Vec<Complex64>> {
        let schur = nalgebra::linalg::Schur::try_new(self.data.clone(), f64::EPSILON, 0)
            .ok_or(Error::EigensolverFailure)?;
        let vals = schur.eigenvalues().ok_or(Error::EigensolverFailure)?;
        Ok(vals.iter().copied().collect())
    }
}

/// Greatest matching distance between two eigenvalue multisets: each entry
/// of `a` is paired greedily with the nearest unconsumed entry of `b`.
/// Robust against the ordering instability of sorting near-degenerate
/// complex values, as long as distinct clusters are separated by much more
/// than the within-cluster spread.
pub fn eigenvalue_multiset_distance(a: &[Complex64], b: &[Complex64]) -> Result<f64> {
    if a.len() != b.len() {
        return Err(Error::LengthMismatch {
            left: a.len(),
            right: b.len(),
        });
    }
    let mut remaining: Vec<Complex64> = b.to_vec();
    let mut worst = 0.0f64;
    for &za in a {
        let (idx, dist) = remaining
            .iter()
            .enumerate()
            .map(|(i, zb)| (i, (za - zb).norm()))
            .min_by(|x, y| x.1.total_cmp(&y.1))
            .expect("non-empty by length check");
        worst = worst.max(dist);
        remaining.swap_remove(idx);
    }
    Ok(worst)
}

/// Closed-form eigensystem of a [`VMatrix`], verified numerically on
/// construction.
///
/// Column `(k-1) n + j` for `k in {1, 2}`, `j in 0..n` holds the unit
/// eigenvector with components `e[2m + c] = u_k[c] omega^(j m) / sqrt(2n)`,
/// `omega = e^(2 pi i / n)`, `u_1 = (-1, i)`, `u_2 = (1, i)`; its eigenvalue
/// is `1 - omega^(-j)` for `k = 1` and `1 - omega^j` for `k = 2`.
#[derive(Debug, Clone)]
pub struct VEigensystem {
    n: usize,
    eigenvalues: Vec<Complex64>,
    vectors: CMatrix,
}

pub fn v_eigensystem(v: &VMatrix) -> Result<VEigensystem> {
    let n = v.n();
    let dim = v.dim();
    let norm = 1.0 / (dim as f64).sqrt();
    let mut eigenvalues = Vec::with_capacity(dim);
    let mut vectors = CMatrix::zeros(dim, dim);
    for k in 1..=2usize {
        let u = if k == 1 {
            [Complex64::new(-1.0, 0.0), I]
        } else {
            [Complex64::new(1.0, 0.0), I]
        };
        for j in 0..n {
            let omega = Complex64::from_polar(1.0, 2.0 * std::f64::consts::PI * j as f64 / n as f64);
            let mu = if k == 1 {
                Complex64::new(1.0, 0.0) - omega.conj()
            } else {
                Complex64::new(1.0, 0.0) - omega
            };
            let col = (k - 1) * n + j;
            let mut phase = Complex64::new(norm, 0.0);
            for m in 0..n {
                vectors[(2 * m, col)] = u[0] * phase;
                vectors[(2 * m + 1, col)] = u[1] * phase;
                phase *= omega;
            }
            eigenvalues.push(mu);
        }
    }
    let sys = VEigensystem {
        n,
        eigenvalues,
        vectors,
    };
    sys.verify(v)?;
    Ok(sys)
}

impl VEigensystem {
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn eigenvalues(&self) -> &[Complex64] {
        &self.eigenvalues
    }

    pub fn vectors(&self) -> &CMatrix {
        &self.vectors
    }

    /// Column index of the eigenpair labeled `(k, j)`, `k in {1, 2}`,
    /// `j in 0..n`.
    pub fn column(&self, k: usize, j: usize) -> usize {
        debug_assert!(k >= 1 && k <= 2 && j < self.n);
        (k - 1) * self.n + j
    }

    pub fn zero_eigenvalue_count(&self) -> usize {
        self.eigenvalues
            .iter()
            .filter(|mu| mu.norm() <= tol::V_EIGEN_VERIFY)
            .count()
    }

    /// Checks every eigenpair residual `||V e - mu e||`, orthonormality of
    /// the basis, the zero-eigenvalue count, and positivity of the real part
    /// of every nonzero eigenvalue.
    fn verify(&self, v: &VMatrix) -> Result<()> {
        let dim = v.dim();
        let fail = |residual: f64| Error::VerificationFailure {
            residual,
            tol: tol::V_EIGEN_VERIFY,
        };
        for col in 0..dim {
            let e = self.vectors.column(col);
            let residual = (v.matrix() * e - e * self.eigenvalues[col]).norm();
            if residual > tol::V_EIGEN_VERIFY {
                return Err(fail(residual));
            }
        }
        let gram = self.vectors.adjoint() * &self.vectors;
        let gram_residual = (gram - CMatrix::identity(dim, dim)).norm();
        if gram_residual > tol::V_EIGEN_VERIFY {
            return Err(fail(gram_residual));
        }
        if self.zero_eigenvalue_count() != 2 {
            return Err(fail(f64::INFINITY));
        }
        for mu in &self.eigenvalues {
            if mu.norm() > tol::V_EIGEN_VERIFY && mu.re <= 0.0 {
                return Err(fail(-mu.re));
            }
        }
        Ok(())
    }
}

/// Evaluates the quadratic form of the `V` matrix on the vector built from
/// `n` phase-space nodes (`u[2m] = x_m`, `u[2m+1] = p_m`) twice: directly as
/// `u^dag V u` and spectrally as `sum mu |e^dag u|^2`. The two results agree
/// for every input; returning both exposes the identity to callers.
pub fn gaussian_exponent_check(n: usize, nodes: &[(f64, f64)]) -> Result<(Complex64, Complex64)> {
    if nodes.len() != n {
        return Err(Error::LengthMismatch {
            left: nodes.len(),
            right: n,
        });
    }
    let v = build_v_matrix(n)?;
    let sys = v_eigensystem(&v)?;
    let mut u = CVector::zeros(2 * n);
    for (m, &(x, p)) in nodes.iter().enumerate() {
        u[2 * m] = Complex64::new(x, 0.0);
        u[2 * m + 1] = Complex64::new(p, 0.0);
    }
    let direct = (u.adjoint() * v.matrix() * &u)[(0, 0)];
    let mut spectral = Complex64::new(0.0, 0.0);
    for col in 0..2 * n {
        let overlap = sys.vectors().column(col).dotc(&u);
        spectral += sys.eigenvalues()[col] * overlap.norm_sqr();
    }
    Ok((direct, spectral))
}
