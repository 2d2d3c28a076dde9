//! Classical and quantum dynamics in the characteristic-function picture.
//!
//! A phase-space density evolves through its Fourier transform P-tilde on a
//! rectangular (lambda, mu) grid: `d/dt P~(l,m) = integral dl' dm'
//! P~(l',m') H~(l-l', m-m') K(l,m,l',m')`, where the kernel `K` is either the
//! classical Liouville kernel or the quantum kernel that reduces to it as
//! `hbar -> 0`. Polynomial Hamiltonians enter as derivative-of-delta
//! distributions, represented on the grid by finite-difference stencil spikes
//! so the same convolution quadrature covers them. On the quantum side the
//! matching Fock-space operator comes from the anti-normal double quadrature
//! `(1/2 pi hbar) int dx dp dl dm e^{i(lx+mp)} H~(l,m) |alpha><alpha|`, and
//! states evolve by exact unitary conjugation. [`correspondence_report`]
//! compares the two endpoints moment by moment over an `hbar` schedule.

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::linalg::{self, CMatrix, CVector};
use crate::phase_space::{self, FockConfig, GridSpec, PhaseSpaceDistribution};
use crate::state::{DensityMatrix, HermitianOperator};
use crate::tol;

/// One evaluation point of the evolution kernels.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KernelPoint {
    pub lam: f64,
    pub mu: f64,
    pub lam_p: f64,
    pub mu_p: f64,
    pub hbar: f64,
}

impl KernelPoint {
    pub fn new(lam: f64, mu: f64, lam_p: f64, mu_p: f64, hbar: f64) -> Result<Self> {
        let fields = [lam, mu, lam_p, mu_p, hbar];
        if fields.iter().any(|v| !v.is_finite()) || hbar <= 0.0 {
            return Err(Error::BadDimension {
                reason: "kernel point entries must be finite with hbar > 0".into(),
            });
        }
        Ok(Self {
            lam,
            mu,
            lam_p,
            mu_p,
            hbar,
        })
    }
}

#[inline]
fn kc(lam: f64, mu: f64, lam_p: f64, mu_p: f64) -> f64 {
    lam_p * mu - lam * mu_p
}

#[inline]
fn kq(lam: f64, mu: f64, lam_p: f64, mu_p: f64, hbar: f64) -> f64 {
    let exponent = 0.5 * hbar * (lam_p * (lam - lam_p) + mu_p * (mu - mu_p));
    let phase = 0.5 * hbar * (lam_p * mu - mu_p * lam);
    (2.0 / hbar) * exponent.exp() * phase.sin()
}

/// Classical Liouville kernel `l' m - l m'`.
pub fn classical_kernel(pt: &KernelPoint) -> f64 {
    kc(pt.lam, pt.mu, pt.lam_p, pt.mu_p)
}

/// Quantum kernel `(2/hbar) e^{(hbar/2)(l'(l-l') + m'(m-m'))}
/// sin((hbar/2)(l'm - m'l))`; tends to the classical kernel as `hbar -> 0`.
pub fn quantum_kernel(pt: &KernelPoint) -> f64 {
    kq(pt.lam, pt.mu, pt.lam_p, pt.mu_p, pt.hbar)
}

/// Radical-inverse (Halton) sequence value for one-based `index` in `base`.
pub fn halton(index: usize, base: usize) -> f64 {
    debug_assert!(base >= 2);
    let mut value = 0.0;
    let mut f = 1.0 / base as f64;
    let mut i = index;
    while i > 0 {
        value += f * (i % base) as f64;
        f /= base as f64;
        i /= base;
    }
    value
}

const HALTON_BASES: [usize; 4] = [2, 3, 5, 7];

/// Largest `|K_Q - K_C|` over a deterministic low-discrepancy sample of the
/// box `lo[k] <= coordinate_k <= hi[k]` in `(lambda, mu, lambda', mu')`.
/// Degenerate boxes (some `lo[k] = hi[k]`) are allowed and pin those
/// coordinates, down to a single-point evaluation.
pub fn kernel_deviation(lo: [f64; 4], hi: [f64; 4], hbar: f64, samples: usize) -> Result<f64> {
    if lo.iter().chain(hi.iter()).any(|v| !v.is_finite()) {
        return Err(Error::BadDimension {
            reason: "kernel box bounds must be finite".into(),
        });
    }
    if lo.iter().zip(hi.iter()).any(|(a, b)| a > b) {
        return Err(Error::BadDimension {
            reason: "kernel box must satisfy lo <= hi".into(),
        });
    }
    if !(hbar.is_finite() && hbar > 0.0) {
        return Err(Error::BadDimension {
            reason: format!("hbar must be positive and finite, got {hbar}"),
        });
    }
    if samples == 0 {
        return Err(Error::BadDimension {
            reason: "at least one sample is required".into(),
        });
    }
    let mut worst = 0.0f64;
    for s in 1..=samples {
        let mut x = [0.0f64; 4];
        for (k, v) in x.iter_mut().enumerate() {
            *v = lo[k] + (hi[k] - lo[k]) * halton(s, HALTON_BASES[k]);
        }
        let dev = (kq(x[0], x[1], x[2], x[3], hbar) - kc(x[0], x[1], x[2], x[3])).abs();
        worst = worst.max(dev);
    }
    Ok(worst)
}

/// Complex-valued function on a rectangular `(lambda, mu)` grid, stored
/// row-major with `lambda` as the slow index (mirroring
/// [`PhaseSpaceDistribution`]).
///
/// On negation-symmetric grids the constructor enforces conjugate symmetry
/// `f(-l, -m) = conj(f(l, m))` within [`tol::CONJUGATE_SYMMETRY`], the grid
/// fingerprint of a real function on phase space.
#[derive(Debug, Clone, PartialEq)]
pub struct CharacteristicFunction {
    grid: GridSpec,
    values: Vec<Complex64>,
}

impl CharacteristicFunction {
    pub fn new(grid: GridSpec, values: Vec<Complex64>) -> Result<Self> {
        if values.len() != grid.node_count() {
            return Err(Error::LengthMismatch {
                left: values.len(),
                right: grid.node_count(),
            });
        }
        let cf = Self { grid, values };
        if cf.grid.is_negation_symmetric() {
            let deviation = cf.conjugate_symmetry_deviation();
            if deviation > tol::CONJUGATE_SYMMETRY {
                return Err(Error::ConjugateSymmetryBroken {
                    deviation,
                    tol: tol::CONJUGATE_SYMMETRY,
                });
            }
        }
        Ok(cf)
    }

    pub fn zeros(grid: GridSpec) -> Self {
        let values = vec![Complex64::new(0.0, 0.0); grid.node_count()];
        Self { grid, values }
    }

    pub fn grid(&self) -> &GridSpec {
        &self.grid
    }

    pub fn values(&self) -> &[Complex64] {
        &self.values
    }

    pub fn value(&self, i: usize, j: usize) -> Complex64 {
        self.values[i * self.grid.np() + j]
    }

    /// Value at the origin node, when the grid has one. For the transform of
    /// a normalized density this is `(2 pi)^{-2}`.
    pub fn origin_value(&self) -> Option<Complex64> {
        self.grid.origin_index().map(|(i, j)| self.value(i, j))
    }

    /// `max |f(i,j) - conj(f(rev i, rev j))|` over the grid.
    pub fn conjugate_symmetry_deviation(&self) -> f64 {
        let (nx, np) = (self.grid.nx(), self.grid.np());
        let mut worst = 0.0f64;
        for i in 0..nx {
            for j in 0..np {
                let mirrored = self.value(nx - 1 - i, np - 1 - j).conj();
                worst = worst.max((self.value(i, j) - mirrored).norm());
            }
        }
        worst
    }
}

/// `P~(l, m) = (2 pi)^{-2} integral P(x, p) e^{-i(lx + mp)} dx dp` by
/// trapezoid quadrature, sampled on `freq_grid`.
pub fn forward_transform(
    dist: &PhaseSpaceDistribution,
    freq_grid: &GridSpec,
) -> CharacteristicFunction {
    let space = dist.grid();
    let (nx, np) = (space.nx(), space.np());
    let (nl, nm) = (freq_grid.nx(), freq_grid.np());
    // Separable phases: out = A (W o P) B^T with A[l,i] = e^{-i l x_i},
    // B[m,j] = e^{-i m p_j}, trapezoid weights folded into the middle factor.
    let mut weighted = CMatrix::zeros(nx, np);
    for i in 0..nx {
        for j in 0..np {
            weighted[(i, j)] = Complex64::new(space.weight(i, j) * dist.value(i, j), 0.0);
        }
    }
    let mut a = CMatrix::zeros(nl, nx);
    for l in 0..nl {
        for i in 0..nx {
            a[(l, i)] = Complex64::from_polar(1.0, -freq_grid.x(l) * space.x(i));
        }
    }
    let mut b = CMatrix::zeros(nm, np);
    for m in 0..nm {
        for j in 0..np {
            b[(m, j)] = Complex64::from_polar(1.0, -freq_grid.p(m) * space.p(j));
        }
    }
    let scale = (2.0 * std::f64::consts::PI).powi(-2);
    let table = (&a * weighted * b.transpose()).scale(scale);
    let mut values = vec![Complex64::new(0.0, 0.0); nl * nm];
    for l in 0..nl {
        for m in 0..nm {
            values[l * nm + m] = table[(l, m)];
        }
    }
    CharacteristicFunction {
        grid: freq_grid.clone(),
        values,
    }
}

/// `P(x, p) = integral P~(l, m) e^{+i(lx + mp)} dl dm` by trapezoid
/// quadrature, renormalized to a unit quadrature sum.
///
/// The imaginary part is discarded (it is bounded by the conjugate-symmetry
/// tolerance of the input); negative excursions beyond `1e-4` of the peak
/// are rejected, smaller ringing is clamped to zero.
pub fn inverse_transform(
    cf: &CharacteristicFunction,
    space_grid: &GridSpec,
) -> Result<PhaseSpaceDistribution> {
    let freq = cf.grid();
    let (nl, nm) = (freq.nx(), freq.np());
    let (nx, np) = (space_grid.nx(), space_grid.np());
    let mut weighted = CMatrix::zeros(nl, nm);
    for l in 0..nl {
        for m in 0..nm {
            weighted[(l, m)] = cf.value(l, m) * Complex64::new(freq.weight(l, m), 0.0);
        }
    }
    let mut a = CMatrix::zeros(nx, nl);
    for i in 0..nx {
        for l in 0..nl {
            a[(i, l)] = Complex64::from_polar(1.0, space_grid.x(i) * freq.x(l));
        }
    }
    let mut b = CMatrix::zeros(np, nm);
    for j in 0..np {
        for m in 0..nm {
            b[(j, m)] = Complex64::from_polar(1.0, space_grid.p(j) * freq.p(m));
        }
    }
    let table = &a * weighted * b.transpose();
    let mut values = vec![0.0f64; nx * np];
    let mut peak = 0.0f64;
    for i in 0..nx {
        for j in 0..np {
            let v = table[(i, j)].re;
            values[i * np + j] = v;
            peak = peak.max(v.abs());
        }
    }
    let floor = -1e-4 * peak.max(f64::MIN_POSITIVE);
    let mut sum = 0.0;
    for (idx, v) in values.iter_mut().enumerate() {
        if *v < floor {
            return Err(Error::NegativeProbability {
                index: idx,
                value: *v,
            });
        }
        *v = v.max(0.0);
        sum += space_grid.weight(idx / np, idx % np) * *v;
    }
    if (sum - 1.0).abs() > 0.05 {
        return Err(Error::NotNormalized { sum });
    }
    for v in &mut values {
        *v /= sum;
    }
    PhaseSpaceDistribution::new(space_grid.clone(), values)
}

/// Fourth-order central stencil for the second derivative of a delta:
/// `delta''(u) ~ sum_k (s_k / h^2) delta(u - k h)`.
const D2_OFFSETS: [isize; 5] = [-2, -1, 0, 1, 2];
const D2_COEFFS: [f64; 5] = [
    -1.0 / 12.0,
    16.0 / 12.0,
    -30.0 / 12.0,
    16.0 / 12.0,
    -1.0 / 12.0,
];

/// Fourth-order central stencil for the fourth derivative of a delta.
const D4_OFFSETS: [isize; 7] = [-3, -2, -1, 0, 1, 2, 3];
const D4_COEFFS: [f64; 7] = [
    -1.0 / 6.0,
    12.0 / 6.0,
    -39.0 / 6.0,
    56.0 / 6.0,
    -39.0 / 6.0,
    12.0 / 6.0,
    -1.0 / 6.0,
];

fn origin_or_err(grid: &GridSpec, reach: usize) -> Result<(usize, usize)> {
    let (i0, j0) = grid.origin_index().ok_or_else(|| Error::BadDimension {
        reason: "Hamiltonian grid must be negation-symmetric with odd node counts".into(),
    })?;
    if i0 < reach || j0 < reach {
        return Err(Error::BadDimension {
            reason: format!("grid too small for a stencil of reach {reach}"),
        });
    }
    Ok((i0, j0))
}

/// Adds `coeff * delta^{(order)}` along one axis at the origin: a spike of
/// value `c_k / weight` at each stencil node, so that grid quadrature
/// reproduces the distributional action.
fn add_axis_stencil(
    values: &mut [Complex64],
    grid: &GridSpec,
    origin: (usize, usize),
    axis: usize,
    offsets: &[isize],
    coeffs: &[f64],
    scale: f64,
) {
    let h = if axis == 0 { grid.dx() } else { grid.dp() };
    let power = if offsets.len() == 5 { 2 } else { 4 };
    for (&k, &c) in offsets.iter().zip(coeffs) {
        let (i, j) = if axis == 0 {
            ((origin.0 as isize + k) as usize, origin.1)
        } else {
            (origin.0, (origin.1 as isize + k) as usize)
        };
        let spike = scale * c / h.powi(power) / grid.weight(i, j);
        values[i * grid.np() + j] += Complex64::new(spike, 0.0);
    }
}

/// `H~` of the constant Hamiltonian `H = value`: a single spike at the
/// origin.
pub fn constant_hamiltonian(grid: &GridSpec, value: f64) -> Result<CharacteristicFunction> {
    let (i0, j0) = origin_or_err(grid, 0)?;
    let mut values = vec![Complex64::new(0.0, 0.0); grid.node_count()];
    values[i0 * grid.np() + j0] = Complex64::new(value / grid.weight(i0, j0), 0.0);
    CharacteristicFunction::new(grid.clone(), values)
}

/// `H~` of the free Hamiltonian `H = p^2 / 2`, which is
/// `-(1/2) delta(l) delta''(m)`.
pub fn free_hamiltonian(grid: &GridSpec) -> Result<CharacteristicFunction> {
    let origin = origin_or_err(grid, 2)?;
    let mut values = vec![Complex64::new(0.0, 0.0); grid.node_count()];
    add_axis_stencil(&mut values, grid, origin, 1, &D2_OFFSETS, &D2_COEFFS, -0.5);
    CharacteristicFunction::new(grid.clone(), values)
}

/// `H~` of the harmonic Hamiltonian `H = strength (x^2 + p^2) / 2`, which is
/// `-(strength/2) (delta''(l) delta(m) + delta(l) delta''(m))`.
pub fn harmonic_hamiltonian(grid: &GridSpec, strength: f64) -> Result<CharacteristicFunction> {
    let origin = origin_or_err(grid, 2)?;
    let mut values = vec![Complex64::new(0.0, 0.0); grid.node_count()];
    let scale = -0.5 * strength;
    add_axis_stencil(&mut values, grid, origin, 0, &D2_OFFSETS, &D2_COEFFS, scale);
    add_axis_stencil(&mut values, grid, origin, 1, &D2_OFFSETS, &D2_COEFFS, scale);
    CharacteristicFunction::new(grid.clone(), values)
}

/// `H~` of the quartic Hamiltonian `H = strength x^4 / 4`, which is
/// `(strength/4) delta''''(l) delta(m)`.
pub fn quartic_hamiltonian(grid: &GridSpec, strength: f64) -> Result<CharacteristicFunction> {
    let origin = origin_or_err(grid, 3)?;
    let mut values = vec![Complex64::new(0.0, 0.0); grid.node_count()];
    add_axis_stencil(
        &mut values,
        grid,
        origin,
        0,
        &D4_OFFSETS,
        &D4_COEFFS,
        0.25 * strength,
    );
    CharacteristicFunction::new(grid.clone(), values)
}

/// Kernel selector for [`evolve_characteristic`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum EvolutionKernel {
    Classical,
    Quantum { hbar: f64 },
}

struct ConvolutionTerm {
    di: isize,
    dj: isize,
    lam: f64,
    mu: f64,
    coeff: Complex64,
}

/// Nonzero nodes of `H~` as convolution terms: offsets from the origin node
/// plus the node coordinates, with the quadrature weight folded into the
/// coefficient.
fn collect_terms(h: &CharacteristicFunction, origin: (usize, usize)) -> Vec<ConvolutionTerm> {
    let grid = h.grid();
    let mut terms = Vec::new();
    for a in 0..grid.nx() {
        for b in 0..grid.np() {
            let v = h.value(a, b);
            if v.norm_sqr() > 0.0 {
                terms.push(ConvolutionTerm {
                    di: a as isize - origin.0 as isize,
                    dj: b as isize - origin.1 as isize,
                    lam: grid.x(a),
                    mu: grid.p(b),
                    coeff: v * Complex64::new(grid.weight(a, b), 0.0),
                });
            }
        }
    }
    terms
}

fn norm_inf(values: &[Complex64]) -> f64 {
    values.iter().map(|z| z.norm()).fold(0.0, f64::max)
}

/// Integrates `d/dt P~(l, m) = integral dl' dm' P~(l', m') H~(l-l', m-m')
/// K(l, m, l', m')` with a classic fixed-step 4-stage explicit scheme.
///
/// The convolution is evaluated over the nonzero nodes of `H~` with zero
/// padding outside the grid, which requires a negation-symmetric grid with
/// odd node counts (so node differences are again nodes). A per-step growth
/// beyond [`tol::STEP_GROWTH_LIMIT`] reports [`Error::UnstableStep`] instead
/// of returning divergent data.
pub fn evolve_characteristic(
    p0: &CharacteristicFunction,
    h: &CharacteristicFunction,
    kernel: EvolutionKernel,
    dt: f64,
    steps: usize,
) -> Result<CharacteristicFunction> {
    if p0.grid() != h.grid() {
        return Err(Error::GridMismatch);
    }
    let grid = p0.grid().clone();
    let origin = origin_or_err(&grid, 0)?;
    if !(dt.is_finite() && dt > 0.0) {
        return Err(Error::BadDimension {
            reason: format!("step size must be positive and finite, got {dt}"),
        });
    }
    if steps == 0 {
        return Err(Error::BadDimension {
            reason: "at least one step is required".into(),
        });
    }
    if let EvolutionKernel::Quantum { hbar } = kernel {
        if !(hbar.is_finite() && hbar > 0.0) {
            return Err(Error::BadDimension {
                reason: format!("hbar must be positive and finite, got {hbar}"),
            });
        }
    }
    let terms = collect_terms(h, origin);
    let (nx, np) = (grid.nx(), grid.np());
    let n = nx * np;

    // The kernel factor K(l, m, l - l_t, m - m_t) depends only on the output
    // node and the term, so it is tabulated once, with the term coefficient
    // folded in. The shifted source index i - di stays node-exact because
    // the grid is negation-symmetric.
    let tables: Vec<Vec<Complex64>> = terms
        .iter()
        .map(|t| {
            let mut table = vec![Complex64::new(0.0, 0.0); n];
            for i in 0..nx {
                let lam = grid.x(i);
                for j in 0..np {
                    let mu = grid.p(j);
                    let (lp, mp) = (lam - t.lam, mu - t.mu);
                    let k = match kernel {
                        EvolutionKernel::Classical => kc(lam, mu, lp, mp),
                        EvolutionKernel::Quantum { hbar } => kq(lam, mu, lp, mp, hbar),
                    };
                    table[i * np + j] = t.coeff * k;
                }
            }
            table
        })
        .collect();

    let rhs = |y: &[Complex64], out: &mut [Complex64]| {
        out.fill(Complex64::new(0.0, 0.0));
        for (t, table) in terms.iter().zip(&tables) {
            for i in 0..nx {
                let si = i as isize - t.di;
                if si < 0 || si >= nx as isize {
                    continue;
                }
                for j in 0..np {
                    let sj = j as isize - t.dj;
                    if sj < 0 || sj >= np as isize {
                        continue;
                    }
                    let idx = i * np + j;
                    out[idx] += table[idx] * y[si as usize * np + sj as usize];
                }
            }
        }
    };

    let mut y = p0.values().to_vec();
    let mut k1 = vec![Complex64::new(0.0, 0.0); n];
    let mut k2 = k1.clone();
    let mut k3 = k1.clone();
    let mut k4 = k1.clone();
    let mut stage = k1.clone();
    let half = 0.5 * dt;
    let sixth = dt / 6.0;
    for step in 1..=steps {
        let before = norm_inf(&y);
        rhs(&y, &mut k1);
        for i in 0..n {
            stage[i] = y[i] + k1[i] * half;
        }
        rhs(&stage, &mut k2);
        for i in 0..n {
            stage[i] = y[i] + k2[i] * half;
        }
        rhs(&stage, &mut k3);
        for i in 0..n {
            stage[i] = y[i] + k3[i] * dt;
        }
        rhs(&stage, &mut k4);
        for i in 0..n {
            y[i] += (k1[i] + (k2[i] + k3[i]) * 2.0 + k4[i]) * sixth;
        }
        let after = norm_inf(&y);
        let growth = if before > 0.0 { after / before } else { 1.0 };
        if !after.is_finite() || growth > tol::STEP_GROWTH_LIMIT {
            return Err(Error::UnstableStep { step, growth });
        }
    }
    CharacteristicFunction::new(grid, y)
}

/// Conservative bound on the spectral radius of the evolution right-hand
/// side. Fixed-step integration stays stable with `dt` below roughly
/// `2.5 / bound`, the rule [`correspondence_report`] uses internally.
pub fn rhs_norm_bound(h: &CharacteristicFunction, kernel: EvolutionKernel) -> Result<f64> {
    let grid = h.grid();
    let origin = origin_or_err(grid, 0)?;
    let lam_max = grid.x(0).abs().max(grid.x(grid.nx() - 1).abs());
    let mu_max = grid.p(0).abs().max(grid.p(grid.np() - 1).abs());
    let mut total = 0.0;
    for t in collect_terms(h, origin) {
        let swing = t.lam.abs() * mu_max + t.mu.abs() * lam_max;
        let amp = match kernel {
            EvolutionKernel::Classical => 1.0,
            EvolutionKernel::Quantum { hbar } => {
                let reach = (lam_max + t.lam.abs()) * t.lam.abs()
                    + (mu_max + t.mu.abs()) * t.mu.abs();
                (0.5 * hbar * reach).exp()
            }
        };
        total += t.coeff.norm() * swing * amp;
    }
    Ok(total)
}

/// Anti-normal Fock-space quantization `(1/2 pi hbar) int dx dp int dl dm
/// e^{i(lx + mp)} H~(l, m) |alpha><alpha|` by double quadrature.
///
/// The inner `(x, p)` quadrature runs over a square box holding the radial
/// mass of the accurately represented Fock band, with node spacing
/// resolving that band's angular oscillation. Requires `H~` conjugate
/// symmetric (a real Hamiltonian); the Hermiticity residual of the assembled
/// matrix is checked against [`tol::OPERATOR_HERMITICITY`] and the result
/// symmetrized.
pub fn hamiltonian_operator(
    h: &CharacteristicFunction,
    cfg: &FockConfig,
) -> Result<HermitianOperator> {
    let dim = cfg.dim();
    let hbar = cfg.hbar();
    let grid = h.grid();
    let mut spikes = Vec::new();
    for a in 0..grid.nx() {
        for b in 0..grid.np() {
            let v = h.value(a, b);
            if v.norm_sqr() > 0.0 {
                spikes.push((grid.x(a), grid.p(b), v * grid.weight(a, b)));
            }
        }
    }
    if spikes.is_empty() {
        return Ok(HermitianOperator::new(
            CMatrix::zeros(dim, dim),
            vec![dim],
            tol::VALIDATION,
        )?);
    }
    // Accuracy band: the levels the auto-dimension rule reserves headroom
    // for. The box must hold the Poisson radial mass of that band and the
    // node spacing must resolve its angular phase plus the spike phases.
    let root = (((dim as f64) + 6.0).sqrt() - 4.0).max(0.0);
    let band = root * root + 4.0 * root;
    let coverage = band + 7.0 * (band + 1.0).sqrt() + 5.0;
    let half_width = (2.0 * hbar * coverage).sqrt();
    let spike_freq = spikes
        .iter()
        .map(|&(l, m, _)| l.hypot(m))
        .fold(0.0, f64::max);
    let freq = (band.sqrt() + 4.0) / (2.0 * hbar).sqrt() + spike_freq;
    let mut nodes = ((2.0 * half_width * freq / std::f64::consts::PI).ceil() as usize + 2).max(33);
    if nodes % 2 == 0 {
        nodes += 1;
    }
    let quad = GridSpec::symmetric(half_width, nodes)?;

    const CHUNK: usize = 512;
    let mut op = CMatrix::zeros(dim, dim);
    let mut left = CMatrix::zeros(dim, CHUNK);
    let mut right = CMatrix::zeros(dim, CHUNK);
    let mut column = CVector::zeros(dim);
    let mut filled = 0;
    let prefactor = 1.0 / (2.0 * std::f64::consts::PI * hbar);
    let scale = 1.0 / (2.0 * hbar).sqrt();
    for i in 0..quad.nx() {
        let x = quad.x(i);
        for j in 0..quad.np() {
            let p = quad.p(j);
            // Raw amplitudes of the untruncated coherent state: element
            // (m, n) only reads components below dim, so no tail cut enters.
            let alpha = Complex64::new(x, p) * scale;
            let mut amp = Complex64::new((-0.5 * alpha.norm_sqr()).exp(), 0.0);
            for m in 0..dim {
                if m > 0 {
                    amp *= alpha / (m as f64).sqrt();
                }
                column[m] = amp;
            }
            let mut s = Complex64::new(0.0, 0.0);
            for &(lam, mu, c) in &spikes {
                s += c * Complex64::from_polar(1.0, lam * x + mu * p);
            }
            s *= prefactor * quad.weight(i, j);
            left.set_column(filled, &(&column * s));
            right.set_column(filled, &column);
            filled += 1;
            if filled == CHUNK {
                flush_product(&mut op, &left, &right, filled);
                filled = 0;
            }
        }
    }
    if filled > 0 {
        flush_product(&mut op, &left, &right, filled);
    }
    let deviation = linalg::hermitian_deviation(&op);
    let allowed = tol::OPERATOR_HERMITICITY * linalg::max_abs(&op).max(1.0);
    if deviation > allowed {
        return Err(Error::NotHermitian {
            deviation,
            tol: allowed,
        });
    }
    Ok(HermitianOperator::from_trusted(op, vec![dim]))
}

/// `op += L R^dag` over the first `filled` columns.
fn flush_product(op: &mut CMatrix, left: &CMatrix, right: &CMatrix, filled: usize) {
    op.gemm(
        Complex64::new(1.0, 0.0),
        &left.columns(0, filled),
        &right.columns(0, filled).adjoint(),
        Complex64::new(1.0, 0.0),
    );
}

/// Position operator `sqrt(hbar/2) (a + a^dag)` on the truncated Fock space.
pub fn position_operator(cfg: &FockConfig) -> CMatrix {
    ladder_combination(cfg, Complex64::new(1.0, 0.0), Complex64::new(1.0, 0.0))
}

/// Momentum operator `i sqrt(hbar/2) (a^dag - a)` on the truncated Fock
/// space.
pub fn momentum_operator(cfg: &FockConfig) -> CMatrix {
    ladder_combination(cfg, Complex64::new(0.0, -1.0), Complex64::new(0.0, 1.0))
}

/// `sqrt(hbar/2) (ca * a + cdag * a^dag)`.
fn ladder_combination(cfg: &FockConfig, ca: Complex64, cdag: Complex64) -> CMatrix {
    let dim = cfg.dim();
    let scale = (0.5 * cfg.hbar()).sqrt();
    let mut m = CMatrix::zeros(dim, dim);
    for n in 1..dim {
        let root = (n as f64).sqrt() * scale;
        m[(n - 1, n)] = ca * root;
        m[(n, n - 1)] = cdag * root;
    }
    m
}

/// Evolves `rho` by `steps` exact unitary conjugations with
/// `e^{-i Hop dt / hbar}`, composed through a single eigendecomposition.
/// Trace and spectrum are preserved to solver precision.
pub fn von_neumann_evolve(
    rho: &DensityMatrix,
    hop: &HermitianOperator,
    hbar: f64,
    dt: f64,
    steps: usize,
) -> Result<DensityMatrix> {
    if rho.dim() != hop.dim() {
        return Err(Error::DimensionMismatch {
            left: rho.dim(),
            right: hop.dim(),
        });
    }
    if !(hbar.is_finite() && hbar > 0.0) {
        return Err(Error::BadDimension {
            reason: format!("hbar must be positive and finite, got {hbar}"),
        });
    }
    if !(dt.is_finite() && dt > 0.0) {
        return Err(Error::BadDimension {
            reason: format!("step size must be positive and finite, got {dt}"),
        });
    }
    if steps == 0 {
        return Err(Error::BadDimension {
            reason: "at least one step is required".into(),
        });
    }
    let angle = -(dt * steps as f64) / hbar;
    let u = linalg::exp_i_hermitian(hop.matrix(), angle)?;
    rho.conjugate_by(&u)
}

/// One row of a quantum-versus-classical endpoint comparison: absolute
/// deviations of the first and second moments at `t_final`.
#[derive(Debug, Clone, Serialize)]
pub struct CorrespondenceRow {
    pub hbar: f64,
    pub t_final: f64,
    pub dx_mean: f64,
    pub dp_mean: f64,
    pub dx2: f64,
    pub dp2: f64,
}

/// Evolves the density classically once (Liouville kernel on the
/// characteristic grid) and quantum mechanically per `hbar` (P-construction,
/// anti-normal Hamiltonian, exact unitary evolution), then tabulates the
/// moment deviations between the two endpoints.
///
/// Quantum moments are normal-ordered (`Tr[rho x^2] - hbar/2` for the
/// second moments), the moments of the evolved state's phase-space
/// distribution, so a vanishing Hamiltonian gives vanishing deviations.
pub fn correspondence_report(
    p0: &PhaseSpaceDistribution,
    h: &CharacteristicFunction,
    schedule: &[f64],
    t_final: f64,
) -> Result<Vec<CorrespondenceRow>> {
    phase_space::check_schedule(schedule)?;
    if !(t_final.is_finite() && t_final > 0.0) {
        return Err(Error::BadDimension {
            reason: format!("final time must be positive and finite, got {t_final}"),
        });
    }
    let cf0 = forward_transform(p0, h.grid());
    let bound = rhs_norm_bound(h, EvolutionKernel::Classical)?;
    let steps = ((t_final * bound / 2.5).ceil() as usize).max(16);
    let dt = t_final / steps as f64;
    let cf_t = evolve_characteristic(&cf0, h, EvolutionKernel::Classical, dt, steps)?;
    let p_t = inverse_transform(&cf_t, p0.grid())?;
    let (cx, cp) = (p_t.mean_x(), p_t.mean_p());
    let (cx2, cp2) = (p_t.mean_x2(), p_t.mean_p2());

    let mut rows = Vec::with_capacity(schedule.len());
    for &hbar in schedule {
        let cfg = FockConfig::auto_for_grid(p0.grid(), hbar, 2)?;
        let rho0 = phase_space::p_construct(p0, &cfg)?;
        let hop = hamiltonian_operator(h, &cfg)?;
        let rho_t = von_neumann_evolve(&rho0, &hop, hbar, t_final, 1)?;
        let xop = position_operator(&cfg);
        let pop = momentum_operator(&cfg);
        let expect = |op: &CMatrix| (rho_t.matrix() * op).trace().re;
        let qx = expect(&xop);
        let qp = expect(&pop);
        let qx2 = expect(&(&xop * &xop)) - 0.5 * hbar;
        let qp2 = expect(&(&pop * &pop)) - 0.5 * hbar;
        rows.push(CorrespondenceRow {
            hbar,
            t_final,
            dx_mean: (qx - cx).abs(),
            dp_mean: (qp - cp).abs(),
            dx2: (qx2 - cx2).abs(),
            dp2: (qp2 - cp2).abs(),
        });
    }
    Ok(rows)
}
