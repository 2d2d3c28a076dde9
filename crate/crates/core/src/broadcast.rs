//! The three-slot broadcasting process: source, blank target, and machine
//! ancilla coupled by one joint unitary.
//!
//! Contains the explicit copier that broadcasts commuting diagonal sources,
//! a derivative-free search for broadcasting unitaries, relative-entropy
//! certificates comparing marginal entropies against the source pair, and
//! the mixture reduction that replaces an infinite-entropy source pair by a
//! finite one.

use num_complex::Complex64;
use rand::Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::entropy::{quantum_relative_entropy, ExtendedNonNegative};
use crate::error::{Error, Result};
use crate::linalg::{self, CMatrix};
use crate::state::{self, DensityMatrix};

/// Broadcasting scenario: candidate source states on the s slot, fixed
/// initial target and machine states, and the slot dimensions.
#[derive(Debug, Clone)]
pub struct BroadcastTask {
    sources: Vec<DensityMatrix>,
    target_init: DensityMatrix,
    machine_init: DensityMatrix,
    dims: (usize, usize, usize),
}

impl BroadcastTask {
    /// The target slot must match the source dimension so it can hold a
    /// copy; the machine may have any dimension ≥ 1.
    pub fn new(
        sources: Vec<DensityMatrix>,
        target_init: DensityMatrix,
        machine_init: DensityMatrix,
    ) -> Result<Self> {
        let first = sources.first().ok_or_else(|| Error::BadDimension {
            reason: "broadcast task needs at least one source".into(),
        })?;
        let d_s = first.dim();
        if let Some(bad) = sources.iter().find(|s| s.dim() != d_s) {
            return Err(Error::DimensionMismatch {
                left: d_s,
                right: bad.dim(),
            });
        }
        let d_t = target_init.dim();
        if d_t != d_s {
            return Err(Error::BadDimension {
                reason: format!("target dimension {d_t} must equal source dimension {d_s}"),
            });
        }
        let d_m = machine_init.dim();
        Ok(Self {
            sources,
            target_init,
            machine_init,
            dims: (d_s, d_t, d_m),
        })
    }

    /// Defaults: target and machine start in their ground states, machine
    /// dimension d_s².
    pub fn with_defaults(sources: Vec<DensityMatrix>) -> Result<Self> {
        let d_s = sources
            .first()
            .ok_or_else(|| Error::BadDimension {
                reason: "broadcast task needs at least one source".into(),
            })?
            .dim();
        let target = DensityMatrix::basis_state(d_s, 0)?;
        let machine = DensityMatrix::basis_state(d_s * d_s, 0)?;
        Self::new(sources, target, machine)
    }

    pub fn sources(&self) -> &[DensityMatrix] {
        &self.sources
    }

    /// (d_s, d_t, d_m).
    pub fn dims(&self) -> (usize, usize, usize) {
        self.dims
    }

    pub fn total_dim(&self) -> usize {
        self.dims.0 * self.dims.1 * self.dims.2
    }

    /// σᵢ ⊗ τ ⊗ Σ viewed as three subsystems (s, t, m).
    pub fn input_state(&self, source_index: usize) -> Result<DensityMatrix> {
        let source = self.sources.get(source_index).ok_or(Error::IndexOutOfRange {
            index: source_index,
            count: self.sources.len(),
        })?;
        source
            .tensor(&self.target_init)
            .tensor(&self.machine_init)
            .reshaped(vec![self.dims.0, self.dims.1, self.dims.2])
    }
}

/// Real parameter vector of length dim² encoding a Hermitian generator.
#[derive(Debug, Clone, PartialEq)]
pub struct UnitaryParams {
    theta: Vec<f64>,
}

impl UnitaryParams {
    pub fn new(theta: Vec<f64>) -> Self {
        Self { theta }
    }

    pub fn zeros(dim: usize) -> Self {
        Self {
            theta: vec![0.0; dim * dim],
        }
    }

    pub fn theta(&self) -> &[f64] {
        &self.theta
    }
}

/// exp(iH) where H's diagonal comes from the first `dim` parameters and each
/// off-diagonal pair (i < j, row-major) takes the next two parameters as its
/// real and imaginary parts.
pub fn unitary_from_params(params: &UnitaryParams, dim: usize) -> Result<CMatrix> {
    let theta = &params.theta;
    if theta.len() != dim * dim {
        return Err(Error::BadParamLength {
            expected: dim * dim,
            actual: theta.len(),
        });
    }
    let mut h = CMatrix::zeros(dim, dim);
    for i in 0..dim {
        h[(i, i)] = Complex64::new(theta[i], 0.0);
    }
    let mut k = dim;
    for i in 0..dim {
        for j in (i + 1)..dim {
            let v = Complex64::new(theta[k], theta[k + 1]);
            h[(i, j)] = v;
            h[(j, i)] = v.conj();
            k += 2;
        }
    }
    linalg::exp_i_hermitian(&h, 1.0)
}

/// Conjugates the selected input by `u` and reduces to the source and target
/// marginals.
pub fn apply_broadcast(
    task: &BroadcastTask,
    source_index: usize,
    u: &CMatrix,
) -> Result<(DensityMatrix, DensityMatrix, DensityMatrix)> {
    if u.nrows() != task.total_dim() {
        return Err(Error::DimensionMismatch {
            left: u.nrows(),
            right: task.total_dim(),
        });
    }
    let rho_out = task.input_state(source_index)?.conjugate_by(u)?;
    let marg_s = rho_out.partial_trace(&[0])?;
    let marg_t = rho_out.partial_trace(&[1])?;
    Ok((rho_out, marg_s, marg_t))
}

/// Worst marginal error of `u` as a broadcaster: max over sources and over
/// both output slots of the trace distance to the source state.
pub fn broadcast_residual(task: &BroadcastTask, u: &CMatrix) -> Result<f64> {
    let mut worst: f64 = 0.0;
    for i in 0..task.sources.len() {
        let (_, marg_s, marg_t) = apply_broadcast(task, i, u)?;
        let source = &task.sources[i];
        worst = worst.max(state::trace_distance(&marg_s, source)?);
        worst = worst.max(state::trace_distance(&marg_t, source)?);
    }
    Ok(worst)
}

/// Permutation unitary |i⟩_s |j⟩_t ↦ |i⟩_s |(j+i) mod d⟩_t, identity on the
/// machine. Copies any state diagonal in the computational basis onto a
/// |0⟩-initialized target.
pub fn classical_copier(d: usize, machine_dim: usize) -> Result<CMatrix> {
    if d < 2 {
        return Err(Error::BadDimension {
            reason: format!("copier needs source dimension ≥ 2, got {d}"),
        });
    }
    if machine_dim < 1 {
        return Err(Error::BadDimension {
            reason: "copier needs machine dimension ≥ 1".into(),
        });
    }
    let total = d * d * machine_dim;
    let mut u = CMatrix::zeros(total, total);
    for i in 0..d {
        for j in 0..d {
            let target = (j + i) % d;
            for k in 0..machine_dim {
                let col = (i * d + j) * machine_dim + k;
                let row = (i * d + target) * machine_dim + k;
                u[(row, col)] = Complex64::ONE;
            }
        }
    }
    Ok(u)
}

/// Settings for the derivative-free broadcaster search.
#[derive(Debug, Clone)]
pub struct OptimizerConfig {
    pub seed: u64,
    pub restarts: usize,
    /// Full coordinate sweeps per restart.
    pub max_sweeps: usize,
    /// Stop a restart early once the residual reaches this value.
    pub target_residual: f64,
    pub initial_step: f64,
    /// Step multiplier applied after a sweep with no improvement.
    pub shrink: f64,
    pub min_step: f64,
}

impl Default for OptimizerConfig {
    fn default() -> Self {
        Self {
            seed: 0,
            restarts: 8,
            max_sweeps: 400,
            target_residual: 1e-12,
            initial_step: 0.3,
            shrink: 0.5,
            min_step: 1e-10,
        }
    }
}

/// One exploratory sweep: probe ±step along each coordinate in turn, keep
/// the first improving move per coordinate. Returns the improved value.
fn explore<F: Fn(&[f64]) -> f64>(objective: &F, theta: &mut [f64], start: f64, step: f64) -> f64 {
    let mut value = start;
    for k in 0..theta.len() {
        let original = theta[k];
        for dir in [1.0, -1.0] {
            theta[k] = original + dir * step;
            let probed = objective(theta);
            if probed < value {
                value = probed;
                break;
            }
            theta[k] = original;
        }
    }
    value
}

/// Hooke-Jeeves pattern search: exploratory coordinate sweeps with a
/// shrinking step, plus pattern moves that extrapolate along the direction
/// of a successful sweep so the search can track valleys not aligned with
/// the coordinate axes. Returns the best parameters, the per-sweep
/// best-so-far history, and the final residual.
fn pattern_search<F: Fn(&[f64]) -> f64>(
    objective: &F,
    init: Vec<f64>,
    cfg: &OptimizerConfig,
) -> (Vec<f64>, Vec<f64>, f64) {
    let mut base = init;
    let mut best = objective(&base);
    let mut history = vec![best];
    let mut step = cfg.initial_step;
    for _ in 0..cfg.max_sweeps {
        if best <= cfg.target_residual || step < cfg.min_step {
            break;
        }
        let mut trial = base.clone();
        let mut trial_val = explore(objective, &mut trial, best, step);
        if trial_val < best {
            loop {
                let mut pattern: Vec<f64> = trial
                    .iter()
                    .zip(&base)
                    .map(|(&t, &b)| 2.0 * t - b)
                    .collect();
                let extrapolated = objective(&pattern);
                let pattern_val = explore(objective, &mut pattern, extrapolated, step);
                if pattern_val < trial_val {
                    base = std::mem::replace(&mut trial, pattern);
                    trial_val = pattern_val;
                } else {
                    break;
                }
            }
            base = trial;
            best = trial_val;
        } else {
            step *= cfg.shrink;
        }
        history.push(best);
    }
    (base, history, best)
}

/// Multi-restart minimization of [`broadcast_residual`] over the unitary
/// parameters. Restart 0 starts from the identity; the rest start from
/// uniform random angles. Deterministic for a fixed seed: restarts run in
/// parallel but are merged in restart order, and the returned history is the
/// global best-so-far sequence across that order.
pub fn optimize_broadcaster(
    task: &BroadcastTask,
    cfg: &OptimizerConfig,
) -> Result<(UnitaryParams, Vec<f64>)> {
    if cfg.restarts == 0 {
        return Err(Error::BadDimension {
            reason: "optimizer needs at least one restart".into(),
        });
    }
    let dim = task.total_dim();
    let n_params = dim * dim;
    let dims3 = [task.dims.0, task.dims.1, task.dims.2];
    let inputs: Vec<CMatrix> = (0..task.sources.len())
        .map(|i| task.input_state(i).map(|s| s.matrix().clone()))
        .collect::<Result<_>>()?;

    let mut rng = crate::random::seeded_rng(cfg.seed);
    let mut inits = vec![vec![0.0; n_params]];
    for _ in 1..cfg.restarts {
        inits.push(
            (0..n_params)
                .map(|_| rng.random_range(-std::f64::consts::PI..std::f64::consts::PI))
                .collect(),
        );
    }

    // Same quantity as broadcast_residual, evaluated on raw matrices to keep
    // the inner loop free of per-call validation.
    let objective = |theta: &[f64]| -> f64 {
        let u = unitary_from_params(&UnitaryParams::new(theta.to_vec()), dim)
            .expect("parameter vector has the right length");
        let ua = u.adjoint();
        let mut worst: f64 = 0.0;
        for (input, source) in inputs.iter().zip(&task.sources) {
            let out = &u * input * &ua;
            let marg_s = state::reduce_matrix(&out, &dims3, &[0]);
            let marg_t = state::reduce_matrix(&out, &dims3, &[1]);
            worst = worst.max(
                linalg::trace_distance(&marg_s, source.matrix()).expect("same dimension"),
            );
            worst = worst.max(
                linalg::trace_distance(&marg_t, source.matrix()).expect("same dimension"),
            );
        }
        worst
    };

    let runs: Vec<(Vec<f64>, Vec<f64>, f64)> = inits
        .into_par_iter()
        .map(|init| pattern_search(&objective, init, cfg))
        .collect();

    let mut best_idx = 0;
    for (i, run) in runs.iter().enumerate() {
        if run.2 < runs[best_idx].2 {
            best_idx = i;
        }
    }
    let mut history = Vec::new();
    let mut running = f64::INFINITY;
    for run in &runs {
        for &v in &run.1 {
            running = running.min(v);
            history.push(running);
        }
    }
    let best = runs.into_iter().nth(best_idx).expect("restarts ≥ 1");
    Ok((UnitaryParams::new(best.0), history))
}

/// Relative-entropy certificate for a two-source task under a candidate
/// broadcaster.
///
/// `entropy_out` is the larger of the two marginal relative entropies, so
/// `gap = entropy_in − entropy_out` is the smaller marginal gap: the most
/// favorable reading for the candidate. Monotonicity keeps the gap ≥ 0 up to
/// numerical error, and a perfect broadcaster would need gap = 0 on both
/// marginals.
#[derive(Debug, Clone, Serialize)]
pub struct BroadcastCertificate {
    pub residuals: Vec<f64>,
    pub entropy_in: ExtendedNonNegative,
    pub entropy_out: ExtendedNonNegative,
    pub gap: f64,
}

impl BroadcastCertificate {
    /// Worst marginal deviation across sources.
    pub fn residual(&self) -> f64 {
        self.residuals.iter().fold(0.0, |a, &b| a.max(b))
    }
}

/// Evaluates the certificate for a task with exactly two sources whose
/// relative entropy is finite.
pub fn entropy_gap_certificate(task: &BroadcastTask, u: &CMatrix) -> Result<BroadcastCertificate> {
    if task.sources.len() != 2 {
        return Err(Error::BadDimension {
            reason: format!("certificate needs exactly two sources, got {}", task.sources.len()),
        });
    }
    let entropy_in_value =
        quantum_relative_entropy(&task.sources[0], &task.sources[1], None)?.expect_finite()?;

    let (_, s1_marg_s, s1_marg_t) = apply_broadcast(task, 0, u)?;
    let (_, s2_marg_s, s2_marg_t) = apply_broadcast(task, 1, u)?;

    let s_slot = quantum_relative_entropy(&s1_marg_s, &s2_marg_s, None)?.expect_finite()?;
    let t_slot = quantum_relative_entropy(&s1_marg_t, &s2_marg_t, None)?.expect_finite()?;
    let entropy_out_value = s_slot.max(t_slot);

    let residuals = (0..2)
        .map(|i| {
            let (_, marg_s, marg_t) = apply_broadcast(task, i, u)?;
            let source = &task.sources[i];
            let ds = state::trace_distance(&marg_s, source)?;
            let dt = state::trace_distance(&marg_t, source)?;
            Ok(ds.max(dt))
        })
        .collect::<Result<Vec<f64>>>()?;

    Ok(BroadcastCertificate {
        residuals,
        entropy_in: ExtendedNonNegative::Finite(entropy_in_value),
        entropy_out: ExtendedNonNegative::Finite(entropy_out_value),
        gap: entropy_in_value - entropy_out_value,
    })
}

/// λs₁ + (1−λ)s₂ together with S(s₁|mix), which is finite for λ in (0,1)
/// because the mixture's support contains the support of s₁. This replaces
/// an infinite-entropy source pair by a finite-entropy one.
pub fn mixture_reduction(
    s1: &DensityMatrix,
    s2: &DensityMatrix,
    lam: f64,
) -> Result<(DensityMatrix, ExtendedNonNegative)> {
    if !(lam > 0.0 && lam < 1.0) {
        return Err(Error::BadMixtureWeight { lambda: lam });
    }
    let mix = s1.mix(s2, lam)?;
    let s = quantum_relative_entropy(s1, &mix, None)?;
    Ok((mix, s))
}
