//! End-to-end acceptance gates, one test per criterion.
//!
//! Every test prints a single `[PASS]`/`[FAIL]` line with its measured
//! numbers. Passing lines are captured by the harness; run
//! `cargo test --test acceptance -- --nocapture --test-threads=1`
//! to see the full report in order.

use std::time::Instant;

use num_complex::Complex64;

use entrocast::broadcast::{
    broadcast_residual, classical_copier, entropy_gap_certificate, mixture_reduction,
    optimize_broadcaster, unitary_from_params, BroadcastTask, OptimizerConfig, UnitaryParams,
};
use entrocast::dynamics::{
    classical_kernel, correspondence_report, evolve_characteristic, forward_transform,
    harmonic_hamiltonian, kernel_deviation, quantum_kernel, rhs_norm_bound, EvolutionKernel,
    KernelPoint,
};
use entrocast::entropy::{
    equality_condition_residual, kl_divergence, monotonicity_gap, quantum_relative_entropy,
    tensoring_invariance_residual, unitary_invariance_residual, DiscreteDistribution,
    ExtendedNonNegative,
};
use entrocast::linalg::{self, CMatrix, CVector};
use entrocast::phase_space::{
    build_v_matrix, eigenvalue_multiset_distance, hbar_sweep, v_eigensystem, FockConfig, GridSpec,
    PhaseSpaceDistribution,
};
use entrocast::random::{haar_unitary, random_density, random_diagonal_density, seeded_rng};
use entrocast::state::{DensityMatrix, HermitianOperator};

const UNITARY_TOL: f64 = 1e-8;
const TENSORING_TOL: f64 = 1e-9;
const MONOTONICITY_FLOOR: f64 = -1e-8;
const PRODUCT_GAP_TOL: f64 = 1e-8;
const EQUALITY_RESIDUAL_TOL: f64 = 1e-9;
const ORACLE_TOL: f64 = 1e-9;
const COMMUTING_TOL: f64 = 1e-12;
const COPIER_RESIDUAL_TOL: f64 = 1e-10;
const COPIER_GAP_TOL: f64 = 1e-9;
const PROBE_RESIDUAL_FLOOR: f64 = 1e-3;
const NEAR_BROADCAST_RESIDUAL: f64 = 0.05;
const NEAR_CLOSED_GAP: f64 = 1e-3;
const MIXTURE_LN2_TOL: f64 = 1e-9;
const MOMENT_FINAL_REL: f64 = 0.05;
const V_TOL: f64 = 1e-10;
const V_N2_TOL: f64 = 1e-12;
const KERNEL_BAND_FACTOR: f64 = 3.0;
const KERNEL_SPOT_TOL: f64 = 1e-6;
const RETURN_TOL: f64 = 1e-4;
const ENTROPY_DRIFT_TOL: f64 = 1e-8;

fn verdict(number: u32, label: &str, pass: bool, detail: &str) {
    let tag = if pass { "[PASS]" } else { "[FAIL]" };
    eprintln!("{tag} criterion {number}: {label} ({detail})");
    assert!(pass, "criterion {number} failed: {label} ({detail})");
}

#[test]
fn criterion_01_entropy_invariance() {
    let start = Instant::now();
    let mut rng = seeded_rng(101);
    let mut worst_unitary = 0.0f64;
    let mut worst_tensoring = 0.0f64;
    for k in 0..1000 {
        let d = [2, 3, 4][k % 3];
        let r1 = random_density(&mut rng, &[d]);
        let r2 = random_density(&mut rng, &[d]);
        let u = haar_unitary(&mut rng, d);
        worst_unitary = worst_unitary.max(unitary_invariance_residual(&r1, &r2, &u).unwrap());
        let tau = random_density(&mut rng, &[2]);
        let sigma = random_density(&mut rng, &[2]);
        worst_tensoring =
            worst_tensoring.max(tensoring_invariance_residual(&r1, &r2, &tau, &sigma).unwrap());
    }
    let elapsed = start.elapsed().as_secs_f64();
    let pass = worst_unitary <= UNITARY_TOL && worst_tensoring <= TENSORING_TOL && elapsed < 30.0;
    verdict(
        1,
        "entropy invariance under unitaries and tensoring",
        pass,
        &format!(
            "worst unitary {worst_unitary:.2e} <= {UNITARY_TOL:.0e}, \
             worst tensoring {worst_tensoring:.2e} <= {TENSORING_TOL:.0e}, {elapsed:.1} s"
        ),
    );
}

#[test]
fn criterion_02_monotonicity_and_equality() {
    let start = Instant::now();
    let mut rng = seeded_rng(102);
    let mut worst_gap = f64::INFINITY;
    for k in 0..1000 {
        let dims: &[usize] = if k % 2 == 0 { &[2, 2] } else { &[2, 3] };
        let r1 = random_density(&mut rng, dims);
        let r2 = random_density(&mut rng, dims);
        worst_gap = worst_gap.min(monotonicity_gap(&r1, &r2, &[0]).unwrap());
    }
    let mut worst_product_gap = 0.0f64;
    let mut worst_equality = 0.0f64;
    for k in 0..200 {
        let d = [2, 3, 4][k % 3];
        let a = random_density(&mut rng, &[d]);
        let b = random_density(&mut rng, &[d]);
        let c = random_density(&mut rng, &[2]);
        let r1 = a.tensor(&c);
        let r2 = b.tensor(&c);
        worst_product_gap = worst_product_gap.max(monotonicity_gap(&r1, &r2, &[0]).unwrap().abs());
        worst_equality =
            worst_equality.max(equality_condition_residual(&r1, &r2, &[0], None).unwrap());
    }
    let elapsed = start.elapsed().as_secs_f64();
    let pass = worst_gap >= MONOTONICITY_FLOOR
        && worst_product_gap <= PRODUCT_GAP_TOL
        && worst_equality <= EQUALITY_RESIDUAL_TOL
        && elapsed < 60.0;
    verdict(
        2,
        "partial-trace monotonicity with product-extension equality",
        pass,
        &format!(
            "min gap {worst_gap:.2e} >= {MONOTONICITY_FLOOR:.0e}, \
             product gap {worst_product_gap:.2e}, equality residual {worst_equality:.2e}, \
             {elapsed:.1} s"
        ),
    );
}

/// Eigenbasis double sum: S = sum_i p_i ln p_i - sum_ij |<u_i|v_j>|^2 p_i ln q_j.
fn eigenbasis_oracle(r1: &DensityMatrix, r2: &DensityMatrix) -> f64 {
    let (p, u) = linalg::eigh(r1.matrix()).unwrap();
    let (q, v) = linalg::eigh(r2.matrix()).unwrap();
    let overlap = u.adjoint() * &v;
    let mut s = 0.0;
    for (i, &pi) in p.iter().enumerate() {
        if pi > 0.0 {
            s += pi * pi.ln();
        }
        for (j, &qj) in q.iter().enumerate() {
            if pi > 0.0 && qj > 0.0 {
                s -= overlap[(i, j)].norm_sqr() * pi * qj.ln();
            }
        }
    }
    s
}

#[test]
fn criterion_03_oracle_equivalence() {
    let mut rng = seeded_rng(103);
    let mut worst_oracle = 0.0f64;
    for k in 0..500 {
        let d = 2 + k % 5;
        let r1 = random_density(&mut rng, &[d]);
        let r2 = random_density(&mut rng, &[d]);
        let s = quantum_relative_entropy(&r1, &r2, None)
            .unwrap()
            .expect_finite()
            .unwrap();
        worst_oracle = worst_oracle.max((s - eigenbasis_oracle(&r1, &r2)).abs());
    }
    let mut worst_commuting = 0.0f64;
    for k in 0..200 {
        let d = 2 + k % 3;
        let r1 = random_diagonal_density(&mut rng, d);
        let r2 = random_diagonal_density(&mut rng, d);
        let diag = |r: &DensityMatrix| {
            DiscreteDistribution::new((0..d).map(|i| r.matrix()[(i, i)].re).collect()).unwrap()
        };
        let kl = kl_divergence(&diag(&r1), &diag(&r2))
            .unwrap()
            .expect_finite()
            .unwrap();
        let s = quantum_relative_entropy(&r1, &r2, None)
            .unwrap()
            .expect_finite()
            .unwrap();
        worst_commuting = worst_commuting.max((s - kl).abs());
    }
    let pass = worst_oracle <= ORACLE_TOL && worst_commuting <= COMMUTING_TOL;
    verdict(
        3,
        "relative entropy matches the eigenbasis and diagonal oracles",
        pass,
        &format!(
            "eigenbasis deviation {worst_oracle:.2e} <= {ORACLE_TOL:.0e}, \
             diagonal deviation {worst_commuting:.2e} <= {COMMUTING_TOL:.0e}"
        ),
    );
}

#[test]
fn criterion_04_classical_copier() {
    let mut rng = seeded_rng(104);
    let mut worst_residual = 0.0f64;
    let mut worst_gap = 0.0f64;
    for k in 0..50 {
        let d = if k % 2 == 0 { 2 } else { 3 };
        let sources = vec![
            random_diagonal_density(&mut rng, d),
            random_diagonal_density(&mut rng, d),
        ];
        let task = BroadcastTask::with_defaults(sources).unwrap();
        let u = classical_copier(d, d * d).unwrap();
        worst_residual = worst_residual.max(broadcast_residual(&task, &u).unwrap());
        let cert = entropy_gap_certificate(&task, &u).unwrap();
        worst_gap = worst_gap.max(cert.gap.abs());
    }
    let pass = worst_residual <= COPIER_RESIDUAL_TOL && worst_gap <= COPIER_GAP_TOL;
    verdict(
        4,
        "classical copier reproduces diagonal pairs with zero gap",
        pass,
        &format!(
            "worst residual {worst_residual:.2e} <= {COPIER_RESIDUAL_TOL:.0e}, \
             worst |gap| {worst_gap:.2e} <= {COPIER_GAP_TOL:.0e}"
        ),
    );
}

fn zero_plus_task() -> BroadcastTask {
    let zero = DensityMatrix::basis_state(2, 0).unwrap();
    let amp = Complex64::new(std::f64::consts::FRAC_1_SQRT_2, 0.0);
    let plus = DensityMatrix::from_pure(&CVector::from_element(2, amp), vec![2]).unwrap();
    BroadcastTask::with_defaults(vec![zero, plus]).unwrap()
}

/// Residual on the pure pair plus the entropy gap evaluated on the pair
/// (s1, even mixture), whose relative entropy is finite.
fn probe_gap(task: &BroadcastTask, reduced: &BroadcastTask, u: &CMatrix) -> (f64, f64) {
    let residual = broadcast_residual(task, u).unwrap();
    let cert = entropy_gap_certificate(reduced, u).unwrap();
    (residual, cert.gap)
}

#[test]
fn criterion_05_no_broadcast_probe() {
    let start = Instant::now();
    let task = zero_plus_task();
    let sources = task.sources();
    let (mix, _) = mixture_reduction(&sources[0], &sources[1], 0.5).unwrap();
    let reduced = BroadcastTask::with_defaults(vec![sources[0].clone(), mix]).unwrap();

    let cfg = OptimizerConfig {
        seed: 7,
        restarts: 20,
        max_sweeps: 20,
        ..OptimizerConfig::default()
    };
    let (params, history) = optimize_broadcaster(&task, &cfg).unwrap();
    let u = unitary_from_params(&params, task.total_dim()).unwrap();
    let floor = history.iter().fold(f64::INFINITY, |a, &b| a.min(b));
    let (best_residual, best_gap) = probe_gap(&task, &reduced, &u);

    // The minimizer sits in the region where residual <= 0.05 is possible;
    // sample its neighborhood for unitaries that pair a small residual with
    // a closed entropy gap.
    let mut rng = seeded_rng(105);
    let mut joint_violation = best_residual <= NEAR_BROADCAST_RESIDUAL
        && best_gap.abs() <= NEAR_CLOSED_GAP;
    let mut sampled = 1;
    let theta = params.theta().to_vec();
    for _ in 0..32 {
        let jitter: Vec<f64> = theta
            .iter()
            .map(|&t| t + rand::Rng::random_range(&mut rng, -0.2..0.2))
            .collect();
        let candidate =
            unitary_from_params(&UnitaryParams::new(jitter), task.total_dim()).unwrap();
        let (residual, gap) = probe_gap(&task, &reduced, &candidate);
        sampled += 1;
        if residual <= NEAR_BROADCAST_RESIDUAL && gap.abs() <= NEAR_CLOSED_GAP {
            joint_violation = true;
        }
    }
    let elapsed = start.elapsed().as_secs_f64();
    let pass = floor > PROBE_RESIDUAL_FLOOR && !joint_violation && elapsed < 300.0;
    verdict(
        5,
        "non-commuting pure pair resists broadcasting",
        pass,
        &format!(
            "optimized residual floor {floor:.3e} > {PROBE_RESIDUAL_FLOOR:.0e}, \
             best gap {best_gap:.3e}, no joint violation over {sampled} unitaries, {elapsed:.0} s"
        ),
    );
}

#[test]
fn criterion_06_infinite_entropy_mixture() {
    let zero = DensityMatrix::basis_state(2, 0).unwrap();
    let one = DensityMatrix::basis_state(2, 1).unwrap();
    let (_, s) = mixture_reduction(&zero, &one, 0.5).unwrap();
    let ln2_error = (s.expect_finite().unwrap() - std::f64::consts::LN_2).abs();

    let mut rng = seeded_rng(106);
    let mut all_finite = true;
    for _ in 0..100 {
        let a = random_density(&mut rng, &[2]);
        let b = random_density(&mut rng, &[2]);
        let u = haar_unitary(&mut rng, 4);
        let mut top = CMatrix::zeros(4, 4);
        let mut bottom = CMatrix::zeros(4, 4);
        for i in 0..2 {
            for j in 0..2 {
                top[(i, j)] = a.matrix()[(i, j)];
                bottom[(i + 2, j + 2)] = b.matrix()[(i, j)];
            }
        }
        let s1 = DensityMatrix::new(&u * top * u.adjoint(), vec![4]).unwrap();
        let s2 = DensityMatrix::new(&u * bottom * u.adjoint(), vec![4]).unwrap();
        debug_assert!(matches!(
            quantum_relative_entropy(&s1, &s2, None).unwrap(),
            ExtendedNonNegative::Infinite
        ));
        for lam in [0.1, 0.5, 0.9] {
            let (_, s) = mixture_reduction(&s1, &s2, lam).unwrap();
            all_finite &= s.finite().is_some();
        }
    }
    let pass = ln2_error <= MIXTURE_LN2_TOL && all_finite;
    verdict(
        6,
        "mixture reduction makes orthogonal-support entropies finite",
        pass,
        &format!(
            "|S - ln 2| = {ln2_error:.2e} <= {MIXTURE_LN2_TOL:.0e}, \
             finite on all 100 orthogonal-support pairs"
        ),
    );
}

#[test]
fn criterion_07_moment_limit() {
    let start = Instant::now();
    let grid = GridSpec::symmetric(5.0, 129).unwrap();
    let p1 = PhaseSpaceDistribution::gaussian(grid.clone(), 0.0, 0.0, 1.0, 1.0).unwrap();
    let p2 = PhaseSpaceDistribution::gaussian(grid, 0.0, 0.0, 1.0, 1.0).unwrap();
    let schedule = [1.0, 0.5, 0.25, 0.125];
    let template = FockConfig::new(2, 1.0).unwrap();

    let rows2 = hbar_sweep(&p1, &p2, 2, &schedule, &template).unwrap();
    let limit = 1.0 / (4.0 * std::f64::consts::PI);
    let limit_error = (rows2.last().unwrap().quantum - limit).abs() / limit;
    let monotone2 = rows2.windows(2).all(|w| w[1].rel_error < w[0].rel_error);
    let final_rel = rows2.last().unwrap().rel_error;

    let rows3 = hbar_sweep(&p1, &p2, 3, &schedule, &template).unwrap();
    let monotone3 = rows3.windows(2).all(|w| w[1].rel_error < w[0].rel_error);

    let elapsed = start.elapsed().as_secs_f64();
    // The n=2 relative error for identical unit Gaussians is exactly
    // hbar/(hbar + 2), so the schedule ends at 1/17 = 5.88%: the 5% demand
    // is not attainable at hbar = 0.125 and this check records that fact.
    let pass = monotone2
        && monotone3
        && final_rel <= MOMENT_FINAL_REL
        && limit_error <= MOMENT_FINAL_REL + 0.01
        && elapsed < 120.0;
    verdict(
        7,
        "moment sweeps converge toward the classical value",
        pass,
        &format!(
            "n=2 monotone {monotone2}, n=3 monotone {monotone3}, \
             final rel error {final_rel:.4} vs {MOMENT_FINAL_REL} allowed, {elapsed:.0} s"
        ),
    );
}

#[test]
fn criterion_08_v_matrix_eigensystem() {
    let mut worst_residual = 0.0f64;
    let mut worst_distance = 0.0f64;
    let mut zero_counts_ok = true;
    let mut n2_error = 0.0f64;
    for n in 2..=8 {
        let v = build_v_matrix(n).unwrap();
        let sys = v_eigensystem(&v).unwrap();
        for col in 0..v.dim() {
            let e = sys.vectors().column(col);
            let r = (v.matrix() * e - e * sys.eigenvalues()[col]).norm();
            worst_residual = worst_residual.max(r);
        }
        let numeric = v.numerical_eigenvalues().unwrap();
        worst_distance = worst_distance
            .max(eigenvalue_multiset_distance(sys.eigenvalues(), &numeric).unwrap());
        zero_counts_ok &= sys.zero_eigenvalue_count() == 2;
        if n == 2 {
            for mu in sys.eigenvalues() {
                if mu.norm() > V_TOL {
                    n2_error = n2_error.max((mu - Complex64::new(2.0, 0.0)).norm());
                }
            }
        }
    }
    let pass = worst_residual <= V_TOL
        && worst_distance <= V_TOL
        && zero_counts_ok
        && n2_error <= V_N2_TOL;
    verdict(
        8,
        "moment-matrix eigensystem matches its closed form",
        pass,
        &format!(
            "eigenpair residual {worst_residual:.2e} <= {V_TOL:.0e}, \
             multiset distance {worst_distance:.2e}, two zero modes per size, \
             n=2 nonzero error {n2_error:.2e} <= {V_N2_TOL:.0e}"
        ),
    );
}

#[test]
fn criterion_09_kernel_limit() {
    let schedule = [0.2, 0.1, 0.05, 0.025];
    let mut ratios = Vec::new();
    for &hbar in &schedule {
        let dev = kernel_deviation([-2.0; 4], [2.0; 4], hbar, 10_000).unwrap();
        ratios.push(dev / hbar);
    }
    let max_ratio = ratios.iter().fold(0.0f64, |a, &b| a.max(b));
    let min_ratio = ratios.iter().fold(f64::INFINITY, |a, &b| a.min(b));
    let band_ok = max_ratio <= KERNEL_BAND_FACTOR * min_ratio;

    let point = KernelPoint::new(1.0, 0.0, 0.0, 1.0, 0.1).unwrap();
    let deviation = quantum_kernel(&point) - classical_kernel(&point);
    let formula = 20.0 * (-0.05f64).exp() * (-0.05f64).sin() + 1.0;
    let spot_error = (deviation - formula).abs();
    let pass = band_ok && spot_error <= KERNEL_SPOT_TOL;
    verdict(
        9,
        "kernel deviation shrinks linearly and hits its closed form",
        pass,
        &format!(
            "deviation/hbar in [{min_ratio:.3}, {max_ratio:.3}] within factor \
             {KERNEL_BAND_FACTOR}, spot error {spot_error:.2e} <= {KERNEL_SPOT_TOL:.0e}"
        ),
    );
}

#[test]
fn criterion_10_dynamics_correspondence() {
    let start = Instant::now();

    // Quantum-vs-classical first moments over a quarter period.
    let space = GridSpec::symmetric(3.2, 49).unwrap();
    let freq = GridSpec::symmetric(9.0, 31).unwrap();
    let p0 = PhaseSpaceDistribution::gaussian(space, 0.55, 0.55, 0.6, 0.6).unwrap();
    let h = harmonic_hamiltonian(&freq, 1.0).unwrap();
    let schedule = [0.2, 0.1, 0.05];
    let rows =
        correspondence_report(&p0, &h, &schedule, std::f64::consts::FRAC_PI_2).unwrap();
    let monotone = rows
        .windows(2)
        .all(|w| w[1].dx_mean < w[0].dx_mean && w[1].dp_mean < w[0].dp_mean);

    // One full period of classical evolution must return the initial state.
    let fine_freq = GridSpec::symmetric(8.8, 177).unwrap();
    let fine_space = GridSpec::symmetric(3.0, 41).unwrap();
    let q0 = PhaseSpaceDistribution::gaussian(fine_space, 0.6, 0.0, 0.6, 0.6).unwrap();
    let h_fine = harmonic_hamiltonian(&fine_freq, 1.0).unwrap();
    let cf0 = forward_transform(&q0, &fine_freq);
    let period = 2.0 * std::f64::consts::PI;
    let bound = rhs_norm_bound(&h_fine, EvolutionKernel::Classical).unwrap();
    let steps = ((period * bound / 2.5).ceil() as usize).max(16);
    let cf_t =
        evolve_characteristic(&cf0, &h_fine, EvolutionKernel::Classical, period / steps as f64, steps)
            .unwrap();
    let mut peak = 0.0f64;
    let mut return_dev = 0.0f64;
    for (a, b) in cf0.values().iter().zip(cf_t.values()) {
        peak = peak.max(a.norm());
        return_dev = return_dev.max((a - b).norm());
    }
    let return_rel = return_dev / peak;

    // Unitary evolution must leave the relative entropy of a pair unchanged.
    let mut rng = seeded_rng(110);
    let dim = 24;
    let gen = entrocast::random::ginibre(&mut rng, dim, dim);
    let hop =
        HermitianOperator::new(linalg::symmetrize(&gen), vec![dim], 1e-8).unwrap();
    let r1 = random_density(&mut rng, &[dim]);
    let r2 = random_density(&mut rng, &[dim]);
    let s0 = quantum_relative_entropy(&r1, &r2, None)
        .unwrap()
        .expect_finite()
        .unwrap();
    let r1t = entrocast::dynamics::von_neumann_evolve(&r1, &hop, 0.5, 0.7, 1).unwrap();
    let r2t = entrocast::dynamics::von_neumann_evolve(&r2, &hop, 0.5, 0.7, 1).unwrap();
    let st = quantum_relative_entropy(&r1t, &r2t, None)
        .unwrap()
        .expect_finite()
        .unwrap();
    let drift = (st - s0).abs();

    let elapsed = start.elapsed().as_secs_f64();
    let pass = monotone && return_rel <= RETURN_TOL && drift <= ENTROPY_DRIFT_TOL;
    verdict(
        10,
        "evolution approaches the classical flow as hbar shrinks",
        pass,
        &format!(
            "first-moment deviations monotone {monotone} \
             (dx {:.2e}/{:.2e}/{:.2e}), full-period return {return_rel:.2e} <= \
             {RETURN_TOL:.0e}, entropy drift {drift:.2e} <= {ENTROPY_DRIFT_TOL:.0e}, \
             {elapsed:.0} s",
            rows[0].dx_mean, rows[1].dx_mean, rows[2].dx_mean
        ),
    );
}
