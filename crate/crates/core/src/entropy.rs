//! Relative entropy in its extended-value form, the classical
//! Kullback-Leibler divergence, and the invariance, monotonicity, and
//! equality-condition diagnostics built on top of it.
//!
//! All logarithms are natural. Relative entropy S(ρ₁|ρ₂) is evaluated on the
//! support of ρ₂ and classified as infinite when the support of ρ₁ leaks out
//! of the support of ρ₂ by more than the numerical inclusion threshold.

use std::fmt;

use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::linalg::CMatrix;
use crate::phase_space::PhaseSpaceDistribution;
use crate::state::{self, DensityMatrix};
use crate::tol;

/// A relative-entropy value: a finite non-negative real or +∞.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ExtendedNonNegative {
    Finite(f64),
    Infinite,
}

impl ExtendedNonNegative {
    /// Classifies a raw computed value. Values in [-1e-9, 0) are rounding
    /// debris below the clamp tolerance and collapse to zero; anything more
    /// negative (or non-finite) signals an internal inconsistency, since the
    /// quantities stored here are non-negative by Klein's inequality.
    pub fn from_raw(value: f64) -> Result<Self> {
        if !value.is_finite() {
            return Err(Error::NegativeEntropy { value });
        }
        if value >= 0.0 {
            Ok(Self::Finite(value))
        } else if value >= -tol::ENTROPY_NEG_CLAMP {
            Ok(Self::Finite(0.0))
        } else {
            Err(Error::NegativeEntropy { value })
        }
    }

    pub fn is_finite(self) -> bool {
        matches!(self, Self::Finite(_))
    }

    /// Finite value, or `None` for +∞.
    pub fn finite(self) -> Option<f64> {
        match self {
            Self::Finite(v) => Some(v),
            Self::Infinite => None,
        }
    }

    /// Finite value, or an `InfiniteEntropy` error for +∞.
    pub fn expect_finite(self) -> Result<f64> {
        self.finite().ok_or(Error::InfiniteEntropy)
    }
}

impl fmt::Display for ExtendedNonNegative {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::Finite(v) => write!(f, "{v}"),
            Self::Infinite => write!(f, "inf"),
        }
    }
}

impl Serialize for ExtendedNonNegative {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            Self::Finite(v) => serializer.serialize_f64(*v),
            Self::Infinite => serializer.serialize_str("inf"),
        }
    }
}

/// Probability vector: non-negative entries summing to one.
#[derive(Debug, Clone, PartialEq)]
pub struct DiscreteDistribution {
    p: Vec<f64>,
}

impl DiscreteDistribution {
    pub fn new(p: Vec<f64>) -> Result<Self> {
        if p.is_empty() {
            return Err(Error::BadDimension {
                reason: "distribution needs at least one entry".into(),
            });
        }
        if let Some((i, &v)) = p.iter().enumerate().find(|&(_, &v)| v < 0.0) {
            return Err(Error::NegativeProbability { index: i, value: v });
        }
        let sum: f64 = p.iter().sum();
        if (sum - 1.0).abs() > tol::VALIDATION {
            return Err(Error::NotNormalized { sum });
        }
        Ok(Self { p })
    }

    pub fn uniform(n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::BadDimension {
                reason: "distribution needs at least one entry".into(),
            });
        }
        Ok(Self {
            p: vec![1.0 / n as f64; n],
        })
    }

    pub fn probabilities(&self) -> &[f64] {
        &self.p
    }

    pub fn len(&self) -> usize {
        self.p.len()
    }

    pub fn is_empty(&self) -> bool {
        self.p.is_empty()
    }
}

/// Σ pᵢ ln(pᵢ/qᵢ) with the 0·ln 0 = 0 convention; +∞ when some pᵢ > 0 sits
/// on qᵢ = 0.
pub fn kl_divergence(
    p: &DiscreteDistribution,
    q: &DiscreteDistribution,
) -> Result<ExtendedNonNegative> {
    if p.len() != q.len() {
        return Err(Error::LengthMismatch {
            left: p.len(),
            right: q.len(),
        });
    }
    let mut acc = 0.0;
    for (&pi, &qi) in p.probabilities().iter().zip(q.probabilities()) {
        if pi > 0.0 {
            if qi <= 0.0 {
                return Ok(ExtendedNonNegative::Infinite);
            }
            acc += pi * (pi.ln() - qi.ln());
        }
    }
    ExtendedNonNegative::from_raw(acc)
}

/// Kullback-Leibler divergence `integral p1 ln(p1/p2) dx dp` between two
/// densities on the same phase-space grid, by trapezoid quadrature. Nodes
/// where `p1` vanishes contribute nothing; a node with `p1 > 0` and
/// `p2 = 0` makes the divergence infinite.
pub fn kl_divergence_grid(
    p1: &PhaseSpaceDistribution,
    p2: &PhaseSpaceDistribution,
) -> Result<ExtendedNonNegative> {
    if p1.grid() != p2.grid() {
        return Err(Error::GridMismatch);
    }
    let grid = p1.grid();
    let mut acc = 0.0;
    for i in 0..grid.nx() {
        for j in 0..grid.np() {
            let a = p1.value(i, j);
            if a > 0.0 {
                let b = p2.value(i, j);
                if b <= 0.0 {
                    return Ok(ExtendedNonNegative::Infinite);
                }
                acc += grid.weight(i, j) * a * (a.ln() - b.ln());
            }
        }
    }
    ExtendedNonNegative::from_raw(acc)
}

/// S(ρ₁|ρ₂) = Tr[ρ₁(ln ρ₁ − ln ρ₂)] evaluated on the support of ρ₂.
///
/// `cutoff` is an absolute support threshold applied to both states; `None`
/// selects the relative default for each state. The inclusion test
/// ‖(1 − Π₂)Π₁‖_F ≤ √cutoff uses the larger of the two effective cutoffs;
/// failure classifies the value as +∞.
pub fn quantum_relative_entropy(
    r1: &DensityMatrix,
    r2: &DensityMatrix,
    cutoff: Option<f64>,
) -> Result<ExtendedNonNegative> {
    if r1.dim() != r2.dim() {
        return Err(Error::DimensionMismatch {
            left: r1.dim(),
            right: r2.dim(),
        });
    }
    let sd1 = r1.support_decompose(cutoff)?;
    let sd2 = r2.support_decompose(cutoff)?;
    let threshold = sd1.cutoff().max(sd2.cutoff());
    if sd1.inclusion_defect_sq(&sd2) > threshold {
        return Ok(ExtendedNonNegative::Infinite);
    }
    let mut value = 0.0;
    for &lam in &sd1.eigenvalues()[..sd1.rank()] {
        value += lam * lam.ln();
    }
    let log2 = sd2.log_matrix();
    value -= (r1.matrix() * &log2).trace().re;
    ExtendedNonNegative::from_raw(value)
}

/// |S(s₁⊗τ⊗Σ | s₂⊗τ⊗Σ) − S(s₁|s₂)|. Appending the same ancilla states to
/// both arguments leaves relative entropy unchanged; this measures how well
/// the identity holds numerically.
pub fn tensoring_invariance_residual(
    s1: &DensityMatrix,
    s2: &DensityMatrix,
    tau: &DensityMatrix,
    sigma: &DensityMatrix,
) -> Result<f64> {
    let base = quantum_relative_entropy(s1, s2, None)?.expect_finite()?;
    let j1 = s1.tensor(tau).tensor(sigma);
    let j2 = s2.tensor(tau).tensor(sigma);
    let joint = quantum_relative_entropy(&j1, &j2, None)?.expect_finite()?;
    Ok((joint - base).abs())
}

/// |S(uρ₁u† | uρ₂u†) − S(ρ₁|ρ₂)| for a unitary u.
pub fn unitary_invariance_residual(
    r1: &DensityMatrix,
    r2: &DensityMatrix,
    u: &CMatrix,
) -> Result<f64> {
    let base = quantum_relative_entropy(r1, r2, None)?.expect_finite()?;
    let c1 = r1.conjugate_by(u)?;
    let c2 = r2.conjugate_by(u)?;
    let rotated = quantum_relative_entropy(&c1, &c2, None)?.expect_finite()?;
    Ok((rotated - base).abs())
}

/// S(ρ₁|ρ₂) − S(Tr_rest ρ₁ | Tr_rest ρ₂): non-negative by the
/// data-processing inequality, up to numerical error.
pub fn monotonicity_gap(r1: &DensityMatrix, r2: &DensityMatrix, keep: &[usize]) -> Result<f64> {
    let joint = quantum_relative_entropy(r1, r2, None)?.expect_finite()?;
    let m1 = r1.partial_trace(keep)?;
    let m2 = r2.partial_trace(keep)?;
    let reduced = quantum_relative_entropy(&m1, &m2, None)?.expect_finite()?;
    Ok(joint - reduced)
}

/// Frobenius norm, restricted to the support of ρ₂, of
/// ln ρ₁ − ln ρ₂ − embed(ln ρ₁_B − ln ρ₂_B) where B is the kept subsystem
/// set. Vanishing of this residual is the equality condition for the
/// monotonicity gap.
pub fn equality_condition_residual(
    r1: &DensityMatrix,
    r2: &DensityMatrix,
    keep: &[usize],
    cutoff: Option<f64>,
) -> Result<f64> {
    if r1.dim() != r2.dim() {
        return Err(Error::DimensionMismatch {
            left: r1.dim(),
            right: r2.dim(),
        });
    }
    let sd1 = r1.support_decompose(cutoff)?;
    let sd2 = r2.support_decompose(cutoff)?;
    if sd1.inclusion_defect_sq(&sd2) > sd1.cutoff().max(sd2.cutoff()) {
        return Err(Error::InfiniteEntropy);
    }
    let m1 = r1.partial_trace(keep)?;
    let m2 = r2.partial_trace(keep)?;
    let reduced = m1.log_on_support(cutoff)?.matrix() - m2.log_on_support(cutoff)?.matrix();
    let embedded = state::embed_operator(&reduced, r1.dims(), keep)?;
    let diff = sd1.log_matrix() - sd2.log_matrix() - embedded;
    let proj = sd2.support_projector();
    let restricted = &proj * diff * &proj;
    Ok(restricted.norm())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg;
    use crate::random;
    use approx::assert_relative_eq;
    use num_complex::Complex64;
    use proptest::prelude::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn plus_state() -> DensityMatrix {
        let h = 0.5;
        let m = CMatrix::from_row_slice(2, 2, &[c(h, 0.0), c(h, 0.0), c(h, 0.0), c(h, 0.0)]);
        DensityMatrix::new(m, vec![2]).unwrap()
    }

    /// Independent route to S(ρ₁|ρ₂): eigendecompose both states and sum
    /// Σᵢⱼ |⟨uᵢ|vⱼ⟩|² pᵢ (ln pᵢ − ln qⱼ) over the supports.
    fn double_sum_oracle(r1: &DensityMatrix, r2: &DensityMatrix) -> f64 {
        let (p, u) = linalg::eigh(r1.matrix()).unwrap();
        let (q, v) = linalg::eigh(r2.matrix()).unwrap();
        let mut acc = 0.0;
        for i in 0..p.len() {
            if p[i] <= 1e-12 {
                continue;
            }
            for j in 0..q.len() {
                if q[j] <= 1e-12 {
                    continue;
                }
                let ov = u.column(i).dotc(&v.column(j)).norm_sqr();
                acc += ov * p[i] * (p[i].ln() - q[j].ln());
            }
        }
        acc
    }

    #[test]
    fn extended_value_clamps_rounding_negatives() {
        assert_eq!(
            ExtendedNonNegative::from_raw(-5e-10).unwrap(),
            ExtendedNonNegative::Finite(0.0)
        );
        assert_eq!(
            ExtendedNonNegative::from_raw(1.5).unwrap(),
            ExtendedNonNegative::Finite(1.5)
        );
        assert!(matches!(
            ExtendedNonNegative::from_raw(-1e-8),
            Err(Error::NegativeEntropy { .. })
        ));
        assert!(matches!(
            ExtendedNonNegative::from_raw(f64::NAN),
            Err(Error::NegativeEntropy { .. })
        ));
    }

    #[test]
    fn distribution_validation() {
        assert!(DiscreteDistribution::new(vec![0.5, 0.5]).is_ok());
        assert!(matches!(
            DiscreteDistribution::new(vec![0.5, -0.1, 0.6]),
            Err(Error::NegativeProbability { index: 1, .. })
        ));
        assert!(matches!(
            DiscreteDistribution::new(vec![0.6, 0.6]),
            Err(Error::NotNormalized { .. })
        ));
        let u = DiscreteDistribution::uniform(4).unwrap();
        assert_eq!(u.probabilities(), &[0.25; 4]);
    }

    #[test]
    fn kl_frozen_values() {
        let p = DiscreteDistribution::new(vec![0.5, 0.5]).unwrap();
        let q = DiscreteDistribution::new(vec![0.25, 0.75]).unwrap();
        let expected = 0.5 * 2.0f64.ln() + 0.5 * (2.0f64 / 3.0).ln();
        assert_relative_eq!(
            kl_divergence(&p, &q).unwrap().finite().unwrap(),
            expected,
            epsilon = 1e-15
        );

        let r = DiscreteDistribution::new(vec![0.75, 0.25]).unwrap();
        let s = DiscreteDistribution::uniform(2).unwrap();
        assert_relative_eq!(
            kl_divergence(&r, &s).unwrap().finite().unwrap(),
            0.75 * 1.5f64.ln() + 0.25 * 0.5f64.ln(),
            epsilon = 1e-15
        );

        assert_eq!(
            kl_divergence(&p, &p).unwrap(),
            ExtendedNonNegative::Finite(0.0)
        );

        let point0 = DiscreteDistribution::new(vec![1.0, 0.0]).unwrap();
        let point1 = DiscreteDistribution::new(vec![0.0, 1.0]).unwrap();
        assert_eq!(
            kl_divergence(&point0, &point1).unwrap(),
            ExtendedNonNegative::Infinite
        );
    }

    #[test]
    fn kl_length_mismatch() {
        let p = DiscreteDistribution::uniform(2).unwrap();
        let q = DiscreteDistribution::uniform(3).unwrap();
        assert!(matches!(
            kl_divergence(&p, &q),
            Err(Error::LengthMismatch { left: 2, right: 3 })
        ));
    }

    // Isotropic gaussian oracle: KL = s1^2/s2^2 - 1 + d^2/(2 s2^2) + ln(s2^2/s1^2)
    // for unit-weight densities with center distance d and per-axis widths s1, s2.
    #[test]
    fn grid_kl_matches_gaussian_oracles() {
        use crate::phase_space::GridSpec;
        let grid = GridSpec::symmetric(6.0, 65).unwrap();

        let base =
            PhaseSpaceDistribution::gaussian(grid.clone(), 0.0, 0.0, 1.0, 1.0).unwrap();
        assert_relative_eq!(
            kl_divergence_grid(&base, &base).unwrap().finite().unwrap(),
            0.0,
            epsilon = 1e-15
        );

        let shifted =
            PhaseSpaceDistribution::gaussian(grid.clone(), 0.75, 0.0, 1.0, 1.0).unwrap();
        let other =
            PhaseSpaceDistribution::gaussian(grid.clone(), -0.75, 0.0, 1.0, 1.0).unwrap();
        let d2 = 1.5f64.powi(2);
        assert_relative_eq!(
            kl_divergence_grid(&shifted, &other)
                .unwrap()
                .finite()
                .unwrap(),
            d2 / 2.0,
            epsilon = 1e-3
        );

        let narrow = PhaseSpaceDistribution::gaussian(grid, 0.0, 0.0, 0.5, 0.5).unwrap();
        let expected = 0.25 - 1.0 + (1.0f64 / 0.25).ln();
        assert_relative_eq!(
            kl_divergence_grid(&narrow, &base)
                .unwrap()
                .finite()
                .unwrap(),
            expected,
            epsilon = 1e-4
        );
    }

    #[test]
    fn grid_kl_handles_support_leaks_and_grid_mismatch() {
        use crate::phase_space::GridSpec;
        let grid = GridSpec::symmetric(1.0, 5).unwrap();
        let node = grid.node_count();
        let w = grid.weight(2, 2);
        let mut values = vec![0.0; node];
        values[2 * 5 + 2] = 1.0 / w;
        let point = PhaseSpaceDistribution::new(grid.clone(), values).unwrap();
        let mut other_values = vec![0.0; node];
        other_values[2 * 5 + 1] = 1.0 / grid.weight(2, 1);
        let elsewhere = PhaseSpaceDistribution::new(grid.clone(), other_values).unwrap();
        assert_eq!(
            kl_divergence_grid(&point, &elsewhere).unwrap(),
            ExtendedNonNegative::Infinite
        );

        let fine = PhaseSpaceDistribution::gaussian(
            GridSpec::symmetric(1.0, 9).unwrap(),
            0.0,
            0.0,
            0.3,
            0.3,
        )
        .unwrap();
        let coarse =
            PhaseSpaceDistribution::gaussian(GridSpec::symmetric(1.0, 5).unwrap(), 0.0, 0.0, 0.3, 0.3)
                .unwrap();
        assert!(matches!(
            kl_divergence_grid(&fine, &coarse),
            Err(Error::GridMismatch)
        ));
    }

    #[test]
    fn relent_of_state_with_itself_is_zero() {
        let mut rng = random::seeded_rng(21);
        let rho = random::random_density(&mut rng, &[3]);
        let s = quantum_relative_entropy(&rho, &rho, None).unwrap();
        assert!(s.finite().unwrap() < 1e-12);
    }

    #[test]
    fn relent_pure_versus_maximally_mixed() {
        let zero = DensityMatrix::basis_state(2, 0).unwrap();
        let mixed = DensityMatrix::maximally_mixed(2).unwrap();
        let s = quantum_relative_entropy(&zero, &mixed, None).unwrap();
        assert_relative_eq!(s.finite().unwrap(), 2.0f64.ln(), epsilon = 1e-12);
    }

    #[test]
    fn relent_disjoint_and_tilted_supports_are_infinite() {
        let zero = DensityMatrix::basis_state(2, 0).unwrap();
        let one = DensityMatrix::basis_state(2, 1).unwrap();
        assert_eq!(
            quantum_relative_entropy(&zero, &one, None).unwrap(),
            ExtendedNonNegative::Infinite
        );
        assert_eq!(
            quantum_relative_entropy(&zero, &plus_state(), None).unwrap(),
            ExtendedNonNegative::Infinite
        );
    }

    #[test]
    fn relent_matches_double_sum_oracle() {
        let mut rng = random::seeded_rng(42);
        for dims in [vec![3usize], vec![4], vec![2, 3]] {
            for _ in 0..10 {
                let r1 = random::random_density(&mut rng, &dims);
                let r2 = random::random_density(&mut rng, &dims);
                let got = quantum_relative_entropy(&r1, &r2, None)
                    .unwrap()
                    .finite()
                    .unwrap();
                assert_relative_eq!(got, double_sum_oracle(&r1, &r2), epsilon = 1e-10);
            }
        }
    }

    #[test]
    fn relent_on_commuting_diagonals_equals_kl() {
        let mut rng = random::seeded_rng(7);
        for _ in 0..20 {
            let a = random::random_diagonal_density(&mut rng, 3);
            let b = random::random_diagonal_density(&mut rng, 3);
            let pa: Vec<f64> = (0..3).map(|i| a.matrix()[(i, i)].re).collect();
            let pb: Vec<f64> = (0..3).map(|i| b.matrix()[(i, i)].re).collect();
            let kl = kl_divergence(
                &DiscreteDistribution::new(pa).unwrap(),
                &DiscreteDistribution::new(pb).unwrap(),
            )
            .unwrap()
            .finite()
            .unwrap();
            let qre = quantum_relative_entropy(&a, &b, None)
                .unwrap()
                .finite()
                .unwrap();
            assert!((kl - qre).abs() < 1e-12);
        }
    }

    #[test]
    fn tensoring_leaves_relative_entropy_unchanged() {
        let mut rng = random::seeded_rng(13);
        let s1 = random::random_density(&mut rng, &[2]);
        let s2 = random::random_density(&mut rng, &[2]);
        let ground = DensityMatrix::basis_state(2, 0).unwrap();
        let mixed = DensityMatrix::maximally_mixed(2).unwrap();
        assert!(tensoring_invariance_residual(&s1, &s2, &ground, &ground).unwrap() < 1e-9);
        assert!(tensoring_invariance_residual(&s1, &s2, &mixed, &mixed).unwrap() < 1e-9);
    }

    #[test]
    fn unitary_conjugation_leaves_relative_entropy_unchanged() {
        let mut rng = random::seeded_rng(17);
        let r1 = random::random_density(&mut rng, &[4]);
        let r2 = random::random_density(&mut rng, &[4]);
        let u = random::haar_unitary(&mut rng, 4);
        assert!(unitary_invariance_residual(&r1, &r2, &u).unwrap() < 1e-8);
        let id = linalg::identity(4);
        assert!(unitary_invariance_residual(&r1, &r2, &id).unwrap() < 1e-13);
    }

    #[test]
    fn unitary_invariance_rejects_non_unitary() {
        let mut rng = random::seeded_rng(19);
        let r1 = random::random_density(&mut rng, &[2]);
        let r2 = random::random_density(&mut rng, &[2]);
        let mut m = linalg::identity(2);
        m[(0, 0)] = c(0.5, 0.0);
        assert!(matches!(
            unitary_invariance_residual(&r1, &r2, &m),
            Err(Error::NotUnitary { .. })
        ));
    }

    #[test]
    fn monotonicity_gap_for_bell_versus_maximally_mixed() {
        // S(bell | 1/4) = ln 4 (pure numerator state), marginals are both
        // 1/2 so the reduced relative entropy vanishes; gap = 2 ln 2.
        let amp = std::f64::consts::FRAC_1_SQRT_2;
        let v = crate::linalg::CVector::from_vec(vec![
            c(amp, 0.0),
            c(0.0, 0.0),
            c(0.0, 0.0),
            c(amp, 0.0),
        ]);
        let bell = DensityMatrix::from_pure(&v, vec![2, 2]).unwrap();
        let mixed = DensityMatrix::maximally_mixed(4).unwrap().reshaped(vec![2, 2]).unwrap();
        let gap = monotonicity_gap(&bell, &mixed, &[0]).unwrap();
        assert_relative_eq!(gap, 2.0 * 2.0f64.ln(), epsilon = 1e-10);
        assert!(equality_condition_residual(&bell, &mixed, &[0], None).unwrap() > 0.1);
    }

    #[test]
    fn monotonicity_gap_vanishes_for_product_extensions() {
        let mut rng = random::seeded_rng(29);
        for _ in 0..5 {
            let a1 = random::random_density(&mut rng, &[2]);
            let a2 = random::random_density(&mut rng, &[2]);
            let b = random::random_density(&mut rng, &[3]);
            let r1 = a1.tensor(&b);
            let r2 = a2.tensor(&b);
            let gap = monotonicity_gap(&r1, &r2, &[0]).unwrap();
            assert!(gap.abs() < 1e-9, "gap = {gap}");
            let resid = equality_condition_residual(&r1, &r2, &[0], None).unwrap();
            assert!(resid < 1e-9, "residual = {resid}");
        }
    }

    #[test]
    fn equality_condition_residual_infinite_pair_errors() {
        let zero = DensityMatrix::basis_state(2, 0).unwrap();
        let one = DensityMatrix::basis_state(2, 1).unwrap();
        let r1 = zero.tensor(&zero);
        let r2 = one.tensor(&zero);
        assert!(matches!(
            equality_condition_residual(&r1, &r2, &[0], None),
            Err(Error::InfiniteEntropy)
        ));
    }

    #[test]
    fn serializes_as_number_or_inf() {
        let fin = serde_json::to_string(&ExtendedNonNegative::Finite(0.25)).unwrap();
        assert_eq!(fin, "0.25");
        let inf = serde_json::to_string(&ExtendedNonNegative::Infinite).unwrap();
        assert_eq!(inf, "\"inf\"");
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(24))]

        #[test]
        fn klein_non_negativity(seed in 0u64..1_000_000, dim in 2usize..6) {
            let mut rng = random::seeded_rng(seed);
            let r1 = random::random_density(&mut rng, &[dim]);
            let r2 = random::random_density(&mut rng, &[dim]);
            let s = quantum_relative_entropy(&r1, &r2, None).unwrap();
            prop_assert!(s.finite().unwrap() >= 0.0);
        }

        #[test]
        fn partial_trace_never_increases_relative_entropy(seed in 0u64..1_000_000) {
            let mut rng = random::seeded_rng(seed);
            let r1 = random::random_density(&mut rng, &[2, 2]);
            let r2 = random::random_density(&mut rng, &[2, 2]);
            let gap = monotonicity_gap(&r1, &r2, &[1]).unwrap();
            prop_assert!(gap >= -1e-8);
        }
    }
}
