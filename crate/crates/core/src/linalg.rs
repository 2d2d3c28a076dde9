//! Dense complex linear-algebra helpers shared across the crate.
//!
//! All Hermitian eigenproblems go through [`eigh`], which sorts eigenvalues in
//! non-increasing order so that support/kernel splits read off a prefix.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use crate::error::{Error, Result};

pub type CMatrix = DMatrix<Complex64>;
pub type CVector = DVector<Complex64>;

/// Max absolute deviation from Hermiticity, max_ij |A_ij - conj(A_ji)|.
pub fn hermitian_deviation(a: &CMatrix) -> f64 {
    let mut worst = 0.0f64;
    for i in 0..a.nrows() {
        for j in i..a.ncols() {
            let d = (a[(i, j)] - a[(j, i)].conj()).norm();
            if d > worst {
                worst = d;
            }
        }
    }
    worst
}

/// Hermitian part (A + A^dag) / 2.
pub fn symmetrize(a: &CMatrix) -> CMatrix {
    (a + a.adjoint()).scale(0.5)
}

pub fn max_abs(a: &CMatrix) -> f64 {
    a.iter().map(|z| z.norm()).fold(0.0, f64::max)
}

pub fn trace_re(a: &CMatrix) -> f64 {
    (0..a.nrows().min(a.ncols())).map(|i| a[(i, i)].re).sum()
}

pub fn identity(n: usize) -> CMatrix {
    CMatrix::identity(n, n)
}

/// Eigendecomposition of a Hermitian matrix, eigenvalues sorted
/// non-increasing, eigenvectors as matching columns. The input is
/// symmetrized first; callers are expected to have validated Hermiticity
/// to their own tolerance already.
pub fn eigh(a: &CMatrix) -> Result<(Vec<f64>, CMatrix)> {
    let sym = symmetrize(a);
    let n = sym.nrows();
    let decomp = nalgebra::SymmetricEigen::try_new(sym, f64::EPSILON, 0)
        .ok_or(Error::EigensolverFailure)?;
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| {
        decomp.eigenvalues[j]
            .partial_cmp(&decomp.eigenvalues[i])
            .expect("eigenvalues are finite")
    });
    let values: Vec<f64> = order.iter().map(|&i| decomp.eigenvalues[i]).collect();
    let mut vectors = CMatrix::zeros(n, n);
    for (dst, &src) in order.iter().enumerate() {
        vectors.set_column(dst, &decomp.eigenvectors.column(src));
    }
    Ok((values, vectors))
}

/// Eigenvalues only, non-increasing.
pub fn eigvalsh(a: &CMatrix) -> Result<Vec<f64>> {
    let sym = symmetrize(a);
    let decomp = nalgebra::SymmetricEigen::try_new(sym, f64::EPSILON, 0)
        .ok_or(Error::EigensolverFailure)?;
    let mut values: Vec<f64> = decomp.eigenvalues.iter().copied().collect();
    values.sort_by(|x, y| y.partial_cmp(x).expect("eigenvalues are finite"));
    Ok(values)
}

/// exp(i * scale * H) for Hermitian H, via eigendecomposition. The result is
/// unitary up to the accuracy of the eigensolver.
pub fn exp_i_hermitian(h: &CMatrix, scale: f64) -> Result<CMatrix> {
    let (values, vectors) = eigh(h)?;
    let phases: Vec<Complex64> = values
        .iter()
        .map(|&l| Complex64::from_polar(1.0, scale * l))
        .collect();
    Ok(apply_spectral(&vectors, &phases))
}

/// V diag(f) V^dag for a unitary V and diagonal entries f.
pub fn apply_spectral(vectors: &CMatrix, diag: &[Complex64]) -> CMatrix {
    let mut scaled = vectors.clone();
    for (j, &f) in diag.iter().enumerate() {
        let mut col = scaled.column_mut(j);
        col *= f;
    }
    &scaled * vectors.adjoint()
}

/// Max absolute deviation of U from unitarity, max |U^dag U - I|.
pub fn unitary_deviation(u: &CMatrix) -> f64 {
    let gram = u.adjoint() * u;
    max_abs(&(gram - identity(u.ncols())))
}

/// Trace distance (1/2)||A - B||_1 between Hermitian matrices.
pub fn trace_distance(a: &CMatrix, b: &CMatrix) -> Result<f64> {
    if a.nrows() != b.nrows() {
        return Err(Error::DimensionMismatch {
            left: a.nrows(),
            right: b.nrows(),
        });
    }
    if a.nrows() == 2 {
        // Closed form for the Hermitian 2x2 difference.
        let d00 = (a[(0, 0)] - b[(0, 0)]).re;
        let d11 = (a[(1, 1)] - b[(1, 1)]).re;
        let off = a[(0, 1)] - b[(0, 1)];
        let mean = 0.5 * (d00 + d11);
        let r = (0.25 * (d00 - d11) * (d00 - d11) + off.norm_sqr()).sqrt();
        return Ok(0.5 * ((mean + r).abs() + (mean - r).abs()));
    }
    let values = eigvalsh(&(a - b))?;
    Ok(0.5 * values.iter().map(|l| l.abs()).sum::<f64>())
}

/// Outer product |v><v|.
pub fn outer(v: &CVector) -> CMatrix {
    v * v.adjoint()
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use num_complex::Complex64 as C;

    fn c(re: f64, im: f64) -> C {
        C::new(re, im)
    }

    #[test]
    fn eigh_handles_complex_hermitian() {
        // [[2, i], [-i, 2]] has eigenvalues 3 and 1.
        let m = CMatrix::from_row_slice(
            2,
            2,
            &[c(2.0, 0.0), c(0.0, 1.0), c(0.0, -1.0), c(2.0, 0.0)],
        );
        let (values, vectors) = eigh(&m).unwrap();
        assert_relative_eq!(values[0], 3.0, epsilon = 1e-12);
        assert_relative_eq!(values[1], 1.0, epsilon = 1e-12);
        // Reconstruction check.
        let diag: Vec<C> = values.iter().map(|&l| c(l, 0.0)).collect();
        let rebuilt = apply_spectral(&vectors, &diag);
        assert!(max_abs(&(rebuilt - m)) < 1e-12);
        // Columns orthonormal.
        assert!(unitary_deviation(&vectors) < 1e-12);
    }

    #[test]
    fn eigh_orders_descending() {
        let m = CMatrix::from_diagonal(&CVector::from_vec(vec![
            c(0.1, 0.0),
            c(0.7, 0.0),
            c(0.2, 0.0),
        ]));
        let (values, _) = eigh(&m).unwrap();
        assert_eq!(values, vec![0.7, 0.2, 0.1]);
    }

    #[test]
    fn exp_i_hermitian_is_unitary_and_matches_scalar_case() {
        let m = CMatrix::from_row_slice(
            2,
            2,
            &[c(0.3, 0.0), c(0.1, 0.2), c(0.1, -0.2), c(-0.4, 0.0)],
        );
        let u = exp_i_hermitian(&m, 1.0).unwrap();
        assert!(unitary_deviation(&u) < 1e-12);
        // 1x1 case: exp(i * h).
        let h = CMatrix::from_row_slice(1, 1, &[c(0.5, 0.0)]);
        let u1 = exp_i_hermitian(&h, 2.0).unwrap();
        assert_relative_eq!(u1[(0, 0)].re, (1.0f64).cos(), epsilon = 1e-14);
        assert_relative_eq!(u1[(0, 0)].im, (1.0f64).sin(), epsilon = 1e-14);
    }

    #[test]
    fn trace_distance_of_orthogonal_pure_states_is_one() {
        let a = CMatrix::from_row_slice(2, 2, &[c(1.0, 0.0), c(0.0, 0.0), c(0.0, 0.0), c(0.0, 0.0)]);
        let b = CMatrix::from_row_slice(2, 2, &[c(0.0, 0.0), c(0.0, 0.0), c(0.0, 0.0), c(1.0, 0.0)]);
        assert_relative_eq!(trace_distance(&a, &b).unwrap(), 1.0, epsilon = 1e-14);
    }
}
