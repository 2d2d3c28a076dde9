//! JSON interchange forms for matrices and entropy values.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::entropy::ExtendedNonNegative;
use crate::error::{Error, Result};
use crate::linalg::CMatrix;
use crate::state::DensityMatrix;

/// Matrix interchange record: subsystem dimensions plus real and imaginary
/// parts as nested row-major arrays.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct MatrixJson {
    pub dims: Vec<usize>,
    pub re: Vec<Vec<f64>>,
    pub im: Vec<Vec<f64>>,
}

impl MatrixJson {
    pub fn from_matrix(m: &CMatrix, dims: &[usize]) -> Self {
        let n = m.nrows();
        let mut re = vec![vec![0.0; m.ncols()]; n];
        let mut im = vec![vec![0.0; m.ncols()]; n];
        for i in 0..n {
            for j in 0..m.ncols() {
                re[i][j] = m[(i, j)].re;
                im[i][j] = m[(i, j)].im;
            }
        }
        Self {
            dims: dims.to_vec(),
            re,
            im,
        }
    }

    pub fn to_matrix(&self) -> Result<CMatrix> {
        let n: usize = self.dims.iter().product();
        if self.re.len() != n || self.im.len() != n {
            return Err(Error::BadShape {
                dims: self.dims.clone(),
                size: self.re.len(),
            });
        }
        let mut m = CMatrix::zeros(n, n);
        for i in 0..n {
            if self.re[i].len() != n || self.im[i].len() != n {
                return Err(Error::BadShape {
                    dims: self.dims.clone(),
                    size: self.re[i].len(),
                });
            }
            for j in 0..n {
                m[(i, j)] = Complex64::new(self.re[i][j], self.im[i][j]);
            }
        }
        Ok(m)
    }

    pub fn to_density(&self) -> Result<DensityMatrix> {
        DensityMatrix::new(self.to_matrix()?, self.dims.clone())
    }
}

/// Entropy interchange record: a finite value or the string `"inf"`.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct EntropyJson {
    pub value: serde_json::Value,
}

impl EntropyJson {
    pub fn from_entropy(e: &ExtendedNonNegative) -> Self {
        let value = match e {
            ExtendedNonNegative::Finite(v) => serde_json::json!(v),
            ExtendedNonNegative::Infinite => serde_json::json!("inf"),
        };
        Self { value }
    }
}
