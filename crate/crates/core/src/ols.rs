//! Small dense least squares used by the GLS transform and the M statistics.

use nalgebra::{DMatrix, DVector};

use crate::error::{Error, Result};

/// Relative eigenvalue threshold below which `X'X` counts as singular.
pub const SINGULAR_RTOL: f64 = 1e-12;

#[derive(Debug, Clone)]
pub struct OlsFit {
    pub beta: DVector<f64>,
    pub residuals: DVector<f64>,
}

pub fn ols(x: &DMatrix<f64>, y: &DVector<f64>) -> Result<OlsFit> {
    assert_eq!(x.nrows(), y.len(), "design and response row counts differ");
    let xtx = x.transpose() * x;
    let xty = x.transpose() * y;

    let eig = xtx.clone().symmetric_eigenvalues();
    let max = eig.iter().cloned().fold(0.0_f64, f64::max);
    let min = eig.iter().cloned().fold(f64::INFINITY, f64::min);
    if !(max > 0.0) || min <= SINGULAR_RTOL * max {
        return Err(Error::SingularDesign);
    }

    let beta = xtx
        .cholesky()
        .ok_or(Error::SingularDesign)?
        .solve(&xty);
    let residuals = y - x * &beta;
    Ok(OlsFit { beta, residuals })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exact_fit() {
        let x = DMatrix::from_row_slice(4, 2, &[1.0, 0.0, 1.0, 1.0, 1.0, 2.0, 1.0, 3.0]);
        let y = DVector::from_vec(vec![1.0, 3.0, 5.0, 7.0]);
        let fit = ols(&x, &y).unwrap();
        assert!((fit.beta[0] - 1.0).abs() < 1e-12);
        assert!((fit.beta[1] - 2.0).abs() < 1e-12);
        assert!(fit.residuals.amax() < 1e-12);
    }

    #[test]
    fn collinear_columns_are_singular() {
        let x = DMatrix::from_row_slice(3, 2, &[1.0, 2.0, 2.0, 4.0, 3.0, 6.0]);
        let y = DVector::from_vec(vec![1.0, 2.0, 3.0]);
        assert!(matches!(ols(&x, &y), Err(Error::SingularDesign)));
        let zeros = DMatrix::zeros(3, 1);
        assert!(matches!(ols(&zeros, &y), Err(Error::SingularDesign)));
    }
}
