//! Thin wrappers around the `faer` dense eigensolver and matrix products,
//! plus `ndarray` interop. Everything downstream works with `ndarray`;
//! `faer` is only an implementation detail of this module and of the
//! large-basis model solvers.

use faer::{c64, Mat};
use ndarray::Array2;
use num_complex::Complex64;

use crate::error::{QfiError, Result};

pub(crate) fn to_faer_real(a: &Array2<f64>) -> Mat<f64> {
    Mat::from_fn(a.nrows(), a.ncols(), |i, j| a[[i, j]])
}

pub(crate) fn to_faer_complex(a: &Array2<Complex64>) -> Mat<c64> {
    Mat::from_fn(a.nrows(), a.ncols(), |i, j| a[[i, j]])
}

pub(crate) fn from_faer_real(m: &Mat<f64>) -> Array2<f64> {
    Array2::from_shape_fn((m.nrows(), m.ncols()), |(i, j)| m[(i, j)])
}

pub(crate) fn from_faer_complex(m: &Mat<c64>) -> Array2<Complex64> {
    Array2::from_shape_fn((m.nrows(), m.ncols()), |(i, j)| m[(i, j)])
}

/// Full eigendecomposition of a real symmetric matrix. Eigenvalues are
/// returned ascending; column `k` of the returned matrix is the
/// eigenvector of eigenvalue `k`.
pub(crate) fn eigh_real(a: &Mat<f64>) -> Result<(Vec<f64>, Mat<f64>)> {
    let evd = a
        .self_adjoint_eigen(faer::Side::Lower)
        .map_err(|e| QfiError::Eigensolver(format!("{e:?}")))?;
    let n = a.nrows();
    let s = evd.S().column_vector().to_owned();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| s[i].partial_cmp(&s[j]).expect("finite eigenvalues"));
    let energies: Vec<f64> = order.iter().map(|&i| s[i]).collect();
    let u = evd.U();
    let vectors = Mat::from_fn(n, n, |i, k| u[(i, order[k])]);
    Ok((energies, vectors))
}

/// Complex Hermitian analogue of [`eigh_real`].
pub(crate) fn eigh_complex(a: &Mat<c64>) -> Result<(Vec<f64>, Mat<c64>)> {
    let evd = a
        .self_adjoint_eigen(faer::Side::Lower)
        .map_err(|e| QfiError::Eigensolver(format!("{e:?}")))?;
    let n = a.nrows();
    let s = evd.S().column_vector().to_owned();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| s[i].re.partial_cmp(&s[j].re).expect("finite eigenvalues"));
    let energies: Vec<f64> = order.iter().map(|&i| s[i].re).collect();
    let u = evd.U();
    let vectors = Mat::from_fn(n, n, |i, k| u[(i, order[k])]);
    Ok((energies, vectors))
}
