use ndarray::{Array1, Array2};
use num_complex::Complex64;

use crate::error::{QfiError, Result};

/// Relative Hermiticity tolerance: the largest allowed deviation of an
/// entry from its mirrored conjugate, in units of the largest-magnitude
/// entry of the matrix.
pub const HERMITICITY_TOL: f64 = 1e-12;

/// Dense storage for a Hermitian matrix.
///
/// Real symmetric matrices are kept as `f64` so that the spin models
/// (which are real in the computational basis) avoid the 2x memory and
/// time cost of a complex eigensolve.
#[derive(Debug, Clone)]
pub(crate) enum Storage {
    Real(Array2<f64>),
    Complex(Array2<Complex64>),
}

/// A dense Hermitian operator with a label, used both for Hamiltonians
/// and for generators of unitary transformations.
#[derive(Debug, Clone)]
pub struct HermitianOperator {
    dim: usize,
    label: String,
    pub(crate) storage: Storage,
}

impl HermitianOperator {
    /// Wraps a complex matrix, checking Hermiticity against
    /// [`HERMITICITY_TOL`] relative to the largest-magnitude entry.
    pub fn from_complex(label: impl Into<String>, entries: Array2<Complex64>) -> Result<Self> {
        let dim = square_dim(&entries.dim())?;
        let scale = entries
            .iter()
            .fold(0.0f64, |m, z| m.max(z.norm_sqr()))
            .sqrt();
        for i in 0..dim {
            for j in i..dim {
                let dev = (entries[[i, j]] - entries[[j, i]].conj()).norm();
                if dev > HERMITICITY_TOL * scale {
                    return Err(QfiError::validation(format!(
                        "matrix is not Hermitian: |A[{i},{j}] - conj(A[{j},{i}])| = {dev:.3e}"
                    )));
                }
            }
        }
        Ok(Self {
            dim,
            label: label.into(),
            storage: Storage::Complex(entries),
        })
    }

    /// Wraps a real symmetric matrix.
    pub fn from_real(label: impl Into<String>, entries: Array2<f64>) -> Result<Self> {
        let dim = square_dim(&entries.dim())?;
        let scale = entries.iter().fold(0.0f64, |m, x| m.max(x.abs()));
        for i in 0..dim {
            for j in i..dim {
                let dev = (entries[[i, j]] - entries[[j, i]]).abs();
                if dev > HERMITICITY_TOL * scale {
                    return Err(QfiError::validation(format!(
                        "matrix is not symmetric: |A[{i},{j}] - A[{j},{i}]| = {dev:.3e}"
                    )));
                }
            }
        }
        Ok(Self {
            dim,
            label: label.into(),
            storage: Storage::Real(entries),
        })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn is_real(&self) -> bool {
        matches!(self.storage, Storage::Real(_))
    }

    pub fn entry(&self, i: usize, j: usize) -> Complex64 {
        match &self.storage {
            Storage::Real(a) => Complex64::new(a[[i, j]], 0.0),
            Storage::Complex(a) => a[[i, j]],
        }
    }

    /// Copy of the matrix promoted to complex entries.
    pub fn to_complex(&self) -> Array2<Complex64> {
        match &self.storage {
            Storage::Real(a) => a.mapv(|x| Complex64::new(x, 0.0)),
            Storage::Complex(a) => a.clone(),
        }
    }

    /// Matrix-vector product `O|psi>`.
    pub fn apply(&self, state: &Array1<Complex64>) -> Result<Array1<Complex64>> {
        if state.len() != self.dim {
            return Err(QfiError::Dimension(format!(
                "operator dim {} vs state dim {}",
                self.dim,
                state.len()
            )));
        }
        let mut out = Array1::from_elem(self.dim, Complex64::new(0.0, 0.0));
        match &self.storage {
            Storage::Real(a) => {
                for i in 0..self.dim {
                    let mut acc = Complex64::new(0.0, 0.0);
                    for j in 0..self.dim {
                        acc += a[[i, j]] * state[j];
                    }
                    out[i] = acc;
                }
            }
            Storage::Complex(a) => {
                for i in 0..self.dim {
                    let mut acc = Complex64::new(0.0, 0.0);
                    for j in 0..self.dim {
                        acc += a[[i, j]] * state[j];
                    }
                    out[i] = acc;
                }
            }
        }
        Ok(out)
    }

    /// Returns `O + c * I` with the same label.
    pub fn shifted(&self, c: f64) -> Self {
        let mut shifted = self.clone();
        match &mut shifted.storage {
            Storage::Real(a) => {
                for i in 0..self.dim {
                    a[[i, i]] += c;
                }
            }
            Storage::Complex(a) => {
                for i in 0..self.dim {
                    a[[i, i]] += c;
                }
            }
        }
        shifted
    }
}

fn square_dim(shape: &(usize, usize)) -> Result<usize> {
    let (r, c) = *shape;
    if r != c {
        return Err(QfiError::Dimension(format!("matrix is {r}x{c}, not square")));
    }
    if r == 0 {
        return Err(QfiError::validation("matrix dimension must be at least 1"));
    }
    Ok(r)
}

#[cfg(test)]
mod tests {
    use super::*;
    use ndarray::array;

    #[test]
    fn rejects_non_hermitian() {
        let a = array![
            [Complex64::new(1.0, 0.0), Complex64::new(0.0, 1.0)],
            [Complex64::new(0.0, 1.0), Complex64::new(2.0, 0.0)]
        ];
        assert!(matches!(
            HermitianOperator::from_complex("bad", a),
            Err(QfiError::Validation(_))
        ));
    }

    #[test]
    fn rejects_empty_and_nonsquare() {
        assert!(HermitianOperator::from_real("empty", Array2::zeros((0, 0))).is_err());
        assert!(HermitianOperator::from_real("rect", Array2::zeros((2, 3))).is_err());
    }

    #[test]
    fn accepts_zero_matrix() {
        let h = HermitianOperator::from_real("zero", Array2::zeros((4, 4))).unwrap();
        assert_eq!(h.dim(), 4);
    }

    #[test]
    fn shift_adds_identity() {
        let h = HermitianOperator::from_real("h", array![[1.0, 0.5], [0.5, -1.0]]).unwrap();
        let s = h.shifted(2.0);
        assert_eq!(s.entry(0, 0), Complex64::new(3.0, 0.0));
        assert_eq!(s.entry(0, 1), Complex64::new(0.5, 0.0));
    }
}
