//! Eigendecomposition of Hermitian operators and thermal (Gibbs) weights.

use ndarray::{Array1, Array2};
use num_complex::Complex64;

use crate::error::{QfiError, Result};
use crate::linalg;
use crate::spectral::operator::{HermitianOperator, Storage};

/// Two eigenvalues closer than `1e-10 * max(1, spectral width)` are
/// treated as degenerate: for peak merging, for the level-repulsion
/// restriction in the van Vleck susceptibility, and for the T = 0
/// ground-manifold weights.
pub fn degeneracy_tolerance(energies: &[f64]) -> f64 {
    let width = match (energies.first(), energies.last()) {
        (Some(lo), Some(hi)) => hi - lo,
        _ => 0.0,
    };
    1e-10 * width.max(1.0)
}

#[derive(Debug, Clone)]
pub(crate) enum EigenVectors {
    Real(Array2<f64>),
    Complex(Array2<Complex64>),
}

/// Full eigendecomposition of a [`HermitianOperator`].
///
/// Eigenvalues are ascending. Each eigenvector's phase is fixed so that
/// its first non-negligible component is real positive, which makes the
/// decomposition reproducible up to degenerate-subspace mixing.
#[derive(Debug, Clone)]
pub struct EigenSystem {
    energies: Array1<f64>,
    pub(crate) vectors: EigenVectors,
}

impl EigenSystem {
    pub fn new(h: &HermitianOperator) -> Result<Self> {
        match &h.storage {
            Storage::Real(a) => {
                let (energies, mut v) = linalg::eigh_real(&linalg::to_faer_real(a))?;
                let n = energies.len();
                for k in 0..n {
                    let lead = (0..n).find(|&i| v[(i, k)].abs() > 1e-8).unwrap_or(0);
                    if v[(lead, k)] < 0.0 {
                        for i in 0..n {
                            v[(i, k)] = -v[(i, k)];
                        }
                    }
                }
                Ok(Self {
                    energies: Array1::from(energies),
                    vectors: EigenVectors::Real(linalg::from_faer_real(&v)),
                })
            }
            Storage::Complex(a) => {
                let (energies, mut v) = linalg::eigh_complex(&linalg::to_faer_complex(a))?;
                let n = energies.len();
                for k in 0..n {
                    let lead = (0..n).find(|&i| v[(i, k)].norm() > 1e-8).unwrap_or(0);
                    let norm = v[(lead, k)].norm();
                    if norm > 0.0 {
                        let phase = v[(lead, k)].conj() / norm;
                        for i in 0..n {
                            v[(i, k)] *= phase;
                        }
                    }
                }
                Ok(Self {
                    energies: Array1::from(energies),
                    vectors: EigenVectors::Complex(linalg::from_faer_complex(&v)),
                })
            }
        }
    }

    pub fn dim(&self) -> usize {
        self.energies.len()
    }

    /// Eigenvalues, ascending, in units of J.
    pub fn energies(&self) -> &Array1<f64> {
        &self.energies
    }

    pub fn degeneracy_tolerance(&self) -> f64 {
        degeneracy_tolerance(self.energies.as_slice().expect("contiguous"))
    }

    /// Eigenvector `k` as a complex column.
    pub fn eigenvector(&self, k: usize) -> Array1<Complex64> {
        match &self.vectors {
            EigenVectors::Real(v) => v.column(k).mapv(|x| Complex64::new(x, 0.0)),
            EigenVectors::Complex(v) => v.column(k).to_owned(),
        }
    }

    /// Max deviation of `V^dagger V` from the identity; test support.
    pub fn unitarity_defect(&self) -> f64 {
        let n = self.dim();
        let mut worst = 0.0f64;
        for i in 0..n {
            for j in i..n {
                let mut acc = Complex64::new(0.0, 0.0);
                match &self.vectors {
                    EigenVectors::Real(v) => {
                        for r in 0..n {
                            acc += v[[r, i]] * v[[r, j]];
                        }
                    }
                    EigenVectors::Complex(v) => {
                        for r in 0..n {
                            acc += v[[r, i]].conj() * v[[r, j]];
                        }
                    }
                }
                let target = if i == j { 1.0 } else { 0.0 };
                worst = worst.max((acc - target).norm());
            }
        }
        worst
    }
}

/// Boltzmann weights `p ~ exp(-(E - E_0)/T)`, computed with shifted
/// energies so large spectra cannot overflow. `T = 0` puts equal weight
/// on the (tolerance-resolved) ground manifold; `T = infinity` is the
/// maximally mixed state.
pub(crate) fn boltzmann_weights(energies: &[f64], temperature: f64) -> Result<Vec<f64>> {
    if temperature.is_nan() || temperature < 0.0 {
        return Err(QfiError::domain(format!(
            "temperature must be >= 0, got {temperature}"
        )));
    }
    let e0 = energies[0];
    if temperature == 0.0 {
        let tol = degeneracy_tolerance(energies);
        let g = energies.iter().take_while(|&&e| e - e0 <= tol).count();
        let mut p = vec![0.0; energies.len()];
        for w in p.iter_mut().take(g) {
            *w = 1.0 / g as f64;
        }
        return Ok(p);
    }
    let mut p: Vec<f64> = energies
        .iter()
        .map(|&e| (-(e - e0) / temperature).exp())
        .collect();
    let z: f64 = p.iter().sum();
    for w in &mut p {
        *w /= z;
    }
    Ok(p)
}

/// A thermal ensemble: eigenbasis plus Boltzmann occupation probabilities
/// at temperature `T` (units of J, with k_B = 1).
#[derive(Debug, Clone)]
pub struct ThermalEnsemble {
    eigen: EigenSystem,
    probabilities: Array1<f64>,
    temperature: f64,
}

/// Diagonalizes `H` and attaches Boltzmann weights at temperature `t`.
pub fn diagonalize(h: &HermitianOperator, t: f64) -> Result<ThermalEnsemble> {
    ThermalEnsemble::from_eigensystem(EigenSystem::new(h)?, t)
}

impl ThermalEnsemble {
    /// Attaches thermal weights to an existing decomposition; use this to
    /// sweep temperatures without re-diagonalizing.
    pub fn from_eigensystem(eigen: EigenSystem, t: f64) -> Result<Self> {
        let p = boltzmann_weights(eigen.energies.as_slice().expect("contiguous"), t)?;
        Ok(Self {
            eigen,
            probabilities: Array1::from(p),
            temperature: t,
        })
    }

    pub fn dim(&self) -> usize {
        self.eigen.dim()
    }

    pub fn eigen(&self) -> &EigenSystem {
        &self.eigen
    }

    pub fn energies(&self) -> &Array1<f64> {
        self.eigen.energies()
    }

    pub fn probabilities(&self) -> &Array1<f64> {
        &self.probabilities
    }

    pub fn temperature(&self) -> f64 {
        self.temperature
    }
}
