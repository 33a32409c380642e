//! Exact thermal-state machinery: dense Hermitian eigendecomposition,
//! Boltzmann ensembles, Lehmann delta-peak spectra, and the quantum
//! Fisher information evaluated through several independent routes.
//!
//! The central identity cross-checked throughout this crate is
//!
//! ```text
//! F_Q(T) = (4/pi) int_0^inf d omega tanh(omega/2T) chi''(omega, T)
//! ```
//!
//! which on the exact delta-peak spectra of finite systems becomes
//! `F_Q = 4 sum_k tanh(omega_k/2T) w_k` and must agree with the direct
//! double sum over eigenstates to near machine precision.

mod operator;
mod spectrum;
mod thermal;
mod transitions;

pub use operator::{HermitianOperator, HERMITICITY_TOL};
pub use spectrum::{
    qfi_from_spectrum, sum_rule_bound, DeltaSpectrum, SpectralPeak, SpectrumKind,
};
pub use thermal::{degeneracy_tolerance, diagonalize, EigenSystem, ThermalEnsemble};
pub use transitions::{
    isothermal_decomposition, lehmann_chi, lehmann_structure_factor, qfi_pure, qfi_thermal,
    SusceptibilityDecomposition, Transitions,
};

pub(crate) use spectrum::{merge_peaks, tanh_weight};
pub(crate) use thermal::boltzmann_weights;
