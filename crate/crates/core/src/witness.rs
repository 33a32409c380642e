//! Entanglement-depth certification from the quantum Fisher information.
//!
//! A state of `N` particles whose QFI for a sum of bounded one-site
//! generators exceeds
//!
//! ```text
//! bound(m) = width^2 * ( floor(N/m) m^2 + (N - floor(N/m) m)^2 )
//! ```
//!
//! must contain (m+1)-partite entanglement; `width` is the spectral width
//! of the one-site generator (1 for spin-1/2 with sigma/2 generators).
//! All inequalities are strict.

use serde::{Deserialize, Serialize};

use crate::error::{QfiError, Result};

/// Entanglement-depth certificate.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct WitnessReport {
    /// Particle count.
    pub n: usize,
    /// The QFI value that was tested.
    pub fq: f64,
    /// Per-site generator spectral width `h_max - h_min`.
    pub spectrum_width: f64,
    /// Largest certified entanglement depth (1 = no entanglement certified).
    pub depth: usize,
    /// The bound that was exceeded to certify `depth` (0 when depth = 1).
    pub bound_at_depth: f64,
}

/// `floor(N/m) m^2 + (N - floor(N/m) m)^2`, exact in integers.
pub fn partition_bound(n: usize, m: usize) -> f64 {
    debug_assert!(m >= 1);
    let k = n / m;
    let r = n - k * m;
    (k * m * m + r * r) as f64
}

/// Largest certified depth for a QFI value `f_q_total` (the extensive
/// F_Q, not the density) of `n` particles.
pub fn entanglement_depth(f_q_total: f64, n: usize, width: f64) -> Result<WitnessReport> {
    if !(width > 0.0) {
        return Err(QfiError::domain(format!(
            "generator spectral width must be > 0, got {width}"
        )));
    }
    if n == 0 {
        return Err(QfiError::validation("particle count must be >= 1"));
    }
    if !(f_q_total >= 0.0) {
        return Err(QfiError::validation(format!(
            "QFI must be >= 0, got {f_q_total}"
        )));
    }
    let w2 = width * width;
    let mut best = 0usize;
    for m in 1..=n {
        if f_q_total > w2 * partition_bound(n, m) {
            best = m;
        }
    }
    Ok(WitnessReport {
        n,
        fq: f_q_total,
        spectrum_width: width,
        depth: best + 1,
        bound_at_depth: if best > 0 {
            w2 * partition_bound(n, best)
        } else {
            0.0
        },
    })
}

/// Divisor form of the witness: QFI density `f_q > m` certifies
/// (m+1)-partite entanglement when `m` divides `N` (width-1 generators).
pub fn depth_for_divisor(f_q_density: f64, m: usize) -> bool {
    f_q_density > m as f64
}
