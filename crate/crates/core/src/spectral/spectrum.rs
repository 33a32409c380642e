//! Delta-peak spectra in the Lehmann representation and the integral
//! identities evaluated on them.
//!
//! A susceptibility spectrum stores chi''(omega)/pi for omega > 0 as
//! peaks `(omega_k, w_k)`; the full chi'' is odd in omega by convention,
//! so only the positive-frequency half is kept:
//!
//! ```text
//! chi''(omega) = pi * sum_k w_k [ delta(omega - omega_k) - delta(omega + omega_k) ]
//! ```
//!
//! A structure-factor spectrum stores the symmetrized correlator the same
//! way plus an elastic (omega = 0) weight. The two are related peak by
//! peak through the fluctuation-dissipation factor tanh(omega/2T).

use serde::{Deserialize, Serialize};

use crate::error::{QfiError, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SpectrumKind {
    Susceptibility,
    StructureFactor,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SpectralPeak {
    /// Transition frequency, strictly positive, units of J.
    pub frequency: f64,
    /// Peak weight; non-negative for spectra built from thermal states.
    pub weight: f64,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct DeltaSpectrum {
    kind: SpectrumKind,
    temperature: f64,
    peaks: Vec<SpectralPeak>,
    elastic_weight: f64,
}

/// tanh(omega / 2T) with the T = 0 and T = infinity limits built in.
pub(crate) fn tanh_weight(omega: f64, temperature: f64) -> f64 {
    if temperature == 0.0 {
        1.0
    } else {
        (omega / (2.0 * temperature)).tanh()
    }
}

impl DeltaSpectrum {
    pub fn new(
        kind: SpectrumKind,
        temperature: f64,
        peaks: Vec<SpectralPeak>,
        elastic_weight: f64,
    ) -> Result<Self> {
        if temperature.is_nan() || temperature < 0.0 {
            return Err(QfiError::domain(format!(
                "spectrum temperature must be >= 0, got {temperature}"
            )));
        }
        if !elastic_weight.is_finite() || elastic_weight < 0.0 {
            return Err(QfiError::validation(format!(
                "elastic weight must be finite and >= 0, got {elastic_weight}"
            )));
        }
        let mut prev = 0.0;
        for (k, p) in peaks.iter().enumerate() {
            if !(p.frequency > prev) || !p.frequency.is_finite() {
                return Err(QfiError::validation(format!(
                    "peak frequencies must be strictly positive and ascending \
                     (peak {k} at omega = {})",
                    p.frequency
                )));
            }
            if !p.weight.is_finite() {
                return Err(QfiError::validation(format!("peak {k} weight is not finite")));
            }
            prev = p.frequency;
        }
        Ok(Self {
            kind,
            temperature,
            peaks,
            elastic_weight,
        })
    }

    pub fn kind(&self) -> SpectrumKind {
        self.kind
    }

    pub fn temperature(&self) -> f64 {
        self.temperature
    }

    pub fn peaks(&self) -> &[SpectralPeak] {
        &self.peaks
    }

    pub fn elastic_weight(&self) -> f64 {
        self.elastic_weight
    }

    pub fn total_weight(&self) -> f64 {
        self.peaks.iter().map(|p| p.weight).sum()
    }

    /// Converts a structure-factor spectrum to the susceptibility via the
    /// fluctuation-dissipation relation `w_k = tanh(omega_k/2T) s_k`. The
    /// elastic weight sits at omega = 0 where tanh vanishes, so it drops
    /// out of the dissipative part.
    pub fn susceptibility_from_structure_factor(&self) -> Result<DeltaSpectrum> {
        if self.kind != SpectrumKind::StructureFactor {
            return Err(QfiError::validation(
                "fluctuation-dissipation conversion needs a structure-factor spectrum",
            ));
        }
        let peaks = self
            .peaks
            .iter()
            .map(|p| SpectralPeak {
                frequency: p.frequency,
                weight: tanh_weight(p.frequency, self.temperature) * p.weight,
            })
            .collect();
        DeltaSpectrum::new(SpectrumKind::Susceptibility, self.temperature, peaks, 0.0)
    }
}

fn check_susceptibility(spec: &DeltaSpectrum, t: f64) -> Result<()> {
    if spec.kind != SpectrumKind::Susceptibility {
        return Err(QfiError::validation(
            "expected a susceptibility spectrum; convert structure factors \
             with susceptibility_from_structure_factor first",
        ));
    }
    let same = (t == spec.temperature) || (t - spec.temperature).abs() <= 1e-12 * t.abs().max(1.0);
    if !same {
        return Err(QfiError::validation(format!(
            "temperature mismatch: spectrum built at T = {}, asked to evaluate at T = {t}",
            spec.temperature
        )));
    }
    Ok(())
}

/// Quantum Fisher information from a susceptibility spectrum:
/// the exact evaluation of `(4/pi) int_0^inf tanh(omega/2T) chi''` over
/// delta peaks, `F_Q = 4 sum_k tanh(omega_k/2T) w_k`.
pub fn qfi_from_spectrum(spec: &DeltaSpectrum, t: f64) -> Result<f64> {
    check_susceptibility(spec, t)?;
    Ok(4.0
        * spec
            .peaks
            .iter()
            .map(|p| tanh_weight(p.frequency, t) * p.weight)
            .sum::<f64>())
}

/// First-moment sum rule `(2/T) sum_k omega_k w_k`, an upper bound on the
/// QFI because tanh(x) <= x.
pub fn sum_rule_bound(spec: &DeltaSpectrum, t: f64) -> Result<f64> {
    check_susceptibility(spec, t)?;
    if t <= 0.0 {
        return Err(QfiError::domain(
            "sum-rule bound has a 1/T prefactor and needs T > 0",
        ));
    }
    Ok((2.0 / t)
        * spec
            .peaks
            .iter()
            .map(|p| p.frequency * p.weight)
            .sum::<f64>())
}

/// Merges a raw list of `(frequency, weight)` contributions into a sorted
/// peak list: contributions closer than `freq_tol` coalesce, and peaks
/// whose magnitude is negligible relative to `weight_scale` (numerical
/// noise from matrix elements that vanish analytically) are dropped.
pub(crate) fn merge_peaks(
    mut raw: Vec<(f64, f64)>,
    freq_tol: f64,
    weight_scale: f64,
) -> Vec<SpectralPeak> {
    raw.sort_by(|a, b| a.0.partial_cmp(&b.0).expect("finite frequencies"));
    let floor = 1e-14 * weight_scale;
    let mut peaks = Vec::new();
    let mut idx = 0;
    while idx < raw.len() {
        let anchor = raw[idx].0;
        let mut weight = 0.0;
        let mut freq_acc = 0.0;
        let mut freq_norm = 0.0;
        let mut lo = f64::INFINITY;
        let mut hi = f64::NEG_INFINITY;
        while idx < raw.len() && raw[idx].0 - anchor <= freq_tol {
            let (f, w) = raw[idx];
            weight += w;
            freq_acc += f * w.abs();
            freq_norm += w.abs();
            lo = lo.min(f);
            hi = hi.max(f);
            idx += 1;
        }
        let frequency = if freq_norm > 0.0 {
            freq_acc / freq_norm
        } else {
            0.5 * (lo + hi)
        };
        if weight.abs() > floor {
            peaks.push(SpectralPeak { frequency, weight });
        }
    }
    peaks
}
