//! Finite-size / finite-temperature scaling analysis: log-log power-law
//! fits, derivative-peak extraction, and data-collapse exponent fitting.

mod collapse;

pub use collapse::{
    collapse, collapse_residual, CollapseAxis, CollapseQuality, CollapseResult, ScalingDataset,
    ScalingRow,
};

use crate::error::{QfiError, Result};

/// Least-squares power-law fit `y = prefactor * x^exponent`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PowerLawFit {
    pub exponent: f64,
    pub prefactor: f64,
    /// Standard error of the exponent from the log-log residual variance.
    pub stderr: f64,
}

/// Fits a line to `(log x, log y)`. Needs at least 3 points with
/// strictly positive coordinates.
pub fn fit_power_law(points: &[(f64, f64)]) -> Result<PowerLawFit> {
    if points.len() < 3 {
        return Err(QfiError::validation(format!(
            "power-law fit needs >= 3 points, got {}",
            points.len()
        )));
    }
    for &(x, y) in points {
        if !(x > 0.0) || !(y > 0.0) || !x.is_finite() || !y.is_finite() {
            return Err(QfiError::domain(format!(
                "power-law fit needs positive finite data, got ({x}, {y})"
            )));
        }
    }
    let n = points.len() as f64;
    let lx: Vec<f64> = points.iter().map(|p| p.0.ln()).collect();
    let ly: Vec<f64> = points.iter().map(|p| p.1.ln()).collect();
    let mx = lx.iter().sum::<f64>() / n;
    let my = ly.iter().sum::<f64>() / n;
    let sxx: f64 = lx.iter().map(|x| (x - mx).powi(2)).sum();
    if sxx == 0.0 {
        return Err(QfiError::domain(
            "power-law fit needs at least two distinct x values",
        ));
    }
    let sxy: f64 = lx
        .iter()
        .zip(ly.iter())
        .map(|(x, y)| (x - mx) * (y - my))
        .sum();
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let ss_res: f64 = lx
        .iter()
        .zip(ly.iter())
        .map(|(x, y)| (y - (intercept + slope * x)).powi(2))
        .sum();
    let stderr = (ss_res / (n - 2.0) / sxx).sqrt();
    Ok(PowerLawFit {
        exponent: slope,
        prefactor: intercept.exp(),
        stderr,
    })
}

/// Location and height of the extremum of `df/dx` on a sampled curve.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DerivativePeak {
    pub x_peak: f64,
    /// Signed derivative value at the peak.
    pub height: f64,
    /// Set when the derivative is constant over the window; `x_peak` is
    /// then the window midpoint.
    pub flat: bool,
}

/// Central-difference derivative of `(x, y)` data followed by a quadratic
/// interpolation through the maximal-|derivative| triple.
pub fn derivative_peak(points: &[(f64, f64)]) -> Result<DerivativePeak> {
    if points.len() < 5 {
        return Err(QfiError::validation(format!(
            "derivative peak needs >= 5 points, got {}",
            points.len()
        )));
    }
    for w in points.windows(2) {
        if !(w[1].0 > w[0].0) {
            return Err(QfiError::validation(format!(
                "x values must be strictly ascending near x = {}",
                w[0].0
            )));
        }
    }
    let n = points.len();
    let xs: Vec<f64> = points.iter().map(|p| p.0).collect();
    let d: Vec<f64> = (1..n - 1)
        .map(|i| (points[i + 1].1 - points[i - 1].1) / (xs[i + 1] - xs[i - 1]))
        .collect();
    let dx: Vec<f64> = xs[1..n - 1].to_vec();

    let max_abs = d.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    let min_abs = d.iter().fold(f64::INFINITY, |m, v| m.min(v.abs()));
    if max_abs - min_abs <= 1e-12 * max_abs.max(1e-300) {
        return Ok(DerivativePeak {
            x_peak: 0.5 * (xs[0] + xs[n - 1]),
            height: d[0],
            flat: true,
        });
    }

    let mut imax = 0;
    for (i, v) in d.iter().enumerate() {
        if v.abs() > d[imax].abs() {
            imax = i;
        }
    }
    if imax == 0 || imax == d.len() - 1 {
        return Ok(DerivativePeak {
            x_peak: dx[imax],
            height: d[imax],
            flat: false,
        });
    }
    let (x0, x1, x2) = (dx[imax - 1], dx[imax], dx[imax + 1]);
    let (y0, y1, y2) = (d[imax - 1], d[imax], d[imax + 1]);
    // parabola through the three points, vertex clamped to the triple
    let denom = (x0 - x1) * (x0 - x2) * (x1 - x2);
    let a = (x2 * (y1 - y0) + x1 * (y0 - y2) + x0 * (y2 - y1)) / denom;
    let b = (x2 * x2 * (y0 - y1) + x1 * x1 * (y2 - y0) + x0 * x0 * (y1 - y2)) / denom;
    if a == 0.0 {
        return Ok(DerivativePeak {
            x_peak: x1,
            height: y1,
            flat: false,
        });
    }
    let c = y1 - a * x1 * x1 - b * x1;
    let xv = (-b / (2.0 * a)).clamp(x0, x2);
    Ok(DerivativePeak {
        x_peak: xv,
        height: a * xv * xv + b * xv + c,
        flat: false,
    })
}

/// Multipartite entanglement length `l_ent = f_Q^(1/d)` in `d` spatial
/// dimensions (a lower-bound scale, isotropy assumed).
pub fn entanglement_length(f_q_density: f64, dimension: u32) -> Result<f64> {
    if !(f_q_density >= 0.0) {
        return Err(QfiError::validation(format!(
            "QFI density must be >= 0, got {f_q_density}"
        )));
    }
    if dimension == 0 {
        return Err(QfiError::validation("dimension must be >= 1"));
    }
    Ok(f_q_density.powf(1.0 / dimension as f64))
}
