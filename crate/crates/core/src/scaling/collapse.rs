//! Data-collapse fitting for the universal scaling forms
//!
//! ```text
//! size:        f_Q = L^a  phi( T L^b )          (a = Delta_Q, b = z)
//! temperature: f_Q = T^-a phi( h T^-c )         (a = Delta_Q/z, c = 1/(z nu))
//! field:       f_Q = h^-a phi( T h^-c )         (a = nu Delta_Q, c = nu z)
//! ```
//!
//! Each curve (one per size, temperature, or field value) is rescaled
//! with trial exponents, interpolated onto the common support, and the
//! residual is the mean squared vertical spread between curves. A
//! deterministic Nelder-Mead search minimizes the spread normalized by
//! the squared data amplitude; the normalization keeps the degenerate
//! "shrink everything to zero" direction from masquerading as a collapse.

use serde::{Deserialize, Serialize};

use crate::error::{QfiError, Result};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ScalingRow {
    /// System size N (or L).
    pub size: f64,
    pub temperature: f64,
    /// Distance from criticality, h-tilde.
    pub field: f64,
    /// f_Q or a derivative of it; must be >= 0.
    pub value: f64,
}

#[derive(Debug, Clone)]
pub struct ScalingDataset {
    rows: Vec<ScalingRow>,
}

impl ScalingDataset {
    pub fn new(rows: Vec<ScalingRow>) -> Result<Self> {
        if rows.is_empty() {
            return Err(QfiError::validation("scaling dataset is empty"));
        }
        for r in &rows {
            if !(r.value >= 0.0) || !r.value.is_finite() {
                return Err(QfiError::validation(format!(
                    "f_Q values must be finite and >= 0, got {}",
                    r.value
                )));
            }
            if !r.size.is_finite() || !r.temperature.is_finite() || !r.field.is_finite() {
                return Err(QfiError::validation("non-finite dataset coordinates"));
            }
        }
        let mut keys: Vec<(f64, f64, f64)> =
            rows.iter().map(|r| (r.size, r.temperature, r.field)).collect();
        keys.sort_by(|a, b| a.partial_cmp(b).expect("finite keys"));
        for w in keys.windows(2) {
            if w[0] == w[1] {
                return Err(QfiError::validation(format!(
                    "duplicate (N, T, h) key {:?}",
                    w[0]
                )));
            }
        }
        Ok(Self { rows })
    }

    pub fn rows(&self) -> &[ScalingRow] {
        &self.rows
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CollapseAxis {
    /// Curves indexed by size; scaling variable T * N^b.
    Size,
    /// Curves indexed by temperature; scaling variable h * T^-c.
    Temperature,
    /// Curves indexed by field; scaling variable T * h^-c.
    Field,
}

/// Residual diagnostics at fixed exponents.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct CollapseQuality {
    /// Mean squared vertical spread between rescaled curves.
    pub residual: f64,
    /// max - min of the rescaled data over the common support.
    pub amplitude: f64,
    /// Common support window of the scaling variable.
    pub window: (f64, f64),
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CollapseResult {
    pub axis: CollapseAxis,
    /// Fitted exponents `[a, b]` (size) or `[a, c]` (temperature/field).
    pub exponents: [f64; 2],
    /// Mean squared vertical spread at the fitted exponents.
    pub residual: f64,
    pub amplitude: f64,
    pub fit_window: (f64, f64),
}

impl CollapseResult {
    /// Root-mean-square spread, in the units of the rescaled data.
    pub fn rms_spread(&self) -> f64 {
        self.residual.sqrt()
    }
}

struct Curve {
    /// (scaling variable, rescaled value), sorted by the scaling variable.
    points: Vec<(f64, f64)>,
}

fn build_curves(ds: &ScalingDataset, exps: [f64; 2], axis: CollapseAxis) -> Option<Vec<Curve>> {
    let key_of = |r: &ScalingRow| match axis {
        CollapseAxis::Size => r.size,
        CollapseAxis::Temperature => r.temperature,
        CollapseAxis::Field => r.field,
    };
    let mut rows: Vec<&ScalingRow> = ds.rows.iter().collect();
    rows.sort_by(|a, b| {
        (key_of(a), a.temperature, a.field)
            .partial_cmp(&(key_of(b), b.temperature, b.field))
            .expect("finite")
    });
    let [a, bc] = exps;
    let mut curves: Vec<Curve> = Vec::new();
    let mut idx = 0;
    while idx < rows.len() {
        let key = key_of(rows[idx]);
        let mut points = Vec::new();
        while idx < rows.len() && key_of(rows[idx]) == key {
            let r = rows[idx];
            let (x, y) = match axis {
                CollapseAxis::Size => (r.temperature * r.size.powf(bc), r.value * r.size.powf(-a)),
                CollapseAxis::Temperature => (
                    r.field * r.temperature.powf(-bc),
                    r.value * r.temperature.powf(a),
                ),
                CollapseAxis::Field => (
                    r.temperature * r.field.powf(-bc),
                    r.value * r.field.powf(a),
                ),
            };
            if !x.is_finite() || !y.is_finite() {
                return None;
            }
            points.push((x, y));
            idx += 1;
        }
        points.sort_by(|p, q| p.0.partial_cmp(&q.0).expect("finite"));
        curves.push(Curve { points });
    }
    Some(curves)
}

fn interp(points: &[(f64, f64)], x: f64) -> f64 {
    let n = points.len();
    if x <= points[0].0 {
        return points[0].1;
    }
    if x >= points[n - 1].0 {
        return points[n - 1].1;
    }
    let mut hi = points.partition_point(|p| p.0 < x);
    if hi == 0 {
        hi = 1;
    }
    let (x0, y0) = points[hi - 1];
    let (x1, y1) = points[hi];
    if x1 == x0 {
        return 0.5 * (y0 + y1);
    }
    y0 + (y1 - y0) * (x - x0) / (x1 - x0)
}

fn quality(ds: &ScalingDataset, exps: [f64; 2], axis: CollapseAxis) -> Result<CollapseQuality> {
    let curves = build_curves(ds, exps, axis).ok_or_else(|| {
        QfiError::validation(format!(
            "rescaling with exponents {exps:?} produced non-finite values"
        ))
    })?;
    if curves.len() < 2 {
        return Err(QfiError::validation(
            "collapse needs at least 2 distinct curves (sizes, temperatures, or fields)",
        ));
    }
    for c in &curves {
        if c.points.len() < 2 {
            return Err(QfiError::validation(
                "every curve needs at least 2 points for interpolation",
            ));
        }
    }
    let lo = curves
        .iter()
        .map(|c| c.points[0].0)
        .fold(f64::NEG_INFINITY, f64::max);
    let hi = curves
        .iter()
        .map(|c| c.points[c.points.len() - 1].0)
        .fold(f64::INFINITY, f64::min);
    if !(hi > lo) {
        return Err(QfiError::CollapseOverlap(format!(
            "rescaled curve supports only overlap on [{lo:.6e}, {hi:.6e}]"
        )));
    }
    let mut grid: Vec<f64> = curves
        .iter()
        .flat_map(|c| c.points.iter().map(|p| p.0))
        .filter(|&x| x >= lo && x <= hi)
        .collect();
    grid.sort_by(|p, q| p.partial_cmp(q).expect("finite"));
    grid.dedup();
    if grid.len() < 2 {
        return Err(QfiError::CollapseOverlap(format!(
            "only {} shared grid points in the overlap window [{lo:.6e}, {hi:.6e}]",
            grid.len()
        )));
    }
    let m = curves.len() as f64;
    let mut residual = 0.0;
    let mut vmin = f64::INFINITY;
    let mut vmax = f64::NEG_INFINITY;
    for &x in &grid {
        let mut mean = 0.0;
        let mut mean_sq = 0.0;
        for c in &curves {
            let v = interp(&c.points, x);
            mean += v;
            mean_sq += v * v;
            vmin = vmin.min(v);
            vmax = vmax.max(v);
        }
        mean /= m;
        mean_sq /= m;
        residual += (mean_sq - mean * mean).max(0.0);
    }
    residual /= grid.len() as f64;
    Ok(CollapseQuality {
        residual,
        amplitude: vmax - vmin,
        window: (lo, hi),
    })
}

/// Evaluates the collapse residual at fixed exponents.
pub fn collapse_residual(
    ds: &ScalingDataset,
    exponents: [f64; 2],
    axis: CollapseAxis,
) -> Result<CollapseQuality> {
    quality(ds, exponents, axis)
}

/// Fits collapse exponents by a deterministic Nelder-Mead search started
/// from `guess`. The objective is the mean squared spread divided by the
/// squared amplitude of the rescaled data.
pub fn collapse(ds: &ScalingDataset, guess: [f64; 2], axis: CollapseAxis) -> Result<CollapseResult> {
    // surface structural errors (too few curves, no overlap) at the guess
    quality(ds, guess, axis)?;
    let objective = |p: [f64; 2]| -> f64 {
        match quality(ds, p, axis) {
            Ok(q) if q.amplitude > 1e-300 => q.residual / (q.amplitude * q.amplitude),
            _ => 1e30,
        }
    };
    let best = nelder_mead(objective, guess);
    let q = quality(ds, best, axis)?;
    Ok(CollapseResult {
        axis,
        exponents: best,
        residual: q.residual,
        amplitude: q.amplitude,
        fit_window: q.window,
    })
}

/// Textbook Nelder-Mead in two dimensions with a fixed initial simplex;
/// no randomness, so identical inputs give identical exponents.
fn nelder_mead(f: impl Fn([f64; 2]) -> f64, start: [f64; 2]) -> [f64; 2] {
    const ALPHA: f64 = 1.0;
    const GAMMA: f64 = 2.0;
    const RHO: f64 = 0.5;
    const SIGMA: f64 = 0.5;
    let step = |g: f64| 0.1f64.max(0.1 * g.abs());
    let mut simplex = [
        start,
        [start[0] + step(start[0]), start[1]],
        [start[0], start[1] + step(start[1])],
    ];
    let mut values = simplex.map(&f);

    for _ in 0..600 {
        let mut order = [0usize, 1, 2];
        order.sort_by(|&i, &j| values[i].partial_cmp(&values[j]).expect("finite objective"));
        simplex = order.map(|i| simplex[i]);
        values = order.map(|i| values[i]);

        let size = simplex[1..]
            .iter()
            .map(|v| ((v[0] - simplex[0][0]).abs()).max((v[1] - simplex[0][1]).abs()))
            .fold(0.0f64, f64::max);
        if size < 1e-10 && (values[2] - values[0]).abs() <= 1e-16 * (1.0 + values[0].abs()) {
            break;
        }

        let centroid = [
            0.5 * (simplex[0][0] + simplex[1][0]),
            0.5 * (simplex[0][1] + simplex[1][1]),
        ];
        let dir = [centroid[0] - simplex[2][0], centroid[1] - simplex[2][1]];
        let reflected = [centroid[0] + ALPHA * dir[0], centroid[1] + ALPHA * dir[1]];
        let fr = f(reflected);
        if fr < values[0] {
            let expanded = [centroid[0] + GAMMA * dir[0], centroid[1] + GAMMA * dir[1]];
            let fe = f(expanded);
            if fe < fr {
                simplex[2] = expanded;
                values[2] = fe;
            } else {
                simplex[2] = reflected;
                values[2] = fr;
            }
        } else if fr < values[1] {
            simplex[2] = reflected;
            values[2] = fr;
        } else {
            let contracted = [centroid[0] + RHO * (simplex[2][0] - centroid[0]),
                centroid[1] + RHO * (simplex[2][1] - centroid[1])];
            let fc = f(contracted);
            if fc < values[2] {
                simplex[2] = contracted;
                values[2] = fc;
            } else {
                for i in 1..3 {
                    simplex[i] = [
                        simplex[0][0] + SIGMA * (simplex[i][0] - simplex[0][0]),
                        simplex[0][1] + SIGMA * (simplex[i][1] - simplex[0][1]),
                    ];
                    values[i] = f(simplex[i]);
                }
            }
        }
    }
    let mut best = 0;
    for i in 1..3 {
        if values[i] < values[best] {
            best = i;
        }
    }
    simplex[best]
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    /// f_Q = N^0.75 exp(-T N), sampled on a shared grid of x = T N so the
    /// rescaled nodes align exactly at the true exponents.
    fn synthetic() -> ScalingDataset {
        let mut rows = Vec::new();
        for &n in &[8.0f64, 16.0, 32.0, 64.0, 128.0] {
            for i in 0..40 {
                let x = 0.1 + 2.9 * i as f64 / 39.0;
                let t = x / n;
                rows.push(ScalingRow {
                    size: n,
                    temperature: t,
                    field: 0.0,
                    value: n.powf(0.75) * (-x).exp(),
                });
            }
        }
        ScalingDataset::new(rows).unwrap()
    }

    #[test]
    fn exact_data_has_zero_residual() {
        let q = collapse_residual(&synthetic(), [0.75, 1.0], CollapseAxis::Size).unwrap();
        assert!(q.residual <= 1e-12, "residual = {}", q.residual);
    }

    #[test]
    fn recovers_synthetic_exponents() {
        let r = collapse(&synthetic(), [0.6, 0.8], CollapseAxis::Size).unwrap();
        assert_abs_diff_eq!(r.exponents[0], 0.75, epsilon = 0.01);
        assert_abs_diff_eq!(r.exponents[1], 1.0, epsilon = 0.01);
        assert!(r.residual <= 1e-12);
    }

    #[test]
    fn shuffle_invariance() {
        let ds = synthetic();
        let mut rows = ds.rows().to_vec();
        // deterministic shuffle
        rows.reverse();
        let mid = rows.len() / 2;
        rows.rotate_left(mid / 3 + 1);
        let ds2 = ScalingDataset::new(rows).unwrap();
        let r1 = collapse(&ds, [0.6, 0.8], CollapseAxis::Size).unwrap();
        let r2 = collapse(&ds2, [0.6, 0.8], CollapseAxis::Size).unwrap();
        assert_eq!(r1.exponents, r2.exponents);
        assert_eq!(r1.residual, r2.residual);
    }

    #[test]
    fn single_size_rejected() {
        let rows: Vec<ScalingRow> = (0..10)
            .map(|i| ScalingRow {
                size: 8.0,
                temperature: 0.1 + i as f64 * 0.05,
                field: 0.0,
                value: 1.0,
            })
            .collect();
        let ds = ScalingDataset::new(rows).unwrap();
        assert!(matches!(
            collapse(&ds, [0.5, 0.5], CollapseAxis::Size),
            Err(QfiError::Validation(_))
        ));
    }

    #[test]
    fn disjoint_supports_report_overlap_window() {
        let mut rows = Vec::new();
        for i in 0..5 {
            rows.push(ScalingRow {
                size: 2.0,
                temperature: 0.1 + 0.02 * i as f64,
                field: 0.0,
                value: 1.0 + i as f64 * 0.1,
            });
            rows.push(ScalingRow {
                size: 4.0,
                temperature: 10.0 + i as f64,
                field: 0.0,
                value: 2.0 + i as f64 * 0.1,
            });
        }
        let ds = ScalingDataset::new(rows).unwrap();
        match collapse_residual(&ds, [0.0, 1.0], CollapseAxis::Size) {
            Err(QfiError::CollapseOverlap(msg)) => assert!(msg.contains("overlap")),
            other => panic!("expected overlap error, got {other:?}"),
        }
    }

    #[test]
    fn duplicate_keys_rejected() {
        let rows = vec![
            ScalingRow {
                size: 2.0,
                temperature: 1.0,
                field: 0.0,
                value: 1.0,
            };
            2
        ];
        assert!(ScalingDataset::new(rows).is_err());
    }

    #[test]
    fn temperature_axis_collapses_derivative_form() {
        // value = T^-0.5 g(h/T) with g a gaussian bump
        let g = |x: f64| (-(x - 1.0f64).powi(2)).exp();
        let mut rows = Vec::new();
        for &t in &[0.02f64, 0.05, 0.1, 0.2] {
            for i in 0..60 {
                let x = 4.0 * i as f64 / 59.0;
                rows.push(ScalingRow {
                    size: 100.0,
                    temperature: t,
                    field: x * t,
                    value: t.powf(-0.5) * g(x),
                });
            }
        }
        let ds = ScalingDataset::new(rows).unwrap();
        let q = collapse_residual(&ds, [0.5, 1.0], CollapseAxis::Temperature).unwrap();
        assert!(q.residual <= 1e-12);
        let r = collapse(&ds, [0.4, 0.9], CollapseAxis::Temperature).unwrap();
        assert_abs_diff_eq!(r.exponents[0], 0.5, epsilon = 0.01);
        assert_abs_diff_eq!(r.exponents[1], 1.0, epsilon = 0.01);
    }
}
