//! Location and size of spectral jumps from the Fejér-smoothed statistic
//!
//! `Θ_N(θ) = b(0) + 2 Σ_{k=1}^{N-1} (1 - k/N) b(k) cos kθ`.
//!
//! `Θ_N(θ)/N` is the spectral measure smoothed by the kernel
//! `sin²(N x/2) / (N² sin²(x/2))`, which equals 1 at `x = 0`, so it converges
//! to the jump of the spectral distribution at `θ` and to zero where the
//! distribution is continuous.

use std::f64::consts::PI;

use crate::correlation::CorrelationSequence;
use crate::error::{Error, Result};

pub const MIN_GRID_COUNT: usize = 16;

/// `Θ_N(θ)/N` on a uniform grid over `[-π, π]`.
#[derive(Debug, Clone, PartialEq)]
pub struct ThetaScan {
    thetas: Vec<f64>,
    values: Vec<f64>,
    n: usize,
    dt: f64,
}

impl ThetaScan {
    /// Grid points, `grid_count + 1` of them including both ends.
    pub fn thetas(&self) -> &[f64] {
        &self.thetas
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    /// Truncation size used for the scan.
    pub fn size(&self) -> usize {
        self.n
    }

    pub fn dt(&self) -> f64 {
        self.dt
    }

    pub fn grid_count(&self) -> usize {
        self.thetas.len() - 1
    }

    pub fn spacing(&self) -> f64 {
        2.0 * PI / self.grid_count() as f64
    }

    /// True when some value dips below zero, which only an indefinite
    /// (empirical) correlation can cause.
    pub fn has_negative_values(&self) -> bool {
        self.values.iter().any(|v| *v < -1e-9)
    }
}

/// A detected jump of the spectral distribution.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct JumpEstimate {
    /// Radians per sample, in `[0, π]`.
    pub theta: f64,
    /// Estimated individual jump `σ(θ+0) − σ(θ−0)`.
    pub mass: f64,
    pub frequency_hz: f64,
}

/// `Θ_N(θ)` for the correlation normalized to `b(0) = 1`.
pub fn theta_statistic(corr: &CorrelationSequence, n: usize, theta: f64) -> Result<f64> {
    let b = corr.normalized_prefix(n)?;
    let weights = tapered(&b);
    Ok(evaluate(&weights, theta))
}

/// `Θ_N/N` on `grid_count` equal segments of `[-π, π]`.
pub fn theta_scan(corr: &CorrelationSequence, n: usize, grid_count: usize) -> Result<ThetaScan> {
    if grid_count < MIN_GRID_COUNT {
        return Err(Error::InvalidParameter(format!(
            "grid_count must be >= {MIN_GRID_COUNT}, got {grid_count}"
        )));
    }
    let b = corr.normalized_prefix(n)?;
    let weights = tapered(&b);
    let g = grid_count as f64;
    let nf = n as f64;
    // θ_i = π(2i - G)/G so that θ_{G-i} = -θ_i exactly.
    let thetas: Vec<f64> = (0..=grid_count)
        .map(|i| PI * (2.0 * i as f64 - g) / g)
        .collect();
    let values: Vec<f64> = thetas.iter().map(|&t| evaluate(&weights, t) / nf).collect();
    let scan = ThetaScan {
        thetas,
        values,
        n,
        dt: corr.dt(),
    };
    if scan.has_negative_values() {
        log::warn!("theta scan at N={n} has negative values; correlation is indefinite");
    }
    Ok(scan)
}

/// Coefficients `c_0 = b(0)`, `c_k = 2 (1 - k/N) b(k)`.
fn tapered(b: &[f64]) -> Vec<f64> {
    let nf = b.len() as f64;
    b.iter()
        .enumerate()
        .map(|(k, v)| {
            if k == 0 {
                *v
            } else {
                2.0 * (1.0 - k as f64 / nf) * v
            }
        })
        .collect()
}

fn evaluate(weights: &[f64], theta: f64) -> f64 {
    weights
        .iter()
        .enumerate()
        .map(|(k, c)| c * (k as f64 * theta).cos())
        .sum()
}

/// Local maxima of the scan on `[0, π]` with value `>= min_mass`.
///
/// Peaks are accepted greedily by decreasing value; a candidate closer than
/// `min_separation` to an accepted peak is dropped. The mass is the scan
/// value at the peak.
pub fn detect_jumps(scan: &ThetaScan, min_mass: f64, min_separation: f64) -> Result<Vec<JumpEstimate>> {
    if !(min_mass > 0.0) {
        return Err(Error::InvalidParameter(format!(
            "min_mass must be positive, got {min_mass}"
        )));
    }
    if !(min_separation >= scan.spacing() * (1.0 - 1e-12)) {
        return Err(Error::InvalidParameter(format!(
            "min_separation {min_separation} is below the grid spacing {}",
            scan.spacing()
        )));
    }
    let t = scan.thetas();
    let v = scan.values();
    let last = t.len() - 1;
    let mut candidates: Vec<usize> = (0..=last)
        .filter(|&i| t[i] >= 0.0 && v[i] >= min_mass)
        .filter(|&i| {
            // The grid is periodic: the ends are the same point ±π.
            let left = if i == 0 { v[last - 1] } else { v[i - 1] };
            let right = if i == last { v[1] } else { v[i + 1] };
            v[i] >= left && v[i] >= right && (v[i] > left || v[i] > right)
        })
        .collect();
    candidates.sort_by(|&a, &b| v[b].total_cmp(&v[a]).then(a.cmp(&b)));

    let mut accepted: Vec<usize> = Vec::new();
    for i in candidates {
        if accepted
            .iter()
            .all(|&j| (t[i] - t[j]).abs() >= min_separation)
        {
            accepted.push(i);
        }
    }
    Ok(accepted
        .into_iter()
        .map(|i| JumpEstimate {
            theta: t[i],
            mass: v[i],
            frequency_hz: theta_to_hz(t[i], scan.dt()),
        })
        .collect())
}

/// Peak-suppression distance `l₀δ` with `N l₀ δ ~ 1`, i.e. `1/N` rounded up
/// to whole grid cells.
pub fn default_min_separation(n: usize, grid_count: usize) -> f64 {
    let spacing = 2.0 * PI / grid_count as f64;
    let cells = (1.0 / (n as f64 * spacing)).ceil().max(1.0);
    cells * spacing
}

/// Folds a continuous-time angular frequency into the Nyquist interval
/// `[-Ω, Ω)`, `Ω = π/Δ`.
pub fn fold_frequency(lambda: f64, omega: f64) -> Result<f64> {
    if !(omega > 0.0 && omega.is_finite()) {
        return Err(Error::InvalidParameter(format!(
            "omega must be positive, got {omega}"
        )));
    }
    let x = lambda / (2.0 * omega) + 0.5;
    let frac = x - x.floor();
    Ok((frac - 0.5) * 2.0 * omega)
}

/// Physical frequency in Hz of `theta` radians per sample.
pub fn theta_to_hz(theta: f64, dt: f64) -> f64 {
    theta / (2.0 * PI * dt)
}
