//! Correlation sequences: empirical estimates from sampled signals and exact
//! values for synthetic mixed spectra.

use std::f64::consts::PI;

use num_complex::Complex64;
use rustfft::FftPlanner;

use crate::error::{Error, Result};

/// Above this many lagged products the estimator switches to FFT
/// convolution.
const DIRECT_WORK_LIMIT: usize = 1 << 22;

/// Tolerance on `p + Σ m_α = 1` for spectra flagged as normalized.
const NORMALIZATION_TOL: f64 = 1e-12;

/// A finite, uniformly sampled real signal.
#[derive(Debug, Clone, PartialEq)]
pub struct TimeSeries {
    samples: Vec<f64>,
    dt: f64,
}

impl TimeSeries {
    pub fn new(samples: Vec<f64>, dt: f64) -> Result<Self> {
        if samples.is_empty() {
            return Err(Error::EmptySeries);
        }
        check_interval(dt)?;
        if let Some(index) = samples.iter().position(|x| !x.is_finite()) {
            return Err(Error::NonFinite { index });
        }
        Ok(Self { samples, dt })
    }

    pub fn samples(&self) -> &[f64] {
        &self.samples
    }

    /// Sampling interval in seconds.
    pub fn dt(&self) -> f64 {
        self.dt
    }

    pub fn len(&self) -> usize {
        self.samples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.samples.is_empty()
    }

    pub fn into_samples(self) -> Vec<f64> {
        self.samples
    }
}

/// Lags `b(0), …, b(K)` of a correlation function sampled every `dt` seconds.
#[derive(Debug, Clone, PartialEq)]
pub struct CorrelationSequence {
    values: Vec<f64>,
    dt: f64,
    normalized: bool,
}

impl CorrelationSequence {
    /// Wraps raw lag values. The sequence counts as normalized when
    /// `values[0] == 1.0` exactly.
    pub fn new(values: Vec<f64>, dt: f64) -> Result<Self> {
        if values.is_empty() {
            return Err(Error::EmptySeries);
        }
        check_interval(dt)?;
        if let Some(index) = values.iter().position(|x| !x.is_finite()) {
            return Err(Error::NonFinite { index });
        }
        let normalized = values[0] == 1.0;
        Ok(Self {
            values,
            dt,
            normalized,
        })
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn dt(&self) -> f64 {
        self.dt
    }

    pub fn is_normalized(&self) -> bool {
        self.normalized
    }

    /// Largest available lag `K`.
    pub fn max_lag(&self) -> usize {
        self.values.len() - 1
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// `b(0)`, rejecting degenerate sequences.
    pub(crate) fn positive_variance(&self) -> Result<f64> {
        let b0 = self.values[0];
        if b0 > 0.0 {
            Ok(b0)
        } else {
            Err(Error::DegenerateVariance(b0))
        }
    }

    /// Checks `1 <= n <= len` for a truncation size.
    pub(crate) fn check_size(&self, n: usize) -> Result<()> {
        if n == 0 || n > self.values.len() {
            Err(Error::SizeOutOfRange {
                size: n,
                available: self.values.len(),
            })
        } else {
            Ok(())
        }
    }

    /// First `n` lags divided by `b(0)`.
    pub(crate) fn normalized_prefix(&self, n: usize) -> Result<Vec<f64>> {
        self.check_size(n)?;
        let b0 = self.positive_variance()?;
        if self.normalized {
            return Ok(self.values[..n].to_vec());
        }
        let mut out: Vec<f64> = self.values[..n].iter().map(|v| v / b0).collect();
        out[0] = 1.0;
        Ok(out)
    }
}

/// One symmetric pair of spectral atoms at `±theta`.
///
/// `pair_mass` is the combined jump of the pair; each of the two atoms
/// carries `pair_mass / 2`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Atom {
    pub theta: f64,
    pub pair_mass: f64,
}

impl Atom {
    pub fn new(theta: f64, pair_mass: f64) -> Self {
        Self { theta, pair_mass }
    }
}

/// Mixed spectral measure: white noise of total mass `noise_level`
/// (density `p / 2π` on `[-π, π]`) plus symmetric atom pairs.
#[derive(Debug, Clone, PartialEq)]
pub struct SyntheticSpectrum {
    noise_level: f64,
    atoms: Vec<Atom>,
}

impl SyntheticSpectrum {
    pub fn new(noise_level: f64, atoms: Vec<Atom>) -> Result<Self> {
        if !(noise_level.is_finite() && noise_level >= 0.0) {
            return Err(Error::InvalidSpectrum(format!(
                "noise level must be finite and >= 0, got {noise_level}"
            )));
        }
        for (i, atom) in atoms.iter().enumerate() {
            if !(atom.theta > 0.0 && atom.theta < PI) {
                return Err(Error::InvalidSpectrum(format!(
                    "atom {i}: theta {} not inside (0, pi)",
                    atom.theta
                )));
            }
            if !(atom.pair_mass.is_finite() && atom.pair_mass > 0.0) {
                return Err(Error::InvalidSpectrum(format!(
                    "atom {i}: mass {} must be positive",
                    atom.pair_mass
                )));
            }
        }
        if atoms.windows(2).any(|w| w[1].theta <= w[0].theta) {
            return Err(Error::InvalidSpectrum(
                "atom thetas must be strictly increasing".into(),
            ));
        }
        Ok(Self { noise_level, atoms })
    }

    /// Like [`SyntheticSpectrum::new`] but also requires total mass 1.
    pub fn normalized(noise_level: f64, atoms: Vec<Atom>) -> Result<Self> {
        let spec = Self::new(noise_level, atoms)?;
        if !spec.is_normalized() {
            return Err(Error::InvalidSpectrum(format!(
                "total mass {} != 1",
                spec.total_mass()
            )));
        }
        Ok(spec)
    }

    /// Pure white noise of unit variance.
    pub fn white_noise() -> Self {
        Self {
            noise_level: 1.0,
            atoms: Vec::new(),
        }
    }

    pub fn noise_level(&self) -> f64 {
        self.noise_level
    }

    pub fn atoms(&self) -> &[Atom] {
        &self.atoms
    }

    pub fn total_mass(&self) -> f64 {
        self.noise_level + self.atoms.iter().map(|a| a.pair_mass).sum::<f64>()
    }

    pub fn is_normalized(&self) -> bool {
        (self.total_mass() - 1.0).abs() <= NORMALIZATION_TOL
    }

    /// The `2s` individual atoms as `(location, mass)`, ordered
    /// `-θ_s, …, -θ_1, θ_1, …, θ_s`.
    pub fn individual_atoms(&self) -> Vec<(f64, f64)> {
        let negative = self
            .atoms
            .iter()
            .rev()
            .map(|a| (-a.theta, 0.5 * a.pair_mass));
        let positive = self.atoms.iter().map(|a| (a.theta, 0.5 * a.pair_mass));
        negative.chain(positive).collect()
    }

    /// Largest individual atom mass, 0 without atoms.
    pub fn max_individual_mass(&self) -> f64 {
        self.atoms
            .iter()
            .map(|a| 0.5 * a.pair_mass)
            .fold(0.0, f64::max)
    }
}

/// Empirical correlation of a sampled signal.
///
/// With `m` the mean over all `n` samples,
/// `b(k) = Σ_{p=0}^{n-1-k} ξ(p+k) ξ(p) / (n - k) - m²`.
/// The result is not normalized and may be indefinite.
pub fn estimate_correlation(ts: &TimeSeries, max_lag: usize) -> Result<CorrelationSequence> {
    let n = ts.len();
    if max_lag == 0 || max_lag >= n {
        return Err(Error::LagOutOfRange { max_lag, len: n });
    }
    let mean = ts.samples.iter().sum::<f64>() / n as f64;
    let centered: Vec<f64> = ts.samples.iter().map(|x| x - mean).collect();

    let products = if n.saturating_mul(max_lag + 1) <= DIRECT_WORK_LIMIT {
        lagged_products_direct(&centered, max_lag)
    } else {
        lagged_products_fft(&centered, max_lag)
    };

    // Raw products expand as Σ x(p+k)x(p) + m (head + tail sums) + (n-k) m²,
    // so subtracting m² leaves the partial centered sums below.
    let mut head = centered.iter().sum::<f64>();
    let mut tail = head;
    let mut values = Vec::with_capacity(max_lag + 1);
    for (k, s) in products.into_iter().enumerate() {
        if k > 0 {
            head -= centered[n - k];
            tail -= centered[k - 1];
        }
        values.push((s + mean * (head + tail)) / (n - k) as f64);
    }

    for (k, v) in values.iter().enumerate().skip(1) {
        if v.abs() > values[0] {
            log::warn!("estimated |b({k})| exceeds b(0); estimate is not positive definite");
            break;
        }
    }
    CorrelationSequence::new(values, ts.dt)
}

/// `Σ_{p} x(p+k) x(p)` for `k = 0..=max_lag` by direct summation.
pub(crate) fn lagged_products_direct(x: &[f64], max_lag: usize) -> Vec<f64> {
    let n = x.len();
    (0..=max_lag)
        .map(|k| (0..n - k).map(|p| x[p + k] * x[p]).sum())
        .collect()
}

/// Same sums as [`lagged_products_direct`] through a zero-padded FFT.
pub(crate) fn lagged_products_fft(x: &[f64], max_lag: usize) -> Vec<f64> {
    let size = (x.len() + max_lag + 1).next_power_of_two();
    let mut planner = FftPlanner::new();
    let forward = planner.plan_fft_forward(size);
    let inverse = planner.plan_fft_inverse(size);

    let mut buf: Vec<Complex64> = x.iter().map(|&v| Complex64::new(v, 0.0)).collect();
    buf.resize(size, Complex64::new(0.0, 0.0));
    forward.process(&mut buf);
    for z in buf.iter_mut() {
        *z = Complex64::new(z.norm_sqr(), 0.0);
    }
    inverse.process(&mut buf);
    let scale = 1.0 / size as f64;
    buf[..=max_lag].iter().map(|z| z.re * scale).collect()
}

/// Divides every lag by `b(0)`.
pub fn normalize(corr: &CorrelationSequence) -> Result<CorrelationSequence> {
    let b0 = corr.positive_variance()?;
    let mut values: Vec<f64> = corr.values.iter().map(|v| v / b0).collect();
    values[0] = 1.0;
    Ok(CorrelationSequence {
        values,
        dt: corr.dt,
        normalized: true,
    })
}

/// Exact correlation of a synthetic spectrum on a unit sampling grid:
/// `b(0) = p + Σ m_α`, `b(k) = Σ m_α cos(kθ_α)`.
pub fn analytic_correlation(spec: &SyntheticSpectrum, max_lag: usize) -> CorrelationSequence {
    analytic_correlation_with_dt(spec, max_lag, 1.0)
}

/// [`analytic_correlation`] tagged with a physical sampling interval.
pub fn analytic_correlation_with_dt(
    spec: &SyntheticSpectrum,
    max_lag: usize,
    dt: f64,
) -> CorrelationSequence {
    let mut values = Vec::with_capacity(max_lag + 1);
    values.push(spec.total_mass());
    for k in 1..=max_lag {
        let kf = k as f64;
        values.push(
            spec.atoms
                .iter()
                .map(|a| a.pair_mass * (kf * a.theta).cos())
                .sum(),
        );
    }
    let normalized = spec.is_normalized();
    if normalized {
        values[0] = 1.0;
    }
    CorrelationSequence {
        values,
        dt,
        normalized,
    }
}

fn check_interval(dt: f64) -> Result<()> {
    if dt.is_finite() && dt > 0.0 {
        Ok(())
    } else {
        Err(Error::InvalidInterval(dt))
    }
}
