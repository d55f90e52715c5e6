//! Ground-truth signal generators and decay-ratio conversions.

use std::f64::consts::PI;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha20Rng;
use rand_distr::StandardNormal;

use crate::correlation::{analytic_correlation, SyntheticSpectrum, TimeSeries};
use crate::error::{Error, Result};
use crate::toeplitz_norms::hs_ratio;

/// Seeded random stream backing every generator.
///
/// The generator is ChaCha20 (20 rounds, `seed_from_u64` key expansion), a
/// counter-based stream cipher whose output is fixed by its published
/// constants and independent of platform. Gaussian draws use the ziggurat
/// sampler of `rand_distr`.
#[derive(Debug, Clone)]
pub struct RngStream {
    seed: u64,
    rng: ChaCha20Rng,
}

impl RngStream {
    pub const ALGORITHM: &'static str = "chacha20";

    pub fn new(seed: u64) -> Self {
        Self {
            seed,
            rng: ChaCha20Rng::seed_from_u64(seed),
        }
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn standard_normal(&mut self) -> f64 {
        self.rng.sample(StandardNormal)
    }

    /// Uniform on `[0, 1)`.
    pub fn uniform(&mut self) -> f64 {
        self.rng.random::<f64>()
    }
}

/// Random-phase cosines in white noise:
/// `ξ(t) = √p w(t) + Σ_α √(2 m_α) cos(θ_α t + φ_α)`, `t = 0..n`.
///
/// Phases are drawn first (one per atom pair, in order), then the noise
/// samples. The process correlation is `p δ_k + Σ m_α cos(k θ_α)`.
pub fn simulate_cosine_noise(spec: &SyntheticSpectrum, n: usize, seed: u64) -> Result<TimeSeries> {
    simulate_cosine_noise_with_dt(spec, n, seed, 1.0)
}

/// [`simulate_cosine_noise`] with a physical sampling interval attached.
pub fn simulate_cosine_noise_with_dt(
    spec: &SyntheticSpectrum,
    n: usize,
    seed: u64,
    dt: f64,
) -> Result<TimeSeries> {
    if !spec.is_normalized() {
        return Err(Error::InvalidSpectrum(format!(
            "simulation requires total mass 1, got {}",
            spec.total_mass()
        )));
    }
    if n == 0 {
        return Err(Error::EmptySeries);
    }
    let mut rng = RngStream::new(seed);
    let phases: Vec<f64> = spec
        .atoms()
        .iter()
        .map(|_| 2.0 * PI * rng.uniform())
        .collect();
    let noise_amp = spec.noise_level().sqrt();
    let samples = (0..n)
        .map(|t| {
            let tf = t as f64;
            let tones: f64 = spec
                .atoms()
                .iter()
                .zip(&phases)
                .map(|(a, phi)| (2.0 * a.pair_mass).sqrt() * (a.theta * tf + phi).cos())
                .sum();
            let w = if noise_amp > 0.0 {
                noise_amp * rng.standard_normal()
            } else {
                0.0
            };
            w + tones
        })
        .collect();
    TimeSeries::new(samples, dt)
}

/// Parameters of the colored-noise oscillator
/// `ξ'' + c ξ' + U(ξ) = F`, `τ F' + F = W`, `⟨W(t)W(s)⟩ = D δ(t - s)`,
/// with `U(ξ) = a1 ξ + a2 ξ² + a3 ξ³`.
#[derive(Debug, Clone, PartialEq)]
pub struct LangevinParams {
    pub c: f64,
    pub a1: f64,
    pub a2: f64,
    pub a3: f64,
    pub d: f64,
    pub tau: f64,
    /// Integration step in seconds.
    pub dt: f64,
    pub n_samples: usize,
    pub seed: u64,
    /// Integration steps per emitted sample.
    pub output_stride: usize,
    /// Steps discarded before the first emitted sample; `None` means
    /// `ceil(10 τ / dt)`.
    pub burn_in_steps: Option<usize>,
}

impl LangevinParams {
    /// Linear oscillator at 0.5 Hz (`a1 = 9.87`) with `D = 500`, `τ = 0.6`,
    /// emitted every 0.08 s (step 0.01 s, stride 8), 4209 samples. `c` sets
    /// the damping; 0.689 gives a decay ratio of 0.5 and 0.105 of 0.9.
    pub fn reactor_analog(c: f64, seed: u64) -> Self {
        Self {
            c,
            a1: 9.87,
            a2: 0.0,
            a3: 0.0,
            d: 500.0,
            tau: 0.6,
            dt: 0.01,
            n_samples: 4209,
            seed,
            output_stride: 8,
            burn_in_steps: None,
        }
    }

    /// Interval between emitted samples.
    pub fn emitted_dt(&self) -> f64 {
        self.dt * self.output_stride as f64
    }

    pub fn burn_in(&self) -> usize {
        self.burn_in_steps
            .unwrap_or_else(|| (10.0 * self.tau / self.dt).ceil() as usize)
    }

    pub fn validate(&self) -> Result<()> {
        let finite = [self.c, self.a1, self.a2, self.a3, self.d, self.tau, self.dt];
        if finite.iter().any(|v| !v.is_finite()) {
            return Err(Error::InvalidParameter("non-finite Langevin parameter".into()));
        }
        if self.c < 0.0 {
            return Err(Error::InvalidParameter(format!("c must be >= 0, got {}", self.c)));
        }
        if self.d < 0.0 {
            return Err(Error::InvalidParameter(format!("D must be >= 0, got {}", self.d)));
        }
        if !(self.tau > 0.0) {
            return Err(Error::InvalidParameter(format!("tau must be > 0, got {}", self.tau)));
        }
        if !(self.dt > 0.0) {
            return Err(Error::InvalidParameter(format!("dt must be > 0, got {}", self.dt)));
        }
        if self.n_samples == 0 {
            return Err(Error::InvalidParameter("n_samples must be > 0".into()));
        }
        if self.output_stride == 0 {
            return Err(Error::InvalidParameter("output_stride must be >= 1".into()));
        }
        if self.dt > self.tau / 10.0 {
            return Err(Error::InvalidParameter(format!(
                "step {} exceeds tau/10 = {}",
                self.dt,
                self.tau / 10.0
            )));
        }
        let freq_limit = 0.1 / self.a1.max(1.0).sqrt();
        if self.dt > freq_limit {
            return Err(Error::InvalidParameter(format!(
                "step {} exceeds 0.1/sqrt(max(a1, 1)) = {freq_limit}",
                self.dt
            )));
        }
        Ok(())
    }
}

/// Euler–Maruyama integration of the augmented state `(ξ, v, F)` from rest.
///
/// Per step: `ξ += dt v`, `v += dt (-c v - U(ξ) + F)`,
/// `F += -dt F/τ + √(D dt)/τ g` with `g` standard normal, all right-hand
/// sides evaluated at the old state.
pub fn simulate_langevin(params: &LangevinParams) -> Result<TimeSeries> {
    params.validate()?;
    let LangevinParams {
        c, a1, a2, a3, d, tau, dt, ..
    } = *params;
    let mut rng = RngStream::new(params.seed);
    let noise_scale = (d * dt).sqrt() / tau;
    let (mut x, mut v, mut f) = (0.0f64, 0.0f64, 0.0f64);
    let step = |x: &mut f64, v: &mut f64, f: &mut f64, rng: &mut RngStream| {
        let g = rng.standard_normal();
        let force = a1 * *x + a2 * *x * *x + a3 * *x * *x * *x;
        let nx = *x + dt * *v;
        let nv = *v + dt * (-c * *v - force + *f);
        let nf = *f - dt * *f / tau + noise_scale * g;
        *x = nx;
        *v = nv;
        *f = nf;
    };
    for _ in 0..params.burn_in() {
        step(&mut x, &mut v, &mut f, &mut rng);
    }
    let mut samples = Vec::with_capacity(params.n_samples);
    while samples.len() < params.n_samples {
        samples.push(x);
        for _ in 0..params.output_stride {
            step(&mut x, &mut v, &mut f, &mut rng);
        }
        if !x.is_finite() {
            return Err(Error::InvalidParameter(
                "integration diverged; reduce the step".into(),
            ));
        }
    }
    TimeSeries::new(samples, params.emitted_dt())
}

/// Ratio of consecutive maxima of the damped oscillator
/// `ξ'' + c ξ' + ω² ξ = 0` with `ω² = a1`: `exp(-2πc / √(4ω² - c²))`.
pub fn decay_ratio(c: f64, a1: f64) -> Result<f64> {
    if !(a1 > 0.0 && a1.is_finite()) {
        return Err(Error::InvalidParameter(format!("a1 must be > 0, got {a1}")));
    }
    if !(c >= 0.0 && c.is_finite()) {
        return Err(Error::InvalidParameter(format!("c must be >= 0, got {c}")));
    }
    let limit = 2.0 * a1.sqrt();
    if c >= limit {
        return Err(Error::Overdamped { c, limit });
    }
    Ok((-2.0 * PI * c / (4.0 * a1 - c * c).sqrt()).exp())
}

/// Inverse of [`decay_ratio`] in `c`: `c = 2ωL / √(4π² + L²)`,
/// `L = -ln(dr)`.
pub fn damping_for_dr(dr: f64, a1: f64) -> Result<f64> {
    if !(dr > 0.0 && dr <= 1.0) {
        return Err(Error::InvalidParameter(format!("dr must lie in (0, 1], got {dr}")));
    }
    if !(a1 > 0.0 && a1.is_finite()) {
        return Err(Error::InvalidParameter(format!("a1 must be > 0, got {a1}")));
    }
    let l = -dr.ln();
    Ok(2.0 * a1.sqrt() * l / (4.0 * PI * PI + l * l).sqrt())
}

/// Exact `‖Q_N‖₂² / N²` of a normalized synthetic spectrum.
pub fn analytic_hs_ratio(spec: &SyntheticSpectrum, n: usize) -> Result<f64> {
    if !spec.is_normalized() {
        return Err(Error::InvalidSpectrum(format!(
            "expected total mass 1, got {}",
            spec.total_mass()
        )));
    }
    if n == 0 {
        return Err(Error::SizeOutOfRange { size: 0, available: usize::MAX });
    }
    hs_ratio(&analytic_correlation(spec, n - 1), n)
}
