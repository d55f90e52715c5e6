//! Analysis settings: defaults, overridden by a TOML config file, overridden
//! by command-line flags.

use std::fs;
use std::path::Path;

use serde::Deserialize;

use crate::error::CliError;

pub const DEFAULT_MAX_LAG: usize = 1024;
pub const DEFAULT_GRID: usize = 3000;
pub const DEFAULT_SCAN_SIZES: [usize; 3] = [100, 300, 500];
pub const DEFAULT_MIN_MASS: f64 = 0.02;
pub const DEFAULT_PLATEAU_THRESHOLD: f64 = 0.005;
pub const DEFAULT_DT: f64 = 0.08;
const DEFAULT_CURVE_POINTS: usize = 24;
const DEFAULT_CURVE_START: usize = 16;
const DEFAULT_CURVE_CAP: usize = 4096;

/// Keys accepted in a `--config` file. All optional.
#[derive(Debug, Clone, Default, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConfigFile {
    pub dt: Option<f64>,
    pub max_lag: Option<usize>,
    pub sizes: Option<Vec<usize>>,
    pub grid: Option<usize>,
    pub scan_sizes: Option<Vec<usize>>,
    pub min_mass: Option<f64>,
    pub plateau_threshold: Option<f64>,
    pub seed: Option<u64>,
}

impl ConfigFile {
    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
        toml::from_str(&text)
            .map_err(|e| CliError::Usage(format!("{}: {e}", path.display())))
    }

    /// Keys set in `other` replace those in `self`.
    pub fn overridden_by(self, other: ConfigFile) -> ConfigFile {
        ConfigFile {
            dt: other.dt.or(self.dt),
            max_lag: other.max_lag.or(self.max_lag),
            sizes: other.sizes.or(self.sizes),
            grid: other.grid.or(self.grid),
            scan_sizes: other.scan_sizes.or(self.scan_sizes),
            min_mass: other.min_mass.or(self.min_mass),
            plateau_threshold: other.plateau_threshold.or(self.plateau_threshold),
            seed: other.seed.or(self.seed),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct AnalysisConfig {
    pub max_lag: usize,
    /// Truncation sizes for the diagnostic curves.
    pub sizes: Vec<usize>,
    pub grid_count: usize,
    pub scan_sizes: Vec<usize>,
    pub min_mass: f64,
    pub plateau_threshold: f64,
    pub dt: f64,
    /// Start-vector seed for the eigen solver.
    pub seed: u64,
}

impl Default for AnalysisConfig {
    fn default() -> Self {
        Self::resolve(ConfigFile::default(), None).expect("defaults are valid")
    }
}

impl AnalysisConfig {
    /// Fills unset keys with defaults; `header_dt` (from the signal file)
    /// sits between the explicit settings and the default interval.
    pub fn resolve(settings: ConfigFile, header_dt: Option<f64>) -> Result<Self, CliError> {
        let max_lag = settings.max_lag.unwrap_or(DEFAULT_MAX_LAG);
        if max_lag == 0 {
            return Err(CliError::Usage("max_lag must be positive".into()));
        }
        let sizes = match settings.sizes {
            Some(s) => s,
            None => default_sizes(max_lag),
        };
        let config = Self {
            max_lag,
            sizes,
            grid_count: settings.grid.unwrap_or(DEFAULT_GRID),
            scan_sizes: settings
                .scan_sizes
                .unwrap_or_else(|| DEFAULT_SCAN_SIZES.to_vec()),
            min_mass: settings.min_mass.unwrap_or(DEFAULT_MIN_MASS),
            plateau_threshold: settings
                .plateau_threshold
                .unwrap_or(DEFAULT_PLATEAU_THRESHOLD),
            dt: settings.dt.or(header_dt).unwrap_or(DEFAULT_DT),
            seed: settings.seed.unwrap_or(0),
        };
        config.validate()?;
        Ok(config)
    }

    pub fn validate(&self) -> Result<(), CliError> {
        let usage = |m: String| Err(CliError::Usage(m));
        if self.sizes.is_empty() {
            return usage("sizes must not be empty".into());
        }
        if self.sizes.windows(2).any(|w| w[1] <= w[0]) {
            return usage("sizes must be strictly increasing".into());
        }
        for (name, list) in [("sizes", &self.sizes), ("scan_sizes", &self.scan_sizes)] {
            if let Some(bad) = list.iter().find(|&&n| n == 0 || n > self.max_lag + 1) {
                return usage(format!(
                    "{name} entry {bad} must lie in 1..={}",
                    self.max_lag + 1
                ));
            }
        }
        if self.scan_sizes.is_empty() {
            return usage("scan_sizes must not be empty".into());
        }
        if self.grid_count < spectral_jumps::jump_detector::MIN_GRID_COUNT {
            return usage(format!(
                "grid must be >= {}",
                spectral_jumps::jump_detector::MIN_GRID_COUNT
            ));
        }
        for (name, v) in [
            ("min_mass", self.min_mass),
            ("plateau_threshold", self.plateau_threshold),
            ("dt", self.dt),
        ] {
            if !(v.is_finite() && v > 0.0) {
                return usage(format!("{name} must be positive, got {v}"));
            }
        }
        Ok(())
    }
}

/// Geometric grid from 16 to `min(max_lag, 4096)` with 24 points, rounded
/// and deduplicated.
pub fn default_sizes(max_lag: usize) -> Vec<usize> {
    let top = max_lag.min(DEFAULT_CURVE_CAP);
    if top <= DEFAULT_CURVE_START {
        return (1..=top).collect();
    }
    let ratio = (top as f64 / DEFAULT_CURVE_START as f64).ln();
    let mut sizes: Vec<usize> = (0..DEFAULT_CURVE_POINTS)
        .map(|i| {
            let f = i as f64 / (DEFAULT_CURVE_POINTS - 1) as f64;
            (DEFAULT_CURVE_START as f64 * (ratio * f).exp()).round() as usize
        })
        .collect();
    sizes.dedup();
    *sizes.last_mut().expect("non-empty") = top;
    sizes
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn default_grid() {
        let s = default_sizes(1024);
        assert_eq!(s.len(), 24);
        assert_eq!(s[0], 16);
        assert_eq!(*s.last().unwrap(), 1024);
        assert!(s.windows(2).all(|w| w[1] > w[0]));
        assert_eq!(*default_sizes(100_000).last().unwrap(), 4096);
        assert_eq!(default_sizes(8), (1..=8).collect::<Vec<_>>());
        let small = default_sizes(20);
        assert!(small.windows(2).all(|w| w[1] > w[0]));
    }

    #[test]
    fn defaults() {
        let c = AnalysisConfig::default();
        assert_eq!(c.max_lag, 1024);
        assert_eq!(c.grid_count, 3000);
        assert_eq!(c.scan_sizes, vec![100, 300, 500]);
        assert_eq!(c.dt, 0.08);
        assert_eq!(c.min_mass, 0.02);
        assert_eq!(c.plateau_threshold, 0.005);
    }

    #[test]
    fn precedence() {
        let file: ConfigFile = toml::from_str("dt = 0.5\ngrid = 100\nmin_mass = 0.1").unwrap();
        let flags = ConfigFile {
            grid: Some(200),
            ..Default::default()
        };
        let c = AnalysisConfig::resolve(file.overridden_by(flags), Some(0.01)).unwrap();
        assert_eq!(c.grid_count, 200);
        assert_eq!(c.dt, 0.5);
        assert_eq!(c.min_mass, 0.1);
        let c = AnalysisConfig::resolve(ConfigFile::default(), Some(0.01)).unwrap();
        assert_eq!(c.dt, 0.01);
    }

    #[test]
    fn invalid_settings() {
        let bad = |f: ConfigFile| AnalysisConfig::resolve(f, None).unwrap_err().exit_code();
        assert_eq!(bad(ConfigFile { grid: Some(15), ..Default::default() }), 1);
        assert_eq!(bad(ConfigFile { max_lag: Some(10), scan_sizes: Some(vec![12]), ..Default::default() }), 1);
        assert_eq!(bad(ConfigFile { sizes: Some(vec![4, 4]), ..Default::default() }), 1);
        assert_eq!(bad(ConfigFile { min_mass: Some(0.0), ..Default::default() }), 1);
        assert!(toml::from_str::<ConfigFile>("bogus = 1").is_err());
    }
}
