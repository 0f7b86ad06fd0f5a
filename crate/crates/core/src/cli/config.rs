use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use super::CliError;
use crate::mockverify::TauPoint;

/// Run settings. Loaded from an optional TOML file, then overridden by flags.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Config {
    pub truncation_order: usize,
    pub precision_digits: u32,
    pub tolerance: f64,
    pub tau_grid: Vec<TauPoint>,
    pub data_paths: Vec<PathBuf>,
}

impl Default for Config {
    fn default() -> Self {
        Config {
            truncation_order: 60,
            precision_digits: 34,
            tolerance: 1e-6,
            tau_grid: Vec::new(),
            data_paths: Vec::new(),
        }
    }
}

/// Flag values; `None` or empty means "keep the file value".
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Overrides {
    pub truncation_order: Option<usize>,
    pub precision_digits: Option<u32>,
    pub tolerance: Option<f64>,
    pub tau_grid: Vec<TauPoint>,
    pub data_paths: Vec<PathBuf>,
}

impl Config {
    pub fn from_toml(text: &str) -> Result<Self, CliError> {
        let cfg: Config = toml::from_str(text).map_err(|e| CliError::Config(e.to_string()))?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
        Config::from_toml(&text)
    }

    /// Relative data paths in a config file are taken relative to that file.
    pub fn load_relative(path: &Path) -> Result<Self, CliError> {
        let mut cfg = Config::load(path)?;
        if let Some(dir) = path.parent() {
            for p in &mut cfg.data_paths {
                if p.is_relative() {
                    *p = dir.join(&*p);
                }
            }
        }
        Ok(cfg)
    }

    pub fn apply(mut self, o: &Overrides) -> Result<Self, CliError> {
        if let Some(n) = o.truncation_order {
            self.truncation_order = n;
        }
        if let Some(d) = o.precision_digits {
            self.precision_digits = d;
        }
        if let Some(t) = o.tolerance {
            self.tolerance = t;
        }
        if !o.tau_grid.is_empty() {
            self.tau_grid = o.tau_grid.clone();
        }
        if !o.data_paths.is_empty() {
            self.data_paths = o.data_paths.clone();
        }
        self.validate()?;
        Ok(self)
    }

    pub fn validate(&self) -> Result<(), CliError> {
        if !(self.tolerance > 0.0 && self.tolerance.is_finite()) {
            return Err(CliError::Config(format!(
                "tolerance must be positive, got {}",
                self.tolerance
            )));
        }
        if self.truncation_order < 10 {
            return Err(CliError::Config(format!(
                "truncation_order must be at least 10, got {}",
                self.truncation_order
            )));
        }
        if self.precision_digits == 0 {
            return Err(CliError::Config("precision_digits must be positive".into()));
        }
        for p in &self.tau_grid {
            p.validate().map_err(|e| CliError::Config(e.to_string()))?;
        }
        Ok(())
    }
}

/// Parses `re,im`.
pub fn parse_tau(s: &str) -> Result<TauPoint, String> {
    let (re, im) = s
        .split_once(',')
        .ok_or_else(|| format!("expected re,im but got {s:?}"))?;
    let re: f64 = re.trim().parse().map_err(|e| format!("{re:?}: {e}"))?;
    let im: f64 = im.trim().parse().map_err(|e| format!("{im:?}: {e}"))?;
    TauPoint::checked(re, im).map_err(|e| e.to_string())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn defaults_and_overrides() {
        let cfg = Config::from_toml("tolerance = 1e-4\ntau_grid = [{ re = 0.1, im = 1.0 }]").unwrap();
        assert_eq!(cfg.truncation_order, 60);
        assert_eq!(cfg.precision_digits, 34);
        assert_eq!(cfg.tau_grid, vec![TauPoint::new(0.1, 1.0)]);
        let o = Overrides {
            tolerance: Some(1e-8),
            ..Default::default()
        };
        let cfg = cfg.apply(&o).unwrap();
        assert_eq!(cfg.tolerance, 1e-8);
        assert_eq!(cfg.tau_grid.len(), 1);
    }

    #[test]
    fn invalid_values_rejected() {
        assert!(Config::from_toml("tolerance = 0.0").is_err());
        assert!(Config::from_toml("truncation_order = 9").is_err());
        assert!(Config::from_toml("unknown = 1").is_err());
        assert!(Config::from_toml("tau_grid = [{ re = 0.0, im = -1.0 }]").is_err());
    }

    #[test]
    fn tau_parsing() {
        assert_eq!(parse_tau("0.25, 1.5").unwrap(), TauPoint::new(0.25, 1.5));
        assert!(parse_tau("1.0").is_err());
        assert!(parse_tau("0,0").is_err());
    }
}
