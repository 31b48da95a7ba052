//! Suite configuration: truncation orders, windows, tolerance, sampling.
//!
//! The config file is flat key/value text (`key = value`, one per line,
//! `#` comments); command-line flags override file values.

use std::fmt;

use crate::error::{Error, Result};

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Backend {
    Exact,
    Numeric,
}

impl std::str::FromStr for Backend {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "exact" => Ok(Backend::Exact),
            "numeric" => Ok(Backend::Numeric),
            other => Err(Error::BadConfig(format!("unknown backend {other}"))),
        }
    }
}

#[derive(Clone, Debug)]
pub struct SuiteConfig {
    pub backend: Backend,
    /// nome truncation order P (inclusive)
    pub p_order: i64,
    /// Laurent window M
    pub window: i64,
    /// Fock grade cutoff D
    pub grade: i64,
    /// variable count N
    pub nvars: usize,
    /// symmetric-function degree cutoff
    pub max_degree: i64,
    pub tol: f64,
    pub samples: usize,
    pub seed: u64,
}

impl Default for SuiteConfig {
    fn default() -> Self {
        SuiteConfig {
            backend: Backend::Exact,
            p_order: 4,
            window: 6,
            grade: 6,
            nvars: 2,
            max_degree: 4,
            tol: 1e-10,
            samples: 100,
            seed: 42,
        }
    }
}

impl SuiteConfig {
    pub fn validate(&self) -> Result<()> {
        if self.p_order < 0
            || self.window <= 0
            || self.grade <= 0
            || self.nvars == 0
            || self.max_degree < 0
            || self.tol < 0.0
            || self.samples == 0
        {
            return Err(Error::BadConfig(
                "P >= 0, M > 0, D > 0, N > 0, max-degree >= 0, tol >= 0, samples > 0".into(),
            ));
        }
        Ok(())
    }

    /// Apply one key/value pair (flag names and file keys coincide).
    pub fn set(&mut self, key: &str, value: &str) -> Result<()> {
        let bad = |k: &str, v: &str| Error::BadConfig(format!("bad value {v} for {k}"));
        match key {
            "backend" => self.backend = value.parse()?,
            "P" | "p-order" => self.p_order = value.parse().map_err(|_| bad(key, value))?,
            "M" | "window" => self.window = value.parse().map_err(|_| bad(key, value))?,
            "D" | "grade" => self.grade = value.parse().map_err(|_| bad(key, value))?,
            "N" | "nvars" => self.nvars = value.parse().map_err(|_| bad(key, value))?,
            "max-degree" => self.max_degree = value.parse().map_err(|_| bad(key, value))?,
            "tol" => self.tol = value.parse().map_err(|_| bad(key, value))?,
            "samples" => self.samples = value.parse().map_err(|_| bad(key, value))?,
            "seed" => self.seed = value.parse().map_err(|_| bad(key, value))?,
            other => return Err(Error::BadConfig(format!("unknown key {other}"))),
        }
        Ok(())
    }

    pub fn parse_file(&mut self, text: &str) -> Result<()> {
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (key, value) = line
                .split_once('=')
                .or_else(|| line.split_once(char::is_whitespace))
                .ok_or_else(|| {
                    Error::BadConfig(format!("line {}: expected key = value", lineno + 1))
                })?;
            self.set(key.trim(), value.trim())?;
        }
        Ok(())
    }
}

impl fmt::Display for SuiteConfig {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "backend={} P={} M={} D={} N={} max-degree={} tol={:e} samples={} seed={}",
            match self.backend {
                Backend::Exact => "exact",
                Backend::Numeric => "numeric",
            },
            self.p_order,
            self.window,
            self.grade,
            self.nvars,
            self.max_degree,
            self.tol,
            self.samples,
            self.seed
        )
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn file_roundtrip_and_overrides() {
        let mut cfg = SuiteConfig::default();
        cfg.parse_file("# comment\nP = 3\nbackend exact\ntol = 1e-8\n")
            .unwrap();
        assert_eq!(cfg.p_order, 3);
        assert_eq!(cfg.tol, 1e-8);
        cfg.set("P", "2").unwrap();
        assert_eq!(cfg.p_order, 2);
        assert!(cfg.set("nope", "1").is_err());
        assert!(cfg.validate().is_ok());
        cfg.set("M", "0").unwrap();
        assert!(cfg.validate().is_err());
    }
}
