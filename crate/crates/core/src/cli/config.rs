//! Run configuration: `key=value` files overridden by flags.

use std::path::PathBuf;

use thiserror::Error;

use crate::covering::DEFAULT_FLOAT_MARGIN;
use crate::zonotope::MAX_STEP_EXPONENT;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ConfigError {
    #[error("config line {line}: {message}")]
    Syntax { line: usize, message: String },
    #[error("{0}")]
    Invalid(String),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum RunMode {
    Exact,
    Float,
}

#[derive(Clone, Debug, PartialEq)]
pub struct RunConfig {
    pub mode: RunMode,
    pub margin: f64,
    pub q: u64,
    pub t_depth: u32,
    pub budget: u64,
    pub threads: Option<usize>,
    pub out: Option<PathBuf>,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            mode: RunMode::Exact,
            margin: DEFAULT_FLOAT_MARGIN,
            q: 24,
            t_depth: MAX_STEP_EXPONENT,
            budget: 1_000_000,
            threads: None,
            out: None,
        }
    }
}

impl RunConfig {
    /// Applies `key=value` lines; `#` starts a comment.
    pub fn apply_file(&mut self, text: &str) -> Result<(), ConfigError> {
        for (i, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let syntax = |message: String| ConfigError::Syntax {
                line: i + 1,
                message,
            };
            let (key, value) = line
                .split_once('=')
                .ok_or_else(|| syntax(format!("expected key=value, got {line:?}")))?;
            self.set(key.trim(), value.trim()).map_err(syntax)?;
        }
        Ok(())
    }

    pub fn set(&mut self, key: &str, value: &str) -> Result<(), String> {
        fn num<T: std::str::FromStr>(key: &str, value: &str) -> Result<T, String> {
            value
                .parse()
                .map_err(|_| format!("bad value {value:?} for {key}"))
        }
        match key {
            "mode" => {
                self.mode = match value {
                    "exact" => RunMode::Exact,
                    "float" => RunMode::Float,
                    _ => return Err(format!("mode must be exact or float, got {value:?}")),
                }
            }
            "margin" => self.margin = num(key, value)?,
            "q" => self.q = num(key, value)?,
            "t_depth" => self.t_depth = num(key, value)?,
            "budget" => self.budget = num(key, value)?,
            "threads" => self.threads = Some(num(key, value)?),
            "out" => self.out = Some(PathBuf::from(value)),
            _ => return Err(format!("unknown key {key:?}")),
        }
        Ok(())
    }

    pub fn validate(&self) -> Result<(), ConfigError> {
        let bad = |m: &str| Err(ConfigError::Invalid(m.to_string()));
        if !(self.margin > 0.0 && self.margin <= 1e-3) {
            return bad("margin must lie in (0, 1e-3]");
        }
        if self.q < 8 {
            return bad("q must be at least 8");
        }
        if self.budget < 1000 {
            return bad("budget must be at least 1000");
        }
        if self.t_depth > 60 {
            return bad("t_depth must be at most 60");
        }
        if self.threads == Some(0) {
            return bad("threads must be positive");
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn file_then_validation() {
        let mut c = RunConfig::default();
        c.apply_file("# settings\nmode = float\nmargin=1e-6\nq=32\nbudget=5000\nout=x.txt\n")
            .unwrap();
        assert_eq!(c.mode, RunMode::Float);
        assert_eq!((c.q, c.budget, c.margin), (32, 5000, 1e-6));
        assert!(c.validate().is_ok());
        c.q = 4;
        assert!(c.validate().is_err());
        assert!(matches!(
            RunConfig::default().apply_file("colour=red"),
            Err(ConfigError::Syntax { line: 1, .. })
        ));
        let mut c = RunConfig::default();
        c.margin = 0.1;
        assert!(c.validate().is_err());
    }
}
