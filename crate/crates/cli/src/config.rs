//! `key = value` configuration files and flag/config/default precedence.
//!
//! Lines are `key = value`, `#` starts a comment. Keys use the long flag
//! names (dashes or underscores both accepted); keys for other subcommands
//! are ignored so one file can drive several commands.

use std::collections::HashMap;
use std::path::Path;
use std::str::FromStr;

use crate::CliError;

#[derive(Debug, Default)]
pub struct Config {
    values: HashMap<String, String>,
}

impl Config {
    pub fn load(path: Option<&Path>) -> Result<Self, CliError> {
        let Some(path) = path else {
            return Ok(Config::default());
        };
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Usage(format!("cannot read config {}: {e}", path.display())))?;
        let mut values = HashMap::new();
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (key, value) = line.split_once('=').ok_or_else(|| {
                CliError::Usage(format!(
                    "{}:{}: expected `key = value`",
                    path.display(),
                    lineno + 1
                ))
            })?;
            values.insert(normalize(key.trim()), value.trim().to_string());
        }
        Ok(Config { values })
    }

    fn raw(&self, key: &str) -> Option<&str> {
        self.values.get(&normalize(key)).map(|s| s.as_str())
    }

    /// Typed lookup; a present-but-unparsable value is a usage error.
    pub fn get<T: FromStr>(&self, key: &str) -> Result<Option<T>, CliError>
    where
        T::Err: std::fmt::Display,
    {
        match self.raw(key) {
            None => Ok(None),
            Some(s) => s
                .parse()
                .map(Some)
                .map_err(|e| CliError::Usage(format!("config key `{key}`: {e}"))),
        }
    }

    /// flag > config > default.
    pub fn resolve<T: FromStr>(&self, flag: Option<T>, key: &str, default: T) -> Result<T, CliError>
    where
        T::Err: std::fmt::Display,
    {
        match flag {
            Some(v) => Ok(v),
            None => Ok(self.get(key)?.unwrap_or(default)),
        }
    }

    /// flag > config, with no default: missing is a usage error.
    pub fn require<T: FromStr>(&self, flag: Option<T>, key: &str) -> Result<T, CliError>
    where
        T::Err: std::fmt::Display,
    {
        match flag {
            Some(v) => Ok(v),
            None => self.get(key)?.ok_or_else(|| {
                CliError::Usage(format!(
                    "missing required parameter `--{key}` (or config key)"
                ))
            }),
        }
    }

    pub fn resolve_opt<T: FromStr>(&self, flag: Option<T>, key: &str) -> Result<Option<T>, CliError>
    where
        T::Err: std::fmt::Display,
    {
        match flag {
            Some(v) => Ok(Some(v)),
            None => self.get(key),
        }
    }
}

fn normalize(key: &str) -> String {
    key.replace('-', "_")
}

/// `700,180,8` -> vec![700, 180, 8].
pub fn parse_u64_list(s: &str) -> Result<Vec<u64>, CliError> {
    s.split(',')
        .map(|p| {
            p.trim()
                .parse()
                .map_err(|e| CliError::Usage(format!("bad list entry `{p}`: {e}")))
        })
        .collect()
}

/// `30=2.0,40=2.5` -> vec![(30, 2.0), (40, 2.5)].
pub fn parse_baseline(s: &str) -> Result<Vec<(u64, f64)>, CliError> {
    s.split(',')
        .map(|pair| {
            let (k, m) = pair.split_once('=').ok_or_else(|| {
                CliError::Usage(format!("bad baseline entry `{pair}`: expected k=m"))
            })?;
            let k = k
                .trim()
                .parse()
                .map_err(|e| CliError::Usage(format!("bad baseline k `{k}`: {e}")))?;
            let m = m
                .trim()
                .parse()
                .map_err(|e| CliError::Usage(format!("bad baseline m `{m}`: {e}")))?;
            Ok((k, m))
        })
        .collect()
}
