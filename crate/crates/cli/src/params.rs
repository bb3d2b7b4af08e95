//! Flat `key = value` run configuration shared by config files and presets.

use std::collections::BTreeMap;
use std::path::Path;
use std::str::FromStr;

use crate::CliError;

/// Values not given on the command line, keyed by flag name without dashes.
#[derive(Debug, Clone, Default)]
pub struct Params {
    values: BTreeMap<String, String>,
    origin: BTreeMap<String, String>,
}

impl Params {
    pub fn parse(text: &str, origin: &str) -> Result<Self, CliError> {
        let mut params = Params::default();
        for (n, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (key, value) = line
                .split_once('=')
                .ok_or_else(|| CliError::Usage(format!("{origin}:{}: expected `key = value`", n + 1)))?;
            let key = key.trim().trim_start_matches("--");
            let value = value.trim();
            if key.is_empty() || value.is_empty() {
                return Err(CliError::Usage(format!("{origin}:{}: empty key or value", n + 1)));
            }
            if params.values.contains_key(key) {
                return Err(CliError::Usage(format!("{origin}:{}: `{key}` given twice", n + 1)));
            }
            params.set(key, value, &format!("{origin}:{}", n + 1));
        }
        Ok(params)
    }

    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Usage(format!("cannot read config {}: {e}", path.display())))?;
        Params::parse(&text, &path.display().to_string())
    }

    pub fn set(&mut self, key: &str, value: &str, origin: &str) {
        self.values.insert(key.to_string(), value.to_string());
        self.origin.insert(key.to_string(), origin.to_string());
    }

    /// Entries of `other` replace entries of `self`.
    pub fn overlay(mut self, other: Params) -> Self {
        self.values.extend(other.values);
        self.origin.extend(other.origin);
        self
    }

    /// Fills `slot` from the stored value unless the flag was given.
    pub fn fill<T: FromStr>(&mut self, slot: &mut Option<T>, key: &str) -> Result<(), CliError>
    where
        T::Err: std::fmt::Display,
    {
        if let Some(v) = self.values.remove(key) {
            let origin = self.origin.remove(key).unwrap_or_default();
            if slot.is_none() {
                let parsed = v.parse::<T>().map_err(|e| CliError::Usage(format!("{origin}: bad value for `{key}`: {e}")))?;
                *slot = Some(parsed);
            }
        }
        Ok(())
    }

    /// Any key left over is not understood by the command.
    pub fn finish(self) -> Result<(), CliError> {
        match self.values.keys().next() {
            None => Ok(()),
            Some(key) => {
                let origin = &self.origin[key];
                Err(CliError::Usage(format!("{origin}: unknown key `{key}`")))
            }
        }
    }
}

pub fn require<T: Copy>(slot: Option<T>, key: &str) -> Result<T, CliError> {
    slot.ok_or_else(|| CliError::Usage(format!("missing required value --{key}")))
}

pub fn finite(value: f64, key: &str) -> Result<f64, CliError> {
    if value.is_finite() {
        Ok(value)
    } else {
        Err(CliError::Usage(format!("--{key} must be finite (got {value})")))
    }
}
