use std::collections::BTreeMap;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use clap::ValueEnum;

use crate::args::Units;
use crate::error::CliError;

const KEYS: &[&str] = &[
    "radius",
    "thickness",
    "length",
    "pressure",
    "modulus",
    "modulus-factor",
    "format",
    "out",
    "units",
    "load",
    "samples",
    "variable",
    "from",
    "to",
    "points",
    "displacement",
    "profile-out",
    "data",
    "sigma-min",
    "sigma-max",
];

/// Values read from a `key = value` file. Blank lines and lines starting
/// with `#` are ignored; keys may carry a leading `--`.
#[derive(Debug, Default)]
pub struct ConfigFile {
    values: BTreeMap<String, String>,
    origin: Option<PathBuf>,
}

impl ConfigFile {
    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path).map_err(|e| {
            CliError::Validation(format!("cannot read config {}: {e}", path.display()))
        })?;
        let mut cfg = Self::parse(&text).map_err(|msg| {
            CliError::Validation(format!("{}: {msg}", path.display()))
        })?;
        cfg.origin = Some(path.to_path_buf());
        Ok(cfg)
    }

    pub fn parse(text: &str) -> Result<Self, String> {
        let mut values = BTreeMap::new();
        for (i, raw) in text.lines().enumerate() {
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let (key, value) = line
                .split_once('=')
                .ok_or_else(|| format!("line {}: expected `key = value`", i + 1))?;
            let key = key.trim().trim_start_matches("--");
            if !KEYS.contains(&key) {
                return Err(format!("line {}: unknown key `{key}`", i + 1));
            }
            let value = value.trim().trim_matches('"');
            if values.insert(key.to_string(), value.to_string()).is_some() {
                return Err(format!("line {}: duplicate key `{key}`", i + 1));
            }
        }
        Ok(Self {
            values,
            origin: None,
        })
    }

    fn raw(&self, key: &str) -> Option<&str> {
        self.values.get(key).map(String::as_str)
    }

    fn bad(&self, key: &str, value: &str) -> CliError {
        let from = self
            .origin
            .as_ref()
            .map_or(String::new(), |p| format!(" in {}", p.display()));
        CliError::Validation(format!("invalid value `{value}` for `{key}`{from}"))
    }

    /// The flag value if given, otherwise the parsed config value.
    pub fn pick<T: FromStr>(&self, key: &str, flag: Option<T>) -> Result<Option<T>, CliError> {
        if flag.is_some() {
            return Ok(flag);
        }
        match self.raw(key) {
            None => Ok(None),
            Some(v) => v.parse().map(Some).map_err(|_| self.bad(key, v)),
        }
    }

    pub fn pick_enum<T: ValueEnum>(&self, key: &str, flag: Option<T>) -> Result<Option<T>, CliError> {
        if flag.is_some() {
            return Ok(flag);
        }
        match self.raw(key) {
            None => Ok(None),
            Some(v) => T::from_str(v, true).map(Some).map_err(|_| self.bad(key, v)),
        }
    }
}

/// Quantity kinds that `--units kpa-mm` rescales on ingest.
#[derive(Debug, Clone, Copy)]
pub enum Kind {
    Length,
    Stress,
    Plain,
}

pub fn to_si(units: Units, kind: Kind, value: f64) -> f64 {
    match (units, kind) {
        (Units::Si, _) | (_, Kind::Plain) => value,
        (Units::KpaMm, Kind::Length) => value * 1e-3,
        (Units::KpaMm, Kind::Stress) => value * 1e3,
    }
}
