//! Config-file loading and flag/config/default resolution.

use std::collections::BTreeMap;
use std::path::Path;
use std::str::FromStr;

use crate::error::{CliError, CliResult};

const KNOWN_KEYS: &[&str] = &[
    "eta1",
    "eta2",
    "nt",
    "na",
    "nb",
    "ra",
    "rb",
    "pa",
    "pb",
    "grid",
    "seed",
    "format",
    "out",
    "encodings",
    "lemma",
    "case",
    "kappa",
    "scale-a",
    "scale-b",
    "displacement-a",
    "user",
    "objective",
    "ns",
    "splits",
    "draws",
    "samples",
    "tolerance",
];

/// Values read from a config file. Lines are `key = value`; blank lines and
/// lines starting with `#` are ignored.
#[derive(Debug, Default, Clone)]
pub struct ConfigFile {
    values: BTreeMap<String, String>,
}

impl ConfigFile {
    pub fn load(path: &Path) -> CliResult<Self> {
        let text = std::fs::read_to_string(path).map_err(|source| CliError::Io {
            path: path.to_path_buf(),
            source,
        })?;
        Self::parse(&text)
    }

    pub fn parse(text: &str) -> CliResult<Self> {
        let mut values = BTreeMap::new();
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let Some((key, value)) = line.split_once('=') else {
                return Err(CliError::invalid(
                    "config",
                    format!("line {}: expected `key = value`", lineno + 1),
                ));
            };
            let key = key.trim().trim_start_matches("--").replace('_', "-");
            if !KNOWN_KEYS.contains(&key.as_str()) {
                return Err(CliError::invalid(&key, "unknown config key"));
            }
            values.insert(key, value.trim().to_string());
        }
        Ok(ConfigFile { values })
    }

    pub fn get(&self, key: &str) -> Option<&str> {
        self.values.get(key).map(String::as_str)
    }
}

/// Flag value if given, else config value, else `default`.
pub fn resolve<T>(config: &ConfigFile, key: &str, flag: Option<T>, default: T) -> CliResult<T>
where
    T: FromStr,
{
    Ok(resolve_opt(config, key, flag)?.unwrap_or(default))
}

pub fn resolve_opt<T>(config: &ConfigFile, key: &str, flag: Option<T>) -> CliResult<Option<T>>
where
    T: FromStr,
{
    if flag.is_some() {
        return Ok(flag);
    }
    match config.get(key) {
        None => Ok(None),
        Some(v) => v
            .parse()
            .map(Some)
            .map_err(|_| CliError::invalid(key, format!("cannot parse `{v}`"))),
    }
}
