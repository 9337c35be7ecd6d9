//! Line-oriented `key = value` experiment files. Blank lines and lines
//! starting with `#` are ignored; keys are the long flag names without the
//! leading dashes (`qec-gates` and `qec_gates` are the same key).

use std::collections::BTreeMap;
use std::path::Path;
use std::str::FromStr;

use crate::CliError;

pub const KNOWN_KEYS: &[&str] = &[
    "p",
    "d",
    "dim",
    "gates",
    "qec-gates",
    "level",
    "seed",
    "csv",
    "param",
    "from",
    "to",
    "steps",
    "out",
    "target",
    "max-level",
    "trials",
    "backend",
    "pairs",
    "povms",
];

fn canonical(key: &str) -> String {
    let k = key.trim().to_ascii_lowercase().replace('_', "-");
    match k.as_str() {
        "n" => "gates".into(),
        "m" => "qec-gates".into(),
        _ => k,
    }
}

#[derive(Clone, Debug, Default, PartialEq)]
pub struct Config {
    values: BTreeMap<String, String>,
}

impl Config {
    pub fn parse(text: &str) -> Result<Self, CliError> {
        let mut values = BTreeMap::new();
        for (i, raw) in text.lines().enumerate() {
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let (key, value) = line.split_once('=').ok_or_else(|| {
                CliError::Usage(format!(
                    "config line {}: expected key=value, got '{line}'",
                    i + 1
                ))
            })?;
            let key = canonical(key);
            if !KNOWN_KEYS.contains(&key.as_str()) {
                return Err(CliError::Usage(format!(
                    "config line {}: unknown key '{key}'",
                    i + 1
                )));
            }
            values.insert(key, value.trim().to_string());
        }
        Ok(Self { values })
    }

    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path).map_err(|e| {
            CliError::Usage(format!("--config: cannot read {}: {e}", path.display()))
        })?;
        Self::parse(&text)
    }

    pub fn raw(&self, key: &str) -> Option<&str> {
        self.values.get(&canonical(key)).map(String::as_str)
    }

    pub fn get<T: FromStr>(&self, key: &str) -> Result<Option<T>, CliError>
    where
        T::Err: std::fmt::Display,
    {
        self.raw(key)
            .map(|v| {
                v.parse::<T>().map_err(|e| {
                    CliError::Usage(format!("config key '{key}': invalid value '{v}': {e}"))
                })
            })
            .transpose()
    }

    /// `flag` if given on the command line, else the config value, else `default`.
    pub fn resolve<T: FromStr>(&self, flag: Option<T>, key: &str, default: T) -> Result<T, CliError>
    where
        T::Err: std::fmt::Display,
    {
        Ok(self.resolve_opt(flag, key)?.unwrap_or(default))
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
