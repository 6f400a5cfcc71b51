//! Config files mirroring the CLI flags.
//!
//! Two encodings: a JSON object (`{"kind": "case-a", "pfa": 1e-4}`) or
//! plain `key = value` lines with `#` comments. Keys are the long flag
//! names. Values are kept as strings and parsed exactly like flag text,
//! so grids and counts use the same syntax in both places. Flags always
//! override the file.

use std::collections::BTreeMap;
use std::path::Path;
use std::str::FromStr;

use crate::{CliError, CliResult};

#[derive(Debug, Default)]
pub struct ConfigMap {
    entries: BTreeMap<String, String>,
}

impl ConfigMap {
    pub fn empty() -> Self {
        Self::default()
    }

    pub fn load(path: &Path) -> CliResult<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?;
        Self::parse(&text).map_err(|m| CliError::validation(format!("{}: {m}", path.display())))
    }

    fn parse(text: &str) -> Result<Self, String> {
        let trimmed = text.trim_start();
        if trimmed.starts_with('{') {
            Self::parse_json(text)
        } else {
            Self::parse_lines(text)
        }
    }

    fn parse_json(text: &str) -> Result<Self, String> {
        let value: serde_json::Value =
            serde_json::from_str(text).map_err(|e| format!("invalid JSON config: {e}"))?;
        let obj = value
            .as_object()
            .ok_or("JSON config must be an object of flag: value pairs")?;
        let mut entries = BTreeMap::new();
        for (k, v) in obj {
            let s = match v {
                serde_json::Value::String(s) => s.clone(),
                serde_json::Value::Number(n) => n.to_string(),
                serde_json::Value::Bool(b) => b.to_string(),
                other => return Err(format!("config key `{k}` has unsupported value {other}")),
            };
            entries.insert(k.clone(), s);
        }
        Ok(ConfigMap { entries })
    }

    fn parse_lines(text: &str) -> Result<Self, String> {
        let mut entries = BTreeMap::new();
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (k, v) = line
                .split_once('=')
                .ok_or(format!("line {}: expected key = value", lineno + 1))?;
            entries.insert(k.trim().to_owned(), v.trim().to_owned());
        }
        Ok(ConfigMap { entries })
    }

    pub fn get(&self, key: &str) -> Option<&str> {
        self.entries.get(key).map(String::as_str)
    }

    /// Parse a config value if present.
    pub fn get_parse<T: FromStr>(&self, key: &str) -> CliResult<Option<T>> {
        match self.get(key) {
            None => Ok(None),
            Some(raw) => raw.parse::<T>().map(Some).map_err(|_| {
                CliError::validation(format!("config key `{key}`: cannot parse `{raw}`"))
            }),
        }
    }

    /// Flag wins, config fills in, otherwise None.
    pub fn resolve<T: FromStr>(&self, flag: Option<T>, key: &str) -> CliResult<Option<T>> {
        match flag {
            Some(v) => Ok(Some(v)),
            None => self.get_parse(key),
        }
    }

    /// Flag wins, config fills in, missing is a validation error.
    pub fn require<T: FromStr>(&self, flag: Option<T>, key: &str) -> CliResult<T> {
        self.resolve(flag, key)?
            .ok_or_else(|| CliError::validation(format!("missing required parameter --{key}")))
    }
}
