//! Flat `key = value` configuration files.
//!
//! Blank lines and lines starting with `#` are ignored. Keys are
//! case-sensitive; a repeated key is an error.

use std::collections::BTreeMap;
use std::str::FromStr;

use thiserror::Error;

#[derive(Debug, Error, PartialEq)]
pub enum ConfigError {
    #[error("line {line}: expected `key = value`, got {text:?}")]
    Syntax { line: usize, text: String },
    #[error("line {line}: duplicate key `{key}`")]
    Duplicate { line: usize, key: String },
    #[error("unknown key `{0}`")]
    UnknownKey(String),
    #[error("key `{key}`: cannot parse {value:?}")]
    BadValue { key: String, value: String },
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct ConfigFile {
    entries: BTreeMap<String, String>,
}

impl ConfigFile {
    pub fn parse(text: &str) -> Result<Self, ConfigError> {
        let mut entries = BTreeMap::new();
        for (i, raw) in text.lines().enumerate() {
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let Some((k, v)) = line.split_once('=') else {
                return Err(ConfigError::Syntax { line: i + 1, text: raw.to_string() });
            };
            let (k, v) = (k.trim(), v.trim());
            if k.is_empty() {
                return Err(ConfigError::Syntax { line: i + 1, text: raw.to_string() });
            }
            if entries.insert(k.to_string(), v.to_string()).is_some() {
                return Err(ConfigError::Duplicate { line: i + 1, key: k.to_string() });
            }
        }
        Ok(Self { entries })
    }

    pub fn keys(&self) -> impl Iterator<Item = &str> {
        self.entries.keys().map(String::as_str)
    }

    /// Rejects keys outside `allowed`.
    pub fn check_keys(&self, allowed: &[&str]) -> Result<(), ConfigError> {
        match self.keys().find(|k| !allowed.contains(k)) {
            Some(k) => Err(ConfigError::UnknownKey(k.to_string())),
            None => Ok(()),
        }
    }

    pub fn get<T: FromStr>(&self, key: &str) -> Result<Option<T>, ConfigError> {
        self.entries
            .get(key)
            .map(|v| v.parse().map_err(|_| ConfigError::BadValue { key: key.to_string(), value: v.clone() }))
            .transpose()
    }

    /// Flag value if given, else the file value, else `default`.
    pub fn resolve<T: FromStr>(&self, flag: Option<T>, key: &str, default: T) -> Result<T, ConfigError> {
        match flag {
            Some(v) => Ok(v),
            None => Ok(self.get(key)?.unwrap_or(default)),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_and_resolves() {
        let c = ConfigFile::parse("# comment\nalpha = 0.25\n\n  m=2\nformat = json\n").unwrap();
        assert_eq!(c.get::<f64>("alpha").unwrap(), Some(0.25));
        assert_eq!(c.resolve(Some(0.5), "alpha", 0.0).unwrap(), 0.5);
        assert_eq!(c.resolve(None, "alpha", 0.0).unwrap(), 0.25);
        assert_eq!(c.resolve(None, "g", 1.0).unwrap(), 1.0);
        assert_eq!(c.get::<String>("format").unwrap().as_deref(), Some("json"));
        assert!(c.check_keys(&["alpha", "m", "format"]).is_ok());
        assert_eq!(c.check_keys(&["alpha"]), Err(ConfigError::UnknownKey("format".into())));
    }

    #[test]
    fn rejects_malformed_input() {
        assert!(matches!(ConfigFile::parse("alpha 0.1"), Err(ConfigError::Syntax { line: 1, .. })));
        assert!(matches!(ConfigFile::parse("a=1\na=2"), Err(ConfigError::Duplicate { line: 2, .. })));
        assert!(matches!(ConfigFile::parse(" = 3"), Err(ConfigError::Syntax { .. })));
        let c = ConfigFile::parse("m = heavy").unwrap();
        assert!(matches!(c.get::<f64>("m"), Err(ConfigError::BadValue { .. })));
    }
}
