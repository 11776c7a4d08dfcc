//! Flat `key = value` parameter files with `#` comments.

use std::collections::BTreeMap;
use std::path::Path;

use crate::error::{Error, Result};

#[derive(Debug, Clone, Default, PartialEq)]
pub struct KeyValues {
    entries: BTreeMap<String, f64>,
}

impl KeyValues {
    pub fn parse(text: &str) -> Result<Self> {
        let mut entries = BTreeMap::new();
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (key, value) = line
                .split_once('=')
                .ok_or_else(|| Error::Parse(format!("line {}: expected `key = value`", lineno + 1)))?;
            let key = key.trim();
            let value: f64 = value
                .trim()
                .parse()
                .map_err(|_| Error::Parse(format!("line {}: `{}` is not a number", lineno + 1, value.trim())))?;
            if entries.insert(key.to_string(), value).is_some() {
                return Err(Error::Parse(format!("line {}: duplicate key `{key}`", lineno + 1)));
            }
        }
        Ok(Self { entries })
    }

    pub fn from_file(path: impl AsRef<Path>) -> Result<Self> {
        Self::parse(&std::fs::read_to_string(path)?)
    }

    pub fn get(&self, key: &str) -> Option<f64> {
        self.entries.get(key).copied()
    }

    /// Overwrites `slot` when `key` is present.
    pub fn read_into(&self, key: &str, slot: &mut f64) -> Result<()> {
        if let Some(v) = self.get(key) {
            *slot = v;
        }
        Ok(())
    }

    pub fn keys(&self) -> impl Iterator<Item = &str> {
        self.entries.keys().map(String::as_str)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_comments_and_blank_lines() {
        let kv = KeyValues::parse("# header\n\na = 1.5  # trailing\n b=-2e3\n").unwrap();
        assert_eq!(kv.get("a"), Some(1.5));
        assert_eq!(kv.get("b"), Some(-2000.0));
        assert_eq!(kv.get("c"), None);
    }

    #[test]
    fn rejects_malformed_lines() {
        assert!(KeyValues::parse("a 1").is_err());
        assert!(KeyValues::parse("a = x").is_err());
        assert!(KeyValues::parse("a = 1\na = 2").is_err());
    }
}
