//! Committed thresholds: one `name value` pair per line, `#` comments.
//!
//! The directory defaults to the crate's `fixtures/` and can be moved with
//! the `ABMD_FIXTURES` environment variable.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use crate::error::{Error, Result};

pub const FIXTURES_ENV: &str = "ABMD_FIXTURES";
pub const THRESHOLDS_FILE: &str = "thresholds.txt";

pub fn fixture_dir() -> PathBuf {
    std::env::var_os(FIXTURES_ENV)
        .map(PathBuf::from)
        .unwrap_or_else(|| Path::new(env!("CARGO_MANIFEST_DIR")).join("fixtures"))
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct Thresholds {
    values: BTreeMap<String, f64>,
}

impl Thresholds {
    pub fn parse(text: &str) -> Result<Self> {
        let mut values = BTreeMap::new();
        for (i, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let mut parts = line.split_whitespace();
            let (Some(name), Some(value), None) = (parts.next(), parts.next(), parts.next()) else {
                return Err(Error::Parse(format!("fixture line {}: expected `name value`", i + 1)));
            };
            let value = value
                .parse()
                .map_err(|_| Error::Parse(format!("fixture line {}: `{value}` is not a number", i + 1)))?;
            values.insert(name.to_string(), value);
        }
        Ok(Self { values })
    }

    /// Reads `thresholds.txt` from [`fixture_dir`].
    pub fn load() -> Result<Self> {
        Self::load_from(&fixture_dir())
    }

    pub fn load_from(dir: &Path) -> Result<Self> {
        Self::parse(&std::fs::read_to_string(dir.join(THRESHOLDS_FILE))?)
    }

    pub fn get(&self, name: &str) -> Result<f64> {
        self.values
            .get(name)
            .copied()
            .ok_or_else(|| Error::Parse(format!("no fixture threshold `{name}`")))
    }

    pub fn set(&mut self, name: &str, value: f64) {
        self.values.insert(name.to_string(), value);
    }

    pub fn to_text(&self) -> String {
        self.values.iter().map(|(k, v)| format!("{k} {v:e}\n")).collect()
    }
}
