//! Flat `key = value` run files. Keys are the long flag names without the
//! leading dashes; `#` starts a comment; `input` may repeat.

use std::collections::BTreeMap;
use std::fs;
use std::path::Path;

use crate::error::{Error, Result};

pub const KNOWN_KEYS: &[&str] = &[
    "input",
    "out",
    "result",
    "min-pts",
    "eps",
    "sample-fraction",
    "seed",
    "bin-width",
    "reach-quantile",
    "reach-factor",
    "min-area",
    "min-density",
    "max-trapezoids",
    "threshold",
    "polarity",
    "morph",
    "fill",
    "workers",
];

#[derive(Debug, Clone, Default, PartialEq)]
pub struct ConfigFile {
    values: BTreeMap<String, Vec<String>>,
}

impl ConfigFile {
    pub fn parse(text: &str) -> Result<Self> {
        let mut values: BTreeMap<String, Vec<String>> = BTreeMap::new();
        for (lineno, line) in text.lines().enumerate() {
            let line = line.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (key, value) = line.split_once('=').ok_or_else(|| {
                Error::invalid(format!(
                    "config line {}: expected `key = value`",
                    lineno + 1
                ))
            })?;
            let key = key.trim();
            if !KNOWN_KEYS.contains(&key) {
                return Err(Error::invalid(format!(
                    "config line {}: unknown key {key:?}",
                    lineno + 1
                )));
            }
            let entry = values.entry(key.to_string()).or_default();
            if key != "input" && !entry.is_empty() {
                return Err(Error::invalid(format!(
                    "config line {}: key {key:?} given twice",
                    lineno + 1
                )));
            }
            entry.push(value.trim().to_string());
        }
        Ok(Self { values })
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        Self::parse(&text)
    }

    pub fn get(&self, key: &str) -> Option<&str> {
        self.values
            .get(key)
            .and_then(|v| v.first())
            .map(String::as_str)
    }

    pub fn get_all(&self, key: &str) -> &[String] {
        self.values.get(key).map_or(&[], Vec::as_slice)
    }
}
