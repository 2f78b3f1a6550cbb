//! Versioned on-disk store of memoized invariants.

use std::collections::{BTreeMap, BTreeSet};
use std::path::Path;

use anyhow::{Context, Result};
use gwsym::rational::{format_rational, parse_rational};
use gwsym::Rational;
use serde::{Deserialize, Serialize};

use crate::CliError;

pub const VERSION: u32 = 1;
pub const WDVV: &str = "wdvv/";
pub const DESCEND: &str = "descend/";

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CacheFile {
    pub version: u32,
    pub targets: BTreeSet<String>,
    /// `<engine>/<bracket key>` to `"p/q"`.
    pub entries: BTreeMap<String, String>,
}

impl Default for CacheFile {
    fn default() -> Self {
        CacheFile {
            version: VERSION,
            targets: BTreeSet::new(),
            entries: BTreeMap::new(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Stats {
    pub version: u32,
    pub entries: usize,
    pub by_engine: BTreeMap<String, usize>,
    pub by_target: BTreeMap<String, usize>,
}

fn target_of(key: &str) -> &str {
    let bare = key.split_once('/').map_or(key, |(_, k)| k);
    bare.split('|').next().unwrap_or("")
}

impl CacheFile {
    /// Missing files load as empty.
    pub fn load(path: &Path) -> Result<CacheFile> {
        if !path.exists() {
            return Ok(CacheFile::default());
        }
        let text = std::fs::read_to_string(path)
            .with_context(|| format!("reading cache {}", path.display()))?;
        let file: CacheFile = serde_json::from_str(&text).map_err(|e| {
            CliError::Usage(format!("cache {} is not a cache file: {e}", path.display()))
        })?;
        if file.version != VERSION {
            return Err(CliError::Inconsistent(format!(
                "cache {} has version {}, expected {VERSION}",
                path.display(),
                file.version
            ))
            .into());
        }
        for v in file.entries.values() {
            parse_rational(v)
                .map_err(|e| CliError::Usage(format!("cache {}: {e}", path.display())))?;
        }
        Ok(file)
    }

    pub fn save(&self, path: &Path) -> Result<()> {
        let mut text = serde_json::to_string_pretty(self)?;
        text.push('\n');
        std::fs::write(path, text).with_context(|| format!("writing cache {}", path.display()))
    }

    pub fn insert(&mut self, key: String, value: &Rational) -> Result<()> {
        self.targets.insert(target_of(&key).to_string());
        let value = format_rational(value);
        match self.entries.get(&key) {
            Some(old) if *old != value => Err(CliError::Inconsistent(format!(
                "cache conflict at {key}: {old} vs {value}"
            ))
            .into()),
            _ => {
                self.entries.insert(key, value);
                Ok(())
            }
        }
    }

    pub fn merge(&mut self, other: &CacheFile) -> Result<()> {
        for (k, v) in &other.entries {
            self.insert(k.clone(), &parse_rational(v)?)?;
        }
        Ok(())
    }

    /// Entries under `prefix` for `target`, prefix stripped.
    pub fn entries_for(&self, prefix: &str, target: &str) -> Vec<(String, Rational)> {
        self.entries
            .iter()
            .filter_map(|(k, v)| {
                let key = k.strip_prefix(prefix)?;
                (target_of(key) == target).then(|| {
                    (
                        key.to_string(),
                        parse_rational(v).expect("validated on load"),
                    )
                })
            })
            .collect()
    }

    pub fn stats(&self) -> Stats {
        let mut by_engine = BTreeMap::new();
        let mut by_target = BTreeMap::new();
        for k in self.entries.keys() {
            let engine = k.split_once('/').map_or("", |(e, _)| e);
            *by_engine.entry(engine.to_string()).or_insert(0) += 1;
            *by_target.entry(target_of(k).to_string()).or_insert(0) += 1;
        }
        Stats {
            version: self.version,
            entries: self.entries.len(),
            by_engine,
            by_target,
        }
    }
}
