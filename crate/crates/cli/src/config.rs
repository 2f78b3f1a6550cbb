use std::path::{Path, PathBuf};

use anyhow::{Context, Result};
use serde::Deserialize;

pub const CACHE_ENV: &str = "GWSYM_CACHE";

/// Optional JSON config; command-line flags take precedence.
#[derive(Debug, Clone, Default, PartialEq, Eq, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Config {
    pub order: Option<i64>,
    pub cache_path: Option<PathBuf>,
    pub workers: Option<usize>,
}

impl Config {
    pub fn load(path: &Path) -> Result<Config> {
        let text = std::fs::read_to_string(path)
            .with_context(|| format!("reading config {}", path.display()))?;
        serde_json::from_str(&text)
            .map_err(|e| crate::CliError::Usage(format!("config {}: {e}", path.display())).into())
    }

    /// `--cache`, then `$GWSYM_CACHE`, then the config file.
    pub fn cache_path(&self, flag: Option<&Path>, env: Option<String>) -> Option<PathBuf> {
        flag.map(Path::to_path_buf)
            .or_else(|| env.filter(|s| !s.is_empty()).map(PathBuf::from))
            .or_else(|| self.cache_path.clone())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cache_precedence() {
        let c = Config {
            cache_path: Some("cfg.json".into()),
            ..Config::default()
        };
        assert_eq!(
            c.cache_path(Some(Path::new("flag.json")), Some("env.json".into())),
            Some("flag.json".into())
        );
        assert_eq!(
            c.cache_path(None, Some("env.json".into())),
            Some("env.json".into())
        );
        assert_eq!(
            c.cache_path(None, Some(String::new())),
            Some("cfg.json".into())
        );
        assert_eq!(Config::default().cache_path(None, None), None);
    }

    #[test]
    fn parses_partial_config() {
        let c: Config = serde_json::from_str(r#"{"workers": 4}"#).unwrap();
        assert_eq!(
            c,
            Config {
                workers: Some(4),
                ..Config::default()
            }
        );
        assert!(serde_json::from_str::<Config>(r#"{"bogus": 1}"#).is_err());
    }
}
