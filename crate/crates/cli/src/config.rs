//! Global settings: command-line flags over an optional TOML file over defaults.

use anyhow::Context;
use serde::Deserialize;
use std::path::{Path, PathBuf};

pub const DEFAULT_SAMPLES: u64 = 100_000;
pub const DEFAULT_SEED: u64 = 0;

/// Keys accepted in a `--config` file; anything else is rejected.
#[derive(Clone, Debug, Default, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FileConfig {
    pub seed: Option<u64>,
    pub samples: Option<u64>,
    pub threads: Option<usize>,
    pub out: Option<PathBuf>,
}

impl FileConfig {
    pub fn load(path: &Path) -> anyhow::Result<Self> {
        let text = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
        toml::from_str(&text).map_err(|e| ConfigError(format!("{}: {e}", path.display())).into())
    }
}

/// Malformed or unknown configuration; reported as a parameter error.
#[derive(Debug)]
pub struct ConfigError(pub String);

impl std::fmt::Display for ConfigError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "config error: {}", self.0)
    }
}

impl std::error::Error for ConfigError {}

#[derive(Clone, Debug, PartialEq)]
pub struct Settings {
    pub seed: u64,
    pub samples: u64,
    /// 0 lets rayon pick.
    pub threads: usize,
    pub out: Option<PathBuf>,
}

impl Settings {
    pub fn resolve(
        seed: Option<u64>,
        samples: Option<u64>,
        threads: Option<usize>,
        out: Option<PathBuf>,
        file: &FileConfig,
    ) -> Self {
        Settings {
            seed: seed.or(file.seed).unwrap_or(DEFAULT_SEED),
            samples: samples.or(file.samples).unwrap_or(DEFAULT_SAMPLES),
            threads: threads.or(file.threads).unwrap_or(0),
            out: out.or_else(|| file.out.clone()),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn flag_wins_then_file_then_default() {
        let file: FileConfig = toml::from_str("seed = 5\nsamples = 10\n").unwrap();
        let s = Settings::resolve(Some(9), None, None, None, &file);
        assert_eq!((s.seed, s.samples, s.threads), (9, 10, 0));
        let s = Settings::resolve(None, None, None, None, &FileConfig::default());
        assert_eq!((s.seed, s.samples), (DEFAULT_SEED, DEFAULT_SAMPLES));
    }

    #[test]
    fn unknown_keys_rejected() {
        let d = tempfile::tempdir().unwrap();
        let p = d.path().join("c.toml");
        std::fs::write(&p, "seed = 1\nsamplez = 3\n").unwrap();
        let e = FileConfig::load(&p).unwrap_err();
        assert!(e.downcast_ref::<ConfigError>().is_some());
        assert!(e.to_string().contains("samplez"));
    }
}
