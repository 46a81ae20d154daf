use std::path::{Path, PathBuf};

use serde::Deserialize;

/// Service configuration, read from a `key = value` file.
#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ServerConfig {
    /// Address to bind, `host:port`.
    pub bind: String,
    /// Dataset directory backing recommendations and retrieval generation.
    pub dataset: Option<PathBuf>,
    /// External floorplan generator command, split on whitespace.
    pub generator_plugin: Option<String>,
    /// External activity generator for Auto mode, split on whitespace.
    pub activity_plugin: Option<String>,
    /// Seed used when a request does not supply one.
    pub seed: u64,
    pub top_k: usize,
    pub runs_per_edge: usize,
    /// Sessions are written here on shutdown when set.
    pub snapshot_dir: Option<PathBuf>,
}

impl Default for ServerConfig {
    fn default() -> Self {
        Self {
            bind: "127.0.0.1:8080".into(),
            dataset: None,
            generator_plugin: None,
            activity_plugin: None,
            seed: 0,
            top_k: actfloor_core::genlab::DEFAULT_TOP_K,
            runs_per_edge: 4,
            snapshot_dir: None,
        }
    }
}

#[derive(Debug, thiserror::Error)]
pub enum ConfigError {
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error("{path}: {message}")]
    Parse { path: PathBuf, message: String },
}

impl ServerConfig {
    pub fn parse(text: &str) -> Result<Self, toml::de::Error> {
        toml::from_str(text)
    }

    pub fn load(path: &Path) -> Result<Self, ConfigError> {
        let text = std::fs::read_to_string(path).map_err(|source| ConfigError::Io {
            path: path.to_path_buf(),
            source,
        })?;
        Self::parse(&text).map_err(|e| ConfigError::Parse {
            path: path.to_path_buf(),
            message: e.to_string(),
        })
    }

    /// Applies `ACTFLOOR_DATASET` when set and non-empty.
    pub fn with_env(mut self) -> Self {
        if let Some(v) = std::env::var_os("ACTFLOOR_DATASET").filter(|v| !v.is_empty()) {
            self.dataset = Some(PathBuf::from(v));
        }
        self
    }
}

/// Splits a plugin command line into program and arguments.
pub fn split_command(cmd: &str) -> Option<(String, Vec<String>)> {
    let mut parts = cmd.split_whitespace().map(str::to_string);
    let program = parts.next()?;
    Some((program, parts.collect()))
}
