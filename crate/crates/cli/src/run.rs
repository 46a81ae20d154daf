use std::path::{Path, PathBuf};

use serde::Serialize;
use serde_json::Value;

/// Failure classes mapped onto process exit codes.
#[derive(Debug)]
pub enum CliError {
    /// Unusable input; exit code 2.
    Input(anyhow::Error),
    /// The pipeline itself failed; exit code 3.
    Pipeline(anyhow::Error),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Input(_) => 2,
            CliError::Pipeline(_) => 3,
        }
    }
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Input(e) => write!(f, "input error: {e:#}"),
            CliError::Pipeline(e) => write!(f, "pipeline error: {e:#}"),
        }
    }
}

pub type CliResult<T> = Result<T, CliError>;

pub fn input<E: Into<anyhow::Error>>(e: E) -> CliError {
    CliError::Input(e.into())
}

pub fn pipeline<E: Into<anyhow::Error>>(e: E) -> CliError {
    CliError::Pipeline(e.into())
}

/// Provenance written next to every output.
#[derive(Debug, Clone, Serialize)]
pub struct RunManifest {
    pub command: String,
    pub version: &'static str,
    pub inputs: Vec<PathBuf>,
    pub output: PathBuf,
    pub seed: u64,
    pub overrides: Value,
}

impl RunManifest {
    pub fn new(
        command: &str,
        inputs: Vec<PathBuf>,
        output: &Path,
        seed: u64,
        overrides: Value,
    ) -> Self {
        Self {
            command: command.to_string(),
            version: env!("CARGO_PKG_VERSION"),
            inputs,
            output: output.to_path_buf(),
            seed,
            overrides,
        }
    }

    /// Writes `run.json` into an output directory.
    pub fn write(&self, dir: &Path) -> CliResult<()> {
        self.write_to(&dir.join("run.json"))
    }

    pub fn write_to(&self, path: &Path) -> CliResult<()> {
        let text = serde_json::to_string_pretty(self).expect("manifest serializes");
        std::fs::write(path, text).map_err(|e| pipeline(anyhow::anyhow!("{}: {e}", path.display())))
    }
}

/// `report.json` -> `report.run.json`.
pub fn sidecar(path: &Path) -> PathBuf {
    let stem = path
        .file_stem()
        .and_then(|s| s.to_str())
        .unwrap_or("report");
    path.with_file_name(format!("{stem}.run.json"))
}

pub fn create_dir(dir: &Path) -> CliResult<()> {
    std::fs::create_dir_all(dir).map_err(|e| pipeline(anyhow::anyhow!("{}: {e}", dir.display())))
}
