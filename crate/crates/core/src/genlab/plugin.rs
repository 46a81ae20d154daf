use std::path::PathBuf;
use std::process::Command;

use crate::floorplan::io::read_category_png;
use crate::floorplan::RoomLabel;
use crate::grid::Grid;

use super::{confine, GenError, Generator, GeneratorInput};

/// External generator exchanging files through a scratch directory.
///
/// The program is run as `program [args..] DIR` after `DIR/input_boundary.png`
/// (RGB boundary) and `DIR/input_activity.png` (grayscale activity) are
/// written, with `ACTFLOOR_SEED` set. It must leave a category-code PNG at
/// `DIR/output_category.png`.
#[derive(Debug, Clone)]
pub struct PluginGenerator {
    pub program: PathBuf,
    pub args: Vec<String>,
}

impl PluginGenerator {
    pub fn new(program: impl Into<PathBuf>, args: Vec<String>) -> Self {
        Self {
            program: program.into(),
            args,
        }
    }
}

impl Generator for PluginGenerator {
    fn name(&self) -> &str {
        "plugin"
    }

    fn generate(&self, input: &GeneratorInput, seed: u64) -> Result<Grid<RoomLabel>, GenError> {
        let dir = tempfile::tempdir().map_err(|source| GenError::Io {
            path: std::env::temp_dir(),
            source,
        })?;
        let boundary_path = dir.path().join("input_boundary.png");
        input
            .boundary()
            .to_rgb()
            .save(&boundary_path)
            .map_err(|e| GenError::GeneratorFailure(format!("{}: {e}", boundary_path.display())))?;
        input
            .activity()
            .save_png(&dir.path().join("input_activity.png"))
            .map_err(|e| GenError::GeneratorFailure(e.to_string()))?;

        let status = Command::new(&self.program)
            .args(&self.args)
            .arg(dir.path())
            .env("ACTFLOOR_SEED", seed.to_string())
            .status()
            .map_err(|e| GenError::GeneratorFailure(format!("{}: {e}", self.program.display())))?;
        if !status.success() {
            return Err(GenError::GeneratorFailure(format!(
                "{} exited with {status}",
                self.program.display()
            )));
        }
        let out = read_category_png(&dir.path().join("output_category.png"))
            .map_err(|e| GenError::GeneratorFailure(e.to_string()))?;
        if out.dims() != input.boundary().inside().dims() {
            return Err(GenError::GeneratorFailure(format!(
                "output is {}x{}, expected {}x{}",
                out.width(),
                out.height(),
                input.boundary().width(),
                input.boundary().height()
            )));
        }
        Ok(confine(out, input.boundary().inside()))
    }
}
