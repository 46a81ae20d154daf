//! Generation stage: the generator contract, the cycle-consistent GAN
//! objective as pure functions, and a retrieval generator.

mod image;
mod index;
mod loss;
mod objective;
mod plugin;
mod retrieval;

use std::path::PathBuf;

use thiserror::Error;

use crate::actsim::ActivityMap;
use crate::floorplan::{BoundaryImage, FloorplanError, RoomLabel};
use crate::grid::Grid;

pub use self::image::UnitImage;
pub use index::{DatasetEntry, DatasetIndex};
pub use loss::{
    adversarial_loss, cycle_loss, identity_loss, total_loss, LossParts, LossWeights, ScoreMap,
};
pub use objective::{cycle_identity_terms, objective, Discriminator, GanSample, ObjectiveTerms};
pub use plugin::PluginGenerator;
pub use retrieval::{retrieval_generate, transfer_layout, RetrievalGenerator, DEFAULT_TOP_K};

#[derive(Debug, Error)]
pub enum GenError {
    #[error("image sizes differ: {0}")]
    SizeMismatch(String),
    #[error("score {value} outside (0, 1)")]
    ScoreOutOfRange { value: f64 },
    #[error("loss part {0} is not finite")]
    NonFiniteInput(&'static str),
    #[error("dataset index is empty")]
    EmptyIndex,
    #[error("k must be at least 1")]
    InvalidK,
    #[error("generator failed: {0}")]
    GeneratorFailure(String),
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error(transparent)]
    Floorplan(#[from] FloorplanError),
}

/// Boundary and activity map fed to a generator.
#[derive(Debug, Clone)]
pub struct GeneratorInput {
    boundary: BoundaryImage,
    activity: ActivityMap,
}

impl GeneratorInput {
    pub fn new(boundary: BoundaryImage, activity: ActivityMap) -> Result<Self, GenError> {
        if (boundary.width(), boundary.height()) != (activity.width(), activity.height()) {
            return Err(GenError::SizeMismatch(format!(
                "boundary {}x{}, activity {}x{}",
                boundary.width(),
                boundary.height(),
                activity.width(),
                activity.height()
            )));
        }
        Ok(Self { boundary, activity })
    }

    pub fn boundary(&self) -> &BoundaryImage {
        &self.boundary
    }

    pub fn activity(&self) -> &ActivityMap {
        &self.activity
    }

    /// Four channels: the three boundary channels followed by activity.
    pub fn to_unit_image(&self) -> UnitImage {
        UnitImage::from_boundary(&self.boundary)
            .concat(&UnitImage::from_activity(&self.activity))
            .expect("dimensions checked on construction")
    }
}

/// Produces a category image for a boundary and activity map.
pub trait Generator: Send + Sync {
    fn name(&self) -> &str;

    fn generate(&self, input: &GeneratorInput, seed: u64) -> Result<Grid<RoomLabel>, GenError>;
}

/// Forces the generator contract: Outside exactly off the footprint. Inside
/// pixels a generator left Outside become walls.
pub fn confine(mut layout: Grid<RoomLabel>, inside: &crate::grid::Mask) -> Grid<RoomLabel> {
    for (l, &m) in layout.as_mut_slice().iter_mut().zip(inside.as_slice()) {
        if !m {
            *l = RoomLabel::Outside;
        } else if *l == RoomLabel::Outside {
            *l = RoomLabel::Wall;
        }
    }
    layout
}
