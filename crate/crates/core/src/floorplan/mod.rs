//! Raster floorplan data model: label codes, the four-channel raster, the
//! building boundary, PNG+JSON storage and dataset splitting.

mod boundary;
pub mod io;
mod label;
mod raster;
mod split;

use std::path::{Path, PathBuf};

use thiserror::Error;

use crate::grid::Pos;

pub use boundary::{extract_boundary, outline, BoundaryImage};
pub use io::{load_floorplan, save_floorplan, Manifest};
pub use label::RoomLabel;
pub use raster::{number_rooms, RasterFloorplan, RoomRegion};
pub use split::{split_dataset, Split};

/// Side length of every raster channel.
pub const RASTER_SIZE: usize = 256;

#[derive(Debug, Error)]
pub enum FloorplanError {
    #[error("missing channel {0}")]
    MissingChannel(String),
    #[error("channel {channel} is {width}x{height}, expected {expected_width}x{expected_height}")]
    SizeMismatch {
        channel: String,
        width: usize,
        height: usize,
        expected_width: usize,
        expected_height: usize,
    },
    #[error("illegal category code {code} at {pos}")]
    IllegalLabel { code: u8, pos: Pos },
    #[error("invalid layout: {0}")]
    InvalidLayout(String),
    #[error("invalid boundary: {0}")]
    InvalidBoundary(String),
    #[error("floorplan has no main entrance")]
    NoEntrance,
    #[error("bad manifest {path}: {message}")]
    Manifest { path: PathBuf, message: String },
    #[error("image {path}: {message}")]
    Image { path: PathBuf, message: String },
    #[error("i/o failure on {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

impl FloorplanError {
    pub(crate) fn io(path: &Path, source: std::io::Error) -> Self {
        FloorplanError::Io {
            path: path.to_path_buf(),
            source,
        }
    }
}
