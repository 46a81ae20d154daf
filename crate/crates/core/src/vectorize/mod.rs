//! Raster-to-vector conversion of category images: wall extraction and
//! regularization, room polygons, activity-guided doors, and the success
//! check for vectorized plans.

mod doors;
mod export;
mod geometry;
mod rooms;
mod success;
mod walls;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::actsim::ActivityMap;
use crate::floorplan::RoomLabel;
use crate::grid::{Grid, Pos};

pub use doors::{main_entrance_segment, place_doors, DOOR_WIDTH};
pub use export::{export_json, export_svg, import_json};
pub use geometry::{interior_pixels, on_boundary, polygon_area, Segment};
pub use rooms::{assign_rooms, assign_rooms_lenient, WallGrid, DOMINANCE_THRESHOLD};
pub use success::{check_success, SuccessCondition, SuccessReport};
pub use walls::{close3, extract_walls, regularize_walls};

#[derive(Debug, Error, PartialEq)]
pub enum VectorizeError {
    #[error("walls enclose no region")]
    NoClosedRegion,
    #[error("room {index} is ambiguous: dominant type covers {dominance:.2}")]
    AmbiguousRoom { index: usize, dominance: f64 },
    #[error("no living room")]
    NoLivingRoom,
    #[error("activity map is {0}x{1}, category image is {2}x{3}")]
    SizeMismatch(usize, usize, usize, usize),
    #[error("malformed vector floorplan: {0}")]
    Format(String),
}

/// A typed room outline. Vertices lie on wall centerlines in pixel
/// coordinates.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Room {
    #[serde(rename = "type")]
    pub room_type: RoomLabel,
    pub polygon: Vec<Pos>,
    /// False for regions that leak to the exterior through a wall gap.
    pub closed: bool,
    /// Share of the room-labelled interior pixels carrying `room_type`.
    pub dominance: f64,
}

impl Room {
    pub fn area(&self) -> f64 {
        polygon_area(&self.polygon)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Door {
    pub room_index: usize,
    pub position: Pos,
    pub width: i32,
    /// Span of the opening along the wall.
    pub segment: Segment,
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct VectorFloorplan {
    pub width: usize,
    pub height: usize,
    pub rooms: Vec<Room>,
    pub walls: Vec<Segment>,
    pub doors: Vec<Door>,
    pub main_entrance: Option<Segment>,
}

/// Full pipeline: walls, rooms (ambiguous rooms kept and flagged by their
/// dominance), doors and main entrance.
pub fn vectorize(
    category: &Grid<RoomLabel>,
    activity: &ActivityMap,
) -> Result<VectorFloorplan, VectorizeError> {
    let (w, h) = category.dims();
    if (activity.width(), activity.height()) != (w, h) {
        return Err(VectorizeError::SizeMismatch(
            activity.width(),
            activity.height(),
            w,
            h,
        ));
    }
    let walls = regularize_walls(&extract_walls(category))?;
    let rooms = assign_rooms_lenient(&walls, category)?;
    let doors = place_doors(&rooms, activity)?;
    let main_entrance = main_entrance_segment(category, &walls);
    Ok(VectorFloorplan {
        width: w,
        height: h,
        rooms,
        walls,
        doors,
        main_entrance,
    })
}
