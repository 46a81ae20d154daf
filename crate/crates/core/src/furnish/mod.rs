//! Rule-based placement of one primary furniture piece per non-living room,
//! and synthesis of room entrances for user-placed furniture.

mod entrance;
mod place;
mod policy;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::floorplan::RoomLabel;
use crate::grid::{Pos, Rect};

pub use entrance::{shared_wall_pixels, synthesize_room_entrance};
pub use place::{candidate_rects, place_primary_furniture, room_entrance, RoomEntrance};
pub use policy::{CandidateSide, KindRule, PlacementPolicy, SizeRule};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FurnitureKind {
    Bed,
    Desk,
    Toilet,
    Stove,
    WashingMachine,
}

impl FurnitureKind {
    pub const ALL: [FurnitureKind; 5] = [
        FurnitureKind::Bed,
        FurnitureKind::Desk,
        FurnitureKind::Toilet,
        FurnitureKind::Stove,
        FurnitureKind::WashingMachine,
    ];

    /// The primary furniture of a room category; living rooms and
    /// uncategorised rooms get none.
    pub fn for_room(label: RoomLabel) -> Option<FurnitureKind> {
        match label {
            RoomLabel::Master | RoomLabel::Second => Some(FurnitureKind::Bed),
            RoomLabel::Study => Some(FurnitureKind::Desk),
            RoomLabel::Bathroom => Some(FurnitureKind::Toilet),
            RoomLabel::Kitchen => Some(FurnitureKind::Stove),
            RoomLabel::Balcony => Some(FurnitureKind::WashingMachine),
            _ => None,
        }
    }
}

/// A placed primary furniture piece.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct FurnitureInstance {
    pub kind: FurnitureKind,
    pub rect: Rect,
    pub room_id: u8,
    pub entrance: Pos,
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum FurnishError {
    #[error("room {room_id} has no entrance")]
    NoRoomEntrance { room_id: u8 },
    #[error("no legal {kind:?} placement fits in room {room_id}")]
    RoomTooSmall { room_id: u8, kind: FurnitureKind },
    #[error("room {room_id} shares no wall with the living area")]
    NoSharedWall { room_id: u8 },
    #[error("unknown room {0}")]
    UnknownRoom(u8),
    #[error("invalid placement policy: {0}")]
    InvalidPolicy(String),
}

/// Serializes a furniture list in the exchange format.
pub fn furniture_to_json(list: &[FurnitureInstance]) -> String {
    serde_json::to_string_pretty(list).expect("furniture serializes")
}

pub fn furniture_from_json(text: &str) -> Result<Vec<FurnitureInstance>, serde_json::Error> {
    serde_json::from_str(text)
}
