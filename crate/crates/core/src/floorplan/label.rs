use std::fmt;

use serde::{Deserialize, Serialize};

/// Per-pixel category code of a raster floorplan.
///
/// The eight room categories use codes 0..=7; structural labels use the
/// sparse codes 100, 120, 140 and 255 so that a grayscale dump stays readable.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RoomLabel {
    Living,
    Master,
    Second,
    Study,
    Bathroom,
    Kitchen,
    Balcony,
    OtherRoom,
    Wall,
    InteriorDoor,
    MainEntrance,
    Outside,
}

impl RoomLabel {
    pub const ROOMS: [RoomLabel; 8] = [
        RoomLabel::Living,
        RoomLabel::Master,
        RoomLabel::Second,
        RoomLabel::Study,
        RoomLabel::Bathroom,
        RoomLabel::Kitchen,
        RoomLabel::Balcony,
        RoomLabel::OtherRoom,
    ];

    pub const ALL: [RoomLabel; 12] = [
        RoomLabel::Living,
        RoomLabel::Master,
        RoomLabel::Second,
        RoomLabel::Study,
        RoomLabel::Bathroom,
        RoomLabel::Kitchen,
        RoomLabel::Balcony,
        RoomLabel::OtherRoom,
        RoomLabel::Wall,
        RoomLabel::InteriorDoor,
        RoomLabel::MainEntrance,
        RoomLabel::Outside,
    ];

    pub fn code(self) -> u8 {
        match self {
            RoomLabel::Living => 0,
            RoomLabel::Master => 1,
            RoomLabel::Second => 2,
            RoomLabel::Study => 3,
            RoomLabel::Bathroom => 4,
            RoomLabel::Kitchen => 5,
            RoomLabel::Balcony => 6,
            RoomLabel::OtherRoom => 7,
            RoomLabel::Wall => 100,
            RoomLabel::InteriorDoor => 120,
            RoomLabel::MainEntrance => 140,
            RoomLabel::Outside => 255,
        }
    }

    pub fn from_code(code: u8) -> Option<RoomLabel> {
        Some(match code {
            0 => RoomLabel::Living,
            1 => RoomLabel::Master,
            2 => RoomLabel::Second,
            3 => RoomLabel::Study,
            4 => RoomLabel::Bathroom,
            5 => RoomLabel::Kitchen,
            6 => RoomLabel::Balcony,
            7 => RoomLabel::OtherRoom,
            100 => RoomLabel::Wall,
            120 => RoomLabel::InteriorDoor,
            140 => RoomLabel::MainEntrance,
            255 => RoomLabel::Outside,
            _ => return None,
        })
    }

    pub fn is_room(self) -> bool {
        self.code() <= 7
    }

    pub fn is_door(self) -> bool {
        matches!(self, RoomLabel::InteriorDoor | RoomLabel::MainEntrance)
    }

    /// Position of the label in [`RoomLabel::ALL`]; used for one-hot channels.
    pub fn index(self) -> usize {
        RoomLabel::ALL
            .iter()
            .position(|&l| l == self)
            .expect("label listed in ALL")
    }

    pub fn name(self) -> &'static str {
        match self {
            RoomLabel::Living => "living",
            RoomLabel::Master => "master",
            RoomLabel::Second => "second",
            RoomLabel::Study => "study",
            RoomLabel::Bathroom => "bathroom",
            RoomLabel::Kitchen => "kitchen",
            RoomLabel::Balcony => "balcony",
            RoomLabel::OtherRoom => "other_room",
            RoomLabel::Wall => "wall",
            RoomLabel::InteriorDoor => "interior_door",
            RoomLabel::MainEntrance => "main_entrance",
            RoomLabel::Outside => "outside",
        }
    }
}

impl fmt::Display for RoomLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}
