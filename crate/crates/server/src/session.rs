use actfloor_core::actsim::ActivityMap;
use actfloor_core::floorplan::{BoundaryImage, RasterFloorplan, RoomLabel};
use actfloor_core::furnish::{synthesize_room_entrance, FurnitureInstance, FurnitureKind};
use actfloor_core::genlab::{transfer_layout, DatasetEntry};
use actfloor_core::grid::{Grid, Mask, Pos, Rect};
use actfloor_core::vectorize::{SuccessReport, VectorFloorplan};
use serde::{Deserialize, Serialize};

use crate::error::ApiError;

/// How `/activity` produces a map.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Mode {
    /// Furniture and rooms are provided by the system.
    Auto,
    /// The user's furniture drives the simulation.
    #[default]
    Manual,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct PlacedFurniture {
    pub id: u32,
    #[serde(flatten)]
    pub instance: FurnitureInstance,
}

#[derive(Debug, Clone, PartialEq, Eq, Deserialize)]
#[serde(tag = "op", rename_all = "snake_case")]
pub enum FurnitureCommand {
    Add { kind: FurnitureKind, rect: Rect },
    Move { id: u32, rect: Rect },
    Remove { id: u32 },
}

#[derive(Debug, Clone)]
pub struct GenerationResult {
    pub category: Grid<RoomLabel>,
    pub vector: Option<VectorFloorplan>,
    pub svg: Option<String>,
    pub success: SuccessReport,
    pub vectorize_error: Option<String>,
}

#[derive(Debug, Clone)]
pub struct Session {
    pub id: String,
    pub boundary: BoundaryImage,
    pub furniture: Vec<PlacedFurniture>,
    next_id: u32,
    pub mode: Mode,
    pub activity: Option<ActivityMap>,
    /// Room layout used to attach furniture to rooms, once one is known.
    pub provisional: Option<RasterFloorplan>,
    pub last_result: Option<GenerationResult>,
}

impl Session {
    pub fn new(id: String, boundary: BoundaryImage) -> Self {
        Self {
            id,
            boundary,
            furniture: Vec::new(),
            next_id: 1,
            mode: Mode::Manual,
            activity: None,
            provisional: None,
            last_result: None,
        }
    }

    pub fn instances(&self) -> Vec<FurnitureInstance> {
        self.furniture.iter().map(|f| f.instance).collect()
    }

    fn check_rect(&self, rect: &Rect) -> Result<(), ApiError> {
        if rect.w <= 0 || rect.h <= 0 {
            return Err(ApiError::bad_request(format!("empty rect {rect:?}")));
        }
        let interior = self.boundary.interior();
        if let Some(p) = rect.pixels().find(|&p| !interior.at(p)) {
            return Err(ApiError::out_of_boundary(format!(
                "rect {rect:?} leaves the building at {p}"
            )));
        }
        Ok(())
    }

    /// Room and entrance of a piece: the hosting room of the provisional
    /// layout when there is one, otherwise the main entrance.
    fn attach(&self, rect: &Rect) -> (u8, Pos) {
        let fallback = (0, self.boundary.entrance_point().unwrap_or(rect.center()));
        let Some(fp) = &self.provisional else {
            return fallback;
        };
        let room_id = fp.room_ids().get(rect.center()).copied().unwrap_or(0);
        if room_id == 0 {
            return fallback;
        }
        match synthesize_room_entrance(room_id, fp, rect) {
            Ok(e) => (room_id, e),
            Err(_) => fallback,
        }
    }

    fn instance(&self, kind: FurnitureKind, rect: Rect) -> FurnitureInstance {
        let (room_id, entrance) = self.attach(&rect);
        FurnitureInstance {
            kind,
            rect,
            room_id,
            entrance,
        }
    }

    /// Applies a furniture command atomically. Any accepted mutation drops
    /// the stored activity map.
    pub fn apply(&mut self, cmd: FurnitureCommand) -> Result<Option<PlacedFurniture>, ApiError> {
        let out = match cmd {
            FurnitureCommand::Add { kind, rect } => {
                self.check_rect(&rect)?;
                let placed = PlacedFurniture {
                    id: self.next_id,
                    instance: self.instance(kind, rect),
                };
                self.next_id += 1;
                self.furniture.push(placed);
                Some(placed)
            }
            FurnitureCommand::Move { id, rect } => {
                let idx = self.position(id)?;
                self.check_rect(&rect)?;
                let kind = self.furniture[idx].instance.kind;
                self.furniture[idx].instance = self.instance(kind, rect);
                Some(self.furniture[idx])
            }
            FurnitureCommand::Remove { id } => {
                let idx = self.position(id)?;
                self.furniture.remove(idx);
                None
            }
        };
        self.activity = None;
        Ok(out)
    }

    fn position(&self, id: u32) -> Result<usize, ApiError> {
        self.furniture
            .iter()
            .position(|f| f.id == id)
            .ok_or(ApiError::unknown_instance(id))
    }

    /// Replaces the furniture with a dataset entry's placements, scaled onto
    /// this boundary. Pieces that would leave the building are dropped. The
    /// entry's layout becomes the provisional room layout.
    pub fn apply_recommendation(&mut self, entry: &DatasetEntry) -> Result<(), ApiError> {
        let inside = self.boundary.inside().clone();
        let layout = transfer_layout(entry, &inside);
        self.provisional =
            RasterFloorplan::pair(format!("{}-{}", self.id, entry.id), &self.boundary, &layout)
                .ok();
        let adapted = adapt_rects(entry, &inside);
        self.furniture.clear();
        for (kind, rect) in adapted {
            if self.check_rect(&rect).is_ok() {
                let instance = self.instance(kind, rect);
                self.furniture.push(PlacedFurniture {
                    id: self.next_id,
                    instance,
                });
                self.next_id += 1;
            }
        }
        self.activity = None;
        Ok(())
    }
}

/// Entry furniture rectangles mapped from the entry's footprint box onto
/// `inside`'s box.
fn adapt_rects(entry: &DatasetEntry, inside: &Mask) -> Vec<(FurnitureKind, Rect)> {
    let (Some(src), Some(dst)) = (
        Rect::bounding(entry.inside.set_positions()),
        Rect::bounding(inside.set_positions()),
    ) else {
        return Vec::new();
    };
    let sx = |v: i32| dst.x + ((i64::from(v - src.x) * i64::from(dst.w)) / i64::from(src.w)) as i32;
    let sy = |v: i32| dst.y + ((i64::from(v - src.y) * i64::from(dst.h)) / i64::from(src.h)) as i32;
    entry
        .furniture
        .iter()
        .map(|f| {
            let (x0, y0) = (sx(f.rect.x), sy(f.rect.y));
            let (x1, y1) = (sx(f.rect.right()), sy(f.rect.bottom()));
            (
                f.kind,
                Rect::new(x0, y0, (x1 - x0).max(1), (y1 - y0).max(1)),
            )
        })
        .collect()
}
