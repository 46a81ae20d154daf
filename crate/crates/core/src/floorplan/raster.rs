use std::collections::{BTreeMap, VecDeque};

use crate::grid::{Grid, Mask, Pos, Rect};

use super::boundary::BoundaryImage;
use super::{FloorplanError, RoomLabel, RASTER_SIZE};

/// Four-channel raster floorplan: inside mask, exterior boundary mask,
/// per-pixel category and per-pixel room id (0 = not a room interior).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RasterFloorplan {
    id: String,
    inside: Mask,
    boundary: Mask,
    category: Grid<RoomLabel>,
    room_ids: Grid<u8>,
}

/// The pixels of one room id together with its dominant category.
#[derive(Debug, Clone, PartialEq)]
pub struct RoomRegion {
    pub id: u8,
    pub label: RoomLabel,
    pub pixels: Vec<Pos>,
    pub bbox: Rect,
}

impl RoomRegion {
    pub fn area(&self) -> usize {
        self.pixels.len()
    }

    pub fn mask(&self, width: usize, height: usize) -> Mask {
        let mut m = Mask::filled(width, height, false);
        for &p in &self.pixels {
            m.set(p, true);
        }
        m
    }
}

impl RasterFloorplan {
    /// Validates and assembles the four channels.
    pub fn new(
        id: impl Into<String>,
        inside: Mask,
        boundary: Mask,
        category: Grid<RoomLabel>,
        room_ids: Grid<u8>,
    ) -> Result<Self, FloorplanError> {
        let expected = (RASTER_SIZE, RASTER_SIZE);
        for (name, dims) in [
            ("inside", inside.dims()),
            ("boundary", boundary.dims()),
            ("category", category.dims()),
            ("room_ids", room_ids.dims()),
        ] {
            if dims != expected {
                return Err(FloorplanError::SizeMismatch {
                    channel: name.to_string(),
                    width: dims.0,
                    height: dims.1,
                    expected_width: expected.0,
                    expected_height: expected.1,
                });
            }
        }
        let fp = Self {
            id: id.into(),
            inside,
            boundary,
            category,
            room_ids,
        };
        fp.check_layout()?;
        Ok(fp)
    }

    /// Builds a floorplan from an inside mask and category image, numbering
    /// rooms by 4-connected components of equal room labels.
    pub fn from_category(
        id: impl Into<String>,
        inside: Mask,
        boundary: Mask,
        category: Grid<RoomLabel>,
    ) -> Result<Self, FloorplanError> {
        let room_ids = number_rooms(&category)?;
        Self::new(id, inside, boundary, category, room_ids)
    }

    /// Pairs a boundary with an arbitrary layout. Inside the boundary the
    /// layout's labels are kept, except that the entrance pixels become
    /// `MainEntrance` and any other non-room label becomes `Wall`.
    pub fn pair(
        id: impl Into<String>,
        boundary: &BoundaryImage,
        layout: &Grid<RoomLabel>,
    ) -> Result<Self, FloorplanError> {
        let inside = boundary.inside().clone();
        let category = Grid::from_fn(inside.width(), inside.height(), |p| {
            if !inside[p] {
                RoomLabel::Outside
            } else if boundary.entrance().at(p) {
                RoomLabel::MainEntrance
            } else {
                match layout.get(p).copied() {
                    Some(l) if l.is_room() || l == RoomLabel::InteriorDoor => l,
                    _ => RoomLabel::Wall,
                }
            }
        });
        Self::from_category(id, inside, boundary.boundary().clone(), category)
    }

    fn check_layout(&self) -> Result<(), FloorplanError> {
        for (p, &label) in self.category.iter() {
            if (label == RoomLabel::Outside) == self.inside[p] {
                return Err(FloorplanError::InvalidLayout(format!(
                    "pixel {p}: category {label} disagrees with inside mask"
                )));
            }
            let rid = self.room_ids[p];
            if rid > 0 && !self.inside[p] {
                return Err(FloorplanError::InvalidLayout(format!(
                    "pixel {p}: room id {rid} outside the building"
                )));
            }
        }
        let mut by_id: BTreeMap<u8, Vec<Pos>> = BTreeMap::new();
        for (p, &rid) in self.room_ids.iter() {
            if rid > 0 {
                by_id.entry(rid).or_default().push(p);
            }
        }
        for (rid, pixels) in &by_id {
            let mut m = Mask::filled(RASTER_SIZE, RASTER_SIZE, false);
            for &p in pixels {
                m.set(p, true);
            }
            let reached = m.flood4([pixels[0]]).count();
            if reached != pixels.len() {
                return Err(FloorplanError::InvalidLayout(format!(
                    "room id {rid} is not 4-connected"
                )));
            }
            if dominant_label(&self.category, pixels).is_none() {
                return Err(FloorplanError::InvalidLayout(format!(
                    "room id {rid} has no dominant room category"
                )));
            }
        }
        Ok(())
    }

    pub fn id(&self) -> &str {
        &self.id
    }

    pub fn with_id(mut self, id: impl Into<String>) -> Self {
        self.id = id.into();
        self
    }

    pub fn inside(&self) -> &Mask {
        &self.inside
    }

    pub fn boundary(&self) -> &Mask {
        &self.boundary
    }

    pub fn category(&self) -> &Grid<RoomLabel> {
        &self.category
    }

    pub fn room_ids(&self) -> &Grid<u8> {
        &self.room_ids
    }

    pub fn width(&self) -> usize {
        self.inside.width()
    }

    pub fn height(&self) -> usize {
        self.inside.height()
    }

    /// All rooms ordered by id.
    pub fn rooms(&self) -> Vec<RoomRegion> {
        let mut by_id: BTreeMap<u8, Vec<Pos>> = BTreeMap::new();
        for (p, &rid) in self.room_ids.iter() {
            if rid > 0 {
                by_id.entry(rid).or_default().push(p);
            }
        }
        by_id
            .into_iter()
            .map(|(id, pixels)| {
                let label =
                    dominant_label(&self.category, &pixels).expect("validated on construction");
                let bbox = Rect::bounding(pixels.iter().copied()).expect("nonempty room");
                RoomRegion {
                    id,
                    label,
                    pixels,
                    bbox,
                }
            })
            .collect()
    }

    pub fn room(&self, id: u8) -> Option<RoomRegion> {
        self.rooms().into_iter().find(|r| r.id == id)
    }

    pub fn label_mask(&self, label: RoomLabel) -> Mask {
        self.category.map(|&l| l == label)
    }

    pub fn main_entrance_pixels(&self) -> Vec<Pos> {
        self.label_mask(RoomLabel::MainEntrance)
            .set_positions()
            .collect()
    }
}

/// Most frequent room label among `pixels` if it covers more than half of them.
fn dominant_label(category: &Grid<RoomLabel>, pixels: &[Pos]) -> Option<RoomLabel> {
    let mut counts = [0usize; 8];
    for &p in pixels {
        let l = category[p];
        if l.is_room() {
            counts[l.code() as usize] += 1;
        }
    }
    let (best, &n) = counts
        .iter()
        .enumerate()
        .max_by_key(|&(i, n)| (*n, std::cmp::Reverse(i)))?;
    (n * 2 > pixels.len()).then_some(RoomLabel::ROOMS[best])
}

/// Numbers 4-connected components of equal room labels from 1 upward in
/// row-major order of first pixel.
pub fn number_rooms(category: &Grid<RoomLabel>) -> Result<Grid<u8>, FloorplanError> {
    let (w, h) = category.dims();
    let mut ids = Grid::filled(w, h, 0u8);
    let mut next: u32 = 0;
    for start in category.positions() {
        let label = category[start];
        if !label.is_room() || ids[start] != 0 {
            continue;
        }
        next += 1;
        if next > 255 {
            return Err(FloorplanError::InvalidLayout("more than 255 rooms".into()));
        }
        ids[start] = next as u8;
        let mut queue = VecDeque::from([start]);
        while let Some(p) = queue.pop_front() {
            for q in p.neighbors4() {
                if category.get(q) == Some(&label) && ids[q] == 0 {
                    ids[q] = next as u8;
                    queue.push_back(q);
                }
            }
        }
    }
    Ok(ids)
}
