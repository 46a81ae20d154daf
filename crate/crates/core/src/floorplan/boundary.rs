use image::{Rgb, RgbImage};

use crate::grid::{Mask, Pos};

use super::{FloorplanError, RasterFloorplan, RoomLabel};

/// Building boundary: the footprint, its exterior ring and the main entrance.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BoundaryImage {
    inside: Mask,
    boundary: Mask,
    entrance: Mask,
}

impl BoundaryImage {
    /// Builds the canonical boundary of a footprint: the ring is the outline of
    /// `inside` joined with the entrance pixels.
    pub fn from_footprint(inside: Mask, entrance: Mask) -> Result<Self, FloorplanError> {
        if !inside.same_dims(&entrance) {
            return Err(FloorplanError::InvalidBoundary(
                "entrance mask dimensions differ from inside mask".into(),
            ));
        }
        let boundary = outline(&inside).or(&entrance.and(&inside));
        let entrance = entrance.and(&inside);
        Ok(Self {
            inside,
            boundary,
            entrance,
        })
    }

    /// Accepts explicit channels, checking that the ring is closed around the
    /// footprint and that the entrance lies on it.
    pub fn from_parts(
        inside: Mask,
        boundary: Mask,
        entrance: Mask,
    ) -> Result<Self, FloorplanError> {
        let b = Self {
            inside,
            boundary,
            entrance,
        };
        b.validate()?;
        Ok(b)
    }

    pub fn validate(&self) -> Result<(), FloorplanError> {
        let bad = |m: &str| Err(FloorplanError::InvalidBoundary(m.to_string()));
        if !self.inside.same_dims(&self.boundary) || !self.inside.same_dims(&self.entrance) {
            return bad("channel dimensions differ");
        }
        if self.inside.count() == 0 {
            return bad("empty footprint");
        }
        if self.boundary.and_not(&self.inside).count() > 0 {
            return bad("boundary ring leaves the footprint");
        }
        if self.entrance.count() == 0 {
            return Err(FloorplanError::NoEntrance);
        }
        if self.entrance.and_not(&self.boundary).count() > 0 {
            return bad("entrance not on the boundary ring");
        }
        if self.interior().count() == 0 {
            return bad("no interior inside the ring");
        }
        // flood from the image border through non-ring pixels; reaching any
        // footprint pixel means the ring has a gap
        let open = self.boundary.map(|&b| !b);
        let (w, h) = (self.inside.width() as i32, self.inside.height() as i32);
        let border = (0..w)
            .flat_map(|x| [Pos::new(x, 0), Pos::new(x, h - 1)])
            .chain((0..h).flat_map(|y| [Pos::new(0, y), Pos::new(w - 1, y)]));
        let reached = open.flood4(border);
        if reached.and(&self.inside).count() > 0 {
            return bad("boundary ring is not closed");
        }
        Ok(())
    }

    pub fn inside(&self) -> &Mask {
        &self.inside
    }

    pub fn boundary(&self) -> &Mask {
        &self.boundary
    }

    pub fn entrance(&self) -> &Mask {
        &self.entrance
    }

    pub fn width(&self) -> usize {
        self.inside.width()
    }

    pub fn height(&self) -> usize {
        self.inside.height()
    }

    /// Footprint pixels not on the ring.
    pub fn interior(&self) -> Mask {
        self.inside.and_not(&self.boundary)
    }

    /// The entrance pixel used as the main-entrance graph node: among entrance
    /// pixels touching the interior, the middle one in row-major order.
    pub fn entrance_point(&self) -> Option<Pos> {
        let interior = self.interior();
        let mut touching: Vec<Pos> = self
            .entrance
            .set_positions()
            .filter(|p| p.neighbors4().iter().any(|&q| interior.at(q)))
            .collect();
        if touching.is_empty() {
            touching = self.entrance.set_positions().collect();
        }
        touching.get(touching.len() / 2).copied()
    }

    /// Three-channel encoding: red = inside, green = ring, blue = entrance.
    pub fn to_rgb(&self) -> RgbImage {
        let (w, h) = (self.width() as u32, self.height() as u32);
        RgbImage::from_fn(w, h, |x, y| {
            let p = Pos::new(x as i32, y as i32);
            let v = |m: &Mask| if m.at(p) { 255 } else { 0 };
            Rgb([v(&self.inside), v(&self.boundary), v(&self.entrance)])
        })
    }

    pub fn from_rgb(img: &RgbImage) -> Result<Self, FloorplanError> {
        let (w, h) = (img.width() as usize, img.height() as usize);
        let channel =
            |c: usize| Mask::from_fn(w, h, |p| img.get_pixel(p.x as u32, p.y as u32)[c] >= 128);
        Self::from_parts(channel(0), channel(1), channel(2))
    }
}

/// Footprint pixels with at least one 8-neighbour outside the footprint (or
/// beyond the image edge). The 8-neighbourhood keeps the ring 4-connected
/// around concave corners.
pub fn outline(inside: &Mask) -> Mask {
    Mask::from_fn(inside.width(), inside.height(), |p| {
        inside[p] && p.neighbors8().iter().any(|&q| !inside.at(q))
    })
}

/// Recovers the building boundary of a floorplan from its inside mask and its
/// `MainEntrance` pixels; room labels play no part.
pub fn extract_boundary(fp: &RasterFloorplan) -> Result<BoundaryImage, FloorplanError> {
    let entrance = fp.label_mask(RoomLabel::MainEntrance);
    if entrance.count() == 0 {
        return Err(FloorplanError::NoEntrance);
    }
    BoundaryImage::from_footprint(fp.inside().clone(), entrance)
}
