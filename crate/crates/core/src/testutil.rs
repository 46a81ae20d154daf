//! Hand-built fixtures shared by unit tests.

use crate::floorplan::{outline, RasterFloorplan, RoomLabel, RASTER_SIZE};
use crate::grid::{Grid, Mask, Rect};

/// One room of the given interior size above a living band; the room's
/// door is in its south wall at `door_x..door_x+8`.
pub fn single_room(label: RoomLabel, w: i32, h: i32, door_x: i32) -> RasterFloorplan {
    let (x0, y0) = (20, 20);
    let room = Rect::new(x0 + 3, y0 + 3, w, h);
    let living = Rect::new(x0 + 3, room.bottom() + 3, w, 30);
    let outer = Rect::new(x0, y0, w + 6, h + 30 + 9);
    let n = RASTER_SIZE;
    let inside = Mask::from_fn(n, n, |p| outer.contains(p));
    let door = Rect::new(door_x, room.bottom(), 8, 3);
    let ent = Rect::new(x0, living.y + 10, 3, 10);
    let cat = Grid::from_fn(n, n, |p| {
        if !outer.contains(p) {
            RoomLabel::Outside
        } else if room.contains(p) {
            label
        } else if living.contains(p) {
            RoomLabel::Living
        } else if door.contains(p) {
            RoomLabel::InteriorDoor
        } else if ent.contains(p) {
            RoomLabel::MainEntrance
        } else {
            RoomLabel::Wall
        }
    });
    let ring = outline(&inside);
    RasterFloorplan::from_category("one", inside, ring, cat).unwrap()
}
