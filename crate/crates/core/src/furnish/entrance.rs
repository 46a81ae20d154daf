use std::collections::BTreeSet;

use crate::floorplan::{RasterFloorplan, RoomLabel};
use crate::grid::{Pos, Rect};

use super::FurnishError;

/// Deepest wall a doorway may pass through.
const MAX_WALL_DEPTH: i32 = 8;

/// Wall pixels of a room that separate it from the living area: pixels
/// directly outside the room from which a straight walk through wall or door
/// pixels reaches a living-room pixel within [`MAX_WALL_DEPTH`] steps.
pub fn shared_wall_pixels(fp: &RasterFloorplan, room_id: u8) -> Vec<Pos> {
    let ids = fp.room_ids();
    let cat = fp.category();
    let mut out = BTreeSet::new();
    for (q, &rid) in ids.iter() {
        if rid != room_id {
            continue;
        }
        for (dx, dy) in [(1, 0), (-1, 0), (0, 1), (0, -1)] {
            let w = Pos::new(q.x + dx, q.y + dy);
            if ids.get(w) == Some(&room_id) {
                continue;
            }
            let mut p = w;
            for _ in 0..MAX_WALL_DEPTH {
                match cat.get(p).copied() {
                    Some(RoomLabel::Wall | RoomLabel::InteriorDoor) => {
                        p = Pos::new(p.x + dx, p.y + dy);
                    }
                    _ => break,
                }
            }
            if p != w && cat.get(p) == Some(&RoomLabel::Living) {
                out.insert(w.yx());
            }
        }
    }
    out.into_iter().map(|(y, x)| Pos::new(x, y)).collect()
}

/// Picks the room entrance for a furniture piece: the shared-wall pixel with
/// the largest straight-line clearance to the piece. Ties go to the lowest
/// `(y, x)`.
pub fn synthesize_room_entrance(
    room_id: u8,
    fp: &RasterFloorplan,
    furniture_rect: &Rect,
) -> Result<Pos, FurnishError> {
    if !fp.room_ids().as_slice().contains(&room_id) || room_id == 0 {
        return Err(FurnishError::UnknownRoom(room_id));
    }
    let mut best: Option<(f64, Pos)> = None;
    // candidates arrive in (y, x) order, so a strict comparison keeps the
    // lowest position among equal clearances
    for w in shared_wall_pixels(fp, room_id) {
        let clearance = furniture_rect.distance_to(w);
        if best.is_none_or(|(c, _)| clearance > c) {
            best = Some((clearance, w));
        }
    }
    best.map(|(_, p)| p)
        .ok_or(FurnishError::NoSharedWall { room_id })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::floorplan::{outline, RASTER_SIZE};
    use crate::grid::{Grid, Mask};
    use crate::testutil::single_room;

    #[test]
    fn unique_shared_wall_hosts_the_entrance() {
        let fp = single_room(RoomLabel::Bathroom, 40, 40, 30);
        let room = fp
            .rooms()
            .into_iter()
            .find(|r| r.label == RoomLabel::Bathroom)
            .unwrap();
        let toilet = Rect::new(room.bbox.x, room.bbox.y, 8, 12);
        let e = synthesize_room_entrance(room.id, &fp, &toilet).unwrap();
        // the only wall shared with the living band is the room's south wall
        assert_eq!(e.y, room.bbox.bottom());
    }

    /// Corner room with living space to its south and to its east.
    fn corner_room() -> RasterFloorplan {
        let n = RASTER_SIZE;
        let outer = Rect::new(10, 10, 120, 120);
        let room = Rect::new(13, 13, 50, 40);
        let cat = Grid::from_fn(n, n, |p| {
            if !outer.contains(p) {
                RoomLabel::Outside
            } else if room.contains(p) {
                RoomLabel::Kitchen
            } else if p.x == 10 || p.y == 10 || p.x == 129 || p.y == 129 {
                if p.x == 10 && (80..90).contains(&p.y) {
                    RoomLabel::MainEntrance
                } else {
                    RoomLabel::Wall
                }
            } else if (63..66).contains(&p.x) && p.y < 56 || (53..56).contains(&p.y) && p.x < 66 {
                RoomLabel::Wall
            } else {
                RoomLabel::Living
            }
        });
        let inside = Mask::from_fn(n, n, |p| outer.contains(p));
        let ring = outline(&inside);
        RasterFloorplan::from_category("corner", inside, ring, cat).unwrap()
    }

    #[test]
    fn larger_clearance_wall_wins_and_matches_brute_force() {
        let fp = corner_room();
        let room = fp
            .rooms()
            .into_iter()
            .find(|r| r.label == RoomLabel::Kitchen)
            .unwrap();
        // furniture against the east wall (wall A); the south wall offers more room
        let stove = Rect::new(55, 13, 8, 40);
        let e = synthesize_room_entrance(room.id, &fp, &stove).unwrap();

        // oracle: every pixel just outside the room that is a wall pixel with
        // living space behind it, scanned exhaustively
        let mut best = (-1.0, Pos::new(0, 0));
        for y in 0..RASTER_SIZE as i32 {
            for x in 0..RASTER_SIZE as i32 {
                let w = Pos::new(x, y);
                if fp.category()[w] != RoomLabel::Wall {
                    continue;
                }
                let touches = [(1, 0), (-1, 0), (0, 1), (0, -1)]
                    .iter()
                    .find(|(dx, dy)| room.pixels.contains(&Pos::new(x - dx, y - dy)));
                let Some(&(dx, dy)) = touches else { continue };
                let mut p = w;
                while fp.category().get(p) == Some(&RoomLabel::Wall) {
                    p = Pos::new(p.x + dx, p.y + dy);
                }
                if fp.category().get(p) != Some(&RoomLabel::Living) {
                    continue;
                }
                let c = stove.distance_to(w);
                if c > best.0 {
                    best = (c, w);
                }
            }
        }
        assert_eq!(e, best.1);
        assert_eq!(e.y, 53, "entrance should sit on the south wall: {e}");
    }

    #[test]
    fn island_room_has_no_shared_wall() {
        let fp = single_room(RoomLabel::Study, 40, 40, 30);
        let cat = fp.category().map(|&l| {
            if l == RoomLabel::Living {
                RoomLabel::Balcony
            } else {
                l
            }
        });
        let fp = RasterFloorplan::from_category(
            "island",
            fp.inside().clone(),
            fp.boundary().clone(),
            cat,
        )
        .unwrap();
        let study = fp
            .rooms()
            .into_iter()
            .find(|r| r.label == RoomLabel::Study)
            .unwrap();
        let r =
            synthesize_room_entrance(study.id, &fp, &Rect::new(study.bbox.x, study.bbox.y, 5, 5));
        assert_eq!(r, Err(FurnishError::NoSharedWall { room_id: study.id }));
    }
}
