use crate::actsim::ActivityMap;
use crate::floorplan::RoomLabel;
use crate::grid::{Grid, Pos, Rect};

use super::geometry::edges;
use super::{interior_pixels, Door, Room, Segment, VectorizeError};

/// Opening width of a placed interior door, pixels.
pub const DOOR_WIDTH: i32 = 8;

/// Interior pixel of highest activity, lowest (y, x) on ties.
fn activity_peak(room: &Room, activity: &Grid<f64>) -> Option<Pos> {
    let mut best: Option<(Pos, f64)> = None;
    for p in interior_pixels(&room.polygon) {
        let v = activity.get(p).copied().unwrap_or(0.0);
        if best.is_none_or(|(_, b)| v > b) {
            best = Some((p, v));
        }
    }
    best.map(|(p, _)| p)
}

fn shared_edges(room: &Room, others: &[&Room]) -> Vec<Segment> {
    let mine = edges(&room.polygon);
    others
        .iter()
        .flat_map(|o| edges(&o.polygon))
        .flat_map(|e| mine.iter().filter_map(move |m| m.overlap(&e)))
        .collect()
}

fn squared(a: Pos, b: Pos) -> i64 {
    let (dx, dy) = (i64::from(a.x - b.x), i64::from(a.y - b.y));
    dx * dx + dy * dy
}

/// One door per non-living room, placed on the wall it shares with a living
/// room at the point nearest the room's activity peak. Rooms without a
/// living neighbour use any shared wall, then their own outline.
pub fn place_doors(rooms: &[Room], activity: &ActivityMap) -> Result<Vec<Door>, VectorizeError> {
    let living: Vec<&Room> = rooms
        .iter()
        .filter(|r| r.room_type == RoomLabel::Living)
        .collect();
    if living.is_empty() {
        return Err(VectorizeError::NoLivingRoom);
    }
    let mut doors = Vec::new();
    for (i, room) in rooms.iter().enumerate() {
        if room.room_type == RoomLabel::Living || room.polygon.len() < 4 {
            continue;
        }
        let others: Vec<&Room> = rooms
            .iter()
            .enumerate()
            .filter(|&(j, _)| j != i)
            .map(|(_, r)| r)
            .collect();
        let mut candidates = shared_edges(room, &living);
        if candidates.is_empty() {
            candidates = shared_edges(room, &others);
        }
        if candidates.is_empty() {
            candidates = edges(&room.polygon);
        }
        let peak = activity_peak(room, activity.density()).unwrap_or(room.polygon[0]);
        let (edge, near) = candidates
            .iter()
            .map(|e| (*e, e.nearest_point(peak)))
            .min_by_key(|&(_, q)| squared(q, peak))
            .expect("polygon has edges");
        let segment = edge.window(near, DOOR_WIDTH);
        let (lo, hi) = segment.span();
        let mid = (lo + hi) / 2;
        let position = if segment.is_horizontal() {
            Pos::new(mid, segment.coord())
        } else {
            Pos::new(segment.coord(), mid)
        };
        doors.push(Door {
            room_index: i,
            position,
            width: segment.len(),
            segment,
        });
    }
    Ok(doors)
}

/// Main entrance snapped onto the nearest wall line of matching orientation.
/// Tall entrance boxes give vertical segments.
pub fn main_entrance_segment(category: &Grid<RoomLabel>, walls: &[Segment]) -> Option<Segment> {
    let bbox = Rect::bounding(
        category
            .iter()
            .filter(|(_, &l)| l == RoomLabel::MainEntrance)
            .map(|(p, _)| p),
    )?;
    let vertical = bbox.h >= bbox.w;
    let center = bbox.center();
    let (probe, lo, hi) = if vertical {
        (center.x, bbox.y, bbox.bottom())
    } else {
        (center.y, bbox.x, bbox.right())
    };
    let coord = walls
        .iter()
        .filter(|s| s.is_horizontal() != vertical && !s.is_empty())
        .min_by_key(|s| {
            let (a, b) = s.span();
            // prefer lines running past the opening
            let miss = (a - lo).max(0) + (hi - b).max(0);
            ((s.coord() - probe).abs() + miss, s.coord())
        })
        .map(|s| s.coord())
        .unwrap_or(probe);
    Some(if vertical {
        Segment::vertical(coord, lo, hi)
    } else {
        Segment::horizontal(coord, lo, hi)
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::vectorize::{extract_walls, on_boundary, regularize_walls};
    use crate::{synth, vectorize::assign_rooms};

    fn rect(x0: i32, y0: i32, x1: i32, y1: i32) -> Vec<Pos> {
        vec![
            Pos::new(x0, y0),
            Pos::new(x1, y0),
            Pos::new(x1, y1),
            Pos::new(x0, y1),
        ]
    }

    fn room(t: RoomLabel, poly: Vec<Pos>) -> Room {
        Room {
            room_type: t,
            polygon: poly,
            closed: true,
            dominance: 1.0,
        }
    }

    #[test]
    fn door_follows_activity_peak() {
        let rooms = vec![
            room(RoomLabel::Living, rect(0, 0, 60, 20)),
            room(RoomLabel::Study, rect(0, 20, 60, 50)),
        ];
        let mut g = Grid::filled(64, 64, 0.0);
        g.set(Pos::new(45, 30), 1.0);
        let act = ActivityMap::new(g).unwrap();
        let doors = place_doors(&rooms, &act).unwrap();
        assert_eq!(doors.len(), 1);
        let d = &doors[0];
        assert_eq!(d.segment, Segment::horizontal(20, 41, 49));
        assert_eq!(d.position, Pos::new(45, 20));
        assert_eq!(d.width, DOOR_WIDTH);
    }

    #[test]
    fn flat_activity_picks_lowest_pixel() {
        let rooms = vec![
            room(RoomLabel::Living, rect(0, 0, 60, 20)),
            room(RoomLabel::Study, rect(0, 20, 60, 50)),
        ];
        let act = ActivityMap::zeros(64, 64);
        let d = &place_doors(&rooms, &act).unwrap()[0];
        // peak at (1, 21) projects onto (1, 20), clamped to the wall start
        assert_eq!(d.segment, Segment::horizontal(20, 0, 8));
    }

    #[test]
    fn no_living_room() {
        let rooms = vec![room(RoomLabel::Study, rect(0, 0, 10, 10))];
        assert_eq!(
            place_doors(&rooms, &ActivityMap::zeros(16, 16)),
            Err(VectorizeError::NoLivingRoom)
        );
    }

    #[test]
    fn synthetic_doors_sit_on_living_walls() {
        for seed in 0..6 {
            let fp = synth::floorplan(seed);
            let walls = regularize_walls(&extract_walls(fp.category())).unwrap();
            let rooms = assign_rooms(&walls, fp.category()).unwrap();
            let doors = place_doors(&rooms, &ActivityMap::zeros(256, 256)).unwrap();
            let living: Vec<_> = rooms
                .iter()
                .filter(|r| r.room_type == RoomLabel::Living)
                .collect();
            assert_eq!(doors.len(), rooms.len() - living.len());
            for d in &doors {
                assert!(
                    living.iter().any(|l| on_boundary(&l.polygon, d.position)),
                    "seed {seed}"
                );
            }
            let me = main_entrance_segment(fp.category(), &walls).unwrap();
            assert!(!me.is_horizontal());
            assert_eq!(me.len(), 10);
        }
    }
}
