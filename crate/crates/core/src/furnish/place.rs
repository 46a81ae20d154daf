use std::collections::HashSet;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::floorplan::{RasterFloorplan, RoomLabel, RoomRegion};
use crate::grid::{derive_seed, Mask, Pos, Rect};

use super::{
    CandidateSide, FurnishError, FurnitureInstance, FurnitureKind, KindRule, PlacementPolicy,
    SizeRule,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Side {
    North,
    East,
    South,
    West,
}

impl Side {
    fn opposite(self) -> Side {
        match self {
            Side::North => Side::South,
            Side::South => Side::North,
            Side::East => Side::West,
            Side::West => Side::East,
        }
    }

    fn horizontal(self) -> bool {
        matches!(self, Side::North | Side::South)
    }
}

/// A room's doorway: the door pixels touching the room and the pixel chosen
/// as the entrance node.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RoomEntrance {
    pub position: Pos,
    pub door: Vec<Pos>,
}

/// Finds the doorway of a room: the first (row-major) 4-connected group of
/// `InteriorDoor` pixels that touch the room. The entrance position is the
/// middle pixel of that group among those adjacent to the room.
pub fn room_entrance(fp: &RasterFloorplan, room: &RoomRegion) -> Option<RoomEntrance> {
    let cat = fp.category();
    let in_room: HashSet<Pos> = room.pixels.iter().copied().collect();
    let mut door_mask = Mask::filled(fp.width(), fp.height(), false);
    for (p, &l) in cat.iter() {
        if l == RoomLabel::InteriorDoor {
            door_mask.set(p, true);
        }
    }
    let mut touching: Vec<Pos> = door_mask
        .set_positions()
        .filter(|p| p.neighbors4().iter().any(|q| in_room.contains(q)))
        .collect();
    touching.sort_by_key(|p| p.yx());
    let first = *touching.first()?;
    let group = door_mask.flood4([first]);
    let mut adjacent: Vec<Pos> = touching.into_iter().filter(|&p| group.at(p)).collect();
    adjacent.sort_by_key(|p| p.yx());
    let position = adjacent[adjacent.len() / 2];
    Some(RoomEntrance {
        position,
        door: group.set_positions().collect(),
    })
}

fn entrance_side(bbox: &Rect, e: Pos) -> Side {
    if e.y < bbox.y {
        Side::North
    } else if e.y >= bbox.bottom() {
        Side::South
    } else if e.x < bbox.x {
        Side::West
    } else if e.x >= bbox.right() {
        Side::East
    } else {
        // doorway inside the bounding box of a non-rectangular room: nearest edge
        let d = [
            (e.y - bbox.y, Side::North),
            (bbox.right() - 1 - e.x, Side::East),
            (bbox.bottom() - 1 - e.y, Side::South),
            (e.x - bbox.x, Side::West),
        ];
        d.iter()
            .min_by_key(|(dist, _)| *dist)
            .expect("four sides")
            .1
    }
}

fn wall_span(bbox: &Rect, side: Side) -> (i32, i32) {
    if side.horizontal() {
        (bbox.x, bbox.right())
    } else {
        (bbox.y, bbox.bottom())
    }
}

/// Rectangle of `along` x `depth` flush against `side`, starting at `pos`
/// along the wall.
fn against(bbox: &Rect, side: Side, pos: i32, along: i32, depth: i32) -> Rect {
    match side {
        Side::North => Rect::new(pos, bbox.y, along, depth),
        Side::South => Rect::new(pos, bbox.bottom() - depth, along, depth),
        Side::West => Rect::new(bbox.x, pos, depth, along),
        Side::East => Rect::new(bbox.right() - depth, pos, depth, along),
    }
}

fn piece_size(rule: &KindRule, room: &RoomRegion, side: Side) -> (i32, i32) {
    match rule.size {
        SizeRule::AreaFraction {
            fraction,
            aspect,
            long_along_wall,
        } => {
            let area = fraction * room.area() as f64;
            let long = (area * aspect).sqrt();
            let short = area / long;
            let (along, depth) = if long_along_wall {
                (long, short)
            } else {
                (short, long)
            };
            // shrink, keeping the aspect, until the piece fits the room's extent
            let (span_along, span_depth) = if side.horizontal() {
                (room.bbox.w, room.bbox.h)
            } else {
                (room.bbox.h, room.bbox.w)
            };
            let k = (f64::from(span_along) / along)
                .min(f64::from(span_depth) / depth)
                .min(1.0);
            let px = |v: f64| (v * k).round().max(1.0) as i32;
            (px(along), px(depth))
        }
        SizeRule::Fixed { along, depth } => (along, depth),
        SizeRule::WallLength { depth } => {
            let (a, b) = wall_span(&room.bbox, side);
            (b - a, depth)
        }
    }
}

/// All rule-allowed rectangles for `kind` in `room`, in a fixed order and
/// without duplicates. Candidates that leave the room or touch the doorway's
/// one-pixel clearance zone are dropped.
pub fn candidate_rects(
    fp: &RasterFloorplan,
    room: &RoomRegion,
    entrance: &RoomEntrance,
    rule: &KindRule,
) -> Vec<Rect> {
    let bbox = room.bbox;
    let e = entrance.position;
    let side = entrance_side(&bbox, e);
    let coord = |s: Side| if s.horizontal() { e.x } else { e.y };
    let (door_lo, door_hi) = entrance
        .door
        .iter()
        .map(|p| coord_of(*p, side))
        .fold((i32::MAX, i32::MIN), |(lo, hi), c| (lo.min(c), hi.max(c)));

    let mut raw = Vec::new();
    let centered = |s: Side, c: i32, along: i32| {
        let (a, b) = wall_span(&bbox, s);
        (c - along / 2).clamp(a, (b - along).max(a))
    };
    for &cand in &rule.sides {
        match cand {
            CandidateSide::Opposite => {
                let s = side.opposite();
                let (along, depth) = piece_size(rule, room, s);
                raw.push(against(
                    &bbox,
                    s,
                    centered(s, coord(s), along),
                    along,
                    depth,
                ));
            }
            CandidateSide::DiagonallyOpposite => {
                let s = side.opposite();
                let (a, b) = wall_span(&bbox, s);
                let c = coord(s);
                let far_high = (b - 1 - c) >= (c - a);
                let (along, depth) = piece_size(rule, room, s);
                let pos = if far_high { b - along } else { a };
                raw.push(against(&bbox, s, pos, along, depth));
                // the side wall meeting the opposite wall in that corner
                let corner_side = match (s.horizontal(), far_high) {
                    (true, true) => Side::East,
                    (true, false) => Side::West,
                    (false, true) => Side::South,
                    (false, false) => Side::North,
                };
                let (along2, depth2) = piece_size(rule, room, corner_side);
                let (a2, b2) = wall_span(&bbox, corner_side);
                let near_opposite_high = matches!(s, Side::South | Side::East);
                let pos2 = if near_opposite_high { b2 - along2 } else { a2 };
                raw.push(against(&bbox, corner_side, pos2, along2, depth2));
            }
            CandidateSide::BesideEntrance => {
                let s = side;
                let (along, depth) = piece_size(rule, room, s);
                raw.push(against(
                    &bbox,
                    s,
                    door_lo - rule.entrance_gap - along,
                    along,
                    depth,
                ));
                raw.push(against(
                    &bbox,
                    s,
                    door_hi + 1 + rule.entrance_gap,
                    along,
                    depth,
                ));
            }
            CandidateSide::AnySide => {
                for s in [Side::North, Side::East, Side::South, Side::West] {
                    let (a, b) = wall_span(&bbox, s);
                    let (along, depth) = piece_size(rule, room, s);
                    raw.push(against(
                        &bbox,
                        s,
                        centered(s, (a + b) / 2, along),
                        along,
                        depth,
                    ));
                }
            }
        }
    }

    let region: HashSet<Pos> = room.pixels.iter().copied().collect();
    let clearance = clearance_zone(fp, entrance);
    let mut out: Vec<Rect> = Vec::new();
    for r in raw {
        if r.is_empty() || out.contains(&r) {
            continue;
        }
        if r.pixels()
            .all(|p| region.contains(&p) && !clearance.contains(&p))
        {
            out.push(r);
        }
    }
    out
}

fn coord_of(p: Pos, side: Side) -> i32 {
    if side.horizontal() {
        p.x
    } else {
        p.y
    }
}

/// Pixels within Chebyshev distance 1 of the doorway.
fn clearance_zone(fp: &RasterFloorplan, entrance: &RoomEntrance) -> HashSet<Pos> {
    let mut zone = HashSet::new();
    for &d in &entrance.door {
        for dy in -1..=1 {
            for dx in -1..=1 {
                let p = Pos::new(d.x + dx, d.y + dy);
                if fp.inside().at(p) {
                    zone.insert(p);
                }
            }
        }
    }
    zone
}

/// Places exactly one primary piece in every Master, Second, Study, Bathroom,
/// Kitchen and Balcony room. The location is drawn uniformly from the
/// rule-allowed candidates with a per-room stream derived from `seed`.
pub fn place_primary_furniture(
    fp: &RasterFloorplan,
    policy: &PlacementPolicy,
    seed: u64,
) -> Result<Vec<FurnitureInstance>, FurnishError> {
    policy.validate()?;
    let mut placed = Vec::new();
    for room in fp.rooms() {
        let Some(kind) = FurnitureKind::for_room(room.label) else {
            continue;
        };
        let Some(rule) = policy.rule(kind) else {
            continue;
        };
        let entrance =
            room_entrance(fp, &room).ok_or(FurnishError::NoRoomEntrance { room_id: room.id })?;
        let candidates = candidate_rects(fp, &room, &entrance, rule);
        if candidates.is_empty() {
            return Err(FurnishError::RoomTooSmall {
                room_id: room.id,
                kind,
            });
        }
        let mut rng = ChaCha8Rng::seed_from_u64(derive_seed(seed, u64::from(room.id)));
        let rect = candidates[rng.random_range(0..candidates.len())];
        placed.push(FurnitureInstance {
            kind,
            rect,
            room_id: room.id,
            entrance: entrance.position,
        });
    }
    Ok(placed)
}
