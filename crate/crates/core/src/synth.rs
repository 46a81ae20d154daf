//! Procedural residential floorplans in the raster format.
//!
//! Every plan has a living band running the full width of the footprint with
//! one or two rows of rooms above and below it. Each room opens onto the
//! living band through an interior door, and the main entrance sits on the
//! left or right exterior wall of the band. Rows may be shorter than the band,
//! which produces L, T and Z shaped footprints.

use rand::seq::{IndexedRandom, SliceRandom};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::floorplan::{outline, RasterFloorplan, RoomLabel, RASTER_SIZE};
use crate::grid::{Grid, Mask, Rect};

/// Exterior and interior wall thickness in pixels.
pub const WALL: i32 = 3;
const MIN_ROOM: i32 = 38;

/// One procedurally generated plan with the geometry used to build it.
#[derive(Debug, Clone)]
pub struct SynthPlan {
    pub floorplan: RasterFloorplan,
    /// Interior rectangle and category of every room, living band first.
    pub rooms: Vec<(Rect, RoomLabel)>,
    /// Door pixels of each non-living room, same order as `rooms[1..]`.
    pub doors: Vec<Rect>,
    pub main_entrance: Rect,
}

pub fn floorplan(seed: u64) -> RasterFloorplan {
    plan(seed).floorplan
}

pub fn dataset(count: usize, seed: u64) -> Vec<RasterFloorplan> {
    (0..count as u64)
        .map(|i| floorplan(crate::grid::derive_seed(seed, i)).with_id(format!("fp{i:04}")))
        .collect()
}

pub fn plan(seed: u64) -> SynthPlan {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let n = RASTER_SIZE as i32;

    let width = rng.random_range(150..=228);
    let top_h = rng.random_range(42..=68);
    let living_h = rng.random_range(36..=54);
    let bottom_h = rng.random_range(42..=68);
    let height = top_h + living_h + bottom_h + 4 * WALL;
    let x0 = rng.random_range(2..=n - width - 2);
    let y0 = rng.random_range(2..=n - height - 2);

    let living_y = y0 + 2 * WALL + top_h;
    let bottom_y = living_y + living_h + WALL;

    // each room row may be shortened from the left or the right
    let row_span = |rng: &mut ChaCha8Rng| -> (i32, i32) {
        if rng.random_bool(0.4) {
            let cut = rng.random_range(36..=(width / 3).max(37));
            if rng.random_bool(0.5) {
                (x0 + cut, width - cut)
            } else {
                (x0, width - cut)
            }
        } else {
            (x0, width)
        }
    };
    let (top_x, top_w) = row_span(&mut rng);
    let (bot_x, bot_w) = row_span(&mut rng);

    let mut inside = Mask::filled(RASTER_SIZE, RASTER_SIZE, false);
    inside.fill_rect(&Rect::new(top_x, y0, top_w, living_y - y0), true);
    inside.fill_rect(
        &Rect::new(x0, living_y - WALL, width, living_h + 2 * WALL),
        true,
    );
    inside.fill_rect(
        &Rect::new(bot_x, bottom_y - WALL, bot_w, bottom_h + 2 * WALL),
        true,
    );

    let mut category = Grid::from_fn(RASTER_SIZE, RASTER_SIZE, |p| {
        if inside[p] {
            RoomLabel::Wall
        } else {
            RoomLabel::Outside
        }
    });
    let paint = |cat: &mut Grid<RoomLabel>, r: &Rect, l: RoomLabel| {
        for p in r.pixels() {
            cat.set(p, l);
        }
    };

    let living = Rect::new(x0 + WALL, living_y, width - 2 * WALL, living_h);
    let mut rooms = vec![(living, RoomLabel::Living)];
    let mut doors = Vec::new();

    let top_rooms = split_row(&mut rng, top_x + WALL, top_w - 2 * WALL);
    let bot_rooms = split_row(&mut rng, bot_x + WALL, bot_w - 2 * WALL);
    let total = top_rooms.len() + bot_rooms.len();
    let labels = room_labels(&mut rng, total);

    for (i, &(rx, rw)) in top_rooms.iter().enumerate() {
        let r = Rect::new(rx, y0 + WALL, rw, top_h);
        rooms.push((r, labels[i]));
        doors.push(door_in(&mut rng, rx, rw, living_y - WALL));
    }
    for (i, &(rx, rw)) in bot_rooms.iter().enumerate() {
        let r = Rect::new(rx, bottom_y, rw, bottom_h);
        rooms.push((r, labels[top_rooms.len() + i]));
        doors.push(door_in(&mut rng, rx, rw, living_y + living_h));
    }
    for (r, l) in &rooms {
        paint(&mut category, r, *l);
    }
    for d in &doors {
        paint(&mut category, d, RoomLabel::InteriorDoor);
    }

    let ew = 10;
    let ey = rng.random_range(living_y + 3..=living_y + living_h - 3 - ew);
    let ex = if rng.random_bool(0.5) {
        x0
    } else {
        x0 + width - WALL
    };
    let main_entrance = Rect::new(ex, ey, WALL, ew);
    paint(&mut category, &main_entrance, RoomLabel::MainEntrance);

    let mut boundary = outline(&inside);
    for p in main_entrance.pixels() {
        boundary.set(p, true);
    }

    let floorplan =
        RasterFloorplan::from_category(format!("synth{seed}"), inside, boundary, category)
            .expect("procedural plan is valid by construction");
    SynthPlan {
        floorplan,
        rooms,
        doors,
        main_entrance,
    }
}

/// Splits an interior span into 1..=3 rooms separated by walls.
fn split_row(rng: &mut ChaCha8Rng, x: i32, w: i32) -> Vec<(i32, i32)> {
    let max_rooms = ((w + WALL) / (MIN_ROOM + WALL)).clamp(1, 3);
    let count = rng.random_range(1..=max_rooms);
    let free = w - (count - 1) * WALL - count * MIN_ROOM;
    // distribute the slack randomly
    let mut cuts: Vec<i32> = (0..count - 1).map(|_| rng.random_range(0..=free)).collect();
    cuts.sort_unstable();
    let mut widths = Vec::with_capacity(count as usize);
    let mut prev = 0;
    for c in cuts.iter().copied().chain(std::iter::once(free)) {
        widths.push(MIN_ROOM + c - prev);
        prev = c;
    }
    let mut out = Vec::with_capacity(widths.len());
    let mut cx = x;
    for rw in widths {
        out.push((cx, rw));
        cx += rw + WALL;
    }
    out
}

fn door_in(rng: &mut ChaCha8Rng, rx: i32, rw: i32, wall_y: i32) -> Rect {
    let dw = rng.random_range(8..=10);
    let dx = rng.random_range(rx + 4..=rx + rw - 4 - dw);
    Rect::new(dx, wall_y, dw, WALL)
}

fn room_labels(rng: &mut ChaCha8Rng, count: usize) -> Vec<RoomLabel> {
    const POOL: [RoomLabel; 8] = [
        RoomLabel::Second,
        RoomLabel::Second,
        RoomLabel::Study,
        RoomLabel::Bathroom,
        RoomLabel::Bathroom,
        RoomLabel::Kitchen,
        RoomLabel::Balcony,
        RoomLabel::OtherRoom,
    ];
    let mut labels: Vec<RoomLabel> = (1..count)
        .map(|_| *POOL.choose(rng).expect("nonempty pool"))
        .collect();
    labels.push(RoomLabel::Master);
    labels.shuffle(rng);
    labels
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn plans_are_valid_and_deterministic() {
        for seed in 0..40 {
            let a = plan(seed);
            let b = plan(seed);
            assert_eq!(a.floorplan, b.floorplan);
            let rooms = a.floorplan.rooms();
            assert_eq!(rooms.len(), a.rooms.len(), "seed {seed}");
            assert!(rooms.iter().any(|r| r.label == RoomLabel::Master));
            assert!(rooms.iter().any(|r| r.label == RoomLabel::Living));
            for (r, _) in &a.rooms {
                assert!(r.w >= MIN_ROOM && r.h >= 36, "seed {seed}: {r:?}");
            }
        }
    }
}
