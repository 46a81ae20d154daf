use std::collections::{BTreeMap, VecDeque};

use crate::floorplan::RoomLabel;
use crate::grid::{Grid, Pos};

use super::{Room, Segment, VectorizeError};

/// Minimum share of the dominant type for a room to count as unambiguous.
pub const DOMINANCE_THRESHOLD: f64 = 0.8;

/// Planar subdivision induced by the distinct wall line coordinates. A cell
/// edge is a wall when segments on its line cover at least half of it.
#[derive(Debug, Clone)]
pub struct WallGrid {
    xs: Vec<i32>,
    ys: Vec<i32>,
    /// Vertical edge at `xs[i]` spanning row band `j`, index `j * xs.len() + i`.
    v_wall: Vec<bool>,
    /// Horizontal edge at `ys[j]` spanning column band `i`, index `j * (xs.len() - 1) + i`.
    h_wall: Vec<bool>,
}

/// Cell coordinates: column band and row band.
type Cell = (usize, usize);

impl WallGrid {
    pub fn new(segments: &[Segment]) -> Self {
        let mut xs: Vec<i32> = segments
            .iter()
            .filter(|s| !s.is_horizontal())
            .map(|s| s.coord())
            .collect();
        let mut ys: Vec<i32> = segments
            .iter()
            .filter(|s| s.is_horizontal())
            .map(|s| s.coord())
            .collect();
        xs.sort_unstable();
        xs.dedup();
        ys.sort_unstable();
        ys.dedup();
        let covered = |horizontal: bool, coord: i32, lo: i32, hi: i32| {
            let len: i32 = segments
                .iter()
                .filter(|s| s.is_horizontal() == horizontal && s.coord() == coord)
                .map(|s| {
                    let (a, b) = s.span();
                    (b.min(hi) - a.max(lo)).max(0)
                })
                .sum();
            2 * len >= hi - lo
        };
        let (nx, ny) = (xs.len(), ys.len());
        let mut v_wall = vec![false; nx * ny.saturating_sub(1)];
        for j in 0..ny.saturating_sub(1) {
            for i in 0..nx {
                v_wall[j * nx + i] = covered(false, xs[i], ys[j], ys[j + 1]);
            }
        }
        let mut h_wall = vec![false; nx.saturating_sub(1) * ny];
        for j in 0..ny {
            for i in 0..nx.saturating_sub(1) {
                h_wall[j * (nx - 1) + i] = covered(true, ys[j], xs[i], xs[i + 1]);
            }
        }
        Self {
            xs,
            ys,
            v_wall,
            h_wall,
        }
    }

    fn cols(&self) -> usize {
        self.xs.len().saturating_sub(1)
    }

    fn rows(&self) -> usize {
        self.ys.len().saturating_sub(1)
    }

    /// Neighbouring cells reachable without crossing a wall; `None` stands
    /// for the exterior beyond the grid.
    fn open_neighbours(&self, (i, j): Cell) -> Vec<Option<Cell>> {
        let nx = self.xs.len();
        let mut out = Vec::with_capacity(4);
        if !self.v_wall[j * nx + i] {
            out.push(i.checked_sub(1).map(|i| (i, j)));
        }
        if !self.v_wall[j * nx + i + 1] {
            out.push((i + 1 < self.cols()).then_some((i + 1, j)));
        }
        if !self.h_wall[j * self.cols() + i] {
            out.push(j.checked_sub(1).map(|j| (i, j)));
        }
        if !self.h_wall[(j + 1) * self.cols() + i] {
            out.push((j + 1 < self.rows()).then_some((i, j + 1)));
        }
        out
    }

    /// Connected groups of cells. The first returned flag marks groups that
    /// reach the exterior.
    fn groups(&self) -> Vec<(bool, Vec<Cell>)> {
        let (cols, rows) = (self.cols(), self.rows());
        let mut seen = vec![false; cols * rows];
        let mut out = Vec::new();
        for j in 0..rows {
            for i in 0..cols {
                if seen[j * cols + i] {
                    continue;
                }
                seen[j * cols + i] = true;
                let mut cells = vec![(i, j)];
                let mut exterior = false;
                let mut queue = VecDeque::from([(i, j)]);
                while let Some(c) = queue.pop_front() {
                    for n in self.open_neighbours(c) {
                        match n {
                            None => exterior = true,
                            Some((a, b)) if !seen[b * cols + a] => {
                                seen[b * cols + a] = true;
                                cells.push((a, b));
                                queue.push_back((a, b));
                            }
                            Some(_) => {}
                        }
                    }
                }
                out.push((exterior, cells));
            }
        }
        out
    }

    /// Cells not reachable from the exterior.
    pub fn enclosed_cells(&self) -> usize {
        self.groups()
            .iter()
            .filter(|(ext, _)| !ext)
            .map(|(_, c)| c.len())
            .sum()
    }

    /// Pixels strictly between a cell's bounding lines.
    fn cell_pixels(&self, (i, j): Cell) -> impl Iterator<Item = Pos> {
        let (x0, x1, y0, y1) = (self.xs[i], self.xs[i + 1], self.ys[j], self.ys[j + 1]);
        (y0 + 1..y1).flat_map(move |y| (x0 + 1..x1).map(move |x| Pos::new(x, y)))
    }

    /// Outline of a union of cells in pixel coordinates, collinear vertices
    /// removed. With several rings the one of largest area is returned.
    fn outline(&self, cells: &[Cell]) -> Vec<Pos> {
        let cols = self.cols();
        let mut member = vec![false; cols * self.rows()];
        for &(i, j) in cells {
            member[j * cols + i] = true;
        }
        let inside = |i: isize, j: isize| {
            i >= 0
                && j >= 0
                && (i as usize) < cols
                && (j as usize) < self.rows()
                && member[j as usize * cols + i as usize]
        };
        // directed boundary edges between lattice points, clockwise on screen
        let mut next: BTreeMap<(usize, usize), Vec<(usize, usize)>> = BTreeMap::new();
        for &(i, j) in cells {
            let (ii, jj) = (i as isize, j as isize);
            if !inside(ii, jj - 1) {
                next.entry((i, j)).or_default().push((i + 1, j));
            }
            if !inside(ii + 1, jj) {
                next.entry((i + 1, j)).or_default().push((i + 1, j + 1));
            }
            if !inside(ii, jj + 1) {
                next.entry((i + 1, j + 1)).or_default().push((i, j + 1));
            }
            if !inside(ii - 1, jj) {
                next.entry((i, j + 1)).or_default().push((i, j));
            }
        }
        let mut rings: Vec<Vec<Pos>> = Vec::new();
        while let Some((&start, _)) = next.iter().find(|(_, v)| !v.is_empty()) {
            let mut ring = Vec::new();
            let mut cur = start;
            loop {
                ring.push(Pos::new(self.xs[cur.0], self.ys[cur.1]));
                let outs = next.get_mut(&cur).expect("boundary edges chain");
                let to = outs.remove(0);
                cur = to;
                if cur == start {
                    break;
                }
            }
            rings.push(simplify(ring));
        }
        rings
            .into_iter()
            .max_by(|a, b| super::polygon_area(a).total_cmp(&super::polygon_area(b)))
            .unwrap_or_default()
    }
}

fn simplify(ring: Vec<Pos>) -> Vec<Pos> {
    let n = ring.len();
    (0..n)
        .filter(|&k| {
            let (p, c, q) = (ring[(k + n - 1) % n], ring[k], ring[(k + 1) % n]);
            !((p.x == c.x && c.x == q.x) || (p.y == c.y && c.y == q.y))
        })
        .map(|k| ring[k])
        .collect()
}

struct Tally {
    total: usize,
    inside: usize,
    rooms: [usize; 8],
}

fn tally(grid: &WallGrid, cells: &[Cell], category: &Grid<RoomLabel>) -> Tally {
    let mut t = Tally {
        total: 0,
        inside: 0,
        rooms: [0; 8],
    };
    for &c in cells {
        for p in grid.cell_pixels(c) {
            let l = category.get(p).copied().unwrap_or(RoomLabel::Outside);
            t.total += 1;
            if l != RoomLabel::Outside {
                t.inside += 1;
            }
            if l.is_room() {
                t.rooms[l.code() as usize] += 1;
            }
        }
    }
    t
}

fn room_from(grid: &WallGrid, cells: &[Cell], t: &Tally, closed: bool) -> Room {
    let n: usize = t.rooms.iter().sum();
    let (best, &count) = t
        .rooms
        .iter()
        .enumerate()
        .max_by_key(|&(i, c)| (*c, std::cmp::Reverse(i)))
        .expect("eight room codes");
    Room {
        room_type: RoomLabel::ROOMS[best],
        polygon: grid.outline(cells),
        closed,
        dominance: count as f64 / n as f64,
    }
}

/// Rooms enclosed by the segments, typed by majority among room-labelled
/// pixels. Regions mostly off the footprint or without room pixels are
/// dropped. Footprint regions leaking to the exterior are kept with
/// `closed == false`.
pub fn assign_rooms_lenient(
    segments: &[Segment],
    category: &Grid<RoomLabel>,
) -> Result<Vec<Room>, VectorizeError> {
    let grid = WallGrid::new(segments);
    let mut rooms = Vec::new();
    let mut leaking: Vec<Cell> = Vec::new();
    for (exterior, cells) in grid.groups() {
        if exterior {
            // keep only footprint cells; they are regrouped below
            for c in cells {
                let t = tally(&grid, &[c], category);
                if 2 * t.inside > t.total && t.rooms.iter().sum::<usize>() > 0 {
                    leaking.push(c);
                }
            }
            continue;
        }
        let t = tally(&grid, &cells, category);
        if 2 * t.inside <= t.total || t.rooms.iter().sum::<usize>() == 0 {
            continue;
        }
        rooms.push(room_from(&grid, &cells, &t, true));
    }
    if rooms.is_empty() && leaking.is_empty() {
        return Err(VectorizeError::NoClosedRegion);
    }
    leaking.sort_by_key(|&(i, j)| (j, i));
    let mut taken = vec![false; leaking.len()];
    for s in 0..leaking.len() {
        if taken[s] {
            continue;
        }
        taken[s] = true;
        let mut group = vec![leaking[s]];
        let mut k = 0;
        while k < group.len() {
            let c = group[k];
            k += 1;
            for n in grid.open_neighbours(c).into_iter().flatten() {
                if let Some(idx) = leaking.iter().position(|&l| l == n) {
                    if !taken[idx] {
                        taken[idx] = true;
                        group.push(n);
                    }
                }
            }
        }
        let t = tally(&grid, &group, category);
        rooms.push(room_from(&grid, &group, &t, false));
    }
    Ok(rooms)
}

/// Like [`assign_rooms_lenient`] but rejects any room whose dominant type
/// falls below [`DOMINANCE_THRESHOLD`].
pub fn assign_rooms(
    segments: &[Segment],
    category: &Grid<RoomLabel>,
) -> Result<Vec<Room>, VectorizeError> {
    let rooms = assign_rooms_lenient(segments, category)?;
    if let Some((index, r)) = rooms
        .iter()
        .enumerate()
        .find(|(_, r)| r.dominance < DOMINANCE_THRESHOLD)
    {
        return Err(VectorizeError::AmbiguousRoom {
            index,
            dominance: r.dominance,
        });
    }
    Ok(rooms)
}
