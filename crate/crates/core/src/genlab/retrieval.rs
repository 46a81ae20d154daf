use std::collections::VecDeque;
use std::sync::Arc;

use crate::floorplan::RoomLabel;
use crate::grid::{Grid, Mask, Pos, Rect};
use crate::metrics::nmi;

use super::{DatasetEntry, DatasetIndex, GenError, Generator, GeneratorInput};

/// Candidates considered after the boundary ranking.
pub const DEFAULT_TOP_K: usize = 10;

/// Boundary-nearest retrieval refined by activity similarity.
///
/// The `k` dataset boundaries closest in Hu distance are re-ranked by NMI
/// between activity maps and the best entry's layout is transferred onto the
/// input footprint.
pub fn retrieval_generate(
    input: &GeneratorInput,
    index: &DatasetIndex,
    k: usize,
) -> Result<Grid<RoomLabel>, GenError> {
    if k == 0 {
        return Err(GenError::InvalidK);
    }
    let inside = input.boundary().inside();
    let ranked = index.nearest(inside, k)?;
    let mut best = ranked[0].0;
    let mut best_score = f64::NEG_INFINITY;
    for &(i, _) in &ranked {
        let score = nmi(input.activity(), &index.entries()[i].activity).unwrap_or(0.0);
        if score > best_score {
            best_score = score;
            best = i;
        }
    }
    log::debug!(
        "retrieved {} (nmi {best_score:.3})",
        index.entries()[best].id
    );
    Ok(transfer_layout(&index.entries()[best], inside))
}

/// Maps an entry's layout onto `inside` by aligning bounding boxes, then
/// fills footprint pixels left uncovered with the nearest transferred room
/// label (4-connected distance, lower code on ties).
pub fn transfer_layout(entry: &DatasetEntry, inside: &Mask) -> Grid<RoomLabel> {
    let (w, h) = inside.dims();
    let mut out = Grid::filled(w, h, RoomLabel::Outside);
    let (Some(dst), Some(src)) = (
        Rect::bounding(inside.set_positions()),
        Rect::bounding(entry.inside.set_positions()),
    ) else {
        return out;
    };
    let map = |p: Pos| {
        let sx = src.x + ((i64::from(p.x - dst.x) * i64::from(src.w)) / i64::from(dst.w)) as i32;
        let sy = src.y + ((i64::from(p.y - dst.y) * i64::from(src.h)) / i64::from(dst.h)) as i32;
        Pos::new(sx, sy)
    };
    let mut covered = Mask::filled(w, h, false);
    for p in inside.set_positions() {
        let l = entry
            .category
            .get(map(p))
            .copied()
            .unwrap_or(RoomLabel::Outside);
        if l != RoomLabel::Outside {
            out.set(p, l);
            covered.set(p, true);
        }
    }
    fill_nearest(&mut out, &covered, inside);
    out
}

fn fill_nearest(out: &mut Grid<RoomLabel>, covered: &Mask, inside: &Mask) {
    let pending = inside.and_not(covered);
    if pending.count() == 0 {
        return;
    }
    let (w, h) = inside.dims();
    let mut dist = Grid::filled(w, h, u32::MAX);
    let mut queue = VecDeque::new();
    for p in covered.set_positions() {
        if out[p].is_room() {
            dist.set(p, 0);
            queue.push_back(p);
        }
    }
    if queue.is_empty() {
        for p in pending.set_positions() {
            out.set(p, RoomLabel::Wall);
        }
        return;
    }
    // settle level by level so each pixel sees every source at the minimal
    // distance before choosing the lowest code
    while !queue.is_empty() {
        let mut next = Vec::new();
        for p in queue.drain(..) {
            for q in p.neighbors4() {
                if pending.at(q) && dist[q] == u32::MAX {
                    dist.set(q, dist[p] + 1);
                    out.set(q, out[p]);
                    next.push(q);
                } else if pending.at(q) && dist[q] == dist[p] + 1 && out[p].code() < out[q].code() {
                    out.set(q, out[p]);
                }
            }
        }
        queue.extend(next);
    }
    for p in pending.set_positions() {
        if dist[p] == u32::MAX {
            out.set(p, RoomLabel::Wall);
        }
    }
}

/// [`Generator`] backed by a shared dataset index.
#[derive(Debug, Clone)]
pub struct RetrievalGenerator {
    index: Arc<DatasetIndex>,
    k: usize,
}

impl RetrievalGenerator {
    pub fn new(index: Arc<DatasetIndex>, k: usize) -> Self {
        Self { index, k }
    }

    pub fn index(&self) -> &DatasetIndex {
        &self.index
    }
}

impl Generator for RetrievalGenerator {
    fn name(&self) -> &str {
        "retrieval"
    }

    fn generate(&self, input: &GeneratorInput, _seed: u64) -> Result<Grid<RoomLabel>, GenError> {
        retrieval_generate(input, &self.index, self.k)
    }
}
