use std::collections::BTreeMap;

use crate::floorplan::RoomLabel;
use crate::grid::{Grid, Mask, Pos};

use super::{Segment, VectorizeError, WallGrid};

/// Side of the adaptive-threshold window, pixels.
pub const WINDOW: usize = 15;
/// Threshold offset below the local mean, on the unit intensity scale.
pub const OFFSET: f64 = 2.0 / 255.0;
/// Shortest wall run kept, pixels.
pub const MIN_SEGMENT: i32 = 6;
/// Parallel wall lines closer than this are snapped together.
const SNAP: i32 = 2;
/// Widest opening bridged between collinear wall pieces (doors).
const MAX_GAP: i32 = 14;

/// Binarizes a category image with a mean-C adaptive threshold. Walls map
/// to intensity 0 and everything else to 1, so a pixel is a wall when it is
/// darker than its local mean by more than [`OFFSET`].
pub fn extract_walls(category: &Grid<RoomLabel>) -> Mask {
    let (w, h) = category.dims();
    let intensity: Vec<f64> = category
        .as_slice()
        .iter()
        .map(|&l| if l == RoomLabel::Wall { 0.0 } else { 1.0 })
        .collect();
    // summed-area table with a zero row and column
    let mut sat = vec![0.0; (w + 1) * (h + 1)];
    for y in 0..h {
        let mut row = 0.0;
        for x in 0..w {
            row += intensity[y * w + x];
            sat[(y + 1) * (w + 1) + x + 1] = sat[y * (w + 1) + x + 1] + row;
        }
    }
    let r = WINDOW / 2;
    Grid::from_fn(w, h, |p| {
        let (x, y) = (p.x as usize, p.y as usize);
        let (x0, y0) = (x.saturating_sub(r), y.saturating_sub(r));
        let (x1, y1) = ((x + r + 1).min(w), (y + r + 1).min(h));
        let sum = sat[y1 * (w + 1) + x1] - sat[y0 * (w + 1) + x1] - sat[y1 * (w + 1) + x0]
            + sat[y0 * (w + 1) + x0];
        let mean = sum / ((x1 - x0) * (y1 - y0)) as f64;
        intensity[y * w + x] < mean - OFFSET
    })
}

fn morph(mask: &Mask, dilate: bool) -> Mask {
    Mask::from_fn(mask.width(), mask.height(), |p| {
        let mut hits = (-1..=1).flat_map(|dy| (-1..=1).map(move |dx| Pos::new(p.x + dx, p.y + dy)));
        if dilate {
            hits.any(|q| mask.at(q))
        } else {
            // beyond the image edge counts as set so closing never erodes there
            hits.all(|q| !mask.in_bounds(q) || mask[q])
        }
    })
}

/// Morphological closing with a 3×3 square.
pub fn close3(mask: &Mask) -> Mask {
    morph(&morph(mask, true), false)
}

#[derive(Debug, Clone, Copy)]
struct Run {
    line: i32,
    start: i32,
    end: i32,
}

/// Maximal runs of set pixels along rows (`horizontal`) or columns, at
/// least [`MIN_SEGMENT`] long. `end` is inclusive.
fn runs(mask: &Mask, horizontal: bool) -> Vec<Run> {
    let (w, h) = (mask.width() as i32, mask.height() as i32);
    let (lines, len) = if horizontal { (h, w) } else { (w, h) };
    let at = |line: i32, i: i32| {
        if horizontal {
            mask[Pos::new(i, line)]
        } else {
            mask[Pos::new(line, i)]
        }
    };
    let mut out = Vec::new();
    for line in 0..lines {
        let mut i = 0;
        while i < len {
            if !at(line, i) {
                i += 1;
                continue;
            }
            let start = i;
            while i < len && at(line, i) {
                i += 1;
            }
            if i - start >= MIN_SEGMENT {
                out.push(Run {
                    line,
                    start,
                    end: i - 1,
                });
            }
        }
    }
    out
}

fn find(parent: &mut [usize], mut i: usize) -> usize {
    while parent[i] != i {
        parent[i] = parent[parent[i]];
        i = parent[i];
    }
    i
}

/// Groups runs of neighbouring lines that overlap into wall bands and
/// returns each band's centerline as (coord, start, end).
fn bands(runs: &[Run]) -> Vec<(i32, i32, i32)> {
    let mut parent: Vec<usize> = (0..runs.len()).collect();
    let mut by_line: BTreeMap<i32, Vec<usize>> = BTreeMap::new();
    for (i, r) in runs.iter().enumerate() {
        by_line.entry(r.line).or_default().push(i);
    }
    for (i, r) in runs.iter().enumerate() {
        if let Some(prev) = by_line.get(&(r.line - 1)) {
            for &j in prev {
                if runs[j].start <= r.end && r.start <= runs[j].end {
                    let (a, b) = (find(&mut parent, i), find(&mut parent, j));
                    parent[a] = b;
                }
            }
        }
    }
    let mut groups: BTreeMap<usize, (i32, i32, i32, i32)> = BTreeMap::new();
    for (i, r) in runs.iter().enumerate() {
        let root = find(&mut parent, i);
        let g = groups
            .entry(root)
            .or_insert((r.line, r.line, r.start, r.end));
        g.0 = g.0.min(r.line);
        g.1 = g.1.max(r.line);
        g.2 = g.2.min(r.start);
        g.3 = g.3.max(r.end);
    }
    groups
        .into_values()
        .map(|(lo, hi, start, end)| ((lo + hi) / 2, start, end))
        .collect()
}

/// Snaps near-identical line coordinates together, then joins collinear
/// pieces separated by openings up to [`MAX_GAP`].
fn merge_lines(mut bands: Vec<(i32, i32, i32)>, horizontal: bool) -> Vec<Segment> {
    bands.sort_unstable();
    let mut clusters: Vec<Vec<(i32, i32, i32)>> = Vec::new();
    for b in bands {
        match clusters.last_mut() {
            Some(c) if b.0 - c.last().expect("nonempty").0 <= SNAP => c.push(b),
            _ => clusters.push(vec![b]),
        }
    }
    let mut out = Vec::new();
    for c in clusters {
        // length-weighted coordinate
        let weight: i64 = c.iter().map(|b| i64::from(b.2 - b.1 + 1)).sum();
        let sum: i64 = c
            .iter()
            .map(|b| i64::from(b.0) * i64::from(b.2 - b.1 + 1))
            .sum();
        let coord = ((sum as f64) / (weight as f64)).round() as i32;
        let mut spans: Vec<(i32, i32)> = c.iter().map(|b| (b.1, b.2)).collect();
        spans.sort_unstable();
        let mut merged: Vec<(i32, i32)> = Vec::new();
        for (s, e) in spans {
            match merged.last_mut() {
                Some(last) if s - last.1 - 1 <= MAX_GAP => last.1 = last.1.max(e),
                _ => merged.push((s, e)),
            }
        }
        for (s, e) in merged {
            if e - s + 1 >= MIN_SEGMENT {
                out.push(if horizontal {
                    Segment::horizontal(coord, s, e)
                } else {
                    Segment::vertical(coord, s, e)
                });
            }
        }
    }
    out
}

/// Straightens a wall mask into axis-aligned centerline segments: closing,
/// run detection, banding, snapping and gap bridging. Fails when the
/// segments enclose nothing.
pub fn regularize_walls(mask: &Mask) -> Result<Vec<Segment>, VectorizeError> {
    let closed = close3(mask);
    let mut segments = merge_lines(bands(&runs(&closed, true)), true);
    segments.extend(merge_lines(bands(&runs(&closed, false)), false));
    if WallGrid::new(&segments).enclosed_cells() == 0 {
        return Err(VectorizeError::NoClosedRegion);
    }
    Ok(segments)
}
