use serde::{Deserialize, Serialize};

use crate::grid::Pos;

/// Axis-aligned segment with `a` the lower endpoint.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Segment {
    pub a: Pos,
    pub b: Pos,
}

impl Segment {
    /// Normalizes endpoint order. Panics on a diagonal segment.
    pub fn new(a: Pos, b: Pos) -> Self {
        assert!(
            a.x == b.x || a.y == b.y,
            "segment {a} -> {b} is not axis-aligned"
        );
        if a.yx() <= b.yx() {
            Self { a, b }
        } else {
            Self { a: b, b: a }
        }
    }

    pub fn horizontal(y: i32, x0: i32, x1: i32) -> Self {
        Self::new(Pos::new(x0, y), Pos::new(x1, y))
    }

    pub fn vertical(x: i32, y0: i32, y1: i32) -> Self {
        Self::new(Pos::new(x, y0), Pos::new(x, y1))
    }

    /// Points and horizontal segments count as horizontal.
    pub fn is_horizontal(&self) -> bool {
        self.a.y == self.b.y
    }

    /// Fixed coordinate: y of a horizontal segment, x of a vertical one.
    pub fn coord(&self) -> i32 {
        if self.is_horizontal() {
            self.a.y
        } else {
            self.a.x
        }
    }

    /// Varying coordinate range.
    pub fn span(&self) -> (i32, i32) {
        if self.is_horizontal() {
            (self.a.x, self.b.x)
        } else {
            (self.a.y, self.b.y)
        }
    }

    pub fn len(&self) -> i32 {
        let (lo, hi) = self.span();
        hi - lo
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn contains(&self, p: Pos) -> bool {
        let (lo, hi) = self.span();
        if self.is_horizontal() {
            p.y == self.a.y && (lo..=hi).contains(&p.x)
        } else {
            p.x == self.a.x && (lo..=hi).contains(&p.y)
        }
    }

    fn from_span(horizontal: bool, coord: i32, lo: i32, hi: i32) -> Self {
        if horizontal {
            Self::horizontal(coord, lo, hi)
        } else {
            Self::vertical(coord, lo, hi)
        }
    }

    /// Collinear overlap of positive length.
    pub fn overlap(&self, other: &Segment) -> Option<Segment> {
        if self.is_empty() || other.is_empty() {
            return None;
        }
        if self.is_horizontal() != other.is_horizontal() || self.coord() != other.coord() {
            return None;
        }
        let (a0, a1) = self.span();
        let (b0, b1) = other.span();
        let (lo, hi) = (a0.max(b0), a1.min(b1));
        (hi > lo).then(|| Self::from_span(self.is_horizontal(), self.coord(), lo, hi))
    }

    pub fn nearest_point(&self, p: Pos) -> Pos {
        let (lo, hi) = self.span();
        if self.is_horizontal() {
            Pos::new(p.x.clamp(lo, hi), self.a.y)
        } else {
            Pos::new(self.a.x, p.y.clamp(lo, hi))
        }
    }

    /// Sub-segment of length `width` centred at `center` where possible and
    /// kept within `self`.
    pub fn window(&self, center: Pos, width: i32) -> Segment {
        let (lo, hi) = self.span();
        if hi - lo <= width {
            return *self;
        }
        let c = if self.is_horizontal() {
            center.x
        } else {
            center.y
        };
        let start = (c - width / 2).clamp(lo, hi - width);
        Self::from_span(self.is_horizontal(), self.coord(), start, start + width)
    }
}

pub fn edges(poly: &[Pos]) -> Vec<Segment> {
    (0..poly.len())
        .map(|i| Segment::new(poly[i], poly[(i + 1) % poly.len()]))
        .collect()
}

/// Shoelace area, always nonnegative.
pub fn polygon_area(poly: &[Pos]) -> f64 {
    let n = poly.len();
    let twice: i64 = (0..n)
        .map(|i| {
            let (p, q) = (poly[i], poly[(i + 1) % n]);
            i64::from(p.x) * i64::from(q.y) - i64::from(q.x) * i64::from(p.y)
        })
        .sum();
    twice.abs() as f64 / 2.0
}

pub fn on_boundary(poly: &[Pos], p: Pos) -> bool {
    edges(poly).iter().any(|e| e.contains(p))
}

/// Pixel centres strictly inside a rectilinear polygon, row-major.
pub fn interior_pixels(poly: &[Pos]) -> Vec<Pos> {
    let Some(bbox) = crate::grid::Rect::bounding(poly.iter().copied()) else {
        return Vec::new();
    };
    let verticals: Vec<Segment> = edges(poly)
        .into_iter()
        .filter(|e| !e.is_horizontal())
        .collect();
    let mut out = Vec::new();
    for y in bbox.y..bbox.bottom() {
        // x positions where the row crosses a vertical edge, half-open in y
        let mut cross: Vec<i32> = verticals
            .iter()
            .filter(|e| e.a.y <= y && y < e.b.y)
            .map(|e| e.a.x)
            .collect();
        cross.sort_unstable();
        for pair in cross.chunks_exact(2) {
            for x in pair[0] + 1..pair[1] {
                let p = Pos::new(x, y);
                if !on_boundary(poly, p) {
                    out.push(p);
                }
            }
        }
    }
    out
}
