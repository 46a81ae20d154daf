//! Dense 2D rasters and the small geometric vocabulary shared by every stage.

use std::collections::VecDeque;
use std::fmt;

use serde::{Deserialize, Serialize};

/// A pixel position. `x` grows to the right, `y` grows downward.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(from = "[i32; 2]", into = "[i32; 2]")]
pub struct Pos {
    pub x: i32,
    pub y: i32,
}

impl Pos {
    pub const fn new(x: i32, y: i32) -> Self {
        Self { x, y }
    }

    pub fn distance(self, other: Pos) -> f64 {
        let dx = f64::from(self.x - other.x);
        let dy = f64::from(self.y - other.y);
        dx.hypot(dy)
    }

    /// Row-major ordering key, `(y, x)`; used for every deterministic tie-break.
    pub fn yx(self) -> (i32, i32) {
        (self.y, self.x)
    }

    pub fn neighbors4(self) -> [Pos; 4] {
        [
            Pos::new(self.x + 1, self.y),
            Pos::new(self.x - 1, self.y),
            Pos::new(self.x, self.y + 1),
            Pos::new(self.x, self.y - 1),
        ]
    }

    pub fn neighbors8(self) -> [Pos; 8] {
        [
            Pos::new(self.x + 1, self.y),
            Pos::new(self.x - 1, self.y),
            Pos::new(self.x, self.y + 1),
            Pos::new(self.x, self.y - 1),
            Pos::new(self.x + 1, self.y + 1),
            Pos::new(self.x - 1, self.y - 1),
            Pos::new(self.x + 1, self.y - 1),
            Pos::new(self.x - 1, self.y + 1),
        ]
    }
}

impl From<[i32; 2]> for Pos {
    fn from(v: [i32; 2]) -> Self {
        Pos::new(v[0], v[1])
    }
}

impl From<Pos> for [i32; 2] {
    fn from(p: Pos) -> Self {
        [p.x, p.y]
    }
}

impl From<[i32; 4]> for Rect {
    fn from(v: [i32; 4]) -> Self {
        Rect::new(v[0], v[1], v[2], v[3])
    }
}

impl From<Rect> for [i32; 4] {
    fn from(r: Rect) -> Self {
        [r.x, r.y, r.w, r.h]
    }
}

impl fmt::Display for Pos {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.x, self.y)
    }
}

/// Axis-aligned pixel rectangle covering `x..x+w` by `y..y+h`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(from = "[i32; 4]", into = "[i32; 4]")]
pub struct Rect {
    pub x: i32,
    pub y: i32,
    pub w: i32,
    pub h: i32,
}

impl Rect {
    pub const fn new(x: i32, y: i32, w: i32, h: i32) -> Self {
        Self { x, y, w, h }
    }

    pub fn right(&self) -> i32 {
        self.x + self.w
    }

    pub fn bottom(&self) -> i32 {
        self.y + self.h
    }

    pub fn is_empty(&self) -> bool {
        self.w <= 0 || self.h <= 0
    }

    pub fn area(&self) -> i64 {
        if self.is_empty() {
            0
        } else {
            i64::from(self.w) * i64::from(self.h)
        }
    }

    pub fn contains(&self, p: Pos) -> bool {
        p.x >= self.x && p.x < self.right() && p.y >= self.y && p.y < self.bottom()
    }

    pub fn intersects(&self, other: &Rect) -> bool {
        !self.is_empty()
            && !other.is_empty()
            && self.x < other.right()
            && other.x < self.right()
            && self.y < other.bottom()
            && other.y < self.bottom()
    }

    pub fn center(&self) -> Pos {
        Pos::new(self.x + self.w / 2, self.y + self.h / 2)
    }

    /// Every pixel of the rectangle in row-major order.
    pub fn pixels(&self) -> impl Iterator<Item = Pos> + '_ {
        let r = *self;
        (r.y..r.bottom()).flat_map(move |y| (r.x..r.right()).map(move |x| Pos::new(x, y)))
    }

    /// Euclidean distance from `p` to the closest pixel of the rectangle.
    pub fn distance_to(&self, p: Pos) -> f64 {
        let cx = p.x.clamp(self.x, self.right() - 1);
        let cy = p.y.clamp(self.y, self.bottom() - 1);
        p.distance(Pos::new(cx, cy))
    }

    /// Smallest rectangle covering all positions; `None` for an empty iterator.
    pub fn bounding<I: IntoIterator<Item = Pos>>(points: I) -> Option<Rect> {
        let mut it = points.into_iter();
        let first = it.next()?;
        let (mut x0, mut y0, mut x1, mut y1) = (first.x, first.y, first.x, first.y);
        for p in it {
            x0 = x0.min(p.x);
            y0 = y0.min(p.y);
            x1 = x1.max(p.x);
            y1 = y1.max(p.y);
        }
        Some(Rect::new(x0, y0, x1 - x0 + 1, y1 - y0 + 1))
    }
}

/// Row-major 2D raster.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Grid<T> {
    width: usize,
    height: usize,
    data: Vec<T>,
}

/// Binary raster.
pub type Mask = Grid<bool>;

impl<T: Clone> Grid<T> {
    pub fn filled(width: usize, height: usize, value: T) -> Self {
        Self {
            width,
            height,
            data: vec![value; width * height],
        }
    }
}

impl<T> Grid<T> {
    /// Wraps row-major data. Returns `None` when the length does not match.
    pub fn from_vec(width: usize, height: usize, data: Vec<T>) -> Option<Self> {
        (data.len() == width * height).then_some(Self {
            width,
            height,
            data,
        })
    }

    pub fn from_fn(width: usize, height: usize, mut f: impl FnMut(Pos) -> T) -> Self {
        let mut data = Vec::with_capacity(width * height);
        for y in 0..height {
            for x in 0..width {
                data.push(f(Pos::new(x as i32, y as i32)));
            }
        }
        Self {
            width,
            height,
            data,
        }
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn height(&self) -> usize {
        self.height
    }

    pub fn dims(&self) -> (usize, usize) {
        (self.width, self.height)
    }

    pub fn same_dims<U>(&self, other: &Grid<U>) -> bool {
        self.dims() == other.dims()
    }

    pub fn len(&self) -> usize {
        self.data.len()
    }

    pub fn is_empty(&self) -> bool {
        self.data.is_empty()
    }

    pub fn as_slice(&self) -> &[T] {
        &self.data
    }

    pub fn as_mut_slice(&mut self) -> &mut [T] {
        &mut self.data
    }

    pub fn into_vec(self) -> Vec<T> {
        self.data
    }

    pub fn in_bounds(&self, p: Pos) -> bool {
        p.x >= 0 && p.y >= 0 && (p.x as usize) < self.width && (p.y as usize) < self.height
    }

    fn offset(&self, p: Pos) -> usize {
        p.y as usize * self.width + p.x as usize
    }

    pub fn get(&self, p: Pos) -> Option<&T> {
        if self.in_bounds(p) {
            Some(&self.data[self.offset(p)])
        } else {
            None
        }
    }

    pub fn get_mut(&mut self, p: Pos) -> Option<&mut T> {
        if self.in_bounds(p) {
            let i = self.offset(p);
            Some(&mut self.data[i])
        } else {
            None
        }
    }

    /// Writes `value` at `p`; out-of-bounds writes are dropped.
    pub fn set(&mut self, p: Pos, value: T) {
        if let Some(slot) = self.get_mut(p) {
            *slot = value;
        }
    }

    pub fn positions(&self) -> impl Iterator<Item = Pos> {
        let (w, h) = (self.width as i32, self.height as i32);
        (0..h).flat_map(move |y| (0..w).map(move |x| Pos::new(x, y)))
    }

    pub fn iter(&self) -> impl Iterator<Item = (Pos, &T)> {
        self.positions().zip(self.data.iter())
    }

    pub fn map<U>(&self, f: impl FnMut(&T) -> U) -> Grid<U> {
        Grid {
            width: self.width,
            height: self.height,
            data: self.data.iter().map(f).collect(),
        }
    }

    pub fn bounds(&self) -> Rect {
        Rect::new(0, 0, self.width as i32, self.height as i32)
    }
}

impl<T> std::ops::Index<Pos> for Grid<T> {
    type Output = T;

    fn index(&self, p: Pos) -> &T {
        assert!(
            self.in_bounds(p),
            "position {p} outside {}x{}",
            self.width,
            self.height
        );
        &self.data[self.offset(p)]
    }
}

impl<T> std::ops::IndexMut<Pos> for Grid<T> {
    fn index_mut(&mut self, p: Pos) -> &mut T {
        assert!(
            self.in_bounds(p),
            "position {p} outside {}x{}",
            self.width,
            self.height
        );
        let i = self.offset(p);
        &mut self.data[i]
    }
}

impl Mask {
    /// `true` when `p` is in bounds and set.
    pub fn at(&self, p: Pos) -> bool {
        self.get(p).copied().unwrap_or(false)
    }

    pub fn count(&self) -> usize {
        self.as_slice().iter().filter(|&&b| b).count()
    }

    pub fn set_positions(&self) -> impl Iterator<Item = Pos> + '_ {
        self.iter().filter(|(_, &v)| v).map(|(p, _)| p)
    }

    pub fn and(&self, other: &Mask) -> Mask {
        debug_assert!(self.same_dims(other));
        let data = self
            .as_slice()
            .iter()
            .zip(other.as_slice())
            .map(|(&a, &b)| a && b)
            .collect();
        Grid::from_vec(self.width, self.height, data).expect("same dims")
    }

    pub fn or(&self, other: &Mask) -> Mask {
        debug_assert!(self.same_dims(other));
        let data = self
            .as_slice()
            .iter()
            .zip(other.as_slice())
            .map(|(&a, &b)| a || b)
            .collect();
        Grid::from_vec(self.width, self.height, data).expect("same dims")
    }

    pub fn and_not(&self, other: &Mask) -> Mask {
        debug_assert!(self.same_dims(other));
        let data = self
            .as_slice()
            .iter()
            .zip(other.as_slice())
            .map(|(&a, &b)| a && !b)
            .collect();
        Grid::from_vec(self.width, self.height, data).expect("same dims")
    }

    pub fn fill_rect(&mut self, r: &Rect, value: bool) {
        for p in r.pixels() {
            self.set(p, value);
        }
    }

    /// Labels 4-connected components of set pixels. Label 0 is background;
    /// components are numbered from 1 in row-major order of their first pixel.
    pub fn components4(&self) -> (Grid<u32>, u32) {
        let mut labels = Grid::filled(self.width, self.height, 0u32);
        let mut next = 0u32;
        let mut queue = VecDeque::new();
        for start in self.positions() {
            if !self.at(start) || labels[start] != 0 {
                continue;
            }
            next += 1;
            labels[start] = next;
            queue.push_back(start);
            while let Some(p) = queue.pop_front() {
                for q in p.neighbors4() {
                    if self.at(q) && labels[q] == 0 {
                        labels[q] = next;
                        queue.push_back(q);
                    }
                }
            }
        }
        (labels, next)
    }

    /// Set pixels 4-reachable from `seeds` through set pixels.
    pub fn flood4(&self, seeds: impl IntoIterator<Item = Pos>) -> Mask {
        let mut seen = Grid::filled(self.width, self.height, false);
        let mut queue = VecDeque::new();
        for s in seeds {
            if self.at(s) && !seen[s] {
                seen[s] = true;
                queue.push_back(s);
            }
        }
        while let Some(p) = queue.pop_front() {
            for q in p.neighbors4() {
                if self.at(q) && !seen[q] {
                    seen[q] = true;
                    queue.push_back(q);
                }
            }
        }
        seen
    }
}

/// Mixes a base seed with a stream index. Used wherever independent work items
/// need their own reproducible RNG stream regardless of execution order.
pub fn derive_seed(seed: u64, stream: u64) -> u64 {
    // splitmix64 finalizer over the combined word
    let mut z = seed ^ stream.wrapping_mul(0x9E37_79B9_7F4A_7C15).rotate_left(17);
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Stable 64-bit FNV-1a hash of a string, for deriving per-item seeds from ids.
pub fn hash_str(s: &str) -> u64 {
    let mut h: u64 = 0xcbf2_9ce4_8422_2325;
    for b in s.as_bytes() {
        h ^= u64::from(*b);
        h = h.wrapping_mul(0x0100_0000_01b3);
    }
    h
}
