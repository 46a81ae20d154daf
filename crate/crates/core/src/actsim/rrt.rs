use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::grid::{Mask, Pos};

use super::ActsimError;

/// Planner settings. Defaults resolve an 80-pixel corridor in a few
/// milliseconds.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BiRrtParams {
    /// Maximum tree extension and maximum spacing of output samples, pixels.
    pub step_size: f64,
    /// Tree extensions allowed before giving up.
    pub max_iterations: usize,
    /// Probability of steering straight at the other tree's root.
    pub goal_bias: f64,
    /// Independent trajectories simulated per graph edge.
    pub runs_per_edge: usize,
    /// Scale of the density splat kernel, pixels.
    pub splat_sigma: f64,
}

impl Default for BiRrtParams {
    fn default() -> Self {
        Self {
            step_size: 4.0,
            max_iterations: 5000,
            goal_bias: 0.1,
            runs_per_edge: 10,
            splat_sigma: 3.0,
        }
    }
}

impl BiRrtParams {
    pub fn validate(&self) -> Result<(), ActsimError> {
        if !(self.step_size >= 1.0 && self.step_size.is_finite()) {
            return Err(ActsimError::InvalidParams(format!(
                "step_size {} < 1",
                self.step_size
            )));
        }
        if !(0.0..1.0).contains(&self.goal_bias) {
            return Err(ActsimError::InvalidParams(format!(
                "goal_bias {} outside [0, 1)",
                self.goal_bias
            )));
        }
        if self.runs_per_edge < 1 {
            return Err(ActsimError::InvalidParams(
                "runs_per_edge must be at least 1".into(),
            ));
        }
        if !(self.splat_sigma > 0.0 && self.splat_sigma.is_finite()) {
            return Err(ActsimError::InvalidParams(format!(
                "splat_sigma {}",
                self.splat_sigma
            )));
        }
        Ok(())
    }
}

/// Pixels crossed by the segment between two pixel centres, as a 4-connected
/// sequence from `a` to `b`. When the segment passes exactly through a pixel
/// corner the horizontal neighbour of the (y, x)-smaller endpoint is taken
/// first, so both directions visit the same pixels.
pub fn line_pixels(a: Pos, b: Pos) -> Vec<Pos> {
    if b.yx() < a.yx() {
        let mut out = traverse(b, a);
        out.reverse();
        return out;
    }
    traverse(a, b)
}

fn traverse(a: Pos, b: Pos) -> Vec<Pos> {
    let (dx, dy) = (b.x - a.x, b.y - a.y);
    let (nx, ny) = (i64::from(dx.abs()), i64::from(dy.abs()));
    let (sx, sy) = (dx.signum(), dy.signum());
    let mut out = Vec::with_capacity((nx + ny + 1) as usize);
    let mut p = a;
    out.push(p);
    let (mut ix, mut iy) = (0i64, 0i64);
    while ix < nx || iy < ny {
        // compare the parametric distance to the next vertical and horizontal
        // pixel boundary: (0.5 + ix) / nx against (0.5 + iy) / ny
        let decision = (1 + 2 * ix) * ny - (1 + 2 * iy) * nx;
        if decision <= 0 && ix < nx {
            p.x += sx;
            ix += 1;
        } else {
            p.y += sy;
            iy += 1;
        }
        out.push(p);
    }
    out
}

pub fn segment_free(free: &Mask, a: Pos, b: Pos) -> bool {
    line_pixels(a, b).into_iter().all(|p| free.at(p))
}

#[derive(Debug, Clone, Copy)]
struct Node {
    pos: Pos,
    parent: Option<usize>,
}

struct Tree {
    nodes: Vec<Node>,
}

impl Tree {
    fn new(root: Pos) -> Self {
        Self {
            nodes: vec![Node {
                pos: root,
                parent: None,
            }],
        }
    }

    fn nearest(&self, target: Pos) -> usize {
        let mut best = 0;
        let mut best_d = i64::MAX;
        for (i, n) in self.nodes.iter().enumerate() {
            let (dx, dy) = (i64::from(n.pos.x - target.x), i64::from(n.pos.y - target.y));
            let d = dx * dx + dy * dy;
            if d < best_d {
                best_d = d;
                best = i;
            }
        }
        best
    }

    /// Grows one step toward `target`; returns the new node index.
    fn extend(&mut self, free: &Mask, target: Pos, step: f64) -> Option<usize> {
        let near = self.nearest(target);
        let from = self.nodes[near].pos;
        if from == target {
            return None;
        }
        let dist = from.distance(target);
        let new = if dist <= step {
            target
        } else {
            let t = step / dist;
            Pos::new(
                (f64::from(from.x) + f64::from(target.x - from.x) * t).round() as i32,
                (f64::from(from.y) + f64::from(target.y - from.y) * t).round() as i32,
            )
        };
        if new == from || !segment_free(free, from, new) {
            return None;
        }
        self.nodes.push(Node {
            pos: new,
            parent: Some(near),
        });
        Some(self.nodes.len() - 1)
    }

    fn branch(&self, mut i: usize) -> Vec<Pos> {
        let mut out = vec![self.nodes[i].pos];
        while let Some(p) = self.nodes[i].parent {
            out.push(self.nodes[p].pos);
            i = p;
        }
        out
    }
}

/// Bidirectional RRT (connect variant) on a pixel free-space mask.
///
/// On success the returned polyline starts at `start`, ends at `goal`, has
/// every sample in free space and consecutive samples at most `step_size`
/// apart. The raw tree path is shortcut greedily before resampling.
pub fn bi_rrt_path(
    free: &Mask,
    start: Pos,
    goal: Pos,
    params: &BiRrtParams,
    seed: u64,
) -> Result<Vec<Pos>, ActsimError> {
    params.validate()?;
    if !free.at(start) || !free.at(goal) {
        return Err(ActsimError::EndpointBlocked);
    }
    if start == goal {
        return Ok(vec![start]);
    }
    let candidates: Vec<Pos> = free.set_positions().collect();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut trees = [Tree::new(start), Tree::new(goal)];
    // trees[0] is rooted at `start`; `forward` picks the tree to grow
    let mut forward = true;
    let mut budget = params.max_iterations;

    while budget > 0 {
        budget -= 1;
        let (a, b) = if forward { (0, 1) } else { (1, 0) };
        let sample = if rng.random_bool(params.goal_bias) {
            trees[b].nodes[0].pos
        } else {
            candidates[rng.random_range(0..candidates.len())]
        };
        if let Some(ia) = trees[a].extend(free, sample, params.step_size) {
            let target = trees[a].nodes[ia].pos;
            // pull the other tree toward the new node until blocked or joined
            while budget > 0 {
                budget -= 1;
                match trees[b].extend(free, target, params.step_size) {
                    Some(ib) if trees[b].nodes[ib].pos == target => {
                        let mut from_a = trees[a].branch(ia);
                        from_a.reverse();
                        let from_b = trees[b].branch(ib);
                        let mut raw = from_a;
                        raw.extend(from_b.into_iter().skip(1));
                        if a == 1 {
                            raw.reverse();
                        }
                        let smooth = shortcut(free, &raw);
                        return Ok(resample(&smooth, params.step_size));
                    }
                    Some(_) => continue,
                    None => break,
                }
            }
        }
        forward = !forward;
    }
    Err(ActsimError::NoPath)
}

/// Greedy shortcutting: from each kept vertex jump to the farthest later
/// vertex reachable by a straight free segment.
pub fn shortcut(free: &Mask, path: &[Pos]) -> Vec<Pos> {
    if path.len() <= 2 {
        return path.to_vec();
    }
    let mut out = vec![path[0]];
    let mut i = 0;
    while i < path.len() - 1 {
        let mut j = path.len() - 1;
        while j > i + 1 && !segment_free(free, path[i], path[j]) {
            j -= 1;
        }
        out.push(path[j]);
        i = j;
    }
    out
}

/// Walks the pixel traversal of each segment and keeps samples no more than
/// `step` apart; every sample is a traversed pixel.
pub fn resample(path: &[Pos], step: f64) -> Vec<Pos> {
    let mut dense: Vec<Pos> = Vec::new();
    for w in path.windows(2) {
        let seg = line_pixels(w[0], w[1]);
        let skip = usize::from(!dense.is_empty());
        dense.extend(seg.into_iter().skip(skip));
    }
    if dense.is_empty() {
        return path.to_vec();
    }
    let mut out = vec![dense[0]];
    for k in 1..dense.len() {
        let last = *out.last().expect("nonempty");
        let is_final = k == dense.len() - 1;
        if is_final || last.distance(dense[k + 1]) > step {
            out.push(dense[k]);
        }
    }
    out
}
