use crate::grid::{Grid, Pos};

use super::ActsimError;

/// Splats every path with a truncated Gaussian of scale `sigma`, sums the
/// per-path contributions and divides by the maximum.
///
/// Paths are resampled at unit spacing so the deposited mass is proportional
/// to walked distance. Mass falling beyond the image edge is dropped.
pub fn rasterize_density(
    paths: &[Vec<Pos>],
    sigma: f64,
    width: usize,
    height: usize,
) -> Result<Grid<f64>, ActsimError> {
    if paths.is_empty() || paths.iter().all(|p| p.is_empty()) {
        return Err(ActsimError::EmptyInput);
    }
    if !(sigma > 0.0 && sigma.is_finite()) {
        return Err(ActsimError::InvalidParams(format!("splat_sigma {sigma}")));
    }
    let mut acc = accumulate(paths, sigma, width, height);
    normalize(&mut acc);
    Ok(acc)
}

/// Unnormalized sum of all path splats.
pub fn accumulate(paths: &[Vec<Pos>], sigma: f64, width: usize, height: usize) -> Grid<f64> {
    let mut acc = Grid::filled(width, height, 0.0);
    for path in paths {
        splat_path(&mut acc, path, sigma);
    }
    acc
}

/// Scales so the peak is exactly 1; an all-zero grid is left unchanged.
pub fn normalize(g: &mut Grid<f64>) {
    let max = g.as_slice().iter().copied().fold(0.0f64, f64::max);
    if max > 0.0 {
        for v in g.as_mut_slice() {
            *v /= max;
        }
    }
}

/// Points along the polyline at unit spacing, including both ends.
pub fn unit_samples(path: &[Pos]) -> Vec<(f64, f64)> {
    let mut out = Vec::new();
    let Some(first) = path.first() else {
        return out;
    };
    out.push((f64::from(first.x), f64::from(first.y)));
    for w in path.windows(2) {
        let (a, b) = (w[0], w[1]);
        let n = a.distance(b).ceil() as usize;
        for k in 1..=n {
            let t = k as f64 / n as f64;
            out.push((
                f64::from(a.x) + t * f64::from(b.x - a.x),
                f64::from(a.y) + t * f64::from(b.y - a.y),
            ));
        }
    }
    out
}

fn splat_path(acc: &mut Grid<f64>, path: &[Pos], sigma: f64) {
    let radius = (3.0 * sigma).ceil() as i32;
    let inv = 1.0 / (2.0 * sigma * sigma);
    let (w, h) = (acc.width() as i32, acc.height() as i32);
    let mut wx = vec![0.0; (2 * radius + 1) as usize];
    let mut wy = vec![0.0; (2 * radius + 1) as usize];
    for (cx, cy) in unit_samples(path) {
        let (ix, iy) = (cx.round() as i32, cy.round() as i32);
        // separable kernel: exp(-(dx²+dy²)/2σ²) = exp(-dx²/2σ²)·exp(-dy²/2σ²)
        for k in -radius..=radius {
            let dx = f64::from(ix + k) - cx;
            let dy = f64::from(iy + k) - cy;
            wx[(k + radius) as usize] = (-dx * dx * inv).exp();
            wy[(k + radius) as usize] = (-dy * dy * inv).exp();
        }
        for ky in -radius..=radius {
            let y = iy + ky;
            if y < 0 || y >= h {
                continue;
            }
            let fy = wy[(ky + radius) as usize];
            for kx in -radius..=radius {
                let x = ix + kx;
                if x < 0 || x >= w {
                    continue;
                }
                acc.as_mut_slice()[(y * w + x) as usize] += fy * wx[(kx + radius) as usize];
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn straight_path_peaks_on_centreline() {
        let path = vec![Pos::new(10, 20), Pos::new(50, 20)];
        let g = rasterize_density(&[path], 3.0, 64, 64).unwrap();
        for x in 12..48 {
            let centre = g[Pos::new(x, 20)];
            assert!(centre > g[Pos::new(x, 19)] && centre > g[Pos::new(x, 21)]);
        }
        let max = g.as_slice().iter().copied().fold(0.0, f64::max);
        assert_eq!(max, 1.0);
    }

    #[test]
    fn duplicated_paths_normalize_identically() {
        let path = vec![Pos::new(3, 3), Pos::new(30, 17), Pos::new(40, 40)];
        let one = rasterize_density(std::slice::from_ref(&path), 2.0, 48, 48).unwrap();
        let two = rasterize_density(&[path.clone(), path], 2.0, 48, 48).unwrap();
        for (a, b) in one.as_slice().iter().zip(two.as_slice()) {
            assert!((a - b).abs() < 1e-12);
        }
    }

    #[test]
    fn border_mass_matches_brute_force() {
        let path = vec![Pos::new(0, 0), Pos::new(0, 9)];
        let sigma = 2.0;
        let g = accumulate(std::slice::from_ref(&path), sigma, 16, 16);
        // oracle: direct per-pixel sum over unit samples within 3σ
        let samples = unit_samples(&path);
        let radius = (3.0 * sigma).ceil();
        for y in 0..16 {
            for x in 0..16 {
                let mut expected = 0.0;
                for &(cx, cy) in &samples {
                    let (dx, dy) = (f64::from(x) - cx, f64::from(y) - cy);
                    if (f64::from(x) - cx.round()).abs() <= radius
                        && (f64::from(y) - cy.round()).abs() <= radius
                    {
                        expected += (-(dx * dx + dy * dy) / (2.0 * sigma * sigma)).exp();
                    }
                }
                assert!((g[Pos::new(x, y)] - expected).abs() < 1e-9, "({x},{y})");
            }
        }
    }

    #[test]
    fn empty_input_is_rejected() {
        assert!(matches!(
            rasterize_density(&[], 3.0, 8, 8),
            Err(ActsimError::EmptyInput)
        ));
    }
}
