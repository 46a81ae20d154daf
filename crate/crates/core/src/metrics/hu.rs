use serde::{Deserialize, Serialize};

use crate::grid::{Mask, Rect};

use super::MetricsError;

/// Moments below this magnitude are treated as exactly zero.
const ZERO_FLOOR: f64 = 1e-15;

/// Sign-log transformed Hu invariants of a filled shape.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct HuSignature(pub [f64; 7]);

impl HuSignature {
    pub fn of(mask: &Mask) -> Result<Self, MetricsError> {
        let h = hu_moments(mask)?;
        Ok(Self(h.map(|v| {
            if v.abs() < ZERO_FLOOR {
                0.0
            } else {
                v.signum() * v.abs().log10()
            }
        })))
    }

    /// L1 distance between signatures.
    pub fn distance(&self, other: &HuSignature) -> f64 {
        self.0
            .iter()
            .zip(other.0.iter())
            .map(|(a, b)| (a - b).abs())
            .sum()
    }
}

/// The seven Hu invariants. Each pixel is integrated as a unit square, so
/// upscaling a mask by an integer factor leaves them unchanged.
pub fn hu_moments(mask: &Mask) -> Result<[f64; 7], MetricsError> {
    let bbox = Rect::bounding(mask.set_positions()).ok_or(MetricsError::EmptyShape)?;
    // coordinates relative to the bounding box make translation exact
    let local: Vec<(f64, f64)> = mask
        .set_positions()
        .map(|p| (f64::from(p.x - bbox.x), f64::from(p.y - bbox.y)))
        .collect();

    let m00 = local.len() as f64;
    let cx = local.iter().map(|&(x, _)| x + 0.5).sum::<f64>() / m00;
    let cy = local.iter().map(|&(_, y)| y + 0.5).sum::<f64>() / m00;

    // mu[p][q] = sum over pixels of ∫∫ (u - cx)^p (v - cy)^q over the square
    let mut mu = [[0.0f64; 4]; 4];
    for &(x, y) in &local {
        let ix = powers_integral(x - cx);
        let iy = powers_integral(y - cy);
        for p in 0..4 {
            for q in 0..4 - p {
                mu[p][q] += ix[p] * iy[q];
            }
        }
    }
    let eta = |p: usize, q: usize| mu[p][q] / m00.powf(1.0 + (p + q) as f64 / 2.0);
    let (n20, n02, n11) = (eta(2, 0), eta(0, 2), eta(1, 1));
    let (n30, n03, n21, n12) = (eta(3, 0), eta(0, 3), eta(2, 1), eta(1, 2));

    let a = n30 + n12;
    let b = n21 + n03;
    let h1 = n20 + n02;
    let h2 = (n20 - n02).powi(2) + 4.0 * n11 * n11;
    let h3 = (n30 - 3.0 * n12).powi(2) + (3.0 * n21 - n03).powi(2);
    let h4 = a * a + b * b;
    let h5 = (n30 - 3.0 * n12) * a * (a * a - 3.0 * b * b)
        + (3.0 * n21 - n03) * b * (3.0 * a * a - b * b);
    let h6 = (n20 - n02) * (a * a - b * b) + 4.0 * n11 * a * b;
    let h7 = (3.0 * n21 - n03) * a * (a * a - 3.0 * b * b)
        - (n30 - 3.0 * n12) * b * (3.0 * a * a - b * b);
    Ok([h1, h2, h3, h4, h5, h6, h7])
}

/// ∫_s^{s+1} t^k dt for k = 0..3.
fn powers_integral(s: f64) -> [f64; 4] {
    let e = s + 1.0;
    [
        1.0,
        (e * e - s * s) / 2.0,
        (e.powi(3) - s.powi(3)) / 3.0,
        (e.powi(4) - s.powi(4)) / 4.0,
    ]
}

/// L1 distance between the sign-log Hu signatures of two shapes.
pub fn hu_distance(a: &Mask, b: &Mask) -> Result<f64, MetricsError> {
    Ok(HuSignature::of(a)?.distance(&HuSignature::of(b)?))
}
