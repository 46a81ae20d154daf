use serde::{Deserialize, Serialize};

use crate::floorplan::RoomLabel;
use crate::grid::{Grid, Mask};

use super::{check_dims, MetricsError};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PixelError {
    pub mse: f64,
    pub mae: f64,
}

/// Numeric value of a room label: the 8 room codes spaced evenly over
/// [0, 1]. Structural labels have no value.
pub fn label_value(l: RoomLabel) -> Option<f64> {
    l.is_room().then(|| f64::from(l.code()) / 7.0)
}

/// MSE and MAE of two category images over the ground truth's footprint.
/// A pixel where either label is structural counts as 0 when the labels
/// agree and 1 otherwise.
pub fn pixel_error(
    pred: &Grid<RoomLabel>,
    gt: &Grid<RoomLabel>,
) -> Result<PixelError, MetricsError> {
    check_dims(pred, gt)?;
    let mut sq = 0.0;
    let mut abs = 0.0;
    let mut n = 0usize;
    for (&p, &g) in pred.as_slice().iter().zip(gt.as_slice()) {
        if g == RoomLabel::Outside {
            continue;
        }
        let e = match (label_value(p), label_value(g)) {
            (Some(a), Some(b)) => (a - b).abs(),
            _ if p == g => 0.0,
            _ => 1.0,
        };
        sq += e * e;
        abs += e;
        n += 1;
    }
    Ok(averaged(sq, abs, n))
}

/// MSE and MAE of two scalar images over `mask`.
pub fn pixel_error_values(
    pred: &Grid<f64>,
    gt: &Grid<f64>,
    mask: &Mask,
) -> Result<PixelError, MetricsError> {
    check_dims(pred, gt)?;
    check_dims(pred, mask)?;
    let mut sq = 0.0;
    let mut abs = 0.0;
    let mut n = 0usize;
    for ((&p, &g), &m) in pred
        .as_slice()
        .iter()
        .zip(gt.as_slice())
        .zip(mask.as_slice())
    {
        if m {
            let e = (p - g).abs();
            sq += e * e;
            abs += e;
            n += 1;
        }
    }
    Ok(averaged(sq, abs, n))
}

fn averaged(sq: f64, abs: f64, n: usize) -> PixelError {
    if n == 0 {
        return PixelError { mse: 0.0, mae: 0.0 };
    }
    PixelError {
        mse: sq / n as f64,
        mae: abs / n as f64,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid::Pos;

    #[test]
    fn identical_is_zero() {
        let g = Grid::from_fn(8, 8, |p| {
            RoomLabel::ROOMS[(p.x as usize + p.y as usize) % 8]
        });
        assert_eq!(
            pixel_error(&g, &g).unwrap(),
            PixelError { mse: 0.0, mae: 0.0 }
        );
    }

    #[test]
    fn complement_is_maximal() {
        let a = Grid::from_fn(8, 8, |p| {
            if p.x < 4 {
                RoomLabel::Living
            } else {
                RoomLabel::OtherRoom
            }
        });
        let b = a.map(|&l| {
            if l == RoomLabel::Living {
                RoomLabel::OtherRoom
            } else {
                RoomLabel::Living
            }
        });
        assert_eq!(
            pixel_error(&a, &b).unwrap(),
            PixelError { mse: 1.0, mae: 1.0 }
        );
    }

    #[test]
    fn structural_mismatch_counts_fully_and_outside_is_skipped() {
        let mut gt = Grid::filled(2, 2, RoomLabel::Living);
        gt.set(Pos::new(1, 1), RoomLabel::Outside);
        let mut pred = gt.clone();
        pred.set(Pos::new(0, 0), RoomLabel::Wall);
        pred.set(Pos::new(1, 1), RoomLabel::Kitchen);
        let e = pixel_error(&pred, &gt).unwrap();
        assert!((e.mae - 1.0 / 3.0).abs() < 1e-15);
    }

    #[test]
    fn size_mismatch() {
        let a = Grid::filled(2, 2, RoomLabel::Living);
        let b = Grid::filled(3, 2, RoomLabel::Living);
        assert!(matches!(
            pixel_error(&a, &b),
            Err(MetricsError::SizeMismatch(..))
        ));
    }
}
