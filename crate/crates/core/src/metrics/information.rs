use crate::actsim::ActivityMap;
use crate::grid::Grid;

use super::{check_dims, MetricsError};

/// Intensity levels of the histograms.
pub const BINS: usize = 256;

fn bin(v: f64) -> usize {
    ((v.clamp(0.0, 1.0) * 255.0).round() as usize).min(BINS - 1)
}

/// Normalized intensity histogram of one image.
#[derive(Debug, Clone, PartialEq)]
pub struct IntensityHistogram {
    pub bins: Vec<f64>,
}

impl IntensityHistogram {
    pub fn of(g: &Grid<f64>) -> Self {
        let mut bins = vec![0.0; BINS];
        for &v in g.as_slice() {
            bins[bin(v)] += 1.0;
        }
        let n = g.len().max(1) as f64;
        bins.iter_mut().for_each(|b| *b /= n);
        Self { bins }
    }

    /// Shannon entropy in nats, with 0·log 0 taken as 0.
    pub fn entropy(&self) -> f64 {
        -self
            .bins
            .iter()
            .filter(|&&p| p > 0.0)
            .map(|&p| p * p.ln())
            .sum::<f64>()
    }
}

/// Normalized joint histogram of two aligned images, row index from the
/// first image.
#[derive(Debug, Clone, PartialEq)]
pub struct JointHistogram {
    pub joint: Vec<f64>,
}

impl JointHistogram {
    pub fn of(a: &Grid<f64>, b: &Grid<f64>) -> Result<Self, MetricsError> {
        check_dims(a, b)?;
        let mut joint = vec![0.0; BINS * BINS];
        for (&x, &y) in a.as_slice().iter().zip(b.as_slice()) {
            joint[bin(x) * BINS + bin(y)] += 1.0;
        }
        let n = a.len().max(1) as f64;
        joint.iter_mut().for_each(|v| *v /= n);
        Ok(Self { joint })
    }

    pub fn marginals(&self) -> (Vec<f64>, Vec<f64>) {
        let mut pa = vec![0.0; BINS];
        let mut pb = vec![0.0; BINS];
        for (row, a) in self.joint.chunks_exact(BINS).zip(pa.iter_mut()) {
            for (&v, b) in row.iter().zip(pb.iter_mut()) {
                *a += v;
                *b += v;
            }
        }
        (pa, pb)
    }
}

pub fn entropy(a: &ActivityMap) -> f64 {
    IntensityHistogram::of(a.density()).entropy()
}

/// Mutual information in nats over 256 intensity bins.
pub fn mutual_information(a: &ActivityMap, b: &ActivityMap) -> Result<f64, MetricsError> {
    Ok(mi_from_joint(&JointHistogram::of(
        a.density(),
        b.density(),
    )?))
}

fn mi_from_joint(j: &JointHistogram) -> f64 {
    let (pa, pb) = j.marginals();
    let mut mi = 0.0;
    for (row, &a) in j.joint.chunks_exact(BINS).zip(&pa) {
        if a == 0.0 {
            continue;
        }
        for (&p, &b) in row.iter().zip(&pb) {
            if p > 0.0 {
                mi += p * (p / (a * b)).ln();
            }
        }
    }
    mi.max(0.0)
}

/// 2·MI / (H(a) + H(b)), clamped to [0, 1].
pub fn nmi(a: &ActivityMap, b: &ActivityMap) -> Result<f64, MetricsError> {
    let j = JointHistogram::of(a.density(), b.density())?;
    let h = IntensityHistogram::of(a.density()).entropy()
        + IntensityHistogram::of(b.density()).entropy();
    if h <= 0.0 {
        return Err(MetricsError::ZeroEntropy);
    }
    Ok((2.0 * mi_from_joint(&j) / h).clamp(0.0, 1.0))
}
