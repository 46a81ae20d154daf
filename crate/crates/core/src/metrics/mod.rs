//! Evaluation metrics: pixel accuracy, normalized mutual information, Hu
//! moment shape similarity and Elo ratings.

mod elo;
mod hu;
mod information;
mod pixel;

use thiserror::Error;

pub use elo::{
    elo_expected, elo_update, EloTable, MatchLogEntry, MatchRecord, Outcome, DEFAULT_K,
    INITIAL_RATING,
};
pub use hu::{hu_distance, hu_moments, HuSignature};
pub use information::{entropy, mutual_information, nmi, IntensityHistogram, JointHistogram, BINS};
pub use pixel::{label_value, pixel_error, pixel_error_values, PixelError};

#[derive(Debug, Error, PartialEq)]
pub enum MetricsError {
    #[error("size mismatch: {0}x{1} vs {2}x{3}")]
    SizeMismatch(usize, usize, usize, usize),
    #[error("both images have zero entropy")]
    ZeroEntropy,
    #[error("shape mask is empty")]
    EmptyShape,
    #[error("unknown player {0:?}")]
    UnknownPlayer(String),
    #[error("k factor must be positive and finite, got {0}")]
    InvalidK(f64),
}

pub(crate) fn check_dims<A, B>(
    a: &crate::grid::Grid<A>,
    b: &crate::grid::Grid<B>,
) -> Result<(), MetricsError> {
    if a.same_dims(b) {
        Ok(())
    } else {
        Err(MetricsError::SizeMismatch(
            a.width(),
            a.height(),
            b.width(),
            b.height(),
        ))
    }
}
