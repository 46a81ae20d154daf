use crate::actsim::ActivityMap;
use crate::floorplan::{BoundaryImage, RoomLabel};
use crate::grid::{Grid, Mask};

use super::GenError;

/// Multi-channel real image, channel-major.
#[derive(Debug, Clone, PartialEq)]
pub struct UnitImage {
    channels: usize,
    width: usize,
    height: usize,
    data: Vec<f64>,
}

impl UnitImage {
    pub fn new(
        channels: usize,
        width: usize,
        height: usize,
        data: Vec<f64>,
    ) -> Result<Self, GenError> {
        if data.len() != channels * width * height {
            return Err(GenError::SizeMismatch(format!(
                "{} values for {channels}x{width}x{height}",
                data.len()
            )));
        }
        Ok(Self {
            channels,
            width,
            height,
            data,
        })
    }

    pub fn zeros(channels: usize, width: usize, height: usize) -> Self {
        Self {
            channels,
            width,
            height,
            data: vec![0.0; channels * width * height],
        }
    }

    pub fn from_grid(g: &Grid<f64>) -> Self {
        Self {
            channels: 1,
            width: g.width(),
            height: g.height(),
            data: g.as_slice().to_vec(),
        }
    }

    pub fn from_mask(m: &Mask) -> Self {
        Self::from_grid(&m.map(|&b| f64::from(u8::from(b))))
    }

    pub fn from_activity(a: &ActivityMap) -> Self {
        Self::from_grid(a.density())
    }

    /// Inside, ring and entrance channels.
    pub fn from_boundary(b: &BoundaryImage) -> Self {
        Self::from_mask(b.inside())
            .concat(&Self::from_mask(b.boundary()))
            .and_then(|i| i.concat(&Self::from_mask(b.entrance())))
            .expect("boundary channels share dimensions")
    }

    /// One channel per label in [`RoomLabel::ALL`] order.
    pub fn one_hot(category: &Grid<RoomLabel>) -> Self {
        let (w, h) = category.dims();
        let mut img = Self::zeros(RoomLabel::ALL.len(), w, h);
        for (i, l) in category.as_slice().iter().enumerate() {
            img.data[l.index() * w * h + i] = 1.0;
        }
        img
    }

    pub fn channels(&self) -> usize {
        self.channels
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn height(&self) -> usize {
        self.height
    }

    pub fn data(&self) -> &[f64] {
        &self.data
    }

    pub fn shape(&self) -> (usize, usize, usize) {
        (self.channels, self.width, self.height)
    }

    pub fn channel(&self, c: usize) -> &[f64] {
        let n = self.width * self.height;
        &self.data[c * n..(c + 1) * n]
    }

    /// Stacks the channels of `other` after those of `self`.
    pub fn concat(&self, other: &UnitImage) -> Result<UnitImage, GenError> {
        if (self.width, self.height) != (other.width, other.height) {
            return Err(GenError::SizeMismatch(format!(
                "{}x{} vs {}x{}",
                self.width, self.height, other.width, other.height
            )));
        }
        let mut data = self.data.clone();
        data.extend_from_slice(&other.data);
        Ok(Self {
            channels: self.channels + other.channels,
            width: self.width,
            height: self.height,
            data,
        })
    }

    pub fn map(&self, f: impl Fn(f64) -> f64) -> UnitImage {
        Self {
            data: self.data.iter().map(|&v| f(v)).collect(),
            ..self.clone()
        }
    }
}
