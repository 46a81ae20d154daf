use std::path::Path;

use image::GrayImage;

use crate::grid::{Grid, Mask};

use super::ActsimError;

/// Weight of the living-room partition in the blend.
pub const LIVING_WEIGHT: f64 = 0.6;
/// Weight of the per-room partition in the blend.
pub const ROOMS_WEIGHT: f64 = 0.4;

const MAGIC: &[u8; 4] = b"AMAP";

/// Human-activity density, every value finite and within [0, 1].
#[derive(Debug, Clone, PartialEq)]
pub struct ActivityMap {
    density: Grid<f64>,
}

impl ActivityMap {
    pub fn new(density: Grid<f64>) -> Result<Self, ActsimError> {
        if let Some((p, v)) = density
            .iter()
            .find(|(_, v)| !(v.is_finite() && (0.0..=1.0).contains(*v)))
        {
            return Err(ActsimError::InvalidMap(format!("value {v} at {p}")));
        }
        Ok(Self { density })
    }

    pub fn zeros(width: usize, height: usize) -> Self {
        Self {
            density: Grid::filled(width, height, 0.0),
        }
    }

    pub fn density(&self) -> &Grid<f64> {
        &self.density
    }

    pub fn into_grid(self) -> Grid<f64> {
        self.density
    }

    pub fn width(&self) -> usize {
        self.density.width()
    }

    pub fn height(&self) -> usize {
        self.density.height()
    }

    pub fn to_gray(&self) -> GrayImage {
        let (w, h) = self.density.dims();
        let data = self
            .density
            .as_slice()
            .iter()
            .map(|v| (v * 255.0).round() as u8)
            .collect();
        GrayImage::from_raw(w as u32, h as u32, data).expect("buffer matches dimensions")
    }

    pub fn from_gray(img: &GrayImage) -> Self {
        let data = img.as_raw().iter().map(|&v| f64::from(v) / 255.0).collect();
        Self {
            density: Grid::from_vec(img.width() as usize, img.height() as usize, data)
                .expect("buffer matches dimensions"),
        }
    }

    pub fn to_png_bytes(&self) -> Vec<u8> {
        let mut out = std::io::Cursor::new(Vec::new());
        self.to_gray()
            .write_to(&mut out, image::ImageFormat::Png)
            .expect("in-memory PNG encoding");
        out.into_inner()
    }

    pub fn from_png_bytes(bytes: &[u8]) -> Result<Self, ActsimError> {
        let img = image::load_from_memory_with_format(bytes, image::ImageFormat::Png)
            .map_err(|e| ActsimError::Format(e.to_string()))?;
        Ok(Self::from_gray(&img.to_luma8()))
    }

    pub fn save_png(&self, path: &Path) -> Result<(), ActsimError> {
        std::fs::write(path, self.to_png_bytes()).map_err(|e| ActsimError::io(path, e))
    }

    pub fn load_png(path: &Path) -> Result<Self, ActsimError> {
        let bytes = std::fs::read(path).map_err(|e| ActsimError::io(path, e))?;
        Self::from_png_bytes(&bytes)
    }

    /// Lossless form: "AMAP", width, height and a reserved word as
    /// little-endian u32, then row-major little-endian f32 values.
    pub fn to_binary(&self) -> Vec<u8> {
        let (w, h) = self.density.dims();
        let mut out = Vec::with_capacity(16 + 4 * w * h);
        out.extend_from_slice(MAGIC);
        out.extend_from_slice(&(w as u32).to_le_bytes());
        out.extend_from_slice(&(h as u32).to_le_bytes());
        out.extend_from_slice(&0u32.to_le_bytes());
        for v in self.density.as_slice() {
            out.extend_from_slice(&(*v as f32).to_le_bytes());
        }
        out
    }

    pub fn from_binary(bytes: &[u8]) -> Result<Self, ActsimError> {
        if bytes.len() < 16 || &bytes[..4] != MAGIC {
            return Err(ActsimError::Format("missing activity map header".into()));
        }
        let word =
            |i: usize| u32::from_le_bytes(bytes[i..i + 4].try_into().expect("4 bytes")) as usize;
        let (w, h) = (word(4), word(8));
        let body = &bytes[16..];
        if body.len() != 4 * w * h {
            return Err(ActsimError::Format(format!(
                "expected {} value bytes for {w}x{h}, found {}",
                4 * w * h,
                body.len()
            )));
        }
        let data = body
            .chunks_exact(4)
            .map(|c| f64::from(f32::from_le_bytes(c.try_into().expect("4 bytes"))))
            .collect();
        Self::new(Grid::from_vec(w, h, data).expect("length checked"))
    }
}

/// clamp(0.6·living + 0.4·rooms, 0, 1) inside `inside`, zero elsewhere.
pub fn blend(
    living: &Grid<f64>,
    rooms: &Grid<f64>,
    inside: &Mask,
) -> Result<ActivityMap, ActsimError> {
    if !living.same_dims(rooms) || !living.same_dims(inside) {
        return Err(ActsimError::InvalidMap(
            "component dimensions differ".into(),
        ));
    }
    let (w, h) = living.dims();
    let data = living
        .as_slice()
        .iter()
        .zip(rooms.as_slice())
        .zip(inside.as_slice())
        .map(|((a, b), &m)| {
            if m {
                (LIVING_WEIGHT * a + ROOMS_WEIGHT * b).clamp(0.0, 1.0)
            } else {
                0.0
            }
        })
        .collect();
    ActivityMap::new(Grid::from_vec(w, h, data).expect("same dims"))
}
