use std::fs;
use std::path::{Path, PathBuf};

use image::GrayImage;
use serde::{Deserialize, Serialize};

use crate::grid::{Grid, Mask};

use super::{FloorplanError, RasterFloorplan, RoomLabel};

/// JSON manifest naming the four channel PNGs of one floorplan. Paths are
/// relative to the manifest's directory. `activity` and `furniture` are
/// optional companions written by the simulation stage.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Manifest {
    pub id: String,
    pub inside: String,
    pub boundary: String,
    pub category: String,
    pub room_ids: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub activity: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub furniture: Option<String>,
}

impl Manifest {
    pub fn for_id(id: &str) -> Self {
        Self {
            id: id.to_string(),
            inside: format!("{id}_inside.png"),
            boundary: format!("{id}_boundary.png"),
            category: format!("{id}_category.png"),
            room_ids: format!("{id}_ids.png"),
            activity: None,
            furniture: None,
        }
    }

    pub fn read(path: &Path) -> Result<Self, FloorplanError> {
        let text = fs::read_to_string(path).map_err(|e| FloorplanError::io(path, e))?;
        serde_json::from_str(&text).map_err(|e| FloorplanError::Manifest {
            path: path.to_path_buf(),
            message: e.to_string(),
        })
    }

    pub fn write(&self, path: &Path) -> Result<(), FloorplanError> {
        let text = serde_json::to_string_pretty(self).expect("manifest serializes");
        fs::write(path, text).map_err(|e| FloorplanError::io(path, e))
    }
}

/// Resolves a manifest path: a file is taken as is; a directory must hold
/// exactly one manifest.
pub fn resolve_manifest(path: &Path) -> Result<PathBuf, FloorplanError> {
    if path.is_dir() {
        let found = scan_manifests(path)?;
        match found.as_slice() {
            [one] => Ok(one.clone()),
            [] => Err(FloorplanError::MissingChannel(format!(
                "no manifest in {}",
                path.display()
            ))),
            _ => Err(FloorplanError::Manifest {
                path: path.to_path_buf(),
                message: format!("{} manifests found; name one explicitly", found.len()),
            }),
        }
    } else {
        Ok(path.to_path_buf())
    }
}

/// Lists candidate floorplan manifests in `dir`, sorted by path. JSON files
/// that parse but carry no `inside` key (furniture lists, reports) are
/// skipped; unparseable JSON files are kept so the caller can report them.
pub fn scan_manifests(dir: &Path) -> Result<Vec<PathBuf>, FloorplanError> {
    let mut out = Vec::new();
    for entry in fs::read_dir(dir).map_err(|e| FloorplanError::io(dir, e))? {
        let path = entry.map_err(|e| FloorplanError::io(dir, e))?.path();
        if path.extension().and_then(|e| e.to_str()) != Some("json") || !path.is_file() {
            continue;
        }
        let keep = match fs::read_to_string(&path)
            .ok()
            .and_then(|t| serde_json::from_str::<serde_json::Value>(&t).ok())
        {
            Some(serde_json::Value::Object(map)) => map.contains_key("inside"),
            Some(_) => false,
            None => true,
        };
        if keep {
            out.push(path);
        }
    }
    out.sort();
    Ok(out)
}

pub fn load_floorplan(path: &Path) -> Result<RasterFloorplan, FloorplanError> {
    let manifest_path = resolve_manifest(path)?;
    let manifest = Manifest::read(&manifest_path)?;
    let dir = manifest_path.parent().unwrap_or(Path::new("."));
    let read = |name: &str, rel: &str| -> Result<GrayImage, FloorplanError> {
        let p = dir.join(rel);
        if !p.is_file() {
            return Err(FloorplanError::MissingChannel(format!(
                "{name}: {}",
                p.display()
            )));
        }
        let img = image::open(&p).map_err(|e| FloorplanError::Image {
            path: p.clone(),
            message: e.to_string(),
        })?;
        Ok(img.into_luma8())
    };
    let inside = read("inside", &manifest.inside)?;
    let boundary = read("boundary", &manifest.boundary)?;
    let category = read("category", &manifest.category)?;
    let ids = read("room_ids", &manifest.room_ids)?;

    let category = to_grid(&category)
        .into_iter_labels()
        .map_err(|(pos, code)| FloorplanError::IllegalLabel { code, pos })?;
    RasterFloorplan::new(
        manifest.id,
        to_grid(&inside).map(|&v| v > 0),
        to_grid(&boundary).map(|&v| v > 0),
        category,
        to_grid(&ids),
    )
}

/// Writes the four channel PNGs and `{id}.json` into `dir`, creating it if
/// needed. Returns the manifest path.
pub fn save_floorplan(fp: &RasterFloorplan, dir: &Path) -> Result<PathBuf, FloorplanError> {
    save_floorplan_with(fp, dir, Manifest::for_id(fp.id()))
}

/// Like [`save_floorplan`] but with a caller-supplied manifest (used to attach
/// activity and furniture companions).
pub fn save_floorplan_with(
    fp: &RasterFloorplan,
    dir: &Path,
    manifest: Manifest,
) -> Result<PathBuf, FloorplanError> {
    fs::create_dir_all(dir).map_err(|e| FloorplanError::io(dir, e))?;
    write_gray(
        &dir.join(&manifest.inside),
        &fp.inside().map(|&b| if b { 255 } else { 0 }),
    )?;
    write_gray(
        &dir.join(&manifest.boundary),
        &fp.boundary().map(|&b| if b { 255 } else { 0 }),
    )?;
    write_gray(
        &dir.join(&manifest.category),
        &fp.category().map(|l| l.code()),
    )?;
    write_gray(&dir.join(&manifest.room_ids), fp.room_ids())?;
    let path = dir.join(format!("{}.json", manifest.id));
    manifest.write(&path)?;
    Ok(path)
}

pub fn to_grid(img: &GrayImage) -> Grid<u8> {
    Grid::from_vec(
        img.width() as usize,
        img.height() as usize,
        img.as_raw().clone(),
    )
    .expect("image buffer matches dimensions")
}

pub fn to_image(grid: &Grid<u8>) -> GrayImage {
    GrayImage::from_raw(
        grid.width() as u32,
        grid.height() as u32,
        grid.as_slice().to_vec(),
    )
    .expect("grid buffer matches dimensions")
}

pub fn write_gray(path: &Path, grid: &Grid<u8>) -> Result<(), FloorplanError> {
    to_image(grid)
        .save_with_format(path, image::ImageFormat::Png)
        .map_err(|e| match e {
            image::ImageError::IoError(io) => FloorplanError::io(path, io),
            other => FloorplanError::Image {
                path: path.to_path_buf(),
                message: other.to_string(),
            },
        })
}

/// Encodes a category image as 8-bit label codes.
pub fn category_to_png_bytes(category: &Grid<RoomLabel>) -> Vec<u8> {
    png_bytes(&category.map(|l| l.code()))
}

pub fn category_from_png_bytes(bytes: &[u8]) -> Result<Grid<RoomLabel>, FloorplanError> {
    let img = image::load_from_memory_with_format(bytes, image::ImageFormat::Png)
        .map_err(|e| FloorplanError::Image {
            path: PathBuf::from("<memory>"),
            message: e.to_string(),
        })?
        .into_luma8();
    to_grid(&img)
        .into_iter_labels()
        .map_err(|(pos, code)| FloorplanError::IllegalLabel { code, pos })
}

pub fn png_bytes(grid: &Grid<u8>) -> Vec<u8> {
    let mut out = std::io::Cursor::new(Vec::new());
    to_image(grid)
        .write_to(&mut out, image::ImageFormat::Png)
        .expect("in-memory PNG encoding");
    out.into_inner()
}

pub fn read_category_png(path: &Path) -> Result<Grid<RoomLabel>, FloorplanError> {
    let bytes = fs::read(path).map_err(|e| FloorplanError::io(path, e))?;
    category_from_png_bytes(&bytes)
}

pub fn write_category_png(path: &Path, category: &Grid<RoomLabel>) -> Result<(), FloorplanError> {
    write_gray(path, &category.map(|l| l.code()))
}

trait IntoLabels {
    fn into_iter_labels(self) -> Result<Grid<RoomLabel>, (crate::grid::Pos, u8)>;
}

impl IntoLabels for Grid<u8> {
    fn into_iter_labels(self) -> Result<Grid<RoomLabel>, (crate::grid::Pos, u8)> {
        if let Some((p, &code)) = self
            .iter()
            .find(|(_, &c)| RoomLabel::from_code(c).is_none())
        {
            return Err((p, code));
        }
        Ok(self.map(|&c| RoomLabel::from_code(c).expect("checked above")))
    }
}

/// Mask as 0/255 grayscale.
pub fn mask_to_gray(mask: &Mask) -> Grid<u8> {
    mask.map(|&b| if b { 255 } else { 0 })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::synth;

    #[test]
    fn save_load_round_trip() {
        let dir = tempfile::tempdir().unwrap();
        let fp = synth::floorplan(12).with_id("rt");
        let path = save_floorplan(&fp, dir.path()).unwrap();
        assert_eq!(load_floorplan(&path).unwrap(), fp);
        // a directory with a single manifest resolves to it
        assert_eq!(load_floorplan(dir.path()).unwrap(), fp);
        let bytes = category_to_png_bytes(fp.category());
        assert_eq!(&category_from_png_bytes(&bytes).unwrap(), fp.category());
    }

    #[test]
    fn wrong_size_channel() {
        let dir = tempfile::tempdir().unwrap();
        let fp = synth::floorplan(2).with_id("small");
        let path = save_floorplan(&fp, dir.path()).unwrap();
        write_gray(
            &dir.path().join("small_ids.png"),
            &Grid::filled(128, 128, 0),
        )
        .unwrap();
        assert!(matches!(
            load_floorplan(&path),
            Err(FloorplanError::SizeMismatch { width: 128, .. })
        ));
    }

    #[test]
    fn illegal_code() {
        let dir = tempfile::tempdir().unwrap();
        let fp = synth::floorplan(2).with_id("bad");
        let path = save_floorplan(&fp, dir.path()).unwrap();
        let mut codes = fp.category().map(|l| l.code());
        codes.set(crate::grid::Pos::new(3, 4), 42);
        write_gray(&dir.path().join("bad_category.png"), &codes).unwrap();
        match load_floorplan(&path) {
            Err(FloorplanError::IllegalLabel { code: 42, pos }) => {
                assert_eq!(pos, crate::grid::Pos::new(3, 4))
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn missing_channel_and_unwritable_dir() {
        let dir = tempfile::tempdir().unwrap();
        let fp = synth::floorplan(2).with_id("gone");
        let path = save_floorplan(&fp, dir.path()).unwrap();
        fs::remove_file(dir.path().join("gone_inside.png")).unwrap();
        assert!(matches!(
            load_floorplan(&path),
            Err(FloorplanError::MissingChannel(_))
        ));

        let file = dir.path().join("plain");
        fs::write(&file, b"x").unwrap();
        // a regular file where a directory is expected
        assert!(matches!(
            save_floorplan(&fp, &file.join("sub")),
            Err(FloorplanError::Io { .. })
        ));
    }

    #[test]
    fn scan_skips_companions() {
        let dir = tempfile::tempdir().unwrap();
        save_floorplan(&synth::floorplan(1).with_id("a"), dir.path()).unwrap();
        fs::write(dir.path().join("a_furniture.json"), "[]").unwrap();
        fs::write(dir.path().join("report.json"), r#"{"ok": true}"#).unwrap();
        let found = scan_manifests(dir.path()).unwrap();
        assert_eq!(found, vec![dir.path().join("a.json")]);
    }
}
