use std::path::Path;

use crate::actsim::ActivityMap;
use crate::floorplan::io::{scan_manifests, Manifest};
use crate::floorplan::{load_floorplan, RasterFloorplan, RoomLabel};
use crate::furnish::{furniture_from_json, FurnitureInstance};
use crate::grid::{Grid, Mask};
use crate::metrics::HuSignature;

use super::GenError;

/// One indexed floorplan.
#[derive(Debug, Clone)]
pub struct DatasetEntry {
    pub id: String,
    pub inside: Mask,
    pub hu: HuSignature,
    pub activity: ActivityMap,
    pub category: Grid<RoomLabel>,
    pub furniture: Vec<FurnitureInstance>,
}

impl DatasetEntry {
    pub fn new(
        fp: &RasterFloorplan,
        activity: ActivityMap,
        furniture: Vec<FurnitureInstance>,
    ) -> Result<Self, GenError> {
        let hu = HuSignature::of(fp.inside())
            .map_err(|e| GenError::GeneratorFailure(format!("{}: {e}", fp.id())))?;
        Ok(Self {
            id: fp.id().to_string(),
            inside: fp.inside().clone(),
            hu,
            activity,
            category: fp.category().clone(),
            furniture,
        })
    }
}

/// Immutable searchable collection of floorplans with their activity maps.
#[derive(Debug, Clone, Default)]
pub struct DatasetIndex {
    entries: Vec<DatasetEntry>,
}

impl DatasetIndex {
    pub fn new(entries: Vec<DatasetEntry>) -> Self {
        Self { entries }
    }

    /// Loads every manifest in `dir`. Entries without an activity map get an
    /// all-zero one.
    pub fn load(dir: &Path) -> Result<Self, GenError> {
        let mut entries = Vec::new();
        for path in scan_manifests(dir)? {
            let fp = load_floorplan(&path)?;
            let manifest = Manifest::read(&path)?;
            let base = path.parent().unwrap_or(Path::new("."));
            let activity = match &manifest.activity {
                Some(rel) => ActivityMap::load_png(&base.join(rel))
                    .map_err(|e| GenError::GeneratorFailure(format!("{}: {e}", fp.id())))?,
                None => ActivityMap::zeros(fp.width(), fp.height()),
            };
            let furniture = match &manifest.furniture {
                Some(rel) => {
                    let p = base.join(rel);
                    let text = std::fs::read_to_string(&p).map_err(|source| GenError::Io {
                        path: p.clone(),
                        source,
                    })?;
                    furniture_from_json(&text)
                        .map_err(|e| GenError::GeneratorFailure(format!("{}: {e}", p.display())))?
                }
                None => Vec::new(),
            };
            entries.push(DatasetEntry::new(&fp, activity, furniture)?);
        }
        Ok(Self { entries })
    }

    pub fn entries(&self) -> &[DatasetEntry] {
        &self.entries
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// Entry indices and Hu distances of the `k` boundaries most similar to
    /// `inside`, nearest first; ties keep index order.
    pub fn nearest(&self, inside: &Mask, k: usize) -> Result<Vec<(usize, f64)>, GenError> {
        if self.entries.is_empty() {
            return Err(GenError::EmptyIndex);
        }
        let query =
            HuSignature::of(inside).map_err(|e| GenError::GeneratorFailure(e.to_string()))?;
        let mut ranked: Vec<(usize, f64)> = self
            .entries
            .iter()
            .enumerate()
            .map(|(i, e)| (i, query.distance(&e.hu)))
            .collect();
        ranked.sort_by(|a, b| a.1.total_cmp(&b.1).then(a.0.cmp(&b.0)));
        ranked.truncate(k);
        Ok(ranked)
    }
}
