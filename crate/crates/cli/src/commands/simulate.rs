use std::path::{Path, PathBuf};

use actfloor_core::actsim::synthesize_activity_map;
use actfloor_core::floorplan::io::{load_floorplan, save_floorplan_with, scan_manifests, Manifest};
use actfloor_core::furnish::{furniture_to_json, place_primary_furniture, PlacementPolicy};
use actfloor_core::grid::{derive_seed, hash_str};
use anyhow::anyhow;
use rayon::prelude::*;
use serde_json::json;

use super::rrt_params;
use crate::run::{create_dir, input, pipeline, CliResult, RunManifest};
use crate::Common;

#[derive(Debug, clap::Args)]
pub struct Args {
    /// Directory of floorplan manifests.
    #[arg(long)]
    dataset: PathBuf,
    /// Output dataset directory; gains an activity map and furniture list per entry.
    #[arg(long)]
    out: PathBuf,
}

pub fn run(common: &Common, args: Args) -> CliResult<()> {
    let manifests = scan_manifests(&args.dataset).map_err(input)?;
    if manifests.is_empty() {
        return Err(input(anyhow!(
            "no floorplans in {}",
            args.dataset.display()
        )));
    }
    create_dir(&args.out)?;
    let params = rrt_params(common);
    let policy = PlacementPolicy::default();
    let results: Vec<_> = manifests
        .par_iter()
        .map(|path| simulate_one(path, &args.out, common.seed, &policy, &params))
        .collect();

    let mut failed = 0usize;
    for (path, r) in manifests.iter().zip(&results) {
        if let Err(e) = r {
            failed += 1;
            log::warn!("skipping {}: {e:#}", path.display());
        }
    }
    let total = manifests.len();
    log::info!("simulated {}/{total} floorplans", total - failed);
    RunManifest::new(
        "simulate",
        vec![args.dataset.clone()],
        &args.out,
        common.seed,
        json!({ "runs_per_edge": params.runs_per_edge, "failed": failed }),
    )
    .write(&args.out)?;
    if failed * 100 > total {
        return Err(pipeline(anyhow!("{failed} of {total} floorplans failed")));
    }
    Ok(())
}

fn simulate_one(
    path: &Path,
    out: &Path,
    seed: u64,
    policy: &PlacementPolicy,
    params: &actfloor_core::actsim::BiRrtParams,
) -> anyhow::Result<()> {
    let fp = load_floorplan(path)?;
    let item_seed = derive_seed(seed, hash_str(fp.id()));
    let furniture = place_primary_furniture(&fp, policy, derive_seed(item_seed, 0))?;
    let activity = synthesize_activity_map(&fp, &furniture, params, derive_seed(item_seed, 1))?;

    let mut manifest = Manifest::for_id(fp.id());
    let activity_name = format!("{}_activity.png", fp.id());
    let furniture_name = format!("{}_furniture.json", fp.id());
    activity.save_png(&out.join(&activity_name))?;
    std::fs::write(out.join(&furniture_name), furniture_to_json(&furniture))?;
    manifest.activity = Some(activity_name);
    manifest.furniture = Some(furniture_name);
    save_floorplan_with(&fp, out, manifest)?;
    Ok(())
}
