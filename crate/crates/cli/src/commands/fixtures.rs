use std::path::PathBuf;

use actfloor_core::floorplan::extract_boundary;
use actfloor_core::floorplan::io::save_floorplan;
use actfloor_core::synth;
use serde_json::json;

use crate::run::{create_dir, pipeline, CliResult, RunManifest};
use crate::Common;

/// Writes the floorplans plus `<id>_input.png`, the RGB boundary accepted by
/// `generate`.
#[derive(Debug, clap::Args)]
pub struct Args {
    #[arg(long)]
    out: PathBuf,
    #[arg(long, default_value_t = 20)]
    count: usize,
}

pub fn run(common: &Common, args: Args) -> CliResult<()> {
    create_dir(&args.out)?;
    for fp in synth::dataset(args.count, common.seed) {
        save_floorplan(&fp, &args.out).map_err(pipeline)?;
        let rgb = extract_boundary(&fp).map_err(pipeline)?.to_rgb();
        rgb.save(args.out.join(format!("{}_input.png", fp.id())))
            .map_err(pipeline)?;
    }
    log::info!("wrote {} floorplans to {}", args.count, args.out.display());
    RunManifest::new(
        "fixtures",
        Vec::new(),
        &args.out,
        common.seed,
        json!({ "count": args.count }),
    )
    .write(&args.out)
}
