use std::path::PathBuf;

use actfloor_core::actsim::ActivityMap;
use actfloor_core::floorplan::io::read_category_png;
use actfloor_core::vectorize::{check_success, export_json, export_svg, vectorize};
use anyhow::anyhow;
use serde_json::json;

use super::generate::write_text;
use crate::run::{create_dir, input, pipeline, CliResult, RunManifest};
use crate::Common;

#[derive(Debug, clap::Args)]
pub struct Args {
    /// Category-code PNG.
    #[arg(long)]
    category: PathBuf,
    /// Activity map used to place doors; all zero when omitted.
    #[arg(long)]
    activity: Option<PathBuf>,
    #[arg(long)]
    out: PathBuf,
}

pub fn run(common: &Common, args: Args) -> CliResult<()> {
    let category = read_category_png(&args.category).map_err(input)?;
    let activity = match &args.activity {
        Some(p) => ActivityMap::load_png(p).map_err(input)?,
        None => ActivityMap::zeros(category.width(), category.height()),
    };
    if (activity.width(), activity.height()) != category.dims() {
        return Err(input(anyhow!("activity and category sizes differ")));
    }
    let vf = vectorize(&category, &activity).map_err(pipeline)?;
    let report = check_success(&vf);
    create_dir(&args.out)?;
    write_text(&args.out.join("vector.json"), &export_json(&vf))?;
    write_text(&args.out.join("floorplan.svg"), &export_svg(&vf))?;
    write_text(
        &args.out.join("success.json"),
        &serde_json::to_string_pretty(&report).expect("report serializes"),
    )?;
    let mut inputs = vec![args.category.clone()];
    inputs.extend(args.activity.clone());
    RunManifest::new("vectorize", inputs, &args.out, common.seed, json!({})).write(&args.out)
}
