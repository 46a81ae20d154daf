use std::path::{Path, PathBuf};
use std::sync::Arc;

use actfloor_core::actsim::ActivityMap;
use actfloor_core::floorplan::io::write_category_png;
use actfloor_core::floorplan::BoundaryImage;
use actfloor_core::genlab::{
    DatasetIndex, Generator, GeneratorInput, PluginGenerator, RetrievalGenerator,
};
use actfloor_core::vectorize::{export_json, export_svg, vectorize};
use actfloor_server::config::split_command;
use anyhow::anyhow;
use serde_json::json;

use crate::run::{create_dir, input, pipeline, CliResult, RunManifest};
use crate::Common;

#[derive(Debug, clap::Args)]
pub struct Args {
    /// RGB boundary image: R inside, G outline, B entrance.
    #[arg(long)]
    boundary: PathBuf,
    /// Grayscale activity map of the same size.
    #[arg(long)]
    activity: PathBuf,
    #[arg(long)]
    out: PathBuf,
    /// `retrieval`, or `plugin:CMD` for an external generator.
    #[arg(long)]
    generator: Option<String>,
    /// Dataset for the retrieval generator; overrides the config.
    #[arg(long)]
    dataset: Option<PathBuf>,
}

pub fn run(common: &Common, args: Args) -> CliResult<()> {
    let boundary = read_boundary(&args.boundary)?;
    let activity = ActivityMap::load_png(&args.activity).map_err(input)?;
    if (activity.width(), activity.height()) != (boundary.width(), boundary.height()) {
        return Err(input(anyhow!(
            "activity is {}x{} but boundary is {}x{}",
            activity.width(),
            activity.height(),
            boundary.width(),
            boundary.height()
        )));
    }
    let choice = args
        .generator
        .clone()
        .or_else(|| {
            common
                .config
                .generator_plugin
                .as_ref()
                .map(|c| format!("plugin:{c}"))
        })
        .unwrap_or_else(|| "retrieval".into());
    let dataset = args
        .dataset
        .clone()
        .or_else(|| common.config.dataset.clone());
    let generator = build_generator(&choice, dataset.as_deref(), common.config.top_k)?;

    let gen_input = GeneratorInput::new(boundary, activity.clone()).map_err(input)?;
    let category = generator
        .generate(&gen_input, common.seed)
        .map_err(pipeline)?;
    let vf = vectorize(&category, &activity).map_err(pipeline)?;

    create_dir(&args.out)?;
    write_category_png(&args.out.join("category.png"), &category).map_err(pipeline)?;
    write_text(&args.out.join("vector.json"), &export_json(&vf))?;
    write_text(&args.out.join("floorplan.svg"), &export_svg(&vf))?;
    let mut inputs = vec![args.boundary.clone(), args.activity.clone()];
    inputs.extend(dataset);
    RunManifest::new(
        "generate",
        inputs,
        &args.out,
        common.seed,
        json!({ "generator": choice, "top_k": common.config.top_k }),
    )
    .write(&args.out)
}

pub fn read_boundary(path: &Path) -> CliResult<BoundaryImage> {
    let img = image::open(path)
        .map_err(|e| input(anyhow!("{}: {e}", path.display())))?
        .into_rgb8();
    BoundaryImage::from_rgb(&img).map_err(|e| input(anyhow!("{}: {e}", path.display())))
}

fn build_generator(
    choice: &str,
    dataset: Option<&Path>,
    top_k: usize,
) -> CliResult<Box<dyn Generator>> {
    if let Some(cmd) = choice.strip_prefix("plugin:") {
        let (program, args) =
            split_command(cmd).ok_or_else(|| input(anyhow!("empty plugin command")))?;
        return Ok(Box::new(PluginGenerator::new(program, args)));
    }
    if choice != "retrieval" {
        return Err(input(anyhow!("unknown generator {choice:?}")));
    }
    let dir = dataset.ok_or_else(|| input(anyhow!("the retrieval generator needs --dataset")))?;
    let index = DatasetIndex::load(dir).map_err(input)?;
    if index.is_empty() {
        return Err(input(anyhow!("no floorplans in {}", dir.display())));
    }
    Ok(Box::new(RetrievalGenerator::new(Arc::new(index), top_k)))
}

pub fn write_text(path: &Path, text: &str) -> CliResult<()> {
    std::fs::write(path, text).map_err(|e| pipeline(anyhow!("{}: {e}", path.display())))
}
