use std::process::Command;

use actfloor_core::actsim::{
    synthesize_activity_map, synthesize_boundary_activity, ActivityMap, ActsimError, BiRrtParams,
};
use actfloor_core::floorplan::{BoundaryImage, RasterFloorplan};
use actfloor_core::furnish::{place_primary_furniture, FurnitureInstance, PlacementPolicy};
use actfloor_core::genlab::{
    retrieval_generate, DatasetIndex, GenError, Generator, GeneratorInput,
};
use actfloor_core::vectorize::{check_success, export_svg, vectorize, SuccessReport};

use crate::error::ApiError;
use crate::session::{GenerationResult, Session};

fn actsim_error(e: ActsimError) -> ApiError {
    match e {
        ActsimError::NoConnectivity
        | ActsimError::AllEdgesUnsolvable(_)
        | ActsimError::NoEntrance => ApiError::no_connectivity(e.to_string()),
        other => ApiError::internal(other.to_string()),
    }
}

fn gen_error(e: GenError) -> ApiError {
    match e {
        GenError::EmptyIndex => ApiError::index_not_loaded(),
        other => ApiError::generator_failure(other.to_string()),
    }
}

/// Manual mode: simulate movements between the user's furniture and the
/// main entrance.
pub fn manual_activity(
    session: &Session,
    params: &BiRrtParams,
    seed: u64,
) -> Result<ActivityMap, ApiError> {
    if session.furniture.is_empty() {
        return Err(ApiError::no_connectivity(
            "manual mode needs at least one furniture piece",
        ));
    }
    synthesize_boundary_activity(&session.boundary, &session.instances(), params, seed)
        .map_err(actsim_error)
}

/// Auto mode without a plugin: a retrieved layout is furnished by rule and
/// simulated. Returns the map with the provisional plan and its furniture.
pub fn auto_activity(
    session: &Session,
    index: &DatasetIndex,
    top_k: usize,
    params: &BiRrtParams,
    seed: u64,
) -> Result<(ActivityMap, RasterFloorplan, Vec<FurnitureInstance>), ApiError> {
    let (w, h) = (session.boundary.width(), session.boundary.height());
    let input = GeneratorInput::new(session.boundary.clone(), ActivityMap::zeros(w, h))
        .map_err(gen_error)?;
    let layout = retrieval_generate(&input, index, top_k).map_err(gen_error)?;
    let fp = RasterFloorplan::pair(session.id.clone(), &session.boundary, &layout)
        .map_err(|e| ApiError::generator_failure(e.to_string()))?;
    let furniture = place_primary_furniture(&fp, &PlacementPolicy::default(), seed)
        .map_err(|e| ApiError::no_connectivity(e.to_string()))?;
    let map = synthesize_activity_map(&fp, &furniture, params, seed).map_err(actsim_error)?;
    Ok((map, fp, furniture))
}

/// Auto mode through an external program: it receives
/// `DIR/input_boundary.png` and must write `DIR/output_activity.png`.
pub fn plugin_activity(
    boundary: &BoundaryImage,
    program: &str,
    args: &[String],
    seed: u64,
) -> Result<ActivityMap, ApiError> {
    let fail = |m: String| ApiError::generator_failure(m);
    let dir = tempfile::tempdir().map_err(|e| fail(e.to_string()))?;
    boundary
        .to_rgb()
        .save(dir.path().join("input_boundary.png"))
        .map_err(|e| fail(e.to_string()))?;
    let status = Command::new(program)
        .args(args)
        .arg(dir.path())
        .env("ACTFLOOR_SEED", seed.to_string())
        .status()
        .map_err(|e| fail(format!("{program}: {e}")))?;
    if !status.success() {
        return Err(fail(format!("{program} exited with {status}")));
    }
    let map = ActivityMap::load_png(&dir.path().join("output_activity.png"))
        .map_err(|e| fail(e.to_string()))?;
    if (map.width(), map.height()) != (boundary.width(), boundary.height()) {
        return Err(fail(format!(
            "activity is {}x{}, boundary is {}x{}",
            map.width(),
            map.height(),
            boundary.width(),
            boundary.height()
        )));
    }
    Ok(map)
}

/// Runs the generator on the session's boundary and activity, then
/// vectorizes and checks the result.
pub fn generate(
    session: &Session,
    generator: &dyn Generator,
    seed: u64,
) -> Result<GenerationResult, ApiError> {
    let activity = session
        .activity
        .clone()
        .ok_or_else(ApiError::missing_activity)?;
    let input =
        GeneratorInput::new(session.boundary.clone(), activity.clone()).map_err(gen_error)?;
    let category = generator.generate(&input, seed).map_err(gen_error)?;
    Ok(match vectorize(&category, &activity) {
        Ok(vf) => GenerationResult {
            svg: Some(export_svg(&vf)),
            success: check_success(&vf),
            vector: Some(vf),
            category,
            vectorize_error: None,
        },
        Err(e) => GenerationResult {
            category,
            vector: None,
            svg: None,
            success: SuccessReport {
                ok: false,
                failed_conditions: Vec::new(),
            },
            vectorize_error: Some(e.to_string()),
        },
    })
}
