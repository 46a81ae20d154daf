use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use actfloor_core::actsim::ActivityMap;
use actfloor_core::floorplan::io::read_category_png;
use actfloor_core::metrics::{nmi, pixel_error};
use actfloor_core::vectorize::{check_success, vectorize, SuccessCondition};
use anyhow::anyhow;
use rayon::prelude::*;
use serde::Serialize;
use serde_json::json;

use super::generate::write_text;
use crate::run::{input, sidecar, CliResult, RunManifest};
use crate::Common;

const CATEGORY_SUFFIX: &str = "_category.png";
const ACTIVITY_SUFFIX: &str = "_activity.png";

#[derive(Debug, clap::Args)]
pub struct Args {
    /// Predictions: `<id>_category.png`, optionally `<id>_activity.png`.
    #[arg(long)]
    pred: PathBuf,
    /// Ground truth in the same layout, e.g. a dataset directory.
    #[arg(long)]
    gt: PathBuf,
    #[arg(long)]
    report: PathBuf,
}

#[derive(Debug, Serialize)]
pub struct ItemReport {
    pub id: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub mse: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub mae: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub nmi: Option<f64>,
    pub success: bool,
    pub failed_conditions: Vec<SuccessCondition>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
}

#[derive(Debug, Serialize)]
pub struct Aggregate {
    pub items: usize,
    pub mse: Option<f64>,
    pub mae: Option<f64>,
    pub nmi: Option<f64>,
    /// `k/n` of items whose prediction vectorized and passed every check.
    pub success: String,
    pub success_rate: f64,
}

#[derive(Debug, Serialize)]
pub struct Unpaired {
    pub pred_only: Vec<String>,
    pub gt_only: Vec<String>,
}

#[derive(Debug, Serialize)]
pub struct EvalReport {
    pub aggregate: Aggregate,
    pub items: Vec<ItemReport>,
    pub unpaired: Unpaired,
}

pub fn run(common: &Common, args: Args) -> CliResult<()> {
    let pred = list_items(&args.pred)?;
    let gt = list_items(&args.gt)?;
    let report = evaluate(&args.pred, &args.gt, &pred, &gt);
    if !report.unpaired.pred_only.is_empty() || !report.unpaired.gt_only.is_empty() {
        log::warn!(
            "unpaired items: {} prediction-only, {} ground-truth-only",
            report.unpaired.pred_only.len(),
            report.unpaired.gt_only.len()
        );
    }
    log::info!("vectorization success {}", report.aggregate.success);
    write_text(
        &args.report,
        &serde_json::to_string_pretty(&report).expect("report serializes"),
    )?;
    RunManifest::new(
        "eval",
        vec![args.pred.clone(), args.gt.clone()],
        &args.report,
        common.seed,
        json!({}),
    )
    .write_to(&sidecar(&args.report))
}

/// Ids of `<id>_category.png` files in `dir`, sorted.
fn list_items(dir: &Path) -> CliResult<Vec<String>> {
    let entries = std::fs::read_dir(dir).map_err(|e| input(anyhow!("{}: {e}", dir.display())))?;
    let mut ids: Vec<String> = entries
        .filter_map(|e| e.ok())
        .filter_map(|e| {
            e.file_name()
                .to_str()
                .and_then(|n| n.strip_suffix(CATEGORY_SUFFIX))
                .map(str::to_string)
        })
        .collect();
    ids.sort();
    Ok(ids)
}

fn evaluate(pred_dir: &Path, gt_dir: &Path, pred: &[String], gt: &[String]) -> EvalReport {
    let gt_set: BTreeMap<&str, ()> = gt.iter().map(|s| (s.as_str(), ())).collect();
    let paired: Vec<&String> = pred
        .iter()
        .filter(|id| gt_set.contains_key(id.as_str()))
        .collect();
    let unpaired = Unpaired {
        pred_only: pred
            .iter()
            .filter(|id| !gt_set.contains_key(id.as_str()))
            .cloned()
            .collect(),
        gt_only: gt.iter().filter(|id| !pred.contains(id)).cloned().collect(),
    };
    let items: Vec<ItemReport> = paired
        .par_iter()
        .map(|id| evaluate_item(id, pred_dir, gt_dir))
        .collect();

    let mean =
        |vals: Vec<f64>| (!vals.is_empty()).then(|| vals.iter().sum::<f64>() / vals.len() as f64);
    let ok = items.iter().filter(|i| i.success).count();
    let aggregate = Aggregate {
        items: items.len(),
        mse: mean(items.iter().filter_map(|i| i.mse).collect()),
        mae: mean(items.iter().filter_map(|i| i.mae).collect()),
        nmi: mean(items.iter().filter_map(|i| i.nmi).collect()),
        success: format!("{ok}/{}", items.len()),
        success_rate: if items.is_empty() {
            0.0
        } else {
            ok as f64 / items.len() as f64
        },
    };
    EvalReport {
        aggregate,
        items,
        unpaired,
    }
}

fn load_activity(dir: &Path, id: &str) -> Option<ActivityMap> {
    let p = dir.join(format!("{id}{ACTIVITY_SUFFIX}"));
    p.is_file()
        .then(|| ActivityMap::load_png(&p).ok())
        .flatten()
}

fn evaluate_item(id: &str, pred_dir: &Path, gt_dir: &Path) -> ItemReport {
    let mut item = ItemReport {
        id: id.to_string(),
        mse: None,
        mae: None,
        nmi: None,
        success: false,
        failed_conditions: Vec::new(),
        error: None,
    };
    let load = |dir: &Path| read_category_png(&dir.join(format!("{id}{CATEGORY_SUFFIX}")));
    let (pred, gt) = match (load(pred_dir), load(gt_dir)) {
        (Ok(p), Ok(g)) => (p, g),
        (Err(e), _) | (_, Err(e)) => {
            item.error = Some(e.to_string());
            return item;
        }
    };
    match pixel_error(&pred, &gt) {
        Ok(e) => {
            item.mse = Some(e.mse);
            item.mae = Some(e.mae);
        }
        Err(e) => {
            item.error = Some(e.to_string());
            return item;
        }
    }
    let pred_activity = load_activity(pred_dir, id);
    let gt_activity = load_activity(gt_dir, id);
    if let (Some(a), Some(b)) = (&pred_activity, &gt_activity) {
        item.nmi = nmi(a, b).ok();
    }
    let activity = pred_activity
        .or(gt_activity)
        .unwrap_or_else(|| ActivityMap::zeros(pred.width(), pred.height()));
    match vectorize(&pred, &activity) {
        Ok(vf) => {
            let report = check_success(&vf);
            item.success = report.ok;
            item.failed_conditions = report.failed_conditions;
        }
        Err(e) => item.error = Some(format!("vectorization failed: {e}")),
    }
    item
}
