use std::collections::BTreeMap;
use std::io::BufRead;
use std::path::PathBuf;

use actfloor_core::metrics::{EloTable, MatchLogEntry};
use anyhow::anyhow;
use serde::Serialize;
use serde_json::json;

use super::generate::write_text;
use crate::run::{input, sidecar, CliResult, RunManifest};
use crate::Common;

#[derive(Debug, clap::Args)]
pub struct Args {
    /// JSON-lines match log, one match per line.
    #[arg(long)]
    matches: PathBuf,
    #[arg(long)]
    report: PathBuf,
}

#[derive(Debug, Serialize, PartialEq)]
pub struct QuestionReport {
    pub matches: usize,
    pub ratings: BTreeMap<String, f64>,
}

#[derive(Debug, Serialize)]
pub struct EloReport {
    pub k_factor: f64,
    pub matches: usize,
    /// One independent table per question, updated in log order.
    pub questions: BTreeMap<String, QuestionReport>,
}

pub fn run(common: &Common, args: Args) -> CliResult<()> {
    let file = std::fs::File::open(&args.matches)
        .map_err(|e| input(anyhow!("{}: {e}", args.matches.display())))?;
    let mut entries = Vec::new();
    for (n, line) in std::io::BufReader::new(file).lines().enumerate() {
        let line = line.map_err(|e| input(anyhow!("{}: {e}", args.matches.display())))?;
        if line.trim().is_empty() {
            continue;
        }
        let entry: MatchLogEntry = serde_json::from_str(&line).map_err(|e| {
            input(anyhow!(
                "{}:{}: malformed line: {e}",
                args.matches.display(),
                n + 1
            ))
        })?;
        entries.push(entry);
    }
    let report = tabulate(&entries).map_err(input)?;
    write_text(
        &args.report,
        &serde_json::to_string_pretty(&report).expect("report serializes"),
    )?;
    RunManifest::new(
        "elo",
        vec![args.matches.clone()],
        &args.report,
        common.seed,
        json!({ "k_factor": report.k_factor }),
    )
    .write_to(&sidecar(&args.report))
}

pub fn tabulate(entries: &[MatchLogEntry]) -> anyhow::Result<EloReport> {
    let mut tables: BTreeMap<String, (usize, EloTable)> = BTreeMap::new();
    for e in entries {
        let (count, table) = tables.entry(e.question.clone()).or_default();
        table.replay(std::iter::once(e))?;
        *count += 1;
    }
    Ok(EloReport {
        k_factor: EloTable::default().k_factor(),
        matches: entries.len(),
        questions: tables
            .into_iter()
            .map(|(q, (matches, t))| {
                (
                    q,
                    QuestionReport {
                        matches,
                        ratings: t.ratings().clone(),
                    },
                )
            })
            .collect(),
    })
}
