use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn actfloor(args: &[&str], dir: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_actfloor"))
        .args(args)
        .current_dir(dir)
        .env("RUST_LOG", "warn")
        .env_remove("ACTFLOOR_DATASET")
        .output()
        .unwrap()
}

fn ok(args: &[&str], dir: &Path) {
    let out = actfloor(args, dir);
    assert!(
        out.status.success(),
        "{args:?}: {}",
        String::from_utf8_lossy(&out.stderr)
    );
}

fn json(path: &Path) -> Value {
    serde_json::from_str(&std::fs::read_to_string(path).unwrap()).unwrap()
}

fn count_suffix(dir: &Path, suffix: &str) -> usize {
    std::fs::read_dir(dir)
        .unwrap()
        .filter(|e| {
            e.as_ref()
                .unwrap()
                .file_name()
                .to_string_lossy()
                .ends_with(suffix)
        })
        .count()
}

/// Fixture set plus simulated activity, shared setup of most tests.
fn simulated(dir: &Path, count: usize) {
    ok(
        &[
            "--seed",
            "4",
            "fixtures",
            "--out",
            "fx",
            "--count",
            &count.to_string(),
        ],
        dir,
    );
    ok(
        &["--seed", "4", "simulate", "--dataset", "fx", "--out", "sim"],
        dir,
    );
}

#[test]
fn simulate_writes_one_map_per_entry() {
    let tmp = tempfile::tempdir().unwrap();
    let d = tmp.path();
    simulated(d, 20);
    let sim = d.join("sim");
    assert_eq!(count_suffix(&sim, "_activity.png"), 20);
    assert_eq!(count_suffix(&sim, "_furniture.json"), 20);
    let manifest = json(&sim.join("fp0007.json"));
    assert_eq!(manifest["activity"], "fp0007_activity.png");
    let run = json(&sim.join("run.json"));
    assert_eq!(run["command"], "simulate");
    assert_eq!(run["seed"], 4);
}

#[test]
fn corrupt_entry_is_skipped_and_fails_the_batch() {
    let tmp = tempfile::tempdir().unwrap();
    let d = tmp.path();
    ok(&["fixtures", "--out", "fx", "--count", "20"], d);
    std::fs::write(d.join("fx/fp0005_category.png"), b"not a png").unwrap();
    let out = actfloor(&["simulate", "--dataset", "fx", "--out", "sim"], d);
    assert_eq!(out.status.code(), Some(3));
    assert!(String::from_utf8_lossy(&out.stderr).contains("fp0005"));
    assert_eq!(count_suffix(&d.join("sim"), "_activity.png"), 19);
}

#[test]
fn missing_dataset_is_an_input_error() {
    let tmp = tempfile::tempdir().unwrap();
    let out = actfloor(
        &["simulate", "--dataset", "nope", "--out", "sim"],
        tmp.path(),
    );
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn generate_writes_the_artifact_set() {
    let tmp = tempfile::tempdir().unwrap();
    let d = tmp.path();
    simulated(d, 6);
    ok(
        &[
            "--seed",
            "11",
            "generate",
            "--boundary",
            "fx/fp0002_input.png",
            "--activity",
            "sim/fp0002_activity.png",
            "--dataset",
            "sim",
            "--out",
            "gen",
        ],
        d,
    );
    for f in ["category.png", "vector.json", "floorplan.svg", "run.json"] {
        assert!(d.join("gen").join(f).is_file(), "{f}");
    }
    // the boundary belongs to an indexed plan, so its own layout comes back
    assert_eq!(
        std::fs::read(d.join("gen/category.png")).unwrap(),
        std::fs::read(d.join("fx/fp0002_category.png")).unwrap()
    );
    assert_eq!(json(&d.join("gen/run.json"))["seed"], 11);
    let vector = json(&d.join("gen/vector.json"));
    assert!(!vector["rooms"].as_array().unwrap().is_empty());
}

#[test]
fn generate_rejects_mismatched_sizes() {
    let tmp = tempfile::tempdir().unwrap();
    let d = tmp.path();
    simulated(d, 3);
    image::GrayImage::new(128, 128)
        .save(d.join("small.png"))
        .unwrap();
    let out = actfloor(
        &[
            "generate",
            "--boundary",
            "fx/fp0001_input.png",
            "--activity",
            "small.png",
            "--dataset",
            "sim",
            "--out",
            "gen",
        ],
        d,
    );
    assert_eq!(out.status.code(), Some(2));
    assert!(!d.join("gen").exists());
}

#[cfg(unix)]
#[test]
fn generate_runs_a_plugin() {
    let tmp = tempfile::tempdir().unwrap();
    let d = tmp.path();
    simulated(d, 2);
    let script = d.join("gen.sh");
    std::fs::write(
        &script,
        format!(
            "touch {}/invoked\ncp {}/fx/fp0001_category.png \"$1/output_category.png\"\n",
            d.display(),
            d.display()
        ),
    )
    .unwrap();
    let generator = format!("plugin:sh {}", script.display());
    ok(
        &[
            "generate",
            "--boundary",
            "fx/fp0001_input.png",
            "--activity",
            "sim/fp0001_activity.png",
            "--generator",
            &generator,
            "--out",
            "gen",
        ],
        d,
    );
    assert!(d.join("invoked").is_file());
    assert!(d.join("gen/floorplan.svg").is_file());

    let failing = "plugin:false";
    let out = actfloor(
        &[
            "generate",
            "--boundary",
            "fx/fp0001_input.png",
            "--activity",
            "sim/fp0001_activity.png",
            "--generator",
            failing,
            "--out",
            "gen2",
        ],
        d,
    );
    assert_eq!(out.status.code(), Some(3));
}

#[test]
fn eval_of_identical_sets_is_perfect() {
    let tmp = tempfile::tempdir().unwrap();
    let d = tmp.path();
    simulated(d, 5);
    ok(
        &["eval", "--pred", "sim", "--gt", "sim", "--report", "r.json"],
        d,
    );
    let r = json(&d.join("r.json"));
    assert_eq!(r["aggregate"]["mse"], 0.0);
    assert_eq!(r["aggregate"]["mae"], 0.0);
    assert_eq!(r["aggregate"]["nmi"], 1.0);
    assert_eq!(r["aggregate"]["success"], "5/5");
    assert!(d.join("r.run.json").is_file());
}

#[test]
fn eval_counts_verdicts_and_lists_unpaired() {
    let tmp = tempfile::tempdir().unwrap();
    let d = tmp.path();
    ok(
        &["--seed", "1", "fixtures", "--out", "gt", "--count", "8"],
        d,
    );
    ok(
        &["--seed", "2", "fixtures", "--out", "pred", "--count", "8"],
        d,
    );
    std::fs::remove_file(d.join("pred/fp0003_category.png")).unwrap();
    // a plan without a master room fails the type check
    let p = d.join("pred/fp0006_category.png");
    let mut img = image::open(&p).unwrap().into_luma8();
    for px in img.pixels_mut() {
        if px.0[0] == 1 {
            px.0[0] = 2;
        }
    }
    img.save(&p).unwrap();
    ok(
        &["eval", "--pred", "pred", "--gt", "gt", "--report", "r.json"],
        d,
    );
    let r = json(&d.join("r.json"));
    assert_eq!(r["unpaired"]["gt_only"], serde_json::json!(["fp0003"]));
    let items = r["items"].as_array().unwrap();
    assert_eq!(items.len(), 7);
    let recount = items.iter().filter(|i| i["success"] == true).count();
    assert_eq!(r["aggregate"]["success"], format!("{recount}/7"));
    let broken = items.iter().find(|i| i["id"] == "fp0006").unwrap();
    assert!(broken["failed_conditions"]
        .as_array()
        .unwrap()
        .contains(&Value::from("balanced_types")));
    assert!(r["aggregate"]["mse"].as_f64().unwrap() > 0.0);
}

fn write_log(path: &Path, lines: &[String]) {
    std::fs::write(path, lines.join("\n")).unwrap();
}

#[test]
fn elo_empty_and_all_draws() {
    let tmp = tempfile::tempdir().unwrap();
    let d = tmp.path();
    write_log(&d.join("empty.jsonl"), &[]);
    ok(
        &["elo", "--matches", "empty.jsonl", "--report", "e.json"],
        d,
    );
    assert_eq!(json(&d.join("e.json"))["questions"], serde_json::json!({}));

    let draws: Vec<String> = (0..40)
        .map(|i| {
            format!(
                r#"{{"player_a": "m{}", "player_b": "m{}", "question": "q{}", "outcome": "draw"}}"#,
                i % 3,
                (i + 1) % 3,
                i % 2
            )
        })
        .collect();
    write_log(&d.join("draws.jsonl"), &draws);
    ok(
        &["elo", "--matches", "draws.jsonl", "--report", "d.json"],
        d,
    );
    let r = json(&d.join("d.json"));
    for q in r["questions"].as_object().unwrap().values() {
        for rating in q["ratings"].as_object().unwrap().values() {
            assert_eq!(rating.as_f64(), Some(1000.0));
        }
    }
}

#[test]
fn elo_applies_every_answer_of_a_study_shaped_log() {
    let tmp = tempfile::tempdir().unwrap();
    let d = tmp.path();
    // 2 sets x 30 pairs x 5 raters x 5 questions
    let methods = ["ours", "baseline", "gt"];
    let mut lines = Vec::new();
    for set in 0..2 {
        for pair in 0..30 {
            for rater in 0..5 {
                for q in 0..5 {
                    let a = methods[(set + pair) % 3];
                    let b = methods[(set + pair + 1) % 3];
                    let outcome = ["a_wins", "b_wins", "draw"][(pair + rater + q) % 3];
                    lines.push(format!(
                        r#"{{"player_a": "{a}", "player_b": "{b}", "question": "q{q}", "outcome": "{outcome}"}}"#
                    ));
                }
            }
        }
    }
    write_log(&d.join("study.jsonl"), &lines);
    ok(
        &["elo", "--matches", "study.jsonl", "--report", "s.json"],
        d,
    );
    let r = json(&d.join("s.json"));
    assert_eq!(r["matches"], 1500);
    let per_question: u64 = r["questions"]
        .as_object()
        .unwrap()
        .values()
        .map(|q| q["matches"].as_u64().unwrap())
        .sum();
    assert_eq!(per_question, 1500);
    for q in r["questions"].as_object().unwrap().values() {
        let total: f64 = q["ratings"]
            .as_object()
            .unwrap()
            .values()
            .map(|v| v.as_f64().unwrap())
            .sum();
        assert!((total - 3000.0).abs() < 1e-6);
    }
}

#[test]
fn elo_reports_the_malformed_line() {
    let tmp = tempfile::tempdir().unwrap();
    let d = tmp.path();
    let lines = vec![
        r#"{"player_a": "a", "player_b": "b", "outcome": "a_wins"}"#.to_string(),
        r#"{"player_a": "a", "outcome": "a_wins"}"#.to_string(),
    ];
    write_log(&d.join("bad.jsonl"), &lines);
    let out = actfloor(&["elo", "--matches", "bad.jsonl", "--report", "b.json"], d);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("bad.jsonl:2"));
    assert!(!d.join("b.json").exists());
}

#[test]
fn vectorize_command_reports_success() {
    let tmp = tempfile::tempdir().unwrap();
    let d = tmp.path();
    simulated(d, 2);
    ok(
        &[
            "vectorize",
            "--category",
            "sim/fp0000_category.png",
            "--activity",
            "sim/fp0000_activity.png",
            "--out",
            "vec",
        ],
        d,
    );
    assert_eq!(json(&d.join("vec/success.json"))["ok"], true);
}

#[test]
fn config_file_supplies_the_seed() {
    let tmp = tempfile::tempdir().unwrap();
    let d = tmp.path();
    std::fs::write(d.join("c.toml"), "seed = 77\n").unwrap();
    ok(
        &[
            "--config", "c.toml", "fixtures", "--out", "fx", "--count", "1",
        ],
        d,
    );
    assert_eq!(json(&d.join("fx/run.json"))["seed"], 77);
    std::fs::write(d.join("bad.toml"), "colour = 1\n").unwrap();
    let out = actfloor(&["--config", "bad.toml", "fixtures", "--out", "fx"], d);
    assert_eq!(out.status.code(), Some(2));
}
