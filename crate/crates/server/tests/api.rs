use std::sync::{Arc, OnceLock};

use actfloor_core::actsim::{synthesize_activity_map, ActivityMap, BiRrtParams};
use actfloor_core::floorplan::io::category_from_png_bytes;
use actfloor_core::floorplan::{extract_boundary, RasterFloorplan, RoomLabel};
use actfloor_core::furnish::{place_primary_furniture, FurnitureInstance, PlacementPolicy};
use actfloor_core::genlab::{DatasetEntry, DatasetIndex};
use actfloor_core::metrics::HuSignature;
use actfloor_core::synth;
use actfloor_server::{router, AppState, ServerConfig};
use axum::body::Body;
use axum::http::{header, Request, StatusCode};
use axum::Router;
use base64::engine::general_purpose::STANDARD as B64;
use base64::Engine;
use http_body_util::BodyExt;
use serde_json::{json, Value};
use tower::ServiceExt;

const SEED: u64 = 31;

fn dataset() -> &'static Vec<(RasterFloorplan, Vec<FurnitureInstance>)> {
    static DATA: OnceLock<Vec<(RasterFloorplan, Vec<FurnitureInstance>)>> = OnceLock::new();
    DATA.get_or_init(|| {
        synth::dataset(8, SEED)
            .into_iter()
            .map(|fp| {
                let f = place_primary_furniture(&fp, &PlacementPolicy::default(), 0).unwrap();
                (fp, f)
            })
            .collect()
    })
}

fn index() -> DatasetIndex {
    let params = BiRrtParams {
        runs_per_edge: 1,
        ..BiRrtParams::default()
    };
    DatasetIndex::new(
        dataset()
            .iter()
            .map(|(fp, f)| {
                let act = synthesize_activity_map(fp, f, &params, 0).unwrap();
                DatasetEntry::new(fp, act, f.clone()).unwrap()
            })
            .collect(),
    )
}

fn app(with_index: bool) -> Router {
    let config = ServerConfig {
        runs_per_edge: 2,
        ..ServerConfig::default()
    };
    router(Arc::new(AppState::new(config, with_index.then(index))))
}

fn boundary_png(fp: &RasterFloorplan) -> Vec<u8> {
    let mut out = std::io::Cursor::new(Vec::new());
    extract_boundary(fp)
        .unwrap()
        .to_rgb()
        .write_to(&mut out, image::ImageFormat::Png)
        .unwrap();
    out.into_inner()
}

async fn send(app: &Router, req: Request<Body>) -> (StatusCode, Vec<u8>) {
    let resp = app.clone().oneshot(req).await.unwrap();
    let status = resp.status();
    let body = resp
        .into_body()
        .collect()
        .await
        .unwrap()
        .to_bytes()
        .to_vec();
    (status, body)
}

async fn call(app: &Router, method: &str, uri: &str, body: Option<Value>) -> (StatusCode, Value) {
    let mut req = Request::builder().method(method).uri(uri);
    let body = match body {
        Some(v) => {
            req = req.header(header::CONTENT_TYPE, "application/json");
            Body::from(v.to_string())
        }
        None => Body::empty(),
    };
    let (status, bytes) = send(app, req.body(body).unwrap()).await;
    let v = serde_json::from_slice(&bytes).unwrap_or(Value::Null);
    (status, v)
}

async fn create(app: &Router, fp: &RasterFloorplan) -> String {
    let req = Request::post("/v1/sessions")
        .header(header::CONTENT_TYPE, "image/png")
        .body(Body::from(boundary_png(fp)))
        .unwrap();
    let (status, bytes) = send(app, req).await;
    assert_eq!(status, StatusCode::CREATED);
    let v: Value = serde_json::from_slice(&bytes).unwrap();
    v["id"].as_str().unwrap().to_string()
}

async fn add(app: &Router, id: &str, f: &FurnitureInstance) -> (StatusCode, Value) {
    call(
        app,
        "POST",
        &format!("/v1/sessions/{id}/furniture"),
        Some(json!({ "op": "add", "kind": f.kind, "rect": f.rect })),
    )
    .await
}

#[tokio::test]
async fn session_creation() {
    let app = app(false);
    let fp = &dataset()[0].0;
    let a = create(&app, fp).await;
    let b = create(&app, fp).await;
    assert_ne!(a, b);

    // base64 JSON upload
    let (status, _) = call(
        &app,
        "POST",
        "/v1/sessions",
        Some(json!({ "boundary_png": B64.encode(boundary_png(fp)) })),
    )
    .await;
    assert_eq!(status, StatusCode::CREATED);

    // an image whose ring has a gap
    let mut img = extract_boundary(fp).unwrap().to_rgb();
    for p in img.pixels_mut() {
        p[1] = 0;
    }
    let mut bytes = std::io::Cursor::new(Vec::new());
    img.write_to(&mut bytes, image::ImageFormat::Png).unwrap();
    let req = Request::post("/v1/sessions")
        .header(header::CONTENT_TYPE, "image/png")
        .body(Body::from(bytes.into_inner()))
        .unwrap();
    let (status, body) = send(&app, req).await;
    assert_eq!(status, StatusCode::BAD_REQUEST);
    let v: Value = serde_json::from_slice(&body).unwrap();
    assert_eq!(v["error"], "BadBoundary");

    let (status, _) = call(&app, "GET", "/v1/sessions/nope", None).await;
    assert_eq!(status, StatusCode::NOT_FOUND);
}

#[tokio::test]
async fn recommendations_rank_by_hu_distance() {
    let app = app(true);
    let fp = &dataset()[3].0;
    let id = create(&app, fp).await;
    let (status, v) = call(
        &app,
        "GET",
        &format!("/v1/sessions/{id}/recommendations?top=10"),
        None,
    )
    .await;
    assert_eq!(status, StatusCode::OK);
    let recs = v["recommendations"].as_array().unwrap();
    assert_eq!(recs.len(), 8);
    assert_eq!(recs[0]["entry_id"], fp.id());
    assert_eq!(recs[0]["distance"].as_f64().unwrap(), 0.0);

    // oracle: sort the whole index by signature distance
    let q = HuSignature::of(fp.inside()).unwrap();
    let mut all: Vec<f64> = dataset()
        .iter()
        .map(|(d, _)| q.distance(&HuSignature::of(d.inside()).unwrap()))
        .collect();
    all.sort_by(f64::total_cmp);
    let got: Vec<f64> = recs
        .iter()
        .map(|r| r["distance"].as_f64().unwrap())
        .collect();
    assert_eq!(got, all);

    let (_, v) = call(
        &app,
        "GET",
        &format!("/v1/sessions/{id}/recommendations?top=3"),
        None,
    )
    .await;
    assert_eq!(v["recommendations"].as_array().unwrap().len(), 3);

    let (status, v) = call(
        &app,
        "POST",
        &format!("/v1/sessions/{id}/recommendations/{}/apply", fp.id()),
        None,
    )
    .await;
    assert_eq!(status, StatusCode::OK);
    let applied = v["furniture"].as_array().unwrap().clone();
    assert_eq!(applied.len(), dataset()[3].1.len());
    // applying twice yields the same placements
    let (_, again) = call(
        &app,
        "POST",
        &format!("/v1/sessions/{id}/recommendations/{}/apply", fp.id()),
        None,
    )
    .await;
    let strip =
        |v: &[Value]| -> Vec<Value> { v.iter().map(|f| json!([f["kind"], f["rect"]])).collect() };
    assert_eq!(
        strip(&applied),
        strip(again["furniture"].as_array().unwrap())
    );
}

#[tokio::test]
async fn missing_index_is_503() {
    let app = app(false);
    let id = create(&app, &dataset()[0].0).await;
    let (status, v) = call(
        &app,
        "GET",
        &format!("/v1/sessions/{id}/recommendations"),
        None,
    )
    .await;
    assert_eq!(status, StatusCode::SERVICE_UNAVAILABLE);
    assert_eq!(v["error"], "IndexNotLoaded");
}

#[tokio::test]
async fn furniture_commands() {
    let app = app(false);
    let (fp, furniture) = &dataset()[1];
    let id = create(&app, fp).await;
    let (status, v) = add(&app, &id, &furniture[0]).await;
    assert_eq!(status, StatusCode::OK);
    let inst = v["instance"].clone();
    assert!(!inst["entrance"].is_null());
    let fid = inst["id"].as_u64().unwrap();

    let (status, v) = call(
        &app,
        "POST",
        &format!("/v1/sessions/{id}/furniture"),
        Some(json!({ "op": "move", "id": fid, "rect": [0, 0, 12, 12] })),
    )
    .await;
    assert_eq!(status, StatusCode::CONFLICT);
    assert_eq!(v["error"], "OutOfBoundary");
    let (_, v) = call(&app, "GET", &format!("/v1/sessions/{id}/furniture"), None).await;
    assert_eq!(v["furniture"][0]["rect"], json!(furniture[0].rect));

    let remove = json!({ "op": "remove", "id": fid });
    let (status, _) = call(
        &app,
        "POST",
        &format!("/v1/sessions/{id}/furniture"),
        Some(remove.clone()),
    )
    .await;
    assert_eq!(status, StatusCode::OK);
    let (status, v) = call(
        &app,
        "POST",
        &format!("/v1/sessions/{id}/furniture"),
        Some(remove),
    )
    .await;
    assert_eq!(status, StatusCode::NOT_FOUND);
    assert_eq!(v["error"], "UnknownInstance");
}

#[tokio::test]
async fn manual_activity_and_generation() {
    let app = app(true);
    let (fp, furniture) = &dataset()[2];
    let id = create(&app, fp).await;

    let (status, _) = call(
        &app,
        "POST",
        &format!("/v1/sessions/{id}/activity?seed=4"),
        None,
    )
    .await;
    assert_eq!(
        status,
        StatusCode::UNPROCESSABLE_ENTITY,
        "empty manual session"
    );
    let (status, v) = call(&app, "POST", &format!("/v1/sessions/{id}/generate"), None).await;
    assert_eq!(status, StatusCode::UNPROCESSABLE_ENTITY);
    assert_eq!(v["error"], "MissingActivity");

    for f in furniture.iter().take(3) {
        assert_eq!(add(&app, &id, f).await.0, StatusCode::OK);
    }
    let png_req = || {
        Request::post(format!("/v1/sessions/{id}/activity?seed=4"))
            .header(header::ACCEPT, "image/png")
            .body(Body::empty())
            .unwrap()
    };
    let (status, first) = send(&app, png_req()).await;
    assert_eq!(status, StatusCode::OK);
    let (_, second) = send(&app, png_req()).await;
    assert_eq!(first, second, "same seed, same bytes");
    let map = ActivityMap::from_png_bytes(&first).unwrap();
    assert!(map.density().as_slice().iter().any(|&v| v > 0.0));
    for (p, &v) in map.density().iter() {
        if v > 0.0 {
            assert!(fp.inside().at(p), "activity outside the building at {p}");
        }
    }

    let (status, a) = call(
        &app,
        "POST",
        &format!("/v1/sessions/{id}/generate?seed=1"),
        None,
    )
    .await;
    assert_eq!(status, StatusCode::OK);
    for key in ["category_png", "vector", "svg", "success"] {
        assert!(!a[key].is_null(), "{key} missing");
    }
    let (_, b) = call(
        &app,
        "POST",
        &format!("/v1/sessions/{id}/generate?seed=1"),
        None,
    )
    .await;
    assert_eq!(a, b);
    let cat =
        category_from_png_bytes(&B64.decode(a["category_png"].as_str().unwrap()).unwrap()).unwrap();
    for (p, &l) in cat.iter() {
        assert_eq!(l == RoomLabel::Outside, !fp.inside().at(p));
    }
    let (status, bytes) = send(
        &app,
        Request::get(format!("/v1/sessions/{id}/export.svg"))
            .body(Body::empty())
            .unwrap(),
    )
    .await;
    assert_eq!(status, StatusCode::OK);
    assert!(String::from_utf8(bytes).unwrap().starts_with("<svg"));

    // a furniture change invalidates the map
    assert_eq!(
        add(&app, &id, &furniture[3.min(furniture.len() - 1)])
            .await
            .0,
        StatusCode::OK
    );
    let (status, _) = call(&app, "POST", &format!("/v1/sessions/{id}/generate"), None).await;
    assert_eq!(status, StatusCode::UNPROCESSABLE_ENTITY);
}

#[tokio::test]
async fn auto_mode_uses_the_index() {
    let app = app(true);
    let fp = &dataset()[5].0;
    let id = create(&app, fp).await;
    let (status, v) = call(
        &app,
        "POST",
        &format!("/v1/sessions/{id}/activity?mode=auto&seed=2&samples=2"),
        None,
    )
    .await;
    assert_eq!(status, StatusCode::OK, "{v}");
    assert_eq!(v["samples_png"].as_array().unwrap().len(), 2);
    assert!(!v["auto_furniture"].as_array().unwrap().is_empty());
    let (_, s) = call(&app, "GET", &format!("/v1/sessions/{id}"), None).await;
    assert_eq!(s["mode"], "auto");
    assert_eq!(s["has_activity"], true);
    assert_eq!(s["furniture"].as_array().unwrap().len(), 0);
}

#[tokio::test(flavor = "multi_thread", worker_threads = 4)]
async fn sessions_are_isolated() {
    let app = app(false);
    let (fp, furniture) = &dataset()[4];
    let mut ids = Vec::new();
    for _ in 0..4 {
        ids.push(create(&app, fp).await);
    }
    let tasks: Vec<_> = ids
        .iter()
        .enumerate()
        .map(|(k, id)| {
            let (app, id) = (app.clone(), id.clone());
            let furniture = furniture.clone();
            tokio::spawn(async move {
                for step in 0..12 {
                    let f = &furniture[(k + step) % furniture.len()];
                    add(&app, &id, f).await;
                    if step % 3 == 2 {
                        let (_, v) =
                            call(&app, "GET", &format!("/v1/sessions/{id}/furniture"), None).await;
                        let first = v["furniture"][0]["id"].as_u64().unwrap();
                        call(
                            &app,
                            "POST",
                            &format!("/v1/sessions/{id}/furniture"),
                            Some(json!({ "op": "remove", "id": first })),
                        )
                        .await;
                    }
                }
            })
        })
        .collect();
    for t in tasks {
        t.await.unwrap();
    }
    for (k, id) in ids.iter().enumerate() {
        let (_, v) = call(&app, "GET", &format!("/v1/sessions/{id}/furniture"), None).await;
        let kinds: Vec<Value> = v["furniture"]
            .as_array()
            .unwrap()
            .iter()
            .map(|f| f["rect"].clone())
            .collect();
        // oracle: replay the same script sequentially
        let mut expect: Vec<Value> = Vec::new();
        for step in 0..12 {
            expect.push(json!(furniture[(k + step) % furniture.len()].rect));
            if step % 3 == 2 {
                expect.remove(0);
            }
        }
        assert_eq!(kinds, expect, "session {k}");
    }
    let (_, h) = call(&app, "GET", "/v1/health", None).await;
    assert_eq!(h["sessions"], 4);
}
