use std::sync::Arc;

use actfloor_core::actsim::ActivityMap;
use actfloor_core::floorplan::io::category_to_png_bytes;
use actfloor_core::floorplan::{BoundaryImage, RASTER_SIZE};
use actfloor_core::grid::derive_seed;
use actfloor_core::vectorize::export_json;
use axum::body::Bytes;
use axum::extract::{Path, Query, State};
use axum::http::{header, HeaderMap, StatusCode};
use axum::response::{IntoResponse, Response};
use axum::routing::{get, post, put};
use axum::{Json, Router};
use base64::engine::general_purpose::STANDARD as B64;
use base64::Engine;
use serde::Deserialize;
use serde_json::{json, Value};

use crate::error::ApiError;
use crate::session::{FurnitureCommand, Mode, Session};
use crate::{pipeline, SharedState};

pub fn router(state: SharedState) -> Router {
    Router::new()
        .route("/v1/health", get(health))
        .route("/v1/sessions", post(create_session))
        .route("/v1/sessions/{id}", get(get_session).delete(delete_session))
        .route("/v1/sessions/{id}/mode", put(set_mode))
        .route("/v1/sessions/{id}/recommendations", get(recommendations))
        .route(
            "/v1/sessions/{id}/recommendations/{entry}/apply",
            post(apply_recommendation),
        )
        .route(
            "/v1/sessions/{id}/furniture",
            get(list_furniture).post(mutate_furniture),
        )
        .route(
            "/v1/sessions/{id}/activity",
            get(get_activity).post(synthesize_activity),
        )
        .route("/v1/sessions/{id}/generate", post(generate))
        .route("/v1/sessions/{id}/category.png", get(export_category))
        .route("/v1/sessions/{id}/export.svg", get(export_svg))
        .route("/v1/sessions/{id}/export.json", get(export_vector))
        .with_state(state)
}

fn wants_png(headers: &HeaderMap) -> bool {
    headers
        .get(header::ACCEPT)
        .and_then(|v| v.to_str().ok())
        .is_some_and(|v| v.contains("image/png"))
}

fn png(bytes: Vec<u8>) -> Response {
    ([(header::CONTENT_TYPE, "image/png")], bytes).into_response()
}

/// Runs blocking work on the session while holding its lock.
async fn with_session<T, F>(state: &SharedState, id: &str, f: F) -> Result<T, ApiError>
where
    T: Send + 'static,
    F: FnOnce(&mut Session) -> Result<T, ApiError> + Send + 'static,
{
    let session = state.session(id).await?;
    let mut guard = session.lock_owned().await;
    tokio::task::spawn_blocking(move || f(&mut guard))
        .await
        .map_err(|e| ApiError::internal(e.to_string()))?
}

async fn health(State(state): State<SharedState>) -> Json<Value> {
    Json(json!({
        "status": "ok",
        "index_entries": state.index().map_or(0, |i| i.len()),
        "sessions": state.session_count().await,
    }))
}

fn decode_boundary(headers: &HeaderMap, body: &[u8]) -> Result<BoundaryImage, ApiError> {
    let is_json = headers
        .get(header::CONTENT_TYPE)
        .and_then(|v| v.to_str().ok())
        .is_some_and(|v| v.starts_with("application/json"));
    let bytes = if is_json {
        #[derive(Deserialize)]
        struct Upload {
            boundary_png: String,
        }
        let up: Upload =
            serde_json::from_slice(body).map_err(|e| ApiError::bad_boundary(e.to_string()))?;
        B64.decode(up.boundary_png)
            .map_err(|e| ApiError::bad_boundary(e.to_string()))?
    } else {
        body.to_vec()
    };
    let img = image::load_from_memory(&bytes)
        .map_err(|e| ApiError::bad_boundary(e.to_string()))?
        .into_rgb8();
    if (img.width() as usize, img.height() as usize) != (RASTER_SIZE, RASTER_SIZE) {
        return Err(ApiError::bad_boundary(format!(
            "boundary is {}x{}, expected {RASTER_SIZE}x{RASTER_SIZE}",
            img.width(),
            img.height()
        )));
    }
    BoundaryImage::from_rgb(&img).map_err(|e| ApiError::bad_boundary(e.to_string()))
}

async fn create_session(
    State(state): State<SharedState>,
    headers: HeaderMap,
    body: Bytes,
) -> Result<(StatusCode, Json<Value>), ApiError> {
    let boundary = decode_boundary(&headers, &body)?;
    let id = uuid::Uuid::new_v4().to_string();
    let session = Session::new(id.clone(), boundary);
    state
        .sessions
        .write()
        .await
        .insert(id.clone(), Arc::new(tokio::sync::Mutex::new(session)));
    log::info!("session {id} created");
    Ok((StatusCode::CREATED, Json(json!({ "id": id }))))
}

fn session_json(s: &Session) -> Value {
    json!({
        "id": s.id,
        "mode": s.mode,
        "furniture": s.furniture,
        "has_activity": s.activity.is_some(),
        "has_result": s.last_result.is_some(),
        "entrance": s.boundary.entrance_point(),
    })
}

async fn get_session(
    State(state): State<SharedState>,
    Path(id): Path<String>,
) -> Result<Json<Value>, ApiError> {
    let s = state.session(&id).await?;
    let s = s.lock().await;
    Ok(Json(session_json(&s)))
}

async fn delete_session(
    State(state): State<SharedState>,
    Path(id): Path<String>,
) -> Result<StatusCode, ApiError> {
    state
        .sessions
        .write()
        .await
        .remove(&id)
        .map(|_| StatusCode::NO_CONTENT)
        .ok_or_else(|| ApiError::session_not_found(&id))
}

#[derive(Deserialize)]
struct ModeBody {
    mode: Mode,
}

async fn set_mode(
    State(state): State<SharedState>,
    Path(id): Path<String>,
    Json(body): Json<ModeBody>,
) -> Result<Json<Value>, ApiError> {
    let s = state.session(&id).await?;
    let mut s = s.lock().await;
    if s.mode != body.mode {
        s.mode = body.mode;
        s.activity = None;
    }
    Ok(Json(session_json(&s)))
}

#[derive(Deserialize)]
struct TopQuery {
    top: Option<usize>,
}

async fn recommendations(
    State(state): State<SharedState>,
    Path(id): Path<String>,
    Query(q): Query<TopQuery>,
) -> Result<Json<Value>, ApiError> {
    let s = state.session(&id).await?;
    let index = state
        .index()
        .cloned()
        .ok_or_else(ApiError::index_not_loaded)?;
    let inside = s.lock().await.boundary.inside().clone();
    let top = q.top.unwrap_or(state.config.top_k);
    let ranked = tokio::task::spawn_blocking(move || {
        index.nearest(&inside, top).map(|r| {
            r.into_iter()
                .enumerate()
                .map(|(rank, (i, d))| {
                    let e = &index.entries()[i];
                    json!({
                        "rank": rank + 1,
                        "entry_id": e.id,
                        "distance": d,
                        "furniture": e.furniture,
                    })
                })
                .collect::<Vec<_>>()
        })
    })
    .await
    .map_err(|e| ApiError::internal(e.to_string()))?
    .map_err(|e| ApiError::internal(e.to_string()))?;
    Ok(Json(json!({ "recommendations": ranked })))
}

async fn apply_recommendation(
    State(state): State<SharedState>,
    Path((id, entry)): Path<(String, String)>,
) -> Result<Json<Value>, ApiError> {
    let index = state
        .index()
        .cloned()
        .ok_or_else(ApiError::index_not_loaded)?;
    with_session(&state, &id, move |s| {
        let e = index
            .entries()
            .iter()
            .find(|e| e.id == entry)
            .ok_or_else(|| {
                ApiError::new(
                    StatusCode::NOT_FOUND,
                    "UnknownEntry",
                    format!("no entry {entry}"),
                )
            })?;
        s.apply_recommendation(e)?;
        Ok(Json(json!({ "furniture": s.furniture })))
    })
    .await
}

async fn list_furniture(
    State(state): State<SharedState>,
    Path(id): Path<String>,
) -> Result<Json<Value>, ApiError> {
    let s = state.session(&id).await?;
    let s = s.lock().await;
    Ok(Json(json!({ "furniture": s.furniture })))
}

async fn mutate_furniture(
    State(state): State<SharedState>,
    Path(id): Path<String>,
    Json(cmd): Json<FurnitureCommand>,
) -> Result<Json<Value>, ApiError> {
    with_session(&state, &id, move |s| {
        let changed = s.apply(cmd)?;
        Ok(Json(
            json!({ "instance": changed, "furniture": s.furniture }),
        ))
    })
    .await
}

#[derive(Deserialize)]
struct ActivityQuery {
    mode: Option<Mode>,
    seed: Option<u64>,
    samples: Option<usize>,
}

async fn synthesize_activity(
    State(state): State<SharedState>,
    Path(id): Path<String>,
    Query(q): Query<ActivityQuery>,
    headers: HeaderMap,
) -> Result<Response, ApiError> {
    let seed = q.seed.unwrap_or(state.config.seed);
    let samples = q.samples.unwrap_or(1).clamp(1, 16);
    let st = state.clone();
    let (maps, auto_furniture) = with_session(&state, &id, move |s| {
        if let Some(m) = q.mode {
            s.mode = m;
        }
        let params = st.params();
        let mut maps = Vec::with_capacity(samples);
        let mut auto_furniture = None;
        for k in 0..samples {
            let sample_seed = if k == 0 {
                seed
            } else {
                derive_seed(seed, k as u64)
            };
            let map = match s.mode {
                Mode::Manual => pipeline::manual_activity(s, &params, sample_seed)?,
                Mode::Auto => match &st.config.activity_plugin {
                    Some(cmd) => {
                        let (prog, args) = crate::config::split_command(cmd)
                            .ok_or_else(|| ApiError::generator_failure("empty activity command"))?;
                        pipeline::plugin_activity(&s.boundary, &prog, &args, sample_seed)?
                    }
                    None => {
                        let index = st.index().ok_or_else(ApiError::index_not_loaded)?;
                        let (map, fp, furniture) = pipeline::auto_activity(
                            s,
                            index,
                            st.config.top_k,
                            &params,
                            sample_seed,
                        )?;
                        if k == 0 {
                            s.provisional = Some(fp);
                            auto_furniture = Some(furniture);
                        }
                        map
                    }
                },
            };
            maps.push(map);
        }
        s.activity = Some(maps[0].clone());
        Ok((maps, auto_furniture))
    })
    .await?;
    if wants_png(&headers) {
        return Ok(png(maps[0].to_png_bytes()));
    }
    let encoded: Vec<String> = maps.iter().map(|m| B64.encode(m.to_png_bytes())).collect();
    Ok(Json(json!({
        "seed": seed,
        "activity_png": encoded[0],
        "samples_png": encoded,
        "auto_furniture": auto_furniture,
    }))
    .into_response())
}

async fn get_activity(
    State(state): State<SharedState>,
    Path(id): Path<String>,
) -> Result<Response, ApiError> {
    let s = state.session(&id).await?;
    let s = s.lock().await;
    let map: &ActivityMap = s.activity.as_ref().ok_or_else(ApiError::missing_activity)?;
    Ok(png(map.to_png_bytes()))
}

#[derive(Deserialize)]
struct SeedQuery {
    seed: Option<u64>,
}

async fn generate(
    State(state): State<SharedState>,
    Path(id): Path<String>,
    Query(q): Query<SeedQuery>,
) -> Result<Json<Value>, ApiError> {
    let seed = q.seed.unwrap_or(state.config.seed);
    let generator = state.generator()?;
    with_session(&state, &id, move |s| {
        let result = pipeline::generate(s, generator.as_ref(), seed)?;
        let body = json!({
            "seed": seed,
            "category_png": B64.encode(category_to_png_bytes(&result.category)),
            "vector": result.vector,
            "svg": result.svg,
            "success": result.success,
            "vectorize_error": result.vectorize_error,
        });
        s.last_result = Some(result);
        Ok(Json(body))
    })
    .await
}

fn no_result() -> ApiError {
    ApiError::new(StatusCode::NOT_FOUND, "NoResult", "nothing generated yet")
}

async fn export_category(
    State(state): State<SharedState>,
    Path(id): Path<String>,
) -> Result<Response, ApiError> {
    let s = state.session(&id).await?;
    let s = s.lock().await;
    let r = s.last_result.as_ref().ok_or_else(no_result)?;
    Ok(png(category_to_png_bytes(&r.category)))
}

async fn export_svg(
    State(state): State<SharedState>,
    Path(id): Path<String>,
) -> Result<Response, ApiError> {
    let s = state.session(&id).await?;
    let s = s.lock().await;
    let svg = s
        .last_result
        .as_ref()
        .and_then(|r| r.svg.clone())
        .ok_or_else(no_result)?;
    Ok(([(header::CONTENT_TYPE, "image/svg+xml")], svg).into_response())
}

async fn export_vector(
    State(state): State<SharedState>,
    Path(id): Path<String>,
) -> Result<Response, ApiError> {
    let s = state.session(&id).await?;
    let s = s.lock().await;
    let vf = s
        .last_result
        .as_ref()
        .and_then(|r| r.vector.as_ref())
        .ok_or_else(no_result)?;
    Ok((
        [(header::CONTENT_TYPE, "application/json")],
        export_json(vf),
    )
        .into_response())
}
