//! Session-oriented HTTP API for the interactive designer.
//!
//! Every route lives under `/v1`. Images travel as PNG, either raw when the
//! client accepts `image/png` or base64-embedded in JSON.

pub mod config;
mod error;
mod pipeline;
mod routes;
mod session;

use std::collections::HashMap;
use std::path::Path;
use std::sync::Arc;

use actfloor_core::actsim::BiRrtParams;
use actfloor_core::genlab::{
    DatasetIndex, GenError, Generator, PluginGenerator, RetrievalGenerator,
};
use tokio::sync::{Mutex, RwLock};

pub use config::ServerConfig;
pub use error::ApiError;
pub use routes::router;
pub use session::{FurnitureCommand, Mode, PlacedFurniture, Session};

/// Shared service state. The dataset index is read-only; each session sits
/// behind its own lock so requests to one session are serialized while
/// different sessions proceed in parallel.
pub struct AppState {
    pub config: ServerConfig,
    index: Option<Arc<DatasetIndex>>,
    sessions: RwLock<HashMap<String, Arc<Mutex<Session>>>>,
}

impl AppState {
    pub fn new(config: ServerConfig, index: Option<DatasetIndex>) -> Self {
        Self {
            config,
            index: index.map(Arc::new),
            sessions: RwLock::new(HashMap::new()),
        }
    }

    /// Builds the state, loading the configured dataset if any.
    pub fn load(config: ServerConfig) -> Result<Self, GenError> {
        let index = match &config.dataset {
            Some(dir) => {
                let idx = DatasetIndex::load(dir)?;
                log::info!("indexed {} floorplans from {}", idx.len(), dir.display());
                Some(idx)
            }
            None => None,
        };
        Ok(Self::new(config, index))
    }

    pub fn index(&self) -> Option<&Arc<DatasetIndex>> {
        self.index.as_ref()
    }

    fn params(&self) -> BiRrtParams {
        BiRrtParams {
            runs_per_edge: self.config.runs_per_edge,
            ..BiRrtParams::default()
        }
    }

    fn generator(&self) -> Result<Box<dyn Generator>, ApiError> {
        if let Some(cmd) = &self.config.generator_plugin {
            let (program, args) = config::split_command(cmd)
                .ok_or_else(|| ApiError::generator_failure("empty generator command"))?;
            return Ok(Box::new(PluginGenerator::new(program, args)));
        }
        let index = self.index.clone().ok_or_else(ApiError::index_not_loaded)?;
        Ok(Box::new(RetrievalGenerator::new(index, self.config.top_k)))
    }

    async fn session(&self, id: &str) -> Result<Arc<Mutex<Session>>, ApiError> {
        self.sessions
            .read()
            .await
            .get(id)
            .cloned()
            .ok_or_else(|| ApiError::session_not_found(id))
    }

    pub async fn session_count(&self) -> usize {
        self.sessions.read().await.len()
    }

    /// Writes every session's boundary, furniture and activity map under
    /// `dir/<id>/`. Returns the number of sessions written.
    pub async fn snapshot(&self, dir: &Path) -> std::io::Result<usize> {
        let sessions: Vec<_> = self.sessions.read().await.values().cloned().collect();
        for s in &sessions {
            let s = s.lock().await;
            let d = dir.join(&s.id);
            std::fs::create_dir_all(&d)?;
            s.boundary
                .to_rgb()
                .save(d.join("boundary.png"))
                .map_err(std::io::Error::other)?;
            let state = serde_json::json!({
                "id": s.id,
                "mode": s.mode,
                "furniture": s.furniture,
            });
            std::fs::write(
                d.join("session.json"),
                serde_json::to_string_pretty(&state)?,
            )?;
            if let Some(a) = &s.activity {
                std::fs::write(d.join("activity.png"), a.to_png_bytes())?;
            }
        }
        Ok(sessions.len())
    }
}

pub type SharedState = Arc<AppState>;
