use std::path::PathBuf;
use std::sync::Arc;

use actfloor_server::{router, AppState};
use anyhow::anyhow;

use crate::run::{input, pipeline, CliResult};
use crate::Common;

#[derive(Debug, clap::Args)]
pub struct Args {
    /// `host:port`; overrides the config.
    #[arg(long)]
    bind: Option<String>,
    /// Dataset directory; overrides the config.
    #[arg(long)]
    dataset: Option<PathBuf>,
}

pub fn run(common: Common, args: Args) -> CliResult<()> {
    let mut config = common.config;
    config.seed = common.seed;
    if let Some(b) = args.bind {
        config.bind = b;
    }
    if let Some(d) = args.dataset {
        config.dataset = Some(d);
    }
    let state = Arc::new(AppState::load(config).map_err(input)?);
    let runtime = tokio::runtime::Builder::new_multi_thread()
        .enable_all()
        .build()
        .map_err(pipeline)?;
    runtime.block_on(async move {
        let listener = tokio::net::TcpListener::bind(&state.config.bind)
            .await
            .map_err(|e| input(anyhow!("{}: {e}", state.config.bind)))?;
        log::info!("listening on {}", state.config.bind);
        axum::serve(listener, router(state.clone()))
            .with_graceful_shutdown(async {
                let _ = tokio::signal::ctrl_c().await;
            })
            .await
            .map_err(pipeline)?;
        if let Some(dir) = &state.config.snapshot_dir {
            let n = state.snapshot(dir).await.map_err(pipeline)?;
            log::info!("wrote {n} sessions to {}", dir.display());
        }
        Ok(())
    })
}
