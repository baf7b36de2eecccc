//! Read-only HTTP view of a run directory plus the decisions endpoint.
//!
//! * `GET /` serves the triage UI entry page (from `--ui`, or a minimal
//!   built-in page when no bundle is given); `GET /ui/*` the rest of the bundle.
//! * `GET/PUT /api/decisions` reads or replaces `<run>/decisions.json`.
//! * Any other `GET` is a file from the run directory (`/manifest.json`,
//!   `/plots/<id>.svg`, ...).

use std::net::SocketAddr;
use std::path::PathBuf;
use std::sync::Arc;

use anyhow::Context;
use axum::body::Bytes;
use axum::extract::State;
use axum::http::{header, StatusCode};
use axum::response::{Html, IntoResponse, Response};
use axum::routing::get;
use axum::{Json, Router};
use chrono::{SecondsFormat, Utc};
use clustergrid_core::{DecisionError, DecisionsFile, RunManifest};
use tokio::sync::Mutex;
use tower_http::services::{ServeDir, ServeFile};

use crate::commands::load_manifest;
use crate::CliError;

const FALLBACK_INDEX: &str = include_str!("index.html");

#[derive(Debug)]
pub struct AppState {
    pub run_dir: PathBuf,
    pub manifest: RunManifest,
    writes: Mutex<()>,
}

impl AppState {
    pub fn new(run_dir: PathBuf, manifest: RunManifest) -> Self {
        Self {
            run_dir,
            manifest,
            writes: Mutex::new(()),
        }
    }
}

pub fn router(state: Arc<AppState>, ui_dir: Option<PathBuf>) -> Router {
    let run_files = ServeDir::new(&state.run_dir);
    let mut app = Router::new().route("/api/decisions", get(get_decisions).put(put_decisions));
    app = match ui_dir {
        Some(ui) => app
            .route_service("/", ServeFile::new(ui.join("index.html")))
            .nest_service("/ui", ServeDir::new(ui)),
        None => app.route("/", get(|| async { Html(FALLBACK_INDEX) })),
    };
    app.fallback_service(run_files).with_state(state)
}

fn error(status: StatusCode, message: impl std::fmt::Display) -> Response {
    (status, Json(serde_json::json!({ "error": message.to_string() }))).into_response()
}

async fn get_decisions(State(state): State<Arc<AppState>>) -> Response {
    let _guard = state.writes.lock().await;
    match DecisionsFile::load(&state.run_dir) {
        Ok(file) => Json(file).into_response(),
        Err(e) => error(StatusCode::INTERNAL_SERVER_ERROR, format!("cannot read decisions: {e}")),
    }
}

/// Replaces the whole decisions document (last writer wins). Malformed
/// bodies get 400, more than one `selected` candidate 409; the file is
/// untouched in both cases.
async fn put_decisions(State(state): State<Arc<AppState>>, body: Bytes) -> Response {
    let Ok(text) = std::str::from_utf8(&body) else {
        return error(StatusCode::BAD_REQUEST, "body is not UTF-8");
    };
    let mut file = match DecisionsFile::parse(text, Some(&state.manifest)) {
        Ok(f) => f,
        Err(e @ DecisionError::MultipleSelected(_)) => return error(StatusCode::CONFLICT, e),
        Err(e @ DecisionError::Malformed(_)) => return error(StatusCode::BAD_REQUEST, e),
    };
    let now = Utc::now().to_rfc3339_opts(SecondsFormat::Secs, true);
    for d in file.decisions.values_mut() {
        d.updated_at.get_or_insert_with(|| now.clone());
    }
    let _guard = state.writes.lock().await;
    match file.save_atomic(&state.run_dir) {
        Ok(()) => (StatusCode::OK, [(header::CACHE_CONTROL, "no-store")], Json(file)).into_response(),
        Err(e) => error(StatusCode::INTERNAL_SERVER_ERROR, format!("cannot write decisions: {e}")),
    }
}

#[derive(Debug, Clone)]
pub struct ServeArgs {
    pub run_dir: PathBuf,
    pub host: String,
    pub port: u16,
    pub ui_dir: Option<PathBuf>,
}

/// Serves until interrupted.
pub fn cmd_serve(args: &ServeArgs) -> Result<(), CliError> {
    let manifest = load_manifest(&args.run_dir)?;
    if let Some(ui) = &args.ui_dir {
        if !ui.join("index.html").is_file() {
            return Err(CliError::input(anyhow::anyhow!("{} has no index.html", ui.display())));
        }
    }
    let addr: SocketAddr = format!("{}:{}", args.host, args.port)
        .parse()
        .with_context(|| format!("invalid listen address {}:{}", args.host, args.port))
        .map_err(CliError::input)?;
    let runtime = tokio::runtime::Runtime::new().map_err(CliError::runtime)?;
    runtime.block_on(async {
        let listener = tokio::net::TcpListener::bind(addr)
            .await
            .with_context(|| format!("cannot listen on {addr}"))
            .map_err(CliError::input)?;
        let state = Arc::new(AppState::new(args.run_dir.clone(), manifest));
        eprintln!("serving {} on http://{}", args.run_dir.display(), listener.local_addr().map_err(CliError::runtime)?);
        axum::serve(listener, router(state, args.ui_dir.clone()))
            .with_graceful_shutdown(async {
                let _ = tokio::signal::ctrl_c().await;
            })
            .await
            .map_err(CliError::runtime)
    })
}
