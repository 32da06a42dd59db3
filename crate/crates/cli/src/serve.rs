//! Read-only HTTP server for an exported bundle.
//!
//! `GET /bundle` returns the bundle file exactly as written, `GET /` a small
//! explorer page. The bundle is read once at startup.

use std::net::SocketAddr;
use std::path::Path;

use anyhow::{Context, Result};
use axum::http::{header, StatusCode};
use axum::response::{Html, IntoResponse};
use axum::routing::get;
use axum::Router;
use tokio::net::TcpListener;

const INDEX_HTML: &str = include_str!("../assets/index.html");

pub fn router(bundle: Vec<u8>) -> Router {
    Router::new()
        .route("/", get(|| async { Html(INDEX_HTML) }))
        .route(
            "/bundle",
            get(move || {
                let body = bundle.clone();
                async move { ([(header::CONTENT_TYPE, "application/json")], body) }
            }),
        )
        .fallback(|| async { (StatusCode::NOT_FOUND, "not found\n").into_response() })
}

pub fn read_bundle(path: &Path) -> Result<Vec<u8>> {
    let bytes =
        std::fs::read(path).with_context(|| format!("reading bundle {}", path.display()))?;
    serde_json::from_slice::<serde_json::Value>(&bytes)
        .with_context(|| format!("{} is not valid JSON", path.display()))?;
    Ok(bytes)
}

/// Serves on an already bound listener until the task is cancelled.
pub async fn serve_on(listener: TcpListener, bundle: Vec<u8>) -> Result<()> {
    axum::serve(listener, router(bundle)).await?;
    Ok(())
}

pub fn serve(bundle_path: &Path, addr: SocketAddr) -> Result<()> {
    let bundle = read_bundle(bundle_path)?;
    let rt = tokio::runtime::Runtime::new()?;
    rt.block_on(async move {
        let listener = TcpListener::bind(addr)
            .await
            .with_context(|| format!("cannot listen on {addr}"))?;
        log::info!("serving {} on http://{addr}", bundle_path.display());
        serve_on(listener, bundle).await
    })
}
