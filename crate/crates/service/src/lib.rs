//! Local HTTP/JSON service giving an editor read/write access to one
//! project file.
//!
//! The file on disk is the single source of truth: every request reloads
//! it, so edits made by the command-line tool between requests are seen.
//! All mutations go through one writer lock (see [`AppState::mutate`]),
//! which is the serialization point: each one reloads, applies the model
//! operation and saves atomically before the lock is released. Readers
//! never take the lock; atomic renames mean they always see some fully
//! committed version.

mod error;
mod routes;
mod state;

use std::future::Future;
use std::net::SocketAddr;
use std::path::PathBuf;

use srs_core::format::LoadError;

pub use error::ApiError;
pub use routes::router;
pub use state::AppState;

pub const DEFAULT_PORT: u16 = 8830;

#[derive(Debug, Clone)]
pub struct ServeConfig {
    pub file: PathBuf,
    pub addr: SocketAddr,
    /// Directory holding the built editor bundle; a small built-in page is
    /// served at `/` when absent.
    pub ui_dir: Option<PathBuf>,
}

#[derive(Debug, thiserror::Error)]
pub enum ServeError {
    #[error(transparent)]
    Load(#[from] LoadError),
    #[error("cannot listen on {addr}: {source}")]
    Bind {
        addr: SocketAddr,
        #[source]
        source: std::io::Error,
    },
    #[error("server failed: {0}")]
    Io(#[from] std::io::Error),
}

/// A bound, not yet running server.
pub struct Server {
    listener: tokio::net::TcpListener,
    state: AppState,
}

impl Server {
    /// Checks that the project loads, then binds. Both failures are
    /// reported before anything is served.
    pub async fn bind(config: ServeConfig) -> Result<Server, ServeError> {
        let file = config.file.clone();
        tokio::task::spawn_blocking(move || srs_core::format::load(&file))
            .await
            .expect("load task")?;
        if !config.addr.ip().is_loopback() {
            tracing::warn!(addr = %config.addr, "binding a non-loopback address; the API has no authentication");
        }
        let listener = tokio::net::TcpListener::bind(config.addr)
            .await
            .map_err(|source| ServeError::Bind {
                addr: config.addr,
                source,
            })?;
        Ok(Server {
            listener,
            state: AppState::new(config.file, config.ui_dir),
        })
    }

    pub fn local_addr(&self) -> SocketAddr {
        self.listener.local_addr().expect("bound listener")
    }

    pub async fn run(self, shutdown: impl Future<Output = ()> + Send + 'static) -> Result<(), ServeError> {
        tracing::info!(addr = %self.local_addr(), file = %self.state.file().display(), "serving");
        axum::serve(self.listener, router(self.state))
            .with_graceful_shutdown(shutdown)
            .await?;
        Ok(())
    }
}

/// Binds and serves until Ctrl-C.
pub async fn serve(config: ServeConfig) -> Result<(), ServeError> {
    let server = Server::bind(config).await?;
    server
        .run(async {
            let _ = tokio::signal::ctrl_c().await;
        })
        .await
}
