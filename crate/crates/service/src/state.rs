use std::path::{Path, PathBuf};
use std::sync::Arc;

use srs_core::format::{load, save};
use srs_core::{ModelError, Project};
use tokio::sync::Mutex;

use crate::error::ApiError;

#[derive(Clone)]
pub struct AppState {
    inner: Arc<Inner>,
}

struct Inner {
    file: PathBuf,
    ui_dir: Option<PathBuf>,
    writer: Mutex<()>,
}

impl AppState {
    pub fn new(file: PathBuf, ui_dir: Option<PathBuf>) -> Self {
        Self {
            inner: Arc::new(Inner {
                file,
                ui_dir,
                writer: Mutex::new(()),
            }),
        }
    }

    pub fn file(&self) -> &Path {
        &self.inner.file
    }

    pub fn ui_dir(&self) -> Option<&Path> {
        self.inner.ui_dir.as_deref()
    }

    /// The latest committed project.
    pub async fn snapshot(&self) -> Result<Project, ApiError> {
        let file = self.inner.file.clone();
        Ok(tokio::task::spawn_blocking(move || load(file))
            .await
            .expect("load task")?)
    }

    /// Applies `op` to the latest committed project and persists the result
    /// before returning it. Calls are serialized by the writer lock, so
    /// concurrent mutations form a linear history.
    pub async fn mutate<F>(&self, op: F) -> Result<Project, ApiError>
    where
        F: FnOnce(&Project) -> Result<Project, ModelError>,
    {
        let _guard = self.inner.writer.lock().await;
        let current = self.snapshot().await?;
        let next = op(&current)?;
        let file = self.inner.file.clone();
        let saved = next.clone();
        tokio::task::spawn_blocking(move || save(&saved, file))
            .await
            .expect("save task")?;
        Ok(next)
    }
}
