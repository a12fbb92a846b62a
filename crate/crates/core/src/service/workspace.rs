//! On-disk workspace: one `.cxt` file per context, an optional
//! `.layout.json` sidecar with manual node positions, and one JSON-lines
//! event log per exploration session.
//!
//! Every write reaches the disk (file and directory synced) before the
//! caller returns.

use std::fs::{self, File, OpenOptions};
use std::io::{self, Write};
use std::path::{Path, PathBuf};

use crate::context::FormalContext;
use crate::cxt::{parse_cxt, write_cxt};
use crate::exploration::{event_line, ExplorationEvent, ExplorationSession};
use crate::layout::Pins;

#[derive(Debug, thiserror::Error)]
pub enum WorkspaceError {
    #[error("invalid name {0:?}: use 1-64 characters from A-Z, a-z, 0-9, '-' and '_'")]
    InvalidName(String),
    #[error("stored file {path} is corrupt: {message}")]
    Corrupt { path: PathBuf, message: String },
    #[error(transparent)]
    Io(#[from] io::Error),
}

pub fn is_valid_slug(name: &str) -> bool {
    !name.is_empty()
        && name.len() <= 64
        && name
            .bytes()
            .all(|b| b.is_ascii_alphanumeric() || b == b'-' || b == b'_')
}

#[derive(Debug, Clone)]
pub struct Workspace {
    root: PathBuf,
}

impl Workspace {
    /// Opens the workspace, creating its directories if needed.
    pub fn open(root: impl Into<PathBuf>) -> io::Result<Self> {
        let root = root.into();
        fs::create_dir_all(root.join("contexts"))?;
        fs::create_dir_all(root.join("sessions"))?;
        Ok(Workspace { root })
    }

    pub fn root(&self) -> &Path {
        &self.root
    }

    fn slug<'a>(&self, name: &'a str) -> Result<&'a str, WorkspaceError> {
        if is_valid_slug(name) {
            Ok(name)
        } else {
            Err(WorkspaceError::InvalidName(name.to_owned()))
        }
    }

    pub fn context_path(&self, name: &str) -> Result<PathBuf, WorkspaceError> {
        Ok(self.root.join("contexts").join(format!("{}.cxt", self.slug(name)?)))
    }

    pub fn layout_path(&self, name: &str) -> Result<PathBuf, WorkspaceError> {
        Ok(self
            .root
            .join("contexts")
            .join(format!("{}.layout.json", self.slug(name)?)))
    }

    pub fn session_path(&self, id: &str) -> Result<PathBuf, WorkspaceError> {
        Ok(self.root.join("sessions").join(format!("{}.jsonl", self.slug(id)?)))
    }

    pub fn list_contexts(&self) -> Result<Vec<String>, WorkspaceError> {
        let mut names = Vec::new();
        for entry in fs::read_dir(self.root.join("contexts"))? {
            let file_name = entry?.file_name();
            let file_name = file_name.to_string_lossy();
            if let Some(stem) = file_name.strip_suffix(".cxt") {
                if is_valid_slug(stem) {
                    names.push(stem.to_owned());
                }
            }
        }
        names.sort();
        Ok(names)
    }

    pub fn context_exists(&self, name: &str) -> Result<bool, WorkspaceError> {
        Ok(self.context_path(name)?.exists())
    }

    pub fn load_context(&self, name: &str) -> Result<Option<FormalContext>, WorkspaceError> {
        let path = self.context_path(name)?;
        let bytes = match fs::read(&path) {
            Ok(b) => b,
            Err(e) if e.kind() == io::ErrorKind::NotFound => return Ok(None),
            Err(e) => return Err(e.into()),
        };
        parse_cxt(&bytes).map(Some).map_err(|e| WorkspaceError::Corrupt {
            path,
            message: e.to_string(),
        })
    }

    /// Stores the canonical CXT form. Returns false when the stored bytes
    /// were already identical and nothing was written.
    pub fn save_context(&self, name: &str, ctx: &FormalContext) -> Result<bool, WorkspaceError> {
        let path = self.context_path(name)?;
        let text = write_cxt(ctx);
        if fs::read(&path).ok().as_deref() == Some(text.as_bytes()) {
            return Ok(false);
        }
        write_atomic(&path, text.as_bytes())?;
        Ok(true)
    }

    pub fn delete_context(&self, name: &str) -> Result<bool, WorkspaceError> {
        let path = self.context_path(name)?;
        let layout = self.layout_path(name)?;
        let existed = match fs::remove_file(&path) {
            Ok(()) => true,
            Err(e) if e.kind() == io::ErrorKind::NotFound => false,
            Err(e) => return Err(e.into()),
        };
        let _ = fs::remove_file(layout);
        sync_dir(path.parent().expect("inside workspace"));
        Ok(existed)
    }

    pub fn load_pins(&self, name: &str) -> Result<Pins, WorkspaceError> {
        let path = self.layout_path(name)?;
        match fs::read(&path) {
            Ok(bytes) => serde_json::from_slice(&bytes).map_err(|e| WorkspaceError::Corrupt {
                path,
                message: e.to_string(),
            }),
            Err(e) if e.kind() == io::ErrorKind::NotFound => Ok(Pins::new()),
            Err(e) => Err(e.into()),
        }
    }

    pub fn save_pins(&self, name: &str, pins: &Pins) -> Result<(), WorkspaceError> {
        let path = self.layout_path(name)?;
        let mut text = serde_json::to_string_pretty(pins).expect("pins serialize");
        text.push('\n');
        write_atomic(&path, text.as_bytes())?;
        Ok(())
    }

    /// Picks the next free session id for a context: `<context>-<n>`.
    pub fn new_session_id(&self, context: &str) -> Result<String, WorkspaceError> {
        self.slug(context)?;
        let prefix = format!("{context}-");
        let mut highest = 0u64;
        for entry in fs::read_dir(self.root.join("sessions"))? {
            let file_name = entry?.file_name();
            let file_name = file_name.to_string_lossy();
            if let Some(n) = file_name
                .strip_suffix(".jsonl")
                .and_then(|s| s.strip_prefix(&prefix))
                .and_then(|s| s.parse::<u64>().ok())
            {
                highest = highest.max(n);
            }
        }
        Ok(format!("{prefix}{}", highest + 1))
    }

    /// Appends events to a session log and syncs it.
    pub fn append_events(&self, id: &str, events: &[ExplorationEvent]) -> Result<(), WorkspaceError> {
        let path = self.session_path(id)?;
        let created = !path.exists();
        let mut file = OpenOptions::new().create(true).append(true).open(&path)?;
        for e in events {
            file.write_all(event_line(e).as_bytes())?;
        }
        file.sync_all()?;
        if created {
            sync_dir(path.parent().expect("inside workspace"));
        }
        Ok(())
    }

    pub fn load_session(&self, id: &str) -> Result<Option<ExplorationSession>, WorkspaceError> {
        let path = self.session_path(id)?;
        let text = match fs::read_to_string(&path) {
            Ok(t) => t,
            Err(e) if e.kind() == io::ErrorKind::NotFound => return Ok(None),
            Err(e) => return Err(e.into()),
        };
        ExplorationSession::replay_jsonl(&text)
            .map(Some)
            .map_err(|e| WorkspaceError::Corrupt {
                path,
                message: e.to_string(),
            })
    }
}

/// Writes through a temporary file and renames it into place.
pub fn write_atomic(path: &Path, bytes: &[u8]) -> io::Result<()> {
    let dir = path.parent().unwrap_or(Path::new("."));
    let tmp = dir.join(format!(
        ".{}.tmp",
        path.file_name().map(|n| n.to_string_lossy()).unwrap_or_default()
    ));
    {
        let mut f = File::create(&tmp)?;
        f.write_all(bytes)?;
        f.sync_all()?;
    }
    fs::rename(&tmp, path)?;
    sync_dir(dir);
    Ok(())
}

/// Best effort: some filesystems refuse to fsync a directory.
fn sync_dir(dir: &Path) {
    if let Ok(d) = File::open(dir) {
        let _ = d.sync_all();
    }
}
