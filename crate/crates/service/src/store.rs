//! One JSON file per session in a state directory. Writes go to a temp file in
//! the same directory and are renamed over the old file, so a reader (or a
//! restarted process) only ever sees a complete snapshot.

use std::collections::HashMap;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::sync::{Arc, Mutex};
use std::time::{SystemTime, UNIX_EPOCH};

use ahp_core::ModelDocument;
use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Session {
    pub id: String,
    pub revision: u64,
    /// Seconds since the Unix epoch.
    pub created_at: u64,
    pub modified_at: u64,
    pub model: ModelDocument,
}

#[derive(Debug, Error)]
pub enum StoreError {
    #[error("session {0:?} not found")]
    NotFound(String),
    #[error("revision conflict: expected {expected}, current {current}")]
    Conflict { expected: u64, current: u64 },
    #[error("session file {path} is corrupt: {message}")]
    Corrupt { path: PathBuf, message: String },
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub struct SessionStore {
    dir: PathBuf,
    locks: Mutex<HashMap<String, Arc<Mutex<()>>>>,
}

fn now() -> u64 {
    SystemTime::now()
        .duration_since(UNIX_EPOCH)
        .map(|d| d.as_secs())
        .unwrap_or(0)
}

/// Session ids are generated here, so anything else cannot name a file.
fn valid_id(id: &str) -> bool {
    !id.is_empty() && id.len() <= 64 && id.bytes().all(|b| b.is_ascii_hexdigit() || b == b'-')
}

impl SessionStore {
    pub fn open(dir: impl Into<PathBuf>) -> Result<Self, StoreError> {
        let dir = dir.into();
        std::fs::create_dir_all(&dir)?;
        Ok(SessionStore {
            dir,
            locks: Mutex::new(HashMap::new()),
        })
    }

    pub fn dir(&self) -> &Path {
        &self.dir
    }

    fn path(&self, id: &str) -> PathBuf {
        self.dir.join(format!("{id}.session.json"))
    }

    fn lock_for(&self, id: &str) -> Arc<Mutex<()>> {
        let mut locks = self.locks.lock().unwrap_or_else(|e| e.into_inner());
        locks.entry(id.to_string()).or_default().clone()
    }

    fn write(&self, session: &Session) -> Result<(), StoreError> {
        let mut bytes = serde_json::to_vec_pretty(session).map_err(std::io::Error::other)?;
        bytes.push(b'\n');
        let mut tmp = tempfile::NamedTempFile::new_in(&self.dir)?;
        tmp.write_all(&bytes)?;
        tmp.as_file().sync_all()?;
        tmp.persist(self.path(&session.id)).map_err(|e| e.error)?;
        Ok(())
    }

    pub fn create(&self, model: ModelDocument) -> Result<Session, StoreError> {
        let t = now();
        let session = Session {
            id: uuid::Uuid::new_v4().simple().to_string(),
            revision: 1,
            created_at: t,
            modified_at: t,
            model,
        };
        self.write(&session)?;
        Ok(session)
    }

    /// Reads the last committed snapshot; never blocks on writers.
    pub fn get(&self, id: &str) -> Result<Session, StoreError> {
        if !valid_id(id) {
            return Err(StoreError::NotFound(id.to_string()));
        }
        let path = self.path(id);
        let bytes = match std::fs::read(&path) {
            Ok(b) => b,
            Err(e) if e.kind() == std::io::ErrorKind::NotFound => {
                return Err(StoreError::NotFound(id.to_string()))
            }
            Err(e) => return Err(e.into()),
        };
        serde_json::from_slice(&bytes).map_err(|e| StoreError::Corrupt {
            path,
            message: e.to_string(),
        })
    }

    /// Applies `f` to the session's model under the session lock. The change
    /// is committed, with the revision bumped by one, only when `f` succeeds.
    pub fn update<T, E>(
        &self,
        id: &str,
        expected_revision: u64,
        f: impl FnOnce(&mut ModelDocument) -> Result<T, E>,
    ) -> Result<Result<(Session, T), E>, StoreError> {
        let lock = self.lock_for(id);
        let _guard = lock.lock().unwrap_or_else(|e| e.into_inner());
        let mut session = self.get(id)?;
        if session.revision != expected_revision {
            return Err(StoreError::Conflict {
                expected: expected_revision,
                current: session.revision,
            });
        }
        let out = match f(&mut session.model) {
            Ok(out) => out,
            Err(e) => return Ok(Err(e)),
        };
        session.revision += 1;
        session.modified_at = now();
        self.write(&session)?;
        Ok(Ok((session, out)))
    }
}
