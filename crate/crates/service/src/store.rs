//! Session persistence: one JSON file per session, replaced by
//! write-to-temp, fsync, rename.

use std::collections::HashMap;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::sync::atomic::{AtomicU64, Ordering};
use std::sync::{Arc, RwLock};

use factbench::io::AnnotationState;
use serde::{Deserialize, Serialize};

use crate::ServiceError;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SessionRecord {
    pub id: String,
    pub created: String,
    pub updated: String,
    /// Sentence ids of the original upload; states may only use these.
    pub sentence_ids: Vec<String>,
    pub state: AnnotationState,
}

struct Slot {
    write: tokio::sync::Mutex<()>,
    current: RwLock<Arc<SessionRecord>>,
}

pub struct SessionStore {
    dir: PathBuf,
    sessions: RwLock<HashMap<String, Arc<Slot>>>,
    tmp_counter: AtomicU64,
}

pub fn now() -> String {
    chrono::Utc::now().to_rfc3339_opts(chrono::SecondsFormat::Millis, true)
}

impl SessionStore {
    /// Opens `dir`, creating it if needed, and reloads every session file.
    /// Leftover temp files from an interrupted write are removed; they never
    /// hold acknowledged state.
    pub fn open(dir: impl Into<PathBuf>) -> Result<Self, ServiceError> {
        let dir = dir.into();
        fs::create_dir_all(&dir).map_err(|e| ServiceError::Io(dir.clone(), e))?;
        let mut sessions = HashMap::new();
        for entry in fs::read_dir(&dir).map_err(|e| ServiceError::Io(dir.clone(), e))? {
            let path = entry.map_err(|e| ServiceError::Io(dir.clone(), e))?.path();
            let name = path.file_name().and_then(|n| n.to_str()).unwrap_or_default();
            if name.ends_with(".tmp") {
                let _ = fs::remove_file(&path);
                continue;
            }
            if !name.ends_with(".json") {
                continue;
            }
            match read_record(&path) {
                Ok(rec) => {
                    sessions.insert(rec.id.clone(), Arc::new(Slot::new(rec)));
                }
                Err(e) => eprintln!("skipping {}: {e}", path.display()),
            }
        }
        Ok(SessionStore {
            dir,
            sessions: RwLock::new(sessions),
            tmp_counter: AtomicU64::new(0),
        })
    }

    pub fn dir(&self) -> &Path {
        &self.dir
    }

    pub fn len(&self) -> usize {
        self.sessions.read().unwrap().len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    fn slot(&self, id: &str) -> Option<Arc<Slot>> {
        self.sessions.read().unwrap().get(id).cloned()
    }

    /// Consistent snapshot of a session.
    pub fn get(&self, id: &str) -> Option<Arc<SessionRecord>> {
        self.slot(id).map(|s| s.current.read().unwrap().clone())
    }

    pub async fn create(&self, state: AnnotationState) -> Result<Arc<SessionRecord>, ServiceError> {
        let ts = now();
        let rec = SessionRecord {
            id: uuid::Uuid::new_v4().simple().to_string(),
            created: ts.clone(),
            updated: ts,
            sentence_ids: state.sentences.iter().map(|s| s.id.clone()).collect(),
            state,
        };
        self.persist(&rec).await?;
        let rec = Arc::new(rec);
        let slot = Arc::new(Slot::new((*rec).clone()));
        self.sessions.write().unwrap().insert(rec.id.clone(), slot);
        Ok(rec)
    }

    /// Replaces a session's state once it is durably on disk. Writes to one
    /// session are serialized; readers keep their old snapshot until the
    /// swap. Returns `None` for an unknown session.
    pub async fn replace_state(
        &self,
        id: &str,
        state: AnnotationState,
    ) -> Result<Option<Arc<SessionRecord>>, ServiceError> {
        let Some(slot) = self.slot(id) else {
            return Ok(None);
        };
        let _guard = slot.write.lock().await;
        let old = slot.current.read().unwrap().clone();
        let rec = SessionRecord {
            updated: now(),
            state,
            ..(*old).clone()
        };
        self.persist(&rec).await?;
        let rec = Arc::new(rec);
        *slot.current.write().unwrap() = rec.clone();
        Ok(Some(rec))
    }

    async fn persist(&self, rec: &SessionRecord) -> Result<(), ServiceError> {
        let n = self.tmp_counter.fetch_add(1, Ordering::Relaxed);
        let path = self.dir.join(format!("{}.json", rec.id));
        let tmp = self.dir.join(format!("{}.{n}.tmp", rec.id));
        let mut bytes = serde_json::to_vec_pretty(rec).expect("record serializes");
        bytes.push(b'\n');
        let dir = self.dir.clone();
        tokio::task::spawn_blocking(move || write_atomic(&dir, &tmp, &path, &bytes))
            .await
            .expect("persist task does not panic")
    }
}

impl Slot {
    fn new(rec: SessionRecord) -> Self {
        Slot {
            write: tokio::sync::Mutex::new(()),
            current: RwLock::new(Arc::new(rec)),
        }
    }
}

fn write_atomic(dir: &Path, tmp: &Path, path: &Path, bytes: &[u8]) -> Result<(), ServiceError> {
    let io = |p: &Path| {
        let p = p.to_path_buf();
        move |e| ServiceError::Io(p, e)
    };
    let mut f = fs::File::create(tmp).map_err(io(tmp))?;
    f.write_all(bytes).map_err(io(tmp))?;
    f.sync_all().map_err(io(tmp))?;
    drop(f);
    fs::rename(tmp, path).map_err(io(path))?;
    // make the rename itself durable
    if let Ok(d) = fs::File::open(dir) {
        let _ = d.sync_all();
    }
    Ok(())
}

fn read_record(path: &Path) -> Result<SessionRecord, String> {
    let bytes = fs::read(path).map_err(|e| e.to_string())?;
    let rec: SessionRecord = serde_json::from_slice(&bytes).map_err(|e| e.to_string())?;
    rec.state.validate().map_err(|e| e.to_string())?;
    Ok(rec)
}
