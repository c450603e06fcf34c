//! Persistent cache of evaluated integrals.

use crate::rat::{fmt, parse, Q};
use parking_lot::Mutex;
use sha2::{Digest, Sha256};
use std::collections::BTreeMap;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

pub const ENV_VAR: &str = "KDIFF_CACHE_DIR";

/// A key-value store of exact values keyed by canonical strings.
pub trait Store: Send + Sync {
    fn get(&self, key: &str) -> Option<Q>;
    fn put(&self, key: &str, value: &Q);
    fn entries(&self) -> Vec<(String, Q)>;
}

/// One file per key under a directory, named by the hash of the key. Each
/// file holds the key and the value on separate lines.
pub struct FileStore {
    dir: PathBuf,
    lock: Mutex<()>,
}

impl FileStore {
    pub fn open(dir: impl AsRef<Path>) -> std::io::Result<Self> {
        fs::create_dir_all(dir.as_ref())?;
        Ok(FileStore { dir: dir.as_ref().to_path_buf(), lock: Mutex::new(()) })
    }

    /// Opens the directory named by the environment variable, if set.
    pub fn from_env() -> Option<Self> {
        std::env::var_os(ENV_VAR).and_then(|d| Self::open(d).ok())
    }

    pub fn dir(&self) -> &Path {
        &self.dir
    }

    fn path(&self, key: &str) -> PathBuf {
        let digest = Sha256::digest(key.as_bytes());
        let name: String = digest.iter().take(16).map(|b| format!("{b:02x}")).collect();
        self.dir.join(format!("{name}.entry"))
    }

    fn read(path: &Path) -> Option<(String, Q)> {
        let text = fs::read_to_string(path).ok()?;
        let mut lines = text.lines();
        let key = lines.next()?.to_string();
        let value = parse(lines.next()?)?;
        Some((key, value))
    }
}

impl Store for FileStore {
    fn get(&self, key: &str) -> Option<Q> {
        let (k, v) = Self::read(&self.path(key))?;
        (k == key).then_some(v)
    }

    fn put(&self, key: &str, value: &Q) {
        let _guard = self.lock.lock();
        let path = self.path(key);
        let tmp = path.with_extension("tmp");
        let ok = fs::File::create(&tmp)
            .and_then(|mut f| writeln!(f, "{key}\n{}", fmt(value)))
            .and_then(|_| fs::rename(&tmp, &path));
        if ok.is_err() {
            let _ = fs::remove_file(&tmp);
        }
    }

    fn entries(&self) -> Vec<(String, Q)> {
        let mut out = BTreeMap::new();
        if let Ok(dir) = fs::read_dir(&self.dir) {
            for entry in dir.flatten() {
                if entry.path().extension().is_some_and(|e| e == "entry") {
                    if let Some((k, v)) = Self::read(&entry.path()) {
                        out.insert(k, v);
                    }
                }
            }
        }
        out.into_iter().collect()
    }
}
