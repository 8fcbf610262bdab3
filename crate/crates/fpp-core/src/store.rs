//! Content-addressed result cache: JSON payloads keyed by SHA-256 of the
//! inputs, tagged with the engine version so stale results are recomputed
//! rather than reused.

use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};
use std::io;
use std::path::{Path, PathBuf};

pub const ENGINE_VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Debug, Clone)]
pub struct ResultStore {
    root: PathBuf,
    version: String,
}

#[derive(Serialize, Deserialize)]
struct Envelope<T> {
    version: String,
    payload: T,
}

impl ResultStore {
    pub fn open(root: impl AsRef<Path>) -> io::Result<ResultStore> {
        let root = root.as_ref().to_path_buf();
        std::fs::create_dir_all(&root)?;
        Ok(ResultStore { root, version: ENGINE_VERSION.to_string() })
    }

    #[cfg(test)]
    fn with_version(root: impl AsRef<Path>, version: &str) -> io::Result<ResultStore> {
        let mut s = ResultStore::open(root)?;
        s.version = version.to_string();
        Ok(s)
    }

    /// Stable key for a computation: hash of its distinguishing inputs.
    pub fn key(parts: &[&str]) -> String {
        let mut h = Sha256::new();
        for p in parts {
            h.update((p.len() as u64).to_le_bytes());
            h.update(p.as_bytes());
        }
        format!("{:x}", h.finalize())
    }

    fn path_for(&self, key: &str) -> PathBuf {
        self.root.join(format!("{key}.json"))
    }

    /// None on miss, parse failure, or engine-version mismatch.
    pub fn get<T: DeserializeOwned>(&self, key: &str) -> Option<T> {
        let text = std::fs::read_to_string(self.path_for(key)).ok()?;
        let env: Envelope<T> = serde_json::from_str(&text).ok()?;
        (env.version == self.version).then_some(env.payload)
    }

    /// Atomic write: temp file in the same directory, then rename.
    pub fn put<T: Serialize>(&self, key: &str, value: &T) -> io::Result<()> {
        let env = Envelope { version: self.version.clone(), payload: value };
        let text = serde_json::to_string(&env)?;
        let tmp = self.root.join(format!(".{key}.{}.tmp", std::process::id()));
        std::fs::write(&tmp, text)?;
        std::fs::rename(&tmp, self.path_for(key))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn round_trip_and_version_invalidation() {
        let dir = tempfile::tempdir().unwrap();
        let store = ResultStore::open(dir.path()).unwrap();
        let key = ResultStore::key(&["census", "< a | a^2 >", "S3"]);
        assert_eq!(store.get::<Vec<u64>>(&key), None);
        store.put(&key, &vec![1u64, 2, 3]).unwrap();
        assert_eq!(store.get::<Vec<u64>>(&key), Some(vec![1, 2, 3]));
        // a different engine version must not see the entry
        let other = ResultStore::with_version(dir.path(), "unreleased").unwrap();
        assert_eq!(other.get::<Vec<u64>>(&key), None);
    }

    #[test]
    fn keys_depend_on_every_part() {
        let a = ResultStore::key(&["x", "y"]);
        let b = ResultStore::key(&["xy"]);
        let c = ResultStore::key(&["x", "z"]);
        assert_ne!(a, b);
        assert_ne!(a, c);
    }

    #[test]
    fn malformed_entries_are_misses() {
        let dir = tempfile::tempdir().unwrap();
        let store = ResultStore::open(dir.path()).unwrap();
        let key = ResultStore::key(&["k"]);
        std::fs::write(dir.path().join(format!("{key}.json")), "not json").unwrap();
        assert_eq!(store.get::<u32>(&key), None);
    }
}
