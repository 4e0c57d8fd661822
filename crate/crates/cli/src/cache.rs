//! Content-addressed report cache with atomic writes.

use std::io::Write;
use std::path::{Path, PathBuf};

use serde_json::Value;
use sha2::{Digest, Sha256};

pub struct Cache {
    dir: PathBuf,
}

pub fn key(parts: &[&str]) -> String {
    let mut h = Sha256::new();
    for p in parts {
        h.update(p.as_bytes());
        h.update([0]);
    }
    h.update(env!("CARGO_PKG_VERSION").as_bytes());
    hex::encode(h.finalize())
}

impl Cache {
    /// `UNITAL_CACHE` wins over the command-line directory.
    pub fn open(flag: Option<&Path>) -> Option<Cache> {
        let dir = std::env::var_os("UNITAL_CACHE").map(PathBuf::from).or_else(|| flag.map(Path::to_path_buf))?;
        Some(Cache { dir })
    }

    fn path(&self, sub: &str, key: &str) -> PathBuf {
        self.dir.join(sub).join(format!("{key}.json"))
    }

    pub fn get(&self, sub: &str, key: &str) -> Option<Value> {
        let text = std::fs::read_to_string(self.path(sub, key)).ok()?;
        serde_json::from_str(&text).ok()
    }

    pub fn put(&self, sub: &str, key: &str, value: &Value) -> std::io::Result<()> {
        let target = self.path(sub, key);
        let dir = target.parent().expect("cache paths have a parent");
        std::fs::create_dir_all(dir)?;
        let mut tmp = tempfile::NamedTempFile::new_in(dir)?;
        tmp.write_all(serde_json::to_string_pretty(value)?.as_bytes())?;
        tmp.persist(&target).map_err(|e| e.error)?;
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn round_trip() {
        let dir = tempfile::tempdir().unwrap();
        let cache = Cache { dir: dir.path().to_path_buf() };
        let k = key(&["classify", "q=3"]);
        assert_eq!(k.len(), 64);
        assert_ne!(k, key(&["classify", "q=4"]));
        assert!(cache.get("reports", &k).is_none());
        cache.put("reports", &k, &serde_json::json!({"count": 1})).unwrap();
        assert_eq!(cache.get("reports", &k), Some(serde_json::json!({"count": 1})));
    }
}
