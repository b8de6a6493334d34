//! On-disk result cache: one JSON file per job key, named by the key's SHA-256 and
//! carrying a checksum of its payload. Entries with another schema version, another
//! key or a bad checksum are treated as misses and overwritten.

use std::fs;
use std::path::PathBuf;

use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

pub const SCHEMA_VERSION: u32 = 1;

fn sha256_hex(s: &str) -> String {
    Sha256::digest(s.as_bytes()).iter().map(|b| format!("{b:02x}")).collect()
}

#[derive(Serialize, Deserialize)]
struct Entry {
    schema: u32,
    key: String,
    checksum: String,
    payload: String,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct Stats {
    pub hits: usize,
    pub misses: usize,
    pub corrupt: usize,
}

pub struct Cache {
    dir: Option<PathBuf>,
}

pub enum Lookup<T> {
    Hit(T),
    Miss,
    Corrupt,
}

impl Cache {
    pub fn new(dir: Option<PathBuf>) -> std::io::Result<Self> {
        if let Some(d) = &dir {
            fs::create_dir_all(d)?;
        }
        Ok(Cache { dir })
    }

    fn path(&self, key: &str) -> Option<PathBuf> {
        self.dir.as_ref().map(|d| d.join(format!("{}.json", sha256_hex(key))))
    }

    pub fn get<T: DeserializeOwned>(&self, key: &str) -> Lookup<T> {
        let Some(path) = self.path(key) else { return Lookup::Miss };
        let Ok(text) = fs::read_to_string(&path) else { return Lookup::Miss };
        let Ok(entry) = serde_json::from_str::<Entry>(&text) else { return Lookup::Corrupt };
        if entry.schema != SCHEMA_VERSION || entry.key != key {
            return Lookup::Miss;
        }
        if sha256_hex(&entry.payload) != entry.checksum {
            return Lookup::Corrupt;
        }
        match serde_json::from_str(&entry.payload) {
            Ok(v) => Lookup::Hit(v),
            Err(_) => Lookup::Corrupt,
        }
    }

    pub fn put<T: Serialize>(&self, key: &str, value: &T) -> std::io::Result<()> {
        let Some(path) = self.path(key) else { return Ok(()) };
        let payload = serde_json::to_string(value).map_err(std::io::Error::other)?;
        let entry = Entry { schema: SCHEMA_VERSION, key: key.to_string(), checksum: sha256_hex(&payload), payload };
        let tmp = path.with_extension("tmp");
        fs::write(&tmp, serde_json::to_string(&entry).map_err(std::io::Error::other)?)?;
        fs::rename(tmp, path)
    }

    /// Cached value for `key`, computing and storing it on a miss.
    pub fn fetch<T, F>(&self, key: &str, stats: &mut Stats, compute: F) -> std::io::Result<T>
    where
        T: Serialize + DeserializeOwned,
        F: FnOnce() -> T,
    {
        match self.get(key) {
            Lookup::Hit(v) => {
                stats.hits += 1;
                return Ok(v);
            }
            Lookup::Miss => stats.misses += 1,
            Lookup::Corrupt => {
                eprintln!("warning: corrupt cache entry for {key}, recomputing");
                stats.corrupt += 1;
            }
        }
        let v = compute();
        self.put(key, &v)?;
        Ok(v)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn scratch(name: &str) -> PathBuf {
        let d = std::env::temp_dir().join(format!("cyclo-cache-{name}-{}", std::process::id()));
        let _ = fs::remove_dir_all(&d);
        d
    }

    #[test]
    fn round_trip_and_corruption() {
        let dir = scratch("rt");
        let c = Cache::new(Some(dir.clone())).unwrap();
        let mut st = Stats::default();
        assert_eq!(c.fetch("k", &mut st, || vec![1, 2, 3]).unwrap(), vec![1, 2, 3]);
        assert_eq!(c.fetch("k", &mut st, || vec![9]).unwrap(), vec![1, 2, 3]);
        assert_eq!(st, Stats { hits: 1, misses: 1, corrupt: 0 });

        let path = c.path("k").unwrap();
        let text = fs::read_to_string(&path).unwrap().replace("[1,2,3]", "[1,2,4]");
        fs::write(&path, text).unwrap();
        assert_eq!(c.fetch("k", &mut st, || vec![1, 2, 3]).unwrap(), vec![1, 2, 3]);
        assert_eq!(st.corrupt, 1);
        assert!(matches!(c.get::<Vec<i32>>("k"), Lookup::Hit(_)));
        fs::remove_dir_all(dir).unwrap();
    }

    #[test]
    fn disabled_cache_always_computes() {
        let c = Cache::new(None).unwrap();
        let mut st = Stats::default();
        assert_eq!(c.fetch("k", &mut st, || 5).unwrap(), 5);
        assert_eq!(c.fetch("k", &mut st, || 6).unwrap(), 6);
        assert_eq!(st.misses, 2);
    }
}
