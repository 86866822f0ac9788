//! On-disk memo for search results, keyed by everything that determines the
//! outcome. Entries are verified on the way back in — a cache can be copied
//! around or hand-edited, so a stored witness is never trusted blindly.

use super::{certify_witness, SearchConfig, SearchResult};
use crate::error::{Error, Result};
use crate::SCHEMA;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};
use std::fs;
use std::path::{Path, PathBuf};

/// Everything [`super::exact_ex_pi`] reads besides thread count. Parallel
/// width is deliberately absent: results are identical across widths.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CacheKey {
    pub n: usize,
    pub s: usize,
    pub q: u64,
    pub weight_floor: u64,
    pub weight_ceiling: Option<u64>,
    pub node_budget: Option<u64>,
    pub time_budget_ms: Option<u64>,
    pub auto_seed: bool,
    pub seeds: Vec<crate::constructions::TuranTemplate>,
}

impl CacheKey {
    pub fn new(n: usize, s: usize, q: u64, cfg: &SearchConfig) -> Self {
        CacheKey {
            n,
            s,
            q,
            weight_floor: cfg.weight_floor,
            weight_ceiling: cfg.weight_ceiling,
            node_budget: cfg.node_budget,
            time_budget_ms: cfg.time_budget.map(|d| d.as_millis() as u64),
            auto_seed: cfg.auto_seed,
            seeds: cfg.seeds.clone(),
        }
    }

    /// Hex SHA-256 of the canonical JSON encoding; doubles as the file stem.
    pub fn digest(&self) -> String {
        let js = serde_json::to_string(self).expect("key serialization");
        let mut h = Sha256::new();
        h.update(js.as_bytes());
        hex::encode(h.finalize())
    }
}

#[derive(Serialize, Deserialize)]
struct Envelope {
    schema: String,
    key: CacheKey,
    result: SearchResult,
}

/// Persist `result` under `dir`, atomically (write-then-rename). Returns the
/// final path.
pub fn search_cache_store(dir: &Path, key: &CacheKey, result: &SearchResult) -> Result<PathBuf> {
    let io = |e: std::io::Error| Error::CacheIo(format!("{}: {e}", dir.display()));
    fs::create_dir_all(dir).map_err(io)?;
    let envelope = Envelope {
        schema: SCHEMA.to_string(),
        key: key.clone(),
        result: result.clone(),
    };
    let body = serde_json::to_string_pretty(&envelope)
        .map_err(|e| Error::CacheIo(format!("encoding cache entry: {e}")))?;
    let digest = key.digest();
    let tmp = dir.join(format!(".tmp-{digest}-{}", std::process::id()));
    let path = dir.join(format!("{digest}.json"));
    fs::write(&tmp, body).map_err(io)?;
    fs::rename(&tmp, &path).map_err(io)?;
    Ok(path)
}

/// Fetch the entry for `key` if present, well-formed, and internally
/// consistent: schema and key must match, and the stored witness must
/// certify against (s, q) and reproduce the stored lower bound. Anything
/// off is logged and treated as a miss.
pub fn search_cache_lookup(dir: &Path, key: &CacheKey) -> Option<SearchResult> {
    let path = dir.join(format!("{}.json", key.digest()));
    let body = fs::read_to_string(&path).ok()?;
    let envelope: Envelope = match serde_json::from_str(&body) {
        Ok(e) => e,
        Err(e) => {
            log::warn!("cache entry {} is unreadable: {e}", path.display());
            return None;
        }
    };
    if envelope.schema != SCHEMA {
        log::warn!(
            "cache entry {} has schema {:?}, want {SCHEMA:?}",
            path.display(),
            envelope.schema
        );
        return None;
    }
    if envelope.key != *key {
        log::warn!("cache entry {} was stored for a different key", path.display());
        return None;
    }
    let r = &envelope.result;
    if r.witness.n() != key.n
        || !certify_witness(&r.witness, key.s, key.q)
        || r.witness.product() != r.lower
        || r.lower > r.upper
    {
        log::warn!(
            "cache entry {} fails verification; ignoring it",
            path.display()
        );
        return None;
    }
    Some(envelope.result)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::search::exact_ex_pi;

    fn small_result() -> (CacheKey, SearchResult) {
        let cfg = SearchConfig::default();
        let r = exact_ex_pi(5, 5, 34, &cfg).unwrap();
        (CacheKey::new(5, 5, 34, &cfg), r)
    }

    #[test]
    fn roundtrip() {
        let dir = tempfile::tempdir().unwrap();
        let (key, result) = small_result();
        assert!(search_cache_lookup(dir.path(), &key).is_none());
        let path = search_cache_store(dir.path(), &key, &result).unwrap();
        assert!(path.ends_with(format!("{}.json", key.digest())));
        assert_eq!(search_cache_lookup(dir.path(), &key), Some(result));
    }

    #[test]
    fn distinct_configs_do_not_collide() {
        let dir = tempfile::tempdir().unwrap();
        let (key, result) = small_result();
        search_cache_store(dir.path(), &key, &result).unwrap();
        let other = CacheKey { q: 35, ..key };
        assert!(search_cache_lookup(dir.path(), &other).is_none());
    }

    #[test]
    fn corrupt_or_inconsistent_entries_miss() {
        let dir = tempfile::tempdir().unwrap();
        let (key, result) = small_result();
        let path = search_cache_store(dir.path(), &key, &result).unwrap();

        let original = fs::read_to_string(&path).unwrap();
        fs::write(&path, "not json").unwrap();
        assert!(search_cache_lookup(dir.path(), &key).is_none());

        // inflate the claimed optimum: the witness no longer reproduces it
        fs::write(&path, original.replace("186624", "186625")).unwrap();
        assert!(search_cache_lookup(dir.path(), &key).is_none());
    }

    #[test]
    fn entry_moved_to_wrong_name_misses() {
        let dir = tempfile::tempdir().unwrap();
        let (key, result) = small_result();
        let path = search_cache_store(dir.path(), &key, &result).unwrap();
        let other = CacheKey { q: 40, ..key.clone() };
        fs::rename(&path, dir.path().join(format!("{}.json", other.digest()))).unwrap();
        assert!(search_cache_lookup(dir.path(), &other).is_none());
        assert!(search_cache_lookup(dir.path(), &key).is_none());
    }
}
