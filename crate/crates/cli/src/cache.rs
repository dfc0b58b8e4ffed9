//! On-disk cache of enumerated element stores.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use anyhow::{Context, Result};
use growth_core::presentation::Presentation;
use growth_core::words::ElementStore;
use sha2::{Digest, Sha256};

pub const CACHE_ENV: &str = "GROWTH_CACHE_DIR";

/// Hex digest of the canonical presentation and the horizon.
pub fn key(p: &Presentation, horizon: usize) -> String {
    let mut h = Sha256::new();
    h.update(p.to_canonical_json().as_bytes());
    h.update(b"\n");
    h.update(horizon.to_string().as_bytes());
    hex::encode(h.finalize())
}

pub fn resolve_dir(flag: Option<&Path>) -> Option<PathBuf> {
    flag.map(Path::to_path_buf).or_else(|| std::env::var_os(CACHE_ENV).filter(|v| !v.is_empty()).map(PathBuf::from))
}

/// Loads the store from `dir` or builds it and writes it back.
pub fn load_or_build(dir: Option<&Path>, p: &Presentation, horizon: usize, cap: Option<usize>) -> Result<ElementStore> {
    let build = || -> Result<ElementStore> {
        Ok(match cap {
            Some(c) => ElementStore::build_with_cap(p, horizon, c)?,
            None => ElementStore::build(p, horizon)?,
        })
    };
    let Some(dir) = dir else {
        return build();
    };
    let path = dir.join(format!("{}.store", key(p, horizon)));
    if let Ok(bytes) = fs::read(&path) {
        match ElementStore::from_cache_bytes(&bytes) {
            Ok(s) if s.presentation() == p && s.horizon() == horizon => return Ok(s),
            _ => eprintln!("warning: ignoring unreadable cache entry {}", path.display()),
        }
    }
    let store = build()?;
    write_atomic(&path, &store.to_cache_bytes()).with_context(|| format!("writing cache {}", path.display()))?;
    Ok(store)
}

pub fn write_atomic(path: &Path, bytes: &[u8]) -> Result<()> {
    let dir = path.parent().unwrap_or(Path::new("."));
    fs::create_dir_all(dir)?;
    let tmp = dir.join(format!(".{}.tmp{}", path.file_name().and_then(|n| n.to_str()).unwrap_or("out"), std::process::id()));
    {
        let mut f = fs::File::create(&tmp)?;
        f.write_all(bytes)?;
        f.sync_all()?;
    }
    fs::rename(&tmp, path)?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn round_trip_through_cache() {
        let dir = tempfile::tempdir().unwrap();
        let p = Presentation::catalog("A2").unwrap();
        let cold = load_or_build(Some(dir.path()), &p, 5, None).unwrap();
        let hot = load_or_build(Some(dir.path()), &p, 5, None).unwrap();
        assert_eq!(cold.to_cache_bytes(), hot.to_cache_bytes());
        assert_eq!(fs::read_dir(dir.path()).unwrap().count(), 1);
        assert_ne!(key(&p, 5), key(&p, 6));
    }
}
