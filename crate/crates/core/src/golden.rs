//! Pinned exact values, stored as rendered rationals in a small JSON file.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::error::{Result, VoaError};
use crate::scalar::{self, render, ExactScalar};

pub const ENV_VAR: &str = "VOA_GOLDEN_PATH";

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct GoldenFile {
    pub version: u32,
    pub values: BTreeMap<String, String>,
}

impl GoldenFile {
    pub fn get(&self, key: &str) -> Result<Option<ExactScalar>> {
        match self.values.get(key) {
            None => Ok(None),
            Some(s) => scalar::parse(s).map(Some).ok_or_else(|| VoaError::Golden(format!("`{key}` = `{s}` is not a rational"))),
        }
    }

    pub fn set(&mut self, key: &str, v: &ExactScalar) {
        self.values.insert(key.to_string(), render(v));
    }
}

pub fn default_path() -> PathBuf {
    match std::env::var_os(ENV_VAR) {
        Some(p) => PathBuf::from(p),
        None => Path::new(env!("CARGO_MANIFEST_DIR")).join("golden").join("values.json"),
    }
}

/// `Ok(None)` when the file does not exist.
pub fn load(path: &Path) -> Result<Option<GoldenFile>> {
    match std::fs::read_to_string(path) {
        Ok(s) => {
            let g: GoldenFile = serde_json::from_str(&s)?;
            if g.version != 1 {
                return Err(VoaError::Golden(format!("unsupported version {}", g.version)));
            }
            Ok(Some(g))
        }
        Err(e) if e.kind() == std::io::ErrorKind::NotFound => Ok(None),
        Err(e) => Err(e.into()),
    }
}

/// Writes the file, refusing to replace an existing one unless `force`.
pub fn pin(path: &Path, g: &GoldenFile, force: bool) -> Result<()> {
    if path.exists() && !force {
        return Err(VoaError::Golden(format!("{} exists; pass --force to overwrite", path.display())));
    }
    if let Some(dir) = path.parent() {
        std::fs::create_dir_all(dir)?;
    }
    let mut s = serde_json::to_string_pretty(g)?;
    s.push('\n');
    std::fs::write(path, s)?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::frac;

    #[test]
    fn pin_refuses_overwrite() {
        let dir = std::env::temp_dir().join(format!("voa-golden-{}", std::process::id()));
        let p = dir.join("g.json");
        let _ = std::fs::remove_file(&p);
        let mut g = GoldenFile { version: 1, ..Default::default() };
        g.set("x", &frac(-3, 2));
        pin(&p, &g, false).unwrap();
        assert!(matches!(pin(&p, &g, false), Err(VoaError::Golden(_))));
        pin(&p, &g, true).unwrap();
        assert_eq!(load(&p).unwrap().unwrap().get("x").unwrap(), Some(frac(-3, 2)));
        std::fs::remove_dir_all(dir).unwrap();
    }

    #[test]
    fn missing_file_is_none() {
        assert!(load(Path::new("/nonexistent/voa/golden.json")).unwrap().is_none());
    }
}
