//! On-disk cache of derived recursion systems, one JSON file per `(d, b)`.

use std::fs;
use std::path::{Path, PathBuf};

use crate::derive::{RecursionSystem, FORMAT_VERSION};
use crate::error::Result;

/// Environment variable naming the cache directory.
pub const CACHE_DIR_ENV: &str = "SGAO_CACHE_DIR";

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CacheOutcome {
    Hit,
    Miss,
    /// A file existed but had another format version or did not parse.
    Stale,
}

#[derive(Clone, Debug)]
pub struct SystemCache {
    dir: PathBuf,
}

impl SystemCache {
    pub fn new(dir: impl Into<PathBuf>) -> Self {
        Self { dir: dir.into() }
    }

    pub fn from_env() -> Option<Self> {
        std::env::var_os(CACHE_DIR_ENV).filter(|v| !v.is_empty()).map(Self::new)
    }

    pub fn dir(&self) -> &Path {
        &self.dir
    }

    pub fn path(&self, d: u32, b: u32) -> PathBuf {
        self.dir.join(format!("sg_{d}_{b}.json"))
    }

    /// The cached system, if a current one exists.
    pub fn load(&self, d: u32, b: u32) -> Result<(Option<RecursionSystem>, CacheOutcome)> {
        let path = self.path(d, b);
        let text = match fs::read_to_string(&path) {
            Ok(t) => t,
            Err(e) if e.kind() == std::io::ErrorKind::NotFound => return Ok((None, CacheOutcome::Miss)),
            Err(e) => return Err(e.into()),
        };
        let parsed = serde_json::from_str(&text)
            .ok()
            .and_then(|v| RecursionSystem::from_json(&v).ok())
            .filter(|s| s.d == d && s.b == b);
        Ok(match parsed {
            Some(s) => (Some(s), CacheOutcome::Hit),
            None => (None, CacheOutcome::Stale),
        })
    }

    pub fn store(&self, system: &RecursionSystem) -> Result<PathBuf> {
        fs::create_dir_all(&self.dir)?;
        let path = self.path(system.d, system.b);
        let tmp = path.with_extension(format!("json.tmp{}", std::process::id()));
        fs::write(&tmp, serde_json::to_string(&system.to_json())?)?;
        fs::rename(&tmp, &path)?;
        Ok(path)
    }

    /// Loads `(d, b)` or runs `derive` and stores its result.
    pub fn get_or_derive(
        &self,
        d: u32,
        b: u32,
        derive: impl FnOnce() -> Result<RecursionSystem>,
    ) -> Result<(RecursionSystem, CacheOutcome)> {
        let (cached, outcome) = self.load(d, b)?;
        if let Some(system) = cached {
            return Ok((system, outcome));
        }
        let system = derive()?;
        self.store(&system)?;
        Ok((system, outcome))
    }
}

/// Format version written into cache files.
pub fn cache_version() -> u32 {
    FORMAT_VERSION
}
