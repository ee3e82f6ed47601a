//! Locating recursion systems: built-in, cached, derived on demand, or from a file.

use std::fs;
use std::path::Path;

use anyhow::{bail, Context, Result};
use sgao_core::cache::{CacheOutcome, SystemCache};
use sgao_core::derive::derive_recursion;
use sgao_core::{builtin_system, RecursionSystem};

pub struct Systems {
    cache: Option<SystemCache>,
    /// Permits derivations that take minutes.
    expensive: bool,
}

impl Systems {
    pub fn new(cache: Option<SystemCache>, expensive: bool) -> Self {
        Self { cache, expensive }
    }

    pub fn derive(&self, d: u32, b: u32) -> Result<RecursionSystem> {
        match &self.cache {
            Some(cache) => {
                let (system, outcome) = cache.get_or_derive(d, b, || derive_recursion(d, b))?;
                if outcome == CacheOutcome::Stale {
                    eprintln!("ignored stale cache file {}", cache.path(d, b).display());
                }
                Ok(system)
            }
            None => Ok(derive_recursion(d, b)?),
        }
    }

    /// A system for `(d, b)` if one is available without an expensive derivation.
    /// Derivations for `d = 2` go through the frontier DP and count as cheap.
    pub fn resolve_cheap(&self, d: u32, b: u32) -> Result<Option<RecursionSystem>> {
        if let Ok(s) = builtin_system(d, b) {
            return Ok(Some(s));
        }
        if let Some(cache) = &self.cache {
            if let (Some(s), _) = cache.load(d, b)? {
                return Ok(Some(s));
            }
        }
        if d == 2 || self.expensive {
            return self.derive(d, b).map(Some);
        }
        Ok(None)
    }

    /// `builtin`, `derived`, or a path to a system JSON file.
    pub fn resolve(&self, source: &str, d: u32, b: u32) -> Result<RecursionSystem> {
        let system = match source {
            "builtin" => builtin_system(d, b)?,
            "derived" => self.derive(d, b)?,
            path => load_file(Path::new(path))?,
        };
        if (system.d, system.b) != (d, b) {
            bail!("system is for SG_{{{},{}}}, not SG_{{{d},{b}}}", system.d, system.b);
        }
        Ok(system)
    }
}

pub fn load_file(path: &Path) -> Result<RecursionSystem> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    let value = serde_json::from_str(&text).with_context(|| format!("parsing {}", path.display()))?;
    Ok(RecursionSystem::from_json(&value)?)
}
