use std::fs;
use std::io::Write;
use std::path::Path;

use dashmap::DashMap;
use once_cell::sync::Lazy;

use super::kappa::{kappa_psi_integral, PsiKappaQuery};
use crate::arith::{parse_rational, Rational};
use crate::error::{Error, Result};

/// Concurrent memo of ψ–κ integrals, persistable as `key<TAB>p/q` lines.
#[derive(Debug, Default)]
pub struct IntersectionCache {
    map: DashMap<String, Rational>,
}

static GLOBAL: Lazy<IntersectionCache> = Lazy::new(IntersectionCache::new);

impl IntersectionCache {
    pub fn new() -> Self {
        Self::default()
    }

    /// The process-wide cache used when no other is supplied.
    pub fn global() -> &'static IntersectionCache {
        &GLOBAL
    }

    /// Adds every entry of `other`, keeping existing values.
    pub fn absorb(&self, other: IntersectionCache) {
        for (k, v) in other.map {
            self.map.entry(k).or_insert(v);
        }
    }

    pub fn len(&self) -> usize {
        self.map.len()
    }

    pub fn is_empty(&self) -> bool {
        self.map.is_empty()
    }

    pub fn get(&self, q: &PsiKappaQuery) -> Option<Rational> {
        self.map.get(&q.canonical_key()).map(|v| v.clone())
    }

    pub fn get_or_compute(&self, q: &PsiKappaQuery) -> Result<Rational> {
        let key = q.canonical_key();
        if let Some(v) = self.map.get(&key) {
            return Ok(v.clone());
        }
        let v = kappa_psi_integral(q)?;
        Ok(self.map.entry(key).or_insert(v).clone())
    }

    /// Reads a cache file; a missing file gives an empty cache.
    pub fn load(path: &Path) -> Result<Self> {
        let cache = Self::new();
        let text = match fs::read_to_string(path) {
            Ok(t) => t,
            Err(e) if e.kind() == std::io::ErrorKind::NotFound => return Ok(cache),
            Err(e) => return Err(e.into()),
        };
        for (lineno, line) in text.lines().enumerate() {
            if line.trim().is_empty() {
                continue;
            }
            let (key, value) = line
                .split_once('\t')
                .ok_or_else(|| Error::Io(format!("{}:{}: missing tab", path.display(), lineno + 1)))?;
            let q = PsiKappaQuery::from_key(key)?;
            cache.map.insert(q.canonical_key(), parse_rational(value)?);
        }
        Ok(cache)
    }

    /// Writes every entry, sorted by key, via a temporary file and a rename.
    pub fn save(&self, path: &Path) -> Result<()> {
        let mut entries: Vec<(String, Rational)> =
            self.map.iter().map(|e| (e.key().clone(), e.value().clone())).collect();
        entries.sort();
        let dir = path.parent().filter(|p| !p.as_os_str().is_empty()).unwrap_or(Path::new("."));
        let name = path.file_name().ok_or_else(|| Error::Io("cache path has no file name".into()))?;
        let tmp = dir.join(format!(".{}.{}.tmp", name.to_string_lossy(), std::process::id()));
        {
            let mut f = fs::File::create(&tmp)?;
            for (k, v) in &entries {
                writeln!(f, "{k}\t{v}")?;
            }
            f.sync_all()?;
        }
        fs::rename(&tmp, path)?;
        Ok(())
    }
}
