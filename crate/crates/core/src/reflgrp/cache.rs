//! On-disk cache of character tables, keyed by a fingerprint of the group
//! (canonical name and generator matrices). Files carry a format version,
//! the fingerprint and a SHA-256 checksum of the payload; any mismatch
//! triggers recomputation.

use std::path::{Path, PathBuf};
use std::str::FromStr;

use num_rational::BigRational;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use super::chars::{character_table, CharTable};
use super::group::ReflGroup;
use crate::error::{Error, Result};
use crate::exactnum::CycNum;

pub const CACHE_VERSION: u32 = 1;
pub const CACHE_ENV: &str = "SPETS_CACHE_DIR";

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum CacheStatus {
    Disabled,
    Hit,
    Miss,
    /// The file failed validation and was rewritten.
    Recomputed,
}

#[derive(Serialize, Deserialize)]
struct Payload {
    group: String,
    class_reps: Vec<usize>,
    class_sizes: Vec<usize>,
    labels: Vec<String>,
    degrees: Vec<usize>,
    /// (conductor, power-basis coefficients) per entry.
    values: Vec<Vec<(u32, Vec<String>)>>,
}

#[derive(Serialize, Deserialize)]
struct CacheFile {
    version: u32,
    fingerprint: String,
    checksum: String,
    payload: String,
}

fn hex(bytes: &[u8]) -> String {
    bytes.iter().map(|b| format!("{:02x}", b)).collect()
}

fn sha(s: &str) -> String {
    hex(&Sha256::digest(s.as_bytes()))
}

/// SHA-256 of the canonical name and the generator matrices.
pub fn fingerprint(w: &ReflGroup) -> String {
    let mut s = format!("v{}|{}", CACHE_VERSION, w.spec.canonical_name());
    for g in &w.gens {
        s.push('|');
        for x in &g.data {
            s.push_str(&format!("{}:{:?};", x.conductor(), x.coeffs().iter().map(|c| c.to_string()).collect::<Vec<_>>()));
        }
    }
    sha(&s)
}

fn encode(t: &CharTable) -> Payload {
    Payload {
        group: t.group.clone(),
        class_reps: t.class_reps.clone(),
        class_sizes: t.class_sizes.clone(),
        labels: t.labels.iter().map(|l| l.to_string()).collect(),
        degrees: t.degrees.clone(),
        values: t
            .values
            .iter()
            .map(|row| row.iter().map(|x| (x.conductor(), x.coeffs().iter().map(|c| c.to_string()).collect())).collect())
            .collect(),
    }
}

fn decode(p: Payload, w: &ReflGroup) -> Result<CharTable> {
    let (ty, _) = w.full_hecke_type()?;
    let labels = ty.irreps();
    if labels.iter().map(|l| l.to_string()).collect::<Vec<_>>() != p.labels {
        return Err(Error::Cache("labels differ from the Hecke type".into()));
    }
    let mut values = Vec::with_capacity(p.values.len());
    for row in p.values {
        let mut out = Vec::with_capacity(row.len());
        for (m, cs) in row {
            let c = cs
                .iter()
                .map(|s| BigRational::from_str(s).map_err(|_| Error::Cache(format!("bad rational '{}'", s))))
                .collect::<Result<Vec<_>>>()?;
            out.push(CycNum::from_parts(m, c).map_err(|e| Error::Cache(e.to_string()))?);
        }
        values.push(out);
    }
    let t = CharTable { group: p.group, class_reps: p.class_reps, class_sizes: p.class_sizes, labels, degrees: p.degrees, values };
    t.validate(w.order()).map_err(|e| Error::Cache(e.to_string()))?;
    Ok(t)
}

#[derive(Clone, Debug)]
pub struct CharTableCache {
    pub dir: PathBuf,
}

impl CharTableCache {
    pub fn new(dir: impl Into<PathBuf>) -> Self {
        CharTableCache { dir: dir.into() }
    }

    /// The directory named by SPETS_CACHE_DIR, if set.
    pub fn from_env() -> Option<Self> {
        std::env::var_os(CACHE_ENV).filter(|s| !s.is_empty()).map(Self::new)
    }

    pub fn path(&self, w: &ReflGroup) -> PathBuf {
        self.dir.join(format!("chartable-{}.json", &fingerprint(w)[..16]))
    }

    fn read(&self, path: &Path, w: &ReflGroup) -> Result<CharTable> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::Cache(e.to_string()))?;
        let file: CacheFile = serde_json::from_str(&text).map_err(|e| Error::Cache(e.to_string()))?;
        if file.version != CACHE_VERSION {
            return Err(Error::Cache(format!("version {}", file.version)));
        }
        if file.fingerprint != fingerprint(w) {
            return Err(Error::Cache("fingerprint mismatch".into()));
        }
        if sha(&file.payload) != file.checksum {
            return Err(Error::Cache("checksum mismatch".into()));
        }
        let payload: Payload = serde_json::from_str(&file.payload).map_err(|e| Error::Cache(e.to_string()))?;
        decode(payload, w)
    }

    fn write(&self, path: &Path, w: &ReflGroup, t: &CharTable) -> Result<()> {
        std::fs::create_dir_all(&self.dir).map_err(|e| Error::Cache(e.to_string()))?;
        let payload = serde_json::to_string(&encode(t)).map_err(|e| Error::Cache(e.to_string()))?;
        let file = CacheFile { version: CACHE_VERSION, fingerprint: fingerprint(w), checksum: sha(&payload), payload };
        let text = serde_json::to_string_pretty(&file).map_err(|e| Error::Cache(e.to_string()))?;
        let tmp = path.with_extension("tmp");
        std::fs::write(&tmp, text).map_err(|e| Error::Cache(e.to_string()))?;
        std::fs::rename(&tmp, path).map_err(|e| Error::Cache(e.to_string()))
    }

    /// Load the table, computing and storing it on a miss or a bad file.
    pub fn load(&self, w: &ReflGroup) -> Result<(CharTable, CacheStatus)> {
        let path = self.path(w);
        let status = if path.exists() {
            match self.read(&path, w) {
                Ok(t) => return Ok((t, CacheStatus::Hit)),
                Err(_) => CacheStatus::Recomputed,
            }
        } else {
            CacheStatus::Miss
        };
        let t = character_table(w)?;
        self.write(&path, w, &t)?;
        Ok((t, status))
    }
}

/// Character table through the cache when one is configured.
pub fn cached_character_table(w: &ReflGroup, cache: Option<&CharTableCache>) -> Result<(CharTable, CacheStatus)> {
    match cache {
        Some(c) => c.load(w),
        None => Ok((character_table(w)?, CacheStatus::Disabled)),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::reflgrp::GroupSpec;

    fn same(a: &CharTable, b: &CharTable) -> bool {
        a.values == b.values && a.labels == b.labels && a.class_reps == b.class_reps && a.degrees == b.degrees
    }

    #[test]
    fn round_trip_and_corruption() {
        let dir = tempfile::tempdir().unwrap();
        let cache = CharTableCache::new(dir.path());
        let w = ReflGroup::build(&GroupSpec::parse("G(3,1,2)").unwrap()).unwrap();
        let (t1, s1) = cache.load(&w).unwrap();
        assert_eq!(s1, CacheStatus::Miss);
        let (t2, s2) = cache.load(&w).unwrap();
        assert_eq!(s2, CacheStatus::Hit);
        assert!(same(&t1, &t2));
        assert!(same(&t2, &character_table(&w).unwrap()));
        // Flip a digit inside the payload: the checksum catches it.
        let path = cache.path(&w);
        let text = std::fs::read_to_string(&path).unwrap();
        let pos = text.find("\\\"1\\\"").expect("a coefficient 1");
        let bad = format!("{}\\\"2\\\"{}", &text[..pos], &text[pos + 5..]);
        std::fs::write(&path, bad).unwrap();
        let (t3, s3) = cache.load(&w).unwrap();
        assert_eq!(s3, CacheStatus::Recomputed);
        assert!(same(&t1, &t3));
        assert_eq!(cache.load(&w).unwrap().1, CacheStatus::Hit);
    }

    #[test]
    fn fingerprints_differ() {
        let a = ReflGroup::build(&GroupSpec::parse("A2").unwrap()).unwrap();
        let b = ReflGroup::build(&GroupSpec::parse("Sym(3)").unwrap()).unwrap();
        assert_ne!(fingerprint(&a), fingerprint(&b));
    }
}
