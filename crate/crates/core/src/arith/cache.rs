//! Append-only factorization cache.
//!
//! On disk the cache is a two-column CSV, `n,factors`, where `factors` is a
//! space separated list `p1^e1 p2^e2 ...` (empty for `n = 1`). Rows are only
//! ever appended; a row that fails to recompose to its `n` aborts loading.

use std::collections::HashMap;
use std::fs::{File, OpenOptions};
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};
use std::sync::{Mutex, RwLock};

use crate::arith::prime::{factorize, Factorization};
use crate::error::{Error, Result};

#[derive(Default)]
pub struct FactorCache {
    entries: RwLock<HashMap<u128, Factorization>>,
    sink: Option<Mutex<BufWriter<File>>>,
    path: Option<PathBuf>,
}

impl std::fmt::Debug for FactorCache {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("FactorCache")
            .field("entries", &self.len())
            .field("path", &self.path)
            .finish()
    }
}

fn parse_factors(n: u128, text: &str) -> Result<Factorization> {
    let mut factors = Vec::new();
    for tok in text.split_whitespace() {
        let (p, e) = tok
            .split_once('^')
            .ok_or_else(|| Error::Cache(format!("bad factor token {tok:?}")))?;
        let p: u128 = p.parse().map_err(|_| Error::Cache(format!("bad prime {p:?}")))?;
        let e: u32 = e.parse().map_err(|_| Error::Cache(format!("bad exponent {e:?}")))?;
        factors.push((p, e));
    }
    let f = Factorization { target: n, factors };
    if !f.is_valid() {
        return Err(Error::Cache(format!("row for {n} does not recompose")));
    }
    Ok(f)
}

impl FactorCache {
    pub fn in_memory() -> Self {
        Self::default()
    }

    /// Opens (creating if needed) a CSV-backed cache.
    pub fn open(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref().to_path_buf();
        let mut entries = HashMap::new();
        if path.exists() {
            let mut rdr = csv::ReaderBuilder::new()
                .has_headers(false)
                .from_path(&path)
                .map_err(|e| Error::Cache(e.to_string()))?;
            for row in rdr.records() {
                let row = row.map_err(|e| Error::Cache(e.to_string()))?;
                let n: u128 = row
                    .get(0)
                    .and_then(|s| s.trim().parse().ok())
                    .ok_or_else(|| Error::Cache(format!("bad row {row:?}")))?;
                let f = parse_factors(n, row.get(1).unwrap_or(""))?;
                entries.insert(n, f);
            }
        }
        let file = OpenOptions::new()
            .create(true)
            .append(true)
            .open(&path)
            .map_err(|e| Error::Cache(format!("{}: {e}", path.display())))?;
        Ok(FactorCache {
            entries: RwLock::new(entries),
            sink: Some(Mutex::new(BufWriter::new(file))),
            path: Some(path),
        })
    }

    pub fn len(&self) -> usize {
        self.entries.read().expect("cache lock").len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn factorize(&self, n: u128) -> Factorization {
        if let Some(f) = self.entries.read().expect("cache lock").get(&n) {
            return f.clone();
        }
        let f = factorize(n);
        let mut map = self.entries.write().expect("cache lock");
        if !map.contains_key(&n) {
            map.insert(n, f.clone());
            if let Some(sink) = &self.sink {
                let mut w = sink.lock().expect("cache sink lock");
                // a failed append only loses memoization, never correctness
                let _ = writeln!(w, "{},{}", n, f);
            }
        }
        f
    }

    pub fn flush(&self) -> Result<()> {
        if let Some(sink) = &self.sink {
            sink.lock()
                .expect("cache sink lock")
                .flush()
                .map_err(|e| Error::Cache(e.to_string()))?;
        }
        Ok(())
    }
}

impl Drop for FactorCache {
    fn drop(&mut self) {
        let _ = self.flush();
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn persists_and_reloads() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("cache.csv");
        {
            let cache = FactorCache::open(&path).unwrap();
            assert_eq!(cache.factorize(9998).factors, vec![(2, 1), (4999, 1)]);
            cache.factorize(1);
            cache.factorize(9998);
        }
        let text = std::fs::read_to_string(&path).unwrap();
        assert_eq!(text.lines().count(), 2);
        assert!(text.contains("9998,2^1 4999^1"));
        let cache = FactorCache::open(&path).unwrap();
        assert_eq!(cache.len(), 2);
        assert!(cache.factorize(1).factors.is_empty());
    }

    #[test]
    fn corrupted_rows_are_rejected() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("cache.csv");
        std::fs::write(&path, "10,2^1 7^1\n").unwrap();
        assert!(matches!(FactorCache::open(&path), Err(Error::Cache(_))));
    }

    #[test]
    fn concurrent_inserts_behave_as_a_function() {
        use rayon::prelude::*;
        let cache = FactorCache::in_memory();
        let a: Vec<_> = (1..2000u128).into_par_iter().map(|n| cache.factorize(n)).collect();
        let b: Vec<_> = (1..2000u128).map(factorize).collect();
        assert_eq!(a, b);
        assert_eq!(cache.len(), 1999);
    }
}
