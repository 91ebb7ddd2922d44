//! Plain-text cache of local factors, one line per prime ideal and character:
//!
//! ```text
//! # curve {"m":3,"f":["-z - 2","0","z","1","1"]}
//! 7 1 2 1 : 1 | -1 - 3*z | 2 + 5*z | -7 - 21*z
//! ```
//!
//! The fields before the colon are `p`, the residue degree `f`, the image of
//! `ζ` in the residue field (`t` for degree two) and `k`.

use std::collections::BTreeMap;
use std::fs::OpenOptions;
use std::io::Write;
use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};
use piecel_core::{CycloElem, PrimeIdealData};

use crate::core_err;

pub type CacheKey = (u64, u32, String, u32);

pub fn key(ideal: &PrimeIdealData, k: u32) -> CacheKey {
    (ideal.p, ideal.f, ideal.zeta_label(), k)
}

#[derive(Debug)]
pub struct FactorCache {
    m: u32,
    header: String,
    path: Option<PathBuf>,
    entries: BTreeMap<CacheKey, Vec<CycloElem>>,
    pending: Vec<CacheKey>,
}

pub fn format_line(k: &CacheKey, coeffs: &[CycloElem]) -> String {
    let cs: Vec<String> = coeffs.iter().map(|c| c.to_string()).collect();
    format!("{} {} {} {} : {}", k.0, k.1, k.2, k.3, cs.join(" | "))
}

fn parse_line(m: u32, line: &str) -> Result<(CacheKey, Vec<CycloElem>)> {
    let (lhs, rhs) = line.split_once(" : ").context("missing ' : '")?;
    let f: Vec<&str> = lhs.split_whitespace().collect();
    if f.len() != 4 {
        bail!("expected 'p f z k'");
    }
    let key = (f[0].parse()?, f[1].parse()?, f[2].to_string(), f[3].parse()?);
    let coeffs = rhs
        .split(" | ")
        .map(|s| CycloElem::parse(m, s.trim()))
        .collect::<piecel_core::Result<Vec<_>>>()
        .map_err(core_err("cyclotomic"))?;
    Ok((key, coeffs))
}

impl FactorCache {
    /// An empty cache that is never written.
    pub fn in_memory(m: u32, curve_id: &str) -> Self {
        FactorCache {
            m,
            header: format!("# curve {curve_id}"),
            path: None,
            entries: BTreeMap::new(),
            pending: Vec::new(),
        }
    }

    /// Loads `path` if it exists. A cache written for another curve is refused.
    pub fn open(path: &Path, m: u32, curve_id: &str) -> Result<Self> {
        let mut c = Self::in_memory(m, curve_id);
        c.path = Some(path.to_path_buf());
        if !path.exists() {
            return Ok(c);
        }
        let text = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
        let mut lines = text.lines();
        match lines.next() {
            Some(h) if h == c.header => {}
            Some(h) => bail!("cache {} belongs to another curve ({h})", path.display()),
            None => return Ok(c),
        }
        for (i, line) in lines.enumerate() {
            if line.trim().is_empty() {
                continue;
            }
            let (k, v) = parse_line(m, line).with_context(|| format!("{}:{}", path.display(), i + 2))?;
            c.entries.insert(k, v);
        }
        Ok(c)
    }

    pub fn get(&self, k: &CacheKey) -> Option<&Vec<CycloElem>> {
        self.entries.get(k)
    }

    pub fn insert(&mut self, k: CacheKey, coeffs: Vec<CycloElem>) {
        if self.entries.insert(k.clone(), coeffs).is_none() {
            self.pending.push(k);
        }
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// Appends the entries added since the last flush.
    pub fn flush(&mut self) -> Result<()> {
        let Some(path) = &self.path else {
            self.pending.clear();
            return Ok(());
        };
        if self.pending.is_empty() {
            return Ok(());
        }
        let fresh = !path.exists() || std::fs::metadata(path)?.len() == 0;
        let mut out = OpenOptions::new().create(true).append(true).open(path)?;
        let mut buf = String::new();
        if fresh {
            buf.push_str(&self.header);
            buf.push('\n');
        }
        for k in self.pending.drain(..) {
            buf.push_str(&format_line(&k, &self.entries[&k]));
            buf.push('\n');
        }
        out.write_all(buf.as_bytes())?;
        Ok(())
    }

    pub fn m(&self) -> u32 {
        self.m
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn line_round_trip() {
        let k: CacheKey = (7, 1, "2".into(), 1);
        let cs: Vec<CycloElem> = ["1", "-1 - 3*z", "1/2*z", "-7"]
            .iter()
            .map(|s| CycloElem::parse(3, s).unwrap())
            .collect();
        let line = format_line(&k, &cs);
        assert_eq!(line, "7 1 2 1 : 1 | -1 - 3*z | 1/2*z | -7");
        assert_eq!(parse_line(3, &line).unwrap(), (k, cs));
    }

    #[test]
    fn persists_and_refuses_foreign_curves() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("c.txt");
        let mut c = FactorCache::open(&path, 3, "A").unwrap();
        c.insert((7, 1, "2".into(), 1), vec![CycloElem::one(3), CycloElem::zeta(3)]);
        c.flush().unwrap();
        c.insert((7, 1, "4".into(), 1), vec![CycloElem::one(3)]);
        c.flush().unwrap();
        let d = FactorCache::open(&path, 3, "A").unwrap();
        assert_eq!(d.len(), 2);
        assert_eq!(d.get(&(7, 1, "2".into(), 1)).unwrap()[1], CycloElem::zeta(3));
        assert!(FactorCache::open(&path, 3, "B").is_err());
    }
}
