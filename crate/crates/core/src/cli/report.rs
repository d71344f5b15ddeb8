//! Input tracking and the JSON report envelope.

use std::path::{Path, PathBuf};

use serde::Serialize;
use serde_json::Value;
use sha2::{Digest, Sha256};

use crate::category::{FiniteCategory, ObjectId};
use crate::corpus::builtin_pool;
use crate::error::{Error, Result};
use crate::search::SearchConfig;
use crate::structures::{parse_pool, parse_structure, parse_structure_or_shorthand, Structure};

pub const SCHEMA: &str = "ramdeg-report/1";

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct InputHash {
    pub name: String,
    pub sha256: String,
}

fn sha256(bytes: &[u8]) -> String {
    Sha256::digest(bytes).iter().map(|b| format!("{b:02x}")).collect()
}

/// Everything read during one run, with content hashes.
#[derive(Debug, Default)]
pub struct Inputs {
    pub list: Vec<InputHash>,
    pub cfg: SearchConfig,
}

impl Inputs {
    pub fn new(cfg: SearchConfig) -> Self {
        Inputs { list: Vec::new(), cfg }
    }

    fn note(&mut self, name: String, bytes: &[u8]) {
        let hash = InputHash {
            name,
            sha256: sha256(bytes),
        };
        if !self.list.contains(&hash) {
            self.list.push(hash);
        }
    }

    pub fn read(&mut self, path: &Path) -> Result<String> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
        self.note(path.display().to_string(), text.as_bytes());
        Ok(text)
    }

    /// A structure file, or a shorthand such as `chain6`.
    pub fn structure(&mut self, spec: &str) -> Result<(String, Structure)> {
        let path = Path::new(spec);
        if path.is_file() {
            let text = self.read(path)?;
            let name = path
                .file_stem()
                .map_or(spec.to_string(), |s| s.to_string_lossy().into_owned());
            return Ok((name, parse_structure(&text)?));
        }
        self.note(format!("literal:{spec}"), spec.as_bytes());
        Ok((spec.to_string(), parse_structure_or_shorthand(spec)?))
    }

    /// A pool file, or a built-in pool such as `graphs_le4`.
    pub fn pool(&mut self, spec: &str) -> Result<Vec<(String, Structure)>> {
        let path = Path::new(spec);
        if path.is_file() {
            let text = self.read(path)?;
            return parse_pool(&text);
        }
        match builtin_pool(spec, &self.cfg)? {
            Some(pool) => {
                self.note(format!("builtin:{spec}"), spec.as_bytes());
                Ok(pool)
            }
            None => Err(Error::Invalid(format!(
                "`{spec}` is neither a pool file nor a built-in pool"
            ))),
        }
    }

    /// The category on `--cat` (if any) plus every named object not already in it.
    pub fn category(&mut self, cat: Option<&str>, specs: &[&str]) -> Result<(FiniteCategory, Vec<ObjectId>)> {
        let mut pool = match cat {
            Some(p) => self.pool(p)?,
            None => Vec::new(),
        };
        let mut ids = Vec::with_capacity(specs.len());
        for &spec in specs {
            if let Some(i) = pool.iter().position(|(n, _)| n == spec) {
                ids.push(i);
                continue;
            }
            let (name, s) = self.structure(spec)?;
            match pool.iter().position(|(n, _)| *n == name) {
                Some(i) => ids.push(i),
                None => {
                    pool.push((name, s));
                    ids.push(pool.len() - 1);
                }
            }
        }
        Ok((FiniteCategory::from_pool_guarded(pool, self.cfg.guard)?, ids))
    }

    /// Resolves paths named inside `base_file` relative to its directory.
    pub fn relative(base_file: &Path, name: &str) -> PathBuf {
        let p = Path::new(name);
        if p.is_absolute() {
            return p.to_path_buf();
        }
        base_file.parent().map_or(p.to_path_buf(), |d| d.join(p))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Stats {
    pub nodes: u64,
    pub elapsed_ms: u128,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Report<'a> {
    pub schema: &'static str,
    pub version: &'static str,
    pub command: &'a str,
    pub inputs: &'a [InputHash],
    pub config: SearchConfig,
    pub exit_code: i32,
    pub result: &'a Value,
    pub stats: Stats,
}
