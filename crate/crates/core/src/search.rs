//! Run configuration shared by the exhaustive searches.

use std::sync::atomic::{AtomicU64, Ordering};

use serde::Serialize;

use crate::error::{Error, Result};

/// Default bound on enumerated search items.
pub const DEFAULT_GUARD: u64 = 10_000_000;

/// Knobs that may change how a search runs but never what it returns.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct SearchConfig {
    /// Maximum number of enumerated items (nodes, families, tuples).
    pub guard: u64,
    /// Worker threads; 1 runs everything on the calling thread.
    pub jobs: usize,
    /// Quotient colorings by the automorphism group of the host object.
    pub prune_symmetry: bool,
}

impl Default for SearchConfig {
    fn default() -> Self {
        SearchConfig {
            guard: DEFAULT_GUARD,
            jobs: 1,
            prune_symmetry: false,
        }
    }
}

impl SearchConfig {
    pub fn with_jobs(mut self, jobs: usize) -> Self {
        self.jobs = jobs.max(1);
        self
    }

    pub fn with_pruning(mut self, on: bool) -> Self {
        self.prune_symmetry = on;
        self
    }

    pub fn with_guard(mut self, guard: u64) -> Self {
        self.guard = guard;
        self
    }

    /// Fails when a precomputed search space is too large.
    pub fn check(&self, what: &str, needed: u64) -> Result<()> {
        if needed > self.guard {
            return Err(Error::GuardExceeded {
                what: what.to_string(),
                needed,
                limit: self.guard,
            });
        }
        Ok(())
    }

    /// Runs `f` inside a thread pool of the configured size.
    pub fn install<T: Send>(&self, f: impl FnOnce() -> T + Send) -> Result<T> {
        if self.jobs <= 1 {
            return Ok(f());
        }
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(self.jobs)
            .build()
            .map_err(|e| Error::Internal(e.to_string()))?;
        Ok(pool.install(f))
    }
}

/// Node counter shared by the workers of one search.
#[derive(Debug)]
pub struct Budget {
    what: &'static str,
    limit: u64,
    used: AtomicU64,
}

impl Budget {
    pub fn new(what: &'static str, limit: u64) -> Self {
        Budget {
            what,
            limit,
            used: AtomicU64::new(0),
        }
    }

    pub fn tick(&self) -> Result<()> {
        let n = self.used.fetch_add(1, Ordering::Relaxed) + 1;
        if n > self.limit {
            return Err(Error::GuardExceeded {
                what: self.what.to_string(),
                needed: n,
                limit: self.limit,
            });
        }
        Ok(())
    }

    pub fn used(&self) -> u64 {
        self.used.load(Ordering::Relaxed)
    }
}

/// Saturating product used for size estimates.
pub fn product<I: IntoIterator<Item = u64>>(it: I) -> u64 {
    it.into_iter().fold(1u64, |acc, x| acc.saturating_mul(x))
}
