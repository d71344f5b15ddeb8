//! Deterministic families of small structures, enumerated up to isomorphism.

use std::str::FromStr;

use serde::Serialize;

use crate::category::{FiniteCategory, ObjectId};
use crate::error::{Error, Result};
use crate::expansion::ORDER;
use crate::search::SearchConfig;
use crate::structures::{are_isomorphic, shorthand, Signature, Structure};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Family {
    Chains,
    Graphs,
    Tournaments,
    OrderedGraphs,
}

impl FromStr for Family {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "chains" => Ok(Family::Chains),
            "graphs" => Ok(Family::Graphs),
            "tournaments" => Ok(Family::Tournaments),
            "ordered-graphs" | "ordered_graphs" => Ok(Family::OrderedGraphs),
            _ => Err(Error::Invalid(format!("unknown family `{s}`"))),
        }
    }
}

impl Family {
    pub fn name(self) -> &'static str {
        match self {
            Family::Chains => "chains",
            Family::Graphs => "graphs",
            Family::Tournaments => "tournaments",
            Family::OrderedGraphs => "ordered_graphs",
        }
    }

    fn prefix(self) -> &'static str {
        match self {
            Family::Chains => "C",
            Family::Graphs => "G",
            Family::Tournaments => "T",
            Family::OrderedGraphs => "OG",
        }
    }

    /// Least size in the family; chains start at one element.
    pub fn min_size(self) -> usize {
        match self {
            Family::Chains => 1,
            _ => 0,
        }
    }
}

fn pairs(n: usize) -> Vec<(usize, usize)> {
    (0..n).flat_map(|x| (x + 1..n).map(move |y| (x, y))).collect()
}

/// Every structure of one size, before isomorphism filtering.
fn raw(family: Family, n: usize, cfg: &SearchConfig) -> Result<Vec<Structure>> {
    let p = pairs(n);
    if family == Family::Chains {
        return Ok(vec![shorthand(&format!("chain {n}"))?]);
    }
    if p.len() >= 40 {
        return Err(Error::GuardExceeded {
            what: "corpus candidates".into(),
            needed: u64::MAX,
            limit: cfg.guard,
        });
    }
    cfg.check("corpus candidates", 1u64 << p.len())?;
    let signature = match family {
        Family::OrderedGraphs => Signature::relational([("E", 2), (ORDER, 2)])?,
        _ => Signature::relational([("E", 2)])?,
    };
    let mut out = Vec::with_capacity(1 << p.len());
    for mask in 0u64..1 << p.len() {
        let mut s = Structure::empty(signature.clone(), n)?;
        for (i, &(x, y)) in p.iter().enumerate() {
            let bit = mask >> i & 1 == 1;
            match family {
                Family::Tournaments => s.insert("E", &if bit { [y, x] } else { [x, y] })?,
                _ if bit => {
                    s.insert("E", &[x, y])?;
                    s.insert("E", &[y, x])?;
                }
                _ => {}
            }
            if family == Family::OrderedGraphs {
                s.insert(ORDER, &[x, y])?;
            }
        }
        out.push(s);
    }
    Ok(out)
}

/// The family up to `max_size`, one structure per isomorphism type, named
/// `PREFIXn` for chains and `PREFIXn_i` otherwise.
pub fn generate(family: Family, max_size: usize, cfg: &SearchConfig) -> Result<Vec<(String, Structure)>> {
    let mut out = Vec::new();
    for n in family.min_size()..=max_size {
        let mut reps: Vec<Structure> = Vec::new();
        for s in raw(family, n, cfg)? {
            // Ordered structures are rigid, so distinct edge sets are distinct types.
            let new = family == Family::OrderedGraphs || {
                let mut fresh = true;
                for r in &reps {
                    if are_isomorphic(r, &s)?.is_some() {
                        fresh = false;
                        break;
                    }
                }
                fresh
            };
            if new {
                reps.push(s);
            }
        }
        for (i, s) in reps.into_iter().enumerate() {
            let name = match family {
                Family::Chains => format!("{}{n}", family.prefix()),
                _ => format!("{}{n}_{i}", family.prefix()),
            };
            out.push((name, s));
        }
    }
    Ok(out)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CorpusCounts {
    pub family: Family,
    pub max_size: usize,
    /// `(size, number of types)` in increasing size.
    pub by_size: Vec<(usize, usize)>,
    pub total: usize,
}

pub fn counts(family: Family, max_size: usize, pool: &[(String, Structure)]) -> CorpusCounts {
    let by_size = (family.min_size()..=max_size)
        .map(|n| (n, pool.iter().filter(|(_, s)| s.size() == n).count()))
        .collect();
    CorpusCounts {
        family,
        max_size,
        by_size,
        total: pool.len(),
    }
}

/// Resolves names like `graphs_le4` or `chains_le6`.
pub fn builtin_pool(name: &str, cfg: &SearchConfig) -> Result<Option<Vec<(String, Structure)>>> {
    let Some((family, size)) = name.rsplit_once("_le") else {
        return Ok(None);
    };
    let (Ok(family), Ok(size)) = (family.parse::<Family>(), size.parse::<usize>()) else {
        return Ok(None);
    };
    generate(family, size, cfg).map(Some)
}

/// First object of `cat` isomorphic to `s`.
pub fn find_isomorphic(cat: &FiniteCategory, s: &Structure) -> Result<Option<ObjectId>> {
    for a in cat.objects() {
        if let Some(x) = cat.structure(a) {
            if x.signature() == s.signature() && are_isomorphic(x, s)?.is_some() {
                return Ok(Some(a));
            }
        }
    }
    Ok(None)
}
