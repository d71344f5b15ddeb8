//! Big and small Ramsey degrees on finite categories, and checks of the
//! identities relating them.

mod identities;

use serde::Serialize;

use crate::arrows::{arrow, Coloring, ColoringProblem, Mode};
use crate::category::{FiniteCategory, ObjectId};
use crate::error::Result;
use crate::search::{Budget, SearchConfig};

pub use identities::{
    check_additivity, check_cocone_transfer, check_monotonicity, check_multiplicativity, check_smaller,
    check_sub_representation, constant_encoding_setup, AdditivityReport, Clause, CoconeReport, ConstantEncoding,
    FiberTerm, MonotonicityReport, MultiplicativityReport, Outcome, SmallerReport, SubRepresentationReport,
};

/// A degree value; finite computations never claim infinity.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum DegreeValue {
    Exact(usize),
    /// The search stopped at a bound with a certificate that the value is at least this.
    AtLeast(usize),
}

impl DegreeValue {
    pub fn exact(&self) -> Option<usize> {
        match self {
            DegreeValue::Exact(v) => Some(*v),
            DegreeValue::AtLeast(_) => None,
        }
    }
}

impl std::fmt::Display for DegreeValue {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            DegreeValue::Exact(v) => write!(f, "{v}"),
            DegreeValue::AtLeast(v) => write!(f, ">= {v}"),
        }
    }
}

fn quantity(big: bool, mode: Mode) -> &'static str {
    match (big, mode) {
        (true, Mode::Objects) => "T",
        (true, Mode::Morphisms) => "T_mor",
        (false, Mode::Objects) => "t",
        (false, Mode::Morphisms) => "t_mor",
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DegreeReport {
    pub quantity: &'static str,
    pub object: String,
    pub host: String,
    pub value: DegreeValue,
    /// `hom(A, S)` is empty; the value 1 comes from the single empty coloring.
    pub empty_domain: bool,
    pub domain_size: usize,
    pub candidates: usize,
    /// A coloring under which every `w: S -> S` shows `value` colors.
    pub witness: Coloring,
    #[serde(skip)]
    pub nodes: u64,
}

/// The big degree of `a` in `s`, exact for every number of colors.
pub fn big_degree_exact(
    cat: &FiniteCategory,
    s: ObjectId,
    a: ObjectId,
    mode: Mode,
    cfg: &SearchConfig,
) -> Result<DegreeReport> {
    let (problem, layout) = ColoringProblem::arrow(cat, s, s, a, mode)?;
    let budget = Budget::new("big degree search nodes", cfg.guard);
    let (value, colors) = problem.max_min_colors(&budget)?;
    Ok(DegreeReport {
        quantity: quantity(true, mode),
        object: cat.name(a).to_string(),
        host: cat.name(s).to_string(),
        value: DegreeValue::Exact(value.max(1)),
        empty_domain: problem.domain == 0,
        domain_size: problem.domain,
        candidates: problem.blocks.len(),
        witness: Coloring {
            mode,
            domain: layout.domain,
            colors,
        },
        nodes: budget.used(),
    })
}

/// Which part of a category a small-degree computation ranges over.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct SmallDegreeQuery {
    /// Objects `B` to quantify over; all objects when absent.
    pub b: Option<Vec<ObjectId>>,
    /// Objects allowed as `C`; all objects when absent.
    pub hosts: Option<Vec<ObjectId>>,
    /// Largest number of colors; every number when absent.
    pub k_max: Option<usize>,
    /// Largest threshold tried; a value guaranteed to succeed when absent.
    pub t_max: Option<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct HostWitness {
    pub b: String,
    pub c: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Refutation {
    pub c: String,
    pub k: usize,
    pub coloring: Coloring,
}

/// At threshold `t`, every allowed `C` carries a coloring defeating `B`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct LowerCertificate {
    pub t: usize,
    pub b: String,
    pub refutations: Vec<Refutation>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SmallDegreeReport {
    pub quantity: &'static str,
    pub object: String,
    pub lower: usize,
    pub upper: Option<usize>,
    pub value: DegreeValue,
    /// `category` when every object, host and number of colors was covered.
    pub scope: String,
    pub hosts: Vec<HostWitness>,
    pub lower_certificate: Option<LowerCertificate>,
    #[serde(skip)]
    pub nodes: u64,
}

/// Least `n` such that every `B` has some `C` with `C -> (B)^A_{k,n}` for all allowed `k`.
///
/// The relation only gets harder as `k` grows, so each host is tested at the
/// largest allowed `k`, capped by the size of its coloring domain.
pub fn small_degree_bounds(
    cat: &FiniteCategory,
    a: ObjectId,
    query: &SmallDegreeQuery,
    mode: Mode,
    cfg: &SearchConfig,
) -> Result<SmallDegreeReport> {
    let bs: Vec<ObjectId> = query.b.clone().unwrap_or_else(|| cat.objects().collect());
    let hosts: Vec<ObjectId> = query.hosts.clone().unwrap_or_else(|| cat.objects().collect());
    let k = query.k_max.unwrap_or(usize::MAX);
    let domain = |b: ObjectId| match mode {
        Mode::Morphisms => cat.hom(a, b).len(),
        Mode::Objects => cat.hom_classes(a, b).len(),
    };
    // With `C = B` and `w = id` the threshold `|domain(B)|` always succeeds.
    let ceiling = bs.iter().map(|&b| domain(b)).max().unwrap_or(1).max(1);
    let t_max = query.t_max.unwrap_or(ceiling);
    let scope = if query.b.is_none() && query.hosts.is_none() && query.k_max.is_none() {
        "category".to_string()
    } else {
        let k_text = query.k_max.map_or("every k".to_string(), |k| format!("k <= {k}"));
        format!("{k_text}, {} objects B, {} hosts", bs.len(), hosts.len())
    };
    let mut nodes = 0u64;
    let mut certificate = None;
    for n in 1..=t_max {
        let mut witnesses = Vec::new();
        let mut failing = None;
        for &b in &bs {
            let mut refutations = Vec::new();
            let mut host = None;
            for &c in &hosts {
                let r = arrow(cat, c, b, a, k, n, mode, cfg)?;
                nodes += r.nodes;
                match r.certificate {
                    None => {
                        host = Some(c);
                        break;
                    }
                    Some(coloring) => refutations.push(Refutation {
                        c: cat.name(c).to_string(),
                        k: r.k_effective,
                        coloring,
                    }),
                }
            }
            match host {
                Some(c) => witnesses.push(HostWitness {
                    b: cat.name(b).to_string(),
                    c: cat.name(c).to_string(),
                }),
                None => {
                    failing = Some(LowerCertificate {
                        t: n,
                        b: cat.name(b).to_string(),
                        refutations,
                    });
                    break;
                }
            }
        }
        match failing {
            Some(cert) => certificate = Some(cert),
            None => {
                return Ok(SmallDegreeReport {
                    quantity: quantity(false, mode),
                    object: cat.name(a).to_string(),
                    lower: n,
                    upper: Some(n),
                    value: DegreeValue::Exact(n),
                    scope,
                    hosts: witnesses,
                    lower_certificate: certificate,
                    nodes,
                })
            }
        }
    }
    Ok(SmallDegreeReport {
        quantity: quantity(false, mode),
        object: cat.name(a).to_string(),
        lower: t_max + 1,
        upper: None,
        value: DegreeValue::AtLeast(t_max + 1),
        scope,
        hosts: Vec::new(),
        lower_certificate: certificate,
        nodes,
    })
}

/// The small degree of `a` relative to the whole finite category.
pub fn small_degree_exact(
    cat: &FiniteCategory,
    a: ObjectId,
    mode: Mode,
    cfg: &SearchConfig,
) -> Result<SmallDegreeReport> {
    small_degree_bounds(cat, a, &SmallDegreeQuery::default(), mode, cfg)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::structures::shorthand;

    fn pool(names: &[&str]) -> FiniteCategory {
        FiniteCategory::from_pool(
            names
                .iter()
                .map(|n| (n.replace(' ', ""), shorthand(n).unwrap()))
                .collect(),
        )
        .unwrap()
    }

    #[test]
    fn rigid_host_counts_classes() {
        let c = pool(&["chain 2", "chain 4"]);
        let r = big_degree_exact(&c, 1, 0, Mode::Objects, &SearchConfig::default()).unwrap();
        assert_eq!(r.value, DegreeValue::Exact(6));
        assert!(!r.empty_domain);
    }

    #[test]
    fn edge_in_path() {
        let c = pool(&["clique 2", "path 3"]);
        let cfg = SearchConfig::default();
        assert_eq!(
            big_degree_exact(&c, 1, 0, Mode::Objects, &cfg).unwrap().value,
            DegreeValue::Exact(2)
        );
        assert_eq!(
            big_degree_exact(&c, 1, 0, Mode::Morphisms, &cfg).unwrap().value,
            DegreeValue::Exact(4)
        );
    }

    #[test]
    fn empty_domain_reports_one() {
        let c = pool(&["clique 3", "path 3"]);
        let r = big_degree_exact(&c, 1, 0, Mode::Objects, &SearchConfig::default()).unwrap();
        assert!(r.empty_domain);
        assert_eq!(r.value, DegreeValue::Exact(1));
    }

    #[test]
    fn small_degrees_of_short_chains() {
        let cfg = SearchConfig::default();
        let c = pool(&["chain 1", "chain 2"]);
        let r = small_degree_exact(&c, 0, Mode::Morphisms, &cfg).unwrap();
        assert_eq!(r.value, DegreeValue::Exact(2));
        assert_eq!(r.scope, "category");
        let cert = r.lower_certificate.unwrap();
        assert_eq!((cert.t, cert.b.as_str()), (1, "chain2"));
        let single = pool(&["chain 3"]);
        assert_eq!(
            small_degree_exact(&single, 0, Mode::Objects, &cfg).unwrap().value,
            DegreeValue::Exact(1)
        );
    }

    #[test]
    fn ramsey_host_for_triples() {
        let c = pool(&["chain 1", "chain 2", "chain 3", "chain 4", "chain 5", "chain 6"]);
        let q = SmallDegreeQuery {
            b: Some(vec![2]),
            k_max: Some(2),
            ..Default::default()
        };
        let r = small_degree_bounds(&c, 1, &q, Mode::Objects, &SearchConfig::default()).unwrap();
        assert_eq!(r.value, DegreeValue::Exact(1));
        assert_eq!(
            r.hosts,
            vec![HostWitness {
                b: "chain3".into(),
                c: "chain6".into()
            }]
        );
        let capped = SmallDegreeQuery { t_max: Some(0), ..q };
        let r = small_degree_bounds(&c, 1, &capped, Mode::Objects, &SearchConfig::default()).unwrap();
        assert_eq!(r.value, DegreeValue::AtLeast(1));
    }
}
