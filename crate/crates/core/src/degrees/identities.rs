//! Checks of the identities and inequalities relating degrees.

use serde::Serialize;

use super::{big_degree_exact, small_degree_bounds, DegreeValue, SmallDegreeQuery};
use crate::arrows::Mode;
use crate::category::{commuting_cocone_any_tip, has_commuting_cocone, Diagram, FiniteCategory, Functor, ObjectId};
use crate::error::{Error, Result};
use crate::expansion::Expansion;
use crate::search::SearchConfig;
use crate::structures::{encode_constants, ConstantTable, Structure};

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "status", rename_all = "snake_case")]
pub enum Outcome {
    Verified,
    Violated { detail: String },
    HypothesisNotSatisfied { reason: String },
}

impl Outcome {
    fn compare(holds: bool, detail: impl FnOnce() -> String) -> Self {
        if holds {
            Outcome::Verified
        } else {
            Outcome::Violated { detail: detail() }
        }
    }

    fn unmet(reason: impl Into<String>) -> Self {
        Outcome::HypothesisNotSatisfied { reason: reason.into() }
    }

    pub fn is_verified(&self) -> bool {
        matches!(self, Outcome::Verified)
    }

    pub fn is_violated(&self) -> bool {
        matches!(self, Outcome::Violated { .. })
    }

    /// The worst of several outcomes: a violation beats a missing hypothesis.
    pub fn worst<'a>(all: impl IntoIterator<Item = &'a Outcome>) -> Outcome {
        let mut out = Outcome::Verified;
        for o in all {
            match (o, &out) {
                (Outcome::Violated { .. }, _) => return o.clone(),
                (Outcome::HypothesisNotSatisfied { .. }, Outcome::Verified) => out = o.clone(),
                _ => {}
            }
        }
        out
    }
}

/// One named claim and what happened to it.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Clause {
    pub name: &'static str,
    pub outcome: Outcome,
}

fn exact(v: DegreeValue) -> Result<usize> {
    v.exact().ok_or_else(|| Error::Internal("exact degree expected".into()))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct MultiplicativityReport {
    pub object: String,
    pub host: String,
    pub aut: usize,
    pub t_objects: Option<usize>,
    pub t_morphisms: Option<usize>,
    pub outcome: Outcome,
    /// A big morphism degree of 1 forces a rigid object.
    pub rigidity: Outcome,
}

/// `T^mor(A, S) = |Aut(A)| T(A, S)`.
pub fn check_multiplicativity(
    cat: &FiniteCategory,
    a: ObjectId,
    s: ObjectId,
    cfg: &SearchConfig,
) -> Result<MultiplicativityReport> {
    let aut = cat.automorphisms(a).len();
    let mut report = MultiplicativityReport {
        object: cat.name(a).to_string(),
        host: cat.name(s).to_string(),
        aut,
        t_objects: None,
        t_morphisms: None,
        outcome: Outcome::Verified,
        rigidity: Outcome::Verified,
    };
    let unmet = if cat.hom(a, s).is_empty() {
        Some("hom(A, S) is empty".to_string())
    } else {
        cat.hom(a, s)
            .iter()
            .find(|&&f| !cat.is_mono(f))
            .map(|f| format!("morphism {f} into S is not mono"))
    };
    if let Some(reason) = unmet {
        report.outcome = Outcome::unmet(reason.clone());
        report.rigidity = Outcome::unmet(reason);
        return Ok(report);
    }
    let t = exact(big_degree_exact(cat, s, a, Mode::Objects, cfg)?.value)?;
    let t_mor = exact(big_degree_exact(cat, s, a, Mode::Morphisms, cfg)?.value)?;
    report.t_objects = Some(t);
    report.t_morphisms = Some(t_mor);
    report.outcome = Outcome::compare(t_mor == aut * t, || format!("{t_mor} != {aut} * {t}"));
    report.rigidity = Outcome::compare(t_mor != 1 || aut == 1, || format!("T_mor = 1 but |Aut| = {aut}"));
    Ok(report)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SubRepresentationReport {
    pub object: String,
    pub small: Option<DegreeValue>,
    pub big_in_sub: Option<usize>,
    pub outcome: Outcome,
}

/// The small morphism degree equals the big morphism degree of the
/// singleton family inside the whole category, computed in `Sub`.
pub fn check_sub_representation(
    cat: &FiniteCategory,
    a: ObjectId,
    cfg: &SearchConfig,
) -> Result<SubRepresentationReport> {
    let mut report = SubRepresentationReport {
        object: cat.name(a).to_string(),
        small: None,
        big_in_sub: None,
        outcome: Outcome::Verified,
    };
    if let Some(m) = cat.all_mono() {
        report.outcome = Outcome::unmet(format!("morphism {} is not mono", m.f));
        return Ok(report);
    }
    if let Some((x, y)) = cat.directed_counterexample() {
        report.outcome = Outcome::unmet(format!("{} and {} have no common target", cat.name(x), cat.name(y)));
        return Ok(report);
    }
    let sub = cat.sub_power_category(cfg)?;
    let big = exact(big_degree_exact(&sub.category, sub.whole, sub.singleton[a], Mode::Morphisms, cfg)?.value)?;
    let small = super::small_degree_exact(cat, a, Mode::Morphisms, cfg)?.value;
    report.big_in_sub = Some(big);
    report.small = Some(small);
    report.outcome = Outcome::compare(small == DegreeValue::Exact(big), || format!("small {small} != {big}"));
    Ok(report)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FiberTerm {
    pub object: String,
    pub aut: usize,
    pub t_objects: usize,
    pub t_morphisms: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct AdditivityReport {
    pub object: String,
    pub host: String,
    pub expanded_host: String,
    pub aut: usize,
    pub t_objects: Option<usize>,
    pub t_morphisms: Option<usize>,
    pub fiber: Vec<FiberTerm>,
    /// Fiber positions of one member per isomorphism class.
    pub class_representatives: Vec<usize>,
    pub self_similar: bool,
    pub clauses: Vec<Clause>,
}

impl AdditivityReport {
    pub fn outcome(&self) -> Outcome {
        Outcome::worst(self.clauses.iter().map(|c| &c.outcome))
    }
}

/// Morphism degrees below `u(s_star)` against the sum over the fiber of `a`.
pub fn check_additivity(u: &Expansion, a: ObjectId, s_star: ObjectId, cfg: &SearchConfig) -> Result<AdditivityReport> {
    let (target, source) = (u.target(), u.source());
    let s = u.project(s_star);
    let restrictions = u.classify_restrictions();
    let universal = source.is_universal_for(s_star, &source.objects().collect::<Vec<_>>());
    let mono = target.all_mono();
    let mut report = AdditivityReport {
        object: target.name(a).to_string(),
        host: target.name(s).to_string(),
        expanded_host: source.name(s_star).to_string(),
        aut: target.automorphisms(a).len(),
        t_objects: None,
        t_morphisms: None,
        fiber: Vec::new(),
        class_representatives: Vec::new(),
        self_similar: false,
        clauses: Vec::new(),
    };
    let base_unmet = if let Some(m) = &mono {
        Some(format!("morphism {} is not mono", m.f))
    } else if !restrictions.has_restrictions {
        Some("the expansion lacks restrictions".to_string())
    } else if !universal {
        Some(format!(
            "{} is not universal for the expanded category",
            source.name(s_star)
        ))
    } else {
        None
    };
    if let Some(reason) = base_unmet {
        for name in ["inequality", "equality", "weighted_objects", "class_objects"] {
            report.clauses.push(Clause {
                name,
                outcome: Outcome::unmet(reason.clone()),
            });
        }
        return Ok(report);
    }
    let t = exact(big_degree_exact(target, s, a, Mode::Objects, cfg)?.value)?;
    let t_mor = exact(big_degree_exact(target, s, a, Mode::Morphisms, cfg)?.value)?;
    report.t_objects = Some(t);
    report.t_morphisms = Some(t_mor);
    let fiber = u.fiber(a)?;
    for &x in &fiber {
        report.fiber.push(FiberTerm {
            object: source.name(x).to_string(),
            aut: source.automorphisms(x).len(),
            t_objects: exact(big_degree_exact(source, s_star, x, Mode::Objects, cfg)?.value)?,
            t_morphisms: exact(big_degree_exact(source, s_star, x, Mode::Morphisms, cfg)?.value)?,
        });
    }
    report.class_representatives = u
        .fiber_iso_classes(a)?
        .iter()
        .map(|class| fiber.iter().position(|&x| x == class[0]).unwrap_or(usize::MAX))
        .collect();
    let sum_mor: usize = report.fiber.iter().map(|f| f.t_morphisms).sum();
    report.clauses.push(Clause {
        name: "inequality",
        outcome: Outcome::compare(t_mor <= sum_mor, || format!("{t_mor} > {sum_mor}")),
    });
    report.self_similar = u.is_self_similar(s_star)?.holds;
    let equality_unmet = if !restrictions.has_unique_restrictions {
        Some("restrictions are not unique".to_string())
    } else if !report.self_similar {
        Some(format!("{} is not self-similar", source.name(s_star)))
    } else {
        None
    };
    if let Some(reason) = equality_unmet {
        for name in ["equality", "weighted_objects", "class_objects"] {
            report.clauses.push(Clause {
                name,
                outcome: Outcome::unmet(reason.clone()),
            });
        }
        return Ok(report);
    }
    report.clauses.push(Clause {
        name: "equality",
        outcome: Outcome::compare(t_mor == sum_mor, || format!("{t_mor} != {sum_mor}")),
    });
    // Weighted form, cleared of denominators.
    let weighted: usize = report.fiber.iter().map(|f| f.aut * f.t_objects).sum();
    report.clauses.push(Clause {
        name: "weighted_objects",
        outcome: Outcome::compare(report.aut * t == weighted, || {
            format!("{} * {t} != {weighted}", report.aut)
        }),
    });
    let by_class: usize = report
        .class_representatives
        .iter()
        .map(|&i| report.fiber[i].t_objects)
        .sum();
    report.clauses.push(Clause {
        name: "class_objects",
        outcome: Outcome::compare(t == by_class, || format!("{t} != {by_class}")),
    });
    Ok(report)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct MonotonicityReport {
    pub host: String,
    pub smaller: String,
    pub larger: String,
    /// `(f, g)` with `f: A -> B` and `g: S -> S`.
    pub witness: Option<(usize, usize)>,
    pub t_smaller: Option<usize>,
    pub t_larger: Option<usize>,
    pub outcome: Outcome,
}

/// `T^mor(A, S) <= T^mor(B, S)` when `S` is weakly homogeneous for `(A, B)`.
pub fn check_monotonicity(
    cat: &FiniteCategory,
    s: ObjectId,
    a: ObjectId,
    b: ObjectId,
    cfg: &SearchConfig,
) -> Result<MonotonicityReport> {
    let mut report = MonotonicityReport {
        host: cat.name(s).to_string(),
        smaller: cat.name(a).to_string(),
        larger: cat.name(b).to_string(),
        witness: None,
        t_smaller: None,
        t_larger: None,
        outcome: Outcome::Verified,
    };
    if cat.hom(a, b).is_empty() {
        report.outcome = Outcome::unmet("hom(A, B) is empty");
        return Ok(report);
    }
    report.witness = cat.weak_homogeneity_witness(s, a, b);
    if report.witness.is_none() {
        report.outcome = Outcome::unmet("S is not weakly homogeneous for (A, B)");
        return Ok(report);
    }
    let ta = exact(big_degree_exact(cat, s, a, Mode::Morphisms, cfg)?.value)?;
    let tb = exact(big_degree_exact(cat, s, b, Mode::Morphisms, cfg)?.value)?;
    report.t_smaller = Some(ta);
    report.t_larger = Some(tb);
    report.outcome = Outcome::compare(ta <= tb, || format!("{ta} > {tb}"));
    Ok(report)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SmallerReport {
    pub object: String,
    pub host: String,
    pub pool: Vec<String>,
    pub universal: bool,
    pub locally_finite: bool,
    pub small: Option<DegreeValue>,
    pub big: Option<usize>,
    pub outcome: Outcome,
}

/// The small morphism degree over the full subcategory on `d` is at most
/// the big morphism degree in a universal, locally finite `s`.
pub fn check_smaller(
    cat: &FiniteCategory,
    d: &[ObjectId],
    s: ObjectId,
    a: ObjectId,
    cfg: &SearchConfig,
) -> Result<SmallerReport> {
    let universal = cat.universality_failure(s, d).is_none();
    let lf = cat.local_finiteness(s, d, cfg)?;
    let mut report = SmallerReport {
        object: cat.name(a).to_string(),
        host: cat.name(s).to_string(),
        pool: d.iter().map(|&x| cat.name(x).to_string()).collect(),
        universal,
        locally_finite: lf.holds,
        small: None,
        big: None,
        outcome: Outcome::Verified,
    };
    if !d.contains(&a) {
        report.outcome = Outcome::unmet("A is not in the pool");
    } else if !universal {
        report.outcome = Outcome::unmet("S is not universal for the pool");
    } else if !lf.holds {
        report.outcome = Outcome::unmet("S is not locally finite for the pool");
    }
    if !report.outcome.is_verified() {
        return Ok(report);
    }
    let query = SmallDegreeQuery {
        b: Some(d.to_vec()),
        hosts: Some(d.to_vec()),
        ..Default::default()
    };
    let small = small_degree_bounds(cat, a, &query, Mode::Morphisms, cfg)?.value;
    let big = exact(big_degree_exact(cat, s, a, Mode::Morphisms, cfg)?.value)?;
    report.small = Some(small);
    report.big = Some(big);
    report.outcome = Outcome::compare(small.exact().is_some_and(|v| v <= big), || {
        format!("small {small} > {big}")
    });
    Ok(report)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CoconeReport {
    pub object: String,
    pub sub_host: String,
    pub host: String,
    pub diagrams_checked: usize,
    /// Only the supplied diagrams were checked.
    pub conditional: bool,
    pub t_sub: Option<usize>,
    pub t: Option<usize>,
    pub outcome: Outcome,
}

/// `T_B(A, B) <= T_C(A, C)` for a subcategory `B` of `C`, given that every
/// supplied diagram with a cocone into `C` has a cocone inside `B`.
#[allow(clippy::too_many_arguments)]
pub fn check_cocone_transfer(
    sub: &FiniteCategory,
    cat: &FiniteCategory,
    inclusion: &Functor,
    a: ObjectId,
    b_obj: ObjectId,
    c_obj: ObjectId,
    diagrams: &[Diagram],
    cfg: &SearchConfig,
) -> Result<CoconeReport> {
    let mut report = CoconeReport {
        object: sub.name(a).to_string(),
        sub_host: sub.name(b_obj).to_string(),
        host: cat.name(c_obj).to_string(),
        diagrams_checked: 0,
        conditional: true,
        t_sub: None,
        t: None,
        outcome: Outcome::Verified,
    };
    let unmet = if !inclusion.is_functor(sub, cat) || inclusion.faithfulness_violation(sub).is_some() {
        Some("the inclusion is not a faithful functor".to_string())
    } else if !sub.is_universal_for(b_obj, &sub.objects().collect::<Vec<_>>()) {
        Some(format!("{} is not universal for the subcategory", sub.name(b_obj)))
    } else if !cat.is_universal_for(c_obj, &cat.objects().collect::<Vec<_>>()) {
        Some(format!("{} is not universal for the category", cat.name(c_obj)))
    } else {
        None
    };
    if let Some(reason) = unmet {
        report.outcome = Outcome::unmet(reason);
        return Ok(report);
    }
    for (i, d) in diagrams.iter().enumerate() {
        if d.a != a || d.b != b_obj {
            return Err(Error::Invalid(format!(
                "diagram {i} does not run from A to the subcategory host"
            )));
        }
        let image = Diagram::new(
            cat,
            d.shape.clone(),
            inclusion.object(d.a),
            inclusion.object(d.b),
            d.arrows.iter().map(|&m| inclusion.morphism(m)).collect(),
        )?;
        report.diagrams_checked += 1;
        if has_commuting_cocone(cat, &image, c_obj, cfg)?.is_some() && commuting_cocone_any_tip(sub, d, cfg)?.is_none()
        {
            report.outcome = Outcome::unmet(format!(
                "diagram {i} has a cocone in the category but none in the subcategory"
            ));
            return Ok(report);
        }
    }
    let t_sub = exact(big_degree_exact(sub, b_obj, a, Mode::Objects, cfg)?.value)?;
    let t = exact(big_degree_exact(cat, c_obj, inclusion.object(a), Mode::Objects, cfg)?.value)?;
    report.t_sub = Some(t_sub);
    report.t = Some(t);
    report.outcome = Outcome::compare(t_sub <= t, || format!("{t_sub} > {t}"));
    Ok(report)
}

/// Structures with constants, their constant-free copies restricted to
/// constant-preserving maps, and the category those copies live in.
#[derive(Debug, Clone)]
pub struct ConstantEncoding {
    /// The structures with constants.
    pub with_constants: FiniteCategory,
    /// Constant-free copies with only the constant-preserving embeddings.
    pub encoded: FiniteCategory,
    /// All embeddings between the copies and the extra structures.
    pub ambient: FiniteCategory,
    /// `with_constants -> encoded`, identity on objects.
    pub encode: Functor,
    /// `encoded -> ambient`, sending copy `i` to object `i`.
    pub inclusion: Functor,
    pub tables: Vec<ConstantTable>,
}

/// Builds the encoding of `pool`; `extra` adds constant-free objects to the ambient category.
pub fn constant_encoding_setup(
    pool: Vec<(String, Structure)>,
    extra: Vec<(String, Structure)>,
) -> Result<ConstantEncoding> {
    let with_constants = FiniteCategory::from_pool(pool.clone())?;
    let mut stripped = Vec::new();
    let mut tables = Vec::new();
    for (name, s) in &pool {
        let (plain, table) = encode_constants(s)?;
        stripped.push((name.clone(), plain));
        tables.push(table);
    }
    let full = FiniteCategory::from_pool(stripped.clone())?;
    let remove: Vec<usize> = (0..full.morphism_count())
        .filter(|&m| {
            let map = full.map(m).expect("structure morphisms carry maps");
            !tables[full.dom(m)].preserved_by(map, &tables[full.cod(m)])
        })
        .collect();
    let encoded = full.without_morphisms(&remove)?;
    stripped.extend(extra);
    let ambient = FiniteCategory::from_pool(stripped)?;
    let via_maps = |from: &FiniteCategory, to: &FiniteCategory| -> Result<Vec<usize>> {
        (0..from.morphism_count())
            .map(|m| {
                let map = from.map(m).expect("structure morphisms carry maps");
                to.find_map(from.dom(m), from.cod(m), map)
                    .ok_or_else(|| Error::Internal(format!("morphism {m} has no counterpart")))
            })
            .collect()
    };
    let objects: Vec<ObjectId> = with_constants.objects().collect();
    let encode = Functor::new(
        &with_constants,
        &encoded,
        objects.clone(),
        via_maps(&with_constants, &encoded)?,
    )?;
    let inclusion = Functor::new(&encoded, &ambient, objects, via_maps(&encoded, &ambient)?)?;
    Ok(ConstantEncoding {
        with_constants,
        encoded,
        ambient,
        encode,
        inclusion,
        tables,
    })
}
