//! Expansion functors between finite categories and the restriction machinery.

mod build;
mod file;

use std::collections::HashMap;

use serde::Serialize;

use crate::category::{FiniteCategory, Functor, FunctorViolation, MorphismId, ObjectId};
use crate::error::{Error, Result};

pub use build::{age_expansion, linear_orders, order_age, order_forgetting, reduct_expansion, ORDER};
pub use file::{ExpansionFile, HomIdentification};

/// A faithful functor `source -> target` that is surjective on objects.
#[derive(Debug, Clone)]
pub struct Expansion {
    source: FiniteCategory,
    target: FiniteCategory,
    functor: Functor,
    /// Source morphisms keyed by their codomain and their image.
    lifts: HashMap<(ObjectId, MorphismId), Vec<MorphismId>>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct RestrictionReport {
    pub has_restrictions: bool,
    pub has_unique_restrictions: bool,
    /// A target morphism `f: A -> U(B*)` with no lift into `B*`.
    pub uncovered: Option<Uncovered>,
    /// A target morphism lifting from two fiber members.
    pub overlap: Option<Overlap>,
    /// Pairs `(A, B*)` checked.
    pub checked: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Uncovered {
    pub morphism: MorphismId,
    pub expanded_target: ObjectId,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Overlap {
    pub morphism: MorphismId,
    pub expanded_target: ObjectId,
    pub first: ObjectId,
    pub second: ObjectId,
}

/// `A* = B*|f` together with the lift of `f`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Restriction {
    pub object: ObjectId,
    pub morphism: MorphismId,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct AutCountReport {
    pub object: ObjectId,
    pub chosen: ObjectId,
    /// Fiber members isomorphic to the chosen one.
    pub isomorphic_fiber: Vec<ObjectId>,
    pub aut_target: usize,
    pub aut_source: usize,
    /// Every automorphism of `A` lifts to exactly one `iso(A*_i, A*)`.
    pub disjoint_union: bool,
    pub holds: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PropertyChecks {
    pub reasonable: bool,
    /// `(f, A*)` with no `B*` over `cod f` receiving `f` from `A*`.
    pub reasonable_failure: Option<(MorphismId, ObjectId)>,
    pub expansion_property: bool,
    /// For each target object, the least `B` joining all fibers, if any.
    pub expansion_witnesses: Vec<Option<ObjectId>>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SelfSimilarity {
    pub holds: bool,
    /// `(w, S*|w, v)` for every `w` that succeeded.
    pub witnesses: Vec<(MorphismId, ObjectId, MorphismId)>,
    pub failure: Option<MorphismId>,
}

fn violation_message(v: &FunctorViolation) -> String {
    match v {
        FunctorViolation::WrongEnds { morphism } => {
            format!("morphism {morphism} is sent to a morphism with the wrong ends")
        }
        FunctorViolation::Identity { object } => format!("identity of object {object} is not preserved"),
        FunctorViolation::Composition { after, before } => {
            format!("composite of {after} after {before} is not preserved")
        }
        FunctorViolation::NotSurjectiveOnObjects { object } => format!("target object {object} has an empty fiber"),
        FunctorViolation::NotFaithful { first, second } => {
            format!("morphisms {first} and {second} share a hom-set and an image")
        }
    }
}

impl Expansion {
    pub fn new(source: FiniteCategory, target: FiniteCategory, functor: Functor) -> Result<Self> {
        if let Some(v) = Expansion::axiom_violation(&source, &target, &functor) {
            return Err(Error::InvalidExpansion(violation_message(&v)));
        }
        let mut lifts: HashMap<(ObjectId, MorphismId), Vec<MorphismId>> = HashMap::new();
        for f in 0..source.morphism_count() {
            lifts.entry((source.cod(f), functor.morphism(f))).or_default().push(f);
        }
        Ok(Expansion {
            source,
            target,
            functor,
            lifts,
        })
    }

    /// Builds the functor from object names, identifying morphisms by element map.
    pub fn by_element_maps(source: FiniteCategory, target: FiniteCategory, object_map: Vec<ObjectId>) -> Result<Self> {
        if object_map.len() != source.object_count() || object_map.iter().any(|&o| o >= target.object_count()) {
            return Err(Error::InvalidExpansion(
                "object map must send every source object into the target".into(),
            ));
        }
        let mut morphism_map = Vec::with_capacity(source.morphism_count());
        for f in 0..source.morphism_count() {
            let map = source
                .map(f)
                .ok_or_else(|| Error::InvalidExpansion("source morphisms carry no element maps".into()))?;
            let (a, b) = (object_map[source.dom(f)], object_map[source.cod(f)]);
            let image = target.find_map(a, b, map).ok_or_else(|| {
                Error::InvalidExpansion(format!(
                    "morphism {map:?} from {} to {} is not a morphism {} -> {}",
                    source.name(source.dom(f)),
                    source.name(source.cod(f)),
                    target.name(a),
                    target.name(b)
                ))
            })?;
            morphism_map.push(image);
        }
        let functor = Functor::new(&source, &target, object_map, morphism_map)?;
        Expansion::new(source, target, functor)
    }

    /// The identity expansion of a category.
    pub fn identity(cat: FiniteCategory) -> Result<Self> {
        let functor = Functor::identity(&cat);
        Expansion::new(cat.clone(), cat, functor)
    }

    /// First failed axiom: functoriality, surjectivity on objects, faithfulness.
    pub fn axiom_violation(
        source: &FiniteCategory,
        target: &FiniteCategory,
        functor: &Functor,
    ) -> Option<FunctorViolation> {
        functor
            .functoriality_violation(source, target)
            .or_else(|| functor.surjectivity_violation(target))
            .or_else(|| functor.faithfulness_violation(source))
    }

    pub fn source(&self) -> &FiniteCategory {
        &self.source
    }

    pub fn target(&self) -> &FiniteCategory {
        &self.target
    }

    pub fn functor(&self) -> &Functor {
        &self.functor
    }

    /// `U(A*)`.
    pub fn project(&self, a_star: ObjectId) -> ObjectId {
        self.functor.object(a_star)
    }

    /// `U(f*)`.
    pub fn image(&self, f_star: MorphismId) -> MorphismId {
        self.functor.morphism(f_star)
    }

    /// `U^{-1}(A)` in object order.
    pub fn fiber(&self, a: ObjectId) -> Result<Vec<ObjectId>> {
        if a >= self.target.object_count() {
            return Err(Error::Invalid(format!("object {a} is not in the target category")));
        }
        Ok(self.source.objects().filter(|&x| self.project(x) == a).collect())
    }

    /// Source morphisms into `b_star` lying over `f`.
    pub fn lifts(&self, b_star: ObjectId, f: MorphismId) -> &[MorphismId] {
        self.lifts.get(&(b_star, f)).map(Vec::as_slice).unwrap_or(&[])
    }

    /// Decides both restriction properties by how the fibers cover each hom-set.
    pub fn classify_restrictions(&self) -> RestrictionReport {
        let mut report = RestrictionReport {
            has_restrictions: true,
            has_unique_restrictions: true,
            uncovered: None,
            overlap: None,
            checked: 0,
        };
        for b_star in self.source.objects() {
            let b = self.project(b_star);
            for a in self.target.objects() {
                report.checked += 1;
                for &f in self.target.hom(a, b) {
                    let lifts = self.lifts(b_star, f);
                    if lifts.is_empty() && report.uncovered.is_none() {
                        report.has_restrictions = false;
                        report.has_unique_restrictions = false;
                        report.uncovered = Some(Uncovered {
                            morphism: f,
                            expanded_target: b_star,
                        });
                    }
                    if lifts.len() > 1 && report.overlap.is_none() {
                        report.has_unique_restrictions = false;
                        report.overlap = Some(Overlap {
                            morphism: f,
                            expanded_target: b_star,
                            first: self.source.dom(lifts[0]),
                            second: self.source.dom(lifts[1]),
                        });
                    }
                }
            }
        }
        report
    }

    /// The unique `A*` over `dom f` with `f` in `hom(A*, B*)`.
    pub fn restriction(&self, b_star: ObjectId, f: MorphismId) -> Result<Restriction> {
        if self.target.cod(f) != self.project(b_star) {
            return Err(Error::Invalid(format!(
                "morphism {f} does not end at U({})",
                self.source.name(b_star)
            )));
        }
        match self.lifts(b_star, f) {
            [m] => Ok(Restriction {
                object: self.source.dom(*m),
                morphism: *m,
            }),
            [] => Err(Error::RestrictionNotUnique(format!(
                "morphism {f} has no restriction to {}",
                self.source.name(b_star)
            ))),
            _ => Err(Error::RestrictionNotUnique(format!(
                "morphism {f} restricts to {} in more than one way",
                self.source.name(b_star)
            ))),
        }
    }

    /// Automorphism counting checks on `a`, choosing the first fiber member.
    pub fn aut_count_identity(&self, a: ObjectId) -> Result<AutCountReport> {
        let fiber = self.fiber(a)?;
        let chosen = fiber[0];
        let isomorphic: Vec<ObjectId> = fiber
            .iter()
            .copied()
            .filter(|&x| !self.source.isomorphisms(x, chosen).is_empty())
            .collect();
        let aut_target = self.target.automorphisms(a);
        let aut_source = self.source.automorphisms(chosen).len();
        let mut counted = 0usize;
        let mut disjoint = true;
        for &alpha in &aut_target {
            let hits = self
                .lifts(chosen, alpha)
                .iter()
                .filter(|&&m| {
                    let d = self.source.dom(m);
                    isomorphic.contains(&d) && self.source.isomorphisms(d, chosen).contains(&m)
                })
                .count();
            counted += hits;
            if hits != 1 {
                disjoint = false;
            }
        }
        let iso_total: usize = isomorphic
            .iter()
            .map(|&x| self.source.isomorphisms(x, chosen).len())
            .sum();
        disjoint &= counted == iso_total;
        Ok(AutCountReport {
            object: a,
            chosen,
            holds: aut_target.len() == isomorphic.len() * aut_source,
            isomorphic_fiber: isomorphic,
            aut_target: aut_target.len(),
            aut_source,
            disjoint_union: disjoint,
        })
    }

    /// First `(f, A*)` that cannot be pushed forward along `f`.
    pub fn reasonable_failure(&self) -> Option<(MorphismId, ObjectId)> {
        for f in 0..self.target.morphism_count() {
            let (a, b) = (self.target.dom(f), self.target.cod(f));
            let targets: Vec<ObjectId> = self.source.objects().filter(|&x| self.project(x) == b).collect();
            for a_star in self.source.objects().filter(|&x| self.project(x) == a) {
                let ok = targets
                    .iter()
                    .any(|&b_star| self.lifts(b_star, f).iter().any(|&m| self.source.dom(m) == a_star));
                if !ok {
                    return Some((f, a_star));
                }
            }
        }
        None
    }

    /// Least `B` such that every member of the fiber of `a` maps to every member over `B`.
    pub fn expansion_witness(&self, a: ObjectId) -> Result<Option<ObjectId>> {
        let over_a = self.fiber(a)?;
        for b in self.target.objects() {
            let over_b = self.fiber(b)?;
            if over_a
                .iter()
                .all(|&x| over_b.iter().all(|&y| !self.source.hom(x, y).is_empty()))
            {
                return Ok(Some(b));
            }
        }
        Ok(None)
    }

    pub fn property_checks(&self) -> Result<PropertyChecks> {
        let reasonable_failure = self.reasonable_failure();
        let witnesses = self
            .target
            .objects()
            .map(|a| self.expansion_witness(a))
            .collect::<Result<Vec<_>>>()?;
        Ok(PropertyChecks {
            reasonable: reasonable_failure.is_none(),
            reasonable_failure,
            expansion_property: witnesses.iter().all(Option::is_some),
            expansion_witnesses: witnesses,
        })
    }

    /// For every `w: S -> S` looks for `v: S* -> S*|w`.
    pub fn is_self_similar(&self, s_star: ObjectId) -> Result<SelfSimilarity> {
        let s = self.project(s_star);
        let mut witnesses = Vec::new();
        for &w in self.target.hom(s, s) {
            let r = self.restriction(s_star, w)?;
            match self.source.hom(s_star, r.object).first() {
                Some(&v) => witnesses.push((w, r.object, v)),
                None => {
                    return Ok(SelfSimilarity {
                        holds: false,
                        witnesses,
                        failure: Some(w),
                    })
                }
            }
        }
        Ok(SelfSimilarity {
            holds: true,
            witnesses,
            failure: None,
        })
    }

    /// The fiber of `a` split into isomorphism classes, each in object order.
    pub fn fiber_iso_classes(&self, a: ObjectId) -> Result<Vec<Vec<ObjectId>>> {
        let mut classes: Vec<Vec<ObjectId>> = Vec::new();
        for x in self.fiber(a)? {
            match classes
                .iter_mut()
                .find(|c| !self.source.isomorphisms(c[0], x).is_empty())
            {
                Some(c) => c.push(x),
                None => classes.push(vec![x]),
            }
        }
        Ok(classes)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::search::SearchConfig;
    use crate::structures::shorthand;

    fn p3_age() -> Expansion {
        order_age("P3", &shorthand("path 3").unwrap(), &SearchConfig::default()).unwrap()
    }

    #[test]
    fn fibers_of_path_age() {
        let u = p3_age();
        let c = u.target();
        let k2 = c.find_object("P3{0,1}").unwrap();
        let fiber = u.fiber(k2).unwrap();
        assert_eq!(fiber.len(), 2);
        assert!(!u.source().isomorphisms(fiber[0], fiber[1]).is_empty());
        let point = c.find_object("P3{0}").unwrap();
        assert_eq!(u.fiber(point).unwrap().len(), 1);
        assert!(u.fiber(c.object_count()).is_err());
    }

    #[test]
    fn restriction_pulls_back_the_order() {
        let u = p3_age();
        let (c, cs) = (u.target(), u.source());
        let s_star = cs.find_object("P3*0").unwrap();
        let k2 = c.find_object("P3{0,1}").unwrap();
        let p3 = c.find_object("P3").unwrap();
        let f = c.find_map(k2, p3, &[1, 2]).unwrap();
        let r = u.restriction(s_star, f).unwrap();
        let order = cs.structure(r.object).unwrap();
        let rel = order.signature().relation_index(ORDER).unwrap();
        assert!(order.holds(rel, &[0, 1]));
        let id = c.identity(p3);
        assert_eq!(u.restriction(s_star, id).unwrap().object, s_star);
    }

    #[test]
    fn restriction_along_flip_is_isomorphic() {
        let u = p3_age();
        let (c, cs) = (u.target(), u.source());
        let s_star = cs.find_object("P3*0").unwrap();
        let p3 = c.find_object("P3").unwrap();
        let flip = c.find_map(p3, p3, &[2, 1, 0]).unwrap();
        let r = u.restriction(s_star, flip).unwrap();
        assert_ne!(r.object, s_star);
        assert!(cs.isomorphisms(r.object, s_star).contains(&r.morphism));
    }

    #[test]
    fn path_age_has_unique_restrictions_and_is_self_similar() {
        let u = p3_age();
        let r = u.classify_restrictions();
        assert!(r.has_unique_restrictions, "{r:?}");
        let checks = u.property_checks().unwrap();
        assert!(checks.reasonable);
        let s_star = u.source().find_object("P3*0").unwrap();
        let sim = u.is_self_similar(s_star).unwrap();
        assert!(sim.holds);
        assert_eq!(sim.witnesses.len(), 2);
        let k2 = u.target().find_object("P3{0,1}").unwrap();
        let count = u.aut_count_identity(k2).unwrap();
        assert!(count.holds && count.disjoint_union);
        assert_eq!(
            (count.aut_target, count.isomorphic_fiber.len(), count.aut_source),
            (2, 2, 1)
        );
    }

    #[test]
    fn dropping_an_expanded_object_breaks_restrictions() {
        let pool: Vec<(String, crate::structures::Structure)> = vec![("K2".into(), shorthand("clique 2").unwrap())];
        let full = order_forgetting(&pool).unwrap();
        assert!(full.classify_restrictions().has_unique_restrictions);
        let target = full.target().clone();
        let kept = full.source().structure(0).unwrap().clone();
        let source = FiniteCategory::from_pool(vec![("K2[0<1]".into(), kept)]).unwrap();
        let partial = Expansion::by_element_maps(source, target, vec![0]).unwrap();
        let r = partial.classify_restrictions();
        assert!(!r.has_restrictions);
        let swap = partial.target().find_map(0, 0, &[1, 0]).unwrap();
        assert_eq!(r.uncovered.unwrap().morphism, swap);
    }

    #[test]
    fn collapsing_morphisms_is_rejected() {
        let c =
            crate::category::FiniteCategory::from_pool(vec![("K2".into(), shorthand("clique 2").unwrap())]).unwrap();
        let f = Functor::new(&c, &c, vec![0], vec![0, 0]).unwrap();
        assert!(matches!(
            Expansion::new(c.clone(), c.clone(), f),
            Err(Error::InvalidExpansion(_))
        ));
        assert!(
            Expansion::identity(c)
                .unwrap()
                .classify_restrictions()
                .has_unique_restrictions
        );
    }

    /// Target: one object with `hom = {1, e}`, `e . e = e`. Source: `X`, `Y` over
    /// it with `hom(X,X) = {1}`, `hom(Y,X) = {e}`, `hom(Y,Y) = {1, e}`.
    fn idempotent_expansion() -> Expansion {
        let target = FiniteCategory::from_table(
            vec!["S".into()],
            vec![(0, 0, "1".into()), (0, 0, "e".into())],
            vec![0],
            vec![(0, 0, 0), (0, 1, 1), (1, 0, 1), (1, 1, 1)],
        )
        .unwrap();
        let source = FiniteCategory::from_table(
            vec!["X".into(), "Y".into()],
            vec![
                (0, 0, "1X".into()),
                (1, 0, "eYX".into()),
                (1, 1, "1Y".into()),
                (1, 1, "eY".into()),
            ],
            vec![0, 2],
            vec![
                (0, 0, 0),
                (0, 1, 1),
                (1, 2, 1),
                (1, 3, 1),
                (2, 2, 2),
                (2, 3, 3),
                (3, 2, 3),
                (3, 3, 3),
            ],
        )
        .unwrap();
        let functor = Functor::new(&source, &target, vec![0, 0], vec![0, 1, 0, 1]).unwrap();
        Expansion::new(source, target, functor).unwrap()
    }

    #[test]
    fn idempotent_host_is_not_self_similar() {
        let u = idempotent_expansion();
        assert!(u.source().validate(&SearchConfig::default()).unwrap().valid);
        assert!(u.classify_restrictions().has_unique_restrictions);
        let sim = u.is_self_similar(0).unwrap();
        assert!(!sim.holds);
        assert_eq!(sim.failure, Some(1));
        assert!(u.is_self_similar(1).unwrap().holds);
    }
}
