use std::collections::{HashMap, HashSet};

use serde::Serialize;

use super::{FiniteCategory, MorphismId, ObjectId};
use crate::error::Result;
use crate::search::SearchConfig;

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct MonoCounterexample {
    /// The morphism that fails to cancel.
    pub f: MorphismId,
    pub g: MorphismId,
    pub h: MorphismId,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Predicates {
    pub all_mono: bool,
    pub mono_counterexample: Option<MonoCounterexample>,
    pub directed: bool,
    /// Least pair of objects with no common target.
    pub directed_counterexample: Option<(ObjectId, ObjectId)>,
    pub amalgamation: bool,
    /// Least span `(f, g)` with common domain and no amalgam.
    pub amalgamation_counterexample: Option<(MorphismId, MorphismId)>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum UniversalityFailure {
    NoMorphism { object: ObjectId },
    NotMono { morphism: MorphismId },
}

/// A minimal joint factorization `e = r . p`, `f = r . q` through `object`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct AmalgamWitness {
    pub e: MorphismId,
    pub f: MorphismId,
    pub object: ObjectId,
    pub r: MorphismId,
    pub p: MorphismId,
    pub q: MorphismId,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct LocalFiniteness {
    pub holds: bool,
    pub witnesses: Vec<AmalgamWitness>,
    /// First pair `(e, f)` with no minimal joint factorization.
    pub failure: Option<(MorphismId, MorphismId)>,
}

impl FiniteCategory {
    /// A pair `g != h` with `f . g = f . h`, if `f` is not mono.
    pub fn mono_counterexample(&self, f: MorphismId) -> Option<(MorphismId, MorphismId)> {
        let b = self.dom(f);
        for x in self.objects() {
            let mut seen: HashMap<MorphismId, MorphismId> = HashMap::new();
            for &g in self.hom(x, b) {
                let fg = self.comp(f, g);
                if let Some(&h) = seen.get(&fg) {
                    return Some((h, g));
                }
                seen.insert(fg, g);
            }
        }
        None
    }

    pub fn is_mono(&self, f: MorphismId) -> bool {
        self.mono_counterexample(f).is_none()
    }

    pub fn all_mono(&self) -> Option<MonoCounterexample> {
        (0..self.morphism_count())
            .find_map(|f| self.mono_counterexample(f).map(|(g, h)| MonoCounterexample { f, g, h }))
    }

    /// First pair `(a, b)`, `a <= b`, with no object receiving both.
    pub fn directed_counterexample(&self) -> Option<(ObjectId, ObjectId)> {
        let n = self.object_count();
        for a in 0..n {
            for b in a..n {
                if !(0..n).any(|c| !self.hom(a, c).is_empty() && !self.hom(b, c).is_empty()) {
                    return Some((a, b));
                }
            }
        }
        None
    }

    /// Least span `(f, g)` that admits no amalgam inside the category.
    pub fn amalgamation_counterexample(&self) -> Option<(MorphismId, MorphismId)> {
        for a in self.objects() {
            let out = self.outgoing(a);
            for &f in out {
                for &g in out {
                    if !self.amalgamates(f, g) {
                        return Some((f, g));
                    }
                }
            }
        }
        None
    }

    fn amalgamates(&self, f: MorphismId, g: MorphismId) -> bool {
        let (b, c) = (self.cod(f), self.cod(g));
        self.objects().any(|d| {
            let via_f: HashSet<MorphismId> = self.hom(b, d).iter().map(|&f2| self.comp(f2, f)).collect();
            self.hom(c, d).iter().any(|&g2| via_f.contains(&self.comp(g2, g)))
        })
    }

    /// Decides every structural predicate exhaustively.
    pub fn predicates(&self) -> Predicates {
        let mono = self.all_mono();
        let directed = self.directed_counterexample();
        let amalgamation = self.amalgamation_counterexample();
        Predicates {
            all_mono: mono.is_none(),
            mono_counterexample: mono,
            directed: directed.is_none(),
            directed_counterexample: directed,
            amalgamation: amalgamation.is_none(),
            amalgamation_counterexample: amalgamation,
        }
    }

    /// Why `s` fails to be universal for the objects `d`, if it does.
    pub fn universality_failure(&self, s: ObjectId, d: &[ObjectId]) -> Option<UniversalityFailure> {
        for &x in d {
            let homs = self.hom(x, s);
            if homs.is_empty() {
                return Some(UniversalityFailure::NoMorphism { object: x });
            }
            if let Some(&m) = homs.iter().find(|&&m| !self.is_mono(m)) {
                return Some(UniversalityFailure::NotMono { morphism: m });
            }
        }
        None
    }

    /// Every object of `d` maps into `s`, and every such morphism is mono.
    pub fn is_universal_for(&self, s: ObjectId, d: &[ObjectId]) -> bool {
        self.universality_failure(s, d).is_none()
    }

    /// Local finiteness of `s` for the full subcategory on `d`.
    ///
    /// For every `e: A -> s`, `f: B -> s` with `A, B` in `d`, looks for the
    /// least `(D, r, p, q)` with `r . p = e`, `r . q = f` such that every other
    /// such `(H, r', p', q')` receives some `s': D -> H` with `r' . s' = r`,
    /// `s' . p = p'` and `s' . q = q'`.
    pub fn local_finiteness(&self, s: ObjectId, d: &[ObjectId], cfg: &SearchConfig) -> Result<LocalFiniteness> {
        // Every r: D -> s together with the factorizations through it.
        struct Cone {
            object: ObjectId,
            r: MorphismId,
            factor: HashMap<MorphismId, MorphismId>,
        }
        let mut cones = Vec::new();
        for &obj in d {
            for &r in self.hom(obj, s) {
                let mut factor = HashMap::new();
                for &x in d {
                    for &p in self.hom(x, obj) {
                        factor.entry(self.comp(r, p)).or_insert(p);
                    }
                }
                cones.push(Cone { object: obj, r, factor });
            }
        }
        let maps_in: Vec<MorphismId> = d.iter().flat_map(|&x| self.hom(x, s).iter().copied()).collect();
        let work = (maps_in.len() as u64)
            .saturating_pow(2)
            .saturating_mul(cones.len() as u64);
        cfg.check("local finiteness candidates", work)?;
        let mut witnesses = Vec::new();
        for &e in &maps_in {
            for &f in &maps_in {
                let joint: Vec<(&Cone, MorphismId, MorphismId)> = cones
                    .iter()
                    .filter_map(|c| Some((c, *c.factor.get(&e)?, *c.factor.get(&f)?)))
                    .collect();
                let minimal = joint.iter().find(|(c, p, q)| {
                    joint.iter().all(|(h, p2, q2)| {
                        self.hom(c.object, h.object).iter().any(|&sm| {
                            self.comp(h.r, sm) == c.r && self.comp(sm, *p) == *p2 && self.comp(sm, *q) == *q2
                        })
                    })
                });
                match minimal {
                    Some((c, p, q)) => witnesses.push(AmalgamWitness {
                        e,
                        f,
                        object: c.object,
                        r: c.r,
                        p: *p,
                        q: *q,
                    }),
                    None => {
                        return Ok(LocalFiniteness {
                            holds: false,
                            witnesses,
                            failure: Some((e, f)),
                        })
                    }
                }
            }
        }
        Ok(LocalFiniteness {
            holds: true,
            witnesses,
            failure: None,
        })
    }

    /// Least `(f, g)` with `f: a -> b`, `g: s -> s` and
    /// `g . hom(a, s)` contained in `hom(b, s) . f`.
    pub fn weak_homogeneity_witness(&self, s: ObjectId, a: ObjectId, b: ObjectId) -> Option<(MorphismId, MorphismId)> {
        let into_s = self.hom(a, s);
        for &f in self.hom(a, b) {
            let through_b: HashSet<MorphismId> = self.hom(b, s).iter().map(|&h| self.comp(h, f)).collect();
            for &g in self.hom(s, s) {
                if into_s.iter().all(|&x| through_b.contains(&self.comp(g, x))) {
                    return Some((f, g));
                }
            }
        }
        None
    }

    pub fn is_weakly_homogeneous_pair(&self, s: ObjectId, a: ObjectId, b: ObjectId) -> bool {
        self.weak_homogeneity_witness(s, a, b).is_some()
    }

    /// A triple `(f, g)` with `f: A -> B`, `g: A -> s` in `d` that does not
    /// extend along `f`; none means `s` is weakly homogeneous for `d`.
    pub fn extension_failure(&self, s: ObjectId, d: &[ObjectId]) -> Option<(MorphismId, MorphismId)> {
        for &a in d {
            for &b in d {
                for &f in self.hom(a, b) {
                    let extended: HashSet<MorphismId> = self.hom(b, s).iter().map(|&h| self.comp(h, f)).collect();
                    if let Some(&g) = self.hom(a, s).iter().find(|g| !extended.contains(g)) {
                        return Some((f, g));
                    }
                }
            }
        }
        None
    }
}

#[cfg(test)]
mod tests {
    use crate::category::tests::pool;
    use crate::search::SearchConfig;

    #[test]
    fn chains_are_directed_but_do_not_amalgamate_in_a_bounded_pool() {
        let c = pool(&["chain 1", "chain 2", "chain 3", "chain 4"]);
        let p = c.predicates();
        assert!(p.all_mono && p.directed);
        // Two points of C4 over a point at the bottom and the top need C7.
        assert!(!p.amalgamation);
        let (f, g) = p.amalgamation_counterexample.unwrap();
        assert_eq!(c.dom(f), c.dom(g));
        assert!(pool(&["chain 1"]).predicates().amalgamation);
    }

    #[test]
    fn two_and_three_chains_fail_amalgamation() {
        let c = pool(&["chain 2", "chain 3"]);
        assert!(!c.predicates().amalgamation);
    }

    #[test]
    fn universality() {
        let c = pool(&["clique 2", "emptygraph 2", "path 3", "clique 3"]);
        assert!(c.is_universal_for(2, &[0, 1]));
        assert!(!c.is_universal_for(2, &[3]));
    }

    #[test]
    fn local_finiteness_of_chains() {
        let cfg = SearchConfig::default();
        let c = pool(&["chain 1", "chain 2", "chain 3", "chain 4"]);
        assert!(c.local_finiteness(3, &[0, 1, 2, 3], &cfg).unwrap().holds);
        let lf = c.local_finiteness(3, &[0, 1], &cfg).unwrap();
        assert!(!lf.holds);
        let (e, f) = lf.failure.unwrap();
        let mut union: Vec<usize> = c.map(e).unwrap().to_vec();
        union.extend_from_slice(c.map(f).unwrap());
        union.sort_unstable();
        union.dedup();
        assert_eq!(union.len(), 3);
    }

    #[test]
    fn weak_homogeneity_examples() {
        let c = pool(&["chain 2", "chain 3", "chain 4"]);
        assert!(!c.is_weakly_homogeneous_pair(2, 0, 1));
        assert!(!c.is_weakly_homogeneous_pair(2, 1, 2));
        assert!(c.is_weakly_homogeneous_pair(2, 2, 2));
    }
}
