//! Explicit finite categories, their predicates and derived constructions.

mod diagram;
mod functor;
mod predicates;
mod sub;

use std::collections::HashMap;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::search::{SearchConfig, DEFAULT_GUARD};
use crate::structures::{enumerate_embeddings, serialize_structure, Embedding, Structure};

pub use diagram::{commuting_cocone_any_tip, has_commuting_cocone, BinaryDigraph, Component, Diagram};
pub use functor::{Functor, FunctorViolation};
pub use predicates::{AmalgamWitness, LocalFiniteness, MonoCounterexample, Predicates, UniversalityFailure};
pub use sub::SubPower;

pub type ObjectId = usize;
pub type MorphismId = usize;

/// Payload that identifies a morphism inside its hom-set.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum MorphismData {
    /// Element map of an embedding.
    Map(Vec<usize>),
    /// One base morphism per member of the domain's object family.
    Family(Vec<MorphismId>),
    /// Opaque label of a hand-built morphism.
    Label(String),
}

#[derive(Debug, Clone)]
pub struct Object {
    pub name: String,
    pub structure: Option<Structure>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Morphism {
    pub dom: ObjectId,
    pub cod: ObjectId,
    pub data: MorphismData,
}

const UNDEFINED: MorphismId = usize::MAX;

/// A finite category with every hom-set and composite listed explicitly.
///
/// Morphism ids are global, so distinct hom-sets never share an id. Within a
/// hom-set, ids increase in the order the morphisms were listed.
#[derive(Debug, Clone)]
pub struct FiniteCategory {
    objects: Vec<Object>,
    morphisms: Vec<Morphism>,
    homs: Vec<Vec<MorphismId>>,
    hom_pos: Vec<usize>,
    outgoing: Vec<Vec<MorphismId>>,
    out_pos: Vec<usize>,
    identities: Vec<MorphismId>,
    index: HashMap<(ObjectId, ObjectId, MorphismData), MorphismId>,
    /// `comp[f][out_pos[g]]` is `g` after `f`.
    comp: Vec<Vec<MorphismId>>,
}

/// How composites are produced while a category is assembled.
enum Rule<'a> {
    Table(&'a HashMap<(MorphismId, MorphismId), MorphismId>),
    Maps,
    Families(&'a sub::FamilyRule<'a>),
}

impl FiniteCategory {
    /// The category whose objects are the pool members and whose
    /// morphisms are all embeddings between them.
    pub fn from_pool(pool: Vec<(String, Structure)>) -> Result<Self> {
        FiniteCategory::from_pool_guarded(pool, DEFAULT_GUARD)
    }

    pub fn from_pool_guarded(pool: Vec<(String, Structure)>, guard: u64) -> Result<Self> {
        if let Some((_, first)) = pool.first() {
            if let Some((name, _)) = pool.iter().find(|(_, s)| s.signature() != first.signature()) {
                return Err(Error::SignatureMismatch(format!(
                    "pool member `{name}` has a different signature"
                )));
            }
        }
        let mut names: Vec<&str> = pool.iter().map(|(n, _)| n.as_str()).collect();
        names.sort_unstable();
        if let Some(w) = names.windows(2).find(|w| w[0] == w[1]) {
            return Err(Error::Invalid(format!("object name `{}` used twice", w[0])));
        }
        let mut morphisms = Vec::new();
        for (a, (_, sa)) in pool.iter().enumerate() {
            for (b, (_, sb)) in pool.iter().enumerate() {
                for e in enumerate_embeddings(sa, sb)? {
                    morphisms.push(Morphism {
                        dom: a,
                        cod: b,
                        data: MorphismData::Map(e.0),
                    });
                }
            }
        }
        let objects: Vec<Object> = pool
            .into_iter()
            .map(|(name, s)| Object {
                name,
                structure: Some(s),
            })
            .collect();
        let identities = (0..objects.len())
            .map(|a| {
                let n = objects[a].structure.as_ref().unwrap().size();
                morphisms
                    .iter()
                    .position(|m| m.dom == a && m.cod == a && m.data == MorphismData::Map((0..n).collect()))
                    .unwrap()
            })
            .collect();
        FiniteCategory::assemble(objects, morphisms, identities, Rule::Maps, guard)
    }

    /// A category given by explicit lists; the result is not validated.
    pub fn from_table(
        objects: Vec<String>,
        morphisms: Vec<(ObjectId, ObjectId, String)>,
        identities: Vec<MorphismId>,
        table: Vec<(MorphismId, MorphismId, MorphismId)>,
    ) -> Result<Self> {
        let n = objects.len();
        let m = morphisms.len();
        if morphisms.iter().any(|&(d, c, _)| d >= n || c >= n) {
            return Err(Error::InvalidCategory("morphism end out of range".into()));
        }
        if identities.len() != n || identities.iter().any(|&i| i >= m) {
            return Err(Error::InvalidCategory(
                "identity list does not match the objects".into(),
            ));
        }
        let mut map = HashMap::new();
        for (after, before, result) in table {
            if after >= m || before >= m || result >= m {
                return Err(Error::InvalidCategory("composition entry out of range".into()));
            }
            map.insert((after, before), result);
        }
        let objects = objects
            .into_iter()
            .map(|name| Object { name, structure: None })
            .collect();
        let morphisms = morphisms
            .into_iter()
            .map(|(dom, cod, label)| Morphism {
                dom,
                cod,
                data: MorphismData::Label(label),
            })
            .collect();
        FiniteCategory::assemble(objects, morphisms, identities, Rule::Table(&map), DEFAULT_GUARD)
    }

    fn assemble(
        objects: Vec<Object>,
        morphisms: Vec<Morphism>,
        identities: Vec<MorphismId>,
        rule: Rule<'_>,
        guard: u64,
    ) -> Result<Self> {
        let n = objects.len();
        let mut homs = vec![Vec::new(); n * n];
        let mut hom_pos = vec![0; morphisms.len()];
        let mut outgoing = vec![Vec::new(); n];
        let mut out_pos = vec![0; morphisms.len()];
        let mut index = HashMap::with_capacity(morphisms.len());
        for (id, m) in morphisms.iter().enumerate() {
            let h: &mut Vec<MorphismId> = &mut homs[m.dom * n + m.cod];
            hom_pos[id] = h.len();
            h.push(id);
            out_pos[id] = outgoing[m.dom].len();
            outgoing[m.dom].push(id);
            if index.insert((m.dom, m.cod, m.data.clone()), id).is_some() {
                return Err(Error::InvalidCategory(format!(
                    "morphism {id} duplicates another in the same hom-set"
                )));
            }
        }
        let pairs: u64 = morphisms.iter().map(|m| outgoing[m.cod].len() as u64).sum();
        SearchConfig::default()
            .with_guard(guard)
            .check("composition table", pairs)?;
        let mut cat = FiniteCategory {
            objects,
            morphisms,
            homs,
            hom_pos,
            outgoing,
            out_pos,
            identities,
            index,
            comp: Vec::new(),
        };
        let mut comp = Vec::with_capacity(cat.morphisms.len());
        for f in 0..cat.morphisms.len() {
            let mid = cat.morphisms[f].cod;
            let row: Vec<MorphismId> = cat.outgoing[mid]
                .iter()
                .map(|&g| cat.raw_compose(&rule, g, f))
                .collect::<Result<_>>()?;
            comp.push(row);
        }
        cat.comp = comp;
        Ok(cat)
    }

    fn raw_compose(&self, rule: &Rule<'_>, after: MorphismId, before: MorphismId) -> Result<MorphismId> {
        let f = &self.morphisms[before];
        let g = &self.morphisms[after];
        let data = match rule {
            Rule::Table(t) => return Ok(t.get(&(after, before)).copied().unwrap_or(UNDEFINED)),
            Rule::Maps => match (&f.data, &g.data) {
                (MorphismData::Map(fm), MorphismData::Map(gm)) => {
                    MorphismData::Map(fm.iter().map(|&x| gm[x]).collect())
                }
                _ => return Err(Error::Internal("map composition on non-map data".into())),
            },
            Rule::Families(r) => r.compose(f, g)?,
        };
        Ok(self.index.get(&(f.dom, g.cod, data)).copied().unwrap_or(UNDEFINED))
    }

    pub fn object_count(&self) -> usize {
        self.objects.len()
    }

    pub fn morphism_count(&self) -> usize {
        self.morphisms.len()
    }

    pub fn objects(&self) -> impl Iterator<Item = ObjectId> {
        0..self.objects.len()
    }

    pub fn object(&self, id: ObjectId) -> &Object {
        &self.objects[id]
    }

    pub fn name(&self, id: ObjectId) -> &str {
        &self.objects[id].name
    }

    pub fn structure(&self, id: ObjectId) -> Option<&Structure> {
        self.objects[id].structure.as_ref()
    }

    pub fn find_object(&self, name: &str) -> Option<ObjectId> {
        self.objects.iter().position(|o| o.name == name)
    }

    pub fn morphism(&self, id: MorphismId) -> &Morphism {
        &self.morphisms[id]
    }

    pub fn dom(&self, id: MorphismId) -> ObjectId {
        self.morphisms[id].dom
    }

    pub fn cod(&self, id: MorphismId) -> ObjectId {
        self.morphisms[id].cod
    }

    pub fn hom(&self, a: ObjectId, b: ObjectId) -> &[MorphismId] {
        &self.homs[a * self.objects.len() + b]
    }

    /// Position of a morphism inside its hom-set.
    pub fn position(&self, id: MorphismId) -> usize {
        self.hom_pos[id]
    }

    pub fn outgoing(&self, a: ObjectId) -> &[MorphismId] {
        &self.outgoing[a]
    }

    pub fn identity(&self, a: ObjectId) -> MorphismId {
        self.identities[a]
    }

    /// Element map of an embedding morphism.
    pub fn map(&self, id: MorphismId) -> Option<&[usize]> {
        match &self.morphisms[id].data {
            MorphismData::Map(m) => Some(m),
            _ => None,
        }
    }

    /// Looks a morphism up by its ends and payload.
    pub fn find_morphism(&self, dom: ObjectId, cod: ObjectId, data: &MorphismData) -> Option<MorphismId> {
        self.index.get(&(dom, cod, data.clone())).copied()
    }

    pub fn find_map(&self, dom: ObjectId, cod: ObjectId, map: &[usize]) -> Option<MorphismId> {
        self.find_morphism(dom, cod, &MorphismData::Map(map.to_vec()))
    }

    /// `after` composed with `before`, that is `after . before`.
    pub fn compose(&self, after: MorphismId, before: MorphismId) -> Result<MorphismId> {
        let f = &self.morphisms[before];
        let g = &self.morphisms[after];
        if f.cod != g.dom {
            return Err(Error::NotComposable { after, before });
        }
        match self.comp[before][self.out_pos[after]] {
            UNDEFINED => Err(Error::InvalidCategory(format!(
                "composite of {after} after {before} is not listed"
            ))),
            h => Ok(h),
        }
    }

    /// Fast composite lookup for ids already known to be composable.
    pub(crate) fn comp(&self, after: MorphismId, before: MorphismId) -> MorphismId {
        self.comp[before][self.out_pos[after]]
    }

    /// Invertible endomorphisms of `a` in id order.
    pub fn automorphisms(&self, a: ObjectId) -> Vec<MorphismId> {
        let id = self.identities[a];
        let ends = self.hom(a, a);
        ends.iter()
            .copied()
            .filter(|&x| ends.iter().any(|&y| self.comp(x, y) == id && self.comp(y, x) == id))
            .collect()
    }

    /// Isomorphisms `a -> b` in id order.
    pub fn isomorphisms(&self, a: ObjectId, b: ObjectId) -> Vec<MorphismId> {
        let (ia, ib) = (self.identities[a], self.identities[b]);
        let back = self.hom(b, a);
        self.hom(a, b)
            .iter()
            .copied()
            .filter(|&x| back.iter().any(|&y| self.comp(y, x) == ia && self.comp(x, y) == ib))
            .collect()
    }

    /// Classes of `hom(a, b)` under precomposition with automorphisms of `a`.
    pub fn hom_classes(&self, a: ObjectId, b: ObjectId) -> Vec<HomClass> {
        let aut = self.automorphisms(a);
        let mut class_of: HashMap<MorphismId, usize> = HashMap::new();
        let mut classes: Vec<HomClass> = Vec::new();
        for &f in self.hom(a, b) {
            if class_of.contains_key(&f) {
                continue;
            }
            let mut members: Vec<MorphismId> = aut.iter().map(|&alpha| self.comp(f, alpha)).collect();
            members.sort_unstable();
            members.dedup();
            for &m in &members {
                class_of.insert(m, classes.len());
            }
            classes.push(HomClass {
                representative: f,
                members,
            });
        }
        classes
    }

    /// Checks identity laws, closure and associativity.
    pub fn validate(&self, cfg: &SearchConfig) -> Result<CategoryReport> {
        let mut violations = Vec::new();
        let n = self.objects.len();
        for a in 0..n {
            let id = self.identities[a];
            if self.morphisms[id].dom != a || self.morphisms[id].cod != a {
                violations.push(Violation::MissingIdentity { object: a });
                continue;
            }
            for &f in &self.outgoing[a] {
                if self.comp(f, id) != f {
                    violations.push(Violation::RightIdentity { object: a, morphism: f });
                }
            }
            for (g, m) in self.morphisms.iter().enumerate() {
                if m.cod == a && self.comp(id, g) != g {
                    violations.push(Violation::LeftIdentity { object: a, morphism: g });
                }
            }
        }
        let mut pairs = 0u64;
        for f in 0..self.morphisms.len() {
            for &g in &self.outgoing[self.morphisms[f].cod] {
                pairs += 1;
                let h = self.comp(g, f);
                if h == UNDEFINED {
                    violations.push(Violation::Undefined { after: g, before: f });
                } else if self.morphisms[h].dom != self.morphisms[f].dom
                    || self.morphisms[h].cod != self.morphisms[g].cod
                {
                    violations.push(Violation::WrongEnds {
                        after: g,
                        before: f,
                        result: h,
                    });
                }
            }
        }
        let triples: u64 = (0..self.morphisms.len())
            .map(|f| {
                self.outgoing[self.morphisms[f].cod]
                    .iter()
                    .map(|&g| self.outgoing[self.morphisms[g].cod].len() as u64)
                    .sum::<u64>()
            })
            .sum();
        cfg.check("associativity triples", triples)?;
        for f in 0..self.morphisms.len() {
            for &g in &self.outgoing[self.morphisms[f].cod] {
                let gf = self.comp(g, f);
                for &h in &self.outgoing[self.morphisms[g].cod] {
                    let hg = self.comp(h, g);
                    let ends = |x: MorphismId, d: MorphismId, c: MorphismId| {
                        x != UNDEFINED
                            && self.morphisms[x].dom == self.morphisms[d].dom
                            && self.morphisms[x].cod == self.morphisms[c].cod
                    };
                    if !ends(gf, f, g) || !ends(hg, g, h) {
                        continue;
                    }
                    let left = self.comp(h, gf);
                    let right = self.comp(hg, f);
                    if left != right || left == UNDEFINED {
                        violations.push(Violation::Associativity { h, g, f });
                    }
                }
            }
        }
        Ok(CategoryReport {
            valid: violations.is_empty(),
            checked_pairs: pairs,
            checked_triples: triples,
            violations,
        })
    }

    /// The subcategory without the listed morphisms; fails if it is not closed.
    pub fn without_morphisms(&self, remove: &[MorphismId]) -> Result<FiniteCategory> {
        if remove.iter().any(|r| self.identities.contains(r)) {
            return Err(Error::InvalidCategory("cannot remove an identity".into()));
        }
        let keep: Vec<MorphismId> = (0..self.morphisms.len()).filter(|m| !remove.contains(m)).collect();
        let mut new_id = vec![UNDEFINED; self.morphisms.len()];
        for (i, &m) in keep.iter().enumerate() {
            new_id[m] = i;
        }
        let mut table = HashMap::new();
        for &f in &keep {
            for &g in &self.outgoing[self.morphisms[f].cod] {
                if new_id[g] == UNDEFINED {
                    continue;
                }
                let h = self.comp(g, f);
                if h == UNDEFINED || new_id[h] == UNDEFINED {
                    return Err(Error::InvalidCategory(format!(
                        "removing morphisms breaks closure at {g} after {f}"
                    )));
                }
                table.insert((new_id[g], new_id[f]), new_id[h]);
            }
        }
        let morphisms = keep.iter().map(|&m| self.morphisms[m].clone()).collect();
        let identities = self.identities.iter().map(|&i| new_id[i]).collect();
        FiniteCategory::assemble(
            self.objects.clone(),
            morphisms,
            identities,
            Rule::Table(&table),
            DEFAULT_GUARD,
        )
    }

    /// Serializable overview with hom-set sizes.
    pub fn summary(&self) -> CategorySummary {
        let n = self.objects.len();
        CategorySummary {
            objects: self
                .objects
                .iter()
                .map(|o| ObjectSummary {
                    name: o.name.clone(),
                    structure: o.structure.as_ref().map(serialize_structure),
                })
                .collect(),
            hom_sizes: (0..n).map(|a| (0..n).map(|b| self.hom(a, b).len()).collect()).collect(),
            morphism_count: self.morphisms.len(),
        }
    }

    /// Full dump including every morphism.
    pub fn dump(&self) -> serde_json::Value {
        serde_json::json!({
            "summary": self.summary(),
            "morphisms": self.morphisms,
            "identities": self.identities,
        })
    }

    /// Readable description of a morphism for reports.
    pub fn describe(&self, id: MorphismId) -> MorphismLabel {
        let m = &self.morphisms[id];
        MorphismLabel {
            id,
            dom: self.objects[m.dom].name.clone(),
            cod: self.objects[m.cod].name.clone(),
            data: m.data.clone(),
        }
    }

    pub fn embedding(&self, id: MorphismId) -> Option<Embedding> {
        self.map(id).map(|m| Embedding(m.to_vec()))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct HomClass {
    /// Least member by id.
    pub representative: MorphismId,
    pub members: Vec<MorphismId>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Violation {
    MissingIdentity {
        object: ObjectId,
    },
    LeftIdentity {
        object: ObjectId,
        morphism: MorphismId,
    },
    RightIdentity {
        object: ObjectId,
        morphism: MorphismId,
    },
    Undefined {
        after: MorphismId,
        before: MorphismId,
    },
    WrongEnds {
        after: MorphismId,
        before: MorphismId,
        result: MorphismId,
    },
    Associativity {
        h: MorphismId,
        g: MorphismId,
        f: MorphismId,
    },
}

#[derive(Debug, Clone, Serialize)]
pub struct CategoryReport {
    pub valid: bool,
    pub checked_pairs: u64,
    pub checked_triples: u64,
    pub violations: Vec<Violation>,
}

#[derive(Debug, Clone, Serialize)]
pub struct ObjectSummary {
    pub name: String,
    pub structure: Option<String>,
}

#[derive(Debug, Clone, Serialize)]
pub struct CategorySummary {
    pub objects: Vec<ObjectSummary>,
    pub hom_sizes: Vec<Vec<usize>>,
    pub morphism_count: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct MorphismLabel {
    pub id: MorphismId,
    pub dom: String,
    pub cod: String,
    pub data: MorphismData,
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::structures::shorthand;

    pub(crate) fn pool(names: &[&str]) -> FiniteCategory {
        FiniteCategory::from_pool(
            names
                .iter()
                .map(|n| (n.replace(' ', ""), shorthand(n).unwrap()))
                .collect(),
        )
        .unwrap()
    }

    #[test]
    fn pool_category_is_valid() {
        let c = pool(&["chain 1", "chain 2", "chain 3"]);
        let r = c.validate(&SearchConfig::default()).unwrap();
        assert!(r.valid, "{:?}", r.violations);
        assert_eq!(c.hom(0, 2).len(), 3);
        assert_eq!(c.hom(2, 1).len(), 0);
    }

    #[test]
    fn mixed_signatures_rejected() {
        let e = FiniteCategory::from_pool(vec![
            ("a".into(), shorthand("chain 2").unwrap()),
            ("b".into(), shorthand("clique 2").unwrap()),
        ]);
        assert!(matches!(e, Err(Error::SignatureMismatch(_))));
    }

    #[test]
    fn hom_classes_of_edge_in_path() {
        let c = pool(&["clique 2", "path 3"]);
        let classes = c.hom_classes(0, 1);
        assert_eq!(classes.len(), 2);
        assert!(classes.iter().all(|k| k.members.len() == 2));
        assert_eq!(classes[0].representative, c.hom(0, 1)[0]);
    }

    #[test]
    fn hand_built_table_violations() {
        // One object, two endomorphisms, with a wrong identity law.
        let c = FiniteCategory::from_table(
            vec!["X".into()],
            vec![(0, 0, "id".into()), (0, 0, "s".into())],
            vec![0],
            vec![(0, 0, 0), (1, 0, 0), (0, 1, 1), (1, 1, 0)],
        )
        .unwrap();
        let r = c.validate(&SearchConfig::default()).unwrap();
        assert!(!r.valid);
        assert!(r
            .violations
            .contains(&Violation::RightIdentity { object: 0, morphism: 1 }));
    }

    #[test]
    fn involution_table_is_valid() {
        let c = FiniteCategory::from_table(
            vec!["X".into()],
            vec![(0, 0, "id".into()), (0, 0, "s".into())],
            vec![0],
            vec![(0, 0, 0), (1, 0, 1), (0, 1, 1), (1, 1, 0)],
        )
        .unwrap();
        assert!(c.validate(&SearchConfig::default()).unwrap().valid);
        assert_eq!(c.automorphisms(0), vec![0, 1]);
    }

    #[test]
    fn removing_morphisms_checks_closure() {
        let c = pool(&["clique 2"]);
        let swap = c.hom(0, 0)[1];
        assert!(c.without_morphisms(&[swap]).is_ok());
        let k = pool(&["clique 1", "clique 2"]);
        let into = k.hom(0, 1).to_vec();
        // Dropping one of the two vertex maps leaves a composite with the swap missing.
        assert!(k.without_morphisms(&[into[0]]).is_err());
    }
}
