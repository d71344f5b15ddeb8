use serde::Serialize;

use super::{FiniteCategory, MorphismId, ObjectId};
use crate::error::{Error, Result};

/// A candidate functor given by explicit object and morphism maps.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Functor {
    pub object_map: Vec<ObjectId>,
    pub morphism_map: Vec<MorphismId>,
}

/// The first law a candidate functor breaks.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum FunctorViolation {
    WrongEnds { morphism: MorphismId },
    Identity { object: ObjectId },
    Composition { after: MorphismId, before: MorphismId },
    NotSurjectiveOnObjects { object: ObjectId },
    NotFaithful { first: MorphismId, second: MorphismId },
}

impl Functor {
    pub fn new(
        source: &FiniteCategory,
        target: &FiniteCategory,
        object_map: Vec<ObjectId>,
        morphism_map: Vec<MorphismId>,
    ) -> Result<Self> {
        if object_map.len() != source.object_count() || morphism_map.len() != source.morphism_count() {
            return Err(Error::Invalid("functor maps must be total on the source".into()));
        }
        if object_map.iter().any(|&o| o >= target.object_count())
            || morphism_map.iter().any(|&m| m >= target.morphism_count())
        {
            return Err(Error::Invalid("functor maps point outside the target".into()));
        }
        Ok(Functor {
            object_map,
            morphism_map,
        })
    }

    /// Identity of a category.
    pub fn identity(cat: &FiniteCategory) -> Self {
        Functor {
            object_map: cat.objects().collect(),
            morphism_map: (0..cat.morphism_count()).collect(),
        }
    }

    pub fn object(&self, a: ObjectId) -> ObjectId {
        self.object_map[a]
    }

    pub fn morphism(&self, f: MorphismId) -> MorphismId {
        self.morphism_map[f]
    }

    /// First violation of the functor laws, scanning morphisms in id order.
    pub fn functoriality_violation(
        &self,
        source: &FiniteCategory,
        target: &FiniteCategory,
    ) -> Option<FunctorViolation> {
        for f in 0..source.morphism_count() {
            let image = self.morphism_map[f];
            if target.dom(image) != self.object_map[source.dom(f)]
                || target.cod(image) != self.object_map[source.cod(f)]
            {
                return Some(FunctorViolation::WrongEnds { morphism: f });
            }
        }
        for a in source.objects() {
            if self.morphism_map[source.identity(a)] != target.identity(self.object_map[a]) {
                return Some(FunctorViolation::Identity { object: a });
            }
        }
        for f in 0..source.morphism_count() {
            for &g in source.outgoing(source.cod(f)) {
                let lhs = self.morphism_map[source.comp(g, f)];
                let rhs = target.comp(self.morphism_map[g], self.morphism_map[f]);
                if lhs != rhs {
                    return Some(FunctorViolation::Composition { after: g, before: f });
                }
            }
        }
        None
    }

    /// Least target object with an empty fiber.
    pub fn surjectivity_violation(&self, target: &FiniteCategory) -> Option<FunctorViolation> {
        let mut hit = vec![false; target.object_count()];
        for &o in &self.object_map {
            hit[o] = true;
        }
        hit.iter()
            .position(|&h| !h)
            .map(|object| FunctorViolation::NotSurjectiveOnObjects { object })
    }

    /// Least pair in one hom-set with equal images.
    pub fn faithfulness_violation(&self, source: &FiniteCategory) -> Option<FunctorViolation> {
        for a in source.objects() {
            for b in source.objects() {
                let hom = source.hom(a, b);
                for (i, &f) in hom.iter().enumerate() {
                    if let Some(&g) = hom[i + 1..]
                        .iter()
                        .find(|&&g| self.morphism_map[g] == self.morphism_map[f])
                    {
                        return Some(FunctorViolation::NotFaithful { first: f, second: g });
                    }
                }
            }
        }
        None
    }

    pub fn is_functor(&self, source: &FiniteCategory, target: &FiniteCategory) -> bool {
        self.functoriality_violation(source, target).is_none()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::category::tests::pool;

    #[test]
    fn identity_functor_is_valid() {
        let c = pool(&["clique 2", "path 3"]);
        let id = Functor::identity(&c);
        assert!(id.is_functor(&c, &c));
        assert_eq!(id.surjectivity_violation(&c), None);
        assert_eq!(id.faithfulness_violation(&c), None);
    }

    #[test]
    fn collapsing_a_hom_set_is_unfaithful() {
        let c = pool(&["clique 2"]);
        let collapse = Functor::new(&c, &c, vec![0], vec![0, 0]).unwrap();
        assert_eq!(
            collapse.faithfulness_violation(&c),
            Some(FunctorViolation::NotFaithful { first: 0, second: 1 })
        );
        // Sending the swap to the identity is a functor to the trivial quotient.
        assert!(collapse.is_functor(&c, &c));
        let bad = Functor::new(&c, &c, vec![0], vec![1, 1]).unwrap();
        assert_eq!(
            bad.functoriality_violation(&c, &c),
            Some(FunctorViolation::Identity { object: 0 })
        );
    }
}
