//! The subcategory of the power category spanned by the singletons and the whole category.

use super::{FiniteCategory, Morphism, MorphismData, MorphismId, Object, ObjectId, Rule};
use crate::error::{Error, Result};
use crate::search::{product, SearchConfig};

/// Composition of families over a base category.
pub(super) struct FamilyRule<'a> {
    base: &'a FiniteCategory,
    members: &'a [Vec<ObjectId>],
}

impl FamilyRule<'_> {
    /// `(g . f)_A = g_{cod f_A} . f_A`.
    pub(super) fn compose(&self, f: &Morphism, g: &Morphism) -> Result<MorphismData> {
        let (MorphismData::Family(fs), MorphismData::Family(gs)) = (&f.data, &g.data) else {
            return Err(Error::Internal("family composition on non-family data".into()));
        };
        let mid = &self.members[f.cod];
        let mut out = Vec::with_capacity(fs.len());
        for &fa in fs {
            let p = mid
                .iter()
                .position(|&o| o == self.base.cod(fa))
                .ok_or_else(|| Error::Internal("family entry leaves its target family".into()))?;
            out.push(self.base.compose(gs[p], fa)?);
        }
        Ok(MorphismData::Family(out))
    }
}

/// The category with objects `<A>` for each base object `A` and one object
/// for the whole base category.
#[derive(Debug, Clone)]
pub struct SubPower {
    pub category: FiniteCategory,
    /// Object standing for the whole base category.
    pub whole: ObjectId,
    /// `singleton[a]` stands for `<a>`.
    pub singleton: Vec<ObjectId>,
    /// Base objects indexed by each family member position.
    pub members: Vec<Vec<ObjectId>>,
}

impl SubPower {
    /// Base morphisms of a family morphism, one per member of its domain.
    pub fn family(&self, id: MorphismId) -> &[MorphismId] {
        match &self.category.morphism(id).data {
            MorphismData::Family(f) => f,
            _ => unreachable!("every morphism here is a family"),
        }
    }
}

impl FiniteCategory {
    /// Builds the singletons-plus-whole subcategory of the power category.
    ///
    /// A morphism from a family `X` to a family `Y` picks, for each member
    /// `B` of `X`, a base morphism from `B` into some member of `Y`.
    pub fn sub_power_category(&self, cfg: &SearchConfig) -> Result<SubPower> {
        let n = self.object_count();
        let mut members: Vec<Vec<ObjectId>> = (0..n).map(|a| vec![a]).collect();
        members.push((0..n).collect());
        let count = members.len();
        // For each base object and target family, the morphisms that may serve as an entry.
        let options = |b: ObjectId, target: &[ObjectId]| -> Vec<MorphismId> {
            self.outgoing(b)
                .iter()
                .copied()
                .filter(|&m| target.contains(&self.cod(m)))
                .collect()
        };
        let mut total = 0u64;
        for x in 0..count {
            for y in 0..count {
                let sizes = members[x].iter().map(|&b| options(b, &members[y]).len() as u64);
                total = total.saturating_add(product(sizes));
            }
        }
        cfg.check("families in the power category", total)?;
        let mut morphisms = Vec::new();
        for x in 0..count {
            for y in 0..count {
                let choices: Vec<Vec<MorphismId>> = members[x].iter().map(|&b| options(b, &members[y])).collect();
                if choices.iter().any(Vec::is_empty) {
                    continue;
                }
                let mut digits = vec![0usize; choices.len()];
                'families: loop {
                    let fam = digits.iter().zip(&choices).map(|(&d, c)| c[d]).collect();
                    morphisms.push(Morphism {
                        dom: x,
                        cod: y,
                        data: MorphismData::Family(fam),
                    });
                    // Advance with the last entry varying fastest.
                    let mut i = choices.len();
                    loop {
                        if i == 0 {
                            break 'families;
                        }
                        i -= 1;
                        digits[i] += 1;
                        if digits[i] < choices[i].len() {
                            break;
                        }
                        digits[i] = 0;
                    }
                }
            }
        }
        let identities: Vec<MorphismId> = (0..count)
            .map(|x| {
                let fam: Vec<MorphismId> = members[x].iter().map(|&b| self.identity(b)).collect();
                let data = MorphismData::Family(fam);
                morphisms
                    .iter()
                    .position(|m| m.dom == x && m.cod == x && m.data == data)
                    .unwrap()
            })
            .collect();
        let mut objects: Vec<Object> = (0..n)
            .map(|a| Object {
                name: format!("<{}>", self.name(a)),
                structure: None,
            })
            .collect();
        objects.push(Object {
            name: "C".to_string(),
            structure: None,
        });
        let rule = FamilyRule {
            base: self,
            members: &members,
        };
        let category = FiniteCategory::assemble(objects, morphisms, identities, Rule::Families(&rule), cfg.guard)?;
        Ok(SubPower {
            category,
            whole: n,
            singleton: (0..n).collect(),
            members,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::category::tests::pool;

    #[test]
    fn two_chain_pool() {
        let c = pool(&["chain 1", "chain 2"]);
        let sub = c.sub_power_category(&SearchConfig::default()).unwrap();
        let whole = sub.whole;
        assert_eq!(sub.category.hom(sub.singleton[0], whole).len(), 3);
        assert_eq!(sub.category.hom(whole, whole).len(), 3);
        assert!(sub.category.hom(whole, sub.singleton[0]).is_empty());
        let report = sub.category.validate(&SearchConfig::default()).unwrap();
        assert!(report.valid, "{:?}", report.violations);
    }

    #[test]
    fn guard_is_enforced() {
        let c = pool(&["chain 1", "chain 2", "chain 3"]);
        let tight = SearchConfig::default().with_guard(5);
        assert!(matches!(c.sub_power_category(&tight), Err(Error::GuardExceeded { .. })));
    }
}
