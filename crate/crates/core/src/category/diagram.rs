use serde::Serialize;

use super::{FiniteCategory, MorphismId, ObjectId};
use crate::error::{Error, Result};
use crate::search::{Budget, SearchConfig};

/// Acyclic bipartite shape in which every bottom vertex sends exactly two
/// arrows to distinct top vertices.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct BinaryDigraph {
    tops: usize,
    /// Targets of the two arrows leaving each bottom vertex.
    bottoms: Vec<(usize, usize)>,
}

/// A connected component: its top vertices and the bottoms joining them.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Component {
    pub tops: Vec<usize>,
    pub bottoms: Vec<usize>,
}

impl BinaryDigraph {
    pub fn new(tops: usize, bottoms: Vec<(usize, usize)>) -> Result<Self> {
        for (i, &(x, y)) in bottoms.iter().enumerate() {
            if x >= tops || y >= tops {
                return Err(Error::Invalid(format!("bottom {i} points outside the top vertices")));
            }
            if x == y {
                return Err(Error::Invalid(format!("bottom {i} sends both arrows to one vertex")));
            }
        }
        Ok(BinaryDigraph { tops, bottoms })
    }

    pub fn tops(&self) -> usize {
        self.tops
    }

    pub fn bottoms(&self) -> &[(usize, usize)] {
        &self.bottoms
    }

    /// Arrow ids run `2i` and `2i + 1` for bottom `i`.
    pub fn arrow_count(&self) -> usize {
        2 * self.bottoms.len()
    }

    /// Components ordered by least top vertex; isolated tops are their own component.
    pub fn connected_components(&self) -> Vec<Component> {
        let mut parent: Vec<usize> = (0..self.tops).collect();
        fn find(p: &mut [usize], x: usize) -> usize {
            let mut r = x;
            while p[r] != r {
                r = p[r];
            }
            let mut y = x;
            while p[y] != r {
                let next = p[y];
                p[y] = r;
                y = next;
            }
            r
        }
        for &(x, y) in &self.bottoms {
            let (rx, ry) = (find(&mut parent, x), find(&mut parent, y));
            if rx != ry {
                parent[rx.max(ry)] = rx.min(ry);
            }
        }
        let mut comps: Vec<Component> = Vec::new();
        let mut slot = vec![usize::MAX; self.tops];
        for t in 0..self.tops {
            let r = find(&mut parent, t);
            if slot[r] == usize::MAX {
                slot[r] = comps.len();
                comps.push(Component {
                    tops: Vec::new(),
                    bottoms: Vec::new(),
                });
            }
            comps[slot[r]].tops.push(t);
        }
        for (i, &(x, _)) in self.bottoms.iter().enumerate() {
            let r = find(&mut parent, x);
            comps[slot[r]].bottoms.push(i);
        }
        comps
    }
}

/// A diagram of shape `shape` sending every bottom to `a`, every top to `b`
/// and every arrow to a morphism `a -> b`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Diagram {
    pub shape: BinaryDigraph,
    pub a: ObjectId,
    pub b: ObjectId,
    pub arrows: Vec<MorphismId>,
}

impl Diagram {
    pub fn new(
        cat: &FiniteCategory,
        shape: BinaryDigraph,
        a: ObjectId,
        b: ObjectId,
        arrows: Vec<MorphismId>,
    ) -> Result<Self> {
        if arrows.len() != shape.arrow_count() {
            return Err(Error::Invalid("one morphism per arrow is required".into()));
        }
        if arrows
            .iter()
            .any(|&m| m >= cat.morphism_count() || cat.dom(m) != a || cat.cod(m) != b)
        {
            return Err(Error::Invalid("diagram arrows must lie in hom(a, b)".into()));
        }
        Ok(Diagram { shape, a, b, arrows })
    }

    /// Every assignment of morphisms `a -> b` to the arrows of `shape`.
    pub fn enumerate(
        cat: &FiniteCategory,
        shape: &BinaryDigraph,
        a: ObjectId,
        b: ObjectId,
        cfg: &SearchConfig,
    ) -> Result<Vec<Diagram>> {
        let hom = cat.hom(a, b);
        let k = shape.arrow_count();
        let total = (hom.len() as u64).saturating_pow(k as u32);
        cfg.check("diagram assignments", total)?;
        let mut out = Vec::new();
        if hom.is_empty() && k > 0 {
            return Ok(out);
        }
        let mut digits = vec![0usize; k];
        'all: loop {
            out.push(Diagram {
                shape: shape.clone(),
                a,
                b,
                arrows: digits.iter().map(|&d| hom[d]).collect(),
            });
            let mut i = k;
            loop {
                if i == 0 {
                    break 'all;
                }
                i -= 1;
                digits[i] += 1;
                if digits[i] < hom.len() {
                    break;
                }
                digits[i] = 0;
            }
        }
        Ok(out)
    }
}

/// The lexicographically least commuting cocone with the given tip, if any.
///
/// A cocone assigns `e_t: b -> tip` to each top `t` so that both arrows out
/// of every bottom become equal after composing.
pub fn has_commuting_cocone(
    cat: &FiniteCategory,
    diagram: &Diagram,
    tip: ObjectId,
    cfg: &SearchConfig,
) -> Result<Option<Vec<MorphismId>>> {
    let legs = cat.hom(diagram.b, tip);
    let tops = diagram.shape.tops();
    let budget = Budget::new("cocone search", cfg.guard);
    // Bottoms to check once a given top is assigned, with the other top lower.
    let mut checks: Vec<Vec<(usize, usize, MorphismId, MorphismId)>> = vec![Vec::new(); tops];
    for (i, &(x, y)) in diagram.shape.bottoms().iter().enumerate() {
        let (p, q) = (diagram.arrows[2 * i], diagram.arrows[2 * i + 1]);
        let (hi, lo, p_hi, p_lo) = if x > y { (x, y, p, q) } else { (y, x, q, p) };
        checks[hi].push((hi, lo, p_hi, p_lo));
    }
    let mut chosen = vec![usize::MAX; tops];
    fn go(
        cat: &FiniteCategory,
        legs: &[MorphismId],
        checks: &[Vec<(usize, usize, MorphismId, MorphismId)>],
        chosen: &mut Vec<MorphismId>,
        t: usize,
        budget: &Budget,
    ) -> Result<bool> {
        if t == chosen.len() {
            return Ok(true);
        }
        for &e in legs {
            budget.tick()?;
            chosen[t] = e;
            let ok = checks[t]
                .iter()
                .all(|&(hi, lo, p_hi, p_lo)| cat.comp(chosen[hi], p_hi) == cat.comp(chosen[lo], p_lo));
            if ok && go(cat, legs, checks, chosen, t + 1, budget)? {
                return Ok(true);
            }
        }
        Ok(false)
    }
    if go(cat, legs, &checks, &mut chosen, 0, &budget)? {
        Ok(Some(chosen))
    } else {
        Ok(None)
    }
}

/// Least tip, in object order, carrying a commuting cocone.
pub fn commuting_cocone_any_tip(
    cat: &FiniteCategory,
    diagram: &Diagram,
    cfg: &SearchConfig,
) -> Result<Option<(ObjectId, Vec<MorphismId>)>> {
    for tip in cat.objects() {
        if let Some(legs) = has_commuting_cocone(cat, diagram, tip, cfg)? {
            return Ok(Some((tip, legs)));
        }
    }
    Ok(None)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::category::tests::pool;

    #[test]
    fn components_walk_through_bottoms() {
        let g = BinaryDigraph::new(4, vec![(0, 1), (1, 2)]).unwrap();
        let comps = g.connected_components();
        assert_eq!(comps.len(), 2);
        assert_eq!(comps[0].tops, vec![0, 1, 2]);
        assert_eq!(comps[0].bottoms, vec![0, 1]);
        assert_eq!(comps[1].tops, vec![3]);
        assert!(BinaryDigraph::new(2, vec![(1, 1)]).is_err());
    }

    #[test]
    fn distinct_points_have_no_cocone_into_two_chain() {
        let c = pool(&["chain 1", "chain 2"]);
        let cfg = SearchConfig::default();
        let shape = BinaryDigraph::new(2, vec![(0, 1)]).unwrap();
        let h = c.hom(0, 1).to_vec();
        let d = Diagram::new(&c, shape.clone(), 0, 1, vec![h[0], h[1]]).unwrap();
        assert_eq!(has_commuting_cocone(&c, &d, 1, &cfg).unwrap(), None);
        let same = Diagram::new(&c, shape, 0, 1, vec![h[0], h[0]]).unwrap();
        assert!(has_commuting_cocone(&c, &same, 1, &cfg).unwrap().is_some());
    }

    #[test]
    fn larger_tip_admits_cocone() {
        let c = pool(&["chain 1", "chain 2", "chain 3"]);
        let cfg = SearchConfig::default();
        let shape = BinaryDigraph::new(2, vec![(0, 1)]).unwrap();
        let h = c.hom(0, 1).to_vec();
        let d = Diagram::new(&c, shape.clone(), 0, 1, vec![h[0], h[1]]).unwrap();
        let (tip, legs) = commuting_cocone_any_tip(&c, &d, &cfg).unwrap().unwrap();
        assert_eq!(tip, 2);
        assert_eq!(legs.len(), 2);
        assert_eq!(Diagram::enumerate(&c, &shape, 0, 1, &cfg).unwrap().len(), 4);
    }
}
