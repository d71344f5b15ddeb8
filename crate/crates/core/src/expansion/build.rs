//! Generators for the standard expansions.

use super::Expansion;
use crate::category::FiniteCategory;
use crate::error::{Error, Result};
use crate::formulas::{apply_reduct, ReductSpec};
use crate::search::SearchConfig;
use crate::structures::{are_isomorphic, enumerate_embeddings, induced_substructure, Structure};

/// Relation symbol carrying the added linear order.
pub const ORDER: &str = "<";

/// All permutations of `0..n` in lexicographic order; `p[i]` is the `i`-th least element.
pub fn linear_orders(n: usize) -> Vec<Vec<usize>> {
    let mut p: Vec<usize> = (0..n).collect();
    let mut out = vec![p.clone()];
    loop {
        let Some(i) = (1..n).rev().find(|&i| p[i - 1] < p[i]) else {
            return out;
        };
        let j = (i..n).rev().find(|&j| p[j] > p[i - 1]).unwrap();
        p.swap(i - 1, j);
        p[i..].reverse();
        out.push(p.clone());
    }
}

fn with_order(s: &Structure, order: &[usize]) -> Result<Structure> {
    if s.signature().has_symbol(ORDER) {
        return Err(Error::Invalid(format!("structure already has a `{ORDER}` symbol")));
    }
    let mut tuples = Vec::new();
    for i in 0..order.len() {
        for j in i + 1..order.len() {
            tuples.push(vec![order[i], order[j]]);
        }
    }
    s.with_relation(ORDER, 2, &tuples)
}

/// Every linear order on every pool member, forgotten onto the pool.
///
/// Expanded objects are named `NAME[a<b<...]`.
pub fn order_forgetting(pool: &[(String, Structure)]) -> Result<Expansion> {
    let target = FiniteCategory::from_pool(pool.to_vec())?;
    let mut expanded = Vec::new();
    let mut object_map = Vec::new();
    for (a, (name, s)) in pool.iter().enumerate() {
        for order in linear_orders(s.size()) {
            let label: Vec<String> = order.iter().map(|x| x.to_string()).collect();
            expanded.push((format!("{name}[{}]", label.join("<")), with_order(s, &order)?));
            object_map.push(a);
        }
    }
    let source = FiniteCategory::from_pool(expanded)?;
    Expansion::by_element_maps(source, target, object_map)
}

/// The age of `host` over its reduct `forget`.
///
/// Target objects are the reducts of induced substructures of `host`, one per
/// isomorphism type, taken in the order subsets appear by size and then
/// lexicographically; the whole host keeps `host_name`, others are named
/// `host_name{i,j,...}` after the subset that introduced them. The fiber of
/// each target object lists the distinct pullbacks of `host` along its
/// embeddings into the reduct of `host`, named `NAME*i`; `host_name*0` is the
/// host itself.
pub fn age_expansion(
    host_name: &str,
    host: &Structure,
    forget: &dyn Fn(&Structure) -> Result<Structure>,
    cfg: &SearchConfig,
) -> Result<Expansion> {
    let n = host.size();
    if n >= 63 {
        return Err(Error::GuardExceeded {
            what: "induced substructures".into(),
            needed: u64::MAX,
            limit: cfg.guard,
        });
    }
    cfg.check("induced substructures", 1u64 << n)?;
    let base = forget(host)?;
    let mut reps: Vec<(String, Structure)> = Vec::new();
    for size in 0..=n {
        for subset in combinations(n, size) {
            let sub = match induced_substructure(host, &subset) {
                Ok((s, _)) => s,
                Err(Error::ConstantOutsideSubset(_)) => continue,
                Err(e) => return Err(e),
            };
            let reduced = forget(&sub)?;
            let mut known = false;
            for (_, r) in &reps {
                if are_isomorphic(r, &reduced)?.is_some() {
                    known = true;
                    break;
                }
            }
            if !known {
                let name = if size == n {
                    host_name.to_string()
                } else {
                    let label: Vec<String> = subset.iter().map(|x| x.to_string()).collect();
                    format!("{host_name}{{{}}}", label.join(","))
                };
                reps.push((name, reduced));
            }
        }
    }
    let mut expanded: Vec<(String, Structure)> = Vec::new();
    let mut object_map = Vec::new();
    for (a, (name, rep)) in reps.iter().enumerate() {
        let mut fiber: Vec<Structure> = Vec::new();
        for e in enumerate_embeddings(rep, &base)? {
            let star = host.pullback(e.map())?;
            if forget(&star)? != *rep {
                return Err(Error::Internal(format!(
                    "reduct does not commute with pullback at {name}"
                )));
            }
            if !fiber.contains(&star) {
                fiber.push(star);
            }
        }
        for (i, star) in fiber.into_iter().enumerate() {
            expanded.push((format!("{name}*{i}"), star));
            object_map.push(a);
        }
    }
    let target = FiniteCategory::from_pool_guarded(reps, cfg.guard)?;
    let source = FiniteCategory::from_pool_guarded(expanded, cfg.guard)?;
    Expansion::by_element_maps(source, target, object_map)
}

/// The age of an ordered structure over its unordered reduct.
pub fn order_age(host_name: &str, unordered: &Structure, cfg: &SearchConfig) -> Result<Expansion> {
    let order: Vec<usize> = (0..unordered.size()).collect();
    let host = with_order(unordered, &order)?;
    age_expansion(host_name, &host, &|s: &Structure| s.forget_relation(ORDER), cfg)
}

/// The age of `host` over its reduct by a quantifier-free definition.
pub fn reduct_expansion(host_name: &str, host: &Structure, spec: &ReductSpec, cfg: &SearchConfig) -> Result<Expansion> {
    age_expansion(host_name, host, &|s: &Structure| apply_reduct(spec, s), cfg)
}

/// `size`-element subsets of `0..n` in lexicographic order.
fn combinations(n: usize, size: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur: Vec<usize> = (0..size).collect();
    if size > n {
        return out;
    }
    loop {
        out.push(cur.clone());
        let Some(i) = (0..size).rev().find(|&i| cur[i] < n - size + i) else {
            return out;
        };
        cur[i] += 1;
        for j in i + 1..size {
            cur[j] = cur[j - 1] + 1;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::formulas::builtin;
    use crate::structures::shorthand;

    #[test]
    fn permutations_and_subsets() {
        assert_eq!(linear_orders(3).len(), 6);
        assert_eq!(linear_orders(3)[1], vec![0, 2, 1]);
        assert_eq!(linear_orders(0), vec![Vec::<usize>::new()]);
        assert_eq!(combinations(4, 2).len(), 6);
        assert_eq!(combinations(3, 0), vec![Vec::<usize>::new()]);
    }

    #[test]
    fn ordered_small_graphs_form_a_valid_expansion() {
        let pool: Vec<(String, Structure)> = [
            "emptygraph 0",
            "clique 1",
            "clique 2",
            "emptygraph 2",
            "path 3",
            "clique 3",
        ]
        .iter()
        .map(|t| (t.replace(' ', ""), shorthand(t).unwrap()))
        .collect();
        let u = order_forgetting(&pool).unwrap();
        assert_eq!(u.source().object_count(), 1 + 1 + 2 + 2 + 6 + 6);
        assert!(u.source().validate(&SearchConfig::default()).unwrap().valid);
        assert!(u.classify_restrictions().has_unique_restrictions);
        let k2 = u.target().find_object("clique2").unwrap();
        let fiber = u.fiber(k2).unwrap();
        assert_eq!(fiber.len(), 2);
        assert!(!u.source().isomorphisms(fiber[0], fiber[1]).is_empty());
    }

    #[test]
    fn path_age_objects() {
        let u = order_age("P3", &shorthand("path 3").unwrap(), &SearchConfig::default()).unwrap();
        let names: Vec<&str> = u.target().objects().map(|a| u.target().name(a)).collect();
        assert_eq!(names, vec!["P3{}", "P3{0}", "P3{0,1}", "P3{0,2}", "P3"]);
        assert_eq!(u.source().name(u.source().object_count() - 2), "P3*0");
    }

    #[test]
    fn cyclic_reduct_of_a_chain() {
        let c4 = shorthand("chain 4").unwrap();
        let cyc = builtin("Cyc").unwrap();
        let spec = ReductSpec::new(c4.signature().clone(), vec![("Cyc".into(), 3, cyc.formula)]).unwrap();
        let u = reduct_expansion("C4", &c4, &spec, &SearchConfig::default()).unwrap();
        let top = u.target().find_object("C4").unwrap();
        // Rotations of the 4-cycle order pull the chain back four ways.
        assert_eq!(u.fiber(top).unwrap().len(), 4);
        assert!(u.classify_restrictions().has_unique_restrictions);
    }
}
