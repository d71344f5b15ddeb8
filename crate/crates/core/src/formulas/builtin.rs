use super::Formula;
use crate::error::{Error, Result};

/// A named defining formula over a single binary source relation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Builtin {
    pub name: String,
    pub arity: usize,
    /// The source relation the formula mentions.
    pub relation: String,
    pub formula: Formula,
}

/// Looks up a built-in by name with its default source relation:
/// `<` for `Betw`, `Cyc`, `Sep`; `E` for `rho_N` and the primed tournament forms.
pub fn builtin(name: &str) -> Result<Builtin> {
    let relation = if name.ends_with('\'') || name.starts_with("rho_") {
        "E"
    } else {
        "<"
    };
    builtin_over(name, relation)
}

/// Looks up a built-in over an explicitly named source relation.
pub fn builtin_over(name: &str, relation: &str) -> Result<Builtin> {
    let r = relation;
    let lt = |x: usize, y: usize| Formula::atom(r, &[x, y]);
    let chain = |x, y, z| Formula::And(vec![lt(x, y), lt(y, z)]);
    let cyc = |x, y, z| Formula::Or(vec![chain(x, y, z), chain(y, z, x), chain(z, x, y)]);
    // Oriented triangle and transitive triple over a tournament.
    let oriented = |x, y, z| Formula::And(vec![lt(x, y), lt(y, z), lt(z, x)]);
    let transitive = |x, y, z| Formula::And(vec![lt(x, y), lt(y, z), lt(x, z)]);
    let (arity, formula) = match name {
        "Betw" => (3, Formula::Or(vec![chain(0, 1, 2), chain(2, 1, 0)])),
        "Cyc" => (3, cyc(0, 1, 2)),
        "Sep" => (
            4,
            Formula::Or(vec![
                Formula::And(vec![cyc(0, 1, 2), cyc(0, 3, 1)]),
                Formula::And(vec![cyc(0, 2, 1), cyc(0, 1, 3)]),
            ]),
        ),
        "Betw'" => (3, Formula::Or(vec![oriented(0, 1, 2), oriented(2, 1, 0)])),
        "Cyc'" => (
            3,
            Formula::Or(vec![
                oriented(0, 1, 2),
                transitive(0, 2, 1),
                transitive(1, 0, 2),
                transitive(2, 1, 0),
            ]),
        ),
        "Sep'" => (
            4,
            Formula::not(Formula::Parity(distinct_pairs(r, &[(0, 2), (0, 3), (1, 2), (1, 3)]))),
        ),
        _ => match name.strip_prefix("rho_").and_then(|n| n.parse::<usize>().ok()) {
            Some(n) if n >= 1 => {
                let pairs: Vec<(usize, usize)> = (0..n).flat_map(|i| (i + 1..n).map(move |j| (i, j))).collect();
                (n, Formula::Parity(distinct_pairs(r, &pairs)))
            }
            _ => return Err(Error::UnknownSymbol(name.to_string())),
        },
    };
    Ok(Builtin {
        name: name.to_string(),
        arity,
        relation: relation.to_string(),
        formula,
    })
}

/// One member per listed variable pair, counted only when no earlier pair
/// names the same unordered set of elements. Parity over these members
/// counts edges of the induced set rather than of the tuple.
fn distinct_pairs(r: &str, pairs: &[(usize, usize)]) -> Vec<Formula> {
    let same = |(a, b): (usize, usize), (c, d): (usize, usize)| {
        let eq = |x, y| if x == y { None } else { Some(Formula::Eq(x, y)) };
        let side = |p: Option<Formula>, q: Option<Formula>| match (p, q) {
            (None, None) => None,
            (Some(f), None) | (None, Some(f)) => Some(f),
            (Some(f), Some(g)) => Some(Formula::And(vec![f, g])),
        };
        let straight = side(eq(a, c), eq(b, d));
        let crossed = side(eq(a, d), eq(b, c));
        match (straight, crossed) {
            (None, _) | (_, None) => None,
            (Some(f), Some(g)) => Some(Formula::Or(vec![f, g])),
        }
    };
    pairs
        .iter()
        .enumerate()
        .map(|(i, &(x, y))| {
            let mut parts = vec![Formula::atom(r, &[x, y])];
            for &earlier in &pairs[..i] {
                match same(earlier, (x, y)) {
                    Some(f) => parts.push(Formula::not(f)),
                    None => parts.push(Formula::Parity(Vec::new())),
                }
            }
            if parts.len() == 1 {
                parts.pop().unwrap()
            } else {
                Formula::And(parts)
            }
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::structures::shorthand;

    fn holds(b: &Builtin, s: &crate::structures::Structure, t: &[usize]) -> bool {
        b.formula.evaluate(s, t).unwrap()
    }

    #[test]
    fn betweenness_and_cyclic_on_chain() {
        let c4 = shorthand("chain 4").unwrap();
        let betw = builtin("Betw").unwrap();
        assert!(holds(&betw, &c4, &[0, 1, 3]));
        assert!(holds(&betw, &c4, &[3, 1, 0]));
        assert!(!holds(&betw, &c4, &[1, 0, 3]));
        let cyc = builtin("Cyc").unwrap();
        assert!(holds(&cyc, &c4, &[2, 3, 0]));
        assert!(!holds(&cyc, &c4, &[2, 0, 3]));
    }

    #[test]
    fn separation_on_chain() {
        let c4 = shorthand("chain 4").unwrap();
        let sep = builtin("Sep").unwrap();
        // 0 and 2 separate 1 from 3 on the circle.
        assert!(holds(&sep, &c4, &[0, 2, 1, 3]));
        assert!(!holds(&sep, &c4, &[0, 1, 2, 3]));
    }

    #[test]
    fn rho_counts_edges_of_the_set() {
        let p3 = shorthand("path 3").unwrap();
        let rho = builtin("rho_3").unwrap();
        assert!(!holds(&rho, &p3, &[0, 1, 2]));
        assert!(holds(&rho, &p3, &[0, 0, 1]));
        assert!(holds(&rho, &p3, &[0, 1, 0]));
        assert!(!holds(&rho, &p3, &[0, 0, 2]));
        assert!(!holds(&rho, &p3, &[1, 1, 1]));
    }

    #[test]
    fn primed_forms_on_cyclic_tournament() {
        let t = shorthand("tournament-cycle 3").unwrap();
        assert!(holds(&builtin("Cyc'").unwrap(), &t, &[0, 1, 2]));
        assert!(holds(&builtin("Betw'").unwrap(), &t, &[2, 1, 0]));
        let sep = builtin("Sep'").unwrap();
        // Only 1->2 runs from {0,1} into {2}, an odd count.
        assert!(!holds(&sep, &t, &[0, 1, 2, 2]));
        assert_eq!(sep.arity, 4);
    }

    #[test]
    fn unknown_builtin() {
        assert!(builtin("Foo").is_err());
        assert!(builtin("rho_x").is_err());
    }
}
