//! Quantifier-free formulas, built-in definitions and relational reducts.

mod builtin;
mod parse;

use std::fmt;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::structures::{is_embedding, Signature, Structure};

pub use builtin::{builtin, builtin_over, Builtin};
pub use parse::{parse_formula, parse_reduct};

/// Quantifier-free formula over variables `x0, x1, ...`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
pub enum Formula {
    Atom {
        relation: String,
        args: Vec<usize>,
    },
    Eq(usize, usize),
    Not(Box<Formula>),
    And(Vec<Formula>),
    Or(Vec<Formula>),
    /// True when an odd number of the members hold.
    Parity(Vec<Formula>),
}

impl Formula {
    pub fn atom(relation: &str, args: &[usize]) -> Formula {
        Formula::Atom {
            relation: relation.to_string(),
            args: args.to_vec(),
        }
    }

    pub fn not(f: Formula) -> Formula {
        Formula::Not(Box::new(f))
    }

    /// Largest variable index plus one, or 0 for a closed formula.
    pub fn variable_bound(&self) -> usize {
        match self {
            Formula::Atom { args, .. } => args.iter().map(|&a| a + 1).max().unwrap_or(0),
            Formula::Eq(a, b) => a.max(b) + 1,
            Formula::Not(f) => f.variable_bound(),
            Formula::And(fs) | Formula::Or(fs) | Formula::Parity(fs) => {
                fs.iter().map(Formula::variable_bound).max().unwrap_or(0)
            }
        }
    }

    /// Replaces variable `xi` by `x{map[i]}`.
    pub fn substitute(&self, map: &[usize]) -> Formula {
        match self {
            Formula::Atom { relation, args } => Formula::Atom {
                relation: relation.clone(),
                args: args.iter().map(|&a| map[a]).collect(),
            },
            Formula::Eq(a, b) => Formula::Eq(map[*a], map[*b]),
            Formula::Not(f) => Formula::not(f.substitute(map)),
            Formula::And(fs) => Formula::And(fs.iter().map(|f| f.substitute(map)).collect()),
            Formula::Or(fs) => Formula::Or(fs.iter().map(|f| f.substitute(map)).collect()),
            Formula::Parity(fs) => Formula::Parity(fs.iter().map(|f| f.substitute(map)).collect()),
        }
    }

    /// Checks symbols and variables against a signature and an arity.
    pub fn check(&self, signature: &Signature, arity: usize) -> Result<()> {
        match self {
            Formula::Atom { relation, args } => {
                let i = signature
                    .relation_index(relation)
                    .ok_or_else(|| Error::UnknownSymbol(relation.clone()))?;
                let expected = signature.relations()[i].arity;
                if expected != args.len() {
                    return Err(Error::ArityMismatch {
                        symbol: relation.clone(),
                        expected,
                        found: args.len(),
                    });
                }
                check_vars(args, arity)
            }
            Formula::Eq(a, b) => check_vars(&[*a, *b], arity),
            Formula::Not(f) => f.check(signature, arity),
            Formula::And(fs) | Formula::Or(fs) | Formula::Parity(fs) => {
                fs.iter().try_for_each(|f| f.check(signature, arity))
            }
        }
    }

    /// Truth value in `structure` under the assignment `xi -> assignment[i]`.
    pub fn evaluate(&self, structure: &Structure, assignment: &[usize]) -> Result<bool> {
        self.check(structure.signature(), assignment.len())?;
        if let Some(&x) = assignment.iter().find(|&&x| x >= structure.size()) {
            return Err(Error::OutOfRange {
                element: x,
                size: structure.size(),
            });
        }
        let bound = Bound::new(self, structure.signature());
        Ok(bound.eval(structure, assignment))
    }
}

fn check_vars(vars: &[usize], arity: usize) -> Result<()> {
    match vars.iter().find(|&&v| v >= arity) {
        Some(&index) => Err(Error::VariableOutOfRange { index, arity }),
        None => Ok(()),
    }
}

/// A formula with relation names resolved to indices; assumes it was checked.
enum Bound {
    Atom(usize, Vec<usize>),
    Eq(usize, usize),
    Not(Box<Bound>),
    And(Vec<Bound>),
    Or(Vec<Bound>),
    Parity(Vec<Bound>),
}

impl Bound {
    fn new(f: &Formula, sig: &Signature) -> Bound {
        let all = |fs: &[Formula]| fs.iter().map(|f| Bound::new(f, sig)).collect();
        match f {
            Formula::Atom { relation, args } => Bound::Atom(sig.relation_index(relation).unwrap(), args.clone()),
            Formula::Eq(a, b) => Bound::Eq(*a, *b),
            Formula::Not(g) => Bound::Not(Box::new(Bound::new(g, sig))),
            Formula::And(fs) => Bound::And(all(fs)),
            Formula::Or(fs) => Bound::Or(all(fs)),
            Formula::Parity(fs) => Bound::Parity(all(fs)),
        }
    }

    fn eval(&self, s: &Structure, a: &[usize]) -> bool {
        match self {
            Bound::Atom(rel, args) => {
                let index = args.iter().fold(0, |acc, &v| acc * s.size() + a[v]);
                s.holds_index(*rel, index)
            }
            Bound::Eq(x, y) => a[*x] == a[*y],
            Bound::Not(f) => !f.eval(s, a),
            Bound::And(fs) => fs.iter().all(|f| f.eval(s, a)),
            Bound::Or(fs) => fs.iter().any(|f| f.eval(s, a)),
            Bound::Parity(fs) => fs.iter().filter(|f| f.eval(s, a)).count() % 2 == 1,
        }
    }
}

fn is_operator_name(name: &str) -> bool {
    !name.starts_with(|c: char| c.is_alphabetic() || c == '_')
}

impl fmt::Display for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fn wrap(g: &Formula, parens: bool, f: &mut fmt::Formatter<'_>) -> fmt::Result {
            if parens {
                write!(f, "({g})")
            } else {
                write!(f, "{g}")
            }
        }
        match self {
            Formula::Atom { relation, args } if args.len() == 2 && is_operator_name(relation) => {
                write!(f, "x{} {} x{}", args[0], relation, args[1])
            }
            Formula::Atom { relation, args } => {
                let vars: Vec<String> = args.iter().map(|a| format!("x{a}")).collect();
                write!(f, "{}({})", relation, vars.join(","))
            }
            Formula::Eq(a, b) => write!(f, "x{a} = x{b}"),
            Formula::Not(g) => {
                f.write_str("!")?;
                let atomic = matches!(**g, Formula::Not(_) | Formula::Parity(_))
                    || matches!(&**g, Formula::Atom { relation, args } if !(args.len() == 2 && is_operator_name(relation)));
                wrap(g, !atomic, f)
            }
            Formula::And(fs) if fs.is_empty() => f.write_str("!parity[]"),
            Formula::Or(fs) if fs.is_empty() => f.write_str("parity[]"),
            Formula::And(fs) => {
                for (i, g) in fs.iter().enumerate() {
                    if i > 0 {
                        f.write_str(" & ")?;
                    }
                    wrap(g, matches!(g, Formula::And(_) | Formula::Or(_)), f)?;
                }
                Ok(())
            }
            Formula::Or(fs) => {
                for (i, g) in fs.iter().enumerate() {
                    if i > 0 {
                        f.write_str(" | ")?;
                    }
                    wrap(g, matches!(g, Formula::Or(_)), f)?;
                }
                Ok(())
            }
            Formula::Parity(fs) => {
                f.write_str("parity[")?;
                for (i, g) in fs.iter().enumerate() {
                    if i > 0 {
                        f.write_str(", ")?;
                    }
                    write!(f, "{g}")?;
                }
                f.write_str("]")
            }
        }
    }
}

/// A family of defining formulas, one per relation of the target signature.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ReductSpec {
    source: Signature,
    target: Signature,
    formulas: Vec<Formula>,
}

impl ReductSpec {
    /// `definitions` lists (target name, arity, formula); names must be new.
    pub fn new(source: Signature, definitions: Vec<(String, usize, Formula)>) -> Result<Self> {
        for (name, arity, phi) in &definitions {
            if source.has_symbol(name) {
                return Err(Error::Invalid(format!(
                    "defined symbol `{name}` clashes with the source signature"
                )));
            }
            phi.check(&source, *arity)?;
        }
        let target = Signature::relational(definitions.iter().map(|(n, a, _)| (n.clone(), *a)))?;
        let mut formulas = Vec::with_capacity(definitions.len());
        for sym in target.relations() {
            let (_, _, phi) = definitions.iter().find(|(n, _, _)| *n == sym.name).unwrap();
            formulas.push(phi.clone());
        }
        Ok(ReductSpec {
            source,
            target,
            formulas,
        })
    }

    pub fn source(&self) -> &Signature {
        &self.source
    }

    pub fn target(&self) -> &Signature {
        &self.target
    }

    /// Formulas aligned with the relations of [`ReductSpec::target`].
    pub fn formulas(&self) -> &[Formula] {
        &self.formulas
    }
}

/// The structure on the same universe whose relations are the defined ones.
pub fn apply_reduct(spec: &ReductSpec, a: &Structure) -> Result<Structure> {
    if a.signature() != &spec.source {
        return Err(Error::SignatureMismatch(
            "structure does not match the reduct's source signature".into(),
        ));
    }
    let mut out = Structure::empty(spec.target.clone(), a.size())?;
    let n = a.size();
    for (rel, (sym, phi)) in spec.target.relations().iter().zip(&spec.formulas).enumerate() {
        let bound = Bound::new(phi, &spec.source);
        let total = n.checked_pow(sym.arity as u32).unwrap_or(usize::MAX);
        for code in 0..total {
            let t = crate::structures::decode(code, sym.arity, n);
            if bound.eval(a, &t) {
                out.insert_at(rel, &t)?;
            }
        }
    }
    Ok(out)
}

/// Whether an embedding of expansions is also an embedding of their reducts.
pub fn check_embedding_transport(spec: &ReductSpec, a: &Structure, b: &Structure, map: &[usize]) -> Result<bool> {
    if !is_embedding(map, a, b)? {
        return Err(Error::Invalid(
            "map is not an embedding of the source structures".into(),
        ));
    }
    let ra = apply_reduct(spec, a)?;
    let rb = apply_reduct(spec, b)?;
    is_embedding(map, &ra, &rb)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::structures::{automorphism_group, shorthand};

    #[test]
    fn cyclic_reduct_of_chain() {
        let c3 = shorthand("chain 3").unwrap();
        let b = builtin("Cyc").unwrap();
        let spec = ReductSpec::new(c3.signature().clone(), vec![(b.name.clone(), b.arity, b.formula)]).unwrap();
        let r = apply_reduct(&spec, &c3).unwrap();
        assert_eq!(r.tuples(0), vec![vec![0, 1, 2], vec![1, 2, 0], vec![2, 0, 1]]);
        assert_eq!(automorphism_group(&r).unwrap().len(), 3);
    }

    #[test]
    fn empty_reduct_is_trivial() {
        let c3 = shorthand("chain 3").unwrap();
        let spec = ReductSpec::new(c3.signature().clone(), vec![]).unwrap();
        let r = apply_reduct(&spec, &c3).unwrap();
        assert!(r.signature().relations().is_empty());
        assert_eq!(automorphism_group(&r).unwrap().len(), 6);
    }

    #[test]
    fn reduct_rejects_clashing_names() {
        let c3 = shorthand("chain 3").unwrap();
        let phi = Formula::atom("<", &[0, 1]);
        assert!(ReductSpec::new(c3.signature().clone(), vec![("<".into(), 2, phi)]).is_err());
    }

    #[test]
    fn evaluation_errors() {
        let c3 = shorthand("chain 3").unwrap();
        let phi = Formula::atom("<", &[0, 1]);
        assert!(phi.evaluate(&c3, &[0, 1]).unwrap());
        assert!(matches!(phi.evaluate(&c3, &[0, 7]), Err(Error::OutOfRange { .. })));
        assert!(matches!(phi.evaluate(&c3, &[0]), Err(Error::VariableOutOfRange { .. })));
        assert!(Formula::atom("E", &[0, 1]).evaluate(&c3, &[0, 1]).is_err());
    }

    #[test]
    fn display_forms() {
        let phi = Formula::Or(vec![
            Formula::And(vec![Formula::atom("<", &[0, 1]), Formula::not(Formula::Eq(1, 2))]),
            Formula::Parity(vec![Formula::atom("E", &[0, 2])]),
        ]);
        assert_eq!(phi.to_string(), "x0 < x1 & !(x1 = x2) | parity[E(x0,x2)]");
    }

    #[test]
    fn transport_requires_embedding() {
        let c2 = shorthand("chain 2").unwrap();
        let c3 = shorthand("chain 3").unwrap();
        let b = builtin("Betw").unwrap();
        let spec = ReductSpec::new(c3.signature().clone(), vec![(b.name, b.arity, b.formula)]).unwrap();
        assert!(check_embedding_transport(&spec, &c2, &c3, &[0, 2]).unwrap());
        assert!(check_embedding_transport(&spec, &c2, &c3, &[2, 0]).is_err());
    }
}
