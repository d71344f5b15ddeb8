//! Verification suites run by the `verify` command and the acceptance target.

use rayon::prelude::*;
use serde::Serialize;
use serde_json::{json, Value};

use crate::arrows::{arrow_objects, ColoringProblem, Mode};
use crate::category::{BinaryDigraph, Diagram, FiniteCategory, ObjectId};
use crate::corpus::{builtin_pool, find_isomorphic, generate, Family};
use crate::degrees::{
    big_degree_exact, check_additivity, check_cocone_transfer, check_monotonicity, check_multiplicativity,
    check_smaller, check_sub_representation, constant_encoding_setup, Outcome,
};
use crate::error::{Error, Result};
use crate::expansion::{order_age, order_forgetting, reduct_expansion, Expansion};
use crate::formulas::{apply_reduct, builtin, check_embedding_transport, ReductSpec};
use crate::search::SearchConfig;
use crate::structures::{automorphism_group, enumerate_embeddings, parse_structure, shorthand, Structure};

/// A named value compared against its expected value.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Spot {
    pub label: String,
    pub expected: String,
    pub actual: String,
    pub ok: bool,
}

impl Spot {
    fn new(label: impl Into<String>, expected: impl ToString, actual: impl ToString) -> Self {
        let (expected, actual) = (expected.to_string(), actual.to_string());
        Spot {
            label: label.into(),
            ok: expected == actual,
            expected,
            actual,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SuiteReport {
    pub name: &'static str,
    pub checked: usize,
    pub verified: usize,
    pub violations: usize,
    pub hypothesis_not_satisfied: usize,
    pub spots: Vec<Spot>,
    pub cases: Vec<Value>,
}

impl SuiteReport {
    fn new(name: &'static str) -> Self {
        SuiteReport {
            name,
            checked: 0,
            verified: 0,
            violations: 0,
            hypothesis_not_satisfied: 0,
            spots: Vec::new(),
            cases: Vec::new(),
        }
    }

    fn record(&mut self, outcome: &Outcome, case: Value) {
        self.checked += 1;
        match outcome {
            Outcome::Verified => self.verified += 1,
            Outcome::Violated { .. } => self.violations += 1,
            Outcome::HypothesisNotSatisfied { .. } => self.hypothesis_not_satisfied += 1,
        }
        self.cases.push(case);
    }

    /// No violations, every spot value matched, and something was verified.
    pub fn passed(&self) -> bool {
        self.violations == 0 && self.spots.iter().all(|s| s.ok) && (self.verified > 0 || !self.spots.is_empty())
    }

    pub fn summary(&self) -> String {
        let spots: Vec<String> = self
            .spots
            .iter()
            .map(|s| format!("{} = {}{}", s.label, s.actual, if s.ok { "" } else { " (MISMATCH)" }))
            .collect();
        let mut line = format!(
            "{}: {} checked, {} verified, {} violations, {} hypothesis not satisfied",
            self.name, self.checked, self.verified, self.violations, self.hypothesis_not_satisfied
        );
        if !spots.is_empty() {
            line.push_str("; ");
            line.push_str(&spots.join(", "));
        }
        line
    }
}

/// Suites accepted by `verify --identity`.
pub const SUITES: [&str; 10] = [
    "arrows",
    "rigid",
    "mult",
    "sub",
    "additivity",
    "lemmas",
    "monotonicity",
    "reducts",
    "smaller",
    "cocone",
];

fn ser<T: Serialize>(v: &T) -> Value {
    serde_json::to_value(v).unwrap_or(Value::Null)
}

fn category(pool: Vec<(String, Structure)>, cfg: &SearchConfig) -> Result<FiniteCategory> {
    FiniteCategory::from_pool_guarded(pool, cfg.guard)
}

fn object(cat: &FiniteCategory, text: &str) -> Result<ObjectId> {
    find_isomorphic(cat, &shorthand(text)?)?.ok_or_else(|| Error::Internal(format!("`{text}` missing from the pool")))
}

/// Maps `f` over `items` in parallel when configured, keeping input order.
fn par_map<T: Sync, R: Send>(cfg: &SearchConfig, items: &[T], f: impl Fn(&T) -> Result<R> + Sync) -> Result<Vec<R>> {
    if cfg.jobs <= 1 {
        return items.iter().map(f).collect();
    }
    cfg.install(|| items.par_iter().map(&f).collect())?
}

fn default_pool(
    pool: Option<Vec<(String, Structure)>>,
    name: &str,
    cfg: &SearchConfig,
) -> Result<Vec<(String, Structure)>> {
    match pool {
        Some(p) => Ok(p),
        None => Ok(builtin_pool(name, cfg)?.expect("built-in pool name")),
    }
}

/// Chain_6 and Chain_5 against triples colored by pairs.
pub fn arrows_suite(cfg: &SearchConfig) -> Result<SuiteReport> {
    let mut r = SuiteReport::new("arrows");
    let pool: Vec<(String, Structure)> = [2, 3, 5, 6]
        .iter()
        .map(|&n| Ok((format!("C{n}"), shorthand(&format!("chain {n}"))?)))
        .collect::<Result<_>>()?;
    let cat = category(pool, cfg)?;
    let holds = arrow_objects(&cat, 3, 1, 0, 2, 1, cfg)?;
    let refuted = arrow_objects(&cat, 2, 1, 0, 2, 1, cfg)?;
    let revalidated = match &refuted.certificate {
        Some(c) => ColoringProblem::arrow(&cat, 2, 1, 0, Mode::Objects)?
            .0
            .refutes(&c.colors, 1),
        None => false,
    };
    r.spots.push(Spot::new("C6 -> (C3)^C2_{2,1}", true, holds.holds));
    r.spots.push(Spot::new("C5 -> (C3)^C2_{2,1}", false, refuted.holds));
    r.spots.push(Spot::new("certificate re-validated", true, revalidated));
    r.cases.push(ser(&holds));
    r.cases.push(ser(&refuted));
    Ok(r)
}

/// A host whose only endomorphism is the identity.
pub fn rigid_suite(cfg: &SearchConfig) -> Result<SuiteReport> {
    let mut r = SuiteReport::new("rigid");
    let cat = category(
        vec![
            ("C2".into(), shorthand("chain 2")?),
            ("C4".into(), shorthand("chain 4")?),
        ],
        cfg,
    )?;
    let d = big_degree_exact(&cat, 1, 0, Mode::Objects, cfg)?;
    r.spots.push(Spot::new("T(C2, C4)", 6, d.value));
    r.spots.push(Spot::new("classes of C2 in C4", 6, d.domain_size));
    r.cases.push(ser(&d));
    Ok(r)
}

/// Every pair `(A, S)` of the pool with `hom(A, S)` nonempty.
pub fn multiplicativity_suite(pool: Option<Vec<(String, Structure)>>, cfg: &SearchConfig) -> Result<SuiteReport> {
    let mut r = SuiteReport::new("mult");
    let cat = category(default_pool(pool, "graphs_le4", cfg)?, cfg)?;
    let pairs: Vec<(ObjectId, ObjectId)> = cat
        .objects()
        .flat_map(|a| cat.objects().map(move |s| (a, s)))
        .filter(|&(a, s)| !cat.hom(a, s).is_empty())
        .collect();
    for rep in par_map(cfg, &pairs, |&(a, s)| check_multiplicativity(&cat, a, s, cfg))? {
        let outcome = Outcome::worst([&rep.outcome, &rep.rigidity]);
        r.record(&outcome, ser(&rep));
    }
    if let (Ok(k2), Ok(p3)) = (object(&cat, "clique 2"), object(&cat, "path 3")) {
        let rep = check_multiplicativity(&cat, k2, p3, cfg)?;
        let t = rep.t_objects.unwrap_or(0);
        r.spots
            .push(Spot::new("T_mor(K2, P3)", 4, rep.t_morphisms.unwrap_or(0)));
        r.spots.push(Spot::new("|Aut(K2)| * T(K2, P3)", 4, rep.aut * t));
    }
    Ok(r)
}

/// All subsets of at most `max` indices, by size then lexicographically.
fn subsets(n: usize, max: usize) -> Vec<Vec<usize>> {
    let mut out = vec![Vec::new()];
    let mut layer = vec![Vec::new()];
    for _ in 0..max.min(n) {
        let mut next = Vec::new();
        for s in &layer {
            let start = s.last().map_or(0, |&x| x + 1);
            for x in start..n {
                let mut t = s.clone();
                t.push(x);
                next.push(t);
            }
        }
        out.extend(next.iter().cloned());
        layer = next;
    }
    out.remove(0);
    out
}

/// Pools of at most three objects with at most eight morphisms, from each family.
pub fn sub_representation_suite(pool: Option<Vec<(String, Structure)>>, cfg: &SearchConfig) -> Result<SuiteReport> {
    let mut r = SuiteReport::new("sub");
    let bases = match pool {
        Some(p) => vec![p],
        None => vec![
            generate(Family::Chains, 4, cfg)?,
            generate(Family::Graphs, 3, cfg)?,
            generate(Family::Tournaments, 3, cfg)?,
        ],
    };
    let mut cats = Vec::new();
    for base in &bases {
        for subset in subsets(base.len(), 3) {
            let cat = category(subset.iter().map(|&i| base[i].clone()).collect(), cfg)?;
            if cat.morphism_count() <= 8 {
                cats.push(cat);
            }
        }
    }
    let jobs: Vec<(usize, ObjectId)> = cats
        .iter()
        .enumerate()
        .flat_map(|(i, c)| c.objects().map(move |a| (i, a)))
        .collect();
    for (&(i, _), rep) in jobs.iter().zip(par_map(cfg, &jobs, |&(i, a)| {
        check_sub_representation(&cats[i], a, cfg)
    })?) {
        let pool: Vec<&str> = cats[i].objects().map(|x| cats[i].name(x)).collect();
        r.record(&rep.outcome, json!({ "pool": pool, "report": ser(&rep) }));
    }
    let chains = category(generate(Family::Chains, 2, cfg)?, cfg)?;
    let rep = check_sub_representation(&chains, 0, cfg)?;
    r.spots.push(Spot::new(
        "t_mor(C1) in {C1, C2}",
        2,
        rep.small.map_or("?".into(), |v| v.to_string()),
    ));
    r.spots
        .push(Spot::new("T_mor_Sub(<C1>, whole)", 2, rep.big_in_sub.unwrap_or(0)));
    Ok(r)
}

/// Ages of ordered graphs, reduct expansions of chains, and all orders on small graphs.
pub fn expansion_corpus(
    pool: Option<Vec<(String, Structure)>>,
    cfg: &SearchConfig,
) -> Result<Vec<(String, Expansion, Option<ObjectId>)>> {
    let graphs = default_pool(pool.clone(), "graphs_le4", cfg)?;
    let mut out = Vec::new();
    for (name, g) in &graphs {
        let u = order_age(name, g, cfg)?;
        let s_star = u.source().find_object(&format!("{name}*0"));
        out.push((format!("ordered age of {name}"), u, s_star));
    }
    if pool.is_none() {
        for n in 3..=4 {
            let chain = shorthand(&format!("chain {n}"))?;
            for formula in ["Cyc", "Betw", "Sep"] {
                let b = builtin(formula)?;
                let spec = ReductSpec::new(chain.signature().clone(), vec![(b.name.clone(), b.arity, b.formula)])?;
                let name = format!("C{n}");
                let u = reduct_expansion(&name, &chain, &spec, cfg)?;
                let s_star = u.source().find_object(&format!("{name}*0"));
                out.push((format!("{formula} age of {name}"), u, s_star));
            }
        }
        let small = generate(Family::Graphs, 2, cfg)?;
        out.push((
            "all orders on graphs up to 2".to_string(),
            order_forgetting(&small)?,
            None,
        ));
    }
    Ok(out)
}

/// Every target object of every expansion against the expanded host.
pub fn additivity_suite(pool: Option<Vec<(String, Structure)>>, cfg: &SearchConfig) -> Result<SuiteReport> {
    let mut r = SuiteReport::new("additivity");
    let corpus = expansion_corpus(pool, cfg)?;
    let mut jobs = Vec::new();
    for (i, (_, u, s_star)) in corpus.iter().enumerate() {
        let hosts: Vec<ObjectId> = match s_star {
            Some(s) => vec![*s],
            None => u.source().objects().collect(),
        };
        for s in hosts {
            for a in u.target().objects() {
                jobs.push((i, a, s));
            }
        }
    }
    let reports = par_map(cfg, &jobs, |&(i, a, s)| check_additivity(&corpus[i].1, a, s, cfg))?;
    for (&(i, _, _), rep) in jobs.iter().zip(reports) {
        r.record(&rep.outcome(), json!({ "expansion": corpus[i].0, "report": ser(&rep) }));
    }
    let u = order_age("P3", &shorthand("path 3")?, cfg)?;
    let s_star = u
        .source()
        .find_object("P3*0")
        .ok_or_else(|| Error::Internal("P3*0 missing".into()))?;
    let k2 = u
        .target()
        .find_object("P3{0,1}")
        .ok_or_else(|| Error::Internal("edge missing".into()))?;
    let rep = check_additivity(&u, k2, s_star, cfg)?;
    let fiber: Vec<String> = rep.fiber.iter().map(|f| f.t_morphisms.to_string()).collect();
    let class_sum: usize = rep.class_representatives.iter().map(|&i| rep.fiber[i].t_objects).sum();
    r.spots.push(Spot::new("P3 self-similar", true, rep.self_similar));
    r.spots
        .push(Spot::new("T_mor(K2, P3)", 4, rep.t_morphisms.unwrap_or(0)));
    r.spots.push(Spot::new("fiber terms", "2 + 2", fiber.join(" + ")));
    r.spots.push(Spot::new("T(K2, P3)", 2, rep.t_objects.unwrap_or(0)));
    r.spots.push(Spot::new("sum over class representatives", 2, class_sum));
    r.spots
        .push(Spot::new("P3 clauses", "Verified", format!("{:?}", rep.outcome())));
    Ok(r)
}

/// Restriction classification and automorphism counting on unique-restriction expansions.
pub fn lemmas_suite(pool: Option<Vec<(String, Structure)>>, cfg: &SearchConfig) -> Result<SuiteReport> {
    let mut r = SuiteReport::new("lemmas");
    for (name, u, _) in expansion_corpus(pool, cfg)? {
        let restrictions = u.classify_restrictions();
        if !restrictions.has_unique_restrictions {
            let outcome = Outcome::HypothesisNotSatisfied {
                reason: "restrictions are not unique".into(),
            };
            r.record(
                &outcome,
                json!({ "expansion": name, "restrictions": ser(&restrictions) }),
            );
            continue;
        }
        for a in u.target().objects() {
            let rep = u.aut_count_identity(a)?;
            let outcome = if rep.holds && rep.disjoint_union {
                Outcome::Verified
            } else {
                Outcome::Violated {
                    detail: format!("{} in {name}", u.target().name(a)),
                }
            };
            r.record(&outcome, json!({ "expansion": name, "report": ser(&rep) }));
        }
    }
    let u = order_age("P3", &shorthand("path 3")?, cfg)?;
    let k2 = u
        .target()
        .find_object("P3{0,1}")
        .ok_or_else(|| Error::Internal("edge missing".into()))?;
    let rep = u.aut_count_identity(k2)?;
    r.spots.push(Spot::new(
        "|Aut(K2)| = |I| * |Aut(K2*)|",
        "2 = 2 * 1",
        format!(
            "{} = {} * {}",
            rep.aut_target,
            rep.isomorphic_fiber.len(),
            rep.aut_source
        ),
    ));
    Ok(r)
}

/// Every triple `(S, A, B)` of the pool that passes the weak homogeneity search.
pub fn monotonicity_suite(pool: Option<Vec<(String, Structure)>>, cfg: &SearchConfig) -> Result<SuiteReport> {
    let mut r = SuiteReport::new("monotonicity");
    let cat = category(default_pool(pool, "graphs_le4", cfg)?, cfg)?;
    let mut triples = Vec::new();
    for s in cat.objects() {
        for a in cat.objects() {
            for b in cat.objects() {
                if cat.is_weakly_homogeneous_pair(s, a, b) {
                    triples.push((s, a, b));
                }
            }
        }
    }
    for rep in par_map(cfg, &triples, |&(s, a, b)| check_monotonicity(&cat, s, a, b, cfg))? {
        r.record(&rep.outcome, ser(&rep));
    }
    let chains = category(generate(Family::Chains, 4, cfg)?, cfg)?;
    let rep = check_monotonicity(&chains, 3, 1, 2, cfg)?;
    r.spots.push(Spot::new(
        "C4 weakly homogeneous for (C2, C3)",
        false,
        !matches!(rep.outcome, Outcome::HypothesisNotSatisfied { .. }),
    ));
    Ok(r)
}

/// Automorphism groups of reducts and transport of embeddings.
pub fn reducts_suite(cfg: &SearchConfig) -> Result<SuiteReport> {
    let mut r = SuiteReport::new("reducts");
    let c3 = shorthand("chain 3")?;
    for (formula, order) in [("Cyc", 3), ("Betw", 2)] {
        let b = builtin(formula)?;
        let spec = ReductSpec::new(c3.signature().clone(), vec![(b.name.clone(), b.arity, b.formula)])?;
        let reduct = apply_reduct(&spec, &c3)?;
        r.spots.push(Spot::new(
            format!("|Aut({formula}(C3))|"),
            order,
            automorphism_group(&reduct)?.len(),
        ));
    }
    let chains = generate(Family::Chains, 4, cfg)?;
    let graphs = generate(Family::Graphs, 3, cfg)?;
    let mut families = vec![(chains, vec!["Betw", "Cyc", "Sep"])];
    families.push((graphs, vec!["rho_3"]));
    for (pool, formulas) in families {
        for formula in formulas {
            let b = builtin(formula)?;
            let sig = pool[0].1.signature().clone();
            let spec = ReductSpec::new(sig, vec![(b.name.clone(), b.arity, b.formula)])?;
            for (na, a) in &pool {
                for (nb, sb) in &pool {
                    for e in enumerate_embeddings(a, sb)? {
                        let ok = check_embedding_transport(&spec, a, sb, e.map())?;
                        let outcome = if ok {
                            Outcome::Verified
                        } else {
                            Outcome::Violated {
                                detail: format!("{formula}: {na} -> {nb} via {:?}", e.map()),
                            }
                        };
                        r.record(
                            &outcome,
                            json!({ "formula": formula, "from": na, "to": nb, "map": e.map(), "transported": ok }),
                        );
                    }
                }
            }
        }
    }
    Ok(r)
}

/// Every universal, locally finite host of the pool against every object.
pub fn smaller_suite(pool: Option<Vec<(String, Structure)>>, cfg: &SearchConfig) -> Result<SuiteReport> {
    let mut r = SuiteReport::new("smaller");
    let custom = pool.is_some();
    let cat = category(default_pool(pool, "chains_le6", cfg)?, cfg)?;
    let d: Vec<ObjectId> = cat.objects().collect();
    let pairs: Vec<(ObjectId, ObjectId)> = if custom {
        d.iter().flat_map(|&s| d.iter().map(move |&a| (s, a))).collect()
    } else {
        let top = *d.last().ok_or_else(|| Error::Invalid("empty pool".into()))?;
        d.iter().map(|&a| (top, a)).collect()
    };
    for rep in par_map(cfg, &pairs, |&(s, a)| check_smaller(&cat, &d, s, a, cfg))? {
        r.record(&rep.outcome, ser(&rep));
    }
    if !custom {
        let (c6, c2) = (d.len() - 1, 1);
        let rep = check_smaller(&cat, &d, c6, c2, cfg)?;
        r.spots.push(Spot::new(
            "C6 universal and locally finite",
            true,
            rep.universal && rep.locally_finite,
        ));
        r.spots.push(Spot::new("T_mor(C2, C6)", 15, rep.big.unwrap_or(0)));
        r.spots.push(Spot::new(
            "t_mor(C2) <= 15",
            true,
            rep.small.and_then(|v| v.exact()).is_some_and(|v| v <= 15),
        ));
    }
    Ok(r)
}

fn chain_with_constant(n: usize, c: usize) -> Result<Structure> {
    let mut text = format!("signature rel < 2; const c; universe {n}");
    if n > 1 {
        text.push_str(" <:");
        for i in 0..n {
            for j in i + 1..n {
                text.push_str(&format!(" ({i},{j})"));
            }
        }
        text.push(';');
    }
    text.push_str(&format!(" c = {c};"));
    parse_structure(&text)
}

/// Chains with a marked point encoded as constant-preserving maps between plain chains.
///
/// The pool keeps at most one point below the mark and two above it, so the
/// four-element chain marked at its second point receives every member.
pub fn cocone_suite(cfg: &SearchConfig) -> Result<SuiteReport> {
    let mut r = SuiteReport::new("cocone");
    let mut pool = Vec::new();
    for n in 1..=4 {
        for c in 0..n.min(2) {
            if n - 1 - c <= 2 {
                pool.push((format!("C{n}@{c}"), chain_with_constant(n, c)?));
            }
        }
    }
    let setup = constant_encoding_setup(pool, Vec::new())?;
    let (sub, cat) = (&setup.encoded, &setup.ambient);
    let shapes = [
        BinaryDigraph::new(1, vec![])?,
        BinaryDigraph::new(2, vec![(0, 1)])?,
        BinaryDigraph::new(3, vec![(0, 1), (1, 2)])?,
    ];
    let find = |c: &FiniteCategory, name: &str| {
        c.find_object(name)
            .ok_or_else(|| Error::Internal(format!("{name} missing")))
    };
    let host = find(sub, "C4@1")?;
    for a in sub.objects() {
        let mut diagrams = Vec::new();
        for shape in &shapes {
            diagrams.extend(Diagram::enumerate(sub, shape, a, host, cfg)?);
        }
        let rep = check_cocone_transfer(sub, cat, &setup.inclusion, a, host, host, &diagrams, cfg)?;
        if sub.name(a) == "C2@0" {
            r.spots.push(Spot::new(
                "T_B(C2@0, C4@1) <= T(C2, C4)",
                "2 <= 6",
                format!("{} <= {}", rep.t_sub.unwrap_or(0), rep.t.unwrap_or(0)),
            ));
        }
        r.record(&rep.outcome, ser(&rep));
    }
    // The ambient category against itself: the inequality is an equality.
    let same = crate::category::Functor::identity(cat);
    let c2 = find(cat, "C2@0")?;
    let rep = check_cocone_transfer(cat, cat, &same, c2, host, host, &[], cfg)?;
    r.spots.push(Spot::new(
        "T(C2, C4) against itself",
        "6 <= 6",
        format!("{} <= {}", rep.t_sub.unwrap_or(0), rep.t.unwrap_or(0)),
    ));
    r.record(&rep.outcome, ser(&rep));
    Ok(r)
}

/// Runs one suite by name; `pool` replaces the default corpus where the suite takes one.
pub fn run_suite(name: &str, pool: Option<Vec<(String, Structure)>>, cfg: &SearchConfig) -> Result<SuiteReport> {
    match name {
        "arrows" => arrows_suite(cfg),
        "rigid" => rigid_suite(cfg),
        "mult" => multiplicativity_suite(pool, cfg),
        "sub" => sub_representation_suite(pool, cfg),
        "additivity" => additivity_suite(pool, cfg),
        "lemmas" => lemmas_suite(pool, cfg),
        "monotonicity" => monotonicity_suite(pool, cfg),
        "reducts" => reducts_suite(cfg),
        "smaller" => smaller_suite(pool, cfg),
        "cocone" => cocone_suite(cfg),
        _ => Err(Error::Invalid(format!(
            "unknown identity `{name}`; expected one of {}",
            SUITES.join(", ")
        ))),
    }
}
