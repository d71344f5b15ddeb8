use std::collections::{BTreeMap, HashMap};
use std::fmt::Write as _;
use std::path::Path;

use serde::Serialize;
use serde_json::{json, Value};

use super::{
    ArrowArgs, Command, DegreeCommand, ExpansionCommand, IdentityArgs, Inputs, Output, VerifyArgs, EXIT_HYPOTHESIS,
    EXIT_INTERNAL, EXIT_OK,
};
use crate::arrows::{arrow, arrow_cross_checked, Coloring, Mode};
use crate::category::{BinaryDigraph, Diagram, FiniteCategory, ObjectId};
use crate::corpus::{counts, generate, Family};
use crate::degrees::{
    big_degree_exact, check_additivity, check_cocone_transfer, check_monotonicity, check_multiplicativity,
    check_smaller, check_sub_representation, constant_encoding_setup, small_degree_bounds, Outcome, SmallDegreeQuery,
};
use crate::error::{Error, Result};
use crate::expansion::{order_age, reduct_expansion, Expansion, ExpansionFile};
use crate::formulas::{apply_reduct, parse_reduct};
use crate::structures::{automorphism_group, enumerate_embeddings, serialize_pool, serialize_structure, Structure};
use crate::suites::{run_suite, SUITES};

fn output(text: String, result: impl Serialize, nodes: u64, code: i32) -> Result<Output> {
    Ok(Output {
        text,
        result: serde_json::to_value(result)?,
        nodes,
        code,
    })
}

fn outcome_code(o: &Outcome) -> i32 {
    match o {
        Outcome::Verified => EXIT_OK,
        Outcome::HypothesisNotSatisfied { .. } => EXIT_HYPOTHESIS,
        Outcome::Violated { .. } => EXIT_INTERNAL,
    }
}

fn outcome_text(o: &Outcome) -> String {
    match o {
        Outcome::Verified => "VERIFIED".to_string(),
        Outcome::Violated { detail } => format!("VIOLATED: {detail}"),
        Outcome::HypothesisNotSatisfied { reason } => format!("HYPOTHESIS NOT SATISFIED: {reason}"),
    }
}

fn mode(mor: bool) -> Mode {
    if mor {
        Mode::Morphisms
    } else {
        Mode::Objects
    }
}

fn map_text(cat: &FiniteCategory, m: usize) -> String {
    match cat.map(m) {
        Some(map) => format!("{map:?}"),
        None => format!("#{m}"),
    }
}

fn coloring_text(cat: &FiniteCategory, c: &Coloring) -> String {
    let mut out = String::new();
    for (m, color) in c.domain.iter().zip(&c.colors) {
        let _ = writeln!(out, "  {} -> {color}", map_text(cat, *m));
    }
    out
}

fn require<'a>(v: &'a Option<String>, flag: &str) -> Result<&'a str> {
    v.as_deref().ok_or_else(|| Error::Invalid(format!("missing {flag}")))
}

pub fn execute(command: &Command, inputs: &mut Inputs) -> Result<Output> {
    match command {
        Command::Parse { input } => {
            let (name, s) = inputs.structure(input)?;
            let text = serialize_structure(&s);
            output(
                text.clone(),
                json!({ "name": name, "size": s.size(), "structure": text }),
                0,
                EXIT_OK,
            )
        }
        Command::Embeddings { a, b } => {
            let (na, sa) = inputs.structure(a)?;
            let (nb, sb) = inputs.structure(b)?;
            let maps: Vec<Vec<usize>> = enumerate_embeddings(&sa, &sb)?.into_iter().map(|e| e.0).collect();
            let mut text = format!("{} embeddings of {na} into {nb}\n", maps.len());
            for m in &maps {
                let _ = writeln!(text, "  {m:?}");
            }
            output(
                text,
                json!({ "from": na, "to": nb, "count": maps.len(), "maps": maps }),
                0,
                EXIT_OK,
            )
        }
        Command::Aut { input } => {
            let (name, s) = inputs.structure(input)?;
            let maps: Vec<Vec<usize>> = automorphism_group(&s)?.into_iter().map(|e| e.0).collect();
            let mut text = format!("|Aut({name})| = {}\n", maps.len());
            for m in &maps {
                let _ = writeln!(text, "  {m:?}");
            }
            output(
                text,
                json!({ "name": name, "order": maps.len(), "automorphisms": maps }),
                0,
                EXIT_OK,
            )
        }
        Command::Reduct { phi, input, out } => {
            let (name, s) = inputs.structure(input)?;
            let spec_text = inputs.read(Path::new(phi))?;
            let spec = parse_reduct(&spec_text, s.signature())?;
            let reduct = apply_reduct(&spec, &s)?;
            let text = serialize_structure(&reduct);
            let tuples: BTreeMap<String, usize> = reduct
                .signature()
                .relations()
                .iter()
                .enumerate()
                .map(|(i, r)| (r.name.clone(), reduct.tuple_count(i)))
                .collect();
            let result = json!({ "name": name, "tuples": tuples, "structure": text });
            match out {
                Some(path) => {
                    std::fs::write(path, &text).map_err(|e| Error::Io(format!("{path}: {e}")))?;
                    output(format!("wrote {path}\n"), result, 0, EXIT_OK)
                }
                None => output(text, result, 0, EXIT_OK),
            }
        }
        Command::Arrow(args) => arrow_command(args, inputs),
        Command::Degree { which } => degree_command(which, inputs),
        Command::Expansion { which } => expansion_command(which, inputs),
        Command::Verify(args) => verify_command(args, inputs),
        Command::Corpus { family, size, out } => {
            let family: Family = family.parse()?;
            let pool = generate(family, *size, &inputs.cfg)?;
            let c = counts(family, *size, &pool);
            let mut text = String::new();
            for (n, k) in &c.by_size {
                let _ = writeln!(text, "{} on {n}: {k} types", family.name());
            }
            let _ = writeln!(text, "total: {}", c.total);
            if let Some(dir) = out {
                std::fs::create_dir_all(dir)?;
                for (name, s) in &pool {
                    std::fs::write(Path::new(dir).join(format!("{name}.str")), serialize_structure(s))?;
                }
                std::fs::write(Path::new(dir).join("pool.txt"), serialize_pool(&pool))?;
                let _ = writeln!(text, "wrote {} files to {dir}", pool.len() + 1);
            }
            let names: Vec<&str> = pool.iter().map(|(n, _)| n.as_str()).collect();
            output(text, json!({ "counts": c, "names": names }), 0, EXIT_OK)
        }
        Command::Category { pool } => {
            let pool = inputs.pool(pool)?;
            let cat = FiniteCategory::from_pool_guarded(pool, inputs.cfg.guard)?;
            let report = cat.validate(&inputs.cfg)?;
            let predicates = cat.predicates();
            let summary = cat.summary();
            let mut text = format!("{} objects, {} morphisms\n", cat.object_count(), cat.morphism_count());
            for (a, row) in summary.hom_sizes.iter().enumerate() {
                let _ = writeln!(text, "  {:<12} {row:?}", cat.name(a));
            }
            let _ = writeln!(
                text,
                "valid: {}, all mono: {}, directed: {}, amalgamation: {}",
                report.valid, predicates.all_mono, predicates.directed, predicates.amalgamation
            );
            let code = if report.valid { EXIT_OK } else { EXIT_INTERNAL };
            output(
                text,
                json!({ "summary": summary, "validation": report, "predicates": predicates }),
                0,
                code,
            )
        }
    }
}

fn arrow_command(args: &ArrowArgs, inputs: &mut Inputs) -> Result<Output> {
    let (cat, ids) = inputs.category(args.cat.as_deref(), &[&args.c, &args.b, &args.a])?;
    let (c, b, a) = (ids[0], ids[1], ids[2]);
    let m = mode(args.mor);
    let r = if args.cross_check {
        arrow_cross_checked(&cat, c, b, a, args.k, args.t, m, &inputs.cfg)?
    } else {
        arrow(&cat, c, b, a, args.k, args.t, m, &inputs.cfg)?
    };
    let mut text = String::new();
    if args.find_bad {
        match &r.certificate {
            Some(cert) => {
                let _ = writeln!(text, "bad coloring with {} colors:", r.k_effective);
                text.push_str(&coloring_text(&cat, cert));
            }
            None => text.push_str("no bad coloring\n"),
        }
    } else {
        text.push_str(if r.holds { "HOLDS\n" } else { "FAILS\n" });
        if let Some(cert) = &r.certificate {
            text.push_str("refuting coloring:\n");
            text.push_str(&coloring_text(&cat, cert));
        }
    }
    if let Some(conv) = &r.convention {
        let _ = writeln!(text, "convention: {conv}");
    }
    let result = json!({
        "C": cat.name(c), "B": cat.name(b), "A": cat.name(a),
        "arrow": r,
    });
    output(text, result, r.nodes, EXIT_OK)
}

fn path_shapes(max_tops: usize) -> Result<Vec<BinaryDigraph>> {
    (1..=max_tops)
        .map(|n| BinaryDigraph::new(n, (1..n).map(|i| (i - 1, i)).collect()))
        .collect()
}

fn degree_command(which: &DegreeCommand, inputs: &mut Inputs) -> Result<Output> {
    let cfg = inputs.cfg;
    match which {
        DegreeCommand::Big { cat, s, a, mor } => {
            let (c, ids) = inputs.category(cat.as_deref(), &[s, a])?;
            let r = big_degree_exact(&c, ids[0], ids[1], mode(*mor), &cfg)?;
            let mut text = format!("{}({}, {}) = {}\n", r.quantity, r.object, r.host, r.value);
            if r.empty_domain {
                text.push_str("empty domain: no morphism A -> S\n");
            }
            text.push_str("extremal coloring:\n");
            text.push_str(&coloring_text(&c, &r.witness));
            output(text, &r, r.nodes, EXIT_OK)
        }
        DegreeCommand::Small {
            cat,
            a,
            b,
            k_max,
            t_max,
            mor,
        } => {
            let mut specs: Vec<&str> = vec![a];
            specs.extend(b.iter().map(String::as_str));
            let (c, ids) = inputs.category(cat.as_deref(), &specs)?;
            let query = SmallDegreeQuery {
                b: if b.is_empty() { None } else { Some(ids[1..].to_vec()) },
                hosts: None,
                k_max: *k_max,
                t_max: *t_max,
            };
            let r = small_degree_bounds(&c, ids[0], &query, mode(*mor), &cfg)?;
            let mut text = format!("{}({}) = {} over {}\n", r.quantity, r.object, r.value, r.scope);
            for w in &r.hosts {
                let _ = writeln!(text, "  B = {} hosted by C = {}", w.b, w.c);
            }
            if let Some(cert) = &r.lower_certificate {
                let _ = writeln!(text, "  at t = {}, B = {} has no host:", cert.t, cert.b);
                for refutation in &cert.refutations {
                    let _ = writeln!(text, "    C = {} refuted with {} colors", refutation.c, refutation.k);
                }
            }
            output(text, &r, r.nodes, EXIT_OK)
        }
        DegreeCommand::Verify(args) => identity_command(args, inputs),
    }
}

fn identity_command(args: &IdentityArgs, inputs: &mut Inputs) -> Result<Output> {
    let cfg = inputs.cfg;
    let cat = args.cat.as_deref();
    let (outcome, result): (Outcome, Value) = match args.identity.as_str() {
        "mult" => {
            let (c, ids) = inputs.category(cat, &[require(&args.a, "--A")?, require(&args.s, "--S")?])?;
            let r = check_multiplicativity(&c, ids[0], ids[1], &cfg)?;
            (Outcome::worst([&r.outcome, &r.rigidity]), serde_json::to_value(&r)?)
        }
        "sub" => {
            let (c, ids) = inputs.category(cat, &[require(&args.a, "--A")?])?;
            let r = check_sub_representation(&c, ids[0], &cfg)?;
            (r.outcome.clone(), serde_json::to_value(&r)?)
        }
        "monotonicity" => {
            let specs = [
                require(&args.s, "--S")?,
                require(&args.a, "--A")?,
                require(&args.b, "--B")?,
            ];
            let (c, ids) = inputs.category(cat, &specs)?;
            let r = check_monotonicity(&c, ids[0], ids[1], ids[2], &cfg)?;
            (r.outcome.clone(), serde_json::to_value(&r)?)
        }
        "smaller" => {
            let mut specs = vec![require(&args.s, "--S")?, require(&args.a, "--A")?];
            specs.extend(args.pool_objects.iter().map(String::as_str));
            let (c, ids) = inputs.category(cat, &specs)?;
            let d: Vec<ObjectId> = if args.pool_objects.is_empty() {
                c.objects().filter(|&x| x != ids[0] || ids[0] == ids[1]).collect()
            } else {
                ids[2..].to_vec()
            };
            let r = check_smaller(&c, &d, ids[0], ids[1], &cfg)?;
            (r.outcome.clone(), serde_json::to_value(&r)?)
        }
        "additivity" => {
            let u = load_expansion(require(&args.expansion, "--expansion")?, inputs)?;
            let a_name = require(&args.a, "--A")?;
            let s_name = require(&args.s, "--S")?;
            let a = u
                .target()
                .find_object(a_name)
                .ok_or_else(|| Error::Invalid(format!("unknown target object `{a_name}`")))?;
            let s = u
                .source()
                .find_object(s_name)
                .ok_or_else(|| Error::Invalid(format!("unknown expanded object `{s_name}`")))?;
            let r = check_additivity(&u, a, s, &cfg)?;
            (r.outcome(), serde_json::to_value(&r)?)
        }
        "cocone" => {
            let pool = inputs.pool(require(&args.cat, "--cat")?)?;
            let extra = match &args.extra {
                Some(p) => inputs.pool(p)?,
                None => Vec::new(),
            };
            let setup = constant_encoding_setup(pool, extra)?;
            let find = |c: &FiniteCategory, n: &str| {
                c.find_object(n)
                    .ok_or_else(|| Error::Invalid(format!("unknown object `{n}`")))
            };
            let a = find(&setup.encoded, require(&args.a, "--A")?)?;
            let b = find(&setup.encoded, require(&args.b, "--B")?)?;
            let c = match &args.c {
                Some(n) => find(&setup.ambient, n)?,
                None => setup.inclusion.object(b),
            };
            let mut diagrams = Vec::new();
            for shape in path_shapes(args.tops)? {
                diagrams.extend(Diagram::enumerate(&setup.encoded, &shape, a, b, &cfg)?);
            }
            let r = check_cocone_transfer(
                &setup.encoded,
                &setup.ambient,
                &setup.inclusion,
                a,
                b,
                c,
                &diagrams,
                &cfg,
            )?;
            (r.outcome.clone(), serde_json::to_value(&r)?)
        }
        other => {
            return Err(Error::Invalid(format!(
                "unknown identity `{other}`; expected mult, sub, additivity, monotonicity, smaller or cocone"
            )))
        }
    };
    let text = format!("{}: {}\n", args.identity, outcome_text(&outcome));
    output(
        text,
        json!({ "identity": args.identity, "outcome": outcome, "report": result }),
        0,
        outcome_code(&outcome),
    )
}

/// Reads an expansion file and the two pools it names.
fn load_expansion(path: &str, inputs: &mut Inputs) -> Result<Expansion> {
    let path = Path::new(path);
    let file = ExpansionFile::parse(&inputs.read(path)?)?;
    let mut texts = HashMap::new();
    for name in [&file.source, &file.target] {
        let text = inputs.read(&Inputs::relative(path, name))?;
        texts.insert(name.clone(), text);
    }
    file.build(&|name| {
        texts
            .get(name)
            .cloned()
            .ok_or_else(|| Error::Io(format!("pool `{name}` was not read")))
    })
}

fn pool_of(cat: &FiniteCategory) -> Result<Vec<(String, Structure)>> {
    cat.objects()
        .map(|a| {
            let s = cat
                .structure(a)
                .ok_or_else(|| Error::Invalid("expansion objects must be structures".into()))?;
            Ok((cat.name(a).to_string(), s.clone()))
        })
        .collect()
}

fn expansion_command(which: &ExpansionCommand, inputs: &mut Inputs) -> Result<Output> {
    let cfg = inputs.cfg;
    match which {
        ExpansionCommand::Generate {
            host,
            name,
            reduct,
            out,
        } => {
            let (default_name, s) = inputs.structure(host)?;
            let name = name.clone().unwrap_or(default_name);
            let u = match reduct {
                Some(path) => {
                    let spec = parse_reduct(&inputs.read(Path::new(path))?, s.signature())?;
                    reduct_expansion(&name, &s, &spec, &cfg)?
                }
                None => order_age(&name, &s, &cfg)?,
            };
            let dir = Path::new(out);
            std::fs::create_dir_all(dir)?;
            std::fs::write(dir.join("source.pool"), serialize_pool(&pool_of(u.source())?))?;
            std::fs::write(dir.join("target.pool"), serialize_pool(&pool_of(u.target())?))?;
            let file = ExpansionFile {
                source: "source.pool".into(),
                target: "target.pool".into(),
                objects: u
                    .source()
                    .objects()
                    .map(|x| {
                        (
                            u.source().name(x).to_string(),
                            u.target().name(u.project(x)).to_string(),
                        )
                    })
                    .collect(),
                morphisms: None,
            };
            std::fs::write(dir.join("expansion.json"), serde_json::to_string_pretty(&file)? + "\n")?;
            let text = format!(
                "wrote {out}: {} expanded objects over {} objects\n",
                u.source().object_count(),
                u.target().object_count()
            );
            let result = json!({
                "source_objects": u.source().object_count(),
                "target_objects": u.target().object_count(),
                "restrictions": u.classify_restrictions(),
                "expanded_host": format!("{name}*0"),
            });
            output(text, result, 0, EXIT_OK)
        }
        ExpansionCommand::Check { file, self_similar } => {
            let u = load_expansion(file, inputs)?;
            let source_valid = u.source().validate(&cfg)?;
            let target_valid = u.target().validate(&cfg)?;
            let restrictions = u.classify_restrictions();
            let properties = u.property_checks()?;
            let mut text = format!(
                "{} expanded objects over {} objects\nrestrictions: {}, unique: {}\nreasonable: {}, expansion property: {}\n",
                u.source().object_count(),
                u.target().object_count(),
                restrictions.has_restrictions,
                restrictions.has_unique_restrictions,
                properties.reasonable,
                properties.expansion_property
            );
            let similarity = match self_similar {
                Some(n) => {
                    let s = u
                        .source()
                        .find_object(n)
                        .ok_or_else(|| Error::Invalid(format!("unknown expanded object `{n}`")))?;
                    let r = u.is_self_similar(s)?;
                    let _ = writeln!(text, "{n} self-similar: {}", r.holds);
                    Some(r)
                }
                None => None,
            };
            let code = if source_valid.valid && target_valid.valid {
                EXIT_OK
            } else {
                EXIT_INTERNAL
            };
            let result = json!({
                "source_valid": source_valid.valid,
                "target_valid": target_valid.valid,
                "restrictions": restrictions,
                "properties": properties,
                "self_similarity": similarity,
            });
            output(text, result, 0, code)
        }
    }
}

fn verify_command(args: &VerifyArgs, inputs: &mut Inputs) -> Result<Output> {
    let cfg = inputs.cfg;
    let pool = match &args.pool {
        Some(p) => Some(inputs.pool(p)?),
        None => None,
    };
    let names: Vec<&str> = if args.identity == "all" {
        SUITES.to_vec()
    } else {
        vec![args.identity.as_str()]
    };
    let mut reports = Vec::new();
    for name in names {
        reports.push(run_suite(name, pool.clone(), &cfg)?);
    }
    let mut text = String::new();
    for r in &reports {
        let _ = writeln!(text, "{} {}", if r.passed() { "PASS" } else { "FAIL" }, r.summary());
    }
    let code = if reports
        .iter()
        .any(|r| r.violations > 0 || r.spots.iter().any(|s| !s.ok))
    {
        EXIT_INTERNAL
    } else if reports.iter().all(|r| r.verified == 0 && r.spots.is_empty()) {
        EXIT_HYPOTHESIS
    } else {
        EXIT_OK
    };
    output(text, json!({ "suites": reports }), 0, code)
}
