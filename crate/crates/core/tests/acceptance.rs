//! One pass/fail line per acceptance criterion; exits nonzero if any fails.

mod common;

use std::time::Instant;

use ramdeg::suites::{run_suite, SuiteReport};
use ramdeg::SearchConfig;

struct Line {
    ok: bool,
    text: String,
}

fn suite_line(name: &str, cfg: &SearchConfig) -> (Line, Option<SuiteReport>) {
    match run_suite(name, None, cfg) {
        Ok(r) => (
            Line {
                ok: r.passed(),
                text: r.summary(),
            },
            Some(r),
        ),
        Err(e) => (
            Line {
                ok: false,
                text: format!("{name}: error: {e}"),
            },
            None,
        ),
    }
}

fn arrows(cfg: &SearchConfig) -> Line {
    let start = Instant::now();
    let ramsey = common::ramsey_three_three();
    let oracle = common::oracle_arrow(&common::chain(6), &common::chain(3), &common::chain(2), 2, 1, true)
        && !common::oracle_arrow(&common::chain(5), &common::chain(3), &common::chain(2), 2, 1, true);
    let (mut line, _) = suite_line("arrows", cfg);
    let secs = start.elapsed().as_secs_f64();
    line.ok &= ramsey == 6 && oracle && secs < 30.0;
    line.text = format!("{}; brute-force R(3,3) = {ramsey}; {secs:.2}s", line.text);
    line
}

fn determinism(names: &[&str]) -> Line {
    let configs = [
        SearchConfig::default().with_jobs(1).with_pruning(false),
        SearchConfig::default().with_jobs(8).with_pruning(false),
        SearchConfig::default().with_jobs(1).with_pruning(true),
        SearchConfig::default().with_jobs(8).with_pruning(true),
    ];
    let mut differing = Vec::new();
    for name in names {
        let texts: Vec<String> = configs
            .iter()
            .map(|cfg| match run_suite(name, None, cfg) {
                Ok(r) => serde_json::to_string(&r).unwrap(),
                Err(e) => format!("error: {e}"),
            })
            .collect();
        if texts.iter().any(|t| t != &texts[0] || t.starts_with("error")) {
            differing.push(*name);
        }
    }
    Line {
        ok: differing.is_empty(),
        text: if differing.is_empty() {
            format!(
                "{} suites byte-identical across jobs 1/8 and pruning off/on",
                names.len()
            )
        } else {
            format!("reports differ for {}", differing.join(", "))
        },
    }
}

fn main() {
    let cfg = SearchConfig::default();
    let suites = [
        "rigid",
        "mult",
        "sub",
        "additivity",
        "lemmas",
        "monotonicity",
        "reducts",
        "smaller",
    ];
    let mut lines = vec![arrows(&cfg)];
    lines.extend(suites.iter().map(|s| suite_line(s, &cfg).0));
    let mut all = vec!["arrows"];
    all.extend(suites);
    all.push("cocone");
    lines.push(determinism(&all));

    let mut failed = 0;
    for (i, line) in lines.iter().enumerate() {
        println!(
            "criterion {}: {} {}",
            i + 1,
            if line.ok { "PASS" } else { "FAIL" },
            line.text
        );
        failed += usize::from(!line.ok);
    }
    if failed > 0 {
        println!("{failed} criteria failed");
        std::process::exit(1);
    }
}
