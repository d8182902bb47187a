//! The `verify` command: re-run the library's self-checks against the
//! brute-force oracles and report every outcome.

use std::path::Path;

use regionbound_core::verify::{run_suite, Suite, VerifyConfig, DEFAULT_CONJECTURE_TRIALS};
use serde_json::json;

use crate::commands::Context;
use crate::output::{self, Format};
use crate::{files, CmdResult, Failure};

pub fn run(
    ctx: &Context,
    suite: Option<&str>,
    p1: Option<usize>,
    trials: Option<usize>,
) -> CmdResult {
    let suites: Vec<Suite> = match suite {
        Some(name) => match Suite::parse(name) {
            Some(s) => vec![s],
            None => {
                let names: Vec<&str> = Suite::ALL.iter().map(|s| s.name()).collect();
                return Err(Failure::Usage(format!(
                    "unknown suite {name:?}; expected one of {}",
                    names.join(", ")
                )));
            }
        },
        None => Suite::ALL.to_vec(),
    };
    let config = VerifyConfig { p1, trials, seed: ctx.seed };

    let mut results = Vec::with_capacity(suites.len());
    let mut artifacts = Vec::new();
    let mut checks = 0usize;
    let mut failed = 0usize;
    for suite in suites {
        let outcomes = run_suite(suite, &config);
        checks += outcomes.len();
        for outcome in &outcomes {
            if !outcome.passed {
                failed += 1;
            }
            if let Some(cx) = &outcome.counterexample {
                let dir = ctx.out_dir.as_deref().unwrap_or(Path::new("."));
                let trials = trials.unwrap_or(DEFAULT_CONJECTURE_TRIALS);
                match files::write_counterexample(dir, ctx.seed, trials, cx) {
                    Ok(path) => artifacts.push(path.display().to_string()),
                    Err(err) => eprintln!("warning: could not save counterexample: {err}"),
                }
            }
        }
        results.push((suite, outcomes));
    }

    match ctx.format {
        Format::Text => {
            for (suite, outcomes) in &results {
                println!("suite {}", suite.name());
                for outcome in outcomes {
                    let verdict = if outcome.passed { "PASS" } else { "FAIL" };
                    println!("  {verdict} {}: {}", outcome.name, outcome.detail);
                }
            }
            println!("{checks} checks, {failed} failed");
            for path in &artifacts {
                println!("counterexample saved to {path}");
            }
        }
        Format::Json => {
            output::print_json(&json!({
                "suites": results
                    .iter()
                    .map(|(suite, outcomes)| {
                        json!({
                            "suite": suite.name(),
                            "checks": outcomes
                                .iter()
                                .map(|o| {
                                    json!({
                                        "name": o.name,
                                        "passed": o.passed,
                                        "detail": o.detail,
                                    })
                                })
                                .collect::<Vec<_>>(),
                        })
                    })
                    .collect::<Vec<_>>(),
                "checks": checks,
                "failed": failed,
                "artifacts": artifacts,
            }));
        }
        Format::Csv => {
            println!("suite,check,passed,detail");
            for (suite, outcomes) in &results {
                for o in outcomes {
                    println!(
                        "{},{},{},{}",
                        suite.name(),
                        output::csv_field(&o.name),
                        o.passed,
                        output::csv_field(&o.detail)
                    );
                }
            }
        }
    }
    if failed > 0 {
        return Err(Failure::Checks(failed));
    }
    Ok(())
}
