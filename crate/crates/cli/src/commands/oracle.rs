//! The `oracle` subcommands: direct access to the exact enumerations the
//! test batteries check the bound machinery against.

use std::path::Path;

use regionbound_core::oracle::{
    activation_histogram_2d, count_regions_1d_net, empirical_subnet_histogram, enumerate_cells_2d,
    histogram_of_sigma, hot_center_arrangement, oracle_tau1, rng_for, sample_arrangement,
    sample_rational_net, search_tau2, OrientedArrangement2D, RationalNet,
};
use regionbound_core::gamma::conjecture_tau2;
use regionbound_core::Histogram;
use serde_json::json;

use crate::commands::{parse_arch, Context};
use crate::output::{self, Format};
use crate::{files, CmdResult, Failure};

fn print_histogram(ctx: &Context, h: &Histogram) {
    match ctx.format {
        Format::Text => println!("histogram {h}"),
        Format::Json => output::print_json(&json!({ "histogram": output::histogram_json(h) })),
        Format::Csv => println!("histogram,{}", output::histogram_csv(h)),
    }
}

pub fn tau1(ctx: &Context, p1: usize) -> CmdResult {
    let h = oracle_tau1(p1)?;
    print_histogram(ctx, &h);
    Ok(())
}

pub fn sigma(ctx: &Context, pattern: &str) -> CmdResult {
    let signs = pattern
        .chars()
        .map(|c| match c {
            '+' => Ok(1i8),
            '-' => Ok(-1i8),
            other => Err(Failure::Usage(format!(
                "sign patterns are written with '+' and '-', got {other:?}"
            ))),
        })
        .collect::<Result<Vec<i8>, Failure>>()?;
    let h = histogram_of_sigma(&signs)?;
    print_histogram(ctx, &h);
    Ok(())
}

/// Resolves the three ways of naming an arrangement: a file, the tangent
/// construction, or a fresh seeded sample.
fn resolve_arrangement(
    ctx: &Context,
    p1: Option<usize>,
    file: Option<&Path>,
    hot_center: bool,
) -> Result<OrientedArrangement2D, Failure> {
    if file.is_some() && hot_center {
        return Err(Failure::Usage(
            "pick either --file or --hot-center, not both".to_string(),
        ));
    }
    if let Some(path) = file {
        return files::read_arrangement(path);
    }
    let p1 = p1.ok_or_else(|| {
        Failure::Usage("--p1 is required unless the arrangement comes from --file".to_string())
    })?;
    if hot_center {
        return Ok(hot_center_arrangement(p1)?);
    }
    Ok(sample_arrangement(p1, &mut rng_for(ctx.seed, 100))?)
}

fn pattern_string(pattern: &[bool]) -> String {
    pattern.iter().map(|&p| if p { '+' } else { '-' }).collect()
}

pub fn cells(ctx: &Context, p1: Option<usize>, file: Option<&Path>, hot_center: bool) -> CmdResult {
    let arr = resolve_arrangement(ctx, p1, file, hot_center)?;
    let cells = enumerate_cells_2d(&arr)?;
    match ctx.format {
        Format::Text => {
            println!("lines {}", arr.len());
            for (i, line) in arr.lines().iter().enumerate() {
                println!(
                    "line {i}: {} {} {}",
                    files::rational_string(&line.a),
                    files::rational_string(&line.b),
                    files::rational_string(&line.c)
                );
            }
            println!("cells {}", cells.len());
            for cell in &cells {
                println!(
                    "{} active {} witness ({}, {})",
                    pattern_string(&cell.pattern),
                    cell.active_count(),
                    files::rational_string(&cell.witness.0),
                    files::rational_string(&cell.witness.1)
                );
            }
        }
        Format::Json => {
            output::print_json(&json!({
                "arrangement": files::arrangement_json(&arr),
                "count": cells.len(),
                "cells": cells
                    .iter()
                    .map(|cell| {
                        json!({
                            "pattern": pattern_string(&cell.pattern),
                            "active": cell.active_count(),
                            "witness": [
                                files::rational_string(&cell.witness.0),
                                files::rational_string(&cell.witness.1),
                            ],
                        })
                    })
                    .collect::<Vec<_>>(),
            }));
        }
        Format::Csv => {
            for (i, line) in arr.lines().iter().enumerate() {
                println!(
                    "line,{i},{},{},{}",
                    files::rational_string(&line.a),
                    files::rational_string(&line.b),
                    files::rational_string(&line.c)
                );
            }
            for cell in &cells {
                println!(
                    "cell,{},{},{},{}",
                    pattern_string(&cell.pattern),
                    cell.active_count(),
                    files::rational_string(&cell.witness.0),
                    files::rational_string(&cell.witness.1)
                );
            }
        }
    }
    Ok(())
}

pub fn histogram(
    ctx: &Context,
    p1: Option<usize>,
    file: Option<&Path>,
    hot_center: bool,
) -> CmdResult {
    let arr = resolve_arrangement(ctx, p1, file, hot_center)?;
    let h = activation_histogram_2d(&arr)?;
    match ctx.format {
        Format::Text => {
            println!("lines {}", arr.len());
            for (i, line) in arr.lines().iter().enumerate() {
                println!(
                    "line {i}: {} {} {}",
                    files::rational_string(&line.a),
                    files::rational_string(&line.b),
                    files::rational_string(&line.c)
                );
            }
            println!("histogram {h}");
        }
        Format::Json => {
            output::print_json(&json!({
                "arrangement": files::arrangement_json(&arr),
                "histogram": output::histogram_json(&h),
            }));
        }
        Format::Csv => {
            for (i, line) in arr.lines().iter().enumerate() {
                println!(
                    "line,{i},{},{},{}",
                    files::rational_string(&line.a),
                    files::rational_string(&line.b),
                    files::rational_string(&line.c)
                );
            }
            println!("histogram,{}", output::histogram_csv(&h));
        }
    }
    Ok(())
}

pub fn search(ctx: &Context, p1: usize, trials: usize) -> CmdResult {
    let search = search_tau2(p1, trials, ctx.seed)?;
    let conjecture = conjecture_tau2(p1)?;
    let within = search.counterexample.is_none();
    let attains = search.join == conjecture;
    let artifact = match &search.counterexample {
        Some(cx) => {
            let dir = ctx.out_dir.as_deref().unwrap_or(Path::new("."));
            match files::write_counterexample(dir, ctx.seed, trials, cx) {
                Ok(path) => Some(path.display().to_string()),
                Err(err) => {
                    eprintln!("warning: could not save counterexample: {err}");
                    None
                }
            }
        }
        None => None,
    };
    match ctx.format {
        Format::Text => {
            println!("p1 {} trials {} seed {}", search.p1, search.trials, search.seed);
            println!("join {}", search.join);
            println!("conjecture {conjecture}");
            println!("within_conjecture {within}");
            println!("attains_conjecture {attains}");
            println!("cell_counts_consistent {}", search.cell_counts_consistent);
            if let Some(cx) = &search.counterexample {
                println!(
                    "counterexample at sample {} with histogram {}",
                    cx.sample_index, cx.histogram
                );
            }
            if let Some(path) = &artifact {
                println!("counterexample saved to {path}");
            }
        }
        Format::Json => {
            output::print_json(&json!({
                "p1": search.p1,
                "trials": search.trials,
                "seed": search.seed.to_string(),
                "join": output::histogram_json(&search.join),
                "conjecture": output::histogram_json(&conjecture),
                "within_conjecture": within,
                "attains_conjecture": attains,
                "cell_counts_consistent": search.cell_counts_consistent,
                "counterexample": search.counterexample.as_ref().map(|cx| {
                    json!({
                        "sample_index": cx.sample_index,
                        "flip": cx.flip,
                        "arrangement": files::arrangement_json(&cx.arrangement),
                        "histogram": output::histogram_json(&cx.histogram),
                    })
                }),
                "artifact": artifact,
            }));
        }
        Format::Csv => {
            println!("p1,{}", search.p1);
            println!("trials,{}", search.trials);
            println!("seed,{}", search.seed);
            println!("join,{}", output::histogram_csv(&search.join));
            println!("conjecture,{}", output::histogram_csv(&conjecture));
            println!("within_conjecture,{within}");
            println!("attains_conjecture,{attains}");
            println!("cell_counts_consistent,{}", search.cell_counts_consistent);
            if let Some(path) = &artifact {
                println!("artifact,{}", output::csv_field(path));
            }
        }
    }
    if !within {
        return Err(Failure::Checks(1));
    }
    Ok(())
}

pub fn count_net(ctx: &Context, file: Option<&Path>, arch: Option<&str>) -> CmdResult {
    let (net, sampled): (RationalNet, bool) = match (file, arch) {
        (Some(_), Some(_)) => {
            return Err(Failure::Usage(
                "pick either --file or --arch, not both".to_string(),
            ));
        }
        (Some(path), None) => (files::read_net(path)?, false),
        (None, Some(text)) => {
            let arch = parse_arch(text)?;
            let net =
                sample_rational_net(&mut rng_for(ctx.seed, 101), arch.input_dim, &arch.widths);
            (net, true)
        }
        (None, None) => {
            return Err(Failure::Usage(
                "a net is needed: --file to read one, --arch to sample one".to_string(),
            ));
        }
    };
    let regions = count_regions_1d_net(&net)?;
    match ctx.format {
        Format::Text => {
            println!("architecture {}", net.architecture());
            println!("count {}", regions.count);
            for (layer, h) in regions.per_layer.iter().enumerate() {
                println!("layer {}: {h}", layer + 1);
            }
            println!("min_histogram {}", regions.min_histogram);
            let breakpoints: Vec<String> =
                regions.breakpoints.iter().map(files::rational_string).collect();
            println!("breakpoints {}", breakpoints.join(" "));
        }
        Format::Json => {
            output::print_json(&json!({
                "architecture": net.architecture().to_string(),
                "net": sampled.then(|| files::net_json(&net)),
                "count": regions.count,
                "per_layer_histograms":
                    regions.per_layer.iter().map(output::histogram_json).collect::<Vec<_>>(),
                "min_histogram": output::histogram_json(&regions.min_histogram),
                "breakpoints": regions
                    .breakpoints
                    .iter()
                    .map(files::rational_string)
                    .collect::<Vec<_>>(),
            }));
        }
        Format::Csv => {
            println!("architecture,{}", net.architecture());
            println!("count,{}", regions.count);
            for (layer, h) in regions.per_layer.iter().enumerate() {
                println!("layer_{},{}", layer + 1, output::histogram_csv(h));
            }
            println!("min_histogram,{}", output::histogram_csv(&regions.min_histogram));
            let breakpoints: Vec<String> =
                regions.breakpoints.iter().map(files::rational_string).collect();
            println!("breakpoints,{}", output::csv_field(&breakpoints.join(";")));
        }
    }
    Ok(())
}

pub fn subnet(ctx: &Context, topology: &str, p0: usize, trials: usize) -> CmdResult {
    let widths = topology
        .split('x')
        .map(|part| part.trim().parse::<usize>().ok().filter(|&w| w > 0))
        .collect::<Option<Vec<usize>>>()
        .ok_or_else(|| {
            Failure::Usage(format!(
                "block widths are written like \"6x6\" with positive integers, got {topology:?}"
            ))
        })?;
    let h = empirical_subnet_histogram(&widths, p0, trials, ctx.seed)?;
    match ctx.format {
        Format::Text => {
            println!("topology {}", topology);
            println!("p0 {p0} trials {trials} seed {}", ctx.seed);
            println!("histogram {h}");
            println!("mass {}", h.l1_norm());
            println!("note: sampled lower bound; not a certified upper bound");
        }
        Format::Json => {
            output::print_json(&json!({
                "topology": widths,
                "p0": p0,
                "trials": trials,
                "seed": ctx.seed.to_string(),
                "histogram": output::histogram_json(&h),
                "mass": h.l1_norm().to_string(),
                "certified": false,
            }));
        }
        Format::Csv => {
            println!("topology,{}", output::csv_field(topology));
            println!("p0,{p0}");
            println!("trials,{trials}");
            println!("seed,{}", ctx.seed);
            println!("histogram,{}", output::histogram_csv(&h));
            println!("mass,{}", h.l1_norm());
            println!("certified,false");
        }
    }
    Ok(())
}
