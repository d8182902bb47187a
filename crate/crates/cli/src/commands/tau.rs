//! The `tau` command: the best known activation histogram for a single layer,
//! labelled by how much of it is actually proven.

use regionbound_core::gamma::{conjecture_tau2, gamma_star_recursive, tau_closed_form};
use regionbound_core::Histogram;
use serde_json::json;

use crate::commands::Context;
use crate::output::{self, Format};
use crate::{CmdResult, Failure};

fn cell(p0: usize, p1: usize) -> Result<(Histogram, &'static str), Failure> {
    if p0 == 0 || p1 == 0 {
        return Err(Failure::Domain(
            "tau needs a positive input dimension and a positive width".to_string(),
        ));
    }
    if p0 == 1 || p0 >= p1 {
        return Ok((tau_closed_form(p0, p1)?, "proven"));
    }
    if p0 == 2 {
        return Ok((conjecture_tau2(p1)?, "conjectured"));
    }
    Ok((gamma_star_recursive(p0, p1)?, "unknown-upper-bound"))
}

pub fn run(ctx: &Context, p0: Option<usize>, p1: Option<usize>) -> CmdResult {
    let pairs: Vec<(usize, usize)> = match (p0, p1) {
        (Some(p0), Some(p1)) => vec![(p0, p1)],
        (Some(p0), None) => (1..=6).map(|p1| (p0, p1)).collect(),
        (None, Some(p1)) => (1..=6).map(|p0| (p0, p1)).collect(),
        (None, None) => (1..=6).flat_map(|p0| (1..=6).map(move |p1| (p0, p1))).collect(),
    };
    let mut cells = Vec::with_capacity(pairs.len());
    for (p0, p1) in pairs {
        let (histogram, status) = cell(p0, p1)?;
        cells.push((p0, p1, status, histogram));
    }

    match ctx.format {
        Format::Text => {
            for (p0, p1, status, histogram) in &cells {
                println!("p0 {p0} p1 {p1} {status}: {histogram}");
            }
        }
        Format::Json => {
            output::print_json(&json!({
                "cells": cells
                    .iter()
                    .map(|(p0, p1, status, histogram)| {
                        json!({
                            "p0": p0,
                            "p1": p1,
                            "status": status,
                            "histogram": output::histogram_json(histogram),
                        })
                    })
                    .collect::<Vec<_>>(),
            }));
        }
        Format::Csv => {
            println!("p0,p1,status,entries");
            for (p0, p1, status, histogram) in &cells {
                println!("{p0},{p1},{status},{}", output::histogram_csv(histogram));
            }
        }
    }
    Ok(())
}
