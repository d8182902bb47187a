//! The `compare` command: every family's bound for one architecture, side by
//! side.

use regionbound_core::{compose_bound, GammaCollection, GammaFamily, GammaStatus};
use serde_json::json;

use crate::commands::{constant_width_growth, parse_arch, Context};
use crate::output::{self, Format};
use crate::CmdResult;

pub fn run(ctx: &Context, arch_text: &str) -> CmdResult {
    let arch = parse_arch(arch_text)?;
    let rows: Vec<_> = GammaFamily::ALL
        .iter()
        .map(|family| {
            let conjectured = family.status() == GammaStatus::Conjectured;
            let outcome = compose_bound(family, &arch);
            let growth = constant_width_growth(family, &arch);
            (family, conjectured, outcome.bound, growth)
        })
        .collect();

    match ctx.format {
        Format::Text => {
            println!("architecture {arch}");
            let name_width =
                rows.iter().map(|(f, ..)| f.to_string().len()).max().unwrap_or(0);
            let bound_width =
                rows.iter().map(|(.., b, _)| b.to_string().len()).max().unwrap_or(0);
            for (family, conjectured, bound, growth) in &rows {
                let status = if *conjectured { "conjectured" } else { "certified" };
                let growth = match growth {
                    Some(g) => format!("O({g}^L)"),
                    None => "-".to_string(),
                };
                println!(
                    "{:<name_width$}  {status:<11}  {bound:>bound_width$}  {growth}",
                    family.to_string()
                );
            }
        }
        Format::Json => {
            output::print_json(&json!({
                "architecture": arch.to_string(),
                "rows": rows
                    .iter()
                    .map(|(family, conjectured, bound, growth)| {
                        json!({
                            "family": family.to_string(),
                            "conjectured": conjectured,
                            "bound": bound.to_string(),
                            "growth": growth.as_ref().map(|g| g.to_string()),
                        })
                    })
                    .collect::<Vec<_>>(),
            }));
        }
        Format::Csv => {
            println!("family,conjectured,bound,growth");
            for (family, conjectured, bound, growth) in &rows {
                let growth = growth.as_ref().map(|g| g.to_string()).unwrap_or_default();
                println!("{family},{conjectured},{bound},{growth}");
            }
        }
    }
    Ok(())
}
