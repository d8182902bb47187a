//! The `bound` command: one architecture, one family, one certified (or
//! explicitly conjectured) number.

use regionbound_core::{compose_bound, GammaCollection, GammaStatus};
use serde_json::json;

use crate::commands::{constant_width_growth, parse_arch, parse_family, Context};
use crate::output::{self, Format};
use crate::{CmdResult, Failure};

pub fn run(ctx: &Context, arch_text: &str, family_name: &str, allow_conjecture: bool) -> CmdResult {
    let family = parse_family(family_name)?;
    let arch = parse_arch(arch_text)?;
    let conjectured = family.status() == GammaStatus::Conjectured;
    if conjectured && !allow_conjecture {
        return Err(Failure::Domain(format!(
            "family {family} rests on an unproven conjecture; pass --allow-conjecture to use it"
        )));
    }
    let outcome = compose_bound(&family, &arch);
    let growth = constant_width_growth(&family, &arch);

    match ctx.format {
        Format::Text => {
            println!("architecture {arch}");
            println!("family {family}{}", if conjectured { " (conjectured)" } else { "" });
            println!("bound {}", outcome.bound);
            for (layer, h) in outcome.per_layer.iter().enumerate() {
                println!("after layer {}: {h}", layer + 1);
            }
            if let Some(g) = &growth {
                println!("growth O({g}^L) at constant width {}", arch.constant_width().unwrap());
            }
            if conjectured {
                println!("warning: conjectured family; this bound is not certified");
            }
        }
        Format::Json => {
            output::print_json(&json!({
                "architecture": arch.to_string(),
                "bound": outcome.bound.to_string(),
                "family": family.to_string(),
                "conjectured": conjectured,
                "per_layer_histograms":
                    outcome.per_layer.iter().map(output::histogram_json).collect::<Vec<_>>(),
                "growth": growth.as_ref().map(|g| g.to_string()),
            }));
        }
        Format::Csv => {
            println!("architecture,{arch}");
            println!("family,{family}");
            println!("conjectured,{conjectured}");
            println!("bound,{}", outcome.bound);
            for (layer, h) in outcome.per_layer.iter().enumerate() {
                println!("layer_{},{}", layer + 1, output::histogram_csv(h));
            }
            if let Some(g) = &growth {
                println!("growth,{g}");
            }
        }
    }
    Ok(())
}
