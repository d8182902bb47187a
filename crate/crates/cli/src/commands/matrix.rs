//! The `matrix` command: the layer transition matrix of a family at one
//! width, printed as a grid.

use regionbound_core::{BoundMatrix, GammaCollection, GammaStatus};
use serde_json::json;

use crate::commands::{parse_family, Context};
use crate::output::{self, Format};
use crate::{CmdResult, Failure};

pub fn run(ctx: &Context, family_name: &str, p1: usize) -> CmdResult {
    let family = parse_family(family_name)?;
    if p1 == 0 {
        return Err(Failure::Domain("matrix width must be at least 1".to_string()));
    }
    let conjectured = family.status() == GammaStatus::Conjectured;
    let matrix = BoundMatrix::build(&family, p1);
    let dim = matrix.dim();
    let cells: Vec<Vec<String>> = (0..dim)
        .map(|row| (0..dim).map(|col| matrix.cell(row, col).to_string()).collect())
        .collect();

    match ctx.format {
        Format::Text => {
            println!("family {family}{}", if conjectured { " (conjectured)" } else { "" });
            println!("width {p1}");
            let col_width =
                cells.iter().flatten().map(String::len).max().unwrap_or(1);
            for row in &cells {
                let line: Vec<String> =
                    row.iter().map(|c| format!("{c:>col_width$}")).collect();
                println!("{}", line.join(" "));
            }
        }
        Format::Json => {
            output::print_json(&json!({
                "family": family.to_string(),
                "p1": p1,
                "conjectured": conjectured,
                "rows": cells,
            }));
        }
        Format::Csv => {
            println!("family,{family}");
            println!("p1,{p1}");
            println!("conjectured,{conjectured}");
            for row in &cells {
                println!("{}", row.join(","));
            }
        }
    }
    Ok(())
}
