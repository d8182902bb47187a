//! One module per subcommand, sharing argument parsing helpers and the
//! run context.

pub mod bound;
pub mod compare;
pub mod matrix;
pub mod oracle;
pub mod tau;
pub mod verify;

use std::path::PathBuf;

use num_bigint::BigUint;
use regionbound_core::{growth_rate, Architecture, GammaFamily};

use crate::output::Format;
use crate::Failure;

/// Options every command receives.
pub struct Context {
    pub format: Format,
    pub seed: u64,
    pub out_dir: Option<PathBuf>,
}

pub fn parse_family(name: &str) -> Result<GammaFamily, Failure> {
    GammaFamily::parse(name).ok_or_else(|| {
        Failure::Usage(format!(
            "unknown family {name:?}; expected hat, tilde, bar, star or star-conjecture"
        ))
    })
}

pub fn parse_arch(text: &str) -> Result<Architecture, Failure> {
    text.parse::<Architecture>().map_err(|e| Failure::Usage(e.to_string()))
}

/// Per-layer growth base, defined when the hidden widths are constant.
pub fn constant_width_growth(family: &GammaFamily, arch: &Architecture) -> Option<BigUint> {
    let width = arch.constant_width()?;
    Some(
        growth_rate(family, arch.input_dim.min(width), width)
            .expect("input dimension capped at the width"),
    )
}
