//! Self-check battery: recomputes frozen reference values, compares
//! the closed forms against brute-force oracles, and probes the
//! structural claims the bound machinery relies on.
//!
//! Every check returns a [`CheckOutcome`] instead of panicking, so a
//! failing claim is reported with enough detail to chase down.

use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use num_bigint::BigUint;
use rand_core::RngCore;

use crate::bound::{
    compose_bound, compose_histogram_path, compose_matrix_path, growth_rate, subnet_compose_bound,
    Architecture, BoundMatrix, SubnetGammaFamily, SubnetworkPartition,
};
use crate::gamma::{
    conjecture_tau2, gamma_bar, gamma_star_explicit, gamma_star_k_expansion,
    gamma_star_recursive, tau_closed_form, validate_bound_condition, GammaCollection,
    GammaFamily,
};
use crate::histogram::Histogram;
use crate::oracle::{
    count_regions_1d_net, enumerate_cells_2d, histogram_under_flip, hot_center_arrangement,
    oracle_tau1, rng_for, sample_rational_net, search_tau2, NetLayer, RationalNet,
    Tau2Counterexample,
};

/// Width-six table of the tightest proven family, rows indexed by input
/// dimension.
const TABLE_P6: [[u64; 7]; 7] = [
    [0, 0, 0, 0, 0, 0, 1],
    [0, 0, 0, 2, 2, 2, 1],
    [0, 0, 1, 5, 9, 6, 1],
    [0, 0, 4, 16, 15, 6, 1],
    [0, 1, 14, 20, 15, 6, 1],
    [0, 6, 15, 20, 15, 6, 1],
    [1, 6, 15, 20, 15, 6, 1],
];

/// Width-six layer matrix of the binomial-sum family.
const MATRIX_BAR_P6: [[u64; 7]; 7] = [
    [1, 0, 0, 0, 0, 0, 1],
    [0, 7, 0, 0, 0, 6, 6],
    [0, 0, 22, 0, 15, 15, 15],
    [0, 0, 0, 42, 20, 20, 20],
    [0, 0, 0, 0, 22, 15, 15],
    [0, 0, 0, 0, 0, 7, 6],
    [0, 0, 0, 0, 0, 0, 1],
];

/// Width-six layer matrix of the tightest proven family.
const MATRIX_STAR_P6: [[u64; 7]; 7] = [
    [1, 0, 0, 0, 0, 0, 1],
    [0, 7, 0, 0, 1, 6, 6],
    [0, 0, 22, 4, 14, 15, 15],
    [0, 0, 0, 38, 20, 20, 20],
    [0, 0, 0, 0, 22, 15, 15],
    [0, 0, 0, 0, 0, 7, 6],
    [0, 0, 0, 0, 0, 0, 1],
];

/// Width-six layer matrix of the conjectured refinement.
const MATRIX_STAR_CONJECTURE_P6: [[u64; 7]; 7] = [
    [1, 0, 0, 0, 0, 0, 1],
    [0, 7, 0, 0, 2, 6, 6],
    [0, 0, 22, 7, 13, 15, 15],
    [0, 0, 0, 35, 20, 20, 20],
    [0, 0, 0, 0, 22, 15, 15],
    [0, 0, 0, 0, 0, 7, 6],
    [0, 0, 0, 0, 0, 0, 1],
];

/// Named groups of checks.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Suite {
    /// The width-six histogram table through all three construction paths.
    Table,
    /// The width-six layer matrices and their growth rates.
    Matrices,
    /// Exhaustive one-dimensional oracle against the closed form.
    Tau1,
    /// Sampled two-dimensional arrangements against the conjecture.
    Conjecture,
    /// Recursion identities between neighbouring widths.
    Recursion,
    /// Dominance chains and the bound condition for every family.
    Chain,
    /// Agreement of the two composition phrasings and the block form.
    Paths,
    /// Region counts of concrete networks against the composed bounds.
    Soundness,
}

impl Suite {
    pub const ALL: [Suite; 8] = [
        Suite::Table,
        Suite::Matrices,
        Suite::Tau1,
        Suite::Conjecture,
        Suite::Recursion,
        Suite::Chain,
        Suite::Paths,
        Suite::Soundness,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            Suite::Table => "star6",
            Suite::Matrices => "matrices6",
            Suite::Tau1 => "tau1",
            Suite::Conjecture => "conjecture",
            Suite::Recursion => "recursion",
            Suite::Chain => "chain",
            Suite::Paths => "paths",
            Suite::Soundness => "soundness",
        }
    }

    pub fn parse(s: &str) -> Option<Suite> {
        Suite::ALL.iter().copied().find(|suite| suite.name() == s)
    }
}

/// Samples per width in the conjecture suite when the config leaves
/// the count unset.
pub const DEFAULT_CONJECTURE_TRIALS: usize = 200;

/// Tuning knobs shared by the suites; `None` keeps a suite's default.
#[derive(Clone, Copy, Debug, Default)]
pub struct VerifyConfig {
    /// Width ceiling (or, for the conjecture suite, the single width to
    /// search).
    pub p1: Option<usize>,
    /// Sample count for randomized checks.
    pub trials: Option<usize>,
    pub seed: u64,
}

/// Result of a single named check.
#[derive(Clone, Debug)]
pub struct CheckOutcome {
    pub name: String,
    pub passed: bool,
    pub detail: String,
    /// A concrete refuting configuration, when a sampled check found one.
    pub counterexample: Option<Tau2Counterexample>,
}

impl CheckOutcome {
    fn pass(name: &str, detail: String) -> Self {
        CheckOutcome { name: String::from(name), passed: true, detail, counterexample: None }
    }

    fn fail(name: &str, detail: String) -> Self {
        CheckOutcome { name: String::from(name), passed: false, detail, counterexample: None }
    }

    fn of(name: &str, passed: bool, detail: String) -> Self {
        if passed {
            CheckOutcome::pass(name, detail)
        } else {
            CheckOutcome::fail(name, detail)
        }
    }
}

/// Runs every check of one suite.
pub fn run_suite(suite: Suite, config: &VerifyConfig) -> Vec<CheckOutcome> {
    match suite {
        Suite::Table => table_checks(),
        Suite::Matrices => matrix_checks(),
        Suite::Tau1 => tau1_checks(config),
        Suite::Conjecture => conjecture_checks(config),
        Suite::Recursion => recursion_checks(config),
        Suite::Chain => chain_checks(config),
        Suite::Paths => path_checks(config),
        Suite::Soundness => soundness_checks(config),
    }
}

fn expected_row(row: &[u64; 7]) -> Histogram {
    Histogram::from_u64_entries(row)
}

fn compare_table(name: &str, rows: &[(usize, Histogram)]) -> CheckOutcome {
    for (p0, got) in rows {
        let want = expected_row(&TABLE_P6[*p0]);
        if got != &want {
            return CheckOutcome::fail(
                name,
                format!("input dimension {p0}: got {got}, expected {want}"),
            );
        }
    }
    CheckOutcome::pass(name, format!("{} rows match", rows.len()))
}

fn table_checks() -> Vec<CheckOutcome> {
    let by_recursion: Vec<(usize, Histogram)> = core::iter::once((0, Histogram::unit(6)))
        .chain((1..=6).map(|p0| (p0, gamma_star_recursive(p0, 6).unwrap())))
        .collect();
    let by_explicit: Vec<(usize, Histogram)> = [
        (0, Histogram::unit(6)),
        (1, tau_closed_form(1, 6).unwrap()),
    ]
    .into_iter()
    .chain((2..=6).map(|p0| (p0, gamma_star_explicit(p0, 6).unwrap())))
    .collect();
    let by_expansion: Vec<(usize, Histogram)> = [
        (0, Histogram::unit(6)),
        (1, tau_closed_form(1, 6).unwrap()),
    ]
    .into_iter()
    .chain((2..=6).map(|p0| (p0, gamma_star_k_expansion(p0, 6).unwrap())))
    .collect();
    vec![
        compare_table("table-p6-recursion", &by_recursion),
        compare_table("table-p6-explicit", &by_explicit),
        compare_table("table-p6-k-expansion", &by_expansion),
    ]
}

fn compare_matrix(name: &str, family: GammaFamily, expect: &[[u64; 7]; 7]) -> CheckOutcome {
    let m = BoundMatrix::build(&family, 6);
    for (i, row) in expect.iter().enumerate() {
        for (j, e) in row.iter().enumerate() {
            let want = BigUint::from(*e);
            if m.cell(i, j) != &want {
                return CheckOutcome::fail(
                    name,
                    format!("entry ({i}, {j}): got {}, expected {want}", m.cell(i, j)),
                );
            }
        }
    }
    CheckOutcome::pass(name, String::from("all 49 entries match"))
}

fn matrix_checks() -> Vec<CheckOutcome> {
    let mut out = vec![
        compare_matrix("matrix-bar-p6", GammaFamily::Bar, &MATRIX_BAR_P6),
        compare_matrix("matrix-star-p6", GammaFamily::Star, &MATRIX_STAR_P6),
        compare_matrix(
            "matrix-star-conjecture-p6",
            GammaFamily::StarConjecture,
            &MATRIX_STAR_CONJECTURE_P6,
        ),
    ];
    let rates = [
        (GammaFamily::Bar, 42u32),
        (GammaFamily::Star, 38),
        (GammaFamily::StarConjecture, 35),
    ];
    let mut bad = Vec::new();
    for (family, want) in rates {
        let got = growth_rate(&family, 3, 6).unwrap();
        if got != BigUint::from(want) {
            bad.push(format!("{family}: got {got}, expected {want}"));
        }
    }
    out.push(CheckOutcome::of(
        "growth-rates-p6",
        bad.is_empty(),
        if bad.is_empty() { String::from("42 / 38 / 35 as frozen") } else { bad.join("; ") },
    ));
    out
}

fn tau1_checks(config: &VerifyConfig) -> Vec<CheckOutcome> {
    let p1_max = config.p1.unwrap_or(12);
    for p1 in 1..=p1_max {
        let oracle = match oracle_tau1(p1) {
            Ok(h) => h,
            Err(e) => {
                return vec![CheckOutcome::fail(
                    "tau1-oracle-closed-form",
                    format!("oracle failed at width {p1}: {e}"),
                )]
            }
        };
        let closed = tau_closed_form(1, p1).unwrap();
        if oracle != closed {
            return vec![CheckOutcome::fail(
                "tau1-oracle-closed-form",
                format!("width {p1}: oracle {oracle}, closed form {closed}"),
            )];
        }
    }
    vec![CheckOutcome::pass(
        "tau1-oracle-closed-form",
        format!("exhaustive join equals the closed form for widths 1..={p1_max}"),
    )]
}

fn conjecture_checks(config: &VerifyConfig) -> Vec<CheckOutcome> {
    let widths: Vec<usize> = match config.p1 {
        Some(p1) => vec![p1],
        None => vec![3, 4, 5],
    };
    let trials = config.trials.unwrap_or(DEFAULT_CONJECTURE_TRIALS);
    let mut out = Vec::new();
    for p1 in widths {
        let conj = match conjecture_tau2(p1) {
            Ok(h) => h,
            Err(e) => {
                out.push(CheckOutcome::fail(
                    &format!("tau2-conjecture-join-p{p1}"),
                    format!("{e}"),
                ));
                continue;
            }
        };
        let search = match search_tau2(p1, trials, config.seed) {
            Ok(s) => s,
            Err(e) => {
                out.push(CheckOutcome::fail(
                    &format!("tau2-conjecture-join-p{p1}"),
                    format!("search failed: {e}"),
                ));
                continue;
            }
        };
        let join_name = format!("tau2-conjecture-join-p{p1}");
        if let Some(cx) = &search.counterexample {
            let mut outcome = CheckOutcome::fail(
                &join_name,
                format!(
                    "sample {} with flips {:?} realizes {}, above the conjectured {conj}",
                    cx.sample_index, cx.flip, cx.histogram
                ),
            );
            outcome.counterexample = Some(cx.clone());
            out.push(outcome);
        } else {
            out.push(CheckOutcome::of(
                &join_name,
                search.join == conj,
                if search.join == conj {
                    format!("join over {trials} arrangements and all orientations is {conj}")
                } else {
                    format!("join {} stayed below the conjectured {conj}", search.join)
                },
            ));
        }
        out.push(CheckOutcome::of(
            &format!("tau2-cell-counts-p{p1}"),
            search.cell_counts_consistent,
            if search.cell_counts_consistent {
                format!("every arrangement produced {} cells", crate::bound::schlaefli_count(2, p1))
            } else {
                String::from("an arrangement missed the expected cell count")
            },
        ));
        let hot_name = format!("tau2-hot-center-p{p1}");
        match hot_center_arrangement(p1) {
            Ok(arr) => match enumerate_cells_2d(&arr) {
                Ok(cells) => {
                    let mut join = Histogram::zero();
                    for mask in 0u32..(1 << p1) {
                        let flip: Vec<bool> = (0..p1).map(|b| mask >> b & 1 == 1).collect();
                        join = join.join(&histogram_under_flip(&cells, &flip));
                    }
                    out.push(CheckOutcome::of(
                        &hot_name,
                        join == conj,
                        if join == conj {
                            format!("tangent arrangement attains {conj}")
                        } else {
                            format!("tangent arrangement only reaches {join}, conjecture is {conj}")
                        },
                    ));
                }
                Err(e) => out.push(CheckOutcome::fail(&hot_name, format!("{e}"))),
            },
            Err(e) => out.push(CheckOutcome::fail(&hot_name, format!("{e}"))),
        }
    }
    out
}

fn recursion_checks(config: &VerifyConfig) -> Vec<CheckOutcome> {
    let p1_max = config.p1.unwrap_or(20);
    let mut out = Vec::new();

    let mut bad = None;
    'outer: for p1 in 2..=p1_max {
        for n in 2..=p1 {
            let want = gamma_bar(n, p1).unwrap();
            let got = &gamma_bar(n.min(p1 - 1), p1 - 1).unwrap().shift()
                + &gamma_bar(n - 1, p1 - 1).unwrap();
            if got != want {
                bad = Some(format!("width {p1}, dimension {n}: got {got}, expected {want}"));
                break 'outer;
            }
        }
    }
    out.push(CheckOutcome::of(
        "binomial-recursion-identity",
        bad.is_none(),
        bad.unwrap_or_else(|| format!("shift recursion holds up to width {p1_max}")),
    ));

    let three_max = config.p1.unwrap_or(12).min(12);
    let mut bad = None;
    'outer: for p1 in 2..=three_max {
        for p0 in 2..=p1 {
            let a = gamma_star_recursive(p0, p1).unwrap();
            let b = gamma_star_explicit(p0, p1).unwrap();
            let c = gamma_star_k_expansion(p0, p1).unwrap();
            if a != b || a != c {
                bad = Some(format!(
                    "({p0}, {p1}): recursion {a}, explicit {b}, operator expansion {c}"
                ));
                break 'outer;
            }
        }
    }
    out.push(CheckOutcome::of(
        "star-three-paths",
        bad.is_none(),
        bad.unwrap_or_else(|| format!("all three constructions agree up to width {three_max}")),
    ));

    let shift_max = config.p1.unwrap_or(8).min(8);
    let mut bad = None;
    for p1 in 2..=shift_max {
        let next = conjecture_tau2(p1 + 1).unwrap();
        let step = &conjecture_tau2(p1).unwrap().shift() + &tau_closed_form(1, p1).unwrap();
        if !next.dominated_by(&step) {
            bad = Some(format!("width {p1}: {next} is not below {step}"));
            break;
        }
    }
    out.push(CheckOutcome::of(
        "conjecture-shift-consistency",
        bad.is_none(),
        bad.unwrap_or_else(|| {
            format!("conjectured values stay below the shift recursion up to width {shift_max}")
        }),
    ));
    out
}

fn chain_checks(config: &VerifyConfig) -> Vec<CheckOutcome> {
    let p1_max = config.p1.unwrap_or(20);
    let mut out = Vec::new();

    let mut bad = None;
    'outer: for p1 in 1..=p1_max {
        for p0 in 1..=p1 {
            let chain = [
                GammaFamily::Star,
                GammaFamily::Bar,
                GammaFamily::Tilde,
                GammaFamily::Hat,
            ];
            for pair in chain.windows(2) {
                let lo = pair[0].histogram(p0, p1);
                let hi = pair[1].histogram(p0, p1);
                if !lo.dominated_by(&hi) {
                    bad = Some(format!(
                        "({p0}, {p1}): {} gives {lo}, not below {} at {hi}",
                        pair[0], pair[1]
                    ));
                    break 'outer;
                }
            }
        }
    }
    out.push(CheckOutcome::of(
        "tightness-chain",
        bad.is_none(),
        bad.unwrap_or_else(|| format!("families are ordered as expected up to width {p1_max}")),
    ));

    let refine_max = config.p1.unwrap_or(12).min(12);
    let mut bad = None;
    'outer: for p1 in 2..=refine_max {
        for p0 in 1..=p1 {
            let conj = GammaFamily::StarConjecture.histogram(p0, p1);
            let star = GammaFamily::Star.histogram(p0, p1);
            if !conj.dominated_by(&star) {
                bad = Some(format!("({p0}, {p1}): {conj} is not below {star}"));
                break 'outer;
            }
        }
    }
    out.push(CheckOutcome::of(
        "conjecture-refines-star",
        bad.is_none(),
        bad.unwrap_or_else(|| format!("conjectured family stays below the proven one up to width {refine_max}")),
    ));

    let cond_max = config.p1.unwrap_or(12).min(16);
    let mut bad = Vec::new();
    for family in GammaFamily::ALL {
        let report = validate_bound_condition(&family, cond_max);
        if !report.is_valid() {
            bad.push(format!("{family}: {} violations", report.violations.len()));
        }
    }
    out.push(CheckOutcome::of(
        "bound-condition-families",
        bad.is_empty(),
        if bad.is_empty() {
            format!("all five families satisfy the bound condition up to width {cond_max}")
        } else {
            bad.join("; ")
        },
    ));
    out
}

fn sample_architecture(rng: &mut impl rand_core::RngCore) -> Architecture {
    let depth = 1 + (rng.next_u64() % 4) as usize;
    let input_dim = 1 + (rng.next_u64() % 6) as usize;
    let widths = (0..depth).map(|_| 1 + (rng.next_u64() % 7) as usize).collect();
    Architecture::new(input_dim, widths).unwrap()
}

fn path_checks(config: &VerifyConfig) -> Vec<CheckOutcome> {
    let trials = config.trials.unwrap_or(50);
    let mut rng = rng_for(config.seed, 11);
    let mut out = Vec::new();

    let mut bad = None;
    for t in 0..trials {
        let arch = sample_architecture(&mut rng);
        let family = GammaFamily::ALL[t % GammaFamily::ALL.len()];
        let by_histogram = compose_histogram_path(&family, &arch);
        let by_matrix: Vec<Histogram> = compose_matrix_path(&family, &arch)
            .into_iter()
            .map(Histogram::from_entries)
            .collect();
        if by_histogram != by_matrix {
            bad = Some(format!("{family} on {arch}: the two phrasings disagree"));
            break;
        }
    }
    out.push(CheckOutcome::of(
        "path-agreement",
        bad.is_none(),
        bad.unwrap_or_else(|| format!("both phrasings agree on {trials} sampled architectures")),
    ));

    let mut rng = rng_for(config.seed, 12);
    let mut bad = None;
    for t in 0..trials {
        let arch = sample_architecture(&mut rng);
        let family = GammaFamily::ALL[t % GammaFamily::ALL.len()];
        let blocks: Vec<SubnetGammaFamily> = arch
            .widths
            .iter()
            .map(|&w| SubnetGammaFamily::from_layer_family(&family, w))
            .collect();
        let partition = SubnetworkPartition::singletons(arch.depth());
        let block_bound = subnet_compose_bound(&blocks, &partition, &arch, false).unwrap();
        let plain = compose_bound(&family, &arch);
        if block_bound.bound != plain.bound || block_bound.per_layer != plain.per_layer {
            bad = Some(format!("{family} on {arch}: block form disagrees with the layer form"));
            break;
        }
    }
    out.push(CheckOutcome::of(
        "subnet-singleton-agreement",
        bad.is_none(),
        bad.unwrap_or_else(|| {
            format!("single-layer blocks reproduce the layer bound on {trials} architectures")
        }),
    ));
    out
}

fn reference_net() -> RationalNet {
    let int = |n: i64| num_rational::BigRational::from_integer(n.into());
    RationalNet::new(vec![NetLayer {
        weights: vec![vec![int(-1)], vec![int(1)], vec![int(1)]],
        biases: vec![int(1), int(0), int(-2)],
    }])
    .unwrap()
}

fn soundness_checks(config: &VerifyConfig) -> Vec<CheckOutcome> {
    let mut out = Vec::new();

    let regions = count_regions_1d_net(&reference_net()).unwrap();
    let expect = Histogram::from_u64_entries(&[0, 2, 2]);
    let ok = regions.count == 4 && regions.per_layer == vec![expect.clone()];
    out.push(CheckOutcome::of(
        "net-reference-example",
        ok,
        if ok {
            String::from("three saturating neurons split the line into 4 regions, histogram 2e1 + 2e2")
        } else {
            format!(
                "got {} regions with per-layer histograms {:?}, expected 4 and [{expect}]",
                regions.count, regions.per_layer
            )
        },
    ));

    let trials = config.trials.unwrap_or(100);
    let mut rng = rng_for(config.seed, 21);
    let mut bad = None;
    for t in 0..trials {
        let depth = 1 + (rng.next_u64() % 3) as usize;
        let widths: Vec<usize> = (0..depth).map(|_| 1 + (rng.next_u64() % 5) as usize).collect();
        let net = sample_rational_net(&mut rng, 1, &widths);
        let regions = match count_regions_1d_net(&net) {
            Ok(r) => r,
            Err(e) => {
                bad = Some(format!("net {t} ({}): {e}", net.architecture()));
                break;
            }
        };
        let bound = compose_bound(&GammaFamily::Star, &net.architecture()).bound;
        if BigUint::from(regions.count) > bound {
            bad = Some(format!(
                "net {t} ({}) has {} regions, above the bound {bound}",
                net.architecture(),
                regions.count
            ));
            break;
        }
    }
    out.push(CheckOutcome::of(
        "net-soundness",
        bad.is_none(),
        bad.unwrap_or_else(|| format!("{trials} sampled networks stay within the composed bound")),
    ));
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn every_suite_passes_with_defaults() {
        let config = VerifyConfig { p1: None, trials: Some(20), seed: 7 };
        for suite in Suite::ALL {
            let config = if suite == Suite::Conjecture {
                VerifyConfig { p1: Some(3), trials: Some(15), seed: 7 }
            } else {
                config
            };
            for outcome in run_suite(suite, &config) {
                assert!(
                    outcome.passed,
                    "{} / {}: {}",
                    suite.name(),
                    outcome.name,
                    outcome.detail
                );
            }
        }
    }

    #[test]
    fn suite_names_round_trip() {
        for suite in Suite::ALL {
            assert_eq!(Suite::parse(suite.name()), Some(suite));
        }
        assert_eq!(Suite::parse("nope"), None);
    }
}
