//! End-to-end checks against frozen reference values, exhaustive
//! oracles, and seeded random sweeps. Each check carries a wall-clock
//! budget and prints a single PASS line with its runtime once every
//! assertion holds.

use std::time::{Duration, Instant};

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::One;
use rand_core::RngCore;

use regionbound_core::gamma::{
    conjecture_tau2, gamma_bar, gamma_hat, gamma_star_explicit, gamma_star_k_expansion,
    gamma_star_recursive, gamma_tilde, tau_closed_form,
};
use regionbound_core::oracle::{
    activation_histogram_2d, count_regions_1d_net, enumerate_cells_2d, hot_center_arrangement,
    oracle_tau1, rng_for, sample_rational_net, search_tau2, NetLayer, RationalNet,
};
use regionbound_core::{
    compose_bound, compose_histogram_path, compose_matrix_path, growth_rate, subnet_compose_bound,
    Architecture, BoundMatrix, GammaCollection, GammaFamily, Histogram, SubnetGammaFamily,
    SubnetworkPartition,
};

fn finish(name: &str, started: Instant, budget: Duration) {
    let elapsed = started.elapsed();
    assert!(
        elapsed <= budget,
        "{name} ran for {elapsed:?}, over its {budget:?} budget"
    );
    println!("PASS {name} ({} ms)", elapsed.as_millis());
}

fn pick(rng: &mut impl RngCore, lo: usize, hi: usize) -> usize {
    lo + (rng.next_u64() as usize) % (hi - lo + 1)
}

fn random_architecture(rng: &mut impl RngCore) -> Architecture {
    let input_dim = pick(rng, 1, 6);
    let depth = pick(rng, 1, 4);
    let widths = (0..depth).map(|_| pick(rng, 1, 7)).collect();
    Architecture::new(input_dim, widths).unwrap()
}

/// Every value of the recursive family at width six, one row per input
/// dimension starting at zero.
const STAR_TABLE_SIX: [[u64; 7]; 7] = [
    [0, 0, 0, 0, 0, 0, 1],
    [0, 0, 0, 2, 2, 2, 1],
    [0, 0, 1, 5, 9, 6, 1],
    [0, 0, 4, 16, 15, 6, 1],
    [0, 1, 14, 20, 15, 6, 1],
    [0, 6, 15, 20, 15, 6, 1],
    [1, 6, 15, 20, 15, 6, 1],
];

#[test]
fn star_histograms_at_width_six_agree_on_all_three_construction_paths() {
    let started = Instant::now();
    for (p0, row) in STAR_TABLE_SIX.iter().enumerate() {
        let expected = Histogram::from_u64_entries(row);
        assert_eq!(
            GammaFamily::Star.histogram(p0, 6),
            expected,
            "family value at input dimension {p0}"
        );
        if p0 >= 1 {
            assert_eq!(
                gamma_star_recursive(p0, 6).unwrap(),
                expected,
                "recursion at input dimension {p0}"
            );
        }
        if p0 >= 2 {
            assert_eq!(
                gamma_star_explicit(p0, 6).unwrap(),
                expected,
                "closed form at input dimension {p0}"
            );
            assert_eq!(
                gamma_star_k_expansion(p0, 6).unwrap(),
                expected,
                "operator expansion at input dimension {p0}"
            );
        }
    }
    assert_eq!(tau_closed_form(1, 6).unwrap(), Histogram::from_u64_entries(&STAR_TABLE_SIX[1]));

    // The three-dimensional row clips to 4e2 + 38e3, and 38 = 16 + 15 + 6 + 1
    // is its growth contribution.
    let star36 = gamma_star_recursive(3, 6).unwrap();
    assert_eq!(star36, Histogram::from_u64_entries(&[0, 0, 4, 16, 15, 6, 1]));
    assert_eq!(star36.suffix_sum(3), BigUint::from(38u32));
    assert_eq!(star36.clip(3).entry(3), BigUint::from(38u32));

    finish("star-table-three-paths", started, Duration::from_secs(1));
}

const MATRIX_BAR_SIX: [[u64; 7]; 7] = [
    [1, 0, 0, 0, 0, 0, 1],
    [0, 7, 0, 0, 0, 6, 6],
    [0, 0, 22, 0, 15, 15, 15],
    [0, 0, 0, 42, 20, 20, 20],
    [0, 0, 0, 0, 22, 15, 15],
    [0, 0, 0, 0, 0, 7, 6],
    [0, 0, 0, 0, 0, 0, 1],
];

const MATRIX_STAR_SIX: [[u64; 7]; 7] = [
    [1, 0, 0, 0, 0, 0, 1],
    [0, 7, 0, 0, 1, 6, 6],
    [0, 0, 22, 4, 14, 15, 15],
    [0, 0, 0, 38, 20, 20, 20],
    [0, 0, 0, 0, 22, 15, 15],
    [0, 0, 0, 0, 0, 7, 6],
    [0, 0, 0, 0, 0, 0, 1],
];

const MATRIX_STAR_CONJECTURE_SIX: [[u64; 7]; 7] = [
    [1, 0, 0, 0, 0, 0, 1],
    [0, 7, 0, 0, 2, 6, 6],
    [0, 0, 22, 7, 13, 15, 15],
    [0, 0, 0, 35, 20, 20, 20],
    [0, 0, 0, 0, 22, 15, 15],
    [0, 0, 0, 0, 0, 7, 6],
    [0, 0, 0, 0, 0, 0, 1],
];

#[test]
fn width_six_layer_matrices_match_frozen_cells_and_growth_rates() {
    let started = Instant::now();
    let cases = [
        (GammaFamily::Bar, &MATRIX_BAR_SIX, 42u32),
        (GammaFamily::Star, &MATRIX_STAR_SIX, 38),
        (GammaFamily::StarConjecture, &MATRIX_STAR_CONJECTURE_SIX, 35),
    ];
    for (family, rows, rate) in cases {
        let matrix = BoundMatrix::build(&family, 6);
        assert_eq!(matrix.dim(), 7);
        assert!(matrix.is_upper_triangular(), "{family} matrix");
        for (r, row) in rows.iter().enumerate() {
            for (c, cell) in row.iter().enumerate() {
                assert_eq!(
                    matrix.cell(r, c),
                    &BigUint::from(*cell),
                    "{family} cell ({r}, {c})"
                );
            }
        }
        assert_eq!(
            growth_rate(&family, 3, 6).unwrap(),
            BigUint::from(rate),
            "{family} growth rate"
        );
    }
    finish("width-six-matrices-and-growth", started, Duration::from_secs(1));
}

#[test]
fn exhaustive_line_oracle_matches_the_closed_form_through_sixteen_neurons() {
    let started = Instant::now();
    for p1 in 1..=16 {
        assert_eq!(
            oracle_tau1(p1).unwrap(),
            tau_closed_form(1, p1).unwrap(),
            "width {p1}"
        );
    }
    finish("line-oracle-closed-form", started, Duration::from_secs(60));
}

#[test]
fn plane_search_confirms_the_conjectured_join_on_widths_three_to_six() {
    let started = Instant::now();
    for p1 in 3..=6 {
        let expected = conjecture_tau2(p1).unwrap();

        let hot = hot_center_arrangement(p1).unwrap();
        let cells = enumerate_cells_2d(&hot).unwrap();
        assert_eq!(
            cells.len(),
            1 + p1 + p1 * (p1 - 1) / 2,
            "width {p1} generic cell count"
        );
        assert_eq!(
            activation_histogram_2d(&hot).unwrap(),
            expected,
            "width {p1} tangent construction"
        );

        let search = search_tau2(p1, 1000, 0xFEED + p1 as u64).unwrap();
        assert!(
            search.cell_counts_consistent,
            "width {p1}: a sampled arrangement missed the generic cell count"
        );
        assert!(
            search.counterexample.is_none(),
            "width {p1}: a histogram escaped the conjectured join"
        );
        assert_eq!(search.join, expected, "width {p1} join over the sweep");
    }
    finish("plane-join-search", started, Duration::from_secs(600));
}

#[test]
fn tightness_chain_and_binomial_recursion_hold_through_width_twenty() {
    let started = Instant::now();
    for p1 in 1..=20 {
        for p0 in 1..=p1 {
            let star = gamma_star_recursive(p0, p1).unwrap();
            let bar = gamma_bar(p0, p1).unwrap();
            let tilde = gamma_tilde(p0, p1).unwrap();
            let hat = gamma_hat(p0, p1).unwrap();
            assert!(star.dominated_by(&bar), "star above bar at ({p0}, {p1})");
            assert!(bar.dominated_by(&tilde), "bar above tilde at ({p0}, {p1})");
            assert!(tilde.dominated_by(&hat), "tilde above hat at ({p0}, {p1})");

            let same = gamma_bar(p0.min(p1 - 1), p1 - 1).unwrap();
            let lower = gamma_bar(p0 - 1, p1 - 1).unwrap();
            assert_eq!(
                bar,
                &same.shift() + &lower,
                "binomial recursion at ({p0}, {p1})"
            );
        }
    }
    finish("tightness-chain-and-recursion", started, Duration::from_secs(5));
}

#[test]
fn exact_counts_of_random_univariate_nets_stay_under_the_composed_bound() {
    let started = Instant::now();

    // Three saturating neurons: breakpoints at 0, 1 and 2 cut the line
    // into four regions, two with one active neuron and two with two.
    let int = |n: i64| BigRational::from_integer(BigInt::from(n));
    let saturating = RationalNet::new(vec![NetLayer {
        weights: vec![vec![int(-1)], vec![int(1)], vec![int(1)]],
        biases: vec![int(1), int(0), int(-2)],
    }])
    .unwrap();
    let regions = count_regions_1d_net(&saturating).unwrap();
    assert_eq!(regions.count, 4);
    assert_eq!(regions.min_histogram, Histogram::from_u64_entries(&[0, 2, 2]));

    let mut rng = rng_for(2026, 17);
    for round in 0..120 {
        let depth = pick(&mut rng, 1, 3);
        let widths: Vec<usize> = (0..depth).map(|_| pick(&mut rng, 1, 5)).collect();
        let net = sample_rational_net(&mut rng, 1, &widths);
        let exact = count_regions_1d_net(&net).unwrap();
        let bound = compose_bound(&GammaFamily::Star, &net.architecture()).bound;
        assert!(
            BigUint::from(exact.count) <= bound,
            "net {round} with widths {widths:?} attained {} regions, bound {bound}",
            exact.count
        );
    }
    finish("univariate-net-soundness", started, Duration::from_secs(120));
}

#[test]
fn histogram_and_matrix_compositions_agree_and_singleton_blocks_match_layers() {
    let started = Instant::now();
    let mut rng = rng_for(7, 77);
    for round in 0..50 {
        let arch = random_architecture(&mut rng);
        for family in GammaFamily::ALL {
            let hist = compose_histogram_path(&family, &arch);
            let vecs = compose_matrix_path(&family, &arch);
            assert_eq!(hist.len(), vecs.len());
            for (h, v) in hist.iter().zip(&vecs) {
                assert_eq!(
                    h,
                    &Histogram::from_entries(v.clone()),
                    "round {round}, {family} on {arch}"
                );
            }

            let blocks: Vec<SubnetGammaFamily> = arch
                .widths
                .iter()
                .map(|&w| SubnetGammaFamily::from_layer_family(&family, w))
                .collect();
            let partition = SubnetworkPartition::singletons(arch.depth());
            let blockwise = subnet_compose_bound(&blocks, &partition, &arch, false).unwrap();
            assert_eq!(
                blockwise,
                compose_bound(&family, &arch),
                "singleton blocks for {family} on {arch}"
            );
        }
    }
    finish("composition-path-agreement", started, Duration::from_secs(10));
}

/// Product of per-layer cell counts, each capped by the smallest
/// dimension seen so far.
fn capped_cell_product(arch: &Architecture) -> BigUint {
    let mut cap = arch.input_dim;
    let mut product = BigUint::one();
    for &w in &arch.widths {
        let factor: BigUint = (0..=cap.min(w))
            .map(|j| num_integer::binomial(BigUint::from(w), BigUint::from(j)))
            .sum();
        product *= factor;
        cap = cap.min(w);
    }
    product
}

#[test]
fn composing_the_cell_count_family_recovers_the_layer_product_formula() {
    let started = Instant::now();

    let arch: Architecture = "3x6x6".parse().unwrap();
    let outcome = compose_bound(&GammaFamily::Tilde, &arch);
    assert_eq!(outcome.bound, BigUint::from(1764u32));
    assert_eq!(outcome.bound, capped_cell_product(&arch));

    let mut rng = rng_for(41, 8);
    for round in 0..20 {
        let arch = random_architecture(&mut rng);
        assert_eq!(
            compose_bound(&GammaFamily::Tilde, &arch).bound,
            capped_cell_product(&arch),
            "round {round} on {arch}"
        );
    }
    finish("cell-count-product-recovery", started, Duration::from_secs(5));
}
