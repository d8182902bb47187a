//! Seeded random sampling of arrangements and networks, and the
//! evidence-gathering search for the two-dimensional join.
//!
//! Determinism contract: every sampler derives its generator from the
//! caller's seed and a fixed stream number, so reruns with the same
//! seed reproduce the same configurations bit for bit.

use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use num_bigint::BigInt;
use num_rational::BigRational;
use rand_chacha::ChaCha8Rng;
use rand_core::{RngCore, SeedableRng};

use crate::error::Error;
use crate::gamma::{conjecture_tau2, schlaefli_sum};
use crate::histogram::Histogram;
use crate::oracle::net::{count_regions_1d_net, NetLayer, RationalNet};
use crate::oracle::plane::{
    activation_histogram_2d, enumerate_cells_2d, hot_center_arrangement, LineEq,
    OrientedArrangement2D,
};

/// A generator bound to one (seed, stream) pair.
pub fn rng_for(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

fn pick(rng: &mut impl RngCore, lo: i64, hi: i64) -> i64 {
    lo + (rng.next_u64() % (hi - lo + 1) as u64) as i64
}

fn small_ratio(rng: &mut impl RngCore, num_span: i64, den_max: i64) -> BigRational {
    BigRational::new(
        BigInt::from(pick(rng, -num_span, num_span)),
        BigInt::from(pick(rng, 1, den_max)),
    )
}

const SAMPLE_RETRY_BUDGET: usize = 10_000;

/// A random general-position arrangement of `p1` oriented rational
/// lines, by rejection.
pub fn sample_arrangement(
    p1: usize,
    rng: &mut impl RngCore,
) -> Result<OrientedArrangement2D, Error> {
    for _ in 0..SAMPLE_RETRY_BUDGET {
        let mut lines = Vec::with_capacity(p1);
        for _ in 0..p1 {
            let (a, b) = loop {
                let a = small_ratio(rng, 60, 8);
                let b = small_ratio(rng, 60, 8);
                if !(num_traits::Zero::is_zero(&a) && num_traits::Zero::is_zero(&b)) {
                    break (a, b);
                }
            };
            lines.push(LineEq::new(a, b, small_ratio(rng, 60, 8)));
        }
        let arr = OrientedArrangement2D::new(lines)?;
        if arr.is_general_position() {
            return Ok(arr);
        }
    }
    Err(Error::ConstructionFailed("no general-position arrangement within the retry budget"))
}

/// A configuration whose histogram escapes the conjectured join.
#[derive(Clone, Debug)]
pub struct Tau2Counterexample {
    /// 0 is the tangent construction when the width admits one;
    /// random samples follow.
    pub sample_index: usize,
    pub arrangement: OrientedArrangement2D,
    pub flip: Vec<bool>,
    pub histogram: Histogram,
}

/// Outcome of a seeded search over arrangements and orientations.
#[derive(Clone, Debug)]
pub struct Tau2Search {
    pub p1: usize,
    pub trials: usize,
    pub seed: u64,
    /// Join of every histogram encountered.
    pub join: Histogram,
    /// Whether every sampled arrangement had the full generic cell count.
    pub cell_counts_consistent: bool,
    pub counterexample: Option<Tau2Counterexample>,
}

const SEARCH_MAX_WIDTH: usize = 12;

/// Joins the activation histograms of `trials` random general-position
/// arrangements under every one of the `2^p1` orientation choices, with
/// the tangent construction included up front when available. Records
/// the first histogram, if any, that is not below the conjectured
/// value.
pub fn search_tau2(p1: usize, trials: usize, seed: u64) -> Result<Tau2Search, Error> {
    if p1 > SEARCH_MAX_WIDTH {
        return Err(Error::EnumerationCap { size: p1, cap: SEARCH_MAX_WIDTH });
    }
    let conj = conjecture_tau2(p1)?;
    let conj_suffix: Vec<u64> = (0..=p1 + 1)
        .map(|j| u64::try_from(&conj.suffix_sum(j)).unwrap())
        .collect();
    let expected_cells = usize::try_from(&schlaefli_sum(2, p1)).unwrap();

    let mut rng = rng_for(seed, 1);
    let mut join_suffix = vec![0u64; p1 + 2];
    let mut cell_counts_consistent = true;
    let mut counterexample = None;

    let hot = hot_center_arrangement(p1).ok();
    let deterministic = usize::from(hot.is_some());
    for index in 0..deterministic + trials {
        let arr = if index < deterministic {
            hot.clone().unwrap()
        } else {
            sample_arrangement(p1, &mut rng)?
        };
        let cells = enumerate_cells_2d(&arr)?;
        if cells.len() != expected_cells {
            cell_counts_consistent = false;
        }
        let masks: Vec<u32> = cells
            .iter()
            .map(|cell| {
                cell.pattern
                    .iter()
                    .enumerate()
                    .fold(0u32, |m, (i, &p)| if p { m | 1 << i } else { m })
            })
            .collect();
        let mut counts = vec![0u64; p1 + 1];
        for flip in 0u32..(1u32 << p1) {
            counts.iter_mut().for_each(|c| *c = 0);
            for &m in &masks {
                counts[(m ^ flip).count_ones() as usize] += 1;
            }
            let mut run = 0u64;
            let mut escaped = false;
            for j in (0..=p1).rev() {
                run += counts[j];
                if run > join_suffix[j] {
                    join_suffix[j] = run;
                }
                if run > conj_suffix[j] {
                    escaped = true;
                }
            }
            if escaped && counterexample.is_none() {
                let flip_vec: Vec<bool> = (0..p1).map(|b| flip >> b & 1 == 1).collect();
                counterexample = Some(Tau2Counterexample {
                    sample_index: index,
                    arrangement: arr.clone(),
                    flip: flip_vec.clone(),
                    histogram: Histogram::from_u64_entries(&counts),
                });
            }
        }
    }

    let entries: Vec<u64> = (0..=p1).map(|j| join_suffix[j] - join_suffix[j + 1]).collect();
    Ok(Tau2Search {
        p1,
        trials,
        seed,
        join: Histogram::from_u64_entries(&entries),
        cell_counts_consistent,
        counterexample,
    })
}

/// A random rational network with the given shape.
pub fn sample_rational_net(
    rng: &mut impl RngCore,
    input_dim: usize,
    widths: &[usize],
) -> RationalNet {
    let mut layers = Vec::with_capacity(widths.len());
    let mut fan_in = input_dim;
    for &w in widths {
        let weights = (0..w)
            .map(|_| (0..fan_in).map(|_| small_ratio(rng, 9, 4)).collect())
            .collect();
        let biases = (0..w).map(|_| small_ratio(rng, 9, 4)).collect();
        layers.push(NetLayer { weights, biases });
        fan_in = w;
    }
    RationalNet::new(layers).unwrap()
}

fn int(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

/// The single-layer net whose breakpoints walk up for the first half
/// of the neurons and down for the rest: its pattern histogram attains
/// the one-dimensional join.
pub fn balanced_single_layer_net(p1: usize) -> RationalNet {
    let up = p1.div_ceil(2);
    let rows: Vec<(BigRational, BigRational)> = (1..=p1)
        .map(|i| {
            let i = i64::try_from(i).unwrap();
            if i <= up as i64 {
                (int(1), int(-i))
            } else {
                (int(-1), int(i))
            }
        })
        .collect();
    RationalNet::new(vec![NetLayer {
        weights: rows.iter().map(|(w, _)| vec![w.clone()]).collect(),
        biases: rows.iter().map(|(_, b)| b.clone()).collect(),
    }])
    .unwrap()
}

/// Sampled lower-bound estimate of a block's maximal histogram: the
/// join over random networks of the histogram of minimum active counts
/// across the block's layers. Input dimension 1 runs any topology
/// through the exact line counter; input dimension 2 is limited to a
/// single layer, where cells are enumerated geometrically. The result
/// is a lower bound by construction and must never be used as a
/// certified upper bound.
pub fn empirical_subnet_histogram(
    topology: &[usize],
    p0: usize,
    trials: usize,
    seed: u64,
) -> Result<Histogram, Error> {
    if topology.is_empty() || topology.contains(&0) {
        return Err(Error::SubnetSampling(format!(
            "topology needs at least one positive width, got {topology:?}"
        )));
    }
    match p0 {
        1 => {
            let mut join = Histogram::zero();
            if topology.len() == 1 {
                let regions = count_regions_1d_net(&balanced_single_layer_net(topology[0]))?;
                join = join.join(&regions.min_histogram);
            }
            let mut rng = rng_for(seed, 40);
            for _ in 0..trials {
                let net = sample_rational_net(&mut rng, 1, topology);
                let regions = count_regions_1d_net(&net)?;
                join = join.join(&regions.min_histogram);
            }
            Ok(join)
        }
        2 => {
            if topology.len() != 1 {
                return Err(Error::SubnetSampling(format!(
                    "two-dimensional sampling covers single layers only, got depth {}",
                    topology.len()
                )));
            }
            let p1 = topology[0];
            let mut join = Histogram::zero();
            if let Ok(arr) = hot_center_arrangement(p1) {
                join = join.join(&activation_histogram_2d(&arr)?);
            }
            let mut rng = rng_for(seed, 41);
            for _ in 0..trials {
                let arr = sample_arrangement(p1, &mut rng)?;
                join = join.join(&activation_histogram_2d(&arr)?);
            }
            Ok(join)
        }
        _ => Err(Error::SubnetSampling(format!(
            "input dimension {p0} is not supported by the samplers"
        ))),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gamma::tau_closed_form;
    use crate::hist;

    #[test]
    fn sampling_is_seed_deterministic() {
        let mut a = rng_for(123, 1);
        let mut b = rng_for(123, 1);
        assert_eq!(
            sample_arrangement(4, &mut a).unwrap(),
            sample_arrangement(4, &mut b).unwrap()
        );
        let mut c = rng_for(123, 2);
        assert_ne!(
            sample_arrangement(4, &mut a).unwrap(),
            sample_arrangement(4, &mut c).unwrap()
        );
        let mut a = rng_for(9, 3);
        let mut b = rng_for(9, 3);
        assert_eq!(
            sample_rational_net(&mut a, 1, &[3, 2]),
            sample_rational_net(&mut b, 1, &[3, 2])
        );
    }

    #[test]
    fn search_finds_the_conjectured_join_for_three_lines() {
        let search = search_tau2(3, 30, 5).unwrap();
        assert_eq!(search.join, conjecture_tau2(3).unwrap());
        assert!(search.cell_counts_consistent);
        assert!(search.counterexample.is_none());
    }

    #[test]
    fn search_handles_the_smallest_width() {
        let search = search_tau2(2, 20, 11).unwrap();
        assert_eq!(search.join, hist![1, 2, 1]);
        assert!(search.counterexample.is_none());
    }

    #[test]
    fn search_caps_the_width() {
        assert!(matches!(
            search_tau2(13, 1, 0),
            Err(Error::EnumerationCap { size: 13, cap: 12 })
        ));
    }

    #[test]
    fn balanced_net_attains_the_line_join() {
        for p1 in 1..=7 {
            let regions = count_regions_1d_net(&balanced_single_layer_net(p1)).unwrap();
            assert_eq!(
                regions.min_histogram,
                tau_closed_form(1, p1).unwrap(),
                "p1 = {p1}"
            );
            assert_eq!(regions.count, p1 as u64 + 1);
        }
    }

    #[test]
    fn empirical_line_join_matches_the_closed_form() {
        let h = empirical_subnet_histogram(&[3], 1, 25, 2).unwrap();
        assert_eq!(h, tau_closed_form(1, 3).unwrap());
    }

    #[test]
    fn empirical_plane_join_reaches_the_conjecture() {
        let h = empirical_subnet_histogram(&[4], 2, 10, 2).unwrap();
        assert_eq!(h, conjecture_tau2(4).unwrap());
    }

    #[test]
    fn empirical_sampling_rejects_unsupported_inputs() {
        assert!(matches!(
            empirical_subnet_histogram(&[2, 2], 2, 1, 0),
            Err(Error::SubnetSampling(_))
        ));
        assert!(matches!(
            empirical_subnet_histogram(&[2], 3, 1, 0),
            Err(Error::SubnetSampling(_))
        ));
        assert!(matches!(
            empirical_subnet_histogram(&[], 1, 1, 0),
            Err(Error::SubnetSampling(_))
        ));
    }
}
