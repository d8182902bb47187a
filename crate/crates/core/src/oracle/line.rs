//! Activation histograms of hyperplane arrangements on a line.
//!
//! On a one-dimensional input, `p1` neurons in general position have
//! `p1` distinct breakpoints, and the only freedom left is the sign
//! each neuron takes to the right of its breakpoint. Walking the
//! `p1 + 1` cells from left to right, the number of active neurons
//! starts at the count of right-negative neurons and changes by one
//! sign step per breakpoint, so the histogram of a sign choice is
//! computable without any geometry at all.

use alloc::vec::Vec;

use crate::error::Error;
use crate::histogram::Histogram;

/// Largest sign-pattern length enumerated exhaustively.
const MAX_EXHAUSTIVE: usize = 24;

/// Histogram of cells by active-neuron count for one choice of signs,
/// `sigma[i]` being the sign neuron `i` takes right of its breakpoint.
/// Entries must be `1` or `-1`.
pub fn histogram_of_sigma(sigma: &[i8]) -> Result<Histogram, Error> {
    let mut active = 0usize;
    for (index, &s) in sigma.iter().enumerate() {
        match s {
            -1 => active += 1,
            1 => {}
            _ => return Err(Error::SignValue { index }),
        }
    }
    let mut counts = alloc::vec![0u64; sigma.len() + 1];
    counts[active] += 1;
    for &s in sigma {
        if s == 1 {
            active += 1;
        } else {
            active -= 1;
        }
        counts[active] += 1;
    }
    Ok(Histogram::from_u64_entries(&counts))
}

/// Join of the histograms over every sign choice: the maximal
/// activation histogram of `p1` neurons on a line.
pub fn oracle_tau1(p1: usize) -> Result<Histogram, Error> {
    if p1 > MAX_EXHAUSTIVE {
        return Err(Error::EnumerationCap { size: p1, cap: MAX_EXHAUSTIVE });
    }
    // Track suffix sums directly; the join is their pointwise max.
    let mut best_suffix = alloc::vec![0u64; p1 + 2];
    let mut counts = alloc::vec![0u64; p1 + 1];
    for mask in 0u32..(1u32 << p1) {
        counts.iter_mut().for_each(|c| *c = 0);
        // Bit set = sign +1; start with every right-negative neuron active.
        let mut active = p1 - mask.count_ones() as usize;
        counts[active] += 1;
        for bit in 0..p1 {
            if mask >> bit & 1 == 1 {
                active += 1;
            } else {
                active -= 1;
            }
            counts[active] += 1;
        }
        let mut run = 0u64;
        for j in (0..=p1).rev() {
            run += counts[j];
            if run > best_suffix[j] {
                best_suffix[j] = run;
            }
        }
    }
    let entries: Vec<u64> = (0..=p1).map(|j| best_suffix[j] - best_suffix[j + 1]).collect();
    Ok(Histogram::from_u64_entries(&entries))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gamma::tau_closed_form;
    use crate::hist;

    #[test]
    fn sign_walk_examples() {
        assert_eq!(histogram_of_sigma(&[1, 1, -1]).unwrap(), hist![0, 1, 2, 1]);
        assert_eq!(histogram_of_sigma(&[-1, -1, -1]).unwrap(), hist![1, 1, 1, 1]);
        assert_eq!(histogram_of_sigma(&[1, 1, 1]).unwrap(), hist![1, 1, 1, 1]);
        assert_eq!(histogram_of_sigma(&[]).unwrap(), hist![1]);
        assert_eq!(
            histogram_of_sigma(&[1, 0]),
            Err(Error::SignValue { index: 1 })
        );
    }

    #[test]
    fn reversal_mirrors_the_walk() {
        // Reversing the axis flips every sign and reverses the
        // breakpoint order while visiting the same cells, so the
        // histogram survives. Flipping signs alone complements each
        // cell's active count instead, reversing the entries within
        // the fixed 0..=p1 frame.
        for mask in 0u32..(1 << 6) {
            let sigma: Vec<i8> = (0..6).map(|b| if mask >> b & 1 == 1 { 1 } else { -1 }).collect();
            let histogram = histogram_of_sigma(&sigma).unwrap();

            let mirrored: Vec<i8> = sigma.iter().rev().map(|s| -s).collect();
            assert_eq!(histogram, histogram_of_sigma(&mirrored).unwrap());

            let negated: Vec<i8> = sigma.iter().map(|s| -s).collect();
            let complemented =
                Histogram::from_entries((0..=6).rev().map(|j| histogram.entry(j)).collect());
            assert_eq!(complemented, histogram_of_sigma(&negated).unwrap());
        }
    }

    #[test]
    fn join_matches_the_closed_form() {
        for p1 in 1..=10 {
            assert_eq!(
                oracle_tau1(p1).unwrap(),
                tau_closed_form(1, p1).unwrap(),
                "p1 = {p1}"
            );
        }
    }

    #[test]
    fn balanced_signs_attain_the_join() {
        for p1 in 1..=10usize {
            let sigma: Vec<i8> = (0..p1).map(|i| if i < p1.div_ceil(2) { 1 } else { -1 }).collect();
            assert_eq!(
                histogram_of_sigma(&sigma).unwrap(),
                oracle_tau1(p1).unwrap(),
                "p1 = {p1}"
            );
        }
    }

    #[test]
    fn cap_is_enforced() {
        assert_eq!(
            oracle_tau1(25),
            Err(Error::EnumerationCap { size: 25, cap: 24 })
        );
    }
}
