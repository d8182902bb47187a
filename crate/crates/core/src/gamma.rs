//! Per-layer histogram families for the region-counting composition.
//!
//! A family assigns to every input dimension `p0` and layer width `p1`
//! a histogram whose entry at index `i` bounds how many activation
//! patterns of rank `i` a width-`p1` ReLU layer can realize on a
//! `p0`-dimensional input region. Any family that (1) dominates the
//! maximal realizable histogram and (2) is monotone in `p0` can be
//! pushed through a network layer by layer to bound its region count;
//! `validate_bound_condition` checks exactly these two properties
//! against the known closed forms.
//!
//! Four generators are implemented in increasing tightness, plus a
//! conjectured refinement:
//!
//! * `gamma_hat`: all `2^{p1}` patterns at full rank,
//! * `gamma_tilde`: the Schlaefli count at full rank,
//! * `gamma_bar`: binomial mass spread downward from full rank,
//! * `gamma_star_*`: the shift recursion seeded with the exact
//!   single-input histograms, available through three interchangeable
//!   construction paths (recursion, explicit formula, operator
//!   expansion),
//! * `gamma_star_conjecture`: the same recursion re-anchored at the
//!   conjectured two-dimensional histogram `conjecture_tau2`.

use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use num_bigint::BigUint;
use num_integer::binomial;
use num_traits::{One, Zero};

use crate::error::Error;
use crate::histogram::Histogram;

/// `C(n, k)` as an arbitrary precision natural; zero when `k > n`.
pub(crate) fn choose(n: usize, k: usize) -> BigUint {
    if k > n {
        return BigUint::zero();
    }
    binomial(BigUint::from(n), BigUint::from(k))
}

fn require_rank(p0: usize, p1: usize) -> Result<(), Error> {
    if p0 > p1 {
        Err(Error::RankAboveWidth { p0, p1 })
    } else {
        Ok(())
    }
}

/// The crudest family: every subset of neurons as a full-rank pattern,
/// `2^{p1}` mass at index `p1` regardless of `p0`.
pub fn gamma_hat(p0: usize, p1: usize) -> Result<Histogram, Error> {
    require_rank(p0, p1)?;
    let mut e = BigUint::one();
    e <<= p1;
    Ok(Histogram::unit(p1).scale(&e))
}

/// Hyperplane-count family: the number of cells of `p1` hyperplanes in
/// dimension `p0`, all placed at full rank.
pub fn gamma_tilde(p0: usize, p1: usize) -> Result<Histogram, Error> {
    require_rank(p0, p1)?;
    Ok(Histogram::unit(p1).scale(&schlaefli_sum(p0, p1)))
}

/// Binomial family: `C(p1, j)` mass at index `p1 - j` for `j <= p0`.
/// Same total mass as `gamma_tilde`, pushed to lower ranks.
pub fn gamma_bar(p0: usize, p1: usize) -> Result<Histogram, Error> {
    require_rank(p0, p1)?;
    let mut entries = vec![BigUint::zero(); p1 + 1];
    for j in 0..=p0 {
        entries[p1 - j] = choose(p1, j);
    }
    Ok(Histogram::from_entries(entries))
}

pub(crate) fn schlaefli_sum(p0: usize, p1: usize) -> BigUint {
    (0..=p0.min(p1)).map(|j| choose(p1, j)).sum()
}

/// The exactly known maximal histograms: a single input dimension
/// (`p0 = 1`), or width at most the input dimension (`p0 >= p1`, the
/// full binomial histogram). Anything in between is open.
pub fn tau_closed_form(p0: usize, p1: usize) -> Result<Histogram, Error> {
    if p0 == 0 || (p0 > 1 && p0 < p1) {
        return Err(Error::TauNotClosed { p0, p1 });
    }
    if p0 >= p1 {
        let entries = (0..=p1).map(|i| choose(p1, i)).collect();
        return Ok(Histogram::from_entries(entries));
    }
    // p0 == 1: one pattern at full rank, two per rank in the upper half,
    // and a single leftover at the midpoint when p1 is odd
    let mut entries = vec![BigUint::zero(); p1 + 1];
    entries[p1] = BigUint::one();
    for e in entries.iter_mut().take(p1).skip(p1.div_ceil(2)) {
        *e = BigUint::from(2u32);
    }
    if p1 % 2 == 1 {
        entries[(p1 - 1) / 2] = BigUint::one();
    }
    Ok(Histogram::from_entries(entries))
}

/// Conjectured maximal histogram for two-dimensional inputs, matched by
/// every exhaustive line-arrangement search so far: mass `p1` on each
/// rank in the upper half, one full-rank pattern, and for even `p1` an
/// extra `p1/2` just below the midpoint.
pub fn conjecture_tau2(p1: usize) -> Result<Histogram, Error> {
    if p1 < 2 {
        return Err(Error::ConjectureWidth { p1 });
    }
    let mut entries = vec![BigUint::zero(); p1 + 1];
    entries[p1] = BigUint::one();
    for e in entries.iter_mut().take(p1).skip(p1 / 2) {
        *e = BigUint::from(p1);
    }
    if p1.is_multiple_of(2) {
        entries[p1 / 2 - 1] = BigUint::from(p1 / 2);
    }
    Ok(Histogram::from_entries(entries))
}

/// One step of the shift recursion: the width-`p1` histogram obtained
/// from the width-`p1 - 1` histograms at the same and at the previous
/// input dimension.
pub fn recursion_step(same_rank: &Histogram, lower_rank: &Histogram) -> Histogram {
    &same_rank.shift() + lower_rank
}

fn star_table(p1: usize, anchor2: Option<fn(usize) -> Histogram>) -> Vec<Histogram> {
    // column of histograms for input dimensions 1..=j, rebuilt width by
    // width; each entry is written exactly once
    let mut col = vec![tau_closed_form(1, 1).unwrap()];
    for j in 2..=p1 {
        let mut next = Vec::with_capacity(j);
        next.push(tau_closed_form(1, j).unwrap());
        for i in 2..=j {
            if i == 2 {
                if let Some(anchor) = anchor2 {
                    next.push(anchor(j));
                    continue;
                }
            }
            next.push(recursion_step(&col[i.min(j - 1) - 1], &col[i - 2]));
        }
        col = next;
    }
    col
}

/// The recursive family: seeded with the exact single-input histograms
/// and grown by `recursion_step`, folding the input dimension into the
/// width where it exceeds it. Defined for `1 <= p0 <= p1`.
pub fn gamma_star_recursive(p0: usize, p1: usize) -> Result<Histogram, Error> {
    if p0 == 0 {
        return Err(Error::RankBelowDomain { p0, min: 1 });
    }
    require_rank(p0, p1)?;
    Ok(star_table(p1, None)[p0 - 1].clone())
}

/// Closed form of the recursive family for `2 <= p0 <= p1`, as a sum of
/// binomial weights over three index bands. Must agree with
/// `gamma_star_recursive` everywhere both are defined.
pub fn gamma_star_explicit(p0: usize, p1: usize) -> Result<Histogram, Error> {
    require_rank(p0, p1)?;
    if p0 < 2 {
        return Err(Error::RankBelowDomain { p0, min: 2 });
    }
    let d = p1 - p0;
    let mut entries = vec![BigUint::zero(); p1 + 1];
    if d.is_multiple_of(2) {
        entries[d / 2] = BigUint::one();
    }
    for (k, e) in entries.iter_mut().enumerate().take(d + 1).skip(d / 2 + 1) {
        let base = 2 * p0 + 2 * k - p1 - 2;
        *e = choose(base, p0 - 1) + choose(base + 1, p0 - 1);
    }
    for (k, e) in entries.iter_mut().enumerate().skip(d + 1) {
        *e = choose(p1, p1 - k);
    }
    Ok(Histogram::from_entries(entries))
}

/// The recursive family unrolled into shift-and-weight operators applied
/// to the single-input seeds. Defined for `2 <= p0 <= p1`; must agree
/// with the other two construction paths.
pub fn gamma_star_k_expansion(p0: usize, p1: usize) -> Result<Histogram, Error> {
    require_rank(p0, p1)?;
    if p0 < 2 {
        return Err(Error::RankBelowDomain { p0, min: 2 });
    }
    let mut acc = Histogram::zero();
    for l in 1..=(p1 - p0 + 1) {
        let seed = tau_closed_form(1, l)?;
        acc = &acc + &seed.k_operator(p0 - 2, p1 - l - 1)?;
    }
    // every seed below the first width collapses to the width-one seed
    let corner = tau_closed_form(1, 1)?;
    for k in 2..=p0 {
        acc = &acc + &corner.k_operator(p0 - k, p1 - 1)?;
    }
    Ok(acc)
}

fn conjecture_anchor(p1: usize) -> Histogram {
    conjecture_tau2(p1).unwrap()
}

/// The recursion re-anchored at `conjecture_tau2` for two-dimensional
/// inputs. Conjectured, not certified. Defined for `1 <= p0 <= p1`.
pub fn gamma_star_conjecture(p0: usize, p1: usize) -> Result<Histogram, Error> {
    if p0 == 0 {
        return Err(Error::RankBelowDomain { p0, min: 1 });
    }
    require_rank(p0, p1)?;
    Ok(star_table(p1, Some(conjecture_anchor))[p0 - 1].clone())
}

/// Whether a family's histograms are proved upper bounds or rest on a
/// conjecture.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum GammaStatus {
    Proven,
    Conjectured,
}

/// A total source of per-layer histograms. Implementations must fold
/// `p0` above `p1` down to the diagonal and map `p0 = 0` to the single
/// full-rank pattern, so the composition engine can feed any index in.
pub trait GammaCollection {
    fn name(&self) -> &str;
    fn status(&self) -> GammaStatus;
    /// The histogram at `(p0, p1)`; `p1` must be positive.
    fn histogram(&self, p0: usize, p1: usize) -> Histogram;
}

/// The built-in families, from crudest to tightest.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum GammaFamily {
    Hat,
    Tilde,
    Bar,
    Star,
    StarConjecture,
}

impl GammaFamily {
    pub const ALL: [GammaFamily; 5] = [
        GammaFamily::Hat,
        GammaFamily::Tilde,
        GammaFamily::Bar,
        GammaFamily::Star,
        GammaFamily::StarConjecture,
    ];

    pub fn parse(name: &str) -> Option<Self> {
        match name {
            "hat" => Some(GammaFamily::Hat),
            "tilde" => Some(GammaFamily::Tilde),
            "bar" => Some(GammaFamily::Bar),
            "star" => Some(GammaFamily::Star),
            "star-conjecture" => Some(GammaFamily::StarConjecture),
            _ => None,
        }
    }
}

impl fmt::Display for GammaFamily {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl GammaCollection for GammaFamily {
    fn name(&self) -> &str {
        match self {
            GammaFamily::Hat => "hat",
            GammaFamily::Tilde => "tilde",
            GammaFamily::Bar => "bar",
            GammaFamily::Star => "star",
            GammaFamily::StarConjecture => "star-conjecture",
        }
    }

    fn status(&self) -> GammaStatus {
        match self {
            GammaFamily::StarConjecture => GammaStatus::Conjectured,
            _ => GammaStatus::Proven,
        }
    }

    fn histogram(&self, p0: usize, p1: usize) -> Histogram {
        assert!(p1 >= 1, "layer width must be positive");
        let p0 = p0.min(p1);
        if p0 == 0 {
            // a zero-dimensional input region admits one pattern; placing
            // it at full rank keeps the family monotone at the bottom
            return Histogram::unit(p1);
        }
        match self {
            GammaFamily::Hat => gamma_hat(p0, p1),
            GammaFamily::Tilde => gamma_tilde(p0, p1),
            GammaFamily::Bar => gamma_bar(p0, p1),
            GammaFamily::Star => gamma_star_recursive(p0, p1),
            GammaFamily::StarConjecture => gamma_star_conjecture(p0, p1),
        }
        .unwrap()
    }
}

/// An externally certified lower bound on the maximal histogram at
/// `(p0, p1)`, e.g. one attained by an explicit arrangement, usable as
/// extra evidence in `validate_bound_condition_with`.
#[derive(Clone, Debug)]
pub struct CertifiedLowerBound {
    pub p0: usize,
    pub p1: usize,
    pub histogram: Histogram,
    pub source: String,
}

/// A specific failure of the bound condition.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum BoundConditionViolation {
    /// The family does not dominate a known or certified lower bound on
    /// the maximal histogram.
    NotAboveTau { p1: usize, p0: usize, reference: String },
    /// The family is not monotone in the input dimension.
    NotMonotone { p1: usize, p0_low: usize, p0_high: usize },
    /// The index-zero column must hold exactly one pattern.
    IndexZeroNorm { p1: usize, norm: BigUint },
}

impl fmt::Display for BoundConditionViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            BoundConditionViolation::NotAboveTau { p1, p0, reference } => {
                write!(f, "({p0}, {p1}) does not dominate {reference}")
            }
            BoundConditionViolation::NotMonotone { p1, p0_low, p0_high } => {
                write!(f, "width {p1}: column {p0_low} not below column {p0_high}")
            }
            BoundConditionViolation::IndexZeroNorm { p1, norm } => {
                write!(f, "width {p1}: index-zero column has mass {norm}, want 1")
            }
        }
    }
}

/// Outcome of checking the bound condition on `1 <= p1 <= p1_max`.
#[derive(Clone, Debug)]
pub struct ValidationReport {
    pub family: String,
    pub p1_max: usize,
    pub violations: Vec<BoundConditionViolation>,
}

impl ValidationReport {
    pub fn is_valid(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Checks the two properties that make a family usable as an upper
/// bound, against the closed forms alone.
pub fn validate_bound_condition<G>(family: &G, p1_max: usize) -> ValidationReport
where
    G: GammaCollection + ?Sized,
{
    validate_bound_condition_with(family, p1_max, &[])
}

/// Like `validate_bound_condition`, with extra certified lower bounds
/// (e.g. oracle-attained histograms) folded into the domination checks.
pub fn validate_bound_condition_with<G>(
    family: &G,
    p1_max: usize,
    certified: &[CertifiedLowerBound],
) -> ValidationReport
where
    G: GammaCollection + ?Sized,
{
    let mut violations = Vec::new();
    for p1 in 1..=p1_max {
        let mut prev = family.histogram(0, p1);
        if !prev.l1_norm().is_one() {
            violations.push(BoundConditionViolation::IndexZeroNorm {
                p1,
                norm: prev.l1_norm(),
            });
        }
        for p0 in 1..=p1 {
            let current = family.histogram(p0, p1);
            if !prev.dominated_by(&current) {
                violations.push(BoundConditionViolation::NotMonotone {
                    p1,
                    p0_low: p0 - 1,
                    p0_high: p0,
                });
            }
            let reference = if p0 == 1 {
                Some((tau_closed_form(1, p1).unwrap(), "single-input closed form"))
            } else if p0 == p1 {
                Some((tau_closed_form(p1, p1).unwrap(), "full-rank closed form"))
            } else {
                None
            };
            if let Some((tau, name)) = reference {
                if !tau.dominated_by(&current) {
                    violations.push(BoundConditionViolation::NotAboveTau {
                        p1,
                        p0,
                        reference: String::from(name),
                    });
                }
            }
            for cert in certified.iter().filter(|c| c.p0 == p0 && c.p1 == p1) {
                if !cert.histogram.dominated_by(&current) {
                    violations.push(BoundConditionViolation::NotAboveTau {
                        p1,
                        p0,
                        reference: cert.source.clone(),
                    });
                }
            }
            prev = current;
        }
    }
    ValidationReport {
        family: String::from(family.name()),
        p1_max,
        violations,
    }
}
