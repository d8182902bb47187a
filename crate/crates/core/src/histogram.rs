//! Multiplicity histograms over the naturals with the suffix-sum order.
//!
//! A histogram assigns to every index `i >= 0` a natural number, with
//! finite support. Throughout the crate index `i` stands for the rank of
//! an activation pattern and the entry counts how many patterns of that
//! rank a layer can realize. Histogram `v` lies below `w` when for every
//! threshold `J` the mass of `v` at indices `>= J` is at most the mass
//! of `w` there; under this order any two histograms have a least upper
//! bound (take pointwise maxima of suffix sums and difference them), so
//! histograms form a join-semilattice with the empty histogram at the
//! bottom.

use alloc::vec;
use alloc::vec::Vec;
use core::cmp::Ordering;
use core::fmt;
use core::ops::Add;

use num_bigint::BigUint;
use num_integer::binomial;
use num_traits::Zero;

use crate::error::Error;

/// A finitely supported map from indices to arbitrary precision counts,
/// kept in canonical form: the entry vector never ends in a zero, so
/// structural equality coincides with equality of the underlying maps.
/// Values are immutable; every operation returns a fresh histogram.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct Histogram {
    entries: Vec<BigUint>,
}

/// Builds a histogram from little-endian `u64` entries, e.g.
/// `hist![0, 2, 1]` for two objects at index 1 and one at index 2.
#[macro_export]
macro_rules! hist {
    () => { $crate::histogram::Histogram::zero() };
    ($($x:expr),+ $(,)?) => {
        $crate::histogram::Histogram::from_u64_entries(&[$($x),+])
    };
}

impl Histogram {
    /// The empty histogram, bottom of the order.
    pub fn zero() -> Self {
        Histogram { entries: Vec::new() }
    }

    /// A single object at index `i`.
    pub fn unit(i: usize) -> Self {
        let mut entries = vec![BigUint::zero(); i + 1];
        entries[i] = BigUint::from(1u32);
        Histogram { entries }
    }

    /// Takes ownership of raw entries and trims trailing zeros.
    pub fn from_entries(mut entries: Vec<BigUint>) -> Self {
        while entries.last().is_some_and(|e| e.is_zero()) {
            entries.pop();
        }
        Histogram { entries }
    }

    /// Convenience constructor for tables and tests.
    pub fn from_u64_entries(entries: &[u64]) -> Self {
        Self::from_entries(entries.iter().map(|&e| BigUint::from(e)).collect())
    }

    /// The canonical entry vector, without trailing zeros.
    pub fn entries(&self) -> &[BigUint] {
        &self.entries
    }

    /// The count at index `i` (zero beyond the support).
    pub fn entry(&self, i: usize) -> BigUint {
        self.entries.get(i).cloned().unwrap_or_else(BigUint::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.entries.is_empty()
    }

    /// Largest index carrying mass, if any.
    pub fn max_index(&self) -> Option<usize> {
        self.entries.len().checked_sub(1)
    }

    /// Total mass.
    pub fn l1_norm(&self) -> BigUint {
        self.entries.iter().sum()
    }

    /// Mass at indices `>= j`.
    pub fn suffix_sum(&self, j: usize) -> BigUint {
        self.entries.iter().skip(j).sum()
    }

    /// Compares all suffix sums in one backward pass, returning whether
    /// `self <= other` and `self >= other` hold throughout.
    fn suffix_relation(&self, other: &Self) -> (bool, bool) {
        let n = self.entries.len().max(other.entries.len());
        let mut sv = BigUint::zero();
        let mut sw = BigUint::zero();
        let (mut le, mut ge) = (true, true);
        for j in (0..n).rev() {
            if let Some(e) = self.entries.get(j) {
                sv += e;
            }
            if let Some(e) = other.entries.get(j) {
                sw += e;
            }
            match sv.cmp(&sw) {
                Ordering::Less => ge = false,
                Ordering::Greater => le = false,
                Ordering::Equal => {}
            }
        }
        (le, ge)
    }

    /// Whether `self` lies below `other` in the suffix-sum order.
    pub fn dominated_by(&self, other: &Self) -> bool {
        self.suffix_relation(other).0
    }

    /// Least upper bound: pointwise maxima of suffix sums, differenced
    /// back into entries. The maxima are non-increasing in the index, so
    /// the differences are again natural numbers.
    pub fn join(&self, other: &Self) -> Self {
        let n = self.entries.len().max(other.entries.len());
        let mut out = vec![BigUint::zero(); n];
        let mut sv = BigUint::zero();
        let mut sw = BigUint::zero();
        let mut above = BigUint::zero();
        for j in (0..n).rev() {
            if let Some(e) = self.entries.get(j) {
                sv += e;
            }
            if let Some(e) = other.entries.get(j) {
                sw += e;
            }
            let m = sv.clone().max(sw.clone());
            out[j] = &m - &above;
            above = m;
        }
        Self::from_entries(out)
    }

    /// Join of arbitrarily many histograms; an empty collection yields
    /// the empty histogram.
    pub fn join_all<'a, I>(items: I) -> Self
    where
        I: IntoIterator<Item = &'a Histogram>,
    {
        items.into_iter().fold(Self::zero(), |acc, h| acc.join(h))
    }

    /// Moves all mass above index `j` down to exactly `j`, preserving
    /// the total mass.
    pub fn clip(&self, j: usize) -> Self {
        let mut out = vec![BigUint::zero(); (self.entries.len()).min(j + 1)];
        for (i, e) in self.entries.iter().enumerate() {
            if !e.is_zero() {
                out[i.min(j)] += e;
            }
        }
        Self::from_entries(out)
    }

    /// Raises every index by one.
    pub fn shift(&self) -> Self {
        self.shift_by(1)
    }

    /// Raises every index by `k`.
    pub fn shift_by(&self, k: usize) -> Self {
        if self.is_zero() {
            return Self::zero();
        }
        let mut out = vec![BigUint::zero(); self.entries.len() + k];
        out[k..].clone_from_slice(&self.entries);
        Histogram { entries: out }
    }

    /// Shifts by `delta_j - delta_i` and weights by `C(delta_j, delta_i)`.
    /// Requires `delta_j >= delta_i`.
    pub fn k_operator(&self, delta_i: usize, delta_j: usize) -> Result<Self, Error> {
        if delta_j < delta_i {
            return Err(Error::OperatorOrder { delta_i, delta_j });
        }
        let weight = binomial(BigUint::from(delta_j), BigUint::from(delta_i));
        Ok(self.shift_by(delta_j - delta_i).scale(&weight))
    }

    /// Multiplies every entry by `c`.
    pub fn scale(&self, c: &BigUint) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        Histogram {
            entries: self.entries.iter().map(|e| e * c).collect(),
        }
    }
}

impl Add for &Histogram {
    type Output = Histogram;

    fn add(self, other: &Histogram) -> Histogram {
        let n = self.entries.len().max(other.entries.len());
        let mut out = vec![BigUint::zero(); n];
        for (i, slot) in out.iter_mut().enumerate() {
            if let Some(e) = self.entries.get(i) {
                *slot += e;
            }
            if let Some(e) = other.entries.get(i) {
                *slot += e;
            }
        }
        Histogram { entries: out }
    }
}

/// The suffix-sum order. Consistent with `PartialEq`: canonical forms
/// have equal suffix sums exactly when they are structurally equal.
impl PartialOrd for Histogram {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        match self.suffix_relation(other) {
            (true, true) => Some(Ordering::Equal),
            (true, false) => Some(Ordering::Less),
            (false, true) => Some(Ordering::Greater),
            (false, false) => None,
        }
    }
}

impl fmt::Display for Histogram {
    /// Writes `3e1 + 3e2 + e3` style sums; the empty histogram is `0`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (i, e) in self.entries.iter().enumerate() {
            if e.is_zero() {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            if e == &BigUint::from(1u32) {
                write!(f, "e{i}")?;
            } else {
                write!(f, "{e}e{i}")?;
            }
        }
        Ok(())
    }
}
