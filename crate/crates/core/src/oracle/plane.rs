//! Oriented line arrangements in the plane over exact rationals.
//!
//! Cells are found by brute force: every sign vector is tested for
//! feasibility with a two-variable Fourier-Motzkin elimination over
//! strict inequalities, which also produces an interior rational
//! witness. No floating point enters anywhere; the tangent-circle
//! construction below builds its "angles" from a rational pi and
//! truncated power series, then snaps onto a rational grid.

use alloc::vec;
use alloc::vec::Vec;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, Zero};

use crate::error::Error;
use crate::histogram::Histogram;

fn int(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

fn ratio(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

/// An oriented line `a x + b y + c`, active on the side where the form
/// is positive.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LineEq {
    pub a: BigRational,
    pub b: BigRational,
    pub c: BigRational,
}

impl LineEq {
    pub fn new(a: BigRational, b: BigRational, c: BigRational) -> Self {
        LineEq { a, b, c }
    }

    pub fn eval(&self, x: &BigRational, y: &BigRational) -> BigRational {
        &self.a * x + &self.b * y + &self.c
    }

    fn negated(&self) -> LineEq {
        LineEq { a: -self.a.clone(), b: -self.b.clone(), c: -self.c.clone() }
    }
}

/// A finite set of oriented rational lines.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OrientedArrangement2D {
    lines: Vec<LineEq>,
}

impl OrientedArrangement2D {
    /// Rejects lines with a zero normal vector.
    pub fn new(lines: Vec<LineEq>) -> Result<Self, Error> {
        for (index, line) in lines.iter().enumerate() {
            if line.a.is_zero() && line.b.is_zero() {
                return Err(Error::DegenerateLine { index });
            }
        }
        Ok(OrientedArrangement2D { lines })
    }

    pub fn lines(&self) -> &[LineEq] {
        &self.lines
    }

    pub fn len(&self) -> usize {
        self.lines.len()
    }

    pub fn is_empty(&self) -> bool {
        self.lines.is_empty()
    }

    /// Exact general-position test: no two lines parallel, no three
    /// through one point.
    pub fn is_general_position(&self) -> bool {
        let n = self.lines.len();
        for i in 0..n {
            for j in i + 1..n {
                if cross(&self.lines[i], &self.lines[j]).is_zero() {
                    return false;
                }
            }
        }
        for i in 0..n {
            for j in i + 1..n {
                for k in j + 1..n {
                    if det3(&self.lines[i], &self.lines[j], &self.lines[k]).is_zero() {
                        return false;
                    }
                }
            }
        }
        true
    }

    /// The same lines with the selected orientations reversed.
    pub fn with_orientation(&self, flip: &[bool]) -> OrientedArrangement2D {
        assert_eq!(flip.len(), self.lines.len());
        let lines = self
            .lines
            .iter()
            .zip(flip)
            .map(|(line, &f)| if f { line.negated() } else { line.clone() })
            .collect();
        OrientedArrangement2D { lines }
    }
}

fn cross(p: &LineEq, q: &LineEq) -> BigRational {
    &p.a * &q.b - &q.a * &p.b
}

fn det3(p: &LineEq, q: &LineEq, r: &LineEq) -> BigRational {
    &p.a * (&q.b * &r.c - &r.b * &q.c) - &p.b * (&q.a * &r.c - &r.a * &q.c)
        + &p.c * (&q.a * &r.b - &r.a * &q.b)
}

/// A nonempty open cell: the sign vector realizing it and an interior
/// point.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Cell {
    /// `pattern[i]` is true when the cell lies on the active side of
    /// line `i`.
    pub pattern: Vec<bool>,
    pub witness: (BigRational, BigRational),
}

impl Cell {
    pub fn active_count(&self) -> usize {
        self.pattern.iter().filter(|&&p| p).count()
    }
}

/// Largest arrangement enumerated by sign vectors.
const MAX_LINES: usize = 16;

/// All nonempty open cells of the arrangement, one per realizable sign
/// vector.
pub fn enumerate_cells_2d(arr: &OrientedArrangement2D) -> Result<Vec<Cell>, Error> {
    let n = arr.len();
    if n > MAX_LINES {
        return Err(Error::EnumerationCap { size: n, cap: MAX_LINES });
    }
    let mut cells = Vec::new();
    for mask in 0u32..(1u32 << n) {
        let cons: Vec<LineEq> = arr
            .lines()
            .iter()
            .enumerate()
            .map(|(i, line)| if mask >> i & 1 == 1 { line.clone() } else { line.negated() })
            .collect();
        if let Some(witness) = feasible_point(&cons) {
            let pattern = (0..n).map(|i| mask >> i & 1 == 1).collect();
            cells.push(Cell { pattern, witness });
        }
    }
    Ok(cells)
}

/// An interior rational point satisfying every strict constraint
/// `a x + b y + c > 0`, or None when the open polygon is empty.
fn feasible_point(cons: &[LineEq]) -> Option<(BigRational, BigRational)> {
    // Split off y: b > 0 gives a lower bound line y > alpha x + beta,
    // b < 0 an upper one, b = 0 a pure constraint on x.
    let mut lowers: Vec<(BigRational, BigRational)> = Vec::new();
    let mut uppers: Vec<(BigRational, BigRational)> = Vec::new();
    let mut on_x: Vec<(BigRational, BigRational)> = Vec::new();
    for con in cons {
        if con.b.is_zero() {
            on_x.push((con.a.clone(), con.c.clone()));
        } else {
            let alpha = -(&con.a / &con.b);
            let beta = -(&con.c / &con.b);
            if con.b.is_positive() {
                lowers.push((alpha, beta));
            } else {
                uppers.push((alpha, beta));
            }
        }
    }
    // Each lower/upper pair projects to a strict constraint on x alone.
    for (al, bl) in &lowers {
        for (au, bu) in &uppers {
            on_x.push((au - al, bu - bl));
        }
    }

    let mut lo: Option<BigRational> = None;
    let mut hi: Option<BigRational> = None;
    for (p, q) in &on_x {
        if p.is_zero() {
            if !q.is_positive() {
                return None;
            }
        } else {
            let bound = -(q / p);
            if p.is_positive() {
                lo = Some(match lo {
                    Some(l) => l.max(bound),
                    None => bound,
                });
            } else {
                hi = Some(match hi {
                    Some(h) => h.min(bound),
                    None => bound,
                });
            }
        }
    }
    if let (Some(l), Some(h)) = (&lo, &hi) {
        if l >= h {
            return None;
        }
    }
    let x = match (&lo, &hi) {
        (Some(l), Some(h)) => (l + h) / int(2),
        (Some(l), None) => l + int(1),
        (None, Some(h)) => h - int(1),
        (None, None) => int(0),
    };

    let mut ylo: Option<BigRational> = None;
    let mut yhi: Option<BigRational> = None;
    for (al, bl) in &lowers {
        let v = al * &x + bl;
        ylo = Some(match ylo {
            Some(l) => l.max(v),
            None => v,
        });
    }
    for (au, bu) in &uppers {
        let v = au * &x + bu;
        yhi = Some(match yhi {
            Some(h) => h.min(v),
            None => v,
        });
    }
    if let (Some(l), Some(h)) = (&ylo, &yhi) {
        if l >= h {
            return None;
        }
    }
    let y = match (&ylo, &yhi) {
        (Some(l), Some(h)) => (l + h) / int(2),
        (Some(l), None) => l + int(1),
        (None, Some(h)) => h - int(1),
        (None, None) => int(0),
    };
    Some((x, y))
}

/// Histogram of the arrangement's cells by number of active sides.
pub fn activation_histogram_2d(arr: &OrientedArrangement2D) -> Result<Histogram, Error> {
    let cells = enumerate_cells_2d(arr)?;
    let mut counts = vec![0u64; arr.len() + 1];
    for cell in &cells {
        counts[cell.active_count()] += 1;
    }
    Ok(Histogram::from_u64_entries(&counts))
}

/// Histogram after reversing the orientations selected by `flip`,
/// reusing already enumerated cells: a cell is active for line `i`
/// exactly when its stored sign differs from the flip.
pub fn histogram_under_flip(cells: &[Cell], flip: &[bool]) -> Histogram {
    let mut counts = vec![0u64; flip.len() + 1];
    for cell in cells {
        let active = cell.pattern.iter().zip(flip).filter(|(&p, &f)| p != f).count();
        counts[active] += 1;
    }
    Histogram::from_u64_entries(&counts)
}

/// Digits of pi scaled by 10^50; plenty for snapping tangent points
/// onto a grid six orders of magnitude coarse.
const PI_DIGITS: &str = "314159265358979323846264338327950288419716939937510";

fn rational_pi() -> BigRational {
    let numer = BigInt::parse_bytes(PI_DIGITS.as_bytes(), 10).unwrap();
    let denom = BigInt::from(10u32).pow(50);
    BigRational::new(numer, denom)
}

/// Truncated power series for sine after folding into (-pi, pi].
fn rational_sin(x: &BigRational) -> BigRational {
    let pi = rational_pi();
    let two_pi = &pi + &pi;
    let mut x = x.clone();
    while x > pi {
        x = &x - &two_pi;
    }
    while x < -pi.clone() {
        x = &x + &two_pi;
    }
    let xx = &x * &x;
    let mut term = x.clone();
    let mut sum = x;
    for k in 1..24u32 {
        let denom = int(i64::from(2 * k) * i64::from(2 * k + 1));
        term = -(&term * &xx) / denom;
        sum = &sum + &term;
    }
    sum
}

fn rational_cos(x: &BigRational) -> BigRational {
    let pi = rational_pi();
    let two_pi = &pi + &pi;
    let mut x = x.clone();
    while x > pi {
        x = &x - &two_pi;
    }
    while x < -pi.clone() {
        x = &x + &two_pi;
    }
    let xx = &x * &x;
    let mut term = int(1);
    let mut sum = int(1);
    for k in 1..24u32 {
        let denom = int(i64::from(2 * k - 1) * i64::from(2 * k));
        term = -(&term * &xx) / denom;
        sum = &sum + &term;
    }
    sum
}

/// Nearest grid point `round(t q) / q`.
fn round_to_grid(t: &BigRational, q: &BigInt) -> BigRational {
    let scaled = t * BigRational::from_integer(q.clone()) + ratio(1, 2);
    scaled.floor() / BigRational::from_integer(q.clone())
}

/// Widths covered by the tangent construction.
const HOT_CENTER_MAX: usize = 8;

/// Tangent lines to the unit circle at near-equispaced angles, snapped
/// to rational points on the circle, every active side containing the
/// center. The grid is coarsened until the arrangement is exactly in
/// general position; even widths place tangent points in near-antipodal
/// pairs whose far crossings supply the low-index cells.
pub fn hot_center_arrangement(p1: usize) -> Result<OrientedArrangement2D, Error> {
    if !(2..=HOT_CENTER_MAX).contains(&p1) {
        return Err(Error::HotCenterWidth { p1 });
    }
    let pi = rational_pi();
    // A small irrational-ish twist so that symmetric tangent points do
    // not snap onto exactly symmetric grid values.
    let twist = ratio(1, 1009);
    let angles: Vec<BigRational> = (0..p1)
        .map(|k| {
            let k = i64::try_from(k).unwrap();
            let p = i64::try_from(p1).unwrap();
            if p1 % 2 == 1 {
                &(&pi * ratio(2 * k, p)) + &twist
            } else {
                &(&pi * ratio(2 * k + 1, p)) + &twist
            }
        })
        .collect();

    let mut q = BigInt::from(1_000_000u64);
    for _ in 0..32 {
        let mut lines = Vec::with_capacity(p1);
        for angle in &angles {
            // Half-angle parameter of the tangent point, snapped to the
            // grid; the Weierstrass substitution then lands exactly on
            // the unit circle.
            let s = rational_sin(angle);
            let c = rational_cos(angle);
            let t = round_to_grid(&(&s / &(int(1) + &c)), &q);
            let tt = &t * &t;
            let denom = int(1) + &tt;
            let px = (int(1) - &tt) / &denom;
            let py = (&t + &t) / &denom;
            lines.push(LineEq::new(-px, -py, int(1)));
        }
        let arr = OrientedArrangement2D::new(lines)?;
        if arr.is_general_position() {
            return Ok(arr);
        }
        q = q * 7 + 13;
    }
    Err(Error::ConstructionFailed("tangent construction stayed degenerate on every grid"))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gamma::conjecture_tau2;
    use crate::hist;

    fn line(a: i64, b: i64, c: i64) -> LineEq {
        LineEq::new(int(a), int(b), int(c))
    }

    #[test]
    fn single_line_splits_the_plane() {
        let arr = OrientedArrangement2D::new(vec![line(1, 0, 0)]).unwrap();
        let cells = enumerate_cells_2d(&arr).unwrap();
        assert_eq!(cells.len(), 2);
        let patterns: Vec<Vec<bool>> = cells.iter().map(|c| c.pattern.clone()).collect();
        assert!(patterns.contains(&vec![true]));
        assert!(patterns.contains(&vec![false]));
        for cell in &cells {
            let v = arr.lines()[0].eval(&cell.witness.0, &cell.witness.1);
            assert_eq!(v.is_positive(), cell.pattern[0]);
        }
    }

    #[test]
    fn parallel_lines_make_strips() {
        let arr =
            OrientedArrangement2D::new(vec![line(1, 0, 0), line(1, 0, -1)]).unwrap();
        assert!(!arr.is_general_position());
        let cells = enumerate_cells_2d(&arr).unwrap();
        assert_eq!(cells.len(), 3);
    }

    #[test]
    fn degenerate_line_is_rejected() {
        assert_eq!(
            OrientedArrangement2D::new(vec![line(1, 1, 0), line(0, 0, 3)]),
            Err(Error::DegenerateLine { index: 1 })
        );
    }

    #[test]
    fn three_generic_lines_have_seven_cells() {
        // x > 0 active, y > 0 active, x + y < 1 active
        let arr = OrientedArrangement2D::new(vec![
            line(1, 0, 0),
            line(0, 1, 0),
            line(-1, -1, 1),
        ])
        .unwrap();
        assert!(arr.is_general_position());
        let cells = enumerate_cells_2d(&arr).unwrap();
        assert_eq!(cells.len(), 7);
        assert_eq!(activation_histogram_2d(&arr).unwrap(), hist![0, 3, 3, 1]);
        let flipped = arr.with_orientation(&[true, true, true]);
        assert_eq!(activation_histogram_2d(&flipped).unwrap(), hist![1, 3, 3, 0]);
    }

    #[test]
    fn flip_recount_matches_reorientation() {
        let arr = OrientedArrangement2D::new(vec![
            line(1, 0, 0),
            line(0, 1, 0),
            line(-1, -1, 1),
        ])
        .unwrap();
        let cells = enumerate_cells_2d(&arr).unwrap();
        for mask in 0u32..8 {
            let flip: Vec<bool> = (0..3).map(|b| mask >> b & 1 == 1).collect();
            let direct = activation_histogram_2d(&arr.with_orientation(&flip)).unwrap();
            assert_eq!(histogram_under_flip(&cells, &flip), direct, "mask {mask}");
        }
    }

    #[test]
    fn witnesses_satisfy_their_sign_vectors() {
        let arr = OrientedArrangement2D::new(vec![
            line(2, 3, -1),
            line(-1, 4, 2),
            line(5, -2, 3),
            line(0, 1, -2),
        ])
        .unwrap();
        for cell in enumerate_cells_2d(&arr).unwrap() {
            for (i, l) in arr.lines().iter().enumerate() {
                let v = l.eval(&cell.witness.0, &cell.witness.1);
                assert_eq!(v.is_positive(), cell.pattern[i]);
                assert!(!v.is_zero());
            }
        }
    }

    #[test]
    fn series_values_are_close_to_known_points() {
        // sin and cos at pi/6, checked against 1/2 and sqrt(3)/2 to a
        // tolerance far finer than the snapping grid
        let pi = rational_pi();
        let x = &pi / int(6);
        let s = rational_sin(&x);
        let eps = ratio(1, 1_000_000_000);
        assert!((s - ratio(1, 2)).abs() < eps);
        let c = rational_cos(&x);
        let c2 = &c * &c;
        assert!((c2 - ratio(3, 4)).abs() < ratio(1, 100_000_000));
        assert!(rational_sin(&(&pi * ratio(7, 4))).is_negative());
    }

    #[test]
    fn hot_center_is_generic_with_center_active() {
        for p1 in 2..=8 {
            let arr = hot_center_arrangement(p1).unwrap();
            assert_eq!(arr.len(), p1);
            assert!(arr.is_general_position(), "p1 = {p1}");
            let zero = int(0);
            for l in arr.lines() {
                assert!(l.eval(&zero, &zero).is_positive(), "p1 = {p1}");
                // tangent point lies exactly on the unit circle
                let rr = &l.a * &l.a + &l.b * &l.b;
                assert_eq!(rr, int(1), "p1 = {p1}");
            }
        }
    }

    #[test]
    fn hot_center_histograms_match_the_conjecture() {
        for p1 in 2..=6 {
            let arr = hot_center_arrangement(p1).unwrap();
            assert_eq!(
                activation_histogram_2d(&arr).unwrap(),
                conjecture_tau2(p1).unwrap(),
                "p1 = {p1}"
            );
        }
    }

    #[test]
    fn width_bounds_are_enforced() {
        assert_eq!(hot_center_arrangement(1), Err(Error::HotCenterWidth { p1: 1 }));
        assert_eq!(hot_center_arrangement(9), Err(Error::HotCenterWidth { p1: 9 }));
        let many: Vec<LineEq> = (0..17).map(|i| line(1, i + 1, 0)).collect();
        let arr = OrientedArrangement2D::new(many).unwrap();
        assert_eq!(
            enumerate_cells_2d(&arr),
            Err(Error::EnumerationCap { size: 17, cap: 16 })
        );
    }
}
