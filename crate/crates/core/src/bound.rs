//! Composition of per-layer histograms into region-count bounds.
//!
//! Pushing a histogram through a layer of width `p1` replaces each unit
//! of mass at index `i` by the layer's histogram at input dimension
//! `min(i, p1)`, clipped down to that index. Starting from a single
//! unit at the network's input dimension and pushing through every
//! layer, the total mass of the final histogram bounds the number of
//! affine-linear regions.
//!
//! The same push-forward can be phrased as a product of matrices: an
//! upper triangular matrix per layer whose columns are the clipped
//! family histograms, interleaved with index-folding matrices between
//! layers of different width. `compose_bound` runs both phrasings and
//! asserts that they agree on every layer, so a defect in either one
//! cannot go unnoticed.

use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;
use core::str::FromStr;

use num_bigint::BigUint;
use num_traits::Zero;

use crate::error::Error;
use crate::gamma::{schlaefli_sum, GammaCollection, GammaStatus};
use crate::histogram::Histogram;

/// Number of cells that `p1` hyperplanes in general position cut a
/// `p0`-dimensional space into: `sum_{j <= min(p0, p1)} C(p1, j)`.
pub fn schlaefli_count(p0: usize, p1: usize) -> BigUint {
    schlaefli_sum(p0, p1)
}

/// A fully connected feed-forward shape: input dimension and one width
/// per hidden layer, e.g. `3x6x6`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Architecture {
    pub input_dim: usize,
    pub widths: Vec<usize>,
}

impl Architecture {
    pub fn new(input_dim: usize, widths: Vec<usize>) -> Result<Self, Error> {
        if input_dim == 0 || widths.is_empty() || widths.contains(&0) {
            return Err(Error::ArchitectureFormat(String::from(
                "need a positive input dimension and at least one positive width",
            )));
        }
        Ok(Architecture { input_dim, widths })
    }

    pub fn depth(&self) -> usize {
        self.widths.len()
    }

    /// The common layer width, when all layers agree.
    pub fn constant_width(&self) -> Option<usize> {
        let w = self.widths[0];
        self.widths.iter().all(|&x| x == w).then_some(w)
    }
}

impl FromStr for Architecture {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Error> {
        let mut dims = Vec::new();
        for part in s.split('x') {
            let d: usize = part
                .trim()
                .parse()
                .map_err(|_| Error::ArchitectureFormat(format!("bad dimension '{part}' in '{s}'")))?;
            dims.push(d);
        }
        if dims.len() < 2 {
            return Err(Error::ArchitectureFormat(format!(
                "'{s}' needs an input dimension and at least one width"
            )));
        }
        let input_dim = dims[0];
        Architecture::new(input_dim, dims.split_off(1))
    }
}

impl fmt::Display for Architecture {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.input_dim)?;
        for w in &self.widths {
            write!(f, "x{w}")?;
        }
        Ok(())
    }
}

/// Pushes `v` through a width-`p1` layer of the family.
pub fn phi_apply<G>(family: &G, p1: usize, v: &Histogram) -> Histogram
where
    G: GammaCollection + ?Sized,
{
    let mut acc = Histogram::zero();
    for (i, c) in v.entries().iter().enumerate() {
        if c.is_zero() {
            continue;
        }
        let q = i.min(p1);
        acc = &acc + &family.histogram(q, p1).clip(q).scale(c);
    }
    acc
}

/// Folds a coefficient vector down to length `p1 + 1` by adding all
/// mass at indices `>= p1` into index `p1`. This is the matrix that
/// mediates between layers of different width.
pub fn clip_vector(v: &[BigUint], p1: usize) -> Vec<BigUint> {
    let mut out = vec![BigUint::zero(); p1 + 1];
    for (i, e) in v.iter().enumerate() {
        out[i.min(p1)] += e;
    }
    out
}

/// The layer matrix: square of dimension `p1 + 1`, column `j` holding
/// the family histogram at input dimension `j`, clipped to `j`. Upper
/// triangular by construction.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BoundMatrix {
    p1: usize,
    cols: Vec<Vec<BigUint>>,
}

impl BoundMatrix {
    pub fn build<G>(family: &G, p1: usize) -> Self
    where
        G: GammaCollection + ?Sized,
    {
        assert!(p1 >= 1, "layer width must be positive");
        let cols = (0..=p1)
            .map(|j| {
                let mut col = vec![BigUint::zero(); p1 + 1];
                let h = family.histogram(j, p1).clip(j);
                for (i, e) in h.entries().iter().enumerate() {
                    col[i] = e.clone();
                }
                col
            })
            .collect();
        BoundMatrix { p1, cols }
    }

    /// Builds from explicit per-dimension histograms (index = input
    /// dimension); used by subnetwork families.
    fn from_histograms(histograms: &[Histogram]) -> Self {
        let p1 = histograms.len() - 1;
        let cols = histograms
            .iter()
            .enumerate()
            .map(|(j, h)| {
                let mut col = vec![BigUint::zero(); p1 + 1];
                for (i, e) in h.clip(j).entries().iter().enumerate() {
                    col[i] = e.clone();
                }
                col
            })
            .collect();
        BoundMatrix { p1, cols }
    }

    /// Matrix dimension, `p1 + 1`.
    pub fn dim(&self) -> usize {
        self.p1 + 1
    }

    /// Entry at (row, column), zero based.
    pub fn cell(&self, row: usize, col: usize) -> &BigUint {
        &self.cols[col][row]
    }

    pub fn diagonal(&self) -> Vec<BigUint> {
        (0..self.dim()).map(|j| self.cols[j][j].clone()).collect()
    }

    pub fn is_upper_triangular(&self) -> bool {
        self.cols
            .iter()
            .enumerate()
            .all(|(j, col)| col.iter().skip(j + 1).all(|e| e.is_zero()))
    }

    /// Total mass of a column; equals the norm of the underlying family
    /// histogram because clipping preserves mass.
    pub fn column_norm(&self, col: usize) -> BigUint {
        self.cols[col].iter().sum()
    }

    /// Matrix-vector product; `v` must have length `dim()`.
    pub fn apply(&self, v: &[BigUint]) -> Vec<BigUint> {
        assert_eq!(v.len(), self.dim());
        let mut out = vec![BigUint::zero(); self.dim()];
        for (col, c) in self.cols.iter().zip(v) {
            if c.is_zero() {
                continue;
            }
            for (slot, e) in out.iter_mut().zip(col) {
                if !e.is_zero() {
                    *slot += e * c;
                }
            }
        }
        out
    }
}

/// Result of a composition: the bound itself and the histogram pushed
/// through each layer (or block).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ComposeOutcome {
    pub bound: BigUint,
    pub per_layer: Vec<Histogram>,
}

/// The histogram phrasing of the composition on its own; exposed so
/// verification can compare the two phrasings as a check instead of an
/// assertion.
pub fn compose_histogram_path<G>(family: &G, arch: &Architecture) -> Vec<Histogram>
where
    G: GammaCollection + ?Sized,
{
    let mut v = Histogram::unit(arch.input_dim);
    let mut out = Vec::with_capacity(arch.depth());
    for &w in &arch.widths {
        v = phi_apply(family, w, &v);
        out.push(v.clone());
    }
    out
}

/// The matrix phrasing of the composition on its own.
pub fn compose_matrix_path<G>(family: &G, arch: &Architecture) -> Vec<Vec<BigUint>>
where
    G: GammaCollection + ?Sized,
{
    let mut v = Histogram::unit(arch.input_dim).entries().to_vec();
    let mut out = Vec::with_capacity(arch.depth());
    for &w in &arch.widths {
        v = BoundMatrix::build(family, w).apply(&clip_vector(&v, w));
        out.push(v.clone());
    }
    out
}

/// Pushes a unit of mass at the input dimension through every layer and
/// returns the final mass as the region bound. Both phrasings of the
/// push-forward are computed and must agree layer by layer.
pub fn compose_bound<G>(family: &G, arch: &Architecture) -> ComposeOutcome
where
    G: GammaCollection + ?Sized,
{
    let hist = compose_histogram_path(family, arch);
    let mat = compose_matrix_path(family, arch);
    for (layer, (h, v)) in hist.iter().zip(&mat).enumerate() {
        assert_eq!(
            h,
            &Histogram::from_entries(v.clone()),
            "matrix and histogram push-forward disagree at layer {}",
            layer + 1
        );
    }
    ComposeOutcome {
        bound: hist.last().map(Histogram::l1_norm).unwrap_or_else(BigUint::zero),
        per_layer: hist,
    }
}

/// Largest diagonal entry of the layer matrix among columns `0..=n0`:
/// the per-layer factor in the asymptotic bound for constant-width
/// networks. Needs `n0 <= n`.
pub fn growth_rate<G>(family: &G, n0: usize, n: usize) -> Result<BigUint, Error>
where
    G: GammaCollection + ?Sized,
{
    if n0 > n {
        return Err(Error::GrowthRateDomain { n0, n });
    }
    let diag = BoundMatrix::build(family, n).diagonal();
    Ok(diag[..=n0].iter().cloned().max().unwrap())
}

/// How much trust a subnetwork family deserves.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SubnetStatus {
    Proven,
    Conjectured,
    /// Sampled joins only: a lower-bound estimate of the true maximal
    /// histogram, never usable for certified upper bounds.
    EmpiricalLowerBound,
}

/// Histograms for a block of consecutive layers, indexed by the input
/// dimension `0..=p1` where `p1` is the width of the block's first
/// layer.
#[derive(Clone, Debug)]
pub struct SubnetGammaFamily {
    name: String,
    topology: Vec<usize>,
    histograms: Vec<Histogram>,
    status: SubnetStatus,
}

impl SubnetGammaFamily {
    /// Wraps explicit histograms; `histograms[p0]` is the block bound
    /// for a `p0`-dimensional input and there must be one entry for
    /// each `p0` in `0..=topology[0]`.
    pub fn new(
        name: String,
        topology: Vec<usize>,
        histograms: Vec<Histogram>,
        status: SubnetStatus,
    ) -> Result<Self, Error> {
        if topology.is_empty() || topology.contains(&0) {
            return Err(Error::ArchitectureFormat(String::from(
                "block topology needs at least one positive width",
            )));
        }
        let p1 = topology[0];
        if histograms.len() != p1 + 1 {
            return Err(Error::ArchitectureFormat(format!(
                "need {} histograms for first width {}, got {}",
                p1 + 1,
                p1,
                histograms.len()
            )));
        }
        if let Some(h) = histograms.iter().find(|h| h.max_index() > Some(p1)) {
            return Err(Error::ArchitectureFormat(format!(
                "histogram {h} has mass above the first width {p1}"
            )));
        }
        Ok(SubnetGammaFamily { name, topology, histograms, status })
    }

    /// A single-layer block carrying the layer family itself.
    pub fn from_layer_family<G>(family: &G, p1: usize) -> Self
    where
        G: GammaCollection + ?Sized,
    {
        let histograms = (0..=p1).map(|p0| family.histogram(p0, p1)).collect();
        SubnetGammaFamily {
            name: String::from(family.name()),
            topology: vec![p1],
            histograms,
            status: match family.status() {
                GammaStatus::Proven => SubnetStatus::Proven,
                GammaStatus::Conjectured => SubnetStatus::Conjectured,
            },
        }
    }

    /// A multi-layer block whose histograms are the layer-wise
    /// composition of the family through the block. Sound whenever the
    /// layer family is.
    pub fn from_layer_composition<G>(family: &G, topology: &[usize]) -> Result<Self, Error>
    where
        G: GammaCollection + ?Sized,
    {
        if topology.is_empty() || topology.contains(&0) {
            return Err(Error::ArchitectureFormat(String::from(
                "block topology needs at least one positive width",
            )));
        }
        let p1 = topology[0];
        let histograms = (0..=p1)
            .map(|p0| {
                let mut v = Histogram::unit(p0);
                for &w in topology {
                    v = phi_apply(family, w, &v);
                }
                v
            })
            .collect();
        Ok(SubnetGammaFamily {
            name: format!("{}-composed", family.name()),
            topology: topology.to_vec(),
            histograms,
            status: match family.status() {
                GammaStatus::Proven => SubnetStatus::Proven,
                GammaStatus::Conjectured => SubnetStatus::Conjectured,
            },
        })
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn topology(&self) -> &[usize] {
        &self.topology
    }

    pub fn status(&self) -> SubnetStatus {
        self.status
    }

    pub fn first_width(&self) -> usize {
        self.topology[0]
    }

    /// The block histogram at input dimension `p0`, folded to the first
    /// width.
    pub fn histogram(&self, p0: usize) -> &Histogram {
        &self.histograms[p0.min(self.first_width())]
    }
}

/// Pushes `v` through a block.
pub fn subnet_phi_apply(block: &SubnetGammaFamily, v: &Histogram) -> Histogram {
    let p1 = block.first_width();
    let mut acc = Histogram::zero();
    for (i, c) in v.entries().iter().enumerate() {
        if c.is_zero() {
            continue;
        }
        let q = i.min(p1);
        acc = &acc + &block.histogram(q).clip(q).scale(c);
    }
    acc
}

/// Cut positions `0 = c_0 < c_1 < ... < c_m` splitting a depth-`c_m`
/// network into blocks of consecutive layers.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SubnetworkPartition {
    cuts: Vec<usize>,
}

impl SubnetworkPartition {
    pub fn new(cuts: Vec<usize>) -> Result<Self, Error> {
        if cuts.first() != Some(&0) || cuts.len() < 2 {
            return Err(Error::PartitionShape(String::from(
                "cuts must start at 0 and contain at least one block",
            )));
        }
        if !cuts.windows(2).all(|w| w[0] < w[1]) {
            return Err(Error::PartitionShape(String::from(
                "cuts must be strictly increasing",
            )));
        }
        Ok(SubnetworkPartition { cuts })
    }

    /// One block per layer.
    pub fn singletons(depth: usize) -> Self {
        SubnetworkPartition { cuts: (0..=depth).collect() }
    }

    pub fn depth(&self) -> usize {
        *self.cuts.last().unwrap()
    }

    pub fn block_count(&self) -> usize {
        self.cuts.len() - 1
    }

    /// Half-open layer ranges, one per block.
    pub fn blocks(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.cuts.windows(2).map(|w| (w[0], w[1]))
    }
}

/// Composes block families along a partitioned architecture. Rejects
/// blocks whose widths do not match the architecture and, unless
/// `allow_unsound` is set, any family that is only an empirical lower
/// bound. Runs both push-forward phrasings and asserts agreement.
pub fn subnet_compose_bound(
    blocks: &[SubnetGammaFamily],
    partition: &SubnetworkPartition,
    arch: &Architecture,
    allow_unsound: bool,
) -> Result<ComposeOutcome, Error> {
    if partition.depth() != arch.depth() {
        return Err(Error::PartitionShape(format!(
            "partition covers {} layers, architecture has {}",
            partition.depth(),
            arch.depth()
        )));
    }
    if blocks.len() != partition.block_count() {
        return Err(Error::PartitionShape(format!(
            "{} blocks for {} cuts",
            blocks.len(),
            partition.block_count()
        )));
    }
    for (b, ((lo, hi), block)) in partition.blocks().zip(blocks).enumerate() {
        if block.topology() != &arch.widths[lo..hi] {
            return Err(Error::TopologyMismatch { block: b });
        }
        if block.status() == SubnetStatus::EmpiricalLowerBound && !allow_unsound {
            return Err(Error::UnsoundSubnetFamily { name: String::from(block.name()) });
        }
    }

    let mut hist = Histogram::unit(arch.input_dim);
    let mut vec_state = hist.entries().to_vec();
    let mut per_layer = Vec::with_capacity(blocks.len());
    for block in blocks {
        hist = subnet_phi_apply(block, &hist);
        let w = block.first_width();
        let matrix = BoundMatrix::from_histograms(&block.histograms);
        vec_state = matrix.apply(&clip_vector(&vec_state, w));
        assert_eq!(
            hist,
            Histogram::from_entries(vec_state.clone()),
            "matrix and histogram push-forward disagree at block '{}'",
            block.name()
        );
        per_layer.push(hist.clone());
    }
    Ok(ComposeOutcome { bound: hist.l1_norm(), per_layer })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gamma::GammaFamily;
    use crate::hist;

    fn arch(s: &str) -> Architecture {
        s.parse().unwrap()
    }

    #[test]
    fn architecture_parsing() {
        let a = arch("3x6x6");
        assert_eq!(a.input_dim, 3);
        assert_eq!(a.widths, vec![6, 6]);
        assert_eq!(a.to_string(), "3x6x6");
        assert_eq!(a.constant_width(), Some(6));
        assert_eq!(arch("1x2x3").constant_width(), None);
        assert!("6".parse::<Architecture>().is_err());
        assert!("0x3".parse::<Architecture>().is_err());
        assert!("3x".parse::<Architecture>().is_err());
        assert!("axb".parse::<Architecture>().is_err());
    }

    #[test]
    fn cell_counts() {
        assert_eq!(schlaefli_count(2, 3), BigUint::from(7u32));
        assert_eq!(schlaefli_count(1, 6), BigUint::from(7u32));
        assert_eq!(schlaefli_count(3, 6), BigUint::from(42u32));
        assert_eq!(schlaefli_count(0, 5), BigUint::from(1u32));
        assert_eq!(schlaefli_count(7, 4), BigUint::from(16u32));
    }

    #[test]
    fn push_forward_clips_and_scales() {
        let v = hist![0, 0, 0, 1];
        let pushed = phi_apply(&GammaFamily::Star, 6, &v);
        assert_eq!(pushed, hist![0, 0, 4, 38]);
        let again = phi_apply(&GammaFamily::Star, 6, &pushed);
        assert_eq!(again, hist![0, 0, 240, 1444]);
    }

    #[test]
    fn reference_bounds_on_a_two_layer_net() {
        let a = arch("3x6x6");
        assert_eq!(compose_bound(&GammaFamily::Hat, &a).bound, BigUint::from(4096u32));
        assert_eq!(compose_bound(&GammaFamily::Tilde, &a).bound, BigUint::from(1764u32));
        assert_eq!(compose_bound(&GammaFamily::Bar, &a).bound, BigUint::from(1764u32));
        assert_eq!(compose_bound(&GammaFamily::Star, &a).bound, BigUint::from(1684u32));
        assert_eq!(
            compose_bound(&GammaFamily::StarConjecture, &a).bound,
            BigUint::from(1624u32)
        );
    }

    #[test]
    fn single_layer_bounds_match_cell_counts() {
        // exact whenever the single-input seed applies
        let one_by_five = arch("1x5");
        for family in [GammaFamily::Tilde, GammaFamily::Bar, GammaFamily::Star] {
            assert_eq!(compose_bound(&family, &one_by_five).bound, BigUint::from(6u32));
        }
        assert_eq!(compose_bound(&GammaFamily::Hat, &one_by_five).bound, BigUint::from(32u32));
        // and on the wide-input diagonal
        let wide = arch("7x4");
        assert_eq!(compose_bound(&GammaFamily::Star, &wide).bound, BigUint::from(16u32));
        assert_eq!(
            compose_bound(&GammaFamily::Star, &arch("2x3")).bound,
            schlaefli_count(2, 3)
        );
    }

    #[test]
    fn per_layer_histograms_are_reported() {
        let out = compose_bound(&GammaFamily::Star, &arch("3x6x6"));
        assert_eq!(out.per_layer, vec![hist![0, 0, 4, 38], hist![0, 0, 240, 1444]]);
        assert_eq!(out.bound, BigUint::from(1684u32));
    }

    #[test]
    fn matrices_are_upper_triangular_with_mass_preserving_columns() {
        for family in GammaFamily::ALL {
            let m = BoundMatrix::build(&family, 5);
            assert!(m.is_upper_triangular(), "{family}");
            for j in 0..=5 {
                assert_eq!(m.column_norm(j), family.histogram(j, 5).l1_norm(), "{family} col {j}");
            }
        }
    }

    #[test]
    fn small_matrix_spot_check() {
        let m = BoundMatrix::build(&GammaFamily::Bar, 3);
        let expect = [
            [1u32, 0, 0, 1],
            [0, 4, 3, 3],
            [0, 0, 4, 3],
            [0, 0, 0, 1],
        ];
        for (i, row) in expect.iter().enumerate() {
            for (j, e) in row.iter().enumerate() {
                assert_eq!(m.cell(i, j), &BigUint::from(*e), "({i}, {j})");
            }
        }
        assert_eq!(m.diagonal(), vec![1u32.into(), 4u32.into(), 4u32.into(), 1u32.into()]);
    }

    #[test]
    fn growth_rates_at_width_six() {
        assert_eq!(growth_rate(&GammaFamily::Bar, 3, 6).unwrap(), BigUint::from(42u32));
        assert_eq!(growth_rate(&GammaFamily::Star, 3, 6).unwrap(), BigUint::from(38u32));
        assert_eq!(
            growth_rate(&GammaFamily::StarConjecture, 3, 6).unwrap(),
            BigUint::from(35u32)
        );
        assert_eq!(
            growth_rate(&GammaFamily::Bar, 7, 6),
            Err(Error::GrowthRateDomain { n0: 7, n: 6 })
        );
    }

    #[test]
    fn singleton_partition_reproduces_the_layer_bound() {
        let a = arch("2x4x3x5");
        let blocks: Vec<_> = a
            .widths
            .iter()
            .map(|&w| SubnetGammaFamily::from_layer_family(&GammaFamily::Star, w))
            .collect();
        let partition = SubnetworkPartition::singletons(a.depth());
        let got = subnet_compose_bound(&blocks, &partition, &a, false).unwrap();
        let want = compose_bound(&GammaFamily::Star, &a);
        assert_eq!(got.bound, want.bound);
        assert_eq!(got.per_layer, want.per_layer);
    }

    #[test]
    fn composed_blocks_reproduce_the_layer_bound() {
        let a = arch("3x6x6x6x6");
        let block = SubnetGammaFamily::from_layer_composition(&GammaFamily::Bar, &[6, 6]).unwrap();
        let partition = SubnetworkPartition::new(vec![0, 2, 4]).unwrap();
        let got = subnet_compose_bound(&[block.clone(), block], &partition, &a, false).unwrap();
        let want = compose_bound(&GammaFamily::Bar, &a);
        assert_eq!(got.bound, want.bound);
    }

    #[test]
    fn empirical_blocks_are_rejected_without_opt_in() {
        let a = arch("1x2");
        let block = SubnetGammaFamily::new(
            String::from("sampled"),
            vec![2],
            vec![hist![1], hist![0, 2, 1], hist![1, 2, 1]],
            SubnetStatus::EmpiricalLowerBound,
        )
        .unwrap();
        let partition = SubnetworkPartition::singletons(1);
        let err = subnet_compose_bound(
            core::slice::from_ref(&block),
            &partition,
            &a,
            false,
        )
        .unwrap_err();
        assert_eq!(err, Error::UnsoundSubnetFamily { name: String::from("sampled") });
        let ok = subnet_compose_bound(&[block], &partition, &a, true).unwrap();
        assert_eq!(ok.bound, BigUint::from(3u32));
    }

    #[test]
    fn partition_and_topology_shapes_are_validated() {
        assert!(SubnetworkPartition::new(vec![0]).is_err());
        assert!(SubnetworkPartition::new(vec![1, 2]).is_err());
        assert!(SubnetworkPartition::new(vec![0, 2, 2]).is_err());
        let a = arch("2x3x3");
        let wrong_width = SubnetGammaFamily::from_layer_family(&GammaFamily::Star, 4);
        let err = subnet_compose_bound(
            &[wrong_width.clone(), wrong_width],
            &SubnetworkPartition::singletons(2),
            &a,
            false,
        )
        .unwrap_err();
        assert_eq!(err, Error::TopologyMismatch { block: 0 });
        let depth_err = subnet_compose_bound(
            &[SubnetGammaFamily::from_layer_family(&GammaFamily::Star, 3)],
            &SubnetworkPartition::singletons(1),
            &a,
            false,
        )
        .unwrap_err();
        assert!(matches!(depth_err, Error::PartitionShape(_)));
    }
}
