//! Error type shared by all modules of the crate.

use alloc::string::String;
use core::fmt;

/// Everything that can go wrong short of a logic bug. Domain violations
/// are reported eagerly so callers can map them to exit codes; internal
/// consistency failures (the two composition paths disagreeing, say)
/// panic instead, because they indicate a defect rather than bad input.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Error {
    /// A histogram generator was asked for `p0 > p1`; callers are
    /// expected to fold the input dimension down to the layer width
    /// before calling.
    RankAboveWidth { p0: usize, p1: usize },
    /// A histogram generator was asked below its smallest defined input
    /// dimension.
    RankBelowDomain { p0: usize, min: usize },
    /// The maximal layer histogram has no known closed form at this
    /// index pair.
    TauNotClosed { p0: usize, p1: usize },
    /// The conjectured two-dimensional histogram is only defined for
    /// widths of at least two.
    ConjectureWidth { p1: usize },
    /// The shift-and-weight operator needs `delta_j >= delta_i`.
    OperatorOrder { delta_i: usize, delta_j: usize },
    /// Growth rates are only defined when the input dimension does not
    /// exceed the constant layer width.
    GrowthRateDomain { n0: usize, n: usize },
    /// An architecture string or value was malformed.
    ArchitectureFormat(String),
    /// An enumeration would exceed the configured size cap.
    EnumerationCap { size: usize, cap: usize },
    /// A sign vector entry was neither `+1` nor `-1`.
    SignValue { index: usize },
    /// A line with zero normal vector cannot bound a half-plane.
    DegenerateLine { index: usize },
    /// A deterministic geometric construction failed to reach general
    /// position within its retry budget.
    ConstructionFailed(&'static str),
    /// The circle-tangent construction is only built for small widths.
    HotCenterWidth { p1: usize },
    /// The one-dimensional region oracle needs a net with a scalar input.
    InputDimension { expected: usize, found: usize },
    /// A network layer has inconsistent weight or bias shapes.
    LayerShape { layer: usize },
    /// Piecewise-linear propagation exceeded the breakpoint budget.
    BreakpointBudget { limit: usize },
    /// A subnetwork partition is not a strictly increasing cut sequence
    /// starting at zero, or does not match the architecture depth.
    PartitionShape(String),
    /// A subnetwork family's layer widths do not match its block.
    TopologyMismatch { block: usize },
    /// A family whose histograms are only empirical lower bounds was
    /// used where a certified upper bound is required.
    UnsoundSubnetFamily { name: String },
    /// Empirical sampling does not cover this input dimension or depth.
    SubnetSampling(String),
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::RankAboveWidth { p0, p1 } => {
                write!(f, "input dimension {p0} exceeds layer width {p1}; fold with min first")
            }
            Error::RankBelowDomain { p0, min } => {
                write!(f, "input dimension {p0} is below the smallest defined value {min}")
            }
            Error::TauNotClosed { p0, p1 } => {
                write!(f, "no closed form for the maximal histogram at ({p0}, {p1})")
            }
            Error::ConjectureWidth { p1 } => {
                write!(f, "conjectured two-dimensional histogram needs width >= 2, got {p1}")
            }
            Error::OperatorOrder { delta_i, delta_j } => {
                write!(f, "operator needs delta_j >= delta_i, got ({delta_i}, {delta_j})")
            }
            Error::GrowthRateDomain { n0, n } => {
                write!(f, "growth rate needs input dimension {n0} <= width {n}")
            }
            Error::ArchitectureFormat(msg) => write!(f, "bad architecture: {msg}"),
            Error::EnumerationCap { size, cap } => {
                write!(f, "enumeration size {size} exceeds cap {cap}")
            }
            Error::SignValue { index } => {
                write!(f, "sign vector entry {index} must be +1 or -1")
            }
            Error::DegenerateLine { index } => {
                write!(f, "line {index} has zero normal vector")
            }
            Error::ConstructionFailed(what) => {
                write!(f, "construction failed to reach general position: {what}")
            }
            Error::HotCenterWidth { p1 } => {
                write!(f, "circle-tangent construction supports 2..=8 lines, got {p1}")
            }
            Error::InputDimension { expected, found } => {
                write!(f, "net input dimension must be {expected}, got {found}")
            }
            Error::LayerShape { layer } => {
                write!(f, "layer {layer} has inconsistent weight or bias shapes")
            }
            Error::BreakpointBudget { limit } => {
                write!(f, "breakpoint budget of {limit} exceeded")
            }
            Error::PartitionShape(msg) => write!(f, "bad subnetwork partition: {msg}"),
            Error::TopologyMismatch { block } => {
                write!(f, "subnetwork family widths do not match block {block}")
            }
            Error::UnsoundSubnetFamily { name } => {
                write!(f, "family '{name}' is an empirical lower bound, not a certified upper bound")
            }
            Error::SubnetSampling(msg) => write!(f, "unsupported empirical sampling: {msg}"),
        }
    }
}

impl core::error::Error for Error {}
