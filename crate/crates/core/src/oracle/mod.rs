//! Brute-force ground truth: small cases computed exactly and
//! independently of the bound machinery, for the test batteries to
//! compare against.
//!
//! Everything here works over integers and rationals; no floating
//! point is involved anywhere.

mod line;
mod net;
mod plane;
mod sample;

pub use line::{histogram_of_sigma, oracle_tau1};
pub use net::{count_regions_1d_net, NetLayer, NetRegions, RationalNet};
pub use plane::{
    activation_histogram_2d, enumerate_cells_2d, histogram_under_flip, hot_center_arrangement,
    Cell, LineEq, OrientedArrangement2D,
};
pub use sample::{
    balanced_single_layer_net, empirical_subnet_histogram, rng_for, sample_arrangement,
    sample_rational_net, search_tau2, Tau2Counterexample, Tau2Search,
};
