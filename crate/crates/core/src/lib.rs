//! Exact upper bounds on the number of affine-linear regions of fully
//! connected ReLU networks.
//!
//! The count of regions a network can carve out of its input space is
//! controlled layer by layer: each layer contributes a histogram that
//! records how many activation patterns of each rank it can realize, and
//! composing those histograms along the network yields a certified upper
//! bound on the region count. This crate provides the histogram
//! semilattice, several per-layer histogram families of varying
//! tightness, the composition engine (in both its histogram and matrix
//! forms, cross-checked on every call), and brute-force oracles over
//! exact rational arithmetic that verify the families against small
//! networks and line arrangements.
//!
//! Everything is computed exactly: histogram entries are arbitrary
//! precision naturals and all geometry runs over arbitrary precision
//! rationals. The crate is `no_std` (with `alloc`); IO, file formats and
//! the command line front end live in the companion `regionbound` crate.

#![cfg_attr(not(test), no_std)]

extern crate alloc;

pub mod bound;
pub mod error;
pub mod gamma;
pub mod histogram;
pub mod oracle;
pub mod verify;

pub use bound::{
    compose_bound, compose_histogram_path, compose_matrix_path, growth_rate, schlaefli_count,
    subnet_compose_bound, Architecture, BoundMatrix, ComposeOutcome, SubnetGammaFamily,
    SubnetStatus, SubnetworkPartition,
};
pub use error::Error;
pub use gamma::{GammaCollection, GammaFamily, GammaStatus};
pub use histogram::Histogram;
