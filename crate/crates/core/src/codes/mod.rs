//! Permutation codes built from group representations.
//!
//! Points of a domain of size `q` are indexed `0..q` in memory; the codeword
//! file format and any user-facing rendering use 1-based letters.

mod code;
mod distance;
mod domain;
pub mod file;
mod perm;
mod repr;
mod strategy;

pub use code::{build_code, build_twisted_code, Code, Codeword, TwistedSpec};
pub use distance::{
    check_code_size, check_distance_invariance, check_distance_invariance_at,
    distance_distribution, hamming_distance, joint_kernel_size, min_distance_by_support,
    min_distance_pairwise, repetition_lower_bound, support_sums,
};
pub use domain::IndexedDomain;
pub use perm::Permutation;
pub use repr::Representation;
pub use strategy::{BlockClosure, DistanceRegistry, DistanceStrategy, Pairwise};

/// A point index or alphabet letter (0-based).
pub type Symbol = u16;
