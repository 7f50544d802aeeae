//! Twisted permutation codes built from finite groups.
//!
//! A group `T` with permutation representations `rho_1, ..., rho_r` of a
//! common degree `q` yields the code of length `r q` whose codeword for `t`
//! concatenates the image lists of `rho_1(t), ..., rho_r(t)`.

pub mod affine;
pub mod codes;
pub mod error;
pub mod family;
pub mod fields;
pub mod group;
pub mod linalg;
pub mod report;
pub mod symplectic;

pub use error::{Error, Result};
pub use report::{CheckLevel, CheckResult, VerificationReport};
