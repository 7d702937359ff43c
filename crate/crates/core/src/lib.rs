//! Best unimodular rational approximants to `sqrt z` and `sign z` on arcs of
//! the unit circle, Zolotarev's real sign approximant, their error theory
//! and composition laws.

// `!(x < y)` is used on purpose so that NaN falls on the rejecting side
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod analysis;
pub mod approximants;
pub mod cli;
pub mod composition;
pub mod connections;
pub mod elliptic;
pub mod error;
pub mod oracle;
pub mod report;
pub mod selftest;

pub use error::{Error, Result};
