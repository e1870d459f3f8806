//! Nielsen and Fubini–Study complexity for the Lipkin–Meshkov–Glick model.
//!
//! The crate is `no_std` (it needs `alloc`). Modules:
//!
//! - [`model`]: couplings, phases, effective frequencies, field profiles.
//! - [`ermakov`]: auxiliary equation, Pinney superposition, near-critical Bessel pair.
//! - [`nielsen`]: Nielsen complexity evaluators, static and time dependent.
//! - [`infogeom`]: quantum metric, charts, curvature, geodesics, finite-spin oracle.
//! - [`fsc`]: Fubini–Study complexity, separatrix scans and the log fit.
#![no_std]
// With std linked for the test harness, inherent float methods shadow the trait.
#![cfg_attr(test, allow(unused_imports))]
// `!(x > 0.0)` is used on purpose: it also rejects NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

extern crate alloc;

pub mod ermakov;
pub mod error;
pub mod fsc;
pub mod infogeom;
pub mod model;
pub mod nielsen;
pub mod ode;
pub mod special;

pub use error::{Error, Result};
