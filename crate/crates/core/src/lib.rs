//! Deterministic simulation of TCP flows crossing an authenticated tunnel
//! while an on-path adversary duplicates or races packets it cannot read.
//!
//! The crate is organized in layers. [`sim`] provides the event queue, the
//! clock, and store-and-forward links. [`tcp`] models a Reno sender and
//! receiver in segment units. [`tunnel`] adds sequence-numbered
//! encapsulation and the anti-replay window. [`adversary`] implements the
//! budgeted injection strategies, and [`rttp`] the gateway-side defense.
//! [`analytics`] holds the closed-form predictions the simulations are
//! checked against. [`scenario`], [`world`], [`metrics`], and [`trace`]
//! wire everything into runnable experiments with reproducible outputs.
//!
//! All simulation state advances in whole microseconds and every collection
//! iterates in a deterministic order, so a scenario and a seed fully
//! determine every byte of output.

pub mod adversary;
pub mod analytics;
pub mod metrics;
pub mod rttp;
pub mod scenario;
pub mod sim;
pub mod tcp;
pub mod trace;
pub mod tunnel;
pub mod world;

/// Concrete scalar used by the prediction helpers unless a caller opts into
/// another float width.
pub type Real = f64;
