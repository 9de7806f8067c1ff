//! Evolutionary dynamics of a two-stage optional Prisoner's Dilemma with
//! pre-game commitment.
//!
//! The analytic pipeline builds the pairwise payoff matrix, turns it into
//! pairwise fixation probabilities under a Moran process with Fermi updating,
//! solves the small-mutation-limit strategy-switch chain for its stationary
//! distribution, and reduces that to population metrics. A seedable
//! simulator of the same Moran process cross-validates the analytic path.
//!
//! The crate is `no_std`-compatible (with `alloc`); disable the default `std`
//! feature and enable `libm` to build without the standard library.

#![cfg_attr(not(feature = "std"), no_std)]
#![deny(unsafe_code)]

#[cfg(not(any(feature = "std", feature = "libm")))]
compile_error!("opdc-core needs a float math source: enable feature \"std\" or \"libm\"");

extern crate alloc;

pub mod strategy;
pub mod payoff;
pub mod dynamics;
pub mod stationary;
pub mod metrics;
pub mod sim;
pub mod sweep;

mod fmath;
