//! Consensus dynamics on layered leader/member networks.
//!
//! The crate builds the row-stochastic coupling matrix of a hierarchy in
//! which every unit is a clique of `M` members plus one leader, leaders
//! report to a member of the layer above, and members delegate to the
//! leaders of the layer below. On top of that structure it provides:
//!
//! - continuous-time diffusive dynamics with optional constant inputs
//!   ([`dynamics`]),
//! - numeric spectra and convergence rates for any depth ([`spectral`]),
//! - closed-form spectra, the stationary weight vector, and rate formulas
//!   for two-layer networks ([`closedform`]),
//! - parameter-grid sweeps over the coupling weights ([`sweep`]).
//!
//! The crate is `no_std`-compatible (requires `alloc`); enable the `libm`
//! feature instead of `std` on targets without a float runtime.

#![cfg_attr(not(feature = "std"), no_std)]
#![deny(unsafe_code)]

#[cfg(not(any(feature = "std", feature = "libm")))]
compile_error!("hiercon-core needs either the `std` or the `libm` feature");

extern crate alloc;

pub mod closedform;
pub mod dynamics;
mod error;
pub mod hierarchy;
mod qr;
mod scalar;
pub mod spectral;
pub mod sweep;

pub use error::Error;

/// Crate-wide result alias.
pub type Result<T> = core::result::Result<T, Error>;
