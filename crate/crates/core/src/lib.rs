//! Compressible Euler numerics built around HLL fluxes with anti-diffusion.
//!
//! The crate is organised bottom-up:
//!
//! * [`state`] and [`average`]: gas model, conserved/primitive/face-frame
//!   states, physical flux and interface averages.
//! * [`flux`]: HLL-family interface fluxes (HLLE, HLLEM, HLLEC, HLLES,
//!   HLLE+, HLL-CPS) and the pressure-sensor based all-Mach variants.
//! * [`mesh`], [`field`], [`boundary`], [`reconstruct`], [`solver`]: a
//!   structured-grid finite-volume engine with explicit time stepping.
//! * [`analysis`]: matrix stability analysis, linear perturbation
//!   experiment, exact Riemann solver and other diagnostics.
//! * [`cases`]: canonical flow problems and case-specific diagnostics.
//!
//! The crate is `no_std` compatible (with `alloc`) when built without the
//! default `std` feature.

#![cfg_attr(not(feature = "std"), no_std)]
// `!(x > 0.0)` style checks are deliberate: they also reject NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

extern crate alloc;

mod math;

pub mod analysis;
pub mod average;
pub mod boundary;
pub mod cases;
pub mod error;
pub mod field;
pub mod flux;
pub mod mesh;
pub mod reconstruct;
pub mod solver;
pub mod state;

pub use error::{CellIndex, Error, Result};
pub use state::{Conserved, FaceState, Flux, Gas, Normal, Primitive};
