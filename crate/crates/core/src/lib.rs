//! Exact computations in Lipschitz function spaces over finite pointed
//! metric spaces.
//!
//! The crate models a finite pointed metric space `M`, the Banach space
//! `Lip_0(M)` of Lipschitz functions vanishing at the base point, and its
//! predual, the Lipschitz-free space `F(M)`. On top of those it provides
//!
//! * validation and generation of metric spaces, including the example
//!   families used throughout the trapezoid-property literature
//!   ([`metric`]);
//! * a dense two-phase simplex solver with exact-rational and floating
//!   modes and primal/dual certificates ([`linprog`]);
//! * Lipschitz norms, the de Leeuw transform, and McShane-type extension
//!   operators ([`lipspace`]);
//! * Kantorovich–Rubinstein norms of free-space vectors by primal and dual
//!   linear programs, plus minimal total-variation representations on the
//!   off-diagonal pair set ([`freespace`]);
//! * trapezoid-property inequality checks and the explicit witness-function
//!   builders behind the diameter-two sufficient conditions ([`properties`]);
//! * diameters of slices of the `Lip_0(M)` unit ball and related
//!   symmetric-witness optima ([`geometry`]).
//!
//! The core is `no_std` + `alloc`; all file formats and the CLI live in the
//! companion crate.

#![cfg_attr(not(test), no_std)]
#![forbid(unsafe_code)]

extern crate alloc;

pub mod freespace;
pub mod geometry;
pub mod linprog;
pub mod lipspace;
pub mod metric;
pub mod properties;
pub mod rational;

/// Exact scalar used throughout the crate: arbitrary-precision rational.
pub type Q = num_rational::BigRational;

pub use metric::{FiniteMetricSpace, PointSubset};
