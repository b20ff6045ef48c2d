//! Numerical laboratory for two-dimensional area-preserving maps with a
//! quadratic homoclinic tangency to a neutral saddle.
//!
//! The crate builds exact model maps (a saddle in Birkhoff-Moser product
//! form plus an exactly area-preserving global map), computes first-return
//! maps and their elliptic/parabolic bifurcations, rescales return maps to
//! conservative Henon form, classifies tangencies and strip/horseshoe
//! intersections, and verifies symbolic-dynamics admissibility against
//! orbit shooting.
//!
//! Entry points by topic:
//! - [`jets`]: truncated power-series algebra and saddle normal-form reduction
//! - [`saddle`], [`globalmap`]: the model maps `T0`, `T1` and their JSON schema
//! - [`retmap`]: first-return maps `T_k`, periodic points, multipliers
//! - [`henon`]: closed-form analysis of the limit conservative Henon maps
//! - [`rescale`]: the rescaling conjugacy and the mu <-> M parameter dictionary
//! - [`semilocal`]: invariants tau/alpha/s0, tangency classes, strips,
//!   horseshoes, symbolic codes
//! - [`bif`]: cascades of elliptic intervals, two-parameter bifurcation
//!   curves, invariance checks
//! - [`cli`]: the `apm` command-line frontend

pub mod bif;
pub mod cli;
pub mod error;
pub mod geom;
pub mod globalmap;
pub mod henon;
pub mod jets;
pub mod models;
pub mod rescale;
pub mod retmap;
pub mod saddle;
pub mod semilocal;
mod sweep;

pub use error::{Error, Result};
pub use geom::{Box2, Mat2, Point};
pub use globalmap::ModelMap;
