//! Geometric medians under norms induced by symmetric convex bodies.
//!
//! The crate evaluates and minimizes the weighted Fermat–Weber objective
//! `F(ξ) = Σ W(p)·‖ξ − p‖_K` for bodies `K` in two and three dimensions,
//! decides whether a median can be found in the convex hull of the data,
//! searches for certified counterexamples when it cannot, and provides two
//! numerical ellipsoid detectors.
//!
//! Module map:
//! - [`body`]: gauges, support functions, subdifferentials, sections, linear images.
//! - [`geometry`]: nearest points of small hulls, separators, affine spans.
//! - [`median`]: the objective, its solvers, certified lower bounds, Weiszfeld.
//! - [`intuition`]: hull checks, witness search, the planar weight constructor.
//! - [`ellipsoid`]: parallelogram defect and shadow-boundary rank tests.
//! - [`cli`] and [`suite`]: the command-line front end and its batteries.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod body;
pub mod cli;
pub mod config;
pub mod ellipsoid;
pub mod error;
pub mod geometry;
pub mod intuition;
pub(crate) mod linalg;
pub mod median;
pub mod oracle;
pub mod suite;

pub use body::{Body, BodySpec, NormBounds, SectionFrame, SubgradientKind, SubgradientSet};
pub use config::Tolerances;
pub use error::{Error, Result};
