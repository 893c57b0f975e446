//! Capacities, mixed derivatives and Van der Waerden / Newton-type
//! inequalities for polynomials with nonnegative coefficients.
//!
//! The crate is organised by concern:
//!
//! - [`poly`]: exact sparse polynomials, derivatives, variable splitting.
//! - [`capacity`]: `C_f(R)` and `Cap(f)` by convex minimization in the log domain.
//! - [`geometry`]: Newton polytopes, D-convexity, subset degrees.
//! - [`concavity`]: log-concave sequences, Newton-type checks, strong log-concavity.
//! - [`sequences`]: weighted shift flows and propagatable weights.
//! - [`inequalities`]: bound verifiers producing [`inequalities::BoundReport`]s.
//! - [`permanent`]: permanents, row-product polynomials, Sinkhorn scaling.

pub mod capacity;
pub mod concavity;
pub mod error;
pub mod exp_linear;
pub mod geometry;
pub mod inequalities;
pub mod numeric;
pub mod permanent;
pub mod poly;
pub mod rng;
pub mod sequences;

pub use error::{Error, Result};
pub use numeric::Rational;
pub use poly::{MultiIndex, SparsePoly};
