//! Exact truncated q-series engine for WP-Bailey pairs.
//!
//! The crate evaluates q-series with exact rational coefficients, tests
//! candidate WP-Bailey pairs against the defining transform, builds new pairs
//! from old ones, and checks the resulting identities coefficient by
//! coefficient.

pub mod dsl;
pub mod expr;
pub mod pairs;
pub mod par;
pub mod qkernel;
pub mod rational;
pub mod report;
pub mod sampling;
pub mod series;
pub mod transforms;
pub mod verify;

pub use expr::{Monomial, ParamBinding, ParamValue, Poly, QExpr, Var};
pub use rational::{Exp, QRational};
pub use series::{QSeries, SeriesError};
