//! Cardinal social inefficiency over finite vNM contexts.
//!
//! The inefficiency of a lottery `x` in a context is the per-capita welfare
//! gap `max_a V(a) - V(x)`, where `V` averages each individual's utility
//! rescaled so that their range over the Pareto frontier is `[0, 1]`. The crate
//! computes it exactly (rationals) or in floating point, checks its axioms on
//! generated batteries, and applies it to one-sided object allocation.

pub mod allocation;
pub mod axioms;
pub mod cli;
pub mod context;
pub mod error;
pub mod experiments;
pub mod frontier;
pub mod inefficiency;
pub mod io;
pub mod lp;
pub mod scalar;

pub use context::{product_lottery, Context, Lottery};
pub use error::{Error, Result};
pub use scalar::{Exact, Extended, Mode, Scalar};
