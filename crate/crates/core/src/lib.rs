//! Besov-Orlicz and Hölderian multiscale statistics of sampled paths and
//! partial-sum processes, with the simulation engine and numerical checks
//! used to study them.

// `!(x > 0.0)` guards are deliberate: they also reject NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod analysis;
pub mod error;
pub mod montecarlo;
pub mod orlicz;
pub mod processes;
pub mod quadrature;
pub mod statistics;

pub use error::{Error, Result};
pub use orlicz::{
    empirical_orlicz_norm, modulus_eval, young_eval, young_inv, Modulus, WeightedMagnitudes,
    YoungFunction,
};
