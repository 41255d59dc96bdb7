//! Linear contextual bandits with exact and approximate Bayesian inference.
//!
//! LinTS and LinBUCB are provided over an exact Gaussian posterior and over a
//! diagonal approximation of the design matrix, together with α-divergence
//! tools for measuring and bounding the effect of inference error.

// `!(x > 0.0)` is used on purpose so that NaN inputs are rejected too.
#![allow(clippy::neg_cmp_op_on_partial_ord)]
// Index loops read closer to the matrix formulas than iterator chains.
#![allow(clippy::needless_range_loop)]

pub mod adversarial;
pub mod algorithms;
pub mod dense;
pub mod divergence;
pub mod environments;
pub mod error;
pub mod harness;
pub mod linalg;
pub mod posterior;
pub mod quadrature;
pub mod rng;
pub mod special;

pub use error::{Error, Result};
