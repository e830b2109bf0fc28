//! Numerical toolkit for twisted first moments of modular L-functions:
//! Dirichlet characters, exact exponential sums, special functions, twisted
//! Hurwitz-type zeta values and a Petersson-formula moment engine.

pub mod arith;
pub mod characters;
pub mod error;
pub mod exp_sums;
pub mod moment;
pub mod special;
pub mod twisted_zeta;
pub mod verify;
pub mod sum;

pub use error::{Error, Result};
