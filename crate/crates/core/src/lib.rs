//! Numerical laboratory for δ-shock solutions of a nonconservative 2×2
//! elastodynamics system, built on the method of weak asymptotics.

pub mod ansatz;
pub mod dynamics;
pub mod error;
pub mod kernels;
pub mod pairing;
pub mod quadrature;
pub mod riemann;
pub mod verifier;

pub use error::{Error, Result};
