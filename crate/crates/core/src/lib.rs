//! Exact construction and verification of Heun polynomials for the
//! hyperbolic Pöschl–Teller problem, their ladder operators, SUSY partner
//! potentials, and an independent floating-point cross-check layer.

pub mod acceptance;
pub mod error;
pub mod heun;
pub mod lambe_ward;
pub mod poly;
pub mod numeric;
pub mod spectral;
pub mod susy;
pub mod rational;

pub use error::{HeunError, Result};
pub use poly::ExactPoly;
pub use rational::ExactRational;
