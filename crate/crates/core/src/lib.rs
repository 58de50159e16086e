//! Coefficient bounds for bi-univalent function classes defined by
//! subordination.
//!
//! The crate is organised bottom-up:
//!
//! * [`series`]: truncated power series over exact rationals, complex
//!   doubles, or symbolic polynomials.
//! * [`classes`]: Ma-Minda generators, the two differential operators and
//!   the generic coefficient systems they induce.
//! * [`caratheodory`]: the coefficient body of functions with positive real
//!   part, its Toeplitz test and a Herglotz sampler.
//! * [`bounds`]: closed-form coefficient estimates with branch provenance.
//! * [`oracle`]: a multi-start search over admissible systems that checks
//!   the closed forms numerically.

pub mod bounds;
pub mod caratheodory;
pub mod classes;
pub mod error;
pub mod number;
pub mod oracle;
pub mod poly;
pub mod series;

pub use error::{Error, Result};
pub use number::Real;
