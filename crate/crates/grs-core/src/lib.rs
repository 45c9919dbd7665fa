//! Exact-arithmetic toolkit for generalized Reed-Solomon codes over finite
//! fields: field and polynomial algebra, encoders, certified error-distance
//! engines, deep-hole construction and verification, and exhaustive censuses
//! of the word space at desk scale.

pub mod census;
pub mod code;
pub mod deephole;
pub mod distance;
pub mod error;
pub mod gf;
pub mod poly;

pub use error::{Error, Result};
pub use gf::{Element, FiniteField};
pub use poly::{Degree, Polynomial};
