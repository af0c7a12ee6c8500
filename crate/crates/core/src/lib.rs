//! Exact symbolic engine for differential calculi on finitely presented
//! algebras whose first-order structure is determined by automorphisms or
//! twisted inner derivations.

// dense matrix code reads better with explicit indices
#![allow(clippy::needless_range_loop)]

pub mod algebra;
pub mod calculus;
pub mod error;
pub mod expr;
pub mod files;
pub mod geometry;
pub mod linalg;
pub mod par;
pub mod poly;
pub mod presets;
pub mod properties;
pub mod report;
pub mod scalar;

pub use algebra::{AlgebraMorphism, NCPoly, Presentation, PresentationBuilder};
pub use error::{Error, Result};
pub use poly::{Poly, Var};
pub use scalar::Scalar;
