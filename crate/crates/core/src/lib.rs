//! Numerical geometry of finite-dimensional order unit spaces and symmetric cones.
//!
//! The crate provides cone models with closed-form gauges, the Euclidean Jordan
//! structure of the symmetric models, Thompson/Funk geometry, gauge-reversing
//! maps with the symmetries and automorphisms they induce, the atom/pure-state
//! duality with its inner product, and Funk / reverse-Funk horofunction
//! boundaries. Every identity is also exposed as a sampled verification check,
//! grouped into suites by [`suite::run_suite`].

pub mod cone;
pub mod duality;
pub mod element;
pub mod error;
pub mod horoboundary;
pub mod jordan;
pub mod linalg;
pub mod metric;
pub mod report;
pub mod reversal;
pub mod suite;
pub mod tolerance;

pub use cone::ConeModel;
pub use element::Element;
pub use error::{Error, Result};
pub use tolerance::Tolerance;
