//! Finite enriched categories over a pluggable cosmos.

pub mod examples;
pub mod functor;
pub mod ordinary;
pub mod vcategory;

pub use functor::{VFunctor, VNatTransformation};
pub use ordinary::{Arrow, FiniteCategory};
pub use vcategory::{middle_four, AxiomReport, DiagramFailure, Underlying, VCategory, DEFAULT_ENUMERATION_DIM};
