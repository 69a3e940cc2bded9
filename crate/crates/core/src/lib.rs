//! Cheeger-Gromoll type geometry on the (1,1)-tensor bundle of a Riemannian manifold and on
//! its tensor sphere bundles, with numerical verification suites.
//!
//! The geometric core is generic over the scalar type ([`Real`] for `f32`/`f64`, plus dual
//! numbers for exact derivatives); the aliases below fix `f64`, which every tolerance in the
//! verification suites assumes.

pub mod base_geometry;
pub mod error;
pub mod fields;
pub mod framed_structures;
pub mod koszul;
pub mod linalg;
pub mod report;
pub mod sampling;
pub mod scalar;
pub mod sphere_bundle;
pub mod tensor_bundle;

pub use error::{GeometryError, Result};
pub use scalar::{Dual, Real, Scalar};

pub type Chart64 = base_geometry::Chart<f64>;
pub type BundlePoint64 = tensor_bundle::BundlePoint<f64>;
pub type CGParams64 = tensor_bundle::CGParams<f64>;
pub type AdaptedVector64 = tensor_bundle::AdaptedVector<f64>;
