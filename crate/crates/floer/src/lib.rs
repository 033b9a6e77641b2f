//! Floer-theoretic invariants from exact linear algebra.
//!
//! The crate computes, over exact rationals, the U-localized monopole
//! homology of a three-manifold from its triple cup form, the mapping-cone
//! description of the full homology for manifolds of the simplest type,
//! and closed-form spectral data for the flat three-torus and for
//! circle-times-surface products.

pub mod algebra;
pub mod flatdirac;
pub mod floercore;
pub mod linalg;
pub mod productgeom;

/// Exact rational scalar used throughout the homology computations.
pub type Rat = num::BigRational;

/// Exact rational matrix.
pub type RatMatrix = linalg::Matrix<Rat>;
