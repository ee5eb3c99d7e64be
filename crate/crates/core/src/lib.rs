//! Quivers, their representations and projective presentations, generic
//! decompositions, and the cluster complex of a Dynkin quiver.

pub mod bareiss;
pub mod cluster;
pub mod decomposition;
pub mod error;
pub mod field;
pub mod matrix;
pub mod quiver;
pub mod presentation;
pub mod rep;

pub use cluster::{RootVertex, TiltingComplex};
pub use decomposition::{GenericDecomposition, HalfSpaceSystem};
pub use error::{Error, Result};
pub use field::{Field, FieldSpec, Fp};
pub use num_traits::{One, Zero};
pub use matrix::{Matrix, Subspace};
pub use quiver::{DimVector, EulerData, IntMatrix, Path, Quiver};
pub use presentation::{CanonicalDecomp, Presentation, ProjDecomp};
pub use rep::{HomSpace, Representation};

/// Prime field with the default modulus.
pub type Fp32003 = Fp<32003>;
/// Exact rationals.
pub type Rational = num_rational::BigRational;
