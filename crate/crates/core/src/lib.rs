//! Exact discriminants of projective hypersurfaces over discrete valuation
//! rings, singular loci of special fibers over finite fields, and the local
//! analysis tying the valuation of the discriminant to those singularities.
//!
//! All arithmetic is exact. Algorithms are written once against the
//! [`rings::Ring`] family of traits; the aliases below name the concrete
//! instantiations used in practice.

pub mod constructions;
pub mod discriminant;
pub mod error;
pub mod groebner;
pub mod linalg;
pub mod localanalysis;
pub mod mpoly;
pub mod rings;
pub mod specialfiber;

pub use error::{Error, Result};
pub use rings::{
    build_extension_field, DvrDescriptor, GaloisField, PLocal, PrimeField, Scalars, TLocal,
    Valuation,
};

/// ℤ.
pub type Integers = Scalars<num_bigint::BigInt>;
/// ℚ.
pub type Rationals = Scalars<num_rational::BigRational>;
