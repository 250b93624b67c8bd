//! Exact computations with pseudo-Kähler structures on almost abelian Lie
//! algebras: the seven normal-form families, their curvature, Jordan-type
//! existence criteria and Einstein extensions.
//!
//! Everything runs over `ℚ` and `ℚ(i)`; see the guide in `book/` for a tour.

pub mod blocks;
pub mod catalog;
pub mod curvature;
pub mod einstein;
pub mod error;
pub mod family;
pub mod jordan;
pub mod lie;
pub mod matrix;
pub mod named;
pub mod pk;
pub mod scalar;
pub mod spectrum;
pub mod sweep;

pub use error::{Error, ParseError, Result};
pub use matrix::{CMatrix, Matrix};
pub use scalar::{Field, GaussScalar, Scalar};

#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../book/src/introduction.md")]
    mod introduction {}
    #[doc = include_str!("../../../book/src/exact-arithmetic.md")]
    mod exact_arithmetic {}
    #[doc = include_str!("../../../book/src/almost-abelian.md")]
    mod almost_abelian {}
    #[doc = include_str!("../../../book/src/blocks.md")]
    mod blocks {}
    #[doc = include_str!("../../../book/src/families.md")]
    mod families {}
    #[doc = include_str!("../../../book/src/curvature.md")]
    mod curvature {}
    #[doc = include_str!("../../../book/src/jordan-types.md")]
    mod jordan_types {}
    #[doc = include_str!("../../../book/src/einstein.md")]
    mod einstein {}
    #[doc = include_str!("../../../book/src/catalog.md")]
    mod catalog {}
}
