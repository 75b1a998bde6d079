//! Hardy and Bergman numbers of planar domains.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod error;
pub mod function_norms;
pub mod geometry;
pub mod hardy_estimator;
pub mod identities;
pub mod membership;
pub mod oracles;
pub mod quadrature;
pub mod rng;
pub mod wos;

pub use error::{Error, Result};

#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../book/src/introduction.md")]
    mod introduction {}
    #[doc = include_str!("../../../book/src/domains.md")]
    mod domains {}
    #[doc = include_str!("../../../book/src/harmonic_measure.md")]
    mod harmonic_measure {}
    #[doc = include_str!("../../../book/src/hardy_number.md")]
    mod hardy_number {}
    #[doc = include_str!("../../../book/src/membership.md")]
    mod membership {}
    #[doc = include_str!("../../../book/src/function_norms.md")]
    mod function_norms {}
    #[doc = include_str!("../../../book/src/identities.md")]
    mod identities {}
    #[doc = include_str!("../../../book/src/cli.md")]
    mod cli {}
}
