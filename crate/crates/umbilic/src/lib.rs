//! Totally umbilical surfaces in 3-dimensional metric Lie groups.
//!
//! A metric Lie group is encoded either by unimodular structure constants
//! `(c1, c2, c3)` or by the non-unimodular semidirect parameters `(a, b)`;
//! the crate classifies its totally umbilical surfaces, constructs the ones
//! that exist, and verifies every formula against independent numerical
//! oracles.
//!
//! ```
//! use umbilic::algebra::StructureConstants;
//! use umbilic::classify::classify_unimodular;
//!
//! let report = classify_unimodular(&StructureConstants::new(1.0, 0.0, -1.0));
//! assert_eq!(report.group_label, "Sol3");
//! assert_eq!(report.surfaces.len(), 3);
//! ```
//!
//! The [`guide`] modules mirror the chapters of the accompanying book; their
//! code blocks are compiled and run as doc-tests.

pub mod algebra;
pub mod classify;
pub mod construct;
pub mod error;
pub mod semidirect;
pub mod surface;
pub mod verify;

pub use error::{Error, Result};

/// The book chapters, embedded so `cargo test --doc` keeps every snippet in
/// the guide compiling against the current API.
pub mod guide {
    #[doc = include_str!("../../../book/src/introduction.md")]
    pub mod introduction {}

    #[doc = include_str!("../../../book/src/metric-lie-groups.md")]
    pub mod metric_lie_groups {}

    #[doc = include_str!("../../../book/src/semidirect-model.md")]
    pub mod semidirect_model {}

    #[doc = include_str!("../../../book/src/surfaces-and-umbilicity.md")]
    pub mod surfaces_and_umbilicity {}

    #[doc = include_str!("../../../book/src/classification.md")]
    pub mod classification {}

    #[doc = include_str!("../../../book/src/profiles-and-shooting.md")]
    pub mod profiles_and_shooting {}

    #[doc = include_str!("../../../book/src/cli.md")]
    pub mod cli {}
}
