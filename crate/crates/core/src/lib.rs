//! Exact invariants of 6-dimensional e-manifolds and of the link diagrams
//! that produce them.
//!
//! The crate is organised bottom-up: [`exactlin`] supplies exact rational
//! linear algebra, [`cohomring`] finite cohomology-ring models, [`charclass`]
//! sphere bundles and characteristic numbers, [`emanifold`] the invariant
//! σ in its several forms, [`linkdiag`] PD-coded link diagrams with Seifert
//! matrices, and [`milnor`] the triple linking number.

pub mod charclass;
pub mod cohomring;
pub mod emanifold;
pub mod error;
pub mod exactlin;
pub mod fixtures;
pub mod io;
pub mod linkdiag;
pub mod milnor;
pub mod rng;
pub mod verify;

pub use cohomring::{CohomModel, ModelSpec, RingElement, ValidationReport};
pub use error::{Error, Result};
pub use exactlin::{Matrix, Rational, SymmetricForm, Q};
