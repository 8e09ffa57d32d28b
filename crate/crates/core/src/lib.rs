//! Exact computations with finite-dimensional Hopf algebras given by structure constants
//! over cyclotomic fields: axiom checks, integrals and modular data, the spectral analysis of
//! the squared antipode, and a decision procedure for the existence of a Hopf automorphism
//! whose square is the squared antipode (a *companion* automorphism).

pub mod catalog;
pub mod cli;
pub mod companion;
pub mod constructions;
pub mod cyclofield;
pub mod error;
pub mod format;
pub mod hopf;
pub mod integrals;
pub mod linalg;

pub use cyclofield::{CycloField, CycloNum};
pub use error::{HopfError, Result};
pub use hopf::{Functional, HopfAlgebra, LinearMap};
