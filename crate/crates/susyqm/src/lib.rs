//! Supersymmetric quantum mechanics toolkit: shape-invariant superpotentials,
//! the sextic triple-well family, ladder operators and a finite-difference
//! eigensolver used as an independent check.

pub mod checks;
pub mod error;
pub mod grid;
pub mod potential;
pub mod ladder;
pub mod oracle;
pub mod sextic;
pub mod shape_invariance;

pub use error::{Error, Result};
