//! Exact computations for the super Jordan plane and its Hochschild
//! (co)homology.

pub mod algebra;
pub mod cli;
pub mod cohomology;
pub mod error;
pub mod linalg;
pub mod report;
pub mod resolution;
pub mod structure;
pub mod yoneda;
