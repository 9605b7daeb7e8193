//! Finite lattices, relational structures and the convolution algebras of
//! lattice-valued functions they induce, with tools for checking equations
//! and structural properties of those algebras.

pub mod algebra;
pub mod catalog;
pub mod cli;
pub mod convolution;
pub mod error;
pub mod lattice;
pub mod propcheck;
pub mod relstruct;
pub mod suite;
pub mod termlang;

pub use algebra::Algebra;
pub use convolution::{ConvAlgebra, LFunction, Subset, SubsetAlgebra};
pub use error::{Error, Result};
pub use lattice::{Elem, FiniteLattice, LatticeMorphism};
pub use relstruct::{Mode, RelSpec, RelStructure, Signature};
