//! Lifted-product quantum LDPC codes built from expander Tanner complexes.
//!
//! The crate is layered bottom-up: finite-field linear algebra, finite groups
//! and their group algebras, graphs and their G-lifts, classical local codes,
//! Tanner complexes, lifted-product chain complexes, CSS codes and decoders.

pub mod complexes;
pub mod csscodes;
pub mod decoders;
pub mod enumerate;
pub mod gf;
pub mod graphs;
pub mod groups;
pub mod localcodes;
pub mod tanner;

pub use gf::{Field, Matrix};
pub use groups::FiniteGroup;
