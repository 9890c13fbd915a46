//! Hypergraph decomposition toolkit: covers, structural properties,
//! hypertree / generalized / fractional decompositions and their checkers.

pub mod approx;
pub mod augment;
pub mod bitset;
pub mod covers;
pub mod decomp;
pub mod error;
pub mod fhd;
pub mod hardness;
pub mod hd;
pub mod hypergraph;
pub mod io;
pub mod lp;
pub mod oracle;
pub mod properties;
pub mod random;
pub mod rational;
pub mod search;

pub use bitset::{BitSet, EdgeSet, VertexSet};
pub use covers::EdgeWeighting;
pub use decomp::{DecompKind, DecompositionTree};
pub use error::{Error, Result};
pub use hypergraph::{Component, Hypergraph};
pub use rational::Rational;
