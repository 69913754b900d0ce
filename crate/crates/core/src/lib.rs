//! Homomorphism domination exponents: exact LP bounds over polymatroid
//! polytopes, entropy checks, target constructions and proof certificates.

pub mod bounds;
pub mod certificate;
pub mod cli;
pub mod constructions;
pub mod error;
pub mod graph;
pub mod hom;
pub mod lp;
pub mod mrf;
pub mod polymatroid;
pub mod rational;

pub use error::{Error, Result};
pub use graph::{builtin, EliminationOrdering, Graph, VertexSet};
pub use rational::Rational;
