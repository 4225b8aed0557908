//! Temporal action theories combined with EL⊥ knowledge bases.
//!
//! The pipeline is: parse (`syntax`) → normalize the TBox (`normalizer`) →
//! encode the ontology as causal laws and constraints (`encoder`) → compute
//! bounded extensions (`solver`) → answer executability and projection
//! queries (`queries`).

pub mod el;
pub mod encoder;
pub mod name;
pub mod normalizer;
pub mod queries;
pub mod solver;
pub mod syntax;
pub mod theory;

pub use name::Name;
