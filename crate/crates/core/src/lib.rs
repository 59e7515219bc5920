//! Minimum-energy entangled states (MEES) of finite bipartite systems.
//!
//! The crate covers the whole pipeline: building the MEES at a requested
//! entanglement, synthesizing unitaries that prepare it from the ground state,
//! constructing interaction Hamiltonians whose ground state it is, evaluating
//! the efficiency and expended energy of the corresponding zero-temperature
//! thermalization protocols, and sampling random states to compare against.

pub mod error;
pub mod fixtures;
pub mod linalg;
pub mod model;
pub mod montecarlo;
pub mod synthesis;
pub mod thermal;

pub use error::{Error, Result};
pub use linalg::{ComplexMatrix, C64};
pub use model::{BipartiteSystem, DensePureState, MeesSolution, SchmidtState, Spectrum};
pub use thermal::{ApproachKind, ProtocolReport};
