//! Congruence energy of finite lattices and algebras.
//!
//! Lattices are stored with their order matrix and join/meet tables;
//! congruences are set partitions of the element indices. The energy of a
//! congruence is the graph energy of its block graph, and the congruence
//! energy (CE) of a lattice or algebra is the sum over all its congruences.

pub(crate) mod bits;
pub(crate) mod canon;
pub mod congruence;
pub mod energy;
pub mod enumeration;
pub mod error;
pub mod extremal;
pub mod lattice;
pub mod oracle;
pub mod partition;
pub mod ualgebra;

pub use congruence::{all_congruences, principal_congruence, quotient, CongruenceLattice};
pub use energy::{combinatorial_energy, congruence_energy, spectral_energy};
pub use enumeration::{all_lattices, extremal_report, ExtremalReport};
pub use error::{Error, Result};
pub use lattice::{Lattice, Named, PrimeInterval};
pub use partition::{all_partitions, Partition};
pub use ualgebra::FiniteAlgebra;
