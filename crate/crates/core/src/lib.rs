//! Invariant sub-objects commensurable with a family, computed as fixed points
//! of close-knit families over finite meet-semilattices.
//!
//! The [`engine`] is generic over [`engine::CloseKnitInstance`]; concrete
//! lattices live in [`sets`], [`groups`], [`vect`] and [`abstract_lattice`].
//! [`contlogic`] evaluates the tuple-based distances behind the counting
//! measures, [`galois`] wraps the group case for Galois groups, and [`oracle`]
//! enumerates every feasible answer for small instances.

pub mod abstract_lattice;
pub mod contlogic;
pub mod engine;
pub mod error;
pub mod galois;
pub mod groups;
pub mod oracle;
pub mod perm;
pub mod poset;
pub mod sets;
pub mod vect;

pub use engine::{solve, verify_certificate, Certificate, CloseKnitInstance, SolveMode, SolveOptions};
pub use error::{Error, Result};
pub use perm::Perm;
pub use poset::{DownSet, IndexValue, Rational};
