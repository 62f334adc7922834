//! Finite-scale computations with inverse semigroups and étale groupoids.
//!
//! The library works with explicit finite data throughout: topologies are
//! families of bitsets, semigroups are Cayley tables, groupoids are arrow
//! lists with structure maps. Every construction comes with a verifier that
//! re-checks the defining axioms, so nothing is trusted by construction.
//!
//! All values are immutable after construction and all operations are pure
//! functions; everything here is safe to share across threads.

pub mod bits;
pub mod coarse;
pub mod corpus;
pub mod fintop;
pub mod germs;
pub mod groupoid;
pub mod invsemi;
pub mod report;
pub mod repr;
pub mod universal;

pub use fintop::FiniteSpace;
pub use germs::{Germ, GermGroupoid, Provenance};
pub use groupoid::FiniteGroupoid;
pub use invsemi::{InverseSemigroup, PartialBijection, Pseudogroup};
pub use report::{Report, Violation};
pub use repr::Representation;
