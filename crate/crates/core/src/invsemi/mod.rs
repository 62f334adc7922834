//! Inverse semigroups in two guises: concrete pseudogroups of partial
//! bijections on a finite space, and abstract multiplication-table
//! semigroups, together with the natural order, compatibility, joins, and
//! completeness machinery.

mod order;
mod partial;
mod pseudo;
mod table;

pub use order::{
    compatible_subsets, complete_report, distributive_report, filters, is_compatible,
    is_compatibly_prime, join, meet_of_pair, natural_leq, upper_bounds, CheckMethod,
    CompletenessReport, DistributivityReport, FilterVariant, JoinError,
};
pub(crate) use order::{OrderData, PrimalityContext};
pub use partial::PartialBijection;
pub use pseudo::{
    abstract_from_pseudogroup, all_partial_homeomorphisms, symmetric_inverse_monoid,
    verify_pseudogroup, wagner_preston, Pseudogroup, WagnerPreston,
};
pub use table::{
    find_unit, find_zero, is_homomorphism, verify_inverse_semigroup, InverseSemigroup,
};
