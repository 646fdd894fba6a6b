//! Relative error of a cloner, its lower bounds, and competing criteria.
//!
//! A [`CloningScenario`] fixes the states, priors, optional ancillas and the
//! counts `N -> L`. [`relative_error`] scores a concrete cloner; the bounds
//! ([`two_state_bound`], [`multi_state_bound`], [`simplex_bound`]) hold for
//! every cloner. Pair geometry is derived from single-copy fidelities through
//! multiplicativity, so no `n^L`-dimensional matrix is formed unless the
//! explicit cross-check [`pair_angles_explicit`] is requested.

mod angles;
mod asymptotics;
mod criteria;
mod relative;
mod scenario;
mod theorem;

pub use angles::{pair_angles, pair_angles_explicit, AngleReport};
pub use asymptotics::{asymptotics_check, AsymptoticEntry, Table1Row};
pub use criteria::{criteria, Criterion, CriteriaReport};
pub use relative::{output_deviations, pair_weights, relative_error, relative_error_from_angles};
pub use scenario::CloningScenario;
pub use theorem::{
    multi_state_bound, simplex_bound, simplex_program, two_state_bound, SimplexBound, TwoStateBound,
};
