//! The positivity polytope in coefficient space.
//!
//! Each of the eight outcome assignments contributes one facet inequality
//! `8 p(psi, s, phi) >= 0`. The polytope is the linear image of the probability
//! simplex, so its vertices are the coefficient vectors of the point masses.

use serde::Serialize;

use crate::model::{CoefficientVector, Outcome, ProbabilityTable};
use crate::tol;

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct PolytopeFacet {
    pub assignment: Outcome,
    /// `8 p(assignment)`; nonnegative inside the polytope.
    pub slack: f64,
}

pub fn facet_slacks(c: &CoefficientVector) -> [PolytopeFacet; 8] {
    std::array::from_fn(|i| {
        let assignment = Outcome::from_index(i);
        PolytopeFacet {
            assignment,
            slack: c.scaled_entry(assignment),
        }
    })
}

pub fn min_slack(c: &CoefficientVector) -> PolytopeFacet {
    facet_slacks(c)
        .into_iter()
        .min_by(|a, b| a.slack.total_cmp(&b.slack))
        .expect("eight facets")
}

pub fn is_inside(c: &CoefficientVector) -> bool {
    min_slack(c).slack >= -8.0 * tol::POSITIVITY
}

/// Coefficient vectors of the eight point-mass tables, in outcome index order.
pub fn vertices() -> [CoefficientVector; 8] {
    std::array::from_fn(|i| CoefficientVector::new(Outcome::from_index(i).monomials()))
}

/// Expresses a valid model as a convex combination of [`vertices`]: the weights are the table entries.
pub fn vertex_weights(table: &ProbabilityTable) -> [f64; 8] {
    *table.entries()
}
