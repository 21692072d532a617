//! Numerical tolerances shared by every module.
//!
//! All quantities are rational or trigonometric functions evaluated in
//! double precision, so the decision tolerances sit two orders of magnitude
//! above typical accumulated rounding error.

/// Slack allowed below zero on a table entry before it counts as a positivity violation.
pub const POSITIVITY: f64 = 1e-12;

/// Allowed deviation of a table's total mass from 1.
pub const NORMALIZATION: f64 = 1e-12;

/// Conditioning events with probability at or below this are treated as null.
pub const NULL_EVENT: f64 = 1e-12;

/// Factorization residual below which a model counts as conditionally independent.
pub const CONDITIONAL_INDEPENDENCE: f64 = 1e-10;

/// A margin must exceed this for a post-selection pair to witness an anomalous shift.
pub const ANOMALY: f64 = 1e-10;
