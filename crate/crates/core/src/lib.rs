//! Pre- and post-selected statistics of three dichotomous events.
//!
//! A model is a joint distribution over a pre-selection `psi`, an intermediate
//! outcome `s` and a post-selection `phi`, each `±1`. The crate covers:
//!
//! * [`model`]: coefficient vectors, probability tables, marginals and conditionals;
//! * [`shift`]: pre-selected and post-selected shifts of `s` and anomaly detection;
//! * [`ci`]: conditional independence of `s` and `phi` given `psi`;
//! * [`generators`] and [`oracle`]: qubit and classical model families, with a
//!   Born-rule construction of the qubit tables;
//! * [`polytope`] and [`optimize`]: the positivity polytope and multistart
//!   maximization of the anomaly margin;
//! * [`montecarlo`]: seeded sampling and empirical anomaly tests;
//! * [`io`], [`sweep`] and [`commands`]: file formats and the `ppsm` command line.
//!
//! ```
//! use ppsm::{generators, shift::shift_report, Sign};
//!
//! let table = generators::classical_maximal().to_table().unwrap();
//! let report = shift_report(&table).unwrap();
//! assert_eq!(report.pre(Sign::Plus), Some(0.0));
//! assert_eq!(report.post(Sign::Plus, Sign::Minus), Some(-1.0));
//! assert!(report.apss());
//! ```

pub mod ci;
pub mod commands;
pub mod error;
pub mod generators;
pub mod io;
pub mod model;
pub mod montecarlo;
pub mod optimize;
pub mod oracle;
pub mod polytope;
pub mod shift;
pub mod sweep;
pub mod tol;

pub use error::{Error, Result};
pub use model::{CoefficientVector, Outcome, ProbabilityTable, Sign};
