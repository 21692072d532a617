//! Search for the most anomalous model, with and without conditional independence.
//!
//! ```text
//! cargo run --release --example optimize_margin
//! ```

use ppsm::optimize::{maximize_margin, Constraint};

fn main() -> ppsm::Result<()> {
    for (label, constraint, budget) in [
        ("unconstrained", Constraint::None, 50),
        ("independent s, phi given psi", Constraint::RequireCi, 100),
    ] {
        let r = maximize_margin(constraint, budget, 7)?;
        println!("{label}:");
        println!("  best margin   {:.3e}", r.best_margin);
        println!("  witness       (psi={}, phi={})", r.witness.0, r.witness.1);
        println!("  coefficients  {:?}", r.best_model.as_array());
        println!(
            "  restart {} of {}, {} evaluations",
            r.best_restart, r.restarts_used, r.evaluations
        );
    }
    Ok(())
}
