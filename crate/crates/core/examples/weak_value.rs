//! The weak measurement model: shifts grow like `lambda / cos(theta)`, and the
//! Born-rule oracle reproduces the closed-form table.
//!
//! ```text
//! cargo run --example weak_value
//! ```

use std::f64::consts::FRAC_PI_2;

use ppsm::generators::{quantum_weak, weak_value};
use ppsm::oracle::{quantum_oracle, MeasurementMode};
use ppsm::shift::shift_report;
use ppsm::Sign;

fn main() -> ppsm::Result<()> {
    println!(
        "{:>7} {:>7} {:>10} {:>10} {:>10} {:>10}",
        "theta", "lambda", "pre(+1)", "post(+1,-1)", "z_w", "oracle err"
    );
    for k in 1..=9 {
        let theta = FRAC_PI_2 * k as f64 / 10.0;
        let lam = 0.5 * theta.cos();
        let table = quantum_weak(theta, lam)?.to_table()?;
        let r = shift_report(&table)?;
        let wv = weak_value(theta, lam, Sign::Plus)?;
        let oracle = quantum_oracle(theta, MeasurementMode::Weak(lam))?;
        println!(
            "{theta:7.4} {lam:7.4} {:10.6} {:10.6} {:10.4} {:10.1e}",
            r.pre(Sign::Plus).unwrap_or(f64::NAN),
            r.post(Sign::Plus, Sign::Minus).unwrap_or(f64::NAN),
            wv.z_w,
            oracle.max_abs_diff(&table),
        );
    }
    Ok(())
}
