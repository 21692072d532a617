//! Finite-sample estimates and the anomaly test on sampled data.
//!
//! ```text
//! cargo run --release --example monte_carlo
//! ```

use std::f64::consts::FRAC_PI_3;

use ppsm::ci::ProductModel;
use ppsm::generators::quantum_weak;
use ppsm::montecarlo::{estimate, sample};
use ppsm::shift::shift_report;
use ppsm::Sign;

fn main() -> ppsm::Result<()> {
    let weak = quantum_weak(FRAC_PI_3, 0.4)?.to_table()?;
    let product = ProductModel::new(0.3, [0.8, 0.4], [0.6, 0.1])?.table();
    for (name, table) in [("weak", weak), ("product", product)] {
        let exact = shift_report(&table)?;
        for n in [1_000, 100_000, 1_000_000] {
            let est = estimate(&sample(&table, n, 42)?);
            let post = est.post_hat(Sign::Plus, Sign::Minus);
            println!(
                "{name:<8} n={n:<8} post(+1,-1) = {:+.4} +- {:.4} (exact {:+.4})  z = {:+.2}  detected = {}",
                post.map_or(f64::NAN, |e| e.estimate),
                post.map_or(f64::NAN, |e| e.stderr),
                exact.post(Sign::Plus, Sign::Minus).unwrap_or(f64::NAN),
                est.apss_z,
                est.apss_detected
            );
        }
    }
    Ok(())
}
