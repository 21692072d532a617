//! Exact pre- and post-selected shifts for every named model.
//!
//! ```text
//! cargo run --example shift_report
//! ```

use std::f64::consts::FRAC_PI_3;

use ppsm::generators::Generator;
use ppsm::model::pairs;
use ppsm::shift::shift_report;
use ppsm::Sign;

fn fmt(v: Option<f64>) -> String {
    v.map_or_else(|| "undef".into(), |x| format!("{x:+.4}"))
}

fn main() -> ppsm::Result<()> {
    let models = [
        Generator::Qs { theta: FRAC_PI_3 },
        Generator::Qw {
            theta: FRAC_PI_3,
            lambda: 0.4,
        },
        Generator::Cd {
            lambda: 0.5,
            delta: 0.4,
        },
        Generator::Cmax,
        Generator::Boxes,
    ];
    for g in models {
        let table = g.table()?;
        let r = shift_report(&table)?;
        println!(
            "{:<6} coefficients {:?}",
            g.name(),
            table.coefficients().as_array()
        );
        for psi in Sign::BOTH {
            println!("       pre({psi}) = {}", fmt(r.pre(psi)));
        }
        for (psi, phi) in pairs() {
            println!(
                "       post({psi},{phi}) = {}  margin = {}",
                fmt(r.post(psi, phi)),
                fmt(r.margin(psi, phi))
            );
        }
        println!("       anomalous: {} {:?}\n", r.apss(), r.witnesses());
    }
    Ok(())
}
