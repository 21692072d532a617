//! The ball-in-four-boxes world: deterministic given both selections, yet
//! unbiased before post-selection.
//!
//! ```text
//! cargo run --example box_world
//! ```

use ppsm::generators::{box_world_model, classical_maximal, BoxWorld};
use ppsm::model::pairs;
use ppsm::shift::shift_report;
use ppsm::Sign;

fn main() -> ppsm::Result<()> {
    let world = BoxWorld::canonical();
    println!("boxes (psi, s, phi):");
    for b in world.boxes() {
        println!("  ({}, {}, {})", b[0], b[1], b[2]);
    }
    let table = box_world_model(&world);
    println!(
        "same table as c7 = 1: {}",
        table == classical_maximal().to_table()?
    );

    let r = shift_report(&table)?;
    for psi in Sign::BOTH {
        println!("E[s | psi={psi}] = {:+}", r.pre(psi).unwrap_or(f64::NAN));
    }
    for (psi, phi) in pairs() {
        let d = table.conditional_s(psi, phi).expect("every pair has mass");
        println!(
            "Pr(s=+1 | psi={psi}, phi={phi}) = {}  E[s] = {:+}  H = {} bits",
            d.prob(Sign::Plus),
            d.mean(),
            d.entropy()
        );
    }
    Ok(())
}
