//! Plot-ready CSV of the strong and weak shifts as functions of theta.
//!
//! ```text
//! cargo run --example sweep_curves > curves.csv
//! ```

use ppsm::sweep::{sweep_csv, ParamRange, Quantity, SweepSpec};

fn main() -> ppsm::Result<()> {
    let strong = SweepSpec {
        family: "qs".into(),
        theta: Some(ParamRange::new(0.05, 1.5, 0.05)?),
        lambda: None,
        delta: None,
        outputs: vec![
            Quantity::Pre,
            Quantity::Post,
            Quantity::Margin,
            Quantity::ZW,
        ],
    };
    print!("{}", sweep_csv(&strong)?);

    let weak = SweepSpec {
        family: "qw".into(),
        theta: Some(ParamRange::single(1.0)),
        lambda: Some(ParamRange::new(0.0, 0.5, 0.05)?),
        delta: None,
        outputs: vec![Quantity::Pre, Quantity::Post, Quantity::MinSlack],
    };
    println!();
    print!("{}", sweep_csv(&weak)?);
    Ok(())
}
