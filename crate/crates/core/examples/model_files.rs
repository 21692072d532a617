//! Reading, validating and re-emitting `ppsm-v1` model files, and where a model
//! sits inside the positivity polytope.
//!
//! ```text
//! cargo run --example model_files
//! ```

use ppsm::io::parse_model;
use ppsm::polytope::{facet_slacks, vertex_weights};

fn main() {
    let inputs = [
        r#"{"format":"ppsm-v1","coefficients":[0,0,0,0.5,-0.25,-0.5,0]}"#,
        r#"{"format":"ppsm-v1","table":[0.2,0.1,0.1,0.1,0.1,0.1,0.1,0.2]}"#,
        r#"{"format":"ppsm-v1","table":[0.5,-0.25,0.25,0.5,0,0,0,0]}"#,
    ];
    for text in inputs {
        match parse_model(text) {
            Ok(spec) => {
                let table = spec.table().expect("parsed models are valid");
                println!("accepted, re-emitted as {}", spec.to_json());
                let slacks = facet_slacks(&table.coefficients());
                let tight: Vec<String> = slacks
                    .iter()
                    .filter(|f| f.slack < 1e-9)
                    .map(|f| f.assignment.to_string())
                    .collect();
                println!("  tight facets: {tight:?}");
                println!("  vertex weights: {:?}", vertex_weights(&table));
            }
            Err(e) => println!("rejected: {e}"),
        }
    }
}
