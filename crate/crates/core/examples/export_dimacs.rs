// Write the check formulas for a circuit pair to disk so that an external
// weighted model counter can be run on them, then read them back.
//
// `cargo run --example export_dimacs [OUT_DIR]`

use std::path::PathBuf;

use pauliwmc::dimacs::{self, Dialect};
use pauliwmc::equivalence::{check_formulas, miter};
use pauliwmc::{count, q, Circuit, Gate};

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    let out: PathBuf = std::env::args()
        .nth(1)
        .map(PathBuf::from)
        .unwrap_or_else(|| std::env::temp_dir().join("pauliwmc-export"));

    let u = Circuit::from_gates(2, vec![Gate::H(q(1)), Gate::CX(q(1), q(2))])?;
    let v = Circuit::from_gates(2, vec![Gate::H(q(1)), Gate::CX(q(1), q(2)), Gate::Z(q(1)), Gate::Z(q(1))])?;
    for (spec, f) in check_formulas(&miter(&u, &v)?)? {
        let stem = format!("check_{}", spec.label());
        let path = dimacs::write_instance(&f, &out, &stem, Dialect::Mcc)?;
        let back = dimacs::read_instance(&path)?;
        let value = count(&back)?.value;
        println!(
            "{}: {} vars, {} clauses, count {}",
            path.display(),
            f.num_vars,
            f.clauses.len(),
            value
        );
        assert!(value.is_one(0.0));
    }
    let first = out.join("check_X1.cnf");
    println!("--- {}", first.display());
    print!("{}", std::fs::read_to_string(first)?.lines().take(8).map(|l| format!("{l}\n")).collect::<String>());
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<(), Box<dyn std::error::Error>> {
    run_example()
}
