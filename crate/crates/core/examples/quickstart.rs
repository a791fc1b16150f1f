// Build two circuits in code and ask whether they implement the same unitary.
//
// `cargo run --example quickstart`

use pauliwmc::{check_equivalence, q, CheckConfig, Circuit, Gate, Verdict};

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    let two_t = Circuit::from_gates(1, vec![Gate::T(q(1)), Gate::T(q(1))])?;
    let s = Circuit::from_gates(1, vec![Gate::S(q(1))])?;
    let cfg = CheckConfig::default();

    let verdict = check_equivalence(&two_t, &s, &cfg)?;
    println!("T;T vs S: {}", verdict.name());
    assert_eq!(verdict, Verdict::Equivalent);

    // A CNOT sandwiched in Hadamards on the target is a CZ.
    let cx_form = Circuit::from_gates(
        2,
        vec![Gate::H(q(2)), Gate::CX(q(1), q(2)), Gate::H(q(2))],
    )?;
    let cz = Circuit::from_gates(2, vec![Gate::CZ(q(1), q(2))])?;
    let verdict = check_equivalence(&cx_form, &cz, &cfg)?;
    println!("H CX H vs CZ: {}", verdict.name());
    assert!(verdict.is_equivalent());

    // Dropping one T breaks it; the witness names the Pauli that moved.
    let one_t = Circuit::from_gates(1, vec![Gate::T(q(1))])?;
    match check_equivalence(&one_t, &s, &cfg)? {
        Verdict::NotEquivalent(w) => {
            println!("T vs S: not equivalent, {} maps with coefficient {}", w.check.label(), w.count);
        }
        other => return Err(format!("expected a witness, got {}", other.name()).into()),
    }
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<(), Box<dyn std::error::Error>> {
    run_example()
}
