// Coefficients of a conjugated Pauli, computed by model counting and
// cross-checked against the dense-matrix oracle.
//
// `cargo run --example pauli_coefficients`

use pauliwmc::circuit::lower_gates;
use pauliwmc::encoder::{build_coefficient_formula, EncoderOptions};
use pauliwmc::oracle::{pauli_coefficient, unitary_of};
use pauliwmc::{count, q, Circuit, Gate, PauliTerm};

fn show(c: &Circuit, input: &str) -> Result<(), Box<dyn std::error::Error>> {
    let n = c.num_qubits() as usize;
    let p0: PauliTerm = input.parse()?;
    let lowered = lower_gates(c);
    let dense = unitary_of(c)?;
    println!("conjugating {input}:");
    for p in PauliTerm::all(n) {
        let f = build_coefficient_formula(&lowered, &p0, &p, EncoderOptions::default())?;
        let got = count(&f)?.value;
        let want = pauli_coefficient(&dense, &p0, &p)?;
        assert!((got.to_f64() - want).abs() < 1e-9);
        if !got.is_zero(1e-12) {
            println!("  {p:>4}  {got}  ({:.6})", got.to_f64());
        }
    }
    Ok(())
}

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    // T rotates X halfway towards Y: (X + Y)/sqrt2.
    show(&Circuit::from_gates(1, vec![Gate::T(q(1))])?, "X")?;
    // A CNOT copies X from control to target.
    show(&Circuit::from_gates(2, vec![Gate::CX(q(1), q(2))])?, "XI")?;
    // An arbitrary angle switches the formula to floating point.
    show(&Circuit::from_gates(1, vec![Gate::Rx(q(1), 0.7)])?, "Z")?;
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<(), Box<dyn std::error::Error>> {
    run_example()
}
