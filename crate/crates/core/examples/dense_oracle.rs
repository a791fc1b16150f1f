// The dense-matrix reference: unitaries, phase-insensitive comparison and
// Pauli decompositions for small circuits.
//
// `cargo run --example dense_oracle`

use pauliwmc::oracle::{conjugate, decompose_in_pauli_basis, equal_up_to_phase, unitary_of};
use pauliwmc::{q, Circuit, Gate, PauliTerm};

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    // Rz and P differ only by a global phase.
    let rz = unitary_of(&Circuit::from_gates(1, vec![Gate::Rz(q(1), 1.2)])?)?;
    let p = unitary_of(&Circuit::from_gates(1, vec![Gate::P(q(1), 1.2)])?)?;
    println!("Rz(1.2) vs P(1.2): max entry diff {:.3}, equal up to phase: {}", rz.max_diff(&p), equal_up_to_phase(&rz, &p)?);
    assert!(equal_up_to_phase(&rz, &p)?);

    let c = Circuit::from_gates(2, vec![Gate::H(q(1)), Gate::CX(q(1), q(2)), Gate::T(q(2))])?;
    let u = unitary_of(&c)?;
    assert!(u.is_unitary(1e-12));
    let zz: PauliTerm = "ZI".parse()?;
    println!("U (ZI) U^dagger =");
    for (term, coeff) in decompose_in_pauli_basis(&conjugate(&u, &zz))? {
        if coeff.abs() > 1e-12 {
            println!("  {coeff:+.6} {term}");
        }
    }
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<(), Box<dyn std::error::Error>> {
    run_example()
}
