//! Every native gate, every input string, every output string: the weighted
//! count agrees with the trace-formula coefficient.

use pauliwmc::circuit::{q, Circuit, Gate};
use pauliwmc::cnf::Mode;
use pauliwmc::encoder::{build_coefficient_formula, EncoderOptions, ToffoliEncoding};
use pauliwmc::oracle::{pauli_coefficient, unitary_of};
use pauliwmc::pauli::PauliTerm;
use pauliwmc::wmc::count;

fn native_gates() -> Vec<(u32, Gate)> {
    vec![
        (1, Gate::H(q(1))),
        (1, Gate::S(q(1))),
        (1, Gate::Sdg(q(1))),
        (1, Gate::T(q(1))),
        (1, Gate::Tdg(q(1))),
        (2, Gate::CZ(q(1), q(2))),
        (2, Gate::CZ(q(2), q(1))),
        (1, Gate::Rx(q(1), 0.37)),
        (1, Gate::Rz(q(1), -1.1)),
        (1, Gate::P(q(1), 2.3)),
        (3, Gate::CCX(q(1), q(2), q(3))),
        (3, Gate::CCX(q(3), q(1), q(2))),
    ]
}

fn assert_gate(n: u32, g: Gate, opts: EncoderOptions) {
    let c = Circuit::from_gates(n, vec![g]).unwrap();
    let u = unitary_of(&c).unwrap();
    for p0 in PauliTerm::all(n as usize) {
        for sign in [false, true] {
            let mut p0 = p0.clone();
            p0.sign = sign;
            for p in PauliTerm::all(n as usize) {
                let f = build_coefficient_formula(&c, &p0, &p, opts).unwrap();
                let got = count(&f).unwrap().value;
                assert_eq!(got.is_exact(), f.mode == Mode::Exact);
                let want = pauli_coefficient(&u, &p0, &p).unwrap();
                assert!(
                    (got.to_f64() - want).abs() <= 1e-12,
                    "{g}: {p0} -> {p}: count {got}, oracle {want}"
                );
            }
        }
    }
}

#[test]
fn native_gates_match_oracle() {
    for (n, g) in native_gates() {
        assert_gate(n, g, EncoderOptions::default());
    }
}

#[test]
fn minimized_toffoli_matches_oracle() {
    let opts = EncoderOptions {
        toffoli: ToffoliEncoding::Minimized,
    };
    assert_gate(3, Gate::CCX(q(2), q(3), q(1)), opts);
}
