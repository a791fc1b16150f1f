//! Every example doubles as a smoke test.

mod quickstart {
    include!(concat!(env!("CARGO_MANIFEST_DIR"), "/examples/quickstart.rs"));
}

#[test]
fn quickstart_runs() {
    quickstart::run_example().expect("quickstart example");
}

mod qasm_check {
    include!(concat!(env!("CARGO_MANIFEST_DIR"), "/examples/qasm_check.rs"));
}

#[test]
fn qasm_check_runs() {
    qasm_check::run_example().expect("qasm_check example");
}

mod pauli_coefficients {
    include!(concat!(env!("CARGO_MANIFEST_DIR"), "/examples/pauli_coefficients.rs"));
}

#[test]
fn pauli_coefficients_runs() {
    pauli_coefficients::run_example().expect("pauli_coefficients example");
}

mod count_dimacs {
    include!(concat!(env!("CARGO_MANIFEST_DIR"), "/examples/count_dimacs.rs"));
}

#[test]
fn count_dimacs_runs() {
    count_dimacs::run_example().expect("count_dimacs example");
}

mod export_dimacs {
    include!(concat!(env!("CARGO_MANIFEST_DIR"), "/examples/export_dimacs.rs"));
}

#[test]
fn export_dimacs_runs() {
    export_dimacs::run_example().expect("export_dimacs example");
}

mod dense_oracle {
    include!(concat!(env!("CARGO_MANIFEST_DIR"), "/examples/dense_oracle.rs"));
}

#[test]
fn dense_oracle_runs() {
    dense_oracle::run_example().expect("dense_oracle example");
}

mod bench_errors {
    include!(concat!(env!("CARGO_MANIFEST_DIR"), "/examples/bench_errors.rs"));
}

#[test]
fn bench_errors_runs() {
    bench_errors::run_example().expect("bench_errors example");
}
