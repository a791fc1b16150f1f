// Parse OpenQASM 2 text and print a JSON report with per-check counts.
//
// `cargo run --example qasm_check`

use pauliwmc::equivalence::check_equivalence_report;
use pauliwmc::qasm::parse_qasm;
use pauliwmc::CheckConfig;

const TOFFOLI: &str = r#"
OPENQASM 2.0;
include "qelib1.inc";
qreg q[3];
ccx q[0],q[1],q[2];
"#;

// Standard Clifford+T decomposition of the Toffoli gate.
const TOFFOLI_CLIFFORD_T: &str = r#"
OPENQASM 2.0;
include "qelib1.inc";
qreg q[3];
h q[2];
cx q[1],q[2]; tdg q[2];
cx q[0],q[2]; t q[2];
cx q[1],q[2]; tdg q[2];
cx q[0],q[2]; t q[1]; t q[2];
h q[2];
cx q[0],q[1]; t q[0]; tdg q[1];
cx q[0],q[1];
"#;

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    let u = parse_qasm(TOFFOLI)?;
    let v = parse_qasm(TOFFOLI_CLIFFORD_T)?;
    println!("{} gates vs {} gates", u.len(), v.len());

    let report = check_equivalence_report(&u, &v, &CheckConfig::default())?;
    println!("{}", serde_json::to_string_pretty(&report.to_json())?);
    assert!(report.verdict.is_equivalent());
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<(), Box<dyn std::error::Error>> {
    run_example()
}
