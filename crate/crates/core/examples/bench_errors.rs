// Random benchmark circuits, equivalent rewrites and injected errors.
//
// `cargo run --release --example bench_errors`

use pauliwmc::bench::{equivalent_rewrite, gen_random_clifford_t, inject_error, insert_clifford_t_pairs, ErrorKind};
use pauliwmc::{check_equivalence, CheckConfig};

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    let cfg = CheckConfig::default();
    let u = gen_random_clifford_t(6, 60, 1)?;

    let padded = insert_clifford_t_pairs(&u, 10, 2)?;
    let shuffled = equivalent_rewrite(&u, 5, 30, 3);
    for (name, v) in [("gate pairs", &padded), ("commuting swaps", &shuffled)] {
        let verdict = check_equivalence(&u, v, &cfg)?;
        println!("{name:<16} {:>3} gates  {}", v.len(), verdict.name());
        assert!(verdict.is_equivalent());
    }

    for kind in [ErrorKind::RemoveGate, ErrorKind::FlipCnot] {
        let v = inject_error(&u, kind, 4)?;
        let verdict = check_equivalence(&u, &v, &cfg)?;
        println!("{:<16} {:>3} gates  {}", kind.to_string(), v.len(), verdict.name());
    }

    // Small angle errors need the full gate set; the Clifford+T mix has no rotations.
    let r = pauliwmc::bench::gen_random_circuit(4, 30, true, 5);
    let v = inject_error(&r, ErrorKind::PhaseShift(0.05), 6)?;
    let verdict = check_equivalence(&r, &v, &cfg)?;
    println!("{:<16} {:>3} gates  {}", "phase:0.05", v.len(), verdict.name());
    assert!(!verdict.is_equivalent());
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<(), Box<dyn std::error::Error>> {
    run_example()
}
