// Weighted model counting on a hand-written DIMACS formula.
//
// `cargo run --example count_dimacs`

use pauliwmc::dimacs;
use pauliwmc::wmc::{brute_count, count_with, CountOptions, Heuristic};

// (x1 or x2) and (not x1 or x3), with a negative weight on x3.
const FORMULA: &str = "\
p cnf 3 2
c p weight 1 0.5 0
c p weight -1 0.5 0
c p weight 3 -0.25 0
1 2 0
-1 3 0
";

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    let f = dimacs::parse(FORMULA)?;
    let reference = brute_count(&f)?;
    for heuristic in [Heuristic::MostOccurrences, Heuristic::LowestId] {
        let opts = CountOptions {
            heuristic,
            ..CountOptions::default()
        };
        let r = count_with(&f, &opts)?;
        println!(
            "{heuristic:?}: {} ({} decisions, {} cache hits)",
            r.value, r.stats.decisions, r.stats.cache_hits
        );
        assert!((r.value.to_f64() - reference.to_f64()).abs() < 1e-12);
    }
    println!("enumeration: {reference}");
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<(), Box<dyn std::error::Error>> {
    run_example()
}
