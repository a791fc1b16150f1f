#![allow(dead_code)]

use pauliwmc::cnf::{Mode, WeightedCnf};
use pauliwmc::weight::{ExactWeight, WeightValue};
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// Random CNF with weights drawn from {+-1, +-1/2, 1/sqrt2} in exact mode,
/// plus uniform doubles in [-2, 2] in float mode.
pub fn random_cnf(seed: u64, max_vars: u32, max_clauses: usize, mode: Mode) -> WeightedCnf {
    let mut r = ChaCha8Rng::seed_from_u64(seed);
    let n = r.gen_range(1..=max_vars);
    let m = r.gen_range(0..=max_clauses);
    let mut f = WeightedCnf::with_vars(mode, n);
    for _ in 0..m {
        let len = r.gen_range(1..=3.min(n as usize));
        let mut c: Vec<i32> = Vec::new();
        while c.len() < len {
            let v = r.gen_range(1..=n) as i32;
            if c.iter().any(|l| l.abs() == v) {
                continue;
            }
            c.push(if r.gen_bool(0.5) { v } else { -v });
        }
        f.add_clause(c);
    }
    for v in 1..=n as i32 {
        for lit in [v, -v] {
            if !r.gen_bool(0.4) {
                continue;
            }
            let choice = r.gen_range(0..if mode == Mode::Float { 6 } else { 5 });
            let w = match choice {
                0 => ExactWeight::from_int(-1),
                1 => ExactWeight::half(),
                2 => -&ExactWeight::half(),
                3 => ExactWeight::inv_sqrt2(),
                4 => ExactWeight::from_int(1),
                _ => {
                    let x: f64 = r.gen_range(-2.0..2.0);
                    f.set_weight(lit, WeightValue::float(x).unwrap()).unwrap();
                    continue;
                }
            };
            f.set_exact_weight(lit, w).unwrap();
        }
    }
    f
}

/// Agreement to `rel` relative to max(1, |expected|).
pub fn close(got: f64, want: f64, rel: f64) -> bool {
    (got - want).abs() <= rel * want.abs().max(1.0)
}
