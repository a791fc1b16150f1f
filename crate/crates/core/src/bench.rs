//! Random benchmark circuits, error injection and equivalence-preserving
//! rewrites. All randomness comes from ChaCha8 seeded with a `u64`.

use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;
use std::time::Instant;

use rand::seq::index::sample;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use thiserror::Error;

use crate::circuit::{Circuit, Gate, GateKind, QubitIndex};
use crate::equivalence::{check_equivalence, CheckConfig, CheckError, Verdict};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum BenchError {
    #[error("CX needs at least 2 qubits, got {0}")]
    TooFewQubits(u32),
    #[error("no gate eligible for {0}")]
    NoEligibleGate(ErrorKind),
    #[error(transparent)]
    Check(#[from] CheckError),
}

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// `k` distinct qubits, uniformly.
fn distinct_qubits(rng: &mut ChaCha8Rng, n: u32, k: usize) -> Vec<QubitIndex> {
    sample(rng, n as usize, k)
        .into_iter()
        .map(|i| QubitIndex::new(i as u32 + 1).expect("positive"))
        .collect()
}

/// Gate mix: CX 10%, H 35%, S 35%, T 20%.
pub fn gen_random_clifford_t(n: u32, num_gates: usize, seed: u64) -> Result<Circuit, BenchError> {
    if n < 2 {
        return Err(BenchError::TooFewQubits(n));
    }
    let mut r = rng(seed);
    let mut c = Circuit::new(n);
    for _ in 0..num_gates {
        let u: f64 = r.gen();
        let g = if u < 0.10 {
            let qs = distinct_qubits(&mut r, n, 2);
            Gate::CX(qs[0], qs[1])
        } else {
            let a = distinct_qubits(&mut r, n, 1)[0];
            if u < 0.45 {
                Gate::H(a)
            } else if u < 0.80 {
                Gate::S(a)
            } else {
                Gate::T(a)
            }
        };
        c.push(g).expect("valid by construction");
    }
    Ok(c)
}

/// Uniform over every supported kind that fits on `n` qubits, with
/// rotation angles uniform in `[-pi, pi)` when `angles` is set.
pub fn gen_random_circuit(n: u32, num_gates: usize, angles: bool, seed: u64) -> Circuit {
    let mut r = rng(seed);
    let mut kinds = vec![
        GateKind::H,
        GateKind::S,
        GateKind::Sdg,
        GateKind::T,
        GateKind::Tdg,
        GateKind::X,
        GateKind::Y,
        GateKind::Z,
    ];
    if n >= 2 {
        kinds.extend([GateKind::CZ, GateKind::CX]);
    }
    if n >= 3 {
        kinds.push(GateKind::CCX);
    }
    if angles {
        kinds.extend([GateKind::Rx, GateKind::Rz, GateKind::P]);
    }
    let mut c = Circuit::new(n);
    for _ in 0..num_gates {
        let kind = kinds[r.gen_range(0..kinds.len())];
        let qs = distinct_qubits(&mut r, n, kind.arity());
        let theta = r.gen_range(-PI..PI);
        c.push(make_gate(kind, &qs, theta)).expect("valid by construction");
    }
    c
}

fn make_gate(kind: GateKind, qs: &[QubitIndex], theta: f64) -> Gate {
    match kind {
        GateKind::H => Gate::H(qs[0]),
        GateKind::S => Gate::S(qs[0]),
        GateKind::Sdg => Gate::Sdg(qs[0]),
        GateKind::T => Gate::T(qs[0]),
        GateKind::Tdg => Gate::Tdg(qs[0]),
        GateKind::X => Gate::X(qs[0]),
        GateKind::Y => Gate::Y(qs[0]),
        GateKind::Z => Gate::Z(qs[0]),
        GateKind::CZ => Gate::CZ(qs[0], qs[1]),
        GateKind::CX => Gate::CX(qs[0], qs[1]),
        GateKind::CCX => Gate::CCX(qs[0], qs[1], qs[2]),
        GateKind::Rx => Gate::Rx(qs[0], theta),
        GateKind::Rz => Gate::Rz(qs[0], theta),
        GateKind::P => Gate::P(qs[0], theta),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub enum ErrorKind {
    RemoveGate,
    FlipCnot,
    PhaseShift(f64),
}

impl fmt::Display for ErrorKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ErrorKind::RemoveGate => write!(f, "remove"),
            ErrorKind::FlipCnot => write!(f, "flip-cnot"),
            ErrorKind::PhaseShift(d) => write!(f, "phase:{d:e}"),
        }
    }
}

impl FromStr for ErrorKind {
    type Err = String;

    /// `remove`, `flip-cnot`, or `phase:<delta>`.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "remove" => Ok(ErrorKind::RemoveGate),
            "flip-cnot" => Ok(ErrorKind::FlipCnot),
            _ => match s.strip_prefix("phase:") {
                Some(d) => d
                    .parse()
                    .map(ErrorKind::PhaseShift)
                    .map_err(|_| format!("bad phase shift `{d}`")),
                None => Err(format!("unknown error kind `{s}` (remove, flip-cnot, phase:<delta>)")),
            },
        }
    }
}

fn eligible(kind: ErrorKind, g: &Gate) -> bool {
    match kind {
        ErrorKind::RemoveGate => true,
        ErrorKind::FlipCnot => g.kind() == GateKind::CX,
        ErrorKind::PhaseShift(_) => g.kind().has_angle(),
    }
}

/// Mutates exactly one uniformly chosen eligible gate.
pub fn inject_error(c: &Circuit, kind: ErrorKind, seed: u64) -> Result<Circuit, BenchError> {
    let candidates: Vec<usize> = c
        .gates()
        .iter()
        .enumerate()
        .filter(|(_, g)| eligible(kind, g))
        .map(|(i, _)| i)
        .collect();
    if candidates.is_empty() {
        return Err(BenchError::NoEligibleGate(kind));
    }
    let pos = candidates[rng(seed).gen_range(0..candidates.len())];
    let mut gates = c.gates().to_vec();
    match kind {
        ErrorKind::RemoveGate => {
            gates.remove(pos);
        }
        ErrorKind::FlipCnot => {
            if let Gate::CX(a, b) = gates[pos] {
                gates[pos] = Gate::CX(b, a);
            }
        }
        ErrorKind::PhaseShift(d) => {
            let g = gates[pos];
            gates[pos] = g.with_angle(g.angle().expect("eligible") + d);
        }
    }
    Ok(c.with_gates(gates).expect("same qubits"))
}

/// Gates on disjoint qubits, or two diagonal gates, commute.
pub fn commutes(a: &Gate, b: &Gate) -> bool {
    let qa = a.qubits();
    (a.is_diagonal() && b.is_diagonal()) || b.qubits().iter().all(|q| !qa.contains(q))
}

/// Equivalent circuit: `insertions` random `G G^dagger` pairs followed by
/// `swaps` attempts to exchange adjacent commuting gates.
pub fn equivalent_rewrite(c: &Circuit, insertions: usize, swaps: usize, seed: u64) -> Circuit {
    let mut r = rng(seed);
    let mut gates = c.gates().to_vec();
    let pool = gen_random_circuit(c.num_qubits(), insertions, true, r.gen());
    for g in pool.gates() {
        let pos = r.gen_range(0..=gates.len());
        gates.splice(pos..pos, [*g, g.dagger()]);
    }
    for _ in 0..swaps {
        if gates.len() < 2 {
            break;
        }
        let i = r.gen_range(0..gates.len() - 1);
        if commutes(&gates[i], &gates[i + 1]) {
            gates.swap(i, i + 1);
        }
    }
    c.with_gates(gates).expect("same qubits")
}

/// Clifford+T only `G G^dagger` insertions, for performance runs.
pub fn insert_clifford_t_pairs(c: &Circuit, insertions: usize, seed: u64) -> Result<Circuit, BenchError> {
    let mut r = rng(seed);
    let pool = gen_random_clifford_t(c.num_qubits(), insertions, r.gen())?;
    let mut gates = c.gates().to_vec();
    for g in pool.gates() {
        let pos = r.gen_range(0..=gates.len());
        gates.splice(pos..pos, [*g, g.dagger()]);
    }
    Ok(c.with_gates(gates).expect("same qubits"))
}

#[derive(Debug, Clone, PartialEq)]
pub struct BenchConfig {
    pub qubits: Vec<u32>,
    pub gates: Vec<usize>,
    /// `None` compares against an equivalent rewrite.
    pub error: Option<ErrorKind>,
    pub insertions: usize,
    pub seed: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BenchRow {
    pub case: String,
    pub n: u32,
    pub gates: usize,
    pub gates_prime: usize,
    pub verdict: String,
    pub seconds: f64,
}

/// One case per `(n, m)` pair, in order. Cases whose circuit has no gate
/// eligible for the requested error are reported with verdict `skipped`.
pub fn run_bench(cfg: &BenchConfig, check: &CheckConfig) -> Result<Vec<BenchRow>, BenchError> {
    let mut rows = Vec::new();
    let mut case = 0u64;
    for &n in &cfg.qubits {
        for &m in &cfg.gates {
            let seed = cfg.seed.wrapping_add(case);
            case += 1;
            let u = gen_random_clifford_t(n, m, seed)?;
            let v = match cfg.error {
                None => Ok(insert_clifford_t_pairs(&u, cfg.insertions, seed)?),
                Some(kind) => inject_error(&u, kind, seed),
            };
            let name = format!("n{n}_m{m}_s{seed}");
            let row = match v {
                Ok(v) => {
                    let t = Instant::now();
                    let verdict = check_equivalence(&u, &v, check)?;
                    BenchRow {
                        case: name,
                        n,
                        gates: u.len(),
                        gates_prime: v.len(),
                        verdict: verdict_label(&verdict).into(),
                        seconds: t.elapsed().as_secs_f64(),
                    }
                }
                Err(BenchError::NoEligibleGate(_)) => BenchRow {
                    case: name,
                    n,
                    gates: u.len(),
                    gates_prime: u.len(),
                    verdict: "skipped".into(),
                    seconds: 0.0,
                },
                Err(e) => return Err(e),
            };
            rows.push(row);
        }
    }
    Ok(rows)
}

fn verdict_label(v: &Verdict) -> &'static str {
    v.name()
}

pub fn rows_to_csv(rows: &[BenchRow]) -> String {
    let mut w = csv::Writer::from_writer(Vec::new());
    for r in rows {
        w.serialize(r).expect("in-memory write");
    }
    String::from_utf8(w.into_inner().expect("in-memory flush")).expect("utf-8")
}
