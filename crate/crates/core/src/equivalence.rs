//! Equivalence checking by weighted model counting.
//!
//! `U` and `V` agree up to global phase iff `A = V^dagger U` fixes every
//! single-qubit `X_j` and `Z_j` under conjugation, i.e. the coefficient of
//! `P` in `A P A^dagger` is 1 for each of those `2n` strings. Each
//! coefficient is one weighted count.

use std::sync::atomic::{AtomicBool, AtomicUsize, Ordering};
use std::sync::{Arc, Mutex};
use std::time::{Duration, Instant};

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};
use thiserror::Error;

use crate::circuit::{adjoint, lower_gates, Circuit, QubitIndex};
use crate::cnf::{Mode, WeightedCnf};
use crate::encoder::{build_check_formula, formula_mode, EncodeError};
use crate::pauli::{Pauli, PauliTerm};
use crate::weight::WeightValue;
use crate::wmc::{count_with, CountError, CountOptions, CountStats, Heuristic};

/// Default float tolerance; see the README for why it is this small.
pub const DEFAULT_EPSILON: f64 = 1e-10;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum CheckError {
    #[error("circuits act on {0} and {1} qubits")]
    QubitCountMismatch(u32, u32),
    #[error("epsilon must be positive, got {0}")]
    BadEpsilon(f64),
    #[error("jobs must be at least 1")]
    NoJobs,
    #[error(transparent)]
    Encode(#[from] EncodeError),
}

#[derive(Debug, Clone)]
pub struct CheckConfig {
    /// Float-mode tolerance for "count equals 1". Ignored in exact mode.
    pub epsilon: f64,
    pub timeout: Option<Duration>,
    pub jobs: usize,
    pub heuristic: Heuristic,
    pub cache_bytes: usize,
    /// Shuffles dispatch order; the verdict must not depend on it.
    pub dispatch_seed: Option<u64>,
}

impl Default for CheckConfig {
    fn default() -> Self {
        let count = CountOptions::default();
        CheckConfig {
            epsilon: DEFAULT_EPSILON,
            timeout: count.timeout,
            jobs: 16,
            heuristic: count.heuristic,
            cache_bytes: count.cache_bytes,
            dispatch_seed: None,
        }
    }
}

/// One of the `2n` conjugation checks.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CheckSpec {
    pub pauli: Pauli,
    pub qubit: QubitIndex,
}

impl CheckSpec {
    pub fn term(&self, n: usize) -> PauliTerm {
        PauliTerm::single(n, self.qubit, self.pauli)
    }

    /// File-name friendly label, e.g. `X3`.
    pub fn label(&self) -> String {
        format!("{}{}", self.pauli.symbol(), self.qubit)
    }
}

/// `X_1, Z_1, X_2, Z_2, ...`: an error on any qubit is reached early.
pub fn check_order(n: u32) -> Vec<CheckSpec> {
    (1..=n)
        .flat_map(|j| {
            let qubit = QubitIndex::new(j).expect("1-based");
            [Pauli::X, Pauli::Z].map(|pauli| CheckSpec { pauli, qubit })
        })
        .collect()
}

/// Lowered `V^dagger U`.
pub fn miter(u: &Circuit, v: &Circuit) -> Result<Circuit, CheckError> {
    if u.num_qubits() != v.num_qubits() {
        return Err(CheckError::QubitCountMismatch(u.num_qubits(), v.num_qubits()));
    }
    Ok(lower_gates(&u.concat(&adjoint(v))))
}

/// Every check formula of `a` in dispatch order.
pub fn check_formulas(a: &Circuit) -> Result<Vec<(CheckSpec, WeightedCnf)>, CheckError> {
    let a = lower_gates(a);
    check_order(a.num_qubits())
        .into_iter()
        .map(|s| {
            let f = build_check_formula(&a, &s.term(a.num_qubits() as usize))?;
            Ok((s, f))
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq)]
pub struct Witness {
    pub check: CheckSpec,
    pub count: WeightValue,
}

#[derive(Debug, Clone, PartialEq)]
pub enum Verdict {
    Equivalent,
    NotEquivalent(Witness),
    /// Some check hit a resource limit and none disproved equivalence.
    Unknown(String),
}

impl Verdict {
    pub fn exit_code(&self) -> i32 {
        match self {
            Verdict::Equivalent => 0,
            Verdict::NotEquivalent(_) => 1,
            Verdict::Unknown(_) => 2,
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            Verdict::Equivalent => "equivalent",
            Verdict::NotEquivalent(_) => "not_equivalent",
            Verdict::Unknown(_) => "unknown",
        }
    }

    pub fn is_equivalent(&self) -> bool {
        matches!(self, Verdict::Equivalent)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum CheckOutcome {
    Counted(WeightValue),
    Failed(CountError),
    /// Not started because an earlier check already disproved equivalence.
    Skipped,
}

#[derive(Debug, Clone, PartialEq)]
pub struct CheckRecord {
    pub check: CheckSpec,
    pub outcome: CheckOutcome,
    pub stats: CountStats,
    pub num_vars: u32,
    pub num_clauses: usize,
    pub seconds: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Report {
    pub verdict: Verdict,
    pub mode: Mode,
    pub epsilon: f64,
    pub checks: Vec<CheckRecord>,
    pub seconds: f64,
}

impl Report {
    pub fn to_json(&self) -> Value {
        let witness = match &self.verdict {
            Verdict::NotEquivalent(w) => json!({
                "pauli": w.check.pauli.symbol().to_string(),
                "qubit": w.check.qubit.get(),
                "count": w.count.to_string(),
            }),
            _ => Value::Null,
        };
        let checks: Vec<Value> = self
            .checks
            .iter()
            .map(|r| {
                let (status, count) = match &r.outcome {
                    CheckOutcome::Counted(v) => ("counted", Value::String(v.to_string())),
                    CheckOutcome::Failed(e) => ("failed", Value::String(e.to_string())),
                    CheckOutcome::Skipped => ("skipped", Value::Null),
                };
                json!({
                    "check": r.check.label(),
                    "status": status,
                    "count": count,
                    "vars": r.num_vars,
                    "clauses": r.num_clauses,
                    "decisions": r.stats.decisions,
                    "seconds": r.seconds,
                })
            })
            .collect();
        json!({
            "verdict": self.verdict.name(),
            "reason": match &self.verdict { Verdict::Unknown(s) => Value::String(s.clone()), _ => Value::Null },
            "witness": witness,
            "mode": self.mode,
            "epsilon": self.epsilon,
            "seconds": self.seconds,
            "checks": checks,
        })
    }
}

fn counts_one(v: &WeightValue, epsilon: f64) -> bool {
    v.is_one(epsilon)
}

/// Decides `u == v` up to global phase.
pub fn check_equivalence(u: &Circuit, v: &Circuit, cfg: &CheckConfig) -> Result<Verdict, CheckError> {
    Ok(check_equivalence_report(u, v, cfg)?.verdict)
}

pub fn check_equivalence_report(
    u: &Circuit,
    v: &Circuit,
    cfg: &CheckConfig,
) -> Result<Report, CheckError> {
    check_identity_report(&miter(u, v)?, cfg)
}

/// Decides whether `a` is the identity up to global phase.
pub fn check_identity(a: &Circuit, cfg: &CheckConfig) -> Result<Verdict, CheckError> {
    Ok(check_identity_report(a, cfg)?.verdict)
}

pub fn check_identity_report(a: &Circuit, cfg: &CheckConfig) -> Result<Report, CheckError> {
    if cfg.epsilon.is_nan() || cfg.epsilon <= 0.0 {
        return Err(CheckError::BadEpsilon(cfg.epsilon));
    }
    if cfg.jobs == 0 {
        return Err(CheckError::NoJobs);
    }
    let start = Instant::now();
    let a = lower_gates(a);
    let n = a.num_qubits() as usize;
    let checks = check_order(a.num_qubits());
    // Surface encoding errors before spawning anything.
    if let Some(s) = checks.first() {
        build_check_formula(&a, &s.term(n))?;
    }
    let mut order: Vec<usize> = (0..checks.len()).collect();
    if let Some(seed) = cfg.dispatch_seed {
        order.shuffle(&mut ChaCha8Rng::seed_from_u64(seed));
    }

    let cancel = Arc::new(AtomicBool::new(false));
    let next = AtomicUsize::new(0);
    let results: Mutex<Vec<Option<CheckRecord>>> = Mutex::new(vec![None; checks.len()]);
    let opts = CountOptions {
        timeout: cfg.timeout,
        cancel: Some(cancel.clone()),
        cache_bytes: cfg.cache_bytes,
        heuristic: cfg.heuristic,
    };
    let worker = || loop {
        let slot = next.fetch_add(1, Ordering::SeqCst);
        let Some(&idx) = order.get(slot) else { break };
        let spec = checks[idx];
        let t0 = Instant::now();
        let record = if cancel.load(Ordering::SeqCst) {
            CheckRecord {
                check: spec,
                outcome: CheckOutcome::Skipped,
                stats: CountStats::default(),
                num_vars: 0,
                num_clauses: 0,
                seconds: 0.0,
            }
        } else {
            let f = build_check_formula(&a, &spec.term(n)).expect("encoded once already");
            let (outcome, stats) = match count_with(&f, &opts) {
                Ok(r) => {
                    if !counts_one(&r.value, cfg.epsilon) {
                        cancel.store(true, Ordering::SeqCst);
                    }
                    (CheckOutcome::Counted(r.value), r.stats)
                }
                Err(e) => (CheckOutcome::Failed(e), CountStats::default()),
            };
            CheckRecord {
                check: spec,
                outcome,
                stats,
                num_vars: f.num_vars,
                num_clauses: f.clauses.len(),
                seconds: t0.elapsed().as_secs_f64(),
            }
        };
        results.lock().expect("no poisoned workers")[idx] = Some(record);
    };
    let threads = cfg.jobs.min(checks.len()).max(1);
    std::thread::scope(|s| {
        for _ in 0..threads {
            s.spawn(worker);
        }
    });

    let records: Vec<CheckRecord> = results
        .into_inner()
        .expect("no poisoned workers")
        .into_iter()
        .map(|r| r.expect("every check recorded"))
        .collect();
    let verdict = aggregate(&records, cfg.epsilon);
    Ok(Report {
        verdict,
        mode: formula_mode(&a),
        epsilon: cfg.epsilon,
        checks: records,
        seconds: start.elapsed().as_secs_f64(),
    })
}

fn aggregate(records: &[CheckRecord], epsilon: f64) -> Verdict {
    let failing = records.iter().find_map(|r| match &r.outcome {
        CheckOutcome::Counted(v) if !counts_one(v, epsilon) => Some(Witness {
            check: r.check,
            count: v.clone(),
        }),
        _ => None,
    });
    if let Some(w) = failing {
        return Verdict::NotEquivalent(w);
    }
    let limit = records.iter().find_map(|r| match &r.outcome {
        CheckOutcome::Failed(e) => Some(format!("{}: {e}", r.check.label())),
        CheckOutcome::Skipped => Some(format!("{}: skipped", r.check.label())),
        CheckOutcome::Counted(_) => None,
    });
    match limit {
        Some(reason) => Verdict::Unknown(reason),
        None => Verdict::Equivalent,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::circuit::{q, Gate};
    use crate::weight::ExactWeight;

    fn circ(n: u32, gates: Vec<Gate>) -> Circuit {
        Circuit::from_gates(n, gates).unwrap()
    }

    #[test]
    fn interleaved_order() {
        let labels: Vec<String> = check_order(2).iter().map(CheckSpec::label).collect();
        assert_eq!(labels, ["X1", "Z1", "X2", "Z2"]);
    }

    #[test]
    fn tt_equals_s() {
        let u = circ(1, vec![Gate::T(q(1)), Gate::T(q(1))]);
        let v = circ(1, vec![Gate::S(q(1))]);
        let r = check_equivalence_report(&u, &v, &CheckConfig::default()).unwrap();
        assert_eq!(r.verdict, Verdict::Equivalent);
        assert_eq!(r.mode, Mode::Exact);
        for c in &r.checks {
            assert_eq!(
                c.outcome,
                CheckOutcome::Counted(WeightValue::Exact(ExactWeight::from_int(1)))
            );
        }
    }

    #[test]
    fn single_t_is_not_identity() {
        let cfg = CheckConfig {
            jobs: 1,
            ..CheckConfig::default()
        };
        let v = check_identity(&circ(1, vec![Gate::T(q(1))]), &cfg).unwrap();
        assert_eq!(
            v,
            Verdict::NotEquivalent(Witness {
                check: CheckSpec {
                    pauli: Pauli::X,
                    qubit: q(1)
                },
                count: WeightValue::Exact(ExactWeight::inv_sqrt2()),
            })
        );
    }

    #[test]
    fn rejects_width_mismatch() {
        assert_eq!(
            check_equivalence(&Circuit::new(1), &Circuit::new(2), &CheckConfig::default()),
            Err(CheckError::QubitCountMismatch(1, 2))
        );
    }
}
