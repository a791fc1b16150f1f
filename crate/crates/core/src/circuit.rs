//! Gate-level circuit representation.
//!
//! Qubits are numbered from 1, and qubit 1 is the leftmost tensor factor.
//! A circuit is an ordered list of gates; the first gate is applied first.

use std::f64::consts::FRAC_PI_4;
use std::fmt;

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum CircuitError {
    #[error("qubit index {index} out of range for a {n}-qubit circuit")]
    QubitOutOfRange { index: u32, n: u32 },
    #[error("gate {gate} uses qubit {index} more than once")]
    RepeatedQubit { gate: &'static str, index: u32 },
    #[error("qubit indices start at 1")]
    ZeroQubit,
}

/// A 1-based qubit number.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct QubitIndex(u32);

impl QubitIndex {
    pub fn new(value: u32) -> Result<Self, CircuitError> {
        if value == 0 {
            return Err(CircuitError::ZeroQubit);
        }
        Ok(QubitIndex(value))
    }

    pub fn get(self) -> u32 {
        self.0
    }

    /// Offset into 0-based arrays.
    pub fn offset(self) -> usize {
        (self.0 - 1) as usize
    }
}

impl fmt::Display for QubitIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// Shorthand for building gates in code and tests. Panics on 0.
pub fn q(value: u32) -> QubitIndex {
    QubitIndex::new(value).expect("qubit indices start at 1")
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum GateKind {
    H,
    S,
    Sdg,
    T,
    Tdg,
    X,
    Y,
    Z,
    CZ,
    CX,
    CCX,
    Rx,
    Rz,
    P,
}

impl GateKind {
    pub fn name(self) -> &'static str {
        match self {
            GateKind::H => "h",
            GateKind::S => "s",
            GateKind::Sdg => "sdg",
            GateKind::T => "t",
            GateKind::Tdg => "tdg",
            GateKind::X => "x",
            GateKind::Y => "y",
            GateKind::Z => "z",
            GateKind::CZ => "cz",
            GateKind::CX => "cx",
            GateKind::CCX => "ccx",
            GateKind::Rx => "rx",
            GateKind::Rz => "rz",
            GateKind::P => "p",
        }
    }

    pub fn arity(self) -> usize {
        match self {
            GateKind::CZ | GateKind::CX => 2,
            GateKind::CCX => 3,
            _ => 1,
        }
    }

    pub fn has_angle(self) -> bool {
        matches!(self, GateKind::Rx | GateKind::Rz | GateKind::P)
    }

    /// Kinds the Pauli encoder handles directly.
    pub fn is_native(self) -> bool {
        !matches!(self, GateKind::X | GateKind::Y | GateKind::Z | GateKind::CX)
    }
}

/// One gate application. Multi-qubit gates list controls first.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Gate {
    H(QubitIndex),
    S(QubitIndex),
    Sdg(QubitIndex),
    T(QubitIndex),
    Tdg(QubitIndex),
    X(QubitIndex),
    Y(QubitIndex),
    Z(QubitIndex),
    CZ(QubitIndex, QubitIndex),
    CX(QubitIndex, QubitIndex),
    CCX(QubitIndex, QubitIndex, QubitIndex),
    Rx(QubitIndex, f64),
    Rz(QubitIndex, f64),
    P(QubitIndex, f64),
}

impl Gate {
    pub fn kind(&self) -> GateKind {
        match self {
            Gate::H(_) => GateKind::H,
            Gate::S(_) => GateKind::S,
            Gate::Sdg(_) => GateKind::Sdg,
            Gate::T(_) => GateKind::T,
            Gate::Tdg(_) => GateKind::Tdg,
            Gate::X(_) => GateKind::X,
            Gate::Y(_) => GateKind::Y,
            Gate::Z(_) => GateKind::Z,
            Gate::CZ(..) => GateKind::CZ,
            Gate::CX(..) => GateKind::CX,
            Gate::CCX(..) => GateKind::CCX,
            Gate::Rx(..) => GateKind::Rx,
            Gate::Rz(..) => GateKind::Rz,
            Gate::P(..) => GateKind::P,
        }
    }

    pub fn qubits(&self) -> Vec<QubitIndex> {
        match *self {
            Gate::H(a)
            | Gate::S(a)
            | Gate::Sdg(a)
            | Gate::T(a)
            | Gate::Tdg(a)
            | Gate::X(a)
            | Gate::Y(a)
            | Gate::Z(a)
            | Gate::Rx(a, _)
            | Gate::Rz(a, _)
            | Gate::P(a, _) => vec![a],
            Gate::CZ(a, b) | Gate::CX(a, b) => vec![a, b],
            Gate::CCX(a, b, c) => vec![a, b, c],
        }
    }

    pub fn angle(&self) -> Option<f64> {
        match *self {
            Gate::Rx(_, t) | Gate::Rz(_, t) | Gate::P(_, t) => Some(t),
            _ => None,
        }
    }

    /// Same gate with its angle replaced; gates without an angle are returned unchanged.
    pub fn with_angle(&self, theta: f64) -> Gate {
        match *self {
            Gate::Rx(a, _) => Gate::Rx(a, theta),
            Gate::Rz(a, _) => Gate::Rz(a, theta),
            Gate::P(a, _) => Gate::P(a, theta),
            g => g,
        }
    }

    pub fn dagger(&self) -> Gate {
        match *self {
            Gate::S(a) => Gate::Sdg(a),
            Gate::Sdg(a) => Gate::S(a),
            Gate::T(a) => Gate::Tdg(a),
            Gate::Tdg(a) => Gate::T(a),
            Gate::Rx(a, t) => Gate::Rx(a, -t),
            Gate::Rz(a, t) => Gate::Rz(a, -t),
            Gate::P(a, t) => Gate::P(a, -t),
            g => g,
        }
    }

    /// Diagonal in the computational basis.
    pub fn is_diagonal(&self) -> bool {
        matches!(
            self.kind(),
            GateKind::S
                | GateKind::Sdg
                | GateKind::T
                | GateKind::Tdg
                | GateKind::Z
                | GateKind::CZ
                | GateKind::Rz
                | GateKind::P
        )
    }

    fn validate(&self, n: u32) -> Result<(), CircuitError> {
        let qs = self.qubits();
        for (i, a) in qs.iter().enumerate() {
            if a.get() > n {
                return Err(CircuitError::QubitOutOfRange { index: a.get(), n });
            }
            if qs[..i].contains(a) {
                return Err(CircuitError::RepeatedQubit {
                    gate: self.kind().name(),
                    index: a.get(),
                });
            }
        }
        Ok(())
    }
}

impl fmt::Display for Gate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.kind().name())?;
        if let Some(t) = self.angle() {
            write!(f, "({t})")?;
        }
        let qs: Vec<String> = self.qubits().iter().map(|q| q.to_string()).collect();
        write!(f, " {}", qs.join(","))
    }
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct Circuit {
    n: u32,
    gates: Vec<Gate>,
}

impl Circuit {
    pub fn new(n: u32) -> Self {
        Circuit { n, gates: Vec::new() }
    }

    pub fn from_gates(n: u32, gates: Vec<Gate>) -> Result<Self, CircuitError> {
        let mut c = Circuit::new(n);
        for g in gates {
            c.push(g)?;
        }
        Ok(c)
    }

    pub fn push(&mut self, gate: Gate) -> Result<(), CircuitError> {
        gate.validate(self.n)?;
        self.gates.push(gate);
        Ok(())
    }

    pub fn num_qubits(&self) -> u32 {
        self.n
    }

    pub fn gates(&self) -> &[Gate] {
        &self.gates
    }

    pub fn len(&self) -> usize {
        self.gates.len()
    }

    pub fn is_empty(&self) -> bool {
        self.gates.is_empty()
    }

    /// Replaces the gate list. Gates are re-validated.
    pub fn with_gates(&self, gates: Vec<Gate>) -> Result<Circuit, CircuitError> {
        Circuit::from_gates(self.n, gates)
    }

    /// `self` followed by `other`.
    pub fn concat(&self, other: &Circuit) -> Circuit {
        assert_eq!(self.n, other.n, "qubit counts differ");
        let mut gates = self.gates.clone();
        gates.extend_from_slice(&other.gates);
        Circuit { n: self.n, gates }
    }

    /// True when some gate carries an angle that is not a multiple of pi/4.
    pub fn has_arbitrary_angles(&self) -> bool {
        self.gates
            .iter()
            .filter_map(Gate::angle)
            .any(|t| quarter_turns(t).is_none())
    }
}

/// Reversed circuit with every gate replaced by its inverse.
pub fn adjoint(c: &Circuit) -> Circuit {
    Circuit {
        n: c.n,
        gates: c.gates.iter().rev().map(Gate::dagger).collect(),
    }
}

const QUARTER_TOLERANCE: f64 = 1e-12;

/// Returns `k mod 8` when `theta` is `k * pi/4`.
pub fn quarter_turns(theta: f64) -> Option<u8> {
    let k = theta / FRAC_PI_4;
    let r = k.round();
    if (k - r).abs() <= QUARTER_TOLERANCE {
        Some(r.rem_euclid(8.0) as u8)
    } else {
        None
    }
}

/// Z-axis phase `k * pi/4` as S/T gates (exact up to global phase).
fn phase_steps(a: QubitIndex, k: u8) -> Vec<Gate> {
    match k {
        0 => vec![],
        1 => vec![Gate::T(a)],
        2 => vec![Gate::S(a)],
        3 => vec![Gate::S(a), Gate::T(a)],
        4 => vec![Gate::S(a), Gate::S(a)],
        5 => vec![Gate::Sdg(a), Gate::Tdg(a)],
        6 => vec![Gate::Sdg(a)],
        7 => vec![Gate::Tdg(a)],
        _ => unreachable!(),
    }
}

/// Rewrites a circuit into the kinds the encoder handles directly:
/// H, S, Sdg, T, Tdg, CZ, CCX, Rx, Rz, P. Angles that are multiples of
/// pi/4 become S/T sequences so counting can stay exact. The result agrees
/// with the input up to global phase.
pub fn lower_gates(c: &Circuit) -> Circuit {
    let mut out = Vec::with_capacity(c.gates.len());
    for g in &c.gates {
        match *g {
            Gate::X(a) => out.extend([Gate::H(a), Gate::S(a), Gate::S(a), Gate::H(a)]),
            // Y is proportional to X.Z, so apply Z first.
            Gate::Y(a) => out.extend([
                Gate::S(a),
                Gate::S(a),
                Gate::H(a),
                Gate::S(a),
                Gate::S(a),
                Gate::H(a),
            ]),
            Gate::Z(a) => out.extend([Gate::S(a), Gate::S(a)]),
            Gate::CX(ctrl, tgt) => out.extend([Gate::H(tgt), Gate::CZ(ctrl, tgt), Gate::H(tgt)]),
            Gate::Rz(a, t) | Gate::P(a, t) => match quarter_turns(t) {
                Some(k) => out.extend(phase_steps(a, k)),
                None => out.push(*g),
            },
            Gate::Rx(a, t) => match quarter_turns(t) {
                Some(0) => {}
                Some(k) => {
                    out.push(Gate::H(a));
                    out.extend(phase_steps(a, k));
                    out.push(Gate::H(a));
                }
                None => out.push(*g),
            },
            g => out.push(g),
        }
    }
    Circuit { n: c.n, gates: out }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn adjoint_reverses_and_daggers() {
        let c = Circuit::from_gates(1, vec![Gate::H(q(1)), Gate::S(q(1))]).unwrap();
        assert_eq!(adjoint(&c).gates(), &[Gate::Sdg(q(1)), Gate::H(q(1))]);

        let cz = Circuit::from_gates(2, vec![Gate::CZ(q(1), q(2))]).unwrap();
        assert_eq!(adjoint(&cz).gates(), cz.gates());

        let tt = Circuit::from_gates(1, vec![Gate::T(q(1)), Gate::T(q(1))]).unwrap();
        assert_eq!(adjoint(&tt).gates(), &[Gate::Tdg(q(1)), Gate::Tdg(q(1))]);
    }

    #[test]
    fn lowering_rules() {
        let c = Circuit::from_gates(2, vec![Gate::CX(q(1), q(2))]).unwrap();
        assert_eq!(
            lower_gates(&c).gates(),
            &[Gate::H(q(2)), Gate::CZ(q(1), q(2)), Gate::H(q(2))]
        );
        let c = Circuit::from_gates(2, vec![Gate::CZ(q(1), q(2))]).unwrap();
        assert_eq!(lower_gates(&c).gates(), c.gates());
        let c = Circuit::from_gates(1, vec![Gate::Z(q(1))]).unwrap();
        assert_eq!(lower_gates(&c).gates(), &[Gate::S(q(1)), Gate::S(q(1))]);
    }

    #[test]
    fn quarter_turn_angles_become_phase_gates() {
        let c = Circuit::from_gates(1, vec![Gate::Rz(q(1), -PI / 4.0)]).unwrap();
        assert_eq!(lower_gates(&c).gates(), &[Gate::Tdg(q(1))]);
        let c = Circuit::from_gates(1, vec![Gate::P(q(1), 0.3)]).unwrap();
        assert_eq!(lower_gates(&c).gates(), c.gates());
        assert!(c.has_arbitrary_angles());
        assert_eq!(quarter_turns(3.0 * PI / 4.0), Some(3));
        assert_eq!(quarter_turns(PI / 4.0 + 1e-7), None);
    }

    #[test]
    fn gate_validation() {
        let mut c = Circuit::new(2);
        assert_eq!(
            c.push(Gate::CZ(q(1), q(1))),
            Err(CircuitError::RepeatedQubit { gate: "cz", index: 1 })
        );
        assert_eq!(
            c.push(Gate::H(q(3))),
            Err(CircuitError::QubitOutOfRange { index: 3, n: 2 })
        );
        assert_eq!(QubitIndex::new(0), Err(CircuitError::ZeroQubit));
    }

    #[test]
    fn double_adjoint_restores_sequence() {
        let c = Circuit::from_gates(
            3,
            vec![
                Gate::T(q(1)),
                Gate::Rx(q(2), 0.7),
                Gate::CCX(q(1), q(2), q(3)),
                Gate::Sdg(q(3)),
            ],
        )
        .unwrap();
        assert_eq!(adjoint(&adjoint(&c)), c);
    }
}
