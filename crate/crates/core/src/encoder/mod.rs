//! Compiles `A P A^dagger` into a weighted CNF whose weighted model count,
//! conjoined with a projection onto a Pauli string `Q`, equals the Pauli
//! coefficient of `Q`.
//!
//! Every time step carries bits `x(j,t)`, `z(j,t)` per qubit and a sign bit
//! `r(t)`. A gate only allocates fresh variables for bits it can change;
//! everything else keeps its id from the previous step, so frame conditions
//! cost no clauses. Non-Clifford gates add branch variables whose weights
//! carry the coefficients (`u` for T, `c`/`u` for rotations, `h` for
//! Toffoli). The final sign bit weighs -1 when set.

pub mod gates;
pub mod toffoli;

use thiserror::Error;

use crate::circuit::{quarter_turns, Circuit, Gate, GateKind, QubitIndex};
use crate::cnf::{Lit, Mode, WeightedCnf};
use crate::pauli::PauliTerm;
use crate::qm::LocalLit;
use crate::weight::{ExactWeight, WeightValue};

use gates::Template;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum EncodeError {
    #[error("gate {0:?} must be lowered before encoding")]
    NonNativeGate(GateKind),
    #[error("angle {0} needs float mode")]
    InexactAngle(f64),
    #[error("Pauli string has {got} qubits, circuit has {want}")]
    WidthMismatch { got: usize, want: usize },
    #[error("qubit {0} out of range")]
    QubitOutOfRange(u32),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum ToffoliEncoding {
    /// Implication clauses grouped by input row.
    #[default]
    PerRow,
    /// Quine-McCluskey cover of the whole relation.
    Minimized,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct EncoderOptions {
    pub toffoli: ToffoliEncoding,
}

/// Variable ids of one time step.
#[derive(Debug, Clone, PartialEq)]
pub struct StepVars {
    pub x: Vec<u32>,
    pub z: Vec<u32>,
    pub r: u32,
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct VarTimeline {
    /// `steps[t]` for `t` in `0..=m`.
    pub steps: Vec<StepVars>,
    /// Fresh branch variables introduced by gate `t`.
    pub branches: Vec<Vec<u32>>,
}

impl VarTimeline {
    pub fn x(&self, j: QubitIndex, t: usize) -> u32 {
        self.steps[t].x[j.offset()]
    }

    pub fn z(&self, j: QubitIndex, t: usize) -> u32 {
        self.steps[t].z[j.offset()]
    }

    pub fn r(&self, t: usize) -> u32 {
        self.steps[t].r
    }

    pub fn last(&self) -> &StepVars {
        self.steps.last().expect("timeline has step 0")
    }
}

/// Incremental builder: initial string, gates in order, then projection.
#[derive(Debug, Clone)]
pub struct Encoder {
    cnf: WeightedCnf,
    x: Vec<u32>,
    z: Vec<u32>,
    r: u32,
    timeline: VarTimeline,
    opts: EncoderOptions,
}

fn lit(id: u32, positive: bool) -> Lit {
    if positive {
        id as Lit
    } else {
        -(id as Lit)
    }
}

/// `(cos, sin)` of `k * pi/4` in the exact ring.
fn exact_trig(k: u8) -> (ExactWeight, ExactWeight) {
    let r = ExactWeight::inv_sqrt2;
    let neg = |w: ExactWeight| -&w;
    let one = || ExactWeight::from_int(1);
    let zero = || ExactWeight::from_int(0);
    match k {
        0 => (one(), zero()),
        1 => (r(), r()),
        2 => (zero(), one()),
        3 => (neg(r()), r()),
        4 => (neg(one()), zero()),
        5 => (neg(r()), neg(r())),
        6 => (zero(), neg(one())),
        7 => (r(), neg(r())),
        _ => unreachable!(),
    }
}

impl Encoder {
    /// Allocates step-0 variables, qubit by qubit, then the sign bit.
    pub fn new(n: usize, mode: Mode, opts: EncoderOptions) -> Self {
        let mut cnf = WeightedCnf::new(mode);
        let mut x = Vec::with_capacity(n);
        let mut z = Vec::with_capacity(n);
        for _ in 0..n {
            x.push(cnf.new_var());
            z.push(cnf.new_var());
        }
        let r = cnf.new_var();
        let timeline = VarTimeline {
            steps: vec![StepVars {
                x: x.clone(),
                z: z.clone(),
                r,
            }],
            branches: Vec::new(),
        };
        cnf.all_constrained = true;
        Encoder {
            cnf,
            x,
            z,
            r,
            timeline,
            opts,
        }
    }

    pub fn num_qubits(&self) -> usize {
        self.x.len()
    }

    fn check_width(&self, p: &PauliTerm) -> Result<(), EncodeError> {
        if p.num_qubits() != self.num_qubits() {
            return Err(EncodeError::WidthMismatch {
                got: p.num_qubits(),
                want: self.num_qubits(),
            });
        }
        Ok(())
    }

    /// Unit clauses pinning step 0 to `p0`, sign included.
    pub fn encode_initial(&mut self, p0: &PauliTerm) -> Result<(), EncodeError> {
        self.check_width(p0)?;
        for j in 0..self.num_qubits() {
            self.cnf.add_clause(vec![lit(self.x[j], p0.x[j])]);
            self.cnf.add_clause(vec![lit(self.z[j], p0.z[j])]);
        }
        self.cnf.add_clause(vec![lit(self.r, p0.sign)]);
        Ok(())
    }

    fn emit(&mut self, clauses: &[Vec<LocalLit>], ids: &[u32]) {
        for c in clauses {
            self.cnf
                .add_clause(c.iter().map(|&(i, pos)| lit(ids[i], pos)).collect());
        }
    }

    fn apply(&mut self, t: &Template, ids: &[u32]) {
        debug_assert_eq!(t.slots, ids.len());
        self.emit(&t.clauses, ids);
    }

    fn weight(&mut self, var: u32, w: ExactWeight) {
        self.cnf
            .set_exact_weight(var as Lit, w)
            .expect("encoder weights are finite and declared");
    }

    fn float_weight(&mut self, var: u32, v: f64) -> Result<(), EncodeError> {
        let w = WeightValue::float(v).map_err(|_| EncodeError::InexactAngle(v))?;
        self.cnf
            .set_weight(var as Lit, w)
            .map_err(|_| EncodeError::InexactAngle(v))
    }

    fn rotation_weights(&mut self, c: u32, u: u32, theta: f64) -> Result<(), EncodeError> {
        match (self.cnf.mode, quarter_turns(theta)) {
            (Mode::Exact, Some(k)) => {
                let (cos, sin) = exact_trig(k);
                self.weight(c, cos);
                self.weight(u, sin);
                Ok(())
            }
            (Mode::Exact, None) => Err(EncodeError::InexactAngle(theta)),
            (Mode::Float, _) => {
                self.float_weight(c, theta.cos())?;
                self.float_weight(u, theta.sin())
            }
        }
    }

    fn qubit(&self, a: QubitIndex) -> Result<usize, EncodeError> {
        let j = a.offset();
        if j >= self.num_qubits() {
            return Err(EncodeError::QubitOutOfRange(a.get()));
        }
        Ok(j)
    }

    /// Relates step `t` to step `t+1` for one native gate.
    pub fn encode_gate(&mut self, g: &Gate) -> Result<(), EncodeError> {
        let mut branches = Vec::new();
        match *g {
            Gate::H(a) => {
                let j = self.qubit(a)?;
                let r2 = self.cnf.new_var();
                self.apply(gates::hadamard(), &[self.x[j], self.z[j], self.r, r2]);
                std::mem::swap(&mut self.x[j], &mut self.z[j]);
                self.r = r2;
            }
            Gate::S(a) | Gate::Sdg(a) => {
                let j = self.qubit(a)?;
                let z2 = self.cnf.new_var();
                let r2 = self.cnf.new_var();
                let t = if g.kind() == GateKind::S {
                    gates::phase()
                } else {
                    gates::phase_dagger()
                };
                self.apply(t, &[self.x[j], self.z[j], self.r, z2, r2]);
                self.z[j] = z2;
                self.r = r2;
            }
            Gate::T(a) | Gate::Tdg(a) => {
                let j = self.qubit(a)?;
                let z2 = self.cnf.new_var();
                let r2 = self.cnf.new_var();
                let u = self.cnf.new_var();
                let t = if g.kind() == GateKind::T {
                    gates::t_gate()
                } else {
                    gates::t_dagger()
                };
                self.apply(t, &[self.x[j], self.z[j], self.r, z2, r2, u]);
                self.weight(u, ExactWeight::inv_sqrt2());
                self.z[j] = z2;
                self.r = r2;
                branches.push(u);
            }
            Gate::CZ(a, b) => {
                let (c, t) = (self.qubit(a)?, self.qubit(b)?);
                let zc = self.cnf.new_var();
                let zt = self.cnf.new_var();
                let r2 = self.cnf.new_var();
                let ids = [
                    self.x[c], self.z[c], self.x[t], self.z[t], self.r, zc, zt, r2,
                ];
                self.apply(gates::cz(), &ids);
                self.z[c] = zc;
                self.z[t] = zt;
                self.r = r2;
            }
            Gate::Rx(a, theta) => {
                let j = self.qubit(a)?;
                let x2 = self.cnf.new_var();
                let r2 = self.cnf.new_var();
                let c = self.cnf.new_var();
                let u = self.cnf.new_var();
                self.apply(gates::rx(), &[self.x[j], self.z[j], self.r, x2, r2, c, u]);
                self.rotation_weights(c, u, theta)?;
                self.x[j] = x2;
                self.r = r2;
                branches.extend([c, u]);
            }
            Gate::Rz(a, theta) | Gate::P(a, theta) => {
                let j = self.qubit(a)?;
                let z2 = self.cnf.new_var();
                let r2 = self.cnf.new_var();
                let c = self.cnf.new_var();
                let u = self.cnf.new_var();
                self.apply(gates::rz(), &[self.x[j], self.z[j], self.r, z2, r2, c, u]);
                self.rotation_weights(c, u, theta)?;
                self.z[j] = z2;
                self.r = r2;
                branches.extend([c, u]);
            }
            Gate::CCX(a, b, c) => {
                let qs = [self.qubit(a)?, self.qubit(b)?, self.qubit(c)?];
                self.encode_toffoli(qs, &mut branches);
            }
            Gate::X(_) | Gate::Y(_) | Gate::Z(_) | Gate::CX(..) => {
                return Err(EncodeError::NonNativeGate(g.kind()))
            }
        }
        self.timeline.steps.push(StepVars {
            x: self.x.clone(),
            z: self.z.clone(),
            r: self.r,
        });
        self.timeline.branches.push(branches);
        Ok(())
    }

    fn encode_toffoli(&mut self, qs: [usize; 3], branches: &mut Vec<u32>) {
        let slots = toffoli::slots();
        let mut ids = vec![0u32; slots.count];
        for (i, &j) in qs.iter().enumerate() {
            ids[2 * i] = self.x[j];
            ids[2 * i + 1] = self.z[j];
        }
        ids[slots.sign_in] = self.r;
        let changing = toffoli::changing_bits();
        for (k, &bit) in changing.iter().enumerate() {
            let v = self.cnf.new_var();
            ids[slots.first_out + k] = v;
            let j = qs[bit / 2];
            if bit % 2 == 0 {
                self.x[j] = v;
            } else {
                self.z[j] = v;
            }
        }
        let r2 = self.cnf.new_var();
        let h = self.cnf.new_var();
        ids[slots.sign_out] = r2;
        ids[slots.branch] = h;
        let clauses = match self.opts.toffoli {
            ToffoliEncoding::PerRow => toffoli::clauses_per_row(),
            ToffoliEncoding::Minimized => toffoli::clauses_minimized(),
        };
        self.emit(clauses, &ids);
        self.weight(h, ExactWeight::half());
        self.r = r2;
        branches.push(h);
    }

    /// Pins the final x/z bits to `p` (its sign is ignored) and weights the
    /// final sign bit with -1.
    pub fn encode_projection(&mut self, p: &PauliTerm) -> Result<(), EncodeError> {
        self.check_width(p)?;
        for j in 0..self.num_qubits() {
            self.cnf.add_clause(vec![lit(self.x[j], p.x[j])]);
            self.cnf.add_clause(vec![lit(self.z[j], p.z[j])]);
        }
        self.weight(self.r, ExactWeight::from_int(-1));
        Ok(())
    }

    pub fn cnf(&self) -> &WeightedCnf {
        &self.cnf
    }

    pub fn timeline(&self) -> &VarTimeline {
        &self.timeline
    }

    pub fn finish(self) -> (WeightedCnf, VarTimeline) {
        (self.cnf, self.timeline)
    }
}

/// Exact unless some angle is not a multiple of pi/4.
pub fn formula_mode(a: &Circuit) -> Mode {
    if a.has_arbitrary_angles() {
        Mode::Float
    } else {
        Mode::Exact
    }
}

/// Formula whose count is the coefficient of `p` in `A p0 A^dagger`.
pub fn build_coefficient_formula(
    a: &Circuit,
    p0: &PauliTerm,
    p: &PauliTerm,
    opts: EncoderOptions,
) -> Result<WeightedCnf, EncodeError> {
    let mut enc = Encoder::new(a.num_qubits() as usize, formula_mode(a), opts);
    enc.encode_initial(p0)?;
    for g in a.gates() {
        enc.encode_gate(g)?;
    }
    enc.encode_projection(p)?;
    Ok(enc.finish().0)
}

/// The check formula: projection onto the initial string itself.
pub fn build_check_formula(a: &Circuit, p0: &PauliTerm) -> Result<WeightedCnf, EncodeError> {
    build_coefficient_formula(a, p0, &p0.unsigned(), EncoderOptions::default())
}
