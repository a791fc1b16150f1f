//! Dense-matrix ground truth for small circuits.
//!
//! Basis states are indexed with qubit 1 as the most significant bit, so
//! qubit 1 is the leftmost tensor factor. Everything here is `O(4^n)` or
//! worse and only meant for cross-checking the counting pipeline.

use num_complex::Complex64;
use thiserror::Error;

use crate::circuit::{Circuit, Gate};
use crate::pauli::PauliTerm;

pub const MAX_QUBITS: u32 = 10;
pub const MAX_DECOMPOSE_QUBITS: u32 = 6;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum OracleError {
    #[error("{got} qubits exceeds the oracle limit of {limit}")]
    TooManyQubits { got: u32, limit: u32 },
    #[error("dimension mismatch: {0} vs {1} qubits")]
    DimensionMismatch(u32, u32),
    #[error("coefficient has imaginary part {0:e}")]
    NonNegligibleImaginaryPart(f64),
    #[error("matrix is not Hermitian (deviation {0:e})")]
    NotHermitian(f64),
}

/// Row-major `2^n x 2^n` complex matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct DenseMatrix {
    n: u32,
    data: Vec<Complex64>,
}

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);
const I: Complex64 = Complex64::new(0.0, 1.0);

impl DenseMatrix {
    pub fn identity(n: u32) -> Self {
        let d = 1usize << n;
        let mut data = vec![ZERO; d * d];
        for i in 0..d {
            data[i * d + i] = ONE;
        }
        DenseMatrix { n, data }
    }

    pub fn from_rows(n: u32, rows: &[Vec<Complex64>]) -> Self {
        let d = 1usize << n;
        assert_eq!(rows.len(), d);
        let data = rows
            .iter()
            .flat_map(|r| {
                assert_eq!(r.len(), d);
                r.iter().copied()
            })
            .collect();
        DenseMatrix { n, data }
    }

    pub fn num_qubits(&self) -> u32 {
        self.n
    }

    pub fn dim(&self) -> usize {
        1 << self.n
    }

    pub fn get(&self, row: usize, col: usize) -> Complex64 {
        self.data[row * self.dim() + col]
    }

    pub fn column(&self, col: usize) -> Vec<Complex64> {
        (0..self.dim()).map(|r| self.get(r, col)).collect()
    }

    pub fn adjoint(&self) -> Self {
        let d = self.dim();
        let mut data = vec![ZERO; d * d];
        for r in 0..d {
            for c in 0..d {
                data[c * d + r] = self.data[r * d + c].conj();
            }
        }
        DenseMatrix { n: self.n, data }
    }

    pub fn mul(&self, other: &DenseMatrix) -> DenseMatrix {
        assert_eq!(self.n, other.n);
        let d = self.dim();
        let mut data = vec![ZERO; d * d];
        for r in 0..d {
            for k in 0..d {
                let a = self.data[r * d + k];
                if a == ZERO {
                    continue;
                }
                for c in 0..d {
                    data[r * d + c] += a * other.data[k * d + c];
                }
            }
        }
        DenseMatrix { n: self.n, data }
    }

    pub fn scale(&self, s: Complex64) -> DenseMatrix {
        DenseMatrix {
            n: self.n,
            data: self.data.iter().map(|&v| v * s).collect(),
        }
    }

    /// Largest entrywise modulus of `self - other`.
    pub fn max_diff(&self, other: &DenseMatrix) -> f64 {
        self.data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    pub fn is_unitary(&self, tol: f64) -> bool {
        self.adjoint().mul(self).max_diff(&DenseMatrix::identity(self.n)) <= tol
    }

    pub fn hermitian_deviation(&self) -> f64 {
        self.max_diff(&self.adjoint())
    }

    /// Left-multiplies by `g` embedded on its qubits.
    pub fn apply_gate(&mut self, g: &Gate) {
        let qs: Vec<usize> = g.qubits().iter().map(|q| q.offset()).collect();
        let local = gate_matrix(g);
        let k = qs.len();
        let d = self.dim();
        let n = self.n as usize;
        let masks: Vec<usize> = qs.iter().map(|&j| 1 << (n - 1 - j)).collect();
        let all: usize = masks.iter().sum();
        let offsets: Vec<usize> = (0..1usize << k)
            .map(|s| {
                (0..k)
                    .filter(|&i| s >> (k - 1 - i) & 1 == 1)
                    .map(|i| masks[i])
                    .sum()
            })
            .collect();
        let mut buf = vec![ZERO; 1 << k];
        for col in 0..d {
            for base in (0..d).filter(|b| b & all == 0) {
                for (s, &off) in offsets.iter().enumerate() {
                    buf[s] = self.data[(base | off) * d + col];
                }
                for (s, &off) in offsets.iter().enumerate() {
                    let row = &local[s * (1 << k)..(s + 1) * (1 << k)];
                    let v = row.iter().zip(&buf).map(|(a, b)| a * b).sum();
                    self.data[(base | off) * d + col] = v;
                }
            }
        }
    }
}

/// Local gate matrix, row-major over its own qubits in argument order.
pub fn gate_matrix(g: &Gate) -> Vec<Complex64> {
    let r = std::f64::consts::FRAC_1_SQRT_2;
    let c = |re: f64, im: f64| Complex64::new(re, im);
    let phase = |t: f64| Complex64::from_polar(1.0, t);
    let diag = |ds: &[Complex64]| {
        let k = ds.len();
        let mut m = vec![ZERO; k * k];
        for (i, &v) in ds.iter().enumerate() {
            m[i * k + i] = v;
        }
        m
    };
    let perm = |to: &[usize]| {
        let k = to.len();
        let mut m = vec![ZERO; k * k];
        for (col, &row) in to.iter().enumerate() {
            m[row * k + col] = ONE;
        }
        m
    };
    use std::f64::consts::FRAC_PI_4;
    match *g {
        Gate::H(_) => vec![c(r, 0.0), c(r, 0.0), c(r, 0.0), c(-r, 0.0)],
        Gate::S(_) => diag(&[ONE, I]),
        Gate::Sdg(_) => diag(&[ONE, -I]),
        Gate::T(_) => diag(&[ONE, phase(FRAC_PI_4)]),
        Gate::Tdg(_) => diag(&[ONE, phase(-FRAC_PI_4)]),
        Gate::X(_) => perm(&[1, 0]),
        Gate::Y(_) => vec![ZERO, -I, I, ZERO],
        Gate::Z(_) => diag(&[ONE, -ONE]),
        Gate::CZ(..) => diag(&[ONE, ONE, ONE, -ONE]),
        Gate::CX(..) => perm(&[0, 1, 3, 2]),
        Gate::CCX(..) => perm(&[0, 1, 2, 3, 4, 5, 7, 6]),
        Gate::Rx(_, t) => {
            let (s, co) = (t / 2.0).sin_cos();
            vec![c(co, 0.0), c(0.0, -s), c(0.0, -s), c(co, 0.0)]
        }
        Gate::Rz(_, t) => diag(&[phase(-t / 2.0), phase(t / 2.0)]),
        Gate::P(_, t) => diag(&[ONE, phase(t)]),
    }
}

fn check_size(n: u32, limit: u32) -> Result<(), OracleError> {
    if n > limit {
        Err(OracleError::TooManyQubits { got: n, limit })
    } else {
        Ok(())
    }
}

/// `U_{m-1} ... U_0` for the circuit's gates `G_0, ..., G_{m-1}`.
pub fn unitary_of(c: &Circuit) -> Result<DenseMatrix, OracleError> {
    check_size(c.num_qubits(), MAX_QUBITS)?;
    let mut m = DenseMatrix::identity(c.num_qubits());
    for g in c.gates() {
        m.apply_gate(g);
    }
    Ok(m)
}

/// `P|b> = phase(b) |b ^ flip>`; returns `(flip, phase)`.
fn pauli_action(p: &PauliTerm, b: usize) -> (usize, Complex64) {
    let n = p.num_qubits();
    let mut flip = 0;
    let mut ph = if p.sign { -ONE } else { ONE };
    for j in 0..n {
        let bit = 1 << (n - 1 - j);
        if p.x[j] {
            flip |= bit;
        }
        if p.x[j] && p.z[j] {
            ph *= I;
        }
        if p.z[j] && b & bit != 0 {
            ph = -ph;
        }
    }
    (flip, ph)
}

pub fn pauli_matrix(p: &PauliTerm) -> DenseMatrix {
    let n = p.num_qubits() as u32;
    let d = 1usize << n;
    let mut data = vec![ZERO; d * d];
    for b in 0..d {
        let (flip, ph) = pauli_action(p, b);
        data[(b ^ flip) * d + b] = ph;
    }
    DenseMatrix { n, data }
}

/// `(1/2^n) Tr(P^dagger M)`, returned as a complex number.
fn trace_against(p: &PauliTerm, m: &DenseMatrix) -> Complex64 {
    // P^dagger = P for Pauli strings; Tr(P M) = sum_b P[b^f, b] M[b, b^f].
    let d = m.dim();
    let mut acc = ZERO;
    for b in 0..d {
        let (flip, ph) = pauli_action(p, b);
        acc += ph * m.get(b, b ^ flip);
    }
    acc / d as f64
}

pub fn conjugate(a: &DenseMatrix, p0: &PauliTerm) -> DenseMatrix {
    a.mul(&pauli_matrix(p0)).mul(&a.adjoint())
}

/// Coefficient of `p` in `A p0 A^dagger`.
pub fn pauli_coefficient(
    a: &DenseMatrix,
    p0: &PauliTerm,
    p: &PauliTerm,
) -> Result<f64, OracleError> {
    for q in [p0, p] {
        if q.num_qubits() as u32 != a.num_qubits() {
            return Err(OracleError::DimensionMismatch(
                q.num_qubits() as u32,
                a.num_qubits(),
            ));
        }
    }
    // Tr(P A P0 A^dagger) = sum_{b} P[b^f,b] sum_l (A P0)[b,l] conj(A[b^f,l])
    let d = a.dim();
    let mut ap0 = vec![ZERO; d * d];
    for col in 0..d {
        let (flip, ph) = pauli_action(p0, col);
        for row in 0..d {
            ap0[row * d + col] = a.get(row, col ^ flip) * ph;
        }
    }
    let mut acc = ZERO;
    for b in 0..d {
        let (flip, ph) = pauli_action(p, b);
        let row = b ^ flip;
        let mut s = ZERO;
        for l in 0..d {
            s += ap0[b * d + l] * a.get(row, l).conj();
        }
        acc += ph * s;
    }
    let v = acc / d as f64;
    if v.im.abs() >= 1e-10 {
        return Err(OracleError::NonNegligibleImaginaryPart(v.im));
    }
    Ok(v.re)
}

/// All `4^n` coefficients, in [`PauliTerm::from_index`] order.
pub fn decompose_in_pauli_basis(m: &DenseMatrix) -> Result<Vec<(PauliTerm, f64)>, OracleError> {
    check_size(m.num_qubits(), MAX_DECOMPOSE_QUBITS)?;
    let dev = m.hermitian_deviation();
    if dev > 1e-10 {
        return Err(OracleError::NotHermitian(dev));
    }
    Ok(PauliTerm::all(m.num_qubits() as usize)
        .map(|p| {
            let v = trace_against(&p, m).re;
            (p, v)
        })
        .collect())
}

/// `U = cV` for some unit-modulus `c`, to 1e-9 entrywise.
pub fn equal_up_to_phase(u: &DenseMatrix, v: &DenseMatrix) -> Result<bool, OracleError> {
    if u.n != v.n {
        return Err(OracleError::DimensionMismatch(u.n, v.n));
    }
    let (idx, _) = v
        .data
        .iter()
        .enumerate()
        .max_by(|a, b| a.1.norm().total_cmp(&b.1.norm()))
        .expect("non-empty matrix");
    if v.data[idx].norm() == 0.0 {
        return Ok(u.data.iter().all(|z| z.norm() <= 1e-9));
    }
    let c = u.data[idx] / v.data[idx];
    if (c.norm() - 1.0).abs() > 1e-9 {
        return Ok(false);
    }
    Ok(u.max_diff(&v.scale(c)) <= 1e-9)
}

/// Matrix-level equivalence of two circuits.
pub fn circuits_equivalent(u: &Circuit, v: &Circuit) -> Result<bool, OracleError> {
    if u.num_qubits() != v.num_qubits() {
        return Err(OracleError::DimensionMismatch(u.num_qubits(), v.num_qubits()));
    }
    equal_up_to_phase(&unitary_of(u)?, &unitary_of(v)?)
}
