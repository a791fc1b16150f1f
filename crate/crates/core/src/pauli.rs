//! Signed Pauli strings in the `(x, z)` bit-pair encoding:
//! `sigma[0,0] = I`, `sigma[0,1] = Z`, `sigma[1,0] = X`, `sigma[1,1] = Y`.

use std::fmt;
use std::str::FromStr;

use crate::circuit::QubitIndex;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Pauli {
    I,
    X,
    Y,
    Z,
}

impl Pauli {
    pub fn from_bits(x: bool, z: bool) -> Pauli {
        match (x, z) {
            (false, false) => Pauli::I,
            (false, true) => Pauli::Z,
            (true, false) => Pauli::X,
            (true, true) => Pauli::Y,
        }
    }

    pub fn bits(self) -> (bool, bool) {
        match self {
            Pauli::I => (false, false),
            Pauli::Z => (false, true),
            Pauli::X => (true, false),
            Pauli::Y => (true, true),
        }
    }

    pub fn symbol(self) -> char {
        match self {
            Pauli::I => 'I',
            Pauli::X => 'X',
            Pauli::Y => 'Y',
            Pauli::Z => 'Z',
        }
    }

    pub const ALL: [Pauli; 4] = [Pauli::I, Pauli::X, Pauli::Y, Pauli::Z];
}

/// `(-1)^sign * sigma[x_1,z_1] (x) ... (x) sigma[x_n,z_n]`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PauliTerm {
    pub sign: bool,
    pub x: Vec<bool>,
    pub z: Vec<bool>,
}

impl PauliTerm {
    pub fn identity(n: usize) -> Self {
        PauliTerm {
            sign: false,
            x: vec![false; n],
            z: vec![false; n],
        }
    }

    /// `P` on qubit `j`, identity elsewhere.
    pub fn single(n: usize, j: QubitIndex, p: Pauli) -> Self {
        let mut t = PauliTerm::identity(n);
        t.set(j.offset(), p);
        t
    }

    pub fn from_paulis(sign: bool, ps: &[Pauli]) -> Self {
        let mut t = PauliTerm::identity(ps.len());
        t.sign = sign;
        for (i, p) in ps.iter().enumerate() {
            t.set(i, *p);
        }
        t
    }

    /// Decodes `index` (base 4, qubit 1 most significant, digit order I X Y Z).
    pub fn from_index(n: usize, index: usize) -> Self {
        let mut t = PauliTerm::identity(n);
        for i in 0..n {
            let digit = (index >> (2 * (n - 1 - i))) & 3;
            t.set(i, Pauli::ALL[digit]);
        }
        t
    }

    /// All `4^n` unsigned strings in `from_index` order.
    pub fn all(n: usize) -> impl Iterator<Item = PauliTerm> {
        (0..1usize << (2 * n)).map(move |i| PauliTerm::from_index(n, i))
    }

    pub fn num_qubits(&self) -> usize {
        self.x.len()
    }

    pub fn get(&self, offset: usize) -> Pauli {
        Pauli::from_bits(self.x[offset], self.z[offset])
    }

    pub fn set(&mut self, offset: usize, p: Pauli) {
        let (x, z) = p.bits();
        self.x[offset] = x;
        self.z[offset] = z;
    }

    pub fn unsigned(&self) -> PauliTerm {
        PauliTerm {
            sign: false,
            ..self.clone()
        }
    }

    pub fn paulis(&self) -> Vec<Pauli> {
        (0..self.num_qubits()).map(|i| self.get(i)).collect()
    }
}

impl fmt::Display for PauliTerm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.sign {
            f.write_str("-")?;
        }
        for p in self.paulis() {
            write!(f, "{}", p.symbol())?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
#[error("not a Pauli string: {0:?}")]
pub struct ParsePauliError(pub String);

impl FromStr for PauliTerm {
    type Err = ParsePauliError;

    /// Accepts strings like `XZI`, `-YY` or `+Z`.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let (sign, body) = match s.as_bytes().first() {
            Some(b'-') => (true, &s[1..]),
            Some(b'+') => (false, &s[1..]),
            _ => (false, s),
        };
        let ps = body
            .chars()
            .map(|c| match c {
                'I' => Ok(Pauli::I),
                'X' => Ok(Pauli::X),
                'Y' => Ok(Pauli::Y),
                'Z' => Ok(Pauli::Z),
                _ => Err(ParsePauliError(s.to_string())),
            })
            .collect::<Result<Vec<_>, _>>()?;
        if ps.is_empty() {
            return Err(ParsePauliError(s.to_string()));
        }
        Ok(PauliTerm::from_paulis(sign, &ps))
    }
}
