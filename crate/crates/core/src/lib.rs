//! Quantum circuit equivalence checking by weighted model counting over
//! Pauli-basis encodings.

pub mod bench;
pub mod circuit;
pub mod cnf;
pub mod dimacs;
pub mod encoder;
pub mod equivalence;
pub mod oracle;
pub mod pauli;
pub mod qasm;
pub mod qm;
pub mod weight;
pub mod wmc;

pub use circuit::{adjoint, lower_gates, q, Circuit, Gate, GateKind, QubitIndex};
pub use cnf::{Lit, Mode, WeightedCnf};
pub use equivalence::{check_equivalence, check_identity, CheckConfig, Verdict};
pub use pauli::{Pauli, PauliTerm};
pub use weight::{ExactWeight, WeightValue};
pub use wmc::{brute_count, count, CountResult};
