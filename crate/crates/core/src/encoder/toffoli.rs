//! Toffoli conjugation table and its CNF relation.
//!
//! Conjugating a 3-qubit Pauli string by Toffoli yields either one Pauli
//! string or a sum of four with coefficients +-1/2. The full 64-row table
//! lives in `toffoli_table.txt`; it is compiled into a relation over the
//! six input bits, the sign, the output bits that can change, and a branch
//! variable `h` that is set exactly on the four-term rows (weight 1/2).

use std::sync::OnceLock;

use crate::pauli::Pauli;
use crate::qm::{clause_of_cube, cnf_of, prime_implicants, LocalLit};

const TABLE: &str = include_str!("toffoli_table.txt");

#[derive(Debug, Clone, PartialEq)]
pub struct ToffoliRow {
    pub input: [Pauli; 3],
    /// `(negative, string)` summands; four-term rows are scaled by 1/2.
    pub outputs: Vec<(bool, [Pauli; 3])>,
}

impl ToffoliRow {
    pub fn is_branching(&self) -> bool {
        self.outputs.len() > 1
    }
}

fn parse_string(s: &str) -> [Pauli; 3] {
    let ps: Vec<Pauli> = s
        .chars()
        .map(|c| match c {
            'I' => Pauli::I,
            'X' => Pauli::X,
            'Y' => Pauli::Y,
            'Z' => Pauli::Z,
            _ => panic!("bad Pauli symbol {c:?} in Toffoli table"),
        })
        .collect();
    [ps[0], ps[1], ps[2]]
}

/// Six-bit pattern: qubit `i` contributes `x` at bit `2i` and `z` at `2i+1`.
pub fn pattern(ps: &[Pauli; 3]) -> u32 {
    ps.iter().enumerate().fold(0, |acc, (i, p)| {
        let (x, z) = p.bits();
        acc | (x as u32) << (2 * i) | (z as u32) << (2 * i + 1)
    })
}

/// Rows indexed by input pattern.
pub fn table() -> &'static [ToffoliRow] {
    static CELL: OnceLock<Vec<ToffoliRow>> = OnceLock::new();
    CELL.get_or_init(|| {
        let mut rows: Vec<Option<ToffoliRow>> = vec![None; 64];
        for line in TABLE.lines().filter(|l| !l.trim().is_empty()) {
            let (lhs, rhs) = line.split_once(':').expect("row separator");
            let input = parse_string(lhs.trim());
            let outputs = rhs
                .split_whitespace()
                .map(|t| (t.starts_with('-'), parse_string(&t[1..])))
                .collect();
            rows[pattern(&input) as usize] = Some(ToffoliRow { input, outputs });
        }
        rows.into_iter()
            .map(|r| r.expect("table covers all 64 inputs"))
            .collect()
    })
}

/// Bit positions (in the six-bit pattern) that never change under
/// conjugation; the encoder reuses their variables.
pub fn invariant_bits() -> &'static [usize] {
    static CELL: OnceLock<Vec<usize>> = OnceLock::new();
    CELL.get_or_init(|| {
        (0..6)
            .filter(|&b| {
                table().iter().all(|row| {
                    let i = pattern(&row.input) >> b & 1;
                    row.outputs.iter().all(|(_, o)| pattern(o) >> b & 1 == i)
                })
            })
            .collect()
    })
}

pub fn changing_bits() -> Vec<usize> {
    (0..6).filter(|b| !invariant_bits().contains(b)).collect()
}

/// Local slot layout of the compiled relation.
#[derive(Debug, Clone, Copy)]
pub struct Slots {
    pub sign_in: usize,
    pub first_out: usize,
    pub sign_out: usize,
    pub branch: usize,
    pub count: usize,
}

pub fn slots() -> Slots {
    let free = changing_bits().len();
    Slots {
        sign_in: 6,
        first_out: 7,
        sign_out: 7 + free,
        branch: 8 + free,
        count: 9 + free,
    }
}

fn row_admits(row: &ToffoliRow, bits: u32, s: Slots) -> bool {
    let free = changing_bits();
    let r = bits >> s.sign_in & 1 == 1;
    let r2 = bits >> s.sign_out & 1 == 1;
    let h = bits >> s.branch & 1 == 1;
    if h != row.is_branching() {
        return false;
    }
    row.outputs.iter().any(|(neg, o)| {
        let op = pattern(o);
        let outs_match = free
            .iter()
            .enumerate()
            .all(|(k, &b)| (bits >> (s.first_out + k) & 1) == (op >> b & 1));
        outs_match && r2 == (r ^ neg)
    })
}

/// Full relation as a truth function over local slots.
pub fn relation(bits: u32) -> bool {
    let row = &table()[(bits & 63) as usize];
    row_admits(row, bits, slots())
}

/// One group of implication clauses per input row: the row's input
/// pattern implies the prime implicates of the row's output relation.
pub fn clauses_per_row() -> &'static [Vec<LocalLit>] {
    static CELL: OnceLock<Vec<Vec<LocalLit>>> = OnceLock::new();
    CELL.get_or_init(|| {
        let s = slots();
        let tail: Vec<usize> = (s.sign_in..s.count).collect();
        let mut out = Vec::new();
        for (pat, row) in table().iter().enumerate() {
            let local = |p: u32| {
                let mut bits = pat as u32;
                for (k, &slot) in tail.iter().enumerate() {
                    bits |= (p >> k & 1) << slot;
                }
                row_admits(row, bits, s)
            };
            let off: Vec<u32> = (0..1u32 << tail.len()).filter(|&p| !local(p)).collect();
            for cube in prime_implicants(&off, tail.len()) {
                let mut clause: Vec<LocalLit> = (0..6).map(|i| (i, pat >> i & 1 == 0)).collect();
                clause.extend(
                    clause_of_cube(&cube, tail.len())
                        .into_iter()
                        .map(|(k, pos)| (tail[k], pos)),
                );
                out.push(clause);
            }
        }
        out
    })
}

/// Quine-McCluskey minimized cover of the whole relation.
pub fn clauses_minimized() -> &'static [Vec<LocalLit>] {
    static CELL: OnceLock<Vec<Vec<LocalLit>>> = OnceLock::new();
    CELL.get_or_init(|| cnf_of(slots().count, relation, true))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn eval(clauses: &[Vec<LocalLit>], p: u32) -> bool {
        clauses
            .iter()
            .all(|cl| cl.iter().any(|&(i, pos)| (p >> i & 1 == 1) == pos))
    }

    #[test]
    fn table_shape() {
        let t = table();
        assert_eq!(t.len(), 64);
        assert_eq!(t.iter().filter(|r| r.is_branching()).count(), 56);
        assert!(t.iter().all(|r| matches!(r.outputs.len(), 1 | 4)));
        // x on both controls and z on the target pass through unchanged.
        assert_eq!(invariant_bits(), &[0, 2, 5]);
        let zii = &t[pattern(&[Pauli::Z, Pauli::I, Pauli::I]) as usize];
        assert_eq!(zii.outputs, vec![(false, [Pauli::Z, Pauli::I, Pauli::I])]);
    }

    #[test]
    fn both_clause_sets_match_relation() {
        let n = slots().count;
        let per_row = clauses_per_row();
        let minimized = clauses_minimized();
        for p in 0..1u32 << n {
            let want = relation(p);
            assert_eq!(eval(per_row, p), want, "per-row at {p:#b}");
            assert_eq!(eval(minimized, p), want, "minimized at {p:#b}");
        }
        assert!(minimized.len() < per_row.len());
    }
}
