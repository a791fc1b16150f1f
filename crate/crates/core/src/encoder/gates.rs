//! Clause templates for single- and two-qubit gates.
//!
//! Each template is a relation over a handful of local slots (input bits,
//! fresh output bits, branch variables). The relation is written as a
//! truth function and compiled once into its prime implicates.

use std::sync::OnceLock;

use crate::qm::{cnf_of, LocalLit};

/// Compiled relation over `slots` local variables.
#[derive(Debug)]
pub struct Template {
    pub slots: usize,
    pub clauses: Vec<Vec<LocalLit>>,
}

impl Template {
    fn compile(slots: usize, f: impl Fn(&[bool]) -> bool) -> Template {
        let clauses = cnf_of(
            slots,
            |p| {
                let bits: Vec<bool> = (0..slots).map(|i| p >> i & 1 == 1).collect();
                f(&bits)
            },
            false,
        );
        Template { slots, clauses }
    }

    /// Conjunction of independent parts, each compiled on its own so the
    /// clause count stays additive.
    fn conjunction(slots: usize, parts: &[&dyn Fn(&[bool]) -> bool]) -> Template {
        let mut clauses = Vec::new();
        for f in parts {
            clauses.extend(Template::compile(slots, f).clauses);
        }
        Template { slots, clauses }
    }
}

macro_rules! template {
    ($name:ident, $slots:expr, $f:expr) => {
        pub fn $name() -> &'static Template {
            static CELL: OnceLock<Template> = OnceLock::new();
            CELL.get_or_init(|| Template::compile($slots, $f))
        }
    };
}

// H swaps the x/z variable ids; only the sign changes.
// slots: x z r r'
template!(hadamard, 4, |b| b[3] == (b[2] ^ (b[0] & b[1])));

// slots: x z r z' r'
template!(phase, 5, |b| {
    b[3] == (b[0] ^ b[1]) && b[4] == (b[2] ^ (b[0] & b[1]))
});
template!(phase_dagger, 5, |b| {
    b[3] == (b[0] ^ b[1]) && b[4] == (b[2] ^ (b[0] & !b[1]))
});

// slots: x z r z' r' u. The z output is free whenever x is set.
template!(t_gate, 6, |b| {
    let (x, z, r, z2, r2, u) = (b[0], b[1], b[2], b[3], b[4], b[5]);
    u == x && (x || z2 == z) && r2 == (r ^ (x & z & !z2))
});
template!(t_dagger, 6, |b| {
    let (x, z, r, z2, r2, u) = (b[0], b[1], b[2], b[3], b[4], b[5]);
    u == x && (x || z2 == z) && r2 == (r ^ (x & !z & z2))
});

// slots: xc zc xt zt r zc' zt' r'
pub fn cz() -> &'static Template {
    static CELL: OnceLock<Template> = OnceLock::new();
    CELL.get_or_init(|| {
        Template::conjunction(
            8,
            &[
                &|b| b[5] == (b[1] ^ b[2]),
                &|b| b[6] == (b[3] ^ b[0]),
                &|b| b[7] == (b[4] ^ (b[0] & b[2] & (b[1] ^ b[3]))),
            ],
        )
    })
}

// slots: x z r x' r' c u. z is shared; with z set, x' is free and the
// branch is cos (c, x' == x) or sin (u, x' != x); Z -> -sin Y.
template!(rx, 7, |b| {
    let (x, z, r, x2, r2, c, u) = (b[0], b[1], b[2], b[3], b[4], b[5], b[6]);
    c == (z & (x == x2)) && u == (z & (x != x2)) && (z || x2 == x) && r2 == (r ^ (u & !x))
});

// slots: x z r z' r' c u. Dual of rx with x and z exchanged; Y -> -sin X.
template!(rz, 7, |b| {
    let (x, z, r, z2, r2, c, u) = (b[0], b[1], b[2], b[3], b[4], b[5], b[6]);
    c == (x & (z == z2)) && u == (x & (z != z2)) && (x || z2 == z) && r2 == (r ^ (u & z))
});
