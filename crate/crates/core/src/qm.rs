//! Two-level minimization of small boolean functions (Quine-McCluskey).
//!
//! Used to turn gate relations given as truth functions into CNF. A clause
//! set is read off the prime implicants of the complement: every cube of
//! `!f` becomes the clause "some variable differs from the cube".

use std::collections::{BTreeSet, HashSet};

/// Product term over at most 32 variables. Bit `i` of `mask` set means
/// variable `i` is fixed to bit `i` of `value`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Cube {
    pub mask: u32,
    pub value: u32,
}

impl Cube {
    pub fn minterm(value: u32, vars: usize) -> Cube {
        Cube {
            mask: full_mask(vars),
            value,
        }
    }

    pub fn covers(&self, point: u32) -> bool {
        point & self.mask == self.value
    }

    pub fn literal_count(&self) -> u32 {
        self.mask.count_ones()
    }
}

fn full_mask(vars: usize) -> u32 {
    if vars == 32 {
        u32::MAX
    } else {
        (1u32 << vars) - 1
    }
}

/// Prime implicants of the function whose on-set is `minterms`.
pub fn prime_implicants(minterms: &[u32], vars: usize) -> Vec<Cube> {
    assert!(vars <= 24, "truth tables above 24 variables are not supported");
    let mut level: HashSet<Cube> = minterms.iter().map(|&m| Cube::minterm(m, vars)).collect();
    let mut primes: BTreeSet<Cube> = BTreeSet::new();
    while !level.is_empty() {
        let mut merged: HashSet<Cube> = HashSet::new();
        let mut used: HashSet<Cube> = HashSet::new();
        for c in &level {
            let mut bits = c.mask & !c.value;
            while bits != 0 {
                let bit = bits & bits.wrapping_neg();
                bits &= bits - 1;
                let partner = Cube {
                    mask: c.mask,
                    value: c.value | bit,
                };
                if level.contains(&partner) {
                    used.insert(*c);
                    used.insert(partner);
                    merged.insert(Cube {
                        mask: c.mask & !bit,
                        value: c.value,
                    });
                }
            }
        }
        for c in &level {
            if !used.contains(c) {
                primes.insert(*c);
            }
        }
        level = merged;
    }
    primes.into_iter().collect()
}

/// Essential primes plus a greedy cover of the remaining minterms.
/// Deterministic: ties go to the fewest literals, then the smallest cube.
pub fn cover(primes: &[Cube], minterms: &[u32]) -> Vec<Cube> {
    let mut uncovered: BTreeSet<u32> = minterms.iter().copied().collect();
    let mut chosen: BTreeSet<Cube> = BTreeSet::new();
    for &m in minterms {
        let mut covering = primes.iter().filter(|p| p.covers(m));
        if let (Some(p), None) = (covering.next(), covering.next()) {
            chosen.insert(*p);
        }
    }
    uncovered.retain(|&m| !chosen.iter().any(|p| p.covers(m)));
    while !uncovered.is_empty() {
        let best = primes
            .iter()
            .filter(|p| !chosen.contains(p))
            .max_by(|a, b| {
                let ca = uncovered.iter().filter(|&&m| a.covers(m)).count();
                let cb = uncovered.iter().filter(|&&m| b.covers(m)).count();
                ca.cmp(&cb)
                    .then(b.literal_count().cmp(&a.literal_count()))
                    .then(b.cmp(a))
            })
            .copied()
            .expect("primes cover every minterm");
        uncovered.retain(|&m| !best.covers(m));
        chosen.insert(best);
    }
    chosen.into_iter().collect()
}

/// A literal on a local variable: `(index, positive)`.
pub type LocalLit = (usize, bool);

/// CNF clauses whose models are exactly the points where `f` holds.
/// With `minimize` the clause set is a cover of the off-set; without it
/// every prime implicate is kept, which makes unit propagation complete
/// for the relation.
pub fn cnf_of(vars: usize, f: impl Fn(u32) -> bool, minimize: bool) -> Vec<Vec<LocalLit>> {
    let off: Vec<u32> = (0..1u32 << vars).filter(|&p| !f(p)).collect();
    let primes = prime_implicants(&off, vars);
    let cubes = if minimize { cover(&primes, &off) } else { primes };
    cubes.iter().map(|c| clause_of_cube(c, vars)).collect()
}

/// Negation of a cube as a clause.
pub fn clause_of_cube(c: &Cube, vars: usize) -> Vec<LocalLit> {
    (0..vars)
        .filter(|i| c.mask >> i & 1 == 1)
        .map(|i| (i, c.value >> i & 1 == 0))
        .collect()
}
