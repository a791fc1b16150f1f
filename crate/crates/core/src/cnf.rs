//! Weighted CNF formulas with DIMACS-style integer literals.

use std::collections::BTreeMap;

use thiserror::Error;

use crate::weight::{ExactWeight, WeightError, WeightValue};

/// Non-zero literal; `-v` is the negation of variable `v`.
pub type Lit = i32;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    Exact,
    Float,
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum CnfError {
    #[error("clause {0} is empty")]
    EmptyClause(usize),
    #[error("literal {lit} references undeclared variable (num_vars = {num_vars})")]
    UndeclaredVariable { lit: Lit, num_vars: u32 },
    #[error("literal 0 is not allowed")]
    ZeroLiteral,
    #[error(transparent)]
    Weight(#[from] WeightError),
}

#[derive(Debug, Clone, PartialEq)]
pub struct WeightedCnf {
    pub num_vars: u32,
    pub clauses: Vec<Vec<Lit>>,
    /// Literals absent from the map weigh 1.
    pub weights: BTreeMap<Lit, WeightValue>,
    pub mode: Mode,
    /// Set by the circuit encoder: every unit-weight variable occurs in
    /// some clause. Checked in debug builds by the counter.
    pub all_constrained: bool,
}

impl WeightedCnf {
    pub fn new(mode: Mode) -> Self {
        WeightedCnf {
            num_vars: 0,
            clauses: Vec::new(),
            weights: BTreeMap::new(),
            mode,
            all_constrained: false,
        }
    }

    pub fn with_vars(mode: Mode, num_vars: u32) -> Self {
        WeightedCnf {
            num_vars,
            ..WeightedCnf::new(mode)
        }
    }

    pub fn new_var(&mut self) -> u32 {
        self.num_vars += 1;
        self.num_vars
    }

    pub fn add_clause(&mut self, clause: Vec<Lit>) {
        self.clauses.push(clause);
    }

    pub fn set_weight(&mut self, lit: Lit, w: WeightValue) -> Result<(), CnfError> {
        if w.is_exact() != (self.mode == Mode::Exact) {
            return Err(WeightError::ModeMismatch.into());
        }
        if lit == 0 {
            return Err(CnfError::ZeroLiteral);
        }
        if lit.unsigned_abs() > self.num_vars {
            return Err(CnfError::UndeclaredVariable {
                lit,
                num_vars: self.num_vars,
            });
        }
        if w.is_unit() {
            self.weights.remove(&lit);
        } else {
            self.weights.insert(lit, w);
        }
        Ok(())
    }

    /// Stores an exact weight, rounding it when the formula is in float mode.
    pub fn set_exact_weight(&mut self, lit: Lit, w: ExactWeight) -> Result<(), CnfError> {
        let v = match self.mode {
            Mode::Exact => WeightValue::Exact(w),
            Mode::Float => WeightValue::float(w.to_f64())?,
        };
        self.set_weight(lit, v)
    }

    pub fn weight(&self, lit: Lit) -> WeightValue {
        match self.weights.get(&lit) {
            Some(w) => w.clone(),
            None => self.unit(),
        }
    }

    pub fn unit(&self) -> WeightValue {
        match self.mode {
            Mode::Exact => WeightValue::Exact(ExactWeight::from_int(1)),
            Mode::Float => WeightValue::Float(crate::weight::FloatWeight::new(1.0).unwrap()),
        }
    }

    pub fn validate(&self) -> Result<(), CnfError> {
        for (i, c) in self.clauses.iter().enumerate() {
            if c.is_empty() {
                return Err(CnfError::EmptyClause(i));
            }
            for &l in c {
                if l == 0 {
                    return Err(CnfError::ZeroLiteral);
                }
                if l.unsigned_abs() > self.num_vars {
                    return Err(CnfError::UndeclaredVariable {
                        lit: l,
                        num_vars: self.num_vars,
                    });
                }
            }
        }
        for w in self.weights.values() {
            if w.is_exact() != (self.mode == Mode::Exact) {
                return Err(WeightError::ModeMismatch.into());
            }
        }
        Ok(())
    }

    /// Variables carrying a non-unit weight on either literal.
    pub fn weighted_vars(&self) -> Vec<u32> {
        let mut vs: Vec<u32> = self.weights.keys().map(|l| l.unsigned_abs()).collect();
        vs.dedup();
        vs.sort_unstable();
        vs.dedup();
        vs
    }
}
