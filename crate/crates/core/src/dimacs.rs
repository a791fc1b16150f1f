//! Weighted DIMACS text format.
//!
//! ```text
//! p cnf <vars> <clauses>
//! c p weight <lit> <weight> 0
//! 1 -2 0
//! ```
//!
//! Only literals whose weight differs from 1 get a weight line. Weights are
//! printed with 17 significant digits. Exact weights are additionally kept
//! in a JSON sidecar (`<stem>.weights.json`) so that reloading a file does
//! not lose exactness.

use std::fmt::Write as _;
use std::fs;
use std::io;
use std::path::{Path, PathBuf};

use num_bigint::BigInt;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::cnf::{Lit, Mode, WeightedCnf};
use crate::weight::{format_f64, ExactWeight, WeightValue};

#[derive(Debug, Error)]
pub enum FormatError {
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error("sidecar: {0}")]
    Sidecar(String),
    #[error(transparent)]
    Io(#[from] io::Error),
}

fn perr(line: usize, msg: impl Into<String>) -> FormatError {
    FormatError::Parse {
        line,
        msg: msg.into(),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Dialect {
    /// Weight lines for non-unit literals only.
    #[default]
    Plain,
    /// Model-counting-competition style: `c t wmc` header and both
    /// polarities of every weighted variable.
    Mcc,
}

impl std::str::FromStr for Dialect {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "plain" => Ok(Dialect::Plain),
            "mcc" => Ok(Dialect::Mcc),
            _ => Err(format!("unknown dialect `{s}` (plain, mcc)")),
        }
    }
}

/// Weighted literals ordered by variable, positive literal first.
fn weight_lines(f: &WeightedCnf, dialect: Dialect) -> Vec<(Lit, WeightValue)> {
    let mut out = Vec::new();
    for v in f.weighted_vars() {
        for lit in [v as Lit, -(v as Lit)] {
            let stored = f.weights.get(&lit);
            if stored.is_some() || dialect == Dialect::Mcc {
                out.push((lit, f.weight(lit)));
            }
        }
    }
    out
}

pub fn emit(f: &WeightedCnf) -> String {
    emit_dialect(f, Dialect::Plain)
}

pub fn emit_dialect(f: &WeightedCnf, dialect: Dialect) -> String {
    let mut s = String::new();
    if dialect == Dialect::Mcc {
        s.push_str("c t wmc\n");
    }
    let _ = writeln!(s, "p cnf {} {}", f.num_vars, f.clauses.len());
    for (lit, w) in weight_lines(f, dialect) {
        let _ = writeln!(s, "c p weight {lit} {} 0", format_f64(w.to_f64()));
    }
    for c in &f.clauses {
        for l in c {
            let _ = write!(s, "{l} ");
        }
        s.push_str("0\n");
    }
    s
}

#[derive(Debug, Serialize, Deserialize)]
struct SidecarEntry {
    lit: Lit,
    a: String,
    b: String,
    k: u32,
}

#[derive(Debug, Serialize, Deserialize)]
struct Sidecar {
    mode: Mode,
    weights: Vec<SidecarEntry>,
}

/// JSON with `(a, b, k)` for each weighted literal; `None` in float mode.
pub fn sidecar_json(f: &WeightedCnf) -> Option<String> {
    if f.mode != Mode::Exact {
        return None;
    }
    let weights = weight_lines(f, Dialect::Plain)
        .into_iter()
        .map(|(lit, w)| match w {
            WeightValue::Exact(e) => {
                let (a, b, k) = e.parts();
                SidecarEntry {
                    lit,
                    a: a.to_string(),
                    b: b.to_string(),
                    k,
                }
            }
            WeightValue::Float(_) => unreachable!("exact formula"),
        })
        .collect();
    let sc = Sidecar {
        mode: Mode::Exact,
        weights,
    };
    Some(serde_json::to_string_pretty(&sc).expect("serializable") + "\n")
}

/// Parses weighted DIMACS. Formulas with weight lines load in float mode,
/// formulas without any in exact mode.
pub fn parse(text: &str) -> Result<WeightedCnf, FormatError> {
    let mut header: Option<(u32, usize)> = None;
    let mut weights: Vec<(usize, Lit, f64)> = Vec::new();
    let mut clauses: Vec<Vec<Lit>> = Vec::new();
    let mut cur: Vec<Lit> = Vec::new();
    let mut last_line = 0;
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        last_line = line;
        let t = raw.trim();
        if t.is_empty() || t == "%" {
            continue;
        }
        let toks: Vec<&str> = t.split_whitespace().collect();
        match toks[0] {
            "c" => {
                if toks.get(1) == Some(&"p") && toks.get(2) == Some(&"weight") {
                    if toks.len() != 6 || toks[5] != "0" {
                        return Err(perr(line, "expected `c p weight <lit> <w> 0`"));
                    }
                    let lit: Lit = toks[3].parse().map_err(|_| perr(line, "bad literal"))?;
                    let w: f64 = toks[4].parse().map_err(|_| perr(line, "bad weight"))?;
                    if lit == 0 || !w.is_finite() {
                        return Err(perr(line, "bad weight line"));
                    }
                    weights.push((line, lit, w));
                }
            }
            "p" => {
                if header.is_some() {
                    return Err(perr(line, "duplicate header"));
                }
                if toks.len() != 4 || toks[1] != "cnf" {
                    return Err(perr(line, "expected `p cnf <vars> <clauses>`"));
                }
                let v = toks[2].parse().map_err(|_| perr(line, "bad variable count"))?;
                let c = toks[3].parse().map_err(|_| perr(line, "bad clause count"))?;
                header = Some((v, c));
            }
            _ => {
                let (nv, _) = header.ok_or_else(|| perr(line, "clause before header"))?;
                for tok in toks {
                    let l: Lit = tok.parse().map_err(|_| perr(line, format!("bad literal `{tok}`")))?;
                    if l == 0 {
                        clauses.push(std::mem::take(&mut cur));
                    } else if l.unsigned_abs() > nv {
                        return Err(perr(line, format!("literal {l} exceeds {nv} variables")));
                    } else {
                        cur.push(l);
                    }
                }
            }
        }
    }
    let (nv, nc) = header.ok_or_else(|| perr(last_line.max(1), "missing header"))?;
    if !cur.is_empty() {
        return Err(perr(last_line, "last clause is not 0-terminated"));
    }
    if clauses.len() != nc {
        return Err(perr(
            last_line,
            format!("header declares {nc} clauses, found {}", clauses.len()),
        ));
    }
    let mode = if weights.is_empty() {
        Mode::Exact
    } else {
        Mode::Float
    };
    let mut f = WeightedCnf::with_vars(mode, nv);
    f.clauses = clauses;
    for (line, lit, w) in weights {
        let value = WeightValue::float(w).map_err(|e| perr(line, e.to_string()))?;
        f.set_weight(lit, value).map_err(|e| perr(line, e.to_string()))?;
    }
    Ok(f)
}

/// Parses DIMACS and replaces its weights with the exact sidecar values.
pub fn parse_with_sidecar(text: &str, sidecar: &str) -> Result<WeightedCnf, FormatError> {
    let base = parse(text)?;
    let sc: Sidecar = serde_json::from_str(sidecar).map_err(|e| FormatError::Sidecar(e.to_string()))?;
    let mut f = WeightedCnf::with_vars(Mode::Exact, base.num_vars);
    f.clauses = base.clauses;
    for e in sc.weights {
        let big = |s: &str| {
            s.parse::<BigInt>()
                .map_err(|_| FormatError::Sidecar(format!("bad integer `{s}`")))
        };
        let w = ExactWeight::new(big(&e.a)?, big(&e.b)?, e.k);
        f.set_weight(e.lit, WeightValue::Exact(w))
            .map_err(|err| FormatError::Sidecar(err.to_string()))?;
    }
    Ok(f)
}

pub fn sidecar_path(cnf: &Path) -> PathBuf {
    cnf.with_extension("weights.json")
}

/// Writes `<dir>/<stem>.cnf` and, for exact formulas, the sidecar.
pub fn write_instance(
    f: &WeightedCnf,
    dir: &Path,
    stem: &str,
    dialect: Dialect,
) -> Result<PathBuf, FormatError> {
    fs::create_dir_all(dir)?;
    let path = dir.join(format!("{stem}.cnf"));
    fs::write(&path, emit_dialect(f, dialect))?;
    if let Some(sc) = sidecar_json(f) {
        fs::write(sidecar_path(&path), sc)?;
    }
    Ok(path)
}

/// Reads a `.cnf` file, picking up its sidecar when present.
pub fn read_instance(path: &Path) -> Result<WeightedCnf, FormatError> {
    let text = fs::read_to_string(path)?;
    let sc = sidecar_path(path);
    if sc.exists() {
        parse_with_sidecar(&text, &fs::read_to_string(sc)?)
    } else {
        parse(&text)
    }
}
