//! OpenQASM 2 subset: `qreg`, `creg`, `barrier` and the gates in
//! [`GateKind`]. Register-wide operands broadcast over the register.

use std::fmt::Write as _;

use thiserror::Error;

use crate::circuit::{Circuit, CircuitError, Gate, QubitIndex};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum QasmError {
    #[error("line {line}: {msg}")]
    Syntax { line: usize, msg: String },
    #[error("line {line}: unsupported gate `{name}`")]
    UnsupportedGate { line: usize, name: String },
    #[error("line {line}: measurement is not supported")]
    MeasurementNotSupported { line: usize },
    #[error("line {line}: unknown register `{name}`")]
    UnknownRegister { line: usize, name: String },
    #[error("line {line}: index {index} out of range for register `{name}`")]
    IndexOutOfRange {
        line: usize,
        name: String,
        index: usize,
    },
    #[error("line {line}: {source}")]
    Circuit { line: usize, source: CircuitError },
}

fn syntax(line: usize, msg: impl Into<String>) -> QasmError {
    QasmError::Syntax {
        line,
        msg: msg.into(),
    }
}

struct Register {
    name: String,
    offset: u32,
    size: u32,
}

/// Parses QASM text into a circuit over all declared quantum registers.
pub fn parse_qasm(text: &str) -> Result<Circuit, QasmError> {
    let mut regs: Vec<Register> = Vec::new();
    let mut total = 0u32;
    let mut gates: Vec<(usize, Gate)> = Vec::new();
    for (line, stmt) in statements(text) {
        let stmt = stmt.trim();
        if stmt.is_empty() {
            continue;
        }
        let (head, rest) = split_head(stmt);
        match head {
            "OPENQASM" | "include" | "creg" | "barrier" => {}
            "measure" | "reset" => return Err(QasmError::MeasurementNotSupported { line }),
            "qreg" => {
                let (name, size) = parse_indexed(rest.trim(), line)?;
                let size = size.ok_or_else(|| syntax(line, "qreg needs a size"))? as u32;
                regs.push(Register {
                    name,
                    offset: total,
                    size,
                });
                total += size;
            }
            _ => {
                for g in parse_gate(stmt, line, &regs)? {
                    gates.push((line, g));
                }
            }
        }
    }
    let mut c = Circuit::new(total);
    for (line, g) in gates {
        c.push(g).map_err(|source| QasmError::Circuit { line, source })?;
    }
    Ok(c)
}

/// Splits on `;`, dropping `//` comments; each statement keeps the line it
/// starts on.
fn statements(text: &str) -> Vec<(usize, String)> {
    let mut out = Vec::new();
    let mut cur = String::new();
    let mut start = 1;
    for (i, raw) in text.lines().enumerate() {
        let line = raw.split("//").next().unwrap_or("");
        for ch in line.chars() {
            if cur.trim().is_empty() && !ch.is_whitespace() {
                start = i + 1;
            }
            if ch == ';' {
                out.push((start, std::mem::take(&mut cur)));
            } else {
                cur.push(ch);
            }
        }
        cur.push(' ');
    }
    if !cur.trim().is_empty() {
        out.push((start, cur));
    }
    out
}

fn split_head(stmt: &str) -> (&str, &str) {
    let end = stmt
        .find(|c: char| c.is_whitespace() || c == '(')
        .unwrap_or(stmt.len());
    (&stmt[..end], &stmt[end..])
}

fn parse_indexed(s: &str, line: usize) -> Result<(String, Option<usize>), QasmError> {
    match s.split_once('[') {
        None => Ok((s.trim().to_string(), None)),
        Some((name, rest)) => {
            let idx = rest
                .strip_suffix(']')
                .ok_or_else(|| syntax(line, format!("missing `]` in `{s}`")))?;
            let idx = idx
                .trim()
                .parse()
                .map_err(|_| syntax(line, format!("bad index in `{s}`")))?;
            Ok((name.trim().to_string(), Some(idx)))
        }
    }
}

/// One operand: a single qubit or a whole register.
fn resolve(s: &str, line: usize, regs: &[Register]) -> Result<Vec<QubitIndex>, QasmError> {
    let (name, idx) = parse_indexed(s, line)?;
    let reg = regs
        .iter()
        .find(|r| r.name == name)
        .ok_or_else(|| QasmError::UnknownRegister {
            line,
            name: name.clone(),
        })?;
    let to_q = |i: u32| QubitIndex::new(reg.offset + i + 1).expect("positive");
    match idx {
        Some(i) if i as u32 >= reg.size => Err(QasmError::IndexOutOfRange {
            line,
            name,
            index: i,
        }),
        Some(i) => Ok(vec![to_q(i as u32)]),
        None => Ok((0..reg.size).map(to_q).collect()),
    }
}

fn parse_gate(stmt: &str, line: usize, regs: &[Register]) -> Result<Vec<Gate>, QasmError> {
    let (name, rest) = split_head(stmt);
    let rest = rest.trim_start();
    let (angle, operands) = if let Some(r) = rest.strip_prefix('(') {
        let close = matching_paren(r).ok_or_else(|| syntax(line, "unbalanced parentheses"))?;
        let value = eval_angle(&r[..close]).map_err(|m| syntax(line, m))?;
        (Some(value), &r[close + 1..])
    } else {
        (None, rest)
    };
    let ops: Vec<Vec<QubitIndex>> = operands
        .split(',')
        .map(|o| resolve(o.trim(), line, regs))
        .collect::<Result<_, _>>()?;
    let arity = match name {
        "h" | "s" | "sdg" | "t" | "tdg" | "x" | "y" | "z" | "rx" | "rz" | "p" | "u1" => 1,
        "cz" | "cx" | "CX" => 2,
        "ccx" => 3,
        _ => {
            return Err(QasmError::UnsupportedGate {
                line,
                name: name.to_string(),
            })
        }
    };
    let needs_angle = matches!(name, "rx" | "rz" | "p" | "u1");
    if needs_angle != angle.is_some() {
        return Err(syntax(line, format!("`{name}` angle mismatch")));
    }
    if ops.len() != arity {
        return Err(syntax(
            line,
            format!("`{name}` takes {arity} operands, got {}", ops.len()),
        ));
    }
    // Broadcast registers; all full-register operands must agree in size.
    let width = ops.iter().map(Vec::len).max().unwrap_or(1);
    if ops.iter().any(|o| o.len() != 1 && o.len() != width) {
        return Err(syntax(line, "register sizes differ"));
    }
    let pick = |o: &Vec<QubitIndex>, i: usize| if o.len() == 1 { o[0] } else { o[i] };
    let theta = angle.unwrap_or(0.0);
    Ok((0..width)
        .map(|i| {
            let a = pick(&ops[0], i);
            match name {
                "h" => Gate::H(a),
                "s" => Gate::S(a),
                "sdg" => Gate::Sdg(a),
                "t" => Gate::T(a),
                "tdg" => Gate::Tdg(a),
                "x" => Gate::X(a),
                "y" => Gate::Y(a),
                "z" => Gate::Z(a),
                "rx" => Gate::Rx(a, theta),
                "rz" => Gate::Rz(a, theta),
                "p" | "u1" => Gate::P(a, theta),
                "cz" => Gate::CZ(a, pick(&ops[1], i)),
                "cx" | "CX" => Gate::CX(a, pick(&ops[1], i)),
                "ccx" => Gate::CCX(a, pick(&ops[1], i), pick(&ops[2], i)),
                _ => unreachable!(),
            }
        })
        .collect())
}

fn matching_paren(s: &str) -> Option<usize> {
    let mut depth = 0usize;
    for (i, c) in s.char_indices() {
        match c {
            '(' => depth += 1,
            ')' if depth == 0 => return Some(i),
            ')' => depth -= 1,
            _ => {}
        }
    }
    None
}

/// Evaluates `pi`, decimal literals, `+ - * /` and parentheses.
pub fn eval_angle(s: &str) -> Result<f64, String> {
    let tokens = tokenize(s)?;
    let mut p = AngleParser { tokens, pos: 0 };
    let v = p.expr()?;
    if p.pos != p.tokens.len() {
        return Err(format!("trailing input in angle `{s}`"));
    }
    Ok(v)
}

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Num(f64),
    Op(char),
}

fn tokenize(s: &str) -> Result<Vec<Tok>, String> {
    let chars: Vec<char> = s.chars().collect();
    let mut out = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        if c.is_whitespace() {
            i += 1;
        } else if "+-*/()".contains(c) {
            out.push(Tok::Op(c));
            i += 1;
        } else if c.is_ascii_digit() || c == '.' {
            let start = i;
            while i < chars.len() && (chars[i].is_ascii_digit() || chars[i] == '.') {
                i += 1;
            }
            if i < chars.len() && (chars[i] == 'e' || chars[i] == 'E') {
                i += 1;
                if i < chars.len() && (chars[i] == '+' || chars[i] == '-') {
                    i += 1;
                }
                while i < chars.len() && chars[i].is_ascii_digit() {
                    i += 1;
                }
            }
            let lit: String = chars[start..i].iter().collect();
            out.push(Tok::Num(
                lit.parse().map_err(|_| format!("bad number `{lit}`"))?,
            ));
        } else if chars[i..].starts_with(&['p', 'i']) {
            out.push(Tok::Num(std::f64::consts::PI));
            i += 2;
        } else {
            return Err(format!("unexpected `{c}` in angle"));
        }
    }
    Ok(out)
}

struct AngleParser {
    tokens: Vec<Tok>,
    pos: usize,
}

impl AngleParser {
    fn peek_op(&self) -> Option<char> {
        match self.tokens.get(self.pos) {
            Some(Tok::Op(c)) => Some(*c),
            _ => None,
        }
    }

    fn expr(&mut self) -> Result<f64, String> {
        let mut v = self.term()?;
        while let Some(op @ ('+' | '-')) = self.peek_op() {
            self.pos += 1;
            let rhs = self.term()?;
            v = if op == '+' { v + rhs } else { v - rhs };
        }
        Ok(v)
    }

    fn term(&mut self) -> Result<f64, String> {
        let mut v = self.unary()?;
        while let Some(op @ ('*' | '/')) = self.peek_op() {
            self.pos += 1;
            let rhs = self.unary()?;
            v = if op == '*' { v * rhs } else { v / rhs };
        }
        Ok(v)
    }

    fn unary(&mut self) -> Result<f64, String> {
        match self.peek_op() {
            Some('-') => {
                self.pos += 1;
                Ok(-self.unary()?)
            }
            Some('+') => {
                self.pos += 1;
                self.unary()
            }
            _ => self.primary(),
        }
    }

    fn primary(&mut self) -> Result<f64, String> {
        match self.tokens.get(self.pos).cloned() {
            Some(Tok::Num(v)) => {
                self.pos += 1;
                Ok(v)
            }
            Some(Tok::Op('(')) => {
                self.pos += 1;
                let v = self.expr()?;
                if self.peek_op() != Some(')') {
                    return Err("missing `)`".into());
                }
                self.pos += 1;
                Ok(v)
            }
            _ => Err("expected a number".into()),
        }
    }
}

/// Writes a circuit as QASM over a single register `q`.
pub fn to_qasm(c: &Circuit) -> String {
    let mut s = String::from("OPENQASM 2.0;\ninclude \"qelib1.inc\";\n");
    let _ = writeln!(s, "qreg q[{}];", c.num_qubits());
    for g in c.gates() {
        let name = g.kind().name();
        let operands: Vec<String> = g
            .qubits()
            .iter()
            .map(|q| format!("q[{}]", q.offset()))
            .collect();
        match g.angle() {
            Some(t) => {
                let _ = writeln!(s, "{name}({t:?}) {};", operands.join(","));
            }
            None => {
                let _ = writeln!(s, "{name} {};", operands.join(","));
            }
        }
    }
    s
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::circuit::q;
    use std::f64::consts::PI;

    #[test]
    fn parses_basic_program() {
        let src = "OPENQASM 2.0;\ninclude \"qelib1.inc\";\nqreg q[2];\ncreg c[2];\n\
                   h q[0]; // comment\ncx q[0],q[1];\nrz(-pi/4) q[1];\n";
        let c = parse_qasm(src).unwrap();
        assert_eq!(c.num_qubits(), 2);
        assert_eq!(
            c.gates(),
            &[
                Gate::H(q(1)),
                Gate::CX(q(1), q(2)),
                Gate::Rz(q(2), -PI / 4.0)
            ]
        );
    }

    #[test]
    fn broadcast_and_registers() {
        let c = parse_qasm("qreg a[2]; qreg b[2]; h a; cz a,b; t b[1];").unwrap();
        assert_eq!(c.num_qubits(), 4);
        assert_eq!(
            c.gates(),
            &[
                Gate::H(q(1)),
                Gate::H(q(2)),
                Gate::CZ(q(1), q(3)),
                Gate::CZ(q(2), q(4)),
                Gate::T(q(4))
            ]
        );
    }

    #[test]
    fn angle_expressions() {
        assert_eq!(eval_angle("pi/2").unwrap(), PI / 2.0);
        assert_eq!(eval_angle("-(1+2)*3").unwrap(), -9.0);
        assert_eq!(eval_angle("1e-4").unwrap(), 1e-4);
        assert_eq!(eval_angle("2*pi - .5").unwrap(), 2.0 * PI - 0.5);
        assert!(eval_angle("pi +").is_err());
    }

    #[test]
    fn errors_carry_lines() {
        assert_eq!(
            parse_qasm("qreg q[1];\nmeasure q[0] -> c[0];"),
            Err(QasmError::MeasurementNotSupported { line: 2 })
        );
        assert!(matches!(
            parse_qasm("qreg q[1];\n\nfoo q[0];"),
            Err(QasmError::UnsupportedGate { line: 3, .. })
        ));
        assert!(matches!(
            parse_qasm("qreg q[1];\nh q[1];"),
            Err(QasmError::IndexOutOfRange { line: 2, .. })
        ));
        assert!(matches!(
            parse_qasm("qreg q[2];\ncx q[0],q[0];"),
            Err(QasmError::Circuit { line: 2, .. })
        ));
    }

    #[test]
    fn round_trip() {
        let c = Circuit::from_gates(
            3,
            vec![
                Gate::CCX(q(1), q(2), q(3)),
                Gate::Rx(q(2), 0.3001),
                Gate::Sdg(q(3)),
            ],
        )
        .unwrap();
        assert_eq!(parse_qasm(&to_qasm(&c)).unwrap(), c);
    }
}
