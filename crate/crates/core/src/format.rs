//! Line-based UTF-8 text formats.
//!
//! Circuit files (`#` starts a comment anywhere):
//!
//! ```text
//! ninputs 1
//! g1 = input 1
//! g2 = const 1
//! g3 = sub g1 g2
//! g4 = test g3
//! output g4
//! ```
//!
//! Gate ids are strictly increasing (gaps allowed) and references point
//! backward. Loading as an arithmetic circuit rejects test gates and
//! expands `const k` into a chain built from 1; loading as an algebraic
//! circuit keeps integer constants as leaves and requires the output to be
//! a test gate. Boolean circuit files use `not`/`and`/`or` instead of
//! arithmetic gates. Polynomial system files carry a header line, then one
//! polynomial per line in the shared text form.

use std::collections::HashMap;

use crate::bss::{AlgebraicCircuit, BssGate};
use crate::circuit::{ArithmeticCircuit, BoolGate, BooleanCircuit, GateId};
use crate::error::{Error, Result};
use crate::exact::Integer;
use crate::macaulay::HomogeneousSystem;
use crate::poly::{parse_polynomial, Polynomial};

#[derive(Debug, Clone)]
pub enum ParsedGate {
    Input(usize),
    Const(Integer),
    Add(u64, u64),
    Sub(u64, u64),
    Mul(u64, u64),
    Test(u64),
}

/// A circuit file as written: original gate ids, constants unexpanded.
#[derive(Debug, Clone)]
pub struct ParsedCircuit {
    pub ninputs: usize,
    pub gates: Vec<(u64, ParsedGate)>,
    pub output: u64,
}

impl ParsedCircuit {
    pub fn has_tests(&self) -> bool {
        self.gates.iter().any(|(_, g)| matches!(g, ParsedGate::Test(_)))
    }

    /// Arithmetic circuit in the constant-free discipline: `const k` for
    /// k != 1 is expanded into a balanced chain built from 1.
    pub fn into_arithmetic(&self) -> Result<ArithmeticCircuit> {
        let mut b = ArithmeticCircuit::builder(self.ninputs);
        let mut map: HashMap<u64, GateId> = HashMap::new();
        for (id, gate) in &self.gates {
            let resolved = |child: &u64| -> Result<GateId> {
                map.get(child).copied().ok_or_else(|| {
                    Error::InvalidCircuit(format!("gate g{id} references unknown gate g{child}"))
                })
            };
            let new_id = match gate {
                ParsedGate::Input(i) => b.input(*i),
                ParsedGate::Const(k) => b.constant(k),
                ParsedGate::Add(x, y) => {
                    let (x, y) = (resolved(x)?, resolved(y)?);
                    b.add(x, y)
                }
                ParsedGate::Sub(x, y) => {
                    let (x, y) = (resolved(x)?, resolved(y)?);
                    b.sub(x, y)
                }
                ParsedGate::Mul(x, y) => {
                    let (x, y) = (resolved(x)?, resolved(y)?);
                    b.mul(x, y)
                }
                ParsedGate::Test(_) => {
                    return Err(Error::InvalidCircuit(
                        "test gates are not allowed in arithmetic circuits".into(),
                    ))
                }
            };
            map.insert(*id, new_id);
        }
        let output = map[&self.output];
        Ok(b.finish(output))
    }

    /// Algebraic circuit: integer constants stay as leaves.
    pub fn into_algebraic(&self) -> Result<AlgebraicCircuit> {
        let mut gates: Vec<BssGate> = Vec::with_capacity(self.gates.len());
        let mut map: HashMap<u64, GateId> = HashMap::new();
        for (id, gate) in &self.gates {
            let resolved = |child: &u64| -> Result<GateId> {
                map.get(child).copied().ok_or_else(|| {
                    Error::InvalidCircuit(format!("gate g{id} references unknown gate g{child}"))
                })
            };
            let g = match gate {
                ParsedGate::Input(i) => BssGate::Input(*i),
                ParsedGate::Const(k) => BssGate::Const(k.clone()),
                ParsedGate::Add(x, y) => BssGate::Add(resolved(x)?, resolved(y)?),
                ParsedGate::Sub(x, y) => BssGate::Sub(resolved(x)?, resolved(y)?),
                ParsedGate::Mul(x, y) => BssGate::Mul(resolved(x)?, resolved(y)?),
                ParsedGate::Test(x) => BssGate::Test(resolved(x)?),
            };
            map.insert(*id, gates.len());
            gates.push(g);
        }
        AlgebraicCircuit::new(self.ninputs, gates, map[&self.output])
    }
}

struct Lines<'a> {
    items: Vec<(usize, &'a str)>,
    pos: usize,
}

impl<'a> Lines<'a> {
    fn new(text: &'a str) -> Self {
        let items = text
            .lines()
            .enumerate()
            .map(|(i, raw)| {
                let content = raw.split('#').next().unwrap_or("").trim();
                (i + 1, content)
            })
            .filter(|(_, c)| !c.is_empty())
            .collect();
        Lines { items, pos: 0 }
    }

    fn next(&mut self) -> Option<(usize, &'a str)> {
        let item = self.items.get(self.pos).copied();
        self.pos += 1;
        item
    }
}

fn perr(line: usize, msg: impl Into<String>) -> Error {
    Error::Parse { line, msg: msg.into() }
}

/// Parse the circuit format, shared by arithmetic and algebraic circuits.
pub fn parse_circuit(text: &str) -> Result<ParsedCircuit> {
    let mut lines = Lines::new(text);
    let (first_no, first) = lines.next().ok_or_else(|| perr(0, "empty circuit file"))?;
    let ninputs: usize = first
        .strip_prefix("ninputs")
        .map(str::trim)
        .and_then(|v| v.parse().ok())
        .ok_or_else(|| perr(first_no, "expected 'ninputs K'"))?;

    let mut gates: Vec<(u64, ParsedGate)> = Vec::new();
    let mut defined: HashMap<u64, ()> = HashMap::new();
    let mut output: Option<u64> = None;
    let mut last_id: Option<u64> = None;

    while let Some((no, line)) = lines.next() {
        if let Some(rest) = line.strip_prefix("output") {
            let id = parse_gate_ref(rest.trim())
                .ok_or_else(|| perr(no, "expected 'output gN'"))?;
            if !defined.contains_key(&id) {
                return Err(perr(no, format!("output references unknown gate g{id}")));
            }
            if output.is_some() {
                return Err(perr(no, "duplicate output line"));
            }
            output = Some(id);
            continue;
        }
        let (lhs, rhs) =
            line.split_once('=').ok_or_else(|| perr(no, "expected 'gN = ...' or 'output gN'"))?;
        let id = parse_gate_ref(lhs.trim()).ok_or_else(|| perr(no, "bad gate id"))?;
        if let Some(prev) = last_id {
            if id <= prev {
                return Err(perr(no, format!("gate ids must strictly increase (g{id} after g{prev})")));
            }
        }
        let tokens: Vec<&str> = rhs.split_whitespace().collect();
        let reference = |tok: &str| -> Result<u64> {
            let r = parse_gate_ref(tok).ok_or_else(|| perr(no, format!("bad gate reference '{tok}'")))?;
            if !defined.contains_key(&r) {
                return Err(perr(no, format!("reference to undefined gate g{r}")));
            }
            Ok(r)
        };
        let gate = match tokens.as_slice() {
            ["input", i] => {
                let i: usize =
                    i.parse().map_err(|_| perr(no, format!("bad input index '{i}'")))?;
                if i == 0 || i > ninputs {
                    return Err(perr(no, format!("input index {i} out of range 1..={ninputs}")));
                }
                ParsedGate::Input(i - 1)
            }
            ["const", k] => {
                let k: Integer =
                    k.parse().map_err(|_| perr(no, format!("bad constant '{k}'")))?;
                ParsedGate::Const(k)
            }
            ["add", a, b] => ParsedGate::Add(reference(a)?, reference(b)?),
            ["sub", a, b] => ParsedGate::Sub(reference(a)?, reference(b)?),
            ["mul", a, b] => ParsedGate::Mul(reference(a)?, reference(b)?),
            ["test", a] => ParsedGate::Test(reference(a)?),
            _ => return Err(perr(no, format!("unknown gate form '{}'", rhs.trim()))),
        };
        defined.insert(id, ());
        last_id = Some(id);
        gates.push((id, gate));
    }
    let output = output.ok_or_else(|| perr(0, "missing output line"))?;
    if gates.is_empty() {
        return Err(perr(0, "circuit has no gates"));
    }
    Ok(ParsedCircuit { ninputs, gates, output })
}

fn parse_gate_ref(tok: &str) -> Option<u64> {
    tok.strip_prefix('g')?.parse().ok()
}

/// Render an arithmetic circuit in the file format with dense 1-based ids.
pub fn print_arithmetic(c: &ArithmeticCircuit) -> String {
    use crate::circuit::ArithGate;
    let mut out = format!("ninputs {}\n", c.nvars());
    for (id, gate) in c.gates().iter().enumerate() {
        let n = id + 1;
        let line = match gate {
            ArithGate::Input(i) => format!("g{n} = input {}", i + 1),
            ArithGate::One => format!("g{n} = const 1"),
            ArithGate::Add(a, b) => format!("g{n} = add g{} g{}", a + 1, b + 1),
            ArithGate::Sub(a, b) => format!("g{n} = sub g{} g{}", a + 1, b + 1),
            ArithGate::Mul(a, b) => format!("g{n} = mul g{} g{}", a + 1, b + 1),
        };
        out.push_str(&line);
        out.push('\n');
    }
    out.push_str(&format!("output g{}\n", c.output() + 1));
    out
}

/// Render an algebraic circuit in the file format with dense 1-based ids.
pub fn print_algebraic(c: &AlgebraicCircuit) -> String {
    let mut out = format!("ninputs {}\n", c.nvars());
    for (id, gate) in c.gates().iter().enumerate() {
        let n = id + 1;
        let line = match gate {
            BssGate::Input(i) => format!("g{n} = input {}", i + 1),
            BssGate::Const(k) => format!("g{n} = const {k}"),
            BssGate::Add(a, b) => format!("g{n} = add g{} g{}", a + 1, b + 1),
            BssGate::Sub(a, b) => format!("g{n} = sub g{} g{}", a + 1, b + 1),
            BssGate::Mul(a, b) => format!("g{n} = mul g{} g{}", a + 1, b + 1),
            BssGate::Test(a) => format!("g{n} = test g{}", a + 1),
        };
        out.push_str(&line);
        out.push('\n');
    }
    out.push_str(&format!("output g{}\n", c.output() + 1));
    out
}

/// Boolean circuit files: `gN = input i | not gA | and gA gB | or gA gB`.
pub fn parse_boolean_circuit(text: &str) -> Result<BooleanCircuit> {
    let mut lines = Lines::new(text);
    let (first_no, first) = lines.next().ok_or_else(|| perr(0, "empty circuit file"))?;
    let ninputs: usize = first
        .strip_prefix("ninputs")
        .map(str::trim)
        .and_then(|v| v.parse().ok())
        .ok_or_else(|| perr(first_no, "expected 'ninputs K'"))?;
    let mut gates: Vec<BoolGate> = Vec::new();
    let mut map: HashMap<u64, GateId> = HashMap::new();
    let mut output = None;
    let mut last_id: Option<u64> = None;
    while let Some((no, line)) = lines.next() {
        if let Some(rest) = line.strip_prefix("output") {
            let id = parse_gate_ref(rest.trim())
                .ok_or_else(|| perr(no, "expected 'output gN'"))?;
            let mapped = *map
                .get(&id)
                .ok_or_else(|| perr(no, format!("output references unknown gate g{id}")))?;
            if output.is_some() {
                return Err(perr(no, "duplicate output line"));
            }
            output = Some(mapped);
            continue;
        }
        let (lhs, rhs) =
            line.split_once('=').ok_or_else(|| perr(no, "expected 'gN = ...' or 'output gN'"))?;
        let id = parse_gate_ref(lhs.trim()).ok_or_else(|| perr(no, "bad gate id"))?;
        if let Some(prev) = last_id {
            if id <= prev {
                return Err(perr(no, "gate ids must strictly increase"));
            }
        }
        let tokens: Vec<&str> = rhs.split_whitespace().collect();
        let reference = |tok: &str| -> Result<GateId> {
            let r = parse_gate_ref(tok)
                .ok_or_else(|| perr(no, format!("bad gate reference '{tok}'")))?;
            map.get(&r).copied().ok_or_else(|| perr(no, format!("reference to undefined gate g{r}")))
        };
        let gate = match tokens.as_slice() {
            ["input", i] => {
                let i: usize =
                    i.parse().map_err(|_| perr(no, format!("bad input index '{i}'")))?;
                if i == 0 || i > ninputs {
                    return Err(perr(no, format!("input index {i} out of range 1..={ninputs}")));
                }
                BoolGate::Input(i - 1)
            }
            ["not", a] => BoolGate::Not(reference(a)?),
            ["and", a, b] => BoolGate::And(reference(a)?, reference(b)?),
            ["or", a, b] => BoolGate::Or(reference(a)?, reference(b)?),
            _ => return Err(perr(no, format!("unknown gate form '{}'", rhs.trim()))),
        };
        map.insert(id, gates.len());
        last_id = Some(id);
        gates.push(gate);
    }
    let output = output.ok_or_else(|| perr(0, "missing output line"))?;
    BooleanCircuit::new(ninputs, gates, output)
}

/// Macaulay system files: header `n <n> delta <delta>`, then n+1 polynomial
/// lines over x1..x(n+1).
pub fn parse_macaulay_system(text: &str) -> Result<HomogeneousSystem> {
    let mut lines = Lines::new(text);
    let (first_no, first) = lines.next().ok_or_else(|| perr(0, "empty system file"))?;
    let tokens: Vec<&str> = first.split_whitespace().collect();
    let (n, delta) = match tokens.as_slice() {
        ["n", n, "delta", d] => {
            let n: usize = n.parse().map_err(|_| perr(first_no, "bad n"))?;
            let d: u32 = d.parse().map_err(|_| perr(first_no, "bad delta"))?;
            (n, d)
        }
        _ => return Err(perr(first_no, "expected header 'n <n> delta <delta>'")),
    };
    let mut polys = Vec::new();
    while let Some((no, line)) = lines.next() {
        polys.push(parse_polynomial(line, n + 1, no)?);
    }
    HomogeneousSystem::new(n, delta, polys)
}

/// Polynomial system files: header `nvars K`, then one polynomial per line.
pub fn parse_poly_system(text: &str) -> Result<(usize, Vec<Polynomial>)> {
    let mut lines = Lines::new(text);
    let (first_no, first) = lines.next().ok_or_else(|| perr(0, "empty system file"))?;
    let nvars: usize = first
        .strip_prefix("nvars")
        .map(str::trim)
        .and_then(|v| v.parse().ok())
        .ok_or_else(|| perr(first_no, "expected 'nvars K'"))?;
    let mut polys = Vec::new();
    while let Some((no, line)) = lines.next() {
        polys.push(parse_polynomial(line, nvars, no)?);
    }
    if polys.is_empty() {
        return Err(Error::EmptySystem);
    }
    Ok((nvars, polys))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::Rational;

    fn q(n: i64, d: i64) -> Rational {
        Rational::new(Integer::from(n), Integer::from(d))
    }

    const GT1: &str = "\
# decides x > 1
ninputs 1
g2 = input 1
g3 = const 1
g4 = sub g2 g3   # x - 1
g5 = test g4
g7 = const 2
g8 = mul g7 g5
g9 = sub g8 g3
g10 = test g9
output g10
";

    #[test]
    fn parse_algebraic_demo() {
        let parsed = parse_circuit(GT1).unwrap();
        assert!(parsed.has_tests());
        let c = parsed.into_algebraic().unwrap();
        assert!(c.eval(&[q(2, 1)]).unwrap());
        assert!(!c.eval(&[q(1, 1)]).unwrap());
        // arithmetic load must reject test gates
        assert!(parsed.into_arithmetic().is_err());
    }

    #[test]
    fn arithmetic_round_trip_with_const_expansion() {
        let text = "\
ninputs 2
g1 = input 1
g2 = input 2
g3 = const 6
g4 = mul g1 g2
g5 = add g4 g3
output g5
";
        let c = parse_circuit(text).unwrap().into_arithmetic().unwrap();
        assert_eq!(c.eval(&[q(2, 1), q(3, 1)]).unwrap(), q(12, 1));
        let printed = print_arithmetic(&c);
        let reparsed = parse_circuit(&printed).unwrap().into_arithmetic().unwrap();
        assert_eq!(reparsed.eval(&[q(2, 1), q(3, 1)]).unwrap(), q(12, 1));
    }

    #[test]
    fn algebraic_print_round_trip() {
        let c = parse_circuit(GT1).unwrap().into_algebraic().unwrap();
        let printed = print_algebraic(&c);
        let c2 = parse_circuit(&printed).unwrap().into_algebraic().unwrap();
        assert_eq!(c, c2);
    }

    #[test]
    fn parse_errors_carry_line_numbers() {
        let bad = "ninputs 1\ng1 = input 1\ng1 = input 1\noutput g1\n";
        match parse_circuit(bad) {
            Err(Error::Parse { line, .. }) => assert_eq!(line, 3),
            other => panic!("expected parse error, got {other:?}"),
        }
        let bad = "ninputs 1\ng1 = frob g0\noutput g1\n";
        assert!(matches!(parse_circuit(bad), Err(Error::Parse { line: 2, .. })));
        let bad = "ninputs 1\ng2 = add g1 g1\noutput g2\n";
        assert!(matches!(parse_circuit(bad), Err(Error::Parse { line: 2, .. })));
    }

    #[test]
    fn boolean_file_parses() {
        let text = "\
ninputs 2
g1 = input 1
g2 = input 2
g3 = and g1 g2
g4 = not g3
output g4
";
        let bc = parse_boolean_circuit(text).unwrap();
        assert!(bc.eval(&[true, false]).unwrap());
        assert!(!bc.eval(&[true, true]).unwrap());
    }

    #[test]
    fn macaulay_system_file() {
        let text = "\
n 1 delta 1
x1 - x2
2*x1 - 2*x2
";
        let sys = parse_macaulay_system(text).unwrap();
        assert_eq!(sys.n(), 1);
        assert_eq!(sys.delta(), 1);
    }

    #[test]
    fn poly_system_file() {
        let text = "nvars 1\nx1\nx1 - 1\n";
        let (nvars, polys) = parse_poly_system(text).unwrap();
        assert_eq!(nvars, 1);
        assert_eq!(polys.len(), 2);
    }
}
