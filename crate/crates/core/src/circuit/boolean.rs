//! Boolean circuits over {not, and, or} and their arithmetization: `not u`
//! becomes `1 - u`, `u and v` becomes `uv`, `u or v` becomes `u + v - uv`.
//! On 0/1 inputs the arithmetic circuit takes the same 0/1 values, at no
//! more than three arithmetic gates per boolean gate.

use super::{ArithmeticCircuit, GateId};
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum BoolGate {
    Input(usize),
    Not(GateId),
    And(GateId, GateId),
    Or(GateId, GateId),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BooleanCircuit {
    ninputs: usize,
    gates: Vec<BoolGate>,
    output: GateId,
}

impl BooleanCircuit {
    pub fn new(ninputs: usize, gates: Vec<BoolGate>, output: GateId) -> Result<Self> {
        if gates.is_empty() {
            return Err(Error::InvalidCircuit("circuit has no gates".into()));
        }
        if output >= gates.len() {
            return Err(Error::InvalidCircuit(format!("output gate g{output} does not exist")));
        }
        for (id, gate) in gates.iter().enumerate() {
            let check = |child: GateId| -> Result<()> {
                if child >= id {
                    return Err(Error::InvalidCircuit(format!(
                        "gate {id} references non-earlier gate {child}"
                    )));
                }
                Ok(())
            };
            match gate {
                BoolGate::Input(i) => {
                    if *i >= ninputs {
                        return Err(Error::InvalidCircuit(format!(
                            "input index {i} out of range for {ninputs} inputs"
                        )));
                    }
                }
                BoolGate::Not(a) => check(*a)?,
                BoolGate::And(a, b) | BoolGate::Or(a, b) => {
                    check(*a)?;
                    check(*b)?;
                }
            }
        }
        Ok(BooleanCircuit { ninputs, gates, output })
    }

    pub fn ninputs(&self) -> usize {
        self.ninputs
    }

    pub fn gates(&self) -> &[BoolGate] {
        &self.gates
    }

    pub fn output(&self) -> GateId {
        self.output
    }

    pub fn size(&self) -> usize {
        self.gates.len()
    }

    pub fn eval(&self, inputs: &[bool]) -> Result<bool> {
        if inputs.len() != self.ninputs {
            return Err(Error::ArityMismatch { expected: self.ninputs, got: inputs.len() });
        }
        let mut values: Vec<bool> = Vec::with_capacity(self.gates.len());
        for gate in &self.gates {
            let v = match gate {
                BoolGate::Input(i) => inputs[*i],
                BoolGate::Not(a) => !values[*a],
                BoolGate::And(a, b) => values[*a] && values[*b],
                BoolGate::Or(a, b) => values[*a] || values[*b],
            };
            values.push(v);
        }
        Ok(values[self.output])
    }
}

/// Arithmetize a boolean circuit. The result has at most `3 * bc.size()`
/// gates and agrees with the boolean circuit on every 0/1 input.
pub fn simulate_boolean(bc: &BooleanCircuit) -> ArithmeticCircuit {
    let mut b = ArithmeticCircuit::builder(bc.ninputs());
    let mut map: Vec<GateId> = Vec::with_capacity(bc.size());
    for gate in bc.gates() {
        let id = match gate {
            BoolGate::Input(i) => b.input(*i),
            BoolGate::Not(a) => {
                let one = b.one();
                b.sub(one, map[*a])
            }
            BoolGate::And(a, x) => b.mul(map[*a], map[*x]),
            BoolGate::Or(a, x) => {
                let sum = b.add(map[*a], map[*x]);
                let prod = b.mul(map[*a], map[*x]);
                b.sub(sum, prod)
            }
        };
        map.push(id);
    }
    let out = map[bc.output()];
    b.finish(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::Rational;
    use num_traits::{One, Zero};

    fn bit(b: bool) -> Rational {
        if b {
            Rational::one()
        } else {
            Rational::zero()
        }
    }

    #[test]
    fn gate_level_translations() {
        // NOT on input 1 -> 0
        let bc = BooleanCircuit::new(1, vec![BoolGate::Input(0), BoolGate::Not(0)], 1).unwrap();
        let ac = simulate_boolean(&bc);
        assert_eq!(ac.eval(&[bit(true)]).unwrap(), bit(false));
        assert_eq!(ac.eval(&[bit(false)]).unwrap(), bit(true));

        // AND on (1,1) -> 1
        let bc = BooleanCircuit::new(
            2,
            vec![BoolGate::Input(0), BoolGate::Input(1), BoolGate::And(0, 1)],
            2,
        )
        .unwrap();
        let ac = simulate_boolean(&bc);
        assert_eq!(ac.eval(&[bit(true), bit(true)]).unwrap(), bit(true));
        assert_eq!(ac.eval(&[bit(true), bit(false)]).unwrap(), bit(false));

        // OR on (0,0) -> 0 + 0 - 0 = 0
        let bc = BooleanCircuit::new(
            2,
            vec![BoolGate::Input(0), BoolGate::Input(1), BoolGate::Or(0, 1)],
            2,
        )
        .unwrap();
        let ac = simulate_boolean(&bc);
        assert_eq!(ac.eval(&[bit(false), bit(false)]).unwrap(), bit(false));
        assert_eq!(ac.eval(&[bit(false), bit(true)]).unwrap(), bit(true));
    }

    #[test]
    fn size_bound_holds() {
        let bc = BooleanCircuit::new(
            3,
            vec![
                BoolGate::Input(0),
                BoolGate::Input(1),
                BoolGate::Input(2),
                BoolGate::Or(0, 1),
                BoolGate::Not(3),
                BoolGate::And(4, 2),
                BoolGate::Or(5, 0),
            ],
            6,
        )
        .unwrap();
        let ac = simulate_boolean(&bc);
        assert!(ac.size() <= 3 * bc.size(), "{} > 3 * {}", ac.size(), bc.size());
        // exhaustive agreement
        for m in 0..8u32 {
            let ins: Vec<bool> = (0..3).map(|i| (m >> i) & 1 == 1).collect();
            let expect = bc.eval(&ins).unwrap();
            let point: Vec<Rational> = ins.iter().map(|&x| bit(x)).collect();
            assert_eq!(ac.eval(&point).unwrap(), bit(expect));
        }
    }
}
