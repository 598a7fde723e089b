//! Algebraic circuits: arithmetic DAGs extended with indegree-1 test gates
//! labelled "<= 0?". A test gate takes the value 0 when its entry is
//! strictly positive and 1 otherwise, and the output gate is always a test
//! gate, so the circuit decides membership of rational tuples. Constant
//! leaves may carry any integer; the constant-free discipline restricts
//! them to 1.

use std::collections::{HashMap, HashSet};

use num_traits::One;

use crate::error::{Error, Result};
use crate::exact::{Integer, Rational, Sign};
use crate::poly::Polynomial;
use crate::signcond::{enumerate_sign_conditions, SignCondition};

/// Default cap on the number of test gates for scenario enumeration.
pub const DEFAULT_MAX_TESTS: usize = 12;

pub type GateId = usize;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum BssGate {
    Input(usize),
    Const(Integer),
    Add(GateId, GateId),
    Sub(GateId, GateId),
    Mul(GateId, GateId),
    Test(GateId),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AlgebraicCircuit {
    nvars: usize,
    gates: Vec<BssGate>,
    output: GateId,
}

impl AlgebraicCircuit {
    pub fn new(nvars: usize, gates: Vec<BssGate>, output: GateId) -> Result<Self> {
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
                BssGate::Input(i) => {
                    if *i >= nvars {
                        return Err(Error::InvalidCircuit(format!(
                            "input index {i} out of range for {nvars} variables"
                        )));
                    }
                }
                BssGate::Const(_) => {}
                BssGate::Add(a, b) | BssGate::Sub(a, b) | BssGate::Mul(a, b) => {
                    check(*a)?;
                    check(*b)?;
                }
                BssGate::Test(a) => check(*a)?,
            }
        }
        if !matches!(gates[output], BssGate::Test(_)) {
            return Err(Error::InvalidCircuit("output gate must be a test gate".into()));
        }
        Ok(AlgebraicCircuit { nvars, gates, output })
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn gates(&self) -> &[BssGate] {
        &self.gates
    }

    pub fn output(&self) -> GateId {
        self.output
    }

    pub fn size(&self) -> usize {
        self.gates.len()
    }

    /// Ids of all test gates, ascending.
    pub fn test_gates(&self) -> Vec<GateId> {
        (0..self.gates.len())
            .filter(|&id| matches!(self.gates[id], BssGate::Test(_)))
            .collect()
    }

    /// Decide the input: exact evaluation, test gates yielding 1 exactly
    /// when their entry is <= 0.
    pub fn eval(&self, x: &[Rational]) -> Result<bool> {
        Ok(self.eval_with_trace(x, false)?.0)
    }

    /// Like `eval`, but also returns the polynomial fed into every test
    /// gate that fired, in firing order, with earlier test outcomes
    /// substituted as constants.
    pub fn eval_instrumented(&self, x: &[Rational]) -> Result<(bool, Vec<Polynomial>)> {
        self.eval_with_trace(x, true)
    }

    fn eval_with_trace(&self, x: &[Rational], trace: bool) -> Result<(bool, Vec<Polynomial>)> {
        if x.len() != self.nvars {
            return Err(Error::ArityMismatch { expected: self.nvars, got: x.len() });
        }
        let mut values: Vec<Rational> = Vec::with_capacity(self.gates.len());
        let mut polys: Vec<Polynomial> = Vec::new();
        let mut tested: Vec<Polynomial> = Vec::new();
        for gate in &self.gates {
            let v = match gate {
                BssGate::Input(i) => x[*i].clone(),
                BssGate::Const(k) => Rational::from_integer(k.clone()),
                BssGate::Add(a, b) => &values[*a] + &values[*b],
                BssGate::Sub(a, b) => &values[*a] - &values[*b],
                BssGate::Mul(a, b) => &values[*a] * &values[*b],
                BssGate::Test(a) => {
                    if Sign::of_rational(&values[*a]).is_nonpositive() {
                        Rational::one()
                    } else {
                        Rational::from_integer(0.into())
                    }
                }
            };
            if trace {
                let p = match gate {
                    BssGate::Input(i) => Polynomial::var(self.nvars, *i),
                    BssGate::Const(k) => Polynomial::constant(self.nvars, k.clone()),
                    BssGate::Add(a, b) => polys[*a].add(&polys[*b])?,
                    BssGate::Sub(a, b) => polys[*a].sub(&polys[*b])?,
                    BssGate::Mul(a, b) => polys[*a].mul(&polys[*b])?,
                    BssGate::Test(a) => {
                        tested.push(polys[*a].clone());
                        let bit = if Sign::of_rational(&values[*a]).is_nonpositive() {
                            Integer::one()
                        } else {
                            Integer::from(0)
                        };
                        Polynomial::constant(self.nvars, bit)
                    }
                };
                polys.push(p);
            }
            values.push(v);
        }
        Ok((values[self.output].is_one(), tested))
    }

    /// Gate levels: leaves at level 0, every other gate one above its
    /// deepest child (longest path from a leaf). Returns one id list per
    /// level.
    pub fn slice_levels(&self) -> Vec<Vec<GateId>> {
        let mut level: Vec<usize> = Vec::with_capacity(self.gates.len());
        for gate in &self.gates {
            let l = match gate {
                BssGate::Input(_) | BssGate::Const(_) => 0,
                BssGate::Add(a, b) | BssGate::Sub(a, b) | BssGate::Mul(a, b) => {
                    1 + level[*a].max(level[*b])
                }
                BssGate::Test(a) => 1 + level[*a],
            };
            level.push(l);
        }
        let depth = level.iter().copied().max().unwrap_or(0);
        let mut slices = vec![Vec::new(); depth + 1];
        for (id, &l) in level.iter().enumerate() {
            slices[l].push(id);
        }
        slices
    }

    /// Every polynomial that can be fed into a test gate in some execution.
    ///
    /// Levels are processed in order; within a level, every assignment of
    /// outcomes to the lower-level test gates (a scenario, in binary
    /// counting order) fixes the polynomial at each test gate, which is
    /// appended unless already present. With `prune`, scenarios whose
    /// outcome combination no real input can realize are skipped; this
    /// needs the complete univariate sign backend.
    pub fn enumerate_tested_polynomials(
        &self,
        prune: bool,
        max_tests: usize,
        expand_cap: usize,
    ) -> Result<Vec<Polynomial>> {
        if prune && self.nvars != 1 {
            return Err(Error::NotUnivariate);
        }
        let tests = self.test_gates();
        if tests.len() > max_tests {
            return Err(Error::CapExceeded {
                cap: "max-tests",
                limit: max_tests,
                needed: tests.len(),
            });
        }
        let slices = self.slice_levels();
        let mut level_of: Vec<usize> = vec![0; self.gates.len()];
        for (l, ids) in slices.iter().enumerate() {
            for &id in ids {
                level_of[id] = l;
            }
        }
        // Scenario bit j corresponds to lower_tests[j], sorted by
        // (level, gate id); bit j is the j-th least significant.
        let mut ordered_tests = tests.clone();
        ordered_tests.sort_by_key(|&id| (level_of[id], id));

        let mut out: Vec<Polynomial> = Vec::new();
        let mut seen: HashSet<Polynomial> = HashSet::new();
        for (l, ids) in slices.iter().enumerate() {
            let level_tests: Vec<GateId> = ids
                .iter()
                .copied()
                .filter(|&id| matches!(self.gates[id], BssGate::Test(_)))
                .collect();
            if level_tests.is_empty() {
                continue;
            }
            let lower: Vec<GateId> =
                ordered_tests.iter().copied().filter(|&t| level_of[t] < l).collect();
            for scenario in 0u64..(1u64 << lower.len()) {
                let outcome: HashMap<GateId, bool> = lower
                    .iter()
                    .enumerate()
                    .map(|(j, &t)| (t, (scenario >> j) & 1 == 1))
                    .collect();
                let polys = self.scenario_polys(l, &level_of, &outcome, expand_cap)?;
                if prune && !self.scenario_satisfiable(&lower, &outcome, &polys)? {
                    continue;
                }
                for &t in &level_tests {
                    let child = match self.gates[t] {
                        BssGate::Test(a) => a,
                        _ => unreachable!(),
                    };
                    let p = polys[child].clone().expect("child below level");
                    if seen.insert(p.clone()) {
                        out.push(p);
                    }
                }
            }
        }
        Ok(out)
    }

    /// Per-gate polynomials for all gates strictly below `level`, with test
    /// gates replaced by their scenario outcome constants.
    fn scenario_polys(
        &self,
        level: usize,
        level_of: &[usize],
        outcome: &HashMap<GateId, bool>,
        expand_cap: usize,
    ) -> Result<Vec<Option<Polynomial>>> {
        let mut polys: Vec<Option<Polynomial>> = vec![None; self.gates.len()];
        for (id, gate) in self.gates.iter().enumerate() {
            if level_of[id] >= level {
                continue;
            }
            let p = match gate {
                BssGate::Input(i) => Polynomial::var(self.nvars, *i),
                BssGate::Const(k) => Polynomial::constant(self.nvars, k.clone()),
                BssGate::Add(a, b) => {
                    polys[*a].as_ref().unwrap().add(polys[*b].as_ref().unwrap())?
                }
                BssGate::Sub(a, b) => {
                    polys[*a].as_ref().unwrap().sub(polys[*b].as_ref().unwrap())?
                }
                BssGate::Mul(a, b) => {
                    polys[*a].as_ref().unwrap().mul(polys[*b].as_ref().unwrap())?
                }
                BssGate::Test(_) => {
                    let bit = outcome.get(&id).copied().expect("scenario covers lower tests");
                    Polynomial::constant(self.nvars, if bit { Integer::one() } else { 0.into() })
                }
            };
            if p.num_terms() > expand_cap {
                return Err(Error::CapExceeded {
                    cap: "expand-cap",
                    limit: expand_cap,
                    needed: p.num_terms(),
                });
            }
            polys[id] = Some(p);
        }
        Ok(polys)
    }

    /// Is there a real input realizing this outcome combination? Outcome 1
    /// demands the tested polynomial be <= 0, outcome 0 demands > 0.
    fn scenario_satisfiable(
        &self,
        lower: &[GateId],
        outcome: &HashMap<GateId, bool>,
        polys: &[Option<Polynomial>],
    ) -> Result<bool> {
        if lower.is_empty() {
            return Ok(true);
        }
        let system: Vec<Polynomial> = lower
            .iter()
            .map(|&t| {
                let child = match self.gates[t] {
                    BssGate::Test(a) => a,
                    _ => unreachable!(),
                };
                polys[child].clone().expect("child below test level")
            })
            .collect();
        let table = enumerate_sign_conditions(&system)?;
        let matches = |cond: &SignCondition| {
            lower.iter().enumerate().all(|(j, &t)| {
                let want_nonpositive = outcome[&t];
                if want_nonpositive {
                    cond.signs()[j].is_nonpositive()
                } else {
                    cond.signs()[j] == Sign::Positive
                }
            })
        };
        Ok(table.conditions().iter().any(matches))
    }

    /// Replace every constant leaf other than 1 by a fresh input variable
    /// (one per distinct value, appended after the original inputs). The
    /// returned bindings give the original value of each new variable;
    /// substituting them back is evaluation-equivalent.
    pub fn constants_to_variables(&self) -> (AlgebraicCircuit, Vec<Integer>) {
        let mut bindings: Vec<Integer> = Vec::new();
        let mut var_of: HashMap<Integer, usize> = HashMap::new();
        for gate in &self.gates {
            if let BssGate::Const(k) = gate {
                if !k.is_one() && !var_of.contains_key(k) {
                    var_of.insert(k.clone(), self.nvars + bindings.len());
                    bindings.push(k.clone());
                }
            }
        }
        let nvars = self.nvars + bindings.len();
        let gates = self
            .gates
            .iter()
            .map(|gate| match gate {
                BssGate::Const(k) if !k.is_one() => BssGate::Input(var_of[k]),
                other => other.clone(),
            })
            .collect();
        let circuit = AlgebraicCircuit { nvars, gates, output: self.output };
        (circuit, bindings)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::parse_polynomial;

    fn q(n: i64, d: i64) -> Rational {
        Rational::new(Integer::from(n), Integer::from(d))
    }

    fn pp(s: &str) -> Polynomial {
        parse_polynomial(s, 1, 0).unwrap()
    }

    /// test(x - 1)
    fn gt_one_test() -> AlgebraicCircuit {
        AlgebraicCircuit::new(
            1,
            vec![
                BssGate::Input(0),
                BssGate::Const(Integer::one()),
                BssGate::Sub(0, 1),
                BssGate::Test(2),
            ],
            3,
        )
        .unwrap()
    }

    #[test]
    fn test_gate_semantics() {
        let c = gt_one_test();
        // entry 1 > 0 at x=2 -> 0
        assert!(!c.eval(&[q(2, 1)]).unwrap());
        // entry 0 -> "1 otherwise" includes 0
        assert!(c.eval(&[q(1, 1)]).unwrap());
        assert!(c.eval(&[q(1, 2)]).unwrap());

        // test(x^2 + 1) is 0 everywhere
        let c = AlgebraicCircuit::new(
            1,
            vec![
                BssGate::Input(0),
                BssGate::Mul(0, 0),
                BssGate::Const(Integer::one()),
                BssGate::Add(1, 2),
                BssGate::Test(3),
            ],
            4,
        )
        .unwrap();
        for x in [q(-7, 3), q(0, 1), q(11, 2)] {
            assert!(!c.eval(&[x]).unwrap());
        }
    }

    #[test]
    fn output_must_be_test() {
        assert!(AlgebraicCircuit::new(1, vec![BssGate::Input(0)], 0).is_err());
    }

    #[test]
    fn levels_by_longest_path() {
        // input -> test
        let c = AlgebraicCircuit::new(1, vec![BssGate::Input(0), BssGate::Test(0)], 1).unwrap();
        assert_eq!(c.slice_levels(), vec![vec![0], vec![1]]);

        // x, x*x, test: mul at level 1, test at level 2
        let c = AlgebraicCircuit::new(
            1,
            vec![BssGate::Input(0), BssGate::Mul(0, 0), BssGate::Test(1)],
            2,
        )
        .unwrap();
        assert_eq!(c.slice_levels(), vec![vec![0], vec![1], vec![2]]);

        // diamond sharing an input: the shared leaf appears once, level 0
        let c = AlgebraicCircuit::new(
            1,
            vec![
                BssGate::Input(0),
                BssGate::Add(0, 0),
                BssGate::Mul(0, 1),
                BssGate::Test(2),
            ],
            3,
        )
        .unwrap();
        let slices = c.slice_levels();
        assert_eq!(slices[0], vec![0]);
        assert_eq!(slices.len(), 4);
    }

    #[test]
    fn tested_polynomials_with_dependent_tests() {
        // g1=x, g2=test(g1), g3=sub(g1,g2), g4=test(g3):
        // scenarios for g2 give x and x-1 after deduplication of x.
        let c = AlgebraicCircuit::new(
            1,
            vec![
                BssGate::Input(0),
                BssGate::Test(0),
                BssGate::Sub(0, 1),
                BssGate::Test(2),
            ],
            3,
        )
        .unwrap();
        let polys = c.enumerate_tested_polynomials(false, 12, 1000).unwrap();
        assert_eq!(polys, vec![pp("x1"), pp("x1 - 1")]);
    }

    #[test]
    fn tested_polynomials_independent_tests() {
        // tests on x and on x*x feeding the output test through arithmetic
        let c = AlgebraicCircuit::new(
            1,
            vec![
                BssGate::Input(0),
                BssGate::Mul(0, 0),
                BssGate::Test(0),
                BssGate::Test(1),
                BssGate::Add(2, 3),
                BssGate::Test(4),
            ],
            5,
        )
        .unwrap();
        let polys = c.enumerate_tested_polynomials(false, 12, 1000).unwrap();
        // level 1: x and x^2; level 2: the four scenario constants for
        // t2 + t3, deduplicated.
        assert_eq!(polys[0], pp("x1"));
        assert_eq!(polys[1], pp("x1^2"));
        assert!(polys[2..].iter().all(|p| p.degree() == 0));
    }

    #[test]
    fn single_output_test() {
        let c = gt_one_test();
        let polys = c.enumerate_tested_polynomials(false, 12, 1000).unwrap();
        assert_eq!(polys, vec![pp("x1 - 1")]);
    }

    #[test]
    fn pruning_drops_unreachable_scenarios() {
        // g2 tests x^2+1 (always 0 outcome); the dependent test sees only
        // the scenario where g2's outcome is 0 once pruned.
        let c = AlgebraicCircuit::new(
            1,
            vec![
                BssGate::Input(0),
                BssGate::Mul(0, 0),
                BssGate::Const(Integer::one()),
                BssGate::Add(1, 2), // x^2 + 1
                BssGate::Test(3),
                BssGate::Sub(0, 4), // x - t
                BssGate::Test(5),
            ],
            6,
        )
        .unwrap();
        let unpruned = c.enumerate_tested_polynomials(false, 12, 1000).unwrap();
        assert_eq!(unpruned, vec![pp("x1^2 + 1"), pp("x1"), pp("x1 - 1")]);
        let pruned = c.enumerate_tested_polynomials(true, 12, 1000).unwrap();
        assert_eq!(pruned, vec![pp("x1^2 + 1"), pp("x1")]);
    }

    #[test]
    fn test_cap_enforced() {
        let c = gt_one_test();
        assert!(matches!(
            c.enumerate_tested_polynomials(false, 0, 1000),
            Err(Error::CapExceeded { cap: "max-tests", .. })
        ));
    }

    #[test]
    fn instrumented_eval_reports_tested_polys() {
        let c = AlgebraicCircuit::new(
            1,
            vec![
                BssGate::Input(0),
                BssGate::Test(0),
                BssGate::Sub(0, 1),
                BssGate::Test(2),
            ],
            3,
        )
        .unwrap();
        // x = 2: first test sees x (positive -> 0), second sees x - 0 = x
        let (accept, tested) = c.eval_instrumented(&[q(2, 1)]).unwrap();
        assert!(!accept);
        assert_eq!(tested, vec![pp("x1"), pp("x1")]);
        // x = -1: first test 1, second sees x - 1
        let (accept, tested) = c.eval_instrumented(&[q(-1, 1)]).unwrap();
        assert!(accept);
        assert_eq!(tested, vec![pp("x1"), pp("x1 - 1")]);
    }

    #[test]
    fn constants_become_variables() {
        let c = AlgebraicCircuit::new(
            1,
            vec![
                BssGate::Input(0),
                BssGate::Const(Integer::from(5)),
                BssGate::Sub(0, 1),
                BssGate::Test(2),
            ],
            3,
        )
        .unwrap();
        let (c2, bindings) = c.constants_to_variables();
        assert_eq!(bindings, vec![Integer::from(5)]);
        assert_eq!(c2.nvars(), 2);
        // back-substitution is evaluation-equivalent
        for x in [q(-3, 1), q(5, 1), q(11, 2)] {
            let direct = c.eval(&[x.clone()]).unwrap();
            let bound = c2.eval(&[x, q(5, 1)]).unwrap();
            assert_eq!(direct, bound);
        }

        // constant-free circuits are unchanged
        let cf = gt_one_test();
        let (cf2, bindings) = cf.constants_to_variables();
        assert!(bindings.is_empty());
        assert_eq!(cf2, cf);
    }
}
