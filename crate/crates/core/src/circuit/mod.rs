//! Arithmetic-circuit DAGs in the constant-free discipline: inputs, the
//! constant 1, and fan-in-2 add/sub/mul gates. Gates are stored in
//! topological order (references point backward) with a single output.

mod boolean;
mod coeffs;
mod combine;
mod families;
mod split;

pub use boolean::{simulate_boolean, BoolGate, BooleanCircuit};
pub use coeffs::{build_from_coefficients, CoefficientFunction};
pub use combine::{big_combine, CombineMode};
pub use families::{hamilton_cycles, hamilton_paths, DEFAULT_FAMILY_CAP};
pub use split::homogeneous_split_mod2;

use std::collections::HashMap;

use num_integer::Integer as _;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::exact::{Integer, Rational};
use crate::poly::{Monomial, Polynomial};

/// Default cap on intermediate term counts for symbolic expansion.
pub const DEFAULT_EXPAND_CAP: usize = 5000;

pub type GateId = usize;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ArithGate {
    Input(usize),
    One,
    Add(GateId, GateId),
    Sub(GateId, GateId),
    Mul(GateId, GateId),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ArithmeticCircuit {
    nvars: usize,
    gates: Vec<ArithGate>,
    output: GateId,
}

impl ArithmeticCircuit {
    pub fn new(nvars: usize, gates: Vec<ArithGate>, output: GateId) -> Result<Self> {
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
                ArithGate::Input(i) => {
                    if *i >= nvars {
                        return Err(Error::InvalidCircuit(format!(
                            "input index {i} out of range for {nvars} variables"
                        )));
                    }
                }
                ArithGate::One => {}
                ArithGate::Add(a, b) | ArithGate::Sub(a, b) | ArithGate::Mul(a, b) => {
                    check(*a)?;
                    check(*b)?;
                }
            }
        }
        Ok(ArithmeticCircuit { nvars, gates, output })
    }

    pub fn builder(nvars: usize) -> CircuitBuilder {
        CircuitBuilder::new(nvars)
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn gates(&self) -> &[ArithGate] {
        &self.gates
    }

    pub fn output(&self) -> GateId {
        self.output
    }

    pub fn size(&self) -> usize {
        self.gates.len()
    }

    /// Exact evaluation at a rational point.
    pub fn eval(&self, point: &[Rational]) -> Result<Rational> {
        if point.len() != self.nvars {
            return Err(Error::ArityMismatch { expected: self.nvars, got: point.len() });
        }
        let mut values: Vec<Rational> = Vec::with_capacity(self.gates.len());
        for gate in &self.gates {
            let v = match gate {
                ArithGate::Input(i) => point[*i].clone(),
                ArithGate::One => Rational::one(),
                ArithGate::Add(a, b) => &values[*a] + &values[*b],
                ArithGate::Sub(a, b) => &values[*a] - &values[*b],
                ArithGate::Mul(a, b) => &values[*a] * &values[*b],
            };
            values.push(v);
        }
        Ok(values.swap_remove(self.output))
    }

    /// Evaluation with every gate value reduced modulo `modulus`; inputs
    /// must be integers. Returns the canonical residue in `0..modulus`.
    pub fn eval_mod(&self, point: &[Rational], modulus: &Integer) -> Result<Integer> {
        if point.len() != self.nvars {
            return Err(Error::ArityMismatch { expected: self.nvars, got: point.len() });
        }
        if *modulus < Integer::from(2) {
            return Err(Error::ModulusTooSmall);
        }
        let ints: Vec<Integer> = point
            .iter()
            .map(|q| {
                if q.denom().is_one() {
                    Ok(q.numer().mod_floor(modulus))
                } else {
                    Err(Error::NonIntegerModularInput)
                }
            })
            .collect::<Result<_>>()?;
        let mut values: Vec<Integer> = Vec::with_capacity(self.gates.len());
        for gate in &self.gates {
            let v = match gate {
                ArithGate::Input(i) => ints[*i].clone(),
                ArithGate::One => Integer::one(),
                ArithGate::Add(a, b) => (&values[*a] + &values[*b]).mod_floor(modulus),
                ArithGate::Sub(a, b) => (&values[*a] - &values[*b]).mod_floor(modulus),
                ArithGate::Mul(a, b) => (&values[*a] * &values[*b]).mod_floor(modulus),
            };
            values.push(v);
        }
        Ok(values.swap_remove(self.output))
    }

    /// Formal degree: leaves score 1, add/sub take the max of their
    /// children, mul takes the sum. An upper bound on the degree of the
    /// computed polynomial, possibly much larger.
    pub fn formal_degree(&self) -> u64 {
        self.formal_degrees()[self.output]
    }

    pub(crate) fn formal_degrees(&self) -> Vec<u64> {
        let mut deg: Vec<u64> = Vec::with_capacity(self.gates.len());
        for gate in &self.gates {
            let d = match gate {
                ArithGate::Input(_) | ArithGate::One => 1,
                ArithGate::Add(a, b) | ArithGate::Sub(a, b) => deg[*a].max(deg[*b]),
                ArithGate::Mul(a, b) => {
                    let s: u64 = deg[*a];
                    s.saturating_add(deg[*b])
                }
            };
            deg.push(d);
        }
        deg
    }

    /// Symbolic expansion into the exact polynomial the circuit computes.
    /// `cap` bounds every intermediate term count; expansion can be
    /// exponentially large.
    pub fn expand(&self, cap: usize) -> Result<Polynomial> {
        let mut polys: Vec<Polynomial> = Vec::with_capacity(self.gates.len());
        for gate in &self.gates {
            let p = match gate {
                ArithGate::Input(i) => Polynomial::var(self.nvars, *i),
                ArithGate::One => Polynomial::one(self.nvars),
                ArithGate::Add(a, b) => polys[*a].add(&polys[*b])?,
                ArithGate::Sub(a, b) => polys[*a].sub(&polys[*b])?,
                ArithGate::Mul(a, b) => polys[*a].mul(&polys[*b])?,
            };
            if p.num_terms() > cap {
                return Err(Error::CapExceeded {
                    cap: "expand-cap",
                    limit: cap,
                    needed: p.num_terms(),
                });
            }
            polys.push(p);
        }
        Ok(polys.swap_remove(self.output))
    }

    /// Coefficient of one monomial in the computed polynomial, gate by gate:
    /// additions sum child coefficients, multiplications convolve over the
    /// splittings `beta + gamma = alpha` admitted by the children's formal
    /// degrees. Agrees with `expand` wherever expansion is feasible, without
    /// materializing the polynomial.
    pub fn extract_coefficient(&self, alpha: &Monomial) -> Result<Integer> {
        if alpha.len() != self.nvars {
            return Err(Error::ArityMismatch { expected: self.nvars, got: alpha.len() });
        }
        let degrees = self.formal_degrees();
        let mut memo: HashMap<(GateId, Monomial), Integer> = HashMap::new();
        Ok(self.coeff_rec(self.output, alpha, &degrees, &mut memo))
    }

    fn coeff_rec(
        &self,
        gate: GateId,
        alpha: &Monomial,
        degrees: &[u64],
        memo: &mut HashMap<(GateId, Monomial), Integer>,
    ) -> Integer {
        if u64::from(alpha.total_degree()) > degrees[gate] {
            return Integer::zero();
        }
        if let Some(c) = memo.get(&(gate, alpha.clone())) {
            return c.clone();
        }
        let result = match &self.gates[gate] {
            ArithGate::Input(i) => {
                if alpha == &Monomial::var(self.nvars, *i) {
                    Integer::one()
                } else {
                    Integer::zero()
                }
            }
            ArithGate::One => {
                if alpha.is_constant() {
                    Integer::one()
                } else {
                    Integer::zero()
                }
            }
            ArithGate::Add(a, b) => {
                self.coeff_rec(*a, alpha, degrees, memo)
                    + self.coeff_rec(*b, alpha, degrees, memo)
            }
            ArithGate::Sub(a, b) => {
                self.coeff_rec(*a, alpha, degrees, memo)
                    - self.coeff_rec(*b, alpha, degrees, memo)
            }
            ArithGate::Mul(a, b) => {
                let mut acc = Integer::zero();
                let mut beta = vec![0u32; alpha.len()];
                self.convolve(
                    *a,
                    *b,
                    alpha,
                    0,
                    0,
                    &mut beta,
                    degrees,
                    memo,
                    &mut acc,
                );
                acc
            }
        };
        memo.insert((gate, alpha.clone()), result.clone());
        result
    }

    #[allow(clippy::too_many_arguments)]
    fn convolve(
        &self,
        a: GateId,
        b: GateId,
        alpha: &Monomial,
        pos: usize,
        beta_total: u64,
        beta: &mut Vec<u32>,
        degrees: &[u64],
        memo: &mut HashMap<(GateId, Monomial), Integer>,
        acc: &mut Integer,
    ) {
        if beta_total > degrees[a] {
            return;
        }
        if pos == alpha.len() {
            let gamma_total = u64::from(alpha.total_degree()) - beta_total;
            if gamma_total > degrees[b] {
                return;
            }
            let beta_m = Monomial(beta.clone());
            let ca = self.coeff_rec(a, &beta_m, degrees, memo);
            if ca.is_zero() {
                return;
            }
            let gamma = alpha.checked_div(&beta_m).expect("beta <= alpha");
            let cb = self.coeff_rec(b, &gamma, degrees, memo);
            *acc += ca * cb;
            return;
        }
        for e in 0..=alpha.0[pos] {
            beta[pos] = e;
            self.convolve(a, b, alpha, pos + 1, beta_total + u64::from(e), beta, degrees, memo, acc);
        }
        beta[pos] = 0;
    }
}

/// Incremental construction of a circuit. Input gates for all variables are
/// allocated up front (ids `0..nvars`), so built circuits share them.
#[derive(Debug, Clone)]
pub struct CircuitBuilder {
    nvars: usize,
    gates: Vec<ArithGate>,
    one: Option<GateId>,
    zero: Option<GateId>,
}

impl CircuitBuilder {
    pub fn new(nvars: usize) -> Self {
        let gates = (0..nvars).map(ArithGate::Input).collect();
        CircuitBuilder { nvars, gates, one: None, zero: None }
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn len(&self) -> usize {
        self.gates.len()
    }

    pub fn is_empty(&self) -> bool {
        self.gates.is_empty()
    }

    pub fn input(&self, i: usize) -> GateId {
        assert!(i < self.nvars, "input index out of range");
        i
    }

    pub fn push(&mut self, gate: ArithGate) -> GateId {
        self.gates.push(gate);
        self.gates.len() - 1
    }

    /// Shared constant-1 gate.
    pub fn one(&mut self) -> GateId {
        match self.one {
            Some(id) => id,
            None => {
                let id = self.push(ArithGate::One);
                self.one = Some(id);
                id
            }
        }
    }

    /// Shared zero gate, built as `1 - 1`.
    pub fn zero(&mut self) -> GateId {
        match self.zero {
            Some(id) => id,
            None => {
                let one = self.one();
                let id = self.push(ArithGate::Sub(one, one));
                self.zero = Some(id);
                id
            }
        }
    }

    pub fn add(&mut self, a: GateId, b: GateId) -> GateId {
        self.push(ArithGate::Add(a, b))
    }

    pub fn sub(&mut self, a: GateId, b: GateId) -> GateId {
        self.push(ArithGate::Sub(a, b))
    }

    pub fn mul(&mut self, a: GateId, b: GateId) -> GateId {
        self.push(ArithGate::Mul(a, b))
    }

    /// Balanced left-to-right combination; `empty` supplies the identity
    /// gate for an empty list.
    pub fn balanced(
        &mut self,
        ids: &[GateId],
        combine: fn(&mut Self, GateId, GateId) -> GateId,
        empty: fn(&mut Self) -> GateId,
    ) -> GateId {
        match ids.len() {
            0 => empty(self),
            1 => ids[0],
            n => {
                let (left, right) = ids.split_at(n.div_ceil(2));
                let l = self.balanced(left, combine, empty);
                let r = self.balanced(right, combine, empty);
                combine(self, l, r)
            }
        }
    }

    pub fn balanced_sum(&mut self, ids: &[GateId]) -> GateId {
        self.balanced(ids, Self::add, Self::zero)
    }

    pub fn balanced_product(&mut self, ids: &[GateId]) -> GateId {
        self.balanced(ids, Self::mul, Self::one)
    }

    /// `base^k` by repeated squaring; `base^0` is the constant 1.
    pub fn power(&mut self, base: GateId, k: u64) -> GateId {
        if k == 0 {
            return self.one();
        }
        let mut selected: Vec<GateId> = Vec::new();
        let mut square = base;
        let mut rem = k;
        loop {
            if rem & 1 == 1 {
                selected.push(square);
            }
            rem >>= 1;
            if rem == 0 {
                break;
            }
            square = self.mul(square, square);
        }
        let mut acc = selected[0];
        for s in &selected[1..] {
            acc = self.mul(acc, *s);
        }
        acc
    }

    /// An arbitrary integer constant built from 1 by a balanced chain of
    /// doublings and additions.
    pub fn constant(&mut self, k: &Integer) -> GateId {
        if k.is_zero() {
            return self.zero();
        }
        if k.is_negative() {
            let zero = self.zero();
            let mag = self.constant(&k.abs());
            return self.sub(zero, mag);
        }
        if k.is_one() {
            return self.one();
        }
        // k = sum of 2^b over its set bits; powers of two by doubling.
        let one = self.one();
        let mut doubles: Vec<GateId> = vec![one];
        let mut current = one;
        for _ in 1..k.bits() {
            current = self.add(current, current);
            doubles.push(current);
        }
        let bit_gates: Vec<GateId> =
            (0..k.bits()).filter(|&b| k.bit(b)).map(|b| doubles[b as usize]).collect();
        self.balanced_sum(&bit_gates)
    }

    pub fn finish(self, output: GateId) -> ArithmeticCircuit {
        ArithmeticCircuit::new(self.nvars, self.gates, output)
            .expect("builder maintains invariants")
    }
}
