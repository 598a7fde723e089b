//! Exponential sums and products over boolean assignments: given a circuit
//! g over (x, y) with p trailing y-variables, produce a circuit over x alone
//! equal to the sum or product of g(x, eps) over all eps in {0,1}^p. An
//! optional membership predicate chi restricts the assignments, realizing
//! sum_eps chi(eps) g and prod_eps [chi(eps) g + (1 - chi(eps))]: excluded
//! summands vanish and excluded factors collapse to 1.

use super::{ArithGate, ArithmeticCircuit, BooleanCircuit, GateId};
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CombineMode {
    Sum,
    Product,
}

pub fn big_combine(
    g: &ArithmeticCircuit,
    p: usize,
    mode: CombineMode,
    membership: Option<&BooleanCircuit>,
    cap: usize,
) -> Result<ArithmeticCircuit> {
    if p > g.nvars() {
        return Err(Error::ArityMismatch { expected: g.nvars(), got: p });
    }
    if let Some(bc) = membership {
        if bc.ninputs() != p {
            return Err(Error::ArityMismatch { expected: p, got: bc.ninputs() });
        }
    }
    if p >= usize::BITS as usize || (1usize << p) > cap {
        return Err(Error::CapExceeded {
            cap: "expand-cap",
            limit: cap,
            needed: 1usize.checked_shl(p as u32).unwrap_or(usize::MAX),
        });
    }
    let nx = g.nvars() - p;
    let mut b = ArithmeticCircuit::builder(nx);
    let mut parts: Vec<GateId> = Vec::new();
    for counter in 0..(1usize << p) {
        // First y-variable carries the most significant counter bit.
        let eps: Vec<bool> = (0..p).map(|j| (counter >> (p - 1 - j)) & 1 == 1).collect();
        if let Some(bc) = membership {
            if !bc.eval(&eps)? {
                continue;
            }
        }
        parts.push(instantiate(&mut b, g, nx, &eps));
    }
    let output = match mode {
        CombineMode::Sum => b.balanced_sum(&parts),
        CombineMode::Product => b.balanced_product(&parts),
    };
    Ok(b.finish(output))
}

/// Copy g's gates into the builder with the trailing y-inputs replaced by
/// the 0/1 constants of one assignment.
fn instantiate(
    b: &mut super::CircuitBuilder,
    g: &ArithmeticCircuit,
    nx: usize,
    eps: &[bool],
) -> GateId {
    let mut map: Vec<GateId> = Vec::with_capacity(g.size());
    for gate in g.gates() {
        let id = match gate {
            ArithGate::Input(i) => {
                if *i < nx {
                    b.input(*i)
                } else if eps[*i - nx] {
                    b.one()
                } else {
                    b.zero()
                }
            }
            ArithGate::One => b.one(),
            ArithGate::Add(x, y) => b.add(map[*x], map[*y]),
            ArithGate::Sub(x, y) => b.sub(map[*x], map[*y]),
            ArithGate::Mul(x, y) => b.mul(map[*x], map[*y]),
        };
        map.push(id);
    }
    map[g.output()]
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::circuit::BoolGate;
    use crate::poly::{parse_polynomial, Polynomial};

    /// g(x, y) = x * y over variables (x1, x2=y)
    fn x_times_eps() -> ArithmeticCircuit {
        let mut b = ArithmeticCircuit::builder(2);
        let m = b.mul(0, 1);
        b.finish(m)
    }

    #[test]
    fn sum_over_one_bit() {
        // sum over eps of x * eps = 0 + x = x
        let c = big_combine(&x_times_eps(), 1, CombineMode::Sum, None, 100).unwrap();
        assert_eq!(c.nvars(), 1);
        assert_eq!(c.expand(100).unwrap(), parse_polynomial("x1", 1, 0).unwrap());
    }

    #[test]
    fn product_over_empty_membership_is_one() {
        // chi rejects everything: not(y or not y) is always false
        let chi = BooleanCircuit::new(
            1,
            vec![
                BoolGate::Input(0),
                BoolGate::Not(0),
                BoolGate::Or(0, 1),
                BoolGate::Not(2),
            ],
            3,
        )
        .unwrap();
        let c = big_combine(&x_times_eps(), 1, CombineMode::Product, Some(&chi), 100).unwrap();
        assert_eq!(c.expand(100).unwrap(), Polynomial::one(1));
    }

    #[test]
    fn product_over_singleton_membership() {
        // chi = identity: A = {1}; factor at eps=0 drops out, leaving
        // f(x, 1) = x.
        let chi = BooleanCircuit::new(1, vec![BoolGate::Input(0)], 0).unwrap();
        let c = big_combine(&x_times_eps(), 1, CombineMode::Product, Some(&chi), 100).unwrap();
        assert_eq!(c.expand(100).unwrap(), parse_polynomial("x1", 1, 0).unwrap());
    }

    #[test]
    fn sum_equals_explicit_instantiations() {
        // g(x, y1, y2) = (x + y1) * (x + y2 + 1)
        let mut b = ArithmeticCircuit::builder(3);
        let s1 = b.add(0, 1);
        let one = b.one();
        let s2 = b.add(0, 2);
        let s2 = b.add(s2, one);
        let m = b.mul(s1, s2);
        let g = b.finish(m);

        let combined = big_combine(&g, 2, CombineMode::Sum, None, 100).unwrap();
        let expanded = combined.expand(1000).unwrap();

        // oracle: substitute each assignment symbolically and add
        let x = Polynomial::var(1, 0);
        let mut expect = Polynomial::zero(1);
        for (y1, y2) in [(0, 0), (0, 1), (1, 0), (1, 1)] {
            let t1 = x.add(&Polynomial::constant(1, y1.into())).unwrap();
            let t2 = x.add(&Polynomial::constant(1, (y2 + 1).into())).unwrap();
            expect = expect.add(&t1.mul(&t2).unwrap()).unwrap();
        }
        assert_eq!(expanded, expect);
    }

    #[test]
    fn assignment_cap() {
        let mut b = ArithmeticCircuit::builder(8);
        let m = b.mul(0, 1);
        let g = b.finish(m);
        assert!(matches!(
            big_combine(&g, 8, CombineMode::Sum, None, 16),
            Err(Error::CapExceeded { .. })
        ));
    }
}
