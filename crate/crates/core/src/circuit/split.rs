//! Homogeneous splitting modulo 2: every gate of the input circuit is split
//! into gates for its homogeneous components of degrees 1..=dmax, while
//! degree-0 components (constants, possibly built from 1 by subcircuits)
//! are folded into parities — an even constant contributes nothing, an odd
//! one contributes 1. The result has formal degree at most dmax and agrees
//! with the input modulo 2 on 0/1 inputs whenever dmax covers the computed
//! polynomial's degree.

use super::{ArithGate, ArithmeticCircuit, GateId};
use crate::error::{Error, Result};

struct SplitGate {
    parity: bool,
    /// comps[d] computes the degree-d homogeneous component (mod 2);
    /// index 0 is unused.
    comps: Vec<Option<GateId>>,
}

pub fn homogeneous_split_mod2(c: &ArithmeticCircuit, dmax: u32) -> Result<ArithmeticCircuit> {
    if dmax == 0 {
        return Err(Error::InvalidCircuit("dmax must be at least 1".into()));
    }
    let dmax = dmax as usize;
    let mut b = ArithmeticCircuit::builder(c.nvars());
    let mut split: Vec<SplitGate> = Vec::with_capacity(c.size());
    for gate in c.gates() {
        let sg = match gate {
            ArithGate::Input(i) => {
                let mut comps = vec![None; dmax + 1];
                comps[1] = Some(b.input(*i));
                SplitGate { parity: false, comps }
            }
            ArithGate::One => SplitGate { parity: true, comps: vec![None; dmax + 1] },
            // Mod 2 there is no difference between add and sub, so both
            // combine with additions.
            ArithGate::Add(x, y) | ArithGate::Sub(x, y) => {
                let parity = split[*x].parity ^ split[*y].parity;
                let mut comps = vec![None; dmax + 1];
                for d in 1..=dmax {
                    comps[d] = match (split[*x].comps[d], split[*y].comps[d]) {
                        (Some(a), Some(c2)) => Some(b.add(a, c2)),
                        (Some(a), None) | (None, Some(a)) => Some(a),
                        (None, None) => None,
                    };
                }
                SplitGate { parity, comps }
            }
            ArithGate::Mul(x, y) => {
                let parity = split[*x].parity && split[*y].parity;
                let mut comps = vec![None; dmax + 1];
                for d in 1..=dmax {
                    let mut parts: Vec<GateId> = Vec::new();
                    for i in 1..d {
                        if let (Some(a), Some(c2)) =
                            (split[*x].comps[i], split[*y].comps[d - i])
                        {
                            parts.push(b.mul(a, c2));
                        }
                    }
                    if split[*x].parity {
                        if let Some(c2) = split[*y].comps[d] {
                            parts.push(c2);
                        }
                    }
                    if split[*y].parity {
                        if let Some(a) = split[*x].comps[d] {
                            parts.push(a);
                        }
                    }
                    if !parts.is_empty() {
                        comps[d] = Some(b.balanced_sum(&parts));
                    }
                }
                SplitGate { parity, comps }
            }
        };
        split.push(sg);
    }
    let out = &split[c.output()];
    let mut parts: Vec<GateId> = out.comps[1..].iter().flatten().copied().collect();
    if out.parity {
        let one = b.one();
        parts.push(one);
    }
    let output = b.balanced_sum(&parts);
    Ok(b.finish(output))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::{Integer, Rational};
    use num_traits::One;

    fn two() -> Integer {
        Integer::from(2)
    }

    fn bits(n: usize, m: u32) -> Vec<Rational> {
        (0..n)
            .map(|i| {
                if (m >> i) & 1 == 1 {
                    Rational::one()
                } else {
                    Rational::from_integer(0.into())
                }
            })
            .collect()
    }

    #[test]
    fn constant_plus_x() {
        // 2 + x with 2 built as 1+1 reduces to just x mod 2
        let mut b = ArithmeticCircuit::builder(1);
        let one = b.one();
        let c2 = b.add(one, one);
        let x = b.input(0);
        let out = b.add(c2, x);
        let c = b.finish(out);
        let d = homogeneous_split_mod2(&c, 1).unwrap();
        for m in 0..2 {
            let point = bits(1, m);
            assert_eq!(
                d.eval_mod(&point, &two()).unwrap(),
                c.eval_mod(&point, &two()).unwrap()
            );
        }
        assert_eq!(d.eval(&[Rational::one()]).unwrap(), Rational::one());
        assert!(d.formal_degree() <= 1);
    }

    #[test]
    fn even_constant_factor_vanishes() {
        // 4 * x1 * x2 with 4 = (1+1)*(1+1) computes 0 on boolean inputs
        let mut b = ArithmeticCircuit::builder(2);
        let one = b.one();
        let t = b.add(one, one);
        let four = b.mul(t, t);
        let xy = b.mul(0, 1);
        let out = b.mul(four, xy);
        let c = b.finish(out);
        let d = homogeneous_split_mod2(&c, 2).unwrap();
        for m in 0..4 {
            let point = bits(2, m);
            assert_eq!(d.eval_mod(&point, &two()).unwrap(), Integer::from(0));
        }
    }

    #[test]
    fn multilinear_circuit_agrees() {
        // x1*x2 + x3, already constant-free and multilinear
        let mut b = ArithmeticCircuit::builder(3);
        let m = b.mul(0, 1);
        let out = b.add(m, 2);
        let c = b.finish(out);
        let d = homogeneous_split_mod2(&c, 2).unwrap();
        for m in 0..8 {
            let point = bits(3, m);
            assert_eq!(
                d.eval_mod(&point, &two()).unwrap(),
                c.eval_mod(&point, &two()).unwrap()
            );
        }
        assert!(d.formal_degree() <= 2);
    }

    #[test]
    fn formal_degree_bound_on_degree_inflated_circuit() {
        // ((1+1) * x) has formal degree 2 but splits to degree <= 1.
        let mut b = ArithmeticCircuit::builder(1);
        let one = b.one();
        let t = b.add(one, one);
        let out = b.mul(t, 0);
        let c = b.finish(out);
        assert_eq!(c.formal_degree(), 2);
        let d = homogeneous_split_mod2(&c, 1).unwrap();
        assert!(d.formal_degree() <= 1);
        for m in 0..2 {
            let point = bits(1, m);
            assert_eq!(
                d.eval_mod(&point, &two()).unwrap(),
                c.eval_mod(&point, &two()).unwrap()
            );
        }
    }

    #[test]
    fn pure_constant_circuit() {
        // 1+1+1 is odd, so the split must evaluate to 1 mod 2.
        let mut b = ArithmeticCircuit::builder(0);
        let one = b.one();
        let t = b.add(one, one);
        let out = b.add(t, one);
        let c = b.finish(out);
        let d = homogeneous_split_mod2(&c, 1).unwrap();
        assert_eq!(d.eval_mod(&[], &two()).unwrap(), Integer::one());
    }

    #[test]
    fn rejects_zero_dmax() {
        let b = ArithmeticCircuit::builder(1);
        let x = b.input(0);
        let c = b.finish(x);
        assert!(homogeneous_split_mod2(&c, 0).is_err());
    }
}
