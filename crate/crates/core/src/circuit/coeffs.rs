//! Coefficient functions — the bitwise view of a polynomial's coefficients,
//! sign at bit index 0 — and circuit construction from them: each monomial
//! is assembled by repeated squaring and the terms are summed in a balanced
//! divide-and-conquer tree.

use num_traits::{One, Signed, Zero};

use super::{ArithmeticCircuit, GateId};
use crate::error::{Error, Result};
use crate::exact::Integer;
use crate::poly::{monomials_up_to_degree, Monomial, Polynomial};

/// Bit access to the coefficients of a polynomial: `bit(alpha, 0)` is the
/// sign of the coefficient of `x^alpha` (1 for negative), `bit(alpha, i)`
/// for `i >= 1` is bit `i-1` of its absolute value. Bits beyond
/// `coeff_bit_bound` are zero, and nothing has degree above `degree_bound`.
pub struct CoefficientFunction {
    nvars: usize,
    degree_bound: u32,
    coeff_bit_bound: u64,
    bits: Box<dyn Fn(&Monomial, u64) -> bool + Send + Sync>,
}

impl CoefficientFunction {
    pub fn new(
        nvars: usize,
        degree_bound: u32,
        coeff_bit_bound: u64,
        bits: impl Fn(&Monomial, u64) -> bool + Send + Sync + 'static,
    ) -> Self {
        CoefficientFunction { nvars, degree_bound, coeff_bit_bound, bits: Box::new(bits) }
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn degree_bound(&self) -> u32 {
        self.degree_bound
    }

    pub fn coeff_bit_bound(&self) -> u64 {
        self.coeff_bit_bound
    }

    pub fn bit(&self, alpha: &Monomial, i: u64) -> bool {
        (self.bits)(alpha, i)
    }

    /// Decode the integer coefficient of one monomial.
    pub fn coefficient(&self, alpha: &Monomial) -> Integer {
        let mut mag = Integer::zero();
        for i in 1..=self.coeff_bit_bound {
            if self.bit(alpha, i) {
                mag += Integer::one() << ((i - 1) as usize);
            }
        }
        if self.bit(alpha, 0) {
            -mag
        } else {
            mag
        }
    }

    /// The coefficient function of a concrete polynomial.
    pub fn of_polynomial(p: &Polynomial) -> Self {
        let degree_bound = p.degree();
        let coeff_bit_bound = p.max_coeff_size().saturating_sub(1).max(1);
        let poly = p.clone();
        CoefficientFunction::new(p.nvars(), degree_bound, coeff_bit_bound, move |alpha, i| {
            let c = poly.coefficient(alpha);
            if i == 0 {
                c.is_negative()
            } else if c.is_zero() {
                false
            } else {
                c.abs().bit(i - 1)
            }
        })
    }
}

impl std::fmt::Debug for CoefficientFunction {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("CoefficientFunction")
            .field("nvars", &self.nvars)
            .field("degree_bound", &self.degree_bound)
            .field("coeff_bit_bound", &self.coeff_bit_bound)
            .finish_non_exhaustive()
    }
}

/// Build a circuit computing `sum_alpha (-1)^bit(alpha,0) *
/// (sum_i bit(alpha,i) 2^(i-1)) x^alpha` over all monomials within the
/// degree bound. `cap` limits the monomial list size.
pub fn build_from_coefficients(
    f: &CoefficientFunction,
    nvars: usize,
    cap: usize,
) -> Result<ArithmeticCircuit> {
    if f.nvars() != nvars {
        return Err(Error::NvarsMismatch { left: f.nvars(), right: nvars });
    }
    let monomials = monomials_up_to_degree(nvars, f.degree_bound());
    if monomials.len() > cap {
        return Err(Error::CapExceeded {
            cap: "expand-cap",
            limit: cap,
            needed: monomials.len(),
        });
    }
    let mut b = ArithmeticCircuit::builder(nvars);
    let mut positive: Vec<GateId> = Vec::new();
    let mut negative: Vec<GateId> = Vec::new();
    for alpha in &monomials {
        let c = f.coefficient(alpha);
        if c.is_zero() {
            continue;
        }
        // x^alpha by repeated squaring per variable.
        let mut factors: Vec<GateId> = Vec::new();
        for (i, &e) in alpha.0.iter().enumerate() {
            if e > 0 {
                let base = b.input(i);
                factors.push(b.power(base, u64::from(e)));
            }
        }
        let mag = c.abs();
        if !mag.is_one() {
            factors.push(b.constant(&mag));
        }
        let term = b.balanced_product(&factors);
        if c.is_negative() {
            negative.push(term);
        } else {
            positive.push(term);
        }
    }
    let output = match (positive.is_empty(), negative.is_empty()) {
        (true, true) => b.zero(),
        (false, true) => b.balanced_sum(&positive),
        (true, false) => {
            let neg = b.balanced_sum(&negative);
            let zero = b.zero();
            b.sub(zero, neg)
        }
        (false, false) => {
            let pos = b.balanced_sum(&positive);
            let neg = b.balanced_sum(&negative);
            b.sub(pos, neg)
        }
    };
    Ok(b.finish(output))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::Rational;
    use crate::poly::parse_polynomial;

    fn q(n: i64) -> Rational {
        Rational::from_integer(Integer::from(n))
    }

    #[test]
    fn encoded_3x_evaluates_to_6_at_2() {
        // 3x: sign 0, bits 1 and 2 set for the monomial (1).
        let f = CoefficientFunction::new(1, 1, 2, |alpha, i| {
            alpha.0 == [1] && (i == 1 || i == 2)
        });
        let c = build_from_coefficients(&f, 1, 100).unwrap();
        assert_eq!(c.eval(&[q(2)]).unwrap(), q(6));
    }

    #[test]
    fn all_zero_function_builds_zero() {
        let f = CoefficientFunction::new(2, 3, 4, |_, _| false);
        let c = build_from_coefficients(&f, 2, 100).unwrap();
        assert_eq!(c.eval(&[q(7), q(-3)]).unwrap(), q(0));
    }

    #[test]
    fn sign_bit_negates() {
        // -x: sign bit set, magnitude 1.
        let f = CoefficientFunction::new(1, 1, 1, |alpha, i| alpha.0 == [1] && (i == 0 || i == 1));
        let c = build_from_coefficients(&f, 1, 100).unwrap();
        assert_eq!(c.eval(&[q(1)]).unwrap(), q(-1));
    }

    #[test]
    fn of_polynomial_round_trips() {
        let p = parse_polynomial("5*x1^2*x2 - 3*x2^3 + 11", 2, 0).unwrap();
        let f = CoefficientFunction::of_polynomial(&p);
        let c = build_from_coefficients(&f, 2, 1000).unwrap();
        let pts = [
            vec![q(0), q(0)],
            vec![q(1), q(2)],
            vec![q(-3), q(5)],
            vec![Rational::new(2.into(), 3.into()), Rational::new((-1).into(), 2.into())],
        ];
        for pt in &pts {
            assert_eq!(c.eval(pt).unwrap(), p.eval(pt).unwrap());
        }
    }

    #[test]
    fn monomial_cap() {
        let f = CoefficientFunction::new(2, 10, 4, |_, _| false);
        assert!(matches!(
            build_from_coefficients(&f, 2, 5),
            Err(Error::CapExceeded { .. })
        ));
    }
}
