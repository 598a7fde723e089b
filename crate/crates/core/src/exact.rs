//! Exact scalar types: arbitrary-precision integers, reduced rationals and
//! signs. `num-bigint` / `num-rational` already give canonical
//! representations (no redundant forms, reduced fractions, positive
//! denominators), so they are used directly.

use std::fmt;
use std::ops::Mul;

use num_traits::{Signed, Zero};

pub use num_bigint::BigInt as Integer;
pub use num_rational::BigRational as Rational;

/// Bit size of the absolute value (0 for zero).
pub fn bit_size(n: &Integer) -> u64 {
    n.bits()
}

/// Coefficient size: bit size of the absolute value plus one sign bit.
pub fn coeff_size(n: &Integer) -> u64 {
    n.bits() + 1
}

/// Sign of a value: one of −1, 0, +1. Closed under multiplication.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Sign {
    Negative,
    Zero,
    Positive,
}

impl Sign {
    pub fn of_integer(n: &Integer) -> Sign {
        if n.is_zero() {
            Sign::Zero
        } else if n.is_negative() {
            Sign::Negative
        } else {
            Sign::Positive
        }
    }

    pub fn of_rational(q: &Rational) -> Sign {
        // Denominators are positive, so the numerator carries the sign.
        Sign::of_integer(q.numer())
    }

    pub fn as_i8(self) -> i8 {
        match self {
            Sign::Negative => -1,
            Sign::Zero => 0,
            Sign::Positive => 1,
        }
    }

    pub fn is_zero(self) -> bool {
        self == Sign::Zero
    }

    /// True for the `<= 0` half-line, the outcome a test gate reports as 1.
    pub fn is_nonpositive(self) -> bool {
        self != Sign::Positive
    }

    pub fn negate(self) -> Sign {
        match self {
            Sign::Negative => Sign::Positive,
            Sign::Zero => Sign::Zero,
            Sign::Positive => Sign::Negative,
        }
    }
}

impl Mul for Sign {
    type Output = Sign;

    fn mul(self, other: Sign) -> Sign {
        match (self, other) {
            (Sign::Zero, _) | (_, Sign::Zero) => Sign::Zero,
            (a, b) if a == b => Sign::Positive,
            _ => Sign::Negative,
        }
    }
}

impl fmt::Display for Sign {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.as_i8())
    }
}

/// Parse an integer or `p/q` rational. Used by the CLI and file loaders.
pub fn parse_rational(s: &str) -> Option<Rational> {
    let s = s.trim();
    match s.split_once('/') {
        Some((num, den)) => {
            let num: Integer = num.trim().parse().ok()?;
            let den: Integer = den.trim().parse().ok()?;
            if den.is_zero() {
                None
            } else {
                Some(Rational::new(num, den))
            }
        }
        None => {
            let n: Integer = s.parse().ok()?;
            Some(Rational::from_integer(n))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sign_multiplication_table() {
        use Sign::*;
        assert_eq!(Negative * Negative, Positive);
        assert_eq!(Negative * Positive, Negative);
        assert_eq!(Zero * Positive, Zero);
        assert_eq!(Positive * Positive, Positive);
    }

    #[test]
    fn coeff_size_counts_sign_bit() {
        assert_eq!(coeff_size(&Integer::from(0)), 1);
        assert_eq!(coeff_size(&Integer::from(1)), 2);
        assert_eq!(coeff_size(&Integer::from(-4)), 4);
    }

    #[test]
    fn rational_parsing() {
        assert_eq!(
            parse_rational("3/2"),
            Some(Rational::new(Integer::from(3), Integer::from(2)))
        );
        assert_eq!(parse_rational("-7"), Some(Rational::from_integer(Integer::from(-7))));
        assert_eq!(parse_rational("1/0"), None);
        assert_eq!(parse_rational("x"), None);
    }
}
