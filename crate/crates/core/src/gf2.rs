//! GF(2) vectors, the halving-vector search and the deterministic
//! choice-list sequence used by the full-sign-condition binary search.

use std::fmt;

use crate::error::{Error, Result};

/// Default cap on vector length for the exhaustive halving search.
pub const DEFAULT_MAX_SPRIME: usize = 24;

/// Fixed-length bit vector over GF(2). Coordinate 0 is the first (most
/// significant in counting order) position.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Gf2Vector {
    len: usize,
    bits: u64,
}

impl Gf2Vector {
    pub fn zero(len: usize) -> Self {
        assert!(len < 64);
        Gf2Vector { len, bits: 0 }
    }

    pub fn from_bits(bits: &[bool]) -> Self {
        assert!(bits.len() < 64);
        let mut v = Gf2Vector::zero(bits.len());
        for (i, &b) in bits.iter().enumerate() {
            v.set(i, b);
        }
        v
    }

    /// Vector for a counter value: coordinate 0 carries the counter's most
    /// significant bit, so counting 0, 1, 2, ... yields 00, 01, 10, 11 for
    /// length 2.
    pub fn from_counter(len: usize, counter: u64) -> Self {
        let mut v = Gf2Vector::zero(len);
        for i in 0..len {
            v.set(i, (counter >> (len - 1 - i)) & 1 == 1);
        }
        v
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn get(&self, i: usize) -> bool {
        assert!(i < self.len);
        (self.bits >> i) & 1 == 1
    }

    pub fn set(&mut self, i: usize, b: bool) {
        assert!(i < self.len);
        if b {
            self.bits |= 1 << i;
        } else {
            self.bits &= !(1 << i);
        }
    }

    /// Positions with a set bit, the "subset of {1..s'}" view (0-based).
    pub fn support(&self) -> impl Iterator<Item = usize> + '_ {
        (0..self.len).filter(|&i| self.get(i))
    }

    /// Inner product mod 2.
    pub fn dot(&self, other: &Gf2Vector) -> Result<bool> {
        if self.len != other.len {
            return Err(Error::LengthMismatch { left: self.len, right: other.len });
        }
        Ok((self.bits & other.bits).count_ones() % 2 == 1)
    }

    pub fn is_orthogonal_to(&self, other: &Gf2Vector) -> Result<bool> {
        Ok(!self.dot(other)?)
    }
}

impl fmt::Display for Gf2Vector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.len {
            write!(f, "{}", if self.get(i) { '1' } else { '0' })?;
        }
        Ok(())
    }
}

/// Orthogonality count lies in [n/2 - sqrt(n)/2, n/2 + sqrt(n)/2], checked
/// exactly as (2*count - n)^2 <= n.
fn count_in_halving_range(count: usize, n: usize) -> bool {
    let d = 2 * count as i128 - n as i128;
    d * d <= n as i128
}

/// First vector in counting order orthogonal to at least
/// `N'/2 - sqrt(N')/2` and at most `N'/2 + sqrt(N')/2` of the given
/// pairwise-distinct vectors. Such a vector always exists.
pub fn find_halving_vector(vectors: &[Gf2Vector], max_sprime: usize) -> Result<Gf2Vector> {
    assert!(!vectors.is_empty(), "vector set must be nonempty");
    let len = vectors[0].len();
    if len > max_sprime {
        return Err(Error::CapExceeded { cap: "max-sprime", limit: max_sprime, needed: len });
    }
    let n = vectors.len();
    for counter in 0..(1u64 << len) {
        let u = Gf2Vector::from_counter(len, counter);
        let mut count = 0usize;
        for v in vectors {
            if u.is_orthogonal_to(v)? {
                count += 1;
            }
        }
        if count_in_halving_range(count, n) {
            return Ok(u);
        }
    }
    Err(Error::OracleInconsistency("no halving vector found".into()))
}

/// The deterministic sequence `u^(1), ..., u^(l+1)` for a vector set and a
/// choice list: `u^(1)` halves the full set, and `u^(i+1)` halves the
/// subset of vectors whose inner products with `u^(1..i)` match the first
/// `i` choices. Errors when a step filters the set to empty.
pub fn star_sequence(
    vectors: &[Gf2Vector],
    choices: &[bool],
    max_sprime: usize,
) -> Result<Vec<Gf2Vector>> {
    let mut us = Vec::with_capacity(choices.len() + 1);
    let mut current: Vec<Gf2Vector> = vectors.to_vec();
    us.push(find_halving_vector(&current, max_sprime)?);
    for &c in choices {
        let u = *us.last().expect("nonempty");
        let mut next = Vec::with_capacity(current.len());
        for v in current {
            if v.dot(&u)? == c {
                next.push(v);
            }
        }
        if next.is_empty() {
            return Err(Error::InconsistentChoices);
        }
        current = next;
        us.push(find_halving_vector(&current, max_sprime)?);
    }
    Ok(us)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn v(bits: &[u8]) -> Gf2Vector {
        Gf2Vector::from_bits(&bits.iter().map(|&b| b == 1).collect::<Vec<_>>())
    }

    #[test]
    fn inner_product_examples() {
        assert!(v(&[1, 1]).dot(&v(&[0, 1])).unwrap());
        assert!(!Gf2Vector::zero(3).dot(&v(&[1, 0, 1])).unwrap());
        assert!(!v(&[1, 0, 1]).dot(&v(&[1, 1, 1])).unwrap());
        assert!(v(&[1, 0]).dot(&v(&[1, 0, 1])).is_err());
    }

    #[test]
    fn counting_order_puts_first_coordinate_most_significant() {
        assert_eq!(Gf2Vector::from_counter(2, 0), v(&[0, 0]));
        assert_eq!(Gf2Vector::from_counter(2, 1), v(&[0, 1]));
        assert_eq!(Gf2Vector::from_counter(2, 2), v(&[1, 0]));
        assert_eq!(Gf2Vector::from_counter(2, 3), v(&[1, 1]));
    }

    #[test]
    fn halving_vector_full_square() {
        // {00, 01, 10, 11}: 00 is orthogonal to all 4, outside [1, 3];
        // 01 is orthogonal to exactly 2.
        let set = vec![v(&[0, 0]), v(&[0, 1]), v(&[1, 0]), v(&[1, 1])];
        let u = find_halving_vector(&set, 24).unwrap();
        assert_eq!(u, v(&[0, 1]));
    }

    #[test]
    fn halving_vector_three_vectors() {
        let set = vec![v(&[1, 1]), v(&[0, 1]), v(&[0, 0])];
        let u = find_halving_vector(&set, 24).unwrap();
        assert_eq!(u, v(&[0, 1]));
    }

    #[test]
    fn halving_vector_singleton_is_zero() {
        let set = vec![v(&[1, 0, 1])];
        assert_eq!(find_halving_vector(&set, 24).unwrap(), Gf2Vector::zero(3));
    }

    #[test]
    fn star_sequence_spec_cases() {
        let set = vec![v(&[1, 1]), v(&[0, 1]), v(&[0, 0])];
        // c = (0): V1 = {00}, whose halving vector is 00.
        let us = star_sequence(&set, &[false], 24).unwrap();
        assert_eq!(us, vec![v(&[0, 1]), v(&[0, 0])]);
        // empty c
        let us = star_sequence(&set, &[], 24).unwrap();
        assert_eq!(us, vec![v(&[0, 1])]);
        // c = (1): V1 = {11, 01}, first halving vector is 10.
        let us = star_sequence(&set, &[true], 24).unwrap();
        assert_eq!(us, vec![v(&[0, 1]), v(&[1, 0])]);
    }

    #[test]
    fn cap_is_enforced() {
        let set = vec![Gf2Vector::zero(30)];
        assert!(matches!(
            find_halving_vector(&set, 24),
            Err(Error::CapExceeded { cap: "max-sprime", .. })
        ));
    }
}
