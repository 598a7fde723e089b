//! Sparse multivariate polynomials with exact integer coefficients.
//!
//! The canonical monomial order is lexicographic on exponent tuples with the
//! first variable most significant; polynomials print and enumerate their
//! terms in descending canonical order (`x1^2 + x1 + 1` style). Zero
//! coefficients are never stored.

use std::collections::BTreeMap;
use std::fmt;

use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::exact::{coeff_size, Integer, Rational, Sign};

/// Exponent vector of fixed length (the ambient variable count).
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Monomial(pub Vec<u32>);

impl Monomial {
    pub fn constant(nvars: usize) -> Self {
        Monomial(vec![0; nvars])
    }

    pub fn var(nvars: usize, idx: usize) -> Self {
        assert!(idx < nvars, "variable index out of range");
        let mut e = vec![0; nvars];
        e[idx] = 1;
        Monomial(e)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn total_degree(&self) -> u32 {
        self.0.iter().sum()
    }

    pub fn is_constant(&self) -> bool {
        self.0.iter().all(|&e| e == 0)
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        debug_assert_eq!(self.len(), other.len());
        Monomial(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    /// Componentwise quotient, `None` when `other` does not divide `self`.
    pub fn checked_div(&self, other: &Monomial) -> Option<Monomial> {
        debug_assert_eq!(self.len(), other.len());
        self.0
            .iter()
            .zip(&other.0)
            .map(|(a, b)| a.checked_sub(*b))
            .collect::<Option<Vec<_>>>()
            .map(Monomial)
    }

    pub fn divides(&self, other: &Monomial) -> bool {
        other.checked_div(self).is_some()
    }
}

/// Sparse multivariate polynomial over the integers.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Polynomial {
    nvars: usize,
    terms: BTreeMap<Monomial, Integer>,
}

impl Polynomial {
    pub fn zero(nvars: usize) -> Self {
        Polynomial { nvars, terms: BTreeMap::new() }
    }

    pub fn one(nvars: usize) -> Self {
        Polynomial::constant(nvars, Integer::one())
    }

    pub fn constant(nvars: usize, c: Integer) -> Self {
        let mut p = Polynomial::zero(nvars);
        p.add_term(Monomial::constant(nvars), c);
        p
    }

    pub fn var(nvars: usize, idx: usize) -> Self {
        let mut p = Polynomial::zero(nvars);
        p.add_term(Monomial::var(nvars, idx), Integer::one());
        p
    }

    pub fn from_terms<I>(nvars: usize, terms: I) -> Result<Self>
    where
        I: IntoIterator<Item = (Monomial, Integer)>,
    {
        let mut p = Polynomial::zero(nvars);
        for (m, c) in terms {
            if m.len() != nvars {
                return Err(Error::ArityMismatch { expected: nvars, got: m.len() });
            }
            p.add_term(m, c);
        }
        Ok(p)
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn coefficient(&self, m: &Monomial) -> Integer {
        self.terms.get(m).cloned().unwrap_or_else(Integer::zero)
    }

    /// Terms in descending canonical order.
    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &Integer)> {
        self.terms.iter().rev()
    }

    /// Total degree; 0 for the zero polynomial.
    pub fn degree(&self) -> u32 {
        self.terms.keys().map(|m| m.total_degree()).max().unwrap_or(0)
    }

    /// Largest coefficient size (bit size of |c| plus one sign bit).
    pub fn max_coeff_size(&self) -> u64 {
        self.terms.values().map(coeff_size).max().unwrap_or(1)
    }

    /// True when every term has total degree exactly `d` (vacuously for 0).
    pub fn is_homogeneous_of_degree(&self, d: u32) -> bool {
        self.terms.keys().all(|m| m.total_degree() == d)
    }

    fn add_term(&mut self, m: Monomial, c: Integer) {
        debug_assert_eq!(m.len(), self.nvars);
        if c.is_zero() {
            return;
        }
        use std::collections::btree_map::Entry;
        match self.terms.entry(m) {
            Entry::Vacant(e) => {
                e.insert(c);
            }
            Entry::Occupied(mut e) => {
                *e.get_mut() += c;
                if e.get().is_zero() {
                    e.remove();
                }
            }
        }
    }

    fn check_nvars(&self, other: &Polynomial) -> Result<()> {
        if self.nvars != other.nvars {
            return Err(Error::NvarsMismatch { left: self.nvars, right: other.nvars });
        }
        Ok(())
    }

    pub fn add(&self, other: &Polynomial) -> Result<Polynomial> {
        self.check_nvars(other)?;
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), c.clone());
        }
        Ok(out)
    }

    pub fn sub(&self, other: &Polynomial) -> Result<Polynomial> {
        self.check_nvars(other)?;
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), -c.clone());
        }
        Ok(out)
    }

    pub fn mul(&self, other: &Polynomial) -> Result<Polynomial> {
        self.check_nvars(other)?;
        let mut out = Polynomial::zero(self.nvars);
        for (m1, c1) in &self.terms {
            for (m2, c2) in &other.terms {
                out.add_term(m1.mul(m2), c1 * c2);
            }
        }
        Ok(out)
    }

    pub fn neg(&self) -> Polynomial {
        Polynomial {
            nvars: self.nvars,
            terms: self.terms.iter().map(|(m, c)| (m.clone(), -c)).collect(),
        }
    }

    pub fn scale(&self, c: &Integer) -> Polynomial {
        if c.is_zero() {
            return Polynomial::zero(self.nvars);
        }
        Polynomial {
            nvars: self.nvars,
            terms: self.terms.iter().map(|(m, k)| (m.clone(), k * c)).collect(),
        }
    }

    /// Exact evaluation at a rational point.
    pub fn eval(&self, point: &[Rational]) -> Result<Rational> {
        if point.len() != self.nvars {
            return Err(Error::ArityMismatch { expected: self.nvars, got: point.len() });
        }
        // Power tables avoid recomputing x_i^e across terms.
        let mut max_exp = vec![0u32; self.nvars];
        for m in self.terms.keys() {
            for (i, &e) in m.0.iter().enumerate() {
                max_exp[i] = max_exp[i].max(e);
            }
        }
        let powers: Vec<Vec<Rational>> = point
            .iter()
            .zip(&max_exp)
            .map(|(x, &emax)| {
                let mut row = Vec::with_capacity(emax as usize + 1);
                row.push(Rational::one());
                for _ in 0..emax {
                    let next = row.last().unwrap() * x;
                    row.push(next);
                }
                row
            })
            .collect();
        let mut acc = Rational::zero();
        for (m, c) in &self.terms {
            let mut term = Rational::from_integer(c.clone());
            for (i, &e) in m.0.iter().enumerate() {
                if e > 0 {
                    term *= &powers[i][e as usize];
                }
            }
            acc += term;
        }
        Ok(acc)
    }

    /// Exact sign at a rational point.
    pub fn sign_at(&self, point: &[Rational]) -> Result<Sign> {
        Ok(Sign::of_rational(&self.eval(point)?))
    }

    /// Homogeneous components of degrees `0..=dmax`; terms of higher degree
    /// are discarded.
    pub fn homogeneous_components(&self, dmax: u32) -> Vec<Polynomial> {
        let mut parts = vec![Polynomial::zero(self.nvars); dmax as usize + 1];
        for (m, c) in &self.terms {
            let d = m.total_degree();
            if d <= dmax {
                parts[d as usize].add_term(m.clone(), c.clone());
            }
        }
        parts
    }

    /// Substitution that lowers degrees to be polynomial in `pbound`: every
    /// power `v_i^k` becomes `prod_{j in bits(k)} z_{i,j}` and every
    /// coefficient magnitude `2^b` becomes `prod_{j in bits(b)} w_j`, so all
    /// output coefficients lie in {−1, 0, 1}. Substituting
    /// `z_{i,j} <- v_i^{2^j}` and `w_j <- 2^{2^j}` recovers the input; see
    /// [`degree_reduce_inverse`].
    ///
    /// Output variable layout: `z_{i,j}` at index `i*pbound + j`, then the
    /// `w_j` block at `nvars*pbound + j`.
    pub fn degree_reduce(&self, pbound: u32) -> Result<Polynomial> {
        let pb = pbound as usize;
        let limit_deg = 1u64.checked_shl(pbound).unwrap_or(u64::MAX);
        if u64::from(self.degree()) >= limit_deg {
            return Err(Error::CapExceeded {
                cap: "degree-reduce degree bound",
                limit: (limit_deg.saturating_sub(1)) as usize,
                needed: self.degree() as usize,
            });
        }
        // Coefficient bound: |c| < 2^(2^pbound), i.e. bit positions < 2^pbound.
        for c in self.terms.values() {
            if c.bits() > limit_deg {
                return Err(Error::CapExceeded {
                    cap: "degree-reduce coefficient bound",
                    limit: limit_deg as usize,
                    needed: c.bits() as usize,
                });
            }
        }
        let out_nvars = self.nvars * pb + pb;
        let mut out = Polynomial::zero(out_nvars);
        for (m, c) in &self.terms {
            let mut zpart = vec![0u32; out_nvars];
            for (i, &e) in m.0.iter().enumerate() {
                for j in 0..pb {
                    if (e >> j) & 1 == 1 {
                        zpart[i * pb + j] = 1;
                    }
                }
            }
            let negative = c.is_negative();
            let mag = c.abs();
            // One output term per set bit b of |c|, carrying prod_{j in
            // bits(b)} w_j.
            for b in 0..mag.bits() {
                if !mag.bit(b) {
                    continue;
                }
                let mut exps = zpart.clone();
                for j in 0..pb {
                    if (b >> j) & 1 == 1 {
                        exps[self.nvars * pb + j] = 1;
                    }
                }
                let coeff = if negative { -Integer::one() } else { Integer::one() };
                out.add_term(Monomial(exps), coeff);
            }
        }
        Ok(out)
    }
}

/// All monomials of total degree exactly `d` in `nvars` variables, in
/// descending canonical (lexicographic) order.
pub fn monomials_of_degree(nvars: usize, d: u32) -> Vec<Monomial> {
    let mut out = Vec::new();
    let mut current = Vec::with_capacity(nvars);
    gen_monomials(nvars, d, true, &mut current, &mut out);
    out
}

/// All monomials of total degree at most `d`, in descending canonical order.
pub fn monomials_up_to_degree(nvars: usize, d: u32) -> Vec<Monomial> {
    let mut out = Vec::new();
    let mut current = Vec::with_capacity(nvars);
    gen_monomials(nvars, d, false, &mut current, &mut out);
    out
}

fn gen_monomials(
    nvars: usize,
    budget: u32,
    exact: bool,
    current: &mut Vec<u32>,
    out: &mut Vec<Monomial>,
) {
    if current.len() == nvars {
        if !exact || budget == 0 {
            out.push(Monomial(current.clone()));
        }
        return;
    }
    // Descending exponent on the most significant remaining variable gives
    // descending lexicographic output.
    for e in (0..=budget).rev() {
        current.push(e);
        gen_monomials(nvars, budget - e, exact, current, out);
        current.pop();
    }
}

/// Undo [`Polynomial::degree_reduce`]: substitute `z_{i,j} <- v_i^{2^j}` and
/// `w_j <- 2^{2^j}` in a polynomial over the reduced variable layout.
pub fn degree_reduce_inverse(reduced: &Polynomial, nvars: usize, pbound: u32) -> Polynomial {
    let pb = pbound as usize;
    assert_eq!(reduced.nvars(), nvars * pb + pb);
    let mut out = Polynomial::zero(nvars);
    for (m, c) in reduced.terms() {
        let mut exps = vec![0u64; nvars];
        let mut factor = Integer::one();
        for (idx, &e) in m.0.iter().enumerate() {
            if e == 0 {
                continue;
            }
            if idx < nvars * pb {
                let (i, j) = (idx / pb, idx % pb);
                exps[i] += (1u64 << j) * u64::from(e);
            } else {
                // w_j^e contributes 2^(2^j * e)
                let j = idx - nvars * pb;
                factor *= Integer::one() << ((1usize << j) * e as usize);
            }
        }
        let mono =
            Monomial(exps.iter().map(|&e| u32::try_from(e).expect("exponent overflow")).collect());
        out.add_term(mono, c * factor);
    }
    out
}

impl fmt::Display for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        for (k, (m, c)) in self.terms().enumerate() {
            let negative = c.is_negative();
            if k == 0 {
                if negative {
                    write!(f, "-")?;
                }
            } else if negative {
                write!(f, " - ")?;
            } else {
                write!(f, " + ")?;
            }
            let mag = c.abs();
            let mut wrote_factor = false;
            if !mag.is_one() || m.is_constant() {
                write!(f, "{mag}")?;
                wrote_factor = true;
            }
            for (i, &e) in m.0.iter().enumerate() {
                if e == 0 {
                    continue;
                }
                if wrote_factor {
                    write!(f, "*")?;
                }
                write!(f, "x{}", i + 1)?;
                if e > 1 {
                    write!(f, "^{e}")?;
                }
                wrote_factor = true;
            }
        }
        Ok(())
    }
}

/// Parse the text form produced by `Display`: signed terms of
/// `c * x1^a1 * ... * xk^ak` shape. Whitespace-insensitive; the `*` between
/// factors is optional. `line` seeds parse-error locations.
pub fn parse_polynomial(input: &str, nvars: usize, line: usize) -> Result<Polynomial> {
    let err = |msg: String| Error::Parse { line, msg };
    let chars: Vec<char> = input.chars().filter(|c| !c.is_whitespace()).collect();
    if chars.is_empty() {
        return Err(err("empty polynomial".into()));
    }
    let mut pos = 0;
    let mut poly = Polynomial::zero(nvars);
    let mut first = true;
    while pos < chars.len() {
        let mut sign = 1i32;
        if chars[pos] == '+' || chars[pos] == '-' {
            if chars[pos] == '-' {
                sign = -1;
            }
            pos += 1;
        } else if !first {
            return Err(err(format!("expected '+' or '-' at position {pos}")));
        }
        first = false;
        let (m, c, next) = parse_term(&chars, pos, nvars, line)?;
        pos = next;
        poly.add_term(m, if sign < 0 { -c } else { c });
    }
    Ok(poly)
}

fn parse_term(
    chars: &[char],
    mut pos: usize,
    nvars: usize,
    line: usize,
) -> Result<(Monomial, Integer, usize)> {
    let err = |msg: String| Error::Parse { line, msg };
    let mut coeff = Integer::one();
    let mut exps = vec![0u32; nvars];
    let mut any = false;
    loop {
        if pos >= chars.len() || chars[pos] == '+' || chars[pos] == '-' {
            break;
        }
        if chars[pos] == '*' {
            if !any {
                return Err(err(format!("unexpected '*' at position {pos}")));
            }
            pos += 1;
            continue;
        }
        if chars[pos].is_ascii_digit() {
            let (n, next) = parse_number(chars, pos).ok_or_else(|| err("bad number".into()))?;
            coeff *= n;
            pos = next;
            any = true;
        } else if chars[pos] == 'x' {
            pos += 1;
            let (idx, next) =
                parse_number(chars, pos).ok_or_else(|| err("bad variable index".into()))?;
            let idx = idx.to_usize().filter(|&i| i >= 1 && i <= nvars).ok_or_else(|| {
                err(format!("variable index out of range 1..={nvars}"))
            })?;
            pos = next;
            let mut e = 1u32;
            if pos < chars.len() && chars[pos] == '^' {
                pos += 1;
                let (n, next) =
                    parse_number(chars, pos).ok_or_else(|| err("bad exponent".into()))?;
                e = n.to_u32().ok_or_else(|| err("exponent too large".into()))?;
                pos = next;
            }
            exps[idx - 1] += e;
            any = true;
        } else {
            return Err(err(format!("unexpected character '{}'", chars[pos])));
        }
    }
    if !any {
        return Err(err("empty term".into()));
    }
    Ok((Monomial(exps), coeff, pos))
}

fn parse_number(chars: &[char], pos: usize) -> Option<(Integer, usize)> {
    let mut end = pos;
    while end < chars.len() && chars[end].is_ascii_digit() {
        end += 1;
    }
    if end == pos {
        return None;
    }
    let s: String = chars[pos..end].iter().collect();
    Some((s.parse().ok()?, end))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(s: &str, nvars: usize) -> Polynomial {
        parse_polynomial(s, nvars, 0).unwrap()
    }

    fn q(n: i64, d: i64) -> Rational {
        Rational::new(Integer::from(n), Integer::from(d))
    }

    #[test]
    fn mul_difference_of_squares() {
        let a = p("x1 + 1", 1);
        let b = p("x1 - 1", 1);
        assert_eq!(a.mul(&b).unwrap(), p("x1^2 - 1", 1));
    }

    #[test]
    fn additive_identity_and_cancellation() {
        let a = p("3*x1^2 + x2", 2);
        assert_eq!(a.add(&Polynomial::zero(2)).unwrap(), a);
        let sq = p("x1^2", 1);
        assert!(sq.sub(&sq).unwrap().is_zero());
    }

    #[test]
    fn nvars_mismatch_rejected() {
        let a = Polynomial::var(1, 0);
        let b = Polynomial::var(2, 0);
        assert!(matches!(a.add(&b), Err(Error::NvarsMismatch { .. })));
    }

    #[test]
    fn eval_examples() {
        let f = p("x1^2 - 2", 1);
        assert_eq!(f.eval(&[q(3, 2)]).unwrap(), q(1, 4));
        // At the all-zero point any polynomial gives its constant term.
        let g = p("5*x1^3 - 2*x1 + 7", 1);
        assert_eq!(g.eval(&[q(0, 1)]).unwrap(), q(7, 1));
        let h = p("x1*x2", 2);
        assert_eq!(h.eval(&[q(2, 1), q(1, 2)]).unwrap(), q(1, 1));
        assert!(h.eval(&[q(1, 1)]).is_err());
    }

    #[test]
    fn homogeneous_components_grading() {
        let f = p("x1^2 + x1 + 1", 1);
        let parts = f.homogeneous_components(2);
        assert_eq!(parts, vec![p("1", 1), p("x1", 1), p("x1^2", 1)]);

        let g = p("x1^3 + x1", 1);
        let parts = g.homogeneous_components(2);
        assert_eq!(parts, vec![Polynomial::zero(1), p("x1", 1), Polynomial::zero(1)]);

        // A homogeneous input lands in a single slot.
        let h = p("x1*x2", 2);
        let parts = h.homogeneous_components(3);
        assert!(parts[0].is_zero() && parts[1].is_zero() && parts[3].is_zero());
        assert_eq!(parts[2], h);
    }

    #[test]
    fn degree_reduce_examples() {
        // v1^3 -> z_{1,0} * z_{1,1}  (bits of 3 are {0,1})
        let f = p("x1^3", 1);
        let r = f.degree_reduce(2).unwrap();
        // layout: z10 z11 w0 w1
        assert_eq!(r, p("x1*x2", 4));

        // constant 4 = 2^2 -> w_1 (bits of 2 are {1})
        let f = p("4", 1);
        let r = f.degree_reduce(2).unwrap();
        assert_eq!(r, p("x4", 4));

        // constant 1: empty products on both sides
        let f = p("1", 1);
        assert_eq!(f.degree_reduce(2).unwrap(), p("1", 4));
    }

    #[test]
    fn degree_reduce_round_trip() {
        let f = p("7*x1^3 - 5*x1*x2^2 + 12", 2);
        let r = f.degree_reduce(3).unwrap();
        for c in r.terms.values() {
            assert!(c.abs().is_one());
        }
        assert_eq!(degree_reduce_inverse(&r, 2, 3), f);
    }

    #[test]
    fn degree_reduce_bounds_enforced() {
        let f = p("x1^4", 1);
        assert!(f.degree_reduce(2).is_err()); // 4 >= 2^2
    }

    #[test]
    fn display_and_parse_round_trip() {
        let f = p("-x1^2 + 3*x1*x2 - 7", 2);
        assert_eq!(f.to_string(), "-x1^2 + 3*x1*x2 - 7");
        assert_eq!(p(&f.to_string(), 2), f);
        // whitespace-insensitive, '*' optional
        assert_eq!(p("  - x1 ^ 2+3 x1 x2   -7 ", 2), f);
    }

    #[test]
    fn parse_rejects_garbage() {
        assert!(parse_polynomial("x3", 2, 5).is_err());
        assert!(parse_polynomial("2 +", 1, 5).is_err());
        assert!(parse_polynomial("", 1, 5).is_err());
        assert!(parse_polynomial("y1", 1, 5).is_err());
    }
}
