//! Univariate integer polynomials, Sturm sequences and exact real-root
//! isolation. This backs the complete sign-condition enumeration: every root
//! is either an exact rational or a refinable isolating interval, and signs
//! of other polynomials at such a root are decided exactly, with no
//! tolerance anywhere.

use std::cmp::Ordering;
use std::fmt;

use num_integer::Integer as _;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::exact::{Integer, Rational, Sign};
use crate::poly::{Monomial, Polynomial};

/// Dense univariate polynomial over the integers, coefficients ascending,
/// no trailing zeros.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct UniPoly {
    coeffs: Vec<Integer>,
}

impl UniPoly {
    pub fn new(mut coeffs: Vec<Integer>) -> Self {
        while coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        UniPoly { coeffs }
    }

    pub fn zero() -> Self {
        UniPoly { coeffs: Vec::new() }
    }

    pub fn from_polynomial(p: &Polynomial) -> Result<UniPoly> {
        if p.nvars() > 1 {
            return Err(Error::NotUnivariate);
        }
        if p.is_zero() {
            return Ok(UniPoly::zero());
        }
        let mut coeffs = vec![Integer::zero(); p.degree() as usize + 1];
        for (m, c) in p.terms() {
            let e = if m.is_empty() { 0 } else { m.0[0] as usize };
            coeffs[e] = c.clone();
        }
        Ok(UniPoly::new(coeffs))
    }

    pub fn to_polynomial(&self) -> Polynomial {
        Polynomial::from_terms(
            1,
            self.coeffs.iter().enumerate().map(|(e, c)| (Monomial(vec![e as u32]), c.clone())),
        )
        .expect("arity is fixed")
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.coeffs.len() <= 1
    }

    /// Degree; 0 for constants. Callers handle the zero polynomial first.
    pub fn degree(&self) -> usize {
        self.coeffs.len().saturating_sub(1)
    }

    pub fn leading(&self) -> &Integer {
        self.coeffs.last().expect("nonzero polynomial")
    }

    pub fn coeffs(&self) -> &[Integer] {
        &self.coeffs
    }

    pub fn eval(&self, x: &Rational) -> Rational {
        let mut acc = Rational::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc * x + Rational::from_integer(c.clone());
        }
        acc
    }

    pub fn sign_at(&self, x: &Rational) -> Sign {
        Sign::of_rational(&self.eval(x))
    }

    pub fn derivative(&self) -> UniPoly {
        if self.coeffs.len() <= 1 {
            return UniPoly::zero();
        }
        UniPoly::new(
            self.coeffs.iter().enumerate().skip(1).map(|(i, c)| c * Integer::from(i)).collect(),
        )
    }

    pub fn neg(&self) -> UniPoly {
        UniPoly { coeffs: self.coeffs.iter().map(|c| -c).collect() }
    }

    /// Positive gcd of all coefficients; 0 for the zero polynomial.
    fn content(&self) -> Integer {
        let mut g = Integer::zero();
        for c in &self.coeffs {
            g = g.gcd(c);
            if g.is_one() {
                break;
            }
        }
        g
    }

    /// Divide out the content. The content is positive, so signs at every
    /// evaluation point are preserved.
    pub fn primitive(&self) -> UniPoly {
        let g = self.content();
        if g.is_zero() || g.is_one() {
            return self.clone();
        }
        UniPoly { coeffs: self.coeffs.iter().map(|c| c / &g).collect() }
    }

    /// Pseudo-remainder of `self` by `b`, scaled to be a strictly positive
    /// multiple of the true remainder so sign patterns survive.
    fn pseudo_rem_pos(&self, b: &UniPoly) -> UniPoly {
        assert!(!b.is_zero());
        if self.coeffs.len() < b.coeffs.len() {
            return self.clone();
        }
        let lb = b.leading().clone();
        let mut r = self.coeffs.clone();
        let mut steps = 0usize;
        while r.len() >= b.coeffs.len() {
            if r.last().is_some_and(Zero::is_zero) {
                r.pop();
                continue;
            }
            let shift = r.len() - b.coeffs.len();
            let top = r.last().unwrap().clone();
            for c in r.iter_mut() {
                *c *= &lb;
            }
            for (i, bc) in b.coeffs.iter().enumerate() {
                r[shift + i] -= &top * bc;
            }
            r.pop();
            steps += 1;
        }
        let rem = UniPoly::new(r);
        // r = lb^steps * (true remainder); an odd count of negative factors
        // flips every sign.
        if lb.is_negative() && steps % 2 == 1 {
            rem.neg()
        } else {
            rem
        }
    }

    /// Exact division; `None` if `b` does not divide `self` with an integer
    /// quotient.
    pub fn exact_div(&self, b: &UniPoly) -> Option<UniPoly> {
        assert!(!b.is_zero());
        if self.is_zero() {
            return Some(UniPoly::zero());
        }
        if self.degree() < b.degree() {
            return None;
        }
        let mut num: Vec<Rational> =
            self.coeffs.iter().map(|c| Rational::from_integer(c.clone())).collect();
        let bd = b.degree();
        let lb = Rational::from_integer(b.leading().clone());
        let mut q = vec![Rational::zero(); self.degree() - bd + 1];
        for k in (0..q.len()).rev() {
            let top = num[k + bd].clone();
            if top.is_zero() {
                continue;
            }
            let f = top / &lb;
            for (i, bc) in b.coeffs.iter().enumerate() {
                num[k + i] -= &f * Rational::from_integer(bc.clone());
            }
            q[k] = f;
        }
        if num.iter().any(|c| !c.is_zero()) {
            return None;
        }
        let mut out = Vec::with_capacity(q.len());
        for c in q {
            if !c.denom().is_one() {
                return None;
            }
            out.push(c.numer().clone());
        }
        Some(UniPoly::new(out))
    }

    /// Primitive gcd with positive leading coefficient (primitive PRS).
    pub fn gcd(&self, other: &UniPoly) -> UniPoly {
        let mut a = self.primitive();
        let mut b = other.primitive();
        if a.is_zero() {
            return normalize_lead(b);
        }
        if b.is_zero() {
            return normalize_lead(a);
        }
        if a.degree() < b.degree() {
            std::mem::swap(&mut a, &mut b);
        }
        loop {
            let r = a.pseudo_rem_pos(&b).primitive();
            if r.is_zero() {
                return normalize_lead(b);
            }
            a = b;
            b = r;
        }
    }

    /// Squarefree part: `self / gcd(self, self')`, primitive. Same root set,
    /// all roots simple.
    pub fn squarefree_part(&self) -> UniPoly {
        assert!(!self.is_zero());
        let p = self.primitive();
        if p.degree() <= 1 {
            return p;
        }
        let g = p.gcd(&p.derivative());
        if g.is_constant() {
            return p;
        }
        p.exact_div(&g).expect("gcd divides the polynomial").primitive()
    }

    /// Cauchy bound: every real root has absolute value strictly below it.
    pub fn root_bound(&self) -> Rational {
        assert!(!self.is_constant());
        let lead = self.leading().abs();
        let max = self
            .coeffs
            .iter()
            .take(self.coeffs.len() - 1)
            .map(Signed::abs)
            .max()
            .unwrap_or_else(Integer::zero);
        Rational::one() + Rational::new(max, lead)
    }
}

fn normalize_lead(p: UniPoly) -> UniPoly {
    if !p.is_zero() && p.leading().is_negative() {
        p.neg()
    } else {
        p
    }
}

impl fmt::Display for UniPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_polynomial())
    }
}

/// Sturm chain; counts distinct real roots in open intervals with nonroot
/// rational endpoints.
#[derive(Debug, Clone)]
pub struct SturmChain {
    chain: Vec<UniPoly>,
}

impl SturmChain {
    pub fn new(p: &UniPoly) -> SturmChain {
        assert!(!p.is_zero());
        let p = p.primitive();
        let d = p.derivative();
        let mut chain = vec![p];
        if d.is_zero() {
            return SturmChain { chain };
        }
        chain.push(d.primitive());
        loop {
            let n = chain.len();
            let r = chain[n - 2].pseudo_rem_pos(&chain[n - 1]);
            if r.is_zero() {
                break;
            }
            chain.push(r.neg().primitive());
        }
        SturmChain { chain }
    }

    fn variations_at(&self, x: &Rational) -> usize {
        let mut count = 0;
        let mut prev = Sign::Zero;
        for p in &self.chain {
            let s = p.sign_at(x);
            if s == Sign::Zero {
                continue;
            }
            if prev != Sign::Zero && s != prev {
                count += 1;
            }
            prev = s;
        }
        count
    }

    /// Distinct real roots in the open interval `(lo, hi)`. Both endpoints
    /// must be nonroots.
    pub fn count_roots_between(&self, lo: &Rational, hi: &Rational) -> usize {
        debug_assert!(lo < hi);
        debug_assert!(self.chain[0].sign_at(lo) != Sign::Zero);
        debug_assert!(self.chain[0].sign_at(hi) != Sign::Zero);
        self.variations_at(lo) - self.variations_at(hi)
    }
}

/// One real root, known exactly: either a rational or an isolating interval
/// of a squarefree polynomial with nonroot endpoints and exactly one root
/// strictly inside. Brackets refine on demand and may collapse to `Exact`
/// when a bisection midpoint hits the root.
#[derive(Debug, Clone)]
pub enum RealRoot {
    Exact(Rational),
    Bracket { poly: UniPoly, lo: Rational, hi: Rational },
}

impl RealRoot {
    /// A rational at or below the root (equal only in the exact case).
    pub fn lower(&self) -> Rational {
        match self {
            RealRoot::Exact(q) => q.clone(),
            RealRoot::Bracket { lo, .. } => lo.clone(),
        }
    }

    /// A rational at or above the root (equal only in the exact case).
    pub fn upper(&self) -> Rational {
        match self {
            RealRoot::Exact(q) => q.clone(),
            RealRoot::Bracket { hi, .. } => hi.clone(),
        }
    }

    pub fn is_exact(&self) -> bool {
        matches!(self, RealRoot::Exact(_))
    }

    /// Halve the bracket.
    pub fn refine(&mut self) {
        if let RealRoot::Bracket { poly, lo, hi } = self {
            let mid = (&*lo + &*hi) / Rational::from_integer(2.into());
            match poly.sign_at(&mid) {
                Sign::Zero => *self = RealRoot::Exact(mid),
                s => {
                    if s == poly.sign_at(lo) {
                        *lo = mid;
                    } else {
                        *hi = mid;
                    }
                }
            }
        }
    }

    /// Compare the root against a rational, refining as needed.
    pub fn cmp_rational(&mut self, q: &Rational) -> Ordering {
        loop {
            match self {
                RealRoot::Exact(r) => return (*r).cmp(q),
                RealRoot::Bracket { poly, lo, hi } => {
                    if q <= lo {
                        return Ordering::Greater;
                    }
                    if q >= hi {
                        return Ordering::Less;
                    }
                    if poly.sign_at(q) == Sign::Zero {
                        // q is a root lying inside the bracket, hence the
                        // bracket's unique root.
                        *self = RealRoot::Exact(q.clone());
                        return Ordering::Equal;
                    }
                }
            }
            self.refine();
        }
    }

    /// Exact comparison of two roots, refining both as needed.
    pub fn cmp_root(&mut self, other: &mut RealRoot) -> Ordering {
        if let RealRoot::Exact(q) = other {
            let q = q.clone();
            return self.cmp_rational(&q);
        }
        if let RealRoot::Exact(q) = self {
            let q = q.clone();
            return other.cmp_rational(&q).reverse();
        }
        // Both brackets. Equality can only happen through a shared factor:
        // a root of gcd inside both brackets is the unique root of each.
        let h = match (&*self, &*other) {
            (RealRoot::Bracket { poly: a, .. }, RealRoot::Bracket { poly: b, .. }) => a.gcd(b),
            _ => unreachable!(),
        };
        if !h.is_constant() {
            let hc = SturmChain::new(&h);
            let a_has = self.contains_root_of(&h, &hc);
            let b_has = other.contains_root_of(&h, &hc);
            if a_has && b_has {
                loop {
                    match (&mut *self, &mut *other) {
                        (RealRoot::Bracket { .. }, RealRoot::Bracket { .. }) => {}
                        _ => break,
                    }
                    let ilo = self.lower().max(other.lower());
                    let ihi = self.upper().min(other.upper());
                    if ilo >= ihi {
                        break;
                    }
                    // Endpoints of the intersection are bracket endpoints,
                    // kept h-nonroot by contains_root_of.
                    if h.sign_at(&ilo) != Sign::Zero
                        && h.sign_at(&ihi) != Sign::Zero
                        && hc.count_roots_between(&ilo, &ihi) > 0
                    {
                        return Ordering::Equal;
                    }
                    self.refine();
                    other.refine();
                    self.step_off_roots_of(&h);
                    other.step_off_roots_of(&h);
                }
                if let RealRoot::Exact(q) = self {
                    let q = q.clone();
                    return other.cmp_rational(&q).reverse();
                }
                if let RealRoot::Exact(q) = other {
                    let q = q.clone();
                    return self.cmp_rational(&q);
                }
            }
        }
        // Roots are distinct; refinement separates the brackets.
        loop {
            if self.upper() <= other.lower() {
                return Ordering::Less;
            }
            if other.upper() <= self.lower() {
                return Ordering::Greater;
            }
            self.refine();
            other.refine();
            if let RealRoot::Exact(q) = self {
                let q = q.clone();
                return other.cmp_rational(&q).reverse();
            }
            if let RealRoot::Exact(q) = other {
                let q = q.clone();
                return self.cmp_rational(&q);
            }
        }
    }

    /// True when this root is a root of `h` (which must divide a polynomial
    /// vanishing here, e.g. the bracket polynomial). Refines endpoints until
    /// they are nonroots of `h`.
    fn contains_root_of(&mut self, h: &UniPoly, hc: &SturmChain) -> bool {
        loop {
            match self {
                RealRoot::Exact(q) => return h.sign_at(q) == Sign::Zero,
                RealRoot::Bracket { lo, hi, .. } => {
                    if h.sign_at(lo) != Sign::Zero && h.sign_at(hi) != Sign::Zero {
                        return hc.count_roots_between(lo, hi) > 0;
                    }
                }
            }
            self.refine();
        }
    }

    fn step_off_roots_of(&mut self, h: &UniPoly) {
        loop {
            match self {
                RealRoot::Exact(_) => return,
                RealRoot::Bracket { lo, hi, .. } => {
                    if h.sign_at(lo) != Sign::Zero && h.sign_at(hi) != Sign::Zero {
                        return;
                    }
                }
            }
            self.refine();
        }
    }

    /// Exact sign of `f` at this root. `f_sf` and `f_chain` are the
    /// squarefree part of `f` and its Sturm chain, cached by callers.
    pub fn sign_of(&mut self, f: &UniPoly, f_sf: &UniPoly, f_chain: &SturmChain) -> Sign {
        if let RealRoot::Bracket { poly, .. } = self {
            let h = poly.gcd(f_sf);
            if !h.is_constant() {
                let hc = SturmChain::new(&h);
                if self.contains_root_of(&h, &hc) {
                    return Sign::Zero;
                }
            }
        }
        // Not a root of f: shrink the bracket until f is root-free and
        // sign-constant on the closed enclosure.
        loop {
            match self {
                RealRoot::Exact(q) => return f.sign_at(q),
                RealRoot::Bracket { lo, hi, .. } => {
                    let slo = f.sign_at(lo);
                    if slo != Sign::Zero
                        && f.sign_at(hi) != Sign::Zero
                        && f_chain.count_roots_between(lo, hi) == 0
                    {
                        return slo;
                    }
                }
            }
            self.refine();
        }
    }
}

/// Isolate all distinct real roots of a nonzero univariate polynomial,
/// sorted ascending.
pub fn isolate_real_roots(p: &Polynomial) -> Result<Vec<RealRoot>> {
    let up = UniPoly::from_polynomial(p)?;
    if up.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    Ok(isolate_unipoly(&up))
}

pub fn isolate_unipoly(p: &UniPoly) -> Vec<RealRoot> {
    assert!(!p.is_zero());
    let mut g = p.squarefree_part();
    let mut exact: Vec<Rational> = Vec::new();

    // Factor out a root at zero up front.
    if !g.is_constant() && g.coeffs()[0].is_zero() {
        exact.push(Rational::zero());
        let x = UniPoly::new(vec![Integer::zero(), Integer::one()]);
        g = g.exact_div(&x).expect("x divides");
    }

    // A bisection midpoint can hit a rational root exactly; deflate it out
    // and restart so every final bracket has nonroot endpoints.
    let mut brackets: Vec<(Rational, Rational)> = Vec::new();
    'restart: loop {
        brackets.clear();
        if g.is_constant() {
            break;
        }
        if g.degree() == 1 {
            let c0 = g.coeffs()[0].clone();
            let c1 = g.coeffs()[1].clone();
            exact.push(Rational::new(-c0, c1));
            break;
        }
        let chain = SturmChain::new(&g);
        let bound = g.root_bound();
        let mut stack = vec![(-bound.clone(), bound)];
        while let Some((lo, hi)) = stack.pop() {
            match chain.count_roots_between(&lo, &hi) {
                0 => {}
                1 => brackets.push((lo, hi)),
                _ => {
                    let mid = (&lo + &hi) / Rational::from_integer(2.into());
                    if g.sign_at(&mid) == Sign::Zero {
                        exact.push(mid.clone());
                        let lin = UniPoly::new(vec![-mid.numer().clone(), mid.denom().clone()]);
                        g = g.exact_div(&lin).expect("root divides").primitive();
                        continue 'restart;
                    }
                    stack.push((lo, mid.clone()));
                    stack.push((mid, hi));
                }
            }
        }
        break;
    }

    let mut roots: Vec<RealRoot> = exact.into_iter().map(RealRoot::Exact).collect();
    for (lo, hi) in brackets {
        roots.push(RealRoot::Bracket { poly: g.clone(), lo, hi });
    }
    sort_roots(&mut roots);
    roots
}

/// Sort roots ascending by exact comparison.
fn sort_roots(roots: &mut [RealRoot]) {
    // Selection sort with split borrows; root counts stay small.
    for i in 0..roots.len() {
        let mut min = i;
        for j in i + 1..roots.len() {
            let (a, b) = roots.split_at_mut(j);
            if b[0].cmp_root(&mut a[min]) == Ordering::Less {
                min = j;
            }
        }
        roots.swap(i, min);
    }
}

/// Merge roots of several polynomials into one ascending, deduplicated list.
pub fn merge_roots(mut all: Vec<RealRoot>) -> Vec<RealRoot> {
    sort_roots(&mut all);
    let mut out: Vec<RealRoot> = Vec::new();
    for mut r in all {
        if let Some(last) = out.last_mut() {
            if last.cmp_root(&mut r) == Ordering::Equal {
                continue;
            }
        }
        out.push(r);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::parse_polynomial;

    fn up(s: &str) -> UniPoly {
        UniPoly::from_polynomial(&parse_polynomial(s, 1, 0).unwrap()).unwrap()
    }

    fn q(n: i64, d: i64) -> Rational {
        Rational::new(Integer::from(n), Integer::from(d))
    }

    #[test]
    fn sqrt2_isolation() {
        let roots = isolate_unipoly(&up("x1^2 - 2"));
        assert_eq!(roots.len(), 2);
        let mut r0 = roots[0].clone();
        let mut r1 = roots[1].clone();
        assert_eq!(r0.cmp_rational(&q(0, 1)), Ordering::Less);
        assert_eq!(r1.cmp_rational(&q(0, 1)), Ordering::Greater);
        assert_eq!(r1.cmp_rational(&q(3, 2)), Ordering::Less);
        assert_eq!(r1.cmp_rational(&q(7, 5)), Ordering::Greater);
    }

    #[test]
    fn no_real_roots() {
        assert!(isolate_unipoly(&up("x1^2 + 1")).is_empty());
    }

    #[test]
    fn root_at_zero_is_exact() {
        let roots = isolate_unipoly(&up("x1"));
        assert_eq!(roots.len(), 1);
        assert!(matches!(&roots[0], RealRoot::Exact(r) if r.is_zero()));
    }

    #[test]
    fn linear_roots_exact() {
        let roots = isolate_unipoly(&up("2*x1 - 3"));
        assert!(matches!(&roots[0], RealRoot::Exact(r) if *r == q(3, 2)));
    }

    #[test]
    fn repeated_roots_counted_once() {
        // (x-1)^2 (x+2)
        let p = up("x1^3 - 3*x1 + 2");
        assert_eq!(isolate_unipoly(&p).len(), 2);
    }

    #[test]
    fn sign_at_algebraic_root() {
        // alpha = sqrt(2)
        let g = up("x1^2 - 2");
        let mut alpha = isolate_unipoly(&g).pop().unwrap();
        let cases = [
            ("x1^2 - 3", Sign::Negative),
            ("x1 - 1", Sign::Positive),
            ("x1^2 - 2", Sign::Zero),
            ("2*x1^2 - 4", Sign::Zero),
        ];
        for (s, expect) in cases {
            let f = up(s);
            let sf = f.squarefree_part();
            let chain = SturmChain::new(&sf);
            assert_eq!(alpha.sign_of(&f, &sf, &chain), expect, "sign of {s}");
        }
    }

    #[test]
    fn sign_uses_original_not_squarefree() {
        // f = -(x - 2)^2 is nonpositive everywhere but its squarefree part
        // x - 2 changes sign; the sign at sqrt(2) must come from f itself.
        let g = up("x1^2 - 2");
        let mut alpha = isolate_unipoly(&g).pop().unwrap();
        let f = up("0 - x1^2 + 4*x1 - 4");
        let sf = f.squarefree_part();
        let chain = SturmChain::new(&sf);
        assert_eq!(alpha.sign_of(&f, &sf, &chain), Sign::Negative);
    }

    #[test]
    fn root_comparison_across_polynomials() {
        let mut a = isolate_unipoly(&up("x1^2 - 2")).pop().unwrap();
        let mut b = isolate_unipoly(&up("x1^4 - 4")).pop().unwrap();
        let mut c = isolate_unipoly(&up("x1^2 - 3")).pop().unwrap();
        assert_eq!(a.cmp_root(&mut b), Ordering::Equal);
        assert_eq!(a.cmp_root(&mut c), Ordering::Less);
        assert_eq!(c.cmp_root(&mut b), Ordering::Greater);
    }

    #[test]
    fn merge_dedups_shared_roots() {
        let mut all = Vec::new();
        all.extend(isolate_unipoly(&up("x1^2 - 2")));
        all.extend(isolate_unipoly(&up("x1^3 - 2*x1"))); // roots 0, ±sqrt2
        let merged = merge_roots(all);
        assert_eq!(merged.len(), 3);
    }

    #[test]
    fn dense_root_count() {
        // (x-1)(x-2)(x-3)(x-4)(x-5)
        let p = up("x1^5 - 15*x1^4 + 85*x1^3 - 225*x1^2 + 274*x1 - 120");
        assert_eq!(isolate_unipoly(&p).len(), 5);
    }

    #[test]
    fn gcd_and_squarefree() {
        let a = up("x1^2 - 1");
        let b = up("x1^2 - 2*x1 + 1");
        assert_eq!(a.gcd(&b), up("x1 - 1"));
        let p = up("x1^4 - 2*x1^3 + 2*x1 - 1"); // (x-1)^3 (x+1)
        assert_eq!(p.squarefree_part(), up("x1^2 - 1"));
    }
}
