//! Satisfiable sign conditions of polynomial systems: the sign condition of
//! a point, complete enumeration for univariate systems (via Sturm root
//! isolation), truncated conditions, and the two-valued projection used by
//! the full-condition binary search.
//!
//! The canonical rank order on conditions is lexicographic with
//! -1 < 0 < +1, first coordinate most significant. Ranks are 1-based.

use std::collections::BTreeSet;
use std::fmt;

use crate::error::{Error, Result};
use crate::exact::{Rational, Sign};
use crate::gf2::Gf2Vector;
use crate::poly::Polynomial;
use crate::roots::{isolate_unipoly, merge_roots, RealRoot, SturmChain, UniPoly};

/// An s-tuple over {-1, 0, +1}.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct SignCondition(Vec<Sign>);

impl SignCondition {
    pub fn new(signs: Vec<Sign>) -> Self {
        SignCondition(signs)
    }

    pub fn signs(&self) -> &[Sign] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Forget signs, keeping only zero vs nonzero.
    pub fn truncate(&self) -> TruncatedSignCondition {
        TruncatedSignCondition(self.0.iter().map(|s| !s.is_zero()).collect())
    }
}

impl fmt::Display for SignCondition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, s) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{s}")?;
        }
        Ok(())
    }
}

/// An s-tuple over {0, 1}: entry 0 means "the polynomial vanishes here".
/// Ordered lexicographically, which is compatible with subset inclusion.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct TruncatedSignCondition(Vec<bool>);

impl TruncatedSignCondition {
    pub fn new(bits: Vec<bool>) -> Self {
        TruncatedSignCondition(bits)
    }

    pub fn bits(&self) -> &[bool] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Subset view: true entries are the members.
    pub fn is_subset_of(&self, other: &TruncatedSignCondition) -> bool {
        self.0.iter().zip(&other.0).all(|(a, b)| !a || *b)
    }
}

impl fmt::Display for TruncatedSignCondition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, b) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{}", if *b { 1 } else { 0 })?;
        }
        Ok(())
    }
}

/// A point realizing a sign condition: a rational, or an algebraic real
/// (some conditions are realized only at irrational roots).
#[derive(Debug, Clone)]
pub enum Witness {
    Point(Rational),
    Root(RealRoot),
}

impl fmt::Display for Witness {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Witness::Point(q) => write!(f, "{q}"),
            Witness::Root(RealRoot::Exact(q)) => write!(f, "{q}"),
            Witness::Root(RealRoot::Bracket { poly, lo, hi }) => {
                write!(f, "root of {} in ({lo}, {hi})", poly.to_polynomial())
            }
        }
    }
}

/// All satisfiable sign conditions of a system, canonically ordered, with
/// one witness each. `complete` records whether the list provably covers
/// every real point.
#[derive(Debug, Clone)]
pub struct SignConditionTable {
    system: Vec<Polynomial>,
    conditions: Vec<SignCondition>,
    witnesses: Vec<Witness>,
    complete: bool,
}

impl SignConditionTable {
    pub fn system(&self) -> &[Polynomial] {
        &self.system
    }

    pub fn conditions(&self) -> &[SignCondition] {
        &self.conditions
    }

    pub fn witnesses(&self) -> &[Witness] {
        &self.witnesses
    }

    pub fn is_complete(&self) -> bool {
        self.complete
    }

    pub fn len(&self) -> usize {
        self.conditions.len()
    }

    pub fn is_empty(&self) -> bool {
        self.conditions.is_empty()
    }

    /// 1-based rank of a condition in the canonical order.
    pub fn rank_of(&self, cond: &SignCondition) -> Option<usize> {
        self.conditions.binary_search(cond).ok().map(|i| i + 1)
    }

    /// Recompute the sign condition at a stored witness; rows must satisfy
    /// `witness_condition(i) == conditions[i]` exactly.
    pub fn witness_condition(&self, row: usize) -> Result<SignCondition> {
        match &self.witnesses[row] {
            Witness::Point(x) => sign_condition_of_point(&self.system, &[x.clone()]),
            Witness::Root(root) => {
                let mut signs = Vec::with_capacity(self.system.len());
                for f in &self.system {
                    let uf = UniPoly::from_polynomial(f)?;
                    if uf.is_zero() {
                        signs.push(Sign::Zero);
                        continue;
                    }
                    if uf.is_constant() {
                        signs.push(crate::exact::Sign::of_integer(&uf.coeffs()[0]));
                        continue;
                    }
                    let sf = uf.squarefree_part();
                    let chain = SturmChain::new(&sf);
                    signs.push(root.clone().sign_of(&uf, &sf, &chain));
                }
                Ok(SignCondition(signs))
            }
        }
    }

    /// The distinct truncations of all conditions, in ascending
    /// lexicographic order (index i is the rank-i truncated condition,
    /// 1-based).
    pub fn truncated_table(&self) -> Vec<TruncatedSignCondition> {
        let set: BTreeSet<TruncatedSignCondition> =
            self.conditions.iter().map(|c| c.truncate()).collect();
        set.into_iter().collect()
    }
}

/// Componentwise exact sign of a system at a rational point.
pub fn sign_condition_of_point(system: &[Polynomial], x: &[Rational]) -> Result<SignCondition> {
    let signs = system.iter().map(|f| f.sign_at(x)).collect::<Result<Vec<_>>>()?;
    Ok(SignCondition(signs))
}

/// Complete enumeration of the satisfiable sign conditions of a univariate
/// system: all roots of all members plus one rational sample inside every
/// open cell between and beyond them, deduplicated and canonically sorted.
/// The count is at most 2r + 1 for r distinct real roots.
pub fn enumerate_sign_conditions(system: &[Polynomial]) -> Result<SignConditionTable> {
    if system.is_empty() {
        return Err(Error::EmptySystem);
    }
    for f in system {
        if f.nvars() != 1 {
            return Err(Error::NotUnivariate);
        }
    }
    let unis: Vec<UniPoly> =
        system.iter().map(UniPoly::from_polynomial).collect::<Result<_>>()?;
    // Squarefree parts and chains for evaluating signs at algebraic roots.
    let eval_data: Vec<Option<(UniPoly, SturmChain)>> = unis
        .iter()
        .map(|u| {
            if u.is_constant() {
                None
            } else {
                let sf = u.squarefree_part();
                let chain = SturmChain::new(&sf);
                Some((sf, chain))
            }
        })
        .collect();

    let mut all_roots = Vec::new();
    let mut bound = Rational::from_integer(0.into());
    for u in &unis {
        if u.is_constant() {
            continue;
        }
        bound = bound.max(u.root_bound());
        all_roots.extend(isolate_unipoly(u));
    }
    let mut roots = merge_roots(all_roots);

    let sign_at_rational = |x: &Rational| -> SignCondition {
        SignCondition(unis.iter().map(|u| u.sign_at(x)).collect())
    };
    let sign_at_root = |root: &RealRoot| -> SignCondition {
        let signs = unis
            .iter()
            .zip(&eval_data)
            .map(|(u, data)| match data {
                None => {
                    if u.is_zero() {
                        Sign::Zero
                    } else {
                        crate::exact::Sign::of_integer(&u.coeffs()[0])
                    }
                }
                Some((sf, chain)) => root.clone().sign_of(u, sf, chain),
            })
            .collect();
        SignCondition(signs)
    };

    let mut rows: Vec<(SignCondition, Witness)> = Vec::new();
    if roots.is_empty() {
        // One cell covers the whole line.
        let x = Rational::from_integer(0.into());
        rows.push((sign_at_rational(&x), Witness::Point(x)));
    } else {
        let one = Rational::from_integer(1.into());
        let low = -(bound.clone() + &one);
        let high = bound + &one;
        rows.push((sign_at_rational(&low), Witness::Point(low)));
        for i in 0..roots.len() {
            rows.push((sign_at_root(&roots[i]), Witness::Root(roots[i].clone())));
            let between = if i + 1 < roots.len() {
                // Refine until the enclosures separate strictly; any point
                // between them lies strictly between the roots.
                loop {
                    let (a, b) = roots.split_at_mut(i + 1);
                    let left = &mut a[i];
                    let right = &mut b[0];
                    if left.upper() < right.lower() {
                        break (left.upper() + right.lower())
                            / Rational::from_integer(2.into());
                    }
                    left.refine();
                    right.refine();
                }
            } else {
                high.clone()
            };
            rows.push((sign_at_rational(&between), Witness::Point(between)));
        }
    }

    rows.sort_by(|a, b| a.0.cmp(&b.0));
    rows.dedup_by(|a, b| a.0 == b.0);
    let (conditions, witnesses): (Vec<_>, Vec<_>) = rows.into_iter().unzip();
    Ok(SignConditionTable { system: system.to_vec(), conditions, witnesses, complete: true })
}

/// Sign conditions of the given points only. The table is incomplete unless
/// the caller attests that the points cover every satisfiable condition.
pub fn witness_set_table(
    system: &[Polynomial],
    points: &[Vec<Rational>],
    attest_complete: bool,
) -> Result<SignConditionTable> {
    if system.is_empty() {
        return Err(Error::EmptySystem);
    }
    let mut rows: Vec<(SignCondition, Witness)> = Vec::new();
    for x in points {
        let cond = sign_condition_of_point(system, x)?;
        if x.len() != 1 {
            // Multivariate witnesses keep only their condition; the witness
            // slot stores the first coordinate for display purposes only.
            return Err(Error::NotUnivariate);
        }
        rows.push((cond, Witness::Point(x[0].clone())));
    }
    rows.sort_by(|a, b| a.0.cmp(&b.0));
    rows.dedup_by(|a, b| a.0 == b.0);
    let (conditions, witnesses): (Vec<_>, Vec<_>) = rows.into_iter().unzip();
    Ok(SignConditionTable {
        system: system.to_vec(),
        conditions,
        witnesses,
        complete: attest_complete,
    })
}

/// The compatible full conditions of one truncated condition, projected to
/// its nonzero positions and encoded over GF(2): 0 for "> 0", 1 for "< 0".
#[derive(Debug, Clone)]
pub struct TwoValuedView {
    base: TruncatedSignCondition,
    /// view position -> system index (positions with T = 1)
    index_map: Vec<usize>,
    vectors: Vec<Gf2Vector>,
    /// view row -> table row (0-based), preserving table order
    cond_indices: Vec<usize>,
}

impl TwoValuedView {
    pub fn base(&self) -> &TruncatedSignCondition {
        &self.base
    }

    pub fn index_map(&self) -> &[usize] {
        &self.index_map
    }

    pub fn vectors(&self) -> &[Gf2Vector] {
        &self.vectors
    }

    pub fn cond_indices(&self) -> &[usize] {
        &self.cond_indices
    }

    pub fn len(&self) -> usize {
        self.vectors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vectors.is_empty()
    }
}

/// Project the table rows compatible with `t` (same zero set) onto the
/// nonzero positions. Errors when no row is compatible.
pub fn compatible_view(
    table: &SignConditionTable,
    t: &TruncatedSignCondition,
) -> Result<TwoValuedView> {
    let index_map: Vec<usize> =
        t.bits().iter().enumerate().filter(|(_, b)| **b).map(|(k, _)| k).collect();
    let mut vectors = Vec::new();
    let mut cond_indices = Vec::new();
    for (row, cond) in table.conditions().iter().enumerate() {
        if &cond.truncate() != t {
            continue;
        }
        let bits: Vec<bool> =
            index_map.iter().map(|&k| cond.signs()[k] == Sign::Negative).collect();
        vectors.push(Gf2Vector::from_bits(&bits));
        cond_indices.push(row);
    }
    if vectors.is_empty() {
        return Err(Error::UnrealizedTruncation);
    }
    Ok(TwoValuedView { base: t.clone(), index_map, vectors, cond_indices })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::Integer;
    use crate::poly::parse_polynomial;

    fn p(s: &str) -> Polynomial {
        parse_polynomial(s, 1, 0).unwrap()
    }

    fn q(n: i64, d: i64) -> Rational {
        Rational::new(Integer::from(n), Integer::from(d))
    }

    fn cond(signs: &[i8]) -> SignCondition {
        SignCondition(
            signs
                .iter()
                .map(|&s| match s {
                    -1 => Sign::Negative,
                    0 => Sign::Zero,
                    1 => Sign::Positive,
                    _ => unreachable!(),
                })
                .collect(),
        )
    }

    #[test]
    fn condition_of_point() {
        let sys = vec![p("x1"), p("x1 - 1")];
        assert_eq!(sign_condition_of_point(&sys, &[q(2, 1)]).unwrap(), cond(&[1, 1]));
        let sys = vec![p("x1")];
        assert_eq!(sign_condition_of_point(&sys, &[q(0, 1)]).unwrap(), cond(&[0]));
        let sys = vec![p("x1"), p("x1^2 + 1")];
        assert_eq!(sign_condition_of_point(&sys, &[q(-3, 1)]).unwrap(), cond(&[-1, 1]));
    }

    #[test]
    fn enumerate_single_variable() {
        let table = enumerate_sign_conditions(&[p("x1")]).unwrap();
        assert_eq!(table.conditions(), &[cond(&[-1]), cond(&[0]), cond(&[1])]);
        assert!(table.is_complete());
    }

    #[test]
    fn enumerate_two_linear() {
        let table = enumerate_sign_conditions(&[p("x1"), p("x1 - 1")]).unwrap();
        assert_eq!(
            table.conditions(),
            &[cond(&[-1, -1]), cond(&[0, -1]), cond(&[1, -1]), cond(&[1, 0]), cond(&[1, 1])]
        );
    }

    #[test]
    fn positive_definite_member() {
        let table = enumerate_sign_conditions(&[p("x1"), p("x1^2 + 1")]).unwrap();
        assert_eq!(table.len(), 3);
        assert!(table.conditions().iter().all(|c| c.signs()[1] == Sign::Positive));
    }

    #[test]
    fn irrational_roots_get_algebraic_witnesses() {
        let table = enumerate_sign_conditions(&[p("x1^2 - 2")]).unwrap();
        assert_eq!(table.conditions(), &[cond(&[-1]), cond(&[0]), cond(&[1])]);
        // the zero condition is realized only at +-sqrt(2)
        let row = table.conditions().iter().position(|c| c == &cond(&[0])).unwrap();
        assert!(matches!(table.witnesses()[row], Witness::Root(_)));
        for row in 0..table.len() {
            assert_eq!(table.witness_condition(row).unwrap(), table.conditions()[row]);
        }
    }

    #[test]
    fn witnesses_realize_their_rows() {
        let sys = vec![p("x1^3 - 2*x1"), p("x1 - 1"), p("3")];
        let table = enumerate_sign_conditions(&sys).unwrap();
        for row in 0..table.len() {
            assert_eq!(table.witness_condition(row).unwrap(), table.conditions()[row]);
        }
        // count <= 2r + 1 with r = 3 distinct real roots of the product
        assert!(table.len() <= 2 * 4 + 1);
    }

    #[test]
    fn zero_and_constant_members() {
        let table = enumerate_sign_conditions(&[p("0"), p("0 - 2"), p("x1")]).unwrap();
        assert_eq!(
            table.conditions(),
            &[cond(&[0, -1, -1]), cond(&[0, -1, 0]), cond(&[0, -1, 1])]
        );
    }

    #[test]
    fn rank_lookup_inverse() {
        let table = enumerate_sign_conditions(&[p("x1"), p("x1 - 1")]).unwrap();
        for (i, c) in table.conditions().iter().enumerate() {
            assert_eq!(table.rank_of(c), Some(i + 1));
        }
        assert_eq!(table.rank_of(&cond(&[-1, 1])), None);
    }

    #[test]
    fn truncated_table_ordering() {
        let table = enumerate_sign_conditions(&[p("x1"), p("x1 - 1")]).unwrap();
        let truncs = table.truncated_table();
        let bits: Vec<Vec<bool>> = truncs.iter().map(|t| t.bits().to_vec()).collect();
        assert_eq!(
            bits,
            vec![vec![false, true], vec![true, false], vec![true, true]]
        );
        // lexicographic order is compatible with inclusion
        for a in &truncs {
            for b in &truncs {
                if a.is_subset_of(b) && a != b {
                    assert!(a < b);
                }
            }
        }
    }

    #[test]
    fn compatible_view_projections() {
        let table = enumerate_sign_conditions(&[p("x1"), p("x1 - 1")]).unwrap();
        let t = TruncatedSignCondition::new(vec![true, true]);
        let view = compatible_view(&table, &t).unwrap();
        assert_eq!(view.len(), 3);
        let as_strings: Vec<String> = view.vectors().iter().map(|v| v.to_string()).collect();
        assert_eq!(as_strings, vec!["11", "01", "00"]);

        let t = TruncatedSignCondition::new(vec![false, true]);
        let view = compatible_view(&table, &t).unwrap();
        assert_eq!(view.len(), 1);
        assert_eq!(view.vectors()[0].to_string(), "1");
        assert_eq!(view.index_map(), &[1]);

        let t = TruncatedSignCondition::new(vec![false, false]);
        assert!(matches!(compatible_view(&table, &t), Err(Error::UnrealizedTruncation)));
    }

    #[test]
    fn errors() {
        assert!(matches!(enumerate_sign_conditions(&[]), Err(Error::EmptySystem)));
        let two_var = parse_polynomial("x1 + x2", 2, 0).unwrap();
        assert!(matches!(enumerate_sign_conditions(&[two_var]), Err(Error::NotUnivariate)));
    }
}
