//! Macaulay matrices for systems of n+1 homogeneous degree-delta
//! polynomials in n+1 variables, the "not reduced" submatrix, and exact
//! determinants by fraction-free elimination. The determinant of the full
//! matrix is a multiple of the system's resultant, so its vanishing decides
//! whether the system has a nontrivial common zero whenever the submatrix
//! determinant is nonzero.

use std::fmt;

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::exact::{Integer, Sign};
use crate::poly::{monomials_of_degree, Monomial, Polynomial};

/// n+1 homogeneous polynomials of common degree delta in variables
/// X_0..X_n (text form x1..x(n+1)).
#[derive(Debug, Clone)]
pub struct HomogeneousSystem {
    n: usize,
    delta: u32,
    polys: Vec<Polynomial>,
}

impl HomogeneousSystem {
    pub fn new(n: usize, delta: u32, polys: Vec<Polynomial>) -> Result<Self> {
        if delta == 0 {
            return Err(Error::InvalidCircuit("delta must be at least 1".into()));
        }
        if polys.len() != n + 1 {
            return Err(Error::ArityMismatch { expected: n + 1, got: polys.len() });
        }
        for p in &polys {
            if p.nvars() != n + 1 {
                return Err(Error::NvarsMismatch { left: n + 1, right: p.nvars() });
            }
            if !p.is_homogeneous_of_degree(delta) {
                return Err(Error::InvalidCircuit(format!(
                    "system polynomial {p} is not homogeneous of degree {delta}"
                )));
            }
        }
        Ok(HomogeneousSystem { n, delta, polys })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn delta(&self) -> u32 {
        self.delta
    }

    pub fn polys(&self) -> &[Polynomial] {
        &self.polys
    }

    /// The Macaulay degree d = 1 + (n+1)(delta - 1).
    pub fn macaulay_degree(&self) -> u32 {
        1 + (self.n as u32 + 1) * (self.delta - 1)
    }
}

/// Square integer matrix in row-major order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IntegerMatrix {
    size: usize,
    entries: Vec<Integer>,
}

impl IntegerMatrix {
    pub fn new(size: usize, entries: Vec<Integer>) -> Self {
        assert_eq!(entries.len(), size * size);
        IntegerMatrix { size, entries }
    }

    pub fn from_rows(rows: Vec<Vec<Integer>>) -> Self {
        let size = rows.len();
        let entries: Vec<Integer> = rows
            .into_iter()
            .flat_map(|r| {
                assert_eq!(r.len(), size);
                r
            })
            .collect();
        IntegerMatrix { size, entries }
    }

    pub fn empty() -> Self {
        IntegerMatrix { size: 0, entries: Vec::new() }
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub fn at(&self, i: usize, j: usize) -> &Integer {
        &self.entries[i * self.size + j]
    }

    fn at_mut(&mut self, i: usize, j: usize) -> &mut Integer {
        &mut self.entries[i * self.size + j]
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.size {
            self.entries.swap(a * self.size + j, b * self.size + j);
        }
    }
}

/// Exact determinant by Bareiss fraction-free elimination. The empty matrix
/// has determinant 1.
pub fn det_exact(m: &IntegerMatrix) -> Integer {
    let n = m.size;
    if n == 0 {
        return Integer::one();
    }
    let mut a = m.clone();
    let mut sign_flips = 0usize;
    let mut prev = Integer::one();
    for k in 0..n - 1 {
        if a.at(k, k).is_zero() {
            let pivot = (k + 1..n).find(|&i| !a.at(i, k).is_zero());
            match pivot {
                Some(i) => {
                    a.swap_rows(k, i);
                    sign_flips += 1;
                }
                None => return Integer::zero(),
            }
        }
        let pivot = a.at(k, k).clone();
        for i in k + 1..n {
            for j in k + 1..n {
                let num = &pivot * a.at(i, j) - a.at(i, k) * a.at(k, j);
                // Bareiss guarantees exact divisibility by the previous pivot.
                *a.at_mut(i, j) = num / &prev;
            }
            *a.at_mut(i, k) = Integer::zero();
        }
        prev = pivot;
    }
    let det = a.at(n - 1, n - 1).clone();
    if sign_flips % 2 == 1 {
        -det
    } else {
        det
    }
}

/// The Macaulay matrix: rows and columns indexed by the monomials of degree
/// d in X_0..X_n; the row of x^alpha holds the coefficients of
/// (x^alpha / x_i^delta) * f_(i+1) where i is minimal with x_i^delta
/// dividing x^alpha.
#[derive(Debug, Clone)]
pub struct MacaulayMatrix {
    n: usize,
    delta: u32,
    d: u32,
    monomials: Vec<Monomial>,
    matrix: IntegerMatrix,
    /// Chosen polynomial index i per row (the row monomial is
    /// `monomials[row]`).
    row_choice: Vec<usize>,
}

impl MacaulayMatrix {
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn delta(&self) -> u32 {
        self.delta
    }

    pub fn degree(&self) -> u32 {
        self.d
    }

    pub fn size(&self) -> usize {
        self.matrix.size()
    }

    pub fn monomials(&self) -> &[Monomial] {
        &self.monomials
    }

    pub fn matrix(&self) -> &IntegerMatrix {
        &self.matrix
    }

    pub fn row_choice(&self) -> &[usize] {
        &self.row_choice
    }

    /// A degree-d monomial is reduced when x_j^delta divides it for exactly
    /// one j.
    pub fn is_reduced(&self, m: &Monomial) -> bool {
        m.0.iter().filter(|&&e| e >= self.delta).count() == 1
    }

    /// Submatrix of the rows and columns whose monomials are not reduced.
    pub fn reduced_submatrix(&self) -> IntegerMatrix {
        let keep: Vec<usize> = (0..self.monomials.len())
            .filter(|&i| !self.is_reduced(&self.monomials[i]))
            .collect();
        let rows = keep
            .iter()
            .map(|&i| keep.iter().map(|&j| self.matrix.at(i, j).clone()).collect())
            .collect();
        if keep.is_empty() {
            IntegerMatrix::empty()
        } else {
            IntegerMatrix::from_rows(rows)
        }
    }
}

/// Build the Macaulay matrix of a homogeneous system.
pub fn build_macaulay(sys: &HomogeneousSystem) -> MacaulayMatrix {
    let n = sys.n();
    let delta = sys.delta();
    let d = sys.macaulay_degree();
    let monomials = monomials_of_degree(n + 1, d);
    let size = monomials.len();
    let mut col_index = std::collections::HashMap::new();
    for (j, m) in monomials.iter().enumerate() {
        col_index.insert(m.clone(), j);
    }
    let mut rows = Vec::with_capacity(size);
    let mut row_choice = Vec::with_capacity(size);
    for alpha in &monomials {
        // Degree d guarantees some x_j^delta divides alpha.
        let i = (0..=n)
            .find(|&j| alpha.0[j] >= delta)
            .expect("degree d forces a divisor");
        row_choice.push(i);
        let mut shift = alpha.0.clone();
        shift[i] -= delta;
        let shifted = Monomial(shift);
        let mut row = vec![Integer::zero(); size];
        for (m, c) in sys.polys()[i].terms() {
            let col = col_index[&m.mul(&shifted)];
            row[col] = c.clone();
        }
        rows.push(row);
    }
    MacaulayMatrix {
        n,
        delta,
        d,
        monomials,
        matrix: IntegerMatrix::from_rows(rows),
        row_choice,
    }
}

/// Vanishing verdict for the resultant quotient R = det M / det M'.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ResultantVerdict {
    Zero,
    Nonzero,
    Indeterminate,
}

impl fmt::Display for ResultantVerdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ResultantVerdict::Zero => write!(f, "zero"),
            ResultantVerdict::Nonzero => write!(f, "nonzero"),
            ResultantVerdict::Indeterminate => write!(f, "indeterminate"),
        }
    }
}

/// Both determinants and the vanishing verdict: zero iff det M = 0 and
/// det M' != 0; nonzero iff det M != 0; indeterminate when both vanish.
pub fn resultant_vanishing(
    sys: &HomogeneousSystem,
) -> (Integer, Integer, ResultantVerdict) {
    let mac = build_macaulay(sys);
    let det_m = det_exact(mac.matrix());
    let det_m_prime = det_exact(&mac.reduced_submatrix());
    let verdict = match (Sign::of_integer(&det_m), Sign::of_integer(&det_m_prime)) {
        (Sign::Zero, Sign::Zero) => ResultantVerdict::Indeterminate,
        (Sign::Zero, _) => ResultantVerdict::Zero,
        _ => ResultantVerdict::Nonzero,
    };
    (det_m, det_m_prime, verdict)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::parse_polynomial;

    fn p(s: &str, nvars: usize) -> Polynomial {
        parse_polynomial(s, nvars, 0).unwrap()
    }

    fn int(n: i64) -> Integer {
        Integer::from(n)
    }

    /// Cofactor-expansion determinant, the independent oracle.
    fn det_cofactor(m: &IntegerMatrix) -> Integer {
        let n = m.size();
        if n == 0 {
            return Integer::one();
        }
        if n == 1 {
            return m.at(0, 0).clone();
        }
        let mut acc = Integer::zero();
        for j in 0..n {
            if m.at(0, j).is_zero() {
                continue;
            }
            let minor_rows: Vec<Vec<Integer>> = (1..n)
                .map(|i| (0..n).filter(|&c| c != j).map(|c| m.at(i, c).clone()).collect())
                .collect();
            let minor = det_cofactor(&IntegerMatrix::from_rows(minor_rows));
            let term = m.at(0, j) * minor;
            if j % 2 == 0 {
                acc += term;
            } else {
                acc -= term;
            }
        }
        acc
    }

    #[test]
    fn monomial_listing() {
        let mons = monomials_of_degree(2, 2);
        let names: Vec<String> = mons.iter().map(|m| format!("{:?}", m.0)).collect();
        assert_eq!(names, vec!["[2, 0]", "[1, 1]", "[0, 2]"]);
        assert_eq!(monomials_of_degree(2, 1).len(), 2);
        assert_eq!(monomials_of_degree(3, 1).len(), 3);
    }

    #[test]
    fn linear_system_is_coefficient_matrix() {
        // f1 = 3 X0 + 5 X1, f2 = 2 X0 - 7 X1 (text vars x1, x2)
        let sys = HomogeneousSystem::new(
            1,
            1,
            vec![p("3*x1 + 5*x2", 2), p("2*x1 - 7*x2", 2)],
        )
        .unwrap();
        let mac = build_macaulay(&sys);
        assert_eq!(mac.degree(), 1);
        assert_eq!(mac.size(), 2);
        assert_eq!(*mac.matrix().at(0, 0), int(3));
        assert_eq!(*mac.matrix().at(0, 1), int(5));
        assert_eq!(*mac.matrix().at(1, 0), int(2));
        assert_eq!(*mac.matrix().at(1, 1), int(-7));
        // Every degree-1 monomial is reduced, so the submatrix is empty.
        assert_eq!(mac.reduced_submatrix().size(), 0);
        assert_eq!(det_exact(&mac.reduced_submatrix()), int(1));
    }

    #[test]
    fn quadratic_pair_matches_sylvester() {
        // For two binary quadratics the 4x4 Macaulay matrix is the Sylvester
        // matrix up to row/column order.
        let sys = HomogeneousSystem::new(
            1,
            2,
            vec![p("x1^2 + 2*x1*x2 + 3*x2^2", 2), p("2*x1^2 - x1*x2 + x2^2", 2)],
        )
        .unwrap();
        let mac = build_macaulay(&sys);
        assert_eq!(mac.degree(), 3);
        assert_eq!(mac.size(), 4);
        assert_eq!(mac.reduced_submatrix().size(), 0);
        let sylvester = IntegerMatrix::from_rows(vec![
            vec![int(1), int(2), int(3), int(0)],
            vec![int(0), int(1), int(2), int(3)],
            vec![int(2), int(-1), int(1), int(0)],
            vec![int(0), int(2), int(-1), int(1)],
        ]);
        let dm = det_exact(mac.matrix());
        let ds = det_cofactor(&sylvester);
        assert!(dm == ds || dm == -ds.clone(), "det M {dm} vs Sylvester {ds}");
    }

    #[test]
    fn pure_powers_give_permutation_matrix() {
        // f_i = X_(i-1)^2 for three variables
        let sys = HomogeneousSystem::new(
            2,
            2,
            vec![p("x1^2", 3), p("x2^2", 3), p("x3^2", 3)],
        )
        .unwrap();
        let mac = build_macaulay(&sys);
        for i in 0..mac.size() {
            let ones = (0..mac.size())
                .filter(|&j| !mac.matrix().at(i, j).is_zero())
                .collect::<Vec<_>>();
            assert_eq!(ones.len(), 1);
            assert_eq!(*mac.matrix().at(i, ones[0]), int(1));
        }
        // Not every monomial of degree 5 in 3 variables is reduced.
        let sub = mac.reduced_submatrix();
        assert!(sub.size() > 0);
    }

    #[test]
    fn determinant_examples() {
        let m = IntegerMatrix::from_rows(vec![vec![int(1), int(2)], vec![int(3), int(4)]]);
        assert_eq!(det_exact(&m), int(-2));
        let id = IntegerMatrix::from_rows(vec![
            vec![int(1), int(0), int(0)],
            vec![int(0), int(1), int(0)],
            vec![int(0), int(0), int(1)],
        ]);
        assert_eq!(det_exact(&id), int(1));
        let repeated = IntegerMatrix::from_rows(vec![
            vec![int(1), int(2), int(3)],
            vec![int(4), int(5), int(6)],
            vec![int(1), int(2), int(3)],
        ]);
        assert_eq!(det_exact(&repeated), int(0));
    }

    #[test]
    fn determinant_matches_cofactor_oracle() {
        // Deterministic pseudo-random small matrices.
        let mut seed = 0x243f6a8885a308d3u64;
        let mut next = move || {
            seed ^= seed << 13;
            seed ^= seed >> 7;
            seed ^= seed << 17;
            (seed % 19) as i64 - 9
        };
        for n in 1..=5 {
            for _ in 0..20 {
                let rows: Vec<Vec<Integer>> =
                    (0..n).map(|_| (0..n).map(|_| int(next())).collect()).collect();
                let m = IntegerMatrix::from_rows(rows);
                assert_eq!(det_exact(&m), det_cofactor(&m));
            }
        }
    }

    #[test]
    fn resultant_verdicts() {
        // Common root (1, 1): f1 = X0 - X1, f2 = 2 X0 - 2 X1.
        let sys =
            HomogeneousSystem::new(1, 1, vec![p("x1 - x2", 2), p("2*x1 - 2*x2", 2)]).unwrap();
        let (dm, _, verdict) = resultant_vanishing(&sys);
        assert_eq!(dm, int(0));
        assert_eq!(verdict, ResultantVerdict::Zero);

        // Only the trivial common zero: f1 = X0, f2 = X1.
        let sys = HomogeneousSystem::new(1, 1, vec![p("x1", 2), p("x2", 2)]).unwrap();
        let (dm, _, verdict) = resultant_vanishing(&sys);
        assert_eq!(dm, int(1));
        assert_eq!(verdict, ResultantVerdict::Nonzero);

        // Generic linear pair: det M = ad - bc.
        let sys = HomogeneousSystem::new(
            1,
            1,
            vec![p("4*x1 + 3*x2", 2), p("2*x1 + 5*x2", 2)],
        )
        .unwrap();
        let (dm, _, verdict) = resultant_vanishing(&sys);
        assert_eq!(dm, int(4 * 5 - 3 * 2));
        assert_eq!(verdict, ResultantVerdict::Nonzero);
    }

    #[test]
    fn rejects_inhomogeneous_input() {
        assert!(HomogeneousSystem::new(1, 1, vec![p("x1 + 1", 2), p("x2", 2)]).is_err());
        assert!(HomogeneousSystem::new(1, 2, vec![p("x1^2", 2)]).is_err());
    }
}
