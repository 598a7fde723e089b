//! Hamilton-cycle and Hamilton-path polynomial families over the n^2 edge
//! variables x_{i,j} of a digraph on n vertices. Enumeration is factorial
//! in n, so a small cap guards it.
//!
//! - cycles: HC_n = sum over n-cycles sigma of prod_i x_{i, sigma(i)};
//!   evaluated on an adjacency matrix it counts directed Hamilton cycles.
//! - paths: p_n = sum over vertex sequences c_1..c_n with c_1 < c_n of
//!   prod_t x_{c_t, c_(t+1)}; on a symmetric 0/1 matrix it counts the
//!   Hamilton paths of the undirected graph, each once.

use num_traits::One;

use crate::error::{Error, Result};
use crate::exact::Integer;
use crate::poly::{Monomial, Polynomial};

pub const DEFAULT_FAMILY_CAP: usize = 8;

/// Variable index of x_{i,j} (1-based i, j) among n^2 variables.
fn edge_var(n: usize, i: usize, j: usize) -> usize {
    (i - 1) * n + (j - 1)
}

fn check_cap(n: usize) -> Result<()> {
    if n == 0 || n > DEFAULT_FAMILY_CAP {
        return Err(Error::CapExceeded { cap: "family-n", limit: DEFAULT_FAMILY_CAP, needed: n });
    }
    Ok(())
}

fn permutations(elements: Vec<usize>) -> Vec<Vec<usize>> {
    if elements.is_empty() {
        return vec![Vec::new()];
    }
    let mut out = Vec::new();
    for (k, &e) in elements.iter().enumerate() {
        let mut rest = elements.clone();
        rest.remove(k);
        for mut tail in permutations(rest) {
            tail.insert(0, e);
            out.push(tail);
        }
    }
    out
}

/// HC_n: one monomial per n-cycle, (n-1)! terms.
pub fn hamilton_cycles(n: usize) -> Result<Polynomial> {
    check_cap(n)?;
    let nvars = n * n;
    let mut terms = Vec::new();
    // Fix the cycle to start at vertex 1; the remaining order determines it.
    for tail in permutations((2..=n).collect()) {
        let mut seq = vec![1];
        seq.extend(tail);
        let mut exps = vec![0u32; nvars];
        for t in 0..n {
            let from = seq[t];
            let to = seq[(t + 1) % n];
            exps[edge_var(n, from, to)] += 1;
        }
        terms.push((Monomial(exps), Integer::one()));
    }
    Polynomial::from_terms(nvars, terms)
}

/// p_n: one monomial per vertex sequence with smaller first endpoint,
/// n!/2 terms for n >= 2.
pub fn hamilton_paths(n: usize) -> Result<Polynomial> {
    check_cap(n)?;
    let nvars = n * n;
    let mut terms = Vec::new();
    for seq in permutations((1..=n).collect()) {
        if seq[0] >= seq[n - 1] {
            continue;
        }
        let mut exps = vec![0u32; nvars];
        for t in 0..n - 1 {
            exps[edge_var(n, seq[t], seq[t + 1])] += 1;
        }
        terms.push((Monomial(exps), Integer::one()));
    }
    Polynomial::from_terms(nvars, terms)
}
