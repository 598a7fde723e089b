//! Exact-arithmetic workbench for circuits over the reals.
//!
//! Everything in this crate computes with arbitrary-precision integers and
//! rationals; there is no floating point anywhere. The main pieces:
//!
//! - [`poly`]: sparse multivariate polynomials with exact integer
//!   coefficients, the universal value type.
//! - [`circuit`]: arithmetic-circuit DAGs (no test gates) with evaluation,
//!   expansion, coefficient extraction, boolean simulation, closure
//!   combinators and homogeneous splitting.
//! - [`bss`]: algebraic circuits with `<= 0?` test gates, exact evaluation
//!   and enumeration of every polynomial a run can test.
//! - [`macaulay`]: Macaulay matrices of homogeneous systems and exact
//!   determinants via fraction-free elimination.
//! - [`roots`] / [`signcond`]: Sturm-sequence root isolation and complete
//!   enumeration of satisfiable sign conditions for univariate systems.
//! - [`gf2`]: GF(2) vectors, halving-vector search and the deterministic
//!   choice-list sequence.
//! - [`transfer`]: the full decision pipeline that finds the rank of an
//!   input's sign condition through oracle sign tests only, then replays
//!   the circuit on that condition; cross-checked against direct
//!   evaluation.

pub mod bss;
pub mod circuit;
pub mod error;
pub mod exact;
pub mod format;
pub mod gf2;
pub mod macaulay;
pub mod poly;
pub mod roots;
pub mod signcond;
pub mod transfer;

pub use bss::AlgebraicCircuit;
pub use circuit::{ArithmeticCircuit, BooleanCircuit, CoefficientFunction};
pub use error::{Error, Result};
pub use exact::{Integer, Rational, Sign};
pub use gf2::Gf2Vector;
pub use macaulay::{HomogeneousSystem, MacaulayMatrix};
pub use poly::{Monomial, Polynomial};
pub use signcond::{SignCondition, SignConditionTable, TruncatedSignCondition, TwoValuedView};
pub use transfer::{Caps, TestOracle, Transcript, TransferInstance, TransferResult};
