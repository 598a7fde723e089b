//! The oracle-test decision pipeline: given an algebraic circuit and an
//! input, find the rank of the input's sign condition with respect to every
//! polynomial the circuit can test — reading the input only through sign
//! queries — then replay the circuit on that condition to decide
//! acceptance. The decision always matches direct evaluation; the
//! transcript records every query.
//!
//! Query kinds mirror the two polynomial families behind the searches:
//! `truncated(i)` is the sign of `prod_{j<=i} (sum_{k not in T^(j)}
//! f_k(x)^2)`, which vanishes exactly when the input's truncated condition
//! has rank <= i, and `product(i, k, c)` is the sign of
//! `prod_{j in u^(i)} f_j(x)` for the deterministic halving vector
//! `u^(i)` derived from the compatible view of `T^(k)` and the choice
//! list `c`. Product signs are computed factor-wise from component signs,
//! never by expanding the product polynomial.

use std::fmt;

use crate::bss::{AlgebraicCircuit, BssGate, DEFAULT_MAX_TESTS};
use crate::circuit::DEFAULT_EXPAND_CAP;
use crate::error::{Error, Result};
use crate::exact::{Integer, Rational, Sign};
use crate::gf2::{star_sequence, DEFAULT_MAX_SPRIME};
use crate::poly::Polynomial;
use crate::signcond::{
    compatible_view, enumerate_sign_conditions, sign_condition_of_point, SignConditionTable,
    TruncatedSignCondition, TwoValuedView,
};

/// Desk-scale guard rails, adjustable from the CLI.
#[derive(Debug, Clone)]
pub struct Caps {
    pub max_tests: usize,
    pub max_sprime: usize,
    pub expand_cap: usize,
}

impl Default for Caps {
    fn default() -> Self {
        Caps {
            max_tests: DEFAULT_MAX_TESTS,
            max_sprime: DEFAULT_MAX_SPRIME,
            expand_cap: DEFAULT_EXPAND_CAP,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Query {
    Truncated { i: usize },
    Product { i: usize, k: usize, c: Vec<bool> },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TranscriptEntry {
    pub query: Query,
    pub answer: Sign,
}

/// Append-only log of oracle queries; deterministic for a fixed circuit and
/// input.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Transcript {
    entries: Vec<TranscriptEntry>,
    truncated_queries: usize,
    product_queries: usize,
}

impl Transcript {
    pub fn entries(&self) -> &[TranscriptEntry] {
        &self.entries
    }

    pub fn truncated_queries(&self) -> usize {
        self.truncated_queries
    }

    pub fn product_queries(&self) -> usize {
        self.product_queries
    }

    pub fn total_queries(&self) -> usize {
        self.truncated_queries + self.product_queries
    }

    fn record(&mut self, query: Query, answer: Sign) {
        match query {
            Query::Truncated { .. } => self.truncated_queries += 1,
            Query::Product { .. } => self.product_queries += 1,
        }
        self.entries.push(TranscriptEntry { query, answer });
    }
}

fn render_choices(c: &[bool]) -> String {
    if c.is_empty() {
        "-".to_string()
    } else {
        c.iter().map(|&b| if b { '1' } else { '0' }).collect()
    }
}

fn parse_choices(s: &str) -> Option<Vec<bool>> {
    if s == "-" {
        return Some(Vec::new());
    }
    s.chars()
        .map(|ch| match ch {
            '0' => Some(false),
            '1' => Some(true),
            _ => None,
        })
        .collect()
}

impl fmt::Display for Transcript {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut t = 0usize;
        let mut p = 0usize;
        for e in &self.entries {
            match &e.query {
                Query::Truncated { i } => {
                    t += 1;
                    writeln!(f, "truncated i={} answer={} t={t} p={p}", i, e.answer)?;
                }
                Query::Product { i, k, c } => {
                    p += 1;
                    writeln!(
                        f,
                        "product i={} k={} c={} answer={} t={t} p={p}",
                        i,
                        k,
                        render_choices(c),
                        e.answer
                    )?;
                }
            }
        }
        Ok(())
    }
}

/// Everything the pipeline produced for one input, including the full query
/// log. `decision` always equals `direct_eval`.
#[derive(Debug, Clone)]
pub struct TransferResult {
    pub truncated_rank: usize,
    pub choice_list: Vec<bool>,
    pub rank: usize,
    pub decision: bool,
    pub direct_eval: bool,
    /// Number of truncated sign conditions (the truncated search space).
    pub n_truncated: usize,
    /// Number of full conditions compatible with the input's truncation.
    pub n_compatible: usize,
    pub transcript: Transcript,
}

impl TransferResult {
    /// The query budget the pipeline must respect for its search-space
    /// sizes.
    pub fn query_bound(&self) -> usize {
        ceil_log2(self.n_truncated) + 3 * ceil_log2(self.n_compatible + 1) + 4
    }

    /// Trace file: one line per query, then a summary line.
    pub fn render_trace(&self) -> String {
        format!(
            "{}final m={} c={} rank={} decision={} direct={}\n",
            self.transcript,
            self.truncated_rank,
            render_choices(&self.choice_list),
            self.rank,
            u8::from(self.decision),
            u8::from(self.direct_eval),
        )
    }
}

pub fn ceil_log2(n: usize) -> usize {
    assert!(n > 0);
    (usize::BITS - (n - 1).leading_zeros()) as usize
}

/// Summary line of a trace file.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TraceSummary {
    pub truncated_rank: usize,
    pub choice_list: Vec<bool>,
    pub rank: usize,
    pub decision: bool,
    pub direct_eval: bool,
}

/// Parse a trace file back into the transcript and summary, validating the
/// running query counters.
pub fn parse_trace(text: &str) -> Result<(Transcript, TraceSummary)> {
    let err = |line: usize, msg: &str| Error::Parse { line, msg: msg.to_string() };
    let mut transcript = Transcript::default();
    let mut summary = None;
    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        let line = raw.trim();
        if line.is_empty() {
            continue;
        }
        if summary.is_some() {
            return Err(err(line_no, "content after final line"));
        }
        let fields: Vec<&str> = line.split_whitespace().collect();
        let kv = |key: &str| -> Option<&str> {
            fields.iter().find_map(|f| f.strip_prefix(key))
        };
        match fields.first() {
            Some(&"truncated") => {
                let i = kv("i=").and_then(|v| v.parse().ok());
                let answer = kv("answer=").and_then(parse_sign);
                let t: Option<usize> = kv("t=").and_then(|v| v.parse().ok());
                let p: Option<usize> = kv("p=").and_then(|v| v.parse().ok());
                match (i, answer, t, p) {
                    (Some(i), Some(answer), Some(t), Some(p)) => {
                        transcript.record(Query::Truncated { i }, answer);
                        if t != transcript.truncated_queries || p != transcript.product_queries {
                            return Err(err(line_no, "query counters out of sequence"));
                        }
                    }
                    _ => return Err(err(line_no, "malformed truncated query")),
                }
            }
            Some(&"product") => {
                let i = kv("i=").and_then(|v| v.parse().ok());
                let k = kv("k=").and_then(|v| v.parse().ok());
                let c = kv("c=").and_then(parse_choices);
                let answer = kv("answer=").and_then(parse_sign);
                let t: Option<usize> = kv("t=").and_then(|v| v.parse().ok());
                let p: Option<usize> = kv("p=").and_then(|v| v.parse().ok());
                match (i, k, c, answer, t, p) {
                    (Some(i), Some(k), Some(c), Some(answer), Some(t), Some(p)) => {
                        transcript.record(Query::Product { i, k, c }, answer);
                        if t != transcript.truncated_queries || p != transcript.product_queries {
                            return Err(err(line_no, "query counters out of sequence"));
                        }
                    }
                    _ => return Err(err(line_no, "malformed product query")),
                }
            }
            Some(&"final") => {
                let m = kv("m=").and_then(|v| v.parse().ok());
                let c = kv("c=").and_then(parse_choices);
                let rank = kv("rank=").and_then(|v| v.parse().ok());
                let decision = kv("decision=").and_then(parse_bit);
                let direct = kv("direct=").and_then(parse_bit);
                match (m, c, rank, decision, direct) {
                    (Some(m), Some(c), Some(rank), Some(decision), Some(direct)) => {
                        summary = Some(TraceSummary {
                            truncated_rank: m,
                            choice_list: c,
                            rank,
                            decision,
                            direct_eval: direct,
                        });
                    }
                    _ => return Err(err(line_no, "malformed final line")),
                }
            }
            _ => return Err(err(line_no, "unknown trace line")),
        }
    }
    match summary {
        Some(s) => Ok((transcript, s)),
        None => Err(Error::Parse { line: 0, msg: "missing final line".into() }),
    }
}

fn parse_sign(s: &str) -> Option<Sign> {
    match s {
        "-1" => Some(Sign::Negative),
        "0" => Some(Sign::Zero),
        "1" => Some(Sign::Positive),
        _ => None,
    }
}

fn parse_bit(s: &str) -> Option<bool> {
    match s {
        "0" => Some(false),
        "1" => Some(true),
        _ => None,
    }
}

/// The oracle realizing the test families by exact evaluation. It owns the
/// only access to the input: the search algorithms see signs, never the
/// point itself.
pub struct TestOracle<'a> {
    table: &'a SignConditionTable,
    truncated: &'a [TruncatedSignCondition],
    signs: Vec<Sign>,
    max_sprime: usize,
    transcript: Transcript,
}

impl<'a> TestOracle<'a> {
    pub fn new(
        table: &'a SignConditionTable,
        truncated: &'a [TruncatedSignCondition],
        x: &[Rational],
        caps: &Caps,
    ) -> Result<Self> {
        let signs: Vec<Sign> =
            table.system().iter().map(|f| f.sign_at(x)).collect::<Result<_>>()?;
        Ok(TestOracle {
            table,
            truncated,
            signs,
            max_sprime: caps.max_sprime,
            transcript: Transcript::default(),
        })
    }

    pub fn transcript(&self) -> &Transcript {
        &self.transcript
    }

    pub fn into_transcript(self) -> Transcript {
        self.transcript
    }

    /// Sign of `prod_{j<=i} (sum_{k not in T^(j)} f_k(x)^2)`, evaluated
    /// factor-wise with an early zero exit. Factors are sums of squares, so
    /// the answer is 0 or +1; an empty inner sum is 0.
    pub fn query_truncated(&mut self, i: usize) -> Sign {
        let mut answer = Sign::Positive;
        for t in &self.truncated[..i] {
            let vanishes = t
                .bits()
                .iter()
                .enumerate()
                .filter(|(_, inside)| !**inside)
                .all(|(k, _)| self.signs[k] == Sign::Zero);
            if vanishes {
                answer = Sign::Zero;
                break;
            }
        }
        self.transcript.record(Query::Truncated { i }, answer);
        answer
    }

    /// Sign of `prod_{j in u^(i)} f_j(x)`, where `u^(i)` is recomputed from
    /// the compatible view of `T^(k)` and the choice list. The product sign
    /// is the product of the factor signs.
    pub fn query_product(&mut self, i: usize, k: usize, c: &[bool]) -> Result<Sign> {
        debug_assert_eq!(c.len() + 1, i);
        let view = compatible_view(self.table, &self.truncated[k - 1])?;
        let us = star_sequence(view.vectors(), c, self.max_sprime)?;
        let u = us.last().expect("sequence has l+1 elements");
        let mut answer = Sign::Positive;
        for j in u.support() {
            answer = answer * self.signs[view.index_map()[j]];
        }
        self.transcript.record(Query::Product { i, k, c: c.to_vec() }, answer);
        Ok(answer)
    }
}

/// Binary search for the minimal i whose truncated query vanishes: the rank
/// of the input's truncated sign condition. Query count is at most
/// ceil(log2 N_T) + 1.
pub fn truncated_rank_search(oracle: &mut TestOracle<'_>, n_truncated: usize) -> Result<usize> {
    if n_truncated == 0 {
        return Err(Error::EmptySystem);
    }
    if n_truncated == 1 {
        return Ok(1);
    }
    let mut lo = 1usize;
    let mut hi = n_truncated;
    let mut zero_at: Option<usize> = None;
    while lo < hi {
        let mid = lo + (hi - lo) / 2;
        if oracle.query_truncated(mid) == Sign::Zero {
            zero_at = Some(mid);
            hi = mid;
        } else {
            lo = mid + 1;
        }
    }
    // A complete table guarantees the last factor vanishes; verify when the
    // search itself never observed it.
    if zero_at != Some(lo) && oracle.query_truncated(lo) != Sign::Zero {
        return Err(Error::OracleInconsistency(
            "no truncated query vanished; the input's truncation is not in the table".into(),
        ));
    }
    Ok(lo)
}

/// Adaptive halving search for the input's full sign condition among the
/// compatible ones. Returns the choice list; each step queries one product
/// sign (negative answer records choice 1) and keeps the vectors matching
/// the input's inner product.
pub fn full_condition_search(
    oracle: &mut TestOracle<'_>,
    view: &TwoValuedView,
    k: usize,
    caps: &Caps,
) -> Result<Vec<bool>> {
    let mut alive: Vec<usize> = (0..view.len()).collect();
    let mut choices: Vec<bool> = Vec::new();
    while alive.len() > 1 {
        let us = star_sequence(view.vectors(), &choices, caps.max_sprime)?;
        let u = *us.last().expect("sequence has l+1 elements");
        let answer = oracle.query_product(choices.len() + 1, k, &choices)?;
        let b = match answer {
            Sign::Negative => true,
            Sign::Positive => false,
            Sign::Zero => {
                return Err(Error::OracleInconsistency(
                    "product sign vanished on a nowhere-zero view".into(),
                ))
            }
        };
        alive.retain(|&row| view.vectors()[row].dot(&u).expect("equal lengths") == b);
        if alive.is_empty() {
            return Err(Error::OracleInconsistency(
                "choice filtering eliminated every compatible condition".into(),
            ));
        }
        choices.push(b);
    }
    Ok(choices)
}

/// Recompute the halving vectors and find the unique compatible condition
/// fulfilling the choice list; returns its global (1-based) rank.
pub fn recover_rank(
    choices: &[bool],
    view: &TwoValuedView,
    table: &SignConditionTable,
    max_sprime: usize,
) -> Result<usize> {
    let us = star_sequence(view.vectors(), choices, max_sprime)?;
    let survivors: Vec<usize> = (0..view.len())
        .filter(|&row| {
            choices.iter().enumerate().all(|(i, &c)| {
                view.vectors()[row].dot(&us[i]).expect("equal lengths") == c
            })
        })
        .collect();
    match survivors.as_slice() {
        [row] => {
            let table_row = view.cond_indices()[*row];
            if table.conditions()[table_row].truncate() != *view.base() {
                return Err(Error::TranscriptCorruption(
                    "recovered condition is incompatible with the view's truncation".into(),
                ));
            }
            Ok(table_row + 1)
        }
        [] => Err(Error::TranscriptCorruption("no condition fulfills the choice list".into())),
        _ => Err(Error::TranscriptCorruption(format!(
            "{} conditions fulfill the choice list",
            survivors.len()
        ))),
    }
}

/// Replay the circuit on a sign condition, level by level: each test gate's
/// polynomial is computed under the outcomes so far, located in the tested
/// list, and answered from the condition (nonpositive sign means outcome
/// 1). No input point is involved.
pub fn replay_acceptance(
    circuit: &AlgebraicCircuit,
    table: &SignConditionTable,
    rank: usize,
    expand_cap: usize,
) -> Result<bool> {
    if rank == 0 || rank > table.len() {
        return Err(Error::TranscriptCorruption(format!("rank {rank} out of range")));
    }
    let cond = &table.conditions()[rank - 1];
    let nvars = circuit.nvars();
    let mut polys: Vec<Polynomial> = Vec::with_capacity(circuit.size());
    let mut outcome_at_output = false;
    for (id, gate) in circuit.gates().iter().enumerate() {
        let p = match gate {
            BssGate::Input(i) => Polynomial::var(nvars, *i),
            BssGate::Const(k) => Polynomial::constant(nvars, k.clone()),
            BssGate::Add(a, b) => polys[*a].add(&polys[*b])?,
            BssGate::Sub(a, b) => polys[*a].sub(&polys[*b])?,
            BssGate::Mul(a, b) => polys[*a].mul(&polys[*b])?,
            BssGate::Test(a) => {
                let tested = &polys[*a];
                let j = table
                    .system()
                    .iter()
                    .position(|f| f == tested)
                    .ok_or_else(|| Error::TestedPolyNotFound(tested.to_string()))?;
                let outcome = cond.signs()[j].is_nonpositive();
                if id == circuit.output() {
                    outcome_at_output = outcome;
                }
                Polynomial::constant(nvars, if outcome { Integer::from(1) } else { 0.into() })
            }
        };
        if p.num_terms() > expand_cap {
            return Err(Error::CapExceeded {
                cap: "expand-cap",
                limit: expand_cap,
                needed: p.num_terms(),
            });
        }
        polys.push(p);
    }
    Ok(outcome_at_output)
}

/// A circuit with its tested-polynomial system and sign-condition table,
/// ready to decide many inputs.
#[derive(Debug, Clone)]
pub struct TransferInstance {
    circuit: AlgebraicCircuit,
    table: SignConditionTable,
    truncated: Vec<TruncatedSignCondition>,
}

impl TransferInstance {
    /// Enumerate the tested polynomials and build the complete univariate
    /// sign-condition table.
    pub fn prepare(circuit: &AlgebraicCircuit, caps: &Caps) -> Result<Self> {
        let system =
            circuit.enumerate_tested_polynomials(false, caps.max_tests, caps.expand_cap)?;
        let table = enumerate_sign_conditions(&system)?;
        let truncated = table.truncated_table();
        Ok(TransferInstance { circuit: circuit.clone(), table, truncated })
    }

    /// Use a caller-supplied table (e.g. an attested witness set for
    /// multivariate circuits). The table must be built over exactly this
    /// circuit's tested polynomials. Incomplete tables are rejected unless
    /// overridden; with the override, a wrong rank is still impossible —
    /// the pipeline verifies the recovered condition directly and aborts.
    pub fn prepare_with_table(
        circuit: &AlgebraicCircuit,
        table: SignConditionTable,
        allow_incomplete: bool,
        caps: &Caps,
    ) -> Result<Self> {
        let system =
            circuit.enumerate_tested_polynomials(false, caps.max_tests, caps.expand_cap)?;
        if system != table.system() {
            return Err(Error::InvalidCircuit(
                "table system does not match the circuit's tested polynomials".into(),
            ));
        }
        if !table.is_complete() && !allow_incomplete {
            return Err(Error::IncompleteTable);
        }
        let truncated = table.truncated_table();
        Ok(TransferInstance { circuit: circuit.clone(), table, truncated })
    }

    pub fn system(&self) -> &[Polynomial] {
        self.table.system()
    }

    pub fn table(&self) -> &SignConditionTable {
        &self.table
    }

    pub fn truncated(&self) -> &[TruncatedSignCondition] {
        &self.truncated
    }

    /// Run the pipeline on one input.
    pub fn decide(&self, x: &[Rational], caps: &Caps) -> Result<TransferResult> {
        let mut oracle = TestOracle::new(&self.table, &self.truncated, x, caps)?;
        let m = truncated_rank_search(&mut oracle, self.truncated.len())?;
        let view = compatible_view(&self.table, &self.truncated[m - 1])?;
        let choices = full_condition_search(&mut oracle, &view, m, caps)?;
        let rank = recover_rank(&choices, &view, &self.table, caps.max_sprime)?;
        if !self.table.is_complete() {
            // Soundness over availability: a condition missing from an
            // unattested table must abort, not mis-rank.
            let actual = sign_condition_of_point(self.table.system(), x)?;
            if self.table.conditions()[rank - 1] != actual {
                return Err(Error::ConditionNotInTable);
            }
        }
        let decision = replay_acceptance(&self.circuit, &self.table, rank, caps.expand_cap)?;
        let direct_eval = self.circuit.eval(x)?;
        Ok(TransferResult {
            truncated_rank: m,
            choice_list: choices,
            rank,
            decision,
            direct_eval,
            n_truncated: self.truncated.len(),
            n_compatible: view.len(),
            transcript: oracle.into_transcript(),
        })
    }
}

/// One-shot convenience: prepare and decide.
pub fn transfer_decide(
    circuit: &AlgebraicCircuit,
    x: &[Rational],
    caps: &Caps,
) -> Result<TransferResult> {
    TransferInstance::prepare(circuit, caps)?.decide(x, caps)
}
