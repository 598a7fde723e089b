//! Batch front end for the exact-arithmetic circuit workbench. Every
//! command prints exact integers and `p/q` rationals, never decimals, and
//! output is byte-identical across runs on identical inputs.

use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{anyhow, bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};

use realcirc_core::circuit::{
    hamilton_cycles, hamilton_paths, homogeneous_split_mod2, simulate_boolean,
};
use realcirc_core::error::Error as CoreError;
use realcirc_core::exact::{parse_rational, Integer, Rational};
use realcirc_core::format::{
    parse_boolean_circuit, parse_circuit, parse_macaulay_system, parse_poly_system,
    print_arithmetic, ParsedCircuit,
};
use realcirc_core::macaulay::{build_macaulay, det_exact, resultant_vanishing};
use realcirc_core::poly::Monomial;
use realcirc_core::signcond::{enumerate_sign_conditions, sign_condition_of_point};
use realcirc_core::transfer::TransferInstance;
use realcirc_core::Caps;

#[derive(Parser)]
#[command(
    name = "realcirc",
    about = "Exact-arithmetic workbench for arithmetic and algebraic circuits",
    version
)]
struct Cli {
    #[command(flatten)]
    caps: CapArgs,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct CapArgs {
    /// Cap on test-gate count for tested-polynomial enumeration.
    #[arg(long, global = true, default_value_t = 12)]
    max_tests: usize,
    /// Cap on vector length for the exhaustive halving-vector search.
    #[arg(long, global = true, default_value_t = 24)]
    max_sprime: usize,
    /// Cap on term counts in symbolic expansion.
    #[arg(long, global = true, default_value_t = 5000)]
    expand_cap: usize,
}

impl CapArgs {
    fn caps(&self) -> Caps {
        Caps {
            max_tests: self.max_tests,
            max_sprime: self.max_sprime,
            expand_cap: self.expand_cap,
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Evaluate a circuit at a rational point (algebraic circuits print
    /// their 0/1 decision).
    Eval {
        #[arg(long)]
        circuit: PathBuf,
        /// Comma-separated rationals, e.g. "3/2" or "1,-2/3".
        #[arg(long)]
        input: String,
        /// Reduce every gate value modulo this integer (inputs must be
        /// integers).
        #[arg(long)]
        modulus: Option<Integer>,
    },
    /// Expand an arithmetic circuit into its polynomial.
    Expand {
        #[arg(long)]
        circuit: PathBuf,
    },
    /// Extract one coefficient of the polynomial computed by an arithmetic
    /// circuit, without expanding it.
    Coeff {
        #[arg(long)]
        circuit: PathBuf,
        /// Exponent vector, comma-separated, e.g. "2,0,1".
        #[arg(long)]
        monomial: String,
    },
    /// Formal degree of an arithmetic circuit.
    FormalDegree {
        #[arg(long)]
        circuit: PathBuf,
    },
    /// Split an arithmetic circuit into homogeneous components modulo 2.
    SplitMod2 {
        #[arg(long)]
        circuit: PathBuf,
        /// Highest component degree kept; defaults to the circuit's formal
        /// degree.
        #[arg(long)]
        dmax: Option<u32>,
    },
    /// Arithmetize a boolean circuit (not/and/or file format).
    SimulateBool {
        #[arg(long)]
        circuit: PathBuf,
    },
    /// Print a Hamilton-family polynomial.
    Family {
        kind: FamilyKind,
        #[arg(long)]
        n: usize,
    },
    /// Build the Macaulay matrix of a homogeneous system and report both
    /// determinants and the vanishing verdict.
    Macaulay {
        #[arg(long)]
        system: PathBuf,
    },
    /// Just the determinants and the vanishing verdict.
    Resultant {
        #[arg(long)]
        system: PathBuf,
    },
    /// Sign-condition queries on a polynomial system file.
    Signcond {
        #[command(subcommand)]
        action: SigncondAction,
    },
    /// Enumerate every polynomial an algebraic circuit can test.
    TestedPolys {
        #[arg(long)]
        circuit: PathBuf,
        /// Skip scenarios no real input can realize (univariate only).
        #[arg(long)]
        prune: bool,
    },
    /// The oracle-test decision pipeline.
    Transfer {
        #[command(subcommand)]
        action: TransferAction,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum FamilyKind {
    /// Hamilton cycles
    Hc,
    /// Hamilton paths
    Hp,
}

#[derive(Subcommand)]
enum SigncondAction {
    /// List all satisfiable sign conditions with ranks and witnesses
    /// (univariate systems).
    Enumerate {
        #[arg(long)]
        system: PathBuf,
    },
    /// Sign condition of one rational point.
    OfPoint {
        #[arg(long)]
        system: PathBuf,
        #[arg(long)]
        point: String,
    },
}

#[derive(Subcommand)]
enum TransferAction {
    /// Decide an input through sign-oracle queries and cross-check against
    /// direct evaluation.
    Decide {
        #[arg(long)]
        circuit: PathBuf,
        #[arg(long)]
        input: String,
        /// Write the query log to this file.
        #[arg(long)]
        trace: Option<PathBuf>,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::FAILURE
        }
    }
}

/// Attach the flag that raises a cap to cap-exceeded errors.
fn explain_caps(e: CoreError) -> anyhow::Error {
    if let CoreError::CapExceeded { cap, .. } = &e {
        let flag = match *cap {
            "max-tests" => Some("--max-tests"),
            "max-sprime" => Some("--max-sprime"),
            "expand-cap" => Some("--expand-cap"),
            _ => None,
        };
        if let Some(flag) = flag {
            return anyhow!("{e} (raise with {flag})");
        }
    }
    anyhow!(e)
}

fn read(path: &PathBuf) -> Result<String> {
    fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))
}

fn load_circuit(path: &PathBuf) -> Result<ParsedCircuit> {
    parse_circuit(&read(path)?).map_err(explain_caps)
}

fn parse_point(s: &str) -> Result<Vec<Rational>> {
    s.split(',')
        .map(|tok| parse_rational(tok).ok_or_else(|| anyhow!("bad rational '{tok}'")))
        .collect()
}

fn run(cli: &Cli) -> Result<()> {
    let caps = cli.caps.caps();
    match &cli.command {
        Command::Eval { circuit, input, modulus } => {
            let parsed = load_circuit(circuit)?;
            let point = parse_point(input)?;
            if parsed.has_tests() {
                if modulus.is_some() {
                    bail!("modular evaluation applies to arithmetic circuits only");
                }
                let c = parsed.into_algebraic().map_err(explain_caps)?;
                let decision = c.eval(&point).map_err(explain_caps)?;
                println!("{}", u8::from(decision));
            } else {
                let c = parsed.into_arithmetic().map_err(explain_caps)?;
                match modulus {
                    Some(m) => println!("{}", c.eval_mod(&point, m).map_err(explain_caps)?),
                    None => println!("{}", c.eval(&point).map_err(explain_caps)?),
                }
            }
        }
        Command::Expand { circuit } => {
            let c = load_circuit(circuit)?.into_arithmetic().map_err(explain_caps)?;
            println!("{}", c.expand(caps.expand_cap).map_err(explain_caps)?);
        }
        Command::Coeff { circuit, monomial } => {
            let c = load_circuit(circuit)?.into_arithmetic().map_err(explain_caps)?;
            let exps: Vec<u32> = monomial
                .split(',')
                .map(|t| t.trim().parse().map_err(|_| anyhow!("bad exponent '{t}'")))
                .collect::<Result<_>>()?;
            let coeff =
                c.extract_coefficient(&Monomial(exps)).map_err(explain_caps)?;
            println!("{coeff}");
        }
        Command::FormalDegree { circuit } => {
            let c = load_circuit(circuit)?.into_arithmetic().map_err(explain_caps)?;
            println!("{}", c.formal_degree());
        }
        Command::SplitMod2 { circuit, dmax } => {
            let c = load_circuit(circuit)?.into_arithmetic().map_err(explain_caps)?;
            let dmax = dmax.unwrap_or_else(|| u32::try_from(c.formal_degree()).unwrap_or(u32::MAX));
            let d = homogeneous_split_mod2(&c, dmax).map_err(explain_caps)?;
            print!("{}", print_arithmetic(&d));
        }
        Command::SimulateBool { circuit } => {
            let bc = parse_boolean_circuit(&read(circuit)?).map_err(explain_caps)?;
            let ac = simulate_boolean(&bc);
            print!("{}", print_arithmetic(&ac));
        }
        Command::Family { kind, n } => {
            let p = match kind {
                FamilyKind::Hc => hamilton_cycles(*n),
                FamilyKind::Hp => hamilton_paths(*n),
            }
            .map_err(explain_caps)?;
            println!("{p}");
        }
        Command::Macaulay { system } => {
            let sys = parse_macaulay_system(&read(system)?).map_err(explain_caps)?;
            let mac = build_macaulay(&sys);
            let det_m = det_exact(mac.matrix());
            let det_mp = det_exact(&mac.reduced_submatrix());
            let (_, _, verdict) = resultant_vanishing(&sys);
            println!("N = {}", mac.size());
            println!("d = {}", mac.degree());
            println!("detM = {det_m}");
            println!("detM' = {det_mp}");
            println!("verdict = {verdict}");
        }
        Command::Resultant { system } => {
            let sys = parse_macaulay_system(&read(system)?).map_err(explain_caps)?;
            let (det_m, det_mp, verdict) = resultant_vanishing(&sys);
            println!("detM = {det_m}");
            println!("detM' = {det_mp}");
            println!("verdict = {verdict}");
        }
        Command::Signcond { action } => match action {
            SigncondAction::Enumerate { system } => {
                let (_, polys) = parse_poly_system(&read(system)?).map_err(explain_caps)?;
                let table = enumerate_sign_conditions(&polys).map_err(explain_caps)?;
                for (i, cond) in table.conditions().iter().enumerate() {
                    println!("{}: {} witness={}", i + 1, cond, table.witnesses()[i]);
                }
            }
            SigncondAction::OfPoint { system, point } => {
                let (_, polys) = parse_poly_system(&read(system)?).map_err(explain_caps)?;
                let x = parse_point(point)?;
                let cond = sign_condition_of_point(&polys, &x).map_err(explain_caps)?;
                println!("{cond}");
            }
        },
        Command::TestedPolys { circuit, prune } => {
            let c = load_circuit(circuit)?.into_algebraic().map_err(explain_caps)?;
            let polys = c
                .enumerate_tested_polynomials(*prune, caps.max_tests, caps.expand_cap)
                .map_err(explain_caps)?;
            for (i, p) in polys.iter().enumerate() {
                println!("{}: {}", i + 1, p);
            }
        }
        Command::Transfer { action } => match action {
            TransferAction::Decide { circuit, input, trace } => {
                let c = load_circuit(circuit)?.into_algebraic().map_err(explain_caps)?;
                let x = parse_point(input)?;
                let inst = TransferInstance::prepare(&c, &caps).map_err(explain_caps)?;
                let r = inst.decide(&x, &caps).map_err(explain_caps)?;
                if let Some(path) = trace {
                    fs::write(path, r.render_trace())
                        .with_context(|| format!("writing {}", path.display()))?;
                }
                println!("tested polynomials: {}", inst.system().len());
                println!("sign conditions: {}", inst.table().len());
                println!("truncated rank m = {}", r.truncated_rank);
                println!(
                    "choice list c = {}",
                    if r.choice_list.is_empty() {
                        "-".to_string()
                    } else {
                        r.choice_list.iter().map(|&b| if b { '1' } else { '0' }).collect()
                    }
                );
                println!("rank = {}", r.rank);
                println!(
                    "queries = {} (bound {})",
                    r.transcript.total_queries(),
                    r.query_bound()
                );
                println!(
                    "decision = {} (direct eval: {})",
                    u8::from(r.decision),
                    u8::from(r.direct_eval)
                );
            }
        },
    }
    Ok(())
}
