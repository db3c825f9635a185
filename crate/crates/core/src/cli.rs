//! The `plp` command-line tool.
//!
//! Exit codes: 0 pass or success, 1 fail or invalid input sequence, 2 usage
//! or domain error, 3 inconclusive.

use std::fs::File;
use std::io::{BufReader, Read, Write};
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_bigint::BigUint;
use serde::Serialize;

use crate::certify::{
    check_composite_reciprocal_bound, compute_thresholds, decompose_reciprocal_sum,
    low_omega_witness, prime_witness_by_density, Certificate, DensityMode, Verdict,
};
use crate::error::{PlpError, Result};
use crate::interval::IntervalValue;
use crate::oracle::{Oracle, DEFAULT_ORACLE_LIMIT};
use crate::plp::{
    generate, read_terms_json, validate_plp, write_csv, write_json,
    GenerateParams, GeneratorKind, PlpSequence,
};
use crate::sieve::{build_sieve, SieveTables};
use crate::zeta::{p_constant, prime_zeta_direct, prime_zeta_mobius, zeta_real};

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAIL: i32 = 1;
pub const EXIT_ERROR: i32 = 2;
pub const EXIT_INCONCLUSIVE: i32 = 3;

pub const DEFAULT_CLI_SIEVE_LIMIT: u64 = 10_000_000;
pub const SIEVE_LIMIT_ENV: &str = "PLP_SIEVE_LIMIT";

#[derive(Debug, Parser)]
#[command(name = "plp", version, about = "Pairwise relatively prime sequences: certified checks")]
pub struct Cli {
    /// Sieve size; also read from PLP_SIEVE_LIMIT.
    #[arg(long, global = true, env = SIEVE_LIMIT_ENV, default_value_t = DEFAULT_CLI_SIEVE_LIMIT)]
    pub sieve_limit: u64,

    /// Emit JSON.
    #[arg(long, global = true, conflicts_with = "csv")]
    pub json: bool,

    /// Emit CSV.
    #[arg(long, global = true)]
    pub csv: bool,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum OutputFormat {
    Json,
    Csv,
    Human,
}

impl Cli {
    pub fn output_format(&self) -> OutputFormat {
        if self.json {
            OutputFormat::Json
        } else if self.csv {
            OutputFormat::Csv
        } else {
            OutputFormat::Human
        }
    }
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Certified P(s) (or ζ(s) with --riemann).
    Zeta(ZetaArgs),
    /// Generate a PLP sequence.
    Generate(GenerateArgs),
    /// Validate a sequence file.
    Verify(InputArgs),
    /// Run a certifier on a sequence file.
    Certify(CertifyArgs),
    /// Density thresholds for n.
    Threshold(ThresholdArgs),
    /// Split Σ 1/a into prime and composite parts.
    Decompose(InputArgs),
    /// Brute-force extremal composite PLP set.
    Oracle(OracleArgs),
    /// Convergence series as CSV.
    Series(SeriesArgs),
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum ZetaMethod {
    Both,
    Mobius,
    Direct,
}

#[derive(Debug, Args)]
pub struct ZetaArgs {
    #[arg(long)]
    pub s: f64,
    #[arg(long, default_value_t = 1e-10)]
    pub width: f64,
    #[arg(long, value_enum, default_value_t = ZetaMethod::Both)]
    pub method: ZetaMethod,
    /// Prime cutoff for the direct sum (default: sieve limit).
    #[arg(long)]
    pub cutoff: Option<u64>,
    /// Evaluate the Riemann zeta function instead.
    #[arg(long)]
    pub riemann: bool,
}

#[derive(Debug, Args)]
pub struct GenerateArgs {
    #[arg(long, value_parser = parse_kind)]
    pub kind: GeneratorKind,
    #[arg(long)]
    pub count: usize,
    #[arg(long)]
    pub seed: Option<u64>,
    #[arg(long)]
    pub range: Option<u64>,
}

fn parse_kind(s: &str) -> std::result::Result<GeneratorKind, String> {
    s.parse().map_err(|e: PlpError| e.to_string())
}

#[derive(Debug, Args)]
pub struct InputArgs {
    /// Sequence file, or `-` for stdin.
    #[arg(long)]
    pub input: PathBuf,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Proposition {
    ReciprocalBound,
    LowOmega,
    PrimeDensity,
}

fn parse_prop(s: &str) -> std::result::Result<Proposition, String> {
    match s {
        "3.1" | "reciprocal-bound" | "reciprocal_bound" => Ok(Proposition::ReciprocalBound),
        "3.3" | "low-omega" | "low_omega" => Ok(Proposition::LowOmega),
        "3.4" | "prime-density" | "prime_density" => Ok(Proposition::PrimeDensity),
        other => Err(format!(
            "unknown proposition {other:?} (expected 3.1, 3.3 or 3.4)"
        )),
    }
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum ModeArg {
    Exact,
    Rs,
}

#[derive(Debug, Args)]
pub struct CertifyArgs {
    #[arg(long, value_parser = parse_prop)]
    pub prop: Proposition,
    #[arg(long)]
    pub input: PathBuf,
    /// Upper bound on the terms (density check).
    #[arg(long)]
    pub n: Option<u64>,
    #[arg(long, value_enum, default_value_t = ModeArg::Exact)]
    pub mode: ModeArg,
    /// Exponent for the low-Ω check.
    #[arg(long, default_value_t = 2)]
    pub s: u32,
}

#[derive(Debug, Args)]
pub struct ThresholdArgs {
    #[arg(long)]
    pub n: u64,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum Objective {
    Size,
    Sum,
}

#[derive(Debug, Args)]
pub struct OracleArgs {
    #[arg(long)]
    pub n: u64,
    #[arg(long, value_enum, default_value_t = Objective::Size)]
    pub objective: Objective,
    #[arg(long, default_value_t = DEFAULT_ORACLE_LIMIT)]
    pub oracle_limit: u64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
#[value(rename_all = "snake_case")]
pub enum SeriesKind {
    PrimeSquarePartialSums,
    DirectPzetaPartials,
}

#[derive(Debug, Args)]
pub struct SeriesArgs {
    #[arg(long, value_enum)]
    pub kind: SeriesKind,
    #[arg(long)]
    pub limit: u64,
}

/// Parses `args` (including the program name) and runs the command.
pub fn run<I, T>(args: I, stdin: &mut dyn Read, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_ERROR } else { EXIT_OK };
            let text = e.render().to_string();
            let _ = if e.use_stderr() {
                write!(err, "{text}")
            } else {
                write!(out, "{text}")
            };
            return code;
        }
    };
    match execute(&cli, stdin, out) {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            EXIT_ERROR
        }
    }
}

fn exit_code(v: Verdict) -> i32 {
    match v {
        Verdict::Pass => EXIT_OK,
        Verdict::Fail => EXIT_FAIL,
        Verdict::Inconclusive => EXIT_INCONCLUSIVE,
    }
}

struct Context<'a> {
    cli: &'a Cli,
    sieve: Option<SieveTables>,
}

impl Context<'_> {
    fn sieve(&mut self) -> Result<&SieveTables> {
        if self.sieve.is_none() {
            self.sieve = Some(build_sieve(self.cli.sieve_limit)?);
        }
        Ok(self.sieve.as_ref().unwrap())
    }
}

fn read_input(path: &PathBuf, stdin: &mut dyn Read) -> Result<Vec<BigUint>> {
    if path.as_os_str() == "-" {
        read_terms_json(stdin)
    } else {
        read_terms_json(BufReader::new(File::open(path)?))
    }
}

fn read_sequence(path: &PathBuf, stdin: &mut dyn Read) -> Result<PlpSequence> {
    PlpSequence::new(read_input(path, stdin)?)
}

fn write_value<T: Serialize>(out: &mut dyn Write, v: &T) -> Result<()> {
    serde_json::to_writer(&mut *out, v)?;
    writeln!(out)?;
    Ok(())
}

fn execute(cli: &Cli, stdin: &mut dyn Read, out: &mut dyn Write) -> Result<i32> {
    let mut ctx = Context { cli, sieve: None };
    let format = cli.output_format();
    match &cli.command {
        Command::Zeta(a) => zeta_command(&mut ctx, a, format, out),
        Command::Generate(a) => {
            let params = GenerateParams {
                count: a.count,
                seed: a.seed,
                range_hint: a.range,
            };
            let t = if a.kind == GeneratorKind::PrimeSquares {
                Some(ctx.sieve()?)
            } else {
                None
            };
            let seq = generate(a.kind, &params, t)?;
            match format {
                OutputFormat::Json => write_json(&seq, &mut *out)?,
                OutputFormat::Csv => write_csv(&seq, &mut *out)?,
                OutputFormat::Human => {
                    let terms: Vec<String> = seq.terms().iter().map(|t| t.to_string()).collect();
                    writeln!(out, "{} ({} terms): {}", a.kind, seq.len(), terms.join(", "))?;
                }
            }
            Ok(EXIT_OK)
        }
        Command::Verify(a) => {
            let terms = read_input(&a.input, stdin)?;
            let report = validate_plp(&terms);
            match format {
                OutputFormat::Human => {
                    if report.valid {
                        writeln!(out, "valid PLP sequence ({} terms)", terms.len())?;
                    } else {
                        writeln!(out, "invalid: {} violation(s)", report.violations.len())?;
                        for v in &report.violations {
                            writeln!(out, "  {:?} at {:?}: {}", v.kind, v.indices, v.detail)?;
                        }
                    }
                }
                _ => write_value(out, &report)?,
            }
            Ok(if report.valid { EXIT_OK } else { EXIT_FAIL })
        }
        Command::Certify(a) => {
            let seq = read_sequence(&a.input, stdin)?;
            let t = ctx.sieve()?;
            let cert = match a.prop {
                Proposition::ReciprocalBound => check_composite_reciprocal_bound(&seq, t)?,
                Proposition::LowOmega => low_omega_witness(&seq, a.s, t)?,
                Proposition::PrimeDensity => {
                    let n = a
                        .n
                        .ok_or_else(|| PlpError::Usage("--n is required for 3.4".into()))?;
                    let mode = match a.mode {
                        ModeArg::Exact => DensityMode::Exact,
                        ModeArg::Rs => DensityMode::Rs,
                    };
                    prime_witness_by_density(&seq, n, t, mode)?
                }
            };
            emit_certificate(&cert, format, out)?;
            Ok(exit_code(cert.verdict))
        }
        Command::Threshold(a) => {
            let n = a.n;
            let th = compute_thresholds(n, ctx.sieve()?)?;
            match format {
                OutputFormat::Human => writeln!(
                    out,
                    "n = {n}: exact threshold π(√n)+1 = {}, explicit threshold = {}",
                    th.exact, th.rs
                )?,
                OutputFormat::Csv => writeln!(out, "n,exact,rs\n{n},{},{}", th.exact, th.rs)?,
                OutputFormat::Json => write_value(out, &th)?,
            }
            Ok(EXIT_OK)
        }
        Command::Decompose(a) => {
            let seq = read_sequence(&a.input, stdin)?;
            let cert = decompose_reciprocal_sum(&seq, ctx.sieve()?)?;
            emit_certificate(&cert, format, out)?;
            Ok(exit_code(cert.verdict))
        }
        Command::Oracle(a) => {
            let oracle = Oracle::with_limit(a.oracle_limit);
            let needed = a.n.isqrt().max(2);
            let t = build_sieve(needed.min(cli.sieve_limit).max(2))?;
            let result = match a.objective {
                Objective::Size => oracle.max_composite_plp_size(a.n, &t)?,
                Objective::Sum => oracle.max_composite_reciprocal_sum(a.n, &t)?,
            };
            match format {
                OutputFormat::Human => {
                    let terms: Vec<String> =
                        result.witness.terms().iter().map(|t| t.to_string()).collect();
                    writeln!(out, "n = {}: best size {} with {{{}}}", result.n, result.best_size, terms.join(", "))?;
                    if let Some(s) = result.best_sum {
                        writeln!(out, "  Σ 1/a ∈ {s}")?;
                    }
                }
                _ => write_value(out, &result)?,
            }
            Ok(EXIT_OK)
        }
        Command::Series(a) => {
            let t = ctx.sieve()?;
            emit_series(a.kind, a.limit, t, out)?;
            Ok(EXIT_OK)
        }
    }
}

#[derive(Serialize)]
struct ZetaOutput {
    lo: f64,
    hi: f64,
}

fn zeta_command(
    ctx: &mut Context<'_>,
    a: &ZetaArgs,
    format: OutputFormat,
    out: &mut dyn Write,
) -> Result<i32> {
    let value = if a.riemann {
        zeta_real(a.s, a.width)?
    } else {
        let mobius = || prime_zeta_mobius(a.s, a.width);
        let direct = |ctx: &mut Context<'_>| -> Result<IntervalValue> {
            let t = ctx.sieve()?;
            prime_zeta_direct(t, a.s, a.cutoff.unwrap_or(t.limit()))
        };
        match a.method {
            ZetaMethod::Mobius => mobius()?,
            ZetaMethod::Direct => direct(ctx)?,
            ZetaMethod::Both => {
                let m = mobius()?;
                let d = direct(ctx)?;
                m.intersection(&d).ok_or_else(|| {
                    PlpError::Internal(format!("Möbius {m} and direct {d} enclosures are disjoint"))
                })?
            }
        }
    };
    match format {
        OutputFormat::Json => write_value(out, &ZetaOutput { lo: value.lo, hi: value.hi })?,
        OutputFormat::Csv => writeln!(out, "lo,hi\n{:e},{:e}", value.lo, value.hi)?,
        OutputFormat::Human => {
            let name = if a.riemann { "ζ" } else { "P" };
            writeln!(out, "{name}({}) ∈ [{:.15}, {:.15}]", a.s, value.lo, value.hi)?;
            writeln!(out, "  ≈ {:.4} (width {:.1e})", value.midpoint(), value.width())?;
        }
    }
    Ok(EXIT_OK)
}

pub fn emit_certificate(cert: &Certificate, format: OutputFormat, out: &mut dyn Write) -> Result<()> {
    match format {
        OutputFormat::Human => {
            writeln!(
                out,
                "Proposition {} ({}): {}",
                cert.kind.proposition(),
                cert.kind.name(),
                cert.verdict
            )?;
            if let Some(s) = cert.sum {
                writeln!(out, "  Σ 1/a        ∈ {s}")?;
            }
            if let Some(s) = cert.prime_sum {
                writeln!(out, "  prime part   ∈ {s}")?;
            }
            if let Some(s) = cert.composite_sum {
                writeln!(out, "  composite    ∈ {s}")?;
            }
            if let Some(b) = cert.bound {
                let label = cert.s.map_or("P(2)".to_string(), |s| format!("P({s})"));
                writeln!(out, "  {label:<12} ∈ {b}")?;
            }
            if let Some(m) = cert.margin {
                writeln!(out, "  margin       ≥ {m:.6e}")?;
            }
            if let Some(w) = &cert.witness {
                match w.omega {
                    Some(o) => writeln!(out, "  witness      a[{}] = {} (Ω = {o})", w.index, w.term)?,
                    None => writeln!(out, "  witness      a[{}] = {}", w.index, w.term)?,
                }
            }
            if let Some(th) = cert.thresholds {
                writeln!(out, "  thresholds   exact = {}, rs = {} (n = {})", th.exact, th.rs, th.n)?;
            }
            if cert.is_probabilistic() {
                writeln!(out, "  note: relies on a probable-prime test")?;
            }
            Ok(())
        }
        _ => write_value(out, cert),
    }
}

/// Writes `k,partial_sum_lo,partial_sum_hi,P2_lo,P2_hi` rows.
///
/// `prime_square_partial_sums` has one row per prime with `p² ≤ limit`
/// holding `Σ_{i≤k} 1/pᵢ²`; `direct_pzeta_partials` has one row per prime
/// `p_k ≤ limit` holding the direct enclosure of `P(2)` at cutoff `p_k`.
pub fn emit_series(kind: SeriesKind, limit: u64, t: &SieveTables, out: &mut dyn Write) -> Result<()> {
    if limit > t.limit() {
        return Err(PlpError::Domain(format!(
            "series limit {limit} exceeds sieve limit {}",
            t.limit()
        )));
    }
    let p2 = p_constant(2, t)?;
    writeln!(out, "k,partial_sum_lo,partial_sum_hi,P2_lo,P2_hi")?;
    match kind {
        SeriesKind::PrimeSquarePartialSums => {
            let count = t.prime_count_at_sqrt(limit.max(1))? as usize;
            let mut acc = crate::interval::DirectedSum::new();
            for (k, &p) in t.primes()[..count].iter().enumerate() {
                let sq = p as u64 * p as u64;
                acc.add(&IntervalValue::from_u64(sq).recip());
                let v = acc.value();
                writeln!(out, "{},{},{},{},{}", k + 1, v.lo, v.hi, p2.lo, p2.hi)?;
            }
        }
        SeriesKind::DirectPzetaPartials => {
            let count = t.prime_count(limit)? as usize;
            let mut acc = crate::interval::DirectedSum::new();
            for (k, &p) in t.primes()[..count].iter().enumerate() {
                acc.add(&IntervalValue::pow_of(p as f64, -2.0));
                let v = acc.value();
                // tail Σ_{m>p} 1/m² ≤ 1/p
                let hi = crate::interval::add_up(v.hi, crate::interval::div_up(1.0, p as f64));
                writeln!(out, "{},{},{},{},{}", k + 1, v.lo, hi, p2.lo, p2.hi)?;
            }
        }
    }
    Ok(())
}
