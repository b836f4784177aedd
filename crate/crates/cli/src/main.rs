//! `hyperjac`: point counts, carry matrices, Sato-Tate identity components and
//! Jacobian splittings for `y^2 = x^d + c` and `y^2 = x^d + cx`.
//!
//! Exit codes: 0 success, 1 usage or validation error, 2 a mathematical
//! consistency check failed.

mod curve;

use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;

use hyperjac::stmatrix::Violation;
use hyperjac::{
    build_matrix, count_bruteforce, count_formula, identify_st0, is_prime, lockwood_check,
    lower_genus_curve, odd_primes, right_kernel, split_full, split_full_refined, trace_sweep,
    validate_matrix, Error, PrimeField, Relation, RelationVerifier,
};

use curve::{parse_constant, CurveArgs};

#[derive(Debug, Parser)]
#[command(
    name = "hyperjac",
    version,
    about = "Jacobi-sum toolkit for trinomial hyperelliptic curves"
)]
struct Cli {
    /// Output format
    #[arg(long, value_enum, default_value = "text", global = true)]
    format: Format,
    /// Write output to this file instead of standard output
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Seed for randomized numeric checks
    #[arg(long, default_value_t = 0, global = true)]
    seed: u64,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
    Csv,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Point count from Jacobi sums, optionally checked by enumeration
    Count {
        #[command(flatten)]
        curve: CurveArgs,
        /// Single prime
        #[arg(long, conflicts_with_all = ["pmin", "pmax"])]
        p: Option<u64>,
        #[arg(long)]
        pmin: Option<u64>,
        #[arg(long)]
        pmax: Option<u64>,
        /// Also count by enumerating F_p^2
        #[arg(long)]
        oracle: bool,
    },
    /// Carry matrix of Jacobi-sum valuations at p
    Matrix {
        #[command(flatten)]
        curve: CurveArgs,
        #[arg(long)]
        p: u64,
    },
    /// Saturated integer kernel of the carry matrix, each vector checked exactly
    Kernel {
        #[command(flatten)]
        curve: CurveArgs,
        #[arg(long)]
        p: u64,
    },
    /// Identity component of the Sato-Tate group
    St0 {
        #[command(flatten)]
        curve: CurveArgs,
        /// Number of generic primes to compare
        #[arg(long, default_value_t = 3)]
        primes: usize,
    },
    /// Isogeny factorization of Jac(y^2 = x^(2g+2) + c)
    Split {
        #[arg(long)]
        g: u32,
        /// Split odd-genus linear-twist factors further
        #[arg(long)]
        refine: bool,
        /// Constant used in the refined lower-genus curves
        #[arg(long, default_value = "1", allow_hyphen_values = true)]
        c: String,
    },
    /// Traces of Frobenius over a range of primes
    Sweep {
        #[command(flatten)]
        curve: CurveArgs,
        #[arg(long, default_value_t = 3)]
        pmin: u64,
        #[arg(long)]
        pmax: u64,
    },
    /// Numerical check of the binomial identity behind the lower-genus curves
    Lockwood {
        /// Odd genus g >= 3 of y^2 = x^(2g+1) + cx
        #[arg(long)]
        g: u32,
        #[arg(long, default_value_t = 1)]
        i: u32,
        #[arg(long, default_value = "1", allow_hyphen_values = true)]
        c: String,
        #[arg(long, default_value_t = 20)]
        trials: usize,
        #[arg(long, default_value_t = 1e-9)]
        tol: f64,
    },
}

/// A failed consistency check; maps to exit code 2.
#[derive(Debug)]
struct Inconsistent(String);

impl std::fmt::Display for Inconsistent {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for Inconsistent {}

fn exit_code(err: &anyhow::Error) -> u8 {
    if err.downcast_ref::<Inconsistent>().is_some() {
        return 2;
    }
    match err.downcast_ref::<Error>() {
        Some(
            Error::NonIntegerResult { .. }
            | Error::InconsistentAcrossPrimes(_)
            | Error::RelationVerificationFailed { .. }
            | Error::InvalidMatrix { .. },
        ) => 2,
        _ => 1,
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(exit_code(&e))
        }
    }
}

fn output(cli: &Cli) -> Result<Box<dyn Write>> {
    Ok(match &cli.out {
        Some(path) => Box::new(BufWriter::new(
            File::create(path).with_context(|| format!("cannot create {}", path.display()))?,
        )),
        None => Box::new(io::stdout().lock()),
    })
}

fn write_json<T: Serialize>(out: &mut dyn Write, value: &T) -> Result<()> {
    serde_json::to_writer_pretty(&mut *out, value)?;
    writeln!(out)?;
    Ok(())
}

fn run(cli: &Cli) -> Result<()> {
    let mut out = output(cli)?;
    match &cli.command {
        Command::Count {
            curve,
            p,
            pmin,
            pmax,
            oracle,
        } => cmd_count(cli, &mut *out, curve, *p, *pmin, *pmax, *oracle)?,
        Command::Matrix { curve, p } => cmd_matrix(cli, &mut *out, curve, *p)?,
        Command::Kernel { curve, p } => cmd_kernel(cli, &mut *out, curve, *p)?,
        Command::St0 { curve, primes } => {
            let spec = curve.spec()?;
            let id = identify_st0(&spec, *primes)?;
            match cli.format {
                Format::Json => write_json(&mut *out, &id)?,
                _ => {
                    writeln!(out, "{}", id.name)?;
                    writeln!(out, "curve: {spec}")?;
                    writeln!(out, "dimension: {}", id.dimension)?;
                    writeln!(out, "primes: {:?}", id.primes_used)?;
                    for r in &id.per_prime {
                        writeln!(
                            out,
                            "  p={}: kernel rank {}, {} exact and {} finite-order relations",
                            r.p, r.kernel_rank, r.exact_relations, r.torsion_relations
                        )?;
                    }
                }
            }
        }
        Command::Split { g, refine, c } => {
            let split = if *refine {
                split_full_refined(*g, parse_constant(c)?)?
            } else {
                split_full(*g)?
            };
            match cli.format {
                Format::Json => write_json(&mut *out, &split)?,
                _ => writeln!(out, "{split}")?,
            }
        }
        Command::Sweep { curve, pmin, pmax } => cmd_sweep(cli, &mut *out, curve, *pmin, *pmax)?,
        Command::Lockwood {
            g,
            i,
            c,
            trials,
            tol,
        } => {
            let c = parse_constant(c)?;
            let curve = lower_genus_curve(*g, *i, c)?;
            let ok = lockwood_check(*g, *i, c, *trials, *tol, cli.seed)?;
            #[derive(Serialize)]
            struct Report<'a> {
                curve: &'a hyperjac::LowerGenusCurve,
                table: String,
                trials: usize,
                tolerance: f64,
                seed: u64,
                holds: bool,
            }
            match cli.format {
                Format::Json => write_json(
                    &mut *out,
                    &Report {
                        curve: &curve,
                        table: curve.table_notation(),
                        trials: *trials,
                        tolerance: *tol,
                        seed: cli.seed,
                        holds: ok,
                    },
                )?,
                _ => {
                    writeln!(out, "C_{}: {curve}", i)?;
                    writeln!(out, "identity holds at {trials} points: {ok}")?;
                }
            }
            out.flush()?;
            if !ok {
                return Err(Inconsistent(format!("identity fails for g={g} i={i}")).into());
            }
        }
    }
    out.flush()?;
    Ok(())
}

#[derive(Serialize)]
struct CountRow {
    p: u64,
    formula: i64,
    #[serde(skip_serializing_if = "Option::is_none")]
    oracle: Option<i64>,
}

fn cmd_count(
    cli: &Cli,
    out: &mut dyn Write,
    curve: &CurveArgs,
    p: Option<u64>,
    pmin: Option<u64>,
    pmax: Option<u64>,
    oracle: bool,
) -> Result<()> {
    let spec = curve.spec()?;
    let primes: Vec<u64> = match (p, pmin, pmax) {
        (Some(p), _, _) => {
            if !is_prime(p) || p == 2 {
                bail!("p must be an odd prime, got {p}");
            }
            if !spec.has_good_reduction(p) {
                return Err(Error::BadReduction {
                    p,
                    curve: spec.to_string(),
                }
                .into());
            }
            vec![p]
        }
        (None, lo, Some(hi)) => odd_primes(lo.unwrap_or(3), hi)
            .filter(|&p| spec.has_good_reduction(p))
            .collect(),
        _ => bail!("give --p or --pmax"),
    };
    let mut rows = Vec::with_capacity(primes.len());
    for p in primes {
        let field = PrimeField::new(p)?;
        rows.push(CountRow {
            p,
            formula: count_formula(&field, &spec)?,
            oracle: oracle.then(|| count_bruteforce(&field, &spec)),
        });
    }
    match cli.format {
        Format::Json => write_json(out, &rows)?,
        Format::Csv => {
            let mut w = csv::Writer::from_writer(&mut *out);
            for r in &rows {
                w.serialize(r)?;
            }
            w.flush()?;
        }
        Format::Text => {
            writeln!(out, "{spec}")?;
            for r in &rows {
                match r.oracle {
                    Some(o) => writeln!(
                        out,
                        "p={} formula={} oracle={} {}",
                        r.p,
                        r.formula,
                        o,
                        if o == r.formula { "agree" } else { "MISMATCH" }
                    )?,
                    None => writeln!(out, "p={} count={}", r.p, r.formula)?,
                }
            }
        }
    }
    let bad: Vec<u64> = rows
        .iter()
        .filter(|r| r.oracle.is_some_and(|o| o != r.formula))
        .map(|r| r.p)
        .collect();
    if !bad.is_empty() {
        out.flush()?;
        return Err(
            Inconsistent(format!("formula and enumeration disagree at p in {bad:?}")).into(),
        );
    }
    Ok(())
}

fn check_matrix(m: &hyperjac::CarryMatrix) -> Result<()> {
    if !m.is_generic {
        eprintln!(
            "warning: p={} is not generic for d={}; only {} of the characters contribute",
            m.p,
            m.d,
            m.ncols()
        );
    }
    let violations: Vec<Violation> = validate_matrix(m);
    for v in &violations {
        eprintln!("validation: {v:?}");
    }
    if !violations.is_empty() {
        return Err(Error::InvalidMatrix {
            p: m.p,
            count: violations.len(),
        }
        .into());
    }
    Ok(())
}

fn cmd_matrix(cli: &Cli, out: &mut dyn Write, curve: &CurveArgs, p: u64) -> Result<()> {
    let spec = curve.spec()?;
    let m = build_matrix(p, spec.d, spec.family)?;
    match cli.format {
        Format::Json => write_json(out, &m)?,
        Format::Csv => {
            let mut w = csv::Writer::from_writer(&mut *out);
            let mut header = vec!["k".to_string()];
            header.extend(m.col_labels.iter().map(|l| l.to_string()));
            w.write_record(&header)?;
            for (k, row) in m.rows.iter().zip(&m.entries) {
                let mut rec = vec![k.to_string()];
                rec.extend(row.iter().map(|x| x.to_string()));
                w.write_record(&rec)?;
            }
            w.flush()?;
        }
        Format::Text => {
            writeln!(
                out,
                "{spec} at p={p}, columns labelled by index, rows by embedding k"
            )?;
            write!(out, "{m}")?;
        }
    }
    out.flush()?;
    check_matrix(&m)
}

#[derive(Serialize)]
struct KernelRow {
    vector: Vec<i64>,
    relation: Relation,
}

#[derive(Serialize)]
struct KernelReport {
    p: u64,
    rank: usize,
    saturated: bool,
    relations: Vec<KernelRow>,
}

fn cmd_kernel(cli: &Cli, out: &mut dyn Write, curve: &CurveArgs, p: u64) -> Result<()> {
    let spec = curve.spec()?;
    if !spec.has_good_reduction(p) {
        return Err(Error::BadReduction {
            p,
            curve: spec.to_string(),
        }
        .into());
    }
    let m = build_matrix(p, spec.d, spec.family)?;
    check_matrix(&m)?;
    let field = PrimeField::new(p)?;
    let kernel = right_kernel(&m)?;
    let verifier = RelationVerifier::new(&field, &m, spec.c)?;
    let relations = kernel
        .basis
        .iter()
        .map(|v| {
            Ok(KernelRow {
                vector: v.clone(),
                relation: verifier.check(v)?,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let report = KernelReport {
        p,
        rank: kernel.rank,
        saturated: kernel.saturated,
        relations,
    };
    match cli.format {
        Format::Json => write_json(out, &report)?,
        Format::Csv => {
            let mut w = csv::Writer::from_writer(&mut *out);
            let mut header: Vec<String> = m.col_labels.iter().map(|l| format!("m{l}")).collect();
            header.push("relation".into());
            w.write_record(&header)?;
            for r in &report.relations {
                let mut rec: Vec<String> = r.vector.iter().map(|x| x.to_string()).collect();
                rec.push(r.relation.to_string());
                w.write_record(&rec)?;
            }
            w.flush()?;
        }
        Format::Text => {
            writeln!(
                out,
                "{spec} at p={p}: kernel rank {}, saturated {}",
                report.rank, report.saturated
            )?;
            writeln!(out, "columns: {:?}", m.col_labels)?;
            for r in &report.relations {
                writeln!(out, "{:?}  {}", r.vector, r.relation)?;
            }
        }
    }
    out.flush()?;
    if let Some(i) = report
        .relations
        .iter()
        .position(|r| r.relation == Relation::Fail)
    {
        return Err(Error::RelationVerificationFailed { p, index: i }.into());
    }
    Ok(())
}

/// Plain decimal with `digits` significant digits.
fn significant(x: f64, digits: i32) -> String {
    if x == 0.0 || !x.is_finite() {
        return format!("{x}");
    }
    let before = x.abs().log10().floor() as i32 + 1;
    let decimals = (digits - before).max(0) as usize;
    format!("{x:.decimals$}")
}

#[derive(Serialize)]
struct CsvSample {
    p: u64,
    count: i64,
    t_p: i64,
    x_p: String,
}

fn cmd_sweep(
    cli: &Cli,
    out: &mut dyn Write,
    curve: &CurveArgs,
    pmin: u64,
    pmax: u64,
) -> Result<()> {
    let spec = curve.spec()?;
    if pmin < 3 || pmax < pmin {
        bail!("need 3 <= pmin <= pmax, got {pmin}..{pmax}");
    }
    let sweep = trace_sweep(&spec, pmin, pmax)?;
    let g = spec.genus();
    if let Some(s) = sweep.samples.iter().find(|s| !s.within_weil_bound(g)) {
        return Err(Inconsistent(format!("Weil bound violated at p={}", s.p)).into());
    }
    if cli.format == Format::Json {
        return write_json(out, &sweep);
    }
    let mut w = csv::Writer::from_writer(&mut *out);
    for s in &sweep.samples {
        w.serialize(CsvSample {
            p: s.p,
            count: s.count,
            t_p: s.t_p,
            x_p: significant(s.x_p, 12),
        })?;
    }
    w.flush()?;
    drop(w);
    let m = &sweep.summary;
    eprintln!(
        "{spec}: {} primes, mean {:.6}, moments 2/4/6: {:.6} {:.6} {:.6}",
        m.samples, m.mean, m.moment2, m.moment4, m.moment6
    );
    let classes: Vec<String> = m
        .per_class
        .iter()
        .map(|(r, n)| format!("{r} mod {}: {n}", m.modulus))
        .collect();
    eprintln!("primes by class: {}", classes.join(", "));
    Ok(())
}
