//! Command-line front end: construct matrices and frames, verify their
//! identities, test equivalence, and emit the feasibility catalog.
//!
//! Exit codes: 0 success, 1 verification failure (or an undecided
//! equivalence), 2 argument/parse errors, 3 construction failures.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use num::complex::Complex64;
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};
use serde::Serialize;
use serde_json::json;

use cetf::construct::{self, PaleyBlocks, UnitScalar};
use cetf::frame::{self, Frame};
use cetf::scalar::probe_assignment;
use cetf::verify::{self, Verdict};
use cetf::zauner;
use cetf::{Assignment, DesignMatrix, Error, MatrixKind, Param, ScalarMode, SymExpr};

#[derive(Parser)]
#[command(name = "cetf", version, about = "Complex conference matrices, Hadamard matrices and equiangular tight frames")]
struct Cli {
    #[command(subcommand)]
    command: Command,

    /// Residual tolerance for numeric verdicts.
    #[arg(long, global = true, default_value_t = 1e-9)]
    tolerance: f64,

    /// Seed for the random unimodular assignments used to cross-check
    /// symbolic matrices numerically.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,

    /// Write the primary JSON artifact here instead of stdout.
    #[arg(long, short, global = true)]
    output: Option<PathBuf>,

    /// Assign a value to a symbolic parameter, e.g. `b=exp:0.7` or `a=0,1`.
    /// Repeatable.
    #[arg(long, global = true, value_name = "NAME=VALUE")]
    assign: Vec<String>,
}

#[derive(Subcommand)]
enum Command {
    /// Build a matrix or frame and write it as JSON.
    Construct {
        #[command(subcommand)]
        family: Family,
    },
    /// Run every applicable identity check on a matrix or frame file.
    Verify { file: PathBuf },
    /// Convert a Seidel matrix file into a frame file.
    Frame {
        file: PathBuf,
        /// Frame dimension (multiplicity of the positive Seidel eigenvalue).
        #[arg(long)]
        k: usize,
        /// Use the negated Seidel matrix: the conjugate frame with k' = n - k.
        #[arg(long)]
        conjugate: bool,
    },
    /// Decide equivalence of two Seidel/conference matrices under row
    /// scaling and simultaneous permutation.
    Equiv {
        file_a: PathBuf,
        file_b: PathBuf,
        /// Node budget for the backtracking search.
        #[arg(long, default_value_t = verify::DEFAULT_EQUIV_BUDGET)]
        budget: u64,
    },
    /// Feasibility catalog of (2k, k) frames for odd k up to a bound.
    Catalog {
        #[arg(long, default_value_t = 50)]
        max_k: u64,
    },
}

#[derive(Subcommand)]
enum Family {
    /// Real symmetric conference matrix of order q+1, q a prime power
    /// congruent to 1 mod 4.
    Paley {
        #[arg(long)]
        q: u64,
    },
    /// Two-parameter conference matrix C(a, b) of order q+1.
    Cab {
        #[arg(long)]
        q: u64,
        #[arg(long)]
        a: String,
        #[arg(long)]
        b: String,
    },
    /// One-parameter Hermitian conference matrix of order 6.
    C6 {
        #[arg(long)]
        b: String,
    },
    /// Three-parameter Hermitian conference matrix of order 10.
    C10(C10Args),
    /// Six-parameter Hermitian conference matrix of order 14.
    C14(C14Args),
    /// Hadamard matrix of order 2n from a conference matrix file of order n.
    HadamardDouble {
        #[arg(long)]
        input: PathBuf,
    },
    /// Hermitian Hadamard matrix of order n^2 from a Hadamard file of order n.
    Block {
        #[arg(long)]
        input: PathBuf,
    },
    /// Fourier matrix of order n.
    Fourier {
        #[arg(long)]
        n: usize,
    },
    /// Quaternary Hadamard matrix C(1, s*i) + s*i*I of order q+1.
    Quaternary {
        #[arg(long)]
        q: u64,
        #[arg(long, default_value = "+1", allow_hyphen_values = true)]
        sign: String,
    },
    /// Zauner's (q+1, (q+1)/2) frame from additive characters on GF(q).
    Zauner {
        #[arg(long)]
        q: u64,
        /// Emit the associated Seidel matrix instead of the frame.
        #[arg(long)]
        seidel: bool,
    },
}

#[derive(Args)]
struct C10Args {
    #[arg(long)]
    a: String,
    #[arg(long)]
    b: String,
    #[arg(long)]
    c: String,
}

#[derive(Args)]
struct C14Args {
    #[arg(long)]
    a: String,
    #[arg(long)]
    b: String,
    #[arg(long)]
    c: String,
    #[arg(long)]
    d: String,
    #[arg(long)]
    e: String,
    #[arg(long)]
    f: String,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(code) => code,
        Err(err) => {
            eprintln!("error: {err}");
            ExitCode::from(exit_code_for(&err))
        }
    }
}

fn exit_code_for(err: &Error) -> u8 {
    match err {
        Error::Json(_) | Error::Io(_) | Error::Syntax { .. } | Error::BadParamName(_)
        | Error::BadScalarArg(..) | Error::OrderMismatch(..) => 2,
        _ => 3,
    }
}

fn run(cli: &Cli) -> Result<ExitCode, Error> {
    match &cli.command {
        Command::Construct { family } => construct_cmd(cli, family),
        Command::Verify { file } => verify_cmd(cli, file),
        Command::Frame { file, k, conjugate } => frame_cmd(cli, file, *k, *conjugate),
        Command::Equiv { file_a, file_b, budget } => equiv_cmd(cli, file_a, file_b, *budget),
        Command::Catalog { max_k } => catalog_cmd(cli, *max_k),
    }
}

// ---------------------------------------------------------------------------
// Scalar argument syntax: `exp:theta` and `re,im` are float values, a bare
// letter stays symbolic, and anything else must parse to an exact Gaussian
// unit like `i` or `-1`.
// ---------------------------------------------------------------------------

fn parse_unit_scalar(text: &str) -> Result<UnitScalar, Error> {
    let bad = |why: &str| Error::BadScalarArg(text.to_string(), why.to_string());
    if let Some(theta) = text.strip_prefix("exp:") {
        let theta: f64 = theta.parse().map_err(|_| bad("angle is not a number"))?;
        return Ok(UnitScalar::Value(Complex64::from_polar(1.0, theta)));
    }
    if let Some((re, im)) = text.split_once(',') {
        let re: f64 = re.parse().map_err(|_| bad("real part is not a number"))?;
        let im: f64 = im.parse().map_err(|_| bad("imaginary part is not a number"))?;
        return Ok(UnitScalar::Value(Complex64::new(re, im)));
    }
    let mut chars = text.chars();
    if let (Some(c), None) = (chars.next(), chars.next()) {
        if ('a'..='f').contains(&c) {
            return Ok(UnitScalar::Sym(Param::from_char(c)?));
        }
    }
    let expr = SymExpr::parse(text)?;
    match expr.as_constant() {
        Some(g) => Ok(UnitScalar::Exact(g)),
        None => Err(bad("expected exp:theta, re,im, a parameter letter, or an exact unit")),
    }
}

fn parse_assignments(args: &[String]) -> Result<Assignment, Error> {
    let mut asn = Assignment::new();
    for item in args {
        let (name, value) = item
            .split_once('=')
            .ok_or_else(|| Error::BadScalarArg(item.clone(), "expected NAME=VALUE".to_string()))?;
        let mut chars = name.chars();
        let (Some(c), None) = (chars.next(), chars.next()) else {
            return Err(Error::BadParamName(name.to_string()));
        };
        let param = Param::from_char(c)?;
        match parse_unit_scalar(value)? {
            UnitScalar::Value(v) => asn.set(param, v),
            UnitScalar::Exact(g) => asn.set(param, g.to_complex()),
            UnitScalar::Sym(_) => {
                return Err(Error::BadScalarArg(
                    item.clone(),
                    "assignments need numeric values".to_string(),
                ))
            }
        };
    }
    Ok(asn)
}

// ---------------------------------------------------------------------------
// Output plumbing.
// ---------------------------------------------------------------------------

fn emit_json<T: Serialize>(cli: &Cli, value: &T) -> Result<(), Error> {
    let mut text = serde_json::to_string_pretty(value)?;
    text.push('\n');
    match &cli.output {
        Some(path) => std::fs::write(path, text)?,
        None => print!("{text}"),
    }
    Ok(())
}

fn read_matrix(path: &PathBuf) -> Result<DesignMatrix, Error> {
    let text = std::fs::read_to_string(path)?;
    Ok(serde_json::from_str(&text)?)
}

enum FileContent {
    Matrix(DesignMatrix),
    Frame(Frame),
}

fn read_matrix_or_frame(path: &PathBuf) -> Result<FileContent, Error> {
    let text = std::fs::read_to_string(path)?;
    let value: serde_json::Value = serde_json::from_str(&text)?;
    if value.get("entries").is_some() {
        Ok(FileContent::Matrix(serde_json::from_value(value)?))
    } else if value.get("vectors").is_some() {
        Ok(FileContent::Frame(serde_json::from_value(value)?))
    } else {
        Err(Error::BadScalarArg(
            path.display().to_string(),
            "file is neither a matrix (entries) nor a frame (vectors)".to_string(),
        ))
    }
}

/// Evaluate a symbolic matrix when assignments were given on the command
/// line; otherwise pass it through.
fn apply_assignments(cli: &Cli, m: DesignMatrix) -> Result<DesignMatrix, Error> {
    if cli.assign.is_empty() || m.scalar_mode() == ScalarMode::Complex {
        return Ok(m);
    }
    m.evaluate(&parse_assignments(&cli.assign)?)
}

// ---------------------------------------------------------------------------
// construct
// ---------------------------------------------------------------------------

fn construct_cmd(cli: &Cli, family: &Family) -> Result<ExitCode, Error> {
    let matrix = match family {
        Family::Paley { q } => construct::paley_matrix(*q)?,
        Family::Cab { q, a, b } => {
            construct::cab_matrix(*q, parse_unit_scalar(a)?, parse_unit_scalar(b)?)?
        }
        Family::C6 { b } => construct::c6(parse_unit_scalar(b)?)?,
        Family::C10(args) => construct::c10(
            parse_unit_scalar(&args.a)?,
            parse_unit_scalar(&args.b)?,
            parse_unit_scalar(&args.c)?,
        )?,
        Family::C14(args) => construct::c14([
            parse_unit_scalar(&args.a)?,
            parse_unit_scalar(&args.b)?,
            parse_unit_scalar(&args.c)?,
            parse_unit_scalar(&args.d)?,
            parse_unit_scalar(&args.e)?,
            parse_unit_scalar(&args.f)?,
        ])?,
        Family::HadamardDouble { input } => {
            let c = apply_assignments(cli, read_matrix(input)?)?;
            construct::hadamard_double(&c)?
        }
        Family::Block { input } => {
            let h = apply_assignments(cli, read_matrix(input)?)?;
            construct::block_square(&h)?
        }
        Family::Fourier { n } => construct::fourier(*n)?,
        Family::Quaternary { q, sign } => {
            let sign: i8 = sign
                .parse()
                .map_err(|_| Error::BadScalarArg(sign.clone(), "sign must be +1 or -1".into()))?;
            construct::quaternary(*q, sign)?
        }
        Family::Zauner { q, seidel } => {
            if *seidel {
                let (matrix, _) = zauner::zauner_seidel(*q)?;
                emit_json(cli, &matrix)?;
            } else {
                let frame = zauner::zauner_vectors(*q)?.to_frame()?;
                emit_json(cli, &frame)?;
            }
            return Ok(ExitCode::SUCCESS);
        }
    };
    emit_json(cli, &matrix)?;
    Ok(ExitCode::SUCCESS)
}

// ---------------------------------------------------------------------------
// verify
// ---------------------------------------------------------------------------

#[derive(Serialize)]
struct VerifyReport {
    file: String,
    ok: bool,
    verdicts: Vec<Verdict>,
    #[serde(skip_serializing_if = "Option::is_none")]
    order: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    kind: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    scalar_mode: Option<String>,
}

fn verify_cmd(cli: &Cli, path: &PathBuf) -> Result<ExitCode, Error> {
    let mut report = VerifyReport {
        file: path.display().to_string(),
        ok: true,
        verdicts: Vec::new(),
        order: None,
        kind: None,
        scalar_mode: None,
    };
    match read_matrix_or_frame(path)? {
        FileContent::Frame(f) => {
            report.verdicts.push(frame::verify_frame(&f));
        }
        FileContent::Matrix(m) => {
            let m = apply_assignments(cli, m)?;
            report.order = Some(m.order());
            report.kind = Some(m.kind().to_string());
            report.scalar_mode = Some(match m.scalar_mode() {
                ScalarMode::Symbolic => "symbolic".to_string(),
                ScalarMode::Complex => "complex".to_string(),
            });
            report.verdicts = matrix_verdicts(cli, &m)?;
        }
    }
    report.ok = report.verdicts.iter().all(|v| v.ok);
    let code = if report.ok { ExitCode::SUCCESS } else { ExitCode::from(1) };
    emit_json(cli, &report)?;
    Ok(code)
}

fn matrix_verdicts(cli: &Cli, m: &DesignMatrix) -> Result<Vec<Verdict>, Error> {
    let tol = cli.tolerance;
    let mut verdicts = Vec::new();
    match m.kind() {
        MatrixKind::Conference => {
            verdicts.push(verify::is_conference(m, tol));
            if let Some(blocks) = PaleyBlocks::extract(m) {
                verdicts.push(verify::check_paley_blocks(&blocks));
            }
            if is_hermitian(m, tol) {
                verdicts.push(verify::seidel_check(m, m.order() / 2, tol));
            }
        }
        MatrixKind::Hadamard => {
            verdicts.push(verify::is_hadamard(m, tol));
        }
        MatrixKind::Seidel => {
            let k = derive_seidel_dimension(m).unwrap_or(m.order() / 2);
            let mut v = verify::seidel_check(m, k, tol);
            v.identity = format!("seidel(k={k})");
            verdicts.push(v);
        }
        MatrixKind::Gram => {
            verdicts.push(gram_projection_verdict(m, tol)?);
        }
        MatrixKind::Generic => {}
    }
    if m.scalar_mode() == ScalarMode::Symbolic && m.order() <= 32 {
        if let Some(v) = numeric_bridge(cli, m) {
            verdicts.push(v);
        }
    }
    Ok(verdicts)
}

fn is_hermitian(m: &DesignMatrix, tol: f64) -> bool {
    match m.scalar_mode() {
        ScalarMode::Symbolic => {
            let s = m.as_symbolic().unwrap();
            (0..m.order())
                .all(|i| (i..m.order()).all(|j| (s.get(i, j) - &s.get(j, i).conj()).is_zero()))
        }
        ScalarMode::Complex => {
            let c = m.as_complex().unwrap();
            (0..m.order())
                .all(|i| (i..m.order()).all(|j| (c.get(i, j) - c.get(j, i).conj()).norm() <= tol))
        }
    }
}

/// Frame dimension of a Seidel matrix: the multiplicity of its positive
/// eigenvalue, computed on the numeric image.
fn derive_seidel_dimension(m: &DesignMatrix) -> Option<usize> {
    let numeric = if m.scalar_mode() == ScalarMode::Symbolic {
        m.evaluate(&probe_assignment()).ok()?
    } else {
        m.clone()
    };
    let eig = verify::eig_structure(&numeric).ok()?;
    if !eig.two_valued {
        return None;
    }
    let k = eig
        .eigenvalues
        .iter()
        .zip(&eig.multiplicities)
        .filter(|(v, _)| **v > 0.0)
        .map(|(_, mult)| *mult)
        .sum();
    Some(k)
}

fn gram_projection_verdict(m: &DesignMatrix, tol: f64) -> Result<Verdict, Error> {
    let mat = match m.scalar_mode() {
        ScalarMode::Complex => m.clone(),
        ScalarMode::Symbolic => m.evaluate(&probe_assignment())?,
    };
    let g = mat.as_complex().unwrap();
    let n = g.rows();
    let mut residual = 0.0f64;
    let mut witness = None;
    for i in 0..n {
        for j in 0..n {
            let herm = (g.get(i, j) - g.get(j, i).conj()).norm();
            if herm > residual {
                residual = herm;
                witness = Some((i + 1, j + 1));
            }
        }
    }
    let idem = g.mul_mat(g);
    for (i, j, v) in idem.entries() {
        let d = (v - g.get(i, j)).norm();
        if d > residual {
            residual = d;
            witness = Some((i + 1, j + 1));
        }
    }
    let trace = g.trace();
    let trace_dev = (trace.re - trace.re.round()).abs().max(trace.im.abs());
    residual = residual.max(trace_dev);
    let ok = residual <= tol;
    Ok(Verdict {
        ok,
        identity: format!("gram-projection(rank={})", trace.re.round() as i64),
        residual,
        witness: if ok { None } else { witness },
    })
}

/// Spot-check a symbolic matrix numerically at seeded random unimodular
/// assignments; sound exact verdicts must survive evaluation.
fn numeric_bridge(cli: &Cli, m: &DesignMatrix) -> Option<Verdict> {
    let mut rng = StdRng::seed_from_u64(cli.seed);
    let mut worst = 0.0f64;
    for _ in 0..8 {
        let mut asn = Assignment::new();
        for p in Param::all() {
            asn.set(p, Complex64::from_polar(1.0, rng.gen_range(0.0..std::f64::consts::TAU)));
        }
        let num = m.evaluate(&asn).ok()?;
        let v = match m.kind() {
            MatrixKind::Conference => verify::is_conference(&num, cli.tolerance),
            MatrixKind::Hadamard => verify::is_hadamard(&num, cli.tolerance),
            _ => return None,
        };
        if !v.ok {
            return Some(Verdict { identity: "numeric-bridge".into(), ..v });
        }
        worst = worst.max(v.residual);
    }
    Some(Verdict { ok: true, identity: "numeric-bridge".into(), residual: worst, witness: None })
}

// ---------------------------------------------------------------------------
// frame
// ---------------------------------------------------------------------------

fn frame_cmd(cli: &Cli, path: &PathBuf, k: usize, conjugate: bool) -> Result<ExitCode, Error> {
    let m = apply_assignments(cli, read_matrix(path)?)?;
    let m = DesignMatrix::complex(m.kind(), m.complex_entries()?)?;
    let q = if conjugate { frame::seidel_negate(&m)? } else { m };
    let gram = match frame::gram_from_seidel(&q, k, cli.tolerance) {
        Ok(g) => g,
        Err(Error::NotSeidel) => {
            eprintln!(
                "error: the input is not the Seidel matrix of an ({}, {k}) frame",
                q.order()
            );
            return Ok(ExitCode::from(1));
        }
        Err(e) => return Err(e),
    };
    let f = frame::frame_from_gram(&gram, k)?;
    let summary = json!({
        "n": f.n,
        "k": f.k,
        "common_angle": f.common_angle,
        "redundancy": f.redundancy().to_string(),
    });
    emit_json(cli, &f)?;
    if cli.output.is_some() {
        println!("{summary}");
    } else {
        eprintln!("{summary}");
    }
    Ok(ExitCode::SUCCESS)
}

// ---------------------------------------------------------------------------
// equiv
// ---------------------------------------------------------------------------

fn equiv_cmd(
    cli: &Cli,
    file_a: &PathBuf,
    file_b: &PathBuf,
    budget: u64,
) -> Result<ExitCode, Error> {
    let a = apply_assignments(cli, read_matrix(file_a)?)?;
    let b = apply_assignments(cli, read_matrix(file_b)?)?;
    let a = DesignMatrix::complex(a.kind(), a.complex_entries()?)?;
    let b = DesignMatrix::complex(b.kind(), b.complex_entries()?)?;
    let report = verify::permutation_equivalent(&a, &b, budget)?;
    let undecided = report.certificate == verify::Certificate::BudgetExhausted;
    emit_json(cli, &report)?;
    Ok(if undecided { ExitCode::from(1) } else { ExitCode::SUCCESS })
}

// ---------------------------------------------------------------------------
// catalog
// ---------------------------------------------------------------------------

fn catalog_cmd(cli: &Cli, max_k: u64) -> Result<ExitCode, Error> {
    let entries = cetf::catalog::catalog(max_k)?;
    emit_json(cli, &entries)?;
    Ok(ExitCode::SUCCESS)
}
