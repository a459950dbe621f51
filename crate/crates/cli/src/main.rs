use std::io::Write;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use hermitian_core::classify::{census_by_classifier, census_closed};
use hermitian_core::codes::{
    check_matrix, corner_edge_code, min_distance_by_codewords, monomial_basis, phase_params,
    weight4_report, CheckMatrix, CodeSpec, Distance3Code,
};
use hermitian_core::gf::prime_power;
use hermitian_core::oracle::{brute_census, brute_count};
use hermitian_core::{classify, CensusMode, CensusTable, Error, FieldCtx, Parabola, RunOptions};

#[derive(Parser)]
#[command(
    name = "hermitian",
    version,
    about = "Hermitian curve / parabola intersections and Hermitian codes"
)]
struct Cli {
    /// Worker threads for the exhaustive routines (output does not depend on it).
    #[arg(long, global = true)]
    workers: Option<usize>,

    /// Explicit primitive modulus c0,c1,...,c2e (monic, c2e = 1) for GF(q^2).
    #[arg(long, global = true, value_name = "COEFFS")]
    field_modulus: Option<String>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Histogram of intersection counts over all parabolas.
    Census(CensusArgs),
    /// Intersection count of a single parabola.
    Classify(ClassifyArgs),
    /// Hermitian code parameters, check matrices and weight-4 counts.
    Code(CodeArgs),
    /// Print the field construction used for q.
    Field {
        #[arg(long)]
        q: u64,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Mode {
    Closed,
    Classifier,
    Brute,
}

impl Mode {
    fn census_mode(self) -> CensusMode {
        match self {
            Mode::Closed => CensusMode::Closed,
            Mode::Classifier => CensusMode::Classifier,
            Mode::Brute => CensusMode::Brute,
        }
    }
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Out {
    Json,
    Csv,
    Bin,
}

#[derive(Args)]
struct CensusArgs {
    #[arg(long)]
    q: u64,
    #[arg(long, value_enum, default_value = "closed")]
    mode: Mode,
    /// Run every available mode and fail with status 3 if they disagree.
    #[arg(long)]
    verify: bool,
    #[arg(long, value_enum, default_value = "json")]
    out: Out,
}

#[derive(Args)]
struct ClassifyArgs {
    #[arg(long)]
    q: u64,
    #[arg(long, allow_hyphen_values = true)]
    a: String,
    #[arg(long, default_value = "0")]
    b: String,
    #[arg(long, default_value = "0")]
    c: String,
    /// Also count the intersection by direct evaluation.
    #[arg(long)]
    brute: bool,
}

#[derive(Clone, Copy, ValueEnum)]
enum Action {
    Info,
    Matrix,
    Weight4,
}

#[derive(Args)]
struct CodeArgs {
    #[arg(long)]
    q: u64,
    /// Code C(m, q) from the monomial bound m.
    #[arg(long, conflicts_with_all = ["corner", "edge"])]
    m: Option<u64>,
    /// Corner code of designed distance D.
    #[arg(long, value_name = "D", conflicts_with = "edge")]
    corner: Option<u64>,
    /// Edge code of designed distance D (with --j).
    #[arg(long, value_name = "D", requires = "j")]
    edge: Option<u64>,
    #[arg(long)]
    j: Option<u64>,
    #[arg(value_enum, default_value = "info")]
    action: Action,
    /// Check the formulas against exhaustive computation; status 3 on mismatch.
    #[arg(long)]
    verify: bool,
    #[arg(long, value_enum, default_value = "json")]
    out: Out,
}

/// Why a command stopped early.
enum Failure {
    Invalid(String),
    Mismatch(String),
    Internal(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::Internal(_) => Failure::Internal(e.to_string()),
            _ => Failure::Invalid(e.to_string()),
        }
    }
}

type CmdResult = Result<Vec<u8>, Failure>;

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = run(&cli);
    match result {
        Ok(bytes) => {
            let mut stdout = std::io::stdout().lock();
            if stdout.write_all(&bytes).and_then(|_| stdout.flush()).is_err() {
                return ExitCode::from(1);
            }
            ExitCode::SUCCESS
        }
        Err(Failure::Invalid(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(Failure::Mismatch(msg)) => {
            eprintln!("mismatch: {msg}");
            ExitCode::from(3)
        }
        Err(Failure::Internal(msg)) => {
            eprintln!("internal error: {msg}");
            ExitCode::from(1)
        }
    }
}

fn run(cli: &Cli) -> CmdResult {
    let mut opts = RunOptions::from_env()?;
    if let Some(w) = cli.workers {
        if w == 0 {
            return Err(Failure::Invalid("--workers must be positive".into()));
        }
        opts.workers = w;
    }
    let modulus = cli.field_modulus.as_deref();
    match &cli.command {
        Command::Census(args) => cmd_census(args, modulus, &opts),
        Command::Classify(args) => cmd_classify(args, modulus),
        Command::Code(args) => cmd_code(args, modulus, &opts),
        Command::Field { q } => {
            let ctx = field(*q, modulus)?;
            Ok(json(&FieldReport {
                q: ctx.q(),
                size: ctx.size(),
                field: ctx.spec(),
            }))
        }
    }
}

fn field(q: u64, modulus: Option<&str>) -> Result<FieldCtx, Failure> {
    let (p, e) = prime_power(q)?;
    match modulus {
        None => Ok(FieldCtx::build(p, e)?),
        Some(s) => {
            let coeffs = s
                .split(',')
                .map(|c| c.trim().parse::<u64>())
                .collect::<Result<Vec<_>, _>>()
                .map_err(|_| Failure::Invalid(format!("bad --field-modulus {s:?}")))?;
            Ok(FieldCtx::with_modulus(p, e, &coeffs)?)
        }
    }
}

fn json<T: Serialize>(v: &T) -> Vec<u8> {
    let mut s = serde_json::to_string_pretty(v).expect("report serializes");
    s.push('\n');
    s.into_bytes()
}

#[derive(Serialize)]
struct FieldReport {
    q: u64,
    size: u64,
    field: hermitian_core::gf::FieldSpec,
}

fn census(ctx: Option<&FieldCtx>, q: u64, mode: Mode, opts: &RunOptions) -> Result<CensusTable, Failure> {
    eprintln!("census q={q} mode={}", mode.census_mode().as_str());
    let ctx = || ctx.ok_or_else(|| Failure::Internal("field not built".into()));
    Ok(match mode {
        Mode::Closed => census_closed(q),
        Mode::Classifier => census_by_classifier(ctx()?, opts)?,
        Mode::Brute => brute_census(ctx()?, opts)?,
    })
}

fn cmd_census(args: &CensusArgs, modulus: Option<&str>, opts: &RunOptions) -> CmdResult {
    let q = args.q;
    prime_power(q)?;
    let needs_field = args.verify || !matches!(args.mode, Mode::Closed);
    let ctx = if needs_field { Some(field(q, modulus)?) } else { None };
    let table = census(ctx.as_ref(), q, args.mode, opts)?;

    if args.verify {
        let modes = if q <= opts.max_q {
            vec![Mode::Closed, Mode::Classifier, Mode::Brute]
        } else {
            eprintln!("only closed mode available: q={q} exceeds bound {}", opts.max_q);
            vec![Mode::Closed]
        };
        let mut bad = Vec::new();
        for &m in &modes {
            let other = census(ctx.as_ref(), q, m, opts)?;
            let name = m.census_mode().as_str();
            if !other.same_rows(&table) {
                bad.push(format!("{name} differs"));
            }
            if let Err(e) = other.check_parabola_identities() {
                bad.push(format!("{name}: {e}"));
            }
        }
        if !bad.is_empty() {
            return Err(Failure::Mismatch(bad.join("; ")));
        }
        eprintln!("verify: {} modes agree", modes.len());
    }

    match args.out {
        Out::Json => {
            let mut s = table.to_json();
            s.push('\n');
            Ok(s.into_bytes())
        }
        Out::Csv => Ok(table.to_csv().into_bytes()),
        Out::Bin => Err(Failure::Invalid("census supports --out json|csv".into())),
    }
}

#[derive(Serialize)]
struct ClassifyReport {
    q: u64,
    parabola: Parabola,
    count: u64,
    branch: String,
    reduced: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    brute: Option<u64>,
}

fn cmd_classify(args: &ClassifyArgs, modulus: Option<&str>) -> CmdResult {
    let ctx = field(args.q, modulus)?;
    let a = ctx.parse(&args.a)?;
    let b = ctx.parse(&args.b)?;
    let c = ctx.parse(&args.c)?;
    let p = Parabola::new(a, b, c)?;
    let r = classify(&ctx, &p)?;
    let brute = if args.brute {
        Some(brute_count(&ctx, &p)?)
    } else {
        None
    };
    let report = ClassifyReport {
        q: ctx.q(),
        parabola: p,
        count: r.count,
        branch: r.branch.tag().to_string(),
        reduced: r.reduced.to_string(),
        brute,
    };
    if let Some(n) = brute {
        if n != r.count {
            eprintln!("classifier {} vs brute {n}", r.count);
            std::io::stdout().write_all(&json(&report)).ok();
            return Err(Failure::Mismatch(format!("classifier {} != brute {n}", r.count)));
        }
    }
    Ok(json(&report))
}

/// `(spec, matrix)` for the code selected by the arguments.
fn select_code(args: &CodeArgs, ctx: &FieldCtx) -> Result<(CodeSpec, CheckMatrix), Failure> {
    match (args.m, args.corner, args.edge) {
        (Some(m), None, None) => Ok((phase_params(ctx.q(), m)?, check_matrix(ctx, m)?)),
        (None, Some(d), None) => Ok(corner_edge_code(ctx, d, 0)?),
        (None, None, Some(d)) => {
            let j = args.j.unwrap_or(0);
            if j == 0 {
                return Err(Failure::Invalid("--edge needs --j >= 1".into()));
            }
            Ok(corner_edge_code(ctx, d, j)?)
        }
        _ => Err(Failure::Invalid("give exactly one of --m, --corner, --edge".into())),
    }
}

#[derive(Serialize)]
struct MatrixJson {
    q: u64,
    m: u64,
    rows: usize,
    cols: usize,
    entries: Vec<Vec<String>>,
}

fn cmd_code(args: &CodeArgs, modulus: Option<&str>, opts: &RunOptions) -> CmdResult {
    let ctx = field(args.q, modulus)?;
    if args.corner.is_none() && args.edge.is_none() && args.j.is_some() {
        return Err(Failure::Invalid("--j only applies to --edge".into()));
    }
    match args.action {
        Action::Info => {
            let (spec, h) = select_code(args, &ctx)?;
            if args.verify {
                verify_code(&ctx, &spec, &h)?;
            }
            match args.out {
                Out::Json => Ok(json(&spec)),
                Out::Csv => Ok(spec_csv(&spec).into_bytes()),
                Out::Bin => Err(Failure::Invalid("info supports --out json|csv".into())),
            }
        }
        Action::Matrix => {
            let (_, h) = select_code(args, &ctx)?;
            match args.out {
                Out::Json => Ok(json(&MatrixJson {
                    q: h.q,
                    m: h.m,
                    rows: h.rows,
                    cols: h.cols,
                    entries: h
                        .to_rows()
                        .iter()
                        .map(|r| r.iter().map(|x| x.to_string()).collect())
                        .collect(),
                })),
                Out::Csv => Ok(h.to_csv().into_bytes()),
                Out::Bin => Ok(h.to_bytes()),
            }
        }
        Action::Weight4 => {
            let code = weight4_target(args, &ctx)?;
            if args.verify {
                eprintln!("counting weight-4 words exhaustively");
            }
            let report = weight4_report(&ctx, code, args.verify, opts)?;
            let out = match args.out {
                Out::Json => json(&report),
                Out::Csv => {
                    let brute = report.a4_brute.map_or(String::new(), |n| n.to_string());
                    let code = serde_json::to_value(report.code).expect("code name");
                    format!(
                        "code,q,a4_formula,a4_brute\n{},{},{},{}\n",
                        code.as_str().unwrap_or_default(),
                        report.q,
                        report.a4_formula,
                        brute
                    )
                    .into_bytes()
                }
                Out::Bin => return Err(Failure::Invalid("weight4 supports --out json|csv".into())),
            };
            if !report.agrees() {
                std::io::stdout().write_all(&out).ok();
                return Err(Failure::Mismatch(format!(
                    "formula {} != brute {:?}",
                    report.a4_formula, report.a4_brute
                )));
            }
            Ok(out)
        }
    }
}

fn weight4_target(args: &CodeArgs, ctx: &FieldCtx) -> Result<Distance3Code, Failure> {
    let (d, j) = match (args.m, args.corner, args.edge) {
        (None, Some(d), None) => (d, 0),
        (None, None, Some(d)) => (d, args.j.unwrap_or(0)),
        (Some(m), None, None) => {
            // accept m when it names one of the three distance-3 codes
            let q = ctx.q();
            let j = [(0, q + 1), (1, 2 * q), (2, 2 * q + 1)]
                .into_iter()
                .find(|&(_, mj)| mj == m)
                .map(|(j, _)| j)
                .ok_or_else(|| {
                    Failure::Invalid(format!("weight4 needs a distance-3 code; m={m} is not one"))
                })?;
            (3, j)
        }
        _ => return Err(Failure::Invalid("give exactly one of --m, --corner, --edge".into())),
    };
    if d != 3 {
        return Err(Failure::Invalid(format!("weight4 needs designed distance 3, got {d}")));
    }
    if ctx.q() < 3 {
        return Err(Error::QTooSmall(ctx.q()).into());
    }
    Distance3Code::from_j(j).ok_or_else(|| Failure::Invalid(format!("j = {j} outside 0..=2")))
}

fn spec_csv(s: &CodeSpec) -> String {
    let opt = |v: Option<u64>| v.map_or(String::new(), |x| x.to_string());
    format!(
        "q,m,n,phase,a,b,d,k,k_from_basis,equivalent_m\n{},{},{},{},{},{},{},{},{},{}\n",
        s.q,
        s.m,
        s.n,
        s.phase,
        opt(s.a),
        opt(s.b),
        s.d,
        s.k,
        s.k_from_basis,
        opt(s.equivalent_m)
    )
}

/// Rank of the check matrix against `|B|`, the stated `k` against the basis
/// count, and `d` against full codeword enumeration when the code is small.
fn verify_code(ctx: &FieldCtx, spec: &CodeSpec, h: &CheckMatrix) -> Result<(), Failure> {
    let basis = monomial_basis(ctx.q(), h.m)?;
    let mut bad = Vec::new();
    let rank = h.rank(ctx);
    if rank != basis.len() {
        bad.push(format!("rank {rank} != |B| {}", basis.len()));
    }
    if spec.k != spec.k_from_basis {
        bad.push(format!("k {} != n - |B| {}", spec.k, spec.k_from_basis));
    }
    match min_distance_by_codewords(ctx, h) {
        Some(d) if d != spec.d => bad.push(format!("d {} != enumerated {d}", spec.d)),
        Some(_) => eprintln!("verify: d confirmed by enumeration"),
        None => eprintln!("verify: code too large to enumerate, d not checked"),
    }
    if bad.is_empty() {
        Ok(())
    } else {
        Err(Failure::Mismatch(bad.join("; ")))
    }
}
