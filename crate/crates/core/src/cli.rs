//! Command-line front end. Reports go to `out`, diagnostics to `err`; the
//! return value is the process exit code:
//!
//! - 0: success (decomposed, verified, certificate issued)
//! - 1: bad input or precondition violation
//! - 2: decompose found the matrix impossible
//! - 3: decompose could not decide (search exhausted without a result)
//! - 4: verify ran and some check failed

use std::ffi::OsString;
use std::fmt::Write as _;
use std::io::{Read, Write};
use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};

use crate::canonical::{rational_form, verify_rational_form};
use crate::decomp::{decompose_with, verify_decomposition, Decomposition, Outcome};
use crate::fields::Field;
use crate::matrices::{parse_labelled_blocks, Matrix};
use crate::obstruction::{certify_impossible, ObstructionCertificate};
use crate::oracle::{census, SearchBudget, SearchMode, DEFAULT_MAX_CANDIDATES, DEFAULT_SEED};
use crate::report::{pass_fail, CheckReport};

pub const HEADER: &str = "sqz-decomp report v1";

pub const EXIT_OK: i32 = 0;
pub const EXIT_INPUT: i32 = 1;
pub const EXIT_IMPOSSIBLE: i32 = 2;
pub const EXIT_UNKNOWN: i32 = 3;
pub const EXIT_CHECK_FAILED: i32 = 4;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Kv,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum ModeArg {
    Exhaustive,
    Rank,
    Random,
}

impl From<ModeArg> for SearchMode {
    fn from(m: ModeArg) -> Self {
        match m {
            ModeArg::Exhaustive => SearchMode::Exhaustive,
            ModeArg::Rank => SearchMode::RankParameterized,
            ModeArg::Random => SearchMode::Randomized,
        }
    }
}

/// Split square matrices over GF(q) into diagonalizable plus square-zero.
#[derive(Debug, Parser)]
#[command(name = "sqz-decomp", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,

    /// Field: `p`, `p^k`, or `p^k:c0,...,ck` for an explicit modulus
    #[arg(long, global = true)]
    field: Option<String>,

    /// Matrix file (`-` for stdin)
    #[arg(long, global = true)]
    input: Option<PathBuf>,

    /// Inline matrix, rows separated by `;` (needs --field)
    #[arg(long, global = true)]
    matrix: Option<String>,

    /// Search mode for oracle searches
    #[arg(long, global = true, value_enum, default_value_t = ModeArg::Rank)]
    mode: ModeArg,

    /// Maximum number of candidates per search
    #[arg(long, global = true, default_value_t = DEFAULT_MAX_CANDIDATES)]
    budget: u64,

    #[arg(long, global = true, default_value_t = DEFAULT_SEED)]
    seed: u64,

    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    format: Format,

    /// Worker threads for scans (default: all cores)
    #[arg(long, global = true)]
    threads: Option<usize>,

    #[arg(short, long, global = true)]
    verbose: bool,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Write A = D + M with D^q = D and M^2 = 0
    Decompose,
    /// Invariant factors and the transform to rational canonical form
    Rcf,
    /// Check labelled `A =`, `D =`, `M =` blocks (e.g. a decompose report)
    Verify,
    /// Classify every matrix of the given order
    Census {
        #[arg(long)]
        order: usize,
    },
    /// Certify that no decomposition exists
    ObstructionCheck,
}

struct Fail(i32, String);

fn input_err(msg: impl ToString) -> Fail {
    Fail(EXIT_INPUT, msg.to_string())
}

/// Accumulates `key = value` (text) or `key=value` (kv) lines.
struct Report {
    format: Format,
    body: String,
}

impl Report {
    fn new(format: Format, command: &str) -> Self {
        let mut r = Report { format, body: format!("{HEADER}\n") };
        r.kv("command", command);
        r
    }

    fn kv(&mut self, key: &str, value: impl std::fmt::Display) {
        match self.format {
            Format::Text => writeln!(self.body, "{key} = {value}"),
            Format::Kv => writeln!(self.body, "{key}={value}"),
        }
        .expect("string write");
    }

    fn matrix(&mut self, label: &str, m: &Matrix) {
        match self.format {
            Format::Text => {
                writeln!(self.body, "{label} =\n{m}").expect("string write");
                self.body.pop();
            }
            Format::Kv => {
                let rows: Vec<String> = m
                    .rows()
                    .iter()
                    .map(|r| r.iter().map(|e| e.0.to_string()).collect::<Vec<_>>().join(" "))
                    .collect();
                self.kv(label, rows.join(";"));
            }
        }
    }

    fn checks(&mut self, report: &CheckReport) {
        for c in &report.checks {
            self.kv(&format!("check.{}", c.name), pass_fail(c.passed));
        }
        self.kv("checks", pass_fail(report.all_passed()));
    }

    fn certificate(&mut self, cert: &ObstructionCertificate) {
        self.kv("polynomial", &cert.polynomial);
        self.kv("order", cert.order);
        self.kv("normalization", format!("{}A+{}I", cert.normalization.0 .0, cert.normalization.1 .0));
        self.checks(&cert.checks);
        self.kv("evidence", cert.evidence);
    }
}

fn field_arg(cli: &Cli) -> Result<Option<Field>, Fail> {
    cli.field.as_deref().map(|s| s.parse::<Field>().map_err(|e| input_err(format!("--field: {e}")))).transpose()
}

fn read_input(path: &PathBuf) -> Result<String, Fail> {
    if path.as_os_str() == "-" {
        let mut s = String::new();
        std::io::stdin().read_to_string(&mut s).map_err(|e| input_err(format!("stdin: {e}")))?;
        Ok(s)
    } else {
        std::fs::read_to_string(path).map_err(|e| input_err(format!("{}: {e}", path.display())))
    }
}

fn load_matrix(cli: &Cli) -> Result<Matrix, Fail> {
    let field = field_arg(cli)?;
    let m = match (&cli.input, &cli.matrix) {
        (Some(_), Some(_)) => return Err(input_err("give either --input or --matrix, not both")),
        (None, None) => return Err(input_err("no matrix: use --input FILE or --matrix \"a b; c d\" --field F")),
        (Some(path), None) => {
            let text = read_input(path)?;
            text.parse::<Matrix>().map_err(|e| input_err(format!("{}: {e}", path.display())))?
        }
        (None, Some(inline)) => {
            let f = field.clone().ok_or_else(|| input_err("--matrix needs --field"))?;
            Matrix::parse_inline(&f, inline).map_err(|e| input_err(format!("--matrix: {e}")))?
        }
    };
    if let Some(f) = field {
        if &f != m.field() {
            return Err(input_err(format!("--field {f} does not match the matrix field {}", m.field())));
        }
    }
    Ok(m)
}

fn budget(cli: &Cli) -> Result<SearchBudget, Fail> {
    SearchBudget::new(cli.mode.into(), cli.budget, cli.seed).map_err(input_err)
}

fn decomposition_lines(r: &mut Report, a: &Matrix, dec: &Decomposition) {
    let tags: Vec<String> = dec.recipes.iter().map(|x| x.tag.to_string()).collect();
    r.kv("recipes", if tags.is_empty() { "none".to_string() } else { tags.join(", ") });
    r.matrix("A", a);
    r.matrix("D", &dec.d);
    r.matrix("M", &dec.m);
    r.kv("annihilator", &dec.annihilator);
    r.checks(&verify_decomposition(a, dec));
}

fn cmd_decompose(cli: &Cli, diag: &mut String) -> Result<(String, i32), Fail> {
    let a = load_matrix(cli)?;
    let b = budget(cli)?;
    if cli.verbose {
        let rf = rational_form(&a);
        let fs: Vec<String> = rf.factors.iter().map(|f| f.to_string()).collect();
        let _ = writeln!(diag, "invariant factors: {}", fs.join(", "));
    }
    let outcome = decompose_with(&a, &b).map_err(input_err)?;
    let mut r = Report::new(cli.format, "decompose");
    r.kv("outcome", outcome.kind());
    let code = match &outcome {
        Outcome::Decomposed(dec) => {
            decomposition_lines(&mut r, &a, dec);
            EXIT_OK
        }
        Outcome::Impossible(cert) => {
            r.certificate(cert);
            EXIT_IMPOSSIBLE
        }
        Outcome::Unknown(reason) => {
            r.kv("reason", reason);
            EXIT_UNKNOWN
        }
    };
    Ok((r.body, code))
}

fn cmd_rcf(cli: &Cli) -> Result<(String, i32), Fail> {
    let a = load_matrix(cli)?;
    let rf = rational_form(&a);
    let checks = verify_rational_form(&a, &rf);
    let mut r = Report::new(cli.format, "rcf");
    let fs: Vec<String> = rf.factors.iter().map(|f| f.to_string()).collect();
    r.kv("factors", fs.join(", "));
    r.matrix("P", &rf.transform);
    r.checks(&checks);
    Ok((r.body, if checks.all_passed() { EXIT_OK } else { EXIT_CHECK_FAILED }))
}

fn cmd_verify(cli: &Cli) -> Result<(String, i32), Fail> {
    let path = cli.input.as_ref().ok_or_else(|| input_err("verify needs --input FILE with A, D and M blocks"))?;
    let text = read_input(path)?;
    let blocks = parse_labelled_blocks(&text).map_err(|e| input_err(format!("{}: {e}", path.display())))?;
    let get = |label: &str| {
        blocks
            .iter()
            .find(|(l, _)| l == label)
            .map(|(_, m)| m.clone())
            .ok_or_else(|| input_err(format!("{}: no \"{label} =\" block", path.display())))
    };
    let (a, d, m) = (get("A")?, get("D")?, get("M")?);
    let annihilator = d.min_poly();
    let dec = Decomposition { d, m, annihilator, recipes: vec![] };
    let checks = verify_decomposition(&a, &dec);
    let mut r = Report::new(cli.format, "verify");
    r.checks(&checks);
    Ok((r.body, if checks.all_passed() { EXIT_OK } else { EXIT_CHECK_FAILED }))
}

fn cmd_census(cli: &Cli, order: usize) -> Result<(String, i32), Fail> {
    let field = field_arg(cli)?.ok_or_else(|| input_err("census needs --field"))?;
    let report = census(&field, order, &budget(cli)?).map_err(input_err)?;
    let body = match cli.format {
        Format::Text => format!("{HEADER}\ncommand = census\n{}", report.to_text()),
        Format::Kv => format!("{HEADER}\ncommand=census\n{}", report.to_kv()),
    };
    Ok((body, EXIT_OK))
}

fn cmd_obstruction_check(cli: &Cli) -> Result<(String, i32), Fail> {
    let a = load_matrix(cli)?;
    let cert = certify_impossible(&a, &budget(cli)?).map_err(input_err)?;
    let mut r = Report::new(cli.format, "obstruction-check");
    r.certificate(&cert);
    Ok((r.body, EXIT_OK))
}

fn dispatch(cli: &Cli, diag: &mut String) -> Result<(String, i32), Fail> {
    match &cli.command {
        Command::Decompose => cmd_decompose(cli, diag),
        Command::Rcf => cmd_rcf(cli),
        Command::Verify => cmd_verify(cli),
        Command::Census { order } => cmd_census(cli, *order),
        Command::ObstructionCheck => cmd_obstruction_check(cli),
    }
}

pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    let _ = write!(out, "{e}");
                    return EXIT_OK;
                }
                _ => EXIT_INPUT,
            };
            let _ = write!(err, "{e}");
            return code;
        }
    };
    let mut diag = String::new();
    let result = match cli.threads {
        Some(t) => match rayon::ThreadPoolBuilder::new().num_threads(t).build() {
            Ok(pool) => pool.install(|| dispatch(&cli, &mut diag)),
            Err(e) => Err(input_err(format!("--threads: {e}"))),
        },
        None => dispatch(&cli, &mut diag),
    };
    let _ = err.write_all(diag.as_bytes());
    match result {
        Ok((body, code)) => {
            let _ = out.write_all(body.as_bytes());
            code
        }
        Err(Fail(code, msg)) => {
            let _ = writeln!(err, "error: {msg}");
            code
        }
    }
}
