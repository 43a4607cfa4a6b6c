mod catalog;
mod render;

use std::fs;
use std::io::{self, Read, Write};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use filiform::algebra::{AlgebraRecord, FirstClassParams};
use filiform::oracle::orbit_samples;
use filiform::scalar::{seeded_rng, SampleConfig, Scalar};
use filiform::strata::{
    canonicalize, classify_stratum, decide_isomorphic, invariant_vector, realize_from_invariants,
    Deferral, NoReason, StrataError, Stratum, Verdict,
};
use filiform::verify::{run_all, VerifyConfig};

use render::{record_text, unsupported_json};

pub const EXIT_OK: u8 = 0;
pub const EXIT_NO: u8 = 1;
pub const EXIT_UNSUPPORTED: u8 = 2;
pub const EXIT_USAGE: u8 = 64;
pub const EXIT_DATA: u8 = 65;
pub const EXIT_NOINPUT: u8 = 66;

#[derive(Debug, Parser)]
#[command(name = "filiform", version, about = "Exact classification of first-class filiform Leibniz algebras")]
struct Cli {
    /// Seed for every randomized command.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Samples per dimension for `verify`; default count for `orbit`.
    #[arg(long, global = true, default_value_t = 20)]
    trials: usize,
    /// Largest n exercised by `verify`.
    #[arg(long, global = true, default_value_t = 8)]
    nmax: usize,
    /// Output format; `table` defaults to text, everything else to json.
    #[arg(long, global = true, value_enum)]
    format: Option<Format>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Text,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Print the nonzero structure constants as `i j k value`.
    Table {
        /// Algebra record (`-` for stdin).
        input: String,
    },
    /// Decide whether two algebras are isomorphic (exit 0 yes, 1 no, 2 unsupported).
    Iso { a: String, b: String },
    /// Report the stratum of an algebra.
    Classify { input: String },
    /// Print the invariant vector.
    Invariants { input: String },
    /// Print the canonical form.
    Canon { input: String },
    /// Build an algebra with the given invariants.
    Solve {
        #[arg(long)]
        n: usize,
        /// U, U1pp or U2pp.
        #[arg(long)]
        stratum: String,
        /// Invariant values in index order.
        #[arg(allow_hyphen_values = true)]
        targets: Vec<String>,
    },
    /// Sample the orbit of an algebra as JSONL records.
    Orbit {
        input: String,
        /// Number of samples (defaults to --trials).
        #[arg(long)]
        count: Option<usize>,
        /// Emit `{"g": …, "algebra": …}` instead of bare records.
        #[arg(long)]
        with_elements: bool,
    },
    /// Run the randomized cross-check battery (exit 1 on any failure).
    Verify {
        /// Largest n for the tensor-level oracle.
        #[arg(long, default_value_t = 8)]
        oracle_nmax: usize,
    },
    /// Deduplicate a JSONL stream of records by canonical key.
    Catalog {
        /// JSONL input (`-` for stdin).
        #[arg(default_value = "-")]
        input: String,
        /// JSONL output (`-` for stdout).
        #[arg(long, short, default_value = "-")]
        output: String,
    },
}

#[derive(Debug)]
pub enum Failure {
    Usage(String),
    Data(String),
    NoInput(String),
    Io(io::Error),
}

impl Failure {
    fn code(&self) -> u8 {
        match self {
            Failure::Usage(_) => EXIT_USAGE,
            Failure::Data(_) => EXIT_DATA,
            Failure::NoInput(_) => EXIT_NOINPUT,
            Failure::Io(_) => EXIT_NOINPUT,
        }
    }
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Self {
        Failure::Io(e)
    }
}

fn data<E: std::fmt::Display>(e: E) -> Failure {
    Failure::Data(e.to_string())
}

pub fn read_input(path: &str) -> Result<String, Failure> {
    if path == "-" {
        let mut s = String::new();
        io::stdin().read_to_string(&mut s)?;
        Ok(s)
    } else {
        fs::read_to_string(path).map_err(|e| Failure::NoInput(format!("{path}: {e}")))
    }
}

fn read_record(path: &str) -> Result<AlgebraRecord, Failure> {
    AlgebraRecord::from_json(read_input(path)?.trim()).map_err(|e| Failure::Data(format!("{path}: {e}")))
}

/// First-class parameters, or an "unsupported" outcome for second-class input.
fn first_class(record: AlgebraRecord) -> Result<FirstClassParams, Value> {
    match record {
        AlgebraRecord::First(p) => Ok(p),
        AlgebraRecord::Second(p) => Err(unsupported_json("second", p.n(), Deferral::SecondClass)),
    }
}

struct Output {
    format: Format,
    out: io::StdoutLock<'static>,
}

impl Output {
    fn emit(&mut self, value: &Value, text: impl FnOnce() -> String) -> Result<(), Failure> {
        match self.format {
            Format::Json => writeln!(self.out, "{value}")?,
            Format::Text => writeln!(self.out, "{}", text())?,
        }
        Ok(())
    }

    fn line(&mut self, line: &str) -> Result<(), Failure> {
        writeln!(self.out, "{line}")?;
        Ok(())
    }
}

fn unsupported(out: &mut Output, value: Value) -> Result<u8, Failure> {
    out.emit(&value, || render::unsupported_text(&value))?;
    Ok(EXIT_UNSUPPORTED)
}

fn strata_failure(out: &mut Output, e: StrataError) -> Result<u8, Failure> {
    match e {
        StrataError::Unsupported { region, n, deferral } => unsupported(out, unsupported_json(region, n, deferral)),
        other => Err(data(other)),
    }
}

fn cmd_table(out: &mut Output, input: &str) -> Result<u8, Failure> {
    let record = read_record(input)?;
    let tensor = record.tensor();
    let entries = tensor.nonzero_entries();
    match out.format {
        Format::Text => {
            for (i, j, k, v) in entries {
                out.line(&format!("{i} {j} {k} {v}"))?;
            }
        }
        Format::Json => {
            let list: Vec<Value> = entries
                .into_iter()
                .map(|(i, j, k, v)| json!([i, j, k, v.to_string()]))
                .collect();
            out.line(&json!({ "dim": tensor.dim(), "entries": list }).to_string())?;
        }
    }
    Ok(EXIT_OK)
}

fn cmd_classify(out: &mut Output, input: &str) -> Result<u8, Failure> {
    let p = match first_class(read_record(input)?) {
        Ok(p) => p,
        Err(v) => return unsupported(out, v),
    };
    match classify_stratum(&p) {
        Ok(s) => {
            out.emit(&json!({ "stratum": s.tag() }), || s.tag().to_string())?;
            Ok(EXIT_OK)
        }
        Err(e) => strata_failure(out, e),
    }
}

fn cmd_invariants(out: &mut Output, input: &str) -> Result<u8, Failure> {
    let p = match first_class(read_record(input)?) {
        Ok(p) => p,
        Err(v) => return unsupported(out, v),
    };
    match invariant_vector(&p) {
        Ok(v) => {
            let value = serde_json::to_value(&v).expect("invariants serialize");
            out.emit(&value, || render::invariants_text(&v))?;
            Ok(EXIT_OK)
        }
        Err(e) => strata_failure(out, e),
    }
}

fn cmd_canon(out: &mut Output, input: &str) -> Result<u8, Failure> {
    let p = match first_class(read_record(input)?) {
        Ok(p) => p,
        Err(v) => return unsupported(out, v),
    };
    match canonicalize(&p) {
        Ok(c) => {
            let record = AlgebraRecord::First(c);
            out.emit(&serde_json::to_value(&record).expect("record"), || record_text(&record))?;
            Ok(EXIT_OK)
        }
        Err(e) => strata_failure(out, e),
    }
}

fn cmd_solve(out: &mut Output, n: usize, stratum: &str, targets: &[String]) -> Result<u8, Failure> {
    let s = Stratum::from_tag(stratum).ok_or_else(|| Failure::Usage(format!("unknown stratum `{stratum}`")))?;
    let targets: Vec<Scalar> = targets
        .iter()
        .map(|t| t.parse::<Scalar>().map_err(data))
        .collect::<Result<_, _>>()?;
    match realize_from_invariants(n, &targets, s) {
        Ok(p) => {
            let record = AlgebraRecord::First(p);
            out.emit(&serde_json::to_value(&record).expect("record"), || record_text(&record))?;
            Ok(EXIT_OK)
        }
        Err(e) => strata_failure(out, e),
    }
}

fn cmd_iso(out: &mut Output, a: &str, b: &str) -> Result<u8, Failure> {
    let ra = read_record(a)?;
    let rb = read_record(b)?;
    if ra.n() != rb.n() {
        return Err(Failure::Data(format!("dimension mismatch: n = {} vs n = {}", ra.n(), rb.n())));
    }
    let (p1, p2) = match (ra, rb) {
        (AlgebraRecord::First(p1), AlgebraRecord::First(p2)) => (p1, p2),
        (AlgebraRecord::Second(p), AlgebraRecord::Second(_)) => {
            let mut v = unsupported_json("second", p.n(), Deferral::SecondClass);
            v["verdict"] = json!("unsupported");
            return unsupported(out, v);
        }
        _ => {
            let v = json!({ "verdict": "no", "reason": "different_class" });
            out.emit(&v, || "no: first-class and second-class algebras are never isomorphic".into())?;
            return Ok(EXIT_NO);
        }
    };
    let verdict = decide_isomorphic(&p1, &p2).map_err(data)?;
    let (value, code) = match &verdict {
        Verdict::Yes { witness } => (
            json!({ "verdict": "yes", "witness": witness }),
            EXIT_OK,
        ),
        Verdict::No(NoReason::InvariantMismatch { index, left, right }) => (
            json!({
                "verdict": "no",
                "reason": "invariant_mismatch",
                "index": index,
                "left": left.to_string(),
                "right": right.to_string(),
            }),
            EXIT_NO,
        ),
        Verdict::No(NoReason::DifferentStrata { left, right }) => (
            json!({
                "verdict": "no",
                "reason": "different_strata",
                "left": left.tag(),
                "right": right.tag(),
            }),
            EXIT_NO,
        ),
        Verdict::Unsupported { region, deferral } => {
            let mut v = unsupported_json(region, p1.n(), *deferral);
            v["verdict"] = json!("unsupported");
            (v, EXIT_UNSUPPORTED)
        }
    };
    out.emit(&value, || render::verdict_text(&verdict))?;
    Ok(code)
}

fn cmd_orbit(out: &mut Output, cli: &Cli, input: &str, count: Option<usize>, with_elements: bool) -> Result<u8, Failure> {
    let p = match first_class(read_record(input)?) {
        Ok(p) => p,
        Err(v) => return unsupported(out, v),
    };
    let mut rng = seeded_rng(cli.seed);
    let samples = orbit_samples(&p, count.unwrap_or(cli.trials), &mut rng, &SampleConfig::default());
    for (g, image) in samples {
        let record = AlgebraRecord::First(image);
        let line = if with_elements {
            json!({ "g": g, "algebra": record }).to_string()
        } else {
            record.to_json()
        };
        match out.format {
            Format::Json => out.line(&line)?,
            Format::Text => out.line(&format!("A={} B={} -> {}", g.a(), g.b(), record_text(&record)))?,
        }
    }
    Ok(EXIT_OK)
}

fn cmd_verify(out: &mut Output, cli: &Cli, oracle_nmax: usize) -> Result<u8, Failure> {
    if cli.nmax < 4 {
        return Err(Failure::Usage("--nmax must be at least 4".into()));
    }
    let report = run_all(&VerifyConfig {
        seed: cli.seed,
        trials: cli.trials,
        nmax: cli.nmax,
        oracle_nmax,
        sample: SampleConfig::default(),
    });
    let mut value = serde_json::to_value(&report).expect("report serializes");
    value["passed"] = json!(report.passed());
    out.emit(&value, || render::report_text(&report))?;
    Ok(if report.passed() { EXIT_OK } else { EXIT_NO })
}

fn run(cli: &Cli) -> Result<u8, Failure> {
    let default_format = match cli.command {
        Command::Table { .. } => Format::Text,
        _ => Format::Json,
    };
    let mut out = Output {
        format: cli.format.unwrap_or(default_format),
        out: io::stdout().lock(),
    };
    let code = match &cli.command {
        Command::Table { input } => cmd_table(&mut out, input)?,
        Command::Iso { a, b } => cmd_iso(&mut out, a, b)?,
        Command::Classify { input } => cmd_classify(&mut out, input)?,
        Command::Invariants { input } => cmd_invariants(&mut out, input)?,
        Command::Canon { input } => cmd_canon(&mut out, input)?,
        Command::Solve { n, stratum, targets } => cmd_solve(&mut out, *n, stratum, targets)?,
        Command::Orbit {
            input,
            count,
            with_elements,
        } => cmd_orbit(&mut out, cli, input, *count, *with_elements)?,
        Command::Verify { oracle_nmax } => cmd_verify(&mut out, cli, *oracle_nmax)?,
        Command::Catalog { input, output } => catalog::cmd_catalog(input, output)?,
    };
    out.out.flush()?;
    Ok(code)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(&cli) {
        Ok(code) => ExitCode::from(code),
        Err(f) => {
            let msg = match &f {
                Failure::Usage(m) => format!("usage error: {m}"),
                Failure::Data(m) => format!("data error: {m}"),
                Failure::NoInput(m) => format!("cannot read input: {m}"),
                Failure::Io(e) => format!("i/o error: {e}"),
            };
            eprintln!("filiform: {msg}");
            ExitCode::from(f.code())
        }
    }
}
