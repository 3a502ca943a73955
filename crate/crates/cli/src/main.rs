use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use k3cover_core::classify::Options;
use k3cover_core::lemmas::{self, LemmaConfig};
use k3cover_core::{classify_with, Case, Certificate, Classification, Error, FamilyTable, TranscendentalForm};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

const EXIT_INVALID: u8 = 1;
const EXIT_VERIFICATION: u8 = 2;

/// Decide whether a singular K3 surface doubly covers an Enriques surface.
///
/// The worker count for `scan` and `verify-lemmas` can be capped with the
/// K3COVER_THREADS environment variable.
#[derive(Parser)]
#[command(name = "k3cover", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Classify one form [[2a, c], [c, 2b]].
    Classify(ClassifyArgs),
    /// Classify every valid (a, b, c) in a box and write JSON lines.
    Scan(ScanArgs),
    /// Run the lattice lemma checks and print a pass/fail table.
    VerifyLemmas(LemmaArgs),
}

#[derive(Args)]
struct ClassifyArgs {
    #[arg(long, allow_hyphen_values = true, required_unless_present = "gram", conflicts_with = "gram")]
    a: Option<i64>,
    #[arg(long, allow_hyphen_values = true, required_unless_present = "gram")]
    b: Option<i64>,
    #[arg(long, allow_hyphen_values = true, required_unless_present = "gram")]
    c: Option<i64>,
    /// Raw Gram entries 2a,c,2b; the diagonal must be even.
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true, value_name = "2A,C,2B")]
    gram: Option<Vec<i64>>,
    /// Print one JSON object instead of a verdict line.
    #[arg(long)]
    json: bool,
    /// Replay the certificate after classification.
    #[arg(long)]
    verify: bool,
    /// Coordinate bound for searching an explicit case I embedding (0 disables it).
    #[arg(long, default_value_t = 0)]
    case_i_search: i64,
}

#[derive(Args)]
struct ScanArgs {
    #[arg(long)]
    a_max: i64,
    #[arg(long)]
    b_max: i64,
    #[arg(long, allow_hyphen_values = true)]
    c_min: i64,
    #[arg(long, allow_hyphen_values = true)]
    c_max: i64,
    /// Output JSONL file.
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args)]
struct LemmaArgs {
    #[arg(long, default_value_t = 200)]
    n_max: i64,
    #[arg(long, default_value_t = 14)]
    slice_max: i128,
    /// Replace the built-in family table with one read from a JSON file.
    #[arg(long, hide = true)]
    family_table: Option<PathBuf>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
struct Input {
    a: i64,
    b: i64,
    c: i64,
}

/// One emitted record; fields are spelled out because i128 values cannot
/// pass through serde's flattening buffer.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
struct QueryRecord {
    input: Input,
    case: Case,
    covers: bool,
    delta: i128,
    certificate: Certificate,
}

impl QueryRecord {
    fn new(t: &TranscendentalForm, k: Classification) -> Self {
        Self {
            input: Input { a: t.a(), b: t.b(), c: t.c() },
            case: k.case,
            covers: k.covers,
            delta: k.delta,
            certificate: k.certificate,
        }
    }
}

struct Failure {
    code: u8,
    message: String,
}

impl Failure {
    fn invalid(message: impl Into<String>) -> Self {
        Self { code: EXIT_INVALID, message: message.into() }
    }

    fn verification(message: impl Into<String>) -> Self {
        Self { code: EXIT_VERIFICATION, message: message.into() }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::InvalidForm { .. } | Error::Overflow(_) | Error::OutOfRange { .. } => Failure::invalid(e.to_string()),
            _ => Failure::verification(e.to_string()),
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(EXIT_INVALID) } else { ExitCode::SUCCESS };
        }
    };
    let result = configure_threads().and_then(|()| match cli.command {
        Command::Classify(args) => classify(args),
        Command::Scan(args) => scan(args),
        Command::VerifyLemmas(args) => verify_lemmas(args),
    });
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}

fn configure_threads() -> Result<(), Failure> {
    let Ok(raw) = std::env::var("K3COVER_THREADS") else { return Ok(()) };
    let n: usize = raw
        .trim()
        .parse()
        .ok()
        .filter(|&n| n > 0)
        .ok_or_else(|| Failure::invalid(format!("K3COVER_THREADS must be a positive integer, got {raw:?}")))?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(n)
        .build_global()
        .map_err(|e| Failure::verification(format!("thread pool: {e}")))
}

fn parse_form(args: &ClassifyArgs) -> Result<TranscendentalForm, Failure> {
    let t = match (&args.gram, args.a, args.b, args.c) {
        (Some(g), ..) => match g[..] {
            [two_a, c, two_b] => TranscendentalForm::from_gram(two_a, c, two_b)?,
            _ => return Err(Failure::invalid(format!("--gram takes three entries, got {}", g.len()))),
        },
        (None, Some(a), Some(b), Some(c)) => TranscendentalForm::new(a, b, c)?,
        _ => return Err(Failure::invalid("either --a/--b/--c or --gram is required")),
    };
    Ok(t)
}

fn classify(args: ClassifyArgs) -> Result<(), Failure> {
    let t = parse_form(&args)?;
    let opts = Options { case_i_search_bound: args.case_i_search };
    let k = classify_with(&t, opts)?;
    if args.verify {
        k.verify(&t).map_err(|e| Failure::verification(e.to_string()))?;
    }
    if args.json {
        let record = QueryRecord::new(&t, k);
        println!("{}", serde_json::to_string(&record).map_err(|e| Failure::verification(e.to_string()))?);
    } else {
        let verdict = if k.covers { "covers an Enriques surface" } else { "does not cover" };
        println!("case {}: {verdict}", k.case);
        println!("delta = {}, certificate: {}", k.delta, certificate_summary(&k.certificate));
        if args.verify {
            println!("certificate verified");
        }
    }
    Ok(())
}

fn certificate_summary(c: &Certificate) -> String {
    match c {
        Certificate::KeumCitation { embedding: None } => "all entries even".into(),
        Certificate::KeumCitation { embedding: Some(_) } => "all entries even, explicit embedding".into(),
        Certificate::ExplicitEmbedding(e) => format!("explicit primitive embedding, basis change {:?}", e.basis_change.entries()),
        Certificate::VinbergWitness { norm, vector, .. } => format!("vector {vector} of norm -{norm}"),
        Certificate::ExhaustiveAbsence { norm, max_slice, .. } => format!("no vector of norm -{norm} up to slice {max_slice}"),
        Certificate::ParityObstruction => "a, b, c all odd".into(),
    }
}

fn scan(args: ScanArgs) -> Result<(), Failure> {
    if args.a_max < 1 || args.b_max < 1 || args.c_min > args.c_max {
        return Err(Failure::invalid("empty range: need a_max >= 1, b_max >= 1 and c_min <= c_max"));
    }
    let file = File::create(&args.out).map_err(|e| Failure::invalid(format!("{}: {e}", args.out.display())))?;
    let mut out = BufWriter::new(file);
    let mut counts = [0usize; Case::ALL.len()];
    let write_err = |e: std::io::Error| Failure::invalid(format!("{}: {e}", args.out.display()));
    for a in 1..=args.a_max {
        let triples: Vec<(i64, i64)> =
            (1..=args.b_max).flat_map(|b| (args.c_min..=args.c_max).map(move |c| (b, c))).collect();
        let lines: Vec<Result<Option<(Case, String)>, Failure>> = triples
            .par_iter()
            .map(|&(b, c)| {
                let Ok(t) = TranscendentalForm::new(a, b, c) else { return Ok(None) };
                let k = classify_with(&t, Options::default())?;
                let case = k.case;
                let line = serde_json::to_string(&QueryRecord::new(&t, k)).map_err(|e| Failure::verification(e.to_string()))?;
                Ok(Some((case, line)))
            })
            .collect();
        for line in lines {
            let Some((case, line)) = line? else { continue };
            counts[Case::ALL.iter().position(|&k| k == case).expect("case listed")] += 1;
            writeln!(out, "{line}").map_err(write_err)?;
        }
    }
    out.flush().map_err(write_err)?;
    let total: usize = counts.iter().sum();
    let parts: Vec<String> = Case::ALL.iter().zip(counts).map(|(k, n)| format!("{k}={n}")).collect();
    eprintln!("{total} forms: {}", parts.join(" "));
    Ok(())
}

fn verify_lemmas(args: LemmaArgs) -> Result<(), Failure> {
    let mut cfg = LemmaConfig { n_max: args.n_max, slice_max: args.slice_max, ..Default::default() };
    if let Some(path) = &args.family_table {
        let text = std::fs::read_to_string(path).map_err(|e| Failure::invalid(format!("{}: {e}", path.display())))?;
        cfg.table = serde_json::from_str::<FamilyTable>(&text)
            .map_err(|e| Failure::invalid(format!("{}: {e}", path.display())))?;
    }
    let report = lemmas::run(&cfg)?;
    let width = report.checks.iter().map(|c| c.name.len()).max().unwrap_or(0);
    for c in &report.checks {
        println!("{:<width$}  {}  {}", c.name, if c.passed { "PASS" } else { "FAIL" }, c.detail);
    }
    if report.all_passed() {
        Ok(())
    } else {
        let failed = report.checks.iter().filter(|c| !c.passed).count();
        Err(Failure::verification(format!("{failed} lemma check(s) failed")))
    }
}
