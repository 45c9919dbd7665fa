//! `grs`: field, polynomial, code, distance, deep-hole, and census operations
//! with stable machine-readable output.
//!
//! Exit codes: 0 success, 1 domain/precondition errors, 2 budget errors,
//! 3 internal engine mismatch (always a bug), 64 usage errors.

mod selftest;

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::sync::Arc;

use clap::{Args, Parser, Subcommand};
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use grs_core::census::{self, CensusAccumulator, CensusMode};
use grs_core::code::{EvaluationSet, GrsCode, Word};
use grs_core::deephole::{construct_deep_hole, verify_deep_hole, witness_polynomial, DeepHoleSpec};
use grs_core::distance::{error_distance, Budget, DistanceCertificate, Engine};
use grs_core::gf::{Element, FiniteField};
use grs_core::poly::Polynomial;
use grs_core::{Error, Result};

#[derive(Parser)]
#[command(name = "grs", version, about = "Exact toolkit for generalized Reed-Solomon codes: distances, deep holes, censuses")]
struct Cli {
    /// Cap the worker thread count (default: all cores; results never depend on it)
    #[arg(long, global = true)]
    threads: Option<usize>,

    /// Write the result to a file instead of stdout
    #[arg(long, global = true)]
    out: Option<PathBuf>,

    /// Print the bare primary value instead of JSON
    #[arg(long, global = true)]
    plain: bool,

    #[command(subcommand)]
    command: Command,
}

/// Field spec (`p`, `p^m`, or `p^m/modulus-index`), punctures, and dimension.
#[derive(Args)]
struct CodeArgs {
    /// Field spec, e.g. 5 or 2^2/7
    #[arg(long)]
    field: String,

    /// Punctured elements a_1,..,a_l as comma-separated indices
    #[arg(long)]
    exclude: Option<String>,

    /// Code dimension k
    #[arg(long)]
    k: usize,
}

#[derive(Subcommand)]
enum Command {
    /// Show the parameters of a finite field
    FieldInfo {
        /// Field spec, e.g. 5 or 2^2/7
        #[arg(long)]
        field: String,
    },

    /// Interpolate a word on the evaluation set
    Interp {
        /// Field spec, e.g. 5 or 2^2/7
        #[arg(long)]
        field: String,

        /// Punctured elements as comma-separated indices
        #[arg(long)]
        exclude: Option<String>,

        /// Word entries, one per evaluation point
        #[arg(long)]
        word: String,
    },

    /// Evaluate a message polynomial on the evaluation set
    Encode {
        #[command(flatten)]
        code: CodeArgs,

        /// Message coefficients, low to high
        #[arg(long)]
        message: String,
    },

    /// Exact error distance with a checkable certificate
    Distance {
        #[command(flatten)]
        code: CodeArgs,

        /// Word entries, one per evaluation point
        #[arg(long)]
        word: String,

        /// exhaustive | subsets | cross | auto
        #[arg(long, default_value = "cross")]
        engine: String,

        /// Search-space cap for either engine
        #[arg(long)]
        budget: Option<u64>,
    },

    /// Construct, verify, and witness deep holes
    #[command(subcommand)]
    Deephole(DeepholeCommand),

    /// Classify the whole word space by orbits or word by word
    Census {
        #[command(flatten)]
        code: CodeArgs,

        /// orbits | full
        #[arg(long, default_value = "orbits")]
        mode: String,

        /// Stream one CSV row per record to this file
        #[arg(long)]
        csv: Option<PathBuf>,

        /// Persist progress here and resume from it when present
        #[arg(long)]
        checkpoint: Option<PathBuf>,

        /// Cap on records and on the per-word search spaces
        #[arg(long)]
        budget: Option<u64>,
    },

    /// Run the built-in invariant suite over small fields
    Selftest {
        /// Seed for the randomized checks
        #[arg(long, default_value_t = 1)]
        seed: u64,
    },
}

#[derive(Subcommand)]
enum DeepholeCommand {
    /// Evaluate lambda (x - a_j)^(q-2) + r(x) on the evaluation set
    Construct {
        #[command(flatten)]
        code: CodeArgs,

        /// 1-based index into the puncture list
        #[arg(long)]
        j: usize,

        /// Nonzero scale factor (element index)
        #[arg(long)]
        lambda: u64,

        /// Shift polynomial of degree < k, coefficients low to high
        #[arg(long, default_value = "0")]
        r: String,
    },

    /// Cross-check whether a word attains the covering radius
    Verify {
        #[command(flatten)]
        code: CodeArgs,

        /// Word entries, one per evaluation point
        #[arg(long)]
        word: String,

        /// Search-space cap for the distance engines
        #[arg(long)]
        budget: Option<u64>,
    },

    /// Degree-(k-1) witness matching 1/(x - a_j) on exactly k points
    Witness {
        #[command(flatten)]
        code: CodeArgs,

        /// 1-based index into the puncture list
        #[arg(long)]
        j: usize,

        /// Optional witness set: k distinct element indices
        #[arg(long)]
        c: Option<String>,
    },
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(err) => {
            use clap::error::ErrorKind;
            let code = match err.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                _ => 64,
            };
            let _ = err.print();
            return ExitCode::from(code);
        }
    };
    if let Some(threads) = cli.threads {
        let _ = rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build_global();
    }
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            eprintln!("error: {err}");
            ExitCode::from(match err {
                Error::BudgetExceeded { .. } => 2,
                Error::EngineMismatch(_) => 3,
                _ => 1,
            })
        }
    }
}

fn run(cli: &Cli) -> Result<()> {
    match &cli.command {
        Command::FieldInfo { field } => {
            let f = FiniteField::from_spec(field)?;
            let value = json!({
                "spec": f.spec_string(),
                "p": f.p(),
                "m": f.m(),
                "q": f.order(),
                "modulus": f.modulus().map(|c| csv_of(c.iter())),
                "modulus_index": f.modulus_index(),
                "generator": f.generator().index() as u64,
            });
            emit(cli, value, Some(f.spec_string()))
        }
        Command::Interp { field, exclude, word } => {
            let f = FiniteField::from_spec(field)?;
            let eval_set = parse_eval_set(f.clone(), exclude.as_deref())?;
            let u = Word::parse(&f, word)?;
            eval_set.check_word(&u)?;
            let interp = eval_set.interpolate_word(&u)?;
            let value = json!({
                "interpolation": interp.to_csv(),
                "degree": interp.degree().finite().map(|d| d as u64),
            });
            emit(cli, value, Some(interp.to_csv()))
        }
        Command::Encode { code, message } => {
            let code = parse_code(code)?;
            let msg = Polynomial::parse(code.field().clone(), message)?;
            let encoded = code.encode(&msg)?;
            emit(cli, json!({ "word": encoded.to_csv() }), Some(encoded.to_csv()))
        }
        Command::Distance { code, word, engine, budget } => {
            let code = parse_code(code)?;
            let u = Word::parse(code.field(), word)?;
            let engine: Engine = engine.parse()?;
            let cert = error_distance(&code, &u, engine, &parse_budget(*budget))?;
            let plain = cert.distance.to_string();
            emit(cli, certificate_json(&cert), Some(plain))
        }
        Command::Deephole(sub) => run_deephole(cli, sub),
        Command::Census { code, mode, csv, checkpoint, budget } => {
            run_census_command(cli, code, mode, csv.as_deref(), checkpoint.as_deref(), *budget)
        }
        Command::Selftest { seed } => {
            let outcome = selftest::run_suite(*seed);
            emit(cli, outcome.summary, None)?;
            outcome.verdict
        }
    }
}

fn run_deephole(cli: &Cli, sub: &DeepholeCommand) -> Result<()> {
    match sub {
        DeepholeCommand::Construct { code, j, lambda, r } => {
            let code = parse_code(code)?;
            let spec = DeepHoleSpec {
                code: &code,
                j: *j,
                lambda: code.field().element(*lambda)?,
                r: Polynomial::parse(code.field().clone(), r)?,
            };
            let word = construct_deep_hole(&spec)?;
            let interp = code.eval_set().interpolate_word(&word)?;
            let value = json!({
                "word": word.to_csv(),
                "interpolation": interp.to_csv(),
                "degree": interp.degree().finite().map(|d| d as u64),
            });
            emit(cli, value, Some(word.to_csv()))
        }
        DeepholeCommand::Verify { code, word, budget } => {
            let code = parse_code(code)?;
            let u = Word::parse(code.field(), word)?;
            let (is_deep, cert) = verify_deep_hole(&code, &u, &parse_budget(*budget))?;
            let value = json!({
                "is_deep_hole": is_deep,
                "distance": cert.distance,
                "certificate": certificate_json(&cert),
            });
            emit(cli, value, Some(is_deep.to_string()))
        }
        DeepholeCommand::Witness { code, j, c } => {
            let code = parse_code(code)?;
            let c_choice = match c {
                Some(text) => Some(parse_elements(code.field(), text)?),
                None => None,
            };
            let cert = witness_polynomial(&code, *j, c_choice.as_deref())?;
            let value = json!({
                "g": cert.g.to_csv(),
                "agreement_points": cert
                    .agreement_points
                    .iter()
                    .map(|e| e.index() as u64)
                    .collect::<Vec<_>>(),
                "verified": cert.verified,
            });
            emit(cli, value, Some(cert.g.to_csv()))
        }
    }
}

/// Progress of an interrupted census: how many records are already absorbed.
#[derive(Serialize, Deserialize)]
struct SavedCheckpoint {
    key: String,
    next_seq: u64,
    acc: CensusAccumulator,
}

fn run_census_command(
    cli: &Cli,
    code_args: &CodeArgs,
    mode: &str,
    csv_path: Option<&Path>,
    checkpoint_path: Option<&Path>,
    budget: Option<u64>,
) -> Result<()> {
    let code = parse_code(code_args)?;
    let mode: CensusMode = mode.parse()?;
    let budget = parse_budget(budget);
    let key = census::params_key(&code, mode);

    let resume = match checkpoint_path {
        Some(path) if path.exists() => {
            let text = fs::read_to_string(path).map_err(io_err)?;
            let saved: SavedCheckpoint =
                serde_json::from_str(&text).map_err(|e| Error::Io(format!("checkpoint: {e}")))?;
            if saved.key != key {
                return Err(Error::PreconditionViolated(format!(
                    "checkpoint {path:?} belongs to a different census ({})",
                    saved.key
                )));
            }
            eprintln!("census: resuming after {} records", saved.next_seq);
            Some((saved.next_seq, saved.acc))
        }
        _ => None,
    };
    let resume_records = resume.as_ref().map_or(0, |(n, _)| *n);

    let mut csv_writer = match csv_path {
        Some(path) => Some(open_census_csv(path, resume_records)?),
        None => None,
    };

    let report = census::run_census(&code, mode, &budget, resume, |record, acc| {
        if let Some(writer) = csv_writer.as_mut() {
            writer
                .write_record([
                    record.canonical_form.as_str(),
                    &record.distance.to_string(),
                    record.class.label(),
                ])
                .map_err(|e| Error::Io(e.to_string()))?;
            writer.flush().map_err(io_err)?;
        }
        if let Some(path) = checkpoint_path {
            save_checkpoint(path, &key, record.seq + 1, acc)?;
        }
        Ok(())
    })?;

    eprintln!(
        "census: {} records ({}) in {} ms",
        report.engine.records,
        mode.label(),
        report.runtime_ms
    );
    let value = serde_json::to_value(&report).expect("report serializes");
    emit(cli, value, None)
}

/// Fresh CSV gets a header; a resumed one is truncated back to exactly the
/// records the checkpoint accounts for, so reruns cannot duplicate rows.
fn open_census_csv(path: &Path, resume_records: u64) -> Result<csv::Writer<fs::File>> {
    const HEADER: [&str; 3] = ["canonical_form_coeffs", "distance", "class"];
    if resume_records > 0 && path.exists() {
        let text = fs::read_to_string(path).map_err(io_err)?;
        let mut kept: Vec<&str> = text.lines().take(1 + resume_records as usize).collect();
        if kept.is_empty() {
            kept.push("canonical_form_coeffs,distance,class");
        }
        let mut body = kept.join("\n");
        body.push('\n');
        fs::write(path, body).map_err(io_err)?;
        let file = fs::OpenOptions::new().append(true).open(path).map_err(io_err)?;
        Ok(csv::WriterBuilder::new().from_writer(file))
    } else {
        let file = fs::File::create(path).map_err(io_err)?;
        let mut writer = csv::WriterBuilder::new().from_writer(file);
        writer
            .write_record(HEADER)
            .map_err(|e| Error::Io(e.to_string()))?;
        writer.flush().map_err(io_err)?;
        Ok(writer)
    }
}

fn save_checkpoint(path: &Path, key: &str, next_seq: u64, acc: &CensusAccumulator) -> Result<()> {
    let saved = SavedCheckpoint { key: key.to_string(), next_seq, acc: acc.clone() };
    let payload = serde_json::to_string(&saved).expect("checkpoint serializes");
    let tmp = path.with_extension("checkpoint.tmp");
    fs::write(&tmp, payload).map_err(io_err)?;
    fs::rename(&tmp, path).map_err(io_err)?;
    Ok(())
}

fn certificate_json(cert: &DistanceCertificate) -> Value {
    json!({
        "distance": cert.distance,
        "max_agreements": cert.max_agreements,
        "is_deep_hole": cert.is_deep_hole,
        "nearest_count": cert.nearest_count,
        "nearest_messages": cert
            .nearest_messages
            .iter()
            .map(|m| m.to_csv())
            .collect::<Vec<_>>(),
        "engine": cert.engine,
    })
}

fn parse_eval_set(field: Arc<FiniteField>, exclude: Option<&str>) -> Result<EvaluationSet> {
    match exclude {
        None | Some("") => Ok(EvaluationSet::full(field)),
        Some(text) => {
            let excluded = parse_elements(&field, text)?;
            EvaluationSet::puncture(field, &excluded)
        }
    }
}

fn parse_code(args: &CodeArgs) -> Result<GrsCode> {
    let field = FiniteField::from_spec(&args.field)?;
    let eval_set = parse_eval_set(field, args.exclude.as_deref())?;
    GrsCode::new(eval_set, args.k)
}

fn parse_elements(field: &FiniteField, text: &str) -> Result<Vec<Element>> {
    text.split(',')
        .map(|tok| {
            let idx = tok.trim().parse::<u64>().map_err(|_| {
                Error::PreconditionViolated(format!("bad element index {tok:?} in {text:?}"))
            })?;
            field.element(idx)
        })
        .collect()
}

fn parse_budget(limit: Option<u64>) -> Budget {
    match limit {
        Some(limit) => Budget::with_limit(limit),
        None => Budget::default(),
    }
}

fn csv_of<'a>(items: impl Iterator<Item = &'a u16>) -> String {
    items.map(|c| c.to_string()).collect::<Vec<_>>().join(",")
}

fn io_err(e: std::io::Error) -> Error {
    Error::Io(e.to_string())
}

fn emit(cli: &Cli, value: Value, plain: Option<String>) -> Result<()> {
    let text = if cli.plain {
        plain.unwrap_or_else(|| value.to_string())
    } else {
        serde_json::to_string_pretty(&value).expect("json serializes")
    };
    match &cli.out {
        Some(path) => fs::write(path, text + "\n").map_err(io_err),
        None => {
            println!("{text}");
            Ok(())
        }
    }
}
