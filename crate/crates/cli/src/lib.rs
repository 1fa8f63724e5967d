//! The `ods` command: create, infer, validate, screen, export and serve datasheets.
//!
//! [`run`] is the whole program minus process setup, so it can be driven
//! in-process with captured output streams.

use std::ffi::OsString;
use std::fmt::Display;
use std::io::Write;
use std::net::SocketAddr;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};
use opendatasheets::inference::{infer_resource, InferenceConfig, InferredResource};
use opendatasheets::jsonld::to_jsonld;
use opendatasheets::model::{merge_inferred, new_template, parse_datasheet, slugify, to_canonical_json, Datasheet};
use opendatasheets::policy::{evaluate_policy, parse_policy, Decision, Policy};
use opendatasheets::validation::{validate_datasheet, Severity, ValidationReport};
use ods_server::ServerConfig;

/// Process exit status. The numeric values are part of the interface.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[repr(u8)]
pub enum Exit {
    Success = 0,
    Failure = 1,
    Invalid = 2,
    Review = 3,
    Reject = 4,
}

impl Exit {
    pub fn code(self) -> u8 {
        self as u8
    }
}

impl From<Decision> for Exit {
    fn from(d: Decision) -> Self {
        match d {
            Decision::Accept => Exit::Success,
            Decision::Review => Exit::Review,
            Decision::Reject => Exit::Reject,
        }
    }
}

pub const POLICY_ENV: &str = "ODS_POLICY";
const FALLBACK_NAME: &str = "untitled-dataset";

#[derive(Debug, Parser)]
#[command(name = "ods", version, about = "Create, check and publish open datasheets")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum Target {
    Jsonld,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Write a draft datasheet.
    Init {
        name: String,
        #[arg(long, default_value = "")]
        title: String,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Describe data files and write or update a datasheet.
    Infer {
        #[arg(required = true)]
        files: Vec<PathBuf>,
        /// Datasheet to fold the inferred resources into.
        #[arg(long)]
        merge: Option<PathBuf>,
        /// Name of a new datasheet; defaults to the first file's stem.
        #[arg(long, conflicts_with = "merge")]
        name: Option<String>,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Check a datasheet and report completeness.
    Validate {
        file: PathBuf,
        #[arg(long)]
        json: bool,
    },
    /// Screen a datasheet against a policy.
    Evaluate {
        file: PathBuf,
        #[arg(long, env = POLICY_ENV)]
        policy: PathBuf,
        #[arg(long)]
        json: bool,
    },
    /// Export a datasheet to another format.
    Convert {
        file: PathBuf,
        #[arg(long, value_enum)]
        to: Target,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Run the local HTTP service until interrupted.
    Serve {
        #[arg(long, default_value_t = ods_server::DEFAULT_ADDR.1)]
        port: u16,
        #[arg(long, env = POLICY_ENV)]
        policy: Option<PathBuf>,
        #[arg(long)]
        assets: Option<PathBuf>,
    },
}

struct Io<'a> {
    out: &'a mut dyn Write,
    err: &'a mut dyn Write,
}

type Outcome = Result<Exit, String>;

fn fail(context: impl Display, e: impl Display) -> String {
    format!("{context}: {e}")
}

/// Runs one command line. `args[0]` is the program name.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> Exit
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let text = e.render().to_string();
            return if e.use_stderr() {
                let _ = write!(err, "{text}");
                Exit::Failure
            } else {
                let _ = write!(out, "{text}");
                Exit::Success
            };
        }
    };
    let mut io = Io { out, err };
    match dispatch(cli.command, &mut io) {
        Ok(exit) => exit,
        Err(message) => {
            let _ = writeln!(io.err, "error: {message}");
            Exit::Failure
        }
    }
}

fn dispatch(command: Command, io: &mut Io) -> Outcome {
    match command {
        Command::Init { name, title, output } => init(&name, &title, output.as_deref(), io),
        Command::Infer { files, merge, name, output } => infer(&files, merge.as_deref(), name, output.as_deref(), io),
        Command::Validate { file, json } => validate(&file, json, io),
        Command::Evaluate { file, policy, json } => evaluate(&file, &policy, json, io),
        Command::Convert { file, to: Target::Jsonld, output } => convert(&file, output.as_deref(), io),
        Command::Serve { port, policy, assets } => serve(port, policy.as_deref(), assets, io),
    }
}

fn read_text(path: &Path) -> Result<String, String> {
    std::fs::read_to_string(path).map_err(|e| fail(path.display(), e))
}

fn load_datasheet(path: &Path) -> Result<Datasheet, String> {
    parse_datasheet(&read_text(path)?).map_err(|e| fail(path.display(), e))
}

fn load_policy(path: &Path) -> Result<Policy, String> {
    parse_policy(&read_text(path)?).map_err(|e| fail(path.display(), e))
}

/// Writes to `output`, or to standard output when absent.
fn emit(text: &str, output: Option<&Path>, io: &mut Io) -> Result<(), String> {
    match output {
        Some(path) => {
            std::fs::write(path, text).map_err(|e| fail(path.display(), e))?;
            let _ = writeln!(io.err, "wrote {}", path.display());
        }
        None => io.out.write_all(text.as_bytes()).map_err(|e| fail("stdout", e))?,
    }
    Ok(())
}

fn init(name: &str, title: &str, output: Option<&Path>, io: &mut Io) -> Outcome {
    let d = new_template(name, title).map_err(|e| e.to_string())?;
    emit(&to_canonical_json(&d), output, io)?;
    Ok(Exit::Success)
}

fn infer_file(path: &Path, cfg: &InferenceConfig) -> Result<InferredResource, String> {
    let bytes = std::fs::read(path).map_err(|e| fail(path.display(), e))?;
    infer_resource(&path.to_string_lossy(), &bytes, cfg).map_err(|e| fail(path.display(), e))
}

fn infer(files: &[PathBuf], merge: Option<&Path>, name: Option<String>, output: Option<&Path>, io: &mut Io) -> Outcome {
    let base = match merge {
        Some(path) => load_datasheet(path)?,
        None => {
            let name = name.unwrap_or_else(|| {
                let stem = files[0].file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_default();
                Some(slugify(&stem)).filter(|s| !s.is_empty()).unwrap_or_else(|| FALLBACK_NAME.to_string())
            });
            new_template(&name, "").map_err(|e| e.to_string())?
        }
    };

    let cfg = InferenceConfig::default();
    let results: Vec<Result<InferredResource, String>> = std::thread::scope(|s| {
        let handles: Vec<_> = files.iter().map(|f| s.spawn(|| infer_file(f, &cfg))).collect();
        handles.into_iter().map(|h| h.join().expect("inference thread panicked")).collect()
    });

    let mut resources = Vec::with_capacity(results.len());
    let mut failures = Vec::new();
    for (file, result) in files.iter().zip(results) {
        match result {
            Ok(inferred) => {
                for w in &inferred.warnings {
                    let _ = writeln!(io.err, "warning: {}: {w}", file.display());
                }
                resources.push(inferred.resource);
            }
            Err(e) => failures.push(e),
        }
    }
    if !failures.is_empty() {
        return Err(failures.join("\nerror: "));
    }

    let d = merge_inferred(&base, &resources).map_err(|e| e.to_string())?;
    emit(&to_canonical_json(&d), output, io)?;
    Ok(Exit::Success)
}

fn print_report(name: &str, report: &ValidationReport, out: &mut dyn Write) -> std::io::Result<()> {
    let count = |s: Severity| report.issues.iter().filter(|i| i.severity == s).count();
    let status = if report.valid { "valid" } else { "invalid" };
    writeln!(
        out,
        "{name}: {status} (errors: {}, warnings: {}, info: {})",
        count(Severity::Error),
        count(Severity::Warning),
        count(Severity::Info)
    )?;
    writeln!(out, "completeness {:.2}", report.overall)?;
    for (section, score) in report.completeness.iter() {
        writeln!(out, "  {:<12} {score:.2}", section.as_str())?;
    }
    for issue in &report.issues {
        let pointer = if issue.pointer.is_empty() { "/" } else { &issue.pointer };
        writeln!(out, "{} {} {pointer}: {}", issue.severity, issue.code, issue.message)?;
    }
    Ok(())
}

fn validate(file: &Path, json: bool, io: &mut Io) -> Outcome {
    let d = load_datasheet(file)?;
    let report = validate_datasheet(&d);
    if json {
        emit(&to_canonical_json(&report), None, io)?;
    } else {
        print_report(&d.name, &report, io.out).map_err(|e| fail("stdout", e))?;
    }
    Ok(if report.valid { Exit::Success } else { Exit::Invalid })
}

fn evaluate(file: &Path, policy: &Path, json: bool, io: &mut Io) -> Outcome {
    let d = load_datasheet(file)?;
    let policy = load_policy(policy)?;
    let verdict = evaluate_policy(&d, &policy);
    if json {
        emit(&to_canonical_json(&verdict), None, io)?;
    } else {
        let mut text = format!("{}: {} under policy {}\n", d.name, verdict.decision, policy.name);
        for r in &verdict.rule_results {
            if r.passed {
                text.push_str(&format!("  pass {}\n", r.id));
            } else {
                text.push_str(&format!("  FAIL {} ({}): {}\n", r.id, r.action, r.message));
            }
        }
        emit(&text, None, io)?;
    }
    Ok(verdict.decision.into())
}

fn convert(file: &Path, output: Option<&Path>, io: &mut Io) -> Outcome {
    let d = load_datasheet(file)?;
    emit(&to_jsonld(&d).to_json(), output, io)?;
    Ok(Exit::Success)
}

fn serve(port: u16, policy: Option<&Path>, assets: Option<PathBuf>, io: &mut Io) -> Outcome {
    let policy = policy.map(load_policy).transpose()?;
    if let Some(dir) = &assets {
        if !dir.is_dir() {
            return Err(fail(dir.display(), "not a directory"));
        }
    }
    let addr = SocketAddr::from((ods_server::DEFAULT_ADDR.0, port));
    let config = ServerConfig { policy, assets, inference: InferenceConfig::default() };
    let _ = writeln!(io.err, "serving on http://{addr} (Ctrl-C to stop)");
    ods_server::serve_blocking(addr, config).map_err(|e| fail(addr, e))?;
    Ok(Exit::Success)
}
