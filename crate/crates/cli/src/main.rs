//! `reid-gale`: compute `L`, `K^t` and the recipe markings from a cyclic
//! group and a crepant fan, or run the matrix half on a given `L`.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use reid_gale::fan::{validate_fan_file, CrepantFan, FanFile};
use reid_gale::gale::{analyze_fan, matrix_mode, GaleError, GaleReport};
use reid_gale::group::{parse_group, DimensionVector};
use reid_gale::zmat::read_matrix;
use reid_gale::{Error, ZMatrix};

#[derive(Parser)]
#[command(
    name = "reid-gale",
    version,
    about = "Gale duality for tautological bundles on crepant resolutions"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Full toric pipeline on a group and a crepant fan.
    Analyze(AnalyzeArgs),
    /// Kernel, transpose and trichotomy of a user-supplied L.
    Matrix(MatrixArgs),
    /// Check a fan file and itemize every invariant.
    ValidateFan {
        #[arg(long)]
        fan: PathBuf,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Json,
    Csv,
}

#[derive(Args)]
struct OutputArgs {
    /// Report file (json) or directory (csv). Json goes to stdout if omitted.
    #[arg(long, short)]
    output: Option<PathBuf>,
    #[arg(long, value_enum, default_value = "json")]
    format: Format,
    /// Exit 2 when the report carries any warning.
    #[arg(long)]
    strict: bool,
}

#[derive(Args)]
struct AnalyzeArgs {
    /// `r,a,b,c` for the action 1/r(a,b,c).
    #[arg(long)]
    group: String,
    #[arg(long)]
    fan: PathBuf,
    #[arg(long)]
    dump_degrees: Option<PathBuf>,
    #[arg(long)]
    dump_euler: Option<PathBuf>,
    #[command(flatten)]
    out: OutputArgs,
}

#[derive(Args)]
struct MatrixArgs {
    #[arg(long)]
    l: PathBuf,
    /// Kernel basis as columns (vertices x relations).
    #[arg(long, conflicts_with = "kt")]
    k: Option<PathBuf>,
    /// Kernel basis as rows (relations x vertices).
    #[arg(long)]
    kt: Option<PathBuf>,
    /// Dimension vector, vertex 0 first.
    #[arg(long)]
    v: Option<PathBuf>,
    /// Column labels separated by commas or whitespace.
    #[arg(long)]
    labels: Option<PathBuf>,
    #[command(flatten)]
    out: OutputArgs,
}

/// A failure with its module-qualified code.
struct Failure {
    code: String,
    message: String,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure {
            code: e.code(),
            message: e.to_string(),
        }
    }
}

fn fail(code: &str, message: impl Into<String>) -> Failure {
    Failure {
        code: code.to_string(),
        message: message.into(),
    }
}

fn io_error(path: &Path, e: std::io::Error) -> Failure {
    fail("cli.IoError", format!("{}: {e}", path.display()))
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) if !e.use_stderr() => {
            let _ = e.print();
            return ExitCode::SUCCESS;
        }
        Err(e) => {
            report_failure(&fail("cli.UsageError", e.to_string().trim_end()));
            return ExitCode::from(1);
        }
    };
    if let Err(f) = configure_threads() {
        report_failure(&f);
        return ExitCode::from(1);
    }
    let result = match cli.command {
        Command::Analyze(args) => analyze(args),
        Command::Matrix(args) => matrix(args),
        Command::ValidateFan { fan } => validate(&fan),
    };
    match result {
        Ok(code) => ExitCode::from(code),
        Err(f) => {
            report_failure(&f);
            ExitCode::from(1)
        }
    }
}

fn report_failure(f: &Failure) {
    eprintln!("{}", json!({"code": f.code, "message": f.message}));
}

fn configure_threads() -> Result<(), Failure> {
    let Ok(raw) = std::env::var("REID_GALE_THREADS") else {
        return Ok(());
    };
    let n: usize = raw.trim().parse().map_err(|_| {
        fail(
            "cli.InvalidThreads",
            format!("REID_GALE_THREADS={raw:?} is not a count"),
        )
    })?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(n)
        .build_global()
        .map_err(|e| fail("cli.InvalidThreads", e.to_string()))
}

fn analyze(args: AnalyzeArgs) -> Result<u8, Failure> {
    let action = parse_group(&args.group).map_err(Error::from)?;
    let file = FanFile::read(&args.fan).map_err(Error::from)?;
    let fan = CrepantFan::from_file(&file).map_err(Error::from)?;
    if *fan.action() != action {
        return Err(fail(
            "cli.GroupMismatch",
            format!("--group is {action} but the fan is for {}", fan.action()),
        ));
    }
    let analysis = analyze_fan(&fan)?;
    if let Some(path) = &args.dump_degrees {
        fs::write(path, analysis.degrees.to_csv(&fan)).map_err(|e| io_error(path, e))?;
    }
    if let Some(path) = &args.dump_euler {
        fs::write(path, analysis.euler.to_csv(&fan)).map_err(|e| io_error(path, e))?;
    }
    emit(&analysis.report, &args.out)
}

fn matrix(args: MatrixArgs) -> Result<u8, Failure> {
    let read = |p: &Path| -> Result<ZMatrix, Failure> {
        read_matrix(p).map_err(|e| Error::from(e).into())
    };
    let l = read(&args.l)?;
    let k = match (&args.k, &args.kt) {
        (Some(p), _) => Some(read(p)?),
        (_, Some(p)) => Some(read(p)?.transpose()),
        _ => None,
    };
    let v = match &args.v {
        Some(p) => {
            let m = read(p)?;
            let entries = m
                .entries()
                .iter()
                .map(|x| {
                    i64::try_from(x).map_err(|_| {
                        fail(
                            "gale_reid.InvalidInput",
                            format!("dimension {x} is too large"),
                        )
                    })
                })
                .collect::<Result<Vec<_>, _>>()?;
            Some(DimensionVector::new(entries).map_err(|e| Failure::from(Error::from(e)))?)
        }
        None => None,
    };
    let labels = match &args.labels {
        Some(p) => Some(
            fs::read_to_string(p)
                .map_err(|e| io_error(p, e))?
                .split(|c: char| c == ',' || c.is_whitespace())
                .filter(|s| !s.is_empty())
                .map(str::to_string)
                .collect(),
        ),
        None => None,
    };
    let report = matrix_mode(&l, v, labels, k.as_ref()).map_err(|e: GaleError| Error::from(e))?;
    emit(&report, &args.out)
}

fn validate(path: &Path) -> Result<u8, Failure> {
    let file = FanFile::read(path).map_err(Error::from)?;
    let diag = validate_fan_file(&file);
    let mut body = serde_json::to_string_pretty(&diag).expect("diagnostics serialize");
    body.push('\n');
    stdout(&body)?;
    Ok(if diag.valid { 0 } else { 1 })
}

/// Writes the report and returns the exit code.
fn emit(report: &GaleReport, out: &OutputArgs) -> Result<u8, Failure> {
    match out.format {
        Format::Json => {
            let body = pretty(&report.to_json());
            match &out.output {
                Some(path) => fs::write(path, body).map_err(|e| io_error(path, e))?,
                None => stdout(&body)?,
            }
        }
        Format::Csv => {
            let dir = out
                .output
                .as_ref()
                .ok_or_else(|| fail("cli.UsageError", "--format csv needs --output DIR"))?;
            fs::create_dir_all(dir).map_err(|e| io_error(dir, e))?;
            for (name, csv) in report.matrices_csv() {
                let path = dir.join(format!("{name}.csv"));
                fs::write(&path, csv).map_err(|e| io_error(&path, e))?;
            }
        }
    }
    Ok(if out.strict && report.has_warnings() {
        2
    } else {
        0
    })
}

/// A closed pipe on stdout is not an error worth reporting.
fn stdout(text: &str) -> Result<(), Failure> {
    match std::io::stdout().lock().write_all(text.as_bytes()) {
        Err(e) if e.kind() != std::io::ErrorKind::BrokenPipe => {
            Err(fail("cli.IoError", format!("stdout: {e}")))
        }
        _ => Ok(()),
    }
}

fn pretty(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("report serializes");
    s.push('\n');
    s
}
