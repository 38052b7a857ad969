//! Command-line front end. [`run`] parses arguments and executes a command
//! in-process, returning the exit code and the text it would print.

pub mod args;
mod verify;

use std::fs;
use std::path::Path;

use clap::Parser;
use glasner_core::polynomials::{FamilyConfig, MatrixFamily};
use glasner_core::scalar::TorusScalar;
use glasner_core::search::{exponent_scan, search, GeneratorParams, ScanConfig, SearchConfig, SearchReport};
use glasner_core::torus::{is_eps_dense, AnyPointSet, DensityReport, PointSet, PointSetFile};
use glasner_core::{Error, Verdict};
use serde::Serialize;
use serde_json::{json, Value};

use crate::args::{Cli, Command, Common, DensityArgs, Format, ScanArgs, SearchArgs};

pub const EXIT_USAGE: i32 = 64;
pub const EXIT_DATA: i32 = 65;
pub const EXIT_NO_INPUT: i32 = 66;
pub const EXIT_SOFTWARE: i32 = 70;

#[derive(Debug, Default, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

#[derive(Debug)]
pub(crate) enum CliError {
    Usage(String),
    Data(String),
    NoInput(String),
    Software(String),
}

impl CliError {
    fn code(&self) -> i32 {
        match self {
            CliError::Usage(_) => EXIT_USAGE,
            CliError::Data(_) => EXIT_DATA,
            CliError::NoInput(_) => EXIT_NO_INPUT,
            CliError::Software(_) => EXIT_SOFTWARE,
        }
    }

    fn message(&self) -> &str {
        match self {
            CliError::Usage(m) | CliError::Data(m) | CliError::NoInput(m) | CliError::Software(m) => m,
        }
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        match e {
            Error::InvalidParameter { .. } => CliError::Usage(e.to_string()),
            Error::OutOfTable { .. } => CliError::Software(e.to_string()),
            _ => CliError::Data(e.to_string()),
        }
    }
}

type CliResult<T> = std::result::Result<T, CliError>;

/// What a command produced: an exit code and the report body.
pub(crate) struct Report {
    pub code: i32,
    pub body: String,
    pub notes: Vec<String>,
}

/// Parses `argv` (including the program name) and runs the command.
pub fn run<I, T>(argv: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let code = match e.kind() {
                clap::error::ErrorKind::DisplayHelp | clap::error::ErrorKind::DisplayVersion => 0,
                _ => EXIT_USAGE,
            };
            let text = e.render().to_string();
            return if code == 0 {
                Outcome {
                    code,
                    stdout: text,
                    stderr: String::new(),
                }
            } else {
                Outcome {
                    code,
                    stdout: String::new(),
                    stderr: text,
                }
            };
        }
    };
    let common = common_of(&cli.command);
    let result = with_threads(common.threads, || dispatch(&cli));
    match result {
        Ok(rep) => {
            let mut out = Outcome {
                code: rep.code,
                stdout: String::new(),
                stderr: rep.notes.iter().map(|n| format!("warning: {n}\n")).collect(),
            };
            match &common.out {
                Some(path) => {
                    if let Err(e) = fs::write(path, &rep.body) {
                        out.code = EXIT_SOFTWARE.max(out.code);
                        out.stderr
                            .push_str(&format!("error: cannot write {}: {e}\n", path.display()));
                    }
                }
                None => out.stdout = rep.body,
            }
            out
        }
        Err(e) => Outcome {
            code: e.code(),
            stdout: String::new(),
            stderr: format!("error: {}\n", e.message()),
        },
    }
}

fn common_of(cmd: &Command) -> &Common {
    use args::Suite;
    match cmd {
        Command::Density(a) => &a.common,
        Command::Search(a) => &a.common,
        Command::Scan(a) => &a.common,
        Command::Verify(v) => match &v.suite {
            Suite::Bump(a) => &a.common,
            Suite::Expsum(a) => &a.common,
            Suite::Paircount(a) => &a.common,
            Suite::Multcomp(a) => &a.common,
        },
    }
}

fn with_threads<R: Send>(threads: Option<usize>, f: impl FnOnce() -> CliResult<R> + Send) -> CliResult<R> {
    match threads {
        Some(0) => Err(CliError::Usage("--threads must be at least 1".into())),
        Some(n) => rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build()
            .map_err(|e| CliError::Software(e.to_string()))?
            .install(f),
        None => f(),
    }
}

fn dispatch(cli: &Cli) -> CliResult<Report> {
    match &cli.command {
        Command::Density(a) => cmd_density(a, &cli.command),
        Command::Search(a) => cmd_search(a, &cli.command),
        Command::Scan(a) => cmd_scan(a, &cli.command),
        Command::Verify(v) => verify::cmd_verify(&v.suite, &cli.command),
    }
}

/// The effective configuration, flags and defaults alike, plus the thread count in use.
pub(crate) fn config_value(cmd: &Command) -> Value {
    let mut v = serde_json::to_value(cmd).expect("arguments serialize");
    if let Some(obj) = v.as_object_mut() {
        obj.insert("threads_effective".into(), json!(rayon::current_num_threads()));
        obj.insert("version".into(), json!(env!("CARGO_PKG_VERSION")));
    }
    v
}

pub(crate) fn json_body(cmd: &Command, report: impl Serialize) -> String {
    let doc = json!({ "config": config_value(cmd), "report": report });
    let mut s = serde_json::to_string_pretty(&doc).expect("report serializes");
    s.push('\n');
    s
}

pub(crate) fn csv_body(cmd: &Command, csv: &str) -> String {
    format!("# config: {}\n{csv}", config_value(cmd))
}

fn read_input(path: &Path) -> CliResult<String> {
    let text =
        fs::read_to_string(path).map_err(|e| CliError::NoInput(format!("cannot read {}: {e}", path.display())))?;
    if text.trim().is_empty() {
        return Err(CliError::Usage(format!("{} is empty", path.display())));
    }
    Ok(text)
}

fn read_points(path: &Path) -> CliResult<AnyPointSet> {
    let text = read_input(path)?;
    let file = PointSetFile::from_json(&text).map_err(|e| CliError::Data(format!("{}: {e}", path.display())))?;
    file.into_point_set()
        .map_err(|e| CliError::Data(format!("{}: {e}", path.display())))
}

pub(crate) fn read_family(path: &Path) -> CliResult<MatrixFamily> {
    let text = read_input(path)?;
    let cfg = FamilyConfig::from_json(&text).map_err(|e| CliError::Data(format!("{}: {e}", path.display())))?;
    cfg.build()
        .map_err(|e| CliError::Data(format!("{}: {e}", path.display())))
}

fn witness_text<S: TorusScalar>(r: &DensityReport<S>) -> String {
    r.witness.as_ref().map(|w| w.to_strings().join(" ")).unwrap_or_default()
}

fn density_exit(v: Verdict) -> i32 {
    match v {
        Verdict::Dense => 0,
        Verdict::NotDense => 1,
        Verdict::Unknown => 2,
    }
}

fn cmd_density(a: &DensityArgs, cmd: &Command) -> CliResult<Report> {
    fn go<S: TorusScalar>(set: &PointSet<S>, a: &DensityArgs, cmd: &Command) -> CliResult<Report> {
        let r = is_eps_dense(set, a.eps, a.resolution, a.metric.into())?;
        let body = match a.common.format.unwrap_or(Format::Json) {
            Format::Json => json_body(cmd, &r),
            Format::Csv => csv_body(
                cmd,
                &format!(
                    "verdict,eps,covering_radius_lo,covering_radius_hi,grid_resolution,witness\n{:?},{},{},{},{},{}\n",
                    r.verdict,
                    r.eps,
                    r.covering_radius_lo,
                    r.covering_radius_hi,
                    r.grid_resolution,
                    witness_text(&r)
                ),
            ),
        };
        Ok(Report {
            code: density_exit(r.verdict),
            body,
            notes: Vec::new(),
        })
    }
    match read_points(&a.points)? {
        AnyPointSet::Exact(s) => go(&s, a, cmd),
        AnyPointSet::Float(s) => go(&s, a, cmd),
    }
}

fn search_csv<S: TorusScalar>(r: &SearchReport<S>) -> String {
    let primes = r
        .witness_primes
        .as_ref()
        .map(|p| serde_json::to_string(p).expect("primes serialize"))
        .unwrap_or_default();
    let matrix = r
        .matrix
        .as_ref()
        .map(|m| serde_json::to_string(m).expect("matrix serializes"))
        .unwrap_or_default();
    format!(
        "found,primes_tested,unknown_count,verdict,covering_radius_lo,covering_radius_hi,witness_primes,matrix,wall_time\n{},{},{},{:?},{},{},\"{}\",\"{}\",{}\n",
        r.found,
        r.primes_tested,
        r.unknown_count,
        r.density.verdict,
        r.density.covering_radius_lo,
        r.density.covering_radius_hi,
        primes.replace('"', "\"\""),
        matrix.replace('"', "\"\""),
        r.wall_time
    )
}

fn cmd_search(a: &SearchArgs, cmd: &Command) -> CliResult<Report> {
    let fam = read_family(&a.family)?;
    let cfg = SearchConfig::new(
        a.eps,
        a.metric.into(),
        a.resolution,
        a.budget,
        a.strategy.into(),
        a.seed,
    )?;
    fn go<S: TorusScalar>(
        fam: &MatrixFamily,
        set: &PointSet<S>,
        cfg: &SearchConfig,
        a: &SearchArgs,
        cmd: &Command,
    ) -> CliResult<Report> {
        let r = search(fam, set, cfg)?;
        let mut notes = Vec::new();
        if r.unknown_count > 0 {
            notes.push(format!(
                "{} candidate(s) had an undecided density verdict",
                r.unknown_count
            ));
        }
        let body = match a.common.format.unwrap_or(Format::Json) {
            Format::Json => json_body(cmd, json!({ "search_config": cfg, "result": r })),
            Format::Csv => csv_body(cmd, &search_csv(&r)),
        };
        Ok(Report {
            code: if r.found { 0 } else { 1 },
            body,
            notes,
        })
    }
    match read_points(&a.points)? {
        AnyPointSet::Exact(s) => go(&fam, &s, &cfg, a, cmd),
        AnyPointSet::Float(s) => go(&fam, &s, &cfg, a, cmd),
    }
}

fn cmd_scan(a: &ScanArgs, cmd: &Command) -> CliResult<Report> {
    let fam = read_family(&a.family)?;
    let first = *a
        .schedule
        .first()
        .ok_or_else(|| CliError::Usage("empty schedule".into()))?;
    let cfg = ScanConfig {
        search: SearchConfig::new(
            first,
            a.metric.into(),
            a.resolution,
            a.budget,
            a.strategy.into(),
            a.seed,
        )?,
        generator: a.generator.into(),
        params: GeneratorParams {
            rho: a.rho,
            d: a.d,
            ..Default::default()
        },
        reps: a.reps,
        k_max: a.k_max,
        seed: a.seed,
    };
    let res = exponent_scan(&fam, &a.schedule, &cfg)?;
    let body = match a.common.format.unwrap_or(Format::Csv) {
        Format::Json => json_body(cmd, &res),
        Format::Csv => {
            let mut s = csv_body(cmd, &res.to_csv());
            s.push_str(&format!("# reference_exponent: {}\n", res.reference_exponent));
            s
        }
    };
    Ok(Report {
        code: 0,
        body,
        notes: res.warnings.clone(),
    })
}

/// Removes every `wall_time` field from a JSON document.
pub fn strip_wall_time(text: &str) -> String {
    fn strip(v: &mut Value) {
        match v {
            Value::Object(map) => {
                map.remove("wall_time");
                map.values_mut().for_each(strip);
            }
            Value::Array(items) => items.iter_mut().for_each(strip),
            _ => {}
        }
    }
    match serde_json::from_str::<Value>(text) {
        Ok(mut v) => {
            strip(&mut v);
            serde_json::to_string_pretty(&v).expect("value serializes")
        }
        Err(_) => text.to_string(),
    }
}
