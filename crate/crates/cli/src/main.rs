use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;

use pgq_core::help::{check_order, ExtraConstraints, OrderCheck};
use pgq_core::tables::{validate, CharacterTable, ValidationReport};
use pgq_core::tree::{load_blocks, BrauerLine, Combined, LineInequalities};
use pgq_core::verdict::pq_report;

mod render;

#[derive(Parser)]
#[command(name = "pgq", version, about = "HeLP and Brauer-line checks for the Prime Graph Question")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// Output format.
    #[arg(long, value_enum, global = true, default_value_t = Format::Text)]
    format: Format,
    /// More log output on stderr; repeat for more.
    #[arg(short, long, action = clap::ArgAction::Count, global = true)]
    verbose: u8,
    /// Worker threads (defaults to the number of cores).
    #[arg(long, global = true)]
    jobs: Option<usize>,
}

#[derive(Subcommand)]
enum Command {
    /// Check orthogonality relations and power maps of a table.
    Validate { table: PathBuf },
    /// List the element orders.
    Spectrum { table: PathBuf },
    /// Print the prime graph.
    PrimeGraph { table: PathBuf },
    /// Run HeLP for torsion units of order n.
    CheckOrder {
        table: PathBuf,
        #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
        n: u64,
        /// Block file whose lines add their inequalities.
        #[arg(long)]
        blocks: Option<PathBuf>,
    },
    /// Decide every prime pair of the prime graph.
    Pq {
        table: PathBuf,
        #[arg(long)]
        blocks: Option<PathBuf>,
    },
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
}

enum Failure {
    /// The table was read but is inconsistent.
    Validation(ValidationReport),
    /// Unreadable or malformed input.
    Input(String),
}

impl<E: std::error::Error> From<E> for Failure {
    fn from(e: E) -> Self {
        Failure::Input(e.to_string())
    }
}

/// Accepts `path` as given or with `.json` appended.
fn resolve(path: &Path) -> PathBuf {
    if path.exists() {
        return path.to_path_buf();
    }
    let mut with_ext = path.as_os_str().to_owned();
    with_ext.push(".json");
    let with_ext = PathBuf::from(with_ext);
    if with_ext.exists() {
        with_ext
    } else {
        path.to_path_buf()
    }
}

fn load_table(path: &Path) -> Result<CharacterTable, Failure> {
    let path = resolve(path);
    log::info!("loading table {}", path.display());
    Ok(CharacterTable::load(&path)?)
}

fn load_lines(path: Option<&PathBuf>) -> Result<Vec<BrauerLine>, Failure> {
    match path {
        None => Ok(Vec::new()),
        Some(p) => {
            let p = resolve(p);
            log::info!("loading blocks {}", p.display());
            Ok(load_blocks(&p)?)
        }
    }
}

fn validated(path: &Path) -> Result<CharacterTable, Failure> {
    let table = load_table(path)?;
    let report = validate(&table);
    if report.all_passed() {
        Ok(table)
    } else {
        Err(Failure::Validation(report))
    }
}

fn json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("report serializes");
    s.push('\n');
    s
}

#[derive(Serialize)]
#[serde(rename_all = "camelCase")]
struct OrderReport<'a> {
    group: &'a str,
    order: u64,
    verdict: &'static str,
    certificate: &'static str,
    check: &'a OrderCheck,
}

fn run(cli: &Cli) -> Result<String, Failure> {
    let text = cli.format == Format::Text;
    match &cli.command {
        Command::Validate { table } => {
            let t = load_table(table)?;
            let report = validate(&t);
            if !report.all_passed() {
                return Err(Failure::Validation(report));
            }
            Ok(if text { render::validation(&report) } else { json(&report) })
        }
        Command::Spectrum { table } => {
            let t = validated(table)?;
            let spectrum = t.spectrum();
            Ok(if text { render::spectrum(&spectrum) } else { json(&spectrum) })
        }
        Command::PrimeGraph { table } => {
            let t = validated(table)?;
            let graph = t.prime_graph();
            Ok(if text { render::prime_graph(&graph) } else { json(&graph) })
        }
        Command::CheckOrder { table, n, blocks } => {
            let t = validated(table)?;
            let lines = load_lines(blocks.as_ref())?;
            let providers: Vec<LineInequalities> = lines
                .iter()
                .filter(|l| n % l.prime == 0)
                .map(|l| LineInequalities::new(&t, l))
                .collect::<Result<_, _>>()?;
            let extra = Combined(providers.iter().map(|p| p as &dyn ExtraConstraints).collect());
            let check = check_order(&t, *n, &extra)?;
            let report = OrderReport {
                group: &t.group_name,
                order: *n,
                verdict: if check.is_infeasible() { "infeasible" } else { "feasible" },
                certificate: if check.exhaustive { "exhaustive" } else { "partial" },
                check: &check,
            };
            Ok(if text { render::order(&t, report.verdict, report.certificate, &check) } else { json(&report) })
        }
        Command::Pq { table, blocks } => {
            let t = validated(table)?;
            let lines = load_lines(blocks.as_ref())?;
            let report = pq_report(&t, &lines)?;
            Ok(if text { render::pq(&t, &report) } else { json(&report) })
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let level = match cli.verbose {
        0 => log::LevelFilter::Warn,
        1 => log::LevelFilter::Info,
        2 => log::LevelFilter::Debug,
        _ => log::LevelFilter::Trace,
    };
    env_logger::Builder::new().filter_level(level).target(env_logger::Target::Stderr).init();

    let mut pool = rayon::ThreadPoolBuilder::new();
    if let Some(jobs) = cli.jobs {
        pool = pool.num_threads(jobs);
    }
    let outcome = match pool.build() {
        Ok(pool) => pool.install(|| run(&cli)),
        Err(e) => Err(Failure::Input(format!("cannot start worker pool: {e}"))),
    };
    match outcome {
        Ok(out) => {
            print!("{out}");
            ExitCode::SUCCESS
        }
        Err(Failure::Validation(report)) => {
            eprint!("{}", render::validation(&report));
            eprintln!("error: table failed validation");
            ExitCode::from(1)
        }
        Err(Failure::Input(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}
