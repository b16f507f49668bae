use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use heisenbrick::brick::DEFAULT_FIBER_CAP;
use heisenbrick::element_set::DEFAULT_BRUTE_CAP;
use heisenbrick::random::random_suite;
use heisenbrick::verify::{self, Caps, Report};
use heisenbrick::{Brick, BrickSpec, Error, SumProdSpec};

/// Product sets of bricks in the Heisenberg group over F_p.
#[derive(Debug, Parser)]
#[command(name = "heisenbrick", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,

    /// Instance JSON (a brick, a list of bricks, or a sum-product instance).
    #[arg(long, global = true)]
    instance: Option<PathBuf>,

    #[arg(long, global = true)]
    p: Option<u32>,

    #[arg(long, global = true)]
    n: Option<usize>,

    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,

    /// Number of random bricks when no instance file is given.
    #[arg(long, global = true, default_value_t = 100)]
    count: usize,

    /// Largest group order enumerated element by element.
    #[arg(long, global = true, default_value_t = DEFAULT_BRUTE_CAP)]
    brute_cap: u128,

    /// Largest number of (u, v) slices enumerated.
    #[arg(long, global = true, default_value_t = DEFAULT_FIBER_CAP)]
    fiber_cap: u128,

    /// Include every fiber of the product in the report.
    #[arg(long, global = true)]
    dump_fibers: bool,

    #[arg(long, global = true)]
    out: Option<PathBuf>,

    /// Emit the numeric fields as CSV instead of JSON.
    #[arg(long, global = true)]
    csv: bool,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Fibers, cardinality and projections of B·B.
    Product,
    /// Structured period of B·B.
    Period,
    /// Cosets of the center inside B·B.
    Cosets,
    /// Solution counts of mZ + Σ X_j·Y_j = u.
    Sumprod,
    /// Check a claim on an instance, a random suite, or a fixed construction.
    Verify {
        #[arg(value_enum)]
        target: Target,
    },
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum Target {
    Th1,
    Th13,
    Prop2,
    SmallPeriod,
    Lemmas,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Err(msg) = configure_threads() {
        eprintln!("error: {msg}");
        return ExitCode::from(2);
    }
    match run(&cli) {
        Ok(report) => {
            let text = if cli.csv { report.to_csv() } else { report.to_json() };
            match &cli.out {
                Some(path) => {
                    if let Err(e) = std::fs::write(path, text) {
                        eprintln!("error: cannot write {}: {e}", path.display());
                        return ExitCode::from(2);
                    }
                }
                None => print!("{text}"),
            }
            ExitCode::from(report.exit_code() as u8)
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code(&e))
        }
    }
}

fn exit_code(e: &Error) -> u8 {
    match e {
        Error::CapExceeded { .. } | Error::Overflow(_) => 3,
        Error::Inconsistency(_) => 1,
        _ => 2,
    }
}

fn configure_threads() -> Result<(), String> {
    let Ok(raw) = std::env::var("HEISENBRICK_THREADS") else {
        return Ok(());
    };
    let threads: usize = raw
        .trim()
        .parse()
        .ok()
        .filter(|&t| t > 0)
        .ok_or_else(|| format!("HEISENBRICK_THREADS must be a positive integer, got {raw:?}"))?;
    rayon::ThreadPoolBuilder::new().num_threads(threads).build_global().map_err(|e| e.to_string())
}

fn run(cli: &Cli) -> heisenbrick::Result<Report> {
    if cli.brute_cap == 0 || cli.fiber_cap == 0 {
        return Err(Error::input("caps must be positive"));
    }
    let caps = Caps { brute: cli.brute_cap, fibers: cli.fiber_cap };
    match &cli.command {
        Command::Product => verify::product_report(&single_brick(cli)?, caps, cli.dump_fibers),
        Command::Period => verify::period_report(&single_brick(cli)?, caps),
        Command::Cosets => verify::cosets_report(&single_brick(cli)?, caps),
        Command::Sumprod => {
            let path = required_instance(cli)?;
            let spec: SumProdSpec = parse_json(path, &read(path)?)?;
            verify::sumprod_report(&spec.build()?)
        }
        Command::Verify { target } => match target {
            Target::Th1 => verify::verify_th1(&bricks(cli)?, caps),
            Target::Th13 => verify::verify_th13(&bricks(cli)?, caps),
            Target::Prop2 => verify::verify_prop2(required(cli.p, "--p")?, required(cli.n, "--n")?, caps),
            Target::SmallPeriod => verify::verify_small_period(required(cli.p, "--p")?, caps),
            Target::Lemmas => verify::verify_lemmas(required(cli.p, "--p")?, cli.n.unwrap_or(1), cli.seed, caps),
        },
    }
}

fn required<T>(v: Option<T>, flag: &str) -> heisenbrick::Result<T> {
    v.ok_or_else(|| Error::input(format!("{flag} is required for this command")))
}

fn required_instance(cli: &Cli) -> heisenbrick::Result<&Path> {
    cli.instance.as_deref().ok_or_else(|| Error::input("--instance is required for this command"))
}

fn read(path: &Path) -> heisenbrick::Result<String> {
    std::fs::read_to_string(path).map_err(|e| Error::input(format!("cannot read {}: {e}", path.display())))
}

fn parse_json<T: serde::de::DeserializeOwned>(path: &Path, text: &str) -> heisenbrick::Result<T> {
    serde_json::from_str(text).map_err(|e| {
        Error::input(format!("{}: line {}, column {}: {e}", path.display(), e.line(), e.column()))
    })
}

fn parse_bricks(path: &Path) -> heisenbrick::Result<Vec<Brick>> {
    let text = read(path)?;
    let specs: Vec<BrickSpec> = if text.trim_start().starts_with('[') {
        parse_json(path, &text)?
    } else {
        vec![parse_json(path, &text)?]
    };
    specs.iter().map(BrickSpec::build).collect()
}

fn single_brick(cli: &Cli) -> heisenbrick::Result<Brick> {
    let mut bricks = parse_bricks(required_instance(cli)?)?;
    if bricks.len() != 1 {
        return Err(Error::input(format!("expected one brick, found {}", bricks.len())));
    }
    Ok(bricks.remove(0))
}

/// The instance file if given, otherwise a seeded random suite at (p, n).
fn bricks(cli: &Cli) -> heisenbrick::Result<Vec<Brick>> {
    match &cli.instance {
        Some(path) => parse_bricks(path),
        None => random_suite(required(cli.p, "--p")?, required(cli.n, "--n")?, cli.count, cli.seed),
    }
}
