use clap::{Args, Parser, Subcommand};
use ncgf::cli::{execute, ChartName, Command, GroupName, RunConfig};
use std::path::PathBuf;
use std::process::ExitCode;

#[derive(Parser)]
#[command(name = "ncgf", version, about = "Group Fourier transforms, star products and path-integral propagators")]
struct Cli {
    #[command(subcommand)]
    command: Sub,
}

#[derive(Subcommand)]
enum Sub {
    /// Run the validation suite for a group and chart.
    Validate(Common),
    /// Transform a Gaussian test function and sample it along the first dual axis.
    Transform(Common),
    /// Tabulate ⋆-products of coordinate functions.
    Star(Common),
    /// Compose the short-time kernel and write kernel.csv, ladder.csv, report.json.
    Propagate(Common),
    /// Compare a propagate run in --out against the exact kernel or --reference.
    Compare(Common),
}

#[derive(Args)]
struct Common {
    /// JSON run configuration; flags override its values.
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long, value_enum)]
    group: Option<GroupName>,
    #[arg(long, value_enum)]
    chart: Option<ChartName>,
    /// Output directory.
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long)]
    seed: Option<u64>,
    /// Worker threads (default: all cores).
    #[arg(long, env = "NCGF_THREADS")]
    threads: Option<usize>,
    /// Grid nodes per dimension.
    #[arg(long)]
    n: Option<usize>,
    /// Earlier run directory to compare against.
    #[arg(long)]
    reference: Option<PathBuf>,
}

fn build_config(command: Command, args: Common) -> ncgf::Result<RunConfig> {
    let mut config = match &args.config {
        Some(path) => RunConfig::from_file(path)?,
        None => RunConfig::default(),
    };
    config.command = Some(command);
    if let Some(g) = args.group {
        config.group = g;
    }
    if let Some(c) = args.chart {
        config.chart = c;
    }
    if let Some(o) = args.out {
        config.out = o;
    }
    if let Some(s) = args.seed {
        config.seed = s;
    }
    if args.threads.is_some() {
        config.threads = args.threads;
    }
    if args.n.is_some() {
        config.n = args.n;
    }
    if args.reference.is_some() {
        config.reference = args.reference;
    }
    Ok(config)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let (command, args) = match cli.command {
        Sub::Validate(a) => (Command::Validate, a),
        Sub::Transform(a) => (Command::Transform, a),
        Sub::Star(a) => (Command::Star, a),
        Sub::Propagate(a) => (Command::Propagate, a),
        Sub::Compare(a) => (Command::Compare, a),
    };
    let config = match build_config(command, args) {
        Ok(c) => c,
        Err(e) => {
            eprintln!("ncgf: {e}");
            return ExitCode::from(2);
        }
    };
    if let Some(n) = config.threads {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(n).build_global() {
            eprintln!("ncgf: {e}");
            return ExitCode::from(2);
        }
    }
    match execute(&config) {
        Ok(report) => {
            for c in &report.checks {
                let status = if c.pass { "PASS" } else { "FAIL" };
                println!("{status} {} {:.6e} {} {:.6e}", c.name, c.value, c.comparison, c.tolerance);
            }
            println!("{} {}", if report.pass { "ok" } else { "failed" }, config.out.display());
            ExitCode::from(report.exit_code() as u8)
        }
        Err(e) => {
            eprintln!("ncgf: {e}");
            ExitCode::from(2)
        }
    }
}
