use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use chsh_atlas_cli::{
    cmd_analyze, cmd_curves, cmd_sample, cmd_scan, cmd_settings, parse_grid, sampler_config,
    CliError, CliResult,
};
use clap::{Args, Parser, Subcommand};

/// Entanglement, mixedness and CHSH violation of two-qubit states.
#[derive(Debug, Parser)]
#[command(name = "chsh-atlas", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Linear entropy, concurrence, m, fidelity and maximal Bell value of a state file.
    Analyze { path: PathBuf },
    /// Measurement directions attaining the maximal CHSH value for a state file.
    Settings { path: PathBuf },
    /// Emit (s, c, m) for sampled states as CSV.
    Sample(SampleArgs),
    /// Bin sampled states over the (s, c) plane and classify each cell.
    Scan {
        #[command(flatten)]
        sample: SampleArgs,
        /// Grid resolution as SxC.
        #[arg(long, default_value = "100x100")]
        grid: String,
    },
    /// Reference curves m(s) and c(s) on a uniform grid over [0, 2/3].
    Curves {
        #[arg(long, default_value_t = 101)]
        points: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Debug, Args)]
struct SampleArgs {
    /// hs | boundary | e0 | e1 | werner
    #[arg(long = "gen")]
    generator: String,
    #[arg(short = 'n', long = "count")]
    count: u64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Smallest-eigenvalue bound, boundary generator only.
    #[arg(long)]
    epsilon: Option<f64>,
    /// Worker threads (default: all cores); output does not depend on it.
    #[arg(long)]
    threads: Option<usize>,
    #[arg(long)]
    out: Option<PathBuf>,
}

fn emit(text: &str, out: Option<&Path>) -> CliResult<()> {
    let result = match out {
        Some(path) => std::fs::write(path, text),
        None => std::io::stdout().lock().write_all(text.as_bytes()),
    };
    result.map_err(|e| CliError::Runtime(format!("cannot write output: {e}")))
}

fn with_threads<T: Send>(
    threads: Option<usize>,
    f: impl FnOnce() -> CliResult<T> + Send,
) -> CliResult<T> {
    match threads {
        None => f(),
        Some(0) => Err(CliError::Usage("--threads must be at least 1".into())),
        Some(n) => rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build()
            .map_err(|e| CliError::Runtime(e.to_string()))?
            .install(f),
    }
}

fn run(cli: Cli) -> CliResult<()> {
    match cli.command {
        Command::Analyze { path } => emit(&cmd_analyze(&path)?, None),
        Command::Settings { path } => emit(&cmd_settings(&path)?, None),
        Command::Sample(args) => {
            let config = sampler_config(&args.generator, args.count, args.seed, args.epsilon)?;
            let csv = with_threads(args.threads, || cmd_sample(&config))?;
            emit(&csv, args.out.as_deref())
        }
        Command::Scan { sample: args, grid } => {
            let config = sampler_config(&args.generator, args.count, args.seed, args.epsilon)?;
            let spec = parse_grid(&grid)?;
            let (csv, summary) = with_threads(args.threads, || cmd_scan(&config, spec))?;
            eprintln!("{summary}");
            emit(&csv, args.out.as_deref())
        }
        Command::Curves { points, out } => emit(&cmd_curves(points)?, out.as_deref()),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
