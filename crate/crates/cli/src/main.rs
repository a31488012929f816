use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, ValueEnum};
use gaplab_cli::format::parse_count;
use gaplab_cli::{run, CliError, GSource, RefSource, RunConfig, Subcommand};

#[derive(Debug, Parser)]
#[command(name = "gaplab", version, about = "Prime gaps, Andrica differences and maximal-gap records")]
struct Args {
    #[command(subcommand)]
    command: Command,

    /// Scan bound: pairs (p, q) with q < N (plain or scientific, e.g. 1e9)
    #[arg(long, global = true, value_parser = parse_count)]
    limit: Option<u64>,
    /// Number of rows for table2
    #[arg(long, global = true, default_value_t = 10)]
    top: usize,
    /// Reference record table (`bundled` for the built-in list)
    #[arg(long = "ref", global = true)]
    reference: Option<String>,
    /// Output file (default: standard output)
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Gap model for figure1: auto, wolf, gauss, cramer, granville
    #[arg(long, global = true)]
    model: Option<String>,
    /// Source of G(x) for the figure1 prediction
    #[arg(long, global = true, value_enum, default_value_t = GSourceArg::Model)]
    g_source: GSourceArg,
    /// Sieve segment length in odd entries
    #[arg(long, global = true, value_parser = parse_count)]
    segment: Option<u64>,
    /// Worker threads for sieving
    #[arg(long, global = true)]
    threads: Option<usize>,
    /// Also write a gnuplot script for the figure
    #[arg(long, global = true)]
    emit_gnuplot: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum GSourceArg {
    Model,
    Empirical,
}

#[derive(Debug, clap::Subcommand)]
enum Command {
    /// Consecutive-prime pairs with their Andrica differences (9 decimals)
    Table1,
    /// Largest Andrica differences, descending (7 decimals)
    Table2,
    /// Maximal-gap records, optionally merged with a reference table
    Records,
    /// First occurrence of every gap size
    FirstGaps,
    /// Check that every Andrica difference is below 1
    Verify,
    /// Twin-prime constant and derived coefficients
    Constants {
        /// Truncation bound of the twin-prime product
        #[arg(long, value_parser = parse_count)]
        prime_limit: Option<u64>,
    },
    /// Evaluate a single predictor
    Predict {
        /// Predictor name, e.g. r_kernel, g_wolf, r_main_gauss
        name: String,
        /// Argument x (or d for gap-indexed predictors)
        x: f64,
        /// π(x) for the exact-π models; computed when omitted
        pi_x: Option<f64>,
    },
    /// R(x) at maximal gaps with the main prediction
    Figure1,
    /// R(x) at maximal gaps with the Cramér and Shanks forms
    Figure2,
}

fn config(args: Args) -> Result<RunConfig, CliError> {
    let subcommand = match &args.command {
        Command::Table1 => Subcommand::Table1,
        Command::Table2 => Subcommand::Table2,
        Command::Records => Subcommand::Records,
        Command::FirstGaps => Subcommand::FirstGaps,
        Command::Verify => Subcommand::Verify,
        Command::Constants { .. } => Subcommand::Constants,
        Command::Predict { .. } => Subcommand::Predict,
        Command::Figure1 => Subcommand::Figure1,
        Command::Figure2 => Subcommand::Figure2,
    };
    let mut cfg = RunConfig::new(subcommand);
    cfg.set_limit(args.limit);
    cfg.top_k = args.top;
    cfg.model = args.model;
    cfg.g_source = match args.g_source {
        GSourceArg::Model => GSource::Model,
        GSourceArg::Empirical => GSource::Empirical,
    };
    cfg.reference = args.reference.as_deref().map(RefSource::parse);
    cfg.output = args.out;
    cfg.gnuplot = args.emit_gnuplot;
    if let Some(seg) = args.segment {
        cfg.segment_length = usize::try_from(seg)
            .map_err(|_| CliError::Usage(format!("--segment {seg} is too large")))?;
    }
    cfg.threads = args.threads.unwrap_or_else(|| {
        std::thread::available_parallelism().map_or(1, |n| n.get())
    });
    match args.command {
        Command::Constants { prime_limit } => cfg.prime_limit = prime_limit,
        Command::Predict { name, x, pi_x } => {
            cfg.model = Some(name);
            cfg.x = Some(x);
            cfg.pi_x = pi_x;
        }
        _ => {}
    }
    Ok(cfg)
}

fn main() -> ExitCode {
    let args = Args::parse();
    let result = config(args).and_then(|cfg| run(&cfg));
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("gaplab: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
