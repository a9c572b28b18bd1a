use clap::{Parser, Subcommand};
use eisver_cli::{cmd_inspect, cmd_scan, cmd_verify, Format, RunConfig, EXIT_USAGE};
use std::path::PathBuf;

#[derive(Parser)]
#[command(
    name = "eisver",
    about = "Verifies Eisenstein ideal, cuspidal group and rational torsion computations for Jacobians of modular curves of squarefree semiprime level"
)]
struct Cli {
    /// Directory for cached Hecke matrices (EISVER_CACHE_DIR overrides).
    #[arg(long, global = true)]
    cache_dir: Option<PathBuf>,

    /// Output format: json, csv or text.
    #[arg(long, global = true, default_value = "text")]
    format: String,

    /// Auxiliary-prime budget for torsion upper bounds.
    #[arg(long, global = true, default_value_t = eisver_core::torsion::DEFAULT_R_BUDGET)]
    r_budget: usize,

    /// Print witness data in text reports.
    #[arg(short, long, global = true)]
    verbose: bool,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run every applicable claim for one (p, q, ell) triple.
    Verify {
        #[arg(long)]
        p: u64,
        #[arg(long)]
        q: u64,
        #[arg(long)]
        ell: u64,
    },
    /// Run the whole grid of levels pq <= pq-max and primes ell <= ell-max.
    Scan {
        #[arg(long = "pq-max")]
        pq_max: u64,
        #[arg(long = "ell-max")]
        ell_max: u64,
        /// Write the report to a file instead of stdout.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Dump genus, cusps, Hecke matrices, ideal indices and the cuspidal
    /// group for one level.
    Inspect {
        #[arg(long = "N")]
        level: u64,
    },
}

fn main() {
    let cli = Cli::parse();
    let Some(format) = Format::parse(&cli.format) else {
        eprintln!("unknown format {:?}; expected json, csv or text", cli.format);
        std::process::exit(EXIT_USAGE);
    };
    if cli.r_budget == 0 {
        eprintln!("--r-budget must be positive");
        std::process::exit(EXIT_USAGE);
    }
    let cfg = RunConfig {
        cache_dir: RunConfig::resolve_cache_dir(cli.cache_dir),
        format,
        verbose: cli.verbose,
        r_budget: cli.r_budget,
    };
    let result = match cli.command {
        Command::Verify { p, q, ell } => cmd_verify(&cfg, p, q, ell),
        Command::Scan {
            pq_max,
            ell_max,
            out,
        } => cmd_scan(&cfg, pq_max, ell_max, out.as_ref()),
        Command::Inspect { level } => cmd_inspect(&cfg, level),
    };
    match result {
        Ok((output, code)) => {
            print!("{output}");
            std::process::exit(code);
        }
        Err(message) => {
            eprintln!("error: {message}");
            std::process::exit(EXIT_USAGE);
        }
    }
}
