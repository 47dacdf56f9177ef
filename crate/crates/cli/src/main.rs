//! `persifold`: approximate extremum persistence diagrams of grid scalar
//! fields with a guaranteed bottleneck error bound.

mod benchmark;
mod header;
mod io;
mod run;
mod svg;

use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Parser, ValueEnum};

use persifold::PairSelector;

#[derive(Clone, Copy, PartialEq, Eq, Debug, ValueEnum)]
enum PairsArg {
    MinSaddle,
    SaddleMax,
    Both,
}

impl From<PairsArg> for PairSelector {
    fn from(p: PairsArg) -> PairSelector {
        match p {
            PairsArg::MinSaddle => PairSelector::MinSaddle,
            PairsArg::SaddleMax => PairSelector::SaddleMax,
            PairsArg::Both => PairSelector::Both,
        }
    }
}

/// Approximate persistence diagrams of scalar fields on regular grids.
///
/// Reads a raw little-endian payload described by a JSON sidecar header,
/// sweeps the multiresolution hierarchy with vertex folding under the
/// requested error tolerance, and writes the diagram (CSV), the
/// approximated field (raw + header) and an SVG rendering with
/// uncertainty glyphs.
#[derive(Parser, Debug)]
#[command(name = "persifold", version, about)]
struct Args {
    /// Raw little-endian scalar payload.
    #[arg(long)]
    input: Option<PathBuf>,

    /// JSON sidecar header (defaults to `<input>.json`).
    #[arg(long)]
    header: Option<PathBuf>,

    /// Error tolerance as a percentage of the data range.
    #[arg(long, default_value_t = 0.0)]
    epsilon: f64,

    /// Error tolerance in absolute field units (overrides --epsilon).
    #[arg(long)]
    epsilon_abs: Option<f64>,

    /// Which finite pair families to compute.
    #[arg(long, value_enum, default_value_t = PairsArg::Both)]
    pairs: PairsArg,

    /// Worker threads.
    #[arg(long, default_value_t = 1)]
    threads: usize,

    /// Where to write the diagram CSV.
    #[arg(long)]
    out_diagram: Option<PathBuf>,

    /// Where to write the approximated field (header goes to `<path>.json`).
    #[arg(long)]
    out_field: Option<PathBuf>,

    /// Where to write the SVG rendering of the diagram.
    #[arg(long)]
    out_svg: Option<PathBuf>,

    /// Also compute the exact diagram and report accuracy metrics.
    #[arg(long)]
    compare: bool,

    /// Also run the staircase quantization baseline (implies --compare).
    #[arg(long)]
    baseline: bool,

    /// Run the benchmark suite over built-in synthetic datasets (plus
    /// --input when given); --out-diagram receives the benchmark CSV.
    #[arg(long)]
    benchmark: bool,

    /// Seed for the synthetic benchmark datasets.
    #[arg(long, default_value_t = 42)]
    seed: u64,
}

fn main() -> ExitCode {
    let args = Args::parse();
    match execute(args) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::FAILURE
        }
    }
}

fn execute(args: Args) -> Result<()> {
    if args.threads < 1 {
        bail!("--threads must be at least 1");
    }
    if !(0.0..=100.0).contains(&args.epsilon) {
        bail!("--epsilon must lie in [0, 100] (a percentage of the data range)");
    }
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(args.threads)
        .build()
        .context("building thread pool")?;

    if args.benchmark {
        let input = match &args.input {
            Some(input) => {
                let header = header_path(input, &args.header);
                Some((input.clone(), header))
            }
            None => None,
        };
        let cfg = benchmark::BenchConfig {
            seed: args.seed,
            baseline: args.baseline,
            input,
            out_csv: args.out_diagram.clone(),
        };
        return pool.install(|| benchmark::run_benchmark(&cfg));
    }

    let input = args
        .input
        .as_ref()
        .context("--input is required (or use --benchmark)")?;
    let header = header_path(input, &args.header);
    let cfg = run::RunConfig {
        epsilon_percent: args.epsilon,
        epsilon_abs: args.epsilon_abs,
        pairs: args.pairs.into(),
        compare: args.compare || args.baseline,
        baseline: args.baseline,
        out_diagram: args.out_diagram.clone(),
        out_field: args.out_field.clone(),
        out_svg: args.out_svg.clone(),
    };
    pool.install(|| {
        let (output, volume_header) = run::execute_file(input, &header, &cfg)?;
        run::print_summary(&output);
        run::emit_artifacts(&output, &volume_header, &cfg)?;
        if cfg.compare {
            run::print_report(&output)?;
        }
        Ok(())
    })
}

fn header_path(input: &std::path::Path, explicit: &Option<PathBuf>) -> PathBuf {
    explicit.clone().unwrap_or_else(|| run::sidecar_path(input))
}
