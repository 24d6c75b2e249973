//! qanneal: finite-time quantum annealing sweeps, crossover reports, and
//! regime phase diagrams as reproducible CSV.

mod commands;
mod config;
mod error;
mod output;

use clap::{Args, Parser, Subcommand};
use config::{AptForm, CurveKind, Model, PhaseModeConfig, ProtocolKindConfig, RunConfig};
use error::{CliError, Result};
use std::path::PathBuf;
use std::process::ExitCode;

#[derive(Parser)]
#[command(
    name = "qanneal",
    version,
    about = "Finite-time quantum annealing: exact mode dynamics vs closed-form estimates"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
enum TauUnits {
    Scaled,
    Raw,
}

#[derive(Args)]
struct CommonArgs {
    /// TOML config file; flags override its values
    #[arg(long)]
    config: Option<PathBuf>,
    /// Coupling energy J
    #[arg(long)]
    j: Option<f64>,
    /// Drive strength Delta
    #[arg(long)]
    delta: Option<f64>,
    /// Set Delta as a multiple of J (wins over --delta)
    #[arg(long)]
    delta_over_j: Option<f64>,
    /// Chain size N (even)
    #[arg(long)]
    n_spins: Option<usize>,
    /// Control protocol
    #[arg(long, value_enum)]
    protocol: Option<ProtocolKindConfig>,
    /// CSV of s,a,b samples for the two-parameter protocol
    #[arg(long)]
    schedule_file: Option<PathBuf>,
    #[arg(long)]
    tau_min: Option<f64>,
    #[arg(long)]
    tau_max: Option<f64>,
    #[arg(long)]
    tau_count: Option<usize>,
    /// Whether --tau-min/--tau-max are scaled durations or raw times
    #[arg(long, value_enum)]
    tau_units: Option<TauUnits>,
    /// Comma-separated curve list (default: all valid for the run)
    #[arg(long, value_delimiter = ',')]
    curves: Option<Vec<CurveKind>>,
    #[arg(long, value_enum)]
    phase_mode: Option<PhaseModeConfig>,
    #[arg(long, value_enum)]
    apt_form: Option<AptForm>,
    /// Output file (relative paths resolve under $QANNEAL_OUT_DIR)
    #[arg(long)]
    out: Option<PathBuf>,
    /// Worker threads (default: all cores)
    #[arg(long)]
    threads: Option<usize>,
    #[arg(long)]
    steps_per_unit_phase: Option<u32>,
    #[arg(long)]
    norm_drift_tol: Option<f64>,
    #[arg(long)]
    min_steps: Option<u32>,
}

impl CommonArgs {
    fn build_config(&self) -> Result<RunConfig> {
        let mut config = match &self.config {
            Some(path) => RunConfig::load(path)?,
            None => RunConfig::default(),
        };
        if let Some(j) = self.j {
            config.params.j = j;
        }
        if let Some(delta) = self.delta {
            config.params.delta = delta;
        }
        if let Some(ratio) = self.delta_over_j {
            config.params.delta = ratio * config.params.j;
        }
        if let Some(n) = self.n_spins {
            config.params.n = n;
        }
        if let Some(kind) = self.protocol {
            config.protocol.kind = kind;
        }
        if let Some(path) = &self.schedule_file {
            config.protocol.schedule_file = Some(path.clone());
            config.protocol.kind = ProtocolKindConfig::TwoParameter;
        }
        if let Some(v) = self.tau_min {
            config.tau.min = v;
        }
        if let Some(v) = self.tau_max {
            config.tau.max = v;
        }
        if let Some(v) = self.tau_count {
            config.tau.count = v;
        }
        if let Some(units) = self.tau_units {
            config.tau.scaled = units == TauUnits::Scaled;
        }
        if let Some(curves) = &self.curves {
            config.curves = curves.clone();
        }
        if let Some(m) = self.phase_mode {
            config.phase_mode = Some(m);
        }
        if let Some(a) = self.apt_form {
            config.apt_form = Some(a);
        }
        if let Some(out) = &self.out {
            config.output = Some(out.clone());
        }
        if let Some(v) = self.steps_per_unit_phase {
            config.integrator.steps_per_unit_phase = v;
        }
        if let Some(v) = self.norm_drift_tol {
            config.integrator.norm_drift_tol = v;
        }
        if let Some(v) = self.min_steps {
            config.integrator.min_steps = v;
        }
        Ok(config)
    }
}

#[derive(Args)]
struct CrossoverArgs {
    #[command(flatten)]
    common: CommonArgs,
    /// Which model's crossovers to report
    #[arg(long, value_enum, default_value = "ti")]
    model: Model,
    /// Use the protocol that stops at the critical point
    #[arg(long)]
    half: bool,
}

#[derive(Args)]
struct PhaseDiagramArgs {
    #[command(flatten)]
    common: CommonArgs,
    #[arg(long, default_value_t = 10)]
    n_min: usize,
    #[arg(long, default_value_t = 1000)]
    n_max: usize,
    #[arg(long, default_value_t = 16)]
    n_count: usize,
    #[arg(long, default_value_t = 1.0)]
    diag_tau_min: f64,
    #[arg(long, default_value_t = 1e7)]
    diag_tau_max: f64,
    #[arg(long, default_value_t = 48)]
    diag_tau_count: usize,
}

#[derive(Args)]
struct SweepArgs {
    #[command(flatten)]
    common: CommonArgs,
    /// Comma-separated N:delta-over-j pairs, e.g. 50:1,100:1.5
    #[arg(long, default_value = "")]
    pairs: String,
    /// Directory for per-pair CSVs and the manifest
    #[arg(long, default_value = "sweep")]
    out_dir: PathBuf,
}

#[derive(Subcommand)]
enum Command {
    /// Excess-work sweep of the driven two-level crossing
    LzWork(CommonArgs),
    /// Excess-work sweep of the transverse-field chain
    TiWork(CommonArgs),
    /// Regime-boundary durations (closed-form and numeric)
    Crossover(CrossoverArgs),
    /// (N, tau) regime map with boundary curves
    PhaseDiagram(PhaseDiagramArgs),
    /// Batch chain sweeps over (N, delta-over-j) pairs
    Sweep(SweepArgs),
}

fn init_threads(threads: Option<usize>) -> Result<()> {
    #[cfg(feature = "parallel")]
    if let Some(n) = threads {
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
            .map_err(|e| CliError::Config(format!("thread pool: {e}")))?;
    }
    #[cfg(not(feature = "parallel"))]
    if threads.is_some_and(|n| n > 1) {
        eprintln!("note: built without the parallel feature; --threads ignored");
    }
    Ok(())
}

fn run(cli: Cli) -> Result<()> {
    match cli.command {
        Command::LzWork(common) => {
            init_threads(common.threads)?;
            let config = common.build_config()?;
            let path = commands::lz_work::run(&config)?;
            eprintln!("wrote {}", path.display());
        }
        Command::TiWork(common) => {
            init_threads(common.threads)?;
            let config = common.build_config()?;
            let path = commands::ti_work::run(&config)?;
            eprintln!("wrote {}", path.display());
        }
        Command::Crossover(args) => {
            init_threads(args.common.threads)?;
            let config = args.common.build_config()?;
            commands::crossover::run(&config, args.model, args.half)?;
        }
        Command::PhaseDiagram(args) => {
            init_threads(args.common.threads)?;
            let config = args.common.build_config()?;
            let grid = commands::phase_diagram::GridArgs {
                n_min: args.n_min,
                n_max: args.n_max,
                n_count: args.n_count,
                tau_min: args.diag_tau_min,
                tau_max: args.diag_tau_max,
                tau_count: args.diag_tau_count,
            };
            for path in commands::phase_diagram::run(&config, &grid)? {
                eprintln!("wrote {}", path.display());
            }
        }
        Command::Sweep(args) => {
            init_threads(args.common.threads)?;
            let config = args.common.build_config()?;
            let pairs = commands::sweep::parse_pairs(&args.pairs)?;
            let manifest = commands::sweep::run(&config, &pairs, &args.out_dir)?;
            eprintln!("wrote {}", manifest.display());
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}
