use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use log::{info, warn};

use schmidt_bec_cli::sweep::{self, GIB};
use schmidt_bec_cli::{cmd_ground_state, cmd_scales, cmd_sweep, cmd_verify, scales, CliError, RunConfig, DEFAULT_MEM_CAP_GIB};

#[derive(Parser)]
#[command(name = "schmidt-bec", version, about = "Schmidt decomposition of anisotropic BEC ground states")]
struct Cli {
    #[command(subcommand)]
    command: Command,

    /// Threads for sweep points.
    #[arg(long, global = true, default_value_t = default_workers())]
    workers: usize,

    /// Refuse solver grids whose working set exceeds this many GiB.
    #[arg(long = "mem-cap", global = true, default_value_t = DEFAULT_MEM_CAP_GIB)]
    mem_cap: f64,
}

#[derive(Subcommand)]
enum Command {
    /// Oscillator lengths, critical atom numbers and ε along the sweep.
    Scales {
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run every configured method at every N and write a CSV.
    Sweep {
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Relax one 3D ground state and write the field file and sidecar.
    GroundState {
        #[arg(long)]
        config: PathBuf,
        #[arg(long, default_value = "ground_state.bin")]
        out: PathBuf,
        /// Atom number; overrides `ground_state.n` in the config.
        #[arg(long)]
        atoms: Option<f64>,
    },
    /// Check a field file's norm, symmetry and sidecar.
    Verify {
        field: PathBuf,
    },
}

fn default_workers() -> usize {
    std::thread::available_parallelism().map(|n| n.get()).unwrap_or(1)
}

fn output(path: Option<&Path>) -> Result<Box<dyn Write>, CliError> {
    Ok(match path {
        Some(p) => Box::new(BufWriter::new(File::create(p)?)),
        None => Box::new(io::stdout().lock()),
    })
}

fn run(cli: Cli) -> Result<(), CliError> {
    match cli.command {
        Command::Scales { config, out } => {
            let cfg = RunConfig::load(&config)?;
            let rows = cmd_scales(&cfg)?;
            eprint!("{}", scales::summary(&rows));
            let target = out.or(cfg.output.clone());
            scales::write_csv(&cfg, &rows, output(target.as_deref())?)
        }
        Command::Sweep { config, out } => {
            let cfg = RunConfig::load(&config)?;
            if !(cli.mem_cap > 0.0) {
                return Err(CliError::Config("--mem-cap must be positive".into()));
            }
            sweep::check_memory(&cfg, (cli.mem_cap * GIB) as u64)?;
            let rows = cmd_sweep(&cfg, cli.workers)?;
            let target = out.or(cfg.output.clone());
            sweep::write_csv(&cfg, &rows, output(target.as_deref())?)?;
            let failed = rows.iter().filter(|r| r.error.is_some()).count();
            if failed > 0 {
                return Err(CliError::Numerical(format!("{failed} of {} rows failed", rows.len())));
            }
            Ok(())
        }
        Command::GroundState { config, out, atoms } => {
            let cfg = RunConfig::load(&config)?;
            let n = atoms
                .or(cfg.ground_state_n)
                .ok_or_else(|| CliError::Config("ground_state.n: required (or pass --atoms)".into()))?;
            if !(n >= 1.0) {
                return Err(CliError::Config(format!("--atoms must be ≥ 1, got {n}")));
            }
            let grid = sweep::solver_grid(&cfg, &cfg.problem(n)).map_err(|e| CliError::Config(format!("grid: {e}")))?;
            let need = grid.relaxation_memory_bytes() as f64;
            if need > cli.mem_cap * GIB {
                return Err(CliError::Config(format!(
                    "grid.points: needs about {:.2} GiB, above the {:.2} GiB cap",
                    need / GIB,
                    cli.mem_cap
                )));
            }
            let sidecar = cmd_ground_state(&cfg, n, &out)?;
            info!("wrote {}", out.display());
            println!("{}", serde_json::to_string_pretty(&sidecar)?);
            Ok(())
        }
        Command::Verify { field } => {
            let report = cmd_verify(&field)?;
            if report.sidecar_matches.is_none() {
                warn!("no sidecar found next to {}", field.display());
            }
            println!("{}", serde_json::to_string_pretty(&report)?);
            Ok(())
        }
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
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
