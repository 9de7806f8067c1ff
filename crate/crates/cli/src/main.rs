//! Command-line front end: single-point queries, Monte Carlo cross-checks,
//! config-driven sweeps, and the named preset grids.

use std::path::{Path, PathBuf};

use anyhow::{anyhow, bail};
use clap::{Args, Parser, Subcommand};

use opdc::config::{self, FileConfig, Overrides};
use opdc::csvout::{fmt_sig, render_csv, variant_name, write_atomic};
use opdc::run::{resolve_out_path, run_sweep_parallel};
use opdc_core::dynamics::{fixation_probability, DynamicsParams};
use opdc_core::payoff::{build_matrix, GameParams, IncentiveScheme};
use opdc_core::sim::{simulate_fixation, SimConfig, DEFAULT_MAX_STEPS};
use opdc_core::strategy::{enumerate_strategies, parse_strategy, GameVariant};
use opdc_core::sweep::{preset_figure, presets, run_point, Extras, PointRecord, RowExtras};

fn variant_arg(s: &str) -> Result<GameVariant, String> {
    config::parse_variant(s).ok_or_else(|| format!("expected opd or pd, got \"{s}\""))
}

fn scheme_arg(s: &str) -> Result<IncentiveScheme, String> {
    config::parse_scheme(s).ok_or_else(|| format!("expected none, strict, or flexible, got \"{s}\""))
}

/// Game and process parameters shared by every subcommand. Left unset, each
/// falls back to its built-in default; under `sweep` they override the file.
#[derive(Args, Clone, Debug)]
struct GameFlags {
    /// Strategy set: opd (exit available) or pd (exit-free baseline)
    #[arg(long, value_parser = variant_arg)]
    variant: Option<GameVariant>,

    /// Reward rule: none, strict, or flexible
    #[arg(long, value_parser = scheme_arg)]
    scheme: Option<IncentiveScheme>,

    /// Exit payoff, in [0, 1]
    #[arg(long)]
    sigma: Option<f64>,

    /// Commitment cost per player, >= 0
    #[arg(long)]
    epsilon: Option<f64>,

    /// Per-interaction reward to qualifying committed players, >= 0
    #[arg(long)]
    u: Option<f64>,

    /// Population size, >= 2
    #[arg(long = "M")]
    population: Option<usize>,

    /// Selection intensity, >= 0
    #[arg(long)]
    s: Option<f64>,
}

impl GameFlags {
    fn overrides(&self) -> Overrides {
        Overrides {
            variant: self.variant,
            scheme: self.scheme,
            sigma: self.sigma,
            epsilon: self.epsilon,
            u: self.u,
            population: self.population,
            selection: self.s,
            include_pd: None,
            out: None,
        }
    }

    /// Flags merged over the defaults and validated.
    fn resolve(&self) -> anyhow::Result<(GameParams, DynamicsParams)> {
        let (spec, _) = config::resolve(&FileConfig::default(), &self.overrides())?;
        warn_if_odd(&spec.game);
        Ok((spec.game, spec.dynamics))
    }
}

/// Soft parameter warnings go to stderr; they never block the run.
fn warn_if_odd(game: &GameParams) {
    if let Ok(Some(w)) = game.validate() {
        eprintln!("warning: {w}");
    }
}

fn preset_help() -> String {
    let mut s = String::from("Presets (all use M = 100, s = 0.1, 51 grid steps per axis):\n");
    for p in presets() {
        s.push_str(&format!("  {:<7} {}\n", p.name, p.description));
    }
    s
}

#[derive(Parser, Debug)]
#[command(
    name = "opdc",
    version,
    about = "Commitment games on an exit-option prisoner's dilemma: analytic phase grids plus Monte Carlo cross-checks"
)]
struct Cli {
    #[command(subcommand)]
    command: Cmd,
}

#[derive(Subcommand, Debug)]
enum Cmd {
    /// Print the payoff matrix for the chosen parameters as CSV
    Matrix {
        #[command(flatten)]
        game: GameFlags,
    },

    /// Print one analytic fixation probability
    Fixation {
        /// Resident strategy label, e.g. NDD
        #[arg(long)]
        resident: String,

        /// Mutant strategy label, e.g. ACC
        #[arg(long)]
        mutant: String,

        #[command(flatten)]
        game: GameFlags,
    },

    /// Solve one parameter point and print it as a single CSV row
    Stationary {
        #[command(flatten)]
        game: GameFlags,
    },

    /// Monte Carlo estimate of one fixation probability
    Simulate {
        /// Resident strategy label
        #[arg(long)]
        resident: String,

        /// Mutant strategy label
        #[arg(long)]
        mutant: String,

        #[command(flatten)]
        game: GameFlags,

        /// Independent absorption runs
        #[arg(long, default_value_t = 10_000)]
        runs: u64,

        /// Base seed for the per-run seed stream
        #[arg(long, default_value_t = 42)]
        seed: u64,

        /// Hard per-run step budget; exceeding it is an error
        #[arg(long, default_value_t = DEFAULT_MAX_STEPS)]
        max_steps: u64,
    },

    /// Run the sweep described by a config file; flags override file values
    Sweep {
        /// Config path: flat `key = value` lines, `#` comments,
        /// axes as `sweep.<param> = min:max:steps`
        #[arg(long)]
        config: PathBuf,

        #[command(flatten)]
        game: GameFlags,

        /// Also run the exit-free baseline at every point
        #[arg(long, value_name = "BOOL")]
        include_pd: Option<bool>,

        /// Output CSV path (default: sweep.csv in $OPDC_OUT_DIR or .)
        #[arg(long)]
        out: Option<PathBuf>,

        /// Worker threads (default: one per core)
        #[arg(long)]
        workers: Option<usize>,
    },

    /// Run a named preset grid and write its CSV
    #[command(after_help = preset_help())]
    Figure {
        /// Preset name (see --list)
        name: Option<String>,

        /// Output CSV path (default: <name>.csv in $OPDC_OUT_DIR or .)
        #[arg(long)]
        out: Option<PathBuf>,

        /// Override the per-axis grid resolution
        #[arg(long)]
        steps: Option<usize>,

        /// Worker threads (default: one per core)
        #[arg(long)]
        workers: Option<usize>,

        /// List preset names and exit
        #[arg(long)]
        list: bool,
    },
}

fn strategy_index(label: &str, variant: GameVariant) -> anyhow::Result<usize> {
    let wanted = parse_strategy(label)?;
    enumerate_strategies(variant)
        .iter()
        .position(|s| *s == wanted)
        .ok_or_else(|| {
            anyhow!(
                "strategy {} is outside the {} strategy set",
                wanted.label(),
                variant_name(variant)
            )
        })
}

fn cmd_matrix(flags: &GameFlags) -> anyhow::Result<()> {
    let (game, _) = flags.resolve()?;
    let matrix = build_matrix(&game);
    let mut out = String::new();
    for s in matrix.strategies() {
        out.push(',');
        out.push_str(&s.label());
    }
    out.push('\n');
    for (i, s) in matrix.strategies().iter().enumerate() {
        out.push_str(&s.label());
        for j in 0..matrix.q() {
            out.push(',');
            out.push_str(&fmt_sig(matrix.get(i, j)));
        }
        out.push('\n');
    }
    print!("{out}");
    Ok(())
}

fn cmd_fixation(resident: &str, mutant: &str, flags: &GameFlags) -> anyhow::Result<()> {
    let (game, dynamics) = flags.resolve()?;
    let matrix = build_matrix(&game);
    let res = strategy_index(resident, game.variant)?;
    let inv = strategy_index(mutant, game.variant)?;
    let rho = fixation_probability(&matrix, res, inv, &dynamics)?;
    println!("{}", fmt_sig(rho));
    Ok(())
}

fn cmd_stationary(flags: &GameFlags) -> anyhow::Result<()> {
    let (game, dynamics) = flags.resolve()?;
    let result = run_point(&game, &dynamics)?;
    let record = PointRecord { result, extras: RowExtras::default() };
    print!("{}", render_csv(&[record], Extras::None));
    Ok(())
}

fn cmd_simulate(
    resident: &str,
    mutant: &str,
    flags: &GameFlags,
    runs: u64,
    seed: u64,
    max_steps: u64,
) -> anyhow::Result<()> {
    let (game, dynamics) = flags.resolve()?;
    let matrix = build_matrix(&game);
    let res = strategy_index(resident, game.variant)?;
    let inv = strategy_index(mutant, game.variant)?;
    let mut cfg = SimConfig::new(&matrix, dynamics, runs, seed);
    cfg.max_steps_per_run = max_steps;
    let est = simulate_fixation(res, inv, &cfg)?;
    println!("p_hat,stderr,runs");
    println!("{},{},{}", fmt_sig(est.p_hat), fmt_sig(est.stderr), est.runs_used);
    Ok(())
}

fn cmd_sweep(
    config_path: &Path,
    flags: &GameFlags,
    include_pd: Option<bool>,
    out: Option<PathBuf>,
    workers: Option<usize>,
) -> anyhow::Result<()> {
    let file = config::parse_config_file(config_path)?;
    let mut cli = flags.overrides();
    cli.include_pd = include_pd;
    cli.out = out;
    let (spec, chosen_out) = config::resolve(&file, &cli)?;
    warn_if_odd(&spec.game);
    let records = run_sweep_parallel(&spec, workers)?;
    let csv = render_csv(&records, spec.extras);
    let path = resolve_out_path(chosen_out, "sweep.csv");
    write_atomic(&path, &csv)?;
    println!("wrote {} ({} rows)", path.display(), records.len());
    Ok(())
}

fn cmd_figure(
    name: Option<String>,
    out: Option<PathBuf>,
    steps: Option<usize>,
    workers: Option<usize>,
    list: bool,
) -> anyhow::Result<()> {
    if list {
        for p in presets() {
            println!("{:<7} {}", p.name, p.description);
        }
        return Ok(());
    }
    let name = name.ok_or_else(|| anyhow!("missing preset name; try --list"))?;
    let mut spec = preset_figure(&name)?;
    if let Some(n) = steps {
        if n < 2 {
            bail!("--steps must be at least 2, got {n}");
        }
        for axis in &mut spec.axes {
            axis.steps = n;
        }
    }
    let records = run_sweep_parallel(&spec, workers)?;
    let csv = render_csv(&records, spec.extras);
    let path = resolve_out_path(out, &format!("{name}.csv"));
    write_atomic(&path, &csv)?;
    println!("wrote {} ({} rows)", path.display(), records.len());
    Ok(())
}

fn main() {
    if let Err(e) = run() {
        eprintln!("error: {e:#}");
        std::process::exit(1);
    }
}

fn run() -> anyhow::Result<()> {
    match Cli::parse().command {
        Cmd::Matrix { game } => cmd_matrix(&game),
        Cmd::Fixation { resident, mutant, game } => cmd_fixation(&resident, &mutant, &game),
        Cmd::Stationary { game } => cmd_stationary(&game),
        Cmd::Simulate { resident, mutant, game, runs, seed, max_steps } => {
            cmd_simulate(&resident, &mutant, &game, runs, seed, max_steps)
        }
        Cmd::Sweep { config, game, include_pd, out, workers } => {
            cmd_sweep(&config, &game, include_pd, out, workers)
        }
        Cmd::Figure { name, out, steps, workers, list } => {
            cmd_figure(name, out, steps, workers, list)
        }
    }
}
