//! Command-line entry point.

use std::ffi::OsString;
use std::fs::{self, File};
use std::io::BufWriter;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use serde::Serialize;

use crate::config::{parse_config, RunConfig};
use crate::dynamics::{integrate, matchings_on_support, surviving_profile_count};
use crate::error::{Error, Result};
use crate::export::{trajectory_svg, write_json, write_matchings_csv, write_payoffs_csv, write_shares_csv};
use crate::game::{build_game, Game};
use crate::stability::{analyze_matching, StabilityReport};
use crate::sweep::run_sweep_to_file;

pub const EXIT_OK: i32 = 0;
pub const EXIT_INVALID: i32 = 1;
pub const EXIT_UNDECIDED: i32 = 2;
pub const EXIT_DIVERGED: i32 = 3;

#[derive(Debug, Parser)]
#[command(name = "matchdyn", version, about = "Evolutionary dynamics of preference reports under deferred acceptance")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Integrate the dynamics and write trajectories.
    Simulate(Common),
    /// Write the payoff table of the reporting game.
    Payoffs(Common),
    /// Decide asymptotic and quasi-asymptotic stability of matchings.
    Stability(Common),
    /// Run the dynamics over every profile with some preferences fixed.
    Sweep(Common),
}

#[derive(Debug, Args)]
struct Common {
    #[arg(long)]
    config: PathBuf,
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long)]
    dt: Option<f64>,
    #[arg(long = "t-max")]
    t_max: Option<f64>,
    #[arg(long)]
    threads: Option<usize>,
    /// Also write SVG plots.
    #[arg(long)]
    svg: bool,
    /// Use every partial preimage in the quasi-stability search.
    #[arg(long)]
    exhaustive: bool,
}

enum Failure {
    Error(Error),
    Undecided,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Error(e)
    }
}

fn load(common: &Common, sweeping: bool) -> Result<RunConfig> {
    let text = fs::read_to_string(&common.config)?;
    let mut config = parse_config(&text)?;
    if let Some(dt) = common.dt {
        config.dynamics.dt = Some(dt);
    }
    if let Some(t) = common.t_max {
        if sweeping {
            config.sweep.t_max = Some(t);
        } else {
            config.dynamics.t_max = Some(t);
        }
    }
    if let Some(n) = common.threads {
        config.sweep.threads = Some(n);
    }
    if common.svg {
        config.output.svg = Some(true);
    }
    if common.exhaustive {
        config.stability.exhaustive = Some(true);
    }
    if let Some(out) = &common.out {
        config.output.dir = Some(out.to_string_lossy().into_owned());
    }
    config.validate()?;
    Ok(config)
}

fn out_dir(config: &RunConfig) -> Result<PathBuf> {
    let dir = PathBuf::from(config.output_dir());
    fs::create_dir_all(&dir)?;
    Ok(dir)
}

fn create(dir: &Path, name: &str) -> Result<BufWriter<File>> {
    Ok(BufWriter::new(File::create(dir.join(name))?))
}

fn game_of(config: &RunConfig) -> Result<Game> {
    build_game(
        &config.profile()?,
        &config.strategic_set()?,
        &config.utility()?,
        config.proposing()?,
    )
}

#[derive(Serialize)]
struct SimulationSummary {
    final_time: f64,
    stationary_onsets: Vec<f64>,
    stationary_times: Vec<f64>,
    final_survivors: Vec<Vec<String>>,
    surviving_profiles: usize,
    final_matchings: Vec<String>,
    final_distribution: Vec<(String, f64)>,
}

fn simulate(config: &RunConfig) -> std::result::Result<(), Failure> {
    let game = game_of(config)?;
    let spec = config.dynamics_spec()?;
    let x0 = config.initial_state(&game)?;
    let events = config.events(&game)?;
    let traj = integrate(&game, &spec, &x0, &events)?;
    let digest = config.digest();
    let dir = out_dir(config)?;
    write_shares_csv(&mut create(&dir, "shares.csv")?, &game, &traj, &digest)?;
    write_matchings_csv(&mut create(&dir, "matchings.csv")?, &traj, &digest)?;
    let last = traj.matching_shares.len() - 1;
    let summary = SimulationSummary {
        final_time: traj.final_time,
        stationary_onsets: traj.stationary_onsets.clone(),
        stationary_times: traj.stationary_times.clone(),
        final_survivors: traj
            .final_survivors
            .iter()
            .enumerate()
            .map(|(i, s)| s.iter().map(|&h| game.strategy_label(i, h)).collect())
            .collect(),
        surviving_profiles: surviving_profile_count(&traj.final_survivors),
        final_matchings: matchings_on_support(&game, &traj.final_survivors)
            .iter()
            .map(|m| m.label())
            .collect(),
        final_distribution: traj
            .outcomes
            .iter()
            .map(|m| m.label())
            .zip(traj.matching_shares[last].iter().copied())
            .collect(),
    };
    write_json(&mut create(&dir, "summary.json")?, &summary, &digest)?;
    if config.svg() {
        fs::write(dir.join("trajectory.svg"), trajectory_svg(&game, &traj, &digest)).map_err(Error::from)?;
    }
    println!(
        "t = {}: survivors {}, {} profiles",
        traj.final_time,
        summary.final_survivors.iter().map(|s| format!("{{{}}}", s.join(","))).collect::<Vec<_>>().join("x"),
        summary.surviving_profiles
    );
    Ok(())
}

fn payoffs(config: &RunConfig) -> std::result::Result<(), Failure> {
    let game = game_of(config)?;
    let dir = out_dir(config)?;
    write_payoffs_csv(&mut create(&dir, "payoffs.csv")?, &game, &config.digest())?;
    println!("{} profiles written", game.n_profiles());
    Ok(())
}

#[derive(Serialize)]
struct StabilityFile {
    reports: Vec<StabilityReport>,
}

fn stability(config: &RunConfig) -> std::result::Result<(), Failure> {
    let game = game_of(config)?;
    let limits = config.search_limits()?;
    let reports = config
        .matchings(&game)?
        .iter()
        .map(|m| analyze_matching(&game, m, &limits))
        .collect::<Result<Vec<_>>>()?;
    let dir = out_dir(config)?;
    for r in &reports {
        println!(
            "{}: preimage {}, asymptotic {:?}, quasi {:?}, stable {}",
            r.matching, r.preimage_size, r.asymptotically_stable, r.quasi_stable, r.stable
        );
    }
    let undecided = reports.iter().any(StabilityReport::is_undecided);
    write_json(&mut create(&dir, "stability.json")?, &StabilityFile { reports }, &config.digest())?;
    if undecided {
        return Err(Failure::Undecided);
    }
    Ok(())
}

fn sweep(config: &RunConfig) -> std::result::Result<(), Failure> {
    let sweep = config.sweep_config()?;
    let dir = out_dir(config)?;
    let digest = config.digest();
    let summary = run_sweep_to_file(&sweep, &dir.join(config.sweep_file()), &digest)?;
    write_json(&mut create(&dir, "sweep_summary.json")?, &summary, &digest)?;
    println!(
        "{} profiles: {} converged ({} with several matchings), {} fluctuating, {} diverged",
        summary.total, summary.converged, summary.non_unique, summary.fluctuating, summary.diverged
    );
    Ok(())
}

/// Parse arguments, run the command, return the process exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_INVALID } else { EXIT_OK };
        }
    };
    let (common, sweeping) = match &cli.command {
        Command::Sweep(c) => (c, true),
        Command::Simulate(c) | Command::Payoffs(c) | Command::Stability(c) => (c, false),
    };
    let outcome = load(common, sweeping).map_err(Failure::from).and_then(|config| {
        if let Some(n) = config.sweep.threads {
            // the global pool may already exist when called repeatedly
            let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
        }
        match cli.command {
            Command::Simulate(_) => simulate(&config),
            Command::Payoffs(_) => payoffs(&config),
            Command::Stability(_) => stability(&config),
            Command::Sweep(_) => sweep(&config),
        }
    });
    match outcome {
        Ok(()) => EXIT_OK,
        Err(Failure::Undecided) => {
            eprintln!("error: stability search cap reached; some results are undecided");
            EXIT_UNDECIDED
        }
        Err(Failure::Error(e)) => {
            eprintln!("error: {e}");
            match e {
                Error::Diverged { .. } => EXIT_DIVERGED,
                _ => EXIT_INVALID,
            }
        }
    }
}
