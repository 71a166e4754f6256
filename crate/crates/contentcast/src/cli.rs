//! Command-line interface.

use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use contentcast_core::catalog::{bandwidth_lower_bound, bandwidth_upper_bound, requested_lower_bound};
use contentcast_core::workload::{generate_catalog, generate_trace, TraceConfig, ZipfParams};
use contentcast_core::{CacheSpec, ConvergedConfig, DeliveryPlan, WirelessBudget};
use serde::Serialize;

use crate::crowd_io::{self, Solver};
use crate::error::{CliError, Result};
use crate::experiment::{default_sweep_sched, run_experiment, ExperimentConfig, WorkloadSpec};
use crate::fig7::{fig7_rows, write_fig7_csv, Fig7Config};
use crate::files;
use crate::pet_io::{self, RhoSpec};
use crate::scenario::{write_report_csv, Scenario};
use crate::sim::{check_plan, default_converged, run_planner, Planner};
use crate::sweep::{run_sweep, write_sweep_csv, Vary};

/// Content-centric wireless delivery: PET coding, content-rate bounds,
/// converged push/unicast simulation and NSP crowdsourcing.
///
/// Exit codes: 0 ok, 2 configuration error, 3 I/O error, 4 internal
/// invariant violation. `CONTENTCAST_THREADS` caps sweep parallelism
/// (0 or unset = one thread per core).
#[derive(Debug, Parser)]
#[command(name = "contentcast", version)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Priority encoding transmission of files into packets and back.
    #[command(subcommand)]
    Pet(PetCommand),
    /// Synthetic Zipf workloads.
    #[command(subcommand)]
    Workload(WorkloadCommand),
    /// Delivery planning, replay and capacity sweeps.
    #[command(subcommand)]
    Sim(SimCommand),
    /// Matching distribution tasks to NSP offers.
    #[command(subcommand)]
    Crowd(CrowdCommand),
    /// Minimum (broadcast) and maximum (unicast) bandwidth of a scenario.
    Bounds(BoundsArgs),
    /// Users-per-cell curves against broadcast bandwidth.
    Fig7(Fig7Args),
    /// Run an experiment config: scenario report and sweep CSV.
    Run(RunArgs),
}

#[derive(Debug, Subcommand)]
pub enum PetCommand {
    /// Encode files, one segment each, into N packets.
    Encode(PetEncodeArgs),
    /// Decode every segment the given packets allow.
    Decode(PetDecodeArgs),
}

#[derive(Debug, Args)]
pub struct PetEncodeArgs {
    /// Input files, one segment each, in priority order for `--rho auto`.
    #[arg(long = "in", required = true, num_args = 1..)]
    pub inputs: Vec<PathBuf>,
    /// Comma-separated priorities in (0, 1], one per input, or `auto`.
    #[arg(long, default_value = "auto")]
    pub rho: String,
    /// Smallest priority `auto` assigns, in (0, 1].
    #[arg(long, default_value_t = 0.25)]
    pub rho_floor: f64,
    /// Number of packets N, 1..=255.
    #[arg(long)]
    pub n: usize,
    /// Output directory for layout.json and packet_NNN.pet.
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Debug, Args)]
pub struct PetDecodeArgs {
    /// Layout JSON written by `pet encode`.
    #[arg(long)]
    pub layout: PathBuf,
    /// Packet files; any subset, any order.
    #[arg(long, num_args = 0..)]
    pub packets: Vec<PathBuf>,
    /// Output directory for segments and status.json. Defaults to the
    /// layout's directory.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Subcommand)]
pub enum WorkloadCommand {
    /// Generate a scenario with a Zipf-distributed request trace.
    Gen(WorkloadGenArgs),
}

#[derive(Debug, Args)]
pub struct WorkloadGenArgs {
    /// Catalog length L.
    #[arg(long = "L")]
    pub n_items: usize,
    /// Zipf exponent s >= 0.
    #[arg(long)]
    pub s: f64,
    /// Number of users K.
    #[arg(long)]
    pub users: usize,
    /// Horizon T in seconds.
    #[arg(long = "T")]
    pub horizon_s: f64,
    /// Seed of the trace.
    #[arg(long)]
    pub seed: u64,
    /// Scenario JSON to write.
    #[arg(long)]
    pub out: PathBuf,
    /// Size of every object in bits.
    #[arg(long, default_value_t = 100)]
    pub size_bits: u64,
    /// Distinct objects per request.
    #[arg(long, default_value_t = 1)]
    pub objects_per_request: usize,
    /// Requests per user.
    #[arg(long, default_value_t = 1)]
    pub requests_per_user: usize,
    /// Requests fall in (earliest, T].
    #[arg(long, default_value_t = 0.0)]
    pub earliest: f64,
    /// Scenario bandwidth in Hz. Defaults to the unicast bound.
    #[arg(long)]
    pub bandwidth: Option<f64>,
    /// Per-user cache in bits, or `inf`.
    #[arg(long, default_value = "inf")]
    pub cache: String,
    /// Link rate in b/s/Hz.
    #[arg(long, default_value_t = 1.0)]
    pub link_rate: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum PlannerArg {
    Converged,
    Unicast,
    Broadcast,
}

impl From<PlannerArg> for Planner {
    fn from(p: PlannerArg) -> Self {
        match p {
            PlannerArg::Converged => Planner::Converged,
            PlannerArg::Unicast => Planner::Unicast,
            PlannerArg::Broadcast => Planner::Broadcast,
        }
    }
}

#[derive(Debug, Subcommand)]
pub enum SimCommand {
    /// Plan a scenario and replay the plan.
    Run(SimRunArgs),
    /// Replay a given plan on a scenario's shared budget.
    Check(SimCheckArgs),
    /// Users per cell across a parameter range.
    Sweep(SimSweepArgs),
}

#[derive(Debug, Args)]
pub struct SimRunArgs {
    /// Scenario JSON.
    #[arg(long)]
    pub scenario: PathBuf,
    /// Converged config JSON. Its cache and link rate are replaced by the
    /// scenario's; without it all bandwidth goes to unicast.
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// Planner to run.
    #[arg(long, value_enum, default_value_t = PlannerArg::Converged)]
    pub planner: PlannerArg,
    /// Report JSON to write.
    #[arg(long)]
    pub out: PathBuf,
    /// Also write the report as one CSV row.
    #[arg(long)]
    pub csv: Option<PathBuf>,
    /// Also write the plan JSON.
    #[arg(long)]
    pub plan_out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct SimCheckArgs {
    /// Scenario JSON.
    #[arg(long)]
    pub scenario: PathBuf,
    /// Plan JSON, as written by `sim run --plan-out`.
    #[arg(long)]
    pub plan: PathBuf,
    /// Report JSON to write; stdout if omitted.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct SimSweepArgs {
    /// `b_broadcast|b_cellular|cache_bits=start:step:stop` or `=v1,v2,...`.
    #[arg(long)]
    pub vary: String,
    /// Comma-separated Zipf exponents.
    #[arg(long, value_delimiter = ',', default_value = "1.0")]
    pub s: Vec<f64>,
    /// Seeded trials per probed population.
    #[arg(long, default_value_t = 100)]
    pub trials: usize,
    /// Largest population probed.
    #[arg(long, default_value_t = 10_000)]
    pub k_max: usize,
    /// Share of trials that must satisfy every user.
    #[arg(long, default_value_t = 0.95)]
    pub pass_fraction: f64,
    /// Base seed; trial i uses seed + i.
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Converged config JSON; defaults to 50 Hz cellular, 10 s push period.
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// Workload JSON; defaults to 200 objects of 100 bits, T = 100 s,
    /// requests in (50, 100].
    #[arg(long)]
    pub workload: Option<PathBuf>,
    /// CSV to write.
    #[arg(long)]
    pub csv: PathBuf,
}

#[derive(Debug, Subcommand)]
pub enum CrowdCommand {
    /// Assign tasks to offers.
    Match(CrowdMatchArgs),
    /// Fold a JSON Lines negotiation log into current tasks and offers.
    Negotiate(CrowdNegotiateArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum SolverArg {
    Exact,
    Greedy,
}

#[derive(Debug, Args)]
pub struct CrowdMatchArgs {
    /// JSON array of task profiles.
    #[arg(long)]
    pub tasks: PathBuf,
    /// JSON array of SLA offers.
    #[arg(long)]
    pub offers: PathBuf,
    /// Exact minimum-cost maximum matching or the greedy heuristic.
    #[arg(long, value_enum, default_value_t = SolverArg::Exact)]
    pub solver: SolverArg,
    /// Assignment JSON to write; stdout if omitted.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct CrowdNegotiateArgs {
    /// JSON Lines log with `type` task, offer or withdraw.
    #[arg(long)]
    pub log: PathBuf,
    /// Snapshot JSON to write; stdout if omitted.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct BoundsArgs {
    /// Scenario JSON.
    #[arg(long)]
    pub scenario: PathBuf,
    /// Bounds JSON to write; stdout if omitted.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct Fig7Args {
    /// Fig7 config JSON; every field is optional.
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// CSV to write; overrides the config's `out`.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Overrides the config's seed.
    #[arg(long)]
    pub seed: Option<u64>,
    /// Overrides the config's trial count.
    #[arg(long)]
    pub trials: Option<usize>,
}

#[derive(Debug, Args)]
pub struct RunArgs {
    /// Experiment config JSON.
    #[arg(long)]
    pub config: PathBuf,
}

#[derive(Debug, Serialize)]
struct Bounds {
    horizon_s: f64,
    /// Σ|x_l|/T over the whole catalog.
    b_min_hz: f64,
    /// Same, over requested objects only.
    b_min_requested_hz: f64,
    /// Σ|y_k|/T.
    b_max_hz: f64,
}

fn emit<T: Serialize>(out: Option<&Path>, value: &T) -> Result<()> {
    match out {
        Some(p) => files::write_json(p, value),
        None => {
            let text = files::to_json(value)?;
            std::io::stdout()
                .write_all(text.as_bytes())
                .map_err(CliError::io(Path::new("<stdout>")))
        }
    }
}

fn id_of(path: &Path) -> String {
    path.file_stem().map_or_else(|| "scenario".into(), |s| s.to_string_lossy().into_owned())
}

fn parse_cache(text: &str) -> Result<CacheSpec> {
    serde_json::from_str(&format!("\"{text}\""))
        .or_else(|_| serde_json::from_str(text))
        .map_err(|_| CliError::config(format!("--cache: {text:?} is neither a bit count nor inf")))
}

pub fn run(cli: Cli) -> Result<()> {
    match cli.command {
        Command::Pet(PetCommand::Encode(a)) => {
            let rho = RhoSpec::parse(&a.rho, a.rho_floor)?;
            pet_io::encode_files(&a.inputs, &rho, a.n, &a.out)?;
        }
        Command::Pet(PetCommand::Decode(a)) => {
            let out = a.out.unwrap_or_else(|| a.layout.parent().unwrap_or(Path::new(".")).to_path_buf());
            pet_io::decode_files(&a.layout, &a.packets, &out)?;
        }
        Command::Workload(WorkloadCommand::Gen(a)) => {
            let catalog = generate_catalog(a.n_items, a.size_bits)?;
            let cfg = TraceConfig {
                n_users: a.users,
                horizon_s: a.horizon_s,
                requests_per_user: a.requests_per_user,
                objects_per_request: a.objects_per_request,
                seed: a.seed,
                earliest_request_s: a.earliest,
            };
            let requests = generate_trace(&catalog, ZipfParams { exponent_s: a.s, n_items: a.n_items }, &cfg)?;
            let bandwidth = match a.bandwidth {
                Some(b) => b,
                None => bandwidth_upper_bound(&requests, &catalog, a.horizon_s)?,
            };
            let scenario = Scenario {
                catalog,
                requests,
                budget: WirelessBudget::new(bandwidth, a.horizon_s, a.link_rate)?,
                cache: parse_cache(&a.cache)?,
            };
            files::write_json(&a.out, &scenario.to_file())?;
        }
        Command::Sim(SimCommand::Run(a)) => {
            let sc = Scenario::load(&a.scenario)?;
            let cfg: ConvergedConfig = match &a.config {
                Some(p) => files::read_json(p)?,
                None => default_converged(&sc),
            };
            let (plan, report) = run_planner(&id_of(&a.scenario), &sc, a.planner.into(), &cfg)?;
            files::write_json(&a.out, &report)?;
            if let Some(p) = &a.csv {
                let mut buf = Vec::new();
                write_report_csv(std::slice::from_ref(&report), &mut buf)?;
                files::write_bytes(p, &buf)?;
            }
            if let Some(p) = &a.plan_out {
                files::write_json(p, &plan)?;
            }
        }
        Command::Sim(SimCommand::Check(a)) => {
            let sc = Scenario::load(&a.scenario)?;
            let plan: DeliveryPlan = files::read_json(&a.plan)?;
            emit(a.out.as_deref(), &check_plan(&id_of(&a.scenario), &sc, &plan)?)?;
        }
        Command::Sim(SimCommand::Sweep(a)) => {
            let vary = Vary::parse(&a.vary)?;
            let sched = match &a.config {
                Some(p) => files::read_json(p)?,
                None => default_sweep_sched(),
            };
            let workload: WorkloadSpec = match &a.workload {
                Some(p) => files::read_json(p)?,
                None => WorkloadSpec::default(),
            };
            let probe = workload.probe(sched, a.seed, a.trials, a.k_max, a.pass_fraction)?;
            let rows = run_sweep(&probe, &vary, &a.s)?;
            let mut buf = Vec::new();
            write_sweep_csv(&rows, &mut buf)?;
            files::write_bytes(&a.csv, &buf)?;
        }
        Command::Crowd(CrowdCommand::Match(a)) => {
            let solver = match a.solver {
                SolverArg::Exact => Solver::Exact,
                SolverArg::Greedy => Solver::Greedy,
            };
            emit(a.out.as_deref(), &crowd_io::match_files(&a.tasks, &a.offers, solver)?)?;
        }
        Command::Crowd(CrowdCommand::Negotiate(a)) => {
            emit(a.out.as_deref(), &crowd_io::negotiate_file(&a.log)?)?;
        }
        Command::Bounds(a) => {
            let sc = Scenario::load(&a.scenario)?;
            let t = sc.budget.horizon_s;
            let bounds = Bounds {
                horizon_s: t,
                b_min_hz: bandwidth_lower_bound(&sc.catalog, t)?,
                b_min_requested_hz: requested_lower_bound(&sc.requests, &sc.catalog, t)?,
                b_max_hz: bandwidth_upper_bound(&sc.requests, &sc.catalog, t)?,
            };
            emit(a.out.as_deref(), &bounds)?;
        }
        Command::Fig7(a) => {
            let mut cfg: Fig7Config = match &a.config {
                Some(p) => files::read_json(p)?,
                None => Fig7Config::default(),
            };
            if let Some(seed) = a.seed {
                cfg.seed = seed;
            }
            if let Some(trials) = a.trials {
                cfg.trials = trials;
            }
            let out = match (a.out, &cfg.out, &a.config) {
                (Some(o), _, _) => o,
                (None, Some(o), Some(c)) if o.is_relative() => c.parent().unwrap_or(Path::new("")).join(o),
                (None, Some(o), _) => o.clone(),
                (None, None, _) => return Err(CliError::config("fig7 needs --out or an `out` entry in the config")),
            };
            let rows = fig7_rows(&cfg)?;
            let mut buf = Vec::new();
            write_fig7_csv(&rows, &mut buf)?;
            files::write_bytes(&out, &buf)?;
        }
        Command::Run(a) => {
            run_experiment(&ExperimentConfig::load(&a.config)?)?;
        }
    }
    Ok(())
}
