use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use mobclinic::covering::SiteCopies;
use mobclinic::experiments::{
    cluster_degradation, coverage_curve, default_percentiles, generate_line_instance, generate_synthetic,
    kernel_table, tradeoff_sweep, SyntheticConfig,
};
use mobclinic::io::{
    cluster_csv, curve_csv, kernel_csv, load_instance, read_groups, solution_json, sweep_csv, write_instance, CurveRow,
    LoadOptions,
};
use mobclinic::solvers::{solve, Algorithm, CoverSolver, SolveParams, DEFAULT_U};
use mobclinic::Instance;

#[derive(Parser)]
#[command(name = "mobclinic", version, about = "Place mobile clinics for a population that moves around")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Solve one instance and write the placement as JSON.
    Solve(SolveCmd),
    /// Objective for every algorithm, budget and coverage fraction.
    Sweep(SweepCmd),
    /// How many facilities each algorithm drops when the budget grows by one.
    Kernel(SweepCmd),
    /// ClientCover on clustered locations, per clustering radius.
    Cluster(ClusterCmd),
    /// Radius needed to serve each fraction of clients.
    Curve(CurveCmd),
    /// Write a synthetic instance.
    Generate(GenerateCmd),
}

#[derive(Args)]
struct InstanceArgs {
    #[arg(long)]
    locations: PathBuf,
    #[arg(long)]
    visits: PathBuf,
    /// Distance matrix for `id,index,kind` locations.
    #[arg(long)]
    matrix: Option<PathBuf>,
    /// Allow facilities at residential locations too.
    #[arg(long)]
    all_sites: bool,
}

#[derive(Clone, Copy, ValueEnum)]
enum AlgorithmArg {
    Fpt,
    Clientcover,
    Mostactive,
    Homecenters,
}

impl From<AlgorithmArg> for Algorithm {
    fn from(a: AlgorithmArg) -> Self {
        match a {
            AlgorithmArg::Fpt => Algorithm::Fpt,
            AlgorithmArg::Clientcover => Algorithm::ClientCover,
            AlgorithmArg::Mostactive => Algorithm::MostActive,
            AlgorithmArg::Homecenters => Algorithm::HomeCenters,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum CoverSolverArg {
    Exact,
    Greedy,
}

#[derive(Args)]
struct ParamArgs {
    /// Fraction of clients that must be served.
    #[arg(long, default_value_t = 1.0)]
    q: f64,
    /// Clients one facility can serve.
    #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
    capacity: Option<u64>,
    /// Let a capacitated site host several facilities.
    #[arg(long)]
    multi_copy: bool,
    /// Fairness groups CSV (`label,requirement,member_client_ids`).
    #[arg(long)]
    groups: Option<PathBuf>,
    /// Public locations FPT may look at.
    #[arg(long, default_value_t = DEFAULT_U as u64, value_parser = clap::value_parser!(u64).range(1..))]
    u: u64,
    #[arg(long, value_enum, default_value_t = CoverSolverArg::Exact)]
    cover_solver: CoverSolverArg,
    /// Branch-and-bound node budget before falling back to greedy.
    #[arg(long)]
    node_budget: Option<u64>,
}

impl ParamArgs {
    fn params(&self, k: usize) -> Result<SolveParams, String> {
        let mut p = SolveParams::new(k).with_q(self.q).with_u(self.u as usize);
        p.capacity = self.capacity.map(|c| c as usize);
        p.copies = if self.multi_copy { SiteCopies::Multiple } else { SiteCopies::Single };
        p.cover_solver = match self.cover_solver {
            CoverSolverArg::Exact => CoverSolver::Exact,
            CoverSolverArg::Greedy => CoverSolver::Greedy,
        };
        if let Some(b) = self.node_budget {
            p.node_budget = b;
        }
        if let Some(path) = &self.groups {
            p.groups = Some(read_groups(path).map_err(|e| e.to_string())?);
        }
        Ok(p)
    }
}

#[derive(Args)]
struct SolveCmd {
    #[command(flatten)]
    instance: InstanceArgs,
    #[arg(long, value_enum)]
    algorithm: AlgorithmArg,
    #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
    k: u64,
    #[command(flatten)]
    params: ParamArgs,
    /// Accepted for symmetry with `generate`; solving is deterministic.
    #[arg(long)]
    seed: Option<u64>,
    /// JSON output path; stdout when absent.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct SweepCmd {
    #[command(flatten)]
    instance: InstanceArgs,
    /// Algorithms to run; all four by default.
    #[arg(long, value_enum, value_delimiter = ',')]
    algorithms: Vec<AlgorithmArg>,
    #[arg(long, default_value_t = 1, value_parser = clap::value_parser!(u64).range(1..))]
    k_min: u64,
    #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
    k_max: u64,
    /// Coverage fractions; each overrides --q.
    #[arg(long, value_delimiter = ',', default_value = "1.0")]
    qs: Vec<f64>,
    #[command(flatten)]
    params: ParamArgs,
    /// CSV output path; stdout when absent.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct ClusterCmd {
    #[command(flatten)]
    instance: InstanceArgs,
    /// Clustering radii in km.
    #[arg(long, value_delimiter = ',', required = true)]
    radii: Vec<f64>,
    #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
    k: u64,
    #[command(flatten)]
    params: ParamArgs,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct CurveCmd {
    #[command(flatten)]
    instance: InstanceArgs,
    #[arg(long, value_enum, value_delimiter = ',')]
    algorithms: Vec<AlgorithmArg>,
    #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
    k: u64,
    /// Fractions to report; 0.80 to 1.00 in steps of 0.01 by default.
    #[arg(long, value_delimiter = ',')]
    percentiles: Vec<f64>,
    #[command(flatten)]
    params: ParamArgs,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Clone, Copy, ValueEnum)]
enum GenerateKind {
    Synthetic,
    Line,
}

#[derive(Args)]
struct GenerateCmd {
    #[arg(long, value_enum, default_value_t = GenerateKind::Synthetic)]
    kind: GenerateKind,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = 33156)]
    clients: usize,
    #[arg(long, default_value_t = 5660)]
    activity: usize,
    #[arg(long, default_value_t = 10038)]
    residential: usize,
    #[arg(long, default_value_t = 1)]
    min_visits: usize,
    #[arg(long, default_value_t = 5)]
    max_visits: usize,
    /// Colour classes of a line instance.
    #[arg(long, default_value_t = 2)]
    gamma: usize,
    /// Output directory.
    #[arg(long)]
    out: PathBuf,
}

enum Failure {
    Usage(String),
    Infeasible,
}

impl<E: std::fmt::Display> From<E> for Failure {
    fn from(e: E) -> Self {
        Failure::Usage(e.to_string())
    }
}

fn load(args: &InstanceArgs) -> Result<Instance, Failure> {
    Ok(load_instance(
        &args.locations,
        &args.visits,
        args.matrix.as_deref(),
        LoadOptions { all_sites: args.all_sites },
    )?)
}

fn emit(text: &str, out: Option<&Path>) -> Result<(), Failure> {
    match out {
        Some(p) => std::fs::write(p, text).map_err(|e| Failure::Usage(format!("{}: {e}", p.display()))),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn algorithms(list: &[AlgorithmArg]) -> Vec<Algorithm> {
    if list.is_empty() {
        Algorithm::ALL.to_vec()
    } else {
        list.iter().map(|&a| a.into()).collect()
    }
}

fn run(cli: Cli) -> Result<(), Failure> {
    match cli.command {
        Command::Solve(cmd) => {
            let instance = load(&cmd.instance)?;
            let params = cmd.params.params(cmd.k as usize)?;
            let solution = solve(&instance, cmd.algorithm.into(), &params)?;
            emit(&solution_json(&solution), cmd.out.as_deref())?;
            if solution.feasible {
                Ok(())
            } else {
                Err(Failure::Infeasible)
            }
        }
        Command::Sweep(cmd) | Command::Kernel(cmd) if cmd.k_min > cmd.k_max => Err(Failure::Usage(format!(
            "--k-min {} exceeds --k-max {}",
            cmd.k_min, cmd.k_max
        ))),
        Command::Sweep(cmd) => {
            let instance = load(&cmd.instance)?;
            let base = cmd.params.params(cmd.k_min as usize)?;
            let ks = cmd.k_min as usize..=cmd.k_max as usize;
            let records = tradeoff_sweep(&instance, &algorithms(&cmd.algorithms), ks, &cmd.qs, &base);
            emit(&sweep_csv(&records), cmd.out.as_deref())
        }
        Command::Kernel(cmd) => {
            let instance = load(&cmd.instance)?;
            let base = cmd.params.params(cmd.k_min as usize)?;
            let ks = cmd.k_min as usize..=cmd.k_max as usize;
            let records = tradeoff_sweep(&instance, &algorithms(&cmd.algorithms), ks, &cmd.qs, &base);
            let rows = kernel_table(&records);
            emit(&kernel_csv(&rows), cmd.out.as_deref())
        }
        Command::Cluster(cmd) => {
            let instance = load(&cmd.instance)?;
            let params = cmd.params.params(cmd.k as usize)?;
            let rows = cluster_degradation(&instance, &cmd.radii, &params)?;
            emit(&cluster_csv(&rows), cmd.out.as_deref())
        }
        Command::Curve(cmd) => {
            let instance = load(&cmd.instance)?;
            let params = cmd.params.params(cmd.k as usize)?;
            let ps = if cmd.percentiles.is_empty() {
                default_percentiles()
            } else {
                cmd.percentiles.clone()
            };
            let mut rows = Vec::new();
            for algorithm in algorithms(&cmd.algorithms) {
                let solution = solve(&instance, algorithm, &params)?;
                if !solution.feasible {
                    continue;
                }
                let facilities = solution.facility_indices(&instance)?;
                for (p, radius_km) in coverage_curve(&instance, &facilities, &ps)? {
                    rows.push(CurveRow {
                        algorithm: algorithm.name().to_owned(),
                        k: params.k,
                        p,
                        radius_km,
                    });
                }
            }
            emit(&curve_csv(&rows), cmd.out.as_deref())
        }
        Command::Generate(cmd) => {
            let instance = match cmd.kind {
                GenerateKind::Synthetic => {
                    if cmd.clients == 0 || cmd.activity == 0 {
                        return Err(Failure::Usage("need at least one client and one activity location".into()));
                    }
                    let mut config = SyntheticConfig::new(cmd.seed, cmd.clients, cmd.activity, cmd.residential);
                    config.min_visits = cmd.min_visits;
                    config.max_visits = cmd.max_visits;
                    generate_synthetic(&config)?
                }
                GenerateKind::Line => {
                    if cmd.gamma == 0 {
                        return Err(Failure::Usage("--gamma must be at least 1".into()));
                    }
                    generate_line_instance(cmd.seed, cmd.gamma, 1)?.instance
                }
            };
            let files = write_instance(&instance, &cmd.out)?;
            println!("{}", files.locations.display());
            println!("{}", files.visits.display());
            if let Some(m) = files.matrix {
                println!("{}", m.display());
            }
            Ok(())
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Infeasible) => {
            eprintln!("no feasible placement");
            ExitCode::from(1)
        }
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}
