//! `lowdiss`: runs, mesh ladders, accuracy tables and reference solutions.

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::Context;
use clap::{Args, Parser, Subcommand};
use lowdiss::analysis::ExactSampling;
use lowdiss::driver::{self, InitMode, Manifest, RunConfig, RunReport};
use lowdiss::flux::SchemeId;
use lowdiss::io;
use lowdiss::semidiscrete::{Correction, Order};
use lowdiss::time::{DtRule, Integrator};

const EXIT_USAGE: u8 = 2;
const EXIT_RUN_FAILED: u8 = 3;

#[derive(Parser)]
#[command(name = "lowdiss", version, about = "Low-dissipation Euler solvers: runs, ladders and accuracy tables")]
struct Cli {
    /// Output root.
    #[arg(long, global = true, env = "LOWDISS_OUT", default_value = "out")]
    out: PathBuf,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run one problem on one mesh.
    Run(RunArgs),
    /// Run a mesh ladder and write the error table with rates.
    Sweep(SweepArgs),
    /// Reproduce the accuracy tables of Examples 1, 7 and 8.
    Table(TableArgs),
    /// Compute the fine-mesh reference solution of a 1-D problem.
    Reference(ReferenceArgs),
}

#[derive(Args, Clone)]
struct SchemeArgs {
    #[arg(long, value_parser = parse_scheme, default_value = "hll")]
    scheme: SchemeId,
    #[arg(long, value_parser = parse_order, default_value = "1")]
    order: Order,
}

#[derive(Args, Clone)]
struct Numerics {
    #[arg(long, default_value_t = 0.45)]
    cfl: f64,
    /// Minmod limiter parameter, in [1, 2].
    #[arg(long, default_value_t = 1.3)]
    theta: f64,
    /// `cfl` or `cfl-p53`.
    #[arg(long, value_parser = parse_with::<DtRule>)]
    dt_rule: Option<DtRule>,
    /// `ssp-rk3` or `euler`; defaults to euler at order 1.
    #[arg(long, value_parser = parse_with::<Integrator>)]
    integrator: Option<Integrator>,
    /// A-WENO correction: `flux` or `point`.
    #[arg(long, value_parser = parse_with::<Correction>, default_value = "flux")]
    correction: Correction,
    /// Initial data: `midpoint` or `cell-average`.
    #[arg(long, value_parser = parse_init, default_value = "midpoint")]
    init: InitMode,
    /// Exact-solution sampling: `midpoint` or `cell-average`.
    #[arg(long, value_parser = parse_sampling, default_value = "midpoint")]
    sampling: ExactSampling,
    #[arg(long)]
    t_final: Option<f64>,
}

#[derive(Args)]
struct RunArgs {
    #[arg(long)]
    problem: u32,
    #[command(flatten)]
    scheme: SchemeArgs,
    #[arg(long)]
    nx: Option<usize>,
    #[arg(long)]
    ny: Option<usize>,
    #[command(flatten)]
    numerics: Numerics,
    /// Snapshot times, comma separated.
    #[arg(long, value_delimiter = ',')]
    snapshots: Option<Vec<f64>>,
    /// Reference snapshot for problems without an exact solution.
    #[arg(long)]
    reference: Option<PathBuf>,
}

#[derive(Args)]
struct SweepArgs {
    #[arg(long)]
    problem: u32,
    #[command(flatten)]
    scheme: SchemeArgs,
    /// Mesh ladder; square meshes in 2-D.
    #[arg(long, value_delimiter = ',', required = true)]
    meshes: Vec<usize>,
    #[command(flatten)]
    numerics: Numerics,
    #[arg(long)]
    reference: Option<PathBuf>,
}

#[derive(Args)]
struct TableArgs {
    /// 1 (Example 1), 2 (Example 7) or 3 (Example 8).
    #[arg(long, value_parser = clap::value_parser!(u32).range(1..=3))]
    table: u32,
    #[arg(long, value_delimiter = ',', value_parser = parse_scheme)]
    schemes: Option<Vec<SchemeId>>,
    #[arg(long, value_delimiter = ',', value_parser = parse_order)]
    orders: Option<Vec<Order>>,
    #[arg(long, value_delimiter = ',')]
    meshes: Option<Vec<usize>>,
    #[command(flatten)]
    numerics: Numerics,
}

#[derive(Args)]
struct ReferenceArgs {
    #[arg(long)]
    problem: u32,
    /// Mesh override for a cheaper reference.
    #[arg(long)]
    nx: Option<usize>,
}

fn parse_with<T: std::str::FromStr<Err = lowdiss::Error>>(s: &str) -> Result<T, String> {
    s.parse().map_err(|e: lowdiss::Error| e.to_string())
}

fn parse_scheme(s: &str) -> Result<SchemeId, String> {
    parse_with(s)
}

fn parse_order(s: &str) -> Result<Order, String> {
    let n: u32 = s.parse().map_err(|_| format!("'{s}' is not an integer"))?;
    Order::try_from(n).map_err(|e| e.to_string())
}

fn parse_init(s: &str) -> Result<InitMode, String> {
    match s {
        "midpoint" => Ok(InitMode::Midpoint),
        "cell-average" | "cell_average" => Ok(InitMode::CellAverage),
        _ => Err(format!("unknown init '{s}' (midpoint|cell-average)")),
    }
}

fn parse_sampling(s: &str) -> Result<ExactSampling, String> {
    match s {
        "midpoint" => Ok(ExactSampling::Midpoint),
        "cell-average" | "cell_average" => Ok(ExactSampling::CellAverage),
        _ => Err(format!("unknown sampling '{s}' (midpoint|cell-average)")),
    }
}

impl Numerics {
    fn apply(&self, cfg: &mut RunConfig) {
        cfg.cfl = self.cfl;
        cfg.theta = self.theta;
        if let Some(r) = self.dt_rule {
            cfg.dt_rule = r;
        }
        cfg.integrator = self.integrator;
        cfg.correction = self.correction;
        cfg.init = self.init;
        cfg.sampling = self.sampling;
        cfg.t_final = self.t_final;
    }
}

fn run_dir(root: &Path, cfg: &RunConfig, nx: usize, ny: usize) -> PathBuf {
    root.join(format!("ex{:02}_{}_o{}_{nx}x{ny}", cfg.problem, cfg.scheme, cfg.order))
}

fn mesh_label(r: &RunReport) -> String {
    if r.mesh.1 == 1 {
        r.mesh.0.to_string()
    } else {
        format!("{}x{}", r.mesh.0, r.mesh.1)
    }
}

fn summarize(r: &RunReport) {
    let d = &r.diagnostics;
    let err = r.error.as_ref().map(|e| format!(" l1_rho {}", io::sci3(e.rho()))).unwrap_or_default();
    let rate = r.error.as_ref().and_then(|e| e.rate).map(|x| format!(" rate {x:.3}")).unwrap_or_default();
    println!(
        "ex{:02} {} o{} {}: t {} steps {} min_rho {:.4e} min_p {:.4e}{err}{rate} ({:.2} s)",
        r.config.problem,
        r.config.scheme,
        r.config.order,
        mesh_label(r),
        r.t_final,
        d.steps,
        d.min_rho,
        d.min_p,
        d.wall_clock
    );
    if let Some(f) = &r.failure {
        eprintln!("  failed at step {} stage {} t {}: {}", f.step, f.stage, f.time, f.message);
    }
}

/// Runs `cfg` into its own directory under `root` and writes the manifest.
fn run_one(root: &Path, mut cfg: RunConfig) -> anyhow::Result<RunReport> {
    let spec = lowdiss::problems::build_problem(cfg.problem)?;
    let nx = cfg.nx.unwrap_or(spec.default_mesh.0);
    let ny = if spec.dim == 1 { 1 } else { cfg.ny.unwrap_or(spec.default_mesh.1) };
    let dir = run_dir(root, &cfg, nx, ny);
    std::fs::create_dir_all(&dir).with_context(|| format!("creating {}", dir.display()))?;
    cfg.out_dir = Some(dir.clone());
    let started = driver::unix_now();
    let report = driver::run(&cfg)?;
    Manifest::new(&report, started).write(&dir.join("manifest.json"))?;
    summarize(&report);
    Ok(report)
}

fn sweep(root: &Path, cfg: &RunConfig, meshes: &[usize]) -> anyhow::Result<Vec<RunReport>> {
    let mut reports = Vec::with_capacity(meshes.len());
    for &n in meshes {
        reports.push(run_one(root, cfg.clone().with_mesh(n, n))?);
    }
    for k in 1..reports.len() {
        let prev = reports[k - 1].error.as_ref().map(|e| e.rho());
        let ratio = reports[k].mesh.0 as f64 / reports[k - 1].mesh.0 as f64;
        if let (Some(a), Some(e)) = (prev, reports[k].error.as_mut()) {
            e.rate = Some(lowdiss::analysis::rate(a, e.rho(), ratio));
        }
    }
    let rows = driver::table_rows(&reports);
    if !rows.is_empty() {
        let path = root.join(format!("ex{:02}_{}_o{}_errors.tsv", cfg.problem, cfg.scheme, cfg.order));
        let title = format!("Example {} {} order {}", cfg.problem, cfg.scheme, cfg.order);
        io::write_error_table(&path, &title, &rows)?;
        print!("{}", io::format_error_table(&title, &rows));
    }
    Ok(reports)
}

fn failed(reports: &[RunReport]) -> bool {
    reports.iter().any(|r| !r.succeeded())
}

fn execute(cli: Cli) -> anyhow::Result<bool> {
    let root = cli.out;
    match cli.command {
        Command::Run(a) => {
            let mut cfg = RunConfig::new(a.problem, a.scheme.scheme, a.scheme.order);
            cfg.nx = a.nx;
            cfg.ny = a.ny;
            a.numerics.apply(&mut cfg);
            cfg.snapshots = a.snapshots;
            cfg.reference = a.reference;
            Ok(run_one(&root, cfg)?.succeeded())
        }
        Command::Sweep(a) => {
            let mut cfg = RunConfig::new(a.problem, a.scheme.scheme, a.scheme.order);
            a.numerics.apply(&mut cfg);
            cfg.snapshots = Some(Vec::new());
            cfg.reference = a.reference;
            Ok(!failed(&sweep(&root, &cfg, &a.meshes)?))
        }
        Command::Table(a) => {
            let problem = [1, 7, 8][a.table as usize - 1];
            let schemes = a.schemes.unwrap_or_else(|| SchemeId::ALL.to_vec());
            let orders = a.orders.unwrap_or_else(|| Order::ALL.to_vec());
            let meshes = a.meshes.unwrap_or_else(|| vec![100, 200, 400]);
            let mut ok = true;
            for &scheme in &schemes {
                for &order in &orders {
                    let mut cfg = RunConfig::new(problem, scheme, order);
                    a.numerics.apply(&mut cfg);
                    // all three tables use dt ~ dx^(5/3) at fifth order
                    if order == Order::Fifth && a.numerics.dt_rule.is_none() {
                        cfg.dt_rule = DtRule::CflP53;
                    }
                    cfg.snapshots = Some(Vec::new());
                    ok &= !failed(&sweep(&root, &cfg, &meshes)?);
                }
            }
            Ok(ok)
        }
        Command::Reference(a) => {
            let path = driver::generate_reference(&root, a.problem, a.nx)?;
            println!("{}", path.display());
            Ok(true)
        }
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    match execute(cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(EXIT_RUN_FAILED),
        Err(e) => {
            eprintln!("error: {e:#}");
            let usage = matches!(
                e.downcast_ref::<lowdiss::Error>().map(lowdiss::Error::root),
                Some(
                    lowdiss::Error::InvalidConfig(_)
                        | lowdiss::Error::InvalidPairing
                        | lowdiss::Error::UnknownProblem(_)
                )
            );
            ExitCode::from(if usage { EXIT_USAGE } else { 1 })
        }
    }
}
