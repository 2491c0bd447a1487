//! End-to-end runs: configuration, integration, error measurement,
//! snapshots and manifests.

use std::fs;
use std::path::{Path, PathBuf};
use std::time::{SystemTime, UNIX_EPOCH};

use serde::{Deserialize, Serialize};

use crate::analysis::{self, ErrorReport, ExactSampling};
use crate::error::{Error, Result};
use crate::flux::SchemeId;
use crate::grid::Field;
use crate::io::{self, SnapshotMeta, TableRow};
use crate::problems::{build_problem, ProblemSpec};
use crate::reconstruct::LimiterConfig;
use crate::semidiscrete::{Correction, Order, SchemeConfig};
use crate::time::{self, Discretization, DtRule, Integrator, RunDiagnostics, StepPolicy};

/// How the initial field is built from the initial data.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum InitMode {
    /// Point values at cell centers.
    #[default]
    Midpoint,
    /// Exact cell averages; only for problems with a known solution.
    CellAverage,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunConfig {
    pub problem: u32,
    pub scheme: SchemeId,
    pub order: Order,
    /// Mesh override; the problem default is used when absent.
    pub nx: Option<usize>,
    pub ny: Option<usize>,
    pub cfl: f64,
    pub dt_rule: DtRule,
    /// Time integrator; forward Euler for order 1 and SSP-RK3 otherwise
    /// when absent.
    pub integrator: Option<Integrator>,
    pub theta: f64,
    pub eps0: f64,
    pub correction: Correction,
    pub init: InitMode,
    pub sampling: ExactSampling,
    /// Final-time override.
    pub t_final: Option<f64>,
    /// Snapshot times; the problem's list is used when absent. The final
    /// time is always written when `out_dir` is set.
    pub snapshots: Option<Vec<f64>>,
    pub out_dir: Option<PathBuf>,
    /// Reference snapshot for problems without an exact solution.
    pub reference: Option<PathBuf>,
}

impl RunConfig {
    pub fn new(problem: u32, scheme: SchemeId, order: Order) -> Self {
        Self {
            problem,
            scheme,
            order,
            nx: None,
            ny: None,
            cfl: 0.45,
            dt_rule: DtRule::Cfl,
            integrator: None,
            theta: LimiterConfig::default().theta,
            eps0: crate::flux::DEFAULT_EPS0,
            correction: Correction::default(),
            init: InitMode::default(),
            sampling: ExactSampling::default(),
            t_final: None,
            snapshots: None,
            out_dir: None,
            reference: None,
        }
    }

    pub fn with_mesh(mut self, nx: usize, ny: usize) -> Self {
        self.nx = Some(nx);
        self.ny = Some(ny);
        self
    }

    pub fn scheme_config(&self) -> Result<SchemeConfig> {
        let mut c = SchemeConfig::new(self.scheme, self.order);
        c.limiter = LimiterConfig::new(self.theta)?;
        c.eps0 = self.eps0;
        c.correction = self.correction;
        Ok(c)
    }

    pub fn resolved_integrator(&self) -> Integrator {
        self.integrator.unwrap_or(if self.order == Order::First {
            Integrator::ForwardEuler
        } else {
            Integrator::SspRk3
        })
    }

    fn mesh_size(&self, spec: &ProblemSpec) -> (usize, usize) {
        let nx = self.nx.unwrap_or(spec.default_mesh.0);
        let ny = if spec.dim == 1 { 1 } else { self.ny.unwrap_or(spec.default_mesh.1) };
        (nx, ny)
    }
}

/// Where and why a run stopped early.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FailureRecord {
    pub step: usize,
    pub stage: usize,
    pub time: f64,
    pub cell: Option<(isize, isize)>,
    pub positivity: bool,
    pub message: String,
}

impl FailureRecord {
    pub fn from_error(e: &Error) -> Self {
        let (mut step, mut stage, mut time, mut cell) = (0, 0, f64::NAN, None);
        let mut cur = e;
        loop {
            match cur {
                Error::AtStage { step: s, stage: g, time: t, source } => {
                    (step, stage, time) = (*s, *g, *t);
                    cur = source;
                }
                Error::AtCell { cell: c, source } => {
                    cell = Some(*c);
                    cur = source;
                }
                _ => break,
            }
        }
        Self { step, stage, time, cell, positivity: e.is_positivity_failure(), message: e.to_string() }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunReport {
    pub config: RunConfig,
    pub problem_name: String,
    pub mesh: (usize, usize),
    pub t_final: f64,
    pub diagnostics: RunDiagnostics,
    /// Relative change of the domain integral of each conserved variable,
    /// up to the last good state when the run failed.
    pub conservation_drift: Vec<f64>,
    pub error: Option<ErrorReport>,
    pub snapshots: Vec<PathBuf>,
    pub failure: Option<FailureRecord>,
}

impl RunReport {
    pub fn succeeded(&self) -> bool {
        self.failure.is_none()
    }
}

/// Runs `cfg`. Configuration and I/O problems are returned as errors; a
/// solver failure is recorded in the report, whose diagnostics then cover
/// the steps taken.
pub fn run(cfg: &RunConfig) -> Result<RunReport> {
    let spec = build_problem(cfg.problem)?;
    if spec.dim == 1 {
        run_field::<3>(cfg).map(|(r, _)| r)
    } else {
        run_field::<4>(cfg).map(|(r, _)| r)
    }
}

/// Same as [`run`], also returning the final (or last good) field.
pub fn run_field<const N: usize>(cfg: &RunConfig) -> Result<(RunReport, Field<N>)> {
    let spec = build_problem(cfg.problem)?;
    let scheme = cfg.scheme_config()?;
    let (nx, ny) = cfg.mesh_size(&spec);
    let ghost = cfg.order.ghost_width();
    let t_final = cfg.t_final.unwrap_or(spec.t_final);
    let mut field: Field<N> = match cfg.init {
        InitMode::Midpoint => spec.initial_field(nx, ny, ghost)?,
        InitMode::CellAverage => spec.averaged_field(nx, ny, ghost, 0.0)?,
    };
    let policy = StepPolicy { cfl: cfg.cfl, dt_rule: cfg.dt_rule, t_final, integrator: cfg.resolved_integrator() };
    policy.validate()?;
    let reference = match &cfg.reference {
        Some(path) => Some(io::read_snapshot::<N>(path)?.field),
        None => None,
    };

    let mut stops: Vec<f64> = cfg
        .snapshots
        .clone()
        .unwrap_or_else(|| spec.snapshots.clone())
        .into_iter()
        .filter(|t| *t > 0.0 && *t < t_final)
        .collect();
    stops.sort_by(f64::total_cmp);
    stops.dedup();
    stops.push(t_final);

    let totals_before = field.totals();
    let disc = Discretization { scheme: &scheme, bc: &spec.bc, gas: spec.gas(), source: spec.source };
    let mut written = Vec::new();
    let outcome = time::run(&mut field, &disc, &policy, 0.0, &stops, |t, f| {
        if let Some(dir) = &cfg.out_dir {
            let path = dir.join(io::snapshot_name(spec.id, cfg.scheme.name(), cfg.order.as_u32(), nx, ny, t));
            let meta = SnapshotMeta {
                problem: spec.id,
                scheme: cfg.scheme.name().to_string(),
                order: cfg.order.as_u32(),
                time: t,
                gamma: spec.gamma,
            };
            io::write_snapshot(f, &meta, &path)?;
            written.push(path);
        }
        Ok(())
    });
    let (diagnostics, failure) = match outcome {
        Ok(d) => (d, None),
        Err((e, d)) => {
            if !e.is_positivity_failure() && !matches!(e, Error::AtStage { .. }) {
                return Err(e);
            }
            log::warn!("problem {} {} order {}: {e}", spec.id, cfg.scheme, cfg.order);
            (d, Some(FailureRecord::from_error(&e)))
        }
    };

    let error = if failure.is_none() {
        let l1 = if let Some(r) = &reference {
            Some(analysis::l1_error_reference(&field, r, spec.gas())?)
        } else if spec.has_exact {
            Some(analysis::l1_error_exact(&field, &spec, t_final, cfg.sampling)?)
        } else {
            None
        };
        l1.map(|l1_error| ErrorReport { l1_error, rate: None, wall_clock: diagnostics.wall_clock })
    } else {
        None
    };

    let conservation_drift = analysis::conservation_drift(&totals_before, &field.totals());
    let report = RunReport {
        config: cfg.clone(),
        problem_name: spec.name.to_string(),
        mesh: (nx, ny),
        t_final,
        diagnostics,
        conservation_drift,
        error,
        snapshots: written,
        failure,
    };
    Ok((report, field))
}

/// Runs `cfg` on each mesh of a ladder (1-D: `nx`; 2-D: `nx = ny`) and
/// fills in the convergence rates.
pub fn sweep(cfg: &RunConfig, meshes: &[usize]) -> Result<Vec<RunReport>> {
    let mut reports = Vec::with_capacity(meshes.len());
    for &n in meshes {
        reports.push(run(&cfg.clone().with_mesh(n, n))?);
    }
    for k in 1..reports.len() {
        let (a, b) =
            (reports[k - 1].error.as_ref().map(ErrorReport::rho), reports[k].error.as_ref().map(ErrorReport::rho));
        if let (Some(a), Some(b)) = (a, b) {
            let ratio = reports[k].mesh.0 as f64 / reports[k - 1].mesh.0 as f64;
            reports[k].error.as_mut().unwrap().rate = Some(analysis::rate(a, b, ratio));
        }
    }
    Ok(reports)
}

/// Error table rows for a sweep; failed runs are left out.
pub fn table_rows(reports: &[RunReport]) -> Vec<TableRow> {
    reports
        .iter()
        .filter_map(|r| {
            let e = r.error.as_ref()?;
            let mesh = if r.mesh.1 == 1 { r.mesh.0.to_string() } else { format!("{}x{}", r.mesh.0, r.mesh.1) };
            Some(TableRow { mesh, l1_rho: e.rho(), rate: e.rate })
        })
        .collect()
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Timing {
    pub started_unix: f64,
    pub finished_unix: f64,
    pub wall_clock: f64,
}

/// A run report plus code version; wall-clock numbers live only in `timing`
/// so that the `run` section is reproducible byte for byte.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Manifest {
    pub version: String,
    pub run: RunReport,
    pub timing: Timing,
}

pub fn unix_now() -> f64 {
    SystemTime::now().duration_since(UNIX_EPOCH).map(|d| d.as_secs_f64()).unwrap_or(0.0)
}

impl Manifest {
    pub fn new(report: &RunReport, started_unix: f64) -> Self {
        let mut run = report.clone();
        let wall_clock = run.diagnostics.wall_clock;
        run.diagnostics.wall_clock = 0.0;
        if let Some(e) = run.error.as_mut() {
            e.wall_clock = 0.0;
        }
        Self {
            version: env!("CARGO_PKG_VERSION").to_string(),
            run,
            timing: Timing { started_unix, finished_unix: unix_now(), wall_clock },
        }
    }

    pub fn write(&self, path: &Path) -> Result<()> {
        let text = serde_json::to_string_pretty(self).map_err(|e| Error::InvalidConfig(e.to_string()))?;
        io::write_atomic(path, text.as_bytes())
    }

    pub fn read(path: &Path) -> Result<Self> {
        let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        serde_json::from_str(&text).map_err(|e| Error::Parse { path: path.to_path_buf(), message: e.to_string() })
    }
}

/// Path of the reference snapshot for `problem` inside `dir`.
pub fn reference_path(dir: &Path, problem: u32) -> Result<PathBuf> {
    let spec = build_problem(problem)?;
    let r = spec.reference.ok_or_else(|| Error::InvalidConfig(format!("problem {problem} has no reference run")))?;
    Ok(dir.join(format!("ref_ex{problem:02}_{}_o{}_{}.dat", r.scheme.name(), r.order.as_u32(), r.nx)))
}

/// Computes the reference solution of `problem` into `dir`, unless it
/// already exists. A `.lock` file guards against concurrent generation;
/// a stale lock must be removed by hand.
pub fn generate_reference(dir: &Path, problem: u32, nx_override: Option<usize>) -> Result<PathBuf> {
    let spec = build_problem(problem)?;
    let r = spec.reference.ok_or_else(|| Error::InvalidConfig(format!("problem {problem} has no reference run")))?;
    let nx = nx_override.unwrap_or(r.nx);
    let path = if nx_override.is_some() {
        dir.join(format!("ref_ex{problem:02}_{}_o{}_{nx}.dat", r.scheme.name(), r.order.as_u32()))
    } else {
        reference_path(dir, problem)?
    };
    if path.exists() {
        return Ok(path);
    }
    fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
    let lock = path.with_extension("lock");
    fs::OpenOptions::new().write(true).create_new(true).open(&lock).map_err(|e| Error::io(&lock, e))?;
    let result = (|| {
        let mut cfg = RunConfig::new(problem, r.scheme, r.order);
        cfg.nx = Some(nx);
        cfg.snapshots = Some(Vec::new());
        let (report, field) = run_field::<3>(&cfg)?;
        if let Some(f) = report.failure {
            return Err(Error::InvalidConfig(format!("reference run failed: {}", f.message)));
        }
        let meta = SnapshotMeta {
            problem,
            scheme: r.scheme.name().to_string(),
            order: r.order.as_u32(),
            time: report.t_final,
            gamma: spec.gamma,
        };
        io::write_snapshot(&field, &meta, &path)
    })();
    let _ = fs::remove_file(&lock);
    result.map(|_| path)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn first_order_advection_run() {
        let mut cfg = RunConfig::new(1, SchemeId::Hll, Order::First).with_mesh(50, 1);
        cfg.t_final = Some(0.1);
        let r = run(&cfg).unwrap();
        assert!(r.succeeded());
        let e = r.error.unwrap();
        assert!(e.rho() > 0.0 && e.rho() < 0.05);
        assert!(r.conservation_drift.iter().all(|d| *d < 1e-13));
    }

    #[test]
    fn snapshots_and_manifest_are_written() {
        let dir = tempfile::tempdir().unwrap();
        let mut cfg = RunConfig::new(2, SchemeId::Ldcu, Order::Second).with_mesh(40, 1);
        cfg.snapshots = Some(vec![0.1]);
        cfg.out_dir = Some(dir.path().to_path_buf());
        let start = unix_now();
        let r = run(&cfg).unwrap();
        assert_eq!(r.snapshots.len(), 2);
        let snap = io::read_snapshot::<3>(&r.snapshots[1]).unwrap();
        assert_eq!(snap.meta.time, 0.2);
        let m = Manifest::new(&r, start);
        let path = dir.path().join("manifest.json");
        m.write(&path).unwrap();
        let back = Manifest::read(&path).unwrap();
        assert_eq!(back.run, m.run);
        let again = Manifest::new(&run(&cfg).unwrap(), start);
        assert_eq!(serde_json::to_string(&again.run).unwrap(), serde_json::to_string(&m.run).unwrap());
    }

    #[test]
    fn failure_is_recorded_not_raised() {
        let mut cfg = RunConfig::new(3, SchemeId::Hll, Order::Fifth).with_mesh(40, 1);
        cfg.t_final = Some(0.01);
        let r = run(&cfg).unwrap();
        let f = r.failure.expect("run should fail");
        assert!(f.positivity);
        assert!(f.cell.is_some());
        assert!(r.error.is_none());
    }

    #[test]
    fn reference_mesh_must_nest() {
        let dir = tempfile::tempdir().unwrap();
        let mut cfg = RunConfig::new(3, SchemeId::Hll, Order::First).with_mesh(64, 1);
        cfg.t_final = Some(0.01);
        let path = generate_reference(dir.path(), 3, Some(128)).unwrap();
        assert!(!path.with_extension("lock").exists());
        cfg.reference = Some(path.clone());
        let r = run(&cfg).unwrap();
        assert!(r.error.is_some());
        cfg.nx = Some(100);
        assert!(matches!(run(&cfg), Err(Error::MeshMismatch(_))));
    }
}
