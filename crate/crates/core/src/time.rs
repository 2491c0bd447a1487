//! SSP-RK3 time integration with CFL-based step selection.

use std::time::Instant;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::grid::{BoundarySpec, Field};
use crate::semidiscrete::{rhs, SchemeConfig, SourceTerm};
use crate::state::{Conserved, GasModel};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DtRule {
    /// `dt = cfl * min(dx / s_x, dy / s_y)`.
    #[default]
    Cfl,
    /// Additionally capped by `cfl * min(dx, dy)^(5/3)` so that the time error
    /// of SSP-RK3 does not mask fifth-order spatial accuracy.
    CflP53,
}

impl std::str::FromStr for DtRule {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "cfl" => Ok(DtRule::Cfl),
            "cfl-p53" | "cfl_p53" => Ok(DtRule::CflP53),
            _ => Err(Error::InvalidConfig(format!("unknown dt rule '{s}' (cfl|cfl-p53)"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Integrator {
    #[default]
    SspRk3,
    /// Single forward-Euler stage; only for comparing first-order results.
    ForwardEuler,
}

impl std::str::FromStr for Integrator {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "ssp-rk3" | "ssp_rk3" => Ok(Integrator::SspRk3),
            "euler" | "forward-euler" | "forward_euler" => Ok(Integrator::ForwardEuler),
            _ => Err(Error::InvalidConfig(format!("unknown integrator '{s}' (ssp-rk3|euler)"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct StepPolicy {
    pub cfl: f64,
    pub dt_rule: DtRule,
    pub t_final: f64,
    #[serde(default)]
    pub integrator: Integrator,
}

impl StepPolicy {
    pub fn new(t_final: f64) -> Self {
        Self { cfl: 0.45, dt_rule: DtRule::Cfl, t_final, integrator: Integrator::SspRk3 }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.cfl > 0.0 && self.cfl < 1.0) {
            return Err(Error::InvalidConfig(format!("cfl {} outside (0, 1)", self.cfl)));
        }
        if !(self.t_final > 0.0) || !self.t_final.is_finite() {
            return Err(Error::InvalidConfig(format!("final time {} must be positive", self.t_final)));
        }
        Ok(())
    }
}

/// Largest `|u| + c` (x) and `|v| + c` (y, 0 in 1-D) over the interior.
pub fn max_speed<const N: usize>(field: &Field<N>, gas: GasModel) -> Result<(f64, f64)> {
    let (mut sx, mut sy) = (0.0f64, 0.0f64);
    let nx = field.mesh.nx;
    for (k, u) in field.interior().enumerate() {
        let w = u.to_primitive(gas).map_err(|e| e.at_cell(((k % nx) as isize, (k / nx) as isize)))?;
        let c = w.sound_speed(gas);
        sx = sx.max(w.0[1].abs() + c);
        if N == 4 {
            sy = sy.max(w.0[2].abs() + c);
        }
    }
    Ok((sx, sy))
}

/// Time step from the current field, clipped to land on `t_final`.
pub fn select_dt<const N: usize>(field: &Field<N>, policy: &StepPolicy, t: f64, gas: GasModel) -> Result<f64> {
    let (sx, sy) = max_speed(field, gas)?;
    let dx = field.mesh.dx();
    let mut dt = f64::INFINITY;
    if sx > 0.0 {
        dt = dt.min(dx / sx);
    }
    let mut h = dx;
    if N == 4 {
        let dy = field.mesh.dy();
        h = h.min(dy);
        if sy > 0.0 {
            dt = dt.min(dy / sy);
        }
    }
    dt *= policy.cfl;
    if policy.dt_rule == DtRule::CflP53 {
        dt = dt.min(policy.cfl * h.powf(5.0 / 3.0));
    }
    Ok(clip_dt(dt, t, policy.t_final))
}

#[inline]
pub(crate) fn clip_dt(dt: f64, t: f64, t_final: f64) -> f64 {
    let rest = t_final - t;
    if dt >= rest {
        rest
    } else {
        dt
    }
}

/// One SSP-RK3 step on the interior values `u` with a user-supplied
/// operator. `l` receives each stage and returns its rate.
pub fn ssp_rk3<V, F>(u: &[V], dt: f64, mut l: F) -> Result<Vec<V>>
where
    V: Copy + std::ops::Add<Output = V> + std::ops::Mul<f64, Output = V>,
    F: FnMut(usize, &[V]) -> Result<Vec<V>>,
{
    let r0 = l(0, u)?;
    let u1: Vec<V> = u.iter().zip(&r0).map(|(&a, &r)| a + r * dt).collect();
    let r1 = l(1, &u1)?;
    let u2: Vec<V> = u.iter().zip(u1.iter().zip(&r1)).map(|(&a, (&b, &r))| a * 0.75 + (b + r * dt) * 0.25).collect();
    let r2 = l(2, &u2)?;
    Ok(u.iter().zip(u2.iter().zip(&r2)).map(|(&a, (&b, &r))| a * (1.0 / 3.0) + (b + r * dt) * (2.0 / 3.0)).collect())
}

/// Everything [`ssp_rk3_step`] needs to evaluate the spatial operator.
#[derive(Debug, Clone, Copy)]
pub struct Discretization<'a> {
    pub scheme: &'a SchemeConfig,
    pub bc: &'a BoundarySpec,
    pub gas: GasModel,
    pub source: SourceTerm,
}

/// Advances `field` by `dt`; ghosts are refilled before every stage.
pub fn ssp_rk3_step<const N: usize>(field: &mut Field<N>, dt: f64, disc: &Discretization<'_>) -> Result<()> {
    field.fill_ghosts(disc.bc, disc.gas)?;
    let u0 = field.interior_vec();
    let mut work = field.clone();
    let next = ssp_rk3(&u0, dt, |stage, u: &[Conserved<N>]| {
        if stage > 0 {
            work.set_interior(u);
            work.fill_ghosts(disc.bc, disc.gas)?;
            rhs(&work, disc.scheme, disc.gas, disc.source).map_err(|e| stage_error(e, stage))
        } else {
            rhs(field, disc.scheme, disc.gas, disc.source).map_err(|e| stage_error(e, stage))
        }
    })?;
    field.set_interior(&next);
    Ok(())
}

fn stage_error(e: Error, stage: usize) -> Error {
    Error::AtStage { step: 0, stage, time: f64::NAN, source: Box::new(e) }
}

/// Advances `field` by one forward-Euler step of size `dt`.
pub fn forward_euler_step<const N: usize>(field: &mut Field<N>, dt: f64, disc: &Discretization<'_>) -> Result<()> {
    field.fill_ghosts(disc.bc, disc.gas)?;
    let rate = rhs(field, disc.scheme, disc.gas, disc.source).map_err(|e| stage_error(e, 0))?;
    let next: Vec<Conserved<N>> = field.interior().zip(&rate).map(|(&u, &r)| u + r * dt).collect();
    field.set_interior(&next);
    Ok(())
}

/// Per-run diagnostics accumulated step by step.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunDiagnostics {
    pub steps: usize,
    pub min_rho: f64,
    pub min_p: f64,
    pub dt_min: f64,
    pub dt_max: f64,
    pub dt_mean: f64,
    pub wall_clock: f64,
}

impl Default for RunDiagnostics {
    fn default() -> Self {
        Self {
            steps: 0,
            min_rho: f64::INFINITY,
            min_p: f64::INFINITY,
            dt_min: f64::INFINITY,
            dt_max: 0.0,
            dt_mean: 0.0,
            wall_clock: 0.0,
        }
    }
}

impl RunDiagnostics {
    fn record<const N: usize>(&mut self, field: &Field<N>, dt: f64, gas: GasModel) {
        self.steps += 1;
        self.dt_min = self.dt_min.min(dt);
        self.dt_max = self.dt_max.max(dt);
        self.dt_mean += (dt - self.dt_mean) / self.steps as f64;
        self.observe(field, gas);
    }

    fn observe<const N: usize>(&mut self, field: &Field<N>, gas: GasModel) {
        for u in field.interior() {
            self.min_rho = self.min_rho.min(u.rho());
            self.min_p = self.min_p.min(u.pressure_unchecked(gas));
        }
    }
}

/// Integrates from `t0` to each time in `stops` (ascending, last one is the
/// final time), calling `on_stop` at every stop. On failure the error
/// carries the step, stage and time; the field holds the last good state.
pub fn run<const N: usize>(
    field: &mut Field<N>,
    disc: &Discretization<'_>,
    policy: &StepPolicy,
    t0: f64,
    stops: &[f64],
    mut on_stop: impl FnMut(f64, &Field<N>) -> Result<()>,
) -> std::result::Result<RunDiagnostics, (Error, RunDiagnostics)> {
    let start = Instant::now();
    let mut diag = RunDiagnostics::default();
    // min rho / min p include the initial state, so they stay finite when
    // the first step fails
    diag.observe(field, disc.gas);
    macro_rules! bail {
        ($e:expr) => {{
            diag.wall_clock = start.elapsed().as_secs_f64();
            if diag.steps == 0 {
                diag.dt_min = 0.0;
            }
            return Err(($e, diag));
        }};
    }
    if let Err(e) = policy.validate() {
        bail!(e);
    }
    let mut t = t0;
    for &stop in stops {
        let leg = StepPolicy { t_final: stop, ..*policy };
        while t < stop {
            let dt = match select_dt(field, &leg, t, disc.gas) {
                Ok(dt) => dt,
                Err(e) => bail!(Error::AtStage { step: diag.steps, stage: 0, time: t, source: Box::new(e) }),
            };
            if !(dt > 0.0) {
                bail!(Error::InvalidConfig(format!("time step {dt} at t = {t}")));
            }
            let stepped = match policy.integrator {
                Integrator::SspRk3 => ssp_rk3_step(field, dt, disc),
                Integrator::ForwardEuler => forward_euler_step(field, dt, disc),
            };
            if let Err(e) = stepped {
                let e = match e {
                    Error::AtStage { stage, source, .. } => Error::AtStage { step: diag.steps, stage, time: t, source },
                    other => other,
                };
                bail!(e);
            }
            t = if dt == stop - t { stop } else { t + dt };
            diag.record(field, dt, disc.gas);
            if diag.steps.is_multiple_of(500) {
                log::debug!("step {} t = {t:.6} dt = {dt:.3e}", diag.steps);
            }
        }
        if let Err(e) = on_stop(t, field) {
            bail!(e);
        }
    }
    // a final state that is only invalid after the last stage is still a failure
    if let Err(e) = max_speed(field, disc.gas) {
        bail!(Error::AtStage { step: diag.steps, stage: 3, time: t, source: Box::new(e) });
    }
    diag.wall_clock = start.elapsed().as_secs_f64();
    Ok(diag)
}
