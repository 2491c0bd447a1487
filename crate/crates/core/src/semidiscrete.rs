//! Spatial right-hand side: finite-volume flux differences (orders 1-2) and
//! A-WENO finite-difference flux differences with high-order correction
//! terms (orders 3 and 5). 2-D fields are swept dimension by dimension
//! with the same line operator; y-lines are rotated into x-lines.

use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::characteristic::{basis_x, EigenBasis};
use crate::error::{Error, Result};
use crate::flux::{scheme_sides, SchemeId, Side, DEFAULT_EPS0};
use crate::grid::{Field, Field2D};
use crate::reconstruct::{characteristic_interface, slopes_minmod, LimiterConfig};
use crate::state::{physical_flux_x, Conserved, GasModel};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "u32", into = "u32")]
pub enum Order {
    First,
    Second,
    Third,
    Fifth,
}

impl Order {
    pub const ALL: [Order; 4] = [Order::First, Order::Second, Order::Third, Order::Fifth];

    pub fn as_u32(self) -> u32 {
        match self {
            Order::First => 1,
            Order::Second => 2,
            Order::Third => 3,
            Order::Fifth => 5,
        }
    }

    /// Ghost layers the line operator reads on each side.
    pub fn ghost_width(self) -> usize {
        match self {
            Order::First => 1,
            Order::Second => 2,
            Order::Third | Order::Fifth => 5,
        }
    }

    /// Orders 3 and 5 evolve point values, orders 1 and 2 cell averages.
    pub fn is_finite_difference(self) -> bool {
        matches!(self, Order::Third | Order::Fifth)
    }
}

impl TryFrom<u32> for Order {
    type Error = Error;

    fn try_from(v: u32) -> Result<Self> {
        match v {
            1 => Ok(Order::First),
            2 => Ok(Order::Second),
            3 => Ok(Order::Third),
            5 => Ok(Order::Fifth),
            _ => Err(Error::InvalidConfig(format!("order {v} is not one of 1, 2, 3, 5"))),
        }
    }
}

impl From<Order> for u32 {
    fn from(o: Order) -> u32 {
        o.as_u32()
    }
}

impl fmt::Display for Order {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.as_u32())
    }
}

/// Discretization of the flux derivatives in the A-WENO correction.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Correction {
    /// Differences of the finite-volume interface fluxes.
    #[default]
    FluxBased,
    /// Differences of the point fluxes `F(U_j)`.
    PointBased,
}

impl FromStr for Correction {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "flux" | "flux_based" => Ok(Correction::FluxBased),
            "point" | "point_based" => Ok(Correction::PointBased),
            _ => Err(Error::InvalidConfig(format!("unknown correction '{s}' (flux|point)"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SourceTerm {
    #[default]
    None,
    /// `(0, 0, rho, rho v)`: unit gravity along +y.
    GravityRt,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SchemeConfig {
    pub scheme: SchemeId,
    pub order: Order,
    pub limiter: LimiterConfig,
    pub eps0: f64,
    pub correction: Correction,
}

impl SchemeConfig {
    pub fn new(scheme: SchemeId, order: Order) -> Self {
        Self { scheme, order, limiter: LimiterConfig::default(), eps0: DEFAULT_EPS0, correction: Correction::default() }
    }
}

const C2: f64 = 1.0 / 24.0;
const C4: f64 = 7.0 / 5760.0;

struct Line<'a, const N: usize> {
    cells: &'a [Conserved<N>],
    g: usize,
    n: usize,
    dx: f64,
}

impl<const N: usize> Line<'_, N> {
    #[inline]
    fn cell(&self, j: isize) -> &Conserved<N> {
        &self.cells[(self.g as isize + j) as usize]
    }

    #[inline]
    fn window(&self, from: isize, len: usize) -> &[Conserved<N>] {
        let s = (self.g as isize + from) as usize;
        &self.cells[s..s + len]
    }
}

/// Interface fluxes for `j + 1/2`, `j = lo..=hi`.
fn interface_fluxes<const N: usize>(
    line: &Line<'_, N>,
    lo: isize,
    hi: isize,
    cfg: &SchemeConfig,
    gas: GasModel,
) -> std::result::Result<Vec<Conserved<N>>, (isize, Error)> {
    let slopes: Vec<Conserved<N>> = if cfg.order == Order::Second {
        (lo..=hi + 1)
            .map(|j| slopes_minmod([line.cell(j - 1), line.cell(j), line.cell(j + 1)], line.dx, cfg.limiter))
            .collect()
    } else {
        Vec::new()
    };
    let need_basis = cfg.order.is_finite_difference() || cfg.scheme.needs_basis();

    let mut out = Vec::with_capacity((hi - lo + 1) as usize);
    for j in lo..=hi {
        let (a, b) = (line.cell(j), line.cell(j + 1));
        let basis: Option<EigenBasis<N>> =
            if need_basis { Some(basis_x(&((*a + *b) * 0.5), gas).map_err(|e| (j, e))?) } else { None };
        let (ul, ur) = match cfg.order {
            Order::First => (*a, *b),
            Order::Second => {
                let k = (j - lo) as usize;
                (*a + slopes[k] * (0.5 * line.dx), *b - slopes[k + 1] * (0.5 * line.dx))
            }
            Order::Third => characteristic_interface(line.window(j - 1, 4), basis.as_ref().unwrap(), line.dx),
            Order::Fifth => characteristic_interface(line.window(j - 2, 6), basis.as_ref().unwrap(), line.dx),
        };
        let l = Side::new(ul, gas).map_err(|e| (j, e))?;
        let r = Side::new(ur, gas).map_err(|e| (j + 1, e))?;
        out.push(scheme_sides(cfg.scheme, &l, &r, basis.as_ref(), gas, cfg.eps0));
    }
    Ok(out)
}

/// Writes `-(H_{j+1/2} - H_{j-1/2}) / dx` for the `n` interior cells.
fn line_rates<const N: usize>(
    line: &Line<'_, N>,
    cfg: &SchemeConfig,
    gas: GasModel,
    out: &mut [Conserved<N>],
) -> std::result::Result<(), (isize, Error)> {
    let n = line.n as isize;
    let h: Vec<Conserved<N>> = match (cfg.order, cfg.correction) {
        (Order::First | Order::Second, _) => interface_fluxes(line, -1, n - 1, cfg, gas)?,
        (Order::Third, Correction::FluxBased) => {
            let f = interface_fluxes(line, -2, n, cfg, gas)?;
            f.windows(3).map(|w| w[1] - (w[0] - w[1] * 2.0 + w[2]) * C2).collect()
        }
        (Order::Fifth, Correction::FluxBased) => {
            let f = interface_fluxes(line, -3, n + 1, cfg, gas)?;
            f.windows(5)
                .map(|w| {
                    let d2 = (-w[0] + w[1] * 16.0 - w[2] * 30.0 + w[3] * 16.0 - w[4]) * (1.0 / 12.0);
                    let d4 = w[0] - w[1] * 4.0 + w[2] * 6.0 - w[3] * 4.0 + w[4];
                    w[2] - d2 * C2 + d4 * C4
                })
                .collect()
        }
        (order, Correction::PointBased) => {
            let f = interface_fluxes(line, -1, n - 1, cfg, gas)?;
            // point fluxes at j = -3 ..= n + 2
            let p = (-3..n + 3)
                .map(|j| physical_flux_x(line.cell(j), gas).map_err(|e| (j, e)))
                .collect::<std::result::Result<Vec<_>, _>>()?;
            f.iter()
                .enumerate()
                .map(|(k, fk)| {
                    // interface j + 1/2 with j = k - 1; P_j sits at p[j + 3]
                    let q = &p[k..k + 6];
                    if order == Order::Third {
                        *fk - (q[1] - q[2] - q[3] + q[4]) * (0.5 * C2)
                    } else {
                        let d2 = (q[0] * -5.0 + q[1] * 39.0 - q[2] * 34.0 - q[3] * 34.0 + q[4] * 39.0 - q[5] * 5.0)
                            * (1.0 / 48.0);
                        let d4 = (q[0] - q[1] * 3.0 + q[2] * 2.0 + q[3] * 2.0 - q[4] * 3.0 + q[5]) * 0.5;
                        *fk - d2 * C2 + d4 * C4
                    }
                })
                .collect()
        }
    };
    let inv = 1.0 / line.dx;
    for (o, w) in out.iter_mut().zip(h.windows(2)) {
        *o = (w[1] - w[0]) * -inv;
    }
    Ok(())
}

fn first_error<T>(results: Vec<Result<T>>) -> Result<Vec<T>> {
    results.into_iter().collect()
}

/// Spatial operator `L(U)` at the interior cells in row-major order.
/// Ghosts must be filled.
pub fn rhs<const N: usize>(
    field: &Field<N>,
    cfg: &SchemeConfig,
    gas: GasModel,
    src: SourceTerm,
) -> Result<Vec<Conserved<N>>> {
    let need = cfg.order.ghost_width();
    if field.gx < need || (N == 4 && field.gy < need) {
        return Err(Error::GhostTooNarrow { have: field.gx.min(if N == 4 { field.gy } else { field.gx }), need });
    }
    let (nx, ny) = (field.mesh.nx, field.mesh.ny);
    let mut out = vec![Conserved::ZERO; nx * ny];

    let dx = field.mesh.dx();
    let row_results: Vec<Result<()>> = out
        .par_chunks_mut(nx)
        .enumerate()
        .map(|(j, chunk)| {
            let line = Line { cells: field.row(j as isize), g: field.gx, n: nx, dx };
            line_rates(&line, cfg, gas, chunk).map_err(|(i, e)| e.at_cell((i, j as isize)))
        })
        .collect();
    first_error(row_results)?;

    if N == 4 {
        let dy = field.mesh.dy();
        let gy = field.gy as isize;
        let columns: Vec<Result<Vec<Conserved<N>>>> = (0..nx)
            .into_par_iter()
            .map(|i| {
                let cells: Vec<Conserved<N>> =
                    (-gy..ny as isize + gy).map(|j| field.at(i as isize, j).swap_xy()).collect();
                let line = Line { cells: &cells, g: field.gy, n: ny, dx: dy };
                let mut col = vec![Conserved::ZERO; ny];
                line_rates(&line, cfg, gas, &mut col).map_err(|(j, e)| e.at_cell((i as isize, j)))?;
                Ok(col)
            })
            .collect();
        for (i, col) in first_error(columns)?.into_iter().enumerate() {
            for (j, r) in col.into_iter().enumerate() {
                out[j * nx + i] += r.swap_xy();
            }
        }
    }

    if src != SourceTerm::None {
        add_source(field, src, &mut out)?;
    }
    Ok(out)
}

/// [`rhs`] restricted to the finite-volume orders.
pub fn rhs_fv<const N: usize>(
    field: &Field<N>,
    cfg: &SchemeConfig,
    gas: GasModel,
    src: SourceTerm,
) -> Result<Vec<Conserved<N>>> {
    if cfg.order.is_finite_difference() {
        return Err(Error::InvalidConfig(format!("order {} is not a finite-volume order", cfg.order)));
    }
    rhs(field, cfg, gas, src)
}

/// [`rhs`] restricted to the A-WENO orders.
pub fn rhs_awenofd<const N: usize>(
    field: &Field<N>,
    cfg: &SchemeConfig,
    gas: GasModel,
    src: SourceTerm,
) -> Result<Vec<Conserved<N>>> {
    if !cfg.order.is_finite_difference() {
        return Err(Error::InvalidConfig(format!("order {} is not an A-WENO order", cfg.order)));
    }
    rhs(field, cfg, gas, src)
}

/// Source contribution per interior cell, row-major.
pub fn apply_source(field: &Field2D, src: SourceTerm) -> Vec<Conserved<4>> {
    field
        .interior()
        .map(|u| match src {
            SourceTerm::None => Conserved::ZERO,
            SourceTerm::GravityRt => Conserved([0.0, 0.0, u.0[0], u.0[2]]),
        })
        .collect()
}

fn add_source<const N: usize>(field: &Field<N>, src: SourceTerm, out: &mut [Conserved<N>]) -> Result<()> {
    if N != 4 {
        return Err(Error::InvalidConfig(format!("source {src:?} needs a 2-D field")));
    }
    for (o, u) in out.iter_mut().zip(field.interior()) {
        o.0[2] += u.0[0];
        o.0[N - 1] += u.0[2];
    }
    Ok(())
}
