//! One-sided interface values: piecewise-linear reconstruction of cell
//! averages (order 2) and WENO-type interpolation of point values in local
//! characteristic variables (orders 3 and 5).

use serde::{Deserialize, Serialize};

use crate::characteristic::EigenBasis;
use crate::error::{Error, Result};
use crate::state::Conserved;

/// Weight regularization in the WENO nonlinear weights.
pub const WENO_EPS: f64 = 1e-12;
const WENO_POWER: i32 = 2;

/// Generalized minmod: the smallest magnitude when all signs agree, else 0.
pub fn minmod(values: &[f64]) -> f64 {
    let Some((&first, rest)) = values.split_first() else {
        return 0.0;
    };
    let mut m = first;
    for &z in rest {
        if z > 0.0 && m > 0.0 {
            m = m.min(z);
        } else if z < 0.0 && m < 0.0 {
            m = m.max(z);
        } else {
            return 0.0;
        }
    }
    if m.is_nan() {
        0.0
    } else {
        m
    }
}

#[inline]
pub(crate) fn minmod2(a: f64, b: f64) -> f64 {
    if a > 0.0 && b > 0.0 {
        a.min(b)
    } else if a < 0.0 && b < 0.0 {
        a.max(b)
    } else {
        0.0
    }
}

#[inline]
fn minmod3(a: f64, b: f64, c: f64) -> f64 {
    if a > 0.0 && b > 0.0 && c > 0.0 {
        a.min(b).min(c)
    } else if a < 0.0 && b < 0.0 && c < 0.0 {
        a.max(b).max(c)
    } else {
        0.0
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LimiterConfig {
    pub theta: f64,
}

impl LimiterConfig {
    pub fn new(theta: f64) -> Result<Self> {
        if !(1.0..=2.0).contains(&theta) {
            return Err(Error::InvalidConfig(format!("limiter theta {theta} outside [1, 2]")));
        }
        Ok(Self { theta })
    }
}

impl Default for LimiterConfig {
    fn default() -> Self {
        Self { theta: 1.3 }
    }
}

/// Limited slope of the middle of three consecutive cell averages.
#[inline]
pub fn slopes_minmod<const N: usize>(cells: [&Conserved<N>; 3], dx: f64, cfg: LimiterConfig) -> Conserved<N> {
    let [um, u0, up] = cells;
    let mut out = [0.0; N];
    for i in 0..N {
        let back = cfg.theta * (u0.0[i] - um.0[i]) / dx;
        let central = (up.0[i] - um.0[i]) / (2.0 * dx);
        let fwd = cfg.theta * (up.0[i] - u0.0[i]) / dx;
        out[i] = minmod3(back, central, fwd);
    }
    Conserved(out)
}

/// Interface pairs `(U-, U+)` at `j+1/2` for `j = 1..cells.len()-2`.
pub fn reconstruct_order2<const N: usize>(
    cells: &[Conserved<N>],
    dx: f64,
    cfg: LimiterConfig,
) -> Vec<(Conserved<N>, Conserved<N>)> {
    if cells.len() < 4 {
        return Vec::new();
    }
    let slopes: Vec<Conserved<N>> = cells.windows(3).map(|w| slopes_minmod([&w[0], &w[1], &w[2]], dx, cfg)).collect();
    // slopes[k] belongs to cell k + 1
    (0..slopes.len() - 1)
        .map(|k| {
            let left = cells[k + 1] + slopes[k] * (0.5 * dx);
            let right = cells[k + 2] - slopes[k + 1] * (0.5 * dx);
            (left, right)
        })
        .collect()
}

/// Third-order WENO-Z value at `x_{j+1/2}` from point values at `j-1, j, j+1`.
/// The global indicator is the squared second difference and `eps` should
/// scale like `dx^2`, which keeps the ideal weights at smooth extrema.
#[inline]
pub fn weno3_left(um: f64, u0: f64, up: f64, eps: f64) -> f64 {
    let p0 = -0.5 * um + 1.5 * u0;
    let p1 = 0.5 * (u0 + up);
    let b0 = (u0 - um) * (u0 - um);
    let b1 = (up - u0) * (up - u0);
    let d2 = up - 2.0 * u0 + um;
    let tau = d2 * d2;
    let a0 = 0.25 * (1.0 + (tau / (b0 + eps)).powi(WENO_POWER));
    let a1 = 0.75 * (1.0 + (tau / (b1 + eps)).powi(WENO_POWER));
    (a0 * p0 + a1 * p1) / (a0 + a1)
}

/// Left and right values at the middle interface of `(u_{j-1}, u_j, u_{j+1}, u_{j+2})`.
#[inline]
pub fn interpolate_weno3(s: [f64; 4], eps: f64) -> (f64, f64) {
    (weno3_left(s[0], s[1], s[2], eps), weno3_left(s[3], s[2], s[1], eps))
}

/// Fifth-order WENO-Z value at `x_{j+1/2}` from point values at `j-2..=j+2`.
#[inline]
pub fn weno5z_left(s: [f64; 5]) -> f64 {
    let [u0, u1, u2, u3, u4] = s;
    let p0 = 0.375 * u0 - 1.25 * u1 + 1.875 * u2;
    let p1 = -0.125 * u1 + 0.75 * u2 + 0.375 * u3;
    let p2 = 0.375 * u2 + 0.75 * u3 - 0.125 * u4;

    let c = 13.0 / 12.0;
    let b0 = c * (u0 - 2.0 * u1 + u2).powi(2) + 0.25 * (u0 - 4.0 * u1 + 3.0 * u2).powi(2);
    let b1 = c * (u1 - 2.0 * u2 + u3).powi(2) + 0.25 * (u1 - u3).powi(2);
    let b2 = c * (u2 - 2.0 * u3 + u4).powi(2) + 0.25 * (3.0 * u2 - 4.0 * u3 + u4).powi(2);
    let tau = (b0 - b2).abs();

    let a0 = (1.0 / 16.0) * (1.0 + (tau / (b0 + WENO_EPS)).powi(WENO_POWER));
    let a1 = (5.0 / 8.0) * (1.0 + (tau / (b1 + WENO_EPS)).powi(WENO_POWER));
    let a2 = (5.0 / 16.0) * (1.0 + (tau / (b2 + WENO_EPS)).powi(WENO_POWER));
    (a0 * p0 + a1 * p1 + a2 * p2) / (a0 + a1 + a2)
}

/// Left and right values at the middle interface of `u_{j-2}..=u_{j+3}`.
#[inline]
pub fn interpolate_weno5z(s: [f64; 6]) -> (f64, f64) {
    (weno5z_left([s[0], s[1], s[2], s[3], s[4]]), weno5z_left([s[5], s[4], s[3], s[2], s[1]]))
}

/// WENO interface values of a state stencil in the characteristic
/// variables of `basis`. The stencil has 4 entries (order 3) or 6 (order 5)
/// and is centered on the interface; `dx` sets the third-order `eps`.
pub fn characteristic_interface<const N: usize>(
    stencil: &[Conserved<N>],
    basis: &EigenBasis<N>,
    dx: f64,
) -> (Conserved<N>, Conserved<N>) {
    let mut w = [[0.0; N]; 6];
    for (k, u) in stencil.iter().enumerate() {
        w[k] = basis.to_characteristic(u);
    }
    let mut left = [0.0; N];
    let mut right = [0.0; N];
    match stencil.len() {
        4 => {
            for i in 0..N {
                (left[i], right[i]) = interpolate_weno3([w[0][i], w[1][i], w[2][i], w[3][i]], dx * dx);
            }
        }
        6 => {
            for i in 0..N {
                (left[i], right[i]) = interpolate_weno5z([w[0][i], w[1][i], w[2][i], w[3][i], w[4][i], w[5][i]]);
            }
        }
        n => panic!("WENO stencil of length {n}"),
    }
    (basis.from_characteristic(&left), basis.from_characteristic(&right))
}
