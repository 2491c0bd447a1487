//! Interface numerical fluxes: HLL, HLLC, TV splitting, LDCU and LCDCU.
//!
//! Every kernel is written for an x-interface of an `N`-component state
//! (`N = 3` in 1-D, `N = 4` in 2-D). The y-direction variants rotate the
//! momenta, evaluate the x-kernel and rotate the result back.

use std::fmt;
use std::str::FromStr;
use std::sync::atomic::{AtomicBool, AtomicU64, Ordering};

use serde::{Deserialize, Serialize};

use crate::characteristic::{basis_x, EigenBasis};
use crate::error::{Error, Result};
use crate::reconstruct::minmod2;
use crate::speeds::{self, SpeedPair};
use crate::state::{eigenvalues_from, flux_x_from, Conserved, ConservedState2D, GasModel, Primitive};

/// Desingularization threshold for the LCDCU per-field speed gap.
pub const DEFAULT_EPS0: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SchemeId {
    Hll,
    Hllc,
    Tv,
    Ldcu,
    Lcdcu,
}

impl SchemeId {
    pub const ALL: [SchemeId; 5] = [SchemeId::Hll, SchemeId::Hllc, SchemeId::Tv, SchemeId::Ldcu, SchemeId::Lcdcu];

    pub fn name(self) -> &'static str {
        match self {
            SchemeId::Hll => "hll",
            SchemeId::Hllc => "hllc",
            SchemeId::Tv => "tv",
            SchemeId::Ldcu => "ldcu",
            SchemeId::Lcdcu => "lcdcu",
        }
    }

    pub fn needs_basis(self) -> bool {
        self == SchemeId::Lcdcu
    }
}

impl fmt::Display for SchemeId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for SchemeId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        SchemeId::ALL
            .into_iter()
            .find(|id| id.name().eq_ignore_ascii_case(s))
            .ok_or_else(|| Error::InvalidConfig(format!("unknown scheme '{s}' (hll|hllc|tv|ldcu|lcdcu)")))
    }
}

/// One-sided point values `U-` (left) and `U+` (right) at an interface.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct InterfacePair<const N: usize> {
    pub left: Conserved<N>,
    pub right: Conserved<N>,
}

impl<const N: usize> InterfacePair<N> {
    pub fn new(left: Conserved<N>, right: Conserved<N>) -> Self {
        Self { left, right }
    }

    pub fn swap_xy(self) -> Self {
        Self { left: self.left.swap_xy(), right: self.right.swap_xy() }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TvSplitParts<const N: usize> {
    pub advect: Conserved<N>,
    pub pressure: Conserved<N>,
    pub u_star: f64,
    pub p_star: f64,
}

impl<const N: usize> TvSplitParts<N> {
    pub fn total(&self) -> Conserved<N> {
        self.advect + self.pressure
    }
}

/// One side of an interface with every derived quantity the kernels need.
#[derive(Debug, Clone, Copy)]
pub(crate) struct Side<const N: usize> {
    pub u: Conserved<N>,
    pub w: Primitive<N>,
    pub c: f64,
    pub f: Conserved<N>,
}

impl<const N: usize> Side<N> {
    #[inline]
    pub fn new(u: Conserved<N>, gas: GasModel) -> Result<Self> {
        let w = u.to_primitive(gas)?;
        let c = w.sound_speed(gas);
        let f = flux_x_from(&u, &w);
        Ok(Self { u, w, c, f })
    }
}

#[inline]
fn sides<const N: usize>(pair: &InterfacePair<N>, gas: GasModel) -> Result<(Side<N>, Side<N>)> {
    Ok((Side::new(pair.left, gas)?, Side::new(pair.right, gas)?))
}

#[inline]
pub(crate) fn plain_speeds<const N: usize>(l: &Side<N>, r: &Side<N>) -> SpeedPair {
    speeds::from_sound_speeds(l.w.u(), l.c, r.w.u(), r.c)
}

/// Degenerate cases where a kernel formula is undefined.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Fallback {
    /// `a+ = a-` in a branch that divides by their difference.
    DegenerateSpeeds,
    /// HLLC star speed undefined or coincident with an outer speed.
    StarSpeedDegenerate,
    /// LDCU energy anti-diffusion denominator not positive.
    QEDenominatorDegenerate,
}

static FALLBACK_COUNTS: [AtomicU64; 3] = [AtomicU64::new(0), AtomicU64::new(0), AtomicU64::new(0)];
static FALLBACK_LOGGED: [AtomicBool; 3] = [AtomicBool::new(false), AtomicBool::new(false), AtomicBool::new(false)];

#[cold]
fn note_fallback(kind: Fallback) {
    let i = kind as usize;
    FALLBACK_COUNTS[i].fetch_add(1, Ordering::Relaxed);
    if !FALLBACK_LOGGED[i].swap(true, Ordering::Relaxed) {
        log::warn!("flux kernel fallback: {kind:?} (reported once per process)");
    }
}

/// Process-wide number of fallbacks taken, indexed like [`Fallback`].
pub fn fallback_counts() -> [u64; 3] {
    [0, 1, 2].map(|i| FALLBACK_COUNTS[i].load(Ordering::Relaxed))
}

// ---------------------------------------------------------------------------
// HLL

pub fn hll_flux<const N: usize>(pair: &InterfacePair<N>, s: SpeedPair, gas: GasModel) -> Result<Conserved<N>> {
    let (l, r) = sides(pair, gas)?;
    Ok(hll_sides(&l, &r, s))
}

#[inline]
pub(crate) fn hll_sides<const N: usize>(l: &Side<N>, r: &Side<N>, s: SpeedPair) -> Conserved<N> {
    let (am, ap) = (s.a_minus, s.a_plus);
    if am >= 0.0 {
        return l.f;
    }
    if ap <= 0.0 {
        return r.f;
    }
    let d = ap - am;
    if d == 0.0 {
        note_fallback(Fallback::DegenerateSpeeds);
        return l.f;
    }
    let mut out = [0.0; N];
    for i in 0..N {
        out[i] = (ap * l.f.0[i] - am * r.f.0[i] + ap * am * (r.u.0[i] - l.u.0[i])) / d;
    }
    Conserved(out)
}

// ---------------------------------------------------------------------------
// HLLC

pub fn hllc_flux<const N: usize>(pair: &InterfacePair<N>, s: SpeedPair, gas: GasModel) -> Result<Conserved<N>> {
    let (l, r) = sides(pair, gas)?;
    Ok(hllc_sides(&l, &r, s))
}

/// Contact speed between the two outer waves.
#[inline]
pub(crate) fn hllc_star_speed<const N: usize>(l: &Side<N>, r: &Side<N>, s: SpeedPair) -> Option<f64> {
    let (ul, ur) = (l.w.u(), r.w.u());
    let ml = l.w.rho() * (s.a_minus - ul);
    let mr = r.w.rho() * (s.a_plus - ur);
    let den = ml - mr;
    if den == 0.0 {
        return None;
    }
    Some((r.w.p() - l.w.p() + ml * ul - mr * ur) / den)
}

/// Star state on one side of the contact.
#[inline]
fn hllc_star_state<const N: usize>(side: &Side<N>, a: f64, a_star: f64) -> Conserved<N> {
    let rho = side.w.rho();
    let vel = side.w.u();
    let scale = rho * (a - vel) / (a - a_star);
    let mut out = [0.0; N];
    out[0] = scale;
    out[1] = scale * a_star;
    for t in 2..N - 1 {
        out[t] = scale * side.w.0[t];
    }
    out[N - 1] = scale * (side.u.energy() / rho + (a_star - vel) * (a_star + side.w.p() / (rho * (a - vel))));
    Conserved(out)
}

#[inline]
pub(crate) fn hllc_sides<const N: usize>(l: &Side<N>, r: &Side<N>, s: SpeedPair) -> Conserved<N> {
    let (am, ap) = (s.a_minus, s.a_plus);
    if am >= 0.0 {
        return l.f;
    }
    if ap <= 0.0 {
        return r.f;
    }
    let a_star = match hllc_star_speed(l, r, s) {
        Some(a) if a != am && a != ap && a.is_finite() => a,
        _ => {
            note_fallback(Fallback::StarSpeedDegenerate);
            return hll_sides(l, r, s);
        }
    };
    if a_star >= 0.0 {
        l.f + (hllc_star_state(l, am, a_star) - l.u) * am
    } else {
        r.f + (hllc_star_state(r, ap, a_star) - r.u) * ap
    }
}

// ---------------------------------------------------------------------------
// TV splitting

pub fn tv_flux<const N: usize>(pair: &InterfacePair<N>, gas: GasModel) -> Result<TvSplitParts<N>> {
    let (l, r) = sides(pair, gas)?;
    Ok(tv_sides(&l, &r, gas))
}

#[inline]
pub(crate) fn tv_sides<const N: usize>(l: &Side<N>, r: &Side<N>, gas: GasModel) -> TvSplitParts<N> {
    let (ul, ur) = (l.w.u(), r.w.u());
    let (pl, pr) = (l.w.p(), r.w.p());
    let c_plus = r.w.rho() * (ur + (ur * ur + 4.0 * r.c * r.c).sqrt());
    let c_minus = l.w.rho() * (ul - (ul * ul + 4.0 * l.c * l.c).sqrt());
    let dc = c_plus - c_minus;
    let u_star = (c_plus * ur - c_minus * ul) / dc - 2.0 / dc * (pr - pl);
    let p_star = (c_plus * pl - c_minus * pr) / dc + c_plus * c_minus / (2.0 * dc) * (ur - ul);

    let up = if u_star >= 0.0 { l } else { r };
    let mut advect = [0.0; N];
    for i in 0..N - 1 {
        advect[i] = u_star * up.u.0[i];
    }
    advect[N - 1] = u_star * up.u.kinetic();

    let mut pressure = [0.0; N];
    pressure[1] = p_star;
    pressure[N - 1] = gas.gamma * u_star * p_star / (gas.gamma - 1.0);
    TvSplitParts { advect: Conserved(advect), pressure: Conserved(pressure), u_star, p_star }
}

// ---------------------------------------------------------------------------
// LDCU

/// LDCU flux at an x-interface; `s` must come from [`speeds::speeds_clamped`].
pub fn ldcu_flux<const N: usize>(pair: &InterfacePair<N>, s: SpeedPair, gas: GasModel) -> Result<Conserved<N>> {
    let (l, r) = sides(pair, gas)?;
    Ok(ldcu_sides(&l, &r, s))
}

pub fn ldcu_flux_1d(pair: &InterfacePair<3>, s: SpeedPair, gas: GasModel) -> Result<Conserved<3>> {
    ldcu_flux(pair, s, gas)
}

pub fn ldcu_flux_2d_x(pair: &InterfacePair<4>, s: SpeedPair, gas: GasModel) -> Result<ConservedState2D> {
    ldcu_flux(pair, s, gas)
}

/// y-interface LDCU flux; `s` holds the clamped `b-`, `b+` speeds.
pub fn ldcu_flux_2d_y(pair: &InterfacePair<4>, s: SpeedPair, gas: GasModel) -> Result<ConservedState2D> {
    Ok(ldcu_flux(&pair.swap_xy(), s, gas)?.swap_xy())
}

#[inline]
pub(crate) fn ldcu_sides<const N: usize>(l: &Side<N>, r: &Side<N>, s: SpeedPair) -> Conserved<N> {
    let (am, ap) = (s.a_minus, s.a_plus);
    let d = ap - am;
    if d == 0.0 {
        note_fallback(Fallback::DegenerateSpeeds);
        return l.f;
    }
    let mut star = [0.0; N];
    let mut base = [0.0; N];
    let coef = ap * am / d;
    for i in 0..N {
        let du = r.u.0[i] - l.u.0[i];
        star[i] = (ap * r.u.0[i] - am * l.u.0[i] - (r.f.0[i] - l.f.0[i])) / d;
        base[i] = (ap * l.f.0[i] - am * r.f.0[i]) / d + coef * du;
    }
    let rho_star = star[0];
    if !(rho_star > 0.0) {
        return Conserved(base);
    }
    let u_star = star[1] / rho_star;
    let asp = ap - u_star;
    let asm = am - u_star;
    let alpha = if u_star < 0.0 { ap / asp } else { am / asm };
    if !alpha.is_finite() {
        // a- = u* = 0: the interface is upwinded already
        return Conserved(base);
    }

    let q_rho = minmod2(-asm * (rho_star - l.u.0[0]), asp * (r.u.0[0] - rho_star));
    let mut q = [0.0; N];
    q[0] = q_rho;
    q[1] = u_star * q_rho;

    let mut brace = 0.0;
    let brace_ok = asp != 0.0 && asm != 0.0;
    let rho_p = rho_star + q_rho / asp;
    let rho_m = rho_star + q_rho / asm;
    let dens_ok = rho_p > 0.0 && rho_m > 0.0;
    for t in 2..N - 1 {
        let q_t = minmod2(-asm * (star[t] - l.u.0[t]), asp * (r.u.0[t] - star[t]));
        q[t] = q_t;
        if brace_ok && dens_ok {
            let mp = star[t] + q_t / asp;
            let mm = star[t] + q_t / asm;
            brace += mm * mm / (2.0 * rho_m) - mp * mp / (2.0 * rho_p);
        }
    }
    if N > 3 && brace_ok && !dens_ok {
        note_fallback(Fallback::QEDenominatorDegenerate);
    }
    let brace_term = if brace_ok { asp * asm / d * brace } else { 0.0 };
    q[N - 1] = brace_term + 0.5 * u_star * u_star * q_rho;

    let mut out = base;
    for i in 0..N {
        out[i] += alpha * q[i];
    }
    Conserved(out)
}

// ---------------------------------------------------------------------------
// LCDCU

/// LCDCU flux with the characteristic basis built at `avg`.
pub fn lcdcu_flux<const N: usize>(
    pair: &InterfacePair<N>,
    avg: &Conserved<N>,
    gas: GasModel,
    eps0: f64,
) -> Result<Conserved<N>> {
    let (l, r) = sides(pair, gas)?;
    let basis = basis_x(avg, gas)?;
    Ok(lcdcu_sides(&l, &r, &basis, gas, eps0))
}

/// y-interface LCDCU flux of a 2-D pair (basis of `dG/dU` at `avg`).
pub fn lcdcu_flux_y(
    pair: &InterfacePair<4>,
    avg: &ConservedState2D,
    gas: GasModel,
    eps0: f64,
) -> Result<ConservedState2D> {
    Ok(lcdcu_flux(&pair.swap_xy(), &avg.swap_xy(), gas, eps0)?.swap_xy())
}

#[inline]
pub(crate) fn lcdcu_sides<const N: usize>(
    l: &Side<N>,
    r: &Side<N>,
    basis: &EigenBasis<N>,
    gas: GasModel,
    eps0: f64,
) -> Conserved<N> {
    let lam_l = eigenvalues_from(&l.w, gas);
    let lam_r = eigenvalues_from(&r.w, gas);
    let fl = basis.to_characteristic(&l.f);
    let fr = basis.to_characteristic(&r.f);
    let du = basis.to_characteristic(&(r.u - l.u));
    let mut w = [0.0; N];
    for i in 0..N {
        let lp = lam_l[i].max(lam_r[i]).max(0.0);
        let lm = lam_l[i].min(lam_r[i]).min(0.0);
        let gap = lp - lm;
        w[i] = if gap > eps0 { (lp * fl[i] - lm * fr[i] + lp * lm * du[i]) / gap } else { 0.5 * (fl[i] + fr[i]) };
    }
    basis.from_characteristic(&w)
}

// ---------------------------------------------------------------------------

/// Dispatches to the selected kernel at an x-interface with that scheme's
/// speed estimate. `basis` is required for LCDCU and ignored otherwise.
#[inline]
pub(crate) fn scheme_sides<const N: usize>(
    scheme: SchemeId,
    l: &Side<N>,
    r: &Side<N>,
    basis: Option<&EigenBasis<N>>,
    gas: GasModel,
    eps0: f64,
) -> Conserved<N> {
    match scheme {
        SchemeId::Hll => hll_sides(l, r, plain_speeds(l, r)),
        SchemeId::Hllc => hllc_sides(l, r, plain_speeds(l, r)),
        SchemeId::Tv => tv_sides(l, r, gas).total(),
        SchemeId::Ldcu => ldcu_sides(l, r, speeds::clamp(plain_speeds(l, r))),
        SchemeId::Lcdcu => {
            let basis = basis.expect("LCDCU needs an interface eigenbasis");
            lcdcu_sides(l, r, basis, gas, eps0)
        }
    }
}

/// Numerical flux of `scheme` at an x-interface. `avg` is the state used
/// for the LCDCU characteristic basis (the mean of the two adjacent cells
/// in the solver).
pub fn numerical_flux<const N: usize>(
    scheme: SchemeId,
    pair: &InterfacePair<N>,
    avg: &Conserved<N>,
    gas: GasModel,
    eps0: f64,
) -> Result<Conserved<N>> {
    let (l, r) = sides(pair, gas)?;
    let basis = if scheme.needs_basis() { Some(basis_x(avg, gas)?) } else { None };
    Ok(scheme_sides(scheme, &l, &r, basis.as_ref(), gas, eps0))
}

/// Numerical flux of `scheme` at a y-interface of a 2-D field.
pub fn numerical_flux_y(
    scheme: SchemeId,
    pair: &InterfacePair<4>,
    avg: &ConservedState2D,
    gas: GasModel,
    eps0: f64,
) -> Result<ConservedState2D> {
    Ok(numerical_flux(scheme, &pair.swap_xy(), &avg.swap_xy(), gas, eps0)?.swap_xy())
}
