//! Straight-line flux oracles written from primitive variables, plus random
//! interface pairs. Shared by the oracle and acceptance targets.

#![allow(dead_code)]

use lowdiss::flux::{self, InterfacePair};
use lowdiss::speeds::{speeds_clamped, speeds_plain};
use lowdiss::state::{Conserved, GasModel, Primitive};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub const GAMMA: f64 = 1.4;

/// Primitive state `(rho, u, v, p)`; `v = 0` in 1-D.
#[derive(Debug, Clone, Copy)]
pub struct W {
    pub rho: f64,
    pub u: f64,
    pub v: f64,
    pub p: f64,
}

impl W {
    pub fn e(&self) -> f64 {
        self.p / (GAMMA - 1.0) + 0.5 * self.rho * (self.u * self.u + self.v * self.v)
    }

    pub fn c(&self) -> f64 {
        (GAMMA * self.p / self.rho).sqrt()
    }

    pub fn h(&self) -> f64 {
        (self.e() + self.p) / self.rho
    }

    pub fn cons(&self) -> [f64; 4] {
        [self.rho, self.rho * self.u, self.rho * self.v, self.e()]
    }

    pub fn flux(&self) -> [f64; 4] {
        let m = self.rho * self.u;
        [m, m * self.u + self.p, m * self.v, self.u * (self.e() + self.p)]
    }

    fn from_cons(q: [f64; 4]) -> W {
        let u = q[1] / q[0];
        let v = q[2] / q[0];
        W { rho: q[0], u, v, p: (GAMMA - 1.0) * (q[3] - 0.5 * q[0] * (u * u + v * v)) }
    }
}

pub fn random_pair(rng: &mut ChaCha8Rng, two_d: bool) -> (W, W) {
    let mut w = || W {
        rho: rng.gen_range(0.1..10.0),
        u: rng.gen_range(-3.0..3.0),
        v: if two_d { rng.gen_range(-3.0..3.0) } else { 0.0 },
        p: rng.gen_range(0.1..10.0),
    };
    (w(), w())
}

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn plain(l: &W, r: &W) -> (f64, f64) {
    ((l.u - l.c()).min(r.u - r.c()), (l.u + l.c()).max(r.u + r.c()))
}

pub fn hll(l: &W, r: &W) -> [f64; 4] {
    let (am, ap) = plain(l, r);
    hll_with(l, r, am, ap)
}

fn hll_with(l: &W, r: &W, am: f64, ap: f64) -> [f64; 4] {
    if am >= 0.0 {
        return l.flux();
    }
    if ap <= 0.0 {
        return r.flux();
    }
    let (fl, fr, ql, qr) = (l.flux(), r.flux(), l.cons(), r.cons());
    std::array::from_fn(|i| (ap * fl[i] - am * fr[i] + ap * am * (qr[i] - ql[i])) / (ap - am))
}

/// Toro's HLLC with the contact speed from the two outer waves.
pub fn hllc(l: &W, r: &W) -> [f64; 4] {
    let (sl, sr) = plain(l, r);
    if sl >= 0.0 {
        return l.flux();
    }
    if sr <= 0.0 {
        return r.flux();
    }
    let s =
        (r.p - l.p + l.rho * l.u * (sl - l.u) - r.rho * r.u * (sr - r.u)) / (l.rho * (sl - l.u) - r.rho * (sr - r.u));
    let (k, sk) = if s >= 0.0 { (l, sl) } else { (r, sr) };
    let f = k.rho * (sk - k.u) / (sk - s);
    let star = [f, f * s, f * k.v, f * (k.e() / k.rho + (s - k.u) * (s + k.p / (k.rho * (sk - k.u))))];
    let (fk, qk) = (k.flux(), k.cons());
    std::array::from_fn(|i| fk[i] + sk * (star[i] - qk[i]))
}

pub fn tv(l: &W, r: &W) -> [f64; 4] {
    let cp = r.rho * (r.u + (r.u * r.u + 4.0 * r.c() * r.c()).sqrt());
    let cm = l.rho * (l.u - (l.u * l.u + 4.0 * l.c() * l.c()).sqrt());
    let us = (cp * r.u - cm * l.u) / (cp - cm) - 2.0 * (r.p - l.p) / (cp - cm);
    let ps = (cp * l.p - cm * r.p) / (cp - cm) + cp * cm * (r.u - l.u) / (2.0 * (cp - cm));
    let k = if us >= 0.0 { l } else { r };
    let kin = 0.5 * k.rho * (k.u * k.u + k.v * k.v);
    [us * k.rho, us * k.rho * k.u + ps, us * k.rho * k.v, us * kin + GAMMA / (GAMMA - 1.0) * us * ps]
}

fn mm(a: f64, b: f64) -> f64 {
    if a > 0.0 && b > 0.0 {
        a.min(b)
    } else if a < 0.0 && b < 0.0 {
        a.max(b)
    } else {
        0.0
    }
}

/// LDCU with clamped speeds. The tangential energy brace is
/// `(rho v)_-^2 / (2 rho_-) - (rho v)_+^2 / (2 rho_+)`.
pub fn ldcu(l: &W, r: &W) -> [f64; 4] {
    let (am, ap) = plain(l, r);
    let (am, ap) = (am.min(0.0), ap.max(0.0));
    let (ql, qr, fl, fr) = (l.cons(), r.cons(), l.flux(), r.flux());
    let d = ap - am;
    let st: [f64; 4] = std::array::from_fn(|i| (ap * qr[i] - am * ql[i] - (fr[i] - fl[i])) / d);
    let hll: [f64; 4] = std::array::from_fn(|i| (ap * fl[i] - am * fr[i]) / d + ap * am / d * (qr[i] - ql[i]));
    let rho_s = st[0];
    let u_s = st[1] / rho_s;
    let (bp, bm) = (ap - u_s, am - u_s);
    let alpha = if u_s < 0.0 { ap / bp } else { am / bm };
    if !alpha.is_finite() || rho_s <= 0.0 {
        return hll;
    }
    let q_rho = mm(-bm * (rho_s - ql[0]), bp * (qr[0] - rho_s));
    let q_v = mm(-bm * (st[2] - ql[2]), bp * (qr[2] - st[2]));
    let (rp, rm) = (rho_s + q_rho / bp, rho_s + q_rho / bm);
    let (mp, mn) = (st[2] + q_v / bp, st[2] + q_v / bm);
    let brace = if bp != 0.0 && bm != 0.0 && rp > 0.0 && rm > 0.0 {
        bp * bm / d * (mn * mn / (2.0 * rm) - mp * mp / (2.0 * rp))
    } else {
        0.0
    };
    let q = [q_rho, u_s * q_rho, q_v, brace + 0.5 * u_s * u_s * q_rho];
    std::array::from_fn(|i| hll[i] + alpha * q[i])
}

/// Dense flux Jacobian `dF/dU` of the 2-D Euler equations.
pub fn jacobian(w: &W) -> [[f64; 4]; 4] {
    let g = GAMMA - 1.0;
    let (u, v, h) = (w.u, w.v, w.h());
    let k = 0.5 * (u * u + v * v);
    [
        [0.0, 1.0, 0.0, 0.0],
        [g * k - u * u, (3.0 - GAMMA) * u, -g * v, g],
        [-u * v, v, u, 0.0],
        [u * (g * k - h), h - g * u * u, -g * u * v, GAMMA * u],
    ]
}

/// Right eigenvectors of [`jacobian`] as columns, with the eigenvalues.
/// The repeated eigenvalue `u` uses the basis `(1, u, 0, (u^2 - v^2)/2)`,
/// `(0, 0, 1, v)`, which spans the same space as the solver's.
pub fn right_vectors(w: &W) -> ([[f64; 4]; 4], [f64; 4]) {
    let (u, v, c, h) = (w.u, w.v, w.c(), w.h());
    let cols = [
        [1.0, u - c, v, h - u * c],
        [1.0, u, 0.0, 0.5 * (u * u - v * v)],
        [0.0, 0.0, 1.0, v],
        [1.0, u + c, v, h + u * c],
    ];
    (std::array::from_fn(|i| std::array::from_fn(|j| cols[j][i])), [u - c, u, u, u + c])
}

/// Gauss-Jordan inverse with partial pivoting.
pub fn invert<const N: usize>(a: [[f64; N]; N]) -> [[f64; N]; N] {
    let mut m = a;
    let mut inv: [[f64; N]; N] = std::array::from_fn(|i| std::array::from_fn(|j| f64::from(u8::from(i == j))));
    for col in 0..N {
        let piv = (col..N).max_by(|&x, &y| m[x][col].abs().total_cmp(&m[y][col].abs())).unwrap();
        m.swap(col, piv);
        inv.swap(col, piv);
        let d = m[col][col];
        for j in 0..N {
            m[col][j] /= d;
            inv[col][j] /= d;
        }
        for row in 0..N {
            if row != col {
                let f = m[row][col];
                for j in 0..N {
                    m[row][j] -= f * m[col][j];
                    inv[row][j] -= f * inv[col][j];
                }
            }
        }
    }
    inv
}

fn matvec<const N: usize>(m: &[[f64; N]; N], x: &[f64; N]) -> [f64; N] {
    std::array::from_fn(|i| (0..N).map(|j| m[i][j] * x[j]).sum())
}

/// LCDCU through dense matrices: `R` at the mean state, `L = R^-1`.
/// For 1-D pairs the `v` row and shear column are dropped.
pub fn lcdcu(l: &W, r: &W, two_d: bool, eps0: f64) -> [f64; 4] {
    let avg = W::from_cons(std::array::from_fn(|i| 0.5 * (l.cons()[i] + r.cons()[i])));
    let (rm4, _) = right_vectors(&avg);
    let lam = |w: &W| [w.u - w.c(), w.u, w.u, w.u + w.c()];
    let (lam_l, lam_r) = (lam(l), lam(r));
    let wave = |i: usize, fl: f64, fr: f64, du: f64| {
        let lp = lam_l[i].max(lam_r[i]).max(0.0);
        let ln = lam_l[i].min(lam_r[i]).min(0.0);
        if lp - ln > eps0 {
            (lp * fl - ln * fr + lp * ln * du) / (lp - ln)
        } else {
            0.5 * (fl + fr)
        }
    };
    let (fl, fr) = (l.flux(), r.flux());
    let du: [f64; 4] = std::array::from_fn(|i| r.cons()[i] - l.cons()[i]);
    if two_d {
        let lm = invert(rm4);
        let (cl, cr, cd) = (matvec(&lm, &fl), matvec(&lm, &fr), matvec(&lm, &du));
        let w: [f64; 4] = std::array::from_fn(|i| wave(i, cl[i], cr[i], cd[i]));
        matvec(&rm4, &w)
    } else {
        let keep = [0usize, 1, 3];
        let fields = [0usize, 1, 3];
        let rm: [[f64; 3]; 3] = std::array::from_fn(|i| std::array::from_fn(|j| rm4[keep[i]][fields[j]]));
        let lm = invert(rm);
        let pick = |x: &[f64; 4]| [x[0], x[1], x[3]];
        let (cl, cr, cd) = (matvec(&lm, &pick(&fl)), matvec(&lm, &pick(&fr)), matvec(&lm, &pick(&du)));
        let w: [f64; 3] = std::array::from_fn(|k| wave(fields[k], cl[k], cr[k], cd[k]));
        let out = matvec(&rm, &w);
        [out[0], out[1], 0.0, out[2]]
    }
}

pub fn oracle(scheme: flux::SchemeId, l: &W, r: &W, two_d: bool) -> [f64; 4] {
    use flux::SchemeId::*;
    match scheme {
        Hll => hll(l, r),
        Hllc => hllc(l, r),
        Tv => tv(l, r),
        Ldcu => ldcu(l, r),
        Lcdcu => lcdcu(l, r, two_d, flux::DEFAULT_EPS0),
    }
}

/// The library kernel for `scheme`, widened to four components.
pub fn kernel(scheme: flux::SchemeId, l: &W, r: &W, two_d: bool) -> [f64; 4] {
    let gas = GasModel::new(GAMMA).unwrap();
    if two_d {
        let (pl, pr) = (Primitive([l.rho, l.u, l.v, l.p]), Primitive([r.rho, r.u, r.v, r.p]));
        kernel_n(scheme, &pl, &pr, gas)
    } else {
        let (pl, pr) = (Primitive([l.rho, l.u, l.p]), Primitive([r.rho, r.u, r.p]));
        let f = kernel_n(scheme, &pl, &pr, gas);
        [f[0], f[1], 0.0, f[2]]
    }
}

fn kernel_n<const N: usize>(scheme: flux::SchemeId, pl: &Primitive<N>, pr: &Primitive<N>, gas: GasModel) -> [f64; N] {
    use flux::SchemeId::*;
    let pair = InterfacePair::new(pl.to_conserved(gas), pr.to_conserved(gas));
    let f = match scheme {
        Hll => flux::hll_flux(&pair, speeds_plain(pl, pr, gas), gas),
        Hllc => flux::hllc_flux(&pair, speeds_plain(pl, pr, gas), gas),
        Tv => flux::tv_flux(&pair, gas).map(|t| t.total()),
        Ldcu => flux::ldcu_flux(&pair, speeds_clamped(pl, pr, gas), gas),
        Lcdcu => {
            let avg = Conserved(std::array::from_fn(|i| 0.5 * (pair.left.0[i] + pair.right.0[i])));
            flux::lcdcu_flux(&pair, &avg, gas, flux::DEFAULT_EPS0)
        }
    };
    f.unwrap().0
}

/// Largest component error relative to the scale of the two physical fluxes.
pub fn rel_err(a: &[f64; 4], b: &[f64; 4], l: &W, r: &W) -> f64 {
    let scale = l
        .flux()
        .iter()
        .chain(r.flux().iter())
        .chain(l.cons().iter())
        .chain(r.cons().iter())
        .fold(1.0f64, |m, x| m.max(x.abs()));
    (0..4).map(|i| (a[i] - b[i]).abs()).fold(0.0, f64::max) / scale
}

/// Worst relative mismatch between kernel and oracle over `n` random pairs.
pub fn worst_mismatch(scheme: flux::SchemeId, two_d: bool, n: usize, seed: u64) -> f64 {
    let mut g = rng(seed);
    (0..n)
        .map(|_| {
            let (l, r) = random_pair(&mut g, two_d);
            rel_err(&kernel(scheme, &l, &r, two_d), &oracle(scheme, &l, &r, two_d), &l, &r)
        })
        .fold(0.0, f64::max)
}
