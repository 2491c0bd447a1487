//! Flux kernels against independent straight-line oracles.

#![allow(clippy::needless_range_loop)]

mod common;

use common::*;
use lowdiss::flux::SchemeId;

const PAIRS: usize = 10_000;
const TOL: f64 = 1e-12;

#[test]
fn oracle_basis_diagonalizes_the_jacobian() {
    let mut g = rng(7);
    for _ in 0..200 {
        let (w, _) = random_pair(&mut g, true);
        let a = jacobian(&w);
        let (r, lam) = right_vectors(&w);
        for k in 0..4 {
            for i in 0..4 {
                let ar: f64 = (0..4).map(|j| a[i][j] * r[j][k]).sum();
                assert!((ar - lam[k] * r[i][k]).abs() < 1e-11 * (1.0 + ar.abs()), "field {k} row {i}");
            }
        }
    }
}

#[test]
fn inverse_is_an_inverse() {
    let (r, _) = right_vectors(&W { rho: 1.3, u: 0.4, v: -0.2, p: 2.0 });
    let l = invert(r);
    for i in 0..4 {
        for j in 0..4 {
            let s: f64 = (0..4).map(|k| l[i][k] * r[k][j]).sum();
            assert!((s - f64::from(u8::from(i == j))).abs() < 1e-13);
        }
    }
}

macro_rules! oracle_case {
    ($name:ident, $scheme:expr, $two_d:expr, $seed:expr) => {
        #[test]
        fn $name() {
            let worst = worst_mismatch($scheme, $two_d, PAIRS, $seed);
            assert!(worst <= TOL, "worst relative mismatch {worst:e}");
        }
    };
}

oracle_case!(hll_1d, SchemeId::Hll, false, 1);
oracle_case!(hllc_1d, SchemeId::Hllc, false, 2);
oracle_case!(tv_1d, SchemeId::Tv, false, 3);
oracle_case!(ldcu_1d, SchemeId::Ldcu, false, 4);
oracle_case!(lcdcu_1d, SchemeId::Lcdcu, false, 5);
oracle_case!(hll_2d, SchemeId::Hll, true, 11);
oracle_case!(hllc_2d, SchemeId::Hllc, true, 12);
oracle_case!(tv_2d, SchemeId::Tv, true, 13);
oracle_case!(ldcu_2d, SchemeId::Ldcu, true, 14);
oracle_case!(lcdcu_2d, SchemeId::Lcdcu, true, 15);

#[test]
fn ldcu_brace_is_exercised() {
    // the tangential energy term must be nonzero on a shear pair
    let l = W { rho: 1.0, u: 0.3, v: 1.0, p: 1.0 };
    let r = W { rho: 0.5, u: 0.3, v: -1.0, p: 1.0 };
    let with = ldcu(&l, &r);
    let without = ldcu(&W { v: 0.0, ..l }, &W { v: 0.0, ..r });
    assert!((with[3] - without[3]).abs() > 1e-3);
    let k = kernel(SchemeId::Ldcu, &l, &r, true);
    assert!(rel_err(&k, &with, &l, &r) <= TOL);
}

#[test]
fn y_kernels_are_rotations() {
    use lowdiss::flux::{numerical_flux, numerical_flux_y, InterfacePair};
    use lowdiss::state::{Conserved, GasModel, Primitive};
    let gas = GasModel::air();
    let mut g = rng(21);
    for scheme in SchemeId::ALL {
        for _ in 0..500 {
            let (l, r) = random_pair(&mut g, true);
            let pl = Primitive([l.rho, l.v, l.u, l.p]).to_conserved(gas);
            let pr = Primitive([r.rho, r.v, r.u, r.p]).to_conserved(gas);
            let avg = Conserved(std::array::from_fn(|i| 0.5 * (pl.0[i] + pr.0[i])));
            let gy = numerical_flux_y(scheme, &InterfacePair::new(pl, pr), &avg, gas, 1e-12).unwrap();
            let o = oracle(scheme, &l, &r, true);
            let expect = [o[0], o[2], o[1], o[3]];
            assert!(rel_err(&gy.0, &expect, &l, &r) <= TOL, "{scheme}");
            let fx =
                numerical_flux(scheme, &InterfacePair::new(pl.swap_xy(), pr.swap_xy()), &avg.swap_xy(), gas, 1e-12)
                    .unwrap();
            assert!(rel_err(&fx.0, &o, &l, &r) <= TOL, "{scheme}");
        }
    }
}
