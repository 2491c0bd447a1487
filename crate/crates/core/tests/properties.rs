//! Property tests of the state algebra, kernels and spatial operator.

use lowdiss::flux::{numerical_flux, InterfacePair, SchemeId};
use lowdiss::grid::{Boundary, BoundarySpec, Field, Mesh};
use lowdiss::reconstruct::{minmod, reconstruct_order2, LimiterConfig};
use lowdiss::semidiscrete::{rhs, Order, SchemeConfig, SourceTerm};
use lowdiss::speeds::{speeds_clamped, speeds_plain};
use lowdiss::state::{physical_flux_x, Conserved, GasModel, Primitive};
use proptest::prelude::*;

fn gas() -> GasModel {
    GasModel::air()
}

fn prim1() -> impl Strategy<Value = Primitive<3>> {
    (0.1..10.0f64, -3.0..3.0f64, 0.1..10.0f64).prop_map(|(r, u, p)| Primitive([r, u, p]))
}

fn prim2() -> impl Strategy<Value = Primitive<4>> {
    (0.1..10.0f64, -3.0..3.0f64, -3.0..3.0f64, 0.1..10.0f64).prop_map(|(r, u, v, p)| Primitive([r, u, v, p]))
}

/// Moderate jumps, so every order keeps positive interface states.
fn mild1() -> impl Strategy<Value = Primitive<3>> {
    (1.0..2.0f64, -0.5..0.5f64, 1.0..2.0f64).prop_map(|(r, u, p)| Primitive([r, u, p]))
}

fn scheme() -> impl Strategy<Value = SchemeId> {
    prop::sample::select(SchemeId::ALL.to_vec())
}

fn order() -> impl Strategy<Value = Order> {
    prop::sample::select(vec![Order::First, Order::Second, Order::Third, Order::Fifth])
}

fn close<const N: usize>(a: &[f64; N], b: &[f64; N], tol: f64) -> bool {
    let scale = a.iter().chain(b).fold(1.0f64, |m, x| m.max(x.abs()));
    a.iter().zip(b).all(|(x, y)| (x - y).abs() <= tol * scale)
}

/// Periodic 1-D field of positive states with cell `k` holding `cells[k]`.
fn periodic_line(cells: &[Primitive<3>], order: Order) -> Field<3> {
    let mesh = Mesh::line(cells.len(), 0.0, 1.0);
    let mut f = Field::new(mesh, order.ghost_width()).unwrap();
    let u: Vec<Conserved<3>> = cells.iter().map(|w| w.to_conserved(gas())).collect();
    f.set_interior(&u);
    f.fill_ghosts(&BoundarySpec::uniform(Boundary::Periodic), gas()).unwrap();
    f
}

proptest! {
    #[test]
    fn primitive_round_trip_1d(w in prim1()) {
        let back = w.to_conserved(gas()).to_primitive(gas()).unwrap();
        prop_assert!(close(&w.0, &back.0, 1e-13));
    }

    #[test]
    fn primitive_round_trip_2d(w in prim2()) {
        let back = w.to_conserved(gas()).to_primitive(gas()).unwrap();
        prop_assert!(close(&w.0, &back.0, 1e-13));
    }

    #[test]
    fn consistency_1d(s in scheme(), w in prim1()) {
        let u = w.to_conserved(gas());
        let f = numerical_flux(s, &InterfacePair::new(u, u), &u, gas(), 1e-12).unwrap();
        prop_assert!(close(&f.0, &physical_flux_x(&u, gas()).unwrap().0, 1e-13), "{s}");
    }

    #[test]
    fn consistency_2d(s in scheme(), w in prim2()) {
        let u = w.to_conserved(gas());
        let f = numerical_flux(s, &InterfacePair::new(u, u), &u, gas(), 1e-12).unwrap();
        prop_assert!(close(&f.0, &physical_flux_x(&u, gas()).unwrap().0, 1e-13), "{s}");
    }

    #[test]
    fn minmod_is_bounded_and_symmetric(v in prop::collection::vec(-10.0..10.0f64, 1..6)) {
        let m = minmod(&v);
        let smallest = v.iter().fold(f64::INFINITY, |a, x| a.min(x.abs()));
        prop_assert!(m.abs() <= smallest);
        if m != 0.0 {
            prop_assert!(v.iter().all(|x| x.signum() == m.signum()));
            prop_assert!(v.contains(&m));
        } else {
            prop_assert!(smallest == 0.0 || v.iter().any(|x| x.signum() != v[0].signum()));
        }
        let mut r = v.clone();
        r.reverse();
        prop_assert_eq!(m, minmod(&r));
    }

    #[test]
    fn order2_values_stay_between_neighbours(
        vals in prop::collection::vec(-5.0..5.0f64, 6..20),
        theta in 1.0..2.0f64,
    ) {
        let cells: Vec<Conserved<3>> = vals.iter().map(|&x| Conserved([x, -x, 2.0 * x])).collect();
        let cfg = LimiterConfig::new(theta).unwrap();
        for (k, (l, r)) in reconstruct_order2(&cells, 0.1, cfg).iter().enumerate() {
            let (a, b) = (cells[k + 1].0, cells[k + 2].0);
            for i in 0..3 {
                let (lo, hi) = (a[i].min(b[i]) - 1e-12, a[i].max(b[i]) + 1e-12);
                prop_assert!(l.0[i] >= lo && l.0[i] <= hi);
                prop_assert!(r.0[i] >= lo && r.0[i] <= hi);
            }
        }
    }

    #[test]
    fn speeds_bracket_the_eigenvalues(l in prim1(), r in prim1()) {
        let s = speeds_plain(&l, &r, gas());
        for w in [l, r] {
            let c = w.sound_speed(gas());
            prop_assert!(s.a_minus <= w.u() - c && w.u() + c <= s.a_plus);
        }
        let c = speeds_clamped(&l, &r, gas());
        prop_assert!(c.a_minus <= 0.0 && c.a_plus >= 0.0);
        prop_assert!(c.a_minus <= s.a_minus && c.a_plus >= s.a_plus);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn rhs_commutes_with_periodic_shift(
        s in scheme(),
        o in order(),
        cells in prop::collection::vec(mild1(), 12..24),
        k in 1usize..11,
    ) {
        let cfg = SchemeConfig::new(s, o);
        let base = rhs(&periodic_line(&cells, o), &cfg, gas(), SourceTerm::None).unwrap();
        let n = cells.len();
        let shifted: Vec<_> = (0..n).map(|i| cells[(i + k) % n]).collect();
        let moved = rhs(&periodic_line(&shifted, o), &cfg, gas(), SourceTerm::None).unwrap();
        for i in 0..n {
            prop_assert_eq!(moved[i], base[(i + k) % n]);
        }
    }

    #[test]
    fn plane_2d_data_reduces_to_1d(
        s in scheme(),
        o in order(),
        cells in prop::collection::vec(mild1(), 10..16),
    ) {
        let cfg = SchemeConfig::new(s, o);
        let line = rhs(&periodic_line(&cells, o), &cfg, gas(), SourceTerm::None).unwrap();
        let (nx, ny) = (cells.len(), 6);
        let g = o.ghost_width();
        let mut f = Field::<4>::new(Mesh::rect(nx, ny, (0.0, 1.0), (0.0, 1.0)), g).unwrap();
        let u: Vec<Conserved<4>> = (0..ny)
            .flat_map(|_| cells.iter().map(|w| Primitive([w.0[0], w.0[1], 0.0, w.0[2]]).to_conserved(gas())))
            .collect();
        f.set_interior(&u);
        f.fill_ghosts(&BoundarySpec::uniform(Boundary::Periodic), gas()).unwrap();
        let plane = rhs(&f, &cfg, gas(), SourceTerm::None).unwrap();
        for j in 0..ny {
            for i in 0..nx {
                let p = plane[j * nx + i].0;
                let l = line[i].0;
                prop_assert!(close(&[p[0], p[1], p[3]], &l, 1e-12), "{s} {o:?}");
                prop_assert!(p[2].abs() <= 1e-12 * (1.0 + l[1].abs()));
            }
        }
    }
}
