//! Registry of the fifteen benchmark problems.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::flux::SchemeId;
use crate::grid::{Boundary, BoundarySpec, Field, Mesh};
use crate::semidiscrete::{Order, SourceTerm};
use crate::state::{GasModel, Primitive};

/// Scheme, order and mesh of a fine-mesh reference run.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ReferenceSpec {
    pub scheme: SchemeId,
    pub order: Order,
    pub nx: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ProblemSpec {
    pub id: u32,
    pub name: &'static str,
    pub dim: usize,
    pub x: (f64, f64),
    pub y: (f64, f64),
    pub t_final: f64,
    pub gamma: f64,
    pub bc: BoundarySpec,
    pub source: SourceTerm,
    /// Mesh used unless the caller overrides it.
    pub default_mesh: (usize, usize),
    /// Full-resolution mesh, when it differs from the default.
    pub full_mesh: (usize, usize),
    pub reference: Option<ReferenceSpec>,
    pub snapshots: Vec<f64>,
    pub has_exact: bool,
}

/// Primitive state `(rho, u, v, p)`; `v` is 0 for 1-D problems.
pub type Prim4 = [f64; 4];

fn free() -> BoundarySpec {
    BoundarySpec::uniform(Boundary::Free)
}

fn periodic() -> BoundarySpec {
    BoundarySpec::uniform(Boundary::Periodic)
}

pub fn build_problem(id: u32) -> Result<ProblemSpec> {
    let one_d = |name, x, t_final, bc, n: usize, reference| ProblemSpec {
        id,
        name,
        dim: 1,
        x,
        y: (0.0, 1.0),
        t_final,
        gamma: 1.4,
        bc,
        source: SourceTerm::None,
        default_mesh: (n, 1),
        full_mesh: (n, 1),
        reference,
        snapshots: vec![t_final],
        has_exact: false,
    };
    let hll_ref = |nx| Some(ReferenceSpec { scheme: SchemeId::Hll, order: Order::Fifth, nx });
    let two_d = |name, x, y, t_final, bc, n: (usize, usize)| ProblemSpec {
        id,
        name,
        dim: 2,
        x,
        y,
        t_final,
        gamma: 1.4,
        bc,
        source: SourceTerm::None,
        default_mesh: n,
        full_mesh: n,
        reference: None,
        snapshots: vec![t_final],
        has_exact: false,
    };

    let spec = match id {
        1 => ProblemSpec { has_exact: true, ..one_d("1-D accuracy test", (-1.0, 1.0), 0.1, periodic(), 100, None) },
        2 => ProblemSpec { has_exact: true, ..one_d("moving contact wave", (0.0, 1.0), 0.2, free(), 200, None) },
        // only the first-order scheme keeps the pressure positive on this problem
        3 => one_d(
            "strong shocks interaction",
            (-1.0, 1.0),
            0.03,
            free(),
            40,
            Some(ReferenceSpec { scheme: SchemeId::Hll, order: Order::First, nx: 800 }),
        ),
        4 => one_d(
            "shock-bubble interaction",
            (-1.0, 1.0),
            3.0,
            BoundarySpec { left: Boundary::SolidWall, ..free() },
            200,
            hll_ref(4000),
        ),
        5 => one_d("shock-density wave interaction", (-5.0, 5.0), 5.0, free(), 400, hll_ref(8000)),
        6 => one_d("shock-entropy wave interaction", (-10.0, 5.0), 5.0, free(), 1200, hll_ref(12000)),
        7 => ProblemSpec {
            has_exact: true,
            ..two_d("2-D accuracy test", (-1.0, 1.0), (-1.0, 1.0), 0.1, periodic(), (100, 100))
        },
        8 => ProblemSpec {
            has_exact: true,
            ..two_d("isentropic vortex", (-5.0, 5.0), (-5.0, 5.0), 10.0, periodic(), (100, 100))
        },
        9 => two_d("moving contact waves", (-0.2, 0.2), (0.0, 0.8), 2.0, free(), (160, 320)),
        10 => ProblemSpec {
            // dx = 3/800 on [-1, 1] is not an integer cell count
            full_mesh: (533, 533),
            ..two_d("explosion", (-1.0, 1.0), (-1.0, 1.0), 3.2, free(), (200, 200))
        },
        11 => two_d("implosion", (0.0, 0.3), (0.0, 0.3), 2.5, BoundarySpec::uniform(Boundary::SolidWall), (400, 400)),
        12 => ProblemSpec {
            full_mesh: (1000, 1000),
            ..two_d("2-D Riemann problem, configuration 3", (0.0, 1.2), (0.0, 1.2), 1.0, free(), (600, 600))
        },
        13 => two_d("2-D Riemann problem, configuration 6", (0.0, 1.0), (0.0, 1.0), 1.0, free(), (600, 600)),
        14 => ProblemSpec {
            full_mesh: (1024, 1024),
            snapshots: vec![1.0, 2.5, 4.0],
            ..two_d("Kelvin-Helmholtz instability", (-0.5, 0.5), (-0.5, 0.5), 4.0, periodic(), (256, 256))
        },
        15 => ProblemSpec {
            gamma: 5.0 / 3.0,
            source: SourceTerm::GravityRt,
            snapshots: vec![1.95, 2.95],
            ..two_d(
                "Rayleigh-Taylor instability",
                (0.0, 0.25),
                (0.0, 1.0),
                2.95,
                BoundarySpec {
                    left: Boundary::SolidWall,
                    right: Boundary::SolidWall,
                    bottom: Boundary::Dirichlet { rho: 2.0, u: 0.0, v: 0.0, p: 1.0 },
                    top: Boundary::Dirichlet { rho: 1.0, u: 0.0, v: 0.0, p: 2.5 },
                },
                (256, 1024),
            )
        },
        _ => return Err(Error::UnknownProblem(id)),
    };
    Ok(spec)
}

impl ProblemSpec {
    pub fn gas(&self) -> GasModel {
        GasModel { gamma: self.gamma }
    }

    pub fn mesh(&self, nx: usize, ny: usize) -> Mesh {
        if self.dim == 1 {
            Mesh::line(nx, self.x.0, self.x.1)
        } else {
            Mesh::rect(nx, ny, self.x, self.y)
        }
    }

    /// Initial primitive state at `(x, y)`.
    pub fn init(&self, x: f64, y: f64) -> Prim4 {
        let g = self.gamma;
        match self.id {
            1 => [1.0 + 0.2 * (2.0 * PI * x).sin(), 1.0, 0.0, 1.0],
            2 => [if x < 0.5 { 1.4 } else { 1.0 }, 0.1, 0.0, 1.0],
            3 => {
                if x < 0.8 {
                    [1.0, -19.59745, 0.0, 1000.0]
                } else {
                    [1.0, -19.59745, 0.0, 0.01]
                }
            }
            4 => {
                if x.abs() < 0.25 {
                    [13.1538, 0.0, 0.0, 1.0]
                } else if x > 0.75 {
                    [1.3333, -0.3535, 0.0, 1.5]
                } else {
                    [1.0, 0.0, 0.0, 1.0]
                }
            }
            5 => {
                if x < -4.0 {
                    [27.0 / 7.0, 4.0 * 35f64.sqrt() / 9.0, 0.0, 31.0 / 3.0]
                } else {
                    [1.0 + 0.2 * (5.0 * x).sin(), 0.0, 0.0, 1.0]
                }
            }
            6 => {
                if x < -4.5 {
                    [1.51695, 0.523346, 0.0, 1.805]
                } else {
                    [1.0 + 0.1 * (20.0 * x).sin(), 0.0, 0.0, 1.0]
                }
            }
            7 => [1.0 + 0.2 * (PI * (x + y)).sin(), 1.0, -0.7, 1.0],
            8 => vortex(x, y, g),
            9 => [if in_region_d(x, y) { 1.4 } else { 1.0 }, 0.0, 0.2, 1.0],
            10 => {
                if x * x + y * y < 0.16 {
                    [1.0, 0.0, 0.0, 1.0]
                } else {
                    [0.125, 0.0, 0.0, 0.1]
                }
            }
            11 => {
                if x.abs() + y.abs() < 0.15 {
                    [0.125, 0.0, 0.0, 0.14]
                } else {
                    [1.0, 0.0, 0.0, 1.0]
                }
            }
            12 => match (x > 1.0, y > 1.0) {
                (true, true) => [1.5, 0.0, 0.0, 1.5],
                (false, true) => [0.5323, 1.206, 0.0, 0.3],
                (false, false) => [0.138, 1.206, 1.206, 0.029],
                (true, false) => [0.5323, 0.0, 1.206, 0.3],
            },
            13 => match (x > 0.5, y > 0.5) {
                (true, true) => [1.0, 0.75, -0.5, 1.0],
                (false, true) => [2.0, 0.75, 0.5, 1.0],
                (false, false) => [1.0, -0.75, 0.5, 1.0],
                (true, false) => [3.0, -0.75, -0.5, 1.0],
            },
            14 => {
                let l = 0.00625;
                let (rho, u) = if y < -0.25 {
                    (1.0, -0.5 + 0.5 * ((y + 0.25) / l).exp())
                } else if y < 0.0 {
                    (2.0, 0.5 - 0.5 * ((-y - 0.25) / l).exp())
                } else if y < 0.25 {
                    (2.0, 0.5 - 0.5 * ((y - 0.25) / l).exp())
                } else {
                    (1.0, -0.5 + 0.5 * ((0.25 - y) / l).exp())
                };
                [rho, u, 0.01 * (4.0 * PI * x).sin(), 1.5]
            }
            15 => {
                let (rho, p) = if y < 0.5 { (2.0, 2.0 * y + 1.0) } else { (1.0, y + 1.5) };
                let c = (g * p / rho).sqrt();
                [rho, 0.0, -0.025 * c * (8.0 * PI * x).cos(), p]
            }
            _ => unreachable!("problem ids are validated by build_problem"),
        }
    }

    /// Exact primitive state at `(x, y, t)` where one is known.
    pub fn exact(&self, x: f64, y: f64, t: f64) -> Option<Prim4> {
        match self.id {
            1 => Some([1.0 + 0.2 * (2.0 * PI * (x - t)).sin(), 1.0, 0.0, 1.0]),
            2 => Some([if x < 0.5 + 0.1 * t { 1.4 } else { 1.0 }, 0.1, 0.0, 1.0]),
            7 => Some([1.0 + 0.2 * (PI * (x + y - 0.3 * t)).sin(), 1.0, -0.7, 1.0]),
            8 => {
                let wrap = |s: f64| (s + 5.0).rem_euclid(10.0) - 5.0;
                Some(vortex(wrap(x - t), wrap(y - t), self.gamma))
            }
            _ => None,
        }
    }

    /// Field sampled at cell centers.
    pub fn initial_field<const N: usize>(&self, nx: usize, ny: usize, ghost: usize) -> Result<Field<N>> {
        self.check_dim::<N>()?;
        Field::from_fn(self.mesh(nx, ny), ghost, self.gas(), |x, y| to_primitive::<N>(self.init(x, y)))
    }

    /// Field of exact cell averages, for smooth problems with a known solution
    /// (Gauss-Legendre quadrature of the conserved variables).
    pub fn averaged_field<const N: usize>(&self, nx: usize, ny: usize, ghost: usize, t: f64) -> Result<Field<N>> {
        self.check_dim::<N>()?;
        if !self.has_exact {
            return Err(Error::InvalidConfig(format!("problem {} has no exact solution", self.id)));
        }
        let mesh = self.mesh(nx, ny);
        let gas = self.gas();
        let mut field = Field::<N>::new(mesh, ghost)?;
        let (dx, dy) = (mesh.dx(), mesh.dy());
        for j in 0..mesh.ny as isize {
            for i in 0..mesh.nx as isize {
                let (xc, yc) = (mesh.xc(i), mesh.yc(j));
                let mut acc = [0.0; N];
                let point = |x: f64, y: f64| to_primitive::<N>(self.exact(x, y, t).unwrap()).to_conserved(gas);
                for (a, wa) in GAUSS5 {
                    if N == 3 {
                        let u = point(xc + 0.5 * dx * a, yc);
                        for k in 0..N {
                            acc[k] += 0.5 * wa * u.0[k];
                        }
                    } else {
                        for (b, wb) in GAUSS5 {
                            let u = point(xc + 0.5 * dx * a, yc + 0.5 * dy * b);
                            for k in 0..N {
                                acc[k] += 0.25 * wa * wb * u.0[k];
                            }
                        }
                    }
                }
                field.at_mut(i, j).0 = acc;
            }
        }
        Ok(field)
    }

    fn check_dim<const N: usize>(&self) -> Result<()> {
        if N - 2 != self.dim {
            return Err(Error::InvalidConfig(format!("problem {} is {}-D", self.id, self.dim)));
        }
        Ok(())
    }
}

const GAUSS5: [(f64, f64); 5] = [
    (0.0, 0.568_888_888_888_888_9),
    (-0.538_469_310_105_683_1, 0.478_628_670_499_366_5),
    (0.538_469_310_105_683_1, 0.478_628_670_499_366_5),
    (-0.906_179_845_938_664, 0.236_926_885_056_189_1),
    (0.906_179_845_938_664, 0.236_926_885_056_189_1),
];

pub(crate) fn to_primitive<const N: usize>(w: Prim4) -> Primitive<N> {
    let mut out = [0.0; N];
    out[0] = w[0];
    out[1] = w[1];
    if N == 4 {
        out[2] = w[2];
    }
    out[N - 1] = w[3];
    Primitive(out)
}

fn vortex(x: f64, y: f64, g: f64) -> Prim4 {
    let eps = 5.0;
    let r2 = x * x + y * y;
    let t = 1.0 - (g - 1.0) * eps * eps / (8.0 * g * PI * PI) * (1.0 - r2).exp();
    let rho = t.powf(1.0 / (g - 1.0));
    let k = eps / (2.0 * PI) * (0.5 * (1.0 - r2)).exp();
    [rho, 1.0 - k * y, 1.0 + k * x, rho.powf(g)]
}

fn in_region_d(x: f64, y: f64) -> bool {
    let disc = |cx: f64| (x - cx).powi(2) + (y - 0.02).powi(2) < 0.08 * 0.08;
    (x.abs() < 0.1 && 0.0 < y && y < 0.02) || (x.abs() < 0.02 && 0.02 < y && y < 0.1) || disc(-0.02) || disc(0.02)
}
