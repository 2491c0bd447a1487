//! Uniform meshes, ghost-padded fields and boundary conditions.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::state::{Conserved, GasModel, Primitive};

/// Uniform Cartesian mesh. A 1-D mesh has `ny = 1` and ignores `y`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Mesh {
    pub nx: usize,
    pub ny: usize,
    pub x: (f64, f64),
    pub y: (f64, f64),
}

impl Mesh {
    pub fn line(nx: usize, x0: f64, x1: f64) -> Self {
        Self { nx, ny: 1, x: (x0, x1), y: (0.0, 1.0) }
    }

    pub fn rect(nx: usize, ny: usize, x: (f64, f64), y: (f64, f64)) -> Self {
        Self { nx, ny, x, y }
    }

    pub fn dx(&self) -> f64 {
        (self.x.1 - self.x.0) / self.nx as f64
    }

    pub fn dy(&self) -> f64 {
        (self.y.1 - self.y.0) / self.ny as f64
    }

    pub fn xc(&self, i: isize) -> f64 {
        self.x.0 + (i as f64 + 0.5) * self.dx()
    }

    pub fn yc(&self, j: isize) -> f64 {
        self.y.0 + (j as f64 + 0.5) * self.dy()
    }

    pub fn cells(&self) -> usize {
        self.nx * self.ny
    }

    /// Measure of one cell: `dx` in 1-D, `dx dy` in 2-D.
    pub fn cell_volume(&self, dim: usize) -> f64 {
        if dim == 1 {
            self.dx()
        } else {
            self.dx() * self.dy()
        }
    }

    pub(crate) fn validate(&self) -> Result<()> {
        let ok = self.nx > 0 && self.ny > 0 && self.x.1 > self.x.0 && self.y.1 > self.y.0;
        if ok {
            Ok(())
        } else {
            Err(Error::InvalidConfig(format!("degenerate mesh {self:?}")))
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Boundary {
    Periodic,
    /// Zero-order extrapolation.
    Free,
    /// Reflection with the wall-normal momentum negated.
    SolidWall,
    /// Fixed primitive state `(rho, u, v, p)`; `v` is ignored in 1-D.
    Dirichlet {
        rho: f64,
        u: f64,
        v: f64,
        p: f64,
    },
}

impl Boundary {
    fn state<const N: usize>(&self, gas: GasModel) -> Option<Conserved<N>> {
        let Boundary::Dirichlet { rho, u, v, p } = *self else {
            return None;
        };
        let mut w = [0.0; N];
        w[0] = rho;
        w[1] = u;
        if N == 4 {
            w[2] = v;
        }
        w[N - 1] = p;
        Some(Primitive(w).to_conserved(gas))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BoundarySpec {
    pub left: Boundary,
    pub right: Boundary,
    pub bottom: Boundary,
    pub top: Boundary,
}

impl BoundarySpec {
    pub fn uniform(b: Boundary) -> Self {
        Self { left: b, right: b, bottom: b, top: b }
    }

    pub fn validate(&self) -> Result<()> {
        let pair = |a: Boundary, b: Boundary| (a == Boundary::Periodic) == (b == Boundary::Periodic);
        if pair(self.left, self.right) && pair(self.bottom, self.top) {
            Ok(())
        } else {
            Err(Error::InvalidPairing)
        }
    }

    pub fn x_periodic(&self) -> bool {
        self.left == Boundary::Periodic
    }

    pub fn y_periodic(&self) -> bool {
        self.bottom == Boundary::Periodic
    }
}

/// Cell data with `gx` ghost layers in x and `gy` in y (0 in 1-D).
#[derive(Debug, Clone, PartialEq)]
pub struct Field<const N: usize> {
    pub mesh: Mesh,
    pub gx: usize,
    pub gy: usize,
    data: Vec<Conserved<N>>,
}

pub type Field1D = Field<3>;
pub type Field2D = Field<4>;

impl<const N: usize> Field<N> {
    pub const DIM: usize = N - 2;

    pub fn new(mesh: Mesh, ghost: usize) -> Result<Self> {
        assert!(N == 3 || N == 4, "fields hold 1-D or 2-D Euler states");
        mesh.validate()?;
        if N == 3 && mesh.ny != 1 {
            return Err(Error::InvalidConfig("1-D field needs ny = 1".into()));
        }
        let gy = if N == 4 { ghost } else { 0 };
        let len = (mesh.nx + 2 * ghost) * (mesh.ny + 2 * gy);
        Ok(Self { mesh, gx: ghost, gy, data: vec![Conserved::ZERO; len] })
    }

    /// Field sampled at cell centers from a primitive-state function of `(x, y)`.
    pub fn from_fn(mesh: Mesh, ghost: usize, gas: GasModel, f: impl Fn(f64, f64) -> Primitive<N>) -> Result<Self> {
        let mut field = Self::new(mesh, ghost)?;
        for j in 0..mesh.ny as isize {
            for i in 0..mesh.nx as isize {
                let w = f(mesh.xc(i), mesh.yc(j));
                if !w.is_valid() {
                    return Err(Error::InvalidConfig(format!("initial state {w:?} at cell ({i}, {j})")));
                }
                *field.at_mut(i, j) = w.to_conserved(gas);
            }
        }
        Ok(field)
    }

    pub fn ghost(&self) -> usize {
        self.gx
    }

    #[inline]
    pub fn stride(&self) -> usize {
        self.mesh.nx + 2 * self.gx
    }

    #[inline]
    fn index(&self, i: isize, j: isize) -> usize {
        debug_assert!(i >= -(self.gx as isize) && i < (self.mesh.nx + self.gx) as isize, "x index {i} out of range");
        debug_assert!(j >= -(self.gy as isize) && j < (self.mesh.ny + self.gy) as isize, "y index {j} out of range");
        (i + self.gx as isize) as usize + (j + self.gy as isize) as usize * self.stride()
    }

    #[inline]
    pub fn at(&self, i: isize, j: isize) -> &Conserved<N> {
        &self.data[self.index(i, j)]
    }

    #[inline]
    pub fn at_mut(&mut self, i: isize, j: isize) -> &mut Conserved<N> {
        let k = self.index(i, j);
        &mut self.data[k]
    }

    /// Row `j` including its x ghosts.
    #[inline]
    pub fn row(&self, j: isize) -> &[Conserved<N>] {
        let start = self.index(-(self.gx as isize), j);
        &self.data[start..start + self.stride()]
    }

    pub fn raw(&self) -> &[Conserved<N>] {
        &self.data
    }

    pub fn raw_mut(&mut self) -> &mut [Conserved<N>] {
        &mut self.data
    }

    /// Interior cells in row-major order.
    pub fn interior(&self) -> impl Iterator<Item = &Conserved<N>> + '_ {
        (0..self.mesh.ny as isize).flat_map(move |j| {
            let r = self.row(j);
            r[self.gx..self.gx + self.mesh.nx].iter()
        })
    }

    pub fn interior_vec(&self) -> Vec<Conserved<N>> {
        self.interior().copied().collect()
    }

    /// Overwrites the interior from a row-major slice of `nx * ny` states.
    pub fn set_interior(&mut self, values: &[Conserved<N>]) {
        assert_eq!(values.len(), self.mesh.cells());
        let nx = self.mesh.nx;
        for j in 0..self.mesh.ny {
            let start = self.index(0, j as isize);
            self.data[start..start + nx].copy_from_slice(&values[j * nx..(j + 1) * nx]);
        }
    }

    /// Sum of each conserved variable over the interior times the cell volume.
    pub fn totals(&self) -> [f64; N] {
        let vol = self.mesh.cell_volume(Self::DIM);
        let mut s = [0.0; N];
        for u in self.interior() {
            for k in 0..N {
                s[k] += u.0[k];
            }
        }
        s.map(|v| v * vol)
    }

    pub fn fill_ghosts(&mut self, bc: &BoundarySpec, gas: GasModel) -> Result<()> {
        bc.validate()?;
        let (nx, ny) = (self.mesh.nx as isize, self.mesh.ny as isize);
        let gx = self.gx as isize;
        if self.gx > self.mesh.nx || self.gy > self.mesh.ny {
            return Err(Error::InvalidConfig(format!(
                "ghost width {} exceeds the {}x{} interior",
                self.gx, self.mesh.nx, self.mesh.ny
            )));
        }

        let left = bc.left.state::<N>(gas);
        let right = bc.right.state::<N>(gas);
        for j in 0..ny {
            for k in 1..=gx {
                *self.at_mut(-k, j) = match bc.left {
                    Boundary::Periodic => *self.at(nx - k, j),
                    Boundary::Free => *self.at(0, j),
                    Boundary::SolidWall => reflect(*self.at(k - 1, j), 1),
                    Boundary::Dirichlet { .. } => left.unwrap(),
                };
                *self.at_mut(nx - 1 + k, j) = match bc.right {
                    Boundary::Periodic => *self.at(k - 1, j),
                    Boundary::Free => *self.at(nx - 1, j),
                    Boundary::SolidWall => reflect(*self.at(nx - k, j), 1),
                    Boundary::Dirichlet { .. } => right.unwrap(),
                };
            }
        }

        if N == 4 {
            let gy = self.gy as isize;
            let bottom = bc.bottom.state::<N>(gas);
            let top = bc.top.state::<N>(gas);
            for i in -gx..nx + gx {
                for k in 1..=gy {
                    *self.at_mut(i, -k) = match bc.bottom {
                        Boundary::Periodic => *self.at(i, ny - k),
                        Boundary::Free => *self.at(i, 0),
                        Boundary::SolidWall => reflect(*self.at(i, k - 1), 2),
                        Boundary::Dirichlet { .. } => bottom.unwrap(),
                    };
                    *self.at_mut(i, ny - 1 + k) = match bc.top {
                        Boundary::Periodic => *self.at(i, k - 1),
                        Boundary::Free => *self.at(i, ny - 1),
                        Boundary::SolidWall => reflect(*self.at(i, ny - k), 2),
                        Boundary::Dirichlet { .. } => top.unwrap(),
                    };
                }
            }
        }
        Ok(())
    }
}

#[inline]
fn reflect<const N: usize>(mut u: Conserved<N>, normal: usize) -> Conserved<N> {
    u.0[normal] = -u.0[normal];
    u
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::state::{PrimitiveState1D, PrimitiveState2D};

    fn ramp(n: usize, g: usize) -> Field1D {
        let mut f = Field1D::new(Mesh::line(n, 0.0, 1.0), g).unwrap();
        for i in 0..n as isize {
            *f.at_mut(i, 0) = Conserved([1.0 + i as f64, 2.0 * i as f64, 10.0 + i as f64]);
        }
        f
    }

    #[test]
    fn periodic_wrap() {
        let mut f = ramp(4, 2);
        f.fill_ghosts(&BoundarySpec::uniform(Boundary::Periodic), GasModel::air()).unwrap();
        assert_eq!(f.at(-1, 0), f.at(3, 0));
        assert_eq!(f.at(-2, 0), f.at(2, 0));
        assert_eq!(f.at(4, 0), f.at(0, 0));
        assert_eq!(f.at(5, 0), f.at(1, 0));
    }

    #[test]
    fn solid_wall_mirrors_and_negates_normal_momentum() {
        let mut f = Field1D::new(Mesh::line(4, 0.0, 1.0), 3).unwrap();
        for i in 0..4 {
            *f.at_mut(i, 0) = Conserved([1.0 + i as f64, 2.0, 3.0]);
        }
        let bc = BoundarySpec { left: Boundary::SolidWall, ..BoundarySpec::uniform(Boundary::Free) };
        f.fill_ghosts(&bc, GasModel::air()).unwrap();
        assert_eq!(f.at(-1, 0).0, [1.0, -2.0, 3.0]);
        assert_eq!(f.at(-3, 0).0, [3.0, -2.0, 3.0]);
        assert_eq!(f.at(4, 0), f.at(3, 0));
        assert_eq!(f.at(6, 0), f.at(3, 0));
    }

    #[test]
    fn dirichlet_top_and_wall_sides_in_2d() {
        let gas = GasModel::new(5.0 / 3.0).unwrap();
        let mesh = Mesh::rect(3, 4, (0.0, 0.25), (0.0, 1.0));
        let mut f = Field2D::from_fn(mesh, 2, gas, |x, y| PrimitiveState2D::new(1.0 + x, 0.1, 0.2 + y, 1.0)).unwrap();
        let bc = BoundarySpec {
            left: Boundary::SolidWall,
            right: Boundary::SolidWall,
            bottom: Boundary::Dirichlet { rho: 2.0, u: 0.0, v: 0.0, p: 1.0 },
            top: Boundary::Dirichlet { rho: 1.0, u: 0.0, v: 0.0, p: 2.5 },
        };
        f.fill_ghosts(&bc, gas).unwrap();
        let top = PrimitiveState2D::new(1.0, 0.0, 0.0, 2.5).to_conserved(gas);
        for i in -2..5 {
            assert_eq!(*f.at(i, 4), top);
            assert_eq!(*f.at(i, 5), top);
        }
        let inner = *f.at(0, 1);
        assert_eq!(f.at(-1, 1).0, [inner.0[0], -inner.0[1], inner.0[2], inner.0[3]]);
    }

    #[test]
    fn ghost_filling_is_idempotent() {
        let mut f = ramp(6, 2);
        let bc = BoundarySpec { left: Boundary::SolidWall, ..BoundarySpec::uniform(Boundary::Free) };
        f.fill_ghosts(&bc, GasModel::air()).unwrap();
        let once = f.clone();
        f.fill_ghosts(&bc, GasModel::air()).unwrap();
        assert_eq!(f, once);
    }

    #[test]
    fn unpaired_periodic_is_rejected() {
        let mut f = ramp(4, 1);
        let bc = BoundarySpec { left: Boundary::Periodic, ..BoundarySpec::uniform(Boundary::Free) };
        assert_eq!(f.fill_ghosts(&bc, GasModel::air()), Err(Error::InvalidPairing));
    }

    #[test]
    fn totals_and_sampling() {
        let gas = GasModel::air();
        let f =
            Field1D::from_fn(Mesh::line(10, 0.0, 2.0), 1, gas, |_, _| PrimitiveState1D::new(1.0, 0.0, 0.4)).unwrap();
        let t = f.totals();
        assert!((t[0] - 2.0).abs() < 1e-14 && (t[2] - 2.0).abs() < 1e-14);
    }
}
