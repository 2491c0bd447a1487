//! L1 errors against exact solutions or fine-mesh references, and
//! experimental convergence rates.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::grid::{Field, Mesh};
use crate::problems::{to_primitive, ProblemSpec};
use crate::state::{Conserved, GasModel};

/// What a computed value is compared with when the exact solution is known.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ExactSampling {
    /// Exact solution at cell centers.
    #[default]
    Midpoint,
    /// Exact cell averages (5-point Gauss-Legendre per direction).
    CellAverage,
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct ErrorReport {
    /// L1 norm per primitive variable `(rho, u[, v], p)`.
    pub l1_error: Vec<f64>,
    pub rate: Option<f64>,
    pub wall_clock: f64,
}

impl ErrorReport {
    pub fn rho(&self) -> f64 {
        self.l1_error[0]
    }
}

fn l1_primitive<const N: usize>(
    computed: impl Iterator<Item = Conserved<N>>,
    truth: impl Iterator<Item = Conserved<N>>,
    vol: f64,
    gas: GasModel,
) -> Vec<f64> {
    let mut acc = [0.0; N];
    for (a, b) in computed.zip(truth) {
        // a cell that cannot be converted contributes through its raw components
        let (wa, wb) = match (a.to_primitive(gas), b.to_primitive(gas)) {
            (Ok(wa), Ok(wb)) => (wa.0, wb.0),
            _ => (a.0, b.0),
        };
        for k in 0..N {
            acc[k] += (wa[k] - wb[k]).abs();
        }
    }
    acc.iter().map(|v| v * vol).collect()
}

/// L1 error against the problem's exact solution at time `t`.
pub fn l1_error_exact<const N: usize>(
    field: &Field<N>,
    spec: &ProblemSpec,
    t: f64,
    sampling: ExactSampling,
) -> Result<Vec<f64>> {
    if !spec.has_exact {
        return Err(Error::InvalidConfig(format!("problem {} has no exact solution", spec.id)));
    }
    let mesh = field.mesh;
    let gas = spec.gas();
    let vol = mesh.cell_volume(spec.dim);
    let truth: Vec<Conserved<N>> = match sampling {
        ExactSampling::Midpoint => (0..mesh.ny as isize)
            .flat_map(|j| (0..mesh.nx as isize).map(move |i| (i, j)))
            .map(|(i, j)| to_primitive::<N>(spec.exact(mesh.xc(i), mesh.yc(j), t).unwrap()).to_conserved(gas))
            .collect(),
        ExactSampling::CellAverage => spec.averaged_field::<N>(mesh.nx, mesh.ny, 0, t)?.interior_vec(),
    };
    Ok(l1_primitive(field.interior().copied(), truth.into_iter(), vol, gas))
}

/// Block averages of a fine field onto `coarse`; the mesh ratio must be a
/// positive integer in every direction and the domains must coincide.
pub fn restrict<const N: usize>(fine: &Field<N>, coarse: &Mesh) -> Result<Vec<Conserved<N>>> {
    let f = &fine.mesh;
    let tol = 1e-12 * (f.x.1 - f.x.0).abs().max(1.0);
    if (f.x.0 - coarse.x.0).abs() > tol || (f.x.1 - coarse.x.1).abs() > tol {
        return Err(Error::MeshMismatch(format!("x extents {:?} vs {:?}", f.x, coarse.x)));
    }
    if N == 4 && ((f.y.0 - coarse.y.0).abs() > tol || (f.y.1 - coarse.y.1).abs() > tol) {
        return Err(Error::MeshMismatch(format!("y extents {:?} vs {:?}", f.y, coarse.y)));
    }
    if !f.nx.is_multiple_of(coarse.nx) || !f.ny.is_multiple_of(coarse.ny) {
        return Err(Error::MeshMismatch(format!(
            "reference mesh {}x{} is not an integer refinement of {}x{}",
            f.nx, f.ny, coarse.nx, coarse.ny
        )));
    }
    let (rx, ry) = (f.nx / coarse.nx, f.ny / coarse.ny);
    let scale = 1.0 / (rx * ry) as f64;
    let mut out = Vec::with_capacity(coarse.cells());
    for j in 0..coarse.ny {
        for i in 0..coarse.nx {
            let mut acc = Conserved::ZERO;
            for b in 0..ry {
                for a in 0..rx {
                    acc += *fine.at((i * rx + a) as isize, (j * ry + b) as isize);
                }
            }
            out.push(acc * scale);
        }
    }
    Ok(out)
}

/// L1 error against a reference field on an integer-refined mesh.
pub fn l1_error_reference<const N: usize>(field: &Field<N>, reference: &Field<N>, gas: GasModel) -> Result<Vec<f64>> {
    let truth = restrict(reference, &field.mesh)?;
    Ok(l1_primitive(field.interior().copied(), truth.into_iter(), field.mesh.cell_volume(N - 2), gas))
}

/// `log_r(e_coarse / e_fine)` for mesh ratio `r`.
pub fn rate(e_coarse: f64, e_fine: f64, ratio: f64) -> f64 {
    (e_coarse / e_fine).ln() / ratio.ln()
}

/// Rates between consecutive entries of a mesh ladder.
pub fn ladder_rates(meshes: &[usize], errors: &[f64]) -> Vec<Option<f64>> {
    let mut out = vec![None; errors.len()];
    for k in 1..errors.len() {
        out[k] = Some(rate(errors[k - 1], errors[k], meshes[k] as f64 / meshes[k - 1] as f64));
    }
    out
}

/// Relative change of each domain integral, normalized by `max(|before|, 1e-300)`.
pub fn conservation_drift(before: &[f64], after: &[f64]) -> Vec<f64> {
    before.iter().zip(after).map(|(b, a)| (a - b).abs() / b.abs().max(1e-300)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid::Field1D;
    use crate::problems::build_problem;

    #[test]
    fn exact_field_has_zero_error() {
        let p = build_problem(1).unwrap();
        let f = p.initial_field::<3>(50, 1, 1).unwrap();
        let e = l1_error_exact(&f, &p, 0.0, ExactSampling::Midpoint).unwrap();
        assert!(e.iter().all(|v| *v == 0.0));
    }

    #[test]
    fn rate_definition() {
        assert_eq!(rate(2.0, 1.0, 2.0), 1.0);
        let r = ladder_rates(&[100, 200, 400], &[9.91e-3, 4.98e-3, 2.50e-3]);
        assert_eq!(r[0], None);
        assert!((r[1].unwrap() - 0.992).abs() < 1e-3);
        assert!((r[2].unwrap() - 0.994).abs() < 1e-3);
    }

    #[test]
    fn restriction_block_averages() {
        let mut fine = Field1D::new(Mesh::line(8, 0.0, 1.0), 1).unwrap();
        for i in 0..8 {
            *fine.at_mut(i, 0) = Conserved([1.0 + i as f64, 0.0, 5.0]);
        }
        let c = restrict(&fine, &Mesh::line(4, 0.0, 1.0)).unwrap();
        assert_eq!(c[0].0, [1.5, 0.0, 5.0]);
        assert_eq!(c[3].0, [7.5, 0.0, 5.0]);
        assert!(matches!(restrict(&fine, &Mesh::line(3, 0.0, 1.0)), Err(Error::MeshMismatch(_))));
        assert!(matches!(restrict(&fine, &Mesh::line(4, 0.0, 2.0)), Err(Error::MeshMismatch(_))));
    }
}
