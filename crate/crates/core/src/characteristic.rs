//! Closed-form eigendecomposition of the Euler flux Jacobian.
//!
//! Field order is `(u - c, entropy[, shear], u + c)`. In 2-D the repeated
//! eigenvalue `u` is split into an entropy field (right eigenvector
//! `(1, u, v, |V|^2/2)`) followed by a shear field (`(0, 0, 1, v)`).

use crate::error::Result;
use crate::state::{Conserved, ConservedState2D, GasModel, Primitive};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EigenBasis<const N: usize> {
    /// Right eigenvectors as columns: `right[row][field]`.
    pub right: [[f64; N]; N],
    /// Left eigenvectors as rows: `left[field][col]`; the inverse of `right`.
    pub left: [[f64; N]; N],
    pub lambdas: [f64; N],
}

/// Eigenbasis of `A = dF/dU` at `avg`.
pub fn basis_x<const N: usize>(avg: &Conserved<N>, gas: GasModel) -> Result<EigenBasis<N>> {
    let w = avg.to_primitive(gas)?;
    Ok(basis_from_primitive(&w, gas))
}

/// Eigenbasis of `B = dG/dU` at a 2-D state.
pub fn basis_y(avg: &ConservedState2D, gas: GasModel) -> Result<EigenBasis<4>> {
    let b = basis_x(&avg.swap_xy(), gas)?;
    let mut right = b.right;
    right.swap(1, 2);
    let mut left = b.left;
    for row in left.iter_mut() {
        row.swap(1, 2);
    }
    Ok(EigenBasis { right, left, lambdas: b.lambdas })
}

pub(crate) fn basis_from_primitive<const N: usize>(w: &Primitive<N>, gas: GasModel) -> EigenBasis<N> {
    let g1 = gas.gamma - 1.0;
    let c = w.sound_speed(gas);
    let u = w.u();
    let q2 = w.speed_squared();
    let h = w.enthalpy(gas);
    let b1 = g1 / (c * c);
    let b2 = 0.5 * b1 * q2;
    let e = N - 1;

    let mut right = [[0.0; N]; N];
    let mut left = [[0.0; N]; N];

    // acoustic and entropy columns share the velocity rows
    right[0][0] = 1.0;
    right[0][1] = 1.0;
    right[0][e] = 1.0;
    right[1][0] = u - c;
    right[1][1] = u;
    right[1][e] = u + c;
    right[e][0] = h - u * c;
    right[e][1] = 0.5 * q2;
    right[e][e] = h + u * c;

    left[0][0] = 0.5 * (b2 + u / c);
    left[0][1] = -0.5 * (b1 * u + 1.0 / c);
    left[0][e] = 0.5 * b1;
    left[1][0] = 1.0 - b2;
    left[1][1] = b1 * u;
    left[1][e] = -b1;
    left[e][0] = 0.5 * (b2 - u / c);
    left[e][1] = -0.5 * (b1 * u - 1.0 / c);
    left[e][e] = 0.5 * b1;

    for t in 2..N - 1 {
        let vt = w.0[t];
        right[t][0] = vt;
        right[t][1] = vt;
        right[t][e] = vt;
        left[0][t] = -0.5 * b1 * vt;
        left[1][t] = b1 * vt;
        left[e][t] = -0.5 * b1 * vt;
        // shear field
        right[t][t] = 1.0;
        right[e][t] = vt;
        left[t][0] = -vt;
        left[t][t] = 1.0;
    }

    let mut lambdas = [u; N];
    lambdas[0] = u - c;
    lambdas[e] = u + c;
    EigenBasis { right, left, lambdas }
}

impl<const N: usize> EigenBasis<N> {
    /// Characteristic variables `R^{-1} v`.
    #[inline]
    pub fn to_characteristic(&self, v: &Conserved<N>) -> [f64; N] {
        let mut out = [0.0; N];
        for (i, row) in self.left.iter().enumerate() {
            let mut s = 0.0;
            for k in 0..N {
                s += row[k] * v.0[k];
            }
            out[i] = s;
        }
        out
    }

    /// Conserved variables `R w`.
    #[inline]
    pub fn from_characteristic(&self, w: &[f64; N]) -> Conserved<N> {
        let mut out = [0.0; N];
        for (i, row) in self.right.iter().enumerate() {
            let mut s = 0.0;
            for k in 0..N {
                s += row[k] * w[k];
            }
            out[i] = s;
        }
        Conserved(out)
    }
}

pub fn project<const N: usize>(basis: &EigenBasis<N>, values: &[Conserved<N>]) -> Vec<[f64; N]> {
    values.iter().map(|v| basis.to_characteristic(v)).collect()
}

pub fn unproject<const N: usize>(basis: &EigenBasis<N>, values: &[[f64; N]]) -> Vec<Conserved<N>> {
    values.iter().map(|w| basis.from_characteristic(w)).collect()
}
