//! Conserved and primitive states of the ideal-gas Euler equations.
//!
//! Both dimensions share one const-generic layout: `N = 3` holds
//! `(rho, rho*u, E)` and `N = 4` holds `(rho, rho*u, rho*v, E)`. Index 1 is
//! always the x-momentum, the last index is always the total energy, and the
//! indices in between are transverse momenta. Direction-dependent physics is
//! written for the x-direction only; the y-direction is obtained by swapping
//! the two momentum components (`swap_xy`), which maps `G` onto `F` exactly.

use std::ops::{Add, AddAssign, Index, IndexMut, Mul, Neg, Sub, SubAssign};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GasModel {
    pub gamma: f64,
}

impl GasModel {
    pub fn new(gamma: f64) -> Result<Self> {
        if gamma > 1.0 && gamma.is_finite() {
            Ok(Self { gamma })
        } else {
            Err(Error::InvalidGamma(gamma))
        }
    }

    /// Diatomic gas used by every benchmark except Rayleigh-Taylor.
    pub fn air() -> Self {
        Self { gamma: 1.4 }
    }
}

impl Default for GasModel {
    fn default() -> Self {
        Self::air()
    }
}

/// Vector of conserved variables; also used for flux vectors and rates.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Conserved<const N: usize>(pub [f64; N]);

pub type ConservedState1D = Conserved<3>;
pub type ConservedState2D = Conserved<4>;

/// `(rho, u[, v], p)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Primitive<const N: usize>(pub [f64; N]);

pub type PrimitiveState1D = Primitive<3>;
pub type PrimitiveState2D = Primitive<4>;

impl<const N: usize> Default for Conserved<N> {
    fn default() -> Self {
        Self([0.0; N])
    }
}

impl<const N: usize> Conserved<N> {
    pub const ZERO: Self = Self([0.0; N]);
    pub const ENERGY: usize = N - 1;

    #[inline]
    pub fn rho(&self) -> f64 {
        self.0[0]
    }

    #[inline]
    pub fn mom_x(&self) -> f64 {
        self.0[1]
    }

    #[inline]
    pub fn energy(&self) -> f64 {
        self.0[N - 1]
    }

    /// Kinetic energy density `|rho V|^2 / (2 rho)`.
    #[inline]
    pub fn kinetic(&self) -> f64 {
        let mut m2 = 0.0;
        for i in 1..N - 1 {
            m2 += self.0[i] * self.0[i];
        }
        0.5 * m2 / self.0[0]
    }

    /// Pressure from the ideal-gas law without any validity check.
    #[inline]
    pub fn pressure_unchecked(&self, gas: GasModel) -> f64 {
        (gas.gamma - 1.0) * (self.energy() - self.kinetic())
    }

    pub fn to_primitive(&self, gas: GasModel) -> Result<Primitive<N>> {
        let rho = self.0[0];
        // written negated so that NaN is rejected too
        if !(rho > 0.0) {
            return Err(Error::NonPositiveDensity { rho });
        }
        let mut w = [0.0; N];
        w[0] = rho;
        for i in 1..N - 1 {
            w[i] = self.0[i] / rho;
        }
        let p = self.pressure_unchecked(gas);
        if !(p > 0.0) || !p.is_finite() {
            return Err(Error::NonPositivePressure { rho, p });
        }
        w[N - 1] = p;
        Ok(Primitive(w))
    }

    /// Exchanges x- and y-momentum. Identity for 1-D states.
    #[inline]
    pub fn swap_xy(self) -> Self {
        let mut s = self;
        if N == 4 {
            s.0.swap(1, 2);
        }
        s
    }

    pub fn max_abs(&self) -> f64 {
        self.0.iter().fold(0.0, |m, v| m.max(v.abs()))
    }
}

impl<const N: usize> Primitive<N> {
    #[inline]
    pub fn rho(&self) -> f64 {
        self.0[0]
    }

    /// Velocity normal to an x-interface.
    #[inline]
    pub fn u(&self) -> f64 {
        self.0[1]
    }

    /// Transverse velocity of a 2-D state, zero in 1-D.
    #[inline]
    pub fn v(&self) -> f64 {
        if N == 4 {
            self.0[2]
        } else {
            0.0
        }
    }

    #[inline]
    pub fn p(&self) -> f64 {
        self.0[N - 1]
    }

    #[inline]
    pub fn speed_squared(&self) -> f64 {
        let mut q = 0.0;
        for i in 1..N - 1 {
            q += self.0[i] * self.0[i];
        }
        q
    }

    #[inline]
    pub fn sound_speed(&self, gas: GasModel) -> f64 {
        (gas.gamma * self.p() / self.rho()).sqrt()
    }

    /// Specific total enthalpy `(E + p) / rho`.
    #[inline]
    pub fn enthalpy(&self, gas: GasModel) -> f64 {
        gas.gamma / (gas.gamma - 1.0) * self.p() / self.rho() + 0.5 * self.speed_squared()
    }

    pub fn to_conserved(&self, gas: GasModel) -> Conserved<N> {
        let rho = self.rho();
        let mut u = [0.0; N];
        u[0] = rho;
        for i in 1..N - 1 {
            u[i] = rho * self.0[i];
        }
        u[N - 1] = self.p() / (gas.gamma - 1.0) + 0.5 * rho * self.speed_squared();
        Conserved(u)
    }

    #[inline]
    pub fn swap_xy(self) -> Self {
        let mut s = self;
        if N == 4 {
            s.0.swap(1, 2);
        }
        s
    }

    pub fn is_valid(&self) -> bool {
        self.rho() > 0.0 && self.p() > 0.0 && self.0.iter().all(|v| v.is_finite())
    }
}

impl PrimitiveState1D {
    pub fn new(rho: f64, u: f64, p: f64) -> Self {
        Self([rho, u, p])
    }
}

impl PrimitiveState2D {
    pub fn new(rho: f64, u: f64, v: f64, p: f64) -> Self {
        Self([rho, u, v, p])
    }
}

/// x-direction physical flux from an already validated primitive view.
#[inline]
pub(crate) fn flux_x_from<const N: usize>(u: &Conserved<N>, w: &Primitive<N>) -> Conserved<N> {
    let vel = w.u();
    let p = w.p();
    let mut f = [0.0; N];
    f[0] = u.0[1];
    for i in 1..N - 1 {
        f[i] = u.0[i] * vel;
    }
    f[1] += p;
    f[N - 1] = vel * (u.0[N - 1] + p);
    Conserved(f)
}

/// x-direction physical flux `F(U)`.
pub fn physical_flux_x<const N: usize>(u: &Conserved<N>, gas: GasModel) -> Result<Conserved<N>> {
    let w = u.to_primitive(gas)?;
    Ok(flux_x_from(u, &w))
}

/// y-direction physical flux `G(U)` of a 2-D state.
pub fn physical_flux_y(u: &ConservedState2D, gas: GasModel) -> Result<ConservedState2D> {
    Ok(physical_flux_x(&u.swap_xy(), gas)?.swap_xy())
}

/// Eigenvalues of `dF/dU` in ascending order: `(u-c, u[, u], u+c)`.
pub fn eigenvalues_x<const N: usize>(u: &Conserved<N>, gas: GasModel) -> Result<[f64; N]> {
    let w = u.to_primitive(gas)?;
    Ok(eigenvalues_from(&w, gas))
}

#[inline]
pub(crate) fn eigenvalues_from<const N: usize>(w: &Primitive<N>, gas: GasModel) -> [f64; N] {
    let c = w.sound_speed(gas);
    let vel = w.u();
    let mut lam = [vel; N];
    lam[0] = vel - c;
    lam[N - 1] = vel + c;
    lam
}

macro_rules! impl_vector_ops {
    ($ty:ident) => {
        impl<const N: usize> Add for $ty<N> {
            type Output = Self;
            #[inline]
            fn add(mut self, rhs: Self) -> Self {
                for i in 0..N {
                    self.0[i] += rhs.0[i];
                }
                self
            }
        }

        impl<const N: usize> Sub for $ty<N> {
            type Output = Self;
            #[inline]
            fn sub(mut self, rhs: Self) -> Self {
                for i in 0..N {
                    self.0[i] -= rhs.0[i];
                }
                self
            }
        }

        impl<const N: usize> Mul<f64> for $ty<N> {
            type Output = Self;
            #[inline]
            fn mul(mut self, a: f64) -> Self {
                for v in self.0.iter_mut() {
                    *v *= a;
                }
                self
            }
        }

        impl<const N: usize> Mul<$ty<N>> for f64 {
            type Output = $ty<N>;
            #[inline]
            fn mul(self, rhs: $ty<N>) -> $ty<N> {
                rhs * self
            }
        }

        impl<const N: usize> Neg for $ty<N> {
            type Output = Self;
            #[inline]
            fn neg(self) -> Self {
                self * -1.0
            }
        }

        impl<const N: usize> Index<usize> for $ty<N> {
            type Output = f64;
            #[inline]
            fn index(&self, i: usize) -> &f64 {
                &self.0[i]
            }
        }

        impl<const N: usize> IndexMut<usize> for $ty<N> {
            #[inline]
            fn index_mut(&mut self, i: usize) -> &mut f64 {
                &mut self.0[i]
            }
        }
    };
}

impl_vector_ops!(Conserved);
impl_vector_ops!(Primitive);

impl<const N: usize> AddAssign for Conserved<N> {
    #[inline]
    fn add_assign(&mut self, rhs: Self) {
        for i in 0..N {
            self.0[i] += rhs.0[i];
        }
    }
}

impl<const N: usize> SubAssign for Conserved<N> {
    #[inline]
    fn sub_assign(&mut self, rhs: Self) {
        for i in 0..N {
            self.0[i] -= rhs.0[i];
        }
    }
}
