//! One-sided local speeds of propagation at an interface.

use crate::state::{GasModel, Primitive};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpeedPair {
    pub a_minus: f64,
    pub a_plus: f64,
}

/// Acoustic bounds `min(u -/+ c)` and `max(u +/- c)` of the two interface states.
pub fn speeds_plain<const N: usize>(left: &Primitive<N>, right: &Primitive<N>, gas: GasModel) -> SpeedPair {
    let cl = left.sound_speed(gas);
    let cr = right.sound_speed(gas);
    from_sound_speeds(left.u(), cl, right.u(), cr)
}

/// As [`speeds_plain`] but with zero included in both bounds.
pub fn speeds_clamped<const N: usize>(left: &Primitive<N>, right: &Primitive<N>, gas: GasModel) -> SpeedPair {
    clamp(speeds_plain(left, right, gas))
}

#[inline]
pub(crate) fn from_sound_speeds(ul: f64, cl: f64, ur: f64, cr: f64) -> SpeedPair {
    SpeedPair { a_minus: (ur - cr).min(ul - cl), a_plus: (ur + cr).max(ul + cl) }
}

#[inline]
pub(crate) fn clamp(s: SpeedPair) -> SpeedPair {
    SpeedPair { a_minus: s.a_minus.min(0.0), a_plus: s.a_plus.max(0.0) }
}
