//! Scalar contract shared by the exact and floating instantiations of the map.
//!
//! The same map formulas run over `Rational` (exact contexts: poles are
//! exact equalities) and over `f64` (numeric contexts: a denominator inside
//! the guard band counts as a near-pole). Everything downstream tags pole
//! events with the kind that produced them.

use crate::rational::Rational;
use std::fmt;

/// Denominators with `|b*x + c|` below this are treated as poles in float mode.
pub const FLOAT_POLE_GUARD: f64 = 1e-12;

/// How a pole was detected.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PoleKind {
    /// Exact arithmetic hit the pole exactly.
    Exact,
    /// Float arithmetic entered the guard band around the pole.
    Near,
}

pub trait Scalar: Clone + PartialEq + fmt::Debug + fmt::Display {
    const POLE_KIND: PoleKind;

    fn zero() -> Self;
    fn one() -> Self;
    fn add(&self, rhs: &Self) -> Self;
    fn sub(&self, rhs: &Self) -> Self;
    fn mul(&self, rhs: &Self) -> Self;
    fn div(&self, rhs: &Self) -> Self;
    fn neg(&self) -> Self;
    fn is_zero(&self) -> bool;
    /// True when dividing by this value must be refused.
    fn is_pole_denominator(&self) -> bool;
}

impl Scalar for Rational {
    const POLE_KIND: PoleKind = PoleKind::Exact;

    fn zero() -> Self {
        Rational::zero()
    }
    fn one() -> Self {
        Rational::one()
    }
    fn add(&self, rhs: &Self) -> Self {
        self + rhs
    }
    fn sub(&self, rhs: &Self) -> Self {
        self - rhs
    }
    fn mul(&self, rhs: &Self) -> Self {
        self * rhs
    }
    fn div(&self, rhs: &Self) -> Self {
        self / rhs
    }
    fn neg(&self) -> Self {
        -self
    }
    fn is_zero(&self) -> bool {
        Rational::is_zero(self)
    }
    fn is_pole_denominator(&self) -> bool {
        Rational::is_zero(self)
    }
}

impl Scalar for f64 {
    const POLE_KIND: PoleKind = PoleKind::Near;

    fn zero() -> Self {
        0.0
    }
    fn one() -> Self {
        1.0
    }
    fn add(&self, rhs: &Self) -> Self {
        self + rhs
    }
    fn sub(&self, rhs: &Self) -> Self {
        self - rhs
    }
    fn mul(&self, rhs: &Self) -> Self {
        self * rhs
    }
    fn div(&self, rhs: &Self) -> Self {
        self / rhs
    }
    fn neg(&self) -> Self {
        -self
    }
    fn is_zero(&self) -> bool {
        *self == 0.0
    }
    fn is_pole_denominator(&self) -> bool {
        !self.is_finite() || self.abs() < FLOAT_POLE_GUARD
    }
}
