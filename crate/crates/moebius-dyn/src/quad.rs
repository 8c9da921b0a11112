//! Elements `u + v*sqrt(D)` of a quadratic extension of the rationals.
//!
//! `sqrt(D)` is a formal symbol: no embedding (real or p-adic) is chosen.
//! Consumers that care about a branch pin it themselves. Values with
//! `v = 0` are canonically identified with their rational part and combine
//! with any radicand; otherwise two values may only be combined when their
//! radicands agree.

use crate::rational::Rational;
use serde::{Serialize, Serializer};
use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

/// `u + v*sqrt(d)` with rational `u`, `v`, `d`.
#[derive(Clone)]
pub struct QuadExt {
    u: Rational,
    v: Rational,
    d: Rational,
}

impl QuadExt {
    pub fn new(u: Rational, v: Rational, d: Rational) -> Self {
        QuadExt { u, v, d }
    }

    /// Embeds a rational into the extension with radicand `d`.
    pub fn from_rational(u: Rational, d: Rational) -> Self {
        QuadExt::new(u, Rational::zero(), d)
    }

    /// The element `sqrt(d)` itself.
    pub fn sqrt_of(d: Rational) -> Self {
        QuadExt::new(Rational::zero(), Rational::one(), d)
    }

    pub fn u(&self) -> &Rational {
        &self.u
    }

    pub fn v(&self) -> &Rational {
        &self.v
    }

    pub fn radicand(&self) -> &Rational {
        &self.d
    }

    pub fn is_zero(&self) -> bool {
        self.u.is_zero() && self.v.is_zero()
    }

    pub fn is_rational(&self) -> bool {
        self.v.is_zero()
    }

    /// The canonical rational identification when `v = 0`.
    pub fn as_rational(&self) -> Option<&Rational> {
        self.v.is_zero().then_some(&self.u)
    }

    /// Field norm `N(u + v*sqrt(d)) = u^2 - d*v^2`; multiplicative.
    pub fn norm_form(&self) -> Rational {
        &(&self.u * &self.u) - &(&self.d * &(&self.v * &self.v))
    }

    /// Conjugate `u - v*sqrt(d)`.
    pub fn conj(&self) -> Self {
        QuadExt::new(self.u.clone(), -&self.v, self.d.clone())
    }

    /// Multiplicative inverse `conj / norm`. Panics when the norm vanishes,
    /// which for a non-square radicand means the value itself is zero.
    pub fn recip(&self) -> Self {
        let n = self.norm_form();
        assert!(
            !n.is_zero(),
            "cannot invert {self}: vanishing norm form (zero, or square radicand)"
        );
        QuadExt::new(&self.u / &n, -&(&self.v / &n), self.d.clone())
    }

    /// Numeric value under the real embedding that sends `sqrt(d)` to the
    /// non-negative root; `None` when `d < 0`.
    pub fn to_f64(&self) -> Option<f64> {
        if self.d.is_negative() && !self.v.is_zero() {
            return None;
        }
        Some(self.u.to_f64() + self.v.to_f64() * self.d.to_f64().sqrt())
    }

    /// Radicand the combination of `self` and `rhs` lives in.
    /// Rational values (v = 0) adopt the other operand's radicand.
    fn unified_radicand(&self, rhs: &QuadExt) -> Rational {
        if self.v.is_zero() {
            rhs.d.clone()
        } else if rhs.v.is_zero() {
            self.d.clone()
        } else {
            assert_eq!(
                self.d, rhs.d,
                "cannot combine values from different extensions: sqrt({}) vs sqrt({})",
                self.d, rhs.d
            );
            self.d.clone()
        }
    }
}

/// Equality under the canonical identification: when both `v` vanish the
/// radicands are irrelevant.
impl PartialEq for QuadExt {
    fn eq(&self, other: &Self) -> bool {
        self.u == other.u && self.v == other.v && (self.v.is_zero() || self.d == other.d)
    }
}

impl Eq for QuadExt {}

impl Add for &QuadExt {
    type Output = QuadExt;
    fn add(self, rhs: &QuadExt) -> QuadExt {
        let d = self.unified_radicand(rhs);
        QuadExt::new(&self.u + &rhs.u, &self.v + &rhs.v, d)
    }
}

impl Sub for &QuadExt {
    type Output = QuadExt;
    fn sub(self, rhs: &QuadExt) -> QuadExt {
        let d = self.unified_radicand(rhs);
        QuadExt::new(&self.u - &rhs.u, &self.v - &rhs.v, d)
    }
}

impl Mul for &QuadExt {
    type Output = QuadExt;
    fn mul(self, rhs: &QuadExt) -> QuadExt {
        let d = self.unified_radicand(rhs);
        // (u1 + v1 s)(u2 + v2 s) = u1 u2 + d v1 v2 + (u1 v2 + v1 u2) s
        let u = &(&self.u * &rhs.u) + &(&d * &(&self.v * &rhs.v));
        let v = &(&self.u * &rhs.v) + &(&self.v * &rhs.u);
        QuadExt::new(u, v, d)
    }
}

impl Div for &QuadExt {
    type Output = QuadExt;
    // field division: multiply by the conjugate over the norm
    #[allow(clippy::suspicious_arithmetic_impl)]
    fn div(self, rhs: &QuadExt) -> QuadExt {
        self * &rhs.recip()
    }
}

impl Neg for &QuadExt {
    type Output = QuadExt;
    fn neg(self) -> QuadExt {
        QuadExt::new(-&self.u, -&self.v, self.d.clone())
    }
}

impl fmt::Display for QuadExt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.v.is_zero() {
            write!(f, "{}", self.u)
        } else {
            write!(f, "{} + {}*sqrt({})", self.u, self.v, self.d)
        }
    }
}

impl fmt::Debug for QuadExt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl Serialize for QuadExt {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

/// A value that is either rational or lives in a quadratic extension.
///
/// Fixed points and the multipliers `alpha`, `beta` of a map with rational
/// parameters are always of this shape.
#[derive(Clone, PartialEq)]
pub enum Algebraic {
    Rational(Rational),
    Quad(QuadExt),
}

impl Algebraic {
    /// Collapses a quadratic value with vanishing irrational part.
    pub fn reduced(self) -> Self {
        match self {
            Algebraic::Quad(q) if q.is_rational() => Algebraic::Rational(q.u().clone()),
            other => other,
        }
    }

    pub fn is_zero(&self) -> bool {
        match self {
            Algebraic::Rational(r) => r.is_zero(),
            Algebraic::Quad(q) => q.is_zero(),
        }
    }

    pub fn as_rational(&self) -> Option<&Rational> {
        match self {
            Algebraic::Rational(r) => Some(r),
            Algebraic::Quad(q) => q.as_rational(),
        }
    }

    pub fn to_f64(&self) -> Option<f64> {
        match self {
            Algebraic::Rational(r) => Some(r.to_f64()),
            Algebraic::Quad(q) => q.to_f64(),
        }
    }

    fn promote(&self, d: &Rational) -> QuadExt {
        match self {
            Algebraic::Rational(r) => QuadExt::from_rational(r.clone(), d.clone()),
            Algebraic::Quad(q) => q.clone(),
        }
    }

    fn combine(
        &self,
        rhs: &Algebraic,
        rat: impl Fn(&Rational, &Rational) -> Rational,
        quad: impl Fn(&QuadExt, &QuadExt) -> QuadExt,
    ) -> Algebraic {
        match (self, rhs) {
            (Algebraic::Rational(a), Algebraic::Rational(b)) => Algebraic::Rational(rat(a, b)),
            (Algebraic::Quad(q), other) => {
                Algebraic::Quad(quad(q, &other.promote(q.radicand()))).reduced()
            }
            (other, Algebraic::Quad(q)) => {
                Algebraic::Quad(quad(&other.promote(q.radicand()), q)).reduced()
            }
        }
    }
}

impl Add for &Algebraic {
    type Output = Algebraic;
    fn add(self, rhs: &Algebraic) -> Algebraic {
        self.combine(rhs, |a, b| a + b, |a, b| a + b)
    }
}

impl Sub for &Algebraic {
    type Output = Algebraic;
    fn sub(self, rhs: &Algebraic) -> Algebraic {
        self.combine(rhs, |a, b| a - b, |a, b| a - b)
    }
}

impl Mul for &Algebraic {
    type Output = Algebraic;
    fn mul(self, rhs: &Algebraic) -> Algebraic {
        self.combine(rhs, |a, b| a * b, |a, b| a * b)
    }
}

impl From<Rational> for Algebraic {
    fn from(r: Rational) -> Self {
        Algebraic::Rational(r)
    }
}

impl From<QuadExt> for Algebraic {
    fn from(q: QuadExt) -> Self {
        Algebraic::Quad(q).reduced()
    }
}

impl fmt::Display for Algebraic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Algebraic::Rational(r) => write!(f, "{r}"),
            Algebraic::Quad(q) => write!(f, "{q}"),
        }
    }
}

impl fmt::Debug for Algebraic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl Serialize for Algebraic {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}
