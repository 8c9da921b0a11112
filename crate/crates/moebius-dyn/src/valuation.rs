//! p-adic valuations with exact rational exponents.
//!
//! For a prime `p` every nonzero rational factors as `p^r * n/m` with
//! `p` dividing neither `n` nor `m`; the p-adic norm is `p^(-r)` and the
//! norm of zero is `0`. [`PVal`] stores the pair `(p, r)` with
//! `r ∈ ℚ ∪ {+∞}`; `+∞` is the distinguished state encoding norm zero,
//! never a sentinel number. All norm comparison and multiplication is
//! exponent arithmetic over the rationals — Siegel radii such as `p^(1/2)`
//! arise in ramified cases and must compare exactly.
//!
//! The valuation extends uniquely to a quadratic extension `ℚ(sqrt(D))`
//! with `D` not a rational square via `v(x) = v(N(x))/2`, where `N` is the
//! norm form; exponents there are integers or half-integers.

use crate::quad::{Algebraic, QuadExt};
use crate::rational::{sqrt_rational, Rational};
use num_bigint::BigInt;
use num_traits::Zero;
use serde::ser::SerializeStruct;
use serde::{Serialize, Serializer};
use std::cmp::Ordering;
use std::fmt;

/// Valuation exponent: finite rational or `+∞` (norm zero).
#[derive(Clone, PartialEq, Eq, Debug)]
pub enum ValExp {
    Finite(Rational),
    Infinite,
}

/// A value of the p-adic norm, stored as `(p, exponent)` with norm `p^(-exponent)`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct PVal {
    prime: u64,
    exponent: ValExp,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ValError {
    NotPrime(u64),
    /// The radicand is a rational square; reduce the value to a `Rational`
    /// and use [`padic_val`] instead.
    ReducibleExtension(Rational),
}

impl fmt::Display for ValError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ValError::NotPrime(p) => write!(f, "{p} is not prime"),
            ValError::ReducibleExtension(d) => write!(
                f,
                "sqrt({d}) is rational; reduce the value to a Rational before taking its valuation"
            ),
        }
    }
}

impl std::error::Error for ValError {}

/// Trial-division primality test; parameters in this toolkit are small.
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    if n.is_multiple_of(2) {
        return n == 2;
    }
    let mut d = 3u64;
    while d.saturating_mul(d) <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 2;
    }
    true
}

/// Exact power of `p` dividing a nonzero integer.
fn int_val(n: &BigInt, p: u64) -> i64 {
    debug_assert!(!n.is_zero());
    let p = BigInt::from(p);
    let mut n = n.clone();
    let mut v = 0i64;
    loop {
        let (q, r) = num_integer::Integer::div_rem(&n, &p);
        if !r.is_zero() {
            return v;
        }
        n = q;
        v += 1;
    }
}

/// p-adic valuation of a rational: the exponent `r` in `x = p^r * n/m`.
pub fn padic_val(x: &Rational, p: u64) -> Result<PVal, ValError> {
    if !is_prime(p) {
        return Err(ValError::NotPrime(p));
    }
    if x.is_zero() {
        return Ok(PVal::infinite(p));
    }
    let v = int_val(x.numer(), p) - int_val(x.denom(), p);
    Ok(PVal::finite(p, Rational::integer(v)))
}

/// Valuation on `ℚ(sqrt(D))` via the norm form: `v(x) = v(N(x))/2`.
pub fn quad_val(x: &QuadExt, p: u64) -> Result<PVal, ValError> {
    if !is_prime(p) {
        return Err(ValError::NotPrime(p));
    }
    if !x.is_rational() && sqrt_rational(x.radicand()).is_some() {
        return Err(ValError::ReducibleExtension(x.radicand().clone()));
    }
    if x.is_zero() {
        return Ok(PVal::infinite(p));
    }
    let norm = x.norm_form();
    let v = padic_val(&norm, p)?;
    Ok(v.pow_scaled(&Rational::new(1, 2)))
}

/// Valuation of a rational-or-quadratic value.
pub fn algebraic_val(x: &Algebraic, p: u64) -> Result<PVal, ValError> {
    match x {
        Algebraic::Rational(r) => padic_val(r, p),
        Algebraic::Quad(q) => match q.as_rational() {
            Some(r) => padic_val(r, p),
            None => quad_val(q, p),
        },
    }
}

impl PVal {
    pub fn finite(prime: u64, exponent: Rational) -> Self {
        PVal {
            prime,
            exponent: ValExp::Finite(exponent),
        }
    }

    /// Norm zero, i.e. the valuation of 0.
    pub fn infinite(prime: u64) -> Self {
        PVal {
            prime,
            exponent: ValExp::Infinite,
        }
    }

    /// Norm one (exponent zero).
    pub fn unit(prime: u64) -> Self {
        PVal::finite(prime, Rational::zero())
    }

    pub fn prime(&self) -> u64 {
        self.prime
    }

    pub fn exponent(&self) -> &ValExp {
        &self.exponent
    }

    pub fn finite_exponent(&self) -> Option<&Rational> {
        match &self.exponent {
            ValExp::Finite(r) => Some(r),
            ValExp::Infinite => None,
        }
    }

    pub fn is_zero_norm(&self) -> bool {
        self.exponent == ValExp::Infinite
    }

    /// The norm as a float, `p^(-exponent)`; reporting only.
    pub fn norm_f64(&self) -> f64 {
        match &self.exponent {
            ValExp::Infinite => 0.0,
            ValExp::Finite(v) => (self.prime as f64).powf(-v.to_f64()),
        }
    }

    fn same_prime(&self, other: &PVal) -> u64 {
        assert_eq!(
            self.prime, other.prime,
            "valuations at different primes are not comparable"
        );
        self.prime
    }

    /// Valuation of a product: exponents add, `+∞` absorbs.
    pub fn mul(&self, other: &PVal) -> PVal {
        let p = self.same_prime(other);
        match (&self.exponent, &other.exponent) {
            (ValExp::Finite(a), ValExp::Finite(b)) => PVal::finite(p, a + b),
            _ => PVal::infinite(p),
        }
    }

    /// Valuation of a quotient. Panics when dividing by norm zero.
    pub fn div(&self, other: &PVal) -> PVal {
        let p = self.same_prime(other);
        match (&self.exponent, &other.exponent) {
            (_, ValExp::Infinite) => panic!("division by a value of norm zero"),
            (ValExp::Infinite, _) => PVal::infinite(p),
            (ValExp::Finite(a), ValExp::Finite(b)) => PVal::finite(p, a - b),
        }
    }

    /// Valuation of an integer power.
    pub fn pow(&self, k: i32) -> PVal {
        self.pow_scaled(&Rational::integer(i64::from(k)))
    }

    /// Exponent scaled by an exact rational factor (e.g. 1/2 for square roots).
    pub fn pow_scaled(&self, k: &Rational) -> PVal {
        match &self.exponent {
            ValExp::Infinite => PVal::infinite(self.prime),
            ValExp::Finite(v) => PVal::finite(self.prime, v * k),
        }
    }

    /// Orders by norm value: `0 < p^(-v)` for every finite `v`, and larger
    /// exponents mean smaller norms.
    pub fn cmp_norm(&self, other: &PVal) -> Ordering {
        self.same_prime(other);
        match (&self.exponent, &other.exponent) {
            (ValExp::Infinite, ValExp::Infinite) => Ordering::Equal,
            (ValExp::Infinite, ValExp::Finite(_)) => Ordering::Less,
            (ValExp::Finite(_), ValExp::Infinite) => Ordering::Greater,
            (ValExp::Finite(a), ValExp::Finite(b)) => b.cmp(a),
        }
    }
}

impl PartialOrd for PVal {
    /// Norm ordering; `None` across different primes.
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        (self.prime == other.prime).then(|| self.cmp_norm(other))
    }
}

impl fmt::Display for PVal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.exponent {
            ValExp::Infinite => write!(f, "0"),
            ValExp::Finite(v) => write!(f, "{}^({})", self.prime, -v),
        }
    }
}

impl Serialize for PVal {
    /// `{"p": p, "exponent": "a/b" | "inf", "approx": norm}` — the exponent is
    /// the valuation `v`, the approximation is the norm `p^(-v)`.
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        let mut s = serializer.serialize_struct("PVal", 3)?;
        s.serialize_field("p", &self.prime)?;
        match &self.exponent {
            ValExp::Finite(v) => s.serialize_field("exponent", &v.to_string())?,
            ValExp::Infinite => s.serialize_field("exponent", "inf")?,
        }
        s.serialize_field("approx", &self.norm_f64())?;
        s.end()
    }
}
