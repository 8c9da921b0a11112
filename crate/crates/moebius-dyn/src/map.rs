//! The Möbius map `f(x) = (x + a)/(b x + c)` and its parameter algebra.
//!
//! Validity requires `b ≠ 0` and `c ≠ a*b` (otherwise the map is constant
//! `1/b`). The pole `x̂ = -c/b` is excluded from every application; its
//! iterated preimages under `f⁻¹(x) = (a - c x)/(b x - 1)` form the set of
//! bad points, the only starting values whose orbits die in finitely many
//! steps.
//!
//! With rational parameters everything else here is exact: the fixed points
//! solve `b x² + (c-1) x - a = 0` with discriminant `D = (c-1)² + 4ab`, the
//! multipliers are `alpha, beta = (1 + c ± sqrt(D))/2`, the n-th iterate has
//! a closed form in `alpha`, `beta`, and the scalars
//! `K_q = Σ alpha^(q-j-1) beta^j` decide global periodicity: `K_q = 0` makes
//! every non-bad point q-periodic, computed here by the integer recurrence
//! `K_{q+2} = (c+1) K_{q+1} - (c-ab) K_q` to stay in the base field.

use crate::quad::{Algebraic, QuadExt};
use crate::rational::{sqrt_rational, Rational};
use crate::scalar::{PoleKind, Scalar};
use serde::Serialize;
use std::collections::HashSet;
use std::fmt;

/// Parameter triple `(a, b, c)` with the validity invariants enforced.
#[derive(Clone, PartialEq, Debug)]
pub struct MoebiusMap<S: Scalar> {
    a: S,
    b: S,
    c: S,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum MapError {
    /// `b = 0` degenerates the map to the affine `(x + a)/c`.
    ZeroB,
    /// `c = a*b` makes the map constant `1/b`.
    Constant,
}

impl fmt::Display for MapError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            MapError::ZeroB => write!(f, "invalid map: b must be nonzero"),
            MapError::Constant => write!(f, "invalid map: c = a*b makes f constant 1/b"),
        }
    }
}

impl std::error::Error for MapError {}

/// The orbit ran into the pole. `step` is the orbit index whose value is
/// `x̂` (equivalently, `f^(step+1)` is undefined there).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PoleHit {
    pub kind: PoleKind,
    pub step: usize,
}

impl fmt::Display for PoleHit {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.kind {
            PoleKind::Exact => write!(f, "orbit hits the pole at step {}", self.step),
            PoleKind::Near => write!(f, "orbit enters the pole guard band at step {}", self.step),
        }
    }
}

impl std::error::Error for PoleHit {}

impl<S: Scalar> MoebiusMap<S> {
    pub fn new(a: S, b: S, c: S) -> Result<Self, MapError> {
        if b.is_zero() {
            return Err(MapError::ZeroB);
        }
        if c.sub(&a.mul(&b)).is_zero() {
            return Err(MapError::Constant);
        }
        Ok(MoebiusMap { a, b, c })
    }

    pub fn a(&self) -> &S {
        &self.a
    }

    pub fn b(&self) -> &S {
        &self.b
    }

    pub fn c(&self) -> &S {
        &self.c
    }

    /// The excluded point `x̂ = -c/b`.
    pub fn pole(&self) -> S {
        self.c.div(&self.b).neg()
    }

    fn eval(&self, x: &S) -> Option<S> {
        let den = self.b.mul(x).add(&self.c);
        if den.is_pole_denominator() {
            return None;
        }
        Some(x.add(&self.a).div(&den))
    }

    /// One application of `f`.
    pub fn apply(&self, x: &S) -> Result<S, PoleHit> {
        self.eval(x).ok_or(PoleHit {
            kind: S::POLE_KIND,
            step: 0,
        })
    }

    /// The full orbit `x, f(x), …, f^n(x)` by repeated application.
    pub fn orbit(&self, x0: &S, n: usize) -> Result<Vec<S>, PoleHit> {
        let mut points = Vec::with_capacity(n + 1);
        points.push(x0.clone());
        for step in 0..n {
            let next = self.eval(&points[step]).ok_or(PoleHit {
                kind: S::POLE_KIND,
                step,
            })?;
            points.push(next);
        }
        Ok(points)
    }

    /// The inverse `f⁻¹(x) = (a - c x)/(b x - 1)`, defined away from `1/b`.
    pub fn inverse(&self) -> InverseMap<S> {
        InverseMap {
            a: self.a.clone(),
            b: self.b.clone(),
            c: self.c.clone(),
        }
    }
}

/// `f⁻¹(x) = (a - c x)/(b x - 1)`; satisfies `f(f⁻¹(x)) = x` for `x ≠ 1/b`
/// and `f⁻¹(f(x)) = x` for `x ≠ x̂`.
#[derive(Clone, Debug)]
pub struct InverseMap<S: Scalar> {
    a: S,
    b: S,
    c: S,
}

impl<S: Scalar> InverseMap<S> {
    /// The pole of the inverse, `1/b`.
    pub fn pole(&self) -> S {
        S::one().div(&self.b)
    }

    pub fn apply(&self, x: &S) -> Result<S, PoleHit> {
        let den = self.b.mul(x).sub(&S::one());
        if den.is_pole_denominator() {
            return Err(PoleHit {
                kind: S::POLE_KIND,
                step: 0,
            });
        }
        Ok(self.a.sub(&self.c.mul(x)).div(&den))
    }
}

/// Selector for a fixed point of the map.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum WhichFixed {
    /// The `+sqrt(D)` root (when `D ≠ 0`).
    X1,
    /// The `-sqrt(D)` root (when `D ≠ 0`).
    X2,
    /// The double root `(1-c)/(2b)` (when `D = 0`).
    Unique,
}

/// Solutions of `b x² + (c-1) x - a = 0`.
///
/// `x1` always takes the `+` branch of the `sqrt(D)` symbol and pairs with
/// `alpha` through `alpha = b*x1 + c`; swapping the sign of the symbol swaps
/// `(x1, alpha) ↔ (x2, beta)` and leaves every statement invariant.
#[derive(Clone, Debug, PartialEq)]
pub struct FixedPointSet {
    pub discriminant: Rational,
    pub points: FixedPoints,
}

#[derive(Clone, Debug, PartialEq)]
#[allow(clippy::large_enum_variant)]
pub enum FixedPoints {
    /// `D ≠ 0`: two distinct solutions, rational when `sqrt(D)` is rational.
    Two { x1: Algebraic, x2: Algebraic },
    /// `D = 0`: the single solution of multiplicity two.
    Double { x0: Rational },
}

impl FixedPointSet {
    /// The fixed points that exist over the reals (empty when `D < 0`).
    pub fn real_points(&self) -> Vec<Algebraic> {
        match &self.points {
            FixedPoints::Double { x0 } => vec![Algebraic::Rational(x0.clone())],
            FixedPoints::Two { x1, x2 } => {
                if self.discriminant.is_negative() {
                    vec![]
                } else {
                    vec![x1.clone(), x2.clone()]
                }
            }
        }
    }

    pub fn get(&self, which: WhichFixed) -> Option<Algebraic> {
        match (&self.points, which) {
            (FixedPoints::Two { x1, .. }, WhichFixed::X1) => Some(x1.clone()),
            (FixedPoints::Two { x2, .. }, WhichFixed::X2) => Some(x2.clone()),
            (FixedPoints::Double { x0 }, WhichFixed::Unique) => {
                Some(Algebraic::Rational(x0.clone()))
            }
            _ => None,
        }
    }

    pub fn is_fixed(&self, x: &Rational) -> bool {
        match &self.points {
            FixedPoints::Double { x0 } => x0 == x,
            FixedPoints::Two { x1, x2 } => {
                let xr = Algebraic::Rational(x.clone());
                *x1 == xr || *x2 == xr
            }
        }
    }
}

/// Iterated exact preimages of the pole: the starting points whose orbits
/// eventually hit `x̂`.
#[derive(Clone, Debug, PartialEq)]
pub struct BadPointSet {
    pub requested_depth: usize,
    pub points: Vec<Rational>,
    /// Why fewer than `requested_depth + 1` points were produced.
    pub termination: Option<BadPointTermination>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BadPointTermination {
    /// The last preimage is `1/b`, where `f⁻¹` has its pole; the chain ends.
    InversePole,
    /// A preimage repeated, so the set is finite.
    Revisited,
}

impl BadPointSet {
    pub fn contains(&self, x: &Rational) -> bool {
        self.points.contains(x)
    }
}

/// Coefficients of the q-th compositional power, `f^q(x) = (a x + b)/(c x + d)`.
#[derive(Clone, Debug, PartialEq)]
pub struct CompositionCoeffs {
    pub a: Rational,
    pub b: Rational,
    pub c: Rational,
    pub d: Rational,
}

impl MoebiusMap<Rational> {
    /// Float instantiation with the same parameters.
    pub fn to_float(&self) -> MoebiusMap<f64> {
        MoebiusMap {
            a: self.a.to_f64(),
            b: self.b.to_f64(),
            c: self.c.to_f64(),
        }
    }

    /// `D = (c-1)² + 4ab`.
    pub fn discriminant(&self) -> Rational {
        let cm1 = &self.c - &Rational::one();
        &(&cm1 * &cm1) + &(Rational::integer(4) * (&self.a * &self.b))
    }

    /// `c - ab`, the product `alpha * beta`; nonzero by validity.
    pub fn c_minus_ab(&self) -> Rational {
        &self.c - &(&self.a * &self.b)
    }

    pub fn fixed_points(&self) -> FixedPointSet {
        let d = self.discriminant();
        let two_b = Rational::integer(2) * &self.b;
        let one_minus_c = &Rational::one() - &self.c;
        let points = match sqrt_rational(&d) {
            Some(s) if s.is_zero() => FixedPoints::Double {
                x0: &one_minus_c / &two_b,
            },
            Some(s) => FixedPoints::Two {
                x1: Algebraic::Rational(&(&one_minus_c + &s) / &two_b),
                x2: Algebraic::Rational(&(&one_minus_c - &s) / &two_b),
            },
            None => {
                let u = &one_minus_c / &two_b;
                let v = two_b.recip();
                FixedPoints::Two {
                    x1: Algebraic::Quad(QuadExt::new(u.clone(), v.clone(), d.clone())),
                    x2: Algebraic::Quad(QuadExt::new(u, -v, d.clone())),
                }
            }
        };
        FixedPointSet {
            discriminant: d,
            points,
        }
    }

    /// `alpha, beta = (1 + c ± sqrt(D))/2`, sharing the `sqrt(D)` symbol with
    /// [`Self::fixed_points`] so that `alpha = b*x1 + c` and `beta = b*x2 + c`
    /// hold exactly; also `alpha*beta = c - ab` and `alpha + beta = 1 + c`.
    pub fn alpha_beta(&self) -> (Algebraic, Algebraic) {
        let d = self.discriminant();
        let half = Rational::new(1, 2);
        let u = &(&Rational::one() + &self.c) * &half;
        match sqrt_rational(&d) {
            Some(s) if s.is_zero() => (Algebraic::Rational(u.clone()), Algebraic::Rational(u)),
            Some(s) => {
                let hs = &half * &s;
                (Algebraic::Rational(&u + &hs), Algebraic::Rational(&u - &hs))
            }
            None => (
                Algebraic::Quad(QuadExt::new(u.clone(), half.clone(), d.clone())),
                Algebraic::Quad(QuadExt::new(u, -half, d)),
            ),
        }
    }

    /// `K_q` by the base-field recurrence
    /// `K_{q+2} = (c+1) K_{q+1} - (c-ab) K_q`, `K_1 = 1`, `K_2 = 1+c`.
    pub fn k_q(&self, q: u32) -> Rational {
        assert!(q >= 1, "K_q is defined for q >= 1");
        self.k_values(q).pop().expect("q >= 1")
    }

    /// `[K_1, …, K_qmax]`.
    pub fn k_values(&self, qmax: u32) -> Vec<Rational> {
        assert!(qmax >= 1);
        let c_plus_1 = &self.c + &Rational::one();
        let c_minus_ab = self.c_minus_ab();
        let mut ks = Vec::with_capacity(qmax as usize);
        ks.push(Rational::one());
        if qmax >= 2 {
            ks.push(c_plus_1.clone());
        }
        for q in 2..qmax as usize {
            let next = &(&c_plus_1 * &ks[q - 1]) - &(&c_minus_ab * &ks[q - 2]);
            ks.push(next);
        }
        ks
    }

    /// Smallest `q` in `2..=qmax` with `K_q = 0`; such a `q` makes every
    /// point outside the bad set q-periodic. `None` certifies only the
    /// scanned range.
    pub fn min_period(&self, qmax: u32) -> Option<u32> {
        assert!(qmax >= 2, "periodicity scan needs qmax >= 2");
        self.k_values(qmax)
            .iter()
            .enumerate()
            .skip(1)
            .find(|(_, k)| k.is_zero())
            .map(|(i, _)| (i + 1) as u32)
    }

    /// Coefficients of `f^q` via the composition recurrence
    /// `a_{q+1} = a_q + b b_q`, `b_{q+1} = a a_q + c b_q`,
    /// `c_{q+1} = c_q + b d_q`, `d_{q+1} = a c_q + c d_q`.
    pub fn composition_coeffs(&self, q: u32) -> CompositionCoeffs {
        assert!(q >= 1, "composition power is defined for q >= 1");
        let mut co = CompositionCoeffs {
            a: Rational::one(),
            b: self.a.clone(),
            c: self.b.clone(),
            d: self.c.clone(),
        };
        for _ in 1..q {
            co = CompositionCoeffs {
                a: &co.a + &(&self.b * &co.b),
                b: &(&self.a * &co.a) + &(&self.c * &co.b),
                c: &co.c + &(&self.b * &co.d),
                d: &(&self.a * &co.c) + &(&self.c * &co.d),
            };
        }
        co
    }

    /// Iterated exact preimages of the pole, `x̂, f⁻¹(x̂), f⁻²(x̂), …`.
    ///
    /// Enumeration stops early when a preimage equals `1/b` (the pole of
    /// `f⁻¹`, so no further preimages exist) or revisits an earlier point.
    pub fn bad_points(&self, depth: usize) -> BadPointSet {
        let inv = self.inverse();
        let inv_pole = inv.pole();
        let mut points = vec![self.pole()];
        let mut seen: HashSet<Rational> = points.iter().cloned().collect();
        let mut termination = None;
        while points.len() <= depth {
            let last = points.last().expect("nonempty");
            if *last == inv_pole {
                termination = Some(BadPointTermination::InversePole);
                break;
            }
            let next = inv
                .apply(last)
                .expect("inverse pole was checked before applying");
            if !seen.insert(next.clone()) {
                termination = Some(BadPointTermination::Revisited);
                break;
            }
            points.push(next);
        }
        BadPointSet {
            requested_depth: depth,
            points,
            termination,
        }
    }

    /// `f^n(x)` from the closed iterate formula
    ///
    /// ```text
    ///                      ab - c   (bx - 1 + alpha) alpha^(n-1) - (bx - 1 + beta) beta^(n-1)
    /// f^n(x) = 1/b  +  ─────── · ───────────────────────────────────────────────────────
    ///                        b      (bx - 1 + alpha) alpha^n     - (bx - 1 + beta) beta^n
    /// ```
    ///
    /// (for `alpha ≠ beta`; a parallel branch covers the double root). The
    /// formula is evaluated in exact quadratic-extension arithmetic when
    /// `sqrt(D)` is irrational; the extension part must cancel on rational
    /// input, which is asserted. Starts whose orbit dies on the pole before
    /// step `n` error out with the first orbit index sitting on the pole,
    /// exactly like naive iteration.
    pub fn iterate_closed(&self, x: &Rational, n: usize) -> Result<Rational, PoleHit> {
        if n == 0 {
            return Ok(x.clone());
        }
        let d = self.discriminant();
        let t = &(&self.b * x) - &Rational::one(); // bx - 1

        // The formula continues projectively through the pole, so orbit
        // death must be detected separately. The denominator of the m-th
        // iterate factors as (alpha - beta)·[(bx-1) K_m + K_{m+1}] (and its
        // double-root analogue obeys the same K identity), so
        // f^(m-1)(x) = x̂ exactly when that bracket vanishes.
        let ks = self.k_values(n as u32 + 1);
        for m in 1..=n {
            if (&(&t * &ks[m - 1]) + &ks[m]).is_zero() {
                return Err(PoleHit {
                    kind: PoleKind::Exact,
                    step: m - 1,
                });
            }
        }
        let lead = &(&(&self.a * &self.b) - &self.c) / &self.b; // (ab - c)/b
        let inv_b = self.b.recip();

        let ratio: Option<Rational> = match sqrt_rational(&d) {
            Some(s) if s.is_zero() => {
                // alpha = beta = (1+c)/2:
                //   [(bx-1)(n-1) + n alpha] / (alpha [(bx-1) n + (n+1) alpha])
                let alpha = &(&Rational::one() + &self.c) * &Rational::new(1, 2);
                let nm1 = Rational::integer(n as i64 - 1);
                let nn = Rational::integer(n as i64);
                let np1 = Rational::integer(n as i64 + 1);
                let num = &(&t * &nm1) + &(&nn * &alpha);
                let den = &alpha * &(&(&t * &nn) + &(&np1 * &alpha));
                (!den.is_zero()).then(|| &num / &den)
            }
            Some(s) => {
                let half = Rational::new(1, 2);
                let u = &(&Rational::one() + &self.c) * &half;
                let hs = &half * &s;
                let alpha = &u + &hs;
                let beta = &u - &hs;
                let ta = &t + &alpha;
                let tb = &t + &beta;
                let ap = alpha.pow(n as i32 - 1);
                let bp = beta.pow(n as i32 - 1);
                let num = &(&ta * &ap) - &(&tb * &bp);
                let den = &(&ta * &(&ap * &alpha)) - &(&tb * &(&bp * &beta));
                (!den.is_zero()).then(|| &num / &den)
            }
            None => {
                let half = QuadExt::from_rational(Rational::new(1, 2), d.clone());
                let u = QuadExt::from_rational(&Rational::one() + &self.c, d.clone());
                let s = QuadExt::sqrt_of(d.clone());
                let alpha = &(&u + &s) * &half;
                let beta = &(&u - &s) * &half;
                let tq = QuadExt::from_rational(t.clone(), d.clone());
                let ta = &tq + &alpha;
                let tb = &tq + &beta;
                let ap = quad_pow(&alpha, n - 1);
                let bp = quad_pow(&beta, n - 1);
                let num = &(&ta * &ap) - &(&tb * &bp);
                let den = &(&ta * &(&ap * &alpha)) - &(&tb * &(&bp * &beta));
                (!den.is_zero()).then(|| {
                    let q = &num / &den;
                    q.as_rational()
                        .expect("closed-form iterate of a rational start must reduce to a rational")
                        .clone()
                })
            }
        };

        match ratio {
            Some(q) => Ok(&inv_b + &(&lead * &q)),
            // Vanishing denominator: either the orbit genuinely dies on the
            // pole (report the first such index), or numerator and
            // denominator vanish together and naive iteration resolves the
            // removable point.
            None => self
                .orbit(x, n)
                .map(|orb| orb.into_iter().last().expect("n+1 points")),
        }
    }
}

fn quad_pow(x: &QuadExt, n: usize) -> QuadExt {
    let mut acc = QuadExt::from_rational(Rational::one(), x.radicand().clone());
    for _ in 0..n {
        acc = &acc * x;
    }
    acc
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(n: i64, d: i64) -> Rational {
        Rational::new(n, d)
    }

    fn map(a: i64, b: i64, c: i64) -> MoebiusMap<Rational> {
        MoebiusMap::new(
            Rational::integer(a),
            Rational::integer(b),
            Rational::integer(c),
        )
        .unwrap()
    }

    #[test]
    fn validity_invariants() {
        assert_eq!(
            MoebiusMap::new(r(1, 1), Rational::zero(), r(1, 1)),
            Err(MapError::ZeroB)
        );
        assert_eq!(
            MoebiusMap::new(r(2, 1), r(3, 1), r(6, 1)),
            Err(MapError::Constant)
        );
    }

    #[test]
    fn apply_examples() {
        let f = map(1, 2, 3);
        assert_eq!(f.apply(&Rational::zero()).unwrap(), r(1, 3));
        assert_eq!(
            f.apply(&r(-3, 2)),
            Err(PoleHit {
                kind: PoleKind::Exact,
                step: 0
            })
        );
        let g = map(1, 1, -1);
        assert_eq!(g.apply(&r(2, 1)).unwrap(), r(3, 1));
    }

    #[test]
    fn inverse_round_trips() {
        let f = map(1, 2, 3);
        let g = f.inverse();
        assert_eq!(g.apply(&r(1, 3)).unwrap(), Rational::zero());
        let h = map(1, 1, -1);
        assert_eq!(h.inverse().apply(&r(3, 1)).unwrap(), r(2, 1));
        // g(0) = (a - 0)/(0 - 1) = -a for any valid map
        assert_eq!(g.apply(&Rational::zero()).unwrap(), r(-1, 1));
        assert_eq!(
            g.apply(&g.pole()),
            Err(PoleHit {
                kind: PoleKind::Exact,
                step: 0
            })
        );
    }

    #[test]
    fn float_mode_guards_near_poles() {
        let f = MoebiusMap::new(1.0, 2.0, 3.0).unwrap();
        assert!((f.apply(&0.0).unwrap() - 1.0 / 3.0).abs() < 1e-15);
        let near = -1.5 + 1e-14;
        assert_eq!(
            f.apply(&near),
            Err(PoleHit {
                kind: PoleKind::Near,
                step: 0
            })
        );
    }

    #[test]
    fn orbit_matches_hand_arithmetic() {
        let f = map(1, 2, 3);
        let orb = f.orbit(&Rational::zero(), 2).unwrap();
        assert_eq!(orb, vec![Rational::zero(), r(1, 3), r(4, 11)]);
    }

    #[test]
    fn orbit_two_cycle() {
        let f = map(1, 1, -1);
        let orb = f.orbit(&r(2, 1), 4).unwrap();
        assert_eq!(orb, vec![r(2, 1), r(3, 1), r(2, 1), r(3, 1), r(2, 1)]);
    }

    #[test]
    fn orbit_dies_at_pole_with_index() {
        let f = map(1, 2, 3);
        assert_eq!(
            f.orbit(&f.pole(), 3),
            Err(PoleHit {
                kind: PoleKind::Exact,
                step: 0
            })
        );
        // -11/8 maps onto the pole in one step
        assert_eq!(
            f.orbit(&r(-11, 8), 5),
            Err(PoleHit {
                kind: PoleKind::Exact,
                step: 1
            })
        );
    }

    fn poly_at(f: &MoebiusMap<Rational>, x: &Algebraic) -> Algebraic {
        // b x² + (c-1) x - a
        let b = Algebraic::Rational(f.b().clone());
        let cm1 = Algebraic::Rational(f.c() - &Rational::one());
        let a = Algebraic::Rational(f.a().clone());
        &(&(&b * &(x * x)) + &(&cm1 * x)) - &a
    }

    #[test]
    fn fixed_points_irrational_case() {
        let f = map(1, 2, 3);
        let fps = f.fixed_points();
        assert_eq!(fps.discriminant, r(12, 1));
        let FixedPoints::Two { x1, x2 } = &fps.points else {
            panic!("expected two fixed points")
        };
        assert!(poly_at(&f, x1).is_zero());
        assert!(poly_at(&f, x2).is_zero());
        // x1 = (sqrt(3) - 1)/2 under the real embedding
        assert!((x1.to_f64().unwrap() - (3f64.sqrt() - 1.0) / 2.0).abs() < 1e-14);
        assert!((x2.to_f64().unwrap() + (3f64.sqrt() + 1.0) / 2.0).abs() < 1e-14);
    }

    #[test]
    fn fixed_points_double_root() {
        let f = map(1, -1, 3);
        let fps = f.fixed_points();
        assert!(fps.discriminant.is_zero());
        assert_eq!(
            fps.points,
            FixedPoints::Double {
                x0: Rational::one()
            }
        );
        assert_eq!(f.apply(&Rational::one()).unwrap(), Rational::one());
    }

    #[test]
    fn fixed_points_rational_case() {
        for p in [2i64, 3, 5, 7] {
            let f = map(0, 1, p);
            let fps = f.fixed_points();
            assert_eq!(fps.discriminant, Rational::integer((p - 1) * (p - 1)));
            let FixedPoints::Two { x1, x2 } = &fps.points else {
                panic!("expected two rational fixed points")
            };
            assert_eq!(x1, &Algebraic::Rational(Rational::zero()));
            assert_eq!(x2, &Algebraic::Rational(Rational::integer(1 - p)));
            assert_eq!(f.apply(&Rational::zero()).unwrap(), Rational::zero());
            assert_eq!(
                f.apply(&Rational::integer(1 - p)).unwrap(),
                Rational::integer(1 - p)
            );
        }
    }

    #[test]
    fn real_points_empty_for_negative_discriminant() {
        let f = MoebiusMap::new(r(1, 1), r(-1, 1), r(1, 2)).unwrap();
        assert!(f.discriminant().is_negative());
        assert!(f.fixed_points().real_points().is_empty());
    }

    #[test]
    fn alpha_beta_examples() {
        let f = map(1, 2, 3);
        let (alpha, beta) = f.alpha_beta();
        // alpha = 2 + sqrt(3): check numerically and through alpha*beta = c - ab
        assert!((alpha.to_f64().unwrap() - (2.0 + 3f64.sqrt())).abs() < 1e-14);
        assert_eq!(&alpha * &beta, Algebraic::Rational(f.c_minus_ab()));
        assert_eq!(
            &alpha + &beta,
            Algebraic::Rational(&Rational::one() + f.c())
        );

        let g = map(0, 1, 5);
        assert_eq!(
            g.alpha_beta(),
            (
                Algebraic::Rational(r(5, 1)),
                Algebraic::Rational(Rational::one())
            )
        );

        let h = map(1, -1, 3); // D = 0
        assert_eq!(
            h.alpha_beta(),
            (Algebraic::Rational(r(2, 1)), Algebraic::Rational(r(2, 1)))
        );
    }

    #[test]
    fn alpha_pairs_with_x1() {
        // alpha = b*x1 + c and beta = b*x2 + c, in both square and
        // non-square discriminant cases
        for (a, b, c) in [(1, 2, 3), (0, 1, 5), (1, 1, -1), (-1, 1, 0), (2, 3, -5)] {
            let f = map(a, b, c);
            let (alpha, beta) = f.alpha_beta();
            let FixedPoints::Two { x1, x2 } = f.fixed_points().points else {
                panic!("expected two fixed points")
            };
            let br = Algebraic::Rational(f.b().clone());
            let cr = Algebraic::Rational(f.c().clone());
            assert_eq!(&(&br * &x1) + &cr, alpha, "alpha pairing for {a},{b},{c}");
            assert_eq!(&(&br * &x2) + &cr, beta, "beta pairing for {a},{b},{c}");
        }
    }

    #[test]
    fn k_q_small_cases_match_displayed_polynomials() {
        for (a, b, c) in [(1i64, 2i64, 3i64), (-1, 1, 0), (1, -1, 1), (2, 3, -5)] {
            let f = map(a, b, c);
            let (ar, cr) = (r(a, 1), r(c, 1));
            let ab = r(a * b, 1);
            assert_eq!(f.k_q(1), Rational::one());
            assert_eq!(f.k_q(2), &Rational::one() + &cr);
            // K_3 = 1 + c + c² + ab
            let k3 = &(&(&Rational::one() + &cr) + &(&cr * &cr)) + &ab;
            assert_eq!(f.k_q(3), k3);
            // K_4 = (1+c)(1 + 2ab + c²)
            let k4 = &(&Rational::one() + &cr)
                * &(&(&Rational::one() + &(&r(2, 1) * &ab)) + &(&cr * &cr));
            assert_eq!(f.k_q(4), k4);
            let _ = ar;
        }
    }

    #[test]
    fn k_3_vanishes_for_period_three_map() {
        assert!(map(-1, 1, 0).k_q(3).is_zero());
    }

    #[test]
    fn min_period_examples() {
        assert_eq!(map(1, 1, -1).min_period(64), Some(2));
        assert_eq!(map(1, -1, 1).min_period(64), Some(4));
        assert_eq!(map(-1, 1, 0).min_period(64), Some(3));
        assert_eq!(map(1, 2, 3).min_period(64), None);
    }

    #[test]
    fn iterate_closed_periodic_returns() {
        // K_2 = 0 forces every point 2-periodic
        let f = map(1, 1, -1);
        assert_eq!(f.iterate_closed(&r(2, 1), 2).unwrap(), r(2, 1));
        // K_3 = 0: f(x) = (x-1)/x has exact period 3
        let g = map(-1, 1, 0);
        assert_eq!(g.iterate_closed(&r(5, 1), 3).unwrap(), r(5, 1));
        // n = 1 agrees with apply
        let h = map(1, -1, 3);
        assert_eq!(h.iterate_closed(&Rational::zero(), 1).unwrap(), r(1, 3));
    }

    #[test]
    fn iterate_closed_matches_orbit_in_all_branches() {
        // square discriminant, non-square discriminant, and double root
        for (a, b, c) in [(0i64, 1i64, 5i64), (1, 2, 3), (1, -1, 3), (1, -1, 1)] {
            let f = map(a, b, c);
            let x = r(2, 7);
            let orb = f.orbit(&x, 12).unwrap();
            for (n, expected) in orb.iter().enumerate() {
                assert_eq!(
                    &f.iterate_closed(&x, n).unwrap(),
                    expected,
                    "closed form disagrees at n={n} for ({a},{b},{c})"
                );
            }
        }
    }

    #[test]
    fn iterate_closed_reports_first_pole_index() {
        let f = map(1, 2, 3);
        // f(-11/8) = pole, so requesting any n >= 2 dies at step 1
        let hit = f.iterate_closed(&r(-11, 8), 6).unwrap_err();
        assert_eq!(hit.step, 1);
        assert_eq!(f.iterate_closed(&f.pole(), 1).unwrap_err().step, 0);
    }

    #[test]
    fn composition_coeffs_divisibility_identity() {
        // c_q = b K_q, d_q - a_q = (c-1) K_q, b_q = a K_q
        let f = map(2, 3, -5);
        for q in 1..=12 {
            let co = f.composition_coeffs(q);
            let k = f.k_q(q);
            assert_eq!(co.c, f.b() * &k);
            assert_eq!(&co.d - &co.a, &(f.c() - &Rational::one()) * &k);
            assert_eq!(co.b, f.a() * &k);
        }
    }

    #[test]
    fn bad_points_examples() {
        let f = map(1, 2, 3);
        assert_eq!(f.bad_points(0).points, vec![r(-3, 2)]);
        let depth1 = f.bad_points(1);
        assert_eq!(depth1.points, vec![r(-3, 2), r(-11, 8)]);
        assert_eq!(f.apply(&r(-11, 8)).unwrap(), r(-3, 2));
        assert_eq!(depth1.termination, None);
    }

    #[test]
    fn bad_points_stop_at_inverse_pole() {
        // c = -1 puts the pole at 1/b where f⁻¹ is undefined: the pole has
        // no preimages and the bad set is just {x̂}.
        let f = map(1, 1, -1);
        let bp = f.bad_points(2);
        assert_eq!(bp.points, vec![Rational::one()]);
        assert_eq!(bp.termination, Some(BadPointTermination::InversePole));
    }
}
