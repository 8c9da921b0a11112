//! p-adic dynamics of the map: fixed-point character, Siegel disks, basins
//! of attraction, and the radius-map reduction.
//!
//! Everything is computed from rational parameters through exact valuations.
//! The fixed points live in at most a quadratic extension, so each quantity
//! the theory needs (multiplier norms, Siegel radii, the factors of the
//! radius maps) is a valuation of an element of `ℚ(sqrt(D))` and is exact
//! exponent arithmetic over ℚ — half-integer exponents from ramified square
//! roots compare exactly, never through floats.
//!
//! The reduction works through the one-step distance identity
//!
//! ```text
//! |f(x) - x*|_p = |x - x*|_p · |A| / |B + (x - x*)|_p
//! ```
//!
//! with constants `A`, `B` attached to the fixed point `x*`, which turns a
//! p-adic orbit into a real orbit of a piecewise map of sphere radii: `psi`
//! about a double fixed point, `phi` about each of two simple ones. Inside
//! the critical radius every sphere is invariant (a Siegel disk); outside,
//! one application lands on the critical sphere; the critical sphere itself
//! needs the actual point to decide.
//!
//! Distances to an irrational fixed point are resolved without choosing an
//! embedding of `sqrt(D)`: the product of the two conjugate distances is
//! `|P(x)/b|_p` for the fixed-point polynomial `P`, their difference has
//! norm `|sqrt(D)/b|_p`, and the ultrametric decides how the product splits.
//! When it cannot split evenly the extension is split at `p` and the
//! per-root distances genuinely depend on the embedding; that case is
//! reported as an error rather than resolved by Hensel lifting.

use crate::map::{FixedPointSet, FixedPoints, MoebiusMap, PoleHit, WhichFixed};
use crate::quad::Algebraic;
use crate::rational::Rational;
use crate::valuation::{algebraic_val, is_prime, padic_val, PVal};
use serde::Serialize;
use std::cmp::Ordering;
use std::fmt;

#[derive(Debug, Clone, PartialEq)]
pub enum PadicError {
    NotPrime(u64),
    /// The operation applies to the other discriminant case.
    CaseMismatch {
        op: &'static str,
        needs: &'static str,
    },
    /// The orbit hit the pole (the start is a bad point).
    Pole(PoleHit),
    /// The start coincides with the fixed point excluded by the theorem.
    StartAtExcludedPoint,
    /// `sqrt(D)` exists in `ℚ_p` (though not in `ℚ`), so the two conjugate
    /// distances differ and assigning them to the formal roots would need an
    /// embedding. Carries the unordered pair of resolved norms.
    AmbiguousSplit {
        step: usize,
        distances: Box<(PVal, PVal)>,
    },
    /// A radius map was stepped on its critical sphere in symbolic mode;
    /// the value there depends on the actual point, not just the radius.
    NeedsStarValue,
    /// `phi` with equal factors has no attracting/repelling dichotomy;
    /// that regime belongs to the double-root analysis.
    EqualRadiusFactors,
    /// A theorem hypothesis fails for these parameters.
    Condition(ConditionFails),
}

impl fmt::Display for PadicError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PadicError::NotPrime(p) => write!(f, "{p} is not prime"),
            PadicError::CaseMismatch { op, needs } => write!(f, "{op} requires {needs}"),
            PadicError::Pole(hit) => write!(f, "{hit}"),
            PadicError::StartAtExcludedPoint => {
                write!(f, "start coincides with the excluded fixed point")
            }
            PadicError::AmbiguousSplit { step, distances } => write!(
                f,
                "distances to the conjugate fixed points differ at step {step} ({} vs {}); \
                 sqrt(D) embeds into Q_p and the assignment needs an embedding",
                distances.0, distances.1
            ),
            PadicError::NeedsStarValue => write!(
                f,
                "radius map stepped on its critical sphere without a star value"
            ),
            PadicError::EqualRadiusFactors => {
                write!(
                    f,
                    "phi limit undefined for equal factors (double-root regime)"
                )
            }
            PadicError::Condition(c) => write!(f, "condition fails: {c}"),
        }
    }
}

impl std::error::Error for PadicError {}

/// Which clause of a theorem hypothesis failed, with the offending norm.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ConditionFails {
    /// `|f'(x_i)|_p ≠ 1` where the Siegel condition needs indifference.
    NotIndifferent { which: WhichFixed, norm: PVal },
    /// `|b/sqrt(c-ab)|_p ≥ 1`.
    BNotSmall { norm: PVal },
    /// `|(c-ab)/(b x + c)²|_p ≥ 1` where the basin condition needs attraction.
    NotAttracting { which: WhichFixed, norm: PVal },
    /// `|b/(b x + c)|_p ≥ 1`.
    BOverDenomNotSmall { norm: PVal },
}

impl fmt::Display for ConditionFails {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ConditionFails::NotIndifferent { which, norm } => {
                write!(f, "multiplier at {which:?} has norm {norm}, not 1")
            }
            ConditionFails::BNotSmall { norm } => {
                write!(f, "|b/sqrt(c-ab)|_p = {norm} is not < 1")
            }
            ConditionFails::NotAttracting { which, norm } => {
                write!(f, "multiplier at {which:?} has norm {norm}, not < 1")
            }
            ConditionFails::BOverDenomNotSmall { norm } => {
                write!(f, "|b/(b x + c)|_p = {norm} is not < 1")
            }
        }
    }
}

/// A map with rational parameters viewed over `ℚ_p`, with the fixed-point
/// data and every valuation the theory needs precomputed.
#[derive(Clone, Debug)]
pub struct PadicContext {
    p: u64,
    map: MoebiusMap<Rational>,
    fixed: FixedPointSet,
    alpha: Algebraic,
    beta: Algebraic,
    val_alpha: PVal,
    val_beta: PVal,
    val_b: PVal,
    val_c_minus_ab: PVal,
    /// `v(sqrt(D)) = v(D)/2`; norm zero when `D = 0`.
    val_sqrt_d: PVal,
}

impl PadicContext {
    pub fn new(map: MoebiusMap<Rational>, p: u64) -> Result<Self, PadicError> {
        if !is_prime(p) {
            return Err(PadicError::NotPrime(p));
        }
        let fixed = map.fixed_points();
        let (alpha, beta) = map.alpha_beta();
        let c_minus_ab = map.c_minus_ab();
        debug_assert_eq!(&alpha * &beta, Algebraic::Rational(c_minus_ab.clone()));
        debug_assert_eq!(
            &alpha + &beta,
            Algebraic::Rational(&Rational::one() + map.c())
        );
        let val_alpha =
            algebraic_val(&alpha, p).expect("prime checked, D non-square by construction");
        let val_beta =
            algebraic_val(&beta, p).expect("prime checked, D non-square by construction");
        let val_b = padic_val(map.b(), p).expect("prime checked");
        let val_c_minus_ab = padic_val(&c_minus_ab, p).expect("prime checked");
        let val_sqrt_d = padic_val(&fixed.discriminant, p)
            .expect("prime checked")
            .pow_scaled(&Rational::new(1, 2));
        assert_eq!(
            val_alpha.mul(&val_beta),
            val_c_minus_ab,
            "valuation multiplicativity v(alpha) + v(beta) = v(c - ab) violated"
        );
        Ok(PadicContext {
            p,
            map,
            fixed,
            alpha,
            beta,
            val_alpha,
            val_beta,
            val_b,
            val_c_minus_ab,
            val_sqrt_d,
        })
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn map(&self) -> &MoebiusMap<Rational> {
        &self.map
    }

    pub fn fixed(&self) -> &FixedPointSet {
        &self.fixed
    }

    pub fn alpha(&self) -> &Algebraic {
        &self.alpha
    }

    pub fn beta(&self) -> &Algebraic {
        &self.beta
    }

    pub fn val_alpha(&self) -> &PVal {
        &self.val_alpha
    }

    pub fn val_beta(&self) -> &PVal {
        &self.val_beta
    }

    fn is_double_root(&self) -> bool {
        matches!(self.fixed.points, FixedPoints::Double { .. })
    }

    /// `v(b x* + c)` for the chosen fixed point: `alpha` at `x1`, `beta` at
    /// `x2`, `(1+c)/2` at the double root.
    fn denom_val(&self, which: WhichFixed) -> Result<PVal, PadicError> {
        match (&self.fixed.points, which) {
            (FixedPoints::Two { .. }, WhichFixed::X1) => Ok(self.val_alpha.clone()),
            (FixedPoints::Two { .. }, WhichFixed::X2) => Ok(self.val_beta.clone()),
            (FixedPoints::Double { .. }, WhichFixed::Unique) => {
                let half_sum = &(&Rational::one() + self.map.c()) * &Rational::new(1, 2);
                Ok(padic_val(&half_sum, self.p).expect("prime checked"))
            }
            (FixedPoints::Two { .. }, WhichFixed::Unique) => Err(PadicError::CaseMismatch {
                op: "unique fixed point",
                needs: "D = 0",
            }),
            (FixedPoints::Double { .. }, _) => Err(PadicError::CaseMismatch {
                op: "simple fixed point",
                needs: "D != 0",
            }),
        }
    }
}

/// The p-adic size of the multiplier `f'(x*) = (c - ab)/(b x* + c)²`
/// classifies the fixed point.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum PointKind {
    Attracting,
    Indifferent,
    Repelling,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FixedPointCharacter {
    pub point: WhichFixed,
    pub multiplier_norm: PVal,
    pub kind: PointKind,
}

pub fn fp_character(
    ctx: &PadicContext,
    which: WhichFixed,
) -> Result<FixedPointCharacter, PadicError> {
    let multiplier_norm = ctx.val_c_minus_ab.div(&ctx.denom_val(which)?.pow(2));
    let exp = multiplier_norm
        .finite_exponent()
        .expect("multiplier of a valid map is nonzero");
    let kind = match exp.cmp(&Rational::zero()) {
        Ordering::Greater => PointKind::Attracting,
        Ordering::Equal => PointKind::Indifferent,
        Ordering::Less => PointKind::Repelling,
    };
    Ok(FixedPointCharacter {
        point: which,
        multiplier_norm,
        kind,
    })
}

/// Maximal Siegel disk statement `SI = U_radius(center)`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SiegelReport {
    pub case: SiegelCase,
    /// Every sphere of smaller radius about the center is invariant; points
    /// outside the disk land on its bounding sphere within one step (within
    /// two from the bounding sphere itself).
    pub radius: PVal,
    /// How the two disks relate (two-fixed-point case only).
    pub relation: Option<SiegelRelation>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(rename_all = "snake_case")]
#[allow(clippy::large_enum_variant)]
pub enum SiegelCase {
    /// `D = 0`: disk about the double fixed point.
    Unique { center: Rational },
    /// `D ≠ 0` under the ramified condition: disks of the same radius about
    /// both fixed points.
    Pair { x1: Algebraic, x2: Algebraic },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum SiegelRelation {
    Disjoint,
    Equal,
}

/// Siegel disk about the double fixed point `x0 = (1-c)/(2b)`: radius
/// `|(c+1)/(2b)|_p`, always applicable when `D = 0` (the multiplier is
/// exactly 1 there).
pub fn siegel_unique(ctx: &PadicContext) -> Result<SiegelReport, PadicError> {
    let FixedPoints::Double { x0 } = &ctx.fixed.points else {
        return Err(PadicError::CaseMismatch {
            op: "siegel_unique",
            needs: "D = 0",
        });
    };
    let c_plus_1 = &Rational::one() + ctx.map.c();
    let two_b = Rational::integer(2) * ctx.map.b();
    let radius = padic_val(&(&c_plus_1 / &two_b), ctx.p).expect("prime checked");
    debug_assert!(
        !radius.is_zero_norm(),
        "c = -1 with D = 0 contradicts c != ab"
    );
    Ok(SiegelReport {
        case: SiegelCase::Unique { center: x0.clone() },
        radius,
        relation: None,
    })
}

/// Siegel disks about two simple fixed points, under the condition
/// `|b/sqrt(c-ab)|_p < 1` with both multipliers indifferent. The radius is
/// `|sqrt(c-ab)/b|_p` for both; the disks are disjoint when
/// `|sqrt(D)/b|_p` reaches that radius and equal otherwise.
pub fn siegel_known(ctx: &PadicContext) -> Result<SiegelReport, PadicError> {
    let FixedPoints::Two { x1, x2 } = &ctx.fixed.points else {
        return Err(PadicError::CaseMismatch {
            op: "siegel_known",
            needs: "D != 0",
        });
    };
    for which in [WhichFixed::X1, WhichFixed::X2] {
        let ch = fp_character(ctx, which)?;
        if ch.kind != PointKind::Indifferent {
            return Err(PadicError::Condition(ConditionFails::NotIndifferent {
                which,
                norm: ch.multiplier_norm,
            }));
        }
    }
    let val_sqrt_c_minus_ab = ctx.val_c_minus_ab.pow_scaled(&Rational::new(1, 2));
    let b_ratio = ctx.val_b.div(&val_sqrt_c_minus_ab);
    let positive = b_ratio
        .finite_exponent()
        .map(Rational::is_positive)
        .unwrap_or(false);
    if !positive {
        return Err(PadicError::Condition(ConditionFails::BNotSmall {
            norm: b_ratio,
        }));
    }
    let radius = val_sqrt_c_minus_ab.div(&ctx.val_b);
    let separation = ctx.val_sqrt_d.div(&ctx.val_b);
    let relation = if separation.cmp_norm(&radius) != Ordering::Less {
        SiegelRelation::Disjoint
    } else {
        SiegelRelation::Equal
    };
    Ok(SiegelReport {
        case: SiegelCase::Pair {
            x1: x1.clone(),
            x2: x2.clone(),
        },
        radius,
        relation: Some(relation),
    })
}

/// Basin statement for one fixed point: under the condition
/// `|(c-ab)/(b x + c)²|_p < 1` and `|b/(b x + c)|_p < 1` the basin is the
/// whole field minus the pole (with its preimages) and the other fixed
/// point, which both sit on the single exceptional sphere.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BasinReport {
    pub attractor: WhichFixed,
    pub attractor_point: Algebraic,
    pub excluded_pole: Rational,
    pub excluded_fixed: Algebraic,
    /// Radius `1 + δ₂ = |(b x + c)/b|_p` of the sphere about the attractor
    /// carrying the excluded points.
    pub exceptional_sphere: PVal,
}

pub fn basin_check(ctx: &PadicContext, which: WhichFixed) -> Result<BasinReport, PadicError> {
    let FixedPoints::Two { .. } = &ctx.fixed.points else {
        return Err(PadicError::CaseMismatch {
            op: "basin_check",
            needs: "D != 0",
        });
    };
    let ch = fp_character(ctx, which)?;
    if ch.kind != PointKind::Attracting {
        return Err(PadicError::Condition(ConditionFails::NotAttracting {
            which,
            norm: ch.multiplier_norm,
        }));
    }
    let denom_val = ctx.denom_val(which)?;
    let b_ratio = ctx.val_b.div(&denom_val);
    let positive = b_ratio
        .finite_exponent()
        .map(Rational::is_positive)
        .unwrap_or(false);
    if !positive {
        return Err(PadicError::Condition(ConditionFails::BOverDenomNotSmall {
            norm: b_ratio,
        }));
    }
    let other = match which {
        WhichFixed::X1 => WhichFixed::X2,
        WhichFixed::X2 => WhichFixed::X1,
        WhichFixed::Unique => unreachable!("two-fixed-point case checked above"),
    };
    Ok(BasinReport {
        attractor: which,
        attractor_point: ctx.fixed.get(which).expect("two fixed points"),
        excluded_pole: ctx.map.pole(),
        excluded_fixed: ctx.fixed.get(other).expect("two fixed points"),
        exceptional_sphere: denom_val.div(&ctx.val_b),
    })
}

/// Value taken on the critical sphere of a radius map.
///
/// The theory defines it both as an unknown bounded below (for reasoning
/// about all orbits at once) and as `|f(x) - x*|_p` of a concrete point;
/// symbolic mode refuses to step on the critical sphere.
#[derive(Debug, Clone, PartialEq)]
pub enum StarValue {
    Symbolic,
    Known(PVal),
}

/// One-step radius map about the double fixed point:
///
/// ```text
/// psi(r) = r      for r < alpha
///        = alpha* for r = alpha   (alpha* >= alpha)
///        = alpha  for r > alpha
/// ```
#[derive(Debug, Clone, PartialEq)]
pub struct RadiusMapPsi {
    pub alpha: PVal,
    pub alpha_star: StarValue,
}

impl RadiusMapPsi {
    /// `alpha = |(c+1)/(2b)|_p`, symbolic star.
    pub fn from_context(ctx: &PadicContext) -> Result<Self, PadicError> {
        Ok(RadiusMapPsi {
            alpha: siegel_unique(ctx)?.radius,
            alpha_star: StarValue::Symbolic,
        })
    }

    pub fn with_star(mut self, star: PVal) -> Self {
        assert!(
            star.cmp_norm(&self.alpha) != Ordering::Less,
            "alpha* must be >= alpha"
        );
        self.alpha_star = StarValue::Known(star);
        self
    }

    pub fn step(&self, r: &PVal) -> Result<PVal, PadicError> {
        match r.cmp_norm(&self.alpha) {
            Ordering::Less => Ok(r.clone()),
            Ordering::Greater => Ok(self.alpha.clone()),
            Ordering::Equal => match &self.alpha_star {
                StarValue::Known(star) => Ok(star.clone()),
                StarValue::Symbolic => Err(PadicError::NeedsStarValue),
            },
        }
    }
}

/// One-step radius map about a simple fixed point:
///
/// ```text
/// phi(r) = (alpha/beta)·r for r < beta
///        = beta*          for r = beta   (beta* >= alpha)
///        = alpha          for r > beta
/// ```
#[derive(Debug, Clone, PartialEq)]
pub struct RadiusMapPhi {
    pub alpha: PVal,
    pub beta: PVal,
    pub beta_star: StarValue,
}

impl RadiusMapPhi {
    /// Factors about the chosen fixed point: `alpha_i = |(1 - b x_i)/b|_p`
    /// and `beta_i = |(b x_i + c)/b|_p`, which through the pairing
    /// identities are `|beta/b|, |alpha/b|` at `x1` and `|alpha/b|, |beta/b|`
    /// at `x2`.
    pub fn from_context(ctx: &PadicContext, which: WhichFixed) -> Result<Self, PadicError> {
        let FixedPoints::Two { .. } = &ctx.fixed.points else {
            return Err(PadicError::CaseMismatch {
                op: "phi radius map",
                needs: "D != 0",
            });
        };
        let (va, vb) = match which {
            WhichFixed::X1 => (&ctx.val_beta, &ctx.val_alpha),
            WhichFixed::X2 => (&ctx.val_alpha, &ctx.val_beta),
            WhichFixed::Unique => {
                return Err(PadicError::CaseMismatch {
                    op: "phi radius map",
                    needs: "a simple fixed point",
                })
            }
        };
        Ok(RadiusMapPhi {
            alpha: va.div(&ctx.val_b),
            beta: vb.div(&ctx.val_b),
            beta_star: StarValue::Symbolic,
        })
    }

    pub fn with_star(mut self, star: PVal) -> Self {
        assert!(
            star.cmp_norm(&self.alpha) != Ordering::Less,
            "beta* must be >= alpha"
        );
        self.beta_star = StarValue::Known(star);
        self
    }

    pub fn step(&self, r: &PVal) -> Result<PVal, PadicError> {
        match r.cmp_norm(&self.beta) {
            Ordering::Less => Ok(self.alpha.div(&self.beta).mul(r)),
            Ordering::Greater => Ok(self.alpha.clone()),
            Ordering::Equal => match &self.beta_star {
                StarValue::Known(star) => Ok(star.clone()),
                StarValue::Symbolic => Err(PadicError::NeedsStarValue),
            },
        }
    }

    /// Fixed set and limit of the iterated radius map (`alpha ≠ beta`):
    /// every radius tends to `0` when `alpha < beta` and to `alpha` when
    /// `alpha > beta`.
    pub fn limit(&self) -> Result<PhiLimit, PadicError> {
        let p = self.alpha.prime();
        match self.alpha.cmp_norm(&self.beta) {
            Ordering::Equal => Err(PadicError::EqualRadiusFactors),
            Ordering::Less => {
                let mut fixed_set = vec![PVal::infinite(p)];
                if let StarValue::Known(star) = &self.beta_star {
                    if *star == self.beta {
                        fixed_set.push(star.clone());
                    }
                }
                Ok(PhiLimit {
                    limit: PVal::infinite(p),
                    fixed_set,
                })
            }
            Ordering::Greater => Ok(PhiLimit {
                limit: self.alpha.clone(),
                fixed_set: vec![PVal::infinite(p), self.alpha.clone()],
            }),
        }
    }
}

/// Limit descriptor of the iterated `phi`; norm zero encodes the limit 0.
#[derive(Debug, Clone, PartialEq)]
pub struct PhiLimit {
    pub limit: PVal,
    pub fixed_set: Vec<PVal>,
}

/// Exact radii `|f^k(x) - x*|_p` for `k = 0..=n`.
///
/// For a rational fixed point the distances are direct valuations. For a
/// conjugate (quadratic) pair they are resolved by the product/difference
/// method; when the ultrametric forces both conjugate distances equal the
/// common value is returned for both roots, and when they differ the
/// extension is split at `p` and [`PadicError::AmbiguousSplit`] is returned.
///
/// Each step is checked against the matching radius map: away from the
/// critical sphere the next radius must equal the map's value exactly, and
/// on the critical sphere it must respect the star bound. This is the
/// executable form of the one-step distance identity.
pub fn radius_trajectory(
    ctx: &PadicContext,
    x: &Rational,
    which: WhichFixed,
    n: usize,
) -> Result<Vec<PVal>, PadicError> {
    let orbit = ctx.map.orbit(x, n).map_err(PadicError::Pole)?;
    let radii = match (&ctx.fixed.points, which) {
        (FixedPoints::Double { x0 }, WhichFixed::Unique) => orbit
            .iter()
            .map(|y| padic_val(&(y - x0), ctx.p).expect("prime checked"))
            .collect::<Vec<_>>(),
        (FixedPoints::Two { x1, x2 }, WhichFixed::X1 | WhichFixed::X2) => {
            let (target, other) = if which == WhichFixed::X1 {
                (x1, x2)
            } else {
                (x2, x1)
            };
            match target.as_rational() {
                Some(t) => {
                    let o = other.as_rational().expect("roots are conjugate");
                    if x == o {
                        return Err(PadicError::StartAtExcludedPoint);
                    }
                    orbit
                        .iter()
                        .map(|y| padic_val(&(y - t), ctx.p).expect("prime checked"))
                        .collect()
                }
                None => conjugate_distances(ctx, &orbit)?,
            }
        }
        (FixedPoints::Two { .. }, WhichFixed::Unique) => {
            return Err(PadicError::CaseMismatch {
                op: "radius_trajectory about the double root",
                needs: "D = 0",
            })
        }
        (FixedPoints::Double { .. }, _) => {
            return Err(PadicError::CaseMismatch {
                op: "radius_trajectory about a simple fixed point",
                needs: "D != 0",
            })
        }
    };

    // Lemma-backed consistency: the radius sequence must be an orbit of the
    // matching radius map.
    if ctx.is_double_root() {
        let psi = RadiusMapPsi::from_context(ctx)?;
        check_radius_map(&radii, &psi.alpha, |r| psi.step(r), &psi.alpha);
    } else {
        let phi = RadiusMapPhi::from_context(ctx, which)?;
        check_radius_map(&radii, &phi.beta, |r| phi.step(r), &phi.alpha);
    }
    Ok(radii)
}

fn check_radius_map(
    radii: &[PVal],
    critical: &PVal,
    step: impl Fn(&PVal) -> Result<PVal, PadicError>,
    floor: &PVal,
) {
    for (k, pair) in radii.windows(2).enumerate() {
        let (r, next) = (&pair[0], &pair[1]);
        if r.cmp_norm(critical) == Ordering::Equal {
            assert!(
                next.cmp_norm(floor) != Ordering::Less,
                "radius map violated on the critical sphere at step {k}: {next} < {floor}"
            );
        } else {
            let expected = step(r).expect("off-critical step needs no star value");
            assert!(
                *next == expected,
                "radius map violated at step {k}: got {next}, expected {expected}"
            );
        }
    }
}

/// Distances from rational orbit points to the conjugate pair of roots,
/// through `|y - x1|·|y - x2| = |P(y)/b|_p` and `|x1 - x2| = |sqrt(D)/b|_p`.
fn conjugate_distances(ctx: &PadicContext, orbit: &[Rational]) -> Result<Vec<PVal>, PadicError> {
    let b = ctx.map.b();
    let c_minus_1 = ctx.map.c() - &Rational::one();
    let sep = ctx.val_sqrt_d.div(&ctx.val_b); // |x1 - x2|_p
    orbit
        .iter()
        .enumerate()
        .map(|(step, y)| {
            // P(y)/b = y² + ((c-1) y - a)/b = (y - x1)(y - x2)
            let poly = &(&(b * &(y * y)) + &(&c_minus_1 * y)) - ctx.map.a();
            let product = padic_val(&(&poly / b), ctx.p).expect("prime checked");
            // Equal split: both distances are the square root of the product.
            // The ultrametric forces this exactly when that root reaches the
            // separation |x1 - x2|; a strictly smaller root means the two
            // factors are |x1 - x2| and product/|x1 - x2|, one per embedding.
            let shared = product.pow_scaled(&Rational::new(1, 2));
            if shared.cmp_norm(&sep) == Ordering::Less {
                let far = sep.clone();
                let near = product.div(&sep);
                return Err(PadicError::AmbiguousSplit {
                    step,
                    distances: Box::new((far, near)),
                });
            }
            Ok(shared)
        })
        .collect()
}

/// Outcome of the Siegel analysis attached to an indifferent verdict.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(rename_all = "snake_case", tag = "status", content = "detail")]
#[allow(clippy::large_enum_variant)]
pub enum SiegelOutcome {
    Disk(SiegelReport),
    ConditionFails(ConditionFails),
}

/// Limit behaviour of p-adic orbits outside the bad set.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(rename_all = "snake_case", tag = "verdict")]
#[allow(clippy::large_enum_variant)]
pub enum PadicClassification {
    /// Some `K_q = 0`: every point outside the bad set is q-periodic,
    /// independent of the field.
    GloballyPeriodic { q: u32 },
    /// `|alpha/beta|_p ≠ 1`: every orbit outside the exclusions converges
    /// to this fixed point.
    ConvergesTo { which: WhichFixed, point: Algebraic },
    /// `|alpha/beta|_p = 1` (including every irrational-`sqrt(D)` case and
    /// the double root): orbits move on invariant spheres, no convergence;
    /// the Siegel analysis describes the disks.
    IndifferentSiegel { siegel: SiegelOutcome },
}

/// Classifies p-adic orbits: the exact `K_q` scan decides global
/// periodicity first; otherwise the exponent comparison of `alpha` and
/// `beta` decides attraction, and equal norms land in the Siegel regime.
///
/// Conjugate (irrational) multipliers always have equal norms, so genuine
/// p-adic attraction happens only with a rational `sqrt(D)`. The double
/// root has multiplier exactly 1 and is therefore always a Siegel case:
/// its orbit radii are eventually periodic, not convergent.
pub fn classify_padic(ctx: &PadicContext, qmax: u32) -> PadicClassification {
    if let Some(q) = ctx.map.min_period(qmax) {
        return PadicClassification::GloballyPeriodic { q };
    }
    match &ctx.fixed.points {
        FixedPoints::Double { .. } => PadicClassification::IndifferentSiegel {
            siegel: SiegelOutcome::Disk(siegel_unique(ctx).expect("double root")),
        },
        FixedPoints::Two { x1, x2 } => match ctx.val_alpha.cmp_norm(&ctx.val_beta) {
            Ordering::Less => PadicClassification::ConvergesTo {
                which: WhichFixed::X2,
                point: x2.clone(),
            },
            Ordering::Greater => PadicClassification::ConvergesTo {
                which: WhichFixed::X1,
                point: x1.clone(),
            },
            Ordering::Equal => PadicClassification::IndifferentSiegel {
                siegel: match siegel_known(ctx) {
                    Ok(report) => SiegelOutcome::Disk(report),
                    Err(PadicError::Condition(cf)) => SiegelOutcome::ConditionFails(cf),
                    Err(other) => unreachable!("unexpected siegel error: {other}"),
                },
            },
        },
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::valuation::ValExp;

    fn r(n: i64, d: i64) -> Rational {
        Rational::new(n, d)
    }

    fn ctx(a: i64, b: i64, c: i64, p: u64) -> PadicContext {
        let map = MoebiusMap::new(
            Rational::integer(a),
            Rational::integer(b),
            Rational::integer(c),
        )
        .unwrap();
        PadicContext::new(map, p).unwrap()
    }

    #[test]
    fn context_rejects_composite_p() {
        let map = MoebiusMap::new(r(1, 1), r(2, 1), r(3, 1)).unwrap();
        assert!(matches!(
            PadicContext::new(map, 6),
            Err(PadicError::NotPrime(6))
        ));
    }

    #[test]
    fn double_root_is_indifferent() {
        for p in [2u64, 3, 5] {
            let ch = fp_character(&ctx(1, -1, 3, p), WhichFixed::Unique).unwrap();
            assert_eq!(ch.kind, PointKind::Indifferent);
            assert_eq!(ch.multiplier_norm, PVal::unit(p));
        }
    }

    #[test]
    fn attracting_and_repelling_pair() {
        let c = ctx(0, 1, 5, 5);
        let ch1 = fp_character(&c, WhichFixed::X1).unwrap();
        assert_eq!(ch1.kind, PointKind::Repelling);
        assert_eq!(ch1.multiplier_norm, PVal::finite(5, r(-1, 1)));
        let ch2 = fp_character(&c, WhichFixed::X2).unwrap();
        assert_eq!(ch2.kind, PointKind::Attracting);
        assert_eq!(ch2.multiplier_norm, PVal::finite(5, r(1, 1)));
    }

    #[test]
    fn siegel_unique_radii() {
        // (1,-1,3): x0 = 1, (c+1)/(2b) = -2
        assert_eq!(
            siegel_unique(&ctx(1, -1, 3, 2)).unwrap().radius,
            PVal::finite(2, r(1, 1))
        );
        assert_eq!(
            siegel_unique(&ctx(1, -1, 3, 3)).unwrap().radius,
            PVal::unit(3)
        );
        assert_eq!(
            siegel_unique(&ctx(1, -1, 3, 5)).unwrap().radius,
            PVal::unit(5)
        );
        let report = siegel_unique(&ctx(1, -1, 3, 2)).unwrap();
        assert_eq!(
            report.case,
            SiegelCase::Unique {
                center: Rational::one()
            }
        );
    }

    #[test]
    fn siegel_unique_needs_double_root() {
        assert!(matches!(
            siegel_unique(&ctx(1, 2, 3, 5)),
            Err(PadicError::CaseMismatch { .. })
        ));
    }

    #[test]
    fn siegel_known_ramified_example() {
        // (1,3,1) at p = 3: |b/sqrt(c-ab)| = 1/3, radius 3, disks equal
        let report = siegel_known(&ctx(1, 3, 1, 3)).unwrap();
        assert_eq!(report.radius, PVal::finite(3, r(-1, 1)));
        assert_eq!(report.relation, Some(SiegelRelation::Equal));
    }

    #[test]
    fn siegel_known_rejects_non_indifferent() {
        assert_eq!(
            siegel_known(&ctx(0, 1, 5, 5)),
            Err(PadicError::Condition(ConditionFails::NotIndifferent {
                which: WhichFixed::X1,
                norm: PVal::finite(5, r(-1, 1)),
            }))
        );
    }

    #[test]
    fn siegel_known_requires_small_b() {
        // (1,2,3) at p = 5: everything is a unit, |b/sqrt(c-ab)| = 1
        assert_eq!(
            siegel_known(&ctx(1, 2, 3, 5)),
            Err(PadicError::Condition(ConditionFails::BNotSmall {
                norm: PVal::unit(5),
            }))
        );
    }

    #[test]
    fn basin_condition_strictly_stronger_than_attraction() {
        // x2 = 1-p is attracting for (0,1,p) but b x2 + c = 1 breaks the
        // second clause
        assert_eq!(
            basin_check(&ctx(0, 1, 5, 5), WhichFixed::X2),
            Err(PadicError::Condition(ConditionFails::BOverDenomNotSmall {
                norm: PVal::unit(5),
            }))
        );
    }

    #[test]
    fn basin_rejects_non_attracting_root() {
        assert!(matches!(
            basin_check(&ctx(0, 1, 5, 5), WhichFixed::X1),
            Err(PadicError::Condition(ConditionFails::NotAttracting { .. }))
        ));
        // (3,1,0) at p = 3: both roots have valuation 1/2, multiplier is
        // indifferent, so the first clause already fails
        assert!(matches!(
            basin_check(&ctx(3, 1, 0, 3), WhichFixed::X1),
            Err(PadicError::Condition(ConditionFails::NotAttracting { .. }))
        ));
    }

    #[test]
    fn basin_holds_with_small_b() {
        // (0,5,5): f(x) = x/(5x+5), x1 = 0 repelling, x2 = -4/5 attracting;
        // alpha = 5, beta = b x2 + c = 1, so both clauses hold at x2.
        let c = ctx(0, 5, 5, 5);
        let report = basin_check(&c, WhichFixed::X2).unwrap();
        assert_eq!(report.attractor_point, Algebraic::Rational(r(-4, 5)));
        assert_eq!(report.excluded_fixed, Algebraic::Rational(Rational::zero()));
        assert_eq!(report.excluded_pole, r(-1, 1));
        // 1 + δ₂ = |(b x2 + c)/b| = |1/5| = 5; both excluded points sit there
        assert_eq!(report.exceptional_sphere, PVal::finite(5, r(-1, 1)));
    }

    #[test]
    fn psi_step_branches() {
        let c = ctx(1, -1, 3, 2);
        let psi = RadiusMapPsi::from_context(&c).unwrap();
        assert_eq!(psi.alpha, PVal::finite(2, r(1, 1)));
        let small = PVal::finite(2, r(3, 1));
        let large = PVal::unit(2);
        assert_eq!(psi.step(&small).unwrap(), small);
        assert_eq!(psi.step(&large).unwrap(), psi.alpha);
        assert_eq!(psi.step(&psi.alpha), Err(PadicError::NeedsStarValue));
        // with a concrete star > alpha: psi²(alpha) = alpha
        let star = PVal::finite(2, r(-1, 1));
        let with = psi.clone().with_star(star.clone());
        let once = with.step(&with.alpha).unwrap();
        assert_eq!(once, star);
        assert_eq!(with.step(&once).unwrap(), with.alpha);
    }

    #[test]
    fn phi_limit_branches() {
        let attracting = RadiusMapPhi {
            alpha: PVal::finite(5, r(1, 1)),
            beta: PVal::unit(5),
            beta_star: StarValue::Symbolic,
        };
        let lim = attracting.limit().unwrap();
        assert!(lim.limit.is_zero_norm());
        assert_eq!(lim.fixed_set, vec![PVal::infinite(5)]);

        let repelling = RadiusMapPhi {
            alpha: PVal::unit(5),
            beta: PVal::finite(5, r(1, 1)),
            beta_star: StarValue::Symbolic,
        };
        let lim = repelling.limit().unwrap();
        assert_eq!(lim.limit, PVal::unit(5));
        assert_eq!(lim.fixed_set, vec![PVal::infinite(5), PVal::unit(5)]);

        let degenerate = RadiusMapPhi {
            alpha: PVal::unit(5),
            beta: PVal::unit(5),
            beta_star: StarValue::Symbolic,
        };
        assert_eq!(degenerate.limit(), Err(PadicError::EqualRadiusFactors));
    }

    #[test]
    fn phi_fixed_set_keeps_matching_star() {
        let phi = RadiusMapPhi {
            alpha: PVal::finite(5, r(1, 1)),
            beta: PVal::unit(5),
            beta_star: StarValue::Symbolic,
        }
        .with_star(PVal::unit(5));
        let lim = phi.limit().unwrap();
        assert_eq!(lim.fixed_set, vec![PVal::infinite(5), PVal::unit(5)]);
    }

    #[test]
    fn radius_trajectory_attraction() {
        // orbit of 1 under x/(x+5) approaches x2 = -4 with exponent k+1
        let c = ctx(0, 1, 5, 5);
        let radii = radius_trajectory(&c, &Rational::one(), WhichFixed::X2, 6).unwrap();
        for (k, v) in radii.iter().enumerate() {
            assert_eq!(v, &PVal::finite(5, Rational::integer(k as i64 + 1)));
        }
    }

    #[test]
    fn radius_trajectory_siegel_sphere() {
        // (1,3,1) at p = 3 about x1: constant 3^(1/2)
        let c = ctx(1, 3, 1, 3);
        let radii = radius_trajectory(&c, &Rational::zero(), WhichFixed::X1, 20).unwrap();
        for v in &radii {
            assert_eq!(v, &PVal::finite(3, r(-1, 2)));
        }
    }

    #[test]
    fn radius_trajectory_at_fixed_point_is_zero() {
        let c = ctx(0, 1, 5, 5);
        let radii = radius_trajectory(&c, &r(-4, 1), WhichFixed::X2, 5).unwrap();
        assert!(radii.iter().all(PVal::is_zero_norm));
    }

    #[test]
    fn radius_trajectory_rejects_excluded_start() {
        let c = ctx(0, 1, 5, 5);
        assert_eq!(
            radius_trajectory(&c, &Rational::zero(), WhichFixed::X2, 5),
            Err(PadicError::StartAtExcludedPoint)
        );
    }

    #[test]
    fn radius_trajectory_detects_split_extension() {
        // D = 17 is a square in Q_2 (17 ≡ 1 mod 8) but not in Q, so the two
        // conjugate distances differ and no embedding is chosen.
        let c = ctx(4, 1, 2, 2);
        assert!(crate::rational::sqrt_rational(&c.fixed().discriminant).is_none());
        match radius_trajectory(&c, &Rational::zero(), WhichFixed::X1, 3) {
            Err(PadicError::AmbiguousSplit { step: 0, distances }) => {
                // product |P(0)/b| = |-4| = 2^(-2), separation |sqrt(17)| = 1
                assert_eq!(distances.0, PVal::unit(2));
                assert_eq!(distances.1, PVal::finite(2, r(2, 1)));
            }
            other => panic!("expected split ambiguity, got {other:?}"),
        }
        // the two resolved norms still multiply to the conjugate product
        let poly_val = padic_val(&r(-4, 1), 2).unwrap();
        match radius_trajectory(&c, &Rational::zero(), WhichFixed::X2, 3) {
            Err(PadicError::AmbiguousSplit { distances, .. }) => {
                assert_eq!(distances.0.mul(&distances.1), poly_val);
            }
            other => panic!("expected split ambiguity, got {other:?}"),
        }
    }

    #[test]
    fn radius_trajectory_reports_pole_starts() {
        let c = ctx(0, 1, 5, 5);
        let pole = c.map().pole();
        assert_eq!(
            radius_trajectory(&c, &pole, WhichFixed::X2, 3),
            Err(PadicError::Pole(PoleHit {
                kind: crate::scalar::PoleKind::Exact,
                step: 0
            }))
        );
    }

    #[test]
    fn classify_examples() {
        // attraction to x2 = 1 - p
        let cls = classify_padic(&ctx(0, 1, 5, 5), 64);
        assert_eq!(
            cls,
            PadicClassification::ConvergesTo {
                which: WhichFixed::X2,
                point: Algebraic::Rational(r(-4, 1)),
            }
        );
        // K_2 = 0, field-independent
        for p in [2u64, 3, 7] {
            assert_eq!(
                classify_padic(&ctx(1, 1, -1, p), 64),
                PadicClassification::GloballyPeriodic { q: 2 }
            );
        }
        // equal norms: Siegel regime with a concrete disk
        let cls = classify_padic(&ctx(1, 3, 1, 3), 64);
        let PadicClassification::IndifferentSiegel {
            siegel: SiegelOutcome::Disk(report),
        } = cls
        else {
            panic!("expected a Siegel disk")
        };
        assert_eq!(report.radius, PVal::finite(3, r(-1, 1)));
    }

    #[test]
    fn classify_double_root_is_siegel_not_convergent() {
        // The double root has multiplier exactly 1: orbit radii about it
        // are eventually periodic (checked below), so no convergence verdict.
        let c = ctx(1, -1, 3, 2);
        let cls = classify_padic(&c, 64);
        let PadicClassification::IndifferentSiegel {
            siegel: SiegelOutcome::Disk(report),
        } = cls
        else {
            panic!("expected the Siegel disk about the double root")
        };
        assert_eq!(report.radius, PVal::finite(2, r(1, 1)));
        // witness: |f^n(0) - 1|_2 cycles through norms >= 1/2 and is
        // unbounded along n = 2^k - 2, never tending to 0
        let radii = radius_trajectory(&c, &Rational::zero(), WhichFixed::Unique, 14).unwrap();
        assert_eq!(radii[0], PVal::unit(2)); // |0 - 1| = 1
        assert_eq!(radii[2], PVal::finite(2, r(-1, 1))); // n = 2: norm 2
        assert_eq!(radii[6], PVal::finite(2, r(-2, 1))); // n = 6: norm 4
        assert_eq!(radii[14], PVal::finite(2, r(-3, 1))); // n = 14: norm 8
    }

    #[test]
    fn context_multiplicativity_invariant() {
        for (a, b, c, p) in [
            (1i64, 2i64, 3i64, 5u64),
            (0, 1, 5, 5),
            (1, 3, 1, 3),
            (1, -1, 3, 2),
            (-1, 1, 0, 7),
        ] {
            let ctx = ctx(a, b, c, p);
            let ValExp::Finite(va) = ctx.val_alpha().exponent() else {
                panic!("alpha is nonzero")
            };
            let ValExp::Finite(vb) = ctx.val_beta().exponent() else {
                panic!("beta is nonzero")
            };
            let vc = padic_val(&ctx.map().c_minus_ab(), p).unwrap();
            assert_eq!(PVal::finite(p, va + vb), vc);
        }
    }
}
