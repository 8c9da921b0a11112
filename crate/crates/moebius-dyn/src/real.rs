//! Classification of real trajectories.
//!
//! For rational parameters, exactly one of three things happens to every
//! orbit that never hits a bad point:
//!
//! * some `K_q` vanishes and every such orbit is globally q-periodic;
//! * `D > 0` (two real fixed points) or `D = 0` (one): the orbit converges
//!   to a fixed point selected by the exact comparison of `|alpha|` and
//!   `|beta|` — equivalently the sign of `1 + c`, since
//!   `alpha² - beta² = (1+c)·sqrt(D)`;
//! * `D < 0`: `alpha` is complex with `|alpha| = sqrt(c - ab)` and argument
//!   `theta`; the orbit is conjugate to the circle rotation by `theta` and is
//!   dense in ℝ whenever no `K_q` vanishes.
//!
//! Whether `theta/π` is rational is never decided numerically: the exact
//! `K_q` scan is the sole periodicity decision procedure, and `Dense`
//! verdicts carry the scan bound that certifies them.

use crate::map::{FixedPoints, MoebiusMap, WhichFixed};
use crate::quad::Algebraic;
use crate::rational::Rational;
use crate::scalar::FLOAT_POLE_GUARD;
use std::cmp::Ordering;
use std::fmt;

/// Default bound for the `K_q` periodicity scan.
pub const DEFAULT_QMAX: u32 = 64;
/// Default step limit for numeric orbit convergence.
pub const DEFAULT_NMAX: usize = 100_000;
/// Default histogram shape.
pub const DEFAULT_BINS: usize = 40;
pub const DEFAULT_LO: f64 = -10.0;
pub const DEFAULT_HI: f64 = 10.0;

#[derive(Clone, Debug, PartialEq)]
pub struct RealClassification {
    pub verdict: RealVerdict,
    /// `|alpha|` against `|beta|`, present when `D > 0`.
    pub ratio_cmp: Option<Ordering>,
    /// Rotation angle `arg(alpha)`, present when `D < 0`.
    pub theta: Option<f64>,
}

#[derive(Clone, Debug, PartialEq)]
pub enum RealVerdict {
    /// `K_q = 0`: every point outside the bad set is q-periodic.
    GloballyPeriodic { q: u32 },
    /// Every orbit outside `Fix(f)` and the bad set converges to `point`.
    ConvergesTo { which: WhichFixed, point: Algebraic },
    /// `D < 0` and no `K_q = 0` for `q <= qmax_scanned`: dense orbit regime,
    /// certified only up to the scan bound.
    Dense { qmax_scanned: u32 },
}

pub fn classify_real(f: &MoebiusMap<Rational>, qmax: u32) -> RealClassification {
    let d = f.discriminant();
    let theta = d.is_negative().then(|| theta_of(f).expect("D < 0").theta);
    let ratio_cmp = d.is_positive().then(|| {
        // |alpha| > |beta| iff alpha² > beta² iff (1+c)·sqrt(D) > 0
        (&Rational::one() + f.c()).cmp(&Rational::zero())
    });

    if let Some(q) = f.min_period(qmax) {
        return RealClassification {
            verdict: RealVerdict::GloballyPeriodic { q },
            ratio_cmp,
            theta,
        };
    }

    let fps = f.fixed_points();
    let verdict = match &fps.points {
        FixedPoints::Double { x0 } => RealVerdict::ConvergesTo {
            which: WhichFixed::Unique,
            point: Algebraic::Rational(x0.clone()),
        },
        FixedPoints::Two { x1, x2 } => {
            if d.is_negative() {
                RealVerdict::Dense { qmax_scanned: qmax }
            } else {
                match ratio_cmp.expect("D > 0") {
                    Ordering::Greater => RealVerdict::ConvergesTo {
                        which: WhichFixed::X1,
                        point: x1.clone(),
                    },
                    Ordering::Less => RealVerdict::ConvergesTo {
                        which: WhichFixed::X2,
                        point: x2.clone(),
                    },
                    Ordering::Equal => {
                        unreachable!("|alpha| = |beta| with D > 0 means c = -1, i.e. K_2 = 0, caught by the scan")
                    }
                }
            }
        }
    };
    RealClassification {
        verdict,
        ratio_cmp,
        theta,
    }
}

/// Rotation data of the `D < 0` regime: `theta = arg(alpha)` and
/// `r = |alpha| = |beta| = sqrt(c - ab)`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Rotation {
    pub theta: f64,
    pub radius: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub enum RealError {
    /// The rotation angle only exists for `D < 0`.
    DiscriminantNotNegative(Rational),
}

impl fmt::Display for RealError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RealError::DiscriminantNotNegative(d) => {
                write!(f, "rotation angle requires D < 0, got D = {d}")
            }
        }
    }
}

impl std::error::Error for RealError {}

/// `theta = arctan(sqrt(-D)/(c+1))`, placed in the correct quadrant:
/// `arg(alpha)` lies in `(0, π)` since the imaginary part `sqrt(-D)/2` is
/// positive, so for `c + 1 < 0` the angle is `π - arctan(sqrt(-D)/|c+1|)`,
/// and `c = -1` gives a pure imaginary `alpha`, i.e. `θ = π/2`.
pub fn theta_of(f: &MoebiusMap<Rational>) -> Result<Rotation, RealError> {
    let d = f.discriminant();
    if !d.is_negative() {
        return Err(RealError::DiscriminantNotNegative(d));
    }
    let radius = f.c_minus_ab().to_f64().sqrt();
    let c_plus_1 = &Rational::one() + f.c();
    let root = (-&d).to_f64().sqrt();
    let theta = match c_plus_1.cmp(&Rational::zero()) {
        Ordering::Equal => std::f64::consts::FRAC_PI_2,
        Ordering::Greater => (root / c_plus_1.to_f64()).atan(),
        Ordering::Less => std::f64::consts::PI - (root / c_plus_1.to_f64().abs()).atan(),
    };
    Ok(Rotation { theta, radius })
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum OrbitLimit {
    Converged { value: f64, steps: usize },
    NotConverged { reason: StallReason },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum StallReason {
    /// The orbit entered the pole guard band at this step.
    NearPole {
        step: usize,
    },
    StepLimit,
}

/// Numeric confirmation of convergence: float iteration with a
/// successive-difference plus fixed-point-residual stopping test.
///
/// The `D = 0` case converges at rate `O(1/n)` rather than geometrically,
/// so there the successive-difference part is dropped and only the residual
/// `|f(x) - x| < 10·tol` decides.
pub fn limit_of_orbit(f: &MoebiusMap<Rational>, x0: f64, tol: f64, nmax: usize) -> OrbitLimit {
    assert!(tol > 0.0, "tolerance must be positive");
    let parabolic = f.discriminant().is_zero();
    let (a, b, c) = {
        let ff = f.to_float();
        (*ff.a(), *ff.b(), *ff.c())
    };
    let mut x = x0;
    for n in 1..=nmax {
        let den = b * x + c;
        if den.abs() < FLOAT_POLE_GUARD {
            return OrbitLimit::NotConverged {
                reason: StallReason::NearPole { step: n - 1 },
            };
        }
        let next = (x + a) / den;
        let den2 = b * next + c;
        if den2.abs() >= FLOAT_POLE_GUARD {
            let residual = ((next + a) / den2 - next).abs();
            let settled = if parabolic {
                residual < 10.0 * tol
            } else {
                (next - x).abs() < tol && residual < 10.0 * tol
            };
            if settled {
                return OrbitLimit::Converged {
                    value: next,
                    steps: n,
                };
            }
        }
        x = next;
    }
    OrbitLimit::NotConverged {
        reason: StallReason::StepLimit,
    }
}

/// Occupancy counts of a float orbit over `[lo, hi]`.
///
/// Each of the `n` produced points lands in exactly one of: a bin, the
/// below/above sinks, or the skip counter (near-pole and non-finite points).
#[derive(Clone, Debug, PartialEq)]
pub struct Histogram {
    pub lo: f64,
    pub hi: f64,
    pub counts: Vec<u64>,
    pub below: u64,
    pub above: u64,
    pub skips: u64,
    /// Number of orbit points produced (`n` as requested).
    pub samples: u64,
}

impl Histogram {
    pub fn bin_width(&self) -> f64 {
        (self.hi - self.lo) / self.counts.len() as f64
    }

    pub fn bin_edges(&self, i: usize) -> (f64, f64) {
        let w = self.bin_width();
        (self.lo + i as f64 * w, self.lo + (i + 1) as f64 * w)
    }

    pub fn total_binned(&self) -> u64 {
        self.counts.iter().sum()
    }

    pub fn empty_bins(&self) -> usize {
        self.counts.iter().filter(|&&c| c == 0).count()
    }

    pub fn nonempty_bins(&self) -> usize {
        self.counts.len() - self.empty_bins()
    }
}

/// Bins the orbit `f(x0), …, f^n(x0)` over `[lo, hi]`.
///
/// Pole passages do not end the orbit: an exact float pole produces an
/// infinity whose successor is taken as the projective continuation `1/b`,
/// and points in the guard band are counted as skips but iterated through.
pub fn density_histogram(
    f: &MoebiusMap<Rational>,
    x0: f64,
    n: usize,
    bins: usize,
    lo: f64,
    hi: f64,
) -> Histogram {
    assert!(bins >= 1, "need at least one bin");
    assert!(lo < hi, "empty histogram range");
    let (a, b, c) = {
        let ff = f.to_float();
        (*ff.a(), *ff.b(), *ff.c())
    };
    let width = (hi - lo) / bins as f64;
    let mut hist = Histogram {
        lo,
        hi,
        counts: vec![0; bins],
        below: 0,
        above: 0,
        skips: 0,
        samples: n as u64,
    };
    let mut x = x0;
    for _ in 0..n {
        let (next, skip) = if x.is_infinite() {
            (1.0 / b, false)
        } else {
            let den = b * x + c;
            if den.abs() < FLOAT_POLE_GUARD {
                ((x + a) / den, true)
            } else {
                ((x + a) / den, false)
            }
        };
        if skip || !next.is_finite() {
            hist.skips += 1;
        } else if next < lo {
            hist.below += 1;
        } else if next > hi {
            hist.above += 1;
        } else {
            let idx = (((next - lo) / width) as usize).min(bins - 1);
            hist.counts[idx] += 1;
        }
        x = next;
    }
    hist
}
