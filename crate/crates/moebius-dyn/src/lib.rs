//! Dynamics of the Möbius map `f(x) = (x + a)/(b x + c)` over the reals and
//! over p-adic fields, built on exact rational arithmetic.
//!
//! * [`rational`], [`quad`], [`valuation`] — the exact scalar layer:
//!   arbitrary-precision rationals, quadratic extension elements
//!   `u + v*sqrt(D)`, and p-adic valuations with exact rational exponents.
//! * [`map`] — the map object and its parameter algebra: application,
//!   inverse, fixed points, the multipliers `alpha`/`beta`, closed-form
//!   iterates, the periodicity scalars `K_q`, and the bad-point set.
//! * [`real`] — the three-way real classification (globally periodic /
//!   convergent / dense), the rotation angle of the complex-multiplier
//!   regime, and numeric orbit tooling with density histograms.
//! * [`padic`] — fixed-point characters, Siegel disks, basins of
//!   attraction, the radius maps `psi`/`phi`, exact radius trajectories and
//!   the p-adic classification.
//!
//! All values are immutable after construction and safe to share between
//! threads; every operation is a pure function of its inputs.

pub mod map;
pub mod padic;
pub mod quad;
pub mod rational;
pub mod real;
pub mod scalar;
pub mod valuation;

pub use map::{
    BadPointSet, BadPointTermination, CompositionCoeffs, FixedPointSet, FixedPoints, InverseMap,
    MapError, MoebiusMap, PoleHit, WhichFixed,
};
pub use padic::{
    basin_check, classify_padic, fp_character, radius_trajectory, siegel_known, siegel_unique,
    BasinReport, ConditionFails, FixedPointCharacter, PadicClassification, PadicContext,
    PadicError, PhiLimit, PointKind, RadiusMapPhi, RadiusMapPsi, SiegelCase, SiegelOutcome,
    SiegelRelation, SiegelReport, StarValue,
};
pub use quad::{Algebraic, QuadExt};
pub use rational::{sqrt_rational, ParseRationalError, Rational};
pub use real::{
    classify_real, density_histogram, limit_of_orbit, theta_of, Histogram, OrbitLimit,
    RealClassification, RealError, RealVerdict, Rotation, StallReason,
};
pub use scalar::{PoleKind, Scalar, FLOAT_POLE_GUARD};
pub use valuation::{algebraic_val, is_prime, padic_val, quad_val, PVal, ValError, ValExp};
