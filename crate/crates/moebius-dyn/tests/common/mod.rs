//! Shared helpers for the integration suites: seeded random generation of
//! rationals and valid parameter triples.
#![allow(dead_code)] // each test binary uses a different subset

use moebius_dyn::{MoebiusMap, Rational};
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

pub const DEFAULT_SEED: u64 = 0x6d6f_6562_6975_7331;

/// Fixed default seed, overridable through `MOEBIUS_TEST_SEED` for
/// reproducing a failure under a different sample.
pub fn rng() -> StdRng {
    let seed = std::env::var("MOEBIUS_TEST_SEED")
        .ok()
        .and_then(|s| s.parse().ok())
        .unwrap_or(DEFAULT_SEED);
    StdRng::seed_from_u64(seed)
}

pub fn rat(n: i64, d: i64) -> Rational {
    Rational::new(n, d)
}

/// Random rational with numerator in `[-bound, bound]` and denominator in
/// `[1, bound]`.
pub fn random_rational(rng: &mut StdRng, bound: i64) -> Rational {
    Rational::new(rng.gen_range(-bound..=bound), rng.gen_range(1..=bound))
}

pub fn random_nonzero_rational(rng: &mut StdRng, bound: i64) -> Rational {
    loop {
        let r = random_rational(rng, bound);
        if !r.is_zero() {
            return r;
        }
    }
}

/// Random valid parameter triple (`b ≠ 0`, `c ≠ ab`).
pub fn random_map(rng: &mut StdRng, bound: i64) -> MoebiusMap<Rational> {
    loop {
        let a = random_rational(rng, bound);
        let b = random_rational(rng, bound);
        let c = random_rational(rng, bound);
        if let Ok(map) = MoebiusMap::new(a, b, c) {
            return map;
        }
    }
}

/// Random valid triple with rational fixed points: built from prescribed
/// rational roots `x1 ≠ x2`, so the discriminant is a perfect square.
pub fn random_square_discriminant_map(rng: &mut StdRng, bound: i64) -> MoebiusMap<Rational> {
    loop {
        let x1 = random_rational(rng, bound);
        let x2 = random_rational(rng, bound);
        if x1 == x2 {
            continue;
        }
        let b = random_nonzero_rational(rng, bound);
        // b(x - x1)(x - x2) = b x² + (c-1) x - a
        let c = &Rational::one() - &(&b * &(&x1 + &x2));
        let a = -&(&b * &(&x1 * &x2));
        if let Ok(map) = MoebiusMap::new(a, b, c) {
            return map;
        }
    }
}

/// Random start whose orbit is defined for at least `depth` steps.
pub fn random_clean_start(
    rng: &mut StdRng,
    map: &MoebiusMap<Rational>,
    depth: usize,
    bound: i64,
) -> Rational {
    let bad = map.bad_points(depth);
    loop {
        let x = random_rational(rng, bound);
        if !bad.contains(&x) {
            return x;
        }
    }
}
