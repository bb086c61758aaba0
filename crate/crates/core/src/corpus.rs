//! Seeded random inputs for property suites. Every generator is a pure
//! function of its seed.

use num_bigint::BigInt;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::Result;
use crate::skew::{GModule, GTerm};
use crate::zpoly::ZPoly;

/// A cyclic divisor `F = p^mu * g * u` with known invariants.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DivisorSample {
    pub p: u64,
    pub f: ZPoly,
    pub mu: u32,
    pub lambda: usize,
}

fn distinguished(rng: &mut ChaCha8Rng, p: u64, lambda: usize) -> ZPoly {
    let p = p as i64;
    let mut c: Vec<i64> = (0..lambda).map(|_| p * rng.gen_range(-2..=2)).collect();
    c.push(1);
    ZPoly::from_i64s(&c)
}

fn unit(rng: &mut ChaCha8Rng, p: u64) -> ZPoly {
    let p = p as i64;
    let mut c0 = rng.gen_range(1..p);
    if rng.gen_bool(0.5) {
        c0 = -c0;
    }
    let deg = rng.gen_range(0..=2);
    let mut c = vec![c0];
    c.extend((0..deg).map(|_| rng.gen_range(-3..=3)));
    ZPoly::from_i64s(&c)
}

/// `count` divisors with `mu <= 2`, `lambda <= 5`, prime to `omega_level`.
pub fn divisors(seed: u64, p: u64, count: usize, level: u32) -> Vec<DivisorSample> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::with_capacity(count);
    while out.len() < count {
        let mu = rng.gen_range(0..=2u32);
        let lambda = rng.gen_range(0..=5usize);
        let g = distinguished(&mut rng, p, lambda);
        let u = unit(&mut rng, p);
        let f = (&g * &u).scale(&BigInt::from(p).pow(mu));
        if f.shares_factor_with_omega(p, level).is_none() {
            out.push(DivisorSample { p, f, mu, lambda });
        }
    }
    out
}

/// `(F, c)` pairs for `Lambda/(F) + Z/p^c` with `1 <= c <= 3`.
pub fn pseudo_null_pairs(seed: u64, p: u64, count: usize, level: u32) -> Vec<(ZPoly, u32)> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x9e37_79b9_7f4a_7c15);
    divisors(seed, p, count, level).into_iter().map(|s| (s.f, rng.gen_range(1..=3))).collect()
}

/// Small `Lambda(G)`-modules over `p = 3`, `u = 4`: at most two generators
/// and two relations, each relation with at most three terms.
pub fn gmodules(seed: u64, count: usize) -> Result<Vec<GModule>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|_| {
            let gens = rng.gen_range(1..=2usize);
            let rels = rng.gen_range(1..=2usize);
            let relations = (0..rels)
                .map(|_| {
                    (0..rng.gen_range(1..=3))
                        .map(|_| {
                            let mut coef = rng.gen_range(-4..=4i64);
                            if coef == 0 {
                                coef = 3;
                            }
                            GTerm::new(coef, vec![rng.gen_range(0..9)], rng.gen_range(0..3), rng.gen_range(0..gens))
                        })
                        .collect()
                })
                .collect();
            GModule::with_unit(3, 4, gens, relations)
        })
        .collect()
}
