#![allow(dead_code)]

use num_bigint::BigInt;
use num_rational::BigRational;
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use thompson_core::sample;
use thompson_core::{CirclePoint, Dyadic, PLMap};

pub fn q(n: i64, d: u64) -> Dyadic {
    Dyadic::q(n, d)
}

pub fn pt(n: i64, d: u64) -> CirclePoint {
    CirclePoint::new(&q(n, d))
}

pub fn rat(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn dyadic() -> impl Strategy<Value = Dyadic> {
    (-1000i64..1000, 0u32..12).prop_map(|(n, e)| Dyadic::new(n, e))
}

pub fn unit_dyadic() -> impl Strategy<Value = Dyadic> {
    (0i64..1024).prop_map(|n| Dyadic::new(n, 10))
}

pub fn f_elem() -> impl Strategy<Value = PLMap> {
    any::<u64>().prop_map(|s| sample::random_f(&mut rng(s), 7))
}

pub fn t_elem() -> impl Strategy<Value = PLMap> {
    any::<u64>().prop_map(|s| sample::random_t(&mut rng(s), 7))
}

/// All points `j / 2^bits` of `[0, 1)`.
pub fn grid(bits: u32) -> impl Iterator<Item = Dyadic> {
    (0..(1i64 << bits)).map(move |j| Dyadic::new(j, bits))
}
