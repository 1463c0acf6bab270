#![allow(dead_code)]

use num::{BigInt, BigRational};
use ramexp::{ArithTable, Exact};
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

pub fn rng(seed: u64) -> StdRng {
    StdRng::seed_from_u64(seed)
}

pub fn rational(num: i64, den: i64) -> Exact {
    BigRational::new(BigInt::from(num), BigInt::from(den))
}

/// Random exact table with small rational entries, roughly a quarter of them zero.
pub fn random_exact_table(rng: &mut StdRng, len: usize) -> ArithTable<Exact> {
    let values = (0..len)
        .map(|_| {
            if rng.gen_bool(0.25) {
                rational(0, 1)
            } else {
                rational(rng.gen_range(-9..=9), rng.gen_range(1..=7))
            }
        })
        .collect();
    ArithTable::new("random", values).unwrap()
}

pub fn table_from(values: &[(i64, i64)]) -> ArithTable<Exact> {
    ArithTable::new(
        "prop",
        values.iter().map(|&(p, q)| rational(p, q)).collect(),
    )
    .unwrap()
}

pub fn divisor_sum(fprime: &ArithTable<Exact>, n: usize, bound: usize) -> Exact {
    (1..=bound.min(n))
        .filter(|d| n.is_multiple_of(*d))
        .map(|d| fprime.as_slice()[d - 1].clone())
        .fold(rational(0, 1), |a, b| a + b)
}

pub fn to_float(t: &ArithTable<Exact>) -> ArithTable<f64> {
    t.map(ramexp::Scalar::to_f64)
}
