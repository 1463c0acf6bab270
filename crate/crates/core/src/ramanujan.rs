//! Ramanujan sums `c_r(n)`.
//!
//! The production path is the Möbius–divisor formula
//! `c_r(n) = Σ_{d | gcd(r, n)} μ(r/d)·d`, with `gcd(r, 0) = r` so that
//! `c_r(0) = φ(r)`. [`ramanujan_sum_direct`] sums cosines of roots of unity
//! and exists only as an independent oracle.

use std::f64::consts::TAU;

use num::integer::gcd;
use num::rational::BigRational;
use num::BigInt;

use crate::error::{Error, Result};
use crate::sieve::{divisors_of, SieveTables};

/// Largest modulus the cosine oracle accepts.
pub const DIRECT_MAX_R: usize = 1_000_000;

/// Integrality tolerance for the cosine oracle.
pub const DIRECT_TOLERANCE: f64 = 1e-6;

pub fn ramanujan_sum(r: usize, n: usize, tables: &SieveTables) -> Result<i64> {
    if r == 0 {
        return Err(Error::invalid("ramanujan_sum requires r >= 1"));
    }
    if r > tables.n_max() {
        return Err(Error::OutOfRange {
            index: r,
            n_max: tables.n_max(),
        });
    }
    let g = if n == 0 { r } else { gcd(r, n) };
    let sum = tables
        .divisors(g)?
        .into_iter()
        .map(|d| tables.mu(r / d) as i64 * d as i64)
        .sum();
    Ok(sum)
}

/// `c_r(n)` as `Σ_{1≤a≤r, (a,r)=1} cos(2π a n / r)`, checked for integrality.
pub fn ramanujan_sum_direct(r: usize, n: usize) -> Result<i64> {
    if r == 0 {
        return Err(Error::invalid("ramanujan_sum_direct requires r >= 1"));
    }
    if r > DIRECT_MAX_R {
        return Err(Error::SizeLimit(format!(
            "cosine oracle limited to r <= {DIRECT_MAX_R}, got {r}"
        )));
    }
    let n_mod = (n % r) as u64;
    let (mut re, mut im) = (0.0f64, 0.0f64);
    for a in 1..=r {
        if gcd(a, r) != 1 {
            continue;
        }
        // reduce a·n mod r before scaling so the angle stays in [0, 2π)
        let k = (a as u64 * n_mod) % r as u64;
        let theta = TAU * k as f64 / r as f64;
        re += theta.cos();
        im += theta.sin();
    }
    let rounded = re.round();
    if im.abs() > DIRECT_TOLERANCE || (re - rounded).abs() > DIRECT_TOLERANCE {
        return Err(Error::NumericOracleFailure {
            r,
            n,
            detail: format!("sum = {re} + {im}i is not within {DIRECT_TOLERANCE} of an integer"),
        });
    }
    Ok(rounded as i64)
}

/// `(1/d) Σ_{r|d} c_r(n)`, which is 1 when `d | n` and 0 otherwise.
pub fn lemma1_indicator(d: usize, n: usize, tables: &SieveTables) -> Result<BigRational> {
    if d == 0 {
        return Err(Error::invalid("divisibility indicator requires d >= 1"));
    }
    let mut total: i64 = 0;
    for r in tables.divisors(d)? {
        total += ramanujan_sum(r, n, tables)?;
    }
    Ok(BigRational::new(BigInt::from(total), BigInt::from(d)))
}

/// The values `c_r(h)` for `r = 1..=r_max` at a fixed shift `h`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RamanujanRow {
    h: usize,
    // values[r - 1] = c_r(h)
    values: Vec<i64>,
}

impl RamanujanRow {
    pub fn h(&self) -> usize {
        self.h
    }

    pub fn r_max(&self) -> usize {
        self.values.len()
    }

    pub fn get(&self, r: usize) -> Result<i64> {
        if r == 0 || r > self.values.len() {
            return Err(Error::OutOfRange {
                index: r,
                n_max: self.values.len(),
            });
        }
        Ok(self.values[r - 1])
    }

    /// Element `i` is `c_{i+1}(h)`.
    pub fn as_slice(&self) -> &[i64] {
        &self.values
    }
}

/// Builds `c_r(h)` for all `r <= r_max` from the divisors `l` of `h`:
/// each `l` adds `l·μ(r/l)` to every multiple `r` of `l`.
pub fn cr_row(h: usize, r_max: usize, tables: &SieveTables) -> Result<RamanujanRow> {
    if r_max == 0 {
        return Err(Error::invalid("r_max must be positive"));
    }
    if r_max > tables.n_max() {
        return Err(Error::OutOfRange {
            index: r_max,
            n_max: tables.n_max(),
        });
    }
    let values = if h == 0 {
        (1..=r_max)
            .map(|r| tables.totient(r).map(|phi| phi as i64))
            .collect::<Result<Vec<_>>>()?
    } else {
        let mut values = vec![0i64; r_max];
        for l in divisors_of(h, tables)? {
            if l > r_max {
                break;
            }
            for (k, r) in (l..=r_max).step_by(l).enumerate() {
                values[r - 1] += l as i64 * tables.mu(k + 1) as i64;
            }
        }
        values
    };
    Ok(RamanujanRow { h, values })
}
