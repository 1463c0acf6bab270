//! Sieve tables, divisor enumeration, Dirichlet convolution and Möbius inversion.
//!
//! [`SieveTables`] is built once by a linear sieve and then shared
//! read-only. Divisors come from smallest-prime-factor factorization, and
//! both convolution routines run over multiples (`d, 2d, 3d, ...`) so a full
//! table costs `O(n log n)`.

use num::integer::Integer;
use num::rational::BigRational;
use num::BigInt;

use crate::error::{Error, Result};
use crate::scalar::{Accumulator, Scalar};
use crate::table::ArithTable;

#[derive(Debug, Clone)]
pub struct SieveTables {
    n_max: usize,
    // all three vectors are indexed by n directly; slot 0 is unused
    mobius: Vec<i8>,
    spf: Vec<u32>,
    divisor_count: Vec<u32>,
}

impl SieveTables {
    /// Linear sieve over `1..=n_max`.
    pub fn build(n_max: usize) -> Result<Self> {
        if n_max == 0 {
            return Err(Error::invalid("n_max must be at least 1"));
        }
        if n_max > u32::MAX as usize {
            return Err(Error::invalid("n_max exceeds 32-bit range"));
        }
        let len = n_max + 1;
        let mut mobius = vec![0i8; len];
        let mut spf = vec![0u32; len];
        let mut divisor_count = vec![0u32; len];
        // exponent of spf(n) in n
        let mut spf_exp = vec![0u8; len];
        let mut primes: Vec<u32> = Vec::new();

        mobius[1] = 1;
        divisor_count[1] = 1;
        for i in 2..len {
            if spf[i] == 0 {
                spf[i] = i as u32;
                mobius[i] = -1;
                divisor_count[i] = 2;
                spf_exp[i] = 1;
                primes.push(i as u32);
            }
            let si = spf[i];
            for &p in &primes {
                let m = i * p as usize;
                if p > si || m >= len {
                    break;
                }
                spf[m] = p;
                if p == si {
                    mobius[m] = 0;
                    let e = spf_exp[i] as u32;
                    spf_exp[m] = spf_exp[i] + 1;
                    divisor_count[m] = divisor_count[i] / (e + 1) * (e + 2);
                } else {
                    mobius[m] = -mobius[i];
                    spf_exp[m] = 1;
                    divisor_count[m] = divisor_count[i] * 2;
                }
            }
        }

        Ok(Self {
            n_max,
            mobius,
            spf,
            divisor_count,
        })
    }

    pub fn n_max(&self) -> usize {
        self.n_max
    }

    fn check(&self, n: usize) -> Result<()> {
        if n == 0 || n > self.n_max {
            Err(Error::OutOfRange {
                index: n,
                n_max: self.n_max,
            })
        } else {
            Ok(())
        }
    }

    pub fn mobius(&self, n: usize) -> Result<i8> {
        self.check(n)?;
        Ok(self.mobius[n])
    }

    /// Smallest prime factor; `None` for `n = 1`.
    pub fn spf(&self, n: usize) -> Result<Option<usize>> {
        self.check(n)?;
        Ok((n > 1).then(|| self.spf[n] as usize))
    }

    pub fn divisor_count(&self, n: usize) -> Result<u32> {
        self.check(n)?;
        Ok(self.divisor_count[n])
    }

    /// Unchecked Möbius lookup for hot loops; callers guarantee `1 <= n <= n_max`.
    #[inline]
    pub(crate) fn mu(&self, n: usize) -> i8 {
        debug_assert!(n >= 1 && n <= self.n_max);
        self.mobius[n]
    }

    /// Möbius values on `1..=n_max` in index order.
    pub fn mobius_table<S: Scalar>(&self) -> ArithTable<S> {
        ArithTable::from_fn("mobius", self.n_max, |n| S::from_i64(self.mobius[n] as i64))
            .expect("n_max >= 1")
    }

    /// Prime factorization as `(p, e)` pairs with ascending `p`.
    pub fn factorize(&self, n: usize) -> Result<Vec<(usize, u32)>> {
        self.check(n)?;
        let mut out: Vec<(usize, u32)> = Vec::new();
        let mut m = n;
        while m > 1 {
            let p = self.spf[m] as usize;
            let mut e = 0;
            while m.is_multiple_of(p) {
                m /= p;
                e += 1;
            }
            out.push((p, e));
        }
        Ok(out)
    }

    /// Ascending divisors of `n`.
    pub fn divisors(&self, n: usize) -> Result<Vec<usize>> {
        let factors = self.factorize(n)?;
        let mut divs = Vec::with_capacity(self.divisor_count[n] as usize);
        divs.push(1usize);
        for (p, e) in factors {
            let len = divs.len();
            let mut pk = 1;
            for _ in 0..e {
                pk *= p;
                for i in 0..len {
                    divs.push(divs[i] * pk);
                }
            }
        }
        divs.sort_unstable();
        Ok(divs)
    }

    /// Euler's totient from the factorization.
    pub fn totient(&self, n: usize) -> Result<u64> {
        let factors = self.factorize(n)?;
        Ok(factors
            .iter()
            .fold(n as u64, |acc, &(p, _)| acc / p as u64 * (p as u64 - 1)))
    }
}

/// Divisors of `n`, using the sieve when `n` is in range and trial division otherwise.
pub fn divisors_of(n: usize, tables: &SieveTables) -> Result<Vec<usize>> {
    if n == 0 {
        return Err(Error::invalid("0 has no finite divisor list"));
    }
    if n <= tables.n_max() {
        return tables.divisors(n);
    }
    Ok(trial_divisors(n))
}

pub(crate) fn trial_divisors(n: usize) -> Vec<usize> {
    let mut small = Vec::new();
    let mut large = Vec::new();
    let mut d = 1;
    while d * d <= n {
        if n.is_multiple_of(d) {
            small.push(d);
            if d * d != n {
                large.push(n / d);
            }
        }
        d += 1;
    }
    small.extend(large.into_iter().rev());
    small
}

/// `(a * b)(n) = Σ_{d|n} a(d) b(n/d)` on the common extent.
pub fn dirichlet_convolve<S: Scalar>(
    a: &ArithTable<S>,
    b: &ArithTable<S>,
) -> Result<ArithTable<S>> {
    let n_max = a.n_max();
    if b.n_max() != n_max {
        return Err(Error::invalid(format!(
            "extent mismatch: {} vs {}",
            n_max,
            b.n_max()
        )));
    }
    let av = a.as_slice();
    let bv = b.as_slice();
    let mut acc = vec![S::Acc::default(); n_max];
    for d in 1..=n_max {
        let ad = &av[d - 1];
        if ad.is_zero() {
            continue;
        }
        for (k, m) in (d..=n_max).step_by(d).enumerate() {
            acc[m - 1].add(ad.clone() * bv[k].clone());
        }
    }
    ArithTable::new(
        format!("({})*({})", a.label(), b.label()),
        acc.iter().map(|s| s.total()).collect(),
    )
}

/// `f' = f * μ`, so that `f(n) = Σ_{d|n} f'(d)`.
pub fn mobius_invert<S: Scalar>(f: &ArithTable<S>, tables: &SieveTables) -> Result<ArithTable<S>> {
    let n_max = f.n_max();
    if n_max > tables.n_max() {
        return Err(Error::invalid(format!(
            "table extent {} exceeds sieve extent {}",
            n_max,
            tables.n_max()
        )));
    }
    let fv = f.as_slice();
    let mut acc = vec![S::Acc::default(); n_max];
    for k in 1..=n_max {
        let mu = tables.mu(k);
        if mu == 0 {
            continue;
        }
        for (j, m) in (k..=n_max).step_by(k).enumerate() {
            let v = fv[j].clone();
            acc[m - 1].add(if mu > 0 { v } else { -v });
        }
    }
    ArithTable::new(
        format!("({})*mu", f.label()),
        acc.iter().map(|s| s.total()).collect(),
    )
}

/// `σ_{-1}(h) = Σ_{d|h} 1/d`, exactly.
pub fn sigma_minus_one(h: usize) -> Result<BigRational> {
    if h == 0 {
        return Err(Error::invalid("sigma_minus_one requires h >= 1"));
    }
    // Σ 1/d = σ(h)/h
    let sigma: BigInt = trial_divisors(h).into_iter().map(BigInt::from).sum();
    let h = BigInt::from(h);
    let g = sigma.gcd(&h);
    Ok(BigRational::new_raw(sigma / &g, h / g))
}
