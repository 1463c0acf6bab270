//! Finite Ramanujan expansions.
//!
//! Given `f'` (so that `f(n) = Σ_{d|n} f'(d)`) and a support bound `N`,
//! the coefficients `f̂(r) = Σ_{r|d, d≤N} f'(d)/d` satisfy
//! `f(n) = Σ_{r≤N} f̂(r) c_r(n)` exactly for every `n`, once `f'` is
//! truncated at `N`. [`dual_invert`] recovers `f'` from `f̂`.

use crate::error::{Error, Result};
use crate::ramanujan::cr_row;
use crate::scalar::{Accumulator, Scalar};
use crate::sieve::SieveTables;
use crate::table::ArithTable;

/// Coefficients `f̂(r)` for `r = 1..=support`. Coefficients past the
/// support are zero by definition and never stored.
#[derive(Debug, Clone, PartialEq)]
pub struct FiniteExpansion<S> {
    support: usize,
    // coeffs[r - 1] = f̂(r)
    coeffs: Vec<S>,
    source_label: String,
}

impl<S: Scalar> FiniteExpansion<S> {
    /// Wraps user-supplied coefficients `f̂(1), f̂(2), ...`; the support is their count.
    pub fn from_coeffs(label: impl Into<String>, coeffs: Vec<S>) -> Result<Self> {
        if coeffs.is_empty() {
            return Err(Error::invalid("expansion support must be positive"));
        }
        Ok(Self {
            support: coeffs.len(),
            coeffs,
            source_label: label.into(),
        })
    }

    pub fn support(&self) -> usize {
        self.support
    }

    pub fn source_label(&self) -> &str {
        &self.source_label
    }

    pub fn coeff(&self, r: usize) -> Result<&S> {
        if r == 0 || r > self.support {
            return Err(Error::OutOfRange {
                index: r,
                n_max: self.support,
            });
        }
        Ok(&self.coeffs[r - 1])
    }

    /// Element `i` is `f̂(i + 1)`.
    pub fn as_slice(&self) -> &[S] {
        &self.coeffs
    }

    /// `f̂(r)` with the out-of-support convention `f̂(r) = 0` for `r > support`.
    pub(crate) fn coeff_or_zero(&self, r: usize) -> S {
        if r >= 1 && r <= self.support {
            self.coeffs[r - 1].clone()
        } else {
            S::zero()
        }
    }
}

/// Keeps `f'` on `1..=bound` and discards the rest.
pub fn truncate_support<S: Scalar>(fprime: &ArithTable<S>, bound: usize) -> Result<ArithTable<S>> {
    if bound == 0 {
        return Err(Error::invalid("truncation bound must be positive"));
    }
    if bound > fprime.n_max() {
        return Err(Error::OutOfRange {
            index: bound,
            n_max: fprime.n_max(),
        });
    }
    ArithTable::new(fprime.label(), fprime.as_slice()[..bound].to_vec())
}

/// `f̂(r) = Σ_{r|d, d≤support} f'(d)/d`, iterating multiples of each `r`.
pub fn expansion_coeffs<S: Scalar>(
    fprime: &ArithTable<S>,
    support: usize,
) -> Result<FiniteExpansion<S>> {
    if support == 0 {
        return Err(Error::invalid("expansion support must be positive"));
    }
    if fprime.n_max() < support {
        return Err(Error::invalid(format!(
            "f' table covers 1..={} but support is {}",
            fprime.n_max(),
            support
        )));
    }
    let weighted: Vec<S> = fprime.as_slice()[..support]
        .iter()
        .enumerate()
        .map(|(i, v)| v.clone() / S::from_i64(i as i64 + 1))
        .collect();
    let coeffs = (1..=support)
        .map(|r| S::sum_iter((r..=support).step_by(r).map(|d| weighted[d - 1].clone())))
        .collect();
    Ok(FiniteExpansion {
        support,
        coeffs,
        source_label: fprime.label().to_string(),
    })
}

/// Dual Möbius inversion: `f'(r) = r·Σ_{r|d, d≤support} μ(d/r)·f̂(d)`.
pub fn dual_invert<S: Scalar>(
    exp: &FiniteExpansion<S>,
    tables: &SieveTables,
) -> Result<ArithTable<S>> {
    let support = exp.support;
    if support > tables.n_max() {
        return Err(Error::OutOfRange {
            index: support,
            n_max: tables.n_max(),
        });
    }
    let values = (1..=support)
        .map(|r| {
            let inner = S::sum_iter((r..=support).step_by(r).enumerate().filter_map(|(k, d)| {
                match tables.mu(k + 1) {
                    0 => None,
                    1 => Some(exp.coeffs[d - 1].clone()),
                    _ => Some(-exp.coeffs[d - 1].clone()),
                }
            }));
            S::from_i64(r as i64) * inner
        })
        .collect();
    ArithTable::new(exp.source_label.clone(), values)
}

/// `Σ_{r≤support} f̂(r)·c_r(n)`.
pub fn evaluate<S: Scalar>(exp: &FiniteExpansion<S>, n: usize, tables: &SieveTables) -> Result<S> {
    if n == 0 {
        return Err(Error::invalid("evaluate requires n >= 1"));
    }
    let row = cr_row(n, exp.support, tables)?;
    Ok(S::sum_iter(
        exp.coeffs
            .iter()
            .zip(row.as_slice())
            .filter(|(_, &c)| c != 0)
            .map(|(a, &c)| a.clone() * S::from_i64(c)),
    ))
}

/// `f(n) = Σ_{d|n, d≤bound} f'(d)` for `n = 1..=len`, by iterating multiples.
pub fn divisor_sum_table<S: Scalar>(
    fprime: &ArithTable<S>,
    bound: usize,
    len: usize,
) -> Result<Vec<S>> {
    if bound > fprime.n_max() {
        return Err(Error::invalid(format!(
            "f' table covers 1..={} but the bound is {}",
            fprime.n_max(),
            bound
        )));
    }
    let fv = fprime.as_slice();
    let mut acc = vec![S::Acc::default(); len];
    for d in 1..=bound.min(len) {
        let v = &fv[d - 1];
        if v.is_zero() {
            continue;
        }
        for m in (d..=len).step_by(d) {
            acc[m - 1].add(v.clone());
        }
    }
    Ok(acc.iter().map(|a| a.total()).collect())
}
