//! Shifted convolution sums `C(h) = Σ_{n≤N} f(n) g(n+h)`.
//!
//! Three routes to the same quantity:
//!
//! * [`brute_force`] materializes `f` and `g` from their truncated `f'`, `g'`;
//! * [`double_expansion`] substitutes both finite expansions and sums
//!   `f̂(r) ĝ(s) Σ_n c_r(n) c_s(n+h)` without approximation;
//! * [`main_term`] is `N Σ_r f̂(r) ĝ(r) c_r(h)`, which differs from the
//!   other two by the error term the envelopes bound.
//!
//! [`singular_series`] is the divisor-of-`h` form of the main term's sum.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::expansion::{divisor_sum_table, expansion_coeffs, FiniteExpansion};
use crate::ramanujan::cr_row;
use crate::scalar::{round_sig12, Scalar, Value, ValueKind};
use crate::sieve::{divisors_of, SieveTables};
use crate::table::ArithTable;

/// Largest `N` accepted by [`double_expansion`].
pub const DOUBLE_EXPANSION_MAX_N: usize = 300;

#[derive(Debug, Clone)]
pub struct ConvolutionProblem<S> {
    fprime: ArithTable<S>,
    gprime: ArithTable<S>,
    n: usize,
    h: usize,
    f_hat: FiniteExpansion<S>,
    g_hat: FiniteExpansion<S>,
}

impl<S: Scalar> ConvolutionProblem<S> {
    /// `f̂` is taken relative to `N` and `ĝ` relative to `N + h`.
    pub fn new(fprime: ArithTable<S>, gprime: ArithTable<S>, n: usize, h: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::invalid("N must be positive"));
        }
        if fprime.n_max() < n {
            return Err(Error::invalid(format!(
                "f' covers 1..={} but N = {n}",
                fprime.n_max()
            )));
        }
        if gprime.n_max() < n + h {
            return Err(Error::invalid(format!(
                "g' covers 1..={} but N + h = {}",
                gprime.n_max(),
                n + h
            )));
        }
        let f_hat = expansion_coeffs(&fprime, n)?;
        let g_hat = expansion_coeffs(&gprime, n + h)?;
        Ok(Self {
            fprime,
            gprime,
            n,
            h,
            f_hat,
            g_hat,
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn h(&self) -> usize {
        self.h
    }

    pub fn fprime(&self) -> &ArithTable<S> {
        &self.fprime
    }

    pub fn gprime(&self) -> &ArithTable<S> {
        &self.gprime
    }

    pub fn f_hat(&self) -> &FiniteExpansion<S> {
        &self.f_hat
    }

    pub fn g_hat(&self) -> &FiniteExpansion<S> {
        &self.g_hat
    }

    fn require_tables(&self, tables: &SieveTables) -> Result<()> {
        if tables.n_max() < self.n + self.h {
            return Err(Error::invalid(format!(
                "sieve covers 1..={} but N + h = {}",
                tables.n_max(),
                self.n + self.h
            )));
        }
        Ok(())
    }
}

pub fn brute_force<S: Scalar>(p: &ConvolutionProblem<S>, tables: &SieveTables) -> Result<S> {
    p.require_tables(tables)?;
    let (n, h) = (p.n, p.h);
    let f = divisor_sum_table(&p.fprime, n, n)?;
    let g = divisor_sum_table(&p.gprime, n + h, n + h)?;
    Ok(S::sum_iter(
        f.into_iter().zip(&g[h..]).map(|(a, b)| a * b.clone()),
    ))
}

pub fn main_term<S: Scalar>(p: &ConvolutionProblem<S>, tables: &SieveTables) -> Result<S> {
    p.require_tables(tables)?;
    let row = cr_row(p.h, p.n, tables)?;
    let f = p.f_hat.as_slice();
    let g = p.g_hat.as_slice();
    let sum = S::sum_iter(
        row.as_slice()
            .iter()
            .enumerate()
            .filter(|(_, &c)| c != 0)
            .map(|(i, &c)| f[i].clone() * g[i].clone() * S::from_i64(c)),
    );
    Ok(S::from_i64(p.n as i64) * sum)
}

/// `Σ_{r≤N} Σ_{s≤N+h} f̂(r) ĝ(s) Σ_{n≤N} c_r(n) c_s(n+h)`; cubic cost, so `N` is capped.
pub fn double_expansion<S: Scalar>(p: &ConvolutionProblem<S>, tables: &SieveTables) -> Result<S> {
    if p.n > DOUBLE_EXPANSION_MAX_N {
        return Err(Error::SizeLimit(format!(
            "double expansion is limited to N <= {DOUBLE_EXPANSION_MAX_N} (got {}); use brute_force",
            p.n
        )));
    }
    p.require_tables(tables)?;
    let (n, h) = (p.n, p.h);
    let s_max = n + h;
    // c_r(k) for k = 1..=N and c_s(k + h) likewise, as rows indexed by the argument
    let left = (1..=n)
        .map(|k| cr_row(k, n, tables))
        .collect::<Result<Vec<_>>>()?;
    let right = (1..=n)
        .map(|k| cr_row(k + h, s_max, tables))
        .collect::<Result<Vec<_>>>()?;

    let f = p.f_hat.as_slice();
    let g = p.g_hat.as_slice();
    let mut outer = Vec::with_capacity(n);
    for r in 1..=n {
        let mut inner = Vec::with_capacity(s_max);
        for s in 1..=s_max {
            let k: i64 = left
                .iter()
                .zip(&right)
                .map(|(cl, cr)| cl.as_slice()[r - 1] * cr.as_slice()[s - 1])
                .sum();
            if k != 0 && !g[s - 1].is_zero() {
                inner.push(g[s - 1].clone() * S::from_i64(k));
            }
        }
        if !f[r - 1].is_zero() {
            outer.push(f[r - 1].clone() * S::sum_iter(inner));
        }
    }
    Ok(S::sum_iter(outer))
}

/// `Σ_{l|h} l Σ_{t≤N/l} μ(t) f̂(lt) ĝ(lt)`. For `h = 0` every `l ≤ N` divides `h`.
pub fn singular_series<S: Scalar>(p: &ConvolutionProblem<S>, tables: &SieveTables) -> Result<S> {
    p.require_tables(tables)?;
    let n = p.n;
    let ls: Vec<usize> = if p.h == 0 {
        (1..=n).collect()
    } else {
        divisors_of(p.h, tables)?
            .into_iter()
            .filter(|&l| l <= n)
            .collect()
    };
    let terms = ls.into_iter().map(|l| {
        let inner = S::sum_iter((1..=n / l).filter_map(|t| match tables.mu(t) {
            0 => None,
            mu => {
                let v = p.f_hat.coeff_or_zero(l * t) * p.g_hat.coeff_or_zero(l * t);
                Some(if mu > 0 { v } else { -v })
            }
        }));
        S::from_i64(l as i64) * inner
    });
    Ok(S::sum_iter(terms))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum BoundKind {
    /// `N^(1-δ) (ln N)^2 + 1`, for `|f̂|, |ĝ| ≪ r^-(1+δ)`.
    PowerDelta,
    /// `N / (ln N)^(β-2)`, for `|f'|, |g'| ≪ (ln d)^-β` with `β > 2`.
    LogBeta,
}

impl std::str::FromStr for BoundKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "power-delta" => Ok(BoundKind::PowerDelta),
            "log-beta" => Ok(BoundKind::LogBeta),
            _ => Err(Error::Usage(format!(
                "unknown theorem `{s}`; expected power-delta or log-beta"
            ))),
        }
    }
}

impl std::fmt::Display for BoundKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            BoundKind::PowerDelta => "power-delta",
            BoundKind::LogBeta => "log-beta",
        })
    }
}

/// A validated error envelope with implied constant 1.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Envelope {
    pub kind: BoundKind,
    pub parameter: f64,
}

impl Envelope {
    pub fn new(kind: BoundKind, parameter: f64) -> Result<Self> {
        if !parameter.is_finite() {
            return Err(Error::invalid("envelope parameter must be finite"));
        }
        match kind {
            BoundKind::PowerDelta if parameter <= 0.0 => Err(Error::invalid(format!(
                "power-delta envelope needs δ > 0, got {parameter}"
            ))),
            BoundKind::LogBeta if parameter <= 2.0 => Err(Error::invalid(format!(
                "log-beta envelope needs β > 2, got {parameter}"
            ))),
            _ => Ok(Self { kind, parameter }),
        }
    }

    pub fn evaluate(&self, n: usize) -> Result<f64> {
        if n < 2 {
            return Err(Error::invalid(format!("envelope needs N >= 2, got {n}")));
        }
        let nf = n as f64;
        let ln = nf.ln();
        Ok(match self.kind {
            BoundKind::PowerDelta => nf.powf(1.0 - self.parameter) * ln * ln + 1.0,
            BoundKind::LogBeta => nf / ln.powf(self.parameter - 2.0),
        })
    }

    /// Predicted growth exponent of the envelope in `N`, ignoring log factors.
    pub fn exponent(&self) -> f64 {
        match self.kind {
            BoundKind::PowerDelta => 1.0 - self.parameter,
            BoundKind::LogBeta => 1.0,
        }
    }
}

pub fn theorem_bound(kind: BoundKind, parameter: f64, n: usize, h: usize) -> Result<f64> {
    if h == 0 {
        return Err(Error::invalid("theorem envelopes are stated for h >= 1"));
    }
    Envelope::new(kind, parameter)?.evaluate(n)
}

/// One `(f, g, N, h)` evaluation.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConvolutionReport {
    #[serde(rename = "N")]
    pub n: usize,
    pub h: usize,
    pub f: String,
    pub g: String,
    pub backend: ValueKind,
    pub brute_force: Value,
    pub main_term: Value,
    pub error: Value,
    pub theorem: Option<Envelope>,
    #[serde(serialize_with = "serialize_opt_sig12")]
    pub envelope: Option<f64>,
    #[serde(serialize_with = "serialize_opt_sig12")]
    pub ratio: Option<f64>,
}

fn serialize_opt_sig12<Ser: serde::Serializer>(
    v: &Option<f64>,
    s: Ser,
) -> std::result::Result<Ser::Ok, Ser::Error> {
    match v {
        Some(x) => s.serialize_some(&round_sig12(*x)),
        None => s.serialize_none(),
    }
}

/// Bundles brute force, main term and (when a theorem is given) the envelope ratio.
pub fn report<S: Scalar>(
    p: &ConvolutionProblem<S>,
    theorem: Option<&Envelope>,
    tables: &SieveTables,
) -> Result<ConvolutionReport> {
    let (envelope, theorem) = match theorem {
        Some(env) => {
            if p.h == 0 {
                return Err(Error::invalid(
                    "theorem reports need h >= 1; h = 0 is computed without an envelope",
                ));
            }
            (Some(env.evaluate(p.n)?), Some(*env))
        }
        None => (None, None),
    };
    let brute = brute_force(p, tables)?;
    let main = main_term(p, tables)?;
    let error = brute.clone() - main.clone();
    let ratio = envelope.map(|e| error.to_f64().abs() / e);
    Ok(ConvolutionReport {
        n: p.n,
        h: p.h,
        f: p.fprime.label().to_string(),
        g: p.gprime.label().to_string(),
        backend: S::KIND,
        brute_force: brute.to_value(),
        main_term: main.to_value(),
        error: error.to_value(),
        theorem,
        envelope,
        ratio,
    })
}
