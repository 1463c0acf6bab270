//! Coefficient-decay fits, sup-ratio checks and error-scaling sweeps.
//!
//! The error envelopes carry unknown implied constants, so nothing here
//! passes or fails a single `N`. Hypotheses of the form `|a_r| ≪ envelope(r)`
//! become two numbers (a least-squares constant and a sup-ratio), and the
//! theorem checks are trend assertions across a sweep of `N`.

use std::f64::consts::PI;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::expansion::{dual_invert, FiniteExpansion};
use crate::family::Family;
use crate::scalar::{round_sig12, Scalar, Value};
use crate::shifted::{brute_force, main_term, ConvolutionProblem, Envelope};
use crate::sieve::{sigma_minus_one, SieveTables};
use crate::table::ArithTable;

/// Number of geometrically spaced sample points used by decay fits.
pub const FIT_GRID_POINTS: usize = 200;

/// Smallest support accepted by [`fit_decay`].
pub const FIT_MIN_SUPPORT: usize = 16;

/// Default trend thresholds; the CLI can override each.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TrendConfig {
    /// Allowed excess of the fitted error slope over the envelope exponent.
    pub slope_slack: f64,
    /// Allowed max/min spread of a sup-ratio or envelope ratio across a sweep.
    pub spread_factor: f64,
    /// Largest admissible Spearman correlation of ratio vs `N` over the tail.
    pub spearman_max: f64,
    /// How many of the largest `N` form the tail.
    pub tail: usize,
}

impl Default for TrendConfig {
    fn default() -> Self {
        Self {
            slope_slack: 0.15,
            spread_factor: 3.0,
            spearman_max: 0.8,
            tail: 5,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum DecayModel {
    /// `|a_r| ≈ C r^e` (expect `e ≈ -(1+δ)`).
    Power,
    /// `|a_r| ≈ C / (r (ln r)^α)`, fitted as `e = -α`.
    Log,
    /// `|a_d| ≈ C / (ln d)^β`, fitted as `e = -β`.
    FprimeLog,
}

impl std::str::FromStr for DecayModel {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "power" => Ok(DecayModel::Power),
            "log" => Ok(DecayModel::Log),
            "fprime-log" => Ok(DecayModel::FprimeLog),
            _ => Err(Error::Usage(format!(
                "unknown decay model `{s}`; expected power, log or fprime-log"
            ))),
        }
    }
}

impl DecayModel {
    fn r_min(self) -> usize {
        match self {
            DecayModel::Power => 1,
            // ln r > 1
            DecayModel::Log | DecayModel::FprimeLog => 3,
        }
    }

    /// Maps `(r, |a_r|)` to regression coordinates.
    fn coords(self, r: usize, a: f64) -> (f64, f64) {
        let rf = r as f64;
        match self {
            DecayModel::Power => (rf.ln(), a.ln()),
            DecayModel::Log => (rf.ln().ln(), (a * rf).ln()),
            DecayModel::FprimeLog => (rf.ln().ln(), a.ln()),
        }
    }

    /// `|a_r| / shape(r)` where the fitted shape has the given exponent.
    fn normalized(self, r: usize, a: f64, exponent: f64) -> f64 {
        let rf = r as f64;
        match self {
            DecayModel::Power => a * rf.powf(-exponent),
            DecayModel::Log => a * rf * rf.ln().powf(-exponent),
            DecayModel::FprimeLog => a * rf.ln().powf(-exponent),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DecayFit {
    pub model: DecayModel,
    pub exponent: f64,
    /// Least-squares constant `C`.
    pub constant: f64,
    /// Sup of `|a_r| / shape(r)` over the whole range; not the same thing as `constant`.
    pub max_ratio: f64,
    pub sample_range: (usize, usize),
    pub points: usize,
    pub residual_rms: f64,
}

/// Ordinary least squares `y ≈ intercept + slope·x`; returns `(slope, intercept, rms residual)`.
pub fn least_squares(xs: &[f64], ys: &[f64]) -> Option<(f64, f64, f64)> {
    let n = xs.len();
    if n < 2 || ys.len() != n {
        return None;
    }
    let nf = n as f64;
    let mx = xs.iter().sum::<f64>() / nf;
    let my = ys.iter().sum::<f64>() / nf;
    let sxx: f64 = xs.iter().map(|x| (x - mx) * (x - mx)).sum();
    if sxx == 0.0 {
        return None;
    }
    let sxy: f64 = xs.iter().zip(ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let ss: f64 = xs
        .iter()
        .zip(ys)
        .map(|(x, y)| (y - intercept - slope * x).powi(2))
        .sum();
    Some((slope, intercept, (ss / nf).sqrt()))
}

/// Distinct integers spaced geometrically over `lo..=hi`.
pub fn geometric_grid(lo: usize, hi: usize, points: usize) -> Vec<usize> {
    if hi <= lo || points < 2 {
        return vec![lo];
    }
    let ratio = hi as f64 / lo as f64;
    let mut grid: Vec<usize> = (0..points)
        .map(|k| {
            let t = k as f64 / (points - 1) as f64;
            ((lo as f64) * ratio.powf(t)).round() as usize
        })
        .map(|r| r.clamp(lo, hi))
        .collect();
    grid.dedup();
    grid
}

/// Fits the decay of `values[r - 1] = a_r` on a geometric grid of `r`.
pub fn fit_values(values: &[f64], model: DecayModel) -> Result<DecayFit> {
    let support = values.len();
    if support < FIT_MIN_SUPPORT {
        return Err(Error::invalid(format!(
            "decay fit needs support >= {FIT_MIN_SUPPORT}, got {support}"
        )));
    }
    if values[1..].iter().all(|v| *v == 0.0) {
        return Err(Error::DegenerateFit(
            "all coefficients beyond r = 1 vanish".into(),
        ));
    }
    let r_min = model.r_min();
    let (xs, ys): (Vec<f64>, Vec<f64>) = geometric_grid(r_min, support, FIT_GRID_POINTS)
        .into_iter()
        .filter_map(|r| {
            let a = values[r - 1].abs();
            (a > 0.0 && a.is_finite()).then(|| model.coords(r, a))
        })
        .unzip();
    let (slope, intercept, rms) = least_squares(&xs, &ys)
        .ok_or_else(|| Error::DegenerateFit(format!("only {} usable sample points", xs.len())))?;
    let max_ratio = (r_min..=support)
        .map(|r| model.normalized(r, values[r - 1].abs(), slope))
        .fold(0.0, f64::max);
    Ok(DecayFit {
        model,
        exponent: slope,
        constant: intercept.exp(),
        max_ratio,
        sample_range: (r_min, support),
        points: xs.len(),
        residual_rms: rms,
    })
}

pub fn fit_decay<S: Scalar>(coeffs: &FiniteExpansion<S>, model: DecayModel) -> Result<DecayFit> {
    let values: Vec<f64> = coeffs.as_slice().iter().map(Scalar::to_f64).collect();
    fit_values(&values, model)
}

pub fn fit_decay_table<S: Scalar>(table: &ArithTable<S>, model: DecayModel) -> Result<DecayFit> {
    let values: Vec<f64> = table.as_slice().iter().map(Scalar::to_f64).collect();
    fit_values(&values, model)
}

/// Sup pair for one direction of the `f̂ ↔ f'` log-decay conversion.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SupRatioCheck {
    pub support: usize,
    pub exponent: f64,
    /// Sup of the hypothesis side.
    pub hypothesis_sup: f64,
    /// Sup of the conclusion side.
    pub conclusion_sup: f64,
    /// `conclusion_sup / hypothesis_sup`; `None` when the hypothesis sup is 0.
    pub ratio: Option<f64>,
}

fn sup_from_three(values: impl Iterator<Item = (usize, f64)>, weight: impl Fn(f64) -> f64) -> f64 {
    values
        .filter(|(r, _)| *r >= 3)
        .map(|(r, a)| a.abs() * weight(r as f64))
        .fold(0.0, f64::max)
}

fn check_dual_extents<S: Scalar>(
    f_hat: &FiniteExpansion<S>,
    fprime: &ArithTable<S>,
) -> Result<usize> {
    let n = f_hat.support();
    if fprime.n_max() < n {
        return Err(Error::invalid(format!(
            "f' covers 1..={} but the expansion support is {n}",
            fprime.n_max()
        )));
    }
    Ok(n)
}

/// `A = sup |f̂(r)| r (ln r)^α` against `B = sup |f'(d)| (ln d)^(α-1)`, over `3 ≤ r, d ≤ N`.
pub fn lemma2_forward_check<S: Scalar>(
    f_hat: &FiniteExpansion<S>,
    fprime: &ArithTable<S>,
    alpha: f64,
) -> Result<SupRatioCheck> {
    if !(alpha > 1.0 && alpha.is_finite()) {
        return Err(Error::invalid(format!(
            "forward check needs α > 1, got {alpha}"
        )));
    }
    let n = check_dual_extents(f_hat, fprime)?;
    let a = sup_from_three(
        f_hat
            .as_slice()
            .iter()
            .enumerate()
            .map(|(i, v)| (i + 1, v.to_f64())),
        |r| r * r.ln().powf(alpha),
    );
    let b = sup_from_three(
        fprime.as_slice()[..n]
            .iter()
            .enumerate()
            .map(|(i, v)| (i + 1, v.to_f64())),
        |d| d.ln().powf(alpha - 1.0),
    );
    Ok(SupRatioCheck {
        support: n,
        exponent: alpha,
        hypothesis_sup: a,
        conclusion_sup: b,
        ratio: (a > 0.0).then(|| b / a),
    })
}

/// `A' = sup |f'(d)| (ln d)^β` against `B' = sup |f̂(r)| r (ln r)^(β-1)`.
pub fn lemma2_backward_check<S: Scalar>(
    fprime: &ArithTable<S>,
    f_hat: &FiniteExpansion<S>,
    beta: f64,
) -> Result<SupRatioCheck> {
    if !(beta > 1.0 && beta.is_finite()) {
        return Err(Error::invalid(format!(
            "backward check needs β > 1, got {beta}"
        )));
    }
    let n = check_dual_extents(f_hat, fprime)?;
    let a = sup_from_three(
        fprime.as_slice()[..n]
            .iter()
            .enumerate()
            .map(|(i, v)| (i + 1, v.to_f64())),
        |d| d.ln().powf(beta),
    );
    let b = sup_from_three(
        f_hat
            .as_slice()
            .iter()
            .enumerate()
            .map(|(i, v)| (i + 1, v.to_f64())),
        |r| r * r.ln().powf(beta - 1.0),
    );
    Ok(SupRatioCheck {
        support: n,
        exponent: beta,
        hypothesis_sup: a,
        conclusion_sup: b,
        ratio: (a > 0.0).then(|| b / a),
    })
}

/// `f̂(r) = 1 / (r (1 + ln r)^α)` on `1..=support`, a coefficient family in the log class.
pub fn log_coefficient_expansion(alpha: f64, support: usize) -> Result<FiniteExpansion<f64>> {
    FiniteExpansion::from_coeffs(
        format!("log-coeff:{alpha}"),
        (1..=support)
            .map(|r| {
                let rf = r as f64;
                1.0 / (rf * (1.0 + rf.ln()).powf(alpha))
            })
            .collect(),
    )
}

/// Forward checks on the log-coefficient family over a list of supports.
pub fn lemma2_forward_sweep(
    alpha: f64,
    supports: &[usize],
    tables: &SieveTables,
) -> Result<Vec<SupRatioCheck>> {
    supports
        .par_iter()
        .map(|&n| {
            let fhat = log_coefficient_expansion(alpha, n)?;
            let fprime = dual_invert(&fhat, tables)?;
            lemma2_forward_check(&fhat, &fprime, alpha)
        })
        .collect()
}

/// Backward checks on the `log:β` family over a list of supports.
pub fn lemma2_backward_sweep(
    beta: f64,
    supports: &[usize],
    tables: &SieveTables,
) -> Result<Vec<SupRatioCheck>> {
    supports
        .par_iter()
        .map(|&n| {
            let fprime = Family::Log(beta).fprime::<f64>(n, tables)?;
            let fhat = crate::expansion::expansion_coeffs(&fprime, n)?;
            lemma2_backward_check(&fprime, &fhat, beta)
        })
        .collect()
}

/// Largest over smallest of the defined ratios; `None` if fewer than two are defined or any is 0.
pub fn spread(values: impl IntoIterator<Item = f64>) -> Option<f64> {
    let vals: Vec<f64> = values.into_iter().collect();
    if vals.len() < 2 {
        return None;
    }
    let max = vals.iter().copied().fold(f64::MIN, f64::max);
    let min = vals.iter().copied().fold(f64::MAX, f64::min);
    (min > 0.0).then(|| max / min)
}

fn ranks(v: &[f64]) -> Vec<f64> {
    let mut idx: Vec<usize> = (0..v.len()).collect();
    idx.sort_by(|&a, &b| v[a].total_cmp(&v[b]));
    let mut out = vec![0.0; v.len()];
    let mut i = 0;
    while i < idx.len() {
        let mut j = i;
        while j + 1 < idx.len() && v[idx[j + 1]] == v[idx[i]] {
            j += 1;
        }
        // ties share the average rank
        let rank = (i + j) as f64 / 2.0 + 1.0;
        for &k in &idx[i..=j] {
            out[k] = rank;
        }
        i = j + 1;
    }
    out
}

/// Spearman rank correlation; `None` when either side is constant.
pub fn spearman(xs: &[f64], ys: &[f64]) -> Option<f64> {
    if xs.len() != ys.len() || xs.len() < 2 {
        return None;
    }
    let rx = ranks(xs);
    let ry = ranks(ys);
    let n = rx.len() as f64;
    let mx = rx.iter().sum::<f64>() / n;
    let my = ry.iter().sum::<f64>() / n;
    let cov: f64 = rx.iter().zip(&ry).map(|(a, b)| (a - mx) * (b - my)).sum();
    let vx: f64 = rx.iter().map(|a| (a - mx).powi(2)).sum();
    let vy: f64 = ry.iter().map(|b| (b - my).powi(2)).sum();
    if vx == 0.0 || vy == 0.0 {
        return None;
    }
    Some(cov / (vx * vy).sqrt())
}

fn ser_sig12<Ser: serde::Serializer>(v: &f64, s: Ser) -> std::result::Result<Ser::Ok, Ser::Error> {
    s.serialize_f64(round_sig12(*v))
}

fn ser_opt_sig12<Ser: serde::Serializer>(
    v: &Option<f64>,
    s: Ser,
) -> std::result::Result<Ser::Ok, Ser::Error> {
    match v {
        Some(x) => s.serialize_some(&round_sig12(*x)),
        None => s.serialize_none(),
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepRow {
    #[serde(rename = "N")]
    pub n: usize,
    pub brute_force: Value,
    pub main_term: Value,
    pub error: Value,
    #[serde(serialize_with = "ser_sig12")]
    pub envelope: f64,
    #[serde(serialize_with = "ser_sig12")]
    pub ratio: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepResult {
    pub h: usize,
    pub f: String,
    pub g: String,
    pub theorem: Envelope,
    /// Ascending in `N`.
    pub rows: Vec<SweepRow>,
    /// Slope of `ln|error|` against `ln N` over nonzero-error rows; `None`
    /// when fewer than 3 such rows exist.
    #[serde(serialize_with = "ser_opt_sig12")]
    pub fitted_slope: Option<f64>,
    #[serde(serialize_with = "ser_sig12")]
    pub envelope_slope: f64,
    pub zero_error_rows: usize,
}

/// Outcome of the trend checks on a sweep.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrendVerdict {
    pub slope_ok: Option<bool>,
    pub tail_spearman: Option<f64>,
    pub spearman_ok: bool,
    pub tail_spread: Option<f64>,
    pub spread_ok: bool,
}

impl SweepResult {
    pub fn require_slope(&self) -> Result<f64> {
        self.fitted_slope.ok_or_else(|| {
            Error::DegenerateFit(format!(
                "{} of {} rows have zero error",
                self.zero_error_rows,
                self.rows.len()
            ))
        })
    }

    fn tail(&self, k: usize) -> &[SweepRow] {
        &self.rows[self.rows.len().saturating_sub(k)..]
    }

    /// Spearman correlation of `ratio` against `N` over the last `k` rows.
    pub fn tail_spearman(&self, k: usize) -> Option<f64> {
        let tail = self.tail(k);
        let ns: Vec<f64> = tail.iter().map(|r| r.n as f64).collect();
        let rs: Vec<f64> = tail.iter().map(|r| r.ratio).collect();
        spearman(&ns, &rs)
    }

    /// Max/min of `ratio` over the last `k` rows.
    pub fn tail_spread(&self, k: usize) -> Option<f64> {
        spread(self.tail(k).iter().map(|r| r.ratio))
    }

    pub fn judge(&self, cfg: &TrendConfig) -> TrendVerdict {
        let slope_ok = self
            .fitted_slope
            .map(|s| s <= self.envelope_slope + cfg.slope_slack);
        let tail_spearman = self.tail_spearman(cfg.tail);
        let tail_spread = self.tail_spread(cfg.tail);
        // a constant ratio (e.g. identically zero error) shows no growth
        let spearman_ok = tail_spearman.is_none_or(|s| s <= cfg.spearman_max);
        let spread_ok = match tail_spread {
            Some(s) => s <= cfg.spread_factor,
            None => self.tail(cfg.tail).iter().all(|r| r.ratio == 0.0),
        };
        TrendVerdict {
            slope_ok,
            tail_spearman,
            spearman_ok,
            tail_spread,
            spread_ok,
        }
    }
}

/// Brute force and main term for each `N`, fitted against the envelope.
///
/// Rows are computed in parallel and returned sorted by `N`.
pub fn error_sweep<S: Scalar>(
    family_f: &Family,
    family_g: &Family,
    theorem: Envelope,
    h: usize,
    n_list: &[usize],
    tables: &SieveTables,
) -> Result<SweepResult> {
    if h == 0 {
        return Err(Error::invalid("sweeps are stated for h >= 1"));
    }
    if n_list.len() < 5 {
        return Err(Error::invalid(format!(
            "a sweep needs at least 5 values of N, got {}",
            n_list.len()
        )));
    }
    if n_list.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::invalid("N values must be strictly ascending"));
    }
    if n_list[0] < 2 {
        return Err(Error::invalid("sweep values of N must be >= 2"));
    }
    let n_top = *n_list.last().expect("non-empty");
    if n_top + h > tables.n_max() {
        return Err(Error::invalid(format!(
            "sieve covers 1..={} but max N + h = {}",
            tables.n_max(),
            n_top + h
        )));
    }
    let fprime = family_f.fprime::<S>(n_top + h, tables)?;
    let gprime = family_g.fprime::<S>(n_top + h, tables)?;

    let mut rows = n_list
        .par_iter()
        .map(|&n| {
            let p = ConvolutionProblem::new(
                crate::expansion::truncate_support(&fprime, n)?,
                crate::expansion::truncate_support(&gprime, n + h)?,
                n,
                h,
            )?;
            let brute = brute_force(&p, tables)?;
            let main = main_term(&p, tables)?;
            let error = brute.clone() - main.clone();
            let envelope = theorem.evaluate(n)?;
            Ok(SweepRow {
                n,
                ratio: error.to_f64().abs() / envelope,
                brute_force: brute.to_value(),
                main_term: main.to_value(),
                error: error.to_value(),
                envelope,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    rows.sort_by_key(|r| r.n);

    let (xs, ys): (Vec<f64>, Vec<f64>) = rows
        .iter()
        .filter_map(|r| {
            let e = r.error.to_f64().abs();
            (e > 0.0).then(|| ((r.n as f64).ln(), e.ln()))
        })
        .unzip();
    let zero_error_rows = rows.len() - xs.len();
    let fitted_slope = if xs.len() >= 3 {
        least_squares(&xs, &ys).map(|(s, _, _)| s)
    } else {
        None
    };

    Ok(SweepResult {
        h,
        f: family_f.label(),
        g: family_g.label(),
        theorem,
        rows,
        fitted_slope,
        envelope_slope: theorem.exponent(),
        zero_error_rows,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct InghamRow {
    #[serde(rename = "N")]
    pub n: usize,
    pub lhs: u64,
    #[serde(serialize_with = "ser_sig12")]
    pub rhs: f64,
    #[serde(serialize_with = "ser_sig12")]
    pub ratio: f64,
}

/// `Σ_{n≤N} d(n) d(n+h)` against `(6/π²) σ_{-1}(h) N (ln N)²`.
pub fn ingham_check(h: usize, n_list: &[usize], tables: &SieveTables) -> Result<Vec<InghamRow>> {
    let sigma = sigma_minus_one(h)?.to_f64();
    let mut rows = n_list
        .par_iter()
        .map(|&n| {
            if n < 2 {
                return Err(Error::invalid("Ingham check needs N >= 2"));
            }
            if n + h > tables.n_max() {
                return Err(Error::invalid(format!(
                    "sieve covers 1..={} but N + h = {}",
                    tables.n_max(),
                    n + h
                )));
            }
            let mut lhs = 0u64;
            for k in 1..=n {
                lhs += tables.divisor_count(k)? as u64 * tables.divisor_count(k + h)? as u64;
            }
            let nf = n as f64;
            let rhs = 6.0 / (PI * PI) * sigma * nf * nf.ln().powi(2);
            Ok(InghamRow {
                n,
                lhs,
                rhs,
                ratio: lhs as f64 / rhs,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    rows.sort_by_key(|r| r.n);
    Ok(rows)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::expansion::expansion_coeffs;

    #[test]
    fn regression_recovers_line() {
        let xs: Vec<f64> = (0..10).map(f64::from).collect();
        let ys: Vec<f64> = xs.iter().map(|x| 3.0 - 0.5 * x).collect();
        let (s, i, rms) = least_squares(&xs, &ys).unwrap();
        assert!((s + 0.5).abs() < 1e-12 && (i - 3.0).abs() < 1e-12 && rms < 1e-12);
        assert!(least_squares(&[1.0], &[1.0]).is_none());
        assert!(least_squares(&[1.0, 1.0], &[1.0, 2.0]).is_none());
    }

    #[test]
    fn spearman_and_ranks() {
        assert_eq!(spearman(&[1.0, 2.0, 3.0], &[3.0, 2.0, 1.0]), Some(-1.0));
        assert_eq!(spearman(&[1.0, 2.0, 3.0], &[1.0, 5.0, 9.0]), Some(1.0));
        assert_eq!(ranks(&[2.0, 1.0, 2.0]), vec![2.5, 1.0, 2.5]);
        assert_eq!(spearman(&[1.0, 2.0], &[4.0, 4.0]), None);
    }

    #[test]
    fn grid_is_distinct_and_bounded() {
        let g = geometric_grid(3, 1000, 200);
        assert_eq!(g[0], 3);
        assert_eq!(*g.last().unwrap(), 1000);
        assert!(g.windows(2).all(|w| w[0] < w[1]));
    }

    #[test]
    fn exact_power_law_fit() {
        let values: Vec<f64> = (1..=1000).map(|r| 2.0 * (r as f64).powf(-1.7)).collect();
        let fit = fit_values(&values, DecayModel::Power).unwrap();
        assert!((fit.exponent + 1.7).abs() < 1e-9);
        assert!((fit.constant - 2.0).abs() < 1e-9);
        assert!((fit.max_ratio - 2.0).abs() < 1e-9);
    }

    #[test]
    fn exact_log_law_fit() {
        let values: Vec<f64> = (1..=5000)
            .map(|r| {
                let rf = r as f64;
                0.5 / (rf * rf.ln().powf(2.5))
            })
            .collect();
        let fit = fit_values(&values, DecayModel::Log).unwrap();
        assert!((fit.exponent + 2.5).abs() < 1e-9);
        assert_eq!(fit.sample_range, (3, 5000));
    }

    #[test]
    fn degenerate_and_small_fits() {
        let mut unit = vec![0.0; 100];
        unit[0] = 1.0;
        assert!(matches!(
            fit_values(&unit, DecayModel::Power),
            Err(Error::DegenerateFit(_))
        ));
        assert!(matches!(
            fit_values(&[1.0; 8], DecayModel::Power),
            Err(Error::InvalidArgument(_))
        ));
    }

    #[test]
    fn forward_check_on_unit() {
        let t = SieveTables::build(64).unwrap();
        let mut coeffs = vec![0.0; 64];
        coeffs[0] = 1.0;
        let fhat = FiniteExpansion::from_coeffs("unit", coeffs).unwrap();
        let fprime = dual_invert(&fhat, &t).unwrap();
        let c = lemma2_forward_check(&fhat, &fprime, 2.0).unwrap();
        assert_eq!(c.conclusion_sup, 0.0);
        assert_eq!(c.ratio, None);
        assert!(lemma2_forward_check(&fhat, &fprime, 1.0).is_err());
    }

    #[test]
    fn backward_check_on_delta() {
        let delta = ArithTable::<f64>::delta(64).unwrap();
        let fhat = expansion_coeffs(&delta, 64).unwrap();
        let c = lemma2_backward_check(&delta, &fhat, 3.0).unwrap();
        assert_eq!(c.conclusion_sup, 0.0);
        assert_eq!(c.hypothesis_sup, 0.0);
        assert!(lemma2_backward_check(&delta, &fhat, 0.5).is_err());
    }

    #[test]
    fn power_family_backward_is_diagnostic() {
        let t = SieveTables::build(4096).unwrap();
        let fprime = Family::Power(0.5).fprime::<f64>(4096, &t).unwrap();
        let fhat = expansion_coeffs(&fprime, 4096).unwrap();
        let c = lemma2_backward_check(&fprime, &fhat, 3.0).unwrap();
        assert!(c.hypothesis_sup.is_finite() && c.conclusion_sup.is_finite());
        assert!(c.ratio.is_some());
    }

    #[test]
    fn ingham_small_case() {
        let t = SieveTables::build(100).unwrap();
        let rows = ingham_check(2, &[4, 10], &t).unwrap();
        assert_eq!(rows[0].lhs, 24);
        assert!(ingham_check(2, &[99], &t).is_err());
        assert!(ingham_check(0, &[10], &t).is_err());
    }

    #[test]
    fn sweep_argument_checks() {
        let t = SieveTables::build(200).unwrap();
        let env = Envelope::new(crate::shifted::BoundKind::PowerDelta, 0.5).unwrap();
        let u = Family::Unit;
        assert!(error_sweep::<f64>(&u, &u, env, 1, &[10, 20, 30, 40], &t).is_err());
        assert!(error_sweep::<f64>(&u, &u, env, 1, &[10, 20, 30, 50, 40], &t).is_err());
        assert!(error_sweep::<f64>(&u, &u, env, 0, &[10, 20, 30, 40, 50], &t).is_err());
        assert!(error_sweep::<f64>(&u, &u, env, 1, &[10, 20, 30, 40, 200], &t).is_err());
    }

    #[test]
    fn unit_sweep_is_trivially_degenerate() {
        let t = SieveTables::build(200).unwrap();
        let env = Envelope::new(crate::shifted::BoundKind::PowerDelta, 0.5).unwrap();
        let s = error_sweep::<f64>(
            &Family::Unit,
            &Family::Unit,
            env,
            3,
            &[10, 20, 40, 80, 160],
            &t,
        )
        .unwrap();
        assert_eq!(s.zero_error_rows, 5);
        assert!(s.fitted_slope.is_none());
        assert!(matches!(s.require_slope(), Err(Error::DegenerateFit(_))));
        let v = s.judge(&TrendConfig::default());
        assert!(v.spearman_ok && v.spread_ok && v.slope_ok.is_none());
    }
}
