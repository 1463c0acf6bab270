//! Built-in arithmetic-function families, specified through `f'`.
//!
//! | spec          | `f'(d)`                  |
//! |---------------|--------------------------|
//! | `unit`        | 1 at d = 1, else 0 (f ≡ 1) |
//! | `divisor`     | 1 (f = d(n))             |
//! | `power:δ`     | `d^(-δ)`                 |
//! | `log:β`       | `1 / (1 + (ln d)^β)`     |
//! | `custom:path` | from a coefficient file  |

use std::fmt::{self, Display};
use std::path::PathBuf;
use std::str::FromStr;

use crate::custom::{load_custom, CoefficientKind, CustomCoefficients};
use crate::error::{Error, Result};
use crate::expansion::{dual_invert, FiniteExpansion};
use crate::scalar::Scalar;
use crate::sieve::SieveTables;
use crate::table::ArithTable;

/// A parsed `name[:param]` family spec, not yet resolved against any file.
#[derive(Debug, Clone, PartialEq)]
pub enum FamilySpec {
    Unit,
    Divisor,
    Power(f64),
    Log(f64),
    Custom(PathBuf),
}

impl FromStr for FamilySpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let (name, param) = match s.split_once(':') {
            Some((n, p)) => (n, Some(p)),
            None => (s, None),
        };
        let real = |p: Option<&str>, what: &str| -> Result<f64> {
            let p =
                p.ok_or_else(|| Error::Usage(format!("family `{name}` needs a parameter {what}")))?;
            let v: f64 = p
                .parse()
                .map_err(|_| Error::Usage(format!("family `{name}`: `{p}` is not a number")))?;
            if !(v.is_finite() && v > 0.0) {
                return Err(Error::Usage(format!(
                    "family `{name}`: {what} must be positive, got {p}"
                )));
            }
            Ok(v)
        };
        match name {
            "unit" | "divisor" if param.is_some() => {
                Err(Error::Usage(format!("family `{name}` takes no parameter")))
            }
            "unit" => Ok(FamilySpec::Unit),
            "divisor" => Ok(FamilySpec::Divisor),
            "power" => Ok(FamilySpec::Power(real(param, "δ")?)),
            "log" => Ok(FamilySpec::Log(real(param, "β")?)),
            "custom" => match param {
                Some(p) if !p.is_empty() => Ok(FamilySpec::Custom(PathBuf::from(p))),
                _ => Err(Error::Usage("family `custom` needs a file path".into())),
            },
            _ => Err(Error::Usage(format!(
                "unknown family `{s}`; expected unit, divisor, power:δ, log:β or custom:<path>"
            ))),
        }
    }
}

impl Display for FamilySpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FamilySpec::Unit => f.write_str("unit"),
            FamilySpec::Divisor => f.write_str("divisor"),
            FamilySpec::Power(d) => write!(f, "power:{d}"),
            FamilySpec::Log(b) => write!(f, "log:{b}"),
            FamilySpec::Custom(p) => write!(f, "custom:{}", p.display()),
        }
    }
}

impl FamilySpec {
    /// Loads custom files; indices in the file must lie in `1..=support`.
    pub fn resolve(&self, support: usize) -> Result<Family> {
        Ok(match self {
            FamilySpec::Unit => Family::Unit,
            FamilySpec::Divisor => Family::Divisor,
            FamilySpec::Power(d) => Family::Power(*d),
            FamilySpec::Log(b) => Family::Log(*b),
            FamilySpec::Custom(path) => Family::Custom {
                label: self.to_string(),
                coeffs: load_custom(path, support)?,
            },
        })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Family {
    Unit,
    Divisor,
    Power(f64),
    Log(f64),
    Custom {
        label: String,
        coeffs: CustomCoefficients,
    },
}

impl Family {
    pub fn label(&self) -> String {
        match self {
            Family::Unit => "unit".into(),
            Family::Divisor => "divisor".into(),
            Family::Power(d) => format!("power:{d}"),
            Family::Log(b) => format!("log:{b}"),
            Family::Custom { label, .. } => label.clone(),
        }
    }

    /// `f'` on `1..=n_max`. Custom `fhat` files are converted by dual
    /// inversion relative to the file's support; `f'` is zero beyond it.
    pub fn fprime<S: Scalar>(&self, n_max: usize, tables: &SieveTables) -> Result<ArithTable<S>> {
        let label = self.label();
        match self {
            Family::Unit => Ok(ArithTable::<S>::delta(n_max)?.with_label(label)),
            Family::Divisor => Ok(ArithTable::<S>::ones(n_max)?.with_label(label)),
            Family::Power(delta) => {
                ArithTable::try_from_fn(label, n_max, |d| S::from_real((d as f64).powf(-delta)))
            }
            Family::Log(beta) => ArithTable::try_from_fn(label, n_max, |d| {
                S::from_real(1.0 / (1.0 + (d as f64).ln().powf(*beta)))
            }),
            Family::Custom { coeffs, .. } => {
                let dense: Vec<S> = match coeffs.kind {
                    CoefficientKind::Fprime => coeffs
                        .dense(coeffs.support)
                        .iter()
                        .map(S::from_rational)
                        .collect(),
                    CoefficientKind::Fhat => {
                        let fhat: Vec<S> = coeffs
                            .dense(coeffs.support)
                            .iter()
                            .map(S::from_rational)
                            .collect();
                        let exp = FiniteExpansion::from_coeffs(label.clone(), fhat)?;
                        dual_invert(&exp, tables)?.into_values()
                    }
                };
                ArithTable::from_fn(label, n_max, |d| {
                    dense.get(d - 1).cloned().unwrap_or_else(S::zero)
                })
            }
        }
    }
}
