//! Arithmetic-function tables indexed on `1..=n_max`.

use crate::error::{Error, Result};
use crate::scalar::{Scalar, ValueKind};

/// Values of an arithmetic function on `1..=n_max`.
///
/// Indexing is semantic: `get(n)` returns the value at `n`. Index 0 and
/// anything above `n_max` are range errors.
#[derive(Debug, Clone, PartialEq)]
pub struct ArithTable<S> {
    label: String,
    // values[i] holds the value at n = i + 1
    values: Vec<S>,
}

impl<S: Scalar> ArithTable<S> {
    /// Builds a table from the values at `n = 1, 2, ...` in order.
    pub fn new(label: impl Into<String>, values: Vec<S>) -> Result<Self> {
        if values.is_empty() {
            return Err(Error::invalid("table must cover at least n = 1"));
        }
        Ok(Self {
            label: label.into(),
            values,
        })
    }

    pub fn from_fn(
        label: impl Into<String>,
        n_max: usize,
        mut f: impl FnMut(usize) -> S,
    ) -> Result<Self> {
        if n_max == 0 {
            return Err(Error::invalid("n_max must be positive"));
        }
        Self::new(label, (1..=n_max).map(&mut f).collect())
    }

    pub fn try_from_fn(
        label: impl Into<String>,
        n_max: usize,
        mut f: impl FnMut(usize) -> Result<S>,
    ) -> Result<Self> {
        if n_max == 0 {
            return Err(Error::invalid("n_max must be positive"));
        }
        let values = (1..=n_max).map(&mut f).collect::<Result<Vec<_>>>()?;
        Self::new(label, values)
    }

    pub fn ones(n_max: usize) -> Result<Self> {
        Self::from_fn("ones", n_max, |_| S::one())
    }

    /// The Dirichlet identity: 1 at n = 1, 0 elsewhere.
    pub fn delta(n_max: usize) -> Result<Self> {
        Self::from_fn(
            "delta",
            n_max,
            |n| if n == 1 { S::one() } else { S::zero() },
        )
    }

    pub fn n_max(&self) -> usize {
        self.values.len()
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn with_label(mut self, label: impl Into<String>) -> Self {
        self.label = label.into();
        self
    }

    pub fn kind(&self) -> ValueKind {
        S::KIND
    }

    pub fn get(&self, n: usize) -> Result<&S> {
        if n == 0 || n > self.values.len() {
            return Err(Error::OutOfRange {
                index: n,
                n_max: self.values.len(),
            });
        }
        Ok(&self.values[n - 1])
    }

    /// Pairs `(n, value)` for `n = 1..=n_max`.
    pub fn iter(&self) -> impl Iterator<Item = (usize, &S)> + '_ {
        self.values.iter().enumerate().map(|(i, v)| (i + 1, v))
    }

    /// Raw storage; element `i` is the value at `n = i + 1`.
    pub fn as_slice(&self) -> &[S] {
        &self.values
    }

    pub fn into_values(self) -> Vec<S> {
        self.values
    }

    pub fn map<T: Scalar>(&self, f: impl Fn(&S) -> T) -> ArithTable<T> {
        ArithTable {
            label: self.label.clone(),
            values: self.values.iter().map(f).collect(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn semantic_indexing() {
        let t = ArithTable::<f64>::from_fn("id", 5, |n| n as f64).unwrap();
        assert_eq!(*t.get(1).unwrap(), 1.0);
        assert_eq!(*t.get(5).unwrap(), 5.0);
        assert!(matches!(t.get(0), Err(Error::OutOfRange { index: 0, .. })));
        assert!(matches!(
            t.get(6),
            Err(Error::OutOfRange { index: 6, n_max: 5 })
        ));
    }

    #[test]
    fn empty_table_rejected() {
        assert!(ArithTable::<f64>::new("x", vec![]).is_err());
        assert!(ArithTable::<f64>::ones(0).is_err());
    }
}
