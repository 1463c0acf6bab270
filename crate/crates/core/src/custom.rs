//! User-supplied coefficient files.
//!
//! Format: UTF-8 CSV whose first line is `fprime` or `fhat`, followed by
//! `index,value` rows. Values may be integers, decimals or `p/q`; they are
//! parsed exactly. Unlisted indices are zero.

use std::collections::BTreeMap;
use std::fs::File;
use std::path::Path;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scalar::{parse_exact, Exact};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum CoefficientKind {
    Fprime,
    Fhat,
}

impl FromStr for CoefficientKind {
    type Err = ();

    fn from_str(s: &str) -> std::result::Result<Self, ()> {
        match s {
            "fprime" => Ok(CoefficientKind::Fprime),
            "fhat" => Ok(CoefficientKind::Fhat),
            _ => Err(()),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct CustomCoefficients {
    pub kind: CoefficientKind,
    pub support: usize,
    /// Sparse entries keyed by index, all in `1..=support`.
    pub entries: BTreeMap<usize, Exact>,
}

impl CustomCoefficients {
    /// Dense values on `1..=len`, zero where unlisted.
    pub fn dense(&self, len: usize) -> Vec<Exact> {
        let mut out = vec![Exact::default(); len];
        for (&i, v) in self.entries.range(1..=len) {
            out[i - 1] = v.clone();
        }
        out
    }
}

pub fn load_custom(path: &Path, support: usize) -> Result<CustomCoefficients> {
    if support == 0 {
        return Err(Error::invalid(
            "custom coefficient support must be positive",
        ));
    }
    let file = File::open(path).map_err(|source| Error::Io {
        path: path.to_path_buf(),
        source,
    })?;
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(false)
        .flexible(true)
        .trim(csv::Trim::All)
        .from_reader(file);

    let fail = |line: u64, msg: String| Error::Ingestion {
        path: path.to_path_buf(),
        line,
        msg,
    };

    let mut kind = None;
    let mut entries = BTreeMap::new();
    for record in reader.records() {
        let record = record.map_err(|e| {
            let line = e.position().map_or(0, |p| p.line());
            fail(line, e.to_string())
        })?;
        let line = record.position().map_or(0, |p| p.line());
        if record.iter().all(str::is_empty) {
            continue;
        }
        if kind.is_none() {
            let header = record.get(0).unwrap_or_default();
            if record.len() != 1 {
                return Err(fail(
                    line,
                    "header must be a single field `fprime` or `fhat`".into(),
                ));
            }
            kind = Some(header.parse::<CoefficientKind>().map_err(|_| {
                fail(
                    line,
                    format!("unknown header `{header}`; expected `fprime` or `fhat`"),
                )
            })?);
            continue;
        }
        if record.len() != 2 {
            return Err(fail(
                line,
                format!("expected `index,value`, got {} fields", record.len()),
            ));
        }
        let index: usize = record[0].parse().map_err(|_| {
            fail(
                line,
                format!("index `{}` is not a positive integer", &record[0]),
            )
        })?;
        if index == 0 || index > support {
            return Err(fail(line, format!("index {index} outside 1..={support}")));
        }
        let value = parse_exact(&record[1])
            .ok_or_else(|| fail(line, format!("value `{}` is not numeric", &record[1])))?;
        if entries.insert(index, value).is_some() {
            return Err(fail(line, format!("duplicate index {index}")));
        }
    }
    let kind = kind.ok_or_else(|| fail(1, "missing `fprime`/`fhat` header".into()))?;
    Ok(CustomCoefficients {
        kind,
        support,
        entries,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::io::Write;

    fn write(contents: &str) -> tempfile::NamedTempFile {
        let mut f = tempfile::NamedTempFile::new().unwrap();
        f.write_all(contents.as_bytes()).unwrap();
        f
    }

    fn q(p: i64, r: i64) -> Exact {
        Exact::new(p.into(), r.into())
    }

    #[test]
    fn unit_equivalent() {
        let f = write("fprime\n1,1\n");
        let c = load_custom(f.path(), 10).unwrap();
        assert_eq!(c.kind, CoefficientKind::Fprime);
        assert_eq!(c.dense(3), vec![q(1, 1), q(0, 1), q(0, 1)]);
    }

    #[test]
    fn power_prefix() {
        let f = write("fprime\n1,1\n2,0.5\n4,0.25\n");
        let c = load_custom(f.path(), 4).unwrap();
        assert_eq!(c.dense(4), vec![q(1, 1), q(1, 2), q(0, 1), q(1, 4)]);
    }

    #[test]
    fn fhat_header_and_fractions() {
        let f = write("fhat\n3,-2/7\n");
        let c = load_custom(f.path(), 5).unwrap();
        assert_eq!(c.kind, CoefficientKind::Fhat);
        assert_eq!(c.entries[&3], q(-2, 7));
    }

    fn err_line(contents: &str, support: usize) -> (u64, String) {
        let f = write(contents);
        match load_custom(f.path(), support) {
            Err(Error::Ingestion { line, msg, .. }) => (line, msg),
            other => panic!("expected ingestion error, got {other:?}"),
        }
    }

    #[test]
    fn validation_errors_name_the_line() {
        let (line, msg) = err_line("fprime\n1,1\n2,3\n1,4\n", 10);
        assert_eq!(line, 4);
        assert!(msg.contains("duplicate"));

        let (line, msg) = err_line("fprime\n1,1\n11,3\n", 10);
        assert_eq!(line, 3);
        assert!(msg.contains("outside"));

        let (line, msg) = err_line("fprime\n1,abc\n", 10);
        assert_eq!(line, 2);
        assert!(msg.contains("not numeric"));

        let (line, _) = err_line("weights\n1,1\n", 10);
        assert_eq!(line, 1);

        let (line, _) = err_line("fprime\n0,1\n", 10);
        assert_eq!(line, 2);
    }

    #[test]
    fn missing_file_is_io_error() {
        let err = load_custom(Path::new("/nonexistent/coeffs.csv"), 3).unwrap_err();
        assert!(matches!(err, Error::Io { .. }));
    }
}
