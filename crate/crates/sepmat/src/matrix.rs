//! Binary testing matrices and item supports.
//!
//! A `t x n` matrix pools `n` items into `t` tests: entry `(i, j)` is 1 when
//! item `j` takes part in test `i`. The noiseless pooled outcome of a set of
//! positive items is the Boolean sum (coordinate-wise OR) of their columns.
//!
//! Item indices are 1-based everywhere in the public API, matching the
//! convention used in reports and witnesses. Row positions inside a column's
//! [`BitVec`] remain 0-based.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::bits::BitVec;
use crate::{Error, Result};

/// A sorted set of distinct 1-based column (item) indices.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct SupportSet {
    indices: Vec<usize>,
}

impl SupportSet {
    /// Builds a support from arbitrary 1-based indices; sorts and dedups.
    pub fn from_indices<I: IntoIterator<Item = usize>>(indices: I) -> Self {
        let mut v: Vec<usize> = indices.into_iter().collect();
        v.sort_unstable();
        v.dedup();
        SupportSet { indices: v }
    }

    pub fn singleton(index: usize) -> Self {
        SupportSet {
            indices: vec![index],
        }
    }

    pub fn empty() -> Self {
        SupportSet {
            indices: Vec::new(),
        }
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.indices.len()
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        self.indices.is_empty()
    }

    #[inline]
    pub fn contains(&self, index: usize) -> bool {
        self.indices.binary_search(&index).is_ok()
    }

    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        self.indices.iter().copied()
    }

    pub fn as_slice(&self) -> &[usize] {
        &self.indices
    }

    pub fn union(&self, other: &Self) -> Self {
        SupportSet::from_indices(self.iter().chain(other.iter()))
    }
}

impl fmt::Display for SupportSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (k, idx) in self.indices.iter().enumerate() {
            if k > 0 {
                write!(f, ",")?;
            }
            write!(f, "{idx}")?;
        }
        write!(f, "}}")
    }
}

impl FromIterator<usize> for SupportSet {
    fn from_iter<I: IntoIterator<Item = usize>>(iter: I) -> Self {
        SupportSet::from_indices(iter)
    }
}

/// A `t x n` binary testing matrix, stored column-major as packed bit vectors.
///
/// Duplicate and all-zero columns are representable; the property checkers
/// report them as violations rather than the constructor rejecting them.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BinaryMatrix {
    t: usize,
    n: usize,
    columns: Vec<BitVec>,
}

/// JSON form of a matrix: `{"t":2,"n":2,"rows":["10","01"]}`.
#[derive(Serialize, Deserialize)]
struct MatrixJson {
    t: usize,
    n: usize,
    rows: Vec<String>,
}

impl BinaryMatrix {
    /// Builds a matrix from columns; all columns must share one length `t >= 1`.
    pub fn from_columns(columns: Vec<BitVec>) -> Result<Self> {
        if columns.is_empty() {
            return Err(Error::InvalidParameter(
                "matrix needs at least one column".to_string(),
            ));
        }
        let t = columns[0].len();
        for col in &columns {
            if col.len() != t {
                return Err(Error::LengthMismatch {
                    left: t,
                    right: col.len(),
                });
            }
        }
        Ok(BinaryMatrix {
            t,
            n: columns.len(),
            columns,
        })
    }

    /// Builds a matrix from row strings of `0`/`1`, top row first.
    pub fn from_rows(rows: &[&str]) -> Result<Self> {
        let t = rows.len();
        if t == 0 {
            return Err(Error::InvalidParameter("matrix needs rows".to_string()));
        }
        let n = rows[0].len();
        if n == 0 {
            return Err(Error::InvalidParameter("matrix needs columns".to_string()));
        }
        let mut columns = vec![BitVec::zeros(t); n];
        for (i, row) in rows.iter().enumerate() {
            if row.len() != n {
                return Err(Error::LengthMismatch {
                    left: n,
                    right: row.len(),
                });
            }
            for (j, c) in row.chars().enumerate() {
                match c {
                    '0' => {}
                    '1' => columns[j].set(i, true),
                    other => {
                        return Err(Error::InvalidParameter(format!(
                            "invalid matrix character '{other}'"
                        )))
                    }
                }
            }
        }
        Ok(BinaryMatrix { t, n, columns })
    }

    /// Number of tests (rows).
    #[inline]
    pub fn tests(&self) -> usize {
        self.t
    }

    /// Number of items (columns).
    #[inline]
    pub fn items(&self) -> usize {
        self.n
    }

    /// Column of item `j` (1-based).
    ///
    /// # Panics
    /// Panics unless `1 <= j <= n`.
    #[inline]
    pub fn column(&self, j: usize) -> &BitVec {
        assert!(j >= 1 && j <= self.n, "item index {j} out of range 1..={}", self.n);
        &self.columns[j - 1]
    }

    /// Entry of item `j` in test `i` (both 1-based).
    #[inline]
    pub fn entry(&self, i: usize, j: usize) -> bool {
        assert!(i >= 1 && i <= self.t, "test index {i} out of range 1..={}", self.t);
        self.column(j).get(i - 1)
    }

    pub fn columns(&self) -> &[BitVec] {
        &self.columns
    }

    fn check_support(&self, s: &SupportSet) -> Result<()> {
        if s.is_empty() {
            return Err(Error::EmptySupport);
        }
        for j in s.iter() {
            if j < 1 || j > self.n {
                return Err(Error::BadIndex { item: j, n: self.n });
            }
        }
        Ok(())
    }

    /// Boolean sum (coordinate-wise OR) of the columns selected by `s`.
    ///
    /// This is the noiseless pooled outcome when exactly the items of `s`
    /// are positive.
    pub fn boolean_sum(&self, s: &SupportSet) -> Result<BitVec> {
        self.check_support(s)?;
        let mut out = BitVec::zeros(self.t);
        for j in s.iter() {
            out.or_assign(&self.columns[j - 1]);
        }
        Ok(out)
    }

    /// Row `i` (1-based) rendered as a string of `0`/`1`.
    pub fn row_string(&self, i: usize) -> String {
        assert!(i >= 1 && i <= self.t);
        (1..=self.n)
            .map(|j| if self.entry(i, j) { '1' } else { '0' })
            .collect()
    }

    /// Serializes to the plain text format:
    /// header `"<t> <n>"`, then `t` rows of `n` characters, LF line endings.
    pub fn to_text(&self) -> String {
        let mut out = format!("{} {}\n", self.t, self.n);
        for i in 1..=self.t {
            out.push_str(&self.row_string(i));
            out.push('\n');
        }
        out
    }

    /// Parses the plain text format produced by [`BinaryMatrix::to_text`].
    ///
    /// Errors carry the 1-based line number of the offending line.
    pub fn parse_text(text: &str) -> Result<Self> {
        let mut lines = text.split('\n');
        let header = lines.next().ok_or_else(|| Error::Parse {
            line: 1,
            msg: "missing header".to_string(),
        })?;
        let mut parts = header.split(' ');
        let (t, n) = match (parts.next(), parts.next(), parts.next()) {
            (Some(a), Some(b), None) => {
                let t: usize = a.parse().map_err(|_| Error::Parse {
                    line: 1,
                    msg: format!("bad row count '{a}'"),
                })?;
                let n: usize = b.parse().map_err(|_| Error::Parse {
                    line: 1,
                    msg: format!("bad column count '{b}'"),
                })?;
                (t, n)
            }
            _ => {
                return Err(Error::Parse {
                    line: 1,
                    msg: "header must be '<t> <n>'".to_string(),
                })
            }
        };
        if t == 0 || n == 0 {
            return Err(Error::Parse {
                line: 1,
                msg: "dimensions must be positive".to_string(),
            });
        }
        let mut columns = vec![BitVec::zeros(t); n];
        for i in 0..t {
            let line_no = i + 2;
            let row = lines.next().ok_or_else(|| Error::Parse {
                line: line_no,
                msg: "missing row".to_string(),
            })?;
            if row.len() != n {
                return Err(Error::Parse {
                    line: line_no,
                    msg: format!("expected {n} characters, found {}", row.len()),
                });
            }
            for (j, c) in row.chars().enumerate() {
                match c {
                    '0' => {}
                    '1' => columns[j].set(i, true),
                    other => {
                        return Err(Error::Parse {
                            line: line_no,
                            msg: format!("invalid character '{other}'"),
                        })
                    }
                }
            }
        }
        // Only an optional final newline may remain.
        for (extra, rest) in lines.enumerate() {
            if !rest.is_empty() {
                return Err(Error::Parse {
                    line: t + 2 + extra,
                    msg: "trailing content after last row".to_string(),
                });
            }
        }
        Ok(BinaryMatrix { t, n, columns })
    }

    /// Serializes to the JSON form `{"t":..,"n":..,"rows":[..]}`.
    pub fn to_json(&self) -> String {
        let rows = (1..=self.t).map(|i| self.row_string(i)).collect();
        serde_json::to_string(&MatrixJson {
            t: self.t,
            n: self.n,
            rows,
        })
        .expect("matrix JSON serialization cannot fail")
    }

    /// Parses the JSON form `{"t":..,"n":..,"rows":[..]}`.
    pub fn parse_json(text: &str) -> Result<Self> {
        let raw: MatrixJson = serde_json::from_str(text).map_err(|e| Error::Parse {
            line: e.line(),
            msg: e.to_string(),
        })?;
        if raw.rows.len() != raw.t {
            return Err(Error::Parse {
                line: 1,
                msg: format!("expected {} rows, found {}", raw.t, raw.rows.len()),
            });
        }
        let rows: Vec<&str> = raw.rows.iter().map(|s| s.as_str()).collect();
        let m = BinaryMatrix::from_rows(&rows).map_err(|e| Error::Parse {
            line: 1,
            msg: e.to_string(),
        })?;
        if m.items() != raw.n {
            return Err(Error::Parse {
                line: 1,
                msg: format!("expected {} columns, found {}", raw.n, m.items()),
            });
        }
        Ok(m)
    }

    /// True if some pair of columns is identical; returns the first pair.
    pub fn duplicate_columns(&self) -> Option<(usize, usize)> {
        for j in 1..=self.n {
            for k in (j + 1)..=self.n {
                if self.column(j) == self.column(k) {
                    return Some((j, k));
                }
            }
        }
        None
    }
}

impl Serialize for BinaryMatrix {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let rows = (1..=self.t).map(|i| self.row_string(i)).collect();
        MatrixJson {
            t: self.t,
            n: self.n,
            rows,
        }
        .serialize(serializer)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    pub(crate) const EXAMPLE_7X8: &str = "7 8\n10000001\n11000000\n01100100\n00110000\n00010010\n00001100\n00001011\n";

    fn example() -> BinaryMatrix {
        BinaryMatrix::parse_text(EXAMPLE_7X8).unwrap()
    }

    #[test]
    fn parse_identity() {
        let m = BinaryMatrix::parse_text("2 2\n10\n01\n").unwrap();
        assert_eq!(m.tests(), 2);
        assert_eq!(m.items(), 2);
        assert!(m.entry(1, 1) && m.entry(2, 2));
        assert!(!m.entry(1, 2) && !m.entry(2, 1));
    }

    #[test]
    fn text_roundtrip() {
        let m = example();
        assert_eq!(m.to_text(), EXAMPLE_7X8);
        assert_eq!(BinaryMatrix::parse_text(&m.to_text()).unwrap(), m);
    }

    #[test]
    fn parse_rejects_bad_character_with_line() {
        let err = BinaryMatrix::parse_text("2 2\n1a\n01\n").unwrap_err();
        assert_eq!(
            err,
            Error::Parse {
                line: 2,
                msg: "invalid character 'a'".to_string()
            }
        );
    }

    #[test]
    fn parse_rejects_ragged_rows() {
        let err = BinaryMatrix::parse_text("2 3\n101\n01\n").unwrap_err();
        assert!(matches!(err, Error::Parse { line: 3, .. }));
    }

    #[test]
    fn parse_rejects_header_mismatch() {
        assert!(matches!(
            BinaryMatrix::parse_text("2\n10\n01\n"),
            Err(Error::Parse { line: 1, .. })
        ));
        assert!(matches!(
            BinaryMatrix::parse_text("2 2\n10\n"),
            Err(Error::Parse { line: 3, .. })
        ));
        assert!(matches!(
            BinaryMatrix::parse_text("2 2\n10\n01\n11\n"),
            Err(Error::Parse { .. })
        ));
    }

    #[test]
    fn json_roundtrip() {
        let m = example();
        let j = m.to_json();
        assert_eq!(BinaryMatrix::parse_json(&j).unwrap(), m);
        assert!(j.starts_with("{\"t\":7,\"n\":8,"));
    }

    #[test]
    fn boolean_sum_examples() {
        let m = example();
        let r = m.boolean_sum(&SupportSet::from_indices([1, 3])).unwrap();
        assert_eq!(r.to_string(), "1111000");
        let r = m.boolean_sum(&SupportSet::from_indices([2, 6])).unwrap();
        assert_eq!(r.to_string(), "0110010");
        // singleton sum is the column itself
        for j in 1..=8 {
            let r = m.boolean_sum(&SupportSet::singleton(j)).unwrap();
            assert_eq!(&r, m.column(j));
        }
    }

    #[test]
    fn boolean_sum_errors() {
        let m = example();
        assert_eq!(
            m.boolean_sum(&SupportSet::empty()).unwrap_err(),
            Error::EmptySupport
        );
        assert_eq!(
            m.boolean_sum(&SupportSet::from_indices([9])).unwrap_err(),
            Error::BadIndex { item: 9, n: 8 }
        );
        assert_eq!(
            m.boolean_sum(&SupportSet::from_indices([0, 1])).unwrap_err(),
            Error::BadIndex { item: 0, n: 8 }
        );
    }

    #[test]
    fn covers_paper_example() {
        let m = example();
        let sum13 = m.boolean_sum(&SupportSet::from_indices([1, 3])).unwrap();
        assert!(sum13.covers(m.column(2)));
    }

    #[test]
    fn support_set_dedups_and_sorts() {
        let s = SupportSet::from_indices([3, 1, 3, 2]);
        assert_eq!(s.as_slice(), &[1, 2, 3]);
        assert_eq!(s.to_string(), "{1,2,3}");
    }
}
