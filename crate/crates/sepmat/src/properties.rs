//! Verifiers for the group-testing matrix properties: d-disjunct (DM),
//! d̄-separable (SM), strongly d-separable (SSM) and its d̄ variant.
//!
//! Each verdict comes with a replayable witness when the property fails.
//! The SSM checker uses a private-row characterization: a matrix is a d-SSM
//! exactly when, for every d-subset F0 of columns with outcome
//! r = OR(F0) and covered set F_S = { j : r covers column j }, every member
//! of F0 owns a row where it is the only column of F_S with a 1. The
//! definition-level check (enumerating every subset whose OR equals r and
//! intersecting) is kept as a brute-force oracle, and the test suite gates
//! the two against each other.

use itertools::Itertools;
use serde::Serialize;

use crate::bits::BitVec;
use crate::matrix::{BinaryMatrix, SupportSet};
use crate::{Error, Result};

/// Which matrix/code property a report refers to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum PropertyKind {
    /// d-disjunct matrix.
    #[serde(rename = "dm")]
    Disjunct,
    /// d̄-separable matrix.
    #[serde(rename = "sm")]
    BarSeparable,
    /// Strongly d-separable matrix.
    #[serde(rename = "ssm")]
    StronglySeparable,
    /// Strongly d̄-separable matrix (all subset sizes 1..=d).
    #[serde(rename = "ssm-bar")]
    BarStronglySeparable,
    /// Strongly d̄-separable q-ary code.
    #[serde(rename = "ssc")]
    StronglySeparableCode,
}

/// Evidence that a property fails; replayable against the definition.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Witness {
    /// DM violation: the Boolean sum of `subset` covers column `covered`.
    Covered { subset: SupportSet, covered: usize },
    /// SM violation: two distinct subsets with equal Boolean sums.
    EqualSums { first: SupportSet, second: SupportSet },
    /// SSM violation (private-row form): `member` of `subset` has no row
    /// where it is the only covered column with a 1.
    NoPrivateRow { subset: SupportSet, member: usize },
    /// SSM/SSC violation (definition form): `frame` reproduces the outcome
    /// (or descendant code) of `subset` without containing `member`.
    FrameExcludes {
        subset: SupportSet,
        frame: SupportSet,
        member: usize,
    },
    /// SSC violation (private-pair form): `member` of `subset` has no
    /// coordinate where its symbol is unique among the matching words.
    NoPrivatePair { subset: SupportSet, member: usize },
}

/// Outcome of a property check, with a witness exactly when it fails.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PropertyReport {
    pub property: PropertyKind,
    pub d: usize,
    pub holds: bool,
    pub witness: Option<Witness>,
}

impl PropertyReport {
    fn holds(property: PropertyKind, d: usize) -> Self {
        PropertyReport {
            property,
            d,
            holds: true,
            witness: None,
        }
    }

    fn violated(property: PropertyKind, d: usize, witness: Witness) -> Self {
        PropertyReport {
            property,
            d,
            holds: false,
            witness: Some(witness),
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("report serialization cannot fail")
    }
}

impl Witness {
    /// Replays a matrix witness against the definitions; true iff it
    /// demonstrates a genuine violation on `m`.
    pub fn verify_matrix(&self, m: &BinaryMatrix) -> bool {
        match self {
            Witness::Covered { subset, covered } => {
                if subset.contains(*covered) {
                    return false;
                }
                match m.boolean_sum(subset) {
                    Ok(sum) => sum.covers(m.column(*covered)),
                    Err(_) => false,
                }
            }
            Witness::EqualSums { first, second } => {
                if first == second || first.is_empty() || second.is_empty() {
                    return false;
                }
                match (m.boolean_sum(first), m.boolean_sum(second)) {
                    (Ok(a), Ok(b)) => a == b,
                    _ => false,
                }
            }
            Witness::NoPrivateRow { subset, member } => {
                if !subset.contains(*member) {
                    return false;
                }
                let Ok(sum) = m.boolean_sum(subset) else {
                    return false;
                };
                let covered = covered_set(m, &sum);
                let col = m.column(*member);
                // No row of `member` may be private among the covered set.
                !(0..m.tests()).any(|i| {
                    col.get(i)
                        && covered
                            .iter()
                            .all(|j| j == *member || !m.column(j).get(i))
                })
            }
            Witness::FrameExcludes {
                subset,
                frame,
                member,
            } => {
                if !subset.contains(*member) || frame.contains(*member) || frame.is_empty() {
                    return false;
                }
                match (m.boolean_sum(subset), m.boolean_sum(frame)) {
                    (Ok(a), Ok(b)) => a == b,
                    _ => false,
                }
            }
            Witness::NoPrivatePair { .. } => false,
        }
    }
}

/// Columns of `m` covered by `sum`, as 1-based indices.
pub(crate) fn covered_set(m: &BinaryMatrix, sum: &BitVec) -> SupportSet {
    SupportSet::from_indices((1..=m.items()).filter(|&j| sum.covers(m.column(j))))
}

fn check_d(d: usize, min: usize, max: usize) -> Result<()> {
    if d < min || d > max {
        Err(Error::DOutOfRange { d, min, max })
    } else {
        Ok(())
    }
}

/// Checks whether `m` is a d-disjunct matrix: the Boolean sum of any `d`
/// columns covers no other column.
///
/// `d = 1` is accepted as the natural extension (no column covers another).
pub fn is_disjunct(m: &BinaryMatrix, d: usize) -> Result<PropertyReport> {
    let n = m.items();
    check_d(d, 1, n.saturating_sub(1))?;
    for subset in (1..=n).combinations(d) {
        let s = SupportSet::from_indices(subset.iter().copied());
        let sum = m.boolean_sum(&s)?;
        for j in 1..=n {
            if !s.contains(j) && sum.covers(m.column(j)) {
                return Ok(PropertyReport::violated(
                    PropertyKind::Disjunct,
                    d,
                    Witness::Covered {
                        subset: s,
                        covered: j,
                    },
                ));
            }
        }
    }
    Ok(PropertyReport::holds(PropertyKind::Disjunct, d))
}

/// Checks whether `m` is a d̄-separable matrix: the Boolean sums of all
/// nonempty column subsets of size at most `d` are pairwise distinct.
pub fn is_bar_separable(m: &BinaryMatrix, d: usize) -> Result<PropertyReport> {
    let n = m.items();
    check_d(d, 1, n)?;
    let mut seen: std::collections::HashMap<BitVec, SupportSet> = std::collections::HashMap::new();
    for k in 1..=d {
        for subset in (1..=n).combinations(k) {
            let s = SupportSet::from_indices(subset.iter().copied());
            let sum = m.boolean_sum(&s)?;
            if let Some(prev) = seen.get(&sum) {
                return Ok(PropertyReport::violated(
                    PropertyKind::BarSeparable,
                    d,
                    Witness::EqualSums {
                        first: prev.clone(),
                        second: s,
                    },
                ));
            }
            seen.insert(sum, s);
        }
    }
    Ok(PropertyReport::holds(PropertyKind::BarSeparable, d))
}

/// Rows where exactly one column of `cols` (given by 1-based indices) has a 1.
fn exactly_once_rows(m: &BinaryMatrix, cols: &[usize]) -> BitVec {
    let mut seen_once = BitVec::zeros(m.tests());
    let mut seen_multi = BitVec::zeros(m.tests());
    for &j in cols {
        let col = m.column(j);
        seen_multi.or_assign(&col.and(&seen_once));
        seen_once.or_assign(col);
    }
    seen_once.and_not(&seen_multi)
}

/// Checks whether `m` is a strongly d-separable matrix, using the
/// private-row characterization (word-parallel, `O(C(n,d) * tn)` overall).
///
/// Requires `2 <= d <= n`; the property is not defined for `n < d`.
pub fn is_ssm(m: &BinaryMatrix, d: usize) -> Result<PropertyReport> {
    let n = m.items();
    if n < 2 {
        return Err(Error::DOutOfRange { d, min: 2, max: n });
    }
    check_d(d, 2, n)?;
    for subset in (1..=n).combinations(d) {
        let s = SupportSet::from_indices(subset.iter().copied());
        let sum = m.boolean_sum(&s)?;
        let covered: Vec<usize> = (1..=n).filter(|&j| sum.covers(m.column(j))).collect();
        let private = exactly_once_rows(m, &covered);
        let violator = s.iter().find(|&j| !m.column(j).intersects(&private));
        if let Some(member) = violator {
            return Ok(PropertyReport::violated(
                PropertyKind::StronglySeparable,
                d,
                Witness::NoPrivateRow { subset: s, member },
            ));
        }
    }
    Ok(PropertyReport::holds(PropertyKind::StronglySeparable, d))
}

/// Definition-level SSM oracle: enumerates every nonempty column subset
/// whose Boolean sum equals the subset under test and intersects them all.
///
/// With `bar = true` the base subsets range over all sizes `1..=d`
/// (the d̄-SSM variant); otherwise only size exactly `d`.
///
/// Exponential in `n`; guarded to `n <= 20`.
pub fn is_ssm_bruteforce(m: &BinaryMatrix, d: usize, bar: bool) -> Result<PropertyReport> {
    let n = m.items();
    if n > 20 {
        return Err(Error::OracleScale(format!(
            "n={n} exceeds the 2^n subset enumeration limit of 20"
        )));
    }
    if n < 2 {
        return Err(Error::DOutOfRange { d, min: 2, max: n });
    }
    check_d(d, 2, n)?;
    let kind = if bar {
        PropertyKind::BarStronglySeparable
    } else {
        PropertyKind::StronglySeparable
    };

    // Boolean sums of all 2^n subsets, as flat packed blocks.
    let blocks = m.tests().div_ceil(64);
    let col_blocks: Vec<Vec<u64>> = (1..=n)
        .map(|j| {
            let mut b = vec![0u64; blocks];
            for i in m.column(j).iter_ones() {
                b[i / 64] |= 1 << (i % 64);
            }
            b
        })
        .collect();
    let total: usize = 1 << n;
    let mut table = vec![0u64; total * blocks];
    for mask in 1..total {
        let low = mask.trailing_zeros() as usize;
        let rest = mask & (mask - 1);
        for b in 0..blocks {
            table[mask * blocks + b] = table[rest * blocks + b] | col_blocks[low][b];
        }
    }
    let sum_eq = |a: usize, b: usize| table[a * blocks..(a + 1) * blocks] == table[b * blocks..(b + 1) * blocks];

    let sizes: Vec<usize> = if bar { (1..=d).collect() } else { vec![d] };
    for k in sizes {
        for subset in (0..n).combinations(k) {
            let f0_mask: usize = subset.iter().map(|&j| 1usize << j).sum();
            let mut intersection = total - 1; // all columns
            let mut bad_frame: Option<usize> = None;
            for frame in 1..total {
                if sum_eq(frame, f0_mask) {
                    intersection &= frame;
                    if bad_frame.is_none() && f0_mask & !frame != 0 {
                        bad_frame = Some(frame);
                    }
                }
            }
            if intersection != f0_mask {
                let frame = bad_frame.expect("intersection differs, so some frame omits a member");
                let member = (f0_mask & !frame).trailing_zeros() as usize + 1;
                return Ok(PropertyReport::violated(
                    kind,
                    d,
                    Witness::FrameExcludes {
                        subset: SupportSet::from_indices(subset.iter().map(|&j| j + 1)),
                        frame: SupportSet::from_indices(
                            (0..n).filter(|&j| frame & (1 << j) != 0).map(|j| j + 1),
                        ),
                        member,
                    },
                ));
            }
        }
    }
    Ok(PropertyReport::holds(kind, d))
}
