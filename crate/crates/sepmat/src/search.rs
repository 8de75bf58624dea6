//! Extremal search: the maximum number of columns a `t`-row matrix can have
//! while staying d-disjunct, strongly d-separable, or d̄-separable.
//!
//! Columns are drawn from the pool of all nonzero `{0,1}^t` vectors (any
//! matrix satisfying one of these properties at `d >= 2` has distinct,
//! nonzero columns) and explored depth-first in strictly increasing
//! lexicographic order, so results are canonical and deterministic. Adding a
//! column re-tests only the subsets it can affect: those containing it, and
//! for the strong property also those whose Boolean sum covers it. Row
//! permutation symmetry is not broken; exhaustive claims are unaffected,
//! only speed.

use std::collections::HashMap;

use itertools::Itertools;
use serde::ser::SerializeStruct;
use serde::{Serialize, Serializer};

use crate::bits::BitVec;
use crate::matrix::BinaryMatrix;
use crate::properties::{is_bar_separable, is_disjunct, is_ssm, PropertyKind};
use crate::{Error, Result};

/// Which property the search maximizes over.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SearchProperty {
    Disjunct,
    StronglySeparable,
    BarSeparable,
}

impl SearchProperty {
    pub fn kind(self) -> PropertyKind {
        match self {
            SearchProperty::Disjunct => PropertyKind::Disjunct,
            SearchProperty::StronglySeparable => PropertyKind::StronglySeparable,
            SearchProperty::BarSeparable => PropertyKind::BarSeparable,
        }
    }

    /// Smallest column count at which the property check is defined.
    fn min_valid(self, d: usize) -> usize {
        match self {
            SearchProperty::Disjunct => d + 1,
            _ => d,
        }
    }
}

/// Search controls: an optional budget of elementary sub-checks and an
/// optional warm-start matrix accepted as a lower-bound certificate.
#[derive(Debug, Clone, Default)]
pub struct SearchOptions {
    pub budget: Option<u64>,
    pub initial: Option<BinaryMatrix>,
}

/// Result of a maximization run.
#[derive(Debug, Clone, PartialEq)]
pub struct SearchResult {
    pub property: PropertyKind,
    pub d: usize,
    pub t: usize,
    /// Largest column count found (0 when no valid matrix exists).
    pub max_n: usize,
    /// A matrix attaining `max_n`, absent when `max_n == 0`.
    pub certificate: Option<BinaryMatrix>,
    /// True when the full canonical search tree was explored, so `max_n` is
    /// the proven maximum; false when the budget ran out first.
    pub exhaustive: bool,
    /// Elementary sub-checks performed (the budget unit).
    pub checks: u64,
}

impl SearchResult {
    /// Finite-rate value `log2(max_n)/t`, if any matrix was found.
    pub fn rate(&self) -> Option<f64> {
        (self.max_n > 0).then(|| (self.max_n as f64).log2() / self.t as f64)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("search result serialization cannot fail")
    }
}

impl Serialize for SearchResult {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let mut st = serializer.serialize_struct("SearchResult", 7)?;
        st.serialize_field("property", &self.property)?;
        st.serialize_field("d", &self.d)?;
        st.serialize_field("t", &self.t)?;
        st.serialize_field("max_n", &self.max_n)?;
        st.serialize_field("rate", &self.rate())?;
        st.serialize_field("exhaustive", &self.exhaustive)?;
        st.serialize_field("checks", &self.checks)?;
        st.serialize_field(
            "certificate",
            &self.certificate.as_ref().map(|m| m.to_text()),
        )?;
        st.end()
    }
}

struct Budget {
    used: u64,
    limit: Option<u64>,
    exhausted: bool,
}

impl Budget {
    fn new(limit: Option<u64>) -> Self {
        Budget {
            used: 0,
            limit,
            exhausted: false,
        }
    }

    /// Spends one sub-check; false once the budget is gone.
    #[inline]
    fn spend(&mut self) -> bool {
        if self.exhausted {
            return false;
        }
        self.used += 1;
        if let Some(limit) = self.limit {
            if self.used >= limit {
                self.exhausted = true;
            }
        }
        true
    }
}

fn or_of(cols: &[BitVec], indices: &[usize]) -> BitVec {
    let mut sum = BitVec::zeros(cols[0].len());
    for &i in indices {
        sum.or_assign(&cols[i]);
    }
    sum
}

/// Private-row test for one base subset against the full current column set.
fn ssm_subset_ok(cols: &[BitVec], f0: &[usize], extra: Option<&BitVec>) -> bool {
    let t = cols[0].len();
    let all = |idx: usize| -> &BitVec {
        if idx < cols.len() {
            &cols[idx]
        } else {
            extra.expect("index beyond cols only with an extra column")
        }
    };
    let total = cols.len() + extra.is_some() as usize;
    let mut sum = BitVec::zeros(t);
    for &i in f0 {
        sum.or_assign(all(i));
    }
    let mut seen_once = BitVec::zeros(t);
    let mut seen_multi = BitVec::zeros(t);
    for idx in 0..total {
        let col = all(idx);
        if sum.covers(col) {
            seen_multi.or_assign(&col.and(&seen_once));
            seen_once.or_assign(col);
        }
    }
    let private = seen_once.and_not(&seen_multi);
    f0.iter().all(|&i| all(i).intersects(&private))
}

/// Incremental checker state; `try_push` returns `None` when the budget runs
/// out mid-check.
enum State {
    Disjunct {
        d: usize,
        cols: Vec<BitVec>,
    },
    Ssm {
        d: usize,
        cols: Vec<BitVec>,
    },
    Separable {
        d: usize,
        cols: Vec<BitVec>,
        sums: HashMap<BitVec, usize>,
        added: Vec<Vec<BitVec>>,
    },
}

impl State {
    fn new(property: SearchProperty, d: usize) -> Self {
        match property {
            SearchProperty::Disjunct => State::Disjunct { d, cols: Vec::new() },
            SearchProperty::StronglySeparable => State::Ssm { d, cols: Vec::new() },
            SearchProperty::BarSeparable => State::Separable {
                d,
                cols: Vec::new(),
                sums: HashMap::new(),
                added: Vec::new(),
            },
        }
    }

    fn len(&self) -> usize {
        match self {
            State::Disjunct { cols, .. } | State::Ssm { cols, .. } => cols.len(),
            State::Separable { cols, .. } => cols.len(),
        }
    }

    fn columns(&self) -> &[BitVec] {
        match self {
            State::Disjunct { cols, .. } | State::Ssm { cols, .. } => cols,
            State::Separable { cols, .. } => cols,
        }
    }

    fn try_push(&mut self, new_col: &BitVec, budget: &mut Budget) -> Option<bool> {
        match self {
            State::Disjunct { d, cols } => {
                let d = *d;
                if cols.len() + 1 > d {
                    // subsets containing the new column, against every target
                    for subset in (0..cols.len()).combinations(d - 1) {
                        let mut sum = new_col.clone();
                        for &i in &subset {
                            sum.or_assign(&cols[i]);
                        }
                        for (target, col) in cols.iter().enumerate() {
                            if subset.contains(&target) {
                                continue;
                            }
                            if !budget.spend() {
                                return None;
                            }
                            if sum.covers(col) {
                                return Some(false);
                            }
                        }
                    }
                    // old subsets against the new column as target
                    if cols.len() >= d {
                        for subset in (0..cols.len()).combinations(d) {
                            if !budget.spend() {
                                return None;
                            }
                            if or_of(cols, &subset).covers(new_col) {
                                return Some(false);
                            }
                        }
                    }
                }
                cols.push(new_col.clone());
                Some(true)
            }
            State::Ssm { d, cols } => {
                let d = *d;
                if cols.len() + 1 >= d {
                    let new_idx = cols.len();
                    // bases containing the new column
                    for subset in (0..cols.len()).combinations(d - 1) {
                        if !budget.spend() {
                            return None;
                        }
                        let mut f0 = subset.clone();
                        f0.push(new_idx);
                        if !ssm_subset_ok(cols, &f0, Some(new_col)) {
                            return Some(false);
                        }
                    }
                    // old bases whose Boolean sum covers the new column: their
                    // covered set grows, so their private rows need re-checking
                    if cols.len() >= d {
                        for subset in (0..cols.len()).combinations(d) {
                            if or_of(cols, &subset).covers(new_col) {
                                if !budget.spend() {
                                    return None;
                                }
                                if !ssm_subset_ok(cols, &subset, Some(new_col)) {
                                    return Some(false);
                                }
                            }
                        }
                    }
                }
                cols.push(new_col.clone());
                Some(true)
            }
            State::Separable { d, cols, sums, added } => {
                let d = *d;
                // sums of every subset that contains the new column
                let mut fresh: Vec<BitVec> = Vec::new();
                for size in 0..=(d - 1).min(cols.len()) {
                    for subset in (0..cols.len()).combinations(size) {
                        if !budget.spend() {
                            return None;
                        }
                        let mut sum = new_col.clone();
                        for &i in &subset {
                            sum.or_assign(&cols[i]);
                        }
                        if sums.contains_key(&sum) || fresh.contains(&sum) {
                            return Some(false);
                        }
                        fresh.push(sum);
                    }
                }
                for sum in &fresh {
                    *sums.entry(sum.clone()).or_insert(0) += 1;
                }
                added.push(fresh);
                cols.push(new_col.clone());
                Some(true)
            }
        }
    }

    fn pop(&mut self) {
        match self {
            State::Disjunct { cols, .. } | State::Ssm { cols, .. } => {
                cols.pop();
            }
            State::Separable { cols, sums, added, .. } => {
                cols.pop();
                for sum in added.pop().expect("pop matches a successful push") {
                    match sums.get_mut(&sum) {
                        Some(1) => {
                            sums.remove(&sum);
                        }
                        Some(k) => *k -= 1,
                        None => unreachable!("sum was inserted on push"),
                    }
                }
            }
        }
    }
}

/// Column for `mask`, bit of row `i` (0-based) at position `t-1-i`, so that
/// ascending masks enumerate columns in lexicographic row-string order.
fn column_from_mask(mask: u64, t: usize) -> BitVec {
    let mut col = BitVec::zeros(t);
    for i in 0..t {
        if mask >> (t - 1 - i) & 1 == 1 {
            col.set(i, true);
        }
    }
    col
}

struct Best {
    n: usize,
    columns: Option<Vec<BitVec>>,
}

fn dfs(
    state: &mut State,
    pool: &[BitVec],
    start: usize,
    min_valid: usize,
    best: &mut Best,
    budget: &mut Budget,
) {
    for idx in start..pool.len() {
        if budget.exhausted {
            return;
        }
        // even taking every remaining column cannot beat the best
        if state.len() + (pool.len() - idx) <= best.n {
            return;
        }
        match state.try_push(&pool[idx], budget) {
            None => return,
            Some(false) => continue,
            Some(true) => {
                if state.len() >= min_valid && state.len() > best.n {
                    best.n = state.len();
                    best.columns = Some(state.columns().to_vec());
                }
                dfs(state, pool, idx + 1, min_valid, best, budget);
                state.pop();
            }
        }
    }
}

/// Runs the full (definition-level) checker for a warm-start matrix.
fn full_check(property: SearchProperty, m: &BinaryMatrix, d: usize) -> Result<bool> {
    let report = match property {
        SearchProperty::Disjunct => is_disjunct(m, d)?,
        SearchProperty::StronglySeparable => is_ssm(m, d)?,
        SearchProperty::BarSeparable => is_bar_separable(m, d)?,
    };
    Ok(report.holds)
}

/// Finds the largest `n` such that some `t x n` matrix satisfies the property
/// at the given `d`, by canonical depth-first search over nonzero columns.
///
/// Without a budget the search is exhaustive and only permitted for
/// `t <= 8`; with a budget it returns the best matrix found when the budget
/// runs out, flagged `exhaustive = false`.
pub fn search_max(
    property: SearchProperty,
    d: usize,
    t: usize,
    opts: &SearchOptions,
) -> Result<SearchResult> {
    if d < 2 {
        return Err(Error::DOutOfRange { d, min: 2, max: usize::MAX });
    }
    if !(1..=24).contains(&t) {
        return Err(Error::InvalidParameter(format!(
            "t={t} out of the supported range 1..=24"
        )));
    }
    if t > 8 && opts.budget.is_none() {
        return Err(Error::InvalidParameter(
            "exhaustive search requires t <= 8; pass a budget for larger t".to_string(),
        ));
    }

    let mut best = Best {
        n: 0,
        columns: None,
    };
    if let Some(init) = &opts.initial {
        if init.tests() != t {
            return Err(Error::LengthMismatch {
                left: t,
                right: init.tests(),
            });
        }
        if init.items() >= property.min_valid(d) && full_check(property, init, d)? {
            best.n = init.items();
            best.columns = Some(init.columns().to_vec());
        } else {
            return Err(Error::InvalidParameter(
                "warm-start matrix does not satisfy the property".to_string(),
            ));
        }
    }

    let pool: Vec<BitVec> = (1..(1u64 << t)).map(|mask| column_from_mask(mask, t)).collect();
    let mut state = State::new(property, d);
    let mut budget = Budget::new(opts.budget);
    dfs(
        &mut state,
        &pool,
        0,
        property.min_valid(d),
        &mut best,
        &mut budget,
    );

    let certificate = best
        .columns
        .map(|cols| BinaryMatrix::from_columns(cols).expect("pool columns share length t"));
    Ok(SearchResult {
        property: property.kind(),
        d,
        t,
        max_n: best.n,
        certificate,
        exhaustive: !budget.exhausted,
        checks: budget.used,
    })
}

/// Per-`t` maxima and finite rates for all three properties.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RateTableRow {
    pub t: usize,
    pub dm: RateEntry,
    pub ssm: RateEntry,
    pub sm: RateEntry,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RateEntry {
    pub max_n: usize,
    pub rate: Option<f64>,
    pub exhaustive: bool,
}

fn entry(property: SearchProperty, d: usize, t: usize, budget: Option<u64>) -> Result<RateEntry> {
    let result = search_max(property, d, t, &SearchOptions { budget, initial: None })?;
    Ok(RateEntry {
        max_n: result.max_n,
        rate: result.rate(),
        exhaustive: result.exhaustive,
    })
}

/// Computes `f(d,t)`, `n(d,t)` and `s(d̄,t)` for each `t`, each flagged
/// exhaustive (proven) or budget-limited (lower bound).
pub fn rate_table(
    d: usize,
    ts: impl IntoIterator<Item = usize>,
    budget: Option<u64>,
) -> Result<Vec<RateTableRow>> {
    ts.into_iter()
        .map(|t| {
            Ok(RateTableRow {
                t,
                dm: entry(SearchProperty::Disjunct, d, t, budget)?,
                ssm: entry(SearchProperty::StronglySeparable, d, t, budget)?,
                sm: entry(SearchProperty::BarSeparable, d, t, budget)?,
            })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::properties::is_ssm_bruteforce;

    fn exhaustive(property: SearchProperty, d: usize, t: usize) -> SearchResult {
        search_max(property, d, t, &SearchOptions::default()).unwrap()
    }

    /// Independent maximum: check every subset of nonzero columns with the
    /// full (non-incremental) verifier.
    fn oracle_max(property: SearchProperty, d: usize, t: usize) -> usize {
        let pool: Vec<BitVec> = (1..(1u64 << t)).map(|m| column_from_mask(m, t)).collect();
        let mut best = 0;
        for mask in 1u64..(1 << pool.len()) {
            let cols: Vec<BitVec> = (0..pool.len())
                .filter(|&i| mask >> i & 1 == 1)
                .map(|i| pool[i].clone())
                .collect();
            if cols.len() <= best || cols.len() < property.min_valid(d) {
                continue;
            }
            let m = BinaryMatrix::from_columns(cols).unwrap();
            if full_check(property, &m, d).unwrap() {
                best = m.items();
            }
        }
        best
    }

    #[test]
    fn ssm_t2_maximum_is_2() {
        let r = exhaustive(SearchProperty::StronglySeparable, 2, 2);
        assert_eq!(r.max_n, 2);
        assert!(r.exhaustive);
        let cert = r.certificate.unwrap();
        assert!(is_ssm(&cert, 2).unwrap().holds);
        // the lex-first optimum is the permuted identity {01, 10}
        assert_eq!(cert.to_text(), "2 2\n01\n10\n");
    }

    #[test]
    fn ssm_t3_maximum_is_3() {
        let r = exhaustive(SearchProperty::StronglySeparable, 2, 3);
        assert_eq!(r.max_n, 3);
        assert!(r.exhaustive);
        let cert = r.certificate.unwrap();
        assert!(is_ssm(&cert, 2).unwrap().holds);
        assert!(is_ssm_bruteforce(&cert, 2, false).unwrap().holds);
    }

    #[test]
    fn search_matches_bruteforce_oracle_small_t() {
        for t in 2..=3 {
            for property in [
                SearchProperty::Disjunct,
                SearchProperty::StronglySeparable,
                SearchProperty::BarSeparable,
            ] {
                let got = exhaustive(property, 2, t);
                assert!(got.exhaustive);
                assert_eq!(
                    got.max_n,
                    oracle_max(property, 2, t),
                    "property {:?} at t={t}",
                    property.kind()
                );
            }
        }
    }

    #[test]
    fn certificates_reverify() {
        for t in 2..=4 {
            for property in [
                SearchProperty::Disjunct,
                SearchProperty::StronglySeparable,
                SearchProperty::BarSeparable,
            ] {
                let r = exhaustive(property, 2, t);
                if let Some(cert) = &r.certificate {
                    assert!(full_check(property, cert, 2).unwrap());
                    assert_eq!(cert.items(), r.max_n);
                }
            }
        }
    }

    #[test]
    fn budget_interrupts_and_flags() {
        let r = search_max(
            SearchProperty::StronglySeparable,
            2,
            5,
            &SearchOptions {
                budget: Some(50),
                initial: None,
            },
        )
        .unwrap();
        assert!(!r.exhaustive);
        assert!(r.checks <= 50);
        // whatever was found must still verify
        if let Some(cert) = &r.certificate {
            assert!(is_ssm(cert, 2).unwrap().holds);
        }
    }

    #[test]
    fn warm_start_is_kept_when_budget_finds_nothing_better() {
        let example = BinaryMatrix::parse_text(
            "7 8\n10000001\n11000000\n01100100\n00110000\n00010010\n00001100\n00001011\n",
        )
        .unwrap();
        let r = search_max(
            SearchProperty::StronglySeparable,
            2,
            7,
            &SearchOptions {
                budget: Some(10_000),
                initial: Some(example.clone()),
            },
        )
        .unwrap();
        assert!(r.max_n >= 8);
        let cert = r.certificate.unwrap();
        assert!(is_ssm(&cert, 2).unwrap().holds);
        assert!(cert.items() >= 8);
    }

    #[test]
    fn invalid_warm_start_rejected() {
        let bad = BinaryMatrix::from_rows(&["101", "110", "011"]).unwrap();
        let err = search_max(
            SearchProperty::StronglySeparable,
            2,
            3,
            &SearchOptions {
                budget: None,
                initial: Some(bad),
            },
        )
        .unwrap_err();
        assert!(matches!(err, Error::InvalidParameter(_)));
    }

    #[test]
    fn degenerate_t1_has_no_valid_matrix() {
        let r = exhaustive(SearchProperty::StronglySeparable, 2, 1);
        assert_eq!(r.max_n, 0);
        assert!(r.certificate.is_none());
        assert!(r.exhaustive);
        assert_eq!(r.rate(), None);
    }

    #[test]
    fn large_t_requires_budget() {
        assert!(matches!(
            search_max(SearchProperty::StronglySeparable, 2, 9, &SearchOptions::default()),
            Err(Error::InvalidParameter(_))
        ));
    }

    #[test]
    fn rate_table_chain_sanity() {
        let rows = rate_table(2, 2..=3, None).unwrap();
        assert_eq!(rows.len(), 2);
        for row in rows {
            assert!(row.dm.exhaustive && row.ssm.exhaustive && row.sm.exhaustive);
            assert!(row.dm.max_n <= row.ssm.max_n);
            assert!(row.ssm.max_n <= row.sm.max_n);
        }
    }

    #[test]
    fn rate_table_empty_range() {
        assert!(rate_table(2, std::iter::empty(), None).unwrap().is_empty());
    }

    #[test]
    fn monotone_in_t() {
        let values: Vec<usize> = (2..=4)
            .map(|t| exhaustive(SearchProperty::StronglySeparable, 2, t).max_n)
            .collect();
        for pair in values.windows(2) {
            assert!(pair[0] <= pair[1]);
        }
    }

    #[test]
    fn search_result_json_embeds_text_certificate() {
        let r = exhaustive(SearchProperty::StronglySeparable, 2, 2);
        let json = r.to_json();
        assert!(json.contains("\"property\":\"ssm\""));
        assert!(json.contains("\"certificate\":\"2 2\\n01\\n10\\n\""));
    }
}
