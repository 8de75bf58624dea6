//! q-ary strongly separable codes and their bridge to binary matrices.
//!
//! A `(t,n,q)` code is a set of `n` words of length `t` over `{0..q-1}`.
//! Its descendant code is the per-coordinate product of observed symbols; a
//! subset reproducing the descendant code of a base subset is a *frame* of
//! it. Strong d̄-separability asks that the intersection of all frames of any
//! base of size at most `d` be the base itself. Binary columns of a strongly
//! d-separable matrix form such a code, and conversely the one-hot expansion
//! of a strongly d̄-separable code is a strongly d-separable `tq x n` matrix;
//! both directions live here.

use itertools::Itertools;
use serde::{Deserialize, Serialize};

use crate::bits::BitVec;
use crate::matrix::{BinaryMatrix, SupportSet};
use crate::properties::{PropertyKind, PropertyReport, Witness};
use crate::{Error, Result};

/// Symbol type: alphabets up to 2^16 symbols.
pub type Symbol = u16;

/// A `(t,n,q)` code: `n` length-`t` words over `{0..q-1}`.
///
/// Duplicate words are representable (raw random codes have them); the
/// verifier rejects codes that are not duplicate-free.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QaryCode {
    t: usize,
    n: usize,
    q: usize,
    words: Vec<Vec<Symbol>>,
}

#[derive(Serialize, Deserialize)]
struct CodeJson {
    t: usize,
    n: usize,
    q: usize,
    words: Vec<Vec<Symbol>>,
}

impl QaryCode {
    pub fn new(q: usize, words: Vec<Vec<Symbol>>) -> Result<Self> {
        if q < 2 {
            return Err(Error::InvalidParameter(format!(
                "alphabet size q={q} must be at least 2"
            )));
        }
        if q > Symbol::MAX as usize + 1 {
            return Err(Error::InvalidParameter(format!(
                "alphabet size q={q} exceeds symbol range"
            )));
        }
        if words.is_empty() {
            return Err(Error::InvalidParameter("code needs at least one word".to_string()));
        }
        let t = words[0].len();
        if t == 0 {
            return Err(Error::InvalidParameter("words must have positive length".to_string()));
        }
        for w in &words {
            if w.len() != t {
                return Err(Error::LengthMismatch {
                    left: t,
                    right: w.len(),
                });
            }
            for &s in w {
                if s as usize >= q {
                    return Err(Error::InvalidParameter(format!(
                        "symbol {s} out of range for q={q}"
                    )));
                }
            }
        }
        Ok(QaryCode {
            t,
            n: words.len(),
            q,
            words,
        })
    }

    #[inline]
    pub fn length(&self) -> usize {
        self.t
    }

    #[inline]
    pub fn size(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn alphabet(&self) -> usize {
        self.q
    }

    /// Word `j` (1-based).
    pub fn word(&self, j: usize) -> &[Symbol] {
        assert!(j >= 1 && j <= self.n, "word index {j} out of range 1..={}", self.n);
        &self.words[j - 1]
    }

    pub fn words(&self) -> &[Vec<Symbol>] {
        &self.words
    }

    /// First pair of identical words, if any (1-based).
    pub fn duplicate_words(&self) -> Option<(usize, usize)> {
        for j in 2..=self.n {
            for i in 1..j {
                if self.words[i - 1] == self.words[j - 1] {
                    return Some((i, j));
                }
            }
        }
        None
    }

    /// Serializes to the text format: header `"<t> <n> <q>"`, then `n` lines
    /// of `t` space-separated decimal symbols.
    pub fn to_text(&self) -> String {
        let mut out = format!("{} {} {}\n", self.t, self.n, self.q);
        for w in &self.words {
            let line = w.iter().map(|s| s.to_string()).join(" ");
            out.push_str(&line);
            out.push('\n');
        }
        out
    }

    /// Parses the text format produced by [`QaryCode::to_text`].
    pub fn parse_text(text: &str) -> Result<Self> {
        let mut lines = text.split('\n');
        let header = lines.next().ok_or_else(|| Error::Parse {
            line: 1,
            msg: "missing header".to_string(),
        })?;
        let parts: Vec<&str> = header.split(' ').collect();
        if parts.len() != 3 {
            return Err(Error::Parse {
                line: 1,
                msg: "header must be '<t> <n> <q>'".to_string(),
            });
        }
        let parse_dim = |s: &str, what: &str| -> Result<usize> {
            s.parse().map_err(|_| Error::Parse {
                line: 1,
                msg: format!("bad {what} '{s}'"),
            })
        };
        let t = parse_dim(parts[0], "length")?;
        let n = parse_dim(parts[1], "size")?;
        let q = parse_dim(parts[2], "alphabet")?;
        let mut words = Vec::with_capacity(n);
        for k in 0..n {
            let line_no = k + 2;
            let line = lines.next().ok_or_else(|| Error::Parse {
                line: line_no,
                msg: "missing word".to_string(),
            })?;
            let symbols: Vec<&str> = line.split(' ').collect();
            if symbols.len() != t {
                return Err(Error::Parse {
                    line: line_no,
                    msg: format!("expected {t} symbols, found {}", symbols.len()),
                });
            }
            let mut word = Vec::with_capacity(t);
            for s in symbols {
                let v: usize = s.parse().map_err(|_| Error::Parse {
                    line: line_no,
                    msg: format!("bad symbol '{s}'"),
                })?;
                if v >= q {
                    return Err(Error::Parse {
                        line: line_no,
                        msg: format!("symbol {v} out of range for q={q}"),
                    });
                }
                word.push(v as Symbol);
            }
            words.push(word);
        }
        for (extra, rest) in lines.enumerate() {
            if !rest.is_empty() {
                return Err(Error::Parse {
                    line: n + 2 + extra,
                    msg: "trailing content after last word".to_string(),
                });
            }
        }
        QaryCode::new(q, words).map_err(|e| match e {
            Error::Parse { .. } => e,
            other => Error::Parse {
                line: 1,
                msg: other.to_string(),
            },
        })
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(&CodeJson {
            t: self.t,
            n: self.n,
            q: self.q,
            words: self.words.clone(),
        })
        .expect("code JSON serialization cannot fail")
    }

    pub fn parse_json(text: &str) -> Result<Self> {
        let raw: CodeJson = serde_json::from_str(text).map_err(|e| Error::Parse {
            line: e.line(),
            msg: e.to_string(),
        })?;
        if raw.words.len() != raw.n {
            return Err(Error::Parse {
                line: 1,
                msg: format!("expected {} words, found {}", raw.n, raw.words.len()),
            });
        }
        let code = QaryCode::new(raw.q, raw.words).map_err(|e| Error::Parse {
            line: 1,
            msg: e.to_string(),
        })?;
        if code.length() != raw.t {
            return Err(Error::Parse {
                line: 1,
                msg: format!("expected length {}, found {}", raw.t, code.length()),
            });
        }
        Ok(code)
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
}

impl Serialize for QaryCode {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        CodeJson {
            t: self.t,
            n: self.n,
            q: self.q,
            words: self.words.clone(),
        }
        .serialize(serializer)
    }
}

/// Per-coordinate symbol sets; stands for the (never materialized) product
/// set `C(1) x .. x C(t)`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DescendantCode {
    sets: Vec<Vec<Symbol>>,
}

impl DescendantCode {
    /// Symbols observed at coordinate `i` (1-based), sorted.
    pub fn coordinate(&self, i: usize) -> &[Symbol] {
        &self.sets[i - 1]
    }

    pub fn coordinates(&self) -> usize {
        self.sets.len()
    }

    /// Number of words in the implicit product set.
    pub fn descendant_count(&self) -> u128 {
        self.sets
            .iter()
            .fold(1u128, |acc, s| acc.saturating_mul(s.len() as u128))
    }

    /// Membership test against the implicit product set.
    pub fn contains(&self, word: &[Symbol]) -> bool {
        word.len() == self.sets.len()
            && word
                .iter()
                .zip(&self.sets)
                .all(|(v, set)| set.binary_search(v).is_ok())
    }
}

/// Descendant code of the words selected by `s`: the symbols each selected
/// word exhibits, coordinate by coordinate.
pub fn descendant(code: &QaryCode, s: &SupportSet) -> Result<DescendantCode> {
    code.check_support(s)?;
    let mut sets = vec![Vec::new(); code.length()];
    for j in s.iter() {
        for (i, &v) in code.word(j).iter().enumerate() {
            sets[i].push(v);
        }
    }
    for set in &mut sets {
        set.sort_unstable();
        set.dedup();
    }
    Ok(DescendantCode { sets })
}

/// A base subset together with frames that reproduce its descendant code.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FrameSet {
    pub base: SupportSet,
    pub frames: Vec<SupportSet>,
    pub minimal_only: bool,
}

/// Words whose every symbol lies in the base's coordinate sets; any frame of
/// the base is a subset of this pool.
fn frame_pool(code: &QaryCode, base_sets: &[Vec<Symbol>]) -> Vec<usize> {
    (1..=code.size())
        .filter(|&j| {
            code.word(j)
                .iter()
                .zip(base_sets)
                .all(|(v, set)| set.binary_search(v).is_ok())
        })
        .collect()
}

/// Checks whether `code` is a strongly d̄-separable code, using the
/// private-pair characterization: for every base subset `C0` of size at most
/// `d`, every member must own a coordinate where its symbol is unique among
/// the words matching `C0`'s descendant sets.
///
/// Bases larger than the code are vacuous, so `d` may exceed `n`.
pub fn is_ssc(code: &QaryCode, d: usize) -> Result<PropertyReport> {
    if d < 1 {
        return Err(Error::DOutOfRange {
            d,
            min: 1,
            max: code.size(),
        });
    }
    if let Some((first, second)) = code.duplicate_words() {
        return Err(Error::DuplicateWords { first, second });
    }
    let n = code.size();
    for k in 1..=d.min(n) {
        for subset in (1..=n).combinations(k) {
            let base = SupportSet::from_indices(subset.iter().copied());
            let base_sets = descendant(code, &base)?.sets;
            let pool = frame_pool(code, &base_sets);
            // occurrence counts of each base symbol among the pool
            let mut counts: Vec<Vec<u32>> = base_sets.iter().map(|s| vec![0; s.len()]).collect();
            for &j in &pool {
                for (i, &v) in code.word(j).iter().enumerate() {
                    if let Ok(pos) = base_sets[i].binary_search(&v) {
                        counts[i][pos] += 1;
                    }
                }
            }
            let has_private = |j: usize| {
                code.word(j).iter().enumerate().any(|(i, &v)| {
                    base_sets[i]
                        .binary_search(&v)
                        .map(|pos| counts[i][pos] == 1)
                        .unwrap_or(false)
                })
            };
            let violator = base.iter().find(|&j| !has_private(j));
            if let Some(member) = violator {
                return Ok(PropertyReport {
                    property: PropertyKind::StronglySeparableCode,
                    d,
                    holds: false,
                    witness: Some(Witness::NoPrivatePair {
                        subset: base,
                        member,
                    }),
                });
            }
            let _ = t;
        }
    }
    Ok(PropertyReport {
        property: PropertyKind::StronglySeparableCode,
        d,
        holds: true,
        witness: None,
    })
}

/// Definition-level SSC oracle: enumerates every nonempty subset with the
/// same descendant code as each base and intersects them.
///
/// Guarded to `n <= 20` and `q <= 64` (symbol sets as 64-bit masks).
pub fn is_ssc_bruteforce(code: &QaryCode, d: usize) -> Result<PropertyReport> {
    let (t, n, q) = (code.length(), code.size(), code.alphabet());
    if n > 20 || q > 64 {
        return Err(Error::OracleScale(format!(
            "n={n}, q={q} exceeds the enumeration limits (n <= 20, q <= 64)"
        )));
    }
    if d < 1 {
        return Err(Error::DOutOfRange { d, min: 1, max: n });
    }
    if let Some((first, second)) = code.duplicate_words() {
        return Err(Error::DuplicateWords { first, second });
    }

    // descendant masks for every subset: q-bit symbol masks per coordinate
    let total: usize = 1 << n;
    let mut table = vec![0u64; total * t];
    for mask in 1..total {
        let low = mask.trailing_zeros() as usize;
        let rest = mask & (mask - 1);
        for i in 0..t {
            table[mask * t + i] = table[rest * t + i] | (1u64 << code.words()[low][i]);
        }
    }
    let desc_eq = |a: usize, b: usize| table[a * t..(a + 1) * t] == table[b * t..(b + 1) * t];

    for k in 1..=d.min(n) {
        for subset in (0..n).combinations(k) {
            let base_mask: usize = subset.iter().map(|&j| 1usize << j).sum();
            let mut intersection = total - 1;
            let mut bad_frame: Option<usize> = None;
            for frame in 1..total {
                if desc_eq(frame, base_mask) {
                    intersection &= frame;
                    if bad_frame.is_none() && base_mask & !frame != 0 {
                        bad_frame = Some(frame);
                    }
                }
            }
            if intersection != base_mask {
                let frame = bad_frame.expect("some frame omits a base member");
                let member = (base_mask & !frame).trailing_zeros() as usize + 1;
                return Ok(PropertyReport {
                    property: PropertyKind::StronglySeparableCode,
                    d,
                    holds: false,
                    witness: Some(Witness::FrameExcludes {
                        subset: SupportSet::from_indices(subset.iter().map(|&j| j + 1)),
                        frame: SupportSet::from_indices(
                            (0..n).filter(|&j| frame & (1 << j) != 0).map(|j| j + 1),
                        ),
                        member,
                    }),
                });
            }
        }
    }
    Ok(PropertyReport {
        property: PropertyKind::StronglySeparableCode,
        d,
        holds: true,
        witness: None,
    })
}

/// Enumerates all minimal frames of the base subset `s`: subsets with the
/// same descendant code from which no word can be removed.
///
/// Every minimal frame of a base of size `d` has at most `t*d - t + 1`
/// words; the search prunes at that depth.
pub fn minimal_frames(code: &QaryCode, s: &SupportSet) -> Result<FrameSet> {
    code.check_support(s)?;
    let t = code.length();
    let d = s.len();
    let bound = t * d - t + 1;
    let base_sets = descendant(code, s)?.sets;
    let pool = frame_pool(code, &base_sets);

    // requirement (i, v): coordinate i must exhibit symbol v
    let mut req_index: Vec<Vec<usize>> = Vec::with_capacity(t);
    let mut req_count_total = 0usize;
    for set in &base_sets {
        let start = req_count_total;
        req_count_total += set.len();
        req_index.push((start..req_count_total).collect());
    }
    if req_count_total > 128 {
        return Err(Error::ScaleGuard(format!(
            "{req_count_total} coordinate requirements exceed the 128-bit limit"
        )));
    }
    let full_mask: u128 = if req_count_total == 128 {
        u128::MAX
    } else {
        (1u128 << req_count_total) - 1
    };

    // which requirements each pool word satisfies
    let covers: Vec<u128> = pool
        .iter()
        .map(|&j| {
            let mut mask = 0u128;
            for (i, &v) in code.word(j).iter().enumerate() {
                if let Ok(pos) = base_sets[i].binary_search(&v) {
                    mask |= 1u128 << req_index[i][pos];
                }
            }
            mask
        })
        .collect();

    // explored-node ceiling: subsets of the pool up to the depth bound
    let mut explored: u128 = 0;
    let mut binom: u128 = 1;
    for k in 0..=bound.min(pool.len()) {
        if k > 0 {
            binom = binom.saturating_mul((pool.len() - k + 1) as u128) / k as u128;
        }
        explored = explored.saturating_add(binom);
    }
    if explored > 5_000_000 {
        return Err(Error::ScaleGuard(format!(
            "frame pool of {} words at depth {bound} is too large to enumerate",
            pool.len()
        )));
    }

    // latest pool position able to cover each requirement, for pruning
    let mut last_cover = vec![None::<usize>; req_count_total];
    for (pos, mask) in covers.iter().enumerate() {
        let mut m = *mask;
        while m != 0 {
            let r = m.trailing_zeros() as usize;
            m &= m - 1;
            last_cover[r] = Some(pos);
        }
    }
    if last_cover.iter().any(|c| c.is_none()) {
        // some base symbol appears in no pool word: impossible, since the
        // base itself is in the pool
        unreachable!("base words always cover their own requirements");
    }

    let mut frames = Vec::new();
    let mut chosen: Vec<usize> = Vec::new();
    let mut counts = vec![0u32; req_count_total];
    dfs_minimal(
        &pool,
        &covers,
        &last_cover,
        full_mask,
        bound,
        0,
        0,
        &mut chosen,
        &mut counts,
        &mut frames,
    );
    let frames = frames
        .into_iter()
        .map(|positions: Vec<usize>| {
            SupportSet::from_indices(positions.into_iter().map(|p| pool[p]))
        })
        .collect();
    Ok(FrameSet {
        base: s.clone(),
        frames,
        minimal_only: true,
    })
}

#[allow(clippy::too_many_arguments)]
fn dfs_minimal(
    pool: &[usize],
    covers: &[u128],
    last_cover: &[Option<usize>],
    full_mask: u128,
    bound: usize,
    pos: usize,
    covered: u128,
    chosen: &mut Vec<usize>,
    counts: &mut [u32],
    out: &mut Vec<Vec<usize>>,
) {
    if covered == full_mask {
        // a cover; minimal iff every chosen word covers some requirement alone
        let minimal = chosen.iter().all(|&p| {
            let mut m = covers[p];
            while m != 0 {
                let r = m.trailing_zeros() as usize;
                m &= m - 1;
                if counts[r] == 1 {
                    return true;
                }
            }
            false
        });
        if minimal {
            out.push(chosen.clone());
        }
        return; // supersets of a cover are never minimal
    }
    if chosen.len() == bound {
        return;
    }
    // every missing requirement must still be coverable
    let mut missing = full_mask & !covered;
    while missing != 0 {
        let r = missing.trailing_zeros() as usize;
        missing &= missing - 1;
        if last_cover[r].expect("requirements are always coverable") < pos {
            return;
        }
    }
    for next in pos..pool.len() {
        chosen.push(next);
        let mut m = covers[next];
        while m != 0 {
            let r = m.trailing_zeros() as usize;
            m &= m - 1;
            counts[r] += 1;
        }
        dfs_minimal(
            pool,
            covers,
            last_cover,
            full_mask,
            bound,
            next + 1,
            covered | covers[next],
            chosen,
            counts,
            out,
        );
        let mut m = covers[next];
        while m != 0 {
            let r = m.trailing_zeros() as usize;
            m &= m - 1;
            counts[r] -= 1;
        }
        chosen.pop();
    }
}

/// Reads the columns of a binary matrix as a `(t,n,2)` code.
///
/// Fails on duplicate columns: the codes side requires distinct words.
pub fn columns_as_code(m: &BinaryMatrix) -> Result<QaryCode> {
    if let Some((first, second)) = m.duplicate_columns() {
        return Err(Error::DuplicateColumns { first, second });
    }
    let words = (1..=m.items())
        .map(|j| {
            (0..m.tests())
                .map(|i| m.column(j).get(i) as Symbol)
                .collect()
        })
        .collect();
    QaryCode::new(2, words)
}

/// One-hot concatenation: expands each coordinate into a length-`q` block
/// with a single 1 marking the symbol, yielding a `tq x n` binary matrix.
///
/// If the code is strongly d̄-separable, the result is a strongly
/// d-separable matrix.
pub fn concatenate(code: &QaryCode) -> BinaryMatrix {
    let (t, q) = (code.length(), code.alphabet());
    let columns = code
        .words()
        .iter()
        .map(|w| {
            let mut col = BitVec::zeros(t * q);
            for (i, &v) in w.iter().enumerate() {
                col.set(i * q + v as usize, true);
            }
            col
        })
        .collect();
    BinaryMatrix::from_columns(columns).expect("one-hot columns share length tq >= 1")
}
