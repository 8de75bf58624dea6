//! Rate bounds for strongly separable matrices.
//!
//! The random-coding argument bounds the largest achievable rate of a
//! strongly 2-separable matrix from below by
//! `log2(q)/q - sup_m term(q, m)` with
//! `term(q, m) = log2((2^m - 1) q - (2^m - 2)) / ((m + 1) q)`,
//! where the supremum runs over all `m >= 1` and approaches `1/q` as
//! `m` grows. The maximum over `q` is attained at `q = 4`, where the
//! maximizing `m = 3` gives `1/2 - log2(22)/16 ≈ 0.2213`.

use serde::Serialize;

use crate::{Error, Result};

/// Evaluated rate lower bound for strongly 2-separable matrices.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RateBoundReport {
    pub q: usize,
    pub m_cap: u32,
    /// Maximizing finite `m`, or `None` when the `m -> inf` tail dominates.
    pub m_star: Option<u32>,
    /// The maximal penalty term subtracted from `log2(q)/q`.
    pub term: f64,
    /// Tail limit of the penalty term, `1/q`.
    pub asymptotic_term: f64,
    pub tail_dominated: bool,
    /// `log2(q)/q - term`.
    pub bound: f64,
}

impl RateBoundReport {
    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("report serialization cannot fail")
    }
}

/// Penalty term `log2((2^m - 1) q - (2^m - 2)) / ((m + 1) q)`, computed in
/// the overflow-free form `(m + log2((q-1) - (q-2) 2^-m)) / ((m+1) q)`.
pub fn penalty_term(q: usize, m: u32) -> f64 {
    let qf = q as f64;
    let mf = m as f64;
    (mf + ((qf - 1.0) - (qf - 2.0) * (-mf).exp2()).log2()) / ((mf + 1.0) * qf)
}

/// Exact test for `term(q, m) >= 1/q`, i.e. whether the finite term reaches
/// the tail value: `(2^m - 1) q - (2^m - 2) >= 2^(m+1)`.
///
/// In floating point the term saturates to `1/q` from below for large `m`,
/// which would misreport tail dominance; integer arithmetic settles it.
fn term_attains_tail(q: usize, m: u32) -> bool {
    let p = 1u128 << m;
    (p - 1) * q as u128 - (p - 2) >= 2 * p
}

/// Lower bound on the largest rate of a strongly 2-separable matrix built
/// over alphabet `q`, maximizing the penalty over `1 <= m <= m_cap` and the
/// `m -> inf` tail value `1/q`.
pub fn rate_bound(q: usize, m_cap: u32) -> Result<RateBoundReport> {
    if q < 2 {
        return Err(Error::InvalidParameter(format!(
            "alphabet size q={q} must be at least 2"
        )));
    }
    if m_cap < 1 {
        return Err(Error::InvalidParameter("m_cap must be at least 1".to_string()));
    }
    let qf = q as f64;
    let mut m_star = 1u32;
    let mut best = penalty_term(q, 1);
    for m in 2..=m_cap {
        let value = penalty_term(q, m);
        if value > best {
            best = value;
            m_star = m;
        }
    }
    let tail = 1.0 / qf;
    // the attainment test is monotone in m, so probing up to 100 decides it
    let tail_dominated = !(1..=m_cap.min(100)).any(|m| term_attains_tail(q, m));
    let effective = if tail_dominated { tail } else { best.max(tail) };
    Ok(RateBoundReport {
        q,
        m_cap,
        m_star: if tail_dominated { None } else { Some(m_star) },
        term: effective,
        asymptotic_term: tail,
        tail_dominated,
        bound: qf.log2() / qf - effective,
    })
}

/// One row of the known-bounds table.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BoundEntry {
    pub quantity: &'static str,
    pub lower: f64,
    pub upper: f64,
    /// Improved lower bound from the random-coding construction, where one
    /// applies.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub improved_lower: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct KnownBounds {
    pub entries: Vec<BoundEntry>,
}

impl KnownBounds {
    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("table serialization cannot fail")
    }
}

/// Known bounds on the largest rates at `d = 2`: disjunct matrices,
/// separable matrices, and strongly separable matrices, the latter with the
/// improved random-coding lower bound computed by [`rate_bound`].
pub fn known_bounds() -> KnownBounds {
    let improved = rate_bound(4, 64)
        .expect("q=4 is valid")
        .bound;
    let improved = (improved * 1e4).round() / 1e4;
    KnownBounds {
        entries: vec![
            BoundEntry {
                quantity: "R_D(2)",
                lower: 0.1814,
                upper: 0.3219,
                improved_lower: None,
            },
            BoundEntry {
                quantity: "R_S(2bar)",
                lower: 0.3135,
                upper: 0.4998,
                improved_lower: None,
            },
            BoundEntry {
                quantity: "R(2)",
                lower: 0.1814,
                upper: 0.4998,
                improved_lower: Some(improved),
            },
        ],
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn penalty_term_matches_integer_kernel() {
        // (2^3 - 1) * 4 - (2^3 - 2) = 22
        let kernel = (2u64.pow(3) - 1) * 4 - (2u64.pow(3) - 2);
        assert_eq!(kernel, 22);
        let direct = (kernel as f64).log2() / 16.0;
        assert!((penalty_term(4, 3) - direct).abs() < 1e-14);
    }

    #[test]
    fn q4_bound_closed_form() {
        let report = rate_bound(4, 64).unwrap();
        assert_eq!(report.m_star, Some(3));
        assert!(!report.tail_dominated);
        let closed = 0.5 - 22f64.log2() / 16.0;
        assert!((report.bound - closed).abs() < 1e-12);
        assert!((report.bound - 0.221286).abs() < 1e-6);
        assert_eq!((report.bound * 1e4).round() / 1e4, 0.2213);
    }

    #[test]
    fn q3_bound_is_tail_dominated() {
        let report = rate_bound(3, 64).unwrap();
        assert!(report.tail_dominated);
        assert_eq!(report.m_star, None);
        let closed = 3f64.log2() / 3.0 - 1.0 / 3.0;
        assert!((report.bound - closed).abs() < 1e-12);
        assert!((report.bound - 0.1950).abs() < 5e-5);
    }

    #[test]
    fn q2_bound_is_zero() {
        let report = rate_bound(2, 64).unwrap();
        assert!(report.tail_dominated);
        assert!(report.bound.abs() < 1e-12);
    }

    #[test]
    fn q4_maximizes_among_small_alphabets() {
        let best = rate_bound(4, 64).unwrap().bound;
        for q in 2..=16 {
            let b = rate_bound(q, 64).unwrap().bound;
            assert!(b <= best + 1e-12, "q={q} gives {b} > {best}");
        }
    }

    #[test]
    fn term_is_maximal_over_cap_and_tail() {
        for q in 2..=8 {
            let report = rate_bound(q, 64).unwrap();
            for m in 1..=64 {
                assert!(report.term >= penalty_term(q, m) - 1e-12);
            }
            assert!(report.term >= report.asymptotic_term - 1e-12);
        }
    }

    #[test]
    fn known_bounds_constants() {
        let table = known_bounds();
        let find = |name: &str| {
            table
                .entries
                .iter()
                .find(|e| e.quantity == name)
                .unwrap()
                .clone()
        };
        let rd = find("R_D(2)");
        assert_eq!((rd.lower, rd.upper), (0.1814, 0.3219));
        let rs = find("R_S(2bar)");
        assert_eq!((rs.lower, rs.upper), (0.3135, 0.4998));
        let r = find("R(2)");
        assert_eq!((r.lower, r.upper), (0.1814, 0.4998));
        assert_eq!(r.improved_lower, Some(0.2213));
    }

    #[test]
    fn parameter_validation() {
        assert!(rate_bound(1, 64).is_err());
        assert!(rate_bound(4, 0).is_err());
    }
}
