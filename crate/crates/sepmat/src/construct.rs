//! Random coding with expurgation: seeded construction of strongly
//! 2-separable matrices.
//!
//! The pipeline draws a uniform random `(t,n,q)` code, strips duplicates,
//! then repeatedly removes a word implicated by a concrete strong-separability
//! violation until the verifier accepts. One-hot concatenation of the
//! surviving code yields a certified strongly d-separable `tq x n'` matrix.
//! The removal rule differs from the probabilistic expurgation used to prove
//! rate bounds (which deletes all "bad" words at once): it removes the
//! lowest-indexed member of the first violating base found, which keeps the
//! log deterministic and replayable.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::matrix::{BinaryMatrix, SupportSet};
use crate::qary::{concatenate, is_ssc, QaryCode, Symbol};
use crate::properties::Witness;
use crate::{Error, Result};

/// Why a word was expurgated.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum RemovalReason {
    /// Identical to an earlier word (index in the original code).
    Duplicate { of: usize },
    /// Lowest-indexed member of a violating base subset without a private
    /// coordinate pair. Indices refer to the original code.
    SscViolation { subset: SupportSet },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Removal {
    /// 1-based index of the removed word in the original code.
    pub index: usize,
    pub reason: RemovalReason,
}

/// Replayable record of an expurgation run.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ExpurgationLog {
    pub t: usize,
    pub q: usize,
    /// Seed of the generating RNG; absent when expurgating a handed-in code.
    pub seed: Option<u64>,
    pub d: usize,
    pub initial_n: usize,
    pub removed: Vec<Removal>,
    pub final_n: usize,
}

impl ExpurgationLog {
    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("log serialization cannot fail")
    }
}

/// Uniform random `(t,n,q)` code from a seeded ChaCha8 stream.
///
/// Symbols are drawn word by word, coordinate by coordinate, each uniform on
/// `{0..q-1}`; the draw order is part of the reproducibility contract.
/// Duplicate words are possible.
pub fn random_code(t: usize, n: usize, q: usize, seed: u64) -> Result<QaryCode> {
    if q < 2 {
        return Err(Error::InvalidParameter(format!(
            "alphabet size q={q} must be at least 2"
        )));
    }
    if t < 1 || n < 1 {
        return Err(Error::InvalidParameter(
            "code length and size must be positive".to_string(),
        ));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let words = (0..n)
        .map(|_| (0..t).map(|_| rng.random_range(0..q) as Symbol).collect())
        .collect();
    QaryCode::new(q, words)
}

/// Deletes words until the code is a strongly d̄-separable code.
///
/// Duplicates are removed first (keeping the earliest occurrence); then each
/// round runs the verifier and removes the word named by its witness. The
/// word count strictly decreases every round, and a single word is always
/// strongly separable, so this terminates. Indices in the log refer to the
/// original code.
pub fn expurgate_to_ssc(code: &QaryCode, d: usize) -> Result<(QaryCode, ExpurgationLog)> {
    if d < 1 {
        return Err(Error::DOutOfRange {
            d,
            min: 1,
            max: code.size(),
        });
    }
    let mut removed = Vec::new();

    // drop duplicates, keeping first occurrences
    let mut kept: Vec<usize> = Vec::new(); // original 1-based indices
    for j in 1..=code.size() {
        match kept.iter().find(|&&i| code.word(i) == code.word(j)) {
            Some(&first) => removed.push(Removal {
                index: j,
                reason: RemovalReason::Duplicate { of: first },
            }),
            None => kept.push(j),
        }
    }

    loop {
        let current = QaryCode::new(
            code.alphabet(),
            kept.iter().map(|&j| code.word(j).to_vec()).collect(),
        )?;
        let report = is_ssc(&current, d)?;
        if report.holds {
            let log = ExpurgationLog {
                t: code.length(),
                q: code.alphabet(),
                seed: None,
                d,
                initial_n: code.size(),
                removed,
                final_n: kept.len(),
            };
            return Ok((current, log));
        }
        let Some(Witness::NoPrivatePair { subset, member }) = report.witness else {
            unreachable!("the fast verifier always yields a private-pair witness");
        };
        // map current indices back to original ones
        let original_member = kept[member - 1];
        let original_subset = SupportSet::from_indices(subset.iter().map(|j| kept[j - 1]));
        kept.remove(member - 1);
        removed.push(Removal {
            index: original_member,
            reason: RemovalReason::SscViolation {
                subset: original_subset,
            },
        });
    }
}

/// A constructed matrix together with the surviving code and its log.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Construction {
    pub matrix: BinaryMatrix,
    pub code: QaryCode,
    pub log: ExpurgationLog,
}

impl Construction {
    /// Achieved rate `log2(n') / (t*q)` of the concatenated matrix.
    pub fn rate(&self) -> f64 {
        (self.code.size() as f64).log2() / (self.matrix.tests() as f64)
    }
}

/// Full pipeline: random `(t,n,q)` code, expurgation to a strongly
/// d̄-separable code, one-hot concatenation to a `tq x n'` matrix.
///
/// The same `(t, n, q, seed, d)` always produces the same matrix,
/// byte for byte.
pub fn build_2ssm(t: usize, n: usize, q: usize, seed: u64, d: usize) -> Result<Construction> {
    let raw = random_code(t, n, q, seed)?;
    let (code, mut log) = expurgate_to_ssc(&raw, d)?;
    log.seed = Some(seed);
    let matrix = concatenate(&code);
    Ok(Construction { matrix, code, log })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::properties::{is_ssm, is_ssm_bruteforce};
    use crate::qary::is_ssc_bruteforce;

    #[test]
    fn random_code_is_deterministic() {
        let a = random_code(2, 3, 2, 41).unwrap();
        let b = random_code(2, 3, 2, 41).unwrap();
        assert_eq!(a, b);
        let c = random_code(2, 3, 2, 42).unwrap();
        assert_ne!(a, c, "distinct seeds should give distinct small codes");
    }

    #[test]
    fn random_code_rejects_unary_alphabet() {
        assert!(matches!(
            random_code(2, 3, 1, 0),
            Err(Error::InvalidParameter(_))
        ));
    }

    #[test]
    fn symbol_frequencies_are_uniform() {
        // 10^5 draws over q=4: each count within 3 sigma of 25000
        let code = random_code(100, 1000, 4, 2024).unwrap();
        let mut counts = [0u64; 4];
        for w in code.words() {
            for &s in w {
                counts[s as usize] += 1;
            }
        }
        let total = 100_000f64;
        let expect = total / 4.0;
        let sigma = (total * 0.25 * 0.75).sqrt();
        for c in counts {
            assert!(
                (c as f64 - expect).abs() <= 3.0 * sigma,
                "count {c} vs {expect} +- {}",
                3.0 * sigma
            );
        }
    }

    #[test]
    fn expurgation_keeps_already_good_codes() {
        let code = QaryCode::new(2, vec![vec![0, 1], vec![1, 0], vec![1, 1]]).unwrap();
        let (out, log) = expurgate_to_ssc(&code, 2).unwrap();
        assert_eq!(out, code);
        assert!(log.removed.is_empty());
        assert_eq!(log.final_n, 3);
    }

    #[test]
    fn expurgation_removes_duplicates_first() {
        let code = QaryCode::new(2, vec![vec![0, 1], vec![0, 1], vec![1, 0]]).unwrap();
        let (out, log) = expurgate_to_ssc(&code, 2).unwrap();
        assert_eq!(out.size(), 2);
        assert_eq!(
            log.removed,
            vec![Removal {
                index: 2,
                reason: RemovalReason::Duplicate { of: 1 }
            }]
        );
    }

    #[test]
    fn expurgated_random_code_passes_verifier_and_oracle() {
        let raw = random_code(3, 10, 3, 99).unwrap();
        let (code, log) = expurgate_to_ssc(&raw, 2).unwrap();
        assert!(is_ssc(&code, 2).unwrap().holds);
        assert!(is_ssc_bruteforce(&code, 2).unwrap().holds);
        assert_eq!(log.final_n, log.initial_n - log.removed.len());
    }

    #[test]
    fn pipeline_output_is_ssm() {
        let c = build_2ssm(3, 12, 4, 7, 2).unwrap();
        assert_eq!(c.matrix.tests(), 12);
        assert!(is_ssm(&c.matrix, 2).unwrap().holds);
        assert!(is_ssm_bruteforce(&c.matrix, 2, false).unwrap().holds);
        assert!(c.rate() > 0.0);
    }

    #[test]
    fn pipeline_larger_instance() {
        let c = build_2ssm(10, 64, 4, 1, 2).unwrap();
        assert!(is_ssc(&c.code, 2).unwrap().holds);
        assert!(is_ssm(&c.matrix, 2).unwrap().holds);
        assert_eq!(c.matrix.tests(), 40);
    }

    #[test]
    fn pipeline_replays_byte_for_byte() {
        let a = build_2ssm(4, 20, 3, 33, 2).unwrap();
        let b = build_2ssm(4, 20, 3, 33, 2).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.matrix.to_text(), b.matrix.to_text());
        assert_eq!(a.log.to_json(), b.log.to_json());
    }

    #[test]
    fn single_coordinate_pipeline_gives_one_hot_permutation() {
        // find a seed whose (1,q,q) random code hits all q symbols
        let q = 3;
        let seed = (0..200u64)
            .find(|&s| {
                let c = random_code(1, q, q, s).unwrap();
                let mut seen = [false; 3];
                for w in c.words() {
                    seen[w[0] as usize] = true;
                }
                seen.iter().all(|&b| b)
            })
            .expect("some small seed covers all symbols");
        let c = build_2ssm(1, q, q, seed, 2).unwrap();
        assert_eq!(c.log.removed.len(), 0);
        assert_eq!(c.matrix.items(), q);
        assert_eq!(c.matrix.tests(), q);
        // every column is a distinct unit vector
        for j in 1..=q {
            assert_eq!(c.matrix.column(j).count_ones(), 1);
        }
        assert!(is_ssm(&c.matrix, 2).unwrap().holds);
    }
}
