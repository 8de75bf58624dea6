//! Identification of positive items from a pooled outcome.
//!
//! [`decode_ssm`] runs the two-phase linear scan that makes strongly
//! separable matrices attractive: eliminate every column hit by a negative
//! test, then claim each remaining column that owns a private positive row.
//! With a d-SSM design this recovers any positive set of size at most `d`
//! in `O(tn)` entry probes. [`decode_dm`] and [`decode_sm_table`] are the
//! classical cover and table decoders for disjunct and separable designs.

use itertools::Itertools;
use rand::seq::index::sample;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::ser::SerializeStruct;
use serde::{Serialize, Serializer};

use crate::bits::BitVec;
use crate::matrix::{BinaryMatrix, SupportSet};
use crate::{Error, Result};

/// What a decoder concluded from an outcome vector.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum DecodeOutcome {
    /// The positive set, at most `d` items.
    Identified(SupportSet),
    /// More than `d` candidates survived: the positive set has size > d.
    TooMany,
}

/// Decoder verdict plus the number of matrix-entry probes performed.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DecodeResult {
    pub outcome: DecodeOutcome,
    pub ops_counted: u64,
}

impl DecodeResult {
    pub fn identified(&self) -> Option<&SupportSet> {
        match &self.outcome {
            DecodeOutcome::Identified(s) => Some(s),
            DecodeOutcome::TooMany => None,
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("decode result serialization cannot fail")
    }
}

impl Serialize for DecodeResult {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let mut st = serializer.serialize_struct("DecodeResult", 3)?;
        match &self.outcome {
            DecodeOutcome::Identified(s) => {
                st.serialize_field("outcome", "identified")?;
                st.serialize_field("positives", s)?;
            }
            DecodeOutcome::TooMany => {
                st.serialize_field("outcome", "too_many")?;
                st.serialize_field("positives", &Option::<SupportSet>::None)?;
            }
        }
        st.serialize_field("ops_counted", &self.ops_counted)?;
        st.end()
    }
}

fn check_outcome(m: &BinaryMatrix, r: &BitVec, d: usize) -> Result<()> {
    if r.len() != m.tests() {
        return Err(Error::LengthMismatch {
            left: m.tests(),
            right: r.len(),
        });
    }
    if d < 1 {
        return Err(Error::DOutOfRange {
            d,
            min: 1,
            max: m.items(),
        });
    }
    Ok(())
}

/// Two-phase identification over a strongly d-separable matrix.
///
/// Phase one scans every negative test and eliminates all columns it hits.
/// Phase two scans every positive test: a surviving column that is the only
/// survivor with a 1 in that row is claimed positive. If more than `d`
/// columns get claimed the decoder reports [`DecodeOutcome::TooMany`].
///
/// Exact recovery is guaranteed when `m` is a d-SSM and `r` is the Boolean
/// sum of at most `d` columns. On any other input the decoder still runs to
/// completion and returns whatever the two phases produce (garbage in,
/// garbage out — it never panics on well-formed dimensions).
pub fn decode_ssm(m: &BinaryMatrix, r: &BitVec, d: usize) -> Result<DecodeResult> {
    check_outcome(m, r, d)?;
    let (t, n) = (m.tests(), m.items());
    let mut ops: u64 = 0;

    // Phase one: drop every column with a 1 in a negative row.
    let mut surviving = vec![true; n];
    for i in 0..t {
        if !r.get(i) {
            for j in 1..=n {
                ops += 1;
                if m.column(j).get(i) {
                    surviving[j - 1] = false;
                }
            }
        }
    }
    let survivors: Vec<usize> = (1..=n).filter(|&j| surviving[j - 1]).collect();

    // Phase two: claim columns that own a private positive row.
    let mut positive = vec![false; n];
    for i in 0..t {
        if r.get(i) {
            let mut count = 0u32;
            let mut owner = 0usize;
            for &j in &survivors {
                ops += 1;
                if m.column(j).get(i) {
                    count += 1;
                    owner = j;
                }
            }
            if count == 1 {
                positive[owner - 1] = true;
            }
        }
    }
    let claimed = SupportSet::from_indices((1..=n).filter(|&j| positive[j - 1]));
    let outcome = if claimed.len() <= d {
        DecodeOutcome::Identified(claimed)
    } else {
        DecodeOutcome::TooMany
    };
    Ok(DecodeResult {
        outcome,
        ops_counted: ops,
    })
}

/// Cover decoder for disjunct matrices: every column covered by the outcome
/// is declared positive.
///
/// Correct only on d-DM designs. Note the edge case: an all-zero column is
/// covered by any outcome (including the all-zero one) and always decodes
/// as positive.
pub fn decode_dm(m: &BinaryMatrix, r: &BitVec, d: usize) -> Result<DecodeResult> {
    check_outcome(m, r, d)?;
    let n = m.items();
    let mut ops: u64 = 0;
    let mut covered = Vec::new();
    for j in 1..=n {
        ops += m.tests() as u64;
        if r.covers(m.column(j)) {
            covered.push(j);
        }
    }
    let outcome = if covered.len() <= d {
        DecodeOutcome::Identified(SupportSet::from_indices(covered))
    } else {
        DecodeOutcome::TooMany
    };
    Ok(DecodeResult {
        outcome,
        ops_counted: ops,
    })
}

/// Number of nonempty supports of size at most `d` over `n` items.
fn support_count(n: usize, d: usize) -> u128 {
    let mut total: u128 = 0;
    let mut binom: u128 = 1;
    for k in 1..=d.min(n) {
        binom = binom.saturating_mul((n - k + 1) as u128) / k as u128;
        total = total.saturating_add(binom);
    }
    total
}

/// Exhaustive table decoder for d̄-separable matrices: finds the unique
/// nonempty support of size at most `d` whose Boolean sum equals `r`.
///
/// Errors with [`Error::NotSeparable`] if two supports match (the matrix was
/// not d̄-SM), and with a scale guard when `C(n,1)+..+C(n,d)` exceeds `10^7`.
pub fn decode_sm_table(m: &BinaryMatrix, r: &BitVec, d: usize) -> Result<DecodeResult> {
    check_outcome(m, r, d)?;
    let n = m.items();
    let count = support_count(n, d);
    if count > 10_000_000 {
        return Err(Error::ScaleGuard(format!(
            "{count} candidate supports exceed the 10^7 table limit"
        )));
    }
    let mut ops: u64 = 0;
    let mut found: Option<SupportSet> = None;
    for k in 1..=d.min(n) {
        for subset in (1..=n).combinations(k) {
            let s = SupportSet::from_indices(subset.iter().copied());
            ops += (k * m.tests()) as u64;
            if m.boolean_sum(&s)? == *r {
                if found.is_some() {
                    return Err(Error::NotSeparable);
                }
                found = Some(s);
            }
        }
    }
    let outcome = match found {
        Some(s) => DecodeOutcome::Identified(s),
        None => DecodeOutcome::TooMany,
    };
    Ok(DecodeResult {
        outcome,
        ops_counted: ops,
    })
}

/// How a simulated campaign draws planted positive sets.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Sampler {
    /// Enumerate every nonempty support of size <= d when there are no more
    /// of them than the trial budget; otherwise sample uniformly.
    Auto,
    /// Enumerate every nonempty support of size <= d, ignoring the budget.
    Exhaustive,
    /// Sample uniformly over all nonempty supports of size <= d.
    Uniform,
    /// Sample uniformly over supports of exactly this size.
    FixedSize(usize),
}

/// Summary of a simulated identification campaign.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CampaignReport {
    pub trials: u64,
    pub successes: u64,
    /// Up to 16 failing trials, in trial order: planted set and verdict.
    pub failure_examples: Vec<FailureExample>,
    pub mean_ops: f64,
    pub exhaustive: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FailureExample {
    pub planted: SupportSet,
    pub decoded: DecodeResult,
}

const MAX_FAILURE_EXAMPLES: usize = 16;

fn run_trial(m: &BinaryMatrix, d: usize, planted: &SupportSet) -> (bool, u64, DecodeResult) {
    let r = m
        .boolean_sum(planted)
        .expect("sampled supports are nonempty and in range");
    let result = decode_ssm(m, &r, d).expect("outcome length matches by construction");
    let success = result.identified() == Some(planted);
    let ops = result.ops_counted;
    (success, ops, result)
}

/// Plants seeded random (or exhaustively enumerated) positive sets, decodes
/// each with [`decode_ssm`], and tallies exact-recovery successes.
///
/// Random trials derive one RNG stream per trial index from `seed`, so the
/// report is identical regardless of thread schedule.
pub fn run_campaign(
    m: &BinaryMatrix,
    d: usize,
    trials: u64,
    seed: u64,
    sampler: Sampler,
) -> Result<CampaignReport> {
    if d < 1 || d > m.items() {
        return Err(Error::DOutOfRange {
            d,
            min: 1,
            max: m.items(),
        });
    }
    if let Sampler::FixedSize(k) = sampler {
        if k < 1 || k > m.items() {
            return Err(Error::InvalidParameter(format!(
                "fixed positive-set size {k} out of range 1..={}",
                m.items()
            )));
        }
    }
    let n = m.items();
    let count = support_count(n, d);
    let exhaustive = match sampler {
        Sampler::Exhaustive => true,
        Sampler::Auto => count <= trials as u128,
        _ => false,
    };

    let outcomes: Vec<(SupportSet, (bool, u64, DecodeResult))> = if exhaustive {
        (1..=d.min(n))
            .flat_map(|k| (1..=n).combinations(k))
            .map(|subset| {
                let planted = SupportSet::from_indices(subset);
                let res = run_trial(m, d, &planted);
                (planted, res)
            })
            .collect()
    } else {
        (0..trials)
            .into_par_iter()
            .map(|trial| {
                let mut rng = ChaCha8Rng::seed_from_u64(seed);
                rng.set_stream(trial);
                let k = match sampler {
                    Sampler::FixedSize(k) => k,
                    _ => sample_size(&mut rng, n, d),
                };
                let planted = SupportSet::from_indices(
                    sample(&mut rng, n, k).into_iter().map(|j| j + 1),
                );
                let res = run_trial(m, d, &planted);
                (planted, res)
            })
            .collect()
    };

    let trials_run = outcomes.len() as u64;
    let mut successes = 0u64;
    let mut total_ops: u128 = 0;
    let mut failure_examples = Vec::new();
    for (planted, (success, ops, result)) in outcomes {
        total_ops += ops as u128;
        if success {
            successes += 1;
        } else if failure_examples.len() < MAX_FAILURE_EXAMPLES {
            failure_examples.push(FailureExample {
                planted,
                decoded: result,
            });
        }
    }
    let mean_ops = if trials_run == 0 {
        0.0
    } else {
        total_ops as f64 / trials_run as f64
    };
    Ok(CampaignReport {
        trials: trials_run,
        successes,
        failure_examples,
        mean_ops,
        exhaustive,
    })
}

/// Draws a support size with probability proportional to C(n,k), so that
/// supports of size <= d are uniform overall.
fn sample_size<R: Rng>(rng: &mut R, n: usize, d: usize) -> usize {
    let weights: Vec<f64> = (1..=d.min(n))
        .map(|k| {
            let mut b = 1.0f64;
            for x in 0..k {
                b *= (n - x) as f64 / (x + 1) as f64;
            }
            b
        })
        .collect();
    let total: f64 = weights.iter().sum();
    let mut u = rng.random_range(0.0..total);
    for (k, w) in weights.iter().enumerate() {
        if u < *w {
            return k + 1;
        }
        u -= w;
    }
    d.min(n)
}
