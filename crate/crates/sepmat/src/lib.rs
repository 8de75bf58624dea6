//! Separable-matrix toolkit for nonadaptive group testing.
//!
//! Pooled testing screens `n` items with `t` simultaneous tests: a binary
//! matrix assigns items to tests and the observed outcome is the Boolean sum
//! of the positive items' columns. This crate implements the structures that
//! make such schemes decodable, and the machinery around them:
//!
//! - [`matrix`]: packed binary matrices, Boolean sums, cover tests, bit-exact
//!   text and JSON formats;
//! - [`properties`]: verifiers for d-disjunct, d̄-separable and strongly
//!   d-separable matrices, with replayable violation witnesses and a
//!   definition-level brute-force oracle;
//! - [`decode`]: the `O(tn)` two-phase identification algorithm for strongly
//!   separable matrices, cover/table decoders, and a campaign simulator;
//! - [`qary`]: q-ary strongly separable codes, descendant codes, minimal
//!   frames, and the concatenation bridge between codes and matrices;
//! - [`construct`]: seeded random codes with expurgation, yielding certified
//!   strongly 2-separable matrices;
//! - [`bounds`]: the analytic rate lower bound for strongly 2-separable
//!   matrices and the table of known rate bounds;
//! - [`search`]: exhaustive/budgeted search for the maximum number of
//!   columns at a given number of tests, with certificates.

pub mod bits;
pub mod bounds;
pub mod construct;
pub mod decode;
pub mod error;
pub mod matrix;
pub mod properties;
pub mod qary;
pub mod search;

pub use bits::BitVec;
pub use bounds::{known_bounds, penalty_term, rate_bound, BoundEntry, KnownBounds, RateBoundReport};
pub use construct::{build_2ssm, expurgate_to_ssc, random_code, Construction, ExpurgationLog};
pub use decode::{
    decode_dm, decode_sm_table, decode_ssm, run_campaign, CampaignReport, DecodeOutcome,
    DecodeResult, Sampler,
};
pub use error::{Error, Result};
pub use matrix::{BinaryMatrix, SupportSet};
pub use properties::{
    is_bar_separable, is_disjunct, is_ssm, is_ssm_bruteforce, PropertyKind, PropertyReport,
    Witness,
};
pub use qary::{
    columns_as_code, concatenate, descendant, is_ssc, is_ssc_bruteforce, minimal_frames,
    DescendantCode, FrameSet, QaryCode,
};
pub use search::{rate_table, search_max, RateTableRow, SearchOptions, SearchProperty, SearchResult};
