//! Prime-gap laboratory: a segmented sieve, gap scanners for Andrica
//! differences and maximal-gap records, heuristic predictors for record gaps
//! and their square-root differences, and ingestion of published record
//! tables.
//!
//! Real-valued code is generic over [`Real`] (`f32` or `f64`); the aliases
//! below fix the scalar to `f64`, which is what the command-line tool uses.

pub mod datasets;
pub mod heuristics;
pub mod primality;
pub mod real;
pub mod scanner;
pub mod sieve;

pub use datasets::{
    merge_records, parse_reference_table, r_points_from_reference, DatasetError, ReferenceRecord,
    ReferenceTable,
};
pub use heuristics::{
    g_cramer, g_gauss, g_wolf, granville_bound, kernel_argmax, kernel_argmax_on, pf_shanks,
    pf_wolf, r_cramer_form, r_kernel, r_main, r_shanks, twin_constant, GapModelKind,
    HeuristicError, Kernel,
};
pub use primality::is_prime;
pub use real::Real;
pub use scanner::{
    andrica_diff, empirical_r, first_occurrences, gap_stream, sqrt_difference, FirstOccurrence,
    GapScanner, PrimeGap, TableSource,
};
pub use sieve::{prime_count, primes_in_range, EngineError, PrimeEngine, Segment};

pub type AndricaPoint = scanner::AndricaPoint<f64>;
pub type AndricaReport = scanner::AndricaReport<f64>;
pub type AndricaEnvelope = scanner::AndricaEnvelope<f64>;
pub type GapRecord = scanner::GapRecord<f64>;
pub type GapRecordTable = scanner::GapRecordTable<f64>;
pub type HeuristicConstants = heuristics::HeuristicConstants<f64>;
pub type TwinConstantEstimate = heuristics::TwinConstantEstimate<f64>;
pub type GapModel = heuristics::GapModel<f64>;
pub type RModel = heuristics::RModel<f64>;
