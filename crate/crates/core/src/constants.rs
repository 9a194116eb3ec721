//! Default parameters and numeric tolerances, all in one place.
//!
//! Tolerances are absolute unless the name says otherwise.

/// Default l1 weight for the penalized recovery problem.
pub const DEFAULT_LAMBDA: f64 = 1e-3;
pub const DEFAULT_MAX_ITERS: usize = 400;
/// Relative objective change below which the solver stops.
pub const DEFAULT_TOL: f64 = 1e-6;

/// Continuation starts at this fraction of `|A^T b|_inf`.
pub const CONTINUATION_START_FRACTION: f64 = 0.1;
/// Iterations between successive halvings of the continuation weight.
pub const CONTINUATION_PERIOD: usize = 50;

/// Allowed objective increase per iteration, relative to `max(1, objective)`.
pub const MONOTONICITY_SLACK: f64 = 1e-9;

pub const DEFAULT_DIFF_THRESHOLD: f64 = 0.15;
pub const DEFAULT_MIN_BLOB_AREA: usize = 4;

/// Default retention schedule, in percent.
pub const DEFAULT_PERCENTS: [f64; 6] = [1.0, 5.0, 10.0, 20.0, 30.0, 45.0];

pub const PGM_MAXVAL: u16 = 255;
/// Worst-case per-pixel error of one 8-bit quantization round trip.
pub const QUANTIZATION_BOUND: f64 = 1.0 / 510.0;

/// Relative singular-value cutoff below which a least-squares subsystem
/// is treated as rank deficient.
pub const RANK_TOL: f64 = 1e-10;
/// Residual (relative to `max(1, |b|)`) at which a support counts as an
/// exact fit of `A x = b`.
pub const L0_FEASIBILITY_TOL: f64 = 1e-8;

/// Half-width of the block-matching search window, in pixels.
pub const DEFAULT_SEARCH_RADIUS: usize = 6;
