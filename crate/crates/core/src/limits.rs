//! Central depth caps and comparison tolerances.
//!
//! Every tolerance used by more than one routine lives here so tests and
//! documentation point at a single definition.

/// Hard cap on single-itinerary descent (pointwise evaluation, traces).
/// Cost is linear in depth; the cap bounds enclosure denominators.
pub const MAX_DESCENT_DEPTH: usize = 64;

/// Hard cap on exhaustive interval sweeps (`delta`), whose tree has `2^n`
/// leaves before pruning.
pub const MAX_DELTA_DEPTH: usize = 24;

/// Hard cap on curve sampling; a depth-`n` sample has `2^n + 1` breakpoints.
pub const MAX_CURVE_DEPTH: usize = 20;

/// Hard cap on the self-map discrepancy check, which samples two curves and
/// transforms every point of both.
pub const MAX_OPERATOR_DEPTH: usize = 16;

/// Tolerance for endpoint-matching checks when at least one side is only
/// available in floating point (formula-backed maps).
pub const COMPAT_TOL: f64 = 1e-12;

/// Number of points in the construction-time validation grid for
/// formula-backed maps (monotonicity, range, finiteness).
pub const EXPR_VALIDATION_GRID: usize = 1025;

/// Number of sample points for the finite-difference Lipschitz estimate.
pub const LIPSCHITZ_GRID: usize = 4097;

/// Step used by the central finite difference in the Lipschitz estimate.
pub const LIPSCHITZ_STEP: f64 = 1.0 / (1 << 20) as f64;
