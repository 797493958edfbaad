//! Conjugate function pairs for two-vertex graph-directed interval systems.
//!
//! A *system* is a family of four strictly increasing weak contractions
//! `h[i][j] : [0,1] -> [0,1]` (`i` the current vertex, `j` the branch digit)
//! whose images tile the interval row by row:
//!
//! ```text
//! h[i][0](0) = 0,   h[i][0](1) = h[i][1](0),   h[i][1](1) = 1.
//! ```
//!
//! Given a source system `f` and a target system `g`, there is a unique pair
//! of increasing continuous surjections `phi_0, phi_1 : [0,1] -> [0,1]` with
//!
//! ```text
//! g[i][j] ( phi_j (x) ) = phi_i ( f[i][j] (x) )      for all i, j in {0,1}.
//! ```
//!
//! This crate constructs that pair by nested-interval descent, samples and
//! evaluates it with guaranteed enclosures, classifies it (singular versus
//! smooth versus identity) by exact rational criteria, and exposes descent
//! diagnostics that explain a verdict numerically. A CLI binary (`gdconj`)
//! fronts the same operations; a companion crate (`gdconj-capi`) exports a
//! C ABI.
//!
//! Module map:
//!
//! * [`rational`] — exact arithmetic ([`Rational`]) and the exact-or-float
//!   scalar the interval engine runs on.
//! * [`maps`] — the three map representations (affine, linear fractional,
//!   formula-backed) with validation and Lipschitz norms.
//! * [`systems`] — four-map systems, interval coding, itineraries, and the
//!   maximal interval width `delta`.
//! * [`solver`] — pointwise evaluation with enclosures, curve sampling,
//!   conjugacy residuals, and a self-map discrepancy check.
//! * [`classify`] — exact verdicts for affine pairs, linear-fractional
//!   pairs over the halving source (including the smooth two-parameter
//!   family and its admissible region), and the Lipschitz-product test.
//! * [`diagnostics`] — per-depth ratio traces, digit-pattern counts, and
//!   derivative probes.
//! * [`fixtures`] — the built-in example pairs used by tests and the CLI.
//! * [`config`], [`report`], [`io`], [`cli`] — config parsing, JSON
//!   reports, CSV emission, and the command implementations.

pub mod classify;
pub mod cli;
pub mod config;
pub mod diagnostics;
pub mod error;
pub mod fixtures;
pub mod io;
pub mod limits;
pub mod report;
pub mod maps;
pub mod rational;
pub mod solver;
pub mod systems;

pub use classify::{
    admissible_region, admissible_region_transformed, classify_pair, involution_c, lf_alpha,
    smooth_family_matrices, smooth_family_pair, Evidence, Mobius, TransitionCheck, Verdict,
    VerdictKind,
};
pub use config::{pair_from_path, pair_from_toml};
pub use diagnostics::{
    derivative_estimate, pattern_counts, ratio_trace, ratio_trace_along, PatternCounts,
    RatioTrace, TraceRow,
};
pub use error::{Error, Result};
pub use fixtures::{affine_system, fixture, identity_pair, lf_system, FIXTURE_NAMES};
pub use solver::{
    graph_operator_check, residual_max, sample_curve, solve_phi, solve_phi_rational, CurveSample,
    PhiValue, Residual,
};
pub use maps::{lipschitz_norm, validate_class_m, AffineMap, ExprMap, LfMap, Lip, Map, Matrix2};
pub use rational::Rational;
pub use systems::{
    delta, interval, itinerary_of, validate_compatibility, Enclosure, Itinerary, System,
    SystemPair,
};
