//! Built-in example pairs.
//!
//! Four fixtures cover the three decision procedures and both verdict
//! polarities; the CLI exposes them under `example <name> <command>` and
//! the test suite uses them as oracles.
//!
//! * `ex-affine` — affine source with breaks `(1/2, 1/3)`, affine target
//!   with breaks `(1/4, 1/5)`: singular by the affine criterion.
//! * `ex-lf-singular` — halving source, linear-fractional target whose
//!   transition invariants do not transport: singular.
//! * `ex-lf-smooth` — halving source, linear-fractional target with
//!   invariants `(-1/2, 1/2)`: smooth, `phi_0 = 2x/(x+1)`,
//!   `phi_1 = 2x/(3-x)`.
//! * `ex-nonlinear` — halving source, two formula maps and two affine
//!   maps with Lipschitz product exactly `63/1024 < 1/16`: singular by
//!   the contraction criterion.

use crate::error::{Error, Result};
use crate::maps::{Map, Matrix2};
use crate::rational::Rational;
use crate::systems::{System, SystemPair};

/// Names accepted by [`fixture`], in presentation order.
pub const FIXTURE_NAMES: [&str; 4] = [
    "ex-affine",
    "ex-lf-singular",
    "ex-lf-smooth",
    "ex-nonlinear",
];

/// An affine system from its two row breaks: digit 0 maps onto `[0, p_i]`,
/// digit 1 onto `[p_i, 1]`.
pub fn affine_system(p0: &Rational, p1: &Rational, label: impl Into<String>) -> Result<System> {
    let row = |p: &Rational| -> Result<[Map; 2]> {
        Ok([
            Map::affine(p.clone(), Rational::zero())?,
            Map::affine(&Rational::one() - p, p.clone())?,
        ])
    };
    System::new([row(p0)?, row(p1)?], label)
}

/// A linear-fractional system from its four matrices, row-major.
pub fn lf_system(ms: [[Matrix2; 2]; 2], label: impl Into<String>) -> Result<System> {
    let [[m00, m01], [m10, m11]] = ms;
    System::new(
        [
            [Map::lf(m00)?, Map::lf(m01)?],
            [Map::lf(m10)?, Map::lf(m11)?],
        ],
        label,
    )
}

/// The pair whose conjugate functions are both the identity: halving
/// source and halving target. Not a named fixture, but the baseline
/// every exactness test leans on.
pub fn identity_pair() -> SystemPair {
    SystemPair::new(System::halving(), System::halving())
}

fn ex_affine() -> Result<SystemPair> {
    let half = Rational::new(1, 2)?;
    let third = Rational::new(1, 3)?;
    let quarter = Rational::new(1, 4)?;
    let fifth = Rational::new(1, 5)?;
    Ok(SystemPair::new(
        affine_system(&half, &third, "ex-affine f")?,
        affine_system(&quarter, &fifth, "ex-affine g")?,
    ))
}

fn ex_lf_singular() -> Result<SystemPair> {
    let g = lf_system(
        [
            [Matrix2::from_ints(1, 0, 1, 1), Matrix2::from_ints(0, 1, -1, 2)],
            [Matrix2::from_ints(1, 0, -1, 3), Matrix2::from_ints(3, 1, 2, 2)],
        ],
        "ex-lf-singular g",
    )?;
    Ok(SystemPair::new(System::halving(), g))
}

fn ex_lf_smooth() -> Result<SystemPair> {
    let g = lf_system(
        [
            [Matrix2::from_ints(2, 0, -1, 4), Matrix2::from_ints(4, 2, 3, 3)],
            [
                Matrix2::from_ints(2, 0, -7, 12),
                Matrix2::from_ints(4, 2, 1, 5),
            ],
        ],
        "ex-lf-smooth g",
    )?;
    Ok(SystemPair::new(System::halving(), g))
}

fn ex_nonlinear() -> Result<SystemPair> {
    let g = System::new(
        [
            [
                Map::expr("x^2/(x+1)", Some(Rational::new(3, 4)?))?,
                Map::affine(Rational::new(1, 2)?, Rational::new(1, 2)?)?,
            ],
            [
                Map::expr("x^(3/2)/8", Some(Rational::new(3, 16)?))?,
                Map::affine(Rational::new(7, 8)?, Rational::new(1, 8)?)?,
            ],
        ],
        "ex-nonlinear g",
    )?;
    Ok(SystemPair::new(System::halving(), g))
}

/// Look up a built-in pair by name; see [`FIXTURE_NAMES`].
pub fn fixture(name: &str) -> Result<SystemPair> {
    match name {
        "ex-affine" => ex_affine(),
        "ex-lf-singular" => ex_lf_singular(),
        "ex-lf-smooth" => ex_lf_smooth(),
        "ex-nonlinear" => ex_nonlinear(),
        other => Err(Error::Config(format!(
            "unknown fixture {other:?}; available: {}",
            FIXTURE_NAMES.join(", ")
        ))),
    }
}
