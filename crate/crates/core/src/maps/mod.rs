//! The three kinds of unit-interval maps a system can be built from:
//! affine maps, linear-fractional maps with a validated matrix shape, and
//! formula-backed maps parsed from text.
//!
//! Affine and linear-fractional maps carry exact rational coefficients and
//! evaluate exactly; formula maps evaluate in `f64` only. [`Map`] is the
//! common wrapper the system layer works with.

pub mod expr;

use std::fmt;
use std::ops::Mul;

use crate::error::{Error, Result};
use crate::limits;
use crate::rational::{Rational, Scalar};
use expr::{parse_expr, Expr};

/// `x -> slope*x + intercept` mapping `[0,1]` into itself, strictly
/// increasing, with slope at most one.
#[derive(Clone, Debug, PartialEq)]
pub struct AffineMap {
    slope: Rational,
    intercept: Rational,
}

impl AffineMap {
    pub fn new(slope: Rational, intercept: Rational) -> Result<Self> {
        let mut violations = Vec::new();
        if !slope.is_positive() {
            violations.push(format!("slope {slope} is not positive"));
        }
        if &slope > &Rational::one() {
            violations.push(format!("slope {slope} exceeds 1 (map must not expand)"));
        }
        if intercept.is_negative() {
            violations.push(format!("intercept {intercept} is negative"));
        }
        if &slope + &intercept > Rational::one() {
            violations.push(format!(
                "image endpoint slope + intercept = {} exceeds 1",
                &slope + &intercept
            ));
        }
        if !violations.is_empty() {
            return Err(Error::InvalidMap {
                which: "affine".into(),
                violations,
            });
        }
        Ok(AffineMap { slope, intercept })
    }

    pub fn slope(&self) -> &Rational {
        &self.slope
    }

    pub fn intercept(&self) -> &Rational {
        &self.intercept
    }

    pub fn eval_rational(&self, x: &Rational) -> Rational {
        &(&self.slope * x) + &self.intercept
    }

    pub fn eval_f64(&self, x: f64) -> f64 {
        self.slope.to_f64() * x + self.intercept.to_f64()
    }

    /// The same map as a linear-fractional matrix with denominator 1.
    pub fn matrix(&self) -> Matrix2 {
        Matrix2::new(
            self.slope.clone(),
            self.intercept.clone(),
            Rational::zero(),
            Rational::one(),
        )
    }
}

impl fmt::Display for AffineMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", lin_term(&self.slope, &self.intercept))
    }
}

/// Render `k*x + c` compactly ("x/2", "2x+1", "-x+4", "3").
pub(crate) fn lin_term(k: &Rational, c: &Rational) -> String {
    if k.is_zero() {
        return c.to_string();
    }
    let mut out = if k == &Rational::one() {
        "x".to_string()
    } else if k == &(-Rational::one()) {
        "-x".to_string()
    } else if k.is_integer() {
        format!("{k}x")
    } else if *k.numer() == 1.into() {
        format!("x/{}", k.denom())
    } else {
        format!("({k})x")
    };
    if c.is_positive() {
        out.push('+');
        out.push_str(&c.to_string());
    } else if c.is_negative() {
        out.push_str(&c.to_string());
    }
    out
}

/// 2x2 rational matrix acting on the interval by `x -> (a*x + b)/(c*x + d)`.
#[derive(Clone, Debug, PartialEq)]
pub struct Matrix2 {
    pub a: Rational,
    pub b: Rational,
    pub c: Rational,
    pub d: Rational,
}

impl Matrix2 {
    pub fn new(a: Rational, b: Rational, c: Rational, d: Rational) -> Self {
        Matrix2 { a, b, c, d }
    }

    pub fn from_ints(a: i64, b: i64, c: i64, d: i64) -> Self {
        Matrix2::new(
            Rational::from_int(a),
            Rational::from_int(b),
            Rational::from_int(c),
            Rational::from_int(d),
        )
    }

    pub fn identity() -> Self {
        Matrix2::from_ints(1, 0, 0, 1)
    }

    pub fn det(&self) -> Rational {
        &(&self.a * &self.d) - &(&self.b * &self.c)
    }

    pub fn transpose(&self) -> Self {
        Matrix2::new(
            self.a.clone(),
            self.c.clone(),
            self.b.clone(),
            self.d.clone(),
        )
    }

    pub fn scale(&self, k: &Rational) -> Self {
        Matrix2::new(k * &self.a, k * &self.b, k * &self.c, k * &self.d)
    }

    /// The fractional-linear action `(a*x + b)/(c*x + d)`.
    pub fn phi(&self, x: &Rational) -> Result<Rational> {
        let den = &(&self.c * x) + &self.d;
        if den.is_zero() {
            return Err(Error::Domain(format!(
                "linear-fractional denominator vanishes at x = {x}"
            )));
        }
        Ok(&(&(&self.a * x) + &self.b) / &den)
    }

    pub fn phi_f64(&self, x: f64) -> f64 {
        (self.a.to_f64() * x + self.b.to_f64()) / (self.c.to_f64() * x + self.d.to_f64())
    }

    /// Whether `other` is a nonzero scalar multiple of `self`. The action
    /// `phi` is invariant under such rescaling.
    pub fn is_proportional(&self, other: &Matrix2) -> bool {
        let mine = [&self.a, &self.b, &self.c, &self.d];
        let theirs = [&other.a, &other.b, &other.c, &other.d];
        let Some(pivot) = (0..4).find(|&k| !mine[k].is_zero()) else {
            // Zero matrix: proportional only to the zero matrix.
            return theirs.iter().all(|v| v.is_zero());
        };
        if theirs[pivot].is_zero() {
            return false;
        }
        (0..4).all(|k| &(mine[pivot] * theirs[k]) == &(mine[k] * theirs[pivot]))
    }
}

impl Mul for &Matrix2 {
    type Output = Matrix2;
    fn mul(self, rhs: &Matrix2) -> Matrix2 {
        Matrix2::new(
            &(&self.a * &rhs.a) + &(&self.b * &rhs.c),
            &(&self.a * &rhs.b) + &(&self.b * &rhs.d),
            &(&self.c * &rhs.a) + &(&self.d * &rhs.c),
            &(&self.c * &rhs.b) + &(&self.d * &rhs.d),
        )
    }
}

impl fmt::Display for Matrix2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}, {}; {}, {}]", self.a, self.b, self.c, self.d)
    }
}

/// Outcome of the matrix-shape validation for linear-fractional maps.
#[derive(Clone, Debug)]
pub struct ClassMReport {
    pub ok: bool,
    pub violations: Vec<String>,
}

/// Check the matrix shape that makes `x -> (a*x + b)/(c*x + d)` a strictly
/// increasing weak contraction of `[0,1]` with nonnegative values:
///
/// * `0 < a + b <= c + d` (so the image endpoint `(a+b)/(c+d)` is in `(0,1]`),
/// * `d > b >= 0` (value at 0 lies in `[0,1)` and denominators stay positive),
/// * `det > 0` (strictly increasing),
/// * `det <= d^2` and `det <= (c+d)^2` (derivative `det/(c*x+d)^2` at most 1
///   at both endpoints, hence on all of `[0,1]`).
pub fn validate_class_m(m: &Matrix2) -> ClassMReport {
    let mut violations = Vec::new();
    let top = &m.a + &m.b;
    let bottom = &m.c + &m.d;
    let det = m.det();
    if !top.is_positive() {
        violations.push(format!("need a + b > 0, got {top}"));
    }
    if &top > &bottom {
        violations.push(format!("need a + b <= c + d, got {top} > {bottom}"));
    }
    if m.b.is_negative() {
        violations.push(format!("need b >= 0, got {}", m.b));
    }
    if &m.d <= &m.b {
        violations.push(format!("need d > b, got d = {}, b = {}", m.d, m.b));
    }
    if !det.is_positive() {
        violations.push(format!("need a positive determinant, got {det}"));
    }
    // With d > b >= 0 and 0 < a+b <= c+d both comparands below are positive,
    // so the squared forms are equivalent to the square-root bounds.
    if &det > &(&m.d * &m.d) {
        violations.push(format!(
            "derivative at 0 exceeds 1: det = {det} > d^2 = {}",
            &m.d * &m.d
        ));
    }
    if &det > &(&bottom * &bottom) {
        violations.push(format!(
            "derivative at 1 exceeds 1: det = {det} > (c+d)^2 = {}",
            &bottom * &bottom
        ));
    }
    ClassMReport {
        ok: violations.is_empty(),
        violations,
    }
}

/// Linear-fractional map whose matrix passed [`validate_class_m`].
#[derive(Clone, Debug, PartialEq)]
pub struct LfMap {
    matrix: Matrix2,
}

impl LfMap {
    pub fn new(matrix: Matrix2) -> Result<Self> {
        let report = validate_class_m(&matrix);
        if !report.ok {
            return Err(Error::InvalidMap {
                which: format!("linear-fractional {matrix}"),
                violations: report.violations,
            });
        }
        Ok(LfMap { matrix })
    }

    pub fn matrix(&self) -> &Matrix2 {
        &self.matrix
    }

    /// Evaluate at `x` in `[0,1]`, where the validated shape keeps the
    /// denominator positive.
    pub fn eval_rational(&self, x: &Rational) -> Rational {
        self.matrix
            .phi(x)
            .expect("validated matrix has a positive denominator on [0,1]")
    }

    pub fn eval_f64(&self, x: f64) -> f64 {
        self.matrix.phi_f64(x)
    }

    /// Exact supremum of the derivative `det/(c*x+d)^2` over `[0,1]`: the
    /// denominator is monotone in `x`, so the supremum sits at an endpoint.
    pub fn lipschitz(&self) -> Rational {
        let m = &self.matrix;
        let den0 = &m.d * &m.d;
        let at1 = &m.c + &m.d;
        let den1 = &at1 * &at1;
        &m.det() / &den0.min(den1)
    }
}

impl fmt::Display for LfMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let m = &self.matrix;
        write!(
            f,
            "({})/({})",
            lin_term(&m.a, &m.b),
            lin_term(&m.c, &m.d)
        )
    }
}

/// Map defined by a parsed formula; evaluates in `f64` only.
///
/// Construction validates the formula on a uniform grid: every value must be
/// finite, lie in `[0,1]` (up to float tolerance), and increase strictly
/// from one grid point to the next. Endpoint values are not pinned here;
/// matching them up is a system-level condition. A declared Lipschitz
/// bound, when present, is cross-checked against a finite-difference
/// estimate so that a typo cannot smuggle in an unsound contraction factor.
#[derive(Clone, Debug)]
pub struct ExprMap {
    expr: Expr,
    source: String,
    declared_lip: Option<Rational>,
}

impl ExprMap {
    pub fn new(source: &str, declared_lip: Option<Rational>) -> Result<Self> {
        let expr = parse_expr(source)?;
        let mut violations = Vec::new();
        let n = limits::EXPR_VALIDATION_GRID - 1;
        let mut prev = f64::NEG_INFINITY;
        for k in 0..=n {
            let x = k as f64 / n as f64;
            let v = match expr.eval_f64(x) {
                Ok(v) => v,
                Err(e) => {
                    violations.push(format!("not evaluable at x = {x}: {e}"));
                    break;
                }
            };
            if !(-limits::COMPAT_TOL..=1.0 + limits::COMPAT_TOL).contains(&v) {
                violations.push(format!("value {v} at x = {x} is outside [0, 1]"));
                break;
            }
            if v <= prev {
                violations.push(format!(
                    "not strictly increasing near x = {x} ({prev} then {v})"
                ));
                break;
            }
            prev = v;
        }
        if violations.is_empty() {
            if let Some(declared) = &declared_lip {
                if !declared.is_positive() {
                    violations.push(format!("declared Lipschitz bound {declared} must be positive"));
                } else {
                    let estimate = grid_lipschitz(&expr)?;
                    // Loose check: the declared bound may not sit visibly
                    // below the observed slope, or a singularity proof could
                    // rest on an understated contraction factor.
                    if declared.to_f64() < estimate * 0.98 - 1e-9 {
                        violations.push(format!(
                            "declared Lipschitz bound {declared} is below the finite-difference estimate {estimate:.6}"
                        ));
                    }
                }
            }
        }
        if !violations.is_empty() {
            return Err(Error::InvalidMap {
                which: format!("formula {source:?}"),
                violations,
            });
        }
        Ok(ExprMap {
            expr,
            source: source.to_string(),
            declared_lip,
        })
    }

    pub fn source(&self) -> &str {
        &self.source
    }

    pub fn expr(&self) -> &Expr {
        &self.expr
    }

    pub fn declared_lip(&self) -> Option<&Rational> {
        self.declared_lip.as_ref()
    }

    /// Evaluate at `x`. Inputs a hair outside `[0,1]` (float noise from an
    /// upstream map) are clamped in, and outputs are clamped to `[0,1]`,
    /// which construction-time validation made correct up to tolerance.
    pub fn eval_f64(&self, x: f64) -> Result<f64> {
        let v = self.expr.eval_f64(x.clamp(0.0, 1.0))?;
        Ok(v.clamp(0.0, 1.0))
    }

    /// Largest slope of a symmetric finite difference over a uniform grid
    /// (one-sided at the endpoints).
    pub fn lipschitz_estimate(&self) -> Result<f64> {
        grid_lipschitz(&self.expr)
    }
}

fn grid_lipschitz(expr: &Expr) -> Result<f64> {
    let n = limits::LIPSCHITZ_GRID - 1;
    let h = limits::LIPSCHITZ_STEP;
    let mut worst = 0.0f64;
    for k in 0..=n {
        let x = k as f64 / n as f64;
        let lo = (x - h).max(0.0);
        let hi = (x + h).min(1.0);
        let slope = (expr.eval_f64(hi)? - expr.eval_f64(lo)?) / (hi - lo);
        worst = worst.max(slope);
    }
    Ok(worst)
}

impl fmt::Display for ExprMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.source)
    }
}

/// A Lipschitz bound that is either exact (rational coefficients) or a
/// finite-difference estimate from a grid.
#[derive(Clone, Debug)]
pub enum Lip {
    Exact(Rational),
    Estimated(f64),
}

impl Lip {
    pub fn to_f64(&self) -> f64 {
        match self {
            Lip::Exact(r) => r.to_f64(),
            Lip::Estimated(v) => *v,
        }
    }

    pub fn is_estimated(&self) -> bool {
        matches!(self, Lip::Estimated(_))
    }

    pub fn as_exact(&self) -> Option<&Rational> {
        match self {
            Lip::Exact(r) => Some(r),
            Lip::Estimated(_) => None,
        }
    }
}

impl fmt::Display for Lip {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Lip::Exact(r) => write!(f, "{r}"),
            Lip::Estimated(v) => write!(f, "~{v}"),
        }
    }
}

/// Any of the supported map kinds, with a common evaluation interface.
#[derive(Clone, Debug)]
pub enum Map {
    Affine(AffineMap),
    Lf(LfMap),
    Expr(ExprMap),
}

impl Map {
    pub fn affine(slope: Rational, intercept: Rational) -> Result<Map> {
        Ok(Map::Affine(AffineMap::new(slope, intercept)?))
    }

    pub fn lf(matrix: Matrix2) -> Result<Map> {
        Ok(Map::Lf(LfMap::new(matrix)?))
    }

    pub fn expr(source: &str, declared_lip: Option<Rational>) -> Result<Map> {
        Ok(Map::Expr(ExprMap::new(source, declared_lip)?))
    }

    /// Whether the map evaluates exactly on rational inputs.
    pub fn is_exact(&self) -> bool {
        !matches!(self, Map::Expr(_))
    }

    pub fn kind(&self) -> &'static str {
        match self {
            Map::Affine(_) => "affine",
            Map::Lf(_) => "linear-fractional",
            Map::Expr(_) => "formula",
        }
    }

    pub fn eval_exact(&self, x: &Rational) -> Option<Rational> {
        match self {
            Map::Affine(m) => Some(m.eval_rational(x)),
            Map::Lf(m) => Some(m.eval_rational(x)),
            Map::Expr(_) => None,
        }
    }

    pub fn eval_f64(&self, x: f64) -> Result<f64> {
        match self {
            Map::Affine(m) => Ok(m.eval_f64(x)),
            Map::Lf(m) => Ok(m.eval_f64(x)),
            Map::Expr(m) => m.eval_f64(x),
        }
    }

    /// Evaluate, staying exact when both the input and the map are exact.
    pub fn eval_scalar(&self, x: &Scalar) -> Result<Scalar> {
        match x {
            Scalar::Exact(r) => {
                if let Some(v) = self.eval_exact(r) {
                    return Ok(Scalar::Exact(v));
                }
                Ok(Scalar::Approx(self.eval_f64(r.to_f64())?))
            }
            Scalar::Approx(v) => Ok(Scalar::Approx(self.eval_f64(*v)?)),
        }
    }

    /// The matrix form for exact maps (affine maps embed with denominator 1).
    pub fn as_matrix(&self) -> Option<Matrix2> {
        match self {
            Map::Affine(m) => Some(m.matrix()),
            Map::Lf(m) => Some(m.matrix().clone()),
            Map::Expr(_) => None,
        }
    }

    pub fn lipschitz(&self) -> Result<Lip> {
        match self {
            Map::Affine(m) => Ok(Lip::Exact(m.slope().clone())),
            Map::Lf(m) => Ok(Lip::Exact(m.lipschitz())),
            Map::Expr(m) => match m.declared_lip() {
                Some(r) => Ok(Lip::Exact(r.clone())),
                None => Ok(Lip::Estimated(m.lipschitz_estimate()?)),
            },
        }
    }

    /// Whether two maps provably define the same function on `[0,1]`:
    /// exact maps compare by matrix proportionality, formula maps by their
    /// source text. `false` means "not provably equal", not "different".
    pub fn same_action(&self, other: &Map) -> bool {
        match (self.as_matrix(), other.as_matrix()) {
            (Some(a), Some(b)) => a.is_proportional(&b),
            _ => match (self, other) {
                (Map::Expr(a), Map::Expr(b)) => a.source() == b.source(),
                _ => false,
            },
        }
    }
}

/// A bound on `|f(x) - f(y)| / |x - y|` over the unit interval: exact for
/// maps with rational coefficients, a grid estimate for formula maps
/// without a declared bound.
pub fn lipschitz_norm(map: &Map) -> Result<Lip> {
    map.lipschitz()
}

impl fmt::Display for Map {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Map::Affine(m) => m.fmt(f),
            Map::Lf(m) => m.fmt(f),
            Map::Expr(m) => m.fmt(f),
        }
    }
}
