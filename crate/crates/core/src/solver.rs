//! Construction of the conjugate pair: pointwise evaluation with guaranteed
//! enclosures, exact curve sampling, conjugacy residuals, and a discrepancy
//! check for the defining self-map.
//!
//! The pair `phi_0, phi_1` is characterized by sending every interval coded
//! from vertex `i` in the source system `f` onto the interval with the same
//! itinerary in the target system `g`:
//!
//! ```text
//! phi_i ( I^f_i(d1..dn) ) = I^g_i(d1..dn).
//! ```
//!
//! Pointwise evaluation therefore reads the `f`-itinerary of `x` and tracks
//! the matching `g`-interval, which encloses `phi_i(x)` at every depth. The
//! endpoints and split points of those intervals are hit exactly.

use std::fmt;

use crate::error::{Error, Result};
use crate::limits;
use crate::rational::{Rational, Scalar};
use crate::systems::{check_vertex, Cursor, Enclosure, Itinerary, SystemPair};

/// Result of evaluating one conjugate function at one point.
#[derive(Clone, Debug)]
pub struct PhiValue {
    /// Interval guaranteed to contain the true value.
    pub enclosure: Enclosure,
    /// Point estimate: exact on an interval endpoint or split point,
    /// otherwise a linear interpolation inside the final enclosure.
    pub estimate: Scalar,
    /// Levels of descent performed.
    pub depth_used: usize,
    /// The source-system itinerary that was followed.
    pub itinerary: Itinerary,
    /// The input landed exactly on an interval boundary, so `estimate` is
    /// the true value (exactly for exact systems, in `f64` otherwise).
    pub exact_hit: bool,
    /// Descent stopped at the depth cap before reaching the tolerance; the
    /// enclosure is still correct but wider than requested.
    pub depth_capped: bool,
}

fn check_tol(tol: f64) -> Result<()> {
    if !(tol.is_finite() && tol > 0.0) {
        return Err(Error::Domain(format!("tolerance {tol} must be positive")));
    }
    Ok(())
}

fn check_unit_point(x: &Scalar) -> Result<()> {
    let v = x.to_f64();
    if !(0.0..=1.0).contains(&v) {
        return Err(Error::Domain(format!("point {v} is outside [0, 1]")));
    }
    Ok(())
}

/// Evaluate `phi_vertex(x)` by paired descent until the enclosure width is
/// at most `tol` or the depth cap is reached.
pub fn solve_phi(pair: &SystemPair, vertex: usize, x: &Scalar, tol: f64) -> Result<PhiValue> {
    check_vertex(vertex)?;
    check_tol(tol)?;
    check_unit_point(x)?;

    let mut fcur = Cursor::new(&pair.f, vertex);
    let mut gcur = Cursor::new(&pair.g, vertex);
    let mut digits: Vec<u8> = Vec::new();

    // Boundary correspondences give exact values without any descent.
    let exact_value = |value: Scalar, digits: Vec<u8>, depth: usize| PhiValue {
        enclosure: Enclosure {
            lo: value.clone(),
            hi: value.clone(),
        },
        estimate: value,
        depth_used: depth,
        itinerary: Itinerary::new(vertex, digits),
        exact_hit: true,
        depth_capped: false,
    };
    if x == &Scalar::Exact(Rational::zero()) {
        return Ok(exact_value(Scalar::zero(pair.g.is_exact()), digits, 0));
    }
    if x == &Scalar::Exact(Rational::one()) {
        return Ok(exact_value(Scalar::one(pair.g.is_exact()), digits, 0));
    }

    loop {
        let genc = gcur.enclosure()?;
        let width = genc.width().to_f64();
        let depth = digits.len();
        let capped = depth >= limits::MAX_DESCENT_DEPTH;
        if width <= tol || capped {
            let fenc = fcur.enclosure()?;
            // Interpolate inside the enclosure. For identical systems this
            // reproduces x itself exactly, and in general it is monotone in
            // x between the enclosure's exact endpoints.
            let ratio = &(x - &fenc.lo) / &fenc.width();
            let estimate = &genc.lo + &(&ratio * &genc.width());
            return Ok(PhiValue {
                enclosure: genc,
                estimate,
                depth_used: depth,
                itinerary: Itinerary::new(vertex, digits),
                exact_hit: false,
                depth_capped: capped && width > tol,
            });
        }
        let fsplit = fcur.split_point()?;
        if x == &fsplit {
            // x is the image of a row break: its value is the matching
            // split in the target system.
            let value = gcur.split_point()?;
            return Ok(exact_value(value, digits, depth));
        }
        let digit = u8::from(x > &fsplit);
        digits.push(digit);
        fcur = fcur.child(digit);
        gcur = gcur.child(digit);
    }
}

/// [`solve_phi`] for an exact rational input.
pub fn solve_phi_rational(
    pair: &SystemPair,
    vertex: usize,
    x: &Rational,
    tol: f64,
) -> Result<PhiValue> {
    solve_phi(pair, vertex, &Scalar::Exact(x.clone()), tol)
}

/// A polyline of exactly known points on one conjugate function.
#[derive(Clone, Debug)]
pub struct CurveSample {
    pub vertex: usize,
    pub depth: usize,
    /// `(x, phi_vertex(x))` pairs with strictly increasing x, from `(0,0)`
    /// to `(1,1)`; `2^depth + 1` points.
    pub points: Vec<(Scalar, Scalar)>,
}

/// Sample `phi_vertex` at every depth-`depth` interval endpoint.
///
/// Built bottom-up: the depth-`k` point list at vertex `i` is the image of
/// the two depth-`k-1` lists under the digit maps (source map on x, target
/// map on y), glued at the shared row break. Every returned point lies on
/// the curve by the interval correspondence, with no descent error.
pub fn sample_curve(pair: &SystemPair, vertex: usize, depth: usize) -> Result<CurveSample> {
    check_vertex(vertex)?;
    if depth > limits::MAX_CURVE_DEPTH {
        return Err(Error::DepthExceeded {
            requested: depth,
            max: limits::MAX_CURVE_DEPTH,
        });
    }
    let fe = pair.f.is_exact();
    let ge = pair.g.is_exact();
    let base = vec![
        (Scalar::zero(fe), Scalar::zero(ge)),
        (Scalar::one(fe), Scalar::one(ge)),
    ];
    let mut level: [Vec<(Scalar, Scalar)>; 2] = [base.clone(), base];
    for _ in 0..depth {
        let mut next: [Vec<(Scalar, Scalar)>; 2] = [Vec::new(), Vec::new()];
        for (i, out) in next.iter_mut().enumerate() {
            out.reserve(level[0].len() + level[1].len() - 1);
            for j in 0..2usize {
                let fmap = pair.f.map(i, j as u8);
                let gmap = pair.g.map(i, j as u8);
                // The last point of branch 0 and the first of branch 1 are
                // both the row break's image; keep one copy.
                let skip = usize::from(j == 1);
                for (x, y) in level[j].iter().skip(skip) {
                    out.push((fmap.eval_scalar(x)?, gmap.eval_scalar(y)?));
                }
            }
        }
        level = next;
    }
    let points = level[vertex].clone();
    Ok(CurveSample {
        vertex,
        depth,
        points,
    })
}

/// Largest conjugacy defect over a uniform grid.
#[derive(Clone, Debug)]
pub struct Residual {
    /// `max |g[i][j](phi_j(x)) - phi_i(f[i][j](x))|` over corners and grid.
    pub max_abs: Scalar,
    pub worst_corner: (usize, u8),
    pub worst_x: Scalar,
    /// Number of grid points per corner.
    pub grid: usize,
}

impl fmt::Display for Residual {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "max residual {} at corner ({}, {}), x = {} ({} grid points)",
            self.max_abs.to_f64(),
            self.worst_corner.0,
            self.worst_corner.1,
            self.worst_x.to_f64(),
            self.grid
        )
    }
}

/// Evaluate the defining equations `g[i][j](phi_j(x)) = phi_i(f[i][j](x))`
/// on `grid` evenly spaced points per corner, solving both sides to
/// tolerance `tol`, and report the largest absolute defect.
///
/// Identical source and target systems report an exactly zero defect: both
/// sides reduce to the same exact rational arithmetic.
pub fn residual_max(pair: &SystemPair, grid: usize, tol: f64) -> Result<Residual> {
    check_tol(tol)?;
    if grid < 2 {
        return Err(Error::Domain(format!(
            "residual grid needs at least 2 points, got {grid}"
        )));
    }
    let mut worst: Option<Residual> = None;
    for i in 0..2usize {
        for j in 0..2u8 {
            let fmap = pair.f.map(i, j);
            let gmap = pair.g.map(i, j);
            for t in 0..grid {
                let x = Scalar::Exact(
                    Rational::from_big((t as i64).into(), (grid as i64 - 1).into())
                        .expect("grid-1 > 0"),
                );
                let phi_j = solve_phi(pair, j as usize, &x, tol)?.estimate;
                let lhs = gmap.eval_scalar(&phi_j)?;
                let fx = fmap.eval_scalar(&x)?;
                let rhs = solve_phi(pair, i, &fx, tol)?.estimate;
                let defect = (&lhs - &rhs).abs();
                if worst.as_ref().is_none_or(|w| defect > w.max_abs) {
                    worst = Some(Residual {
                        max_abs: defect,
                        worst_corner: (i, j),
                        worst_x: x.clone(),
                        grid,
                    });
                }
            }
        }
    }
    Ok(worst.expect("grid is nonempty"))
}

/// Distance from `p` to the polyline through `points` (sorted by x).
///
/// Scans segments outward from the x-neighborhood of `p` and stops once the
/// horizontal gap alone exceeds the best distance found.
fn dist_to_polyline(points: &[(f64, f64)], p: (f64, f64)) -> f64 {
    debug_assert!(points.len() >= 2);
    let segment_dist = |k: usize| -> f64 {
        let (ax, ay) = points[k];
        let (bx, by) = points[k + 1];
        let (dx, dy) = (bx - ax, by - ay);
        let len2 = dx * dx + dy * dy;
        let t = if len2 == 0.0 {
            0.0
        } else {
            (((p.0 - ax) * dx + (p.1 - ay) * dy) / len2).clamp(0.0, 1.0)
        };
        let (ex, ey) = (ax + t * dx - p.0, ay + t * dy - p.1);
        (ex * ex + ey * ey).sqrt()
    };
    // Segment whose x-range holds p.0 (clamped to valid segment indices).
    let at = points
        .partition_point(|q| q.0 < p.0)
        .saturating_sub(1)
        .min(points.len() - 2);
    let mut best = segment_dist(at);
    // Walk left: segment k ends at points[k+1]; once that endpoint is more
    // than `best` to the left of p, no farther segment can win.
    for k in (0..at).rev() {
        if p.0 - points[k + 1].0 > best {
            break;
        }
        best = best.min(segment_dist(k));
    }
    for k in at + 1..points.len() - 1 {
        if points[k].0 - p.0 > best {
            break;
        }
        best = best.min(segment_dist(k));
    }
    best
}

/// Measure how far the defining self-map moves a sampled curve pair.
///
/// The graph of the true pair is invariant under the four corner maps:
/// a point `(x, y)` on `phi_j` transforms to `(f[i][j](x), g[i][j](y))` on
/// `phi_i`. This check transforms every sampled point of each curve and
/// returns the largest Euclidean distance to the (polyline through the)
/// sampled other curve. For the true pair sampled at depth `n` the result
/// is bounded by the sampling mesh, so it converges to 0 with depth.
pub fn graph_operator_check(pair: &SystemPair, depth: usize) -> Result<f64> {
    if depth > limits::MAX_OPERATOR_DEPTH {
        return Err(Error::DepthExceeded {
            requested: depth,
            max: limits::MAX_OPERATOR_DEPTH,
        });
    }
    let curves = [sample_curve(pair, 0, depth)?, sample_curve(pair, 1, depth)?];
    let flat: [Vec<(f64, f64)>; 2] = [0, 1].map(|i| {
        curves[i]
            .points
            .iter()
            .map(|(x, y)| (x.to_f64(), y.to_f64()))
            .collect()
    });
    let mut worst = 0.0f64;
    for i in 0..2usize {
        for j in 0..2u8 {
            let fmap = pair.f.map(i, j);
            let gmap = pair.g.map(i, j);
            for (x, y) in &curves[j as usize].points {
                let px = fmap.eval_scalar(x)?.to_f64();
                let py = gmap.eval_scalar(y)?.to_f64();
                worst = worst.max(dist_to_polyline(&flat[i], (px, py)));
            }
        }
    }
    Ok(worst)
}
