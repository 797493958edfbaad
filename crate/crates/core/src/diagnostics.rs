//! Descent diagnostics that explain verdicts numerically.
//!
//! Along the itinerary of a point, the source and target intervals shrink
//! together; their length ratio tracks the difference quotient of the
//! conjugate function. Three per-depth quantities make the
//! singular/smooth dichotomy visible:
//!
//! * the **length ratio** `g_len / f_len` — it tends to the derivative
//!   where that exists, so it collapses to zero along typical itineraries
//!   of a singular pair and stabilizes for smooth ones;
//! * for matrix-representable targets, the **bottom-row ratio**
//!   `rs_ratio = r_n / s_n` of the running matrix product, which evolves
//!   by the transposed action of each transition matrix and, in the
//!   smooth case, converges along each vertex to that vertex's invariant;
//! * the **step ratio** `t_n`, the factor by which the target interval
//!   shrinks in one step; where the conjugate function has a positive
//!   derivative it tends to `1/2`, matching the halving of the source.

use std::fmt;

use crate::error::{Error, Result};
use crate::limits::MAX_DESCENT_DEPTH;
use crate::maps::Matrix2;
use crate::rational::{Rational, Scalar};
use crate::solver::solve_phi_rational;
use crate::systems::{itinerary_of, Cursor, Itinerary, SystemPair};

/// State after one descent step. `rs_ratio` and `t_n` are present exactly
/// when the target system is matrix-representable.
#[derive(Clone, Debug)]
pub struct TraceRow {
    /// Depth `n` (1-based: row `n` follows the `n`-th digit).
    pub depth: usize,
    /// The digit taken, which is also the vertex arrived at.
    pub digit: u8,
    pub f_len: Scalar,
    pub g_len: Scalar,
    /// `g_len / f_len`.
    pub ratio: Scalar,
    /// Bottom-row ratio `r_n / s_n` of the running matrix product.
    pub rs_ratio: Option<Rational>,
    /// Target child length over target parent length for this step.
    pub t_n: Option<Rational>,
}

impl fmt::Display for TraceRow {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "n={} digit={} f_len={} g_len={} ratio={}",
            self.depth, self.digit, self.f_len, self.g_len, self.ratio
        )?;
        if let Some(rs) = &self.rs_ratio {
            write!(f, " rs={rs}")?;
        }
        if let Some(t) = &self.t_n {
            write!(f, " t={t}")?;
        }
        Ok(())
    }
}

/// A full per-depth trace along one itinerary.
#[derive(Clone, Debug)]
pub struct RatioTrace {
    pub itinerary: Itinerary,
    pub rows: Vec<TraceRow>,
}

impl RatioTrace {
    /// Bottom-row ratios of the rows that arrive at `vertex`, in depth
    /// order. In the smooth case these converge to the vertex invariant.
    pub fn rs_at_vertex(&self, vertex: usize) -> Vec<&Rational> {
        self.rows
            .iter()
            .filter(|row| row.digit as usize == vertex)
            .filter_map(|row| row.rs_ratio.as_ref())
            .collect()
    }
}

impl fmt::Display for RatioTrace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "trace {}", self.itinerary)?;
        for row in &self.rows {
            writeln!(f, "  {row}")?;
        }
        Ok(())
    }
}

/// Trace the descent of `x` from `start` for `depth` steps, recording the
/// interval lengths on both sides and their ratio. Works for every valid
/// pair; matrix-representable targets additionally get the exact
/// `rs_ratio` and `t_n` recursions.
pub fn ratio_trace(
    pair: &SystemPair,
    start: usize,
    x: &Scalar,
    depth: usize,
) -> Result<RatioTrace> {
    let itin = itinerary_of(&pair.f, start, x, depth)?;
    ratio_trace_along(pair, &itin)
}

/// As [`ratio_trace`], but along an explicitly given itinerary.
pub fn ratio_trace_along(pair: &SystemPair, itin: &Itinerary) -> Result<RatioTrace> {
    if itin.depth() > MAX_DESCENT_DEPTH {
        return Err(Error::DepthExceeded {
            requested: itin.depth(),
            max: MAX_DESCENT_DEPTH,
        });
    }
    let lf_target = pair.g.is_linear_fractional();
    let mut fcur = Cursor::new(&pair.f, itin.start);
    let mut gcur = Cursor::new(&pair.g, itin.start);
    let mut product = Matrix2::identity();
    let mut rho = Rational::zero();
    let mut vertex = itin.start;
    let mut rows = Vec::with_capacity(itin.depth());
    for (k, &digit) in itin.digits.iter().enumerate() {
        fcur = fcur.child(digit);
        gcur = gcur.child(digit);
        let f_len = fcur.width()?;
        let g_len = gcur.width()?;
        if f_len <= Scalar::zero(true) || g_len <= Scalar::zero(true) {
            return Err(Error::Domain(format!(
                "interval width underflowed at depth {} of {itin}",
                k + 1
            )));
        }
        let ratio = &g_len / &f_len;

        let (rs_ratio, t_n) = if lf_target {
            let m = pair
                .g
                .map(vertex, digit)
                .as_matrix()
                .expect("matrix-representable target");
            // Child-over-parent length, from the previous bottom-row
            // ratio: det(A) (rho + 1) / ((rho b + d)(rho (a + b) + c + d)).
            let den1 = &(&rho * &m.b) + &m.d;
            let den2 = &(&rho * &(&m.a + &m.b)) + &(&m.c + &m.d);
            if !den1.is_positive() || !den2.is_positive() {
                return Err(Error::Domain(format!(
                    "step denominator vanished at depth {} of {itin}",
                    k + 1
                )));
            }
            let t = &(&m.det() * &(&rho + &Rational::one())) / &(&den1 * &den2);
            product = &product * &m;
            let (r, s) = (&product.c, &product.d);
            if !s.is_positive() || !(r + s).is_positive() {
                return Err(Error::Domain(format!(
                    "matrix product lost positivity at depth {} of {itin}",
                    k + 1
                )));
            }
            rho = r / s;
            (Some(rho.clone()), Some(t))
        } else {
            (None, None)
        };

        rows.push(TraceRow {
            depth: k + 1,
            digit,
            f_len,
            g_len,
            ratio,
            rs_ratio,
            t_n,
        });
        vertex = digit as usize;
    }
    Ok(RatioTrace {
        itinerary: itin.clone(),
        rows,
    })
}

/// How often each adjacent digit pair `(i, j)` occurs in an itinerary.
/// The counts cover the pairs *within* the digit string, so they sum to
/// one less than the depth.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct PatternCounts {
    pub counts: [[usize; 2]; 2],
    pub depth: usize,
}

impl PatternCounts {
    pub fn count(&self, from: usize, to: usize) -> usize {
        self.counts[from][to]
    }

    pub fn total(&self) -> usize {
        self.counts.iter().flatten().sum()
    }
}

impl fmt::Display for PatternCounts {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "(0,0)x{} (0,1)x{} (1,0)x{} (1,1)x{}",
            self.counts[0][0], self.counts[0][1], self.counts[1][0], self.counts[1][1]
        )
    }
}

pub fn pattern_counts(itin: &Itinerary) -> Result<PatternCounts> {
    if itin.depth() < 2 {
        return Err(Error::Domain(format!(
            "pattern counts need at least two digits, got {}",
            itin.depth()
        )));
    }
    let mut counts = PatternCounts {
        depth: itin.depth(),
        ..PatternCounts::default()
    };
    for pair in itin.digits.windows(2) {
        counts.counts[pair[0] as usize][pair[1] as usize] += 1;
    }
    Ok(counts)
}

/// Central-difference probe of the conjugate function's derivative at `x`:
/// `(phi(x+h) - phi(x-h)) / (2h)`, with both evaluations enclosed to
/// `h^2/100`. Needs `0 <= x-h` and `x+h <= 1`.
pub fn derivative_estimate(
    pair: &SystemPair,
    vertex: usize,
    x: &Rational,
    h: &Rational,
) -> Result<f64> {
    if !h.is_positive() {
        return Err(Error::Domain(format!("step h = {h} must be positive")));
    }
    let lo = x - h;
    let hi = x + h;
    if lo.is_negative() || hi > Rational::one() {
        return Err(Error::Domain(format!(
            "derivative probe at x = {x} with h = {h} leaves [0,1]"
        )));
    }
    let hf = h.to_f64();
    let tol = (hf * hf * 1e-2).max(f64::MIN_POSITIVE);
    let plo = solve_phi_rational(pair, vertex, &lo, tol)?;
    let phi = solve_phi_rational(pair, vertex, &hi, tol)?;
    let num = phi.estimate.to_f64() - plo.estimate.to_f64();
    Ok(num / (2.0 * hf))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::classify::lf_alpha;
    use crate::maps::Map;
    use crate::systems::System;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn r(s: &str) -> Rational {
        s.parse().unwrap()
    }

    fn lf_maps(ms: [[i64; 4]; 4], label: &str) -> System {
        let m = |k: usize| {
            Map::lf(Matrix2::from_ints(ms[k][0], ms[k][1], ms[k][2], ms[k][3])).unwrap()
        };
        System::new([[m(0), m(1)], [m(2), m(3)]], label).unwrap()
    }

    fn smooth_pair() -> SystemPair {
        let g = lf_maps(
            [[2, 0, -1, 4], [4, 2, 3, 3], [2, 0, -7, 12], [4, 2, 1, 5]],
            "lf-smooth",
        );
        SystemPair::new(System::halving(), g)
    }

    fn singular_pair() -> SystemPair {
        let g = lf_maps(
            [[1, 0, 1, 1], [0, 1, -1, 2], [1, 0, -1, 3], [3, 1, 2, 2]],
            "lf-singular",
        );
        SystemPair::new(System::halving(), g)
    }

    fn affine_system(p0: &str, p1: &str, label: &str) -> System {
        let row = |p: &str| {
            let p = r(p);
            [
                Map::affine(p.clone(), Rational::zero()).unwrap(),
                Map::affine(&Rational::one() - &p, p).unwrap(),
            ]
        };
        System::new([row(p0), row(p1)], label).unwrap()
    }

    #[test]
    fn constant_zero_trace_matches_hand_computation() {
        let pair = smooth_pair();
        let itin = Itinerary::new(0, vec![0, 0, 0]);
        let trace = ratio_trace_along(&pair, &itin).unwrap();
        assert_eq!(trace.rows.len(), 3);
        // Products of [2,0;-1,4]: bottom rows (-1,4), (-6,16), (-28,64).
        let expect = [
            ("1/2", "2/3", "4/3", "-1/4", "2/3"),
            ("1/4", "2/5", "8/5", "-3/8", "3/5"),
            ("1/8", "2/9", "16/9", "-7/16", "5/9"),
        ];
        for (row, (f_len, g_len, ratio, rs, t)) in trace.rows.iter().zip(expect) {
            assert_eq!(row.f_len, Scalar::Exact(r(f_len)), "f_len at {}", row.depth);
            assert_eq!(row.g_len, Scalar::Exact(r(g_len)), "g_len at {}", row.depth);
            assert_eq!(row.ratio, Scalar::Exact(r(ratio)), "ratio at {}", row.depth);
            assert_eq!(row.rs_ratio.as_ref(), Some(&r(rs)), "rs at {}", row.depth);
            assert_eq!(row.t_n.as_ref(), Some(&r(t)), "t at {}", row.depth);
        }
    }

    #[test]
    fn affine_trace_ratio_is_a_slope_product() {
        // Source breaks (1/2, 1/3), target breaks (1/4, 1/5): along the
        // all-zeros itinerary from vertex 0 the ratio is (q0/p0)^n = 2^-n.
        let pair = SystemPair::new(
            affine_system("1/2", "1/3", "f"),
            affine_system("1/4", "1/5", "g"),
        );
        let trace = ratio_trace(&pair, 0, &Scalar::Exact(r("0")), 6).unwrap();
        let mut expect = Rational::one();
        let half = r("1/2");
        for row in &trace.rows {
            expect = &expect * &half;
            assert_eq!(row.ratio, Scalar::Exact(expect.clone()), "depth {}", row.depth);
            assert!(row.rs_ratio.is_some(), "affine maps are matrix-representable");
        }
        // Per-step factors multiply back to the depth-n ratio.
        let mut acc = Scalar::one(true);
        for row in &trace.rows {
            let step = if row.depth == 1 {
                row.ratio.clone()
            } else {
                &trace.rows[row.depth - 1].ratio / &trace.rows[row.depth - 2].ratio
            };
            acc = &acc * &step;
        }
        assert_eq!(acc, trace.rows.last().unwrap().ratio);
    }

    #[test]
    fn t_n_matches_per_digit_formulas() {
        // The general step formula must agree with the digit-specific
        // ones: digit 0 -> (rho+1)/(rho + (c+d)/a), digit 1 ->
        // (d/b - 1)/(rho + d/b), with rho the previous bottom-row ratio.
        for pair in [smooth_pair(), singular_pair()] {
            let itin = Itinerary::new(0, vec![1, 0, 0, 1, 1, 0, 1]);
            let trace = ratio_trace_along(&pair, &itin).unwrap();
            let mut vertex = itin.start;
            let mut rho_prev = Rational::zero();
            for row in &trace.rows {
                let m = pair.g.map(vertex, row.digit).as_matrix().unwrap();
                let expected = if row.digit == 0 {
                    let cd_over_a = &(&m.c + &m.d) / &m.a;
                    &(&rho_prev + &Rational::one()) / &(&rho_prev + &cd_over_a)
                } else {
                    let d_over_b = &m.d / &m.b;
                    &(&d_over_b - &Rational::one()) / &(&rho_prev + &d_over_b)
                };
                assert_eq!(row.t_n.as_ref(), Some(&expected), "depth {}", row.depth);
                rho_prev = row.rs_ratio.clone().unwrap();
                vertex = row.digit as usize;
            }
        }
    }

    #[test]
    fn t_n_is_the_target_child_over_parent_length() {
        let pair = singular_pair();
        let itin = Itinerary::new(1, vec![0, 1, 1, 0, 0, 1]);
        let trace = ratio_trace_along(&pair, &itin).unwrap();
        let mut parent = Scalar::one(true);
        for row in &trace.rows {
            let got = row.t_n.clone().unwrap();
            let want = &row.g_len / &parent;
            assert_eq!(Scalar::Exact(got), want, "depth {}", row.depth);
            parent = row.g_len.clone();
        }
    }

    #[test]
    fn rs_ratio_converges_to_vertex_invariants_when_smooth() {
        let pair = smooth_pair();
        let alpha = [
            lf_alpha(&pair.g, 0).unwrap().to_f64(),
            lf_alpha(&pair.g, 1).unwrap().to_f64(),
        ];
        let digits: Vec<u8> = (0..30).map(|k| (k % 2) as u8).collect();
        let itin = Itinerary::new(0, digits);
        let trace = ratio_trace_along(&pair, &itin).unwrap();
        for vertex in 0..2 {
            let rs = trace.rs_at_vertex(vertex);
            let last = rs.last().expect("alternating path visits both");
            assert!(
                (last.to_f64() - alpha[vertex]).abs() < 1e-3,
                "vertex {vertex}: rs tail {last} vs invariant {}",
                alpha[vertex]
            );
        }
        // And the step ratios settle near 1/2.
        let tail = trace.rows.last().unwrap().t_n.clone().unwrap();
        assert!((tail.to_f64() - 0.5).abs() < 1e-3, "step {tail}");
    }

    #[test]
    fn singular_traces_collapse_the_length_ratio() {
        // 1/3 alternates digits; its ratio decays fast under this target.
        let pair = singular_pair();
        let trace = ratio_trace(&pair, 0, &Scalar::Exact(r("1/3")), 30).unwrap();
        let last = trace.rows.last().unwrap();
        assert!(
            last.ratio.to_f64() < 0.01,
            "expected collapse, got {}",
            last.ratio.to_f64()
        );
        assert!(trace
            .rows
            .iter()
            .all(|row| row.ratio > Scalar::zero(true)));
        // Lengths are nonincreasing on both sides.
        for pair in trace.rows.windows(2) {
            assert!(pair[1].f_len <= pair[0].f_len);
            assert!(pair[1].g_len <= pair[0].g_len);
        }
    }

    #[test]
    fn identity_pair_traces_are_flat() {
        let pair = SystemPair::new(System::halving(), System::halving());
        let trace = ratio_trace(&pair, 1, &Scalar::Exact(r("2/3")), 12).unwrap();
        for row in &trace.rows {
            assert_eq!(row.ratio, Scalar::Exact(r("1")));
            assert_eq!(row.rs_ratio.as_ref(), Some(&r("0")));
            assert_eq!(row.t_n.as_ref(), Some(&r("1/2")));
        }
    }

    #[test]
    fn formula_targets_trace_without_matrix_columns() {
        let g = System::new(
            [
                [
                    Map::expr("x^2/(x+1)", Some(r("3/4"))).unwrap(),
                    Map::affine(r("1/2"), r("1/2")).unwrap(),
                ],
                [
                    Map::expr("x^(3/2)/8", Some(r("3/16"))).unwrap(),
                    Map::affine(r("7/8"), r("1/8")).unwrap(),
                ],
            ],
            "nonlinear",
        )
        .unwrap();
        let pair = SystemPair::new(System::halving(), g);
        let trace = ratio_trace(&pair, 0, &Scalar::Exact(r("2/5")), 16).unwrap();
        assert_eq!(trace.rows.len(), 16);
        for row in &trace.rows {
            assert!(row.rs_ratio.is_none() && row.t_n.is_none());
            assert!(row.ratio > Scalar::zero(true));
            let expected = Rational::new(1, 1i64 << row.depth).unwrap();
            assert_eq!(row.f_len, Scalar::Exact(expected));
        }
    }

    #[test]
    fn pattern_counts_tally_adjacent_digit_pairs() {
        let counts = pattern_counts(&Itinerary::new(0, vec![0, 0, 0, 0, 0])).unwrap();
        assert_eq!(counts.count(0, 0), 4);
        assert_eq!(counts.total(), 4);

        let counts = pattern_counts(&Itinerary::new(1, vec![0, 1, 0, 1, 0])).unwrap();
        assert_eq!(counts.count(0, 1), 2);
        assert_eq!(counts.count(1, 0), 2);
        assert_eq!(counts.count(0, 0), 0);
        assert_eq!(counts.total(), counts.depth - 1);

        assert!(pattern_counts(&Itinerary::new(0, vec![1])).is_err());
    }

    #[test]
    fn fair_coin_patterns_approach_uniform_frequencies() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let digits: Vec<u8> = (0..100_000).map(|_| rng.gen_range(0..=1)).collect();
        let counts = pattern_counts(&Itinerary::new(0, digits)).unwrap();
        let n = counts.total() as f64;
        for i in 0..2 {
            for j in 0..2 {
                let freq = counts.count(i, j) as f64 / n;
                assert!((freq - 0.25).abs() < 0.01, "({i},{j}) frequency {freq}");
            }
        }
    }

    #[test]
    fn derivative_probe_matches_closed_form() {
        // Smooth case: phi_0 = 2x/(x+1), derivative 2/(x+1)^2 = 8/9 at 1/2.
        let pair = smooth_pair();
        let est = derivative_estimate(&pair, 0, &r("1/2"), &r("1/1024")).unwrap();
        assert!((est - 8.0 / 9.0).abs() < 1e-4, "estimate {est}");
        // Identity: derivative exactly 1.
        let id = SystemPair::new(System::halving(), System::halving());
        let est = derivative_estimate(&id, 0, &r("1/3"), &r("1/512")).unwrap();
        assert!((est - 1.0).abs() < 1e-12, "estimate {est}");
        // Domain guards.
        assert!(derivative_estimate(&pair, 0, &r("0"), &r("1/8")).is_err());
        assert!(derivative_estimate(&pair, 0, &r("1/2"), &r("0")).is_err());
    }

    #[test]
    fn traces_work_for_general_sources() {
        // A non-halving source is fine: the ratio column is universal.
        let pair = SystemPair::new(
            affine_system("1/3", "2/5", "f"),
            affine_system("1/2", "1/2", "g"),
        );
        let trace = ratio_trace(&pair, 0, &Scalar::Exact(r("1/2")), 8).unwrap();
        assert_eq!(trace.rows.len(), 8);
        assert!(trace.rows.iter().all(|row| row.ratio > Scalar::zero(true)));
    }
}
