//! Four-map systems over the two-vertex digraph, the intervals they code,
//! and the maximal interval width `delta`.
//!
//! A system assigns to every vertex `i` and digit `j` a strictly increasing
//! weak contraction `h[i][j]`. Row `i` must tile the unit interval:
//!
//! ```text
//! h[i][0](0) = 0,   h[i][0](1) = h[i][1](0),   h[i][1](1) = 1,
//! ```
//!
//! with the shared corner (the *row break*) strictly inside `(0,1)`. A digit
//! string `d1 d2 ... dn` read from start vertex `i` codes the interval
//!
//! ```text
//! I_i(d1,...,dn) = h[i][d1] ∘ h[d1][d2] ∘ ... ∘ h[d(n-1)][dn] ( [0,1] ),
//! ```
//!
//! i.e. each digit names the next vertex. At fixed depth `n` the intervals
//! read from vertex `i` tile `[0,1]`; refining by one digit splits an
//! interval at the image of the current vertex's row break.

use std::fmt;

use crate::error::{Error, Result};
use crate::limits;
use crate::maps::{Map, Matrix2};
use crate::rational::{Rational, Scalar};

/// A start vertex and digit string; the address of a coded interval.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Itinerary {
    pub start: usize,
    pub digits: Vec<u8>,
}

impl Itinerary {
    pub fn new(start: usize, digits: Vec<u8>) -> Self {
        Itinerary { start, digits }
    }

    pub fn depth(&self) -> usize {
        self.digits.len()
    }

    /// Consecutive vertex pairs `(v_k, v_{k+1})` along the walk, starting
    /// from `(start, d1)`.
    pub fn transitions(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::with_capacity(self.digits.len());
        let mut at = self.start;
        for &d in &self.digits {
            out.push((at, d as usize));
            at = d as usize;
        }
        out
    }
}

impl fmt::Display for Itinerary {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:", self.start)?;
        for d in &self.digits {
            write!(f, "{d}")?;
        }
        Ok(())
    }
}

/// A closed subinterval `[lo, hi]` of the unit interval, exact when the
/// system it came from is exact.
#[derive(Clone, Debug, PartialEq)]
pub struct Enclosure {
    pub lo: Scalar,
    pub hi: Scalar,
}

impl Enclosure {
    pub fn width(&self) -> Scalar {
        &self.hi - &self.lo
    }

    pub fn contains(&self, x: &Scalar) -> bool {
        &self.lo <= x && x <= &self.hi
    }

    pub fn is_exact(&self) -> bool {
        self.lo.is_exact() && self.hi.is_exact()
    }
}

impl fmt::Display for Enclosure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match (self.lo.as_exact(), self.hi.as_exact()) {
            (Some(a), Some(b)) => write!(f, "[{a}, {b}]"),
            _ => write!(f, "[{}, {}]", self.lo.to_f64(), self.hi.to_f64()),
        }
    }
}

/// Validation outcome for the row-tiling conditions.
#[derive(Clone, Debug)]
pub struct CompatReport {
    pub ok: bool,
    pub violations: Vec<String>,
}

fn scalars_match(a: &Scalar, b: &Scalar) -> bool {
    match (a.as_exact(), b.as_exact()) {
        (Some(x), Some(y)) => x == y,
        _ => (a.to_f64() - b.to_f64()).abs() <= limits::COMPAT_TOL,
    }
}

/// Check the endpoint conditions that make four maps a system: each row
/// fixes 0 and 1 and the two maps of a row meet at a break strictly inside
/// the interval. Exact maps are compared exactly; comparisons involving a
/// formula map use the float tolerance `COMPAT_TOL`.
pub fn validate_compatibility(maps: &[[Map; 2]; 2]) -> CompatReport {
    let mut violations = Vec::new();
    for (i, row) in maps.iter().enumerate() {
        let at = |m: &Map, x: Scalar| m.eval_scalar(&x);
        let left = at(&row[0], Scalar::Exact(Rational::zero()));
        let right = at(&row[1], Scalar::Exact(Rational::one()));
        let break0 = at(&row[0], Scalar::Exact(Rational::one()));
        let break1 = at(&row[1], Scalar::Exact(Rational::zero()));
        let mut check = |name: &str, value: &Result<Scalar>, target: &Scalar| match value {
            Ok(v) if scalars_match(v, target) => {}
            Ok(v) => violations.push(format!(
                "row {i}: {name} = {} but must equal {}",
                v.to_f64(),
                target.to_f64()
            )),
            Err(e) => violations.push(format!("row {i}: {name} not evaluable: {e}")),
        };
        check("h[i][0](0)", &left, &Scalar::Exact(Rational::zero()));
        check("h[i][1](1)", &right, &Scalar::Exact(Rational::one()));
        match (&break0, &break1) {
            (Ok(b0), Ok(b1)) => {
                if !scalars_match(b0, b1) {
                    violations.push(format!(
                        "row {i}: maps meet at h[i][0](1) = {} vs h[i][1](0) = {}",
                        b0.to_f64(),
                        b1.to_f64()
                    ));
                } else {
                    let v = b0.to_f64();
                    if !(limits::COMPAT_TOL..=1.0 - limits::COMPAT_TOL).contains(&v) {
                        violations.push(format!(
                            "row {i}: break {v} must lie strictly inside (0, 1)"
                        ));
                    }
                }
            }
            _ => {} // evaluation failures already reported via the endpoint checks
        }
    }
    CompatReport {
        ok: violations.is_empty(),
        violations,
    }
}

/// Four maps `h[i][j]` satisfying the row-tiling conditions.
#[derive(Clone, Debug)]
pub struct System {
    maps: [[Map; 2]; 2],
    label: String,
    exact: bool,
    breaks: [Scalar; 2],
}

impl System {
    pub fn new(maps: [[Map; 2]; 2], label: impl Into<String>) -> Result<Self> {
        let label = label.into();
        let report = validate_compatibility(&maps);
        if !report.ok {
            return Err(Error::InvalidSystem {
                label,
                violations: report.violations,
            });
        }
        let exact = maps.iter().flatten().all(Map::is_exact);
        let break_of = |row: &[Map; 2]| {
            row[0]
                .eval_scalar(&Scalar::Exact(Rational::one()))
                .expect("validated row break evaluates")
        };
        let breaks = [break_of(&maps[0]), break_of(&maps[1])];
        Ok(System {
            maps,
            label,
            exact,
            breaks,
        })
    }

    /// The halving system: both rows are `x/2` and `(x+1)/2`, so depth-`n`
    /// intervals are the dyadic intervals of length `2^-n` and itineraries
    /// are binary digit expansions.
    pub fn halving() -> System {
        let row = || {
            [
                Map::affine(Rational::new(1, 2).unwrap(), Rational::zero()).unwrap(),
                Map::affine(Rational::new(1, 2).unwrap(), Rational::new(1, 2).unwrap()).unwrap(),
            ]
        };
        System::new([row(), row()], "halving").expect("halving system is valid")
    }

    pub fn map(&self, vertex: usize, digit: u8) -> &Map {
        &self.maps[vertex][digit as usize]
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    /// Whether all four maps evaluate exactly on rational inputs.
    pub fn is_exact(&self) -> bool {
        self.exact
    }

    /// The row break `h[i][0](1)`, where row `i`'s two images meet.
    pub fn break_point(&self, vertex: usize) -> &Scalar {
        &self.breaks[vertex]
    }

    /// Whether this is the halving system (up to matrix rescaling).
    pub fn is_halving(&self) -> bool {
        let lower = Matrix2::from_ints(1, 0, 0, 2);
        let upper = Matrix2::from_ints(1, 1, 0, 2);
        (0..2).all(|i| {
            let m0 = self.map(i, 0).as_matrix();
            let m1 = self.map(i, 1).as_matrix();
            matches!((&m0, &m1), (Some(a), Some(b))
                if a.is_proportional(&lower) && b.is_proportional(&upper))
        })
    }

    /// Whether all four maps are affine.
    pub fn is_affine(&self) -> bool {
        self.maps
            .iter()
            .flatten()
            .all(|m| matches!(m, Map::Affine(_)))
    }

    /// Whether all four maps are affine or linear-fractional.
    pub fn is_linear_fractional(&self) -> bool {
        self.maps.iter().flatten().all(|m| m.as_matrix().is_some())
    }
}

impl fmt::Display for System {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "system {:?}:", self.label)?;
        for i in 0..2 {
            for j in 0..2u8 {
                writeln!(f, "  h[{i}][{j}] = {}", self.map(i, j))?;
            }
        }
        Ok(())
    }
}

/// A source system `f` and target system `g` over the same digraph; the
/// object the conjugate pair `phi_0, phi_1` is constructed from.
#[derive(Clone, Debug)]
pub struct SystemPair {
    pub f: System,
    pub g: System,
}

impl SystemPair {
    pub fn new(f: System, g: System) -> Self {
        SystemPair { f, g }
    }

    /// Whether the two systems provably have identical maps, in which case
    /// the conjugate pair is the identity on both vertices.
    pub fn is_identity_pair(&self) -> bool {
        (0..2).all(|i| (0..2u8).all(|j| self.f.map(i, j).same_action(self.g.map(i, j))))
    }
}

pub(crate) fn check_vertex(vertex: usize) -> Result<()> {
    if vertex > 1 {
        return Err(Error::Domain(format!("vertex {vertex} must be 0 or 1")));
    }
    Ok(())
}

pub(crate) fn check_digits(digits: &[u8]) -> Result<()> {
    if let Some(d) = digits.iter().find(|&&d| d > 1) {
        return Err(Error::Domain(format!("digit {d} must be 0 or 1")));
    }
    Ok(())
}

fn check_depth(depth: usize, max: usize) -> Result<()> {
    if depth > max {
        return Err(Error::DepthExceeded {
            requested: depth,
            max,
        });
    }
    Ok(())
}

/// The running composite `h[v0][d1] ∘ h[d1][d2] ∘ ... ` during a descent.
///
/// For exact systems the whole composite is a single rational matrix (the
/// fractional-linear action is a homomorphism from matrix products). For
/// systems with formula maps the factor sequence is kept and folded in
/// `f64` on every evaluation.
#[derive(Clone, Debug)]
pub(crate) enum Comp {
    Mat(Matrix2),
    Chain(Vec<(usize, u8)>),
}

#[derive(Clone, Debug)]
pub(crate) struct Cursor<'a> {
    pub sys: &'a System,
    pub comp: Comp,
    pub vertex: usize,
    pub depth: usize,
}

impl<'a> Cursor<'a> {
    pub fn new(sys: &'a System, start: usize) -> Cursor<'a> {
        let comp = if sys.is_exact() {
            Comp::Mat(Matrix2::identity())
        } else {
            Comp::Chain(Vec::new())
        };
        Cursor {
            sys,
            comp,
            vertex: start,
            depth: 0,
        }
    }

    /// Extend the composite by one digit; the digit names the next vertex.
    pub fn child(&self, digit: u8) -> Cursor<'a> {
        let comp = match &self.comp {
            Comp::Mat(p) => {
                let m = self
                    .sys
                    .map(self.vertex, digit)
                    .as_matrix()
                    .expect("exact system maps have matrix form");
                Comp::Mat(p * &m)
            }
            Comp::Chain(seq) => {
                let mut seq = seq.clone();
                seq.push((self.vertex, digit));
                Comp::Chain(seq)
            }
        };
        Cursor {
            sys: self.sys,
            comp,
            vertex: digit as usize,
            depth: self.depth + 1,
        }
    }

    /// Evaluate the composite at `x`.
    pub fn eval(&self, x: &Scalar) -> Result<Scalar> {
        match &self.comp {
            Comp::Mat(p) => match x.as_exact() {
                Some(r) => Ok(Scalar::Exact(p.phi(r)?)),
                None => Ok(Scalar::Approx(p.phi_f64(x.to_f64()))),
            },
            Comp::Chain(seq) => {
                let mut v = x.to_f64();
                for &(vertex, digit) in seq.iter().rev() {
                    v = self.sys.map(vertex, digit).eval_f64(v)?;
                }
                Ok(Scalar::Approx(v))
            }
        }
    }

    /// The image of `[0,1]` under the composite.
    pub fn enclosure(&self) -> Result<Enclosure> {
        let exact = matches!(self.comp, Comp::Mat(_));
        Ok(Enclosure {
            lo: self.eval(&Scalar::zero(exact))?,
            hi: self.eval(&Scalar::one(exact))?,
        })
    }

    pub fn width(&self) -> Result<Scalar> {
        Ok(self.enclosure()?.width())
    }

    /// Where this interval splits: the image of the current vertex's row
    /// break, shared by the two children as `child(0).hi == child(1).lo`.
    pub fn split_point(&self) -> Result<Scalar> {
        self.eval(&self.sys.break_point(self.vertex).clone())
    }

    /// Exact upper bound for the composite's derivative over `[0,1]`, when
    /// the composite is a matrix: `det / (c x + d)^2` peaks at an endpoint.
    fn derivative_bound(&self) -> Option<Rational> {
        match &self.comp {
            Comp::Mat(p) => {
                let den0 = &p.d * &p.d;
                let at1 = &p.c + &p.d;
                let den1 = &at1 * &at1;
                Some(&p.det() / &den0.min(den1))
            }
            Comp::Chain(_) => None,
        }
    }
}

/// The interval coded by an itinerary: start at `itin.start`, apply the row
/// map for each digit, and take the image of `[0,1]`.
pub fn interval(sys: &System, itin: &Itinerary) -> Result<Enclosure> {
    check_vertex(itin.start)?;
    check_digits(&itin.digits)?;
    check_depth(itin.depth(), limits::MAX_DESCENT_DEPTH)?;
    let mut cur = Cursor::new(sys, itin.start);
    for &d in &itin.digits {
        cur = cur.child(d);
    }
    cur.enclosure()
}

/// The depth-`n` itinerary of the point `x` read from `start`: at each
/// level take the child whose interval contains `x`, preferring digit 0
/// when `x` sits exactly on a split point.
pub fn itinerary_of(sys: &System, start: usize, x: &Scalar, depth: usize) -> Result<Itinerary> {
    check_vertex(start)?;
    check_depth(depth, limits::MAX_DESCENT_DEPTH)?;
    let zero = Scalar::zero(x.is_exact());
    let one = Scalar::one(x.is_exact());
    if x < &zero || x > &one {
        return Err(Error::Domain(format!(
            "point {} is outside [0, 1]",
            x.to_f64()
        )));
    }
    let mut cur = Cursor::new(sys, start);
    let mut digits = Vec::with_capacity(depth);
    for _ in 0..depth {
        let split = cur.split_point()?;
        let digit = u8::from(!(x <= &split));
        digits.push(digit);
        cur = cur.child(digit);
    }
    Ok(Itinerary::new(start, digits))
}

/// The largest width among the `2^depth` intervals of the given depth read
/// from `start` — the mesh of the depth-`depth` tiling. Exact systems give
/// an exact value.
///
/// Runs as branch-and-bound: a subtree is abandoned when no completion can
/// beat the best width found. Since children are subintervals of their
/// parent, the parent width always bounds the subtree; exact systems add a
/// sharper bound (composite derivative times the best remaining width from
/// the child vertex, precomputed from Lipschitz norms). Formula-backed
/// systems use only the width bound, because their Lipschitz norms may be
/// grid estimates and a too-small estimate could prune the true maximum.
pub fn delta(sys: &System, start: usize, depth: usize) -> Result<Scalar> {
    check_vertex(start)?;
    check_depth(depth, limits::MAX_DELTA_DEPTH)?;
    if depth == 0 {
        return Ok(Scalar::one(sys.is_exact()));
    }

    // remaining[r][v]: bound on any depth-r width read from vertex v.
    let remaining: Option<Vec<[Rational; 2]>> = if sys.is_exact() {
        let lip = |i: usize, j: u8| -> Rational {
            sys.map(i, j)
                .lipschitz()
                .expect("exact maps have exact norms")
                .as_exact()
                .expect("exact maps have exact norms")
                .clone()
        };
        let mut table = vec![[Rational::one(), Rational::one()]];
        for r in 1..=depth {
            let prev = &table[r - 1];
            let level = [0, 1].map(|v| {
                let via0 = &lip(v, 0) * &prev[0];
                let via1 = &lip(v, 1) * &prev[1];
                via0.max(via1)
            });
            table.push(level);
        }
        Some(table)
    } else {
        None
    };

    // Greedy descent (always the wider child) seeds the incumbent best.
    let root = Cursor::new(sys, start);
    let mut cur = root.clone();
    for _ in 0..depth {
        let c0 = cur.child(0);
        let c1 = cur.child(1);
        cur = if c0.width()? >= c1.width()? { c0 } else { c1 };
    }
    let mut best = cur.width()?;

    let mut stack = vec![root];
    while let Some(node) = stack.pop() {
        let rem = depth - node.depth;
        let width = node.width()?;
        if rem == 0 {
            if width > best {
                best = width;
            }
            continue;
        }
        let mut bound = width;
        if let (Some(table), Some(dmax)) = (&remaining, node.derivative_bound()) {
            let sharper = Scalar::Exact(&dmax * &table[rem][node.vertex]);
            if sharper < bound {
                bound = sharper;
            }
        }
        if bound <= best {
            continue;
        }
        let c0 = node.child(0);
        let c1 = node.child(1);
        // Explore the wider child first.
        if c0.width()? >= c1.width()? {
            stack.push(c1);
            stack.push(c0);
        } else {
            stack.push(c0);
            stack.push(c1);
        }
    }
    Ok(best)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(s: &str) -> Rational {
        s.parse().unwrap()
    }

    fn sc(s: &str) -> Scalar {
        Scalar::Exact(r(s))
    }

    /// Rows from break parameters: `h[i][0] = p_i x`, `h[i][1] = (1-p_i) x + p_i`.
    fn affine_system(p0: &str, p1: &str) -> System {
        let row = |p: &str| {
            let p = r(p);
            [
                Map::affine(p.clone(), Rational::zero()).unwrap(),
                Map::affine(&Rational::one() - &p, p).unwrap(),
            ]
        };
        System::new([row(p0), row(p1)], format!("affine({p0}, {p1})")).unwrap()
    }

    fn itin(start: usize, digits: &[u8]) -> Itinerary {
        Itinerary::new(start, digits.to_vec())
    }

    #[test]
    fn halving_system_basics() {
        let h = System::halving();
        assert!(h.is_exact() && h.is_halving() && h.is_affine());
        assert_eq!(h.break_point(0), &sc("1/2"));
        assert_eq!(h.break_point(1), &sc("1/2"));

        let other = affine_system("1/2", "1/3");
        assert!(!other.is_halving());
        assert!(other.is_affine());
        assert_eq!(other.break_point(1), &sc("1/3"));
    }

    #[test]
    fn rejects_rows_that_do_not_tile() {
        // Break mismatch: 1/2 vs 1/4.
        let bad = [
            [
                Map::affine(r("1/2"), r("0")).unwrap(),
                Map::affine(r("3/4"), r("1/4")).unwrap(),
            ],
            [
                Map::affine(r("1/2"), r("0")).unwrap(),
                Map::affine(r("1/2"), r("1/2")).unwrap(),
            ],
        ];
        let report = validate_compatibility(&bad);
        assert!(!report.ok);
        assert!(report.violations[0].contains("row 0"), "{:?}", report.violations);
        assert!(System::new(bad, "bad").is_err());

        // Row does not reach 1: h[0][1](1) = 3/4.
        let short = [
            [
                Map::affine(r("1/2"), r("0")).unwrap(),
                Map::affine(r("1/4"), r("1/2")).unwrap(),
            ],
            [
                Map::affine(r("1/2"), r("0")).unwrap(),
                Map::affine(r("1/2"), r("1/2")).unwrap(),
            ],
        ];
        assert!(!validate_compatibility(&short).ok);
    }

    #[test]
    fn interval_goldens_on_halving() {
        let h = System::halving();
        let e = interval(&h, &itin(0, &[])).unwrap();
        assert_eq!((e.lo, e.hi), (sc("0"), sc("1")));
        let e = interval(&h, &itin(0, &[0, 1])).unwrap();
        assert_eq!((e.lo, e.hi), (sc("1/4"), sc("1/2")));
        let e = interval(&h, &itin(1, &[1, 1, 1])).unwrap();
        assert_eq!((e.lo, e.hi), (sc("7/8"), sc("1")));
    }

    #[test]
    fn interval_goldens_on_affine() {
        let sys = affine_system("1/2", "1/3");
        let e = interval(&sys, &itin(0, &[1])).unwrap();
        assert_eq!((e.lo, e.hi), (sc("1/2"), sc("1")));
        // h[0][1] ∘ h[1][0] sends [0,1] to [1/2, 2/3].
        let e = interval(&sys, &itin(0, &[1, 0])).unwrap();
        assert_eq!((e.lo, e.hi), (sc("1/2"), sc("2/3")));
        // Children of a node tile it: [1,0] and [1,1] share the point 2/3.
        let e = interval(&sys, &itin(0, &[1, 1])).unwrap();
        assert_eq!((e.lo, e.hi), (sc("2/3"), sc("1")));
    }

    #[test]
    fn intervals_nest_and_tile() {
        let sys = affine_system("2/5", "1/3");
        for start in 0..2 {
            for digits in [[0, 0], [0, 1], [1, 0], [1, 1]] {
                let parent = interval(&sys, &itin(start, &digits[..1])).unwrap();
                let child = interval(&sys, &itin(start, &digits)).unwrap();
                assert!(parent.lo <= child.lo && child.hi <= parent.hi);
            }
            // Fixed depth tiles [0,1] in itinerary order.
            let mut edge = sc("0");
            for digits in [[0, 0], [0, 1], [1, 0], [1, 1]] {
                let e = interval(&sys, &itin(start, &digits)).unwrap();
                assert_eq!(e.lo, edge);
                edge = e.hi;
            }
            assert_eq!(edge, sc("1"));
        }
    }

    #[test]
    fn itineraries_are_digit_expansions_on_halving() {
        let h = System::halving();
        let of = |x: &str, n: usize| itinerary_of(&h, 0, &sc(x), n).unwrap().digits;
        // Split points resolve to digit 0, so dyadic points read as the
        // binary expansion that ends in ones: 3/8 = 0.01011..., 1/2 = 0.0111...
        assert_eq!(of("3/8", 4), vec![0, 1, 0, 1]);
        assert_eq!(of("1/2", 4), vec![0, 1, 1, 1]);
        assert_eq!(of("0", 3), vec![0, 0, 0]);
        assert_eq!(of("1", 3), vec![1, 1, 1]);
        // Non-dyadic points read as their unique expansion: 1/3 = 0.0101...
        assert_eq!(of("1/3", 4), vec![0, 1, 0, 1]);
        assert_eq!(of("2/3", 4), vec![1, 0, 1, 0]);
    }

    #[test]
    fn itinerary_point_stays_inside_its_interval() {
        let sys = affine_system("1/2", "1/3");
        let x = sc("1/2");
        let it = itinerary_of(&sys, 0, &x, 6).unwrap();
        assert_eq!(it.digits[..3], [0, 1, 1]);
        let e = interval(&sys, &it).unwrap();
        assert!(e.contains(&x), "{e} should contain 1/2");

        assert!(itinerary_of(&sys, 0, &sc("3/2"), 3).is_err());
        assert!(itinerary_of(&sys, 2, &x, 3).is_err());
        assert!(itinerary_of(&sys, 0, &x, limits::MAX_DESCENT_DEPTH + 1).is_err());
    }

    #[test]
    fn transitions_follow_digits() {
        let it = itin(0, &[1, 1, 0]);
        assert_eq!(it.transitions(), vec![(0, 1), (1, 1), (1, 0)]);
        assert_eq!(it.to_string(), "0:110");
    }

    #[test]
    fn delta_goldens() {
        let h = System::halving();
        assert_eq!(delta(&h, 0, 0).unwrap(), sc("1"));
        assert_eq!(delta(&h, 0, 5).unwrap(), sc("1/32"));

        let sys = affine_system("1/2", "1/3");
        // Depth-2 widths from vertex 0: 1/4, 1/4, 1/6, 1/3.
        assert_eq!(delta(&sys, 0, 2).unwrap(), sc("1/3"));
        assert_eq!(delta(&sys, 1, 1).unwrap(), sc("2/3"));
    }

    #[test]
    fn delta_decreases_with_depth() {
        let sys = affine_system("2/5", "1/3");
        let mut prev = sc("1");
        for n in 1..=8 {
            let d = delta(&sys, 0, n).unwrap();
            assert!(d <= prev, "delta grew at depth {n}");
            prev = d;
        }
    }

    #[test]
    fn delta_is_fast_and_exact_at_the_depth_cap() {
        let sys = affine_system("1/2", "1/3");
        // Max depth-n width is (2/3)^k/2^(n-k) maximized over digit-1 runs;
        // at n = 24 the all-ones path from vertex 1 wins overall but from
        // vertex 0 the first step costs 1/2.
        let d = delta(&sys, 1, limits::MAX_DELTA_DEPTH).unwrap();
        assert_eq!(d, Scalar::Exact(r("2/3").pow(24).unwrap()));
    }

    #[test]
    fn identity_pair_detection() {
        let pair = SystemPair::new(System::halving(), System::halving());
        assert!(pair.is_identity_pair());
        let other = SystemPair::new(System::halving(), affine_system("1/2", "1/3"));
        assert!(!other.is_identity_pair());
        // Same action through different representations.
        let lf_half = System::new(
            [
                [
                    Map::lf(Matrix2::from_ints(1, 0, 0, 2)).unwrap(),
                    Map::lf(Matrix2::from_ints(1, 1, 0, 2)).unwrap(),
                ],
                [
                    Map::affine(r("1/2"), r("0")).unwrap(),
                    Map::affine(r("1/2"), r("1/2")).unwrap(),
                ],
            ],
            "halving-as-lf",
        )
        .unwrap();
        assert!(lf_half.is_halving());
        assert!(SystemPair::new(System::halving(), lf_half).is_identity_pair());
    }
}
