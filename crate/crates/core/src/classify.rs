//! Exact classification of conjugate pairs: singular versus smooth versus
//! identity.
//!
//! Three decision procedures cover three pair shapes, dispatched by
//! [`classify_pair`]:
//!
//! * **Affine pairs.** Both systems affine. The pair is determined by the
//!   row breaks `p = (p0, p1)` (source) and `q = (q0, q1)` (target): equal
//!   breaks give the identity, any difference makes both conjugate
//!   functions singular (derivative zero almost everywhere).
//! * **Linear-fractional targets over the halving source.** Each target
//!   matrix `A` carries a projective invariant `alpha`, and the pair is
//!   smooth exactly when the transposed action sends `alpha_i` to `alpha_j`
//!   across all four corners; the smooth case has explicit linear-
//!   fractional closed forms. Everything is decided in exact rational
//!   arithmetic.
//! * **General targets over the halving source.** A contraction argument:
//!   if the product of the four Lipschitz norms is below `1/16` (the four
//!   halved source branches), the pair is singular. Otherwise nothing is
//!   concluded.
//!
//! The smooth linear-fractional targets form a two-parameter family
//! indexed by `(alpha_0, alpha_1)` inside an explicitly computable
//! admissible region; see [`smooth_family_matrices`] and
//! [`admissible_region`].

use std::fmt;

use crate::error::{Error, Result};
use crate::maps::{lin_term, Lip, Map, Matrix2};
use crate::rational::Rational;
use crate::systems::{System, SystemPair};

/// A linear-fractional function used as a closed form. Unlike the maps in a
/// system it need not be a weak contraction (a smooth conjugate function
/// typically has derivative above 1 somewhere).
#[derive(Clone, Debug, PartialEq)]
pub struct Mobius {
    pub matrix: Matrix2,
}

impl Mobius {
    /// The closed form `x / (-alpha x + 1 + alpha)` taken by smooth
    /// conjugate functions; `alpha > -1` keeps it increasing on `[0,1]`.
    pub fn from_alpha(alpha: &Rational) -> Mobius {
        Mobius {
            matrix: Matrix2::new(
                Rational::one(),
                Rational::zero(),
                -alpha,
                &Rational::one() + alpha,
            ),
        }
    }

    pub fn identity() -> Mobius {
        Mobius {
            matrix: Matrix2::identity(),
        }
    }

    pub fn eval(&self, x: &Rational) -> Result<Rational> {
        self.matrix.phi(x)
    }

    pub fn eval_f64(&self, x: f64) -> f64 {
        self.matrix.phi_f64(x)
    }

    pub fn is_identity(&self) -> bool {
        self.matrix.is_proportional(&Matrix2::identity())
    }
}

impl fmt::Display for Mobius {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let m = &self.matrix;
        if m.c.is_zero() && m.d == Rational::one() {
            return write!(f, "{}", lin_term(&m.a, &m.b));
        }
        write!(f, "({})/({})", lin_term(&m.a, &m.b), lin_term(&m.c, &m.d))
    }
}

/// What the classification concluded about the pair `phi_0, phi_1`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum VerdictKind {
    /// Both functions are singular: continuous, strictly increasing, with
    /// derivative zero almost everywhere.
    Singular,
    /// Both functions are smooth (here: linear fractional).
    Smooth,
    /// Both functions are the identity.
    Identity,
    /// No implemented criterion was decisive.
    Unknown,
}

impl fmt::Display for VerdictKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            VerdictKind::Singular => "singular",
            VerdictKind::Smooth => "smooth",
            VerdictKind::Identity => "identity",
            VerdictKind::Unknown => "unknown",
        };
        write!(f, "{s}")
    }
}

/// One corner of the transition-invariant check for linear-fractional
/// targets: does the transposed action of `A[from][to]` send `alpha_from`
/// to `alpha_to`?
#[derive(Clone, Debug)]
pub struct TransitionCheck {
    pub from: usize,
    pub to: usize,
    pub expected: Rational,
    /// `None` when the transposed action is undefined at `alpha_from`.
    pub actual: Option<Rational>,
    pub ok: bool,
}

/// The data the verdict was decided on.
#[derive(Clone, Debug)]
pub enum Evidence {
    /// The two systems have identical maps.
    Identity,
    /// Affine row breaks and the derived ratio set
    /// `{q0/p0, (1-q0)/(1-p0), q1/p1, (1-q1)/(1-p1)}`; the pair is the
    /// identity exactly when every ratio is 1.
    Affine {
        p: (Rational, Rational),
        q: (Rational, Rational),
        ratio_set: Vec<Rational>,
    },
    /// Projective invariants of the target matrices and the four
    /// transition checks; smooth exactly when all four hold.
    LinearFractional {
        alpha: (Rational, Rational),
        checks: Vec<TransitionCheck>,
    },
    /// Lipschitz norms of the four target maps and their product, compared
    /// against 1/16.
    LipschitzProduct {
        norms: [[Lip; 2]; 2],
        product: Lip,
        threshold: Rational,
        decisive: bool,
    },
}

/// Outcome of classification: the verdict kind, the criterion that decided
/// it, closed forms when smooth, and the supporting data.
#[derive(Clone, Debug)]
pub struct Verdict {
    pub kind: VerdictKind,
    /// Which decision procedure produced the verdict.
    pub method: &'static str,
    /// Exact closed forms `(phi_0, phi_1)`, present for smooth verdicts.
    pub closed_forms: Option<(Mobius, Mobius)>,
    pub evidence: Evidence,
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} (by {})", self.kind, self.method)?;
        if let Some((p0, p1)) = &self.closed_forms {
            write!(f, ": phi_0 = {p0}, phi_1 = {p1}")?;
        }
        Ok(())
    }
}

const METHOD_IDENTITY: &str = "identical systems";
const METHOD_AFFINE: &str = "affine break parameters";
const METHOD_LF: &str = "linear-fractional invariants";
const METHOD_LIP: &str = "lipschitz product";

/// The affine criterion. Both systems must be affine; their break
/// parameters decide everything.
pub fn classify_affine(pair: &SystemPair) -> Result<Verdict> {
    if !pair.f.is_affine() || !pair.g.is_affine() {
        return Err(Error::Unsupported(
            "affine criterion needs affine source and target systems".into(),
        ));
    }
    let exact_break = |sys: &System, i: usize| {
        sys.break_point(i)
            .as_exact()
            .expect("affine systems have exact breaks")
            .clone()
    };
    let p = (exact_break(&pair.f, 0), exact_break(&pair.f, 1));
    let q = (exact_break(&pair.g, 0), exact_break(&pair.g, 1));
    let one = Rational::one();
    let ratio_set = vec![
        &q.0 / &p.0,
        &(&one - &q.0) / &(&one - &p.0),
        &q.1 / &p.1,
        &(&one - &q.1) / &(&one - &p.1),
    ];
    let identity = ratio_set.iter().all(|r| r == &one);
    let evidence = Evidence::Affine { p, q, ratio_set };
    Ok(if identity {
        Verdict {
            kind: VerdictKind::Identity,
            method: METHOD_AFFINE,
            closed_forms: Some((Mobius::identity(), Mobius::identity())),
            evidence,
        }
    } else {
        Verdict {
            kind: VerdictKind::Singular,
            method: METHOD_AFFINE,
            closed_forms: None,
            evidence,
        }
    })
}

/// The projective invariant of vertex `i` in a linear-fractional target
/// system: `alpha_i = (c+d)/a - 2` read from the digit-0 matrix. It is
/// invariant under matrix rescaling, and the digit-1 matrix yields the same
/// value (`d/b - 2`) whenever the row tiles, which system construction
/// already guarantees.
pub fn lf_alpha(g: &System, vertex: usize) -> Result<Rational> {
    crate::systems::check_vertex(vertex)?;
    let m0 = g.map(vertex, 0).as_matrix().ok_or_else(|| {
        Error::Unsupported(format!(
            "vertex {vertex} digit-0 map is not linear fractional"
        ))
    })?;
    // Class-M with b = 0 forces a > 0, so the quotient is defined.
    let alpha = &(&(&m0.c + &m0.d) / &m0.a) - &Rational::from_int(2);
    if let Some(m1) = g.map(vertex, 1).as_matrix() {
        debug_assert_eq!(
            alpha,
            &(&m1.d / &m1.b) - &Rational::from_int(2),
            "row tiling makes both invariant formulas agree"
        );
    }
    Ok(alpha)
}

/// The linear-fractional criterion over the halving source. Exact: smooth
/// if and only if all four transition checks hold, otherwise singular.
pub fn classify_lf(pair: &SystemPair) -> Result<Verdict> {
    if !pair.f.is_halving() {
        return Err(Error::Unsupported(
            "linear-fractional criterion needs the halving source system".into(),
        ));
    }
    if !pair.g.is_linear_fractional() {
        return Err(Error::Unsupported(
            "linear-fractional criterion needs a matrix-representable target".into(),
        ));
    }
    let alpha = [lf_alpha(&pair.g, 0)?, lf_alpha(&pair.g, 1)?];
    let mut checks = Vec::with_capacity(4);
    for i in 0..2usize {
        for j in 0..2usize {
            let m = pair
                .g
                .map(i, j as u8)
                .as_matrix()
                .expect("checked linear fractional");
            let actual = m.transpose().phi(&alpha[i]).ok();
            let ok = actual.as_ref() == Some(&alpha[j]);
            checks.push(TransitionCheck {
                from: i,
                to: j,
                expected: alpha[j].clone(),
                actual,
                ok,
            });
        }
    }
    let smooth = checks.iter().all(|c| c.ok);
    let both_trivial = alpha.iter().all(Rational::is_zero);
    let evidence = Evidence::LinearFractional {
        alpha: (alpha[0].clone(), alpha[1].clone()),
        checks,
    };
    Ok(if smooth {
        let forms = (Mobius::from_alpha(&alpha[0]), Mobius::from_alpha(&alpha[1]));
        Verdict {
            kind: if both_trivial {
                VerdictKind::Identity
            } else {
                VerdictKind::Smooth
            },
            method: METHOD_LF,
            closed_forms: Some(forms),
            evidence,
        }
    } else {
        Verdict {
            kind: VerdictKind::Singular,
            method: METHOD_LF,
            closed_forms: None,
            evidence,
        }
    })
}

/// The contraction criterion over the halving source: a Lipschitz-norm
/// product below 1/16 makes the pair singular; anything else is
/// inconclusive. The product is exact unless a formula map without a
/// declared norm contributes a grid estimate.
pub fn classify_nonlinear(pair: &SystemPair) -> Result<Verdict> {
    if !pair.f.is_halving() {
        return Err(Error::Unsupported(
            "contraction criterion needs the halving source system".into(),
        ));
    }
    let norm = |i: usize, j: u8| pair.g.map(i, j).lipschitz();
    let norms = [
        [norm(0, 0)?, norm(0, 1)?],
        [norm(1, 0)?, norm(1, 1)?],
    ];
    let mut product = Lip::Exact(Rational::one());
    for lip in norms.iter().flatten() {
        product = match (&product, lip) {
            (Lip::Exact(p), Lip::Exact(l)) => Lip::Exact(p * l),
            _ => Lip::Estimated(product.to_f64() * lip.to_f64()),
        };
    }
    let threshold = Rational::new(1, 16).expect("nonzero denominator");
    let decisive = match &product {
        Lip::Exact(p) => p < &threshold,
        Lip::Estimated(v) => *v < threshold.to_f64(),
    };
    let evidence = Evidence::LipschitzProduct {
        norms,
        product,
        threshold,
        decisive,
    };
    Ok(Verdict {
        kind: if decisive {
            VerdictKind::Singular
        } else {
            VerdictKind::Unknown
        },
        method: METHOD_LIP,
        closed_forms: None,
        evidence,
    })
}

/// Classify a pair with the most specific applicable criterion:
/// identical systems, then affine, then linear fractional over the halving
/// source, then the Lipschitz product over the halving source. A pair
/// covered by none of them is an error (exit code 3 in the CLI).
pub fn classify_pair(pair: &SystemPair) -> Result<Verdict> {
    if pair.is_identity_pair() {
        return Ok(Verdict {
            kind: VerdictKind::Identity,
            method: METHOD_IDENTITY,
            closed_forms: Some((Mobius::identity(), Mobius::identity())),
            evidence: Evidence::Identity,
        });
    }
    if pair.f.is_affine() && pair.g.is_affine() {
        return classify_affine(pair);
    }
    if pair.f.is_halving() {
        if pair.g.is_linear_fractional() {
            return classify_lf(pair);
        }
        return classify_nonlinear(pair);
    }
    Err(Error::NoTheorem(format!(
        "no criterion covers source {:?} ({}) with target {:?} ({}): \
         implemented criteria need affine source and target, or the halving source",
        pair.f.label(),
        if pair.f.is_affine() { "affine" } else { "general" },
        pair.g.label(),
        if pair.g.is_linear_fractional() {
            "linear fractional"
        } else {
            "general"
        },
    )))
}

/// Target matrices of the smooth family member with invariants
/// `(alpha_0, alpha_1) = (c00, c11)`:
///
/// ```text
/// A[0][0] = [1, 0; c00, 2]
/// A[0][1] = [2 c11 + 1, 1; 2 c11 - c00, c00 + 2]
/// A[1][0] = [1, 0; (c00 c11 + 2 c00 - c11)/(c00 + 1), 2 (c11 + 1)/(c00 + 1)]
/// A[1][1] = [2 c11 + 1, 1; c11, c11 + 2]
/// ```
///
/// Paired with the halving source these classify smooth with closed forms
/// `phi_i = x/(-c_ii x + 1 + c_ii)`. The matrices are valid system maps
/// exactly when `(c00, c11)` lies in [`admissible_region`]; this function
/// only computes them (rejecting `c00 = -1`, where the family degenerates),
/// so invalid parameters surface as map validation errors downstream.
pub fn smooth_family_matrices(c00: &Rational, c11: &Rational) -> Result<[[Matrix2; 2]; 2]> {
    let one = Rational::one();
    let two = Rational::from_int(2);
    let denom = c00 + &one;
    if denom.is_zero() {
        return Err(Error::Domain(
            "smooth family is undefined at c00 = -1".into(),
        ));
    }
    let a00 = Matrix2::new(one.clone(), Rational::zero(), c00.clone(), two.clone());
    let a01 = Matrix2::new(
        &(&two * c11) + &one,
        one.clone(),
        &(&two * c11) - c00,
        c00 + &two,
    );
    let a10 = Matrix2::new(
        one.clone(),
        Rational::zero(),
        &(&(&(c00 * c11) + &(&two * c00)) - c11) / &denom,
        &(&two * &(c11 + &one)) / &denom,
    );
    let a11 = Matrix2::new(
        &(&two * c11) + &one,
        one.clone(),
        c11.clone(),
        c11 + &two,
    );
    Ok([[a00, a01], [a10, a11]])
}

/// The smooth family member as a ready pair: halving source, validated
/// linear-fractional target. Errors when `(c00, c11)` is outside the
/// admissible region (the matrices then fail map validation).
pub fn smooth_family_pair(c00: &Rational, c11: &Rational) -> Result<SystemPair> {
    let ms = smooth_family_matrices(c00, c11)?;
    let [[a00, a01], [a10, a11]] = ms;
    let g = System::new(
        [
            [Map::lf(a00)?, Map::lf(a01)?],
            [Map::lf(a10)?, Map::lf(a11)?],
        ],
        format!("smooth-family({c00}, {c11})"),
    )?;
    Ok(SystemPair::new(System::halving(), g))
}

/// `x >= sqrt(2) - 2`, decided exactly by sign-aware squaring.
fn at_least_sqrt2_minus_2(x: &Rational) -> bool {
    let shifted = x + &Rational::from_int(2); // compare against sqrt(2) >= 0
    !shifted.is_negative() && &shifted * &shifted >= Rational::from_int(2)
}

/// `x <= sqrt(2)`, decided exactly by sign-aware squaring.
fn at_most_sqrt2(x: &Rational) -> bool {
    x.is_negative() || &(x * x) <= &Rational::from_int(2)
}

/// Exact membership test for the admissible region of the smooth family:
/// the parameter pairs `(c00, c11)` whose matrices are valid system maps.
///
/// ```text
/// c00 >= sqrt(2) - 2
/// c11 <= sqrt(2)
/// c00 <= 2 c11 + 1
/// 2 (c00 + 1)(c11 + 1) <= (c00 + 2)^2
/// 2 (c11 + 1) <= (c00 + 1)(c11 + 2)^2
/// ```
pub fn admissible_region(c00: &Rational, c11: &Rational) -> bool {
    let one = Rational::one();
    let two = Rational::from_int(2);
    if !at_least_sqrt2_minus_2(c00) || !at_most_sqrt2(c11) {
        return false;
    }
    if c00 > &(&(&two * c11) + &one) {
        return false;
    }
    let c00p1 = c00 + &one;
    let c00p2 = c00 + &two;
    let c11p1 = c11 + &one;
    let c11p2 = c11 + &two;
    if &two * &(&c00p1 * &c11p1) > &c00p2 * &c00p2 {
        return false;
    }
    &two * &c11p1 <= &c00p1 * &(&c11p2 * &c11p2)
}

/// The parameter involution `c -> -c/(c + 1)`; self-inverse away from the
/// pole at `c = -1`. Substituting `c11 -> involution(c11)` carries
/// [`admissible_region`] onto [`admissible_region_transformed`].
pub fn involution_c(c: &Rational) -> Result<Rational> {
    let den = c + &Rational::one();
    if den.is_zero() {
        return Err(Error::Domain("involution undefined at c = -1".into()));
    }
    Ok(&(-c) / &den)
}

/// The admissible region in the transformed coordinates
/// `(u, v) = (c00, involution(c11))`. The conditions are symmetric in
/// `u <-> v`:
///
/// ```text
/// u >= sqrt(2) - 2,   v >= sqrt(2) - 2,
/// (u + 1)(v + 1) <= 2,
/// 2 (u + 1) <= (v + 1)(u + 2)^2,
/// 2 (v + 1) <= (u + 1)(v + 2)^2
/// ```
pub fn admissible_region_transformed(u: &Rational, v: &Rational) -> bool {
    let one = Rational::one();
    let two = Rational::from_int(2);
    if !at_least_sqrt2_minus_2(u) || !at_least_sqrt2_minus_2(v) {
        return false;
    }
    let up1 = u + &one;
    let vp1 = v + &one;
    if &up1 * &vp1 > two {
        return false;
    }
    let up2 = u + &two;
    let vp2 = v + &two;
    &two * &up1 <= &vp1 * &(&up2 * &up2) && &two * &vp1 <= &up1 * &(&vp2 * &vp2)
}
