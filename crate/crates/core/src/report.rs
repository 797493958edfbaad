//! JSON reports for the CLI.
//!
//! serde_json's map type keeps keys sorted, so identical inputs always
//! serialize to identical bytes. Exact quantities carry both a float
//! `value` and an `exact` rational string; estimates carry the float
//! alone.

use serde_json::{json, Value};

use crate::classify::{Evidence, Verdict};
use crate::diagnostics::RatioTrace;
use crate::error::Error;
use crate::maps::Lip;
use crate::rational::Scalar;
use crate::solver::{CurveSample, PhiValue, Residual};
use crate::systems::{Enclosure, System, SystemPair};

fn scalar_value(s: &Scalar) -> Value {
    match s.as_exact() {
        Some(r) => json!({"value": s.to_f64(), "exact": r.to_string()}),
        None => json!({"value": s.to_f64()}),
    }
}

fn enclosure_value(e: &Enclosure) -> Value {
    json!({
        "lo": scalar_value(&e.lo),
        "hi": scalar_value(&e.hi),
        "width": e.width().to_f64(),
    })
}

fn lip_value(lip: &Lip) -> Value {
    match lip.as_exact() {
        Some(r) => json!({"value": lip.to_f64(), "exact": r.to_string(), "estimated": false}),
        None => json!({"value": lip.to_f64(), "estimated": true}),
    }
}

fn system_value(sys: &System) -> Value {
    let map_value = |i: usize, j: u8| {
        let m = sys.map(i, j);
        json!({"kind": m.kind(), "map": m.to_string()})
    };
    json!({
        "label": sys.label(),
        "exact": sys.is_exact(),
        "halving": sys.is_halving(),
        "breaks": [scalar_value(sys.break_point(0)), scalar_value(sys.break_point(1))],
        "maps": [
            [map_value(0, 0), map_value(0, 1)],
            [map_value(1, 0), map_value(1, 1)],
        ],
    })
}

/// Successful `validate`: the pair constructed, so every map and tiling
/// check passed; echo the validated structure.
pub fn validate_report(pair: &SystemPair) -> Value {
    json!({
        "command": "validate",
        "ok": true,
        "f": system_value(&pair.f),
        "g": system_value(&pair.g),
        "identity_pair": pair.is_identity_pair(),
    })
}

/// Failed `validate`: name the offending object and list the violations.
pub fn validate_failure_report(err: &Error) -> Value {
    match err {
        Error::InvalidMap { which, violations } => json!({
            "command": "validate",
            "ok": false,
            "subject": which,
            "violations": violations,
        }),
        Error::InvalidSystem { label, violations } => json!({
            "command": "validate",
            "ok": false,
            "subject": label,
            "violations": violations,
        }),
        other => json!({
            "command": "validate",
            "ok": false,
            "error": other.to_string(),
        }),
    }
}

pub fn eval_report(vertex: usize, x: &Scalar, tol: f64, v: &PhiValue) -> Value {
    json!({
        "command": "eval",
        "vertex": vertex,
        "x": scalar_value(x),
        "tol": tol,
        "estimate": scalar_value(&v.estimate),
        "enclosure": enclosure_value(&v.enclosure),
        "depth_used": v.depth_used,
        "itinerary": v.itinerary.to_string(),
        "exact_hit": v.exact_hit,
        "depth_capped": v.depth_capped,
    })
}

fn evidence_value(e: &Evidence) -> Value {
    match e {
        Evidence::Identity => json!({"type": "identical-systems"}),
        Evidence::Affine { p, q, ratio_set } => json!({
            "type": "affine-breaks",
            "p": [p.0.to_string(), p.1.to_string()],
            "q": [q.0.to_string(), q.1.to_string()],
            "ratio_set": ratio_set.iter().map(|r| r.to_string()).collect::<Vec<_>>(),
        }),
        Evidence::LinearFractional { alpha, checks } => json!({
            "type": "transition-invariants",
            "alpha": [alpha.0.to_string(), alpha.1.to_string()],
            "checks": checks
                .iter()
                .map(|c| {
                    json!({
                        "from": c.from,
                        "to": c.to,
                        "expected": c.expected.to_string(),
                        "actual": c.actual.as_ref().map(|a| a.to_string()),
                        "ok": c.ok,
                    })
                })
                .collect::<Vec<_>>(),
        }),
        Evidence::LipschitzProduct {
            norms,
            product,
            threshold,
            decisive,
        } => json!({
            "type": "lipschitz-product",
            "norms": [
                [lip_value(&norms[0][0]), lip_value(&norms[0][1])],
                [lip_value(&norms[1][0]), lip_value(&norms[1][1])],
            ],
            "product": lip_value(product),
            "threshold": threshold.to_string(),
            "decisive": decisive,
        }),
    }
}

pub fn verdict_report(v: &Verdict) -> Value {
    let mut obj = json!({
        "command": "classify",
        "kind": v.kind.to_string(),
        "method": v.method,
        "evidence": evidence_value(&v.evidence),
    });
    if let Some((phi0, phi1)) = &v.closed_forms {
        obj["closed_forms"] = json!({
            "phi0": phi0.to_string(),
            "phi1": phi1.to_string(),
        });
    }
    obj
}

pub fn residual_report(r: &Residual, tol: f64) -> Value {
    json!({
        "command": "residual",
        "max_abs": scalar_value(&r.max_abs),
        "worst": {
            "corner": [r.worst_corner.0, r.worst_corner.1],
            "x": scalar_value(&r.worst_x),
        },
        "grid": r.grid,
        "tol": tol,
    })
}

pub fn curve_report(sample: &CurveSample) -> Value {
    json!({
        "command": "curve",
        "vertex": sample.vertex,
        "depth": sample.depth,
        "points": sample
            .points
            .iter()
            .map(|(x, y)| json!([x.to_f64(), y.to_f64()]))
            .collect::<Vec<_>>(),
    })
}

pub fn trace_report(trace: &RatioTrace) -> Value {
    json!({
        "command": "trace",
        "itinerary": trace.itinerary.to_string(),
        "rows": trace
            .rows
            .iter()
            .map(|row| {
                json!({
                    "depth": row.depth,
                    "digit": row.digit,
                    "f_len": row.f_len.to_f64(),
                    "g_len": row.g_len.to_f64(),
                    "ratio": row.ratio.to_f64(),
                    "rs_ratio": row.rs_ratio.as_ref().map(|v| v.to_f64()),
                    "t_n": row.t_n.as_ref().map(|v| v.to_f64()),
                })
            })
            .collect::<Vec<_>>(),
    })
}

/// Render a report as pretty JSON with a trailing newline.
pub fn to_bytes(v: &Value) -> Vec<u8> {
    let mut text = serde_json::to_string_pretty(v).expect("report values serialize");
    text.push('\n');
    text.into_bytes()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::classify::classify_pair;
    use crate::fixtures::{fixture, identity_pair};
    use crate::solver::{residual_max, solve_phi};

    #[test]
    fn reports_are_deterministic_and_sorted() {
        let pair = fixture("ex-lf-smooth").unwrap();
        let v = classify_pair(&pair).unwrap();
        let a = to_bytes(&verdict_report(&v));
        let b = to_bytes(&verdict_report(&classify_pair(&pair).unwrap()));
        assert_eq!(a, b);
        let text = String::from_utf8(a).unwrap();
        // Keys print in sorted order.
        let ki = text.find("\"kind\"").unwrap();
        let mi = text.find("\"method\"").unwrap();
        let ci = text.find("\"command\"").unwrap();
        assert!(ci < ki && ki < mi);
        assert!(text.contains("\"phi0\": \"(x)/(x/2+1/2)\""), "{text}");
    }

    #[test]
    fn classify_report_carries_the_closed_forms() {
        let pair = fixture("ex-lf-smooth").unwrap();
        let v = classify_pair(&pair).unwrap();
        let rep = verdict_report(&v);
        assert_eq!(rep["kind"], "smooth");
        let phi0 = rep["closed_forms"]["phi0"].as_str().unwrap();
        assert!(phi0.contains("x"), "{phi0}");
    }

    #[test]
    fn eval_report_shape() {
        let pair = identity_pair();
        let x = Scalar::Exact("1/3".parse().unwrap());
        let v = solve_phi(&pair, 0, &x, 1e-6).unwrap();
        let rep = eval_report(0, &x, 1e-6, &v);
        assert_eq!(rep["estimate"]["exact"], "1/3");
        assert_eq!(rep["command"], "eval");
        assert!(rep["enclosure"]["width"].as_f64().unwrap() <= 1e-6);
    }

    #[test]
    fn residual_report_is_exact_zero_for_identity() {
        let r = residual_max(&identity_pair(), 11, 1e-8).unwrap();
        let rep = residual_report(&r, 1e-8);
        assert_eq!(rep["max_abs"]["exact"], "0");
    }

    #[test]
    fn validate_failure_report_names_the_subject() {
        let err = Error::InvalidMap {
            which: "g.0.0".into(),
            violations: vec!["slope must be positive".into()],
        };
        let rep = validate_failure_report(&err);
        assert_eq!(rep["ok"], false);
        assert_eq!(rep["subject"], "g.0.0");
    }
}
