//! CSV emission.
//!
//! All numeric cells are written with Rust's shortest-round-trip `f64`
//! formatting, so identical inputs always produce byte-identical files;
//! exact values print without noise (`0.25`, not `0.25000000000000000`).

use std::io::{self, Write};

use crate::diagnostics::RatioTrace;
use crate::rational::Rational;
use crate::solver::CurveSample;

/// `x,phi` rows in x order.
pub fn write_curve_csv(w: &mut impl Write, sample: &CurveSample) -> io::Result<()> {
    writeln!(w, "x,phi")?;
    for (x, phi) in &sample.points {
        writeln!(w, "{},{}", x.to_f64(), phi.to_f64())?;
    }
    Ok(())
}

/// `c00,c11,admissible` rows with `1`/`0` membership flags, in the order
/// the iterator yields them.
pub fn write_region_csv(
    w: &mut impl Write,
    cells: impl Iterator<Item = (Rational, Rational, bool)>,
) -> io::Result<()> {
    writeln!(w, "c00,c11,admissible")?;
    for (c00, c11, inside) in cells {
        writeln!(w, "{},{},{}", c00.to_f64(), c11.to_f64(), u8::from(inside))?;
    }
    Ok(())
}

/// `depth,digit,f_len,g_len,ratio,rs_ratio,t_n` rows; the last two columns
/// are empty for targets without matrix representations.
pub fn write_trace_csv(w: &mut impl Write, trace: &RatioTrace) -> io::Result<()> {
    writeln!(w, "depth,digit,f_len,g_len,ratio,rs_ratio,t_n")?;
    for row in &trace.rows {
        let rs = row
            .rs_ratio
            .as_ref()
            .map(|v| v.to_f64().to_string())
            .unwrap_or_default();
        let t = row
            .t_n
            .as_ref()
            .map(|v| v.to_f64().to_string())
            .unwrap_or_default();
        writeln!(
            w,
            "{},{},{},{},{},{},{}",
            row.depth,
            row.digit,
            row.f_len.to_f64(),
            row.g_len.to_f64(),
            row.ratio.to_f64(),
            rs,
            t
        )?;
    }
    Ok(())
}
