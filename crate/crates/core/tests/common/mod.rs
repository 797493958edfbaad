//! Helpers shared between integration test targets.

use gdconj::rational::Rational;

/// Fifty formulas exercising every production of the map-formula grammar:
/// plain powers, rational exponents, decimal and rational literals, all
/// four binary operators with associativity traps, nested parentheses,
/// whitespace, and the unicode operator aliases.
pub const FORMULA_CORPUS: [&str; 50] = [
    "x",
    "x^2",
    "x^3",
    "x^10",
    "x^(1/2)",
    "x^(3/2)",
    "x^(5/2)",
    "x^(7/2)",
    "x^(3/2)/8",
    "x^2/(x+1)",
    "(x+1)/2",
    "(7*x+1)/8",
    "1/2",
    "0.25",
    "0.125",
    "0.0625",
    "x*x",
    "x*x*x",
    "x+x",
    "x*(1-x)",
    "(x+x^2)/2",
    "x/2+x/4+x/8",
    "((x))",
    "(x)",
    "x ^ 2 / ( x + 1 )",
    "x\u{d7}x",
    "x\u{f7}2",
    "1\u{2212}x",
    "3*x^2-2*x^3",
    "0.5*x+0.25",
    "1000000*x/1000001",
    "x/3+1/3",
    "(x+1)*(x+2)/6",
    "x^2*(3-2*x)",
    "2^2",
    "1/2^2",
    "(1/2)^2",
    "x-0.5*x",
    "(2*x+3*x^2+x^3)/6",
    "x*0.75+0.125",
    "((x+1)/(x+2))",
    "(x/(x+1))^2",
    "x/(1+x/(1+x))",
    "7/8*x+1/8",
    "x^2/2+x/2",
    "x^(2/2)",
    "5/4/(x+1)",
    "(1+x)^2/4",
    "x*2",
    "2*x",
];

/// The first `count` odd dyadics k/2^d, breadth-first by depth, each with
/// its binary digit string.
pub fn dyadic_points(count: usize) -> Vec<(Rational, Vec<u8>)> {
    let mut out = Vec::new();
    for d in 1u32.. {
        for k in (1i64..(1 << d)).step_by(2) {
            let digits: Vec<u8> = (0..d).rev().map(|i| ((k >> i) & 1) as u8).collect();
            out.push((Rational::new(k, 1 << d).expect("dyadic"), digits));
            if out.len() == count {
                return out;
            }
        }
    }
    unreachable!("loop returns once count is reached")
}
