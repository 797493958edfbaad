//! Pair definitions from TOML configuration files.
//!
//! A config names the eight maps by system and index, one table per map:
//!
//! ```toml
//! [f.0.0]
//! kind = "affine"
//! slope = "1/2"
//! intercept = "0"
//!
//! [g.0.1]
//! kind = "lf"
//! a = "4"
//! b = "2"
//! c = "3"
//! d = "3"
//!
//! [g.1.0]
//! kind = "expr"
//! formula = "x^(3/2)/8"
//! lip = "3/16"        # optional declared Lipschitz norm
//! ```
//!
//! Every number is a string parsed as an exact rational; fractions
//! (`"-1/2"`), integers (`"3"`), and decimals (`"0.25"`) are accepted.
//! Schema problems (unknown kind, missing key, bad TOML) are config
//! errors; maps that parse but violate the monotone-contraction or
//! tiling requirements are validation errors.

use std::fs;
use std::path::Path;

use serde::Deserialize;

use crate::error::{Error, Result};
use crate::maps::{Map, Matrix2};
use crate::rational::Rational;
use crate::systems::{System, SystemPair};

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct ConfigFile {
    /// Optional display label for the pair.
    label: Option<String>,
    f: SystemTable,
    g: SystemTable,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct SystemTable {
    #[serde(rename = "0")]
    row0: RowTable,
    #[serde(rename = "1")]
    row1: RowTable,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RowTable {
    #[serde(rename = "0")]
    digit0: MapSpec,
    #[serde(rename = "1")]
    digit1: MapSpec,
}

#[derive(Debug, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
#[serde(deny_unknown_fields)]
enum MapSpec {
    Affine { slope: String, intercept: String },
    Lf { a: String, b: String, c: String, d: String },
    Expr { formula: String, lip: Option<String> },
}

fn parse_rational(which: &str, key: &str, text: &str) -> Result<Rational> {
    text.parse().map_err(|e: Error| match e {
        Error::Number { text, msg } => Error::Config(format!("{which}: {key} = {text:?}: {msg}")),
        other => other,
    })
}

impl MapSpec {
    fn build(&self, which: &str) -> Result<Map> {
        match self {
            MapSpec::Affine { slope, intercept } => Map::affine(
                parse_rational(which, "slope", slope)?,
                parse_rational(which, "intercept", intercept)?,
            ),
            MapSpec::Lf { a, b, c, d } => Map::lf(Matrix2::new(
                parse_rational(which, "a", a)?,
                parse_rational(which, "b", b)?,
                parse_rational(which, "c", c)?,
                parse_rational(which, "d", d)?,
            )),
            MapSpec::Expr { formula, lip } => {
                let declared = match lip {
                    Some(text) => Some(parse_rational(which, "lip", text)?),
                    None => None,
                };
                Map::expr(formula, declared)
            }
        }
    }
}

impl SystemTable {
    fn build(&self, name: &str, label: &str) -> Result<System> {
        let maps = [
            [
                self.row0.digit0.build(&format!("{name}.0.0"))?,
                self.row0.digit1.build(&format!("{name}.0.1"))?,
            ],
            [
                self.row1.digit0.build(&format!("{name}.1.0"))?,
                self.row1.digit1.build(&format!("{name}.1.1"))?,
            ],
        ];
        System::new(maps, format!("{label} {name}"))
    }
}

/// Parse a TOML pair definition. Schema errors come back as
/// [`Error::Config`]; map or tiling violations as validation errors.
pub fn pair_from_toml(text: &str) -> Result<SystemPair> {
    let file: ConfigFile =
        toml::from_str(text).map_err(|e| Error::Config(format!("config: {}", e.message())))?;
    let label = file.label.as_deref().unwrap_or("config");
    let f = file.f.build("f", label)?;
    let g = file.g.build("g", label)?;
    Ok(SystemPair::new(f, g))
}

/// Read and parse a pair definition from a file.
pub fn pair_from_path(path: &Path) -> Result<SystemPair> {
    let text = fs::read_to_string(path)
        .map_err(|e| Error::Config(format!("cannot read {}: {e}", path.display())))?;
    pair_from_toml(&text)
}
