//! JSON input format.
//!
//! ```json
//! {
//!   "genus": 2,
//!   "weierstrass": ["0", "1", "2", "3", {"re": "0", "im": "1"}, {"re": "0", "im": "-1"}],
//!   "divisor": [{"point": "4", "mult": -5}],
//!   "options": {"d_max": 5, "sample_count": 500, "seed": 7, "skip_numeric": false}
//! }
//! ```
//!
//! Numbers are exact rationals given as strings (`"p/q"`, integers or finite
//! decimals); plain JSON integers are accepted too. An optional `quadrics`
//! object `{"a": [[..]], "b": [[..]]}` replaces the quadrics derived from the
//! curve in the numeric stage, which is useful for testing the sampler.

use num_complex::Complex;
use serde::{Deserialize, Serialize};

use crate::curve::{DivisorPoint, RealDivisor, WeierstrassSet};
use crate::error::{Error, ParseError};
use crate::scalar::parse_rational;
use crate::{Gaussian, Rational};

#[derive(Debug, Deserialize)]
#[serde(untagged)]
enum RawNumber {
    Text(String),
    Int(i64),
    Float(f64),
}

#[derive(Debug, Deserialize)]
#[serde(untagged)]
enum RawComplex {
    Parts {
        re: RawNumber,
        #[serde(default)]
        im: Option<RawNumber>,
    },
    Real(RawNumber),
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawDivisorPoint {
    point: RawComplex,
    mult: i64,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawQuadrics {
    a: Vec<Vec<f64>>,
    b: Vec<Vec<f64>>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawInput {
    genus: usize,
    weierstrass: Vec<RawComplex>,
    divisor: Vec<RawDivisorPoint>,
    #[serde(default)]
    options: InputOptions,
    #[serde(default)]
    quadrics: Option<RawQuadrics>,
}

/// Run options carried in the input file; command-line flags take precedence.
#[derive(Clone, Debug, Default, PartialEq, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
pub struct InputOptions {
    #[serde(default)]
    pub d_max: Option<usize>,
    #[serde(default)]
    pub sample_count: Option<usize>,
    #[serde(default)]
    pub seed: Option<u64>,
    #[serde(default)]
    pub skip_numeric: Option<bool>,
}

/// Gram matrices `(A, B)` given directly.
pub type QuadricOverride = (Vec<Vec<f64>>, Vec<Vec<f64>>);

#[derive(Clone, Debug, PartialEq)]
pub struct InputSpec {
    pub genus: usize,
    pub weierstrass: WeierstrassSet<Rational>,
    pub divisor: RealDivisor<Rational>,
    pub options: InputOptions,
    /// Override for the numeric stage: Gram matrices `(A, B)`.
    pub quadrics: Option<QuadricOverride>,
}

fn number(raw: RawNumber, what: &str) -> Result<Rational, ParseError> {
    match raw {
        RawNumber::Text(s) => parse_rational(&s),
        RawNumber::Int(i) => Ok(Rational::from_integer(i.into())),
        RawNumber::Float(x) => Err(ParseError::Invalid(format!(
            "{what}: floating-point literal {x} is not exact; write it as a string such as \"p/q\""
        ))),
    }
}

fn complex(raw: RawComplex, what: &str) -> Result<Gaussian, ParseError> {
    match raw {
        RawComplex::Real(x) => Ok(Complex::new(
            number(x, what)?,
            Rational::from_integer(0.into()),
        )),
        RawComplex::Parts { re, im } => {
            let im = match im {
                Some(v) => number(v, what)?,
                None => Rational::from_integer(0.into()),
            };
            Ok(Complex::new(number(re, what)?, im))
        }
    }
}

impl InputSpec {
    pub fn from_json(text: &str) -> Result<Self, Error> {
        let raw: RawInput =
            serde_json::from_str(text).map_err(|e| ParseError::Json(e.to_string()))?;
        let points = raw
            .weierstrass
            .into_iter()
            .enumerate()
            .map(|(i, p)| complex(p, &format!("weierstrass[{i}]")))
            .collect::<Result<Vec<_>, _>>()?;
        let weierstrass = WeierstrassSet::new(raw.genus, points)?;
        let entries = raw
            .divisor
            .into_iter()
            .enumerate()
            .map(|(i, e)| {
                Ok(DivisorPoint {
                    point: complex(e.point, &format!("divisor[{i}].point"))?,
                    mult: e.mult,
                })
            })
            .collect::<Result<Vec<_>, ParseError>>()?;
        let divisor = RealDivisor::new(raw.genus, entries)?;
        divisor.validate_against(&weierstrass)?;
        let quadrics = raw.quadrics.map(|q| (q.a, q.b));
        Ok(Self {
            genus: raw.genus,
            weierstrass,
            divisor,
            options: raw.options,
            quadrics,
        })
    }

    pub fn from_path(path: &std::path::Path) -> Result<Self, Error> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| ParseError::Invalid(format!("cannot read {}: {e}", path.display())))?;
        Self::from_json(&text)
    }
}

/// `{"re": "p/q", "im": "p/q"}`.
pub fn complex_json(z: &Gaussian) -> serde_json::Value {
    serde_json::json!({"re": z.re.to_string(), "im": z.im.to_string()})
}
