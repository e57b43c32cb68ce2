//! The complex and chain JSON formats.
//!
//! A complex file is an object with a required `"facets"` array and optional
//! `"strata"` (generators of X_{l−2}, X_{l−3}, … in that order), `"weights"`
//! (face key `"0-1-2"` → positive decimal or `"p/q"` string) and
//! `"coordinates"` (vertex id → point).

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::complex::{Simplex, SimplicialComplex, Vertex};
use crate::error::{Error, Result};
use crate::flatnorm::{Chain, MassWeights};

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ComplexFile {
    pub facets: Vec<Vec<Vertex>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub strata: Option<Vec<Vec<Vec<Vertex>>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub weights: Option<BTreeMap<String, Value>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub coordinates: Option<BTreeMap<String, Vec<f64>>>,
    /// Written by `normalize`; ignored on input.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub projection: Option<BTreeMap<String, String>>,
}

/// A parsed complex file.
#[derive(Clone, Debug)]
pub struct ComplexInput {
    pub complex: SimplicialComplex,
    pub strata: Option<Vec<Vec<Simplex>>>,
    pub weight_overrides: BTreeMap<Simplex, BigRational>,
    pub coordinates: Option<BTreeMap<Vertex, Vec<f64>>>,
}

impl ComplexInput {
    /// Euclidean volumes when coordinates are present, unit weights
    /// otherwise, with explicit weights taking precedence.
    pub fn mass_weights(&self) -> Result<MassWeights> {
        let base = match &self.coordinates {
            Some(c) => MassWeights::euclidean(&self.complex, c)?,
            None => MassWeights::unit(),
        };
        base.with_overrides(self.weight_overrides.clone())
    }
}

pub fn parse_complex(text: &str) -> Result<ComplexInput> {
    let file: ComplexFile =
        serde_json::from_str(text).map_err(|e| Error::InvalidArgument(format!("complex JSON: {e}")))?;
    let complex = SimplicialComplex::from_facets(file.facets)?;
    let strata = file
        .strata
        .map(|levels| {
            levels
                .into_iter()
                .map(|faces| faces.into_iter().map(Simplex::new).collect::<Result<Vec<_>>>())
                .collect::<Result<Vec<_>>>()
        })
        .transpose()?;
    let mut weight_overrides = BTreeMap::new();
    for (key, value) in file.weights.unwrap_or_default() {
        let face = Simplex::parse_key(&key)?;
        if !complex.contains(&face) {
            return Err(Error::NotAFace(face.to_string()));
        }
        let w = match &value {
            Value::Number(n) => parse_rational(&n.to_string())?,
            Value::String(s) => parse_rational(s)?,
            _ => return Err(Error::InvalidArgument(format!("weight for {key} is not a number"))),
        };
        weight_overrides.insert(face, w);
    }
    let coordinates = file
        .coordinates
        .map(|m| {
            m.into_iter()
                .map(|(k, p)| {
                    k.trim()
                        .parse::<Vertex>()
                        .map(|v| (v, p))
                        .map_err(|_| Error::InvalidArgument(format!("bad vertex id {k:?} in coordinates")))
                })
                .collect::<Result<BTreeMap<_, _>>>()
        })
        .transpose()?;
    Ok(ComplexInput { complex, strata, weight_overrides, coordinates })
}

pub fn complex_file(complex: &SimplicialComplex) -> ComplexFile {
    ComplexFile {
        facets: complex.facets().iter().map(|s| s.vertices().to_vec()).collect(),
        ..ComplexFile::default()
    }
}

/// Accepts `"p/q"`, integers and decimals with an optional exponent.
pub fn parse_rational(text: &str) -> Result<BigRational> {
    let bad = || Error::InvalidArgument(format!("cannot parse {text:?} as a rational"));
    let t = text.trim();
    if let Some((n, d)) = t.split_once('/') {
        let n: BigInt = n.trim().parse().map_err(|_| bad())?;
        let d: BigInt = d.trim().parse().map_err(|_| bad())?;
        if d.is_zero() {
            return Err(bad());
        }
        return Ok(BigRational::new(n, d));
    }
    let (mantissa, exp) = match t.find(['e', 'E']) {
        Some(i) => (&t[..i], t[i + 1..].parse::<i32>().map_err(|_| bad())?),
        None => (t, 0),
    };
    let (neg, digits) = match mantissa.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, mantissa.strip_prefix('+').unwrap_or(mantissa)),
    };
    let (int, frac) = digits.split_once('.').unwrap_or((digits, ""));
    if int.is_empty() && frac.is_empty() || !int.chars().chain(frac.chars()).all(|c| c.is_ascii_digit()) {
        return Err(bad());
    }
    let whole: BigInt = format!("{int}{frac}").parse().map_err(|_| bad())?;
    let scale = exp - frac.len() as i32;
    let ten = BigInt::from(10);
    let mut value = if scale >= 0 {
        BigRational::from_integer(whole * num_traits::pow(ten, scale as usize))
    } else {
        BigRational::new(whole, num_traits::pow(ten, (-scale) as usize))
    };
    if neg {
        value = -value;
    }
    Ok(value)
}

/// `"p/q"`, or just `"p"` for integers.
pub fn format_rational(q: &BigRational) -> String {
    if q.denom().is_one() {
        q.numer().to_string()
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}

/// A chain object maps face keys to rationals. The degree is read off the
/// keys; an empty chain needs an explicit `"degree"` entry.
pub fn parse_chain(text: &str) -> Result<Chain> {
    let map: BTreeMap<String, Value> =
        serde_json::from_str(text).map_err(|e| Error::InvalidArgument(format!("chain JSON: {e}")))?;
    let mut degree = None;
    let mut terms = Vec::new();
    for (key, value) in map {
        if key == "degree" {
            degree = Some(value.as_u64().ok_or_else(|| Error::InvalidArgument("degree must be a number".into()))? as usize);
            continue;
        }
        let face = Simplex::parse_key(&key)?;
        let c = match &value {
            Value::Number(n) => parse_rational(&n.to_string())?,
            Value::String(s) => parse_rational(s)?,
            _ => return Err(Error::InvalidArgument(format!("coefficient for {key} is not a number"))),
        };
        terms.push((face, c));
    }
    let degree = match (degree, terms.first()) {
        (Some(d), _) => d,
        (None, Some((s, _))) => s.dim(),
        (None, None) => return Err(Error::InvalidArgument("empty chain needs a \"degree\" entry".into())),
    };
    Chain::new(degree, terms)
}

pub fn chain_json(chain: &Chain) -> Value {
    Value::Object(chain.terms().map(|(s, c)| (s.key(), Value::String(format_rational(c)))).collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    #[test]
    fn rationals() {
        assert_eq!(parse_rational("3/2").unwrap(), q(3, 2));
        assert_eq!(parse_rational("-4").unwrap(), q(-4, 1));
        assert_eq!(parse_rational("1.25").unwrap(), q(5, 4));
        assert_eq!(parse_rational("-0.5").unwrap(), q(-1, 2));
        assert_eq!(parse_rational("2.5e-1").unwrap(), q(1, 4));
        assert_eq!(parse_rational("1E2").unwrap(), q(100, 1));
        for bad in ["", "1/0", "abc", ".", "1.2.3", "--1"] {
            assert!(parse_rational(bad).is_err(), "{bad}");
        }
        assert_eq!(format_rational(&q(6, 4)), "3/2");
        assert_eq!(format_rational(&q(-3, 1)), "-3");
    }

    #[test]
    fn complex_with_extras() {
        let text = r#"{
            "facets": [[0,1,2],[1,2,3]],
            "strata": [[[1]]],
            "weights": {"0-1-2": 2.5, "1-2": "1/3"},
            "coordinates": {"0": [0,0], "1": [1,0], "2": [0,1], "3": [1,1]}
        }"#;
        let input = parse_complex(text).unwrap();
        assert_eq!(input.complex.f_vector(), vec![4, 5, 2]);
        assert_eq!(input.strata, Some(vec![vec![Simplex::vertex(1)]]));
        let w = input.mass_weights().unwrap();
        assert_eq!(w.weight(&Simplex::new([0, 1, 2]).unwrap()).unwrap(), &q(5, 2));
        assert_eq!(w.weight(&Simplex::new([1, 2]).unwrap()).unwrap(), &q(1, 3));
        assert_eq!(w.weight(&Simplex::new([0, 1]).unwrap()).unwrap(), &q(1, 1));
    }

    #[test]
    fn complex_errors() {
        assert!(parse_complex("{").is_err());
        assert!(parse_complex(r#"{"facets": [[0, -1]]}"#).is_err());
        assert_eq!(parse_complex(r#"{"facets": []}"#).unwrap_err(), Error::EmptyComplex);
        assert!(matches!(parse_complex(r#"{"facets": [[0, 0]]}"#), Err(Error::DegenerateSimplex(_))));
        assert!(matches!(
            parse_complex(r#"{"facets": [[0, 1]], "weights": {"0-2": 1}}"#),
            Err(Error::NotAFace(_))
        ));
        assert!(parse_complex(r#"{"facets": [[0, 1]], "bogus": 1}"#).is_err());
    }

    #[test]
    fn chains() {
        let c = parse_chain(r#"{"0-1": "3/2", "1-2": -1}"#).unwrap();
        assert_eq!(c.degree(), 1);
        assert_eq!(c.coefficient(&Simplex::new([0, 1]).unwrap()), q(3, 2));
        assert_eq!(chain_json(&c), serde_json::json!({"0-1": "3/2", "1-2": "-1"}));
        assert!(parse_chain("{}").is_err());
        assert!(parse_chain(r#"{"degree": 2}"#).unwrap().is_zero());
        assert!(parse_chain(r#"{"0-1": "1", "2": "1"}"#).is_err());
    }
}
