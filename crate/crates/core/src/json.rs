//! JSON schemas for the command line.
//!
//! Output is canonical: keys sorted, fans in canonical ray and cone order.
//! Integers that fit in `i64` are JSON numbers, larger ones strings.
//! Rationals are strings `"p/q"` or integers.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};
use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};

use crate::linalg::{IntVec, IntegerMatrix, RatVec};
use crate::polyhedral::{Fan, Polytope};
use crate::quotients::{ChamberComplex, WeightSystem};
use crate::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct JInt(pub BigInt);

impl Serialize for JInt {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self.0.to_i64() {
            Some(v) => s.serialize_i64(v),
            None => s.serialize_str(&self.0.to_string()),
        }
    }
}

impl<'de> Deserialize<'de> for JInt {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Repr {
            I(i64),
            U(u64),
            S(String),
        }
        match Repr::deserialize(d)? {
            Repr::I(v) => Ok(JInt(v.into())),
            Repr::U(v) => Ok(JInt(v.into())),
            Repr::S(s) => s
                .trim()
                .parse::<BigInt>()
                .map(JInt)
                .map_err(|_| serde::de::Error::custom(format!("not an integer: {s:?}"))),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct JRat(pub BigRational);

impl Serialize for JRat {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        if self.0.is_integer() {
            JInt(self.0.to_integer()).serialize(s)
        } else {
            s.serialize_str(&self.0.to_string())
        }
    }
}

impl<'de> Deserialize<'de> for JRat {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Repr {
            I(i64),
            S(String),
        }
        match Repr::deserialize(d)? {
            Repr::I(v) => Ok(JRat(BigRational::from_integer(v.into()))),
            Repr::S(s) => parse_rational(&s).map(JRat).map_err(serde::de::Error::custom),
        }
    }
}

/// `"3"`, `"-1/2"`; denominators must be nonzero.
pub fn parse_rational(s: &str) -> Result<BigRational> {
    let bad = || Error::InvalidParameters(format!("not a rational number: {s:?}"));
    let s = s.trim();
    match s.split_once('/') {
        None => Ok(BigRational::from_integer(s.parse().map_err(|_| bad())?)),
        Some((p, q)) => {
            let p: BigInt = p.trim().parse().map_err(|_| bad())?;
            let q: BigInt = q.trim().parse().map_err(|_| bad())?;
            if q.is_zero() {
                return Err(bad());
            }
            Ok(BigRational::new(p, q))
        }
    }
}

/// Comma separated rationals, as accepted by `--v`.
pub fn parse_rational_vector(s: &str) -> Result<RatVec> {
    s.split(',').map(parse_rational).collect()
}

fn ints(v: &[BigInt]) -> Vec<JInt> {
    v.iter().cloned().map(JInt).collect()
}

fn unints(v: Vec<JInt>) -> IntVec {
    v.into_iter().map(|x| x.0).collect()
}

fn rats(v: &[BigRational]) -> Vec<JRat> {
    v.iter().cloned().map(JRat).collect()
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
#[serde(deny_unknown_fields)]
pub struct MatrixJson {
    pub rows: Vec<Vec<JInt>>,
}

impl MatrixJson {
    pub fn from_matrix(m: &IntegerMatrix) -> Self {
        MatrixJson {
            rows: m.to_rows().iter().map(|r| ints(r)).collect(),
        }
    }

    /// An empty row list reads as the `0 × 0` matrix.
    pub fn to_matrix(&self) -> Result<IntegerMatrix> {
        let cols = self.rows.first().map_or(0, Vec::len);
        IntegerMatrix::from_rows(
            cols,
            self.rows
                .iter()
                .map(|r| r.iter().map(|x| x.0.clone()).collect())
                .collect(),
        )
    }
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
#[serde(deny_unknown_fields)]
pub struct FanJson {
    pub rank: usize,
    pub rays: Vec<Vec<JInt>>,
    pub max_cones: Vec<Vec<usize>>,
}

impl FanJson {
    pub fn from_fan(f: &Fan) -> Self {
        FanJson {
            rank: f.rank(),
            rays: f.rays().iter().map(|r| ints(r)).collect(),
            max_cones: f.max_cones().iter().map(|c| c.to_vec()).collect(),
        }
    }

    pub fn to_fan(&self) -> Result<Fan> {
        let rays: Vec<IntVec> = self.rays.iter().cloned().map(unints).collect();
        Fan::new(self.rank, rays, self.max_cones.clone())
    }
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
#[serde(deny_unknown_fields)]
pub struct PolytopeJson {
    pub rank: usize,
    pub inequalities: Vec<Vec<JInt>>,
    pub equations: Vec<Vec<JInt>>,
    /// Output only; ignored on input.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub vertices: Option<Vec<Vec<JRat>>>,
}

impl PolytopeJson {
    pub fn from_polytope(p: &Polytope) -> Self {
        PolytopeJson {
            rank: p.rank(),
            inequalities: p.inequalities().iter().map(|r| ints(r)).collect(),
            equations: p.equations().iter().map(|r| ints(r)).collect(),
            vertices: p.vertices().ok().map(|vs| {
                let mut vs: Vec<Vec<JRat>> = vs.iter().map(|v| rats(v)).collect();
                vs.sort_by(|a, b| a.iter().map(|x| &x.0).cmp(b.iter().map(|x| &x.0)));
                vs
            }),
        }
    }

    pub fn to_polytope(&self) -> Result<Polytope> {
        Polytope::new(
            self.rank,
            self.inequalities.iter().cloned().map(unints).collect(),
            self.equations.iter().cloned().map(unints).collect(),
        )
    }
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
#[serde(deny_unknown_fields)]
pub struct WeightSystemJson {
    /// Columns of the weight matrix.
    pub weights: Vec<Vec<JInt>>,
    #[serde(default)]
    pub labels: Option<Vec<String>>,
}

impl WeightSystemJson {
    pub fn from_weights(ws: &WeightSystem) -> Self {
        WeightSystemJson {
            weights: ws.weights().iter().map(|w| ints(w)).collect(),
            labels: Some(ws.labels().to_vec()),
        }
    }

    pub fn to_weights(&self) -> Result<WeightSystem> {
        let rank = self
            .weights
            .first()
            .map(Vec::len)
            .ok_or_else(|| Error::InvalidParameters("weights: at least one weight is required".into()))?;
        let cols: Vec<IntVec> = self.weights.iter().cloned().map(unints).collect();
        WeightSystem::from_weights(rank, &cols, self.labels.clone())
    }
}

#[derive(Clone, Debug, Serialize, PartialEq, Eq)]
pub struct ChamberJson {
    pub generators: Vec<Vec<JInt>>,
    pub representative: Vec<JInt>,
}

#[derive(Clone, Debug, Serialize, PartialEq, Eq)]
pub struct ChamberComplexJson {
    pub rank: usize,
    pub chambers: Vec<ChamberJson>,
}

impl ChamberComplexJson {
    pub fn from_complex(cx: &ChamberComplex) -> Self {
        let mut chambers: Vec<ChamberJson> = cx
            .chambers
            .iter()
            .zip(&cx.representatives)
            .map(|(c, v)| {
                let mut gens: Vec<IntVec> = c.rays().to_vec();
                gens.sort();
                ChamberJson {
                    generators: gens.iter().map(|g| ints(g)).collect(),
                    representative: ints(v),
                }
            })
            .collect();
        chambers.sort_by(|a, b| {
            let key = |c: &ChamberJson| c.generators.iter().map(|g| unints(g.clone())).collect::<Vec<_>>();
            key(a).cmp(&key(b))
        });
        ChamberComplexJson {
            rank: cx.rank,
            chambers,
        }
    }
}

/// Input of `quotient-fan-general`.
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
#[serde(deny_unknown_fields)]
pub struct FanProjectionJson {
    pub fan: FanJson,
    pub projection: MatrixJson,
}

/// A JSON input error, naming the offending field.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct JsonError {
    pub path: String,
    pub message: String,
}

impl std::fmt::Display for JsonError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "invalid JSON at `{}`: {}", self.path, self.message)
    }
}

pub fn parse<T: DeserializeOwned>(s: &str) -> std::result::Result<T, JsonError> {
    let de = &mut serde_json::Deserializer::from_str(s);
    serde_path_to_error::deserialize(de).map_err(|e| JsonError {
        path: e.path().to_string(),
        message: e.inner().to_string(),
    })
}

/// Pretty JSON with sorted keys.
pub fn to_canonical_string<T: Serialize>(v: &T) -> String {
    // `Value` keeps object keys in a sorted map
    let value = serde_json::to_value(v).expect("serializable");
    serde_json::to_string_pretty(&value).expect("serializable")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{int_vec, rat};

    #[test]
    fn big_integers_become_strings() {
        let m = IntegerMatrix::from_rows(2, vec![vec![BigInt::from(1), BigInt::from(10).pow(30)]]).unwrap();
        let s = to_canonical_string(&MatrixJson::from_matrix(&m));
        assert!(s.contains("\"1000000000000000000000000000000\""));
        let back: MatrixJson = parse(&s).unwrap();
        assert_eq!(back.to_matrix().unwrap(), m);
    }

    #[test]
    fn errors_name_the_field() {
        let e = parse::<FanJson>(r#"{"rank": 2, "rays": [[1, "x"]], "max_cones": []}"#).unwrap_err();
        assert_eq!(e.path, "rays[0][1]");
        let e = parse::<WeightSystemJson>(r#"{"weights": [[1]], "lables": []}"#).unwrap_err();
        assert!(e.message.contains("lables"), "{e}");
        let e = parse::<FanJson>(r#"{"rank": 2, "rays": []}"#).unwrap_err();
        assert!(e.message.contains("max_cones"), "{e}");
    }

    #[test]
    fn sorted_keys_and_round_trips() {
        let fan = Fan::new(1, vec![int_vec(&[1]), int_vec(&[-1])], vec![vec![0], vec![1]]).unwrap();
        let s = to_canonical_string(&FanJson::from_fan(&fan));
        let (a, b, c) = (
            s.find("max_cones").unwrap(),
            s.find("rank").unwrap(),
            s.find("rays").unwrap(),
        );
        assert!(a < b && b < c);
        assert_eq!(parse::<FanJson>(&s).unwrap().to_fan().unwrap(), fan);
        let ws = WeightSystem::from_weights(1, &[int_vec(&[1]), int_vec(&[2])], None).unwrap();
        let j = WeightSystemJson::from_weights(&ws);
        assert_eq!(j.to_weights().unwrap(), ws);
    }

    #[test]
    fn rationals() {
        assert_eq!(
            parse_rational_vector("1, -3/6,2").unwrap(),
            vec![rat(1, 1), rat(-1, 2), rat(2, 1)]
        );
        assert!(parse_rational("1/0").is_err());
        assert!(parse_rational("x").is_err());
        assert_eq!(to_canonical_string(&JRat(rat(3, 4))), "\"3/4\"");
        assert_eq!(to_canonical_string(&JRat(rat(4, 2))), "2");
    }
}
