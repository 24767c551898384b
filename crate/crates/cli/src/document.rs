//! JSON interchange documents.
//!
//! Arbitrary-precision integers serialize as plain JSON numbers while they
//! fit 53 bits and as decimal strings beyond that, so consumers in any
//! language read them without silent precision loss. Fan documents list
//! every cone of the fan, faces and zero cone included, as arrays of ray
//! indices.

use std::fmt;
use std::str::FromStr;

use chamber_forge::lattice::{Matrix, Vector};
use chamber_forge::polyhedral::{Cone, Fan, MatrixGroup};
use chamber_forge::{Fan as BigFan, Int};
use num::Signed;
use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

pub const SCHEMA_VERSION: &str = "1";

/// `BigInt` carried as number-or-string.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct JsonInt(pub Int);

const SAFE_MAGNITUDE: i64 = (1 << 53) - 1;

impl Serialize for JsonInt {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let v = &self.0;
        if v.abs() <= Int::from(SAFE_MAGNITUDE) {
            let as_i64 = i64::try_from(v.clone()).map_err(serde::ser::Error::custom)?;
            s.serialize_i64(as_i64)
        } else {
            s.serialize_str(&v.to_string())
        }
    }
}

impl<'de> Deserialize<'de> for JsonInt {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Raw {
            Num(i64),
            Text(String),
        }
        match Raw::deserialize(d)? {
            Raw::Num(n) => Ok(JsonInt(Int::from(n))),
            Raw::Text(t) => Int::from_str(&t)
                .map(JsonInt)
                .map_err(|e| D::Error::custom(format!("bad integer literal {t:?}: {e}"))),
        }
    }
}

impl fmt::Display for JsonInt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

fn encode_vector(v: &Vector<Int>) -> Vec<JsonInt> {
    v.coords().iter().cloned().map(JsonInt).collect()
}

fn decode_vector(coords: &[JsonInt]) -> Vector<Int> {
    Vector::new(coords.iter().map(|c| c.0.clone()).collect())
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct FanDocument {
    pub schema_version: String,
    pub rank: usize,
    pub rays: Vec<Vec<JsonInt>>,
    /// Every cone of the fan as sorted ray indices; the zero cone is `[]`.
    pub cones: Vec<Vec<usize>>,
}

/// Problems found while turning a document into a fan, before the fan-level
/// invariants are even considered.
#[derive(Debug, Clone)]
pub enum DecodeIssue {
    BadRank { ray: Vec<JsonInt> },
    IndexOutOfRange { cone: Vec<usize>, index: usize },
    NotPointed { cone: Vec<usize> },
}

impl fmt::Display for DecodeIssue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            DecodeIssue::BadRank { ray } => {
                let txt: Vec<String> = ray.iter().map(|c| c.to_string()).collect();
                write!(f, "ray [{}] does not match the document rank", txt.join(", "))
            }
            DecodeIssue::IndexOutOfRange { cone, index } => {
                write!(f, "cone {cone:?} refers to missing ray index {index}")
            }
            DecodeIssue::NotPointed { cone } => {
                write!(f, "cone {cone:?} contains a line")
            }
        }
    }
}

impl FanDocument {
    pub fn from_fan(fan: &BigFan) -> Self {
        let rays = fan.rays().to_vec();
        let cones = fan
            .cones()
            .iter()
            .map(|c| {
                c.rays()
                    .iter()
                    .map(|r| rays.iter().position(|x| x == r).expect("fan registers its rays"))
                    .collect()
            })
            .collect();
        FanDocument {
            schema_version: SCHEMA_VERSION.to_string(),
            rank: fan.rank(),
            rays: rays.iter().map(encode_vector).collect(),
            cones,
        }
    }

    /// Checks the listed rays as written, before any canonicalization:
    /// the cone constructor silently primitivizes, so a document listing a
    /// non-primitive or zero ray must be flagged here.
    pub fn listed_ray_violations(&self) -> Vec<String> {
        let mut out = Vec::new();
        for raw in &self.rays {
            let v = decode_vector(raw);
            if v.is_zero() {
                out.push("the zero vector is listed as a ray".to_string());
            } else if !v.is_primitive() {
                out.push(format!("listed ray {v:?} is not primitive"));
            }
        }
        out
    }

    /// Rebuilds the listed cones without healing anything; fan-level
    /// invariants are the caller's to check via `Fan::validate`.
    pub fn decode(&self) -> Result<BigFan, DecodeIssue> {
        let rays: Vec<Vector<Int>> = self.rays.iter().map(|r| decode_vector(r)).collect();
        for (raw, r) in self.rays.iter().zip(&rays) {
            if r.rank() != self.rank {
                return Err(DecodeIssue::BadRank { ray: raw.clone() });
            }
        }
        let mut cones = Vec::new();
        for cone_indices in &self.cones {
            let mut gens = Vec::new();
            for &i in cone_indices {
                let ray = rays.get(i).ok_or(DecodeIssue::IndexOutOfRange {
                    cone: cone_indices.clone(),
                    index: i,
                })?;
                gens.push(ray.clone());
            }
            let cone = Cone::from_rays(self.rank, &gens).map_err(|_| DecodeIssue::NotPointed {
                cone: cone_indices.clone(),
            })?;
            cones.push(cone);
        }
        Ok(Fan::assemble(self.rank, cones, false))
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct GroupDocument {
    pub schema_version: String,
    pub rank: usize,
    pub generators: Vec<Vec<Vec<JsonInt>>>,
}

impl GroupDocument {
    pub fn decode(&self) -> anyhow::Result<MatrixGroup<Int>> {
        let gens: Vec<Matrix<Int>> = self
            .generators
            .iter()
            .map(|rows| {
                Matrix::from_rows(
                    rows.iter()
                        .map(|r| r.iter().map(|c| c.0.clone()).collect())
                        .collect(),
                )
            })
            .collect();
        for g in &gens {
            if g.nrows() != self.rank || g.ncols() != self.rank {
                anyhow::bail!("generator has wrong dimensions for rank {}", self.rank);
            }
        }
        Ok(MatrixGroup::generate(self.rank, gens)?)
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct DvrFanDocument {
    pub schema_version: String,
    pub base_rank: usize,
    pub fan: FanDocument,
}

/// Trace of one refinement run, serialization-friendly.
#[derive(Debug, Clone, Serialize)]
pub struct TraceDocument {
    pub iterations: usize,
    pub budget: usize,
    pub steps: Vec<TraceStepDocument>,
}

#[derive(Debug, Clone, Serialize)]
pub struct TraceStepDocument {
    pub kind: String,
    pub orbit: Vec<Vec<JsonInt>>,
    pub measure_before: Vec<JsonInt>,
    pub measure_after: Vec<JsonInt>,
}

impl TraceDocument {
    pub fn from_trace(trace: &chamber_forge::refine::RefinementTrace<Int>) -> Self {
        TraceDocument {
            iterations: trace.iterations,
            budget: trace.budget,
            steps: trace
                .steps
                .iter()
                .map(|s| TraceStepDocument {
                    kind: match s.kind {
                        chamber_forge::refine::StepKind::Simplicialize => "simplicialize".into(),
                        chamber_forge::refine::StepKind::Resolve => "resolve".into(),
                    },
                    orbit: s.orbit.iter().map(encode_vector).collect(),
                    measure_before: s.measure_before.iter().cloned().map(JsonInt).collect(),
                    measure_after: s.measure_after.iter().cloned().map(JsonInt).collect(),
                })
                .collect(),
        }
    }
}

pub fn encode_ray(v: &Vector<Int>) -> Vec<JsonInt> {
    encode_vector(v)
}

pub fn parse_generators(text: &str) -> anyhow::Result<Vec<Vector<Int>>> {
    let raw: Vec<Vec<JsonInt>> = serde_json::from_str(text)?;
    Ok(raw.iter().map(|r| decode_vector(r)).collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use chamber_forge::rootdata::{LatticeForm, RootDatum};

    fn corpus() -> Vec<BigFan> {
        let mk = |rank: usize, cones: &[&[&[i64]]]| -> BigFan {
            Fan::from_cones(
                rank,
                cones
                    .iter()
                    .map(|rays| {
                        Cone::from_rays(
                            rank,
                            &rays
                                .iter()
                                .map(|r| {
                                    Vector::new(r.iter().map(|&c| Int::from(c)).collect())
                                })
                                .collect::<Vec<_>>(),
                        )
                        .unwrap()
                    })
                    .collect(),
            )
            .unwrap()
        };
        vec![
            mk(1, &[&[&[1]], &[&[-1]]]),
            mk(2, &[&[&[1, 0], &[0, 1]], &[&[0, 1], &[-1, -1]], &[&[-1, -1], &[1, 0]]]),
            RootDatum::<Int>::preset("A2", LatticeForm::Adjoint)
                .unwrap()
                .weyl_fan()
                .unwrap(),
        ]
    }

    #[test]
    fn decode_inverts_encode() {
        for fan in corpus() {
            let doc = FanDocument::from_fan(&fan);
            let back = doc.decode().unwrap();
            assert_eq!(back, fan);
            assert!(doc.listed_ray_violations().is_empty());
            assert!(back.validate().is_valid());
        }
    }

    #[test]
    fn json_int_boundary() {
        let small = JsonInt(Int::from((1i64 << 53) - 1));
        let rendered = serde_json::to_string(&small).unwrap();
        assert!(!rendered.contains('"'));
        let big = JsonInt(Int::from(1i64 << 53));
        let rendered = serde_json::to_string(&big).unwrap();
        assert!(rendered.contains('"'));
        let back: JsonInt = serde_json::from_str(&rendered).unwrap();
        assert_eq!(back, big);
    }
}
