//! JSON formats for fans, morphisms, divisors and presentations.
//!
//! Parse failures carry a JSON pointer to the offending value.

use std::sync::Arc;

use num_rational::BigRational;
use num_traits::Signed;
use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::cox::{CoxPolynomial, FreeModule, PresentedModule};
use crate::error::ToricError;
use crate::fan::Fan;
use crate::maps::ToricMorphism;
use crate::variety::{DivisorClass, TDivisor, ToricVariety};

/// An input error located by a JSON pointer (`""` is the whole document).
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct InputError {
    pub pointer: String,
    pub message: String,
}

impl InputError {
    pub fn new(pointer: impl Into<String>, message: impl Into<String>) -> Self {
        InputError { pointer: pointer.into(), message: message.into() }
    }

    fn at(pointer: &str, e: ToricError) -> Self {
        InputError::new(pointer, e.to_string())
    }
}

impl std::fmt::Display for InputError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{} (at '{}')", self.message, self.pointer)
    }
}

impl std::error::Error for InputError {}

fn pointer_of(path: &serde_path_to_error::Path) -> String {
    use serde_path_to_error::Segment;
    let mut s = String::new();
    for seg in path.iter() {
        match seg {
            Segment::Seq { index } => s.push_str(&format!("/{index}")),
            Segment::Map { key } => s.push_str(&format!("/{}", key.replace('~', "~0").replace('/', "~1"))),
            Segment::Enum { variant } => s.push_str(&format!("/{variant}")),
            Segment::Unknown => {}
        }
    }
    s
}

/// Deserializes with the path of the first failure recorded as a JSON pointer.
pub fn from_value<T: DeserializeOwned>(v: &Value, base: &str) -> Result<T, InputError> {
    serde_path_to_error::deserialize(v).map_err(|e| {
        let inner = e.inner().to_string();
        InputError::new(format!("{base}{}", pointer_of(e.path())), inner)
    })
}

pub fn parse_str(text: &str) -> Result<Value, InputError> {
    serde_json::from_str(text).map_err(|e| InputError::new("", format!("malformed JSON: {e}")))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase", deny_unknown_fields)]
pub struct FanJson {
    pub dim: usize,
    pub rays: Vec<Vec<i64>>,
    pub max_cones: Vec<Vec<usize>>,
}

impl FanJson {
    pub fn of(x: &ToricVariety) -> FanJson {
        FanJson { dim: x.dim(), rays: x.rays().to_vec(), max_cones: x.max_cones().to_vec() }
    }

    /// Builds the variety, pointing shape errors at the first bad ray or cone.
    pub fn build(&self, base: &str) -> Result<ToricVariety, InputError> {
        for (i, r) in self.rays.iter().enumerate() {
            if r.len() != self.dim {
                return Err(InputError::new(format!("{base}/rays/{i}"), format!("ray has length {}, expected {}", r.len(), self.dim)));
            }
            let g = r.iter().fold(0i64, |g, &a| num_integer::gcd(g, a));
            if g != 1 {
                let msg = if g == 0 { "zero vector has no primitive representative" } else { "ray is not primitive" };
                return Err(InputError::new(format!("{base}/rays/{i}"), msg));
            }
        }
        for (c, cone) in self.max_cones.iter().enumerate() {
            for (k, &i) in cone.iter().enumerate() {
                if i >= self.rays.len() {
                    return Err(InputError::new(format!("{base}/maxCones/{c}/{k}"), format!("ray index {i} out of range")));
                }
            }
        }
        let fan = Fan::new(self.dim, self.rays.clone(), self.max_cones.clone()).map_err(|e| InputError::at(base, e))?;
        ToricVariety::new(fan).map_err(|e| InputError::at(base, e))
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MorphismJson {
    pub source: FanJson,
    pub target: FanJson,
    /// `dim target` rows of length `dim source`.
    pub matrix: Vec<Vec<i64>>,
}

impl MorphismJson {
    pub fn of(f: &ToricMorphism) -> MorphismJson {
        MorphismJson { source: FanJson::of(f.source()), target: FanJson::of(f.target()), matrix: f.matrix().to_vec() }
    }

    pub fn build(&self, base: &str) -> Result<ToricMorphism, InputError> {
        let source = Arc::new(self.source.build(&format!("{base}/source"))?);
        let target = Arc::new(self.target.build(&format!("{base}/target"))?);
        if self.matrix.len() != target.dim() {
            return Err(InputError::new(format!("{base}/matrix"), format!("expected {} rows", target.dim())));
        }
        for (i, row) in self.matrix.iter().enumerate() {
            if row.len() != source.dim() {
                return Err(InputError::new(format!("{base}/matrix/{i}"), format!("expected {} columns", source.dim())));
            }
        }
        ToricMorphism::new(target, source, self.matrix.clone()).map_err(|e| InputError::at(&format!("{base}/matrix"), e))
    }
}

/// A coefficient written as a JSON integer or as a string `"p/q"`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Coefficient {
    Int(i64),
    Text(String),
}

impl Coefficient {
    pub fn of(c: &BigRational) -> Coefficient {
        if c.is_integer() {
            if let Ok(v) = i64::try_from(c.to_integer()) {
                return Coefficient::Int(v);
            }
        }
        Coefficient::Text(c.to_string())
    }

    pub fn value(&self) -> Result<BigRational, String> {
        match self {
            Coefficient::Int(v) => Ok(BigRational::from_integer((*v).into())),
            Coefficient::Text(s) => {
                let s = s.trim();
                let parsed = match s.split_once('/') {
                    Some((n, d)) => n.trim().parse().ok().zip(d.trim().parse().ok()).and_then(|(n, d): (num_bigint::BigInt, num_bigint::BigInt)| {
                        if d.is_positive() || d.is_negative() {
                            Some(BigRational::new(n, d))
                        } else {
                            None
                        }
                    }),
                    None => s.parse().ok().map(BigRational::from_integer),
                };
                parsed.ok_or_else(|| format!("not a rational number: {s:?}"))
            }
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TermJson {
    pub coefficient: Coefficient,
    pub exponents: Vec<u32>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PresentationJson {
    /// Generator degrees of the target (the rows).
    pub target: Vec<Vec<i64>>,
    /// Generator degrees of the source (the columns).
    pub source: Vec<Vec<i64>>,
    /// `entries[i][j]` lists the terms of one polynomial.
    pub entries: Vec<Vec<Vec<TermJson>>>,
}

impl PresentationJson {
    pub fn of(m: &PresentedModule) -> PresentationJson {
        let degs = |f: &FreeModule| f.degrees.iter().map(|d| d.0.clone()).collect();
        PresentationJson {
            target: degs(&m.target),
            source: degs(&m.source),
            entries: m
                .entries
                .iter()
                .map(|row| {
                    row.iter()
                        .map(|p| p.terms().map(|(e, c)| TermJson { coefficient: Coefficient::of(c), exponents: e.clone() }).collect())
                        .collect()
                })
                .collect(),
        }
    }

    pub fn build(&self, x: &ToricVariety, base: &str) -> Result<PresentedModule, InputError> {
        let classes = |list: &[Vec<i64>], key: &str| -> Result<FreeModule, InputError> {
            for (i, d) in list.iter().enumerate() {
                if d.len() != x.class_rank() {
                    return Err(InputError::new(format!("{base}/{key}/{i}"), format!("class must have {} coordinates", x.class_rank())));
                }
            }
            Ok(FreeModule::new(list.iter().cloned().map(DivisorClass).collect()))
        };
        let target = classes(&self.target, "target")?;
        let source = classes(&self.source, "source")?;
        if self.entries.len() != target.rank() {
            return Err(InputError::new(format!("{base}/entries"), format!("expected {} rows", target.rank())));
        }
        let mut entries = Vec::with_capacity(target.rank());
        for (i, row) in self.entries.iter().enumerate() {
            if row.len() != source.rank() {
                return Err(InputError::new(format!("{base}/entries/{i}"), format!("expected {} columns", source.rank())));
            }
            let mut out = Vec::with_capacity(row.len());
            for (j, terms) in row.iter().enumerate() {
                let mut p = CoxPolynomial::zero();
                for (k, t) in terms.iter().enumerate() {
                    let at = format!("{base}/entries/{i}/{j}/{k}");
                    if t.exponents.len() != x.num_rays() {
                        return Err(InputError::new(format!("{at}/exponents"), format!("expected {} exponents", x.num_rays())));
                    }
                    let c = t.coefficient.value().map_err(|m| InputError::new(format!("{at}/coefficient"), m))?;
                    p.add_term(c, t.exponents.clone());
                }
                out.push(p);
            }
            entries.push(out);
        }
        PresentedModule::new(x, target, source, entries).map_err(|e| InputError::at(&format!("{base}/entries"), e))
    }
}

/// Checks a divisor's length against the variety.
pub fn divisor(x: &ToricVariety, coeffs: Vec<i64>, pointer: &str) -> Result<TDivisor, InputError> {
    x.divisor(coeffs).map_err(|e| InputError::at(pointer, e))
}

/// Report on a variety: smoothness, completeness, class group and counts.
pub fn variety_report(x: &ToricVariety) -> Value {
    json!({
        "dim": x.dim(),
        "rays": x.num_rays(),
        "cones": x.max_cones().len(),
        "smooth": x.is_smooth(),
        "complete": x.is_complete(),
        "classRank": x.class_rank(),
        "classTorsion": x.class_torsion(),
    })
}
