//! JSON documents for graphs, fibers, divisors and charts.
//!
//! Integers are accepted either as JSON numbers or as decimal strings (for
//! values beyond 64 bits) and emitted as numbers whenever they fit in an
//! `i64`. Rationals are emitted as `"a/b"` strings in lowest terms.

use std::fmt;
use std::fs;
use std::path::{Path, PathBuf};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::ToPrimitive;
use serde::de::{self, Visitor};
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use serde_json::Value;

use crate::divisors::HorizontalIncidence;
use crate::error::{Error, Result};
use crate::fiber::IntersectionData;
use crate::graphs::DualGraph;
use crate::linalg::IntMatrix;
use crate::modelkit::AffineChart;

/// An arbitrary-precision integer in a JSON document.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct JsonInt(pub BigInt);

impl Serialize for JsonInt {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self.0.to_i64() {
            Some(v) => s.serialize_i64(v),
            None => s.serialize_str(&self.0.to_string()),
        }
    }
}

impl<'de> Deserialize<'de> for JsonInt {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        struct IntVisitor;

        impl Visitor<'_> for IntVisitor {
            type Value = JsonInt;

            fn expecting(&self, f: &mut fmt::Formatter) -> fmt::Result {
                f.write_str("an integer or a decimal string")
            }

            fn visit_i64<E: de::Error>(self, v: i64) -> std::result::Result<JsonInt, E> {
                Ok(JsonInt(v.into()))
            }

            fn visit_u64<E: de::Error>(self, v: u64) -> std::result::Result<JsonInt, E> {
                Ok(JsonInt(v.into()))
            }

            fn visit_str<E: de::Error>(self, v: &str) -> std::result::Result<JsonInt, E> {
                v.trim()
                    .parse()
                    .map(JsonInt)
                    .map_err(|_| E::custom(format!("`{v}` is not an integer")))
            }
        }

        d.deserialize_any(IntVisitor)
    }
}

fn unwrap_ints(v: &[JsonInt]) -> Vec<BigInt> {
    v.iter().map(|x| x.0.clone()).collect()
}

fn wrap_ints(v: &[BigInt]) -> Vec<JsonInt> {
    v.iter().cloned().map(JsonInt).collect()
}

/// JSON value of an integer: a number when it fits in `i64`, else a string.
pub fn int_value(x: &BigInt) -> Value {
    serde_json::to_value(JsonInt(x.clone())).expect("integers serialize")
}

/// `"a/b"` in lowest terms with positive denominator, or `"a"` for integers.
pub fn rational_string(x: &BigRational) -> String {
    x.to_string()
}

pub fn rational_strings(xs: &[BigRational]) -> Vec<String> {
    xs.iter().map(rational_string).collect()
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GraphDoc {
    pub vertices: Vec<String>,
    /// Loops repeat the endpoint.
    pub edges: Vec<(String, String)>,
}

impl GraphDoc {
    pub fn to_graph(&self) -> Result<DualGraph> {
        DualGraph::new(&self.vertices, &self.edges)
    }

    pub fn from_graph(g: &DualGraph) -> Self {
        let names = g.vertices();
        GraphDoc {
            vertices: names.to_vec(),
            edges: g
                .edges()
                .iter()
                .map(|&(a, b)| (names[a].clone(), names[b].clone()))
                .collect(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FiberDoc {
    pub components: Vec<String>,
    pub multiplicities: Vec<JsonInt>,
    pub matrix: Vec<Vec<JsonInt>>,
}

impl FiberDoc {
    /// Builds the fiber and runs full validation.
    pub fn to_fiber(&self) -> Result<IntersectionData> {
        let rows: Vec<Vec<BigInt>> = self.matrix.iter().map(|r| unwrap_ints(r)).collect();
        let fiber = IntersectionData::new(
            self.components.clone(),
            unwrap_ints(&self.multiplicities),
            IntMatrix::from_rows(&rows)?,
        );
        fiber
            .validate()
            .map_err(|d| Error::InvalidFiber(d.to_string()))?;
        Ok(fiber)
    }

    pub fn from_fiber(f: &IntersectionData) -> Self {
        FiberDoc {
            components: f.labels.clone(),
            multiplicities: wrap_ints(&f.multiplicities),
            matrix: f.matrix.to_rows().iter().map(|r| wrap_ints(r)).collect(),
        }
    }
}

/// A fiber given inline or as a path relative to the referring document.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum FiberRef {
    Inline(FiberDoc),
    Path(String),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DivisorDoc {
    pub fiber: FiberRef,
    pub incidence: Vec<JsonInt>,
    /// Label of the component where the marked point reduces.
    pub base: String,
}

/// A divisor document with its fiber resolved.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LoadedDivisor {
    pub fiber: IntersectionData,
    pub incidence: HorizontalIncidence,
}

impl DivisorDoc {
    /// Resolves the fiber (file references relative to `dir`) and the base
    /// label.
    pub fn resolve(&self, dir: &Path) -> Result<LoadedDivisor> {
        let fiber = match &self.fiber {
            FiberRef::Inline(doc) => doc.to_fiber()?,
            FiberRef::Path(p) => read_fiber(&dir.join(p))?,
        };
        let base_index = fiber.index_of(&self.base).ok_or_else(|| {
            Error::InvalidInput(format!(
                "base component `{}` is not in the fiber",
                self.base
            ))
        })?;
        Ok(LoadedDivisor {
            incidence: HorizontalIncidence::new(unwrap_ints(&self.incidence), base_index),
            fiber,
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ChartDoc {
    pub variables: Vec<String>,
    pub equations: Vec<String>,
    pub prime: u64,
    #[serde(default = "default_expected_dim")]
    pub expected_dim: usize,
}

fn default_expected_dim() -> usize {
    2
}

impl ChartDoc {
    pub fn to_chart(&self) -> Result<AffineChart> {
        AffineChart::parse(
            &self.variables,
            &self.equations,
            self.prime,
            self.expected_dim,
        )
    }

    pub fn from_chart(c: &AffineChart) -> Self {
        ChartDoc {
            variables: c.variables().to_vec(),
            equations: c.equations().iter().map(ToString::to_string).collect(),
            prime: c.prime(),
            expected_dim: c.expected_dim(),
        }
    }
}

fn read_text(path: &Path) -> Result<String> {
    fs::read_to_string(path)
        .map_err(|e| Error::InvalidInput(format!("cannot read {}: {e}", path.display())))
}

/// Parses a JSON document, mapping serde failures to input errors.
pub fn parse_doc<T: for<'de> Deserialize<'de>>(text: &str, what: &str) -> Result<T> {
    serde_json::from_str(text).map_err(|e| Error::InvalidInput(format!("malformed {what}: {e}")))
}

pub fn read_graph(path: &Path) -> Result<DualGraph> {
    parse_doc::<GraphDoc>(&read_text(path)?, "graph document")?.to_graph()
}

pub fn read_fiber(path: &Path) -> Result<IntersectionData> {
    parse_doc::<FiberDoc>(&read_text(path)?, "fiber document")?.to_fiber()
}

pub fn read_divisor(path: &Path) -> Result<LoadedDivisor> {
    let doc: DivisorDoc = parse_doc(&read_text(path)?, "divisor document")?;
    let dir = path.parent().map_or_else(PathBuf::new, Path::to_path_buf);
    doc.resolve(&dir)
}

pub fn read_chart(path: &Path) -> Result<AffineChart> {
    parse_doc::<ChartDoc>(&read_text(path)?, "chart document")?.to_chart()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fiber_round_trip() {
        let text = r#"{"components":["G1","G2","G3"],"multiplicities":[1,1,1],
                       "matrix":[[-2,1,1],[1,-2,1],[1,1,-2]]}"#;
        let doc: FiberDoc = parse_doc(text, "fiber").unwrap();
        let fiber = doc.to_fiber().unwrap();
        assert_eq!(FiberDoc::from_fiber(&fiber), doc);
        let again: FiberDoc = serde_json::from_str(&serde_json::to_string(&doc).unwrap()).unwrap();
        assert_eq!(again, doc);
    }

    #[test]
    fn big_integers_as_strings() {
        let v: Vec<JsonInt> =
            serde_json::from_str(r#"[1, "123456789012345678901234567890"]"#).unwrap();
        assert_eq!(v[1].0.to_string(), "123456789012345678901234567890");
        assert_eq!(
            serde_json::to_string(&v).unwrap(),
            r#"[1,"123456789012345678901234567890"]"#
        );
        assert!(serde_json::from_str::<JsonInt>(r#""12a""#).is_err());
    }

    #[test]
    fn asymmetric_fiber_rejected() {
        let text = r#"{"components":["a","b"],"multiplicities":[1,1],"matrix":[[-1,1],[2,-2]]}"#;
        let doc: FiberDoc = parse_doc(text, "fiber").unwrap();
        assert!(matches!(doc.to_fiber(), Err(Error::InvalidFiber(_))));
    }

    #[test]
    fn unknown_fields_rejected() {
        assert!(parse_doc::<GraphDoc>(r#"{"vertices":[],"edges":[],"x":1}"#, "graph").is_err());
    }

    #[test]
    fn graph_doc_with_loop() {
        let doc: GraphDoc = parse_doc(
            r#"{"vertices":["G1","G2"],"edges":[["G1","G2"],["G2","G2"]]}"#,
            "graph",
        )
        .unwrap();
        let g = doc.to_graph().unwrap();
        assert_eq!(g.edges(), &[(0, 1), (1, 1)]);
        assert_eq!(GraphDoc::from_graph(&g), doc);
    }

    #[test]
    fn chart_doc_defaults() {
        let doc: ChartDoc = parse_doc(
            r#"{"variables":["x","y"],"equations":["y^2 - (x^6 - 26*x^3 + 25)"],"prime":5}"#,
            "chart",
        )
        .unwrap();
        let chart = doc.to_chart().unwrap();
        assert_eq!(chart.expected_dim(), 2);
        assert_eq!(
            ChartDoc::from_chart(&chart).equations,
            ["-x^6 + 26*x^3 + y^2 - 25"]
        );
    }

    #[test]
    fn divisor_resolves_inline_fiber_and_base() {
        let text = r#"{"fiber":{"components":["G1","G2","G3"],"multiplicities":[1,1,1],
                       "matrix":[[-2,1,1],[1,-2,1],[1,1,-2]]},
                       "incidence":[1,0,-1],"base":"G3"}"#;
        let doc: DivisorDoc = parse_doc(text, "divisor").unwrap();
        let loaded = doc.resolve(Path::new(".")).unwrap();
        assert_eq!(loaded.incidence.base_index, 2);
        let bad = DivisorDoc {
            base: "G9".into(),
            ..doc
        };
        assert!(bad.resolve(Path::new(".")).is_err());
    }

    #[test]
    fn rationals_print_in_lowest_terms() {
        let q = BigRational::new(BigInt::from(4), BigInt::from(-6));
        assert_eq!(rational_string(&q), "-2/3");
        assert_eq!(
            rational_string(&BigRational::from_integer(BigInt::from(0))),
            "0"
        );
    }
}
