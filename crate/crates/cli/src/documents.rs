//! JSON documents for polytopes and series.

use num_bigint::BigInt;
use num_rational::BigRational;
use serde::{Deserialize, Serialize};
use thiserror::Error;
use toric_mirror::lattice::{convex_hull, LatticeError, LatticePolytope, LatticeVector};
use toric_mirror::laurent::parse_expression_in;
use toric_mirror::periods::{PeriodSeries, SeriesKind};
use toric_mirror::ring::{Coefficient, IntegerPolynomial};

#[derive(Debug, Error)]
pub enum DocumentError {
    #[error("input is not valid UTF-8")]
    Utf8,
    #[error("parse error at line {line}, column {column}: {message}")]
    Parse { line: usize, column: usize, message: String },
    #[error("vertex rows must all have length 2 or all have length 3 (row {row} has length {len}, expected {expected})")]
    Dimension { row: usize, len: usize, expected: usize },
    #[error("bad coefficient {index} ({text:?})")]
    Coefficient { index: usize, text: String },
    #[error("series has {got} coefficients but order {order}")]
    Length { order: usize, got: usize },
    #[error("unknown series kind {0:?}")]
    Kind(String),
    #[error(transparent)]
    Lattice(#[from] LatticeError),
}

impl From<serde_json::Error> for DocumentError {
    fn from(e: serde_json::Error) -> Self {
        DocumentError::Parse { line: e.line(), column: e.column(), message: e.to_string() }
    }
}

/// `{"name": str, "vertices": [[int, ...], ...]}`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PolytopeDocument {
    pub name: String,
    pub vertices: Vec<Vec<i64>>,
}

impl PolytopeDocument {
    pub fn from_polytope(name: &str, p: &LatticePolytope) -> Self {
        let vertices = p.vertices().iter().map(|v| v.to_i64().expect("vertex fits in i64")).collect();
        Self { name: name.to_string(), vertices }
    }

    /// Checks that rows have a common length of 2 or 3.
    pub fn dimension(&self) -> Result<usize, DocumentError> {
        let expected = match self.vertices.first() {
            Some(r) if r.len() == 2 || r.len() == 3 => r.len(),
            Some(r) => return Err(DocumentError::Dimension { row: 0, len: r.len(), expected: 3 }),
            None => return Err(DocumentError::Lattice(LatticeError::EmptyInput)),
        };
        for (row, r) in self.vertices.iter().enumerate() {
            if r.len() != expected {
                return Err(DocumentError::Dimension { row, len: r.len(), expected });
            }
        }
        Ok(expected)
    }

    pub fn points(&self) -> Result<Vec<LatticeVector>, DocumentError> {
        self.dimension()?;
        Ok(self.vertices.iter().map(|r| LatticeVector::from_i64(r)).collect::<Result<_, _>>()?)
    }

    pub fn to_polytope(&self) -> Result<LatticePolytope, DocumentError> {
        Ok(convex_hull(&self.points()?)?)
    }
}

fn bytes_to_str(bytes: &[u8]) -> Result<&str, DocumentError> {
    std::str::from_utf8(bytes).map_err(|_| DocumentError::Utf8)
}

pub fn decode_polytope_document(bytes: &[u8]) -> Result<PolytopeDocument, DocumentError> {
    let doc: PolytopeDocument = serde_json::from_str(bytes_to_str(bytes)?)?;
    doc.dimension()?;
    Ok(doc)
}

/// The document together with the convex hull of its vertices.
pub fn decode_polytope(bytes: &[u8]) -> Result<(PolytopeDocument, LatticePolytope), DocumentError> {
    let doc = decode_polytope_document(bytes)?;
    let p = doc.to_polytope()?;
    Ok((doc, p))
}

/// Canonical formatting: one vertex row per line, trailing newline.
pub fn encode_polytope(doc: &PolytopeDocument) -> String {
    let rows: Vec<String> = doc
        .vertices
        .iter()
        .map(|r| format!("    [{}]", r.iter().map(i64::to_string).collect::<Vec<_>>().join(", ")))
        .collect();
    let name = serde_json::to_string(&doc.name).expect("string serializes");
    if rows.is_empty() {
        return format!("{{\n  \"name\": {name},\n  \"vertices\": []\n}}\n");
    }
    format!("{{\n  \"name\": {name},\n  \"vertices\": [\n{}\n  ]\n}}\n", rows.join(",\n"))
}

/// `{"kind": str, "order": int, "coefficients": [str, ...]}`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SeriesDocument {
    pub kind: String,
    pub order: usize,
    pub coefficients: Vec<String>,
}

/// Series values by coefficient ring.
#[derive(Debug, Clone, PartialEq)]
pub enum SeriesValues {
    Integer(PeriodSeries<BigInt>),
    Rational(PeriodSeries<BigRational>),
    Symbolic(PeriodSeries<IntegerPolynomial>),
}

impl SeriesValues {
    pub fn kind(&self) -> SeriesKind {
        match self {
            SeriesValues::Integer(s) => s.kind(),
            SeriesValues::Rational(s) => s.kind(),
            SeriesValues::Symbolic(s) => s.kind(),
        }
    }

    /// Rational view, unless the series is symbolic.
    pub fn to_rational(&self) -> Option<PeriodSeries<BigRational>> {
        match self {
            SeriesValues::Integer(s) => Some(s.to_rational()),
            SeriesValues::Rational(s) => Some(s.clone()),
            SeriesValues::Symbolic(_) => None,
        }
    }
}

fn strings<R: Coefficient>(s: &PeriodSeries<R>) -> SeriesDocument {
    SeriesDocument {
        kind: s.kind().name().to_string(),
        order: s.order(),
        coefficients: s.coefficients().iter().map(ToString::to_string).collect(),
    }
}

impl SeriesDocument {
    pub fn from_values(values: &SeriesValues) -> Self {
        match values {
            SeriesValues::Integer(s) => strings(s),
            SeriesValues::Rational(s) => strings(s),
            SeriesValues::Symbolic(s) => strings(s),
        }
    }

    /// Integers if every coefficient is one, else rationals, else
    /// polynomials in `a`.
    pub fn values(&self) -> Result<SeriesValues, DocumentError> {
        let kind = SeriesKind::from_name(&self.kind).ok_or_else(|| DocumentError::Kind(self.kind.clone()))?;
        if self.coefficients.len() != self.order + 1 {
            return Err(DocumentError::Length { order: self.order, got: self.coefficients.len() });
        }
        let bad = |index: usize| DocumentError::Coefficient { index, text: self.coefficients[index].clone() };
        if let Some(ints) = self.coefficients.iter().map(|c| c.parse::<BigInt>().ok()).collect::<Option<Vec<_>>>() {
            return Ok(SeriesValues::Integer(PeriodSeries::new(ints, kind)));
        }
        if let Some(q) = self.coefficients.iter().map(|c| c.parse::<BigRational>().ok()).collect::<Option<Vec<_>>>() {
            return Ok(SeriesValues::Rational(PeriodSeries::new(q, kind)));
        }
        let mut polys = Vec::with_capacity(self.coefficients.len());
        for (i, c) in self.coefficients.iter().enumerate() {
            let parsed = parse_expression_in(c, 2).map_err(|_| bad(i))?.into_parametric();
            if parsed.terms().any(|(m, _)| !m.is_one()) {
                return Err(bad(i));
            }
            polys.push(parsed.constant_term());
        }
        Ok(SeriesValues::Symbolic(PeriodSeries::new(polys, kind)))
    }
}

pub fn decode_series(bytes: &[u8]) -> Result<SeriesValues, DocumentError> {
    let doc: SeriesDocument = serde_json::from_str(bytes_to_str(bytes)?)?;
    doc.values()
}

/// Canonical formatting: pretty JSON with a trailing newline.
pub fn encode_series(doc: &SeriesDocument) -> String {
    let mut s = serde_json::to_string_pretty(doc).expect("document serializes");
    s.push('\n');
    s
}
