//! The JSON fixture format.
//!
//! ```json
//! {
//!   "schema": "boundaryk-fixture/1",
//!   "name": "three-torus",
//!   "mode": "matrices",
//!   "flags": { "closed": true, "orientable": true, "hyperbolic": false },
//!   "ranks": [1, 3, 3, 1],
//!   "boundaries": [[["0", "0", "0"]], ...],
//!   "expected": { "homology": ["Z", "Z^3", "Z^3", "Z"] }
//! }
//! ```
//!
//! Simplices mode replaces `ranks`/`boundaries` by `"simplices"`, one list of
//! increasing vertex tuples per degree. Matrix entries are decimal strings;
//! `boundaries[n-1]` is `d_n` as a list of `ranks[n-1]` rows.

use std::fmt;

use boundaryk::chain::ChainComplexData;
use boundaryk::fgab::FgAbGroup;
use boundaryk::intlin::IntMatrix;
use num_bigint::BigInt;
use serde::{Deserialize, Serialize};

pub const FIXTURE_SCHEMA: &str = "boundaryk-fixture/1";

/// Hypotheses declared by the author of a fixture. The crossed-product stage
/// needs all three; `closed` and `orientable` must also survive the
/// homological checks, `hyperbolic` is taken on trust.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Flags {
    pub closed: bool,
    pub orientable: bool,
    pub hyperbolic: bool,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Payload {
    Simplices(Vec<Vec<Vec<u32>>>),
    Matrices { ranks: Vec<usize>, boundaries: Vec<IntMatrix> },
}

impl Payload {
    pub fn mode(&self) -> &'static str {
        match self {
            Payload::Simplices(_) => "simplices",
            Payload::Matrices { .. } => "matrices",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ManifoldFixture {
    pub name: String,
    pub flags: Flags,
    pub payload: Payload,
    /// Homology in degrees 0..=3 for regression checks.
    pub expected_homology: Option<Vec<FgAbGroup>>,
    complex: ChainComplexData,
}

impl ManifoldFixture {
    pub fn complex(&self) -> &ChainComplexData {
        &self.complex
    }

    /// Renders the fixture in the schema accepted by [`parse_fixture`].
    pub fn to_json(&self) -> String {
        let (simplices, ranks, boundaries) = match &self.payload {
            Payload::Simplices(s) => (Some(s.clone()), None, None),
            Payload::Matrices { ranks, boundaries } => {
                let rows = boundaries
                    .iter()
                    .map(|m| (0..m.rows()).map(|i| m.row(i).iter().map(BigInt::to_string).collect()).collect())
                    .collect();
                (None, Some(ranks.clone()), Some(rows))
            }
        };
        let wire = Wire {
            schema: FIXTURE_SCHEMA.into(),
            name: self.name.clone(),
            mode: match self.payload {
                Payload::Simplices(_) => WireMode::Simplices,
                Payload::Matrices { .. } => WireMode::Matrices,
            },
            flags: self.flags,
            simplices,
            ranks,
            boundaries,
            expected: self
                .expected_homology
                .as_ref()
                .map(|h| WireExpected { homology: Some(h.iter().map(ToString::to_string).collect()) }),
        };
        let mut text = serde_json::to_string_pretty(&wire).expect("fixture serialises");
        text.push('\n');
        text
    }
}

#[derive(Clone, Copy, Debug, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
enum WireMode {
    Simplices,
    Matrices,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct WireExpected {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    homology: Option<Vec<String>>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct Wire {
    schema: String,
    name: String,
    mode: WireMode,
    flags: Flags,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    simplices: Option<Vec<Vec<Vec<u32>>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    ranks: Option<Vec<usize>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    boundaries: Option<Vec<Vec<Vec<String>>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    expected: Option<WireExpected>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SchemaErrorKind {
    /// Not JSON, or JSON of the wrong shape.
    Syntax(String),
    UnsupportedSchema(String),
    EmptyName,
    /// A field required by the mode is absent, or one of the other mode is present.
    ModeFields(String),
    Integer(String),
    Group(String),
    /// Rejected while building the chain complex.
    Complex(boundaryk::Error),
    /// Two fixtures of a corpus share a name.
    DuplicateName(String),
    Io(String),
}

impl SchemaErrorKind {
    pub fn name(&self) -> &'static str {
        match self {
            SchemaErrorKind::Syntax(_) => "Syntax",
            SchemaErrorKind::UnsupportedSchema(_) => "UnsupportedSchema",
            SchemaErrorKind::EmptyName => "EmptyName",
            SchemaErrorKind::ModeFields(_) => "ModeFields",
            SchemaErrorKind::Integer(_) => "Integer",
            SchemaErrorKind::Group(_) => "Group",
            SchemaErrorKind::Complex(e) => e.name(),
            SchemaErrorKind::DuplicateName(_) => "DuplicateName",
            SchemaErrorKind::Io(_) => "Io",
        }
    }
}

impl fmt::Display for SchemaErrorKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SchemaErrorKind::Syntax(m) | SchemaErrorKind::ModeFields(m) | SchemaErrorKind::Integer(m) => f.write_str(m),
            SchemaErrorKind::Group(m) | SchemaErrorKind::Io(m) => f.write_str(m),
            SchemaErrorKind::UnsupportedSchema(s) => write!(f, "unsupported schema {s:?}, expected {FIXTURE_SCHEMA:?}"),
            SchemaErrorKind::EmptyName => f.write_str("name must not be empty"),
            SchemaErrorKind::Complex(e) => write!(f, "{e}"),
            SchemaErrorKind::DuplicateName(other) => write!(f, "name already used by {other}"),
        }
    }
}

/// A rejected fixture: what went wrong and where.
#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub struct SchemaError {
    /// Field path such as `boundaries[1][0][2]`; empty for whole-document errors.
    pub path: String,
    pub line: Option<usize>,
    pub kind: SchemaErrorKind,
}

impl fmt::Display for SchemaError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.kind.name())?;
        match (self.path.as_str(), self.line) {
            ("", Some(line)) => write!(f, " at line {line}")?,
            ("", None) => {}
            (path, Some(line)) => write!(f, " at {path} (line {line})")?,
            (path, None) => write!(f, " at {path}")?,
        }
        write!(f, ": {}", self.kind)
    }
}

impl SchemaError {
    fn at(path: impl Into<String>, kind: SchemaErrorKind) -> Self {
        SchemaError { path: path.into(), line: None, kind }
    }

    pub fn io(err: &std::io::Error) -> Self {
        SchemaError::at("", SchemaErrorKind::Io(err.to_string()))
    }
}

fn boundary_path(lower: usize, upper: usize) -> String {
    format!("boundaries[{}..={}]", lower - 1, upper - 1)
}

pub fn parse_fixture(text: &str) -> Result<ManifoldFixture, SchemaError> {
    let de = &mut serde_json::Deserializer::from_str(text);
    let wire: Wire = serde_path_to_error::deserialize(de).map_err(|e| {
        let path = e.path().to_string();
        let inner = e.into_inner();
        SchemaError {
            path: if path == "." { String::new() } else { path },
            line: Some(inner.line()),
            kind: SchemaErrorKind::Syntax(inner.to_string()),
        }
    })?;

    if wire.schema != FIXTURE_SCHEMA {
        return Err(SchemaError::at("schema", SchemaErrorKind::UnsupportedSchema(wire.schema)));
    }
    if wire.name.trim().is_empty() {
        return Err(SchemaError::at("name", SchemaErrorKind::EmptyName));
    }

    let payload = match wire.mode {
        WireMode::Simplices => {
            for (field, present) in [("ranks", wire.ranks.is_some()), ("boundaries", wire.boundaries.is_some())] {
                if present {
                    return Err(SchemaError::at(
                        field,
                        SchemaErrorKind::ModeFields(format!("{field} is not allowed in simplices mode")),
                    ));
                }
            }
            let simplices = wire.simplices.ok_or_else(|| {
                SchemaError::at("simplices", SchemaErrorKind::ModeFields("simplices mode needs simplices".into()))
            })?;
            Payload::Simplices(simplices)
        }
        WireMode::Matrices => {
            if wire.simplices.is_some() {
                return Err(SchemaError::at(
                    "simplices",
                    SchemaErrorKind::ModeFields("simplices is not allowed in matrices mode".into()),
                ));
            }
            let missing = |f: &str| SchemaError::at(f, SchemaErrorKind::ModeFields(format!("matrices mode needs {f}")));
            let ranks = wire.ranks.ok_or_else(|| missing("ranks"))?;
            let rows = wire.boundaries.ok_or_else(|| missing("boundaries"))?;
            let boundaries = parse_boundaries(&ranks, rows)?;
            Payload::Matrices { ranks, boundaries }
        }
    };

    let complex = match &payload {
        Payload::Simplices(s) => ChainComplexData::from_simplicial(s),
        Payload::Matrices { ranks, boundaries } => ChainComplexData::from_matrices(ranks.clone(), boundaries.clone()),
    }
    .map_err(|e| {
        let path = match (&e, &payload) {
            (boundaryk::Error::BoundarySquare { lower, upper }, _) => boundary_path(*lower, *upper),
            (boundaryk::Error::DimensionMismatch { degree, .. }, _) => format!("boundaries[{}]", degree - 1),
            (_, Payload::Simplices(_)) => "simplices".into(),
            (_, Payload::Matrices { .. }) => "ranks".into(),
        };
        SchemaError::at(path, SchemaErrorKind::Complex(e))
    })?;

    let expected_homology = match wire.expected.and_then(|e| e.homology) {
        None => None,
        Some(list) => {
            if list.len() != 4 {
                return Err(SchemaError::at(
                    "expected.homology",
                    SchemaErrorKind::Group(format!("expected 4 groups (degrees 0..=3), found {}", list.len())),
                ));
            }
            let groups = list
                .iter()
                .enumerate()
                .map(|(i, s)| {
                    s.parse::<FgAbGroup>().map_err(|e| {
                        SchemaError::at(format!("expected.homology[{i}]"), SchemaErrorKind::Group(e.to_string()))
                    })
                })
                .collect::<Result<Vec<_>, _>>()?;
            Some(groups)
        }
    };

    Ok(ManifoldFixture { name: wire.name, flags: wire.flags, payload, expected_homology, complex })
}

fn parse_boundaries(ranks: &[usize], rows: Vec<Vec<Vec<String>>>) -> Result<Vec<IntMatrix>, SchemaError> {
    rows.into_iter()
        .enumerate()
        .map(|(n, matrix)| {
            // shape comes from the ranks so that empty matrices are unambiguous
            let cols = ranks.get(n + 1).copied().unwrap_or(0);
            let mut entries = Vec::with_capacity(matrix.len() * cols);
            for (i, row) in matrix.iter().enumerate() {
                if row.len() != cols {
                    let e = boundaryk::Error::DimensionMismatch {
                        degree: n + 1,
                        rows: matrix.len(),
                        cols: row.len(),
                        expected_rows: ranks.get(n).copied().unwrap_or(0),
                        expected_cols: cols,
                    };
                    return Err(SchemaError::at(format!("boundaries[{n}][{i}]"), SchemaErrorKind::Complex(e)));
                }
                for (j, s) in row.iter().enumerate() {
                    let x = parse_decimal(s).ok_or_else(|| {
                        SchemaError::at(
                            format!("boundaries[{n}][{i}][{j}]"),
                            SchemaErrorKind::Integer(format!("{s:?} is not a decimal integer")),
                        )
                    })?;
                    entries.push(x);
                }
            }
            IntMatrix::from_entries(matrix.len(), cols, entries)
                .map_err(|e| SchemaError::at(format!("boundaries[{n}]"), SchemaErrorKind::Complex(e)))
        })
        .collect()
}

/// Optional sign followed by ASCII digits; nothing else.
fn parse_decimal(s: &str) -> Option<BigInt> {
    let digits = s.strip_prefix('-').unwrap_or(s);
    if digits.is_empty() || !digits.bytes().all(|b| b.is_ascii_digit()) {
        return None;
    }
    s.parse().ok()
}
