//! Serialisable report sections. Groups and elements are rendered in their
//! normal-form text, so arbitrary-precision values survive as strings.

use std::collections::BTreeMap;

use boundaryk::ahss::{DualityReport, FiltrationLadder, JustificationEntry, JustificationLog};
use boundaryk::chain::ClauseCheck;
use boundaryk::crossed::{EmersonMeyerLadder, KpVerdict, Mode};
use boundaryk::fgab::FgAbGroup;
use serde::Serialize;

use crate::fixture::{Flags, SchemaError};

pub const REPORT_SCHEMA: &str = "boundaryk-report/1";

#[derive(Clone, Debug, Serialize)]
pub struct Report {
    pub schema: &'static str,
    pub command: String,
    pub coefficients: String,
    pub errors: Vec<FileError>,
    pub manifolds: Vec<ManifoldSection>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub classification: Option<ClassificationSection>,
}

impl Report {
    pub fn to_json(&self) -> String {
        let mut text = serde_json::to_string_pretty(self).expect("report serialises");
        text.push('\n');
        text
    }
}

/// A fixture that could not be read or parsed.
#[derive(Clone, Debug, Serialize)]
pub struct FileError {
    pub file: String,
    pub error: &'static str,
    #[serde(skip_serializing_if = "String::is_empty")]
    pub path: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub line: Option<usize>,
    pub message: String,
}

impl FileError {
    pub fn new(file: &str, e: &SchemaError) -> Self {
        FileError {
            file: file.to_string(),
            error: e.kind.name(),
            path: e.path.clone(),
            line: e.line,
            message: e.kind.to_string(),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Status {
    Ok,
    Refused,
    ValidationFailed,
}

#[derive(Clone, Debug, Serialize)]
pub struct ManifoldSection {
    pub name: String,
    pub file: String,
    pub mode: &'static str,
    pub flags: Flags,
    pub status: Status,
    pub complex: ComplexSection,
    pub validation: ValidationSection,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub homology: Option<HomologySection>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub k_theory: Option<KTheorySection>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub crossed: Option<CrossedSection>,
    pub refusals: Vec<Refusal>,
    pub assumptions: Vec<String>,
    #[serde(skip_serializing_if = "Evidence::is_empty")]
    pub evidence: Evidence,
}

#[derive(Clone, Debug, Serialize)]
pub struct ComplexSection {
    pub top_dim: usize,
    pub ranks: Vec<usize>,
    pub euler_characteristic: i64,
}

#[derive(Clone, Debug, Serialize)]
pub struct ValidationSection {
    pub passed: bool,
    pub digest: String,
    pub clauses: Vec<ClauseCheck>,
    /// `closed`/`orientable` flags the input leaves false. The checks are
    /// necessary conditions only, so the declaration is still required.
    pub undeclared: Vec<String>,
}

#[derive(Clone, Debug, Serialize)]
pub struct HomologySection {
    pub groups: Vec<String>,
    pub base_point: String,
    pub cohomology: Vec<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub field: Option<FieldDims>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub expected: Option<ExpectedCheck>,
}

#[derive(Clone, Debug, Serialize)]
pub struct FieldDims {
    pub field: String,
    pub dims: Vec<usize>,
}

#[derive(Clone, Debug, Serialize)]
pub struct ExpectedCheck {
    pub matches: bool,
    pub expected: Vec<String>,
}

#[derive(Clone, Debug, Serialize)]
pub struct KTheorySection {
    #[serde(rename = "K^0")]
    pub upper0: String,
    #[serde(rename = "K^1")]
    pub upper1: String,
    #[serde(rename = "K_0")]
    pub lower0: String,
    #[serde(rename = "K_0_point")]
    pub lower0_point: String,
    #[serde(rename = "K_1")]
    pub lower1: String,
    /// Only for inputs that passed validation.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub duality: Option<DualityReport>,
}

#[derive(Clone, Debug, Serialize)]
pub struct CrossedSection {
    pub mode: String,
    #[serde(rename = "K_0")]
    pub k0: String,
    pub unit: String,
    #[serde(rename = "K_1")]
    pub k1: String,
}

/// A computation that was not carried out, and why.
#[derive(Clone, Debug, Serialize)]
pub struct Refusal {
    pub stage: &'static str,
    pub error: &'static str,
    pub precondition: &'static str,
    pub message: String,
}

impl Refusal {
    pub fn new(stage: &'static str, e: &boundaryk::Error) -> Self {
        Refusal { stage, error: e.name(), precondition: e.precondition(), message: e.to_string() }
    }
}

#[derive(Clone, Debug, Default, Serialize)]
pub struct Evidence {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub ahss: Option<AhssEvidence>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub emerson_meyer: Option<EmersonMeyerView>,
}

impl Evidence {
    pub fn is_empty(&self) -> bool {
        self.ahss.is_none() && self.emerson_meyer.is_none()
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct AhssEvidence {
    pub log_entries: usize,
    pub rule_counts: BTreeMap<String, usize>,
    pub ladder: Vec<LadderView>,
    pub log: Vec<JustificationEntry>,
}

impl AhssEvidence {
    pub fn new(ladder: &FiltrationLadder, log: &JustificationLog) -> Self {
        AhssEvidence {
            log_entries: log.len(),
            rule_counts: log.rule_counts().into_iter().map(|(r, n)| (format!("{r:?}"), n)).collect(),
            ladder: ladder
                .degrees
                .iter()
                .map(|d| LadderView {
                    total_degree: d.total_degree,
                    vanishes_from: d.vanishes_from,
                    rungs: d
                        .rungs
                        .iter()
                        .map(|r| RungView {
                            filtration: r.filtration,
                            quotient: r.quotient.to_string(),
                            subgroup: r.subgroup.to_string(),
                            term: r.term.to_string(),
                            rule: format!("{:?}", r.rule),
                        })
                        .collect(),
                })
                .collect(),
            log: log.entries.clone(),
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct LadderView {
    pub total_degree: i32,
    pub vanishes_from: i32,
    pub rungs: Vec<RungView>,
}

#[derive(Clone, Debug, Serialize)]
pub struct RungView {
    pub filtration: i32,
    pub quotient: String,
    pub subgroup: String,
    pub term: String,
    pub rule: String,
}

#[derive(Clone, Debug, Serialize)]
pub struct EmersonMeyerView {
    pub sequences: Vec<SequenceView>,
    pub assembly: String,
    pub unit: String,
}

#[derive(Clone, Debug, Serialize)]
pub struct SequenceView {
    pub degree: u8,
    pub left: String,
    pub middle: String,
    pub right: String,
    pub splitting: String,
}

/// Normal-form text; in field mode groups stand for vector spaces and are
/// written `F^n`.
pub fn render_group(g: &FgAbGroup, mode: Mode) -> String {
    match mode {
        Mode::Integral => g.to_string(),
        Mode::FieldCoeff(f) => match g.free_rank() {
            0 => "0".into(),
            1 => f.to_string(),
            n => format!("{f}^{n}"),
        },
    }
}

impl EmersonMeyerView {
    pub fn new(l: &EmersonMeyerLadder, mode: Mode) -> Self {
        EmersonMeyerView {
            sequences: l
                .sequences
                .iter()
                .map(|s| SequenceView {
                    degree: s.degree,
                    left: render_group(&s.left, mode),
                    middle: render_group(&s.middle, mode),
                    right: render_group(&s.right, mode),
                    splitting: s.splitting.clone(),
                })
                .collect(),
            assembly: l.assembly.clone(),
            unit: l.unit.clone(),
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct ClassificationSection {
    pub mode: String,
    /// Names of the fixtures that produced invariants, in report order.
    pub members: Vec<String>,
    pub classes: Vec<Vec<String>>,
    /// `pairwise[i][j]` compares `members[i]` with `members[j]`.
    pub pairwise: Vec<Vec<KpVerdict>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub refusal: Option<Refusal>,
}
