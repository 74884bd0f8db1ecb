//! Runs a subcommand over a set of fixture files and assembles the report.

use std::collections::BTreeMap;
use std::fs;
use std::io;
use std::path::{Path, PathBuf};

use boundaryk::crossed::{classify_corpus, pairwise_verdicts, Mode};
use rayon::prelude::*;

use crate::fixture::{parse_fixture, ManifoldFixture, SchemaError, SchemaErrorKind};
use crate::pipeline::{run_pipeline, Options, Outcome, Stage};
use crate::report::{ClassificationSection, FileError, Refusal, Report, Status, REPORT_SCHEMA};

pub const THREADS_VAR: &str = "BOUNDARYK_THREADS";

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Command {
    Validate,
    Homology,
    KTheory,
    Crossed,
    Classify,
}

impl Command {
    pub fn name(self) -> &'static str {
        match self {
            Command::Validate => "validate",
            Command::Homology => "homology",
            Command::KTheory => "ktheory",
            Command::Crossed => "crossed",
            Command::Classify => "classify",
        }
    }

    fn stage(self) -> Stage {
        match self {
            Command::Validate => Stage::Validate,
            Command::Homology => Stage::Homology,
            Command::KTheory => Stage::KTheory,
            Command::Crossed | Command::Classify => Stage::Crossed,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Config {
    pub command: Command,
    pub coefficients: Mode,
    pub keep_going: bool,
    /// Worker threads; `None` lets rayon decide.
    pub threads: Option<usize>,
}

pub mod exit {
    pub const OK: i32 = 0;
    pub const IO: i32 = 1;
    pub const SCHEMA: i32 = 2;
    pub const VALIDATION: i32 = 3;
    pub const REFUSED: i32 = 4;
}

pub struct Execution {
    pub report: Report,
    pub exit_code: i32,
    /// One line per failed fixture, for stderr.
    pub diagnostics: Vec<String>,
}

/// Reads `BOUNDARYK_THREADS`; unset, empty, zero or unparsable means no bound.
pub fn threads_from_env() -> Option<usize> {
    std::env::var(THREADS_VAR).ok().and_then(|v| v.trim().parse().ok()).filter(|&n| n > 0)
}

/// Files named on the command line, with directories expanded to their
/// `*.json` entries in name order.
pub fn collect_inputs(paths: &[PathBuf]) -> io::Result<Vec<PathBuf>> {
    let mut files = Vec::new();
    for p in paths {
        if p.is_dir() {
            let mut entries: Vec<PathBuf> = fs::read_dir(p)?.map(|e| e.map(|e| e.path())).collect::<io::Result<_>>()?;
            entries.retain(|e| e.is_file() && e.extension().is_some_and(|x| x == "json"));
            entries.sort();
            files.extend(entries);
        } else {
            files.push(p.clone());
        }
    }
    Ok(files)
}

fn load(path: &Path) -> Result<ManifoldFixture, SchemaError> {
    let text = fs::read_to_string(path).map_err(|e| SchemaError::io(&e))?;
    parse_fixture(&text)
}

type Loaded = (String, Result<(ManifoldFixture, Outcome), SchemaError>);

pub fn execute(config: Config, files: &[PathBuf]) -> Execution {
    let options = Options { coefficients: config.coefficients, stage: config.command.stage() };
    let work = || -> Vec<Loaded> {
        files
            .par_iter()
            .map(|path| {
                let file = path.display().to_string();
                let result = load(path).map(|fx| {
                    let outcome = run_pipeline(&fx, &file, options);
                    (fx, outcome)
                });
                (file, result)
            })
            .collect()
    };
    let results = match config.threads {
        Some(n) => match rayon::ThreadPoolBuilder::new().num_threads(n).build() {
            Ok(pool) => pool.install(work),
            Err(_) => work(),
        },
        None => work(),
    };

    let mut errors = Vec::new();
    let mut outcomes: Vec<Outcome> = Vec::new();
    let mut by_name: BTreeMap<String, String> = BTreeMap::new();
    for (file, result) in results {
        match result {
            Ok((fx, outcome)) => {
                if let Some(first) = by_name.get(&fx.name) {
                    let e = SchemaError {
                        path: "name".into(),
                        line: None,
                        kind: SchemaErrorKind::DuplicateName(first.clone()),
                    };
                    errors.push(FileError::new(&file, &e));
                    continue;
                }
                by_name.insert(fx.name.clone(), file);
                outcomes.push(outcome);
            }
            Err(e) => errors.push(FileError::new(&file, &e)),
        }
    }
    outcomes.sort_by(|a, b| a.section.name.cmp(&b.section.name));

    let mut diagnostics: Vec<String> =
        errors.iter().map(|e| format!("{}: {} {}", e.file, e.error, e.message)).collect();
    let mut worst = errors.iter().map(|e| if e.error == "Io" { exit::IO } else { exit::SCHEMA }).min();
    for o in &outcomes {
        let code = match o.section.status {
            Status::Ok => continue,
            Status::ValidationFailed => exit::VALIDATION,
            Status::Refused => exit::REFUSED,
        };
        worst = Some(worst.map_or(code, |w: i32| w.min(code)));
        let reasons: Vec<String> =
            o.section.refusals.iter().map(|r| format!("{} ({})", r.error, r.precondition)).collect();
        let reasons = if reasons.is_empty() {
            "expected homology or duality check failed".to_string()
        } else {
            reasons.join(", ")
        };
        diagnostics.push(format!("{}: {}: {}", o.section.file, o.section.name, reasons));
    }

    let classification = (config.command == Command::Classify).then(|| classify(&outcomes, config.coefficients));
    if let Some(refusal) = classification.as_ref().and_then(|c| c.refusal.as_ref()) {
        worst = Some(worst.map_or(exit::REFUSED, |w| w.min(exit::REFUSED)));
        diagnostics.push(format!("classification: {} ({})", refusal.error, refusal.precondition));
    }

    let report = Report {
        schema: REPORT_SCHEMA,
        command: config.command.name().into(),
        coefficients: config.coefficients.to_string(),
        errors,
        manifolds: outcomes.into_iter().map(|o| o.section).collect(),
        classification,
    };
    let exit_code = if config.keep_going { exit::OK } else { worst.unwrap_or(exit::OK) };
    Execution { report, exit_code, diagnostics }
}

fn classify(outcomes: &[Outcome], mode: Mode) -> ClassificationSection {
    let members: Vec<(&str, &boundaryk::crossed::PointedKInvariants)> =
        outcomes.iter().filter_map(|o| o.invariants.as_ref().map(|inv| (o.section.name.as_str(), inv))).collect();
    let invariants: Vec<_> = members.iter().map(|(_, inv)| (*inv).clone()).collect();
    let names: Vec<String> = members.iter().map(|(n, _)| n.to_string()).collect();
    let (classes, refusal) = match classify_corpus(&invariants) {
        Ok(classes) => (classes.into_iter().map(|c| c.into_iter().map(|i| names[i].clone()).collect()).collect(), None),
        Err(e) => (Vec::new(), Some(Refusal::new("classify", &e))),
    };
    ClassificationSection {
        mode: mode.to_string(),
        pairwise: pairwise_verdicts(&invariants),
        members: names,
        classes,
        refusal,
    }
}
