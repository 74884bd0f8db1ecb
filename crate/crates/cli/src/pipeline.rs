//! validate -> homology -> AHSS -> crossed product, for one fixture.

use boundaryk::ahss::{duality_crosscheck, k_homology, k_theory, KHomology, KTheory};
use boundaryk::chain::{
    cohomology, homology, homology_with_field, validate_closed_oriented_3mfld, HomologyProfile, ValidationReport,
};
use boundaryk::crossed::{crossed_product_k_field, crossed_product_k_integral, Hypotheses, Mode, PointedKInvariants};
use boundaryk::fgab::FieldSpec;
use boundaryk::Error;

use crate::fixture::ManifoldFixture;
use crate::report::{
    render_group, AhssEvidence, ComplexSection, CrossedSection, EmersonMeyerView, Evidence, ExpectedCheck, FieldDims,
    HomologySection, KTheorySection, ManifoldSection, Refusal, Status, ValidationSection,
};

/// How far along the pipeline to go.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum Stage {
    Validate,
    Homology,
    KTheory,
    Crossed,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Options {
    pub coefficients: Mode,
    pub stage: Stage,
}

/// Parses `z`, `q` or `f<p>` (case-insensitive).
pub fn parse_coefficients(s: &str) -> Result<Mode, String> {
    let lower = s.to_ascii_lowercase();
    match lower.as_str() {
        "z" => Ok(Mode::Integral),
        "q" => Ok(Mode::FieldCoeff(FieldSpec::Rationals)),
        _ => {
            let p: u64 = lower
                .strip_prefix('f')
                .and_then(|p| p.parse().ok())
                .ok_or_else(|| format!("expected z, q or f<p>, got {s:?}"))?;
            FieldSpec::prime(p).map(Mode::FieldCoeff).map_err(|e| e.to_string())
        }
    }
}

pub struct Outcome {
    pub section: ManifoldSection,
    /// Present when the crossed-product stage succeeded.
    pub invariants: Option<PointedKInvariants>,
}

struct Run<'a> {
    fixture: &'a ManifoldFixture,
    report: ValidationReport,
    section: ManifoldSection,
}

impl Run<'_> {
    fn refuse(&mut self, stage: &'static str, e: &Error) {
        let status = match e {
            Error::ValidationFailed(_) => Status::ValidationFailed,
            _ => Status::Refused,
        };
        self.section.status = self.section.status.max(status);
        self.section.refusals.push(Refusal::new(stage, e));
    }

    fn validated(&self) -> Result<(), Error> {
        let v = &self.section.validation;
        if !v.passed {
            return Err(Error::ValidationFailed(v.digest.clone()));
        }
        if !v.undeclared.is_empty() {
            return Err(Error::ValidationFailed(v.undeclared.join("; ")));
        }
        Ok(())
    }
}

pub fn run_pipeline(fixture: &ManifoldFixture, file: &str, options: Options) -> Outcome {
    let c = fixture.complex();
    let report = validate_closed_oriented_3mfld(c);
    let undeclared: Vec<String> = [("closed", fixture.flags.closed), ("orientable", fixture.flags.orientable)]
        .into_iter()
        .filter(|&(_, declared)| !declared)
        .map(|(flag, _)| format!("input does not declare M {flag}"))
        .collect();

    let mut run = Run {
        fixture,
        report: report.clone(),
        section: ManifoldSection {
            name: fixture.name.clone(),
            file: file.to_string(),
            mode: fixture.payload.mode(),
            flags: fixture.flags,
            status: Status::Ok,
            complex: ComplexSection {
                top_dim: c.top_dim(),
                ranks: c.ranks().to_vec(),
                euler_characteristic: c.euler_characteristic(),
            },
            validation: ValidationSection {
                passed: report.passed(),
                digest: report.digest(),
                clauses: report.clauses.clone(),
                undeclared,
            },
            homology: None,
            k_theory: None,
            crossed: None,
            refusals: Vec::new(),
            assumptions: Vec::new(),
            evidence: Evidence::default(),
        },
    };

    if options.stage == Stage::Validate {
        if let Err(e) = run.validated() {
            run.refuse("validate", &e);
        }
        return Outcome { section: run.section, invariants: None };
    }

    let profile = homology(c);
    let coh = cohomology(c);
    homology_stage(&mut run, &profile, &coh, options.coefficients);
    if options.stage == Stage::Homology {
        return Outcome { section: run.section, invariants: None };
    }

    let (kt, kh) = match k_theory(&coh) {
        Ok(kt) => {
            let kh = k_homology(&profile);
            k_theory_stage(&mut run, &kt, &kh);
            (kt, kh)
        }
        Err(e) => {
            run.refuse("ktheory", &e);
            return Outcome { section: run.section, invariants: None };
        }
    };
    if options.stage == Stage::KTheory {
        return Outcome { section: run.section, invariants: None };
    }

    let invariants = crossed_stage(&mut run, &profile, &kt, &kh, options.coefficients);
    Outcome { section: run.section, invariants }
}

fn homology_stage(run: &mut Run<'_>, profile: &HomologyProfile, coh: &[boundaryk::fgab::FgAbGroup], mode: Mode) {
    let field = match mode {
        Mode::Integral => None,
        Mode::FieldCoeff(f) => {
            Some(FieldDims { field: f.to_string(), dims: homology_with_field(run.fixture.complex(), f) })
        }
    };
    let expected = run.fixture.expected_homology.as_ref().map(|exp| ExpectedCheck {
        matches: *exp == profile.h,
        expected: exp.iter().map(ToString::to_string).collect(),
    });
    if let Some(check) = &expected {
        if !check.matches {
            run.section.status = run.section.status.max(Status::ValidationFailed);
        }
    }
    run.section.homology = Some(HomologySection {
        groups: profile.h.iter().map(ToString::to_string).collect(),
        base_point: profile.base_point_class.to_string(),
        cohomology: coh.iter().map(ToString::to_string).collect(),
        field,
        expected,
    });
}

fn k_theory_stage(run: &mut Run<'_>, kt: &KTheory, kh: &KHomology) {
    let duality = run.validated().ok().map(|()| duality_crosscheck((&kt.k0, &kt.k1), (kh.k0.group(), &kh.k1)));
    if duality.as_ref().is_some_and(|d| !d.passed()) {
        run.section.status = run.section.status.max(Status::ValidationFailed);
    }
    run.section.k_theory = Some(KTheorySection {
        upper0: kt.k0.to_string(),
        upper1: kt.k1.to_string(),
        lower0: kh.k0.group().to_string(),
        lower0_point: kh.k0.point().to_string(),
        lower1: kh.k1.to_string(),
        duality,
    });
    run.section.assumptions.extend([
        "K^*(M) from the Atiyah-Hirzebruch spectral sequence; E_inf and the extensions certified by the evidence log"
            .to_string(),
        "K_0(M) = H_0 ⊕ H_2 and K_1(M) = H_1 ⊕ H_3 for complexes of dimension at most 3".to_string(),
    ]);
    run.section.evidence.ahss = Some(AhssEvidence::new(&kt.ladder, &kt.log));
}

fn crossed_stage(
    run: &mut Run<'_>,
    profile: &HomologyProfile,
    kt: &KTheory,
    kh: &KHomology,
    mode: Mode,
) -> Option<PointedKInvariants> {
    if let Err(e) = run.validated() {
        run.refuse("crossed", &e);
        return None;
    }
    let hypotheses = Hypotheses { hyperbolic: run.fixture.flags.hyperbolic, validation: &run.report };
    let result = match mode {
        Mode::Integral => crossed_product_k_integral(kh, kt, profile, hypotheses),
        Mode::FieldCoeff(f) => crossed_product_k_field(profile, f, hypotheses),
    };
    match result {
        Ok(inv) => {
            run.section.crossed = Some(CrossedSection {
                mode: inv.mode.to_string(),
                k0: render_group(inv.k0.group(), inv.mode),
                unit: inv.k0.point().to_string(),
                k1: render_group(&inv.k1, inv.mode),
            });
            run.section.assumptions.extend(inv.assumptions.iter().cloned());
            run.section.evidence.emerson_meyer = Some(EmersonMeyerView::new(&inv.ladder, inv.mode));
            Some(inv)
        }
        Err(e) => {
            run.refuse("crossed", &e);
            None
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn coefficient_syntax() {
        assert_eq!(parse_coefficients("z").unwrap(), Mode::Integral);
        assert_eq!(parse_coefficients("Q").unwrap(), Mode::FieldCoeff(FieldSpec::Rationals));
        assert_eq!(parse_coefficients("f5").unwrap(), Mode::FieldCoeff(FieldSpec::prime(5).unwrap()));
        assert!(parse_coefficients("f6").unwrap_err().contains("not a prime"));
        assert!(parse_coefficients("r").is_err());
        assert!(parse_coefficients("f").is_err());
    }
}
