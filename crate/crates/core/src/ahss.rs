//! Atiyah–Hirzebruch spectral sequence for complex K-theory of a complex of
//! dimension at most 3.
//!
//! This is a certifying calculator rather than a general differential
//! engine. In the window `p ∈ [0, dim]` every differential vanishes for one
//! of three structural reasons:
//!
//! - [`Rule::OddRowZero`]: source or target sits in an odd row, where
//!   `K^q(pt) = 0`.
//! - [`Rule::WindowExit`]: the target column lies beyond the top cohomological
//!   degree.
//! - [`Rule::RetractArgument`]: `d_3 : H^0 → H^3` commutes with the retraction
//!   `pt → M → pt`; with `H^0 ≅ Z ≅ H^3` it factors through `H^3(pt) = 0`.
//!
//! [`certify_degeneration`] checks each differential against these rules and
//! refuses if one is left over. [`assemble_k_groups`] then climbs the
//! filtration of `K^0` and `K^1` and splits each extension.

use std::collections::BTreeMap;
use std::fmt;

use serde::Serialize;

use crate::chain::{HomologyProfile, MAX_DIM};
use crate::error::{Error, Result};
use crate::fgab::{iso_check, DirectSum, FgAbGroup, PointedGroup};

/// Rows kept on a page. Two periods of Bott periodicity cover total degrees
/// 0 and 1 for every column in `[0, 3]`.
pub const Q_MIN: i32 = -4;
pub const Q_MAX: i32 = 2;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum PageIndex {
    Finite(u32),
    Infinity,
}

impl fmt::Display for PageIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PageIndex::Finite(i) => write!(f, "E_{i}"),
            PageIndex::Infinity => write!(f, "E_inf"),
        }
    }
}

/// Reason cited for a vanishing differential or a split extension.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub enum Rule {
    OddRowZero,
    WindowExit,
    RetractArgument,
    /// All differentials from page 2 on vanish, so `E_inf = E_2`.
    DegenerateAtPageTwo,
    /// The filtration quotient is zero, so the inclusion is an isomorphism.
    ZeroQuotient,
    /// The subgroup is zero, so the term equals its quotient.
    ZeroSubgroup,
    /// The quotient is free, so the sequence splits.
    FreeQuotient,
    /// `G^p = 0` past the last column.
    HausdorffFiltration,
}

impl Rule {
    pub fn basis(self) -> &'static str {
        match self {
            Rule::OddRowZero => "K^q(pt) = 0 for odd q",
            Rule::WindowExit => "H^p(M) = 0 for p above the dimension of M",
            Rule::RetractArgument => {
                "pt -> M -> pt is a retraction of spectral sequences; H^0(M) = Z = H^3(M) and H^3(pt) = 0 force d_3 = 0 on H^0(M)"
            }
            Rule::DegenerateAtPageTwo => "every differential d_i, i >= 2, vanishes",
            Rule::ZeroQuotient => "0 -> A -> B -> 0 -> 0 gives A = B",
            Rule::ZeroSubgroup => "0 -> 0 -> B -> C -> 0 gives B = C",
            Rule::FreeQuotient => "a short exact sequence with free quotient splits",
            Rule::HausdorffFiltration => "the filtration is Hausdorff and E_inf^{p,*} = 0 past the window",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub enum DifferentialStatus {
    StructurallyZero(Rule),
    Unknown,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub enum Subject {
    Differential {
        page: u32,
        source: (i32, i32),
        target: (i32, i32),
    },
    /// Every differential on pages `from_page` and later.
    TailPages {
        from_page: u32,
    },
    Limit,
    Extension {
        degree: i32,
        filtration: i32,
    },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct JustificationEntry {
    pub subject: Subject,
    pub claim: String,
    pub rule: Rule,
    pub basis: &'static str,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct JustificationLog {
    pub entries: Vec<JustificationEntry>,
}

impl JustificationLog {
    fn push(&mut self, subject: Subject, claim: String, rule: Rule) {
        self.entries.push(JustificationEntry { subject, claim, rule, basis: rule.basis() });
    }

    pub fn extend(&mut self, other: JustificationLog) {
        self.entries.extend(other.entries);
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// Number of entries citing each rule.
    pub fn rule_counts(&self) -> BTreeMap<Rule, usize> {
        let mut counts = BTreeMap::new();
        for e in &self.entries {
            *counts.entry(e.rule).or_insert(0) += 1;
        }
        counts
    }

    /// Entry justifying `d_page` out of `source`, if any.
    pub fn differential(&self, page: u32, source: (i32, i32)) -> Option<&JustificationEntry> {
        self.entries.iter().find(
            |e| matches!(e.subject, Subject::Differential { page: pg, source: s, .. } if pg == page && s == source),
        )
    }
}

/// One page of the spectral sequence over the finite window
/// `p ∈ [0, p_max]`, `q ∈ [Q_MIN, Q_MAX]`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SpectralPage {
    index: PageIndex,
    p_max: i32,
    entries: BTreeMap<(i32, i32), FgAbGroup>,
    differentials: BTreeMap<(i32, i32), DifferentialStatus>,
}

impl SpectralPage {
    pub fn index(&self) -> PageIndex {
        self.index
    }

    pub fn p_max(&self) -> i32 {
        self.p_max
    }

    pub fn window(&self) -> impl Iterator<Item = (i32, i32)> + '_ {
        (0..=self.p_max).flat_map(|p| (Q_MIN..=Q_MAX).map(move |q| (p, q)))
    }

    /// Entry at `(p, q)`; rows outside the stored window repeat with period 2.
    pub fn entry(&self, p: i32, q: i32) -> FgAbGroup {
        if p < 0 || p > self.p_max || q.rem_euclid(2) == 1 {
            return FgAbGroup::trivial();
        }
        let q = if (Q_MIN..=Q_MAX).contains(&q) { q } else { 0 };
        self.entries.get(&(p, q)).cloned().unwrap_or_default()
    }

    pub fn differential(&self, p: i32, q: i32) -> Option<&DifferentialStatus> {
        self.differentials.get(&(p, q))
    }

    /// Target of `d_i` leaving `(p, q)`.
    pub fn target(page: u32, p: i32, q: i32) -> (i32, i32) {
        let i = page as i32;
        (p + i, q - i + 1)
    }
}

/// `E_2^{p,q} = H^p(M; K^q(pt))`: `H^p` in even rows, zero in odd rows.
/// The window spans the given cohomology degrees.
pub fn second_page(coh: &[FgAbGroup]) -> SpectralPage {
    let p_max = coh.len() as i32 - 1;
    let mut entries = BTreeMap::new();
    let mut differentials = BTreeMap::new();
    for p in 0..=p_max {
        for q in Q_MIN..=Q_MAX {
            let e = if q.rem_euclid(2) == 0 { coh[p as usize].clone() } else { FgAbGroup::trivial() };
            entries.insert((p, q), e);
            differentials.insert((p, q), DifferentialStatus::Unknown);
        }
    }
    SpectralPage { index: PageIndex::Finite(2), p_max, entries, differentials }
}

fn vanishing_rule(page: &SpectralPage, i: u32, p: i32, q: i32) -> Result<Rule> {
    let (tp, tq) = SpectralPage::target(i, p, q);
    if q.rem_euclid(2) == 1 || tq.rem_euclid(2) == 1 {
        return Ok(Rule::OddRowZero);
    }
    if tp > page.p_max {
        return Ok(Rule::WindowExit);
    }
    if i == 3 && p == 0 && tp == MAX_DIM as i32 {
        let z = FgAbGroup::free(1);
        let (h0, h3) = (page.entry(0, q), page.entry(tp, tq));
        if h0 == z && h3 == z {
            return Ok(Rule::RetractArgument);
        }
        return Err(Error::DegenerationNotCertified(format!(
            "d_3^{{0,{q}}}: retraction needs H^0 = Z = H^3, found H^0 = {h0}, H^3 = {h3}"
        )));
    }
    Err(Error::DegenerationNotCertified(format!("d_{i}^{{{p},{q}}} -> ({tp},{tq})")))
}

/// Certifies that every differential from page 2 on vanishes and returns
/// `E_inf` (equal to `E_2`) with the log of rules applied.
pub fn certify_degeneration(page2: &SpectralPage) -> Result<(SpectralPage, JustificationLog)> {
    if page2.index != PageIndex::Finite(2) {
        return Err(Error::DegenerationNotCertified(format!("expected E_2, got {}", page2.index)));
    }
    let mut log = JustificationLog::default();
    // from this page on every target column exceeds p_max
    let last_page = (page2.p_max + 1).max(2) as u32;
    for i in 2..=last_page {
        for (p, q) in page2.window() {
            let rule = vanishing_rule(page2, i, p, q)?;
            let target = SpectralPage::target(i, p, q);
            log.push(
                Subject::Differential { page: i, source: (p, q), target },
                format!("d_{i}: E_{i}^{{{p},{q}}} -> E_{i}^{{{},{}}} is zero", target.0, target.1),
                rule,
            );
        }
    }
    log.push(
        Subject::TailPages { from_page: last_page + 1 },
        format!("d_i is zero for every i > {last_page}, all targets leave columns 0..{}", page2.p_max),
        Rule::WindowExit,
    );
    log.push(Subject::Limit, "E_inf = E_2 entrywise".into(), Rule::DegenerateAtPageTwo);

    // statuses on E_2 record the rule used for d_2
    let mut certified = page2.clone();
    for (p, q) in page2.window() {
        let rule = vanishing_rule(page2, 2, p, q)?;
        certified.differentials.insert((p, q), DifferentialStatus::StructurallyZero(rule));
    }
    let einf = SpectralPage {
        index: PageIndex::Infinity,
        p_max: page2.p_max,
        entries: certified.entries,
        differentials: certified.differentials,
    };
    Ok((einf, log))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Rung {
    /// `p` in `G^p A^n / G^{p+1} A^n = E_inf^{p, n-p}`.
    pub filtration: i32,
    pub quotient: FgAbGroup,
    pub subgroup: FgAbGroup,
    pub term: FgAbGroup,
    pub rule: Rule,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LadderDegree {
    pub total_degree: i32,
    /// `G^p A^n = 0` for `p >= vanishes_from`.
    pub vanishes_from: i32,
    /// Ordered from the top of the filtration (`p = 0`) down.
    pub rungs: Vec<Rung>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FiltrationLadder {
    pub degrees: Vec<LadderDegree>,
}

impl FiltrationLadder {
    pub fn justifications(&self) -> JustificationLog {
        let mut log = JustificationLog::default();
        for d in &self.degrees {
            let n = d.total_degree;
            log.push(
                Subject::Extension { degree: n, filtration: d.vanishes_from },
                format!("G^{}K^{n} = 0", d.vanishes_from),
                Rule::HausdorffFiltration,
            );
            for r in d.rungs.iter().rev() {
                let p = r.filtration;
                log.push(
                    Subject::Extension { degree: n, filtration: p },
                    format!(
                        "0 -> G^{}K^{n} = {} -> G^{p}K^{n} -> E_inf^{{{p},{}}} = {} -> 0 gives G^{p}K^{n} = {}",
                        p + 1,
                        r.subgroup,
                        n - p,
                        r.quotient,
                        r.term
                    ),
                    r.rule,
                );
            }
        }
        log
    }
}

fn split_rule(quotient: &FgAbGroup, subgroup: &FgAbGroup) -> Option<Rule> {
    if quotient.is_trivial() {
        Some(Rule::ZeroQuotient)
    } else if subgroup.is_trivial() {
        Some(Rule::ZeroSubgroup)
    } else if quotient.is_free() {
        Some(Rule::FreeQuotient)
    } else {
        None
    }
}

/// `K^0(M)` and `K^1(M)` from a certified `E_inf` page.
pub fn assemble_k_groups(einf: &SpectralPage) -> Result<(FgAbGroup, FgAbGroup, FiltrationLadder)> {
    if einf.index != PageIndex::Infinity {
        return Err(Error::DegenerationNotCertified(format!("{} is not a certified limit page", einf.index)));
    }
    let vanishes_from = einf.p_max + 1;
    let mut degrees = Vec::new();
    for n in [0, 1] {
        let mut below = FgAbGroup::trivial();
        let mut rungs = Vec::new();
        for p in (0..=einf.p_max).rev() {
            let quotient = einf.entry(p, n - p);
            let rule = split_rule(&quotient, &below).ok_or(Error::ExtensionUnresolved { degree: n, filtration: p })?;
            let term = DirectSum::new(&quotient, &below).into_group();
            rungs.push(Rung { filtration: p, quotient, subgroup: below, term: term.clone(), rule });
            below = term;
        }
        rungs.reverse();
        degrees.push(LadderDegree { total_degree: n, vanishes_from, rungs });
    }
    let k = |n: usize| degrees[n].rungs.first().map(|r| r.term.clone()).unwrap_or_default();
    let (k0, k1) = (k(0), k(1));
    Ok((k0, k1, FiltrationLadder { degrees }))
}

/// `K^0(M)`, `K^1(M)` with the audit trail that produced them.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct KTheory {
    pub k0: FgAbGroup,
    pub k1: FgAbGroup,
    pub ladder: FiltrationLadder,
    pub log: JustificationLog,
}

/// Runs `second_page`, `certify_degeneration` and `assemble_k_groups` in turn.
pub fn k_theory(coh: &[FgAbGroup]) -> Result<KTheory> {
    let page2 = second_page(coh);
    let (einf, mut log) = certify_degeneration(&page2)?;
    let (k0, k1, ladder) = assemble_k_groups(&einf)?;
    log.extend(ladder.justifications());
    Ok(KTheory { k0, k1, ladder, log })
}

/// `K_0(M) = H_0 ⊕ H_2` pointed by the vertex class, `K_1(M) = H_1 ⊕ H_3`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct KHomology {
    pub k0: PointedGroup,
    pub k1: FgAbGroup,
}

pub fn k_homology(profile: &HomologyProfile) -> KHomology {
    let h = &profile.h;
    let even = DirectSum::new(&h[0], &h[2]);
    let point = even.inject_left(&profile.base_point_class, &h[2]).expect("base point lies in H_0");
    let k0 = PointedGroup::new(even.into_group(), point).expect("injection lands in the sum");
    let k1 = DirectSum::new(&h[1], &h[3]).into_group();
    KHomology { k0, k1 }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DualityCheck {
    pub statement: String,
    pub passed: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DualityReport {
    pub checks: Vec<DualityCheck>,
}

impl DualityReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }
}

/// Checks `K^0 ≅ K_1` and `K^1 ≅ K_0`.
pub fn duality_crosscheck(coh_k: (&FgAbGroup, &FgAbGroup), hom_k: (&FgAbGroup, &FgAbGroup)) -> DualityReport {
    let (upper0, upper1) = coh_k;
    let (lower0, lower1) = hom_k;
    let checks = vec![
        DualityCheck { statement: format!("K^0 = {upper0} vs K_1 = {lower1}"), passed: iso_check(upper0, lower1) },
        DualityCheck { statement: format!("K^1 = {upper1} vs K_0 = {lower0}"), passed: iso_check(upper1, lower0) },
    ];
    DualityReport { checks }
}
