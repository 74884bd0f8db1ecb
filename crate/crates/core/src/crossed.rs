//! Pointed K-theory of the boundary crossed product `C(∂G) ⋊_r G` and its
//! Kirchberg–Phillips comparison.
//!
//! The crossed product sits in two short exact sequences
//!
//! ```text
//! 0 -> K_0(C*_r G) -> K_0(C(∂G) ⋊ G) -> K^1(M) -> 0
//! 0 -> K_1(C*_r G) -> K_1(C(∂G) ⋊ G) -> K^0(M) -> 0
//! ```
//!
//! whose left terms are rewritten as `K_*(M)` through the Baum–Connes
//! assembly isomorphism. Nothing about `C*_r G` is computed; the rewrite is
//! recorded in the ladder. The unit class is tracked as the vertex class of
//! `K_0(M)` pushed into the first summand.

use std::fmt;

use num_bigint::BigInt;
use num_traits::One;
use serde::Serialize;

use crate::ahss::{KHomology, KTheory};
use crate::chain::{HomologyProfile, ValidationReport};
use crate::error::{Error, Result};
use crate::fgab::{
    iso_check, pointed_iso_check, tensor_with_field, tor_with_field, DirectSum, FgAbGroup, FieldSpec, GroupElement,
    PointedGroup, PointedVerdict,
};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Mode {
    Integral,
    FieldCoeff(FieldSpec),
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Mode::Integral => write!(f, "Z"),
            Mode::FieldCoeff(field) => write!(f, "{field}"),
        }
    }
}

/// Hypotheses the caller vouches for, plus the homological checks already run.
#[derive(Clone, Copy, Debug)]
pub struct Hypotheses<'a> {
    /// Declared by the input; never verified.
    pub hyperbolic: bool,
    pub validation: &'a ValidationReport,
}

impl Hypotheses<'_> {
    fn check(&self) -> Result<Vec<String>> {
        if !self.validation.passed() {
            return Err(Error::ValidationFailed(self.validation.digest()));
        }
        if !self.hyperbolic {
            return Err(Error::HyperbolicityNotDeclared);
        }
        Ok(vec![
            "M is hyperbolic (declared by the input, not verified)".into(),
            format!("M passes the closed connected orientable 3-manifold checks ({})", self.validation.digest()),
            "M is a finite model for BG, G = pi_1(M) torsion-free hyperbolic with boundary S^2".into(),
            "G satisfies the Baum-Connes conjecture with coefficients".into(),
            "C(dG) x| G is a unital UCT Kirchberg algebra, classified by (K_0, [1], K_1)".into(),
        ])
    }
}

/// One of the two short exact sequences `0 -> left -> middle -> right -> 0`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EmSequence {
    pub degree: u8,
    /// `K_n(C*_r G)`, populated as `K_n(M)`.
    pub left: FgAbGroup,
    pub middle: FgAbGroup,
    /// `K^{1-n}(M)`.
    pub right: FgAbGroup,
    pub splitting: String,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EmersonMeyerLadder {
    pub sequences: Vec<EmSequence>,
    pub assembly: String,
    pub unit: String,
}

/// The classification triple `(K_0, [1], K_1)`. In field mode the groups
/// are free of rank equal to the vector-space dimension.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PointedKInvariants {
    pub k0: PointedGroup,
    pub k1: FgAbGroup,
    pub mode: Mode,
    pub assumptions: Vec<String>,
    pub ladder: EmersonMeyerLadder,
}

fn unit_vector(dim: usize) -> GroupElement {
    let mut coords = vec![BigInt::from(0); dim];
    if dim > 0 {
        coords[0] = BigInt::one();
    }
    GroupElement::free(coords)
}

/// Integral invariants for `H_1(M)` free of rank `d`: both groups `Z^{2d+2}`,
/// unit `(1, 0, ..., 0)`.
pub fn crossed_product_k_integral(
    hom_k: &KHomology,
    coh_k: &KTheory,
    profile: &HomologyProfile,
    hypotheses: Hypotheses<'_>,
) -> Result<PointedKInvariants> {
    let assumptions = hypotheses.check()?;
    let h1 = profile.degree(1);
    if !h1.is_free() {
        return Err(Error::IntegralTorsionUnsupported(h1.to_string()));
    }
    for right in [&coh_k.k1, &coh_k.k0] {
        if !right.is_free() {
            return Err(Error::IntegralTorsionUnsupported(format!("K^*(M) contains {right}")));
        }
    }

    let even = DirectSum::new(hom_k.k0.group(), &coh_k.k1);
    let point = even.inject_left(hom_k.k0.point(), &coh_k.k1)?;
    let k0 = PointedGroup::new(even.into_group(), point)?;
    let k1 = DirectSum::new(&hom_k.k1, &coh_k.k0).into_group();

    let ladder = EmersonMeyerLadder {
        sequences: vec![
            EmSequence {
                degree: 0,
                left: hom_k.k0.group().clone(),
                middle: k0.group().clone(),
                right: coh_k.k1.clone(),
                splitting: format!("quotient K^1(M) = {} is free", coh_k.k1),
            },
            EmSequence {
                degree: 1,
                left: hom_k.k1.clone(),
                middle: k1.clone(),
                right: coh_k.k0.clone(),
                splitting: format!("quotient K^0(M) = {} is free", coh_k.k0),
            },
        ],
        assembly: "K_*(C*_r G) := K_*(M) via the Baum-Connes assembly isomorphism".into(),
        unit: format!(
            "[1] = u_*(mu([1_M])), [1_M] = {} in K_0(M), image {} in K_0(M) ⊕ K^1(M)",
            hom_k.k0.point(),
            k0.point()
        ),
    };
    Ok(PointedKInvariants { k0, k1, mode: Mode::Integral, assumptions, ladder })
}

/// `dim H_k(M; F)` from integral homology by universal coefficients.
pub fn field_homology_dims(profile: &HomologyProfile, f: FieldSpec) -> Vec<usize> {
    (0..profile.h.len())
        .map(|k| {
            let tor = if k == 0 { 0 } else { tor_with_field(profile.degree(k - 1), f) };
            tensor_with_field(profile.degree(k), f) + tor
        })
        .collect()
}

/// Invariants with coefficients in `F`: both groups have dimension
/// `2 + dim H_1(M;F) + dim H^1(M;F)`, unit `(1, 0, ..., 0)`.
pub fn crossed_product_k_field(
    profile: &HomologyProfile,
    f: FieldSpec,
    hypotheses: Hypotheses<'_>,
) -> Result<PointedKInvariants> {
    let mut assumptions = hypotheses.check()?;
    assumptions.push(format!("K-theory with coefficients in {f} via a UCT algebra with K_0 = {f}, K_1 = 0"));

    let h = field_homology_dims(profile, f);
    // field cohomology is the dual space of field homology
    let (h1, co_h1) = (h[1], h[1]);
    let dim = 2 + h1 + co_h1;

    let k0_m = h[0] + h[2];
    let k1_m = h[1] + h[3];
    let (k0_upper, k1_upper) = (h[0] + h[2], h[1] + h[3]);
    let vs = |n: usize| FgAbGroup::free(n);
    let ladder = EmersonMeyerLadder {
        sequences: vec![
            EmSequence {
                degree: 0,
                left: vs(k0_m),
                middle: vs(k0_m + k1_upper),
                right: vs(k1_upper),
                splitting: format!("sequence of {f}-vector spaces"),
            },
            EmSequence {
                degree: 1,
                left: vs(k1_m),
                middle: vs(k1_m + k0_upper),
                right: vs(k0_upper),
                splitting: format!("sequence of {f}-vector spaces"),
            },
        ],
        assembly: format!("K_*(C*_r G; {f}) := K_*(M; {f}) via the Baum-Connes assembly isomorphism with coefficients"),
        unit: format!("[1] = (1, 0) in {f} ⊕ ({f} ⊕ H_1(M;{f}) ⊕ H^1(M;{f}))"),
    };
    let k0 = PointedGroup::new(vs(dim), unit_vector(dim))?;
    Ok(PointedKInvariants { k0, k1: vs(dim), mode: Mode::FieldCoeff(f), assumptions, ladder })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum KpVerdict {
    Isomorphic,
    NotIsomorphic,
    Incomparable,
}

/// Isomorphic iff `K_0` agree as pointed groups and `K_1` agree.
pub fn kp_compare(a: &PointedKInvariants, b: &PointedKInvariants) -> KpVerdict {
    if a.mode != b.mode {
        return KpVerdict::Incomparable;
    }
    if !iso_check(&a.k1, &b.k1) {
        return KpVerdict::NotIsomorphic;
    }
    match pointed_iso_check(&a.k0, &b.k0) {
        PointedVerdict::Isomorphic => KpVerdict::Isomorphic,
        PointedVerdict::NotIsomorphic => KpVerdict::NotIsomorphic,
        PointedVerdict::Undecided => KpVerdict::Incomparable,
    }
}

fn class_key(inv: &PointedKInvariants) -> (usize, Vec<BigInt>, usize, Vec<BigInt>, BigInt) {
    (
        inv.k0.group().free_rank(),
        inv.k0.group().torsion().to_vec(),
        inv.k1.free_rank(),
        inv.k1.torsion().to_vec(),
        inv.k0.point().content(),
    )
}

/// Partitions indices into `kp_compare` classes, ordered by rank then the
/// remaining invariant data; members ascend within a class.
pub fn classify_corpus(invariants: &[PointedKInvariants]) -> Result<Vec<Vec<usize>>> {
    if let Some(first) = invariants.first() {
        if let Some(other) = invariants.iter().find(|i| i.mode != first.mode) {
            return Err(Error::MixedModes(first.mode.to_string(), other.mode.to_string()));
        }
    }
    let mut classes: Vec<Vec<usize>> = Vec::new();
    for (i, inv) in invariants.iter().enumerate() {
        match classes.iter_mut().find(|c| kp_compare(&invariants[c[0]], inv) == KpVerdict::Isomorphic) {
            Some(class) => class.push(i),
            None => classes.push(vec![i]),
        }
    }
    classes.sort_by(|a, b| class_key(&invariants[a[0]]).cmp(&class_key(&invariants[b[0]])).then(a[0].cmp(&b[0])));
    Ok(classes)
}

/// `kp_compare` for every ordered pair.
pub fn pairwise_verdicts(invariants: &[PointedKInvariants]) -> Vec<Vec<KpVerdict>> {
    invariants.iter().map(|a| invariants.iter().map(|b| kp_compare(a, b)).collect()).collect()
}
