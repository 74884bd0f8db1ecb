//! Finite chain complexes of dimension at most 3 and their (co)homology.

use std::collections::HashMap;
use std::fmt;

use num_bigint::BigInt;
use num_traits::One;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::fgab::{iso_check, Cokernel, FgAbGroup, FieldSpec, GroupElement};
use crate::intlin::{rank_mod_prime, rank_over_rationals, smith_normal_form, IntMatrix, SnfResult};

pub const MAX_DIM: usize = 3;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Provenance {
    Simplicial,
    RawMatrices,
}

/// Boundary matrices `d_n : C_n -> C_{n-1}` for `n = 1..=top_dim`.
///
/// Construction checks shapes and `d_n d_{n+1} = 0`; a value of this type is
/// always a valid complex.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ChainComplexData {
    top_dim: usize,
    ranks: Vec<usize>,
    boundaries: Vec<IntMatrix>,
    provenance: Provenance,
}

impl ChainComplexData {
    /// Simplicial chain complex from per-degree vertex tuples. Degree `k`
    /// lists `(k+1)`-tuples with strictly increasing vertex ids, and every
    /// face of a listed simplex must itself be listed.
    pub fn from_simplicial(simplices: &[Vec<Vec<u32>>]) -> Result<Self> {
        if simplices.is_empty() {
            return Err(Error::Shape("a complex needs at least a degree-0 list".into()));
        }
        if simplices.len() > MAX_DIM + 1 {
            return Err(Error::DimensionTooHigh(simplices.len() - 1));
        }

        let mut index: Vec<HashMap<&[u32], usize>> = Vec::with_capacity(simplices.len());
        for (degree, list) in simplices.iter().enumerate() {
            let mut seen = HashMap::with_capacity(list.len());
            for (i, s) in list.iter().enumerate() {
                if s.len() != degree + 1 {
                    return Err(Error::WrongSimplexSize { degree, simplex: s.clone() });
                }
                if s.windows(2).any(|w| w[0] >= w[1]) {
                    return Err(Error::NonIncreasingVertices(s.clone()));
                }
                if seen.insert(s.as_slice(), i).is_some() {
                    return Err(Error::DuplicateSimplex(s.clone()));
                }
            }
            index.push(seen);
        }

        let mut boundaries = Vec::with_capacity(simplices.len() - 1);
        for k in 1..simplices.len() {
            let mut d = IntMatrix::zeros(simplices[k - 1].len(), simplices[k].len());
            for (j, s) in simplices[k].iter().enumerate() {
                for i in 0..s.len() {
                    let face: Vec<u32> = s.iter().enumerate().filter(|&(t, _)| t != i).map(|(_, &v)| v).collect();
                    let row = *index[k - 1]
                        .get(face.as_slice())
                        .ok_or_else(|| Error::MissingFace { simplex: s.clone(), face: face.clone() })?;
                    let sign = if i % 2 == 0 { BigInt::one() } else { -BigInt::one() };
                    d.set(row, j, sign);
                }
            }
            boundaries.push(d);
        }

        let ranks = simplices.iter().map(Vec::len).collect();
        let c =
            ChainComplexData { top_dim: simplices.len() - 1, ranks, boundaries, provenance: Provenance::Simplicial };
        c.check_square_zero()?;
        Ok(c)
    }

    /// Complex given directly by chain ranks and boundary matrices
    /// (`boundaries[n-1]` is `d_n`).
    pub fn from_matrices(ranks: Vec<usize>, boundaries: Vec<IntMatrix>) -> Result<Self> {
        if ranks.is_empty() {
            return Err(Error::Shape("a complex needs at least a degree-0 rank".into()));
        }
        if ranks.len() > MAX_DIM + 1 {
            return Err(Error::DimensionTooHigh(ranks.len() - 1));
        }
        if boundaries.len() != ranks.len() - 1 {
            return Err(Error::Shape(format!(
                "{} boundary matrices given for top degree {}",
                boundaries.len(),
                ranks.len() - 1
            )));
        }
        for (i, d) in boundaries.iter().enumerate() {
            let degree = i + 1;
            if d.rows() != ranks[degree - 1] || d.cols() != ranks[degree] {
                return Err(Error::DimensionMismatch {
                    degree,
                    rows: d.rows(),
                    cols: d.cols(),
                    expected_rows: ranks[degree - 1],
                    expected_cols: ranks[degree],
                });
            }
        }
        let c = ChainComplexData { top_dim: ranks.len() - 1, ranks, boundaries, provenance: Provenance::RawMatrices };
        c.check_square_zero()?;
        Ok(c)
    }

    fn check_square_zero(&self) -> Result<()> {
        for n in 1..self.top_dim {
            let prod = &self.boundaries[n - 1] * &self.boundaries[n];
            if !prod.is_zero() {
                return Err(Error::BoundarySquare { lower: n, upper: n + 1 });
            }
        }
        Ok(())
    }

    pub fn top_dim(&self) -> usize {
        self.top_dim
    }

    pub fn ranks(&self) -> &[usize] {
        &self.ranks
    }

    /// Chain rank in degree `n`, zero outside `0..=top_dim`.
    pub fn rank(&self, n: usize) -> usize {
        self.ranks.get(n).copied().unwrap_or(0)
    }

    /// `d_n` for `1 <= n <= top_dim`.
    pub fn boundary(&self, n: usize) -> Option<&IntMatrix> {
        n.checked_sub(1).and_then(|i| self.boundaries.get(i))
    }

    pub fn boundaries(&self) -> &[IntMatrix] {
        &self.boundaries
    }

    pub fn provenance(&self) -> Provenance {
        self.provenance
    }

    pub fn euler_characteristic(&self) -> i64 {
        alternating_sum(self.ranks.iter().map(|&r| r as i64))
    }

    fn boundary_snfs(&self) -> Vec<SnfResult> {
        self.boundaries.iter().map(smith_normal_form).collect()
    }
}

fn alternating_sum<I: IntoIterator<Item = i64>>(terms: I) -> i64 {
    terms.into_iter().enumerate().map(|(k, x)| if k % 2 == 0 { x } else { -x }).sum()
}

fn nontrivial_factors(snf: Option<&SnfResult>) -> Vec<BigInt> {
    snf.map(|s| s.invariant_factors.iter().filter(|d| !d.is_one()).cloned().collect()).unwrap_or_default()
}

/// Integral homology in degrees `0..=3` plus the class of a vertex in `H_0`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct HomologyProfile {
    pub h: Vec<FgAbGroup>,
    pub base_point_class: GroupElement,
}

impl HomologyProfile {
    pub fn degree(&self, k: usize) -> &FgAbGroup {
        &self.h[k]
    }

    pub fn euler_characteristic(&self) -> i64 {
        alternating_sum(self.h.iter().map(|g| g.free_rank() as i64))
    }
}

/// `H_n = ker d_n / im d_{n+1}` for `n = 0..=3`.
pub fn homology(c: &ChainComplexData) -> HomologyProfile {
    let snfs = c.boundary_snfs();
    let rank_of = |n: usize| n.checked_sub(1).and_then(|i| snfs.get(i)).map_or(0, SnfResult::rank);

    let mut h = Vec::with_capacity(MAX_DIM + 1);
    for n in 0..=MAX_DIM {
        if n > c.top_dim {
            h.push(FgAbGroup::trivial());
            continue;
        }
        let free = c.ranks[n] - rank_of(n) - rank_of(n + 1);
        let torsion = nontrivial_factors(snfs.get(n));
        h.push(FgAbGroup::new(free, torsion).expect("invariant factors form a chain"));
    }

    // H_0 is the cokernel of d_1; the vertex class is read off through it
    let d1 = c.boundary(1).cloned().unwrap_or_else(|| IntMatrix::zeros(c.ranks[0], 0));
    let mut h0 = Cokernel::of(&d1);
    debug_assert_eq!(h0.group(), &h[0]);
    let base_point_class = if c.ranks[0] == 0 {
        h[0].zero()
    } else {
        let mut e0 = vec![BigInt::from(0); c.ranks[0]];
        e0[0] = BigInt::one();
        h0.orient_toward(&e0).expect("vector length matches");
        h0.class_of(&e0).expect("vector length matches")
    };

    HomologyProfile { h, base_point_class }
}

/// `H^n = ker d_{n+1}^T / im d_n^T` for `n = 0..=top_dim`.
pub fn cohomology(c: &ChainComplexData) -> Vec<FgAbGroup> {
    let snfs: Vec<SnfResult> = c.boundaries.iter().map(|d| smith_normal_form(&d.transpose())).collect();
    let rank_of = |n: usize| n.checked_sub(1).and_then(|i| snfs.get(i)).map_or(0, SnfResult::rank);
    (0..=c.top_dim)
        .map(|n| {
            let free = c.ranks[n] - rank_of(n + 1) - rank_of(n);
            let torsion = n.checked_sub(1).map(|i| nontrivial_factors(snfs.get(i))).unwrap_or_default();
            FgAbGroup::new(free, torsion).expect("invariant factors form a chain")
        })
        .collect()
}

fn rank_over(a: &IntMatrix, f: FieldSpec) -> usize {
    match f {
        FieldSpec::Rationals => rank_over_rationals(a),
        FieldSpec::PrimeField(p) => rank_mod_prime(a, p),
    }
}

/// `dim H_k(C; F)` for `k = 0..=3` from ranks of the boundary maps over `F`.
pub fn homology_with_field(c: &ChainComplexData, f: FieldSpec) -> Vec<usize> {
    let ranks: Vec<usize> = c.boundaries.iter().map(|d| rank_over(d, f)).collect();
    let rank_of = |n: usize| n.checked_sub(1).and_then(|i| ranks.get(i)).copied().unwrap_or(0);
    (0..=MAX_DIM).map(|k| c.rank(k) - rank_of(k) - rank_of(k + 1)).collect()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Clause {
    /// The complex has top degree 3.
    TopDimension,
    /// `H_0 ≅ Z`, generated by the class of vertex 0.
    Connected,
    /// `H_3 ≅ Z`.
    ClosedOrientable,
    /// Alternating sum of chain ranks is 0.
    EulerCharacteristic,
    /// `H^k ≅ H_{3-k}` for every k.
    PoincareDuality,
    /// `H^1` has no torsion.
    FirstCohomologyTorsionFree,
}

impl fmt::Display for Clause {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ClauseCheck {
    pub clause: Clause,
    pub passed: bool,
    pub detail: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ValidationReport {
    pub clauses: Vec<ClauseCheck>,
}

impl ValidationReport {
    pub fn passed(&self) -> bool {
        self.clauses.iter().all(|c| c.passed)
    }

    pub fn failures(&self) -> Vec<Clause> {
        self.clauses.iter().filter(|c| !c.passed).map(|c| c.clause).collect()
    }

    pub fn digest(&self) -> String {
        let failures = self.failures();
        if failures.is_empty() {
            format!("all {} clauses passed", self.clauses.len())
        } else {
            let names: Vec<String> = failures.iter().map(ToString::to_string).collect();
            format!("failed: {}", names.join(", "))
        }
    }
}

/// Homological necessary conditions for a closed connected orientable
/// 3-manifold. Passing does not prove the complex is a manifold.
pub fn validate_closed_oriented_3mfld(c: &ChainComplexData) -> ValidationReport {
    let profile = homology(c);
    let mut coh = cohomology(c);
    coh.resize(MAX_DIM + 1, FgAbGroup::trivial());
    let z = FgAbGroup::free(1);
    let mut clauses = Vec::new();

    if c.top_dim != MAX_DIM {
        clauses.push(ClauseCheck {
            clause: Clause::TopDimension,
            passed: false,
            detail: format!("top degree is {}", c.top_dim),
        });
    }
    clauses.push(ClauseCheck {
        clause: Clause::Connected,
        // raw matrices need not be augmented; then a vertex can be a multiple
        passed: profile.h[0] == z && profile.base_point_class.content().is_one(),
        detail: format!("H_0 = {}, vertex class {}", profile.h[0], profile.base_point_class),
    });
    clauses.push(ClauseCheck {
        clause: Clause::ClosedOrientable,
        passed: profile.h[3] == z,
        detail: format!("H_3 = {}", profile.h[3]),
    });
    let chi = c.euler_characteristic();
    clauses.push(ClauseCheck { clause: Clause::EulerCharacteristic, passed: chi == 0, detail: format!("chi = {chi}") });
    let mismatched: Vec<String> = (0..=MAX_DIM)
        .filter(|&k| !iso_check(&coh[k], &profile.h[MAX_DIM - k]))
        .map(|k| format!("H^{k} = {} vs H_{} = {}", coh[k], MAX_DIM - k, profile.h[MAX_DIM - k]))
        .collect();
    clauses.push(ClauseCheck {
        clause: Clause::PoincareDuality,
        passed: mismatched.is_empty(),
        detail: if mismatched.is_empty() { "H^k ≅ H_{3-k} for k = 0..3".into() } else { mismatched.join("; ") },
    });
    clauses.push(ClauseCheck {
        clause: Clause::FirstCohomologyTorsionFree,
        passed: coh[1].is_free(),
        detail: format!("H^1 = {}", coh[1]),
    });
    ValidationReport { clauses }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn g(s: &str) -> FgAbGroup {
        s.parse().unwrap()
    }

    /// All nonempty subsets of `0..n` of size at most `max_size`, grouped by degree.
    fn faces_of_simplex(n: u32, max_size: usize) -> Vec<Vec<Vec<u32>>> {
        let mut by_degree = vec![Vec::new(); max_size];
        for mask in 1u32..(1 << n) {
            let s: Vec<u32> = (0..n).filter(|i| mask & (1 << i) != 0).collect();
            if s.len() <= max_size {
                by_degree[s.len() - 1].push(s);
            }
        }
        for list in &mut by_degree {
            list.sort();
        }
        by_degree
    }

    fn sphere3() -> ChainComplexData {
        ChainComplexData::from_simplicial(&faces_of_simplex(5, 4)).unwrap()
    }

    fn torsion_fixture() -> ChainComplexData {
        ChainComplexData::from_matrices(
            vec![1, 2, 2, 1],
            vec![
                IntMatrix::zeros(1, 2),
                IntMatrix::from_rows(2, &[vec![5, 0], vec![0, 5]]).unwrap(),
                IntMatrix::zeros(2, 1),
            ],
        )
        .unwrap()
    }

    fn torus3() -> ChainComplexData {
        ChainComplexData::from_matrices(
            vec![1, 3, 3, 1],
            vec![IntMatrix::zeros(1, 3), IntMatrix::zeros(3, 3), IntMatrix::zeros(3, 1)],
        )
        .unwrap()
    }

    #[test]
    fn point() {
        let c = ChainComplexData::from_simplicial(&[vec![vec![0]]]).unwrap();
        assert_eq!(c.ranks(), &[1]);
        assert!(c.boundaries().is_empty());
        let p = homology(&c);
        assert_eq!(p.h, vec![g("Z"), g("0"), g("0"), g("0")]);
        assert_eq!(p.base_point_class, GroupElement::free(vec![BigInt::one()]));
        assert_eq!(cohomology(&c), vec![g("Z")]);
    }

    #[test]
    fn boundary_of_four_simplex() {
        let c = sphere3();
        assert_eq!(c.ranks(), &[5, 10, 10, 5]);
        assert_eq!(c.provenance(), Provenance::Simplicial);
        let p = homology(&c);
        assert_eq!(p.h, vec![g("Z"), g("0"), g("0"), g("Z")]);
        assert_eq!(p.base_point_class.content(), BigInt::one());
        assert_eq!(cohomology(&c), vec![g("Z"), g("0"), g("0"), g("Z")]);
        let f2 = FieldSpec::prime(2).unwrap();
        assert_eq!(homology_with_field(&c, f2), vec![1, 0, 0, 1]);
        assert!(validate_closed_oriented_3mfld(&c).passed());
    }

    #[test]
    fn missing_face_is_reported() {
        let tri = vec![vec![vec![0], vec![1], vec![2]], vec![vec![0, 1], vec![1, 2]], vec![vec![0, 1, 2]]];
        match ChainComplexData::from_simplicial(&tri) {
            Err(Error::MissingFace { face, .. }) => assert_eq!(face, vec![0, 2]),
            other => panic!("expected MissingFace, got {other:?}"),
        }
    }

    #[test]
    fn malformed_simplices() {
        let bad_order = vec![vec![vec![0], vec![1]], vec![vec![1, 0]]];
        assert_eq!(ChainComplexData::from_simplicial(&bad_order), Err(Error::NonIncreasingVertices(vec![1, 0])));
        let dup = vec![vec![vec![0], vec![0]]];
        assert_eq!(ChainComplexData::from_simplicial(&dup), Err(Error::DuplicateSimplex(vec![0])));
        let size = vec![vec![vec![0, 1]]];
        assert!(matches!(ChainComplexData::from_simplicial(&size), Err(Error::WrongSimplexSize { .. })));
        let four = faces_of_simplex(6, 5);
        assert_eq!(ChainComplexData::from_simplicial(&four), Err(Error::DimensionTooHigh(4)));
        assert!(ChainComplexData::from_simplicial(&[]).is_err());
    }

    #[test]
    fn matrix_input_is_checked() {
        let wrong_shape = ChainComplexData::from_matrices(vec![1, 2], vec![IntMatrix::zeros(2, 1)]);
        assert!(matches!(wrong_shape, Err(Error::DimensionMismatch { degree: 1, .. })));
        let not_complex = ChainComplexData::from_matrices(
            vec![1, 1, 1],
            vec![IntMatrix::from_rows(1, &[vec![1]]).unwrap(), IntMatrix::from_rows(1, &[vec![1]]).unwrap()],
        );
        assert_eq!(not_complex, Err(Error::BoundarySquare { lower: 1, upper: 2 }));
        let too_many = ChainComplexData::from_matrices(vec![1; 5], vec![IntMatrix::zeros(1, 1); 4]);
        assert_eq!(too_many, Err(Error::DimensionTooHigh(4)));
    }

    #[test]
    fn three_torus() {
        let c = torus3();
        let p = homology(&c);
        assert_eq!(p.h, vec![g("Z"), g("Z^3"), g("Z^3"), g("Z")]);
        assert_eq!(cohomology(&c), p.h);
        assert!(validate_closed_oriented_3mfld(&c).passed());
    }

    #[test]
    fn torsion_in_first_homology() {
        let c = torsion_fixture();
        let p = homology(&c);
        assert_eq!(p.h, vec![g("Z"), g("Z/5 ⊕ Z/5"), g("0"), g("Z")]);
        let coh = cohomology(&c);
        assert_eq!(coh, vec![g("Z"), g("0"), g("Z/5 ⊕ Z/5"), g("Z")]);
        let f5 = FieldSpec::prime(5).unwrap();
        let f2 = FieldSpec::prime(2).unwrap();
        assert_eq!(homology_with_field(&c, f5), vec![1, 2, 2, 1]);
        assert_eq!(homology_with_field(&c, f2), vec![1, 0, 0, 1]);
        assert_eq!(homology_with_field(&c, FieldSpec::Rationals), vec![1, 0, 0, 1]);
        assert!(validate_closed_oriented_3mfld(&c).passed());
    }

    #[test]
    fn solid_tetrahedron_is_not_closed() {
        let c = ChainComplexData::from_simplicial(&faces_of_simplex(4, 4)).unwrap();
        let report = validate_closed_oriented_3mfld(&c);
        assert!(!report.passed());
        assert!(report.failures().contains(&Clause::ClosedOrientable));
        assert!(!report.failures().contains(&Clause::Connected));
    }

    #[test]
    fn low_dimensional_input_fails_the_dimension_clause() {
        let c = ChainComplexData::from_simplicial(&[vec![vec![0]]]).unwrap();
        let report = validate_closed_oriented_3mfld(&c);
        assert_eq!(report.failures()[0], Clause::TopDimension);
        assert!(report.digest().starts_with("failed"));
    }

    #[test]
    fn connected_needs_a_primitive_vertex_class() {
        // H_0 = Z^2 / (1, -3) = Z, but vertex 0 is three times the generator
        let c =
            ChainComplexData::from_matrices(vec![2, 1], vec![IntMatrix::from_rows(1, &[vec![1], vec![-3]]).unwrap()])
                .unwrap();
        assert_eq!(homology(&c).h[0], g("Z"));
        let report = validate_closed_oriented_3mfld(&c);
        assert!(report.failures().contains(&Clause::Connected));
    }

    #[test]
    fn base_point_class_with_several_vertices() {
        // an edge path 0 - 1 - 2: H_0 = Z, every vertex maps to the generator
        let c = ChainComplexData::from_simplicial(&[vec![vec![0], vec![1], vec![2]], vec![vec![0, 1], vec![1, 2]]])
            .unwrap();
        let p = homology(&c);
        assert_eq!(p.h[0], g("Z"));
        assert_eq!(p.base_point_class, GroupElement::free(vec![BigInt::one()]));
    }

    #[test]
    fn disconnected_complex() {
        let c = ChainComplexData::from_simplicial(&[vec![vec![0], vec![1]]]).unwrap();
        let p = homology(&c);
        assert_eq!(p.h[0], g("Z^2"));
        assert_eq!(p.base_point_class.content(), BigInt::one());
        assert!(!validate_closed_oriented_3mfld(&c).failures().is_empty());
    }
}
