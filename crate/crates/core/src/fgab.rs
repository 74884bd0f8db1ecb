//! Finitely generated abelian groups in invariant-factor normal form.
//!
//! A group is stored as `Z^r ⊕ Z/t_1 ⊕ ... ⊕ Z/t_m` with `t_i >= 2` and
//! `t_1 | t_2 | ... | t_m`. The normal form is unique, so derived `Eq` is
//! isomorphism.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::intlin::{smith_normal_form, IntMatrix, Prime};

/// Coefficient field: the rationals or a prime field.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum FieldSpec {
    Rationals,
    PrimeField(Prime),
}

impl FieldSpec {
    pub fn prime(p: u64) -> Result<Self> {
        Prime::new(p).map(FieldSpec::PrimeField)
    }

    /// 0 for the rationals.
    pub fn characteristic(self) -> u64 {
        match self {
            FieldSpec::Rationals => 0,
            FieldSpec::PrimeField(p) => p.get(),
        }
    }
}

impl fmt::Display for FieldSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FieldSpec::Rationals => write!(f, "Q"),
            FieldSpec::PrimeField(p) => write!(f, "F{p}"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct FgAbGroup {
    free_rank: usize,
    torsion: Vec<BigInt>,
}

impl FgAbGroup {
    pub fn trivial() -> Self {
        Self::default()
    }

    pub fn free(rank: usize) -> Self {
        FgAbGroup { free_rank: rank, torsion: Vec::new() }
    }

    /// Builds a group from data that must already be in normal form.
    pub fn new(free_rank: usize, torsion: Vec<BigInt>) -> Result<Self> {
        let two = BigInt::from(2);
        if let Some(t) = torsion.iter().find(|t| **t < two) {
            return Err(Error::GroupSyntax {
                input: format!("{torsion:?}"),
                reason: format!("torsion coefficient {t} is below 2"),
            });
        }
        if let Some(w) = torsion.windows(2).find(|w| !w[1].is_multiple_of(&w[0])) {
            return Err(Error::GroupSyntax {
                input: format!("{torsion:?}"),
                reason: format!("{} does not divide {}", w[0], w[1]),
            });
        }
        Ok(FgAbGroup { free_rank, torsion })
    }

    /// Normalizes a direct sum of cyclic groups `Z/n_i`; an order of 0 means `Z`
    /// and an order of ±1 contributes nothing.
    pub fn from_cyclic_orders<I: IntoIterator<Item = BigInt>>(orders: I) -> Self {
        let mut free_rank = 0;
        let mut finite = Vec::new();
        for n in orders {
            let n = n.abs();
            if n.is_zero() {
                free_rank += 1;
            } else if !n.is_one() {
                finite.push(n);
            }
        }
        // pairwise (gcd, lcm) replacement leaves a divisibility chain
        let k = finite.len();
        for i in 0..k {
            for j in i + 1..k {
                let g = finite[i].gcd(&finite[j]);
                let l = finite[i].lcm(&finite[j]);
                finite[i] = g;
                finite[j] = l;
            }
        }
        finite.retain(|t| !t.is_one());
        FgAbGroup { free_rank, torsion: finite }
    }

    pub fn free_rank(&self) -> usize {
        self.free_rank
    }

    pub fn torsion(&self) -> &[BigInt] {
        &self.torsion
    }

    pub fn is_free(&self) -> bool {
        self.torsion.is_empty()
    }

    pub fn is_trivial(&self) -> bool {
        self.free_rank == 0 && self.torsion.is_empty()
    }

    pub fn torsion_subgroup(&self) -> FgAbGroup {
        FgAbGroup { free_rank: 0, torsion: self.torsion.clone() }
    }

    /// Number of cyclic summands `Z/t` with `p | t`.
    pub fn p_torsion_count(&self, p: Prime) -> usize {
        let p = BigInt::from(p.get());
        self.torsion.iter().filter(|t| t.is_multiple_of(&p)).count()
    }

    pub fn zero(&self) -> GroupElement {
        GroupElement {
            free_coords: vec![BigInt::zero(); self.free_rank],
            torsion_coords: vec![BigInt::zero(); self.torsion.len()],
        }
    }

    /// Generator of the `index`-th free summand.
    pub fn free_generator(&self, index: usize) -> GroupElement {
        let mut e = self.zero();
        e.free_coords[index] = BigInt::one();
        e
    }

    pub fn contains(&self, x: &GroupElement) -> bool {
        x.free_coords.len() == self.free_rank
            && x.torsion_coords.len() == self.torsion.len()
            && x.torsion_coords.iter().zip(&self.torsion).all(|(c, t)| !c.is_negative() && c < t)
    }
}

impl fmt::Display for FgAbGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_trivial() {
            return write!(f, "0");
        }
        let mut terms = Vec::new();
        match self.free_rank {
            0 => {}
            1 => terms.push("Z".to_string()),
            r => terms.push(format!("Z^{r}")),
        }
        terms.extend(self.torsion.iter().map(|t| format!("Z/{t}")));
        write!(f, "{}", terms.join(" ⊕ "))
    }
}

impl FromStr for FgAbGroup {
    type Err = Error;

    /// Parses `Z^r ⊕ Z/t1 ⊕ ...` (or `0`). Terms may come in any order and need
    /// not form a chain; `+` is accepted in place of `⊕`.
    fn from_str(s: &str) -> Result<Self> {
        let syntax = |reason: String| Error::GroupSyntax { input: s.to_string(), reason };
        let trimmed = s.trim();
        if trimmed == "0" {
            return Ok(FgAbGroup::trivial());
        }
        let mut orders = Vec::new();
        for term in trimmed.split(['⊕', '+']) {
            let term = term.trim();
            if term == "Z" {
                orders.push(BigInt::zero());
            } else if let Some(r) = term.strip_prefix("Z^") {
                let r: usize = r.trim().parse().map_err(|_| syntax(format!("bad rank in {term:?}")))?;
                orders.extend(std::iter::repeat_n(BigInt::zero(), r));
            } else if let Some(t) = term.strip_prefix("Z/") {
                let t: BigInt = t.trim().parse().map_err(|_| syntax(format!("bad order in {term:?}")))?;
                if t < BigInt::one() {
                    return Err(syntax(format!("cyclic order {t} must be positive")));
                }
                orders.push(t);
            } else {
                return Err(syntax(format!("unrecognised term {term:?}")));
            }
        }
        Ok(FgAbGroup::from_cyclic_orders(orders))
    }
}

/// An element written in the normal-form coordinates of its group.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct GroupElement {
    pub free_coords: Vec<BigInt>,
    /// Residues in `[0, t_i)`.
    pub torsion_coords: Vec<BigInt>,
}

impl GroupElement {
    pub fn free(coords: Vec<BigInt>) -> Self {
        GroupElement { free_coords: coords, torsion_coords: Vec::new() }
    }

    pub fn is_zero(&self) -> bool {
        self.free_coords.iter().chain(&self.torsion_coords).all(Zero::is_zero)
    }

    pub fn has_torsion_part(&self) -> bool {
        self.torsion_coords.iter().any(|c| !c.is_zero())
    }

    /// gcd of the free coordinates; 0 for a point with zero free part.
    pub fn content(&self) -> BigInt {
        self.free_coords.iter().fold(BigInt::zero(), |g, c| g.gcd(c))
    }
}

impl fmt::Display for GroupElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.free_coords.iter().chain(&self.torsion_coords).map(ToString::to_string).collect();
        write!(f, "({})", parts.join(","))
    }
}

/// A group with a distinguished element.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct PointedGroup {
    group: FgAbGroup,
    point: GroupElement,
}

impl PointedGroup {
    pub fn new(group: FgAbGroup, point: GroupElement) -> Result<Self> {
        if !group.contains(&point) {
            return Err(Error::Shape(format!("{point} is not an element of {group}")));
        }
        Ok(PointedGroup { group, point })
    }

    pub fn group(&self) -> &FgAbGroup {
        &self.group
    }

    pub fn point(&self) -> &GroupElement {
        &self.point
    }
}

impl fmt::Display for PointedGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.group, self.point)
    }
}

/// Quotient `Z^m / im(a)` for an `m x n` matrix `a`, with a coordinate map
/// from `Z^m` into the normal form of the quotient.
#[derive(Clone, Debug)]
pub struct Cokernel {
    group: FgAbGroup,
    u: IntMatrix,
    factors: Vec<BigInt>,
}

impl Cokernel {
    pub fn of(a: &IntMatrix) -> Self {
        let snf = smith_normal_form(a);
        let r = snf.rank();
        let torsion: Vec<BigInt> = snf.invariant_factors.iter().filter(|d| !d.is_one()).cloned().collect();
        let group = FgAbGroup { free_rank: a.rows() - r, torsion };
        Cokernel { group, u: snf.u, factors: snf.invariant_factors }
    }

    pub fn group(&self) -> &FgAbGroup {
        &self.group
    }

    /// Class of `x ∈ Z^m` in the quotient.
    pub fn class_of(&self, x: &[BigInt]) -> Result<GroupElement> {
        let y = self.u.apply(x)?;
        let r = self.factors.len();
        let torsion_coords =
            self.factors.iter().zip(&y).filter(|(d, _)| !d.is_one()).map(|(d, yi)| yi.mod_floor(d)).collect();
        Ok(GroupElement { free_coords: y[r..].to_vec(), torsion_coords })
    }

    /// Flips free basis vectors so that the class of `x` has nonnegative free
    /// coordinates.
    pub fn orient_toward(&mut self, x: &[BigInt]) -> Result<()> {
        let y = self.u.apply(x)?;
        for (i, yi) in y.iter().enumerate().skip(self.factors.len()) {
            if yi.is_negative() {
                for j in 0..self.u.cols() {
                    let e = -self.u.get(i, j);
                    self.u.set(i, j, e);
                }
            }
        }
        Ok(())
    }
}

/// `a ⊕ b` together with the coordinate injections of both summands.
#[derive(Clone, Debug)]
pub struct DirectSum {
    group: FgAbGroup,
    left_rank: usize,
    left_torsion: usize,
    torsion_merge: Cokernel,
}

impl DirectSum {
    pub fn new(a: &FgAbGroup, b: &FgAbGroup) -> Self {
        let orders: Vec<BigInt> = a.torsion.iter().chain(&b.torsion).cloned().collect();
        let torsion_merge = Cokernel::of(&IntMatrix::diagonal(&orders));
        let group = FgAbGroup { free_rank: a.free_rank + b.free_rank, torsion: torsion_merge.group.torsion.clone() };
        DirectSum { group, left_rank: a.free_rank, left_torsion: a.torsion.len(), torsion_merge }
    }

    pub fn group(&self) -> &FgAbGroup {
        &self.group
    }

    pub fn into_group(self) -> FgAbGroup {
        self.group
    }

    /// Image of `(x, y)`, with `x` in the left summand and `y` in the right one.
    pub fn pair(&self, x: &GroupElement, y: &GroupElement) -> Result<GroupElement> {
        if x.free_coords.len() != self.left_rank || x.torsion_coords.len() != self.left_torsion {
            return Err(Error::Shape(format!("{x} is not in the left summand")));
        }
        let mut free_coords = x.free_coords.clone();
        free_coords.extend(y.free_coords.iter().cloned());
        let mut tors: Vec<BigInt> = x.torsion_coords.clone();
        tors.extend(y.torsion_coords.iter().cloned());
        let merged = self.torsion_merge.class_of(&tors)?;
        Ok(GroupElement { free_coords, torsion_coords: merged.torsion_coords })
    }

    pub fn inject_left(&self, x: &GroupElement, right: &FgAbGroup) -> Result<GroupElement> {
        self.pair(x, &right.zero())
    }
}

pub fn direct_sum(a: &FgAbGroup, b: &FgAbGroup) -> FgAbGroup {
    DirectSum::new(a, b).into_group()
}

pub fn iso_check(a: &FgAbGroup, b: &FgAbGroup) -> bool {
    a == b
}

/// `Hom(a, Z)`: torsion dies, the free part survives.
pub fn hom_to_z(a: &FgAbGroup) -> FgAbGroup {
    FgAbGroup::free(a.free_rank)
}

/// `dim (a ⊗ F)`.
pub fn tensor_with_field(a: &FgAbGroup, f: FieldSpec) -> usize {
    match f {
        FieldSpec::Rationals => a.free_rank,
        FieldSpec::PrimeField(p) => a.free_rank + a.p_torsion_count(p),
    }
}

/// `dim Tor(a, F)`.
pub fn tor_with_field(a: &FgAbGroup, f: FieldSpec) -> usize {
    match f {
        FieldSpec::Rationals => 0,
        FieldSpec::PrimeField(p) => a.p_torsion_count(p),
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum PointedVerdict {
    Isomorphic,
    NotIsomorphic,
    Undecided,
}

/// Compares pointed groups up to isomorphism carrying point to point.
///
/// Decided when the groups differ, or when both points have zero torsion
/// coordinates: then the content of the free part is a complete invariant of
/// the automorphism orbit. Anything else is `Undecided`.
pub fn pointed_iso_check(a: &PointedGroup, b: &PointedGroup) -> PointedVerdict {
    if !iso_check(&a.group, &b.group) {
        return PointedVerdict::NotIsomorphic;
    }
    if a.point.has_torsion_part() || b.point.has_torsion_part() {
        return PointedVerdict::Undecided;
    }
    if a.point.content() == b.point.content() {
        PointedVerdict::Isomorphic
    } else {
        PointedVerdict::NotIsomorphic
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn g(s: &str) -> FgAbGroup {
        s.parse().unwrap()
    }

    fn ints(xs: &[i64]) -> Vec<BigInt> {
        xs.iter().map(|&x| BigInt::from(x)).collect()
    }

    fn pointed(group: &str, free: &[i64]) -> PointedGroup {
        PointedGroup::new(g(group), GroupElement::free(ints(free))).unwrap()
    }

    #[test]
    fn parse_and_render() {
        assert_eq!(g("0"), FgAbGroup::trivial());
        assert_eq!(g("Z^3 ⊕ Z/2").to_string(), "Z^3 ⊕ Z/2");
        assert_eq!(g("Z/3 + Z/2").to_string(), "Z/6");
        assert_eq!(g("Z/4 ⊕ Z ⊕ Z/2").to_string(), "Z ⊕ Z/2 ⊕ Z/4");
        assert_eq!(g("Z/1").to_string(), "0");
        assert_eq!(g("Z^0 ⊕ Z").to_string(), "Z");
        assert!("Q".parse::<FgAbGroup>().is_err());
        assert!("Z/0".parse::<FgAbGroup>().is_err());
        assert!("Z/-2".parse::<FgAbGroup>().is_err());
    }

    #[test]
    fn new_checks_normal_form() {
        assert!(FgAbGroup::new(1, ints(&[2, 4])).is_ok());
        assert!(FgAbGroup::new(0, ints(&[2, 3])).is_err());
        assert!(FgAbGroup::new(0, ints(&[1])).is_err());
    }

    #[test]
    fn direct_sums() {
        assert_eq!(direct_sum(&g("Z"), &g("Z")), FgAbGroup::free(2));
        assert_eq!(direct_sum(&g("Z/2"), &g("Z/4")).torsion(), ints(&[2, 4]).as_slice());
        assert_eq!(direct_sum(&g("Z/2"), &g("Z/3")).torsion(), ints(&[6]).as_slice());
        assert_eq!(direct_sum(&g("Z/6"), &g("Z/10")), g("Z/2 ⊕ Z/30"));
    }

    #[test]
    fn injection_coordinates() {
        // (Z/2 ⊕ Z) ⊕ (Z/3): the element (1 mod 2, 5) lands on an order-2 element
        let a = g("Z ⊕ Z/2");
        let b = g("Z/3");
        let sum = DirectSum::new(&a, &b);
        assert_eq!(sum.group(), &g("Z ⊕ Z/6"));
        let x = GroupElement { free_coords: ints(&[5]), torsion_coords: ints(&[1]) };
        let image = sum.inject_left(&x, &b).unwrap();
        assert_eq!(image.free_coords, ints(&[5]));
        assert_eq!(image.torsion_coords, ints(&[3]));
        let y = GroupElement { free_coords: vec![], torsion_coords: ints(&[1]) };
        let image = sum.pair(&a.zero(), &y).unwrap();
        let t = &image.torsion_coords[0];
        assert!(t == &BigInt::from(2) || t == &BigInt::from(4));
    }

    #[test]
    fn isomorphism_checks() {
        assert!(iso_check(&g("Z^2"), &g("Z^2")));
        assert!(!iso_check(&g("Z/2 ⊕ Z/4"), &g("Z/8")));
        assert!(iso_check(&g("Z ⊕ Z/2"), &g("Z/2 ⊕ Z")));
    }

    #[test]
    fn hom_and_coefficients() {
        let f5 = FieldSpec::prime(5).unwrap();
        let f2 = FieldSpec::prime(2).unwrap();
        assert_eq!(hom_to_z(&g("Z^4")), g("Z^4"));
        assert_eq!(hom_to_z(&g("Z/5 ⊕ Z/5")), FgAbGroup::trivial());
        assert_eq!(hom_to_z(&g("Z ⊕ Z/2")), g("Z"));

        assert_eq!(tensor_with_field(&g("Z^4"), FieldSpec::Rationals), 4);
        assert_eq!(tensor_with_field(&g("Z/5 ⊕ Z/5"), f5), 2);
        assert_eq!(tensor_with_field(&g("Z/5 ⊕ Z/5"), f2), 0);
        assert_eq!(tor_with_field(&g("Z^2 ⊕ Z/10"), FieldSpec::Rationals), 0);
        assert_eq!(tor_with_field(&g("Z/5 ⊕ Z/5"), f5), 2);
        assert_eq!(tor_with_field(&g("Z^3"), f2), 0);
        assert_eq!(FieldSpec::prime(6), Err(Error::NotPrime(6)));
    }

    #[test]
    fn pointed_comparisons() {
        use PointedVerdict::*;
        assert_eq!(pointed_iso_check(&pointed("Z^2", &[1, 0]), &pointed("Z^2", &[0, 1])), Isomorphic);
        assert_eq!(pointed_iso_check(&pointed("Z^2", &[1, 0]), &pointed("Z^2", &[2, 0])), NotIsomorphic);
        let unit: Vec<i64> = std::iter::once(1).chain(std::iter::repeat_n(0, 7)).collect();
        let p = pointed("Z^8", &unit);
        assert_eq!(pointed_iso_check(&p, &p), Isomorphic);
        assert_eq!(pointed_iso_check(&pointed("Z^2", &[0, 0]), &pointed("Z^2", &[0, 0])), Isomorphic);
        assert_eq!(pointed_iso_check(&pointed("Z^2", &[0, 0]), &pointed("Z^2", &[0, 3])), NotIsomorphic);
        assert_eq!(pointed_iso_check(&pointed("Z^2", &[1, 0]), &pointed("Z^3", &[1, 0, 0])), NotIsomorphic);

        let grp = g("Z ⊕ Z/2");
        let tors = PointedGroup::new(grp.clone(), GroupElement { free_coords: ints(&[1]), torsion_coords: ints(&[1]) })
            .unwrap();
        let plain =
            PointedGroup::new(grp, GroupElement { free_coords: ints(&[1]), torsion_coords: ints(&[0]) }).unwrap();
        assert_eq!(pointed_iso_check(&tors, &plain), Undecided);
    }

    #[test]
    fn points_must_belong_to_their_group() {
        let grp = g("Z/3");
        let bad = GroupElement { free_coords: vec![], torsion_coords: ints(&[3]) };
        assert!(PointedGroup::new(grp.clone(), bad).is_err());
        assert!(PointedGroup::new(grp, GroupElement::free(ints(&[1]))).is_err());
    }

    #[test]
    fn cokernel_classes() {
        // Z^2 / <(2, 0)> = Z ⊕ Z/2
        let a = IntMatrix::from_rows(1, &[vec![2], vec![0]]).unwrap();
        let mut c = Cokernel::of(&a);
        assert_eq!(c.group(), &g("Z ⊕ Z/2"));
        let e0 = c.class_of(&ints(&[1, 0])).unwrap();
        assert_eq!(e0.torsion_coords, ints(&[1]));
        assert!(e0.free_coords[0].is_zero());
        let e1 = ints(&[0, -1]);
        c.orient_toward(&e1).unwrap();
        assert_eq!(c.class_of(&e1).unwrap().free_coords, ints(&[1]));
    }
}
