mod common;

use std::collections::BTreeSet;

use boundaryk::chain::{cohomology, homology, homology_with_field, validate_closed_oriented_3mfld, ChainComplexData};
use boundaryk::fgab::{direct_sum, FgAbGroup, FieldSpec};
use num_bigint::BigInt;
use num_integer::Integer;
use proptest::prelude::*;
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

use common::{build, manifold_like, Piece};

fn piece_strategy() -> impl Strategy<Value = Piece> {
    prop_oneof![(0usize..4).prop_map(Piece::Free), (0usize..3, 1u64..=6).prop_map(|(k, t)| Piece::Pair(k, t)),]
}

fn uct_cohomology(h: &[FgAbGroup]) -> Vec<FgAbGroup> {
    (0..4)
        .map(|n| {
            let free = FgAbGroup::free(h[n].free_rank());
            match n {
                0 => free,
                _ => direct_sum(&free, &h[n - 1].torsion_subgroup()),
            }
        })
        .collect()
}

fn uct_field_dims(h: &[FgAbGroup], p: u64) -> Vec<usize> {
    let pb = BigInt::from(p);
    let t = |g: &FgAbGroup| g.torsion().iter().filter(|x| x.is_multiple_of(&pb)).count();
    (0..4).map(|k| h[k].free_rank() + t(&h[k]) + if k > 0 { t(&h[k - 1]) } else { 0 }).collect()
}

fn faces_of(top: &[Vec<u32>]) -> Vec<Vec<Vec<u32>>> {
    let mut by_degree: Vec<BTreeSet<Vec<u32>>> = vec![BTreeSet::new(); 5];
    for s in top {
        for mask in 1u32..(1 << s.len()) {
            let f: Vec<u32> = s.iter().enumerate().filter(|(i, _)| mask & (1 << i) != 0).map(|(_, &v)| v).collect();
            by_degree[f.len() - 1].insert(f);
        }
    }
    while by_degree.last().is_some_and(BTreeSet::is_empty) {
        by_degree.pop();
    }
    by_degree.into_iter().map(|s| s.into_iter().collect()).collect()
}

#[test]
fn boundary_of_four_simplex_has_binomial_ranks() {
    let c = ChainComplexData::from_simplicial(&faces_of(&[vec![0, 1, 2, 3, 4]])[..4]).unwrap();
    assert_eq!(c.ranks(), &[5, 10, 10, 5]);
    assert_eq!(c.euler_characteristic(), 0);
    let h = homology(&c).h;
    assert_eq!(h, ["Z", "0", "0", "Z"].map(|s| s.parse::<FgAbGroup>().unwrap()).to_vec());
}

#[test]
fn torsion_fixture_uct_oracle() {
    let k = build(&manifold_like(0, &[5, 5], &[]), 7);
    let h = homology(&k.complex).h;
    assert_eq!(h[1].to_string(), "Z/5 ⊕ Z/5");
    let coh = cohomology(&k.complex);
    assert!(coh[1].is_trivial());
    assert_eq!(coh[2].torsion(), h[1].torsion());
    assert_eq!(homology_with_field(&k.complex, FieldSpec::prime(5).unwrap())[1], 2);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn homology_of_conjugated_complexes(pieces in prop::collection::vec(piece_strategy(), 0..7), seed in any::<u64>()) {
        let k = build(&pieces, seed);
        let profile = homology(&k.complex);
        prop_assert_eq!(&profile.h, &k.homology);
        prop_assert_eq!(profile.euler_characteristic(), k.complex.euler_characteristic());
        prop_assert_eq!(cohomology(&k.complex), uct_cohomology(&k.homology));

        let q = homology_with_field(&k.complex, FieldSpec::Rationals);
        let free: Vec<usize> = k.homology.iter().map(FgAbGroup::free_rank).collect();
        prop_assert_eq!(q, free);
        for p in [2u64, 3, 5] {
            prop_assert_eq!(homology_with_field(&k.complex, FieldSpec::prime(p).unwrap()), uct_field_dims(&k.homology, p));
        }
        if k.homology[0].free_rank() > 0 {
            prop_assert_eq!(profile.base_point_class.torsion_coords.len(), k.homology[0].torsion().len());
        }
    }

    #[test]
    fn manifold_like_complexes_validate(
        d in 0usize..4,
        torsion in prop::collection::vec(2u64..=7, 0..3),
        // a single vertex keeps the augmentation, so the base point stays primitive
        cancel in prop::collection::vec(1usize..3, 0..4),
        seed in any::<u64>(),
    ) {
        let k = build(&manifold_like(d, &torsion, &cancel), seed);
        let report = validate_closed_oriented_3mfld(&k.complex);
        prop_assert!(report.passed(), "{:?}", report);
        let h = homology(&k.complex);
        let coh = cohomology(&k.complex);
        prop_assert!(coh[1].is_free());
        prop_assert_eq!(coh[2].torsion_subgroup(), h.h[1].torsion_subgroup());
        prop_assert_eq!(h.base_point_class.content(), BigInt::from(1));
    }

    #[test]
    fn simplicial_closures_are_complexes(seed in any::<u64>(), count in 1usize..6) {
        let mut rng = StdRng::seed_from_u64(seed);
        let top: Vec<Vec<u32>> = (0..count)
            .map(|_| {
                let size = rng.gen_range(1..=4);
                let mut vs: BTreeSet<u32> = BTreeSet::new();
                while vs.len() < size {
                    vs.insert(rng.gen_range(0..7));
                }
                vs.into_iter().collect()
            })
            .collect();
        let c = ChainComplexData::from_simplicial(&faces_of(&top)).unwrap();
        for n in 1..c.top_dim() {
            prop_assert!((c.boundary(n).unwrap() * c.boundary(n + 1).unwrap()).is_zero());
        }
        let profile = homology(&c);
        prop_assert_eq!(profile.euler_characteristic(), c.euler_characteristic());
        prop_assert_eq!(profile.base_point_class.content(), BigInt::from(1));
    }
}
