#[path = "../../core/tests/common/mod.rs"]
mod common;

use boundaryk::intlin::IntMatrix;
use boundaryk_cli::fixture::{parse_fixture, Flags, ManifoldFixture, Payload};
use num_bigint::BigInt;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn matrices_text(name: &str, ranks: &[usize], boundaries: &[IntMatrix], flags: Flags) -> String {
    let rows: Vec<Vec<Vec<String>>> = boundaries
        .iter()
        .map(|m| (0..m.rows()).map(|i| m.row(i).iter().map(BigInt::to_string).collect()).collect())
        .collect();
    serde_json::json!({
        "schema": "boundaryk-fixture/1",
        "name": name,
        "mode": "matrices",
        "flags": flags,
        "ranks": ranks,
        "boundaries": rows,
    })
    .to_string()
}

fn reparse(f: &ManifoldFixture) -> ManifoldFixture {
    parse_fixture(&f.to_json()).unwrap()
}

#[test]
fn generated_matrix_fixtures_round_trip() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for case in 0..100 {
        let d = rng.gen_range(0..4);
        let torsion: Vec<u64> = (0..rng.gen_range(0..3)).map(|_| rng.gen_range(2..30)).collect();
        let cancel: Vec<usize> = (0..rng.gen_range(0..4)).map(|_| rng.gen_range(0..3)).collect();
        let k = common::build(&common::manifold_like(d, &torsion, &cancel), rng.gen());
        let flags = Flags { closed: rng.gen(), orientable: rng.gen(), hyperbolic: rng.gen() };
        let text = matrices_text(&format!("case-{case}"), k.complex.ranks(), k.complex.boundaries(), flags);
        let f = parse_fixture(&text).unwrap();
        assert_eq!(f.complex(), &k.complex);
        assert_eq!(reparse(&f), f);
        assert_eq!(reparse(&f).to_json(), f.to_json());
    }
}

#[test]
fn huge_entries_survive() {
    let big: BigInt = "-98765432109876543210987654321098765432109876543210".parse().unwrap();
    // d_1 = (0), d_2 = (big), keeps d.d = 0 since d_1 = 0
    let d1 = IntMatrix::zeros(1, 1);
    let d2 = IntMatrix::from_entries(1, 1, vec![big.clone()]).unwrap();
    let text = matrices_text("huge", &[1, 1, 1], &[d1, d2], Flags::default());
    let f = parse_fixture(&text).unwrap();
    match &f.payload {
        Payload::Matrices { boundaries, .. } => assert_eq!(boundaries[1].get(0, 0), &big),
        Payload::Simplices(_) => unreachable!(),
    }
    assert_eq!(reparse(&f), f);
}
