#![allow(dead_code)]

use boundaryk::chain::ChainComplexData;
use boundaryk::fgab::FgAbGroup;
use boundaryk::intlin::IntMatrix;
use num_bigint::BigInt;
use num_integer::Integer;
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

pub fn to_i128(a: &IntMatrix) -> Vec<Vec<i128>> {
    (0..a.rows()).map(|i| a.row(i).iter().map(|e| e.to_string().parse::<i128>().unwrap()).collect()).collect()
}

pub fn from_i64(rows: usize, cols: usize, xs: &[i64]) -> IntMatrix {
    IntMatrix::from_entries(rows, cols, xs.iter().map(|&x| BigInt::from(x)).collect()).unwrap()
}

pub fn random_matrix<R: Rng>(rng: &mut R, max_dim: usize, bound: i64) -> IntMatrix {
    let rows = rng.gen_range(0..=max_dim);
    let cols = rng.gen_range(0..=max_dim);
    random_matrix_shaped(rng, rows, cols, bound)
}

pub fn random_matrix_shaped<R: Rng>(rng: &mut R, rows: usize, cols: usize, bound: i64) -> IntMatrix {
    let xs: Vec<i64> = (0..rows * cols).map(|_| rng.gen_range(-bound..=bound)).collect();
    from_i64(rows, cols, &xs)
}

/// Exact determinant of a small matrix by Bareiss elimination in i128.
fn det_i128(mut m: Vec<Vec<i128>>) -> i128 {
    let n = m.len();
    if n == 0 {
        return 1;
    }
    let mut sign = 1;
    let mut prev = 1i128;
    for k in 0..n {
        if m[k][k] == 0 {
            match (k + 1..n).find(|&i| m[i][k] != 0) {
                Some(i) => {
                    m.swap(k, i);
                    sign = -sign;
                }
                None => return 0,
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                m[i][j] = (m[i][j] * m[k][k] - m[i][k] * m[k][j]) / prev;
            }
        }
        prev = m[k][k];
    }
    sign * m[n - 1][n - 1]
}

fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    fn go(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            if n - i < k - cur.len() {
                break;
            }
            cur.push(i);
            go(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(0, n, k, &mut Vec::new(), &mut out);
    out
}

/// Invariant factors as `D_k / D_{k-1}`, where `D_k` is the gcd of all
/// `k x k` minors. Brute force over minors; independent of any elimination
/// on the matrix itself.
pub fn determinantal_factors(a: &IntMatrix) -> Vec<BigInt> {
    let m = to_i128(a);
    let (rows, cols) = (a.rows(), a.cols());
    let mut factors = Vec::new();
    let mut prev = 1i128;
    for k in 1..=rows.min(cols) {
        let mut g = 0i128;
        'outer: for rs in subsets(rows, k) {
            for cs in subsets(cols, k) {
                let minor: Vec<Vec<i128>> = rs.iter().map(|&i| cs.iter().map(|&j| m[i][j]).collect()).collect();
                g = g.gcd(&det_i128(minor));
                if g == 1 {
                    break 'outer;
                }
            }
        }
        if g == 0 {
            break;
        }
        factors.push(BigInt::from(g / prev));
        prev = g;
    }
    factors
}

/// Random unimodular matrix together with its inverse, as a product of
/// elementary matrices.
pub fn random_unimodular<R: Rng>(rng: &mut R, n: usize, steps: usize) -> (IntMatrix, IntMatrix) {
    let mut u = IntMatrix::identity(n);
    let mut inv = IntMatrix::identity(n);
    if n == 0 {
        return (u, inv);
    }
    for _ in 0..steps {
        let mut e = IntMatrix::identity(n);
        let mut e_inv = IntMatrix::identity(n);
        match rng.gen_range(0..3) {
            0 if n > 1 => {
                let i = rng.gen_range(0..n);
                let mut j = rng.gen_range(0..n - 1);
                if j >= i {
                    j += 1;
                }
                let c: i64 = rng.gen_range(-3..=3);
                e.set(i, j, BigInt::from(c));
                e_inv.set(i, j, BigInt::from(-c));
            }
            1 if n > 1 => {
                let i = rng.gen_range(0..n);
                let j = (i + 1) % n;
                for m in [&mut e, &mut e_inv] {
                    m.set(i, i, BigInt::from(0));
                    m.set(j, j, BigInt::from(0));
                    m.set(i, j, BigInt::from(1));
                    m.set(j, i, BigInt::from(1));
                }
            }
            _ => {
                let i = rng.gen_range(0..n);
                e.set(i, i, BigInt::from(-1));
                e_inv.set(i, i, BigInt::from(-1));
            }
        }
        u = &e * &u;
        inv = &inv * &e_inv;
    }
    (u, inv)
}

/// Building blocks of a complex whose homology is known by construction.
#[derive(Clone, Debug)]
pub enum Piece {
    /// A cycle in degree k that bounds nothing: contributes Z to H_k.
    Free(usize),
    /// Cells in degrees k and k+1 with boundary t times the lower one:
    /// contributes Z/t to H_k (nothing if t = 1).
    Pair(usize, u64),
}

pub struct KnownComplex {
    pub complex: ChainComplexData,
    pub homology: Vec<FgAbGroup>,
}

pub fn build(pieces: &[Piece], seed: u64) -> KnownComplex {
    let mut ranks = [0usize; 4];
    let mut relations: Vec<(usize, usize, usize, u64)> = Vec::new(); // (k, lower idx, upper idx, t)
    let mut orders: Vec<Vec<BigInt>> = vec![Vec::new(); 4];
    for piece in pieces {
        match *piece {
            Piece::Free(k) => {
                ranks[k] += 1;
                orders[k].push(BigInt::from(0));
            }
            Piece::Pair(k, t) => {
                let lo = ranks[k];
                let hi = ranks[k + 1];
                ranks[k] += 1;
                ranks[k + 1] += 1;
                relations.push((k, lo, hi, t));
                orders[k].push(BigInt::from(t));
            }
        }
    }
    let mut boundaries: Vec<IntMatrix> = (1..4).map(|n| IntMatrix::zeros(ranks[n - 1], ranks[n])).collect();
    for &(k, lo, hi, t) in &relations {
        boundaries[k].set(lo, hi, BigInt::from(t));
    }

    let mut rng = StdRng::seed_from_u64(seed);
    let changes: Vec<(IntMatrix, IntMatrix)> =
        ranks.iter().map(|&r| random_unimodular(&mut rng, r, 3 * r + 2)).collect();
    let conjugated: Vec<IntMatrix> =
        (1..4).map(|n| &(&changes[n - 1].0 * &boundaries[n - 1]) * &changes[n].1).collect();

    let complex = ChainComplexData::from_matrices(ranks.to_vec(), conjugated).expect("conjugation keeps d.d = 0");
    let homology = orders.into_iter().map(FgAbGroup::from_cyclic_orders).collect();
    KnownComplex { complex, homology }
}

/// Pieces for a complex with the homology of a closed orientable 3-manifold:
/// H = (Z, Z^d ⊕ T, Z^d, Z), padded with cancelling pairs.
pub fn manifold_like(d: usize, torsion: &[u64], cancel: &[usize]) -> Vec<Piece> {
    let mut pieces = vec![Piece::Free(0), Piece::Free(3)];
    for _ in 0..d {
        pieces.push(Piece::Free(1));
        pieces.push(Piece::Free(2));
    }
    pieces.extend(torsion.iter().map(|&t| Piece::Pair(1, t)));
    pieces.extend(cancel.iter().map(|&k| Piece::Pair(k, 1)));
    pieces
}
