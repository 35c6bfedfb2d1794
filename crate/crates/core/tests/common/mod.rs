//! Independent oracles shared by the integration tests.
#![allow(dead_code)]

use std::path::PathBuf;

use enriques_core::intlinalg::IntegerMatrix;
use num_bigint::BigInt;
use num_traits::ToPrimitive;
use rand::Rng;

pub fn fixture(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests").join("fixtures").join(name)
}

pub fn to_i64_rows(m: &IntegerMatrix) -> Vec<Vec<i64>> {
    m.to_rows()
        .iter()
        .map(|r| r.iter().map(|x| x.to_i64().expect("small entry")).collect())
        .collect()
}

pub fn big(v: &[i64]) -> Vec<BigInt> {
    v.iter().map(|&x| BigInt::from(x)).collect()
}

pub fn form_i64(g: &[Vec<i64>], x: &[i64], y: &[i64]) -> i64 {
    let mut s = 0;
    for i in 0..x.len() {
        for j in 0..y.len() {
            s += x[i] * g[i][j] * y[j];
        }
    }
    s
}

/// Inertia counts from cyclic Jacobi eigenvalue iteration in f64.
pub fn float_signature(g: &[Vec<i64>]) -> (usize, usize, usize) {
    let n = g.len();
    let mut a: Vec<Vec<f64>> = g.iter().map(|r| r.iter().map(|&x| x as f64).collect()).collect();
    for _ in 0..200 {
        let off: f64 = (0..n)
            .flat_map(|i| (0..n).filter(move |&j| j != i).map(move |j| (i, j)))
            .map(|(i, j)| a[i][j] * a[i][j])
            .sum();
        if off < 1e-22 {
            break;
        }
        for p in 0..n {
            for q in p + 1..n {
                if a[p][q].abs() < 1e-300 {
                    continue;
                }
                let theta = (a[q][q] - a[p][p]) / (2.0 * a[p][q]);
                let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
                let t = if theta == 0.0 { 1.0 } else { t };
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;
                for k in 0..n {
                    let akp = a[k][p];
                    let akq = a[k][q];
                    a[k][p] = c * akp - s * akq;
                    a[k][q] = s * akp + c * akq;
                }
                for k in 0..n {
                    let apk = a[p][k];
                    let aqk = a[q][k];
                    a[p][k] = c * apk - s * aqk;
                    a[q][k] = s * apk + c * aqk;
                }
            }
        }
    }
    let scale = g.iter().flatten().map(|x| x.abs()).max().unwrap_or(1).max(1) as f64;
    let tol = 1e-8 * scale * n as f64;
    let mut sig = (0, 0, 0);
    for i in 0..n {
        let d = a[i][i];
        if d > tol {
            sig.0 += 1;
        } else if d < -tol {
            sig.1 += 1;
        } else {
            sig.2 += 1;
        }
    }
    sig
}

/// The 240 roots of E8 in the standard model, with doubled coordinates:
/// integer vectors with one of the two forms `(+-2, +-2, 0^6)` permuted, or
/// `(+-1)^8` with an even number of minus signs. Found by scanning the box
/// `{-2..2}^8` for vectors of squared length 8 in the lattice.
pub fn e8_roots_doubled() -> Vec<[i64; 8]> {
    let mut out = Vec::new();
    let mut v = [-2i64; 8];
    loop {
        let sq: i64 = v.iter().map(|x| x * x).sum();
        let all_even = v.iter().all(|x| x % 2 == 0);
        let all_odd = v.iter().all(|x| x % 2 != 0);
        let sum: i64 = v.iter().sum();
        // doubled coordinates of D8 + (D8 + 1/2): halves sum to an even integer
        let in_lattice = (all_even && (sum / 2) % 2 == 0) || (all_odd && (sum / 2) % 2 == 0);
        if sq == 8 && in_lattice {
            out.push(v);
        }
        let mut i = 0;
        loop {
            if i == 8 {
                return out;
            }
            if v[i] < 2 {
                v[i] += 1;
                break;
            }
            v[i] = -2;
            i += 1;
        }
    }
}

/// Simple roots in doubled coordinates, numbered to match the (-E8) Gram matrix.
pub fn e8_simple_roots_doubled() -> [[i64; 8]; 8] {
    let mut r = [[0i64; 8]; 8];
    r[0] = [1, -1, -1, -1, -1, -1, -1, 1];
    r[1][0] = 2;
    r[1][1] = 2;
    for k in 2..8 {
        r[k][k - 1] = 2;
        r[k][k - 2] = -2;
    }
    r
}

pub fn random_even_gram<R: Rng>(rng: &mut R, n: usize, bound: i64) -> Vec<Vec<i64>> {
    let mut g = vec![vec![0; n]; n];
    for i in 0..n {
        g[i][i] = 2 * rng.gen_range(-bound / 2..=bound / 2);
        for j in i + 1..n {
            let x = rng.gen_range(-bound..=bound);
            g[i][j] = x;
            g[j][i] = x;
        }
    }
    g
}

pub fn random_symmetric<R: Rng>(rng: &mut R, n: usize, bound: i64) -> Vec<Vec<i64>> {
    let mut g = vec![vec![0; n]; n];
    for i in 0..n {
        for j in i..n {
            let x = rng.gen_range(-bound..=bound);
            g[i][j] = x;
            g[j][i] = x;
        }
    }
    g
}

pub fn matrix(rows: &[Vec<i64>]) -> IntegerMatrix {
    IntegerMatrix::from_rows(rows).expect("rectangular")
}

/// Rank over F2 of rows given as bitmasks.
pub fn f2_rank(mut rows: Vec<u64>) -> usize {
    let mut rank = 0;
    for bit in 0..64 {
        let mask = 1u64 << bit;
        let Some(p) = (rank..rows.len()).find(|&i| rows[i] & mask != 0) else {
            continue;
        };
        rows.swap(rank, p);
        for i in 0..rows.len() {
            if i != rank && rows[i] & mask != 0 {
                rows[i] ^= rows[rank];
            }
        }
        rank += 1;
    }
    rank
}

pub fn bits_to_mask(bits: &[bool]) -> u64 {
    bits.iter().enumerate().fold(0, |m, (i, &b)| m | (u64::from(b) << i))
}

pub fn mask_to_bits(mask: u64, n: usize) -> Vec<bool> {
    (0..n).map(|i| mask >> i & 1 == 1).collect()
}
