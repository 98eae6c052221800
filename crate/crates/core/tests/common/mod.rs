//! Brute-force reference implementations, independent of the library's
//! rank and subset machinery. Every division is checked for exactness.

#![allow(dead_code)]

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};

use exactpr::ratlin::format_rational;
use exactpr::ratlin::sample::sample_integers;
use exactpr::{Frame, Seed};

/// Frame vectors with denominators cleared; positive rescaling of a vector
/// changes no rank.
pub fn to_ints(frame: &Frame) -> Vec<Vec<BigInt>> {
    frame
        .vectors()
        .iter()
        .map(|v| {
            let parts: Vec<(BigInt, BigInt)> = v
                .iter()
                .map(|r| {
                    let s = format_rational(r);
                    match s.split_once('/') {
                        Some((p, q)) => (p.parse().unwrap(), q.parse().unwrap()),
                        None => (s.parse().unwrap(), BigInt::one()),
                    }
                })
                .collect();
            let l = parts.iter().fold(BigInt::one(), |l, (_, q)| &l / l.gcd(q) * q);
            parts.iter().map(|(p, q)| p * (&l / q)).collect()
        })
        .collect()
}

/// Rank of the given rows by fraction-free elimination, in i128 while the
/// intermediate minors fit and in big integers otherwise.
pub fn rank(rows: &[Vec<BigInt>]) -> usize {
    let small: Option<Vec<Vec<i128>>> =
        rows.iter().map(|r| r.iter().map(|x| x.to_i64().map(i128::from)).collect()).collect();
    if let Some(r) = small.and_then(rank_i128) {
        return r;
    }
    rank_big(rows.to_vec())
}

fn rank_i128(mut a: Vec<Vec<i128>>) -> Option<usize> {
    let m = a.len();
    if m == 0 {
        return Some(0);
    }
    let cols = a[0].len();
    let mut r = 0;
    let mut prev: i128 = 1;
    for c in 0..cols {
        if r == m {
            break;
        }
        let Some(p) = (r..m).find(|&i| a[i][c] != 0) else { continue };
        a.swap(r, p);
        for i in r + 1..m {
            for j in c + 1..cols {
                let num = a[r][c].checked_mul(a[i][j])?.checked_sub(a[i][c].checked_mul(a[r][j])?)?;
                assert_eq!(num % prev, 0, "inexact division in oracle");
                a[i][j] = num / prev;
            }
            a[i][c] = 0;
        }
        prev = a[r][c];
        r += 1;
    }
    Some(r)
}

fn rank_big(mut a: Vec<Vec<BigInt>>) -> usize {
    let m = a.len();
    if m == 0 {
        return 0;
    }
    let cols = a[0].len();
    let mut r = 0;
    let mut prev = BigInt::one();
    for c in 0..cols {
        if r == m {
            break;
        }
        let Some(p) = (r..m).find(|&i| !a[i][c].is_zero()) else { continue };
        a.swap(r, p);
        for i in r + 1..m {
            for j in c + 1..cols {
                let num = &a[r][c] * &a[i][j] - &a[i][c] * &a[r][j];
                assert!((&num % &prev).is_zero(), "inexact division in oracle");
                a[i][j] = num / &prev;
            }
            a[i][c] = BigInt::zero();
        }
        prev = a[r][c].clone();
        r += 1;
    }
    r
}

fn pick(vs: &[Vec<BigInt>], mask: u64) -> Vec<Vec<BigInt>> {
    (0..vs.len()).filter(|i| mask >> i & 1 == 1).map(|i| vs[i].clone()).collect()
}

/// Complement property over every subset, with no symmetry reduction.
pub fn complement_property(vs: &[Vec<BigInt>], n: usize) -> bool {
    let full = (1u64 << vs.len()) - 1;
    (0..=full).all(|m| rank(&pick(vs, m)) == n || rank(&pick(vs, full ^ m)) == n)
}

pub fn exact(vs: &[Vec<BigInt>], n: usize) -> bool {
    complement_property(vs, n)
        && (0..vs.len()).all(|i| {
            let mut rest = vs.to_vec();
            rest.remove(i);
            !complement_property(&rest, n)
        })
}

pub fn spark(vs: &[Vec<BigInt>], n: usize) -> usize {
    let full = (1u64 << vs.len()) - 1;
    let mut best = n + 1;
    for m in 1..=full {
        let k = m.count_ones() as usize;
        if k < best && rank(&pick(vs, m)) < k {
            best = k;
        }
    }
    best
}

/// `min_Λ max(dim span F_Λ, dim span F_Λᶜ)`.
pub fn d_max(vs: &[Vec<BigInt>]) -> usize {
    let full = (1u64 << vs.len()) - 1;
    (0..=full).map(|m| rank(&pick(vs, m)).max(rank(&pick(vs, full ^ m)))).min().unwrap()
}

/// Seeded integer frame with entries in `[lo, hi]`, or `None` if it does
/// not span.
pub fn random_frame(n: usize, len: usize, lo: i64, hi: i64, seed: u64) -> Option<Frame> {
    let m = sample_integers(n, len, lo, hi, &mut Seed(seed).rng());
    Frame::from_matrix(&m).ok()
}

pub fn tri(n: usize) -> usize {
    n * (n + 1) / 2
}
