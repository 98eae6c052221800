//! Certified multi-modular rank for integer column families.
//!
//! Rank modulo a prime never exceeds the rank over Q, so a full-rank answer
//! modulo any prime is already exact. For deficient answers we take the
//! maximum over a set of primes whose product exceeds the Hadamard bound on
//! every minor that could certify a larger rank: a nonzero integer minor
//! bounded by `H` cannot be divisible by primes whose product exceeds `H`, so
//! the maximum over those primes is the rank over Q.

use std::sync::OnceLock;

use num_bigint::BigInt;
use num_traits::{ToPrimitive, Zero};

use super::{abs_bits, primitive, Rational};

/// Every prime in the pool exceeds this many bits.
const PRIME_FLOOR_BITS: u64 = 60;
const PRIME_POOL: usize = 128;

fn mul_mod(a: u64, b: u64, p: u64) -> u64 {
    ((a as u128 * b as u128) % p as u128) as u64
}

fn pow_mod(mut a: u64, mut e: u64, p: u64) -> u64 {
    let mut r = 1u64;
    a %= p;
    while e > 0 {
        if e & 1 == 1 {
            r = mul_mod(r, a, p);
        }
        a = mul_mod(a, a, p);
        e >>= 1;
    }
    r
}

pub(crate) fn inv_mod(a: u64, p: u64) -> u64 {
    pow_mod(a, p - 2, p)
}

/// Deterministic Miller-Rabin; these bases are exact for all 64-bit inputs.
pub fn is_prime_u64(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    const BASES: [u64; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];
    for &b in &BASES {
        if n.is_multiple_of(b) {
            return n == b;
        }
    }
    let mut d = n - 1;
    let mut s = 0;
    while d.is_multiple_of(2) {
        d /= 2;
        s += 1;
    }
    'outer: for &a in &BASES {
        let mut x = pow_mod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul_mod(x, x, n);
            if x == n - 1 {
                continue 'outer;
            }
        }
        return false;
    }
    true
}

/// Descending primes just below 2^61.
pub fn primes() -> &'static [u64] {
    static POOL: OnceLock<Vec<u64>> = OnceLock::new();
    POOL.get_or_init(|| {
        let mut out = Vec::with_capacity(PRIME_POOL);
        let mut c = (1u64 << 61) - 1;
        while out.len() < PRIME_POOL {
            if is_prime_u64(c) {
                out.push(c);
            }
            c -= 2;
        }
        out
    })
}

pub(crate) fn reduce(x: &BigInt, p: u64) -> u64 {
    let r = (x % BigInt::from(p)).to_i128().expect("residue fits");
    (if r < 0 { r + p as i128 } else { r }) as u64
}

/// Row-echelon basis modulo a prime, grown one vector at a time.
#[derive(Clone, Debug)]
pub(crate) struct EchelonMod {
    p: u64,
    rows: Vec<(usize, Vec<u64>)>,
}

impl EchelonMod {
    pub(crate) fn new(p: u64) -> Self {
        EchelonMod { p, rows: Vec::new() }
    }

    pub(crate) fn rank(&self) -> usize {
        self.rows.len()
    }

    /// Reduces `v` against the basis; keeps it and returns true if independent.
    pub(crate) fn insert(&mut self, v: &[u64]) -> bool {
        let p = self.p;
        let mut w = v.to_vec();
        for (piv, row) in &self.rows {
            let f = w[*piv];
            if f != 0 {
                for (x, &r) in w.iter_mut().zip(row) {
                    if r != 0 {
                        *x = (*x + p - mul_mod(f, r, p)) % p;
                    }
                }
            }
        }
        match w.iter().position(|&x| x != 0) {
            None => false,
            Some(piv) => {
                let inv = inv_mod(w[piv], p);
                for x in w.iter_mut() {
                    *x = mul_mod(*x, inv, p);
                }
                self.rows.push((piv, w));
                true
            }
        }
    }
}

/// Rank of a set of vectors modulo `p`, stopping early at `cap`.
pub(crate) fn rank_mod<'a>(vectors: impl IntoIterator<Item = &'a [u64]>, p: u64, cap: usize) -> usize {
    let mut e = EchelonMod::new(p);
    for v in vectors {
        e.insert(v);
        if e.rank() == cap {
            break;
        }
    }
    e.rank()
}

/// Kernel vector of `n-1` independent vectors in `F_p^n`, i.e. the normal of
/// their span. `None` if the vectors are dependent modulo `p`.
pub(crate) fn normal_mod(vectors: &[&[u64]], n: usize, p: u64) -> Option<Vec<u64>> {
    let mut e = EchelonMod::new(p);
    for v in vectors {
        if !e.insert(v) {
            return None;
        }
    }
    if e.rank() != n - 1 {
        return None;
    }
    // back-substitute into reduced form, then read off the free coordinate
    let mut rows = e.rows;
    rows.sort_by_key(|(piv, _)| *piv);
    for i in (0..rows.len()).rev() {
        let (pi, ri) = (rows[i].0, rows[i].1.clone());
        for (_, rj) in rows.iter_mut().take(i) {
            let f = rj[pi];
            if f != 0 {
                for (x, &r) in rj.iter_mut().zip(&ri) {
                    *x = (*x + p - mul_mod(f, r, p)) % p;
                }
            }
        }
    }
    let pivots: Vec<usize> = rows.iter().map(|(piv, _)| *piv).collect();
    let free = (0..n).find(|c| !pivots.contains(c)).expect("one free column");
    let mut z = vec![0u64; n];
    z[free] = 1;
    for (piv, row) in &rows {
        z[*piv] = (p - row[free]) % p;
    }
    Some(z)
}

pub(crate) fn dot_mod(a: &[u64], b: &[u64], p: u64) -> u64 {
    a.iter().zip(b).fold(0u64, |acc, (&x, &y)| (acc + mul_mod(x, y, p)) % p)
}

/// An ordered family of vectors in `Q^dim`, stored as primitive integer
/// vectors with residues modulo enough primes to certify any rank query.
#[derive(Clone, Debug)]
pub struct ModularFamily {
    dim: usize,
    ints: Vec<Vec<BigInt>>,
    primes: Vec<u64>,
    /// residues[prime][vector][coordinate]
    residues: Vec<Vec<Vec<u64>>>,
}

impl ModularFamily {
    pub fn new(dim: usize, vectors: &[Vec<Rational>]) -> Self {
        let ints: Vec<Vec<BigInt>> = vectors.iter().map(|v| primitive(v)).collect();
        Self::from_integers(dim, ints)
    }

    pub fn from_integers(dim: usize, ints: Vec<Vec<BigInt>>) -> Self {
        // log2 of every column norm is below half the bit length of its squared norm
        let mut half_bits: Vec<u64> = ints
            .iter()
            .map(|v| {
                let sq = v.iter().fold(BigInt::zero(), |acc, x| acc + x * x);
                if sq.is_zero() {
                    0
                } else {
                    abs_bits(&sq).div_ceil(2)
                }
            })
            .collect();
        half_bits.sort_unstable_by(|a, b| b.cmp(a));
        let bound: u64 = half_bits.iter().take(dim).sum();
        let needed = (bound / PRIME_FLOOR_BITS + 1) as usize;
        let pool = primes();
        assert!(
            needed <= pool.len(),
            "entries too large for the modular rank engine ({bound} bits)"
        );
        let primes = pool[..needed].to_vec();
        let residues = primes
            .iter()
            .map(|&p| ints.iter().map(|v| v.iter().map(|x| reduce(x, p)).collect()).collect())
            .collect();
        ModularFamily { dim, ints, primes, residues }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn len(&self) -> usize {
        self.ints.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ints.is_empty()
    }

    pub fn integer_vectors(&self) -> &[Vec<BigInt>] {
        &self.ints
    }

    pub fn prime_count(&self) -> usize {
        self.primes.len()
    }

    pub(crate) fn residue(&self, k: usize, j: usize) -> &[u64] {
        &self.residues[k][j]
    }

    pub fn is_zero_vector(&self, j: usize) -> bool {
        self.ints[j].iter().all(|x| x.is_zero())
    }

    /// Exact rank of the vectors with the given indices.
    pub fn rank_of(&self, idx: &[usize]) -> usize {
        let full = idx.len().min(self.dim);
        let mut best = 0;
        for k in 0..self.primes.len() {
            let r = rank_mod(idx.iter().map(|&j| self.residue(k, j)), self.primes[k], full);
            best = best.max(r);
            if best == full {
                break;
            }
        }
        best
    }

    /// Exact rank of the vectors selected by a bitmask (bit j = vector j).
    pub fn rank_of_mask(&self, mask: u64) -> usize {
        self.rank_of(&mask_indices(mask))
    }

    /// Whether the selected vectors span `Q^dim`.
    pub fn spans_mask(&self, mask: u64) -> bool {
        if (mask.count_ones() as usize) < self.dim {
            return false;
        }
        self.rank_of_mask(mask) == self.dim
    }

    /// Bitmask of the family members lying in the span of `basis`, given that
    /// `basis` holds `dim - 1` vectors. `None` when they are dependent.
    ///
    /// Normals modulo the later primes are only computed when the first prime
    /// cannot settle a question.
    pub(crate) fn hyperplane_members(&self, basis: &[usize]) -> Option<u64> {
        let n = self.dim;
        debug_assert_eq!(basis.len(), n - 1);
        let mut normals: Vec<Option<Option<Vec<u64>>>> = vec![None; self.primes.len()];
        let normal = |k: usize, cache: &mut Vec<Option<Option<Vec<u64>>>>| -> Option<Vec<u64>> {
            if cache[k].is_none() {
                let vs: Vec<&[u64]> = basis.iter().map(|&j| self.residue(k, j)).collect();
                cache[k] = Some(normal_mod(&vs, n, self.primes[k]));
            }
            cache[k].clone().flatten()
        };
        if !(0..self.primes.len()).any(|k| normal(k, &mut normals).is_some()) {
            return None;
        }
        let mut mask = basis.iter().fold(0u64, |m, &j| m | 1 << j);
        for j in 0..self.len() {
            if mask & (1 << j) != 0 {
                continue;
            }
            // member iff the determinant with the basis vanishes modulo every prime
            let member = (0..self.primes.len()).all(|k| match normal(k, &mut normals) {
                None => true,
                Some(z) => dot_mod(&z, self.residue(k, j), self.primes[k]) == 0,
            });
            if member {
                mask |= 1 << j;
            }
        }
        Some(mask)
    }

    /// All hyperplanes (rank `dim - 1` flats) of the family as member bitmasks,
    /// sorted by descending size then ascending mask.
    pub fn hyperplanes(&self) -> Vec<u64> {
        let n = self.dim;
        let len = self.len();
        assert!(len <= 64, "hyperplane enumeration supports at most 64 vectors");
        let mut found = std::collections::HashSet::new();
        if n == 1 {
            // the only hyperplane of Q^1 is {0}
            let zeros = (0..len).filter(|&j| self.is_zero_vector(j)).fold(0u64, |m, j| m | 1 << j);
            found.insert(zeros);
        } else {
            for_each_combination(len, n - 1, |basis| {
                if let Some(mask) = self.hyperplane_members(basis) {
                    found.insert(mask);
                }
            });
        }
        let mut out: Vec<u64> = found.into_iter().collect();
        out.sort_unstable_by(|a, b| b.count_ones().cmp(&a.count_ones()).then(a.cmp(b)));
        out
    }
}

pub fn mask_indices(mask: u64) -> Vec<usize> {
    let mut out = Vec::with_capacity(mask.count_ones() as usize);
    let mut m = mask;
    while m != 0 {
        let j = m.trailing_zeros() as usize;
        out.push(j);
        m &= m - 1;
    }
    out
}

/// Calls `f` with every `k`-subset of `0..n` in lexicographic order.
pub fn for_each_combination(n: usize, k: usize, mut f: impl FnMut(&[usize])) {
    if k > n {
        return;
    }
    let mut idx: Vec<usize> = (0..k).collect();
    loop {
        f(&idx);
        let Some(i) = (0..k).rev().find(|&i| idx[i] < i + n - k) else {
            return;
        };
        idx[i] += 1;
        for j in i + 1..k {
            idx[j] = idx[j - 1] + 1;
        }
    }
}

/// Short-circuiting variant of [`for_each_combination`].
pub fn find_combination(n: usize, k: usize, mut f: impl FnMut(&[usize]) -> bool) -> Option<Vec<usize>> {
    let mut hit = None;
    let mut done = false;
    for_each_combination(n, k, |c| {
        if !done && f(c) {
            hit = Some(c.to_vec());
            done = true;
        }
    });
    hit
}
