//! Exact rational linear algebra.
//!
//! Everything here works over `BigRational`; there is no floating point in any
//! decision path. Rank uses fraction-free (Bareiss) elimination on an integer
//! copy of the matrix, nullspaces use reduced row echelon form.
//!
//! [`modular`] holds the certified multi-modular rank engine used by the hot
//! subset scans, and [`sample`] the seeded integer sampling.

pub mod modular;
pub mod sample;

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

pub use sample::{sample_pattern, Cell, Seed, ZeroNonzeroMask};

pub type Rational = BigRational;

pub fn rat(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

pub fn ratio(p: i64, q: i64) -> Rational {
    Rational::new(BigInt::from(p), BigInt::from(q))
}

/// Formats a rational as `"p"` or `"p/q"`.
pub fn format_rational(r: &Rational) -> String {
    if r.is_integer() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// Parses `"p"`, `"-p"` or `"p/q"` into a reduced rational.
pub fn parse_rational(s: &str) -> Result<Rational> {
    let s = s.trim();
    let bad = || Error::Parse(format!("not a rational: {s:?}"));
    match s.split_once('/') {
        None => s.parse::<BigInt>().map(Rational::from_integer).map_err(|_| bad()),
        Some((p, q)) => {
            let p: BigInt = p.trim().parse().map_err(|_| bad())?;
            let q: BigInt = q.trim().parse().map_err(|_| bad())?;
            if q.is_zero() {
                return Err(Error::Parse(format!("zero denominator in {s:?}")));
            }
            Ok(Rational::new(p, q))
        }
    }
}

/// Dense row-major matrix of exact rationals.
///
/// `BigRational` keeps every entry in lowest terms with a positive denominator.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct RatMatrix {
    rows: usize,
    cols: usize,
    data: Vec<Rational>,
}

impl RatMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        RatMatrix { rows, cols, data: vec![Rational::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.set(i, i, Rational::one());
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<Rational>>) -> Result<Self> {
        if rows.is_empty() {
            return Err(Error::DimensionMismatch("matrix needs at least one row".into()));
        }
        let cols = rows[0].len();
        if rows.iter().any(|r| r.len() != cols) {
            return Err(Error::DimensionMismatch("ragged rows".into()));
        }
        let nrows = rows.len();
        Ok(RatMatrix { rows: nrows, cols, data: rows.into_iter().flatten().collect() })
    }

    /// Builds a matrix whose columns are the given vectors (all of length `rows`).
    pub fn from_columns(rows: usize, columns: &[Vec<Rational>]) -> Result<Self> {
        if columns.iter().any(|c| c.len() != rows) {
            return Err(Error::DimensionMismatch(format!("columns must have length {rows}")));
        }
        let mut m = Self::zeros(rows, columns.len());
        for (j, c) in columns.iter().enumerate() {
            for (i, v) in c.iter().enumerate() {
                m.set(i, j, v.clone());
            }
        }
        Ok(m)
    }

    /// Convenience for tests and fixtures. Panics on ragged input.
    pub fn from_i64(rows: &[&[i64]]) -> Self {
        let data = rows.iter().map(|r| r.iter().map(|&v| rat(v)).collect()).collect();
        Self::from_rows(data).expect("well-formed integer matrix")
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &Rational {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: Rational) {
        self.data[i * self.cols + j] = v;
    }

    pub fn row(&self, i: usize) -> Vec<Rational> {
        self.data[i * self.cols..(i + 1) * self.cols].to_vec()
    }

    pub fn column(&self, j: usize) -> Vec<Rational> {
        (0..self.rows).map(|i| self.get(i, j).clone()).collect()
    }

    pub fn columns(&self) -> Vec<Vec<Rational>> {
        (0..self.cols).map(|j| self.column(j)).collect()
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t.set(j, i, self.get(i, j).clone());
            }
        }
        t
    }

    pub fn mul(&self, other: &RatMatrix) -> Result<RatMatrix> {
        if self.cols != other.rows {
            return Err(Error::DimensionMismatch(format!(
                "{}x{} times {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let mut out = Self::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let b = other.get(k, j);
                    if !b.is_zero() {
                        let idx = i * other.cols + j;
                        out.data[idx] = &out.data[idx] + a * b;
                    }
                }
            }
        }
        Ok(out)
    }

    pub fn mul_vec(&self, v: &[Rational]) -> Vec<Rational> {
        assert_eq!(v.len(), self.cols);
        (0..self.rows)
            .map(|i| {
                (0..self.cols).fold(Rational::zero(), |acc, j| acc + self.get(i, j) * &v[j])
            })
            .collect()
    }

    pub fn select_columns(&self, idx: &[usize]) -> RatMatrix {
        let mut m = Self::zeros(self.rows, idx.len());
        for (jj, &j) in idx.iter().enumerate() {
            for i in 0..self.rows {
                m.set(i, jj, self.get(i, j).clone());
            }
        }
        m
    }

    pub fn select_rows(&self, idx: &[usize]) -> RatMatrix {
        let mut m = Self::zeros(idx.len(), self.cols);
        for (ii, &i) in idx.iter().enumerate() {
            for j in 0..self.cols {
                m.set(ii, j, self.get(i, j).clone());
            }
        }
        m
    }

    /// Stacks `other` below `self`.
    pub fn vstack(&self, other: &RatMatrix) -> Result<RatMatrix> {
        if self.cols != other.cols {
            return Err(Error::DimensionMismatch("vstack column counts differ".into()));
        }
        let mut data = self.data.clone();
        data.extend(other.data.iter().cloned());
        Ok(RatMatrix { rows: self.rows + other.rows, cols: self.cols, data })
    }

    /// Places `other` to the right of `self`.
    pub fn hstack(&self, other: &RatMatrix) -> Result<RatMatrix> {
        if self.rows != other.rows {
            return Err(Error::DimensionMismatch("hstack row counts differ".into()));
        }
        let mut m = Self::zeros(self.rows, self.cols + other.cols);
        for i in 0..self.rows {
            for j in 0..self.cols {
                m.set(i, j, self.get(i, j).clone());
            }
            for j in 0..other.cols {
                m.set(i, self.cols + j, other.get(i, j).clone());
            }
        }
        Ok(m)
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Zero::is_zero)
    }

    /// Integer copy with every row scaled by the lcm of its denominators.
    /// Row scaling by nonzero constants preserves rank and row space.
    fn integer_rows(&self) -> Vec<Vec<BigInt>> {
        (0..self.rows)
            .map(|i| {
                let row = &self.data[i * self.cols..(i + 1) * self.cols];
                let l = row.iter().fold(BigInt::one(), |acc, r| acc.lcm(r.denom()));
                row.iter().map(|r| r.numer() * (&l / r.denom())).collect()
            })
            .collect()
    }

    /// Exact rank over the rationals.
    pub fn rank(&self) -> usize {
        rank(self)
    }

    pub fn nullspace(&self) -> RatMatrix {
        nullspace(self)
    }

    /// Inverse of a square matrix, or `None` if singular.
    pub fn inverse(&self) -> Option<RatMatrix> {
        if self.rows != self.cols {
            return None;
        }
        let n = self.rows;
        let aug = self.hstack(&Self::identity(n)).ok()?;
        let (r, pivots) = rref(&aug);
        if pivots.len() < n || pivots[..n] != (0..n).collect::<Vec<_>>()[..] {
            return None;
        }
        let mut inv = Self::zeros(n, n);
        for i in 0..n {
            for j in 0..n {
                inv.set(i, j, r.get(i, n + j).clone());
            }
        }
        Some(inv)
    }
}

impl fmt::Debug for RatMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "RatMatrix {}x{} [", self.rows, self.cols)?;
        for i in 0..self.rows {
            let row: Vec<String> = self.row(i).iter().map(format_rational).collect();
            writeln!(f, "  [{}]", row.join(", "))?;
        }
        write!(f, "]")
    }
}

/// Bareiss fraction-free elimination on an integer matrix; returns the rank.
pub fn bareiss_rank(mut a: Vec<Vec<BigInt>>) -> usize {
    let rows = a.len();
    if rows == 0 {
        return 0;
    }
    let cols = a[0].len();
    let mut prev = BigInt::one();
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let Some(p) = (r..rows).find(|&i| !a[i][c].is_zero()) else {
            continue;
        };
        a.swap(r, p);
        for i in r + 1..rows {
            for j in c + 1..cols {
                let v = &a[r][c] * &a[i][j] - &a[i][c] * &a[r][j];
                a[i][j] = v / &prev;
            }
            a[i][c] = BigInt::zero();
        }
        prev = a[r][c].clone();
        r += 1;
    }
    r
}

/// Exact rank over Q.
pub fn rank(m: &RatMatrix) -> usize {
    // eliminate along the shorter side
    if m.rows > m.cols {
        return bareiss_rank(m.transpose().integer_rows());
    }
    bareiss_rank(m.integer_rows())
}

/// Reduced row echelon form and pivot columns.
pub fn rref(m: &RatMatrix) -> (RatMatrix, Vec<usize>) {
    let mut a = m.clone();
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..a.cols {
        if r == a.rows {
            break;
        }
        let Some(p) = (r..a.rows).find(|&i| !a.get(i, c).is_zero()) else {
            continue;
        };
        if p != r {
            for j in 0..a.cols {
                a.data.swap(p * a.cols + j, r * a.cols + j);
            }
        }
        let inv = a.get(r, c).recip();
        for j in c..a.cols {
            let v = a.get(r, j) * &inv;
            a.set(r, j, v);
        }
        for i in 0..a.rows {
            if i == r || a.get(i, c).is_zero() {
                continue;
            }
            let f = a.get(i, c).clone();
            for j in c..a.cols {
                let v = a.get(i, j) - &f * a.get(r, j);
                a.set(i, j, v);
            }
        }
        pivots.push(c);
        r += 1;
    }
    (a, pivots)
}

/// Scales a rational vector to a primitive integer vector (gcd 1, same direction).
pub fn primitive(v: &[Rational]) -> Vec<BigInt> {
    let l = v.iter().fold(BigInt::one(), |acc, r| acc.lcm(r.denom()));
    let ints: Vec<BigInt> = v.iter().map(|r| r.numer() * (&l / r.denom())).collect();
    let g = ints.iter().fold(BigInt::zero(), |acc, x| acc.gcd(x));
    if g.is_zero() {
        return ints;
    }
    ints.into_iter().map(|x| x / &g).collect()
}

/// Basis of `{x : M x = 0}` as the columns of the result, each scaled to a
/// primitive integer vector.
pub fn nullspace(m: &RatMatrix) -> RatMatrix {
    let (r, pivots) = rref(m);
    let free: Vec<usize> = (0..m.cols).filter(|c| !pivots.contains(c)).collect();
    let mut out = RatMatrix::zeros(m.cols, free.len());
    for (k, &fc) in free.iter().enumerate() {
        let mut v = vec![Rational::zero(); m.cols];
        v[fc] = Rational::one();
        for (row, &pc) in pivots.iter().enumerate() {
            v[pc] = -r.get(row, fc).clone();
        }
        for (i, x) in primitive(&v).into_iter().enumerate() {
            out.set(i, k, Rational::from_integer(x));
        }
    }
    out
}

pub fn dot(a: &[Rational], b: &[Rational]) -> Rational {
    a.iter().zip(b).fold(Rational::zero(), |acc, (x, y)| acc + x * y)
}

pub fn is_zero_vec(v: &[Rational]) -> bool {
    v.iter().all(Zero::is_zero)
}

pub(crate) fn abs_bits(x: &BigInt) -> u64 {
    x.abs().bits()
}
