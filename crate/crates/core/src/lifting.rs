//! The rank-one lifting `A ↦ (f_iᵀ A f_i)_i` and exact searches for rank-≤2
//! symmetric matrices in its kernel.
//!
//! Symmetric matrices are vectorised row-major over the upper triangle, with
//! off-diagonal coefficients of a lifted row doubled, so that
//! `row_i · vech(A) = f_iᵀ A f_i`.
//!
//! A rank-≤2 kernel element of indefinite or rank-one type is `x⊗x − y⊗y`
//! with `|⟨x,f_j⟩| = |⟨y,f_j⟩|` on the retained indices. Fixing a sign pattern
//! `ε` turns this into the linear system `⟨x,f_j⟩ = ε_j⟨y,f_j⟩` on
//! `(x, y) ∈ R^{2n}`. A definite element forces its generators orthogonal to
//! the retained vectors, so a rank-one element `u⊗u` exists as well; the
//! all-plus pattern already contains `(u, 0)`.

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::frames::{self, full_mask, Frame, IndexSet};
use crate::ratlin::modular::{for_each_combination, ModularFamily};
use crate::ratlin::{self, RatMatrix, Rational};

/// Default cap on frame length for [`pr_redundancy`].
pub const REDUNDANCY_CAP: usize = 16;

/// Upper-triangular, row-major index pairs of an `n × n` symmetric matrix.
pub fn vech_pairs(n: usize) -> Vec<(usize, usize)> {
    (0..n).flat_map(|i| (i..n).map(move |j| (i, j))).collect()
}

/// `vech(A)` of a symmetric matrix.
pub fn vech(a: &RatMatrix) -> Vec<Rational> {
    vech_pairs(a.rows()).into_iter().map(|(i, j)| a.get(i, j).clone()).collect()
}

/// Lifted row of `f`: `f_i f_j`, doubled off the diagonal.
pub fn lifted_row(f: &[Rational]) -> Vec<Rational> {
    vech_pairs(f.len())
        .into_iter()
        .map(|(i, j)| {
            let p = &f[i] * &f[j];
            if i == j {
                p
            } else {
                &p + &p
            }
        })
        .collect()
}

/// `x xᵀ − y yᵀ`.
pub fn outer_difference(x: &[Rational], y: &[Rational]) -> RatMatrix {
    let n = x.len();
    let mut a = RatMatrix::zeros(n, n);
    for i in 0..n {
        for j in 0..n {
            a.set(i, j, &x[i] * &x[j] - &y[i] * &y[j]);
        }
    }
    a
}

/// The lifted analysis matrix of a frame.
#[derive(Clone, Debug)]
pub struct LiftedSystem {
    pub frame: Frame,
    /// `N × n(n+1)/2`, row `i` is [`lifted_row`] of `f_i`.
    pub matrix: RatMatrix,
}

impl LiftedSystem {
    pub fn rank(&self) -> usize {
        self.matrix.rank()
    }

    pub fn kernel_dim(&self) -> usize {
        self.matrix.cols() - self.rank()
    }

    /// Kernel basis, one symmetric matrix per element.
    pub fn kernel(&self) -> Vec<RatMatrix> {
        let n = self.frame.dim();
        let ns = self.matrix.nullspace();
        let pairs = vech_pairs(n);
        (0..ns.cols())
            .map(|c| {
                let mut a = RatMatrix::zeros(n, n);
                for (k, &(i, j)) in pairs.iter().enumerate() {
                    a.set(i, j, ns.get(k, c).clone());
                    a.set(j, i, ns.get(k, c).clone());
                }
                a
            })
            .collect()
    }
}

pub fn lifted_operator(frame: &Frame) -> LiftedSystem {
    let rows = frame.vectors().iter().map(|f| lifted_row(f)).collect();
    let matrix = RatMatrix::from_rows(rows).expect("frame is non-empty");
    LiftedSystem { frame: frame.clone(), matrix }
}

/// Whether the lifted vectors `f_i ⊗ f_i` are linearly independent.
pub fn lifted_independent(frame: &Frame) -> bool {
    let rows: Vec<Vec<Rational>> = frame.vectors().iter().map(|f| lifted_row(f)).collect();
    let fam = ModularFamily::new(rows[0].len(), &rows);
    fam.rank_of(&(0..rows.len()).collect::<Vec<_>>()) == frame.len()
}

/// A nonzero `x⊗x − y⊗y` in the kernel of the lifting restricted to some `Λ`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct S2Witness {
    #[serde(with = "crate::format::rational_vec")]
    pub x: Vec<Rational>,
    #[serde(with = "crate::format::rational_vec")]
    pub y: Vec<Rational>,
    /// 0-based index outside `Λ` where the magnitudes differ.
    pub differing_index: Option<usize>,
}

impl S2Witness {
    /// Checks the witness exactly: `x ≠ ±y`, equal magnitudes on `Λ`, and
    /// unequal magnitudes at `differing_index` (which must lie outside `Λ`).
    pub fn validate(&self, frame: &Frame, lambda: &IndexSet) -> bool {
        let n = frame.dim();
        if self.x.len() != n || self.y.len() != n {
            return false;
        }
        let neg_y: Vec<Rational> = self.y.iter().map(|v| -v).collect();
        if self.x == self.y || self.x == neg_y {
            return false;
        }
        let q = |i: usize| {
            let f = frame.vector(i);
            let a = frames::inner(&self.x, f);
            let b = frames::inner(&self.y, f);
            &a * &a - &b * &b
        };
        if !lambda.indices().into_iter().all(|j| q(j).is_zero()) {
            return false;
        }
        match self.differing_index {
            None => true,
            Some(i) => i < frame.len() && !lambda.contains(i) && !q(i).is_zero(),
        }
    }

    pub fn matrix(&self) -> RatMatrix {
        outer_difference(&self.x, &self.y)
    }
}

/// Coefficient matrix of `⟨x,f_j⟩ − ε_j⟨y,f_j⟩ = 0`, `j ∈ idx`.
fn sign_system(frame: &Frame, idx: &[usize], signs: &[bool]) -> RatMatrix {
    let rows = idx
        .iter()
        .zip(signs)
        .map(|(&j, &plus)| {
            let f = frame.vector(j);
            let mut r = f.to_vec();
            r.extend(f.iter().map(|v| if plus { -v } else { v.clone() }));
            r
        })
        .collect();
    RatMatrix::from_rows(rows).expect("non-empty system")
}

/// Rows forcing `x = y` (`diff = true`) or `x = −y`.
fn tie_rows(n: usize, diff: bool) -> RatMatrix {
    let mut m = RatMatrix::zeros(n, 2 * n);
    for i in 0..n {
        m.set(i, i, Rational::one());
        m.set(i, n + i, if diff { -Rational::one() } else { Rational::one() });
    }
    m
}

fn split(z: &[Rational], n: usize) -> (Vec<Rational>, Vec<Rational>) {
    (z[..n].to_vec(), z[n..].to_vec())
}

fn is_tied(z: &[Rational], n: usize) -> (bool, bool) {
    let eq = (0..n).all(|i| z[i] == z[n + i]);
    let opp = (0..n).all(|i| z[i] == -&z[n + i]);
    (eq, opp)
}

fn basis_witness(frame: &Frame) -> S2Witness {
    let n = frame.dim();
    let mut x = vec![Rational::zero(); n];
    x[0] = Rational::one();
    S2Witness { x, y: vec![Rational::zero(); n], differing_index: None }
}

/// Exhaustive sign-pattern search for a nonzero `x⊗x − y⊗y` annihilated by
/// every `f_j`, `j ∈ Λ`.
///
/// For each pattern the solution space `V` of the linear system is compared
/// with its intersections with `{x = y}` and `{x = −y}`; a witness exists iff
/// `V` is strictly larger than both. `2^{|Λ|-1}` patterns; meant as the
/// reference oracle.
pub fn find_s2_element(frame: &Frame, lambda: &IndexSet) -> Option<S2Witness> {
    let n = frame.dim();
    let idx = lambda.indices();
    if idx.is_empty() {
        return Some(basis_witness(frame));
    }
    let m = idx.len();
    let eq = tie_rows(n, true);
    let opp = tie_rows(n, false);
    for rest in 0..(1u64 << (m - 1)) {
        let signs: Vec<bool> = (0..m).map(|k| k == 0 || rest >> (k - 1) & 1 == 0).collect();
        let sys = sign_system(frame, &idx, &signs);
        let dim_v = 2 * n - sys.rank();
        let dim_eq = 2 * n - sys.vstack(&eq).expect("width").rank();
        let dim_opp = 2 * n - sys.vstack(&opp).expect("width").rank();
        if dim_v > dim_eq && dim_v > dim_opp {
            let basis = sys.nullspace().columns();
            let z = escape_two_subspaces(&basis, n);
            let (x, y) = split(&z, n);
            return Some(S2Witness { x, y, differing_index: None });
        }
    }
    None
}

/// Some vector in the span of `basis` lying in neither `{x = y}` nor
/// `{x = −y}`; requires that such a vector exists.
fn escape_two_subspaces(basis: &[Vec<Rational>], n: usize) -> Vec<Rational> {
    let not_eq = basis.iter().find(|z| !is_tied(z, n).0).expect("V not inside x = y");
    if !is_tied(not_eq, n).1 {
        return not_eq.clone();
    }
    let not_opp = basis.iter().find(|z| !is_tied(z, n).1).expect("V not inside x = -y");
    if !is_tied(not_opp, n).0 {
        return not_opp.clone();
    }
    not_eq.iter().zip(not_opp).map(|(a, b)| a + b).collect()
}

/// A kernel element for `F_Λ` that is not in the kernel for `F`, with the
/// index outside `Λ` that separates them.
///
/// The rank-one phase handles non-spanning `Λ`. Otherwise the sign patterns
/// are explored depth first; a branch is cut once the indices with sign `+`
/// or those with sign `−` span `R^n` (then `x = y` or `x = −y` is forced) or
/// once every outside vector lies in the span of one of the two classes
/// (then every outside magnitude is forced equal). At each leaf the outside
/// quadratics are restricted to the solution space by congruence,
/// `S_i = a aᵀ − b bᵀ` with `a = W_xᵀ f_i`, `b = W_yᵀ f_i`, and a nonzero
/// `S_i` yields a point through a basis vector or a sum of two.
pub fn find_s2_witness(frame: &Frame, lambda: &IndexSet) -> Option<S2Witness> {
    let n = frame.dim();
    let len = frame.len();
    let fam = frame.family();
    let idx = lambda.indices();
    let outside = lambda.complement().indices();
    if outside.is_empty() {
        return None;
    }
    if !fam.spans_mask(lambda.mask()) {
        let rows = RatMatrix::from_rows(if idx.is_empty() {
            vec![vec![Rational::zero(); n]]
        } else {
            idx.iter().map(|&j| frame.vector(j).to_vec()).collect()
        })
        .expect("rows");
        let u = rows.nullspace().column(0);
        let i = outside
            .iter()
            .copied()
            .find(|&i| !frames::inner(&u, frame.vector(i)).is_zero())
            .expect("frame spans");
        return Some(S2Witness { x: u, y: vec![Rational::zero(); n], differing_index: Some(i) });
    }
    debug_assert!(len <= 64);
    let mut search = Dfs { frame, fam, idx: &idx, outside: &outside, signs: Vec::with_capacity(idx.len()) };
    search.run(0, 0)
}

struct Dfs<'a> {
    frame: &'a Frame,
    fam: &'a ModularFamily,
    idx: &'a [usize],
    outside: &'a [usize],
    signs: Vec<bool>,
}

impl Dfs<'_> {
    fn run(&mut self, plus: u64, minus: u64) -> Option<S2Witness> {
        if self.hopeless(plus, minus) {
            return None;
        }
        let depth = self.signs.len();
        if depth == self.idx.len() {
            return self.leaf();
        }
        let bit = 1u64 << self.idx[depth];
        self.signs.push(true);
        let found = self.run(plus | bit, minus);
        self.signs.pop();
        if found.is_some() || depth == 0 {
            return found;
        }
        self.signs.push(false);
        let found = self.run(plus, minus | bit);
        self.signs.pop();
        found
    }

    fn hopeless(&self, plus: u64, minus: u64) -> bool {
        let fam = self.fam;
        if fam.spans_mask(plus) || fam.spans_mask(minus) {
            return true;
        }
        let rp = fam.rank_of_mask(plus);
        let rm = fam.rank_of_mask(minus);
        self.outside
            .iter()
            .all(|&i| fam.rank_of_mask(plus | 1 << i) == rp || fam.rank_of_mask(minus | 1 << i) == rm)
    }

    fn leaf(&self) -> Option<S2Witness> {
        let n = self.frame.dim();
        let sys = sign_system(self.frame, self.idx, &self.signs);
        let w = sys.nullspace();
        if w.cols() == 0 {
            return None;
        }
        let wx = w.select_rows(&(0..n).collect::<Vec<_>>()).transpose();
        let wy = w.select_rows(&(n..2 * n).collect::<Vec<_>>()).transpose();
        for &i in self.outside {
            let f = self.frame.vector(i);
            let a = wx.mul_vec(f);
            let b = wy.mul_vec(f);
            let neg_b: Vec<Rational> = b.iter().map(|v| -v).collect();
            if a == b || a == neg_b {
                continue;
            }
            let d = a.len();
            let s = |k: usize, l: usize| &a[k] * &a[l] - &b[k] * &b[l];
            let coeffs = (0..d)
                .find(|&k| !s(k, k).is_zero())
                .map(|k| vec![k])
                .or_else(|| {
                    (0..d)
                        .flat_map(|k| (k + 1..d).map(move |l| (k, l)))
                        .find(|&(k, l)| !s(k, l).is_zero())
                        .map(|(k, l)| vec![k, l])
                })
                .expect("nonzero symmetric form");
            let z: Vec<Rational> = (0..2 * n)
                .map(|r| coeffs.iter().fold(Rational::zero(), |acc, &c| acc + w.get(r, c)))
                .collect();
            let (x, y) = split(&z, n);
            return Some(S2Witness { x, y, differing_index: Some(i) });
        }
        None
    }
}

/// Every co-singleton admits a separating witness.
///
/// For phase-retrievable frames the kernel meets rank-≤2 matrices only at 0,
/// so a witness for `Λ` exists iff `F_Λ` is not phase retrievable and the
/// decision is exactly exactness; other frames go through the witness search.
pub fn has_exact_pr_redundancy(frame: &Frame) -> bool {
    if frames::is_phase_retrievable(frame) {
        return frames::is_exact_pr_frame(frame).exact;
    }
    has_exact_pr_redundancy_by_search(frame)
}

/// [`has_exact_pr_redundancy`] through the witness search only.
pub fn has_exact_pr_redundancy_by_search(frame: &Frame) -> bool {
    let len = frame.len();
    (0..len).all(|i| find_s2_witness(frame, &IndexSet::co_singleton(len, i)).is_some())
}

/// `N / k` for the smallest `k = |Λ|` with no separating witness.
pub fn pr_redundancy(frame: &Frame, cap: Option<usize>) -> Result<Rational> {
    let len = frame.len();
    let cap = cap.unwrap_or(REDUNDANCY_CAP);
    if len > cap {
        return Err(Error::CapExceeded { len, cap });
    }
    let pr = frames::is_phase_retrievable(frame);
    let no_witness = |set: &IndexSet| {
        if pr {
            frames::cover_analysis(&sub_family(frame, set)).phase_retrievable
        } else {
            find_s2_witness(frame, set).is_none()
        }
    };
    let ratio = |k: usize| Rational::new((len as i64).into(), (k as i64).into());
    if len == 1 || (0..len).all(|i| !no_witness(&IndexSet::co_singleton(len, i))) {
        return Ok(ratio(len));
    }
    // sizes below n leave a direction orthogonal to F_Λ, which always separates
    for k in frame.dim()..len {
        let mut hit = false;
        for_each_combination(len, k, |c| {
            if !hit && no_witness(&IndexSet::from_indices(len, c)) {
                hit = true;
            }
        });
        if hit {
            return Ok(ratio(k));
        }
    }
    Ok(ratio(len))
}

fn sub_family(frame: &Frame, set: &IndexSet) -> ModularFamily {
    ModularFamily::new(frame.dim(), &frame.select(set))
}

/// Lifted-rank greedy completion: appends candidate vectors that raise the
/// rank of the lifted system until `target` vectors are reached.
pub fn lifted_completion(frame: &Frame, candidates: &[Vec<Rational>], target: usize) -> Result<Frame> {
    let mut vs = frame.vectors().to_vec();
    let mut rank = RatMatrix::from_rows(vs.iter().map(|f| lifted_row(f)).collect())?.rank();
    for c in candidates {
        if vs.len() >= target {
            break;
        }
        let mut rows: Vec<Vec<Rational>> = vs.iter().map(|f| lifted_row(f)).collect();
        rows.push(lifted_row(c));
        let r = ratlin::rank(&RatMatrix::from_rows(rows)?);
        if r > rank {
            rank = r;
            vs.push(c.clone());
        }
    }
    if vs.len() < target {
        return Err(Error::RetriesExhausted { what: "lifted completion".into(), attempts: candidates.len() });
    }
    Frame::new(frame.dim(), vs)
}

/// Full index set of a frame.
pub fn full_set(frame: &Frame) -> IndexSet {
    IndexSet::new(frame.len(), full_mask(frame.len()))
}
