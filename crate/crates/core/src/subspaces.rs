//! Phase-retrievable subspaces with respect to a frame.
//!
//! A subspace `M` with basis matrix `B` (columns) is handled through the
//! coordinates `Bᵀ f_i`. These differ from the coordinates of `P_M f_i` by the
//! invertible factor `(BᵀB)^{-1}`, so ranks of every subfamily, and with them
//! the complement property, do not depend on which basis of `M` is stored.

use num_traits::Zero;
use rand::Rng;

use crate::error::{Error, Result};
use crate::frames::{self, cover_analysis, full_mask, Frame, IndexSet, SUBSET_SCAN_CAP};
use crate::ratlin::modular::{find_combination, ModularFamily};
use crate::ratlin::{self, RatMatrix, Rational, Seed};

/// Coefficient range for sampled subspace vectors.
const SAMPLE_RANGE: i64 = 1000;
/// Attempts per stage when sampling extensions.
const EXTENSION_ATTEMPTS: usize = 64;

/// A `k`-dimensional subspace of `R^n`, stored as an `n × k` basis matrix.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Subspace {
    basis: RatMatrix,
}

impl Subspace {
    /// Rejects matrices without full column rank.
    pub fn new(basis: RatMatrix) -> Result<Self> {
        let k = basis.cols();
        let r = basis.rank();
        if k == 0 || r != k {
            return Err(Error::NotSpanning { rank: r, dim: k });
        }
        Ok(Subspace { basis })
    }

    pub fn from_vectors(n: usize, vectors: &[Vec<Rational>]) -> Result<Self> {
        Self::new(RatMatrix::from_columns(n, vectors)?)
    }

    /// `span{e_i : i ∈ idx}`.
    pub fn coordinate(n: usize, idx: &[usize]) -> Self {
        let cols: Vec<Vec<Rational>> = idx
            .iter()
            .map(|&i| (0..n).map(|r| if r == i { ratlin::rat(1) } else { Rational::zero() }).collect())
            .collect();
        Self::from_vectors(n, &cols).expect("distinct unit vectors")
    }

    pub fn ambient_dim(&self) -> usize {
        self.basis.rows()
    }

    pub fn dim(&self) -> usize {
        self.basis.cols()
    }

    pub fn basis(&self) -> &RatMatrix {
        &self.basis
    }

    pub fn contains(&self, v: &[Rational]) -> bool {
        let col = RatMatrix::from_columns(self.ambient_dim(), &[v.to_vec()]).expect("length");
        self.basis.hstack(&col).expect("rows").rank() == self.dim()
    }

    pub fn contains_subspace(&self, other: &Subspace) -> bool {
        other.basis.columns().iter().all(|c| self.contains(c))
    }

    /// Basis of the orthogonal complement.
    pub fn orthogonal_complement(&self) -> Vec<Vec<Rational>> {
        self.basis.transpose().nullspace().columns()
    }

    /// `span(self ∪ {v})`.
    pub fn extended(&self, v: &[Rational]) -> Result<Subspace> {
        let col = RatMatrix::from_columns(self.ambient_dim(), &[v.to_vec()])?;
        Subspace::new(self.basis.hstack(&col)?)
    }
}

/// `{Bᵀ f_i}`: the frame in the coordinates of `M`'s stored basis.
pub fn project_frame(frame: &Frame, m: &Subspace) -> Vec<Vec<Rational>> {
    let bt = m.basis.transpose();
    frame.vectors().iter().map(|f| bt.mul_vec(f)).collect()
}

/// The projected frame spans `M` and has the complement property there.
pub fn is_pr_subspace(frame: &Frame, m: &Subspace) -> bool {
    let fam = ModularFamily::new(m.dim(), &project_frame(frame, m));
    cover_analysis(&fam).phase_retrievable
}

/// `d(F)` with a subset attaining it.
pub fn d_max_with_witness(frame: &Frame) -> Result<(usize, IndexSet)> {
    let len = frame.len();
    if len > SUBSET_SCAN_CAP {
        return Err(Error::CapExceeded { len, cap: SUBSET_SCAN_CAP });
    }
    let n = frame.dim();
    let floor = n.div_ceil(2);
    let fam = frame.family();
    let full = full_mask(len);
    // d(F) = n exactly when the complement property holds; otherwise the
    // cover supplies a subset with both sides deficient to start from
    let cover = cover_analysis(fam);
    let mut best = match cover.failing {
        None => return Ok((n, IndexSet::full(len))),
        Some(lam) => {
            let d = fam.rank_of_mask(lam.mask()).max(fam.rank_of_mask(full & !lam.mask()));
            (d, lam)
        }
    };
    if best.0 == floor {
        return Ok(best);
    }
    for rest in 0..(1u64 << (len - 1)) {
        let lam = (rest << 1) | 1;
        let a = fam.rank_of_mask(lam);
        if a >= best.0 {
            continue;
        }
        let b = fam.rank_of_mask(full & !lam);
        let d = a.max(b);
        if d < best.0 {
            best = (d, IndexSet::new(len, lam));
            if d == floor {
                break;
            }
        }
    }
    Ok(best)
}

/// `d(F) = min_Λ max(dim span F_Λ, dim span F_{Λ^c})`: `n` under the
/// complement property, an exhaustive scan otherwise.
pub fn d_max(frame: &Frame) -> Result<usize> {
    d_max_with_witness(frame).map(|(d, _)| d)
}

fn sample_vector(n: usize, rng: &mut impl Rng) -> Vec<Rational> {
    (0..n).map(|_| ratlin::rat(rng.gen_range(-SAMPLE_RANGE..=SAMPLE_RANGE))).collect()
}

/// Random combination of `basis` with integer coefficients.
fn sample_in_span(basis: &[Vec<Rational>], n: usize, rng: &mut impl Rng) -> Vec<Rational> {
    let mut v = vec![Rational::zero(); n];
    for b in basis {
        let c = ratlin::rat(rng.gen_range(-SAMPLE_RANGE..=SAMPLE_RANGE));
        for (x, y) in v.iter_mut().zip(b) {
            *x += &c * y;
        }
    }
    v
}

/// A certified `ell`-dimensional PR subspace spanned by sampled integer vectors.
pub fn random_pr_subspace(frame: &Frame, ell: usize, seed: Seed) -> Result<Subspace> {
    let d = d_max(frame)?;
    if ell == 0 || ell > d {
        return Err(Error::OutOfRange(format!("PR subspaces for this frame have dimension 1..={d}, got {ell}")));
    }
    let n = frame.dim();
    let mut rng = seed.rng();
    let attempts = 6;
    for _ in 0..attempts {
        let vs: Vec<Vec<Rational>> = (0..ell).map(|_| sample_vector(n, &mut rng)).collect();
        let Ok(m) = Subspace::from_vectors(n, &vs) else { continue };
        if is_pr_subspace(frame, &m) {
            return Ok(m);
        }
    }
    Err(Error::RetriesExhausted { what: format!("{ell}-dimensional PR subspace"), attempts })
}

fn require_basis(b: &Frame) -> Result<()> {
    if b.is_basis() {
        Ok(())
    } else {
        Err(Error::NotABasis(b.dim()))
    }
}

/// `{i : ⟨x, b_i⟩ ≠ 0}`, the support of `x` in the dual basis of `B`.
pub fn support(x: &[Rational], b: &Frame) -> Result<IndexSet> {
    require_basis(b)?;
    if x.len() != b.dim() {
        return Err(Error::DimensionMismatch(format!("vector of length {} in R^{}", x.len(), b.dim())));
    }
    let idx: Vec<usize> = (0..b.len()).filter(|&i| !frames::inner(x, b.vector(i)).is_zero()).collect();
    Ok(IndexSet::from_indices(b.len(), &idx))
}

/// `min |supp(x)|` over nonzero `x ∈ M`.
///
/// With `C = Bᵀ B_M`, some nonzero `x ∈ M` has support inside `S` iff the rows
/// of `C` outside `S` have rank below `dim M`. Sizes of `S` are tried from 1
/// upwards.
pub fn min_support(m: &Subspace, b: &Frame) -> Result<usize> {
    require_basis(b)?;
    let n = b.dim();
    if m.ambient_dim() != n {
        return Err(Error::DimensionMismatch("subspace and basis live in different spaces".into()));
    }
    let k = m.dim();
    let fam = ModularFamily::new(k, &project_frame(b, m));
    for s in 1..=n {
        let hit = find_combination(n, n - s, |outside| fam.rank_of(outside) < k);
        if hit.is_some() {
            return Ok(s);
        }
    }
    unreachable!("a nonzero vector of M has support of size at most n")
}

/// Outcome of the maximality ladder.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum MaximalityVerdict {
    Maximal { reason: String },
    /// A strictly larger certified PR subspace containing `M`.
    NotMaximal { superspace: Subspace, reason: String },
    Unknown { probe_report: String },
}

impl MaximalityVerdict {
    pub fn status(&self) -> &'static str {
        match self {
            MaximalityVerdict::Maximal { .. } => "Maximal",
            MaximalityVerdict::NotMaximal { .. } => "NotMaximal",
            MaximalityVerdict::Unknown { .. } => "Unknown",
        }
    }
}

/// Samples `u ⊥ M` until `span(M, u)` is a PR subspace.
fn probe_extension(frame: &Frame, m: &Subspace, attempts: usize, seed: Seed) -> Option<Subspace> {
    let comp = m.orthogonal_complement();
    if comp.is_empty() {
        return None;
    }
    let mut rng = seed.rng();
    for _ in 0..attempts {
        let u = sample_in_span(&comp, m.ambient_dim(), &mut rng);
        if ratlin::is_zero_vec(&u) {
            continue;
        }
        let bigger = m.extended(&u).expect("u outside M");
        if is_pr_subspace(frame, &bigger) {
            return Some(bigger);
        }
    }
    None
}

/// Decides maximality of a PR subspace where a criterion applies.
///
/// 1. `dim M = d(F)`: nothing larger is PR.
/// 2. `F` a basis: minimal dual support equal to `dim M` means maximal; a
///    larger minimum with `dim M < [(n+1)/2]` guarantees a PR superspace, which
///    is then sampled and certified.
/// 3. Otherwise up to `probe_budget` random one-dimensional extensions are
///    tried. A certified extension proves non-maximality; failure proves
///    nothing and yields `Unknown`.
pub fn is_maximal_pr_subspace(
    frame: &Frame,
    m: &Subspace,
    probe_budget: usize,
    seed: Seed,
) -> Result<MaximalityVerdict> {
    if m.ambient_dim() != frame.dim() {
        return Err(Error::DimensionMismatch("subspace and frame live in different spaces".into()));
    }
    if !is_pr_subspace(frame, m) {
        return Err(Error::NotPRSubspace);
    }
    let n = frame.dim();
    let k = m.dim();
    match d_max(frame) {
        Ok(d) if d == k => {
            return Ok(MaximalityVerdict::Maximal { reason: format!("dimension equals d(F) = {d}") });
        }
        Ok(_) | Err(Error::CapExceeded { .. }) => {}
        Err(e) => return Err(e),
    }
    if frame.is_basis() {
        let s = min_support(m, frame)?;
        if s == k {
            return Ok(MaximalityVerdict::Maximal { reason: format!("minimal dual support {s} equals the dimension") });
        }
        if k < n.div_ceil(2) {
            let superspace = probe_extension(frame, m, EXTENSION_ATTEMPTS, seed).ok_or_else(|| {
                Error::RetriesExhausted { what: "PR superspace".into(), attempts: EXTENSION_ATTEMPTS }
            })?;
            return Ok(MaximalityVerdict::NotMaximal {
                superspace,
                reason: format!("minimal dual support {s} exceeds the dimension {k}"),
            });
        }
    }
    if probe_budget > 0 {
        if let Some(superspace) = probe_extension(frame, m, probe_budget, seed) {
            return Ok(MaximalityVerdict::NotMaximal {
                superspace,
                reason: "a sampled one-dimensional extension is a PR subspace".into(),
            });
        }
    }
    Ok(MaximalityVerdict::Unknown {
        probe_report: format!("{probe_budget} sampled extensions, none phase retrievable"),
    })
}

/// A maximal PR subspace containing `x`, of dimension `|supp(x)|`.
///
/// In dual coordinates `y = Bᵀx` the basis becomes the standard one. Vectors
/// `u_2, u_3, ..` orthogonal to the previous ones are sampled and accepted
/// when every square row block of `[u_1 .. u_{m+1}]` whose rows meet the
/// support of `y` is invertible. The result is mapped back by `B^{-T}` and
/// certified.
pub fn extend_to_maximal(b: &Frame, x: &[Rational], seed: Seed) -> Result<Subspace> {
    let supp = support(x, b)?;
    let n = b.dim();
    let k = supp.count();
    if k == 0 {
        return Err(Error::OutOfRange("the vector to extend must be nonzero".into()));
    }
    let bound = n.div_ceil(2);
    if k > bound {
        return Err(Error::SupportTooLarge { support: k, bound });
    }
    let bt = b.matrix().transpose();
    let y = bt.mul_vec(x);
    let mut rng = seed.rng();
    let mut us = vec![y];
    while us.len() < k {
        let size = us.len() + 1;
        let comp = RatMatrix::from_rows(us.clone())?.nullspace().columns();
        let mut accepted = None;
        for _ in 0..EXTENSION_ATTEMPTS {
            let u = sample_in_span(&comp, n, &mut rng);
            let mut cand = us.clone();
            cand.push(u);
            if blocks_invertible(&cand, size, &supp) {
                accepted = cand.pop();
                break;
            }
        }
        match accepted {
            Some(u) => us.push(u),
            None => {
                return Err(Error::RetriesExhausted {
                    what: format!("extension vector {size}"),
                    attempts: EXTENSION_ATTEMPTS,
                })
            }
        }
    }
    let back = bt.inverse().ok_or(Error::NotABasis(n))?;
    let cols: Vec<Vec<Rational>> = us.iter().map(|u| back.mul_vec(u)).collect();
    let m = Subspace::from_vectors(n, &cols)?;
    if !is_pr_subspace(b, &m) || min_support(&m, b)? != k {
        return Err(Error::RetriesExhausted { what: "certified maximal extension".into(), attempts: 1 });
    }
    Ok(m)
}

/// Every `size × size` row block of `[u_1 .. u_size]` meeting `supp` is invertible.
fn blocks_invertible(us: &[Vec<Rational>], size: usize, supp: &IndexSet) -> bool {
    let n = us[0].len();
    let rows: Vec<Vec<Rational>> = (0..n).map(|r| us.iter().map(|u| u[r].clone()).collect()).collect();
    let fam = ModularFamily::new(size, &rows);
    find_combination(n, size, |rs| rs.iter().any(|&r| supp.contains(r)) && fam.rank_of(rs) < size).is_none()
}
