//! Frames in R^n and the complement-property machinery deciding real phase
//! retrievability.
//!
//! Two independent routes decide the complement property:
//!
//! * [`has_complement_property`] scans every subset `Λ` containing the first
//!   index (the complement covers the rest) and tests both sides for spanning.
//! * [`cover_analysis`] works on the matroid hyperplanes of the frame: a subset
//!   fails to span exactly when it lies inside a hyperplane spanned by frame
//!   vectors, so the property fails iff two such hyperplanes cover the frame.
//!   The same pass reports which single removals destroy the property, which
//!   is all that exactness needs.
//!
//! Exactness only ever tests single removals. For `Λ ⊆ Λ'` the kernel of the
//! lifted operator of `F_Λ'` sits inside that of `F_Λ`, so if dropping one
//! vector already destroys phase retrievability, dropping more cannot restore
//! it.

use num_traits::Zero;

use crate::error::{Error, Result};
use crate::ratlin::modular::{find_combination, mask_indices, ModularFamily};
use crate::ratlin::{RatMatrix, Rational};

/// Largest frame length accepted by the exhaustive subset scans.
pub const SUBSET_SCAN_CAP: usize = 24;

/// A spanning, ordered list of `N >= n` rational vectors in `R^n`.
#[derive(Clone, Debug)]
pub struct Frame {
    dim: usize,
    vectors: Vec<Vec<Rational>>,
    family: ModularFamily,
}

impl PartialEq for Frame {
    fn eq(&self, other: &Self) -> bool {
        self.dim == other.dim && self.vectors == other.vectors
    }
}

impl Eq for Frame {}

impl Frame {
    /// Rejects vectors of the wrong length and families that do not span `R^dim`.
    pub fn new(dim: usize, vectors: Vec<Vec<Rational>>) -> Result<Self> {
        if dim == 0 {
            return Err(Error::DimensionMismatch("dimension must be at least 1".into()));
        }
        if let Some(v) = vectors.iter().find(|v| v.len() != dim) {
            return Err(Error::DimensionMismatch(format!(
                "vector of length {} in R^{dim}",
                v.len()
            )));
        }
        if vectors.len() > 64 {
            return Err(Error::OutOfRange(format!("{} vectors; at most 64 supported", vectors.len())));
        }
        let family = ModularFamily::new(dim, &vectors);
        let rank = family.rank_of(&(0..vectors.len()).collect::<Vec<_>>());
        if rank != dim {
            return Err(Error::NotSpanning { rank, dim });
        }
        Ok(Frame { dim, vectors, family })
    }

    /// Frame whose vectors are the columns of `m`.
    pub fn from_matrix(m: &RatMatrix) -> Result<Self> {
        Self::new(m.rows(), m.columns())
    }

    /// Frame from integer columns.
    pub fn from_i64_columns(dim: usize, cols: &[&[i64]]) -> Result<Self> {
        let vs = cols.iter().map(|c| c.iter().map(|&x| crate::ratlin::rat(x)).collect()).collect();
        Self::new(dim, vs)
    }

    /// Frame from the columns of an integer matrix given row by row.
    pub fn from_i64_rows(rows: &[&[i64]]) -> Result<Self> {
        Self::from_matrix(&RatMatrix::from_i64(rows))
    }

    pub fn standard_basis(n: usize) -> Self {
        Self::from_matrix(&RatMatrix::identity(n)).expect("identity spans")
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn len(&self) -> usize {
        self.vectors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vectors.is_empty()
    }

    pub fn vectors(&self) -> &[Vec<Rational>] {
        &self.vectors
    }

    pub fn vector(&self, i: usize) -> &[Rational] {
        &self.vectors[i]
    }

    /// The `n x N` matrix with the frame vectors as columns.
    pub fn matrix(&self) -> RatMatrix {
        RatMatrix::from_columns(self.dim, &self.vectors).expect("consistent lengths")
    }

    pub(crate) fn family(&self) -> &ModularFamily {
        &self.family
    }

    /// Frame with vector `i` dropped, if what remains still spans.
    pub fn without(&self, i: usize) -> Result<Frame> {
        let mut vs = self.vectors.clone();
        vs.remove(i);
        Frame::new(self.dim, vs)
    }

    /// Sub-family selected by `set`; may fail to span.
    pub fn select(&self, set: &IndexSet) -> Vec<Vec<Rational>> {
        set.indices().into_iter().map(|i| self.vectors[i].clone()).collect()
    }

    pub fn is_basis(&self) -> bool {
        self.len() == self.dim
    }
}

/// A subset of `{0, .., len-1}` stored as a bitmask.
///
/// Indices are 0-based in the API; reports and files show them 1-based.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct IndexSet {
    len: usize,
    mask: u64,
}

impl IndexSet {
    pub fn new(len: usize, mask: u64) -> Self {
        assert!(len <= 64, "index sets hold at most 64 indices");
        assert!(len == 64 || mask >> len == 0, "index out of range");
        IndexSet { len, mask }
    }

    pub fn from_indices(len: usize, idx: &[usize]) -> Self {
        let mask = idx.iter().fold(0u64, |m, &i| {
            assert!(i < len, "index {i} out of range for {len}");
            m | 1 << i
        });
        Self::new(len, mask)
    }

    pub fn full(len: usize) -> Self {
        Self::new(len, full_mask(len))
    }

    /// Everything except `i`.
    pub fn co_singleton(len: usize, i: usize) -> Self {
        Self::new(len, full_mask(len) & !(1 << i))
    }

    pub fn universe(&self) -> usize {
        self.len
    }

    pub fn mask(&self) -> u64 {
        self.mask
    }

    pub fn complement(&self) -> Self {
        Self::new(self.len, full_mask(self.len) & !self.mask)
    }

    pub fn contains(&self, i: usize) -> bool {
        i < self.len && self.mask & (1 << i) != 0
    }

    pub fn count(&self) -> usize {
        self.mask.count_ones() as usize
    }

    pub fn is_empty(&self) -> bool {
        self.mask == 0
    }

    pub fn is_subset(&self, other: &IndexSet) -> bool {
        self.mask & !other.mask == 0
    }

    pub fn indices(&self) -> Vec<usize> {
        mask_indices(self.mask)
    }

    pub fn one_based(&self) -> Vec<usize> {
        self.indices().into_iter().map(|i| i + 1).collect()
    }
}

pub(crate) fn full_mask(len: usize) -> u64 {
    if len == 64 {
        u64::MAX
    } else {
        (1u64 << len) - 1
    }
}

/// Dimension of the span of the vectors indexed by `set`.
pub fn span_dim(frame: &Frame, set: &IndexSet) -> usize {
    frame.family.rank_of_mask(set.mask)
}

/// Outcome of a complement-property test.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ComplementCheck {
    pub holds: bool,
    /// A subset `Λ` such that neither `Λ` nor its complement spans.
    pub failing: Option<IndexSet>,
}

/// Subset scan over every `Λ` containing index 0.
///
/// Exhaustive: `2^(N-1)` pairs of spanning tests. Lengths beyond
/// [`SUBSET_SCAN_CAP`] are refused.
pub fn has_complement_property(frame: &Frame) -> Result<ComplementCheck> {
    complement_scan(&frame.family)
}

pub(crate) fn complement_scan(fam: &ModularFamily) -> Result<ComplementCheck> {
    let len = fam.len();
    if len > SUBSET_SCAN_CAP {
        return Err(Error::CapExceeded { len, cap: SUBSET_SCAN_CAP });
    }
    if len == 0 {
        return Ok(ComplementCheck { holds: false, failing: Some(IndexSet::full(0)) });
    }
    let full = full_mask(len);
    for rest in 0..(1u64 << (len - 1)) {
        let lam = (rest << 1) | 1;
        let comp = full & !lam;
        if !fam.spans_mask(lam) && !fam.spans_mask(comp) {
            return Ok(ComplementCheck { holds: false, failing: Some(IndexSet::new(len, lam)) });
        }
    }
    Ok(ComplementCheck { holds: true, failing: None })
}

/// Result of the hyperplane-cover pass.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CoverAnalysis {
    pub phase_retrievable: bool,
    /// Present when `phase_retrievable` is false; normalised to contain index 0.
    pub failing: Option<IndexSet>,
    /// Indices whose removal destroys the complement property. Only complete
    /// when `phase_retrievable` holds.
    pub breaking: IndexSet,
}

/// Hyperplane-cover decision of the complement property plus single-removal
/// analysis. Works for any family, spanning or not.
pub fn cover_analysis(fam: &ModularFamily) -> CoverAnalysis {
    let len = fam.len();
    let full = full_mask(len);
    let normalise = |lam: u64| {
        let lam = if lam & 1 == 0 { full & !lam } else { lam };
        IndexSet::new(len, lam)
    };
    if len == 0 || !fam.spans_mask(full) {
        return CoverAnalysis {
            phase_retrievable: false,
            failing: Some(IndexSet::full(len)),
            breaking: IndexSet::new(len, 0),
        };
    }
    let hs = fam.hyperplanes();
    let sizes: Vec<usize> = hs.iter().map(|h| h.count_ones() as usize).collect();
    let mut breaking = 0u64;
    for a in 0..hs.len() {
        if 2 * sizes[a] + 1 < len {
            break;
        }
        for b in a..hs.len() {
            if sizes[a] + sizes[b] + 1 < len {
                break;
            }
            let u = hs[a] | hs[b];
            if u == full {
                return CoverAnalysis {
                    phase_retrievable: false,
                    failing: Some(normalise(hs[a])),
                    breaking: IndexSet::new(len, 0),
                };
            }
            let missing = full & !u;
            if missing.count_ones() == 1 {
                breaking |= missing;
            }
        }
    }
    CoverAnalysis { phase_retrievable: true, failing: None, breaking: IndexSet::new(len, breaking) }
}

/// Real phase retrievability, decided by the complement property.
pub fn is_phase_retrievable(frame: &Frame) -> bool {
    cover_analysis(&frame.family).phase_retrievable
}

/// Size of the smallest linearly dependent subfamily; `N + 1` if there is none.
pub fn spark(frame: &Frame) -> usize {
    let fam = &frame.family;
    let n = frame.dim;
    let len = frame.len();
    for s in 1..=len.min(n + 1) {
        if find_combination(len, s, |c| fam.rank_of(c) < s).is_some() {
            return s;
        }
    }
    len + 1
}

pub fn is_full_spark(frame: &Frame) -> bool {
    spark(frame) == frame.dim + 1
}

/// Exactness verdict for a frame.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExactnessReport {
    pub exact: bool,
    pub phase_retrievable: bool,
    /// Failing subset when the frame is not phase retrievable.
    pub failing: Option<IndexSet>,
    /// For phase-retrievable frames: every index whose removal keeps phase
    /// retrievability. Empty iff the frame is exact.
    pub removable: Vec<usize>,
}

/// Phase retrievable, and no longer so after removing any single vector.
pub fn is_exact_pr_frame(frame: &Frame) -> ExactnessReport {
    let cover = cover_analysis(&frame.family);
    if !cover.phase_retrievable {
        return ExactnessReport {
            exact: false,
            phase_retrievable: false,
            failing: cover.failing,
            removable: Vec::new(),
        };
    }
    let removable = cover.breaking.complement().indices();
    ExactnessReport { exact: removable.is_empty(), phase_retrievable: true, failing: None, removable }
}

/// Exactness through the subset-scan route: the complement property for the
/// frame and its failure for every single removal. Slower than
/// [`is_exact_pr_frame`]; kept as an independent check.
pub fn is_exact_pr_frame_by_scan(frame: &Frame) -> Result<ExactnessReport> {
    let cp = has_complement_property(frame)?;
    if !cp.holds {
        return Ok(ExactnessReport {
            exact: false,
            phase_retrievable: false,
            failing: cp.failing,
            removable: Vec::new(),
        });
    }
    let mut removable = Vec::new();
    for i in 0..frame.len() {
        let rest: Vec<Vec<Rational>> = frame
            .vectors
            .iter()
            .enumerate()
            .filter(|&(j, _)| j != i)
            .map(|(_, v)| v.clone())
            .collect();
        let fam = ModularFamily::new(frame.dim, &rest);
        if complement_scan(&fam)?.holds {
            removable.push(i);
        }
    }
    Ok(ExactnessReport { exact: removable.is_empty(), phase_retrievable: true, failing: None, removable })
}

/// Inner product of two rational vectors.
pub fn inner(a: &[Rational], b: &[Rational]) -> Rational {
    a.iter().zip(b).fold(Rational::zero(), |acc, (x, y)| acc + x * y)
}
