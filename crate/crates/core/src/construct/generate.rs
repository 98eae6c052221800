use num_traits::{One, Zero};

use super::plan::plan;
use super::{Certificate, Certified};
use crate::error::{Error, Result};
use crate::frames::{self, Frame};
use crate::lifting;
use crate::ratlin::sample::sample_integers;
use crate::ratlin::{sample_pattern, RatMatrix, Rational, Seed};
use crate::subspaces::{self, MaximalityVerdict, Subspace};

/// Upper end of the integer range replacing continuous random entries.
pub const RANGE_MAX: u64 = 1 << 16;

/// Resamples allowed after the first attempt.
pub const DEFAULT_RETRIES: usize = 5;

fn tri(a: usize) -> usize {
    a * (a + 1) / 2
}

fn attempt_seed(seed: Seed, attempt: usize) -> Seed {
    if attempt == 0 {
        seed
    } else {
        seed.derive(attempt as u64)
    }
}

/// An exact phase-retrievable frame of length `len` in `R^n`.
///
/// `len = 2n - 1` samples integer matrices until the columns have full spark;
/// longer frames instantiate the planned pattern. Either way the result is
/// verified exact before it is returned.
pub fn generate_exact_pr(n: usize, len: usize, seed: Seed, max_retries: usize) -> Result<Certified> {
    if n == 0 || len + 1 < 2 * n || len > tri(n) {
        return Err(Error::OutOfRange(format!(
            "exact PR frames in R^{n} have length between 2n-1 and n(n+1)/2, got {len}"
        )));
    }
    let planned = if len + 1 == 2 * n { None } else { Some(plan(n, len)?) };
    let pattern = match &planned {
        Some(p) => Some(p.execute()?.pattern),
        None => None,
    };
    let plan_names = planned.as_ref().map_or_else(|| vec!["FullSpark".to_string()], |p| p.names());
    for attempt in 0..=max_retries {
        let s = attempt_seed(seed, attempt);
        let m = match &pattern {
            Some(p) => sample_pattern(p.mask(), RANGE_MAX, s),
            None => sample_integers(n, len, 1, RANGE_MAX as i64, &mut s.rng()),
        };
        let Ok(frame) = Frame::from_matrix(&m) else { continue };
        if pattern.is_none() && !frames::is_full_spark(&frame) {
            continue;
        }
        if !frames::is_exact_pr_frame(&frame).exact {
            continue;
        }
        let certificate = Certificate {
            kind: "exact".into(),
            exact_pr: true,
            exact_pr_redundancy: true,
            d: n,
            plan: plan_names,
            seed: seed.0,
            retries: attempt,
        };
        return Ok(Certified { frame, certificate });
    }
    Err(Error::RetriesExhausted { what: format!("exact PR frame ({n}, {len})"), attempts: max_retries + 1 })
}

/// `F1` in the first `k` coordinates followed by `F2` in the last `m`.
pub fn compose_direct_sum(f1: &Frame, f2: &Frame) -> Frame {
    let (k, m) = (f1.dim(), f2.dim());
    let pad = |v: &[Rational], before: usize, after: usize| {
        let mut out = vec![Rational::zero(); before];
        out.extend_from_slice(v);
        out.extend(std::iter::repeat_n(Rational::zero(), after));
        out
    };
    let vs = f1
        .vectors()
        .iter()
        .map(|v| pad(v, 0, m))
        .chain(f2.vectors().iter().map(|v| pad(v, k, 0)))
        .collect();
    Frame::new(k + m, vs).expect("direct sum of frames spans")
}

/// Reorders `g` so its first `dim` vectors are independent and maps them to
/// the standard basis.
fn normalise_to_identity(g: &Frame) -> Frame {
    let k = g.dim();
    let mut basis: Vec<usize> = Vec::new();
    for i in 0..g.len() {
        basis.push(i);
        if g.family().rank_of(&basis) < basis.len() {
            basis.pop();
        }
        if basis.len() == k {
            break;
        }
    }
    let order: Vec<usize> = basis.iter().copied().chain((0..g.len()).filter(|i| !basis.contains(i))).collect();
    let cols: Vec<Vec<Rational>> = order.iter().map(|&i| g.vector(i).to_vec()).collect();
    let head = RatMatrix::from_columns(k, &cols[..k]).expect("square");
    let t = head.inverse().expect("independent columns");
    Frame::new(k, cols.iter().map(|c| t.mul_vec(c)).collect()).expect("invertible image spans")
}

fn unit(n: usize, i: usize) -> Vec<Rational> {
    let mut v = vec![Rational::zero(); n];
    v[i] = Rational::one();
    v
}

fn embed(v: &[Rational], n: usize) -> Vec<Rational> {
    let mut out = v.to_vec();
    out.resize(n, Rational::zero());
    out
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum DmaxRoute {
    /// `len <= k(k+1)/2`: an exact PR frame for `span{e_1..e_k}` tilted into
    /// the remaining coordinates.
    Tilted,
    /// Direct sum of exact PR frames of lengths `(n1, n2)`.
    Split(usize, usize),
    /// Direct sum of an exact PR frame of length `n1` and the standard basis of
    /// the complement.
    SplitBasis(usize),
    /// Standard basis plus vectors inside `span{e_1..e_k}`.
    Anchored,
}

impl DmaxRoute {
    fn name(self) -> String {
        match self {
            DmaxRoute::Tilted => "Tilted".into(),
            DmaxRoute::Split(a, b) => format!("Split({a},{b})"),
            DmaxRoute::SplitBasis(a) => format!("SplitBasis({a})"),
            DmaxRoute::Anchored => "Anchored".into(),
        }
    }
}

fn dmax_route(n: usize, k: usize, len: usize) -> Option<DmaxRoute> {
    if !admissible_dmax(n, k, len) {
        return None;
    }
    if len <= tri(k) {
        return Some(DmaxRoute::Tilted);
    }
    let m = n - k;
    let exact_len = |d: usize, l: usize| d >= 1 && 2 * d <= l + 1 && l <= tri(d);
    if let Some(n1) = (2 * k - 1..=tri(k)).rev().find(|&n1| len >= n1 && exact_len(m, len - n1)) {
        return Some(DmaxRoute::Split(n1, len - n1));
    }
    if len >= m && exact_len(k, len - m) {
        return Some(DmaxRoute::SplitBasis(len - m));
    }
    Some(DmaxRoute::Anchored)
}

/// Parameters accepted by [`generate_with_dmax`]: `[(n+1)/2] <= k <= n` and
/// `max(2k-1, n) <= N <= k(k+1)/2 + (n-k)(n-k+1)/2`. Lengths below `n` cannot
/// span `R^n`.
pub fn admissible_dmax(n: usize, k: usize, len: usize) -> bool {
    n >= 1 && n.div_ceil(2) <= k && k <= n && len + 1 >= 2 * k && len >= n && len <= tri(k) + tri(n - k)
}

fn build_dmax(n: usize, k: usize, len: usize, route: DmaxRoute, seed: Seed, retries: usize) -> Result<Frame> {
    match route {
        DmaxRoute::Tilted => {
            let g = normalise_to_identity(&generate_exact_pr(k, len, seed.derive(101), retries)?.frame);
            let vs = (0..len)
                .map(|i| match i {
                    i if i < k => unit(n, i),
                    i if i < n => {
                        let mut v = embed(g.vector(i), n);
                        v[i] += Rational::one();
                        v
                    }
                    i => embed(g.vector(i), n),
                })
                .collect();
            Frame::new(n, vs)
        }
        DmaxRoute::Split(n1, n2) => {
            let f1 = generate_exact_pr(k, n1, seed.derive(102), retries)?.frame;
            let f2 = generate_exact_pr(n - k, n2, seed.derive(103), retries)?.frame;
            Ok(compose_direct_sum(&f1, &f2))
        }
        DmaxRoute::SplitBasis(n1) => {
            let f1 = generate_exact_pr(k, n1, seed.derive(104), retries)?.frame;
            Ok(compose_direct_sum(&f1, &Frame::standard_basis(n - k)))
        }
        DmaxRoute::Anchored => {
            let mut rng = seed.derive(105).rng();
            let extra = sample_integers(k, len - n, 1, RANGE_MAX as i64, &mut rng);
            let mut vs: Vec<Vec<Rational>> = (0..n).map(|i| unit(n, i)).collect();
            vs.extend(extra.columns().iter().map(|c| embed(c, n)));
            Frame::new(n, vs)
        }
    }
}

/// A frame of length `len` in `R^n` with exact PR-redundancy and `d(F) = k`.
///
/// Both properties are verified on the output: `d(F)` by the exhaustive
/// subset scan (or the complement property when `k = n`), redundancy by the
/// witness search.
pub fn generate_with_dmax(n: usize, k: usize, len: usize, seed: Seed, max_retries: usize) -> Result<Certified> {
    let route = dmax_route(n, k, len).ok_or_else(|| {
        Error::OutOfRange(format!(
            "need [(n+1)/2] <= k <= n and max(2k-1, n) <= N <= k(k+1)/2 + (n-k)(n-k+1)/2, got n = {n}, k = {k}, N = {len}"
        ))
    })?;
    for attempt in 0..=max_retries {
        let s = attempt_seed(seed, attempt);
        let frame = match build_dmax(n, k, len, route, s, max_retries) {
            Ok(f) => f,
            Err(Error::RetriesExhausted { .. }) | Err(Error::NotSpanning { .. }) => continue,
            Err(e) => return Err(e),
        };
        let d = if k == n {
            if frames::is_phase_retrievable(&frame) {
                n
            } else {
                continue;
            }
        } else {
            subspaces::d_max(&frame)?
        };
        if d != k || !lifting::has_exact_pr_redundancy(&frame) {
            continue;
        }
        let certificate = Certificate {
            kind: format!("dmax({k})"),
            exact_pr: k == n,
            exact_pr_redundancy: true,
            d,
            plan: vec![route.name()],
            seed: seed.0,
            retries: attempt,
        };
        return Ok(Certified { frame, certificate });
    }
    Err(Error::RetriesExhausted { what: format!("frame with d = {k} ({n}, {len})"), attempts: max_retries + 1 })
}

/// A basis of `R^n` with a certified maximal PR subspace of dimension `k`.
#[derive(Clone, Debug)]
pub struct MaximalSubspaceInstance {
    pub basis: Frame,
    pub subspace: Subspace,
    /// The full-spark frame `φ_1..φ_{2k-1}` for the subspace, in its coordinates.
    pub phi: Vec<Vec<Rational>>,
    pub retries: usize,
}

/// `u_i = e_i` for `i <= k` and `i >= 2k`, `u_i = e_i + φ_i` otherwise, with
/// `φ` a full-spark frame of `M = span{e_1..e_k}` normalised so `φ_i = e_i`
/// for `i <= k`. Projecting the basis onto `M` leaves `φ` plus zeros.
pub fn basis_with_maximal_subspace(n: usize, k: usize, seed: Seed) -> Result<MaximalSubspaceInstance> {
    if k == 0 || k > n.div_ceil(2) {
        return Err(Error::OutOfRange(format!(
            "maximal PR subspaces of a basis of R^{n} have dimension 1..={}, got {k}",
            n.div_ceil(2)
        )));
    }
    for attempt in 0..=DEFAULT_RETRIES {
        let s = attempt_seed(seed, attempt);
        let raw = sample_integers(k, 2 * k - 1, 1, RANGE_MAX as i64, &mut s.rng());
        let Ok(phi) = Frame::from_matrix(&raw) else { continue };
        if !frames::is_full_spark(&phi) {
            continue;
        }
        let t = raw.select_columns(&(0..k).collect::<Vec<_>>()).inverse().expect("full spark");
        let phi: Vec<Vec<Rational>> = phi.vectors().iter().map(|v| t.mul_vec(v)).collect();
        let us = (0..n)
            .map(|i| {
                let mut u = unit(n, i);
                if k <= i && i < 2 * k - 1 {
                    for (c, x) in phi[i].iter().enumerate() {
                        u[c] += x;
                    }
                }
                u
            })
            .collect();
        let basis = Frame::new(n, us)?;
        let subspace = Subspace::coordinate(n, &(0..k).collect::<Vec<_>>());
        let verdict = subspaces::is_maximal_pr_subspace(&basis, &subspace, 0, s)?;
        if matches!(verdict, MaximalityVerdict::Maximal { .. }) {
            return Ok(MaximalSubspaceInstance { basis, subspace, phi, retries: attempt });
        }
    }
    Err(Error::RetriesExhausted { what: format!("maximal subspace ({n}, {k})"), attempts: DEFAULT_RETRIES + 1 })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exact_small_targets() {
        for (n, len) in [(1, 1), (2, 3), (3, 5), (3, 6), (4, 8), (4, 9), (4, 10)] {
            let c = generate_exact_pr(n, len, Seed(11), DEFAULT_RETRIES).unwrap();
            assert_eq!((c.frame.dim(), c.frame.len()), (n, len));
            assert!(frames::is_exact_pr_frame(&c.frame).exact);
        }
        assert!(matches!(generate_exact_pr(3, 7, Seed(0), 5), Err(Error::OutOfRange(_))));
        assert!(matches!(generate_exact_pr(3, 4, Seed(0), 5), Err(Error::OutOfRange(_))));
    }

    #[test]
    fn deterministic_per_seed() {
        let a = generate_exact_pr(4, 9, Seed(3), 5).unwrap();
        let b = generate_exact_pr(4, 9, Seed(3), 5).unwrap();
        assert_eq!(a.frame, b.frame);
        assert_eq!(a.certificate, b.certificate);
    }

    #[test]
    fn normalisation_reaches_identity() {
        let g = generate_exact_pr(3, 6, Seed(5), 5).unwrap().frame;
        let h = normalise_to_identity(&g);
        for i in 0..3 {
            assert_eq!(h.vector(i), unit(3, i).as_slice());
        }
        assert!(frames::is_exact_pr_frame(&h).exact);
    }

    #[test]
    fn direct_sum_layout() {
        let f = compose_direct_sum(&Frame::standard_basis(2), &Frame::standard_basis(1));
        assert_eq!(f, Frame::standard_basis(3));
    }

    #[test]
    fn dmax_routes() {
        assert_eq!(dmax_route(5, 3, 5), Some(DmaxRoute::Tilted));
        assert_eq!(dmax_route(6, 4, 13), Some(DmaxRoute::Split(10, 3)));
        assert_eq!(dmax_route(4, 2, 5), Some(DmaxRoute::SplitBasis(3)));
        assert_eq!(dmax_route(4, 2, 4), Some(DmaxRoute::Anchored));
        assert_eq!(dmax_route(4, 1, 4), None);
        assert_eq!(dmax_route(4, 2, 3), None);
    }

    #[test]
    fn dmax_generation_small() {
        let c = generate_with_dmax(5, 3, 5, Seed(1), 5).unwrap();
        assert_eq!(c.certificate.d, 3);
        assert!(lifting::has_exact_pr_redundancy(&c.frame));
    }

    #[test]
    fn maximal_subspace_bounds() {
        let inst = basis_with_maximal_subspace(3, 2, Seed(2)).unwrap();
        let proj = subspaces::project_frame(&inst.basis, &inst.subspace);
        assert_eq!(proj.iter().filter(|v| v.iter().any(|x| !x.is_zero())).count(), 3);
        assert!(matches!(basis_with_maximal_subspace(4, 3, Seed(0)), Err(Error::OutOfRange(_))));
        assert!(matches!(basis_with_maximal_subspace(4, 0, Seed(0)), Err(Error::OutOfRange(_))));
    }
}
