mod common;

use proptest::prelude::*;

use common::{to_ints, tri};
use exactpr::construct::{self, plan};
use exactpr::format::FrameFile;
use exactpr::frames::{self, IndexSet};
use exactpr::lifting;
use exactpr::ratlin::{self, rat, ratio, RatMatrix, Rational};
use exactpr::subspaces::{self, Subspace};
use exactpr::{Frame, Seed};

fn matrix(rows: usize, cols: usize) -> impl Strategy<Value = RatMatrix> {
    prop::collection::vec(-3i64..=3, rows * cols).prop_map(move |v| {
        let rows: Vec<&[i64]> = v.chunks(cols).collect();
        RatMatrix::from_i64(&rows)
    })
}

/// Spanning integer frames with `n <= 4`, `N <= 8`.
fn small_frame() -> impl Strategy<Value = Frame> {
    (1usize..=4)
        .prop_flat_map(|n| (Just(n), n..=8))
        .prop_flat_map(|(n, len)| (Just(n), prop::collection::vec(-2i64..=2, n * len)))
        .prop_filter_map("spans", |(n, v)| {
            let cols: Vec<&[i64]> = v.chunks(n).collect();
            Frame::from_i64_columns(n, &cols).ok()
        })
}

fn invertible(n: usize) -> impl Strategy<Value = RatMatrix> {
    matrix(n, n).prop_filter("invertible", |m| m.inverse().is_some())
}

fn transform(frame: &Frame, g: &RatMatrix) -> Frame {
    Frame::from_matrix(&g.mul(&frame.matrix()).unwrap()).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 128, failure_persistence: None, ..ProptestConfig::default() })]

    #[test]
    fn rank_equals_transpose_rank(m in (1usize..6, 1usize..7).prop_flat_map(|(r, c)| matrix(r, c))) {
        prop_assert_eq!(m.rank(), m.transpose().rank());
    }

    #[test]
    fn nullspace_is_annihilated_and_complementary(m in (1usize..6, 1usize..7).prop_flat_map(|(r, c)| matrix(r, c))) {
        let k = m.nullspace();
        prop_assert_eq!(m.rank() + k.cols(), m.cols());
        if k.cols() > 0 {
            prop_assert!(m.mul(&k).unwrap().is_zero());
        }
    }

    #[test]
    fn rank_is_invariant_under_invertible_maps(
        (m, g) in (1usize..5, 1usize..7).prop_flat_map(|(r, c)| (matrix(r, c), invertible(r))),
        rot in 0usize..7,
    ) {
        let r = m.rank();
        prop_assert_eq!(g.mul(&m).unwrap().rank(), r);
        let order: Vec<usize> = (0..m.cols()).map(|j| (j + rot) % m.cols()).collect();
        prop_assert_eq!(m.select_columns(&order).rank(), r);
        let rows: Vec<usize> = (0..m.rows()).rev().collect();
        prop_assert_eq!(m.select_rows(&rows).rank(), r);
        prop_assert_eq!(ratlin::rank(&m), r);
    }

    #[test]
    fn pr_decisions_agree_with_oracles(f in small_frame()) {
        let n = f.dim();
        let brute = common::complement_property(&to_ints(&f), n);
        prop_assert_eq!(frames::is_phase_retrievable(&f), brute);
        prop_assert_eq!(frames::has_complement_property(&f).unwrap().holds, brute);
        let full = lifting::full_set(&f);
        prop_assert_eq!(lifting::find_s2_element(&f, &full).is_none(), brute);
    }

    #[test]
    fn exactness_agrees_with_oracle(f in small_frame()) {
        let n = f.dim();
        let brute = common::exact(&to_ints(&f), n);
        let rep = frames::is_exact_pr_frame(&f);
        prop_assert_eq!(rep.exact, brute);
        let scan = frames::is_exact_pr_frame_by_scan(&f).unwrap();
        prop_assert_eq!(scan.exact, rep.exact);
        prop_assert_eq!(scan.phase_retrievable, rep.phase_retrievable);
        prop_assert_eq!(scan.removable, rep.removable.clone());
        if rep.exact {
            prop_assert!(2 * n - 1 <= f.len() && f.len() <= tri(n));
        }
    }

    #[test]
    fn spark_and_d_agree_with_oracle(f in small_frame()) {
        let vs = to_ints(&f);
        let n = f.dim();
        let s = frames::spark(&f);
        prop_assert_eq!(s, common::spark(&vs, n));
        if s == n + 1 && f.len() >= 2 * n - 1 {
            prop_assert!(frames::is_phase_retrievable(&f));
        }
        let d = subspaces::d_max(&f).unwrap();
        prop_assert_eq!(d, common::d_max(&vs));
        prop_assert_eq!(d == n, frames::is_phase_retrievable(&f));
    }

    #[test]
    fn complement_property_is_invariant(
        (f, g) in small_frame().prop_flat_map(|f| { let n = f.dim(); (Just(f), invertible(n)) }),
        rot in 0usize..8,
        scale in prop_oneof![-5i64..=-1, 1i64..=5],
    ) {
        let pr = frames::is_phase_retrievable(&f);
        let len = f.len();
        let mut vs: Vec<Vec<Rational>> = (0..len).map(|j| f.vector((j + rot) % len).to_vec()).collect();
        for x in vs[0].iter_mut() {
            *x *= ratio(scale, 3);
        }
        let moved = Frame::new(f.dim(), vs).unwrap();
        prop_assert_eq!(frames::is_phase_retrievable(&moved), pr);
        prop_assert_eq!(frames::is_phase_retrievable(&transform(&f, &g)), pr);
        prop_assert_eq!(frames::is_exact_pr_frame(&transform(&f, &g)).exact, frames::is_exact_pr_frame(&f).exact);
    }

    #[test]
    fn witnesses_revalidate(f in small_frame(), mask in any::<u64>()) {
        let len = f.len();
        let lam = IndexSet::new(len, mask & ((1 << len) - 1));
        if let Some(w) = lifting::find_s2_witness(&f, &lam) {
            prop_assert!(w.validate(&f, &lam));
            prop_assert!(w.differing_index.is_some());
            // independent restatement of the predicate
            let q = |i: usize| {
                let a = frames::inner(&w.x, f.vector(i));
                let b = frames::inner(&w.y, f.vector(i));
                &a * &a - &b * &b
            };
            for j in lam.indices() {
                prop_assert_eq!(q(j), rat(0));
            }
            prop_assert!(q(w.differing_index.unwrap()) != rat(0));
        }
        if let Some(w) = lifting::find_s2_element(&f, &lam) {
            prop_assert!(w.validate(&f, &lam));
            prop_assert!(!w.matrix().is_zero());
        }
    }

    #[test]
    fn witness_search_matches_sign_pattern_oracle(f in small_frame(), mask in any::<u64>()) {
        let len = f.len();
        let lam = IndexSet::new(len, mask & ((1 << len) - 1));
        // A separating witness exists iff the kernel for Λ meets rank-≤2
        // matrices outside the kernel for F, which for PR frames is iff Λ is
        // not PR, and in general iff the two sign-pattern searches differ.
        if frames::is_phase_retrievable(&f) && lam.count() < len {
            let sub_pr = lifting::find_s2_element(&f, &lam).is_none();
            prop_assert_eq!(lifting::find_s2_witness(&f, &lam).is_none(), sub_pr);
        }
    }

    #[test]
    fn sandwich_monotonicity(f in small_frame(), a in any::<u64>(), b in any::<u64>()) {
        let len = f.len();
        let full = (1u64 << len) - 1;
        let small = IndexSet::new(len, a & full);
        let large = IndexSet::new(len, (a | b) & full);
        if lifting::find_s2_witness(&f, &small).is_none() {
            prop_assert!(lifting::find_s2_witness(&f, &large).is_none());
        }
    }

    #[test]
    fn redundancy_routes_agree_and_imply_lifted_independence(f in small_frame()) {
        let r = lifting::has_exact_pr_redundancy(&f);
        prop_assert_eq!(r, lifting::has_exact_pr_redundancy_by_search(&f));
        if r {
            prop_assert!(lifting::lifted_independent(&f));
            prop_assert!(lifting::lifted_operator(&f).rank() == f.len());
            if subspaces::d_max(&f).unwrap() < f.dim() {
                prop_assert!(f.len() < tri(f.dim()));
            }
        }
        let red = lifting::pr_redundancy(&f, None).unwrap();
        prop_assert!(red >= rat(1));
        prop_assert_eq!(red == rat(1), r);
    }

    #[test]
    fn vech_pairs_with_trace(x in prop::collection::vec(-4i64..=4, 1..5), y in prop::collection::vec(-4i64..=4, 5)) {
        let n = x.len();
        let xr: Vec<Rational> = x.iter().map(|&v| rat(v)).collect();
        let f: Vec<Rational> = y[..n].iter().map(|&v| rat(v)).collect();
        let zero = vec![rat(0); n];
        let a = lifting::outer_difference(&xr, &zero);
        let lhs = ratlin::dot(&lifting::lifted_row(&f), &lifting::vech(&a));
        let ip = ratlin::dot(&xr, &f);
        prop_assert_eq!(lhs, &ip * &ip);
    }

    #[test]
    fn frame_files_round_trip(f in small_frame(), den in 1i64..9) {
        let vs: Vec<Vec<Rational>> =
            f.vectors().iter().map(|v| v.iter().map(|x| x / rat(den)).collect()).collect();
        let g = Frame::new(f.dim(), vs).unwrap();
        let text = FrameFile::from_frame(&g, None).to_json();
        prop_assert_eq!(FrameFile::parse(&text).unwrap().to_frame().unwrap(), g);
    }
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 48, failure_persistence: None, ..ProptestConfig::default() })]

    #[test]
    fn generated_exact_frames_pass_independent_verification(
        (n, len) in (2usize..=4).prop_flat_map(|n| (Just(n), 2 * n - 1..=tri(n))),
        seed in any::<u64>(),
    ) {
        let c = construct::generate_exact_pr(n, len, Seed(seed), construct::DEFAULT_RETRIES).unwrap();
        prop_assert_eq!((c.frame.dim(), c.frame.len()), (n, len));
        prop_assert!(common::exact(&to_ints(&c.frame), n));
        prop_assert!(lifting::lifted_independent(&c.frame));
        let again = construct::generate_exact_pr(n, len, Seed(seed), construct::DEFAULT_RETRIES).unwrap();
        prop_assert_eq!(again.frame, c.frame);
    }

    #[test]
    fn dmax_frames_are_certified(
        (n, k, len) in (2usize..=4)
            .prop_flat_map(|n| (Just(n), n.div_ceil(2)..=n))
            .prop_flat_map(|(n, k)| (Just(n), Just(k), (2 * k - 1).max(n)..=tri(k) + tri(n - k))),
        seed in any::<u64>(),
    ) {
        prop_assume!(construct::admissible_dmax(n, k, len));
        let c = construct::generate_with_dmax(n, k, len, Seed(seed), construct::DEFAULT_RETRIES).unwrap();
        let vs = to_ints(&c.frame);
        prop_assert_eq!(common::d_max(&vs), k);
        prop_assert!(lifting::has_exact_pr_redundancy_by_search(&c.frame));
        if k < n {
            prop_assert!(len < tri(n));
        }
    }

    #[test]
    fn support_lower_bound_on_random_subspaces(n in 2usize..=6, seed in any::<u64>(), pick in any::<usize>()) {
        let b = Frame::standard_basis(n);
        let d = n.div_ceil(2);
        let ell = 1 + pick % d;
        let m = subspaces::random_pr_subspace(&b, ell, Seed(seed)).unwrap();
        prop_assert!(subspaces::is_pr_subspace(&b, &m));
        prop_assert!(ell <= subspaces::d_max(&b).unwrap());
        prop_assert!(subspaces::min_support(&m, &b).unwrap() >= ell);
        let over = subspaces::random_pr_subspace(&b, d + 1, Seed(seed));
        prop_assert!(matches!(over, Err(exactpr::Error::OutOfRange(_))));
    }

    #[test]
    fn two_dimensional_characterisation(
        n in 3usize..=6,
        a in 1i64..=5,
        b in -5i64..=-1,
        y1 in -3i64..=3,
        tail in prop::collection::vec(-3i64..=3, 4),
    ) {
        // x on coordinates {0, 1}; y = y1 * (b, -a, 0, ..) + y2 with y2 off supp(x)
        let e = Frame::standard_basis(n);
        let mut x = vec![rat(0); n];
        x[0] = rat(a);
        x[1] = rat(b);
        let mut y = vec![rat(0); n];
        y[0] = rat(y1 * b);
        y[1] = rat(-y1 * a);
        for (i, t) in tail.iter().take(n - 2).enumerate() {
            y[i + 2] = rat(*t);
        }
        prop_assume!(!ratlin::is_zero_vec(&y));
        prop_assert_eq!(ratlin::dot(&x, &y), rat(0));
        let m = Subspace::from_vectors(n, &[x, y.clone()]).unwrap();
        let y1_nonzero = y1 != 0;
        let y2_nonzero = y[2..].iter().any(|v| v != &rat(0));
        prop_assert_eq!(subspaces::is_pr_subspace(&e, &m), y1_nonzero && y2_nonzero);
    }

    #[test]
    fn extension_outputs_are_maximal(n in 2usize..=6, seed in any::<u64>(), coeffs in prop::collection::vec(1i64..=4, 3)) {
        let k = n.div_ceil(2);
        let b = Frame::standard_basis(n);
        let mut x = vec![rat(0); n];
        for (i, c) in coeffs.iter().take(k).enumerate() {
            x[n - 1 - i] = rat(*c);
        }
        let m = subspaces::extend_to_maximal(&b, &x, Seed(seed)).unwrap();
        prop_assert!(m.contains(&x));
        prop_assert_eq!(m.dim(), k.min(coeffs.len()));
        prop_assert!(subspaces::is_pr_subspace(&b, &m));
        prop_assert_eq!(subspaces::min_support(&m, &b).unwrap(), m.dim());
        let v = subspaces::is_maximal_pr_subspace(&b, &m, 0, Seed(seed)).unwrap();
        prop_assert_eq!(v.status(), "Maximal");
    }

    #[test]
    fn not_maximal_verdicts_carry_certified_superspaces(n in 3usize..=6, seed in any::<u64>()) {
        let b = Frame::standard_basis(n);
        let m = subspaces::random_pr_subspace(&b, 1, Seed(seed)).unwrap();
        let v = subspaces::is_maximal_pr_subspace(&b, &m, 8, Seed(seed)).unwrap();
        if let subspaces::MaximalityVerdict::NotMaximal { superspace, .. } = v {
            prop_assert!(subspaces::is_pr_subspace(&b, &superspace));
            prop_assert!(superspace.contains_subspace(&m));
            prop_assert!(superspace.dim() > m.dim());
        } else {
            // a generic line has full support, so it is never maximal here
            prop_assert!(subspaces::min_support(&m, &b).unwrap() == 1);
        }
    }
}

#[test]
fn plans_exist_and_execute_through_n_8() {
    for n in 3..=8 {
        for len in 2 * n..=tri(n) {
            let p = plan(n, len).unwrap();
            assert!(p.is_valid(), "({n},{len})");
            let ex = p.execute().unwrap();
            assert_eq!((ex.pattern.rows(), ex.pattern.cols()), (n, len));
            ex.pattern.validate().unwrap();
        }
    }
}

#[test]
fn direct_sums_keep_exact_redundancy() {
    let a = construct::generate_exact_pr(2, 3, Seed(1), 5).unwrap().frame;
    let b = construct::generate_exact_pr(3, 6, Seed(2), 5).unwrap().frame;
    let s = construct::compose_direct_sum(&a, &b);
    assert_eq!((s.dim(), s.len()), (5, 9));
    assert!(lifting::has_exact_pr_redundancy(&s));
    assert!(lifting::has_exact_pr_redundancy_by_search(&s));
}
