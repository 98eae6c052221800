//! The ten acceptance criteria, each reported on its own line.
//!
//! Every criterion runs even when an earlier one fails; the target fails at
//! the end if any of them did.

use std::process::ExitCode;
use std::time::{Duration, Instant};

use exactpr::catalog;
use exactpr::construct::{self, admissible_dmax, DEFAULT_RETRIES};
use exactpr::frames::{self, IndexSet};
use exactpr::lifting::{self, S2Witness};
use exactpr::ratlin::{rat, sample::sample_integers, Rational};
use exactpr::subspaces;
use exactpr::{Frame, Seed};

/// Frames produced along the way, checked together by criterion 10.
#[derive(Default)]
struct Ledger {
    generated: Vec<Frame>,
    pr_subspaces: usize,
}

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn(&mut Ledger) -> Outcome);

fn tri(n: usize) -> usize {
    n * (n + 1) / 2
}

/// Seeded integer frame with entries in `[lo, hi]`, if it spans.
fn random_frame(n: usize, len: usize, lo: i64, hi: i64, seed: u64) -> Option<Frame> {
    Frame::from_matrix(&sample_integers(n, len, lo, hi, &mut Seed(seed).rng())).ok()
}

fn check(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn c1_reference_frames(_: &mut Ledger) -> Outcome {
    let mut worst = Duration::ZERO;
    for (len, f) in catalog::reference_frames_r5() {
        let t = Instant::now();
        let rep = frames::is_exact_pr_frame_by_scan(&f).map_err(|e| e.to_string())?;
        let el = t.elapsed();
        worst = worst.max(el);
        check(rep.phase_retrievable, || format!("(5,{len}) fails the complement property"))?;
        check(rep.exact, || format!("(5,{len}) has removable vectors {:?}", rep.removable))?;
        check(el < Duration::from_secs(60), || format!("(5,{len}) took {el:?}"))?;
    }
    Ok(format!("six frames exact by subset scan, slowest {worst:.2?}"))
}

fn c2_generator_coverage(ledger: &mut Ledger) -> Outcome {
    let mut targets = 0;
    let mut worst_retries = 0;
    for n in 3..=6 {
        for len in 2 * n - 1..=tri(n) {
            targets += 1;
            let mut retries = 0;
            for seed in 0..100 {
                let c = construct::generate_exact_pr(n, len, Seed(seed), DEFAULT_RETRIES)
                    .map_err(|e| format!("({n},{len}) seed {seed}: {e}"))?;
                retries += c.certificate.retries;
                let rep = frames::is_exact_pr_frame(&c.frame);
                check(c.frame.dim() == n && c.frame.len() == len && rep.exact, || {
                    format!("({n},{len}) seed {seed}: output not exact")
                })?;
                if seed < 3 {
                    ledger.generated.push(c.frame);
                }
            }
            check(retries <= 5, || format!("({n},{len}): {retries} retries over 100 seeds"))?;
            worst_retries = worst_retries.max(retries);
        }
    }
    Ok(format!("{targets} targets x 100 seeds, at most {worst_retries} retries per target"))
}

fn c3_r3_example(_: &mut Ledger) -> Outcome {
    let f = catalog::r3_example();
    let d = subspaces::d_max(&f).map_err(|e| e.to_string())?;
    check(d == 2, || format!("d(F) = {d}"))?;
    check(lifting::has_exact_pr_redundancy(&f), || "no exact PR-redundancy".into())?;
    let v = |xs: [i64; 3]| xs.iter().map(|&x| rat(x)).collect::<Vec<Rational>>();
    let mut bad = Vec::new();
    // the pairs for removing e3, e1+e2 and e1+e2+e3
    for (removed, x, y) in catalog::r3_example_witnesses().into_iter().filter(|w| w.0 >= 2) {
        let w = S2Witness { x: v(x), y: v(y), differing_index: Some(removed) };
        let lam = IndexSet::co_singleton(f.len(), removed);
        if !w.validate(&f, &lam) {
            bad.push(format!("removing vector {}: x = {x:?}, y = {y:?}", removed + 1));
        }
    }
    check(bad.is_empty(), || format!("listed witness pairs do not validate: {}", bad.join("; ")))?;
    Ok("d(F) = 2, exact PR-redundancy, listed pairs validate".into())
}

fn c4_basis_law(ledger: &mut Ledger) -> Outcome {
    for n in 2..=6 {
        let e = Frame::standard_basis(n);
        let d = subspaces::d_max(&e).map_err(|e| e.to_string())?;
        check(d == n.div_ceil(2), || format!("d(E_{n}) = {d}"))?;
        for k in 1..=n {
            let r = construct::basis_with_maximal_subspace(n, k, Seed(k as u64));
            let allowed = k <= n.div_ceil(2);
            check(r.is_ok() == allowed, || format!("(n={n}, k={k}): ok = {}", r.is_ok()))?;
            if let Ok(inst) = r {
                let b = &inst.basis;
                check(subspaces::is_pr_subspace(b, &inst.subspace), || format!("(n={n}, k={k}) not PR"))?;
                let verdict = subspaces::is_maximal_pr_subspace(b, &inst.subspace, 0, Seed(0))
                    .map_err(|e| e.to_string())?;
                check(verdict.status() == "Maximal", || format!("(n={n}, k={k}) verdict {}", verdict.status()))?;
                let s = subspaces::min_support(&inst.subspace, b).map_err(|e| e.to_string())?;
                check(s >= k, || format!("(n={n}, k={k}) support {s}"))?;
                let nonzero = subspaces::project_frame(b, &inst.subspace)
                    .iter()
                    .filter(|p| !exactpr::ratlin::is_zero_vec(p))
                    .count();
                check(nonzero == 2 * k - 1, || format!("(n={n}, k={k}) {nonzero} nonzero projections"))?;
                ledger.pr_subspaces += 1;
            }
        }
    }
    Ok("exists iff 1 <= k <= ceil(n/2) for n = 2..6, d(E_n) = ceil(n/2)".into())
}

fn c5_r4_example(ledger: &mut Ledger) -> Outcome {
    let e = Frame::standard_basis(4);
    let m = catalog::r4_example_subspace();
    check(subspaces::is_pr_subspace(&e, &m), || "not a PR subspace".into())?;
    let s = subspaces::min_support(&m, &e).map_err(|e| e.to_string())?;
    check(s == 3, || format!("min support {s}"))?;
    let v = subspaces::is_maximal_pr_subspace(&e, &m, 0, Seed(0)).map_err(|e| e.to_string())?;
    check(v.status() == "Maximal", || format!("verdict {}", v.status()))?;
    ledger.pr_subspaces += 1;
    Ok("PR, min support 3, Maximal".into())
}

fn c6_oracle_equivalence(_: &mut Ledger) -> Outcome {
    let (mut frames_seen, mut pr) = (0, 0);
    let mut seed = 0u64;
    while frames_seen < 240 {
        seed += 1;
        let n = 1 + (seed % 4) as usize;
        let len = n + (seed / 4 % (9 - n as u64)) as usize;
        let Some(f) = random_frame(n, len, -2, 2, seed) else { continue };
        frames_seen += 1;
        let cp = frames::has_complement_property(&f).map_err(|e| e.to_string())?.holds;
        let lifted = lifting::find_s2_element(&f, &lifting::full_set(&f)).is_none();
        check(cp == lifted, || format!("seed {seed}: complement property {cp}, lifted kernel {lifted}"))?;
        pr += cp as usize;
    }
    check(pr > 0 && pr < frames_seen, || "sample is one-sided".into())?;
    Ok(format!("{frames_seen} frames, {pr} PR, no disagreements"))
}

fn c7_support_bound(ledger: &mut Ledger) -> Outcome {
    let mut count = 0;
    for n in 2..=6 {
        let mut bases = vec![Frame::standard_basis(n)];
        for s in 0..3 {
            let m = sample_integers(n, n, -4, 4, &mut Seed(1000 + s).rng());
            if let Ok(b) = Frame::from_matrix(&m) {
                bases.push(b);
            }
        }
        for (bi, b) in bases.iter().enumerate() {
            let d = subspaces::d_max(b).map_err(|e| e.to_string())?;
            for ell in 1..=d {
                for seed in 0..12 {
                    let m = subspaces::random_pr_subspace(b, ell, Seed(seed)).map_err(|e| e.to_string())?;
                    let s = subspaces::min_support(&m, b).map_err(|e| e.to_string())?;
                    check(s >= ell, || format!("n={n} basis {bi} dim {ell}: support {s}"))?;
                    count += 1;
                }
            }
            // extension from seeded vectors of every admissible support size
            for k in 1..=n.div_ceil(2) {
                for seed in 0..4u64 {
                    let x = extension_start(b, k, Seed(seed))?;
                    let m = subspaces::extend_to_maximal(b, &x, Seed(seed)).map_err(|e| e.to_string())?;
                    let s = subspaces::min_support(&m, b).map_err(|e| e.to_string())?;
                    check(m.contains(&x) && m.dim() == k && s == k, || {
                        format!("n={n} basis {bi} k={k}: dim {} support {s}", m.dim())
                    })?;
                    let v = subspaces::is_maximal_pr_subspace(b, &m, 0, Seed(seed)).map_err(|e| e.to_string())?;
                    check(v.status() == "Maximal", || format!("n={n} basis {bi} k={k}: {}", v.status()))?;
                    count += 1;
                }
            }
        }
    }
    ledger.pr_subspaces += count;
    check(ledger.pr_subspaces >= 500, || format!("only {} PR subspaces", ledger.pr_subspaces))?;
    Ok(format!("{} PR subspaces, all with min_support >= dim", ledger.pr_subspaces))
}

/// A vector whose dual-basis coefficients are supported on the last `k`
/// positions: `x = Σ c_i b*_i`, so `⟨x, b_j⟩ = c_j`.
fn extension_start(b: &Frame, k: usize, seed: Seed) -> Result<Vec<Rational>, String> {
    let n = b.dim();
    let coeffs = sample_integers(1, k, 1, 9, &mut seed.rng());
    let mut c = vec![rat(0); n];
    for i in 0..k {
        c[n - 1 - i] = coeffs.get(0, i).clone();
    }
    let gram_t = b.matrix().transpose();
    let inv = gram_t.inverse().ok_or("basis not invertible")?;
    Ok(inv.mul_vec(&c))
}

fn c8_dmax_generation(ledger: &mut Ledger) -> Outcome {
    let mut triples = 0;
    for n in 2..=6usize {
        for k in n.div_ceil(2)..=n {
            for len in n..=tri(n) {
                if !admissible_dmax(n, k, len) {
                    continue;
                }
                triples += 1;
                let c = construct::generate_with_dmax(n, k, len, Seed(len as u64), DEFAULT_RETRIES)
                    .map_err(|e| format!("(n={n}, k={k}, N={len}): {e}"))?;
                let d = subspaces::d_max(&c.frame).map_err(|e| e.to_string())?;
                check(d == k, || format!("(n={n}, k={k}, N={len}): d = {d}"))?;
                check(lifting::has_exact_pr_redundancy(&c.frame), || {
                    format!("(n={n}, k={k}, N={len}): no exact PR-redundancy")
                })?;
                ledger.generated.push(c.frame);
            }
        }
    }
    Ok(format!("{triples} admissible (n, k, N) triples certified"))
}

fn c9_lifted_completion(ledger: &mut Ledger) -> Outcome {
    for n in 3..=4 {
        let start = construct::generate_exact_pr(n, 2 * n - 1, Seed(9), DEFAULT_RETRIES)
            .map_err(|e| e.to_string())?
            .frame;
        let pool = sample_integers(n, 40, -5, 5, &mut Seed(90 + n as u64).rng()).columns();
        let full = lifting::lifted_completion(&start, &pool, tri(n)).map_err(|e| e.to_string())?;
        check(lifting::lifted_independent(&full), || format!("n={n}: completion not lifted independent"))?;
        let rep = frames::is_exact_pr_frame(&full);
        check(rep.phase_retrievable, || format!("n={n}: completion not PR"))?;
        check(!rep.exact, || format!("n={n}: completion is exact"))?;
        ledger.generated.push(full);
    }
    Ok("completions to n(n+1)/2 for n = 3, 4 are PR and not exact".into())
}

fn c10_length_bound(ledger: &mut Ledger) -> Outcome {
    let mut relevant = 0;
    for f in &ledger.generated {
        if !lifting::has_exact_pr_redundancy(f) {
            continue;
        }
        let d = subspaces::d_max(f).map_err(|e| e.to_string())?;
        if d < f.dim() {
            relevant += 1;
            check(f.len() < tri(f.dim()), || format!("n={} N={} d={d}", f.dim(), f.len()))?;
        }
    }
    check(relevant > 0, || "no frame with d(F) < n was generated".into())?;
    Ok(format!("{relevant} of {} generated frames have d(F) < n, all with N < n(n+1)/2", ledger.generated.len()))
}

fn main() -> ExitCode {
    let criteria: [Criterion; 10] = [
        ("reference frames in R^5 are exact PR", c1_reference_frames),
        ("exact PR generator coverage", c2_generator_coverage),
        ("R^3 example", c3_r3_example),
        ("basis dimension law", c4_basis_law),
        ("R^4 example subspace", c5_r4_example),
        ("oracle equivalence", c6_oracle_equivalence),
        ("support bound", c7_support_bound),
        ("prescribed d(F) generation", c8_dmax_generation),
        ("lifted completion is not exact", c9_lifted_completion),
        ("length bound when d(F) < n", c10_length_bound),
    ];
    let mut ledger = Ledger::default();
    let mut failed = Vec::new();
    for (i, (name, run)) in criteria.iter().enumerate() {
        let t = Instant::now();
        let out = run(&mut ledger);
        let secs = t.elapsed().as_secs_f64();
        match out {
            Ok(detail) => println!("criterion {:>2} PASS  {name}: {detail} [{secs:.1}s]", i + 1),
            Err(why) => {
                println!("criterion {:>2} FAIL  {name}: {why} [{secs:.1}s]", i + 1);
                failed.push(i + 1);
            }
        }
    }
    if failed.is_empty() {
        println!("acceptance: all 10 criteria pass");
        ExitCode::SUCCESS
    } else {
        println!("acceptance: failed criteria {failed:?}");
        ExitCode::FAILURE
    }
}
