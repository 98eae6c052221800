use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use exactpr::construct::{self, Certified, DEFAULT_RETRIES};
use exactpr::format::{encode_vectors, FrameFile, Meta, SubspaceFile};
use exactpr::frames::{self, Frame, IndexSet};
use exactpr::lifting::{self, S2Witness};
use exactpr::ratlin::{format_rational, parse_rational};
use exactpr::subspaces::{self, MaximalityVerdict, Subspace};
use exactpr::{catalog, Error, Rational, Seed};

#[derive(Parser)]
#[command(name = "exactpr", version, about = "Exact phase-retrievable frames and subspaces over the rationals")]
struct Cli {
    /// Add wall-clock timing to reports.
    #[arg(long, global = true)]
    timing: bool,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Generate a certified frame.
    Gen(GenArgs),
    /// Run checks on a frame file.
    Verify(VerifyArgs),
    /// Report d(F), spark and PR-redundancy of a frame file.
    Analyze(AnalyzeArgs),
    /// Phase-retrievable subspaces of a frame file.
    Subspace(SubspaceArgs),
    /// Regression over the built-in reference frames and examples.
    #[command(name = "paper-suite")]
    ReferenceSuite,
}

#[derive(Clone, Copy, ValueEnum)]
enum Kind {
    Exact,
    Dmax,
    BasisSubspace,
}

#[derive(Args)]
struct GenArgs {
    #[arg(long)]
    n: usize,
    /// Frame length; ignored for basis-subspace.
    #[arg(long)]
    len: Option<usize>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, value_enum, default_value = "exact")]
    kind: Kind,
    /// Target d(F) for dmax, subspace dimension for basis-subspace.
    #[arg(long)]
    k: Option<usize>,
    #[arg(long, default_value_t = DEFAULT_RETRIES)]
    retries: usize,
    /// Write the frame file here instead of standard output.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct VerifyArgs {
    file: PathBuf,
    #[arg(long)]
    pr: bool,
    #[arg(long)]
    exact: bool,
    #[arg(long)]
    redundancy: bool,
    #[arg(long)]
    lifted_independence: bool,
}

#[derive(Args)]
struct AnalyzeArgs {
    file: PathBuf,
    #[arg(long)]
    dmax: bool,
    #[arg(long)]
    spark: bool,
    #[arg(long)]
    redundancy: bool,
}

#[derive(Clone, Copy, ValueEnum)]
enum Action {
    Random,
    Check,
    Maximal,
    Extend,
}

#[derive(Args)]
struct SubspaceArgs {
    /// Frame file.
    file: PathBuf,
    #[arg(long, value_enum)]
    action: Action,
    /// Dimension for `random`.
    #[arg(long)]
    dim: Option<usize>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Subspace file for `check` and `maximal`.
    #[arg(long)]
    subspace: Option<PathBuf>,
    /// Comma-separated rationals for `extend`.
    #[arg(long)]
    vector: Option<String>,
    /// Extension probes for `maximal` when no criterion applies.
    #[arg(long, default_value_t = 16)]
    probes: usize,
    /// Write the resulting subspace file here.
    #[arg(long)]
    out: Option<PathBuf>,
}

/// What a command produced: text for standard output and whether every
/// requested check passed.
struct Outcome {
    stdout: String,
    passed: bool,
}

fn report(command: &str, results: Value, passed: bool, started: Option<Instant>) -> Outcome {
    let mut v = json!({ "command": command, "passed": passed, "results": results });
    if let Some(t) = started {
        v["timing_ms"] = json!(t.elapsed().as_millis() as u64);
    }
    let mut stdout = serde_json::to_string_pretty(&v).expect("json");
    stdout.push('\n');
    Outcome { stdout, passed }
}

fn read(path: &Path) -> exactpr::Result<String> {
    fs::read_to_string(path).map_err(|e| Error::Parse(format!("{}: {e}", path.display())))
}

fn write(path: &Path, text: &str) -> exactpr::Result<()> {
    fs::write(path, text).map_err(|e| Error::Parse(format!("{}: {e}", path.display())))
}

fn load_frame(path: &Path) -> exactpr::Result<Frame> {
    FrameFile::parse(&read(path)?)?.to_frame()
}

fn load_subspace(path: &Path) -> exactpr::Result<Subspace> {
    SubspaceFile::parse(&read(path)?)?.to_subspace()
}

fn one_based(set: &IndexSet) -> Value {
    json!(set.one_based())
}

fn rationals(v: &[Rational]) -> Value {
    json!(v.iter().map(format_rational).collect::<Vec<_>>())
}

fn witness_json(w: &S2Witness) -> Value {
    json!({ "x": rationals(&w.x), "y": rationals(&w.y), "differing_index": w.differing_index.map(|i| i + 1) })
}

fn subspace_json(m: &Subspace) -> Value {
    serde_json::to_value(SubspaceFile::from_subspace(m)).expect("json")
}

fn verdict_json(v: &MaximalityVerdict) -> Value {
    match v {
        MaximalityVerdict::Maximal { reason } => json!({ "status": "Maximal", "reason": reason }),
        MaximalityVerdict::NotMaximal { superspace, reason } => {
            json!({ "status": "NotMaximal", "reason": reason, "witness": subspace_json(superspace) })
        }
        MaximalityVerdict::Unknown { probe_report } => json!({ "status": "Unknown", "probe_report": probe_report }),
    }
}

fn need<T>(v: Option<T>, flag: &str) -> exactpr::Result<T> {
    v.ok_or_else(|| Error::OutOfRange(format!("missing --{flag}")))
}

fn cmd_gen(a: &GenArgs, started: Option<Instant>) -> exactpr::Result<Outcome> {
    let seed = Seed(a.seed);
    let (frame, certificate, subspace) = match a.kind {
        Kind::Exact => {
            let Certified { frame, certificate } = construct::generate_exact_pr(a.n, need(a.len, "len")?, seed, a.retries)?;
            (frame, certificate, None)
        }
        Kind::Dmax => {
            let Certified { frame, certificate } =
                construct::generate_with_dmax(a.n, need(a.k, "k")?, need(a.len, "len")?, seed, a.retries)?;
            (frame, certificate, None)
        }
        Kind::BasisSubspace => {
            let k = need(a.k, "k")?;
            let inst = construct::basis_with_maximal_subspace(a.n, k, seed)?;
            let certificate = construct::Certificate {
                kind: format!("basis-subspace({k})"),
                exact_pr: false,
                exact_pr_redundancy: lifting::has_exact_pr_redundancy(&inst.basis),
                d: subspaces::d_max(&inst.basis)?,
                plan: vec!["MaximalSubspace".into()],
                seed: a.seed,
                retries: inst.retries,
            };
            (inst.basis, certificate, Some(encode_vectors(&inst.subspace.basis().columns())))
        }
    };
    let meta = Meta { seed: Some(a.seed), plan: Some(certificate.plan.clone()), certificate: Some(certificate.clone()), subspace };
    let text = FrameFile::from_frame(&frame, Some(meta)).to_json();
    match &a.out {
        Some(path) => {
            write(path, &text)?;
            let results = json!({ "out": path.display().to_string(), "certificate": certificate });
            Ok(report("gen", results, true, started))
        }
        None => Ok(Outcome { stdout: text, passed: true }),
    }
}

fn cmd_verify(a: &VerifyArgs, started: Option<Instant>) -> exactpr::Result<Outcome> {
    let frame = load_frame(&a.file)?;
    let any = a.pr || a.exact || a.redundancy || a.lifted_independence;
    let (pr, exact) = if any { (a.pr, a.exact) } else { (true, true) };
    let mut results = serde_json::Map::new();
    let mut passed = true;
    if pr || exact {
        let rep = frames::is_exact_pr_frame(&frame);
        if pr {
            passed &= rep.phase_retrievable;
            let mut r = json!({ "pass": rep.phase_retrievable });
            if let Some(lam) = &rep.failing {
                r["failing_subset"] = one_based(lam);
            }
            results.insert("pr".into(), r);
        }
        if exact {
            passed &= rep.exact;
            let mut r = json!({ "pass": rep.exact });
            if rep.phase_retrievable {
                r["removable"] = json!(rep.removable.iter().map(|i| i + 1).collect::<Vec<_>>());
            } else {
                r["reason"] = json!("not phase retrievable");
            }
            results.insert("exact".into(), r);
        }
    }
    if a.redundancy {
        let len = frame.len();
        let mut missing = Vec::new();
        let mut witnesses = Vec::new();
        let pr = frames::is_phase_retrievable(&frame);
        for i in 0..len {
            let lam = IndexSet::co_singleton(len, i);
            match lifting::find_s2_witness(&frame, &lam) {
                Some(w) => witnesses.push(witness_json(&w)),
                None => missing.push(i + 1),
            }
        }
        let ok = missing.is_empty();
        debug_assert!(!pr || ok == lifting::has_exact_pr_redundancy(&frame));
        passed &= ok;
        results.insert(
            "redundancy".into(),
            json!({ "pass": ok, "removals_without_witness": missing, "witnesses": witnesses }),
        );
    }
    if a.lifted_independence {
        let ok = lifting::lifted_independent(&frame);
        passed &= ok;
        results.insert("lifted_independence".into(), json!({ "pass": ok }));
    }
    Ok(report("verify", Value::Object(results), passed, started))
}

fn cmd_analyze(a: &AnalyzeArgs, started: Option<Instant>) -> exactpr::Result<Outcome> {
    let frame = load_frame(&a.file)?;
    let all = !(a.dmax || a.spark || a.redundancy);
    let mut results = serde_json::Map::new();
    results.insert("n".into(), json!(frame.dim()));
    results.insert("len".into(), json!(frame.len()));
    if all || a.dmax {
        let (d, lam) = subspaces::d_max_with_witness(&frame)?;
        results.insert("dmax".into(), json!({ "value": d, "subset": one_based(&lam) }));
    }
    if all || a.spark {
        let s = frames::spark(&frame);
        results.insert("spark".into(), json!({ "value": s, "full_spark": s == frame.dim() + 1 }));
    }
    if all || a.redundancy {
        let r = lifting::pr_redundancy(&frame, None)?;
        results.insert("redundancy".into(), json!(format_rational(&r)));
    }
    Ok(report("analyze", Value::Object(results), true, started))
}

fn parse_vector(s: &str) -> exactpr::Result<Vec<Rational>> {
    s.split(',').map(|t| parse_rational(t.trim())).collect()
}

fn cmd_subspace(a: &SubspaceArgs, started: Option<Instant>) -> exactpr::Result<Outcome> {
    let frame = load_frame(&a.file)?;
    let seed = Seed(a.seed);
    let save = |m: &Subspace| -> exactpr::Result<()> {
        if let Some(p) = &a.out {
            write(p, &SubspaceFile::from_subspace(m).to_json())?;
        }
        Ok(())
    };
    let with_support = |m: &Subspace, r: &mut Value| -> exactpr::Result<()> {
        if frame.is_basis() {
            r["min_support"] = json!(subspaces::min_support(m, &frame)?);
        }
        Ok(())
    };
    match a.action {
        Action::Random => {
            let m = subspaces::random_pr_subspace(&frame, need(a.dim, "dim")?, seed)?;
            save(&m)?;
            let mut r = json!({ "pr_subspace": true, "dim": m.dim(), "subspace": subspace_json(&m) });
            with_support(&m, &mut r)?;
            Ok(report("subspace random", r, true, started))
        }
        Action::Check => {
            let m = load_subspace(&need(a.subspace.clone(), "subspace")?)?;
            let ok = subspaces::is_pr_subspace(&frame, &m);
            let mut r = json!({ "pr_subspace": ok, "dim": m.dim() });
            with_support(&m, &mut r)?;
            Ok(report("subspace check", r, ok, started))
        }
        Action::Maximal => {
            let m = load_subspace(&need(a.subspace.clone(), "subspace")?)?;
            let v = subspaces::is_maximal_pr_subspace(&frame, &m, a.probes, seed)?;
            if let MaximalityVerdict::NotMaximal { superspace, .. } = &v {
                save(superspace)?;
            }
            Ok(report("subspace maximal", json!({ "dim": m.dim(), "verdict": verdict_json(&v) }), true, started))
        }
        Action::Extend => {
            let x = parse_vector(&need(a.vector.clone(), "vector")?)?;
            let m = subspaces::extend_to_maximal(&frame, &x, seed)?;
            save(&m)?;
            let v = subspaces::is_maximal_pr_subspace(&frame, &m, 0, seed)?;
            let mut r = json!({ "dim": m.dim(), "subspace": subspace_json(&m), "verdict": verdict_json(&v) });
            with_support(&m, &mut r)?;
            Ok(report("subspace extend", r, true, started))
        }
    }
}

fn claim(items: &mut Vec<Value>, name: &str, pass: bool, detail: Value) {
    items.push(json!({ "claim": name, "pass": pass, "detail": detail }));
}

fn cmd_reference_suite(started: Option<Instant>) -> exactpr::Result<Outcome> {
    let mut items = Vec::new();
    for (len, f) in catalog::reference_frames_r5() {
        let rep = frames::is_exact_pr_frame_by_scan(&f)?;
        claim(&mut items, &format!("reference (5,{len}) frame is exact PR"), rep.exact, json!({ "removable": rep.removable }));
    }
    let f = catalog::r3_example();
    let d = subspaces::d_max(&f)?;
    claim(&mut items, "R3 example has d(F) = 2", d == 2, json!({ "d": d }));
    let red = lifting::has_exact_pr_redundancy(&f);
    claim(&mut items, "R3 example has exact PR-redundancy", red, json!({}));
    for (removed, x, y) in catalog::r3_example_witnesses() {
        let to_r = |v: [i64; 3]| v.iter().map(|&t| exactpr::ratlin::rat(t)).collect::<Vec<_>>();
        let w = S2Witness { x: to_r(x), y: to_r(y), differing_index: Some(removed) };
        let ok = w.validate(&f, &IndexSet::co_singleton(f.len(), removed));
        claim(&mut items, &format!("R3 example witness pair for removing vector {}", removed + 1), ok, witness_json(&w));
    }
    let e4 = Frame::standard_basis(4);
    let m = catalog::r4_example_subspace();
    let pr = subspaces::is_pr_subspace(&e4, &m);
    claim(&mut items, "R4 example subspace is PR", pr, json!({}));
    let s = subspaces::min_support(&m, &e4)?;
    claim(&mut items, "R4 example subspace has minimal support 3", s == 3, json!({ "min_support": s }));
    if pr {
        let v = subspaces::is_maximal_pr_subspace(&e4, &m, 0, Seed(0))?;
        claim(&mut items, "R4 example subspace is maximal", v.status() == "Maximal", verdict_json(&v));
    }
    let passed = items.iter().all(|i| i["pass"] == json!(true));
    Ok(report("paper-suite", json!(items), passed, started))
}

fn exit_code(e: &Error) -> u8 {
    match e {
        Error::NotPRSubspace | Error::RetriesExhausted { .. } => 1,
        _ => 2,
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let started = cli.timing.then(Instant::now);
    let result = match &cli.cmd {
        Cmd::Gen(a) => cmd_gen(a, started),
        Cmd::Verify(a) => cmd_verify(a, started),
        Cmd::Analyze(a) => cmd_analyze(a, started),
        Cmd::Subspace(a) => cmd_subspace(a, started),
        Cmd::ReferenceSuite => cmd_reference_suite(started),
    };
    match result {
        Ok(out) => {
            print!("{}", out.stdout);
            if out.passed {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(e) => {
            eprintln!("error: {}: {e}", e.name());
            ExitCode::from(exit_code(&e))
        }
    }
}
