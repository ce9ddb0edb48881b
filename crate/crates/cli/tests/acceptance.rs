//! Acceptance suite: one PASS/FAIL line per criterion, with its runtime.
//! Runs without the libtest harness so the lines are always printed.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, ExitCode};
use std::time::{Duration, Instant};

use hg_cli::format::{canonicalize, parse_structure, serialize_structure};
use hg_cli::verify::{self, Params, Suite};
use hg_core::blacksets::{check_substructure, Probes};
use hg_core::rational::{int, ratio};
use hg_core::witnesses::{
    anchors, axiom_delta, gen_instability, gen_nonsimple, gen_qe_failure, gen_tp2, k_subsets,
    lexicographic_functions, perturb_black_witness,
};
use hg_core::random::{self, FuzzBounds};
use hg_core::{Rational, RationalVector};

type Outcome = Result<String, String>;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn fuzz_suite(suite: Suite) -> Result<verify::SuiteReport, String> {
    let p = Params::default();
    let mut r = verify::run(suite, &p).map_err(|e| e.to_string())?;
    let r = r.remove(0);
    let failed: Vec<String> = r.claims.iter().filter(|c| !c.pass).map(|c| c.id.clone()).collect();
    ensure(failed.is_empty(), || format!("failed claims: {}", failed.join(", ")))?;
    Ok(r)
}

fn instability_grid() -> Outcome {
    let mut total = 0;
    for n in 1..=10 {
        let (_, r) = gen_instability(n).map_err(|e| e.to_string())?;
        ensure(r.claims.len() == n * n, || format!("n={n}: {} claims", r.claims.len()))?;
        for i in 1..=n {
            for j in 1..=n {
                let id = format!("d(u{i}+v{j})");
                let c = r.claims.iter().find(|c| c.id == id).ok_or(format!("missing {id}"))?;
                let want = if i <= j { ratio(1, 2) } else { int(0) };
                ensure(c.pass && c.computed == want, || format!("n={n} {id}: {}", c.computed))?;
            }
        }
        total += r.claims.len();
    }
    Ok(format!("n=1..10, {total} claims"))
}

fn tp2_configuration() -> Outcome {
    let funcs = lexicographic_functions(4, 4, 16);
    let (s, r) = gen_tp2(4, 4, &funcs).map_err(|e| e.to_string())?;
    ensure(r.passed(), || format!("{} failing claims", r.failures().count()))?;
    let conflicts: Vec<_> = r.claims.iter().filter(|c| c.anchor == anchors::TP2_CLAIM1).collect();
    ensure(conflicts.len() == 4 * 6, || format!("{} conflict claims", conflicts.len()))?;
    ensure(conflicts.iter().all(|c| c.computed == ratio(1, 2)), || "conflict value is not 1/2".into())?;

    // every white point x = black with its +1/2 coordinate negated, against
    // every black point and 0
    let allowed = [int(1), ratio(9, 4), ratio(5, 2), int(3), ratio(9, 2)];
    let blacks: Vec<&RationalVector> = s.blacks().iter().filter(|b| !b.is_zero()).collect();
    ensure(blacks.len() == 16 * 4, || format!("{} black points", blacks.len()))?;
    let half = ratio(1, 2);
    let mut pairs = 0;
    for own in &blacks {
        let coords: Vec<Rational> =
            own.coords().iter().map(|x| if *x == half { -x } else { x.clone() }).collect();
        let white = RationalVector::new(coords).map_err(|e| e.to_string())?;
        for b in s.blacks() {
            let d = (&white - b).norm_sq();
            ensure(d >= int(1), || format!("white {white} is within {d} of {b}"))?;
            ensure(allowed.contains(&d), || format!("unexpected squared distance {d}"))?;
            pairs += 1;
        }
        ensure(s.dist_black_sq(&white).map_err(|e| e.to_string())?.dist_sq == int(1), || {
            format!("white {white} is not at truncated distance 1")
        })?;
    }
    Ok(format!("24 conflicts, {pairs} white/black pairs"))
}

fn nonsimple_configuration() -> Outcome {
    let (_, r) = gen_nonsimple(3, 4).map_err(|e| e.to_string())?;
    ensure(r.passed(), || format!("{} failing claims", r.failures().count()))?;
    let n = k_subsets(4, 3).len();
    let mut pairs = 0;
    for x in 0..n {
        for y in (0..n).filter(|&y| y != x) {
            let tag = format!("[X{x},Y{y},");
            let ed: Vec<_> = r.claims.iter().filter(|c| c.id.starts_with("e-d") && c.id.contains(&tag)).collect();
            let white: Vec<_> = r.claims.iter().filter(|c| c.id.starts_with("white[") && c.id.contains(&tag)).collect();
            ensure(!ed.is_empty() && !white.is_empty(), || format!("no claims for X{x}, Y{y}"))?;
            ensure(ed.iter().all(|c| c.computed == ratio(1, 2)), || format!("e-d for X{x}, Y{y}"))?;
            ensure(white.iter().all(|c| c.computed == int(1)), || format!("white for X{x}, Y{y}"))?;
            pairs += 1;
        }
    }
    Ok(format!("{pairs} ordered pairs, {} claims", r.claims.len()))
}

fn qe_failure() -> Outcome {
    let q = gen_qe_failure(3).map_err(|e| e.to_string())?;
    ensure(q.report.passed(), || format!("{} failing claims", q.report.failures().count()))?;
    let err = |e: hg_core::Error| e.to_string();
    let db = q.s1.dist_black_sq(&q.b).map_err(err)?;
    ensure(db.dist_sq == ratio(1, 4), || format!("d1(b)^2 = {}", db.dist_sq))?;
    let jb = q.join.map(0).apply(&q.b).map_err(err)?;
    let ring = q.join.map(1).apply(&q.s2.blacks()[1]).map_err(err)?;
    ensure(jb.dist_sq(&ring).map_err(err)? == ratio(1, 8), || "joint distance to a ring point".into())?;
    ensure(q.union.dist_black_sq(&jb).map_err(err)?.dist_sq == ratio(1, 8), || "joint d(b)^2".into())?;

    for name in ["line-in-S1-violations", "line-in-S2-violations", "line-identification-violations"] {
        let c = q.report.claims.iter().find(|c| c.id == name).ok_or(format!("missing {name}"))?;
        ensure(c.pass, || format!("{name} failed"))?;
    }
    let ext = check_substructure(&q.s1, &q.union, q.join.map(0), Probes::DefaultAnd(vec![q.b.clone()])).map_err(err)?;
    let v = ext.violation.ok_or("S1 embeds in the join at every probe")?;
    ensure(v.probe == q.b && v.small == ratio(1, 4) && v.big == ratio(1, 8), || {
        format!("violation at {} ({} vs {})", v.probe, v.small, v.big)
    })?;

    let da = q.s1.dist_black_sq(&q.a).map_err(err)?;
    ensure(da.dist_sq == ratio(1, 16) && da.unique && da.witness.as_ref() == Some(&q.c), || {
        format!("d1(a)^2 = {}, unique = {}", da.dist_sq, da.unique)
    })?;
    Ok("d1(b)^2=1/4, joint 1/8, fails at b, d1(a)^2=1/16 unique".into())
}

fn amalgam_formula() -> Outcome {
    let r = fuzz_suite(Suite::AmalgamFuzz)?;
    let formula = r.claims.iter().filter(|c| c.anchor == anchors::AMALGAM_FORMULA).count();
    let restriction = r.claims.iter().filter(|c| c.anchor == anchors::AMALGAM_RESTRICTION).count();
    ensure(formula == 100 && restriction == 100, || format!("{formula}/{restriction} claims"))?;
    Ok("100 instances, formula and restrictions exact".into())
}

fn pair_amalgam() -> Outcome {
    let r = fuzz_suite(Suite::PairFuzz)?;
    for kind in ["axiom-failures", "restriction-failures", "formula-failures", "shift-mismatches", "split-mismatches"] {
        let n = r.claims.iter().filter(|c| c.id.ends_with(kind)).count();
        ensure(n == 100, || format!("{n} {kind} claims"))?;
    }
    Ok("100 instances".into())
}

fn independence_suite() -> Outcome {
    let r = fuzz_suite(Suite::IndependenceFuzz)?;
    for kind in ["symmetry", "triviality", "transitivity", "monotonicity"] {
        let n = r.claims.iter().filter(|c| c.id.ends_with(kind)).count();
        ensure(n == 100, || format!("{n} {kind} claims"))?;
    }
    let tol = ratio(1, 1_000_000_000);
    let zero_margins = r
        .claims
        .iter()
        .filter(|c| c.id.ends_with("/margin") && c.id.starts_with("independence"))
        .filter(|c| c.computed < tol)
        .count();
    let curated: Vec<_> = r.claims.iter().filter(|c| c.id.starts_with("curated")).collect();
    ensure(zero_margins > 0, || "no independent instance".into())?;
    ensure(!curated.is_empty() && curated.iter().all(|c| c.computed >= ratio(1, 1000)), || {
        "curated margin below 1e-3".into()
    })?;
    Ok(format!("100 instances, {zero_margins} zero margins, {} curated", curated.len()))
}

fn delta_bookkeeping() -> Outcome {
    let (d, dp) = axiom_delta(&ratio(1, 8), &int(2)).map_err(|e| e.to_string())?;
    ensure(d == int(2) && dp == int(1), || format!("axiom_delta(1/8, 2) = ({d}, {dp})"))?;
    let mut rng = random::rng(0);
    for i in 0..50 {
        let inst = random::perturbation_instance(&mut rng, &FuzzBounds::default());
        let p = perturb_black_witness(&inst.c, &inst.base, &inst.delta_prime_sq).map_err(|e| e.to_string())?;
        ensure(p.exact && p.norm_identity_holds(), || format!("instance {i}"))?;
    }
    Ok("(2, 1), 50 exact perturbations".into())
}

fn samples() -> Vec<PathBuf> {
    let dir = Path::new(env!("CARGO_MANIFEST_DIR")).join("samples");
    let mut out: Vec<PathBuf> = fs::read_dir(dir)
        .expect("samples directory")
        .map(|e| e.expect("directory entry").path())
        .filter(|p| p.extension().is_some_and(|x| x == "hg"))
        .collect();
    out.sort();
    out
}

fn hg(args: &[&str]) -> Result<(i32, String), String> {
    let out = Command::new(env!("CARGO_BIN_EXE_hg"))
        .args(args)
        .output()
        .map_err(|e| e.to_string())?;
    Ok((out.status.code().unwrap_or(-1), String::from_utf8_lossy(&out.stdout).into_owned()))
}

fn cli() -> Outcome {
    let files = samples();
    ensure(!files.is_empty(), || "no sample files".into())?;
    let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
    for f in &files {
        let text = fs::read_to_string(f).map_err(|e| e.to_string())?;
        let s = parse_structure(&text).map_err(|e| format!("{}: {e}", f.display()))?;
        let canon = serialize_structure(&s);
        ensure(parse_structure(&canon).as_ref() == Ok(&s), || format!("{}: parse(serialize) differs", f.display()))?;
        ensure(canonicalize(&canon).as_deref() == Ok(canon.as_str()), || format!("{}: not idempotent", f.display()))?;
        let (code, shown) = hg(&["show", "--format", "machine", f.to_str().unwrap()])?;
        ensure(code == 0 && shown == canon, || format!("{}: hg show differs", f.display()))?;
        let copy = dir.path().join("copy.hg");
        fs::write(&copy, &shown).map_err(|e| e.to_string())?;
        let (_, again) = hg(&["show", "--format", "machine", copy.to_str().unwrap()])?;
        ensure(again == canon, || format!("{}: second round trip differs", f.display()))?;
    }

    let start = Instant::now();
    let (code, _) = hg(&["verify", "all", "--format", "machine"])?;
    let took = start.elapsed();
    ensure(code == 0, || format!("verify all exited {code}"))?;
    ensure(took < Duration::from_secs(120), || format!("verify all took {took:?}"))?;

    let (code, report) = hg(&["verify", "all", "--format", "machine", "--inject-fault", "amalgam-sign"])?;
    ensure(code == 1, || format!("faulty verify exited {code}"))?;
    let fails: Vec<&str> = report.lines().filter(|l| l.ends_with("\tFAIL")).collect();
    ensure(!fails.is_empty(), || "no FAIL rows".into())?;
    ensure(fails.iter().all(|l| l.split('\t').nth(2) == Some(anchors::AMALGAM_FORMULA)), || {
        "FAIL row without the amalgam formula anchor".into()
    })?;
    Ok(format!(
        "{} samples round-trip, verify all in {:.1}s, fault gives {} FAIL rows",
        files.len(),
        took.as_secs_f64(),
        fails.len()
    ))
}

struct Criterion {
    number: u32,
    name: &'static str,
    limit: Option<Duration>,
    run: fn() -> Outcome,
}

const CRITERIA: [Criterion; 9] = [
    Criterion { number: 1, name: "instability grid", limit: Some(Duration::from_secs(5)), run: instability_grid },
    Criterion { number: 2, name: "tp2 configuration", limit: Some(Duration::from_secs(10)), run: tp2_configuration },
    Criterion { number: 3, name: "non-simplicity configuration", limit: Some(Duration::from_secs(10)), run: nonsimple_configuration },
    Criterion { number: 4, name: "amalgamation failure", limit: None, run: qe_failure },
    Criterion { number: 5, name: "amalgam formula vs union", limit: Some(Duration::from_secs(60)), run: amalgam_formula },
    Criterion { number: 6, name: "projection-pair amalgam", limit: None, run: pair_amalgam },
    Criterion { number: 7, name: "independence suite", limit: None, run: independence_suite },
    Criterion { number: 8, name: "delta bookkeeping", limit: None, run: delta_bookkeeping },
    Criterion { number: 9, name: "cli", limit: None, run: cli },
];

fn main() -> ExitCode {
    let mut failed = 0;
    for c in &CRITERIA {
        let start = Instant::now();
        let result = (c.run)();
        let took = start.elapsed();
        let result = match (result, c.limit) {
            (Ok(_), Some(limit)) if took > limit => Err(format!("took {took:?}, limit {limit:?}")),
            (r, _) => r,
        };
        match result {
            Ok(detail) => println!("PASS  criterion {}  {}  ({detail}; {:.2}s)", c.number, c.name, took.as_secs_f64()),
            Err(why) => {
                failed += 1;
                println!("FAIL  criterion {}  {}  ({why}; {:.2}s)", c.number, c.name, took.as_secs_f64());
            }
        }
    }
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
