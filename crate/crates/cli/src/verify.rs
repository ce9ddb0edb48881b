//! Verification suites: the witness gallery and the seeded fuzz suites,
//! rendered as claim tables.

use std::fmt::Write as _;

use hg_core::blacksets::{amalgamate_blacksets, BlackSetAmalgam};
use hg_core::independence::{forking_margin, non_dividing, star_independent, MARGIN_TOLERANCE};
use hg_core::pairs::amalgamate_pairs;
use hg_core::random::{self, FuzzBounds, FuzzRng};
use hg_core::rational::{int, ratio};
use hg_core::witnesses::{
    anchors, gen_instability, gen_nonsimple, gen_qe_failure, gen_tp2, lexicographic_functions, Claim,
    Expectation, WitnessReport,
};
use hg_core::{Rational, RationalVector, Subspace};
use num_traits::One;
use thiserror::Error;

#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum)]
pub enum Suite {
    Instability,
    QeFailure,
    Nonsimple,
    Tp2,
    AmalgamFuzz,
    PairFuzz,
    IndependenceFuzz,
    All,
}

impl Suite {
    pub const EACH: [Suite; 7] = [
        Suite::Instability,
        Suite::QeFailure,
        Suite::Nonsimple,
        Suite::Tp2,
        Suite::AmalgamFuzz,
        Suite::PairFuzz,
        Suite::IndependenceFuzz,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Suite::Instability => "instability",
            Suite::QeFailure => "qe-failure",
            Suite::Nonsimple => "nonsimple",
            Suite::Tp2 => "tp2",
            Suite::AmalgamFuzz => "amalgam-fuzz",
            Suite::PairFuzz => "pair-fuzz",
            Suite::IndependenceFuzz => "independence-fuzz",
            Suite::All => "all",
        }
    }
}

/// Deliberate defects for checking that the suites notice them.
#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum)]
pub enum Fault {
    /// Subtracts instead of adds the residue term in the amalgam formula.
    AmalgamSign,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Params {
    pub n: usize,
    pub k: usize,
    pub m: usize,
    pub rows: usize,
    pub cols: usize,
    pub funcs: usize,
    pub seed: u64,
    pub instances: usize,
    pub bounds: FuzzBounds,
    pub fault: Option<Fault>,
}

impl Default for Params {
    fn default() -> Self {
        Self {
            n: 4,
            k: 3,
            m: 4,
            rows: 4,
            cols: 4,
            funcs: 16,
            seed: 0,
            instances: 100,
            bounds: FuzzBounds::default(),
            fault: None,
        }
    }
}

#[derive(Debug, Error, PartialEq)]
pub enum VerifyError {
    #[error("{0}")]
    OutOfBounds(String),
    #[error("suite {suite} could not be built: {source}")]
    Build {
        suite: &'static str,
        source: hg_core::Error,
    },
}

fn bound(name: &str, value: usize, lo: usize, hi: usize) -> Result<(), VerifyError> {
    if (lo..=hi).contains(&value) {
        Ok(())
    } else {
        Err(VerifyError::OutOfBounds(format!("--{name} {value} is outside {lo}..={hi}")))
    }
}

impl Params {
    /// Documented parameter ranges for `suite`.
    pub fn check(&self, suite: Suite) -> Result<(), VerifyError> {
        let each = |s: Suite| suite == s || suite == Suite::All;
        if each(Suite::Instability) {
            bound("n", self.n, 1, 16)?;
        }
        if each(Suite::QeFailure) {
            bound("k", self.k, 2, 16)?;
        }
        if each(Suite::Nonsimple) {
            bound("m", self.m, 1, 6)?;
            bound("k", self.k, 1, self.m)?;
        }
        if each(Suite::Tp2) {
            bound("rows", self.rows, 1, 6)?;
            bound("cols", self.cols, 1, 6)?;
            let total = self.cols.checked_pow(self.rows as u32).unwrap_or(usize::MAX);
            bound("funcs", self.funcs, 1, total.min(64))?;
        }
        if each(Suite::AmalgamFuzz) || each(Suite::PairFuzz) || each(Suite::IndependenceFuzz) {
            bound("instances", self.instances, 1, 10_000)?;
            bound("max-dim", self.bounds.max_dim, 3, 8)?;
            bound("max-blacks", self.bounds.max_blacks, 1, 16)?;
            bound("max-den", self.bounds.max_den as usize, 1, 16)?;
        }
        Ok(())
    }
}

/// Claims of one suite run.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SuiteReport {
    pub suite: &'static str,
    pub params: Vec<(String, String)>,
    pub claims: Vec<Claim>,
}

impl SuiteReport {
    fn from_witness(suite: Suite, r: WitnessReport) -> Self {
        Self {
            suite: suite.name(),
            params: r.params,
            claims: r.claims,
        }
    }

    pub fn passed(&self) -> bool {
        self.claims.iter().all(|c| c.pass)
    }

    pub fn failures(&self) -> usize {
        self.claims.iter().filter(|c| !c.pass).count()
    }
}

/// Runs `suite`; `All` runs every suite in order.
pub fn run(suite: Suite, p: &Params) -> Result<Vec<SuiteReport>, VerifyError> {
    p.check(suite)?;
    let suites: Vec<Suite> = if suite == Suite::All {
        Suite::EACH.to_vec()
    } else {
        vec![suite]
    };
    suites
        .into_iter()
        .map(|s| {
            run_one(s, p).map_err(|source| VerifyError::Build {
                suite: s.name(),
                source,
            })
        })
        .collect()
}

fn run_one(suite: Suite, p: &Params) -> hg_core::Result<SuiteReport> {
    let witness = |r: WitnessReport| Ok(SuiteReport::from_witness(suite, r));
    match suite {
        Suite::Instability => witness(gen_instability(p.n)?.1),
        Suite::QeFailure => witness(gen_qe_failure(p.k)?.report),
        Suite::Nonsimple => witness(gen_nonsimple(p.k, p.m)?.1),
        Suite::Tp2 => {
            let funcs = lexicographic_functions(p.rows, p.cols, p.funcs);
            witness(gen_tp2(p.rows, p.cols, &funcs)?.1)
        }
        Suite::AmalgamFuzz => amalgam_fuzz(p),
        Suite::PairFuzz => pair_fuzz(p),
        Suite::IndependenceFuzz => independence_fuzz(p),
        Suite::All => unreachable!("expanded by run"),
    }
}

fn fuzz_params(p: &Params) -> Vec<(String, String)> {
    vec![
        ("seed".into(), p.seed.to_string()),
        ("instances".into(), p.instances.to_string()),
        ("max-dim".into(), p.bounds.max_dim.to_string()),
        ("max-blacks".into(), p.bounds.max_blacks.to_string()),
        ("max-den".into(), p.bounds.max_den.to_string()),
    ]
}

fn count(n: usize) -> Rational {
    int(n as i64)
}

fn zero_count(id: String, anchor: &'static str, n: usize) -> Claim {
    Claim::new(id, anchor, Expectation::Eq(int(0)), count(n))
}

const RANDOM_PROBES: usize = 5;

/// Closed form with the residue sign flipped.
fn faulty_closed_form(am: &BlackSetAmalgam, v: &RationalVector) -> hg_core::Result<Rational> {
    let best = am
        .closed_form_components(v)?
        .into_iter()
        .map(|c| &c.side_dist_sq - &c.residue_sq)
        .min()
        .unwrap_or_else(Rational::one);
    Ok(best.min(Rational::one()))
}

fn amalgam_fuzz(p: &Params) -> hg_core::Result<SuiteReport> {
    let mut rng = random::rng(p.seed);
    let mut claims = Vec::new();
    for i in 0..p.instances {
        let inst = random::blackset_instance(&mut rng, &p.bounds)?;
        let am = amalgamate_blacksets(&inst.base, &inst.s1, &inst.s2, &inst.emb1, &inst.emb2)?;
        let mut probes = am.default_probes();
        for _ in 0..RANDOM_PROBES {
            probes.push(random::point_in(&mut rng, am.structure().space(), p.bounds.max_den));
        }
        let mut mismatches = 0;
        for v in &probes {
            let formula = match p.fault {
                Some(Fault::AmalgamSign) => faulty_closed_form(&am, v)?,
                None => am.closed_form_dist_sq(v)?,
            };
            if formula != am.structure().dist_black_sq(v)?.dist_sq {
                mismatches += 1;
            }
        }
        claims.push(zero_count(format!("amalgam[{i:03}]/formula-mismatches"), anchors::AMALGAM_FORMULA, mismatches));
        let failed = am.certify_restrictions()?.iter().filter(|c| !c.passed()).count();
        claims.push(zero_count(format!("amalgam[{i:03}]/restriction-failures"), anchors::AMALGAM_RESTRICTION, failed));
    }
    Ok(SuiteReport {
        suite: Suite::AmalgamFuzz.name(),
        params: fuzz_params(p),
        claims,
    })
}

fn pair_fuzz(p: &Params) -> hg_core::Result<SuiteReport> {
    let mut rng = random::rng(p.seed);
    let den = p.bounds.max_den;
    let mut claims = Vec::new();
    for i in 0..p.instances {
        let inst = random::pair_instance(&mut rng, &p.bounds)?;
        let am = amalgamate_pairs(&inst.pp0, &inst.pp1, &inst.pp2, &inst.emb1, &inst.emb2)?;
        let extra: Vec<RationalVector> =
            (0..RANDOM_PROBES).map(|_| random::point_in(&mut rng, am.pair().space(), den)).collect();
        let cert = am.certify(&extra)?;
        let id = |s: &str| format!("pair[{i:03}]/{s}");
        claims.push(zero_count(id("join-failures"), anchors::PAIR_AMALGAM, usize::from(!cert.join.passed())));
        claims.push(zero_count(id("axiom-failures"), anchors::PAIR_AXIOMS, usize::from(!cert.axioms.passed())));
        let restr = cert.restriction.iter().filter(|r| !**r).count();
        claims.push(zero_count(id("restriction-failures"), anchors::PAIR_AMALGAM, restr));
        claims.push(zero_count(id("formula-failures"), anchors::PAIR_AMALGAM, usize::from(!cert.formula)));

        // P_3(v_1 + v_2) = P_1 v_1 + P_2 v_2, unchanged by moving h ∈ H_0
        // from one side to the other.
        let mut split_bad = 0;
        let mut shift = 0;
        for _ in 0..RANDOM_PROBES {
            let v1 = random::point_in(&mut rng, inst.pp1.space(), den);
            let v2 = random::point_in(&mut rng, inst.pp2.space(), den);
            let h = random::point_in(&mut rng, inst.pp0.space(), den);
            let direct = am.pair().project(&am.combine(&v1, &v2)?)?;
            let split = am.split_projection(&v1, &v2)?;
            split_bad += usize::from(direct != split);
            let w1 = &v1 + &inst.emb1.apply(&h)?;
            let w2 = &v2 - &inst.emb2.apply(&h)?;
            let moved = am.split_projection(&w1, &w2)?;
            shift += usize::from(moved != split || am.combine(&w1, &w2)? != am.combine(&v1, &v2)?);
        }
        claims.push(zero_count(id("split-mismatches"), anchors::PAIR_AMALGAM, split_bad));
        claims.push(zero_count(id("shift-mismatches"), anchors::PAIR_AMALGAM, shift));
    }
    Ok(SuiteReport {
        suite: Suite::PairFuzz.name(),
        params: fuzz_params(p),
        claims,
    })
}

/// Margin rounded to `10^-12`, as an exact rational for the report.
fn margin_value(m: f64) -> Rational {
    const SCALE: i64 = 1_000_000_000_000;
    ratio((m * SCALE as f64).round() as i64, SCALE)
}

fn margin_tolerance() -> Rational {
    margin_value(MARGIN_TOLERANCE)
}

fn independence_fuzz(p: &Params) -> hg_core::Result<SuiteReport> {
    let mut rng: FuzzRng = random::rng(p.seed);
    let mut claims = Vec::new();
    for i in 0..p.instances {
        let id = |s: &str| format!("independence[{i:03}]/{s}");
        let inst = random::independence_instance(&mut rng, &p.bounds)?;
        let ab = non_dividing(&inst.a, &inst.b, &inst.c)?;
        let ba = non_dividing(&inst.b, &inst.a, &inst.c)?;
        claims.push(zero_count(id("symmetry"), anchors::INDEPENDENCE, usize::from(ab.independent != ba.independent)));
        let mut each = true;
        for a in &inst.a {
            each &= non_dividing(std::slice::from_ref(a), &inst.b, &inst.c)?.independent;
        }
        claims.push(zero_count(id("triviality"), anchors::INDEPENDENCE, usize::from(ab.independent != each)));

        let big = inst.c.sum(&Subspace::span(inst.dim, &inst.b)?)?;
        let margin = margin_value(forking_margin(&inst.a, &big, &inst.c)?);
        if ab.independent {
            claims.push(Claim::new(id("margin"), anchors::FORKING_MARGIN, Expectation::Lt(margin_tolerance()), margin));
        } else {
            claims.push(Claim::new(id("margin"), anchors::FORKING_MARGIN, Expectation::Gt(int(0)), margin));
        }

        let n = random::nested_closures(&mut rng, &p.bounds)?;
        let whole = star_independent(&n.x, &n.bcd, &n.c)?.independent;
        let first = star_independent(&n.x, &n.bc, &n.c)?.independent;
        let second = star_independent(&n.x.sum(&n.bc)?, &n.bcd, &n.bc)?.independent;
        claims.push(zero_count(id("transitivity"), anchors::STAR_INDEPENDENCE, usize::from(whole != (first && second))));

        let m = random::monotone_instance(&mut rng, &p.bounds)?;
        let big_ok = star_independent(&m.a_big, &m.b_big, &m.c)?.independent;
        let small_ok = star_independent(&m.a_small, &m.b_small, &m.c)?.independent;
        claims.push(zero_count(id("monotonicity"), anchors::STAR_INDEPENDENCE, usize::from(big_ok && !small_ok)));
    }
    for (j, case) in random::curated_dependent_margins().iter().enumerate() {
        let m = margin_value(forking_margin(&case.a, &case.big, &case.small)?);
        claims.push(Claim::new(
            format!("curated[{j}]/margin"),
            anchors::FORKING_MARGIN,
            Expectation::Ge(ratio(1, 1000)),
            m,
        ));
    }
    Ok(SuiteReport {
        suite: Suite::IndependenceFuzz.name(),
        params: fuzz_params(p),
        claims,
    })
}

/// One `suite\tclaim-id\tanchor\texpected\tcomputed\tPASS|FAIL` line per claim.
pub fn render_machine(reports: &[SuiteReport]) -> String {
    let mut out = String::new();
    for r in reports {
        for c in &r.claims {
            let verdict = if c.pass { "PASS" } else { "FAIL" };
            writeln!(out, "{}\t{}\t{}\t{}\t{}\t{verdict}", r.suite, c.id, c.anchor, c.expected, c.computed)
                .expect("writing to a string");
        }
    }
    out
}

pub fn render_text(reports: &[SuiteReport]) -> String {
    let mut out = String::new();
    for r in reports {
        let params: Vec<String> = r.params.iter().map(|(k, v)| format!("{k}={v}")).collect();
        writeln!(out, "== {} ({})", r.suite, params.join(", ")).expect("writing to a string");
        let width = r.claims.iter().map(|c| c.id.len()).max().unwrap_or(0);
        for c in &r.claims {
            let verdict = if c.pass { "PASS" } else { "FAIL" };
            writeln!(
                out,
                "  {verdict}  {:width$}  [{}]  expected {}  computed {}",
                c.id, c.anchor, c.expected, c.computed
            )
            .expect("writing to a string");
        }
        writeln!(out, "  {}/{} claims passed", r.claims.len() - r.failures(), r.claims.len())
            .expect("writing to a string");
    }
    let total: usize = reports.iter().map(|r| r.claims.len()).sum();
    let failed: usize = reports.iter().map(SuiteReport::failures).sum();
    let verdict = if failed == 0 { "PASS" } else { "FAIL" };
    writeln!(out, "{verdict}: {} of {total} claims passed", total - failed).expect("writing to a string");
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn instability_has_n_squared_claims() {
        let p = Params::default();
        let r = run(Suite::Instability, &p).unwrap();
        assert_eq!(r[0].claims.len(), 16);
        assert!(r[0].passed());
    }

    #[test]
    fn bounds_are_enforced() {
        let p = Params {
            n: 0,
            ..Params::default()
        };
        assert!(matches!(run(Suite::Instability, &p), Err(VerifyError::OutOfBounds(_))));
        let p = Params {
            k: 5,
            m: 4,
            ..Params::default()
        };
        assert!(run(Suite::Nonsimple, &p).is_err());
        assert!(run(Suite::QeFailure, &p).is_ok());
    }

    #[test]
    fn machine_lines_have_six_fields() {
        let p = Params {
            k: 2,
            ..Params::default()
        };
        let text = render_machine(&run(Suite::QeFailure, &p).unwrap());
        for line in text.lines() {
            let f: Vec<&str> = line.split('\t').collect();
            assert_eq!(f.len(), 6);
            assert_eq!(f[0], "qe-failure");
            assert_eq!(f[5], "PASS");
        }
    }

    #[test]
    fn fuzz_suites_pass_and_are_deterministic() {
        let p = Params {
            instances: 10,
            ..Params::default()
        };
        for s in [Suite::AmalgamFuzz, Suite::PairFuzz, Suite::IndependenceFuzz] {
            let a = run(s, &p).unwrap();
            assert!(a[0].passed(), "{}", render_text(&a));
            assert_eq!(a, run(s, &p).unwrap());
        }
    }

    #[test]
    fn sign_fault_is_caught() {
        let p = Params {
            instances: 20,
            fault: Some(Fault::AmalgamSign),
            ..Params::default()
        };
        let r = run(Suite::AmalgamFuzz, &p).unwrap();
        assert!(r[0].claims.iter().any(|c| !c.pass && c.anchor == anchors::AMALGAM_FORMULA));
    }
}
