//! Argument parsing and command dispatch.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use anyhow::{bail, Context};
use clap::{Args, Parser, Subcommand, ValueEnum};
use hg_core::blacksets::{
    amalgamate_blacksets, check_substructure, join_k0, BlackSetStructure, Probes,
};
use hg_core::independence::{forking_margin, non_dividing, star_independent};
use hg_core::linalg::free_join;
use hg_core::pairs::{amalgamate_pairs, ProjectionPairStructure};
use hg_core::random::FuzzBounds;
use hg_core::rational::sqrt_f64;
use hg_core::witnesses::{gen_instability, gen_nonsimple, gen_qe_failure, gen_tp2, lexicographic_functions};
use hg_core::{Embedding, RationalVector, Subspace};

use crate::format::{parse_point, parse_points, parse_structure, serialize_structure, Structure};
use crate::verify::{self, Fault, Params, Suite};

/// Exit code when every claim or check passed.
pub const EXIT_OK: i32 = 0;
/// Exit code when a claim or check failed.
pub const EXIT_FAIL: i32 = 1;
/// Exit code for usage and input errors.
pub const EXIT_USAGE: i32 = 2;

#[derive(Debug, Parser)]
#[command(name = "hg", version, about = "Exact finite Hilbert-space structures with projection and black-set predicates")]
pub struct Cli {
    /// Output style.
    #[arg(long, global = true, value_enum, default_value_t = OutputFormat::Text)]
    pub format: OutputFormat,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum OutputFormat {
    Text,
    Machine,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum KindArg {
    Hilbert,
    Pair,
    Blackset,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum GenConfig {
    Instability,
    QeFailure,
    Nonsimple,
    Tp2,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Write an empty structure: the whole space, with G = 0 or no black points.
    New {
        #[arg(value_enum)]
        kind: KindArg,
        #[arg(long)]
        dim: usize,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Summarize a structure file; with `--format machine`, print its canonical form.
    Show { file: PathBuf },
    /// Squared distance to the black set (black sets) or to G (pairs).
    Dist { file: PathBuf, point: String },
    /// Projection onto the space (hilbert, blackset) or onto G (pair).
    Project { file: PathBuf, point: String },
    /// Free join of two structures of the same kind over the zero space.
    Join {
        left: PathBuf,
        right: PathBuf,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Free amalgam of two structures over a common base.
    Amalgamate {
        base: PathBuf,
        left: PathBuf,
        right: PathBuf,
        /// Side coordinates receiving the base coordinates, e.g. `0,2`. Defaults to `0,1,…`.
        #[arg(long)]
        map1: Option<String>,
        #[arg(long)]
        map2: Option<String>,
        /// Also check the amalgam formula and restrictions; exit 1 on failure.
        #[arg(long)]
        check: bool,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Probe-based check that `small` embeds as a substructure of `big`.
    CheckSubstructure {
        small: PathBuf,
        big: PathBuf,
        #[arg(long)]
        map: Option<String>,
        /// Extra probe points, one per line, in coordinates of `small`.
        #[arg(long)]
        probes: Option<PathBuf>,
    },
    /// Non-dividing independence of `--a` and `--b` points over the space of `base`.
    Independence {
        base: PathBuf,
        #[arg(long = "a", required = true)]
        a: Vec<String>,
        #[arg(long = "b", required = true)]
        b: Vec<String>,
        /// Also report the forking margin of A over this space against `base`.
        #[arg(long)]
        big: Option<PathBuf>,
        /// Closures of A∪C and C∪B for the star-independence check.
        #[arg(long, num_args = 2, value_names = ["A_CLOSURE", "B_CLOSURE"])]
        closures: Option<Vec<PathBuf>>,
    },
    /// Write one of the witness configurations as a black-set structure.
    Gen {
        #[arg(value_enum)]
        config: GenConfig,
        #[command(flatten)]
        sizes: Sizes,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Run a verification suite and report every claim.
    Verify {
        #[arg(value_enum)]
        suite: Suite,
        #[command(flatten)]
        sizes: Sizes,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 100)]
        instances: usize,
        #[arg(long, default_value_t = FuzzBounds::default().max_dim)]
        max_dim: usize,
        #[arg(long, default_value_t = FuzzBounds::default().max_blacks)]
        max_blacks: usize,
        #[arg(long, default_value_t = FuzzBounds::default().max_den)]
        max_den: i64,
        #[arg(long, hide = true, value_enum)]
        inject_fault: Option<Fault>,
    },
}

#[derive(Debug, Args)]
pub struct Sizes {
    /// Instability grid size.
    #[arg(long, default_value_t = 4)]
    pub n: usize,
    /// Ring points (qe-failure) or subset size (nonsimple).
    #[arg(long, default_value_t = 3)]
    pub k: usize,
    /// Ground set size (nonsimple).
    #[arg(long, default_value_t = 4)]
    pub m: usize,
    #[arg(long, default_value_t = 4)]
    pub rows: usize,
    #[arg(long, default_value_t = 4)]
    pub cols: usize,
    /// Number of functions, taken in lexicographic order (tp2).
    #[arg(long, default_value_t = 16)]
    pub funcs: usize,
}

fn read_structure(path: &Path) -> anyhow::Result<Structure> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    parse_structure(&text).with_context(|| format!("parsing {}", path.display()))
}

fn emit(out: &mut dyn Write, path: Option<&Path>, text: &str) -> anyhow::Result<()> {
    match path {
        Some(p) => fs::write(p, text).with_context(|| format!("writing {}", p.display())),
        None => out.write_all(text.as_bytes()).map_err(Into::into),
    }
}

fn point_for(s: &Structure, text: &str) -> anyhow::Result<RationalVector> {
    let p = parse_point(text)?;
    if p.dim() != s.ambient_dim() {
        bail!("point has {} coordinates, the structure has dimension {}", p.dim(), s.ambient_dim());
    }
    Ok(p)
}

fn parse_map(text: Option<&str>, len: usize) -> anyhow::Result<Vec<usize>> {
    match text {
        None => Ok((0..len).collect()),
        Some(t) => t
            .split(',')
            .map(|x| x.trim().parse::<usize>().with_context(|| format!("invalid coordinate `{x}` in map")))
            .collect(),
    }
}

fn decimal(q: &hg_core::Rational) -> String {
    format!("≈{:.12}", sqrt_f64(q))
}

/// Writes `key value` (text) or `key\tvalue` (machine).
fn field(out: &mut dyn Write, fmt: OutputFormat, key: &str, value: impl std::fmt::Display) -> anyhow::Result<()> {
    match fmt {
        OutputFormat::Text => writeln!(out, "{key:<14} {value}")?,
        OutputFormat::Machine => writeln!(out, "{key}\t{value}")?,
    }
    Ok(())
}

fn zero_base(dim: usize) -> anyhow::Result<(Subspace, Embedding)> {
    let zero = Subspace::zero(1)?;
    let emb = Embedding::new(zero.clone(), dim, vec![])?;
    Ok((zero, emb))
}

/// Runs the parsed command, writing results to `out`; returns the exit code.
pub fn execute(cli: &Cli, out: &mut dyn Write) -> anyhow::Result<i32> {
    let fmt = cli.format;
    match &cli.command {
        Command::New { kind, dim, output } => {
            let space = Subspace::full(*dim)?;
            let s = match kind {
                KindArg::Hilbert => Structure::Hilbert(space),
                KindArg::Pair => {
                    let g = Subspace::zero(*dim)?;
                    Structure::Pair(ProjectionPairStructure::new(space, g)?)
                }
                KindArg::Blackset => Structure::Blackset(BlackSetStructure::new(space, vec![])?),
            };
            emit(out, output.as_deref(), &serialize_structure(&s))?;
        }
        Command::Show { file } => {
            let s = read_structure(file)?;
            if fmt == OutputFormat::Machine {
                out.write_all(serialize_structure(&s).as_bytes())?;
                return Ok(EXIT_OK);
            }
            field(out, fmt, "kind", s.kind())?;
            field(out, fmt, "ambient dim", s.ambient_dim())?;
            field(out, fmt, "dim", s.space().dim())?;
            for b in s.space().basis() {
                field(out, fmt, "basis", b)?;
            }
            match &s {
                Structure::Hilbert(_) => {}
                Structure::Pair(p) => {
                    field(out, fmt, "dim G", p.g().dim())?;
                    for g in p.g().basis() {
                        field(out, fmt, "G basis", g)?;
                    }
                }
                Structure::Blackset(b) => {
                    field(out, fmt, "blacks", b.blacks().len())?;
                    for n in b.blacks() {
                        field(out, fmt, "black", n)?;
                    }
                    field(out, fmt, "class d(0)^2", b.class_value())?;
                }
            }
        }
        Command::Dist { file, point } => {
            let s = read_structure(file)?;
            let p = point_for(&s, point)?;
            match &s {
                Structure::Hilbert(_) => bail!("dist needs a pair or blackset structure"),
                Structure::Pair(pp) => {
                    let (proj, d) = pp.apply_p(&p)?;
                    field(out, fmt, "d_P^2", &d)?;
                    field(out, fmt, "d_P", decimal(&d))?;
                    field(out, fmt, "P(v)", proj)?;
                }
                Structure::Blackset(b) => {
                    let c = b.dist_black_sq(&p)?;
                    field(out, fmt, "d^2", &c.dist_sq)?;
                    field(out, fmt, "d", decimal(&c.dist_sq))?;
                    match &c.nearest_sq {
                        Some(n) => field(out, fmt, "nearest^2", n)?,
                        None => field(out, fmt, "nearest^2", "none")?,
                    }
                    if let Some(w) = &c.witness {
                        field(out, fmt, "witness", w)?;
                        field(out, fmt, "unique", c.unique)?;
                    }
                }
            }
        }
        Command::Project { file, point } => {
            let s = read_structure(file)?;
            let p = point_for(&s, point)?;
            let proj = match &s {
                Structure::Pair(pp) => pp.project(&p)?,
                other => other.space().project(&p)?,
            };
            field(out, fmt, "projection", &proj)?;
            field(out, fmt, "residue^2", (&p - &proj).norm_sq())?;
        }
        Command::Join { left, right, output } => {
            let (l, r) = (read_structure(left)?, read_structure(right)?);
            let joined = match (&l, &r) {
                (Structure::Hilbert(a), Structure::Hilbert(b)) => {
                    let (zero, e1) = zero_base(a.ambient_dim())?;
                    let (_, e2) = zero_base(b.ambient_dim())?;
                    Structure::Hilbert(free_join(a, b, &zero, &e1, &e2)?.joint().clone())
                }
                (Structure::Pair(a), Structure::Pair(b)) => {
                    let (zero, e1) = zero_base(a.ambient_dim())?;
                    let (_, e2) = zero_base(b.ambient_dim())?;
                    let base = ProjectionPairStructure::new(zero.clone(), zero)?;
                    Structure::Pair(amalgamate_pairs(&base, a, b, &e1, &e2)?.pair().clone())
                }
                (Structure::Blackset(a), Structure::Blackset(b)) => {
                    Structure::Blackset(join_k0(a, b)?.structure().clone())
                }
                _ => bail!("cannot join a {} with a {}", l.kind(), r.kind()),
            };
            emit(out, output.as_deref(), &serialize_structure(&joined))?;
        }
        Command::Amalgamate {
            base,
            left,
            right,
            map1,
            map2,
            check,
            output,
        } => {
            let (b, l, r) = (read_structure(base)?, read_structure(left)?, read_structure(right)?);
            if b.kind() != l.kind() || b.kind() != r.kind() {
                bail!("amalgamate needs three structures of the same kind");
            }
            let e1 = Embedding::coordinate(b.space(), l.ambient_dim(), &parse_map(map1.as_deref(), b.ambient_dim())?)?;
            let e2 = Embedding::coordinate(b.space(), r.ambient_dim(), &parse_map(map2.as_deref(), b.ambient_dim())?)?;
            let mut passed = true;
            let mut report = Vec::new();
            let result = match (&b, &l, &r) {
                (Structure::Hilbert(s0), Structure::Hilbert(s1), Structure::Hilbert(s2)) => {
                    let j = free_join(s1, s2, s0, &e1, &e2)?;
                    if *check {
                        passed = j.certify().passed();
                        report.push(("join", passed));
                    }
                    Structure::Hilbert(j.joint().clone())
                }
                (Structure::Pair(p0), Structure::Pair(p1), Structure::Pair(p2)) => {
                    let am = amalgamate_pairs(p0, p1, p2, &e1, &e2)?;
                    if *check {
                        let c = am.certify(&[])?;
                        report.push(("join", c.join.passed()));
                        report.push(("axioms", c.axioms.passed()));
                        report.push(("restriction", c.restriction.iter().all(|x| *x)));
                        report.push(("formula", c.formula));
                        passed = c.passed();
                    }
                    Structure::Pair(am.pair().clone())
                }
                (Structure::Blackset(s0), Structure::Blackset(s1), Structure::Blackset(s2)) => {
                    let am = amalgamate_blacksets(s0, s1, s2, &e1, &e2)?;
                    if *check {
                        let f = am.certify_formula(&am.default_probes())?.passed();
                        let rs = am.certify_restrictions()?.iter().all(|c| c.passed());
                        report.push(("join", am.join_certificate().passed()));
                        report.push(("formula", f));
                        report.push(("restriction", rs));
                        passed = report.iter().all(|(_, ok)| *ok);
                    }
                    Structure::Blackset(am.structure().clone())
                }
                _ => unreachable!("kinds checked above"),
            };
            emit(out, output.as_deref(), &serialize_structure(&result))?;
            // kept off stdout so the structure can be piped
            for (name, ok) in report {
                eprintln!("{name}\t{}", if ok { "PASS" } else { "FAIL" });
            }
            if !passed {
                return Ok(EXIT_FAIL);
            }
        }
        Command::CheckSubstructure { small, big, map, probes } => {
            let (Structure::Blackset(s), Structure::Blackset(b)) = (read_structure(small)?, read_structure(big)?) else {
                bail!("check-substructure needs two blackset structures");
            };
            let emb = Embedding::coordinate(s.space(), b.ambient_dim(), &parse_map(map.as_deref(), s.ambient_dim())?)?;
            let probes = match probes {
                None => Probes::Default,
                Some(p) => {
                    let text = fs::read_to_string(p).with_context(|| format!("reading {}", p.display()))?;
                    Probes::DefaultAnd(parse_points(&text).with_context(|| format!("parsing {}", p.display()))?)
                }
            };
            let cert = check_substructure(&s, &b, &emb, probes)?;
            field(out, fmt, "probes", cert.probes_checked)?;
            if let Some(v) = &cert.violation {
                field(out, fmt, "verdict", "FAIL")?;
                field(out, fmt, "probe", &v.probe)?;
                field(out, fmt, "small d^2", &v.small)?;
                field(out, fmt, "big d^2", &v.big)?;
                return Ok(EXIT_FAIL);
            }
            field(out, fmt, "verdict", if cert.vacuous { "PASS (vacuous)" } else { "PASS" })?;
        }
        Command::Independence { base, a, b, big, closures } => {
            let c = read_structure(base)?;
            let pa = a.iter().map(|t| point_for(&c, t)).collect::<anyhow::Result<Vec<_>>>()?;
            let pb = b.iter().map(|t| point_for(&c, t)).collect::<anyhow::Result<Vec<_>>>()?;
            let v = non_dividing(&pa, &pb, c.space())?;
            field(out, fmt, "independent", v.independent)?;
            for x in &v.violations {
                field(out, fmt, "violation", format!("a[{}] b[{}] inner {}", x.a_index, x.b_index, x.inner))?;
            }
            if let Some(big) = big {
                let big = read_structure(big)?;
                let m = forking_margin(&pa, big.space(), c.space())?;
                field(out, fmt, "margin", format!("≈{m:.12}"))?;
            }
            if let Some(paths) = closures {
                let ca = read_structure(&paths[0])?;
                let cb = read_structure(&paths[1])?;
                let v = star_independent(ca.space(), cb.space(), c.space())?;
                field(out, fmt, "star", v.independent)?;
            }
        }
        Command::Gen { config, sizes, output } => {
            let s = match config {
                GenConfig::Instability => gen_instability(sizes.n)?.0,
                GenConfig::QeFailure => gen_qe_failure(sizes.k)?.union,
                GenConfig::Nonsimple => gen_nonsimple(sizes.k, sizes.m)?.0,
                GenConfig::Tp2 => {
                    let fs = lexicographic_functions(sizes.rows, sizes.cols, sizes.funcs);
                    gen_tp2(sizes.rows, sizes.cols, &fs)?.0
                }
            };
            emit(out, output.as_deref(), &serialize_structure(&Structure::Blackset(s)))?;
        }
        Command::Verify {
            suite,
            sizes,
            seed,
            instances,
            max_dim,
            max_blacks,
            max_den,
            inject_fault,
        } => {
            let params = Params {
                n: sizes.n,
                k: sizes.k,
                m: sizes.m,
                rows: sizes.rows,
                cols: sizes.cols,
                funcs: sizes.funcs,
                seed: *seed,
                instances: *instances,
                bounds: FuzzBounds {
                    max_dim: *max_dim,
                    max_blacks: *max_blacks,
                    max_den: *max_den,
                },
                fault: *inject_fault,
            };
            let reports = verify::run(*suite, &params)?;
            let text = match fmt {
                OutputFormat::Text => verify::render_text(&reports),
                OutputFormat::Machine => verify::render_machine(&reports),
            };
            out.write_all(text.as_bytes())?;
            if !reports.iter().all(|r| r.passed()) {
                return Ok(EXIT_FAIL);
            }
        }
    }
    Ok(EXIT_OK)
}

/// Parses `args` (including the program name) and runs the command. Usage
/// and input errors are reported on stderr with [`EXIT_USAGE`].
pub fn run<I, T>(args: I, out: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let _ = e.print();
            return code;
        }
    };
    match execute(&cli, out) {
        Ok(code) => code,
        Err(e) if is_broken_pipe(&e) => EXIT_OK,
        Err(e) => {
            eprintln!("error: {e:#}");
            EXIT_USAGE
        }
    }
}

fn is_broken_pipe(e: &anyhow::Error) -> bool {
    e.chain()
        .filter_map(|c| c.downcast_ref::<std::io::Error>())
        .any(|io| io.kind() == std::io::ErrorKind::BrokenPipe)
}
