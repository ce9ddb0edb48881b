//! Generators for explicit counterexample configurations, each paired with
//! an exact check of its distance claims, plus the perturbation and
//! constant bookkeeping used when building existentially closed models.

use std::fmt;

use num_traits::{One, Signed, Zero};

use crate::blacksets::{
    check_substructure, BlackSetStructure, DistanceCertificate, Probes,
    Restriction,
};
use crate::error::{Error, Result};
use crate::linalg::{free_join, AmalgamEmbedding, Embedding, RationalVector, Subspace};
use crate::rational::{int, ratio, rational_sqrt, sqrt_approx, Rational};

/// Stable names tying report rows to the statements they check.
pub mod anchors {
    pub const INSTABILITY: &str = "instability-lemma";
    pub const QE_FAILURE: &str = "qe-failure-observation";
    pub const ACL: &str = "acl-observation";
    pub const NONSIMPLE: &str = "nonsimple-distances";
    pub const TP2_CLAIM1: &str = "tp2-claim-1";
    pub const TP2_CLAIM2: &str = "tp2-claim-2";
    pub const AMALGAM_FORMULA: &str = "blackset-amalgam-formula";
    pub const AMALGAM_RESTRICTION: &str = "blackset-amalgam-restriction";
    pub const PAIR_AMALGAM: &str = "pair-amalgam-lemma";
    pub const PAIR_AXIOMS: &str = "projection-axioms";
    pub const INDEPENDENCE: &str = "non-dividing-proposition";
    pub const STAR_INDEPENDENCE: &str = "star-independence-properties";
    pub const FORKING_MARGIN: &str = "strong-finite-character-margin";
    pub const DELTA: &str = "delta-constants";
    pub const PERTURBATION: &str = "black-witness-perturbation";
}

/// Expected value or bound for a claim, on squared quantities.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Expectation {
    Eq(Rational),
    Ge(Rational),
    Gt(Rational),
    Le(Rational),
    Lt(Rational),
}

impl Expectation {
    pub fn holds(&self, x: &Rational) -> bool {
        match self {
            Self::Eq(e) => x == e,
            Self::Ge(e) => x >= e,
            Self::Gt(e) => x > e,
            Self::Le(e) => x <= e,
            Self::Lt(e) => x < e,
        }
    }
}

impl fmt::Display for Expectation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let (op, v) = match self {
            Self::Eq(v) => ("=", v),
            Self::Ge(v) => (">=", v),
            Self::Gt(v) => (">", v),
            Self::Le(v) => ("<=", v),
            Self::Lt(v) => ("<", v),
        };
        write!(f, "{op}{v}")
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Claim {
    pub id: String,
    pub anchor: &'static str,
    pub expected: Expectation,
    pub computed: Rational,
    pub pass: bool,
}

impl Claim {
    pub fn new(id: impl Into<String>, anchor: &'static str, expected: Expectation, computed: Rational) -> Self {
        let pass = expected.holds(&computed);
        Self {
            id: id.into(),
            anchor,
            expected,
            computed,
            pass,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WitnessReport {
    pub config: String,
    pub params: Vec<(String, String)>,
    pub claims: Vec<Claim>,
}

impl WitnessReport {
    pub fn new(config: &str, params: &[(&str, String)]) -> Self {
        Self {
            config: config.to_string(),
            params: params.iter().map(|(k, v)| (k.to_string(), v.clone())).collect(),
            claims: Vec::new(),
        }
    }

    pub fn push(&mut self, claim: Claim) {
        self.claims.push(claim);
    }

    pub fn passed(&self) -> bool {
        self.claims.iter().all(|c| c.pass)
    }

    pub fn failures(&self) -> impl Iterator<Item = &Claim> {
        self.claims.iter().filter(|c| !c.pass)
    }
}

fn half() -> Rational {
    ratio(1, 2)
}

fn combo(dim: usize, terms: &[(usize, Rational)]) -> RationalVector {
    let mut coords = vec![Rational::zero(); dim];
    for (i, c) in terms {
        coords[*i] += c;
    }
    RationalVector::new(coords).expect("positive dimension")
}

fn nearest_sq(cert: &DistanceCertificate) -> Rational {
    cert.nearest_sq.clone().unwrap_or_else(Rational::one)
}

/// `2n` orthonormal vectors `v_1..v_n, u_1..u_n` with black set
/// `{(u_i + v_j)/2 : i > j} ∪ {0}`. Claims: `d_N((u_i + v_j)/2)²` is `1/2`
/// for `i ≤ j` and `0` for `i > j`.
pub fn gen_instability(n: usize) -> Result<(BlackSetStructure, WitnessReport)> {
    if n == 0 {
        return Err(Error::OutOfRange("instability needs n >= 1".into()));
    }
    let dim = 2 * n;
    let v = |j: usize| j - 1;
    let u = |i: usize| n + i - 1;
    let point = |i: usize, j: usize| combo(dim, &[(u(i), half()), (v(j), half())]);
    let mut blacks = vec![RationalVector::zeros(dim)];
    for i in 1..=n {
        for j in 1..i {
            blacks.push(point(i, j));
        }
    }
    let s = BlackSetStructure::new(Subspace::full(dim)?, blacks)?;
    let mut report = WitnessReport::new("instability", &[("n", n.to_string())]);
    for i in 1..=n {
        for j in 1..=n {
            let expected = if i <= j { half() } else { int(0) };
            let d = s.dist_black_sq(&point(i, j))?.dist_sq;
            report.push(Claim::new(
                format!("d(u{i}+v{j})"),
                anchors::INSTABILITY,
                Expectation::Eq(expected),
                d,
            ));
        }
    }
    Ok((s, report))
}

/// The two structures of the amalgamation failure and their free join over
/// the identified line `span(a) ≅ span(v_1)`.
#[derive(Clone, Debug)]
pub struct QeFailure {
    pub s1: BlackSetStructure,
    pub s2: BlackSetStructure,
    /// `span(a)` with the predicate it inherits from `s1`.
    pub base: Restriction,
    pub join: AmalgamEmbedding,
    /// The join with the union of both black sets.
    pub union: BlackSetStructure,
    pub a: RationalVector,
    pub b: RationalVector,
    pub c: RationalVector,
    pub report: WitnessReport,
}

/// `S1` on `Q²` with `N_1 = {0, u_0 + u_1/4}`; `S2` on `Q^{k+1}` with
/// `N_2 = {0} ∪ {v_1 + v_i/4 : 2 ≤ i ≤ k+1}`, a finite piece of the black
/// ring around `v_1`. The line through `a = u_0` is identified with the
/// line through `v_1`.
pub fn gen_qe_failure(k: usize) -> Result<QeFailure> {
    if k < 2 {
        return Err(Error::OutOfRange("qe-failure needs k >= 2 ring points".into()));
    }
    let q = ratio(1, 4);
    let a = combo(2, &[(0, int(1))]);
    let b = combo(2, &[(0, int(1)), (1, -&q)]);
    let c = combo(2, &[(0, int(1)), (1, q.clone())]);
    let s1 = BlackSetStructure::new(Subspace::full(2)?, vec![RationalVector::zeros(2), c.clone()])?;

    let d2 = k + 1;
    let mut ring = vec![RationalVector::zeros(d2)];
    for i in 1..d2 {
        ring.push(combo(d2, &[(0, int(1)), (i, q.clone())]));
    }
    let s2 = BlackSetStructure::new(Subspace::full(d2)?, ring)?;

    let line = Subspace::full(1)?;
    let to1 = Embedding::coordinate(&line, 2, &[0])?;
    let to2 = Embedding::coordinate(&line, d2, &[0])?;
    let line1 = to1.image();
    let line2 = to2.image();
    let base = Restriction::new(s1.clone(), line1.clone())?;
    let base2 = Restriction::new(s2.clone(), line2.clone())?;
    // identification F: span(a) -> span(v_1)
    let f = Embedding::new(line1.clone(), d2, to2.images().to_vec())?;

    let join = free_join(s1.space(), s2.space(), &line, &to1, &to2)?;
    let mut blacks = Vec::new();
    for x in s1.blacks() {
        blacks.push(join.map(0).apply(x)?);
    }
    for x in s2.blacks() {
        blacks.push(join.map(1).apply(x)?);
    }
    let union = BlackSetStructure::new(join.joint().clone(), blacks)?;

    let mut report = WitnessReport::new("qe-failure", &[("k", k.to_string())]);
    let db = s1.dist_black_sq(&b)?;
    report.push(Claim::new("d1(b)", anchors::QE_FAILURE, Expectation::Eq(q.clone()), db.dist_sq));

    // the line sees the same predicate from both sides
    let line_probes: Vec<RationalVector> = (-4..=8).map(|t| a.scale(&ratio(t, 4))).collect();
    let iso = check_substructure(&base, &base2, &f, Probes::DefaultAnd(line_probes))?;
    report.push(Claim::new(
        "line-identification-violations",
        anchors::QE_FAILURE,
        Expectation::Eq(int(0)),
        int(i64::from(!iso.passed())),
    ));
    for (side, (s, emb)) in [(&s1, Embedding::identity(&line1)), (&s2, f.clone())].into_iter().enumerate() {
        let cert = check_substructure(&base, s, &emb, Probes::Default)?;
        report.push(Claim::new(
            format!("line-in-S{}-violations", side + 1),
            anchors::QE_FAILURE,
            Expectation::Eq(int(0)),
            int(i64::from(!cert.passed())),
        ));
    }

    let jb = join.map(0).apply(&b)?;
    for i in 1..d2 {
        let r = join.map(1).apply(&s2.blacks()[i])?;
        report.push(Claim::new(
            format!("joint-dist(b,v1+v{}/4)", i + 1),
            anchors::QE_FAILURE,
            Expectation::Eq(ratio(1, 8)),
            jb.dist_sq(&r)?,
        ));
    }
    let ext = check_substructure(&s1, &union, join.map(0), Probes::DefaultAnd(vec![b.clone()]))?;
    let (at_b, joint_at_b) = match &ext.violation {
        Some(v) if v.probe == b => (v.small.clone(), v.big.clone()),
        _ => (int(0), int(1)),
    };
    report.push(Claim::new("S1-in-join-violation-small", anchors::QE_FAILURE, Expectation::Eq(q.clone()), at_b));
    report.push(Claim::new("S1-in-join-violation-joint", anchors::QE_FAILURE, Expectation::Lt(q.clone()), joint_at_b));

    let da = s1.dist_black_sq(&a)?;
    let minimizers = s1
        .blacks()
        .iter()
        .filter(|x| Some((&a - *x).norm_sq()) == da.nearest_sq)
        .count();
    let witness_gap = da
        .witness
        .as_ref()
        .map_or_else(Rational::one, |w| (w - &c).norm_sq());
    report.push(Claim::new("d1(a)", anchors::ACL, Expectation::Eq(ratio(1, 16)), da.dist_sq.clone()));
    report.push(Claim::new("|witness(a)-c|", anchors::ACL, Expectation::Eq(int(0)), witness_gap));
    report.push(Claim::new(
        "nearest-blacks(a)",
        anchors::ACL,
        Expectation::Eq(int(1)),
        int(minimizers as i64),
    ));
    report.push(Claim::new(
        "|c-P_span(a)(c)|",
        anchors::ACL,
        Expectation::Gt(int(0)),
        line1.residue_unchecked(&c).norm_sq(),
    ));

    Ok(QeFailure {
        s1,
        s2,
        base,
        join,
        union,
        a,
        b,
        c,
        report,
    })
}

/// The `k` ordered subsets of `0..m` of size `k`, lexicographically.
pub fn k_subsets(m: usize, k: usize) -> Vec<Vec<usize>> {
    fn go(start: usize, m: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for x in start..m {
            if m - x < k - cur.len() {
                break;
            }
            cur.push(x);
            go(x + 1, m, k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(0, m, k, &mut Vec::new(), &mut out);
    out
}

/// Finite `M_f`: orthonormal `b_i (i < k)`, `a_j (j < m)`, `c_X` for the
/// `k`-subsets `X` of `m`, with `f_X(b_i) = a_{X[i]}` and black set
/// `{c_X + b_i + a_{X[i]}/2} ∪ {0}`.
pub fn gen_nonsimple(k: usize, m: usize) -> Result<(BlackSetStructure, WitnessReport)> {
    if k == 0 || k > m {
        return Err(Error::OutOfRange(format!("nonsimple needs 1 <= k <= m, got k={k}, m={m}")));
    }
    let subsets = k_subsets(m, k);
    let dim = k + m + subsets.len();
    let b = |i: usize| i;
    let a = |j: usize| k + j;
    let c = |x: usize| k + m + x;
    let mut blacks = vec![RationalVector::zeros(dim)];
    for (xi, x) in subsets.iter().enumerate() {
        for (i, &j) in x.iter().enumerate() {
            blacks.push(combo(dim, &[(c(xi), int(1)), (b(i), int(1)), (a(j), half())]));
        }
    }
    let s = BlackSetStructure::new(Subspace::full(dim)?, blacks)?;
    let mut report = WitnessReport::new("nonsimple", &[("k", k.to_string()), ("m", m.to_string())]);
    for (xi, x) in subsets.iter().enumerate() {
        for (yi, y) in subsets.iter().enumerate() {
            if xi == yi {
                continue;
            }
            for (l, &j) in y.iter().enumerate() {
                if x.contains(&j) {
                    continue;
                }
                let kp = x[l];
                let tag = format!("X{xi},Y{yi},j{j}");
                let d = combo(dim, &[(c(xi), int(1)), (b(l), int(1)), (a(kp), -half())]);
                let e = combo(dim, &[(c(xi), int(1)), (b(l), int(1)), (a(j), half())]);
                let e_black = combo(dim, &[(c(yi), int(1)), (b(l), int(1)), (a(j), half())]);
                let cert = s.dist_black_sq(&d)?;
                report.push(Claim::new(format!("white[{tag}]"), anchors::NONSIMPLE, Expectation::Eq(int(1)), cert.dist_sq.clone()));
                report.push(Claim::new(
                    format!("white-nearest[{tag}]"),
                    anchors::NONSIMPLE,
                    Expectation::Ge(int(1)),
                    nearest_sq(&cert),
                ));
                report.push(Claim::new(
                    format!("black-e'[{tag}]"),
                    anchors::NONSIMPLE,
                    Expectation::Eq(int(0)),
                    s.dist_black_sq(&e_black)?.dist_sq,
                ));
                report.push(Claim::new(format!("e-d[{tag}]"), anchors::NONSIMPLE, Expectation::Eq(half()), e.dist_sq(&d)?));
            }
        }
    }
    Ok((s, report))
}

/// All maps `rows -> cols` in lexicographic order of their value tuples.
pub fn lexicographic_functions(rows: usize, cols: usize, count: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::with_capacity(count);
    let mut cur = vec![0; rows];
    if cols == 0 {
        return out;
    }
    while out.len() < count {
        out.push(cur.clone());
        let mut pos = rows;
        loop {
            if pos == 0 {
                return out;
            }
            pos -= 1;
            cur[pos] += 1;
            if cur[pos] < cols {
                break;
            }
            cur[pos] = 0;
        }
    }
    out
}

/// Basis `b_i`, `c_{i,j}`, `a_f` with black set
/// `{a_f + b_i + c_{i,f(i)}/2} ∪ {0}`.
pub fn gen_tp2(rows: usize, cols: usize, funcs: &[Vec<usize>]) -> Result<(BlackSetStructure, WitnessReport)> {
    if rows == 0 || cols == 0 || funcs.is_empty() {
        return Err(Error::OutOfRange("tp2 needs rows, cols >= 1 and at least one function".into()));
    }
    for (fi, f) in funcs.iter().enumerate() {
        if f.len() != rows || f.iter().any(|&x| x >= cols) {
            return Err(Error::OutOfRange(format!("function {fi} is not a map from {rows} rows to {cols} columns")));
        }
    }
    let dim = rows + rows * cols + funcs.len();
    let b = |i: usize| i;
    let c = |i: usize, j: usize| rows + i * cols + j;
    let a = |f: usize| rows + rows * cols + f;
    let black = |f: usize, i: usize| combo(dim, &[(a(f), int(1)), (b(i), int(1)), (c(i, funcs[f][i]), half())]);
    let mut blacks = vec![RationalVector::zeros(dim)];
    for f in 0..funcs.len() {
        for i in 0..rows {
            blacks.push(black(f, i));
        }
    }
    let s = BlackSetStructure::new(Subspace::full(dim)?, blacks)?;
    let mut report = WitnessReport::new(
        "tp2",
        &[("rows", rows.to_string()), ("cols", cols.to_string()), ("funcs", funcs.len().to_string())],
    );

    for i in 0..rows {
        for j in 0..cols {
            for l in j + 1..cols {
                let plus = combo(dim, &[(a(0), int(1)), (b(i), int(1)), (c(i, j), half())]);
                let minus = combo(dim, &[(a(0), int(1)), (b(i), int(1)), (c(i, l), -half())]);
                report.push(Claim::new(
                    format!("conflict[i{i},j{j},l{l}]"),
                    anchors::TP2_CLAIM1,
                    Expectation::Eq(half()),
                    plus.dist_sq(&minus)?,
                ));
            }
        }
    }

    let min_of = |x: &RationalVector, pts: &mut dyn Iterator<Item = RationalVector>| -> Option<Rational> {
        pts.map(|p| (x - &p).norm_sq()).min()
    };
    for f in 0..funcs.len() {
        for n in 0..rows {
            let tag = format!("f{f},n{n}");
            let own = black(f, n);
            let white = combo(dim, &[(a(f), int(1)), (b(n), int(1)), (c(n, funcs[f][n]), -half())]);
            report.push(Claim::new(format!("black[{tag}]"), anchors::TP2_CLAIM2, Expectation::Eq(int(0)), s.dist_black_sq(&own)?.dist_sq));
            report.push(Claim::new(format!("own[{tag}]"), anchors::TP2_CLAIM2, Expectation::Eq(int(1)), white.dist_sq(&own)?));
            if let Some(v) = min_of(&white, &mut (0..rows).filter(|&m| m != n).map(|m| black(f, m))) {
                report.push(Claim::new(format!("same-f[{tag}]"), anchors::TP2_CLAIM2, Expectation::Eq(ratio(5, 2)), v));
            }
            let others = (0..funcs.len()).filter(|&g| g != f).flat_map(|g| (0..rows).map(move |k| (g, k)));
            if let Some(v) = min_of(&white, &mut others.map(|(g, k)| black(g, k))) {
                report.push(Claim::new(format!("other-f[{tag}]"), anchors::TP2_CLAIM2, Expectation::Ge(int(2)), v));
            }
            report.push(Claim::new(format!("zero[{tag}]"), anchors::TP2_CLAIM2, Expectation::Eq(ratio(9, 4)), white.norm_sq()));
            let cert = s.dist_black_sq(&white)?;
            report.push(Claim::new(format!("white-nearest[{tag}]"), anchors::TP2_CLAIM2, Expectation::Ge(int(1)), nearest_sq(&cert)));
            report.push(Claim::new(format!("white[{tag}]"), anchors::TP2_CLAIM2, Expectation::Eq(int(1)), cert.dist_sq));
        }
    }
    Ok((s, report))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PerturbationResult {
    pub original: RationalVector,
    pub perturbed: RationalVector,
    /// `u′`, the projection of the original onto the base.
    pub base_part: RationalVector,
    /// `c′ = original − u′`.
    pub residue: RationalVector,
    pub delta_prime_sq: Rational,
    /// `perturbed` is exact; otherwise it is within [`PERTURBATION_TOLERANCE`].
    pub exact: bool,
}

pub const PERTURBATION_TOLERANCE: f64 = 1e-9;

const APPROX_DIGITS: u32 = 15;

impl PerturbationResult {
    /// Exact decision of `‖ĉ − u′‖ = ‖c′‖ + δ′` on squared values:
    /// `X − ‖c′‖² − δ′² = 2‖c′‖δ′` with `X = ‖ĉ − u′‖²`, squared after a
    /// sign check.
    pub fn norm_identity_holds(&self) -> bool {
        let x = (&self.perturbed - &self.base_part).norm_sq();
        let r = self.residue.norm_sq();
        let lhs = x - &r - &self.delta_prime_sq;
        !lhs.is_negative() && &lhs * &lhs == int(4) * &r * &self.delta_prime_sq
    }
}

/// `ĉ = u′ + (1 + δ′/‖c′‖) c′`. Exact when `δ′²/‖c′‖²` is the square of a
/// rational; otherwise the factor is a rational approximation.
pub fn perturb_black_witness(
    c: &RationalVector,
    base: &Subspace,
    delta_prime_sq: &Rational,
) -> Result<PerturbationResult> {
    if delta_prime_sq.is_negative() {
        return Err(Error::OutOfRange("delta' squared must be nonnegative".into()));
    }
    let (u, r) = base.decompose(c)?;
    if r.is_zero() {
        return Err(Error::ZeroResidue);
    }
    let q = delta_prime_sq / r.norm_sq();
    let (t, exact) = match rational_sqrt(&q) {
        Some(t) => (t, true),
        None => (sqrt_approx(&q, APPROX_DIGITS), false),
    };
    let perturbed = &u + &r.scale(&(Rational::one() + t));
    Ok(PerturbationResult {
        original: c.clone(),
        perturbed,
        base_part: u,
        residue: r,
        delta_prime_sq: delta_prime_sq.clone(),
        exact,
    })
}

/// `(δ², δ′²) = (4ε(L+2), 2ε(L+2))`.
pub fn axiom_delta(eps: &Rational, l: &Rational) -> Result<(Rational, Rational)> {
    if !eps.is_positive() || *eps >= Rational::one() {
        return Err(Error::OutOfRange(format!("eps must lie in (0,1), got {eps}")));
    }
    if l.is_negative() {
        return Err(Error::OutOfRange(format!("L must be nonnegative, got {l}")));
    }
    let base = eps * (l + int(2));
    Ok((int(4) * &base, int(2) * base))
}
