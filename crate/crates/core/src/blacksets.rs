//! Hilbert spaces with a finite black set `N` and the truncated distance
//! predicate `d_N(x) = min(1, dist(x, N))`.
//!
//! Every distance is handled squared. Since `min(1, d)² = min(1, d²)`, the
//! squared predicate is exact and rational.

use num_traits::One;

use crate::error::{Error, Result};
use crate::linalg::{free_join_many, AmalgamEmbedding, Embedding, JoinCertificate, RationalVector, Subspace};
use crate::rational::{ratio, sqrt_difference_le, Rational};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BlackSetStructure {
    space: Subspace,
    blacks: Vec<RationalVector>,
}

/// Nearest-black data for one point.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DistanceCertificate {
    pub point: RationalVector,
    /// `min(1, min_b ‖point − b‖²)`.
    pub dist_sq: Rational,
    /// Untruncated squared distance to the nearest black; `None` if `N = ∅`.
    pub nearest_sq: Option<Rational>,
    /// A black point attaining `nearest_sq`.
    pub witness: Option<RationalVector>,
    /// Exactly one black point attains the minimum.
    pub unique: bool,
}

fn ensure_member(space: &Subspace, v: &RationalVector, what: &str) -> Result<()> {
    if space.contains(v)? {
        Ok(())
    } else {
        Err(Error::NotContained {
            what: format!("{what} {v}"),
            container: "the ambient space",
        })
    }
}

fn truncate(d: Rational) -> Rational {
    if d > Rational::one() {
        Rational::one()
    } else {
        d
    }
}

impl BlackSetStructure {
    /// Duplicate black points are dropped, keeping first occurrences.
    pub fn new(space: Subspace, blacks: Vec<RationalVector>) -> Result<Self> {
        let mut kept: Vec<RationalVector> = Vec::with_capacity(blacks.len());
        for b in blacks {
            ensure_member(&space, &b, "black point")?;
            if !kept.contains(&b) {
                kept.push(b);
            }
        }
        Ok(Self { space, blacks: kept })
    }

    pub fn space(&self) -> &Subspace {
        &self.space
    }

    pub fn blacks(&self) -> &[RationalVector] {
        &self.blacks
    }

    pub fn ambient_dim(&self) -> usize {
        self.space.ambient_dim()
    }

    pub fn dist_black_sq(&self, v: &RationalVector) -> Result<DistanceCertificate> {
        ensure_member(&self.space, v, "point")?;
        Ok(self.certificate_unchecked(v))
    }

    fn certificate_unchecked(&self, v: &RationalVector) -> DistanceCertificate {
        let mut best: Option<(Rational, usize)> = None;
        let mut ties = 0;
        for (i, b) in self.blacks.iter().enumerate() {
            let d = (v - b).norm_sq();
            match &best {
                Some((m, _)) if d > *m => {}
                Some((m, _)) if d == *m => ties += 1,
                _ => {
                    best = Some((d, i));
                    ties = 1;
                }
            }
        }
        match best {
            None => DistanceCertificate {
                point: v.clone(),
                dist_sq: Rational::one(),
                nearest_sq: None,
                witness: None,
                unique: false,
            },
            Some((d, i)) => DistanceCertificate {
                point: v.clone(),
                dist_sq: truncate(d.clone()),
                nearest_sq: Some(d),
                witness: Some(self.blacks[i].clone()),
                unique: ties == 1,
            },
        }
    }

    pub(crate) fn dist_sq_unchecked(&self, v: &RationalVector) -> Rational {
        let mut best = Rational::one();
        for b in &self.blacks {
            let d = (v - b).norm_sq();
            if d < best {
                best = d;
            }
        }
        best
    }

    /// `d_N(0)²`; structures amalgamate only within one class.
    pub fn class_value(&self) -> Rational {
        self.dist_sq_unchecked(&RationalVector::zeros(self.ambient_dim()))
    }

    /// All blacks and the midpoints of all pairs of blacks.
    pub fn default_axiom_probes(&self) -> Vec<RationalVector> {
        with_midpoints(self.blacks.clone())
    }

    /// Checks a claimed distance table, the Lipschitz axiom on all probe
    /// pairs and the witness axiom at every probe with `d < 1`.
    pub fn check_axioms(
        &self,
        table: Option<&[(RationalVector, Rational)]>,
        probes: &[RationalVector],
    ) -> Result<AxiomCertificate> {
        let mut table_entries = 0;
        for (index, (point, claimed)) in table.unwrap_or_default().iter().enumerate() {
            let computed = self.dist_black_sq(point)?.dist_sq;
            if computed != *claimed {
                return Err(Error::TableMismatch {
                    index,
                    point: point.clone(),
                    claimed: Box::new(claimed.clone()),
                    computed: Box::new(computed),
                });
            }
            table_entries += 1;
        }
        let certs = probes
            .iter()
            .map(|p| self.dist_black_sq(p))
            .collect::<Result<Vec<_>>>()?;
        let lipschitz = lipschitz_check(probes, certs.iter().map(|c| &c.dist_sq));
        let mut witness_failure = None;
        let mut witnesses_checked = 0;
        for (i, c) in certs.iter().enumerate() {
            if c.dist_sq >= Rational::one() {
                continue;
            }
            witnesses_checked += 1;
            let ok = c.witness.as_ref().is_some_and(|w| {
                self.blacks.contains(w) && (&c.point - w).norm_sq() == c.dist_sq
            });
            if !ok && witness_failure.is_none() {
                witness_failure = Some(i);
            }
        }
        Ok(AxiomCertificate {
            table_entries,
            lipschitz_pairs: lipschitz.0,
            lipschitz_violation: lipschitz.1,
            witnesses_checked,
            witness_failure,
        })
    }
}

/// Outcome of [`BlackSetStructure::check_axioms`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AxiomCertificate {
    pub table_entries: usize,
    pub lipschitz_pairs: usize,
    pub lipschitz_violation: Option<(usize, usize)>,
    pub witnesses_checked: usize,
    pub witness_failure: Option<usize>,
}

impl AxiomCertificate {
    pub fn passed(&self) -> bool {
        self.lipschitz_violation.is_none() && self.witness_failure.is_none()
    }
}

/// Decides `|d(x) − d(y)| ≤ ‖x − y‖` on squared values for every pair.
/// Returns the number of pairs and the first violating pair.
pub fn lipschitz_check<'a>(
    points: &[RationalVector],
    dist_sq: impl IntoIterator<Item = &'a Rational>,
) -> (usize, Option<(usize, usize)>) {
    let d: Vec<&Rational> = dist_sq.into_iter().collect();
    let mut pairs = 0;
    for i in 0..points.len() {
        for j in i + 1..points.len() {
            pairs += 1;
            let gap = (&points[i] - &points[j]).norm_sq();
            if !sqrt_difference_le(d[i], d[j], &gap) {
                return (pairs, Some((i, j)));
            }
        }
    }
    (pairs, None)
}

fn with_midpoints(mut points: Vec<RationalVector>) -> Vec<RationalVector> {
    let n = points.len();
    for i in 0..n {
        for j in i + 1..n {
            let m = (&points[i] + &points[j]).scale(&ratio(1, 2));
            points.push(m);
        }
    }
    dedup(points)
}

fn dedup(points: Vec<RationalVector>) -> Vec<RationalVector> {
    let mut out: Vec<RationalVector> = Vec::with_capacity(points.len());
    for p in points {
        if !out.contains(&p) {
            out.push(p);
        }
    }
    out
}

/// A truncated squared-distance predicate on a subspace.
pub trait DistancePredicate {
    fn space(&self) -> &Subspace;
    /// Squared predicate value at a point of [`space`](Self::space).
    fn dist_sq(&self, v: &RationalVector) -> Result<Rational>;
    /// Points from which default probe sets are built.
    fn probe_seeds(&self) -> Vec<RationalVector>;
}

impl DistancePredicate for BlackSetStructure {
    fn space(&self) -> &Subspace {
        &self.space
    }

    fn dist_sq(&self, v: &RationalVector) -> Result<Rational> {
        ensure_member(&self.space, v, "point")?;
        Ok(self.dist_sq_unchecked(v))
    }

    fn probe_seeds(&self) -> Vec<RationalVector> {
        self.blacks.clone()
    }
}

/// The predicate of a structure restricted to a subspace. Its nearest
/// blacks may lie outside the subspace, so it is not itself a black-set
/// structure.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Restriction {
    parent: BlackSetStructure,
    subspace: Subspace,
}

impl Restriction {
    pub fn new(parent: BlackSetStructure, subspace: Subspace) -> Result<Self> {
        if !parent.space.contains_subspace(&subspace)? {
            return Err(Error::NotContained {
                what: "restriction subspace".into(),
                container: "the parent space",
            });
        }
        Ok(Self { parent, subspace })
    }

    pub fn parent(&self) -> &BlackSetStructure {
        &self.parent
    }
}

impl DistancePredicate for Restriction {
    fn space(&self) -> &Subspace {
        &self.subspace
    }

    fn dist_sq(&self, v: &RationalVector) -> Result<Rational> {
        ensure_member(&self.subspace, v, "point")?;
        Ok(self.parent.dist_sq_unchecked(v))
    }

    /// Projections of the parent's blacks onto the subspace.
    fn probe_seeds(&self) -> Vec<RationalVector> {
        dedup(
            self.parent
                .blacks
                .iter()
                .map(|b| self.subspace.project_unchecked(b))
                .collect(),
        )
    }
}

/// Probe selection for [`check_substructure`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Probes {
    /// The small side's seeds, the big side's seeds projected into the
    /// embedded small space, and all pairwise midpoints.
    Default,
    Given(Vec<RationalVector>),
    /// The default set followed by the given points.
    DefaultAnd(Vec<RationalVector>),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SubstructureViolation {
    pub probe: RationalVector,
    pub small: Rational,
    pub big: Rational,
}

/// Probe-based, hence incomplete, substructure certificate.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SubstructureCertificate {
    pub probes: Vec<RationalVector>,
    pub probes_checked: usize,
    pub violation: Option<SubstructureViolation>,
    /// No probes were checked; the pass says nothing.
    pub vacuous: bool,
}

impl SubstructureCertificate {
    pub fn passed(&self) -> bool {
        self.violation.is_none()
    }
}

/// Default probe set for `small` embedded in `big` by `emb`.
pub fn default_substructure_probes<S, B>(small: &S, big: &B, emb: &Embedding) -> Result<Vec<RationalVector>>
where
    S: DistancePredicate + ?Sized,
    B: DistancePredicate + ?Sized,
{
    let image = emb.image();
    let mut seeds = small.probe_seeds();
    for b in big.probe_seeds() {
        if let Some(p) = emb.pullback(&image.project(&b)?)? {
            seeds.push(p);
        }
    }
    Ok(with_midpoints(dedup(seeds)))
}

/// Checks `d_small(p) = d_big(emb p)` exactly at every probe, stopping at the
/// first violation.
pub fn check_substructure<S, B>(
    small: &S,
    big: &B,
    emb: &Embedding,
    probes: Probes,
) -> Result<SubstructureCertificate>
where
    S: DistancePredicate + ?Sized,
    B: DistancePredicate + ?Sized,
{
    if !emb.domain().same_as(small.space()) {
        return Err(Error::DomainMismatch("small structure"));
    }
    if emb.target_dim() != big.space().ambient_dim() {
        return Err(Error::DimensionMismatch {
            expected: big.space().ambient_dim(),
            found: emb.target_dim(),
        });
    }
    if !emb.is_isometric() {
        return Err(Error::NotIsometric);
    }
    let probes = match probes {
        Probes::Default => default_substructure_probes(small, big, emb)?,
        Probes::Given(p) => p,
        Probes::DefaultAnd(p) => {
            let mut d = default_substructure_probes(small, big, emb)?;
            d.extend(p);
            d
        }
    };
    let mut checked = 0;
    let mut violation = None;
    for p in &probes {
        checked += 1;
        let s = small.dist_sq(p)?;
        let b = big.dist_sq(&emb.apply(p)?)?;
        if s != b {
            violation = Some(SubstructureViolation {
                probe: p.clone(),
                small: s,
                big: b,
            });
            break;
        }
    }
    Ok(SubstructureCertificate {
        vacuous: probes.is_empty(),
        probes,
        probes_checked: checked,
        violation,
    })
}

/// Free amalgam of several black-set structures over a common base, with
/// black set the union of the embedded black sets.
#[derive(Clone, Debug)]
pub struct BlackSetAmalgam {
    base: BlackSetStructure,
    sides: Vec<BlackSetStructure>,
    join: AmalgamEmbedding,
    structure: BlackSetStructure,
}

/// One summand pair of the closed form on side `i`: `d_i(P_{H_i} v)²` and
/// `Σ_{j≠i} ‖P_{R_j} v‖²`, where `R_j` is side `j`'s residue over the base.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FormulaComponents {
    pub side_dist_sq: Rational,
    pub residue_sq: Rational,
}

impl FormulaComponents {
    pub fn term(&self) -> Rational {
        &self.side_dist_sq + &self.residue_sq
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FormulaMismatch {
    pub probe: RationalVector,
    pub formula: Rational,
    pub union: Rational,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FormulaCertificate {
    pub probes_checked: usize,
    pub mismatch: Option<FormulaMismatch>,
}

impl FormulaCertificate {
    pub fn passed(&self) -> bool {
        self.mismatch.is_none()
    }
}

/// Amalgam of `s1` and `s2` over `s0`; `emb_i` embeds `s0.space()` into side `i`.
pub fn amalgamate_blacksets(
    s0: &BlackSetStructure,
    s1: &BlackSetStructure,
    s2: &BlackSetStructure,
    emb1: &Embedding,
    emb2: &Embedding,
) -> Result<BlackSetAmalgam> {
    independent_union_amalgam(s0, &[(s1.clone(), emb1.clone()), (s2.clone(), emb2.clone())])
}

/// n-fold free amalgam over `base`. Every part must contain the base as a
/// substructure on the default probe set and share its class value.
pub fn independent_union_amalgam(
    base: &BlackSetStructure,
    parts: &[(BlackSetStructure, Embedding)],
) -> Result<BlackSetAmalgam> {
    let class = base.class_value();
    for (i, (s, emb)) in parts.iter().enumerate() {
        let found = s.class_value();
        if found != class {
            return Err(Error::ClassMismatch {
                side: i + 1,
                expected: Box::new(class),
                found: Box::new(found),
            });
        }
        let cert = check_substructure(base, s, emb, Probes::Default)?;
        if let Some(v) = cert.violation {
            return Err(Error::NotSubstructure {
                side: i + 1,
                probe: v.probe,
                small: Box::new(v.small),
                big: Box::new(v.big),
            });
        }
    }
    let spaces: Vec<Subspace> = parts.iter().map(|(s, _)| s.space.clone()).collect();
    let maps: Vec<Embedding> = parts.iter().map(|(_, e)| e.clone()).collect();
    let join = free_join_many(&spaces, &base.space, &maps)?;
    let mut blacks = Vec::new();
    for (i, (s, _)) in parts.iter().enumerate() {
        for b in &s.blacks {
            blacks.push(join.map(i).apply(b)?);
        }
    }
    let structure = BlackSetStructure::new(join.joint().clone(), blacks)?;
    Ok(BlackSetAmalgam {
        base: base.clone(),
        sides: parts.iter().map(|(s, _)| s.clone()).collect(),
        join,
        structure,
    })
}

/// Joint embedding of two class-0 structures: the amalgam over the zero
/// space with black set `{0}`.
pub fn join_k0(s1: &BlackSetStructure, s2: &BlackSetStructure) -> Result<BlackSetAmalgam> {
    let zero = Subspace::zero(1)?;
    let base = BlackSetStructure::new(zero.clone(), vec![RationalVector::zeros(1)])?;
    let parts = [s1, s2]
        .into_iter()
        .map(|s| Ok((s.clone(), Embedding::new(zero.clone(), s.ambient_dim(), vec![])?)))
        .collect::<Result<Vec<_>>>()?;
    independent_union_amalgam(&base, &parts)
}

impl BlackSetAmalgam {
    pub fn structure(&self) -> &BlackSetStructure {
        &self.structure
    }

    pub fn join(&self) -> &AmalgamEmbedding {
        &self.join
    }

    pub fn base(&self) -> &BlackSetStructure {
        &self.base
    }

    pub fn sides(&self) -> &[BlackSetStructure] {
        &self.sides
    }

    pub fn join_certificate(&self) -> JoinCertificate {
        self.join.certify()
    }

    /// Side `i`'s closed-form ingredients at a joint point `v`.
    pub fn closed_form_components(&self, v: &RationalVector) -> Result<Vec<FormulaComponents>> {
        ensure_member(&self.structure.space, v, "point")?;
        let residue_sq: Vec<Rational> = (0..self.sides.len())
            .map(|j| self.join.residue(j).project_unchecked(v).norm_sq())
            .collect();
        let total: Rational = residue_sq.iter().sum();
        self.sides
            .iter()
            .enumerate()
            .map(|(i, side)| {
                let m = self.join.map(i);
                let p = self.join.side_image(i).project_unchecked(v);
                let w = m.pullback(&p)?.expect("projection lies in the side image");
                Ok(FormulaComponents {
                    side_dist_sq: side.dist_sq_unchecked(&w),
                    residue_sq: &total - &residue_sq[i],
                })
            })
            .collect()
    }

    /// `d_i(P_{H_i} v)² + Σ_{j≠i} ‖P_{R_j} v‖²` for each side `i`.
    pub fn closed_form_terms(&self, v: &RationalVector) -> Result<Vec<Rational>> {
        Ok(self
            .closed_form_components(v)?
            .iter()
            .map(FormulaComponents::term)
            .collect())
    }

    /// `min(1, min_i term_i)`.
    pub fn closed_form_dist_sq(&self, v: &RationalVector) -> Result<Rational> {
        Ok(self
            .closed_form_terms(v)?
            .into_iter()
            .fold(Rational::one(), |m, t| if t < m { t } else { m }))
    }

    /// Blacks of the amalgam and midpoints of all pairs of them.
    pub fn default_probes(&self) -> Vec<RationalVector> {
        self.structure.default_axiom_probes()
    }

    /// Compares the closed form with the union-induced predicate.
    pub fn certify_formula(&self, probes: &[RationalVector]) -> Result<FormulaCertificate> {
        let mut checked = 0;
        for p in probes {
            checked += 1;
            let formula = self.closed_form_dist_sq(p)?;
            let union = self.structure.dist_black_sq(p)?.dist_sq;
            if formula != union {
                return Ok(FormulaCertificate {
                    probes_checked: checked,
                    mismatch: Some(FormulaMismatch {
                        probe: p.clone(),
                        formula,
                        union,
                    }),
                });
            }
        }
        Ok(FormulaCertificate {
            probes_checked: checked,
            mismatch: None,
        })
    }

    /// Each side is a substructure of the amalgam on its default probes.
    pub fn certify_restrictions(&self) -> Result<Vec<SubstructureCertificate>> {
        self.sides
            .iter()
            .enumerate()
            .map(|(i, s)| check_substructure(s, &self.structure, self.join.map(i), Probes::Default))
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::int;

    fn e(dim: usize, i: usize) -> RationalVector {
        RationalVector::unit(dim, i)
    }

    fn full(dim: usize, blacks: Vec<RationalVector>) -> BlackSetStructure {
        BlackSetStructure::new(Subspace::full(dim).unwrap(), blacks).unwrap()
    }

    #[test]
    fn distances_and_certificates() {
        let s = full(2, vec![RationalVector::zeros(2), e(2, 0)]);
        let c = s.dist_black_sq(&e(2, 0)).unwrap();
        assert_eq!(c.dist_sq, int(0));
        assert_eq!(c.witness, Some(e(2, 0)));
        assert!(c.unique);

        let mid = RationalVector::from_ratios(&[(1, 2), (0, 1)]);
        let c = s.dist_black_sq(&mid).unwrap();
        assert_eq!(c.dist_sq, ratio(1, 4));
        assert!(!c.unique);

        let far = RationalVector::from_ints(&[0, 3]);
        let c = s.dist_black_sq(&far).unwrap();
        assert_eq!(c.dist_sq, int(1));
        assert_eq!(c.nearest_sq, Some(int(9)));

        let empty = full(2, vec![]);
        assert_eq!(empty.dist_black_sq(&far).unwrap().dist_sq, int(1));
        assert!(empty.dist_black_sq(&far).unwrap().witness.is_none());
        assert!(s.dist_black_sq(&e(3, 0)).is_err());
    }

    #[test]
    fn class_values() {
        assert_eq!(full(2, vec![RationalVector::zeros(2)]).class_value(), int(0));
        assert_eq!(full(2, vec![e(2, 0)]).class_value(), int(1));
        let half = RationalVector::from_ratios(&[(1, 2), (0, 1)]);
        assert_eq!(full(2, vec![half]).class_value(), ratio(1, 4));
        assert_eq!(full(2, vec![]).class_value(), int(1));
    }

    #[test]
    fn rejects_blacks_outside_space() {
        let line = Subspace::span(2, &[e(2, 0)]).unwrap();
        assert!(BlackSetStructure::new(line, vec![e(2, 1)]).is_err());
    }

    #[test]
    fn axiom_checks() {
        let s = full(2, vec![RationalVector::zeros(2), e(2, 0), e(2, 1)]);
        let probes = s.default_axiom_probes();
        let table: Vec<_> = probes
            .iter()
            .map(|p| (p.clone(), s.dist_black_sq(p).unwrap().dist_sq))
            .collect();
        let cert = s.check_axioms(Some(&table), &probes).unwrap();
        assert!(cert.passed());
        assert_eq!(cert.table_entries, table.len());

        let mut bad = table.clone();
        bad[3].1 += ratio(1, 100);
        match s.check_axioms(Some(&bad), &probes) {
            Err(Error::TableMismatch { index, .. }) => assert_eq!(index, 3),
            other => panic!("expected a table mismatch, got {other:?}"),
        }
    }

    #[test]
    fn lipschitz_detects_a_jump() {
        let pts = [RationalVector::zeros(1), RationalVector::from_ratios(&[(1, 10)])];
        let (_, v) = lipschitz_check(&pts, [&int(0), &int(1)]);
        assert_eq!(v, Some((0, 1)));
        let (_, v) = lipschitz_check(&pts, [&int(0), &ratio(1, 100)]);
        assert_eq!(v, None);
    }

    #[test]
    fn k0_join() {
        let s1 = full(1, vec![RationalVector::zeros(1), e(1, 0)]);
        let s2 = full(1, vec![RationalVector::zeros(1), e(1, 0)]);
        let j = join_k0(&s1, &s2).unwrap();
        assert_eq!(j.structure().blacks().len(), 3);
        assert_eq!(j.join().joint_dim(), 2);
        let mid = RationalVector::from_ratios(&[(1, 2), (1, 2)]);
        assert_eq!(j.structure().dist_black_sq(&mid).unwrap().dist_sq, ratio(1, 2));
        assert!(j.certify_restrictions().unwrap().iter().all(|c| c.passed()));

        let white = full(1, vec![e(1, 0)]);
        assert!(matches!(join_k0(&s1, &white), Err(Error::ClassMismatch { side: 2, .. })));
    }

    #[test]
    fn amalgam_formula_example() {
        let s0 = BlackSetStructure::new(Subspace::zero(1).unwrap(), vec![RationalVector::zeros(1)]).unwrap();
        let s1 = full(1, vec![RationalVector::zeros(1), e(1, 0)]);
        let z = Subspace::zero(1).unwrap();
        let emb = Embedding::new(z, 1, vec![]).unwrap();
        let am = amalgamate_blacksets(&s0, &s1, &s1, &emb, &emb).unwrap();
        let v = RationalVector::from_ints(&[1, 1]);
        assert_eq!(am.closed_form_terms(&v).unwrap(), vec![int(1), int(1)]);
        assert_eq!(am.closed_form_dist_sq(&v).unwrap(), int(1));
        assert_eq!(am.structure().dist_black_sq(&v).unwrap().dist_sq, int(1));
        assert!(am.certify_formula(&am.default_probes()).unwrap().passed());

        // v in H_1 gives back d_1
        let w = RationalVector::from_ratios(&[(1, 3), (0, 1)]);
        assert_eq!(am.closed_form_dist_sq(&w).unwrap(), ratio(1, 9));
    }

    #[test]
    fn three_part_union() {
        let z = Subspace::zero(1).unwrap();
        let base = BlackSetStructure::new(z.clone(), vec![RationalVector::zeros(1)]).unwrap();
        let part = full(1, vec![RationalVector::zeros(1), e(1, 0)]);
        let emb = Embedding::new(z, 1, vec![]).unwrap();
        let parts = vec![(part.clone(), emb.clone()), (part.clone(), emb.clone()), (part, emb)];
        let am = independent_union_amalgam(&base, &parts).unwrap();
        assert_eq!(am.structure().blacks().len(), 4);
        let all = RationalVector::from_ints(&[1, 1, 1]);
        let c = am.structure().dist_black_sq(&all).unwrap();
        assert_eq!(c.dist_sq, int(1));
        assert_eq!(c.nearest_sq, Some(int(2)));
        assert_eq!(am.closed_form_dist_sq(&all).unwrap(), int(1));
    }

    #[test]
    fn substructure_probes() {
        let big = full(2, vec![RationalVector::zeros(2), e(2, 0)]);
        let line = Subspace::span(2, &[e(2, 0)]).unwrap();
        let small = BlackSetStructure::new(line.clone(), vec![RationalVector::zeros(2), e(2, 0)]).unwrap();
        let id = Embedding::identity(&line);
        let c = check_substructure(&small, &big, &id, Probes::Default).unwrap();
        assert!(c.passed() && !c.vacuous);

        let c = check_substructure(&small, &big, &id, Probes::Given(vec![])).unwrap();
        assert!(c.passed() && c.vacuous);

        let lonely = BlackSetStructure::new(line, vec![e(2, 0)]).unwrap();
        let c = check_substructure(&lonely, &big, &id, Probes::Default).unwrap();
        let v = c.violation.unwrap();
        assert_eq!(v.probe, RationalVector::zeros(2));
        assert_eq!((v.small, v.big), (int(1), int(0)));
    }

    #[test]
    fn restriction_predicate() {
        let s = full(2, vec![RationalVector::from_ratios(&[(1, 1), (1, 4)])]);
        let axis = Subspace::span(2, &[e(2, 0)]).unwrap();
        let r = Restriction::new(s, axis).unwrap();
        assert_eq!(r.dist_sq(&e(2, 0)).unwrap(), ratio(1, 16));
        assert!(r.dist_sq(&e(2, 1)).is_err());
        assert_eq!(r.probe_seeds(), vec![e(2, 0)]);
    }
}
