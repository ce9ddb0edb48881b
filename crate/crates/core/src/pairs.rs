//! Finite models of the theory of a Hilbert space with a distinguished
//! projection.
//!
//! A pair stores the image `G = P(H)` rather than a matrix for `P`; the
//! projection is recomputed from `G`'s orthogonal basis, so `P² = P` and
//! `P* = P` hold by construction and [`ProjectionPairStructure::certify_axioms`]
//! only re-checks the arithmetic.

use num_traits::Zero;

use crate::error::{Error, Result};
use crate::independence::non_dividing;
use crate::linalg::{
    free_join, gram_of_tuple, AmalgamEmbedding, Embedding, GramMatrix, JoinCertificate,
    RationalVector, Subspace,
};
use crate::rational::Rational;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ProjectionPairStructure {
    space: Subspace,
    g: Subspace,
}

/// Exact check of `P² = P` and `⟨Pu, v⟩ = ⟨u, Pv⟩` on pairs of basis vectors
/// of the ambient space.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct AxiomCertificate {
    pub idempotent: bool,
    pub self_adjoint: bool,
    pub pairs_checked: usize,
}

impl AxiomCertificate {
    pub fn passed(&self) -> bool {
        self.idempotent && self.self_adjoint
    }
}

impl ProjectionPairStructure {
    pub fn new(space: Subspace, g: Subspace) -> Result<Self> {
        if !space.contains_subspace(&g)? {
            return Err(Error::NotContained {
                what: "G".into(),
                container: "the ambient space",
            });
        }
        Ok(Self { space, g })
    }

    pub fn space(&self) -> &Subspace {
        &self.space
    }

    pub fn g(&self) -> &Subspace {
        &self.g
    }

    pub fn ambient_dim(&self) -> usize {
        self.space.ambient_dim()
    }

    fn check_member(&self, v: &RationalVector) -> Result<()> {
        if self.space.contains(v)? {
            Ok(())
        } else {
            Err(Error::NotContained {
                what: format!("point {v}"),
                container: "the ambient space",
            })
        }
    }

    pub fn project(&self, v: &RationalVector) -> Result<RationalVector> {
        self.check_member(v)?;
        Ok(self.g.project_unchecked(v))
    }

    /// `(P v, d_P(v)²)` with `d_P(v) = ‖v − P v‖`, not truncated.
    pub fn apply_p(&self, v: &RationalVector) -> Result<(RationalVector, Rational)> {
        let pv = self.project(v)?;
        let d = (v - &pv).norm_sq();
        Ok((pv, d))
    }

    pub fn d_p_sq(&self, v: &RationalVector) -> Result<Rational> {
        self.apply_p(v).map(|(_, d)| d)
    }

    pub fn certify_axioms(&self) -> AxiomCertificate {
        let basis = self.space.basis();
        let images: Vec<RationalVector> = basis.iter().map(|b| self.g.project_unchecked(b)).collect();
        let idempotent = images
            .iter()
            .all(|p| self.g.project_unchecked(p) == *p);
        let mut self_adjoint = true;
        let mut pairs_checked = 0;
        for (i, u) in basis.iter().enumerate() {
            for (j, v) in basis.iter().enumerate() {
                pairs_checked += 1;
                self_adjoint &= images[i].dot(v) == u.dot(&images[j]);
            }
        }
        AxiomCertificate {
            idempotent,
            self_adjoint,
            pairs_checked,
        }
    }
}

/// Outcome of [`verify_projection_recovery`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RecoveryCertificate {
    /// `d_P(x)²`; zero iff `x ∈ G`.
    pub d_p_sq_x: Rational,
    /// `‖v − x‖² − d_P(v)²`, which equals `‖P v − x‖²` when `x ∈ G`.
    pub gap: Rational,
    pub holds: bool,
}

/// Decides whether `x` is the element of `G` recovered from `v`, i.e.
/// `max{d_P(x), |‖v − x‖ − d_P(v)|} = 0`.
pub fn verify_projection_recovery(
    v: &RationalVector,
    x: &RationalVector,
    pp: &ProjectionPairStructure,
) -> Result<RecoveryCertificate> {
    let d_v = pp.d_p_sq(v)?;
    let d_x = pp.d_p_sq(x)?;
    let gap = (v - x).norm_sq() - d_v;
    let holds = d_x.is_zero() && gap.is_zero();
    Ok(RecoveryCertificate {
        d_p_sq_x: d_x,
        gap,
        holds,
    })
}

/// Free amalgam of two pairs over a common sub-pair.
#[derive(Clone, Debug)]
pub struct PairAmalgam {
    base: ProjectionPairStructure,
    sides: [ProjectionPairStructure; 2],
    join: AmalgamEmbedding,
    pair: ProjectionPairStructure,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PairAmalgamCertificate {
    pub join: JoinCertificate,
    pub axioms: AxiomCertificate,
    /// `P_3(emb_i g) = emb_i(P_i g)` on every basis vector of side `i`.
    pub restriction: [bool; 2],
    /// Decomposition formula agrees with the direct projection on every
    /// joint basis vector and extra probe.
    pub formula: bool,
    pub probes_checked: usize,
}

impl PairAmalgamCertificate {
    pub fn passed(&self) -> bool {
        self.join.passed()
            && self.axioms.passed()
            && self.restriction.iter().all(|&r| r)
            && self.formula
    }
}

/// Amalgamates `pp1` and `pp2` over `pp0`, where `emb1`, `emb2` embed
/// `pp0.space()` into the two sides. The joint `G` is
/// `span(emb G_1 ∪ emb G_2)`.
pub fn amalgamate_pairs(
    pp0: &ProjectionPairStructure,
    pp1: &ProjectionPairStructure,
    pp2: &ProjectionPairStructure,
    emb1: &Embedding,
    emb2: &Embedding,
) -> Result<PairAmalgam> {
    for (side, (pp, emb)) in [(pp1, emb1), (pp2, emb2)].into_iter().enumerate() {
        if !emb.is_isometric() {
            return Err(Error::NotIsometric);
        }
        for (index, h) in pp0.space.basis().iter().enumerate() {
            let lhs = pp.project(&emb.apply(h)?)?;
            let rhs = emb.apply(&pp0.g.project_unchecked(h))?;
            if lhs != rhs {
                return Err(Error::RestrictionMismatch {
                    side: side + 1,
                    index,
                });
            }
        }
    }
    let join = free_join(&pp1.space, &pp2.space, &pp0.space, emb1, emb2)?;
    let mut gens = Vec::new();
    for (i, pp) in [pp1, pp2].into_iter().enumerate() {
        for g in pp.g.basis() {
            gens.push(join.map(i).apply(g)?);
        }
    }
    let g3 = Subspace::span(join.ambient_dim(), &gens)?;
    let pair = ProjectionPairStructure::new(join.joint().clone(), g3)?;
    Ok(PairAmalgam {
        base: pp0.clone(),
        sides: [pp1.clone(), pp2.clone()],
        join,
        pair,
    })
}

impl PairAmalgam {
    pub fn pair(&self) -> &ProjectionPairStructure {
        &self.pair
    }

    pub fn join(&self) -> &AmalgamEmbedding {
        &self.join
    }

    pub fn side(&self, i: usize) -> &ProjectionPairStructure {
        &self.sides[i]
    }

    pub fn base(&self) -> &ProjectionPairStructure {
        &self.base
    }

    /// `v = u_0 + u_1 + u_2` with `u_0` in the base image and `u_i` in the
    /// residue of side `i` over it, all in joint coordinates.
    pub fn decompose(
        &self,
        v: &RationalVector,
    ) -> Result<(RationalVector, RationalVector, RationalVector)> {
        self.pair.check_member(v)?;
        let u0 = self.join.base_image().project_unchecked(v);
        let u1 = self.join.residue(0).project_unchecked(v);
        let u2 = self.join.residue(1).project_unchecked(v);
        debug_assert_eq!(&(&u0 + &u1) + &u2, *v);
        Ok((u0, u1, u2))
    }

    /// `P_0 u_0 + P_1 u_1 + P_2 u_2`, each projection taken in its own
    /// structure and mapped back into joint coordinates.
    pub fn formula_projection(&self, v: &RationalVector) -> Result<RationalVector> {
        let (u0, u1, u2) = self.decompose(v)?;
        let base_emb = self.join.base_embedding();
        let h = base_emb.pullback(&u0)?.expect("u0 lies in the base image");
        let mut out = base_emb.apply(&self.base.project(&h)?)?;
        for (i, u) in [u1, u2].iter().enumerate() {
            let m = self.join.map(i);
            let w = m.pullback(u)?.expect("residue lies in the side image");
            out = &out + &m.apply(&self.sides[i].project(&w)?)?;
        }
        Ok(out)
    }

    /// `P_1(v_1) + P_2(v_2)` in joint coordinates, for `v_i` in side `i`.
    pub fn split_projection(&self, v1: &RationalVector, v2: &RationalVector) -> Result<RationalVector> {
        let a = self.join.map(0).apply(&self.sides[0].project(v1)?)?;
        let b = self.join.map(1).apply(&self.sides[1].project(v2)?)?;
        Ok(&a + &b)
    }

    /// `emb_1(v_1) + emb_2(v_2)`.
    pub fn combine(&self, v1: &RationalVector, v2: &RationalVector) -> Result<RationalVector> {
        Ok(&self.join.map(0).apply(v1)? + &self.join.map(1).apply(v2)?)
    }

    pub fn certify(&self, extra_probes: &[RationalVector]) -> Result<PairAmalgamCertificate> {
        let mut restriction = [true; 2];
        for (i, side) in self.sides.iter().enumerate() {
            let m = self.join.map(i);
            for b in side.space.basis() {
                let direct = self.pair.project(&m.apply(b)?)?;
                let via_side = m.apply(&side.g.project_unchecked(b))?;
                restriction[i] &= direct == via_side;
            }
        }
        let mut formula = true;
        let mut probes_checked = 0;
        for v in self.pair.space.basis().iter().chain(extra_probes) {
            probes_checked += 1;
            formula &= self.formula_projection(v)? == self.pair.project(v)?;
        }
        Ok(PairAmalgamCertificate {
            join: self.join.certify(),
            axioms: self.pair.certify_axioms(),
            restriction,
            formula,
            probes_checked,
        })
    }
}

/// Gram data of the projections and of the residues of a tuple. In a rich
/// model two tuples have the same type iff these agree.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PairType {
    pub projections: GramMatrix,
    pub residues: GramMatrix,
}

pub fn pair_type(tuple: &[RationalVector], pp: &ProjectionPairStructure) -> Result<PairType> {
    let mut proj = Vec::with_capacity(tuple.len());
    let mut res = Vec::with_capacity(tuple.len());
    for a in tuple {
        let pa = pp.project(a)?;
        res.push(a - &pa);
        proj.push(pa);
    }
    Ok(PairType {
        projections: gram_of_tuple(&proj)?,
        residues: gram_of_tuple(&res)?,
    })
}

pub fn pair_types_equal(
    a: &[RationalVector],
    b: &[RationalVector],
    pp: &ProjectionPairStructure,
) -> Result<bool> {
    Ok(pair_type(a, pp)? == pair_type(b, pp)?)
}

fn with_projections(a: &[RationalVector], pp: &ProjectionPairStructure) -> Result<Vec<RationalVector>> {
    let mut out = a.to_vec();
    for x in a {
        out.push(pp.project(x)?);
    }
    Ok(out)
}

/// `span(A ∪ P(A))`.
pub fn pair_dcl(a: &[RationalVector], pp: &ProjectionPairStructure) -> Result<Subspace> {
    Subspace::span(pp.ambient_dim(), &with_projections(a, pp)?)
}

/// Non-dividing of `A ∪ P(A)` from `B ∪ P(B)` over `span(C ∪ P(C))`.
pub fn pair_independent(
    a: &[RationalVector],
    b: &[RationalVector],
    c: &[RationalVector],
    pp: &ProjectionPairStructure,
) -> Result<bool> {
    let base = pair_dcl(c, pp)?;
    let verdict = non_dividing(&with_projections(a, pp)?, &with_projections(b, pp)?, &base)?;
    Ok(verdict.independent)
}

/// Level-`n` stand-in for "infinitely many orthonormal vectors on each side":
/// `dim G ≥ n` and `dim(space ⊖ G) ≥ n`.
pub fn check_tp_omega_witnesses(pp: &ProjectionPairStructure, n: usize) -> bool {
    pp.g.dim() >= n && pp.space.dim() - pp.g.dim() >= n
}
