//! Seeded generators of random instances for the fuzz suites.
//!
//! Every instance is built so that its preconditions hold exactly (true
//! substructures, compatible projections, independence where requested);
//! what is left to check is the arithmetic of the operations under test.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::blacksets::BlackSetStructure;
use crate::error::Result;
use crate::linalg::{Embedding, RationalVector, Subspace};
use crate::pairs::ProjectionPairStructure;
use crate::rational::{int, ratio, Rational};

pub type FuzzRng = ChaCha8Rng;

pub fn rng(seed: u64) -> FuzzRng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Size limits for generated instances.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct FuzzBounds {
    /// Largest joint dimension of an amalgam.
    pub max_dim: usize,
    /// Largest black set of an amalgam.
    pub max_blacks: usize,
    /// Largest denominator of a generated coordinate.
    pub max_den: i64,
}

impl Default for FuzzBounds {
    fn default() -> Self {
        Self {
            max_dim: 6,
            max_blacks: 8,
            max_den: 4,
        }
    }
}

/// `p/q` with `1 <= q <= max_den` and `|p/q| <= 2`.
pub fn rational(rng: &mut FuzzRng, max_den: i64) -> Rational {
    let q = rng.random_range(1..=max_den.max(1));
    let p = rng.random_range(-2 * q..=2 * q);
    ratio(p, q)
}

pub fn coords(rng: &mut FuzzRng, n: usize, max_den: i64) -> Vec<Rational> {
    (0..n).map(|_| rational(rng, max_den)).collect()
}

pub fn vector(rng: &mut FuzzRng, dim: usize, max_den: i64) -> RationalVector {
    RationalVector::new(coords(rng, dim, max_den)).expect("positive dimension")
}

/// A random element of `s`, as a rational combination of its basis.
pub fn point_in(rng: &mut FuzzRng, s: &Subspace, max_den: i64) -> RationalVector {
    let mut out = RationalVector::zeros(s.ambient_dim());
    for b in s.basis() {
        out = &out + &b.scale(&rational(rng, max_den));
    }
    out
}

/// Span of `count` random vectors of `Q^dim`.
pub fn subspace(rng: &mut FuzzRng, dim: usize, count: usize, max_den: i64) -> Subspace {
    let gens: Vec<RationalVector> = (0..count).map(|_| vector(rng, dim, max_den)).collect();
    Subspace::span(dim, &gens).expect("positive dimension")
}

/// Residue coordinates with squared norm at least 1: one coordinate is a
/// nonzero integer.
fn long_residue(rng: &mut FuzzRng, n: usize, max_den: i64) -> Vec<Rational> {
    let mut r = coords(rng, n, max_den);
    let i = rng.random_range(0..n);
    let k = rng.random_range(1..=2);
    r[i] = int(if rng.random_bool(0.5) { k } else { -k });
    r
}

/// A side of a generated amalgam: `Q^{d0 + r}` with the base placed in the
/// first `d0` coordinates and then moved by a random signed permutation.
#[derive(Clone, Debug)]
struct SideFrame {
    dim: usize,
    perm: Vec<usize>,
    signs: Vec<bool>,
}

impl SideFrame {
    fn new(rng: &mut FuzzRng, d0: usize, r: usize, shuffle: bool) -> Self {
        let dim = d0 + r;
        let mut perm: Vec<usize> = (0..dim).collect();
        let mut signs = vec![false; dim];
        if shuffle {
            perm.shuffle(rng);
            for s in &mut signs {
                *s = rng.random_bool(0.5);
            }
        }
        Self { dim, perm, signs }
    }

    /// Side point with base part `p` and residue part `r`.
    fn point(&self, p: &[Rational], r: &[Rational]) -> RationalVector {
        let mut c = p.to_vec();
        c.extend_from_slice(r);
        c.resize(self.dim, int(0));
        RationalVector::new(c)
            .expect("positive dimension")
            .signed_permute(&self.perm, &self.signs)
    }

    fn embedding(&self, base: &Subspace, d0: usize) -> Result<Embedding> {
        Embedding::from_linear_map(base, self.dim, |v| self.point(&v.coords()[..d0], &[]))
    }

    fn residue(&self, d0: usize) -> Subspace {
        let gens: Vec<RationalVector> = (d0..self.dim)
            .map(|i| RationalVector::unit(self.dim, i).signed_permute(&self.perm, &self.signs))
            .collect();
        Subspace::span(self.dim, &gens).expect("positive dimension")
    }
}

/// Three black-set structures with `base` a substructure of both sides.
#[derive(Clone, Debug)]
pub struct BlacksetInstance {
    pub base: BlackSetStructure,
    pub s1: BlackSetStructure,
    pub s2: BlackSetStructure,
    pub emb1: Embedding,
    pub emb2: Embedding,
}

fn split_dims(rng: &mut FuzzRng, max_dim: usize) -> (usize, usize, usize) {
    let max_dim = max_dim.max(2);
    let d0 = rng.random_range(0..=(max_dim - 2).min(2));
    let r1 = rng.random_range(1..=max_dim - d0 - 1);
    let r2 = rng.random_range(1..=max_dim - d0 - r1);
    (d0, r1, r2)
}

/// New side blacks are `p + r` with either `p ∈ N_0`, or `‖r‖² ≥ 1` and `p`
/// arbitrary in the base; both keep the base a substructure.
pub fn blackset_instance(rng: &mut FuzzRng, bounds: &FuzzBounds) -> Result<BlacksetInstance> {
    let (d0, r1, r2) = split_dims(rng, bounds.max_dim);
    let den = bounds.max_den;
    let max_blacks = bounds.max_blacks.max(1);

    let mut base_pts: Vec<Vec<Rational>> = Vec::new();
    if rng.random_bool(0.7) {
        base_pts.push(vec![int(0); d0]);
    }
    if d0 > 0 {
        let extra = rng.random_range(0..=2.min(max_blacks - base_pts.len().min(max_blacks)));
        for _ in 0..extra {
            base_pts.push(coords(rng, d0, den));
        }
    }
    base_pts.dedup();
    let base_space = if d0 == 0 { Subspace::zero(1)? } else { Subspace::full(d0)? };
    let base_blacks = base_pts
        .iter()
        .map(|p| {
            if d0 == 0 {
                RationalVector::zeros(1)
            } else {
                RationalVector::new(p.clone()).expect("positive dimension")
            }
        })
        .collect();
    let base = BlackSetStructure::new(base_space.clone(), base_blacks)?;

    let budget = max_blacks.saturating_sub(base_pts.len());
    let new1 = rng.random_range(0..=budget);
    let new2 = rng.random_range(0..=budget - new1);
    let shuffle = rng.random_bool(0.5);
    let mut sides = Vec::new();
    for (r, new) in [(r1, new1), (r2, new2)] {
        let frame = SideFrame::new(rng, d0, r, shuffle);
        let mut blacks: Vec<RationalVector> = base_pts.iter().map(|p| frame.point(p, &[])).collect();
        for _ in 0..new {
            let (p, res) = if !base_pts.is_empty() && rng.random_bool(0.5) {
                let p = base_pts[rng.random_range(0..base_pts.len())].clone();
                (p, coords(rng, r, den))
            } else {
                (coords(rng, d0, den), long_residue(rng, r, den))
            };
            blacks.push(frame.point(&p, &res));
        }
        let s = BlackSetStructure::new(Subspace::full(frame.dim)?, blacks)?;
        let emb = frame.embedding(&base_space, d0)?;
        sides.push((s, emb));
    }
    let (s2, emb2) = sides.pop().expect("two sides");
    let (s1, emb1) = sides.pop().expect("two sides");
    Ok(BlacksetInstance {
        base,
        s1,
        s2,
        emb1,
        emb2,
    })
}

/// Three pairs with `pp0` a sub-pair of both sides: side `G_i` is the
/// embedded `G_0` plus random directions inside the side's residue.
#[derive(Clone, Debug)]
pub struct PairInstance {
    pub pp0: ProjectionPairStructure,
    pub pp1: ProjectionPairStructure,
    pub pp2: ProjectionPairStructure,
    pub emb1: Embedding,
    pub emb2: Embedding,
}

pub fn pair_instance(rng: &mut FuzzRng, bounds: &FuzzBounds) -> Result<PairInstance> {
    let (d0, r1, r2) = split_dims(rng, bounds.max_dim);
    let den = bounds.max_den;
    let (base_space, g0) = if d0 == 0 {
        (Subspace::zero(1)?, Subspace::zero(1)?)
    } else {
        let g = rng.random_range(0..=d0);
        (Subspace::full(d0)?, subspace(rng, d0, g, den))
    };
    let pp0 = ProjectionPairStructure::new(base_space.clone(), g0.clone())?;
    let shuffle = rng.random_bool(0.5);
    let mut sides = Vec::new();
    for r in [r1, r2] {
        let frame = SideFrame::new(rng, d0, r, shuffle);
        let emb = frame.embedding(&base_space, d0)?;
        let residue = frame.residue(d0);
        let mut gens: Vec<RationalVector> = g0
            .basis()
            .iter()
            .map(|g| emb.apply(g))
            .collect::<Result<_>>()?;
        for _ in 0..rng.random_range(0..=r) {
            gens.push(point_in(rng, &residue, den));
        }
        let g = Subspace::span(frame.dim, &gens)?;
        sides.push((ProjectionPairStructure::new(Subspace::full(frame.dim)?, g)?, emb));
    }
    let (pp2, emb2) = sides.pop().expect("two sides");
    let (pp1, emb1) = sides.pop().expect("two sides");
    Ok(PairInstance {
        pp0,
        pp1,
        pp2,
        emb1,
        emb2,
    })
}

/// Sets `A`, `B` and a base `C` in a common space; `independent` records
/// whether `B` was built independent from `A` over `C`.
#[derive(Clone, Debug)]
pub struct IndependenceInstance {
    pub dim: usize,
    pub a: Vec<RationalVector>,
    pub b: Vec<RationalVector>,
    pub c: Subspace,
    pub independent: bool,
}

/// With probability one half, `B` is replaced by `B − P_R(B)` where `R` is
/// the span of the residues of `A` over `C`, which forces independence.
pub fn independence_instance(rng: &mut FuzzRng, bounds: &FuzzBounds) -> Result<IndependenceInstance> {
    let dim = rng.random_range(2..=bounds.max_dim.max(2));
    let den = bounds.max_den;
    let c_gens = rng.random_range(0..dim);
    let c = subspace(rng, dim, c_gens, den);
    let a: Vec<RationalVector> = (0..rng.random_range(1..=3)).map(|_| vector(rng, dim, den)).collect();
    let mut b: Vec<RationalVector> = (0..rng.random_range(1..=3)).map(|_| vector(rng, dim, den)).collect();
    let independent = rng.random_bool(0.5);
    if independent {
        let res: Vec<RationalVector> = a.iter().map(|x| c.residue_unchecked(x)).collect();
        let r = Subspace::span(dim, &res)?;
        b = b.iter().map(|x| r.residue_unchecked(x)).collect();
    }
    Ok(IndependenceInstance {
        dim,
        a,
        b,
        c,
        independent,
    })
}

/// Nested closures `C ⊆ BC ⊆ BCD` and `C ⊆ X` for the transitivity check.
#[derive(Clone, Debug)]
pub struct NestedClosures {
    pub x: Subspace,
    pub c: Subspace,
    pub bc: Subspace,
    pub bcd: Subspace,
}

pub fn nested_closures(rng: &mut FuzzRng, bounds: &FuzzBounds) -> Result<NestedClosures> {
    let dim = rng.random_range(2..=bounds.max_dim.max(2));
    let den = bounds.max_den;
    let k = rng.random_range(0..dim);
    let c = subspace(rng, dim, k, den);
    let grow = |rng: &mut FuzzRng, s: &Subspace| -> Result<Subspace> {
        let k = rng.random_range(0..=2);
        s.sum(&subspace(rng, dim, k, den))
    };
    let bc = grow(rng, &c)?;
    let bcd = grow(rng, &bc)?;
    let x = if rng.random_bool(0.5) {
        grow(rng, &c)?
    } else {
        // independent of BCD over C by construction
        let fresh = bcd.sum(&subspace(rng, dim, 1, den))?.relative_complement(&bcd)?;
        c.sum(&fresh)?
    };
    Ok(NestedClosures { x, c, bc, bcd })
}

/// Closures `A' = C ⊕ R_A` and `B' = C ⊕ R_B` with `R_A ⊥ R_B ⊥ C`, hence
/// independent over `C`, together with random sub-closures `C ⊆ A ⊆ A'` and
/// `C ⊆ B ⊆ B'`.
#[derive(Clone, Debug)]
pub struct MonotoneInstance {
    pub c: Subspace,
    pub a_big: Subspace,
    pub b_big: Subspace,
    pub a_small: Subspace,
    pub b_small: Subspace,
}

pub fn monotone_instance(rng: &mut FuzzRng, bounds: &FuzzBounds) -> Result<MonotoneInstance> {
    let dim = rng.random_range(3..=bounds.max_dim.max(3));
    let den = bounds.max_den;
    let k = rng.random_range(0..dim - 1);
    let c = subspace(rng, dim, k, den);
    let orth = |rng: &mut FuzzRng, s: &Subspace, k: usize| -> Result<Subspace> {
        s.sum(&subspace(rng, dim, k, den))?.relative_complement(s)
    };
    let (ka, kb) = (rng.random_range(0..=2), rng.random_range(0..=2));
    let ra = orth(rng, &c, ka)?;
    let rb = orth(rng, &c.sum(&ra)?, kb)?;
    let a_big = c.sum(&ra)?;
    let b_big = c.sum(&rb)?;
    let pick = |rng: &mut FuzzRng, r: &Subspace| -> Result<Subspace> {
        let k = rng.random_range(0..=r.dim());
        let gens: Vec<RationalVector> = (0..k).map(|_| point_in(rng, r, den)).collect();
        c.sum(&Subspace::span(dim, &gens)?)
    };
    let a_small = pick(rng, &ra)?;
    let b_small = pick(rng, &rb)?;
    Ok(MonotoneInstance {
        c,
        a_big,
        b_big,
        a_small,
        b_small,
    })
}

/// A hand-picked dependent margin instance: `A`, `big`, `small`.
#[derive(Clone, Debug)]
pub struct MarginCase {
    pub a: Vec<RationalVector>,
    pub big: Subspace,
    pub small: Subspace,
}

/// Dependent instances whose residue inner products all have magnitude at
/// least `1/4`.
pub fn curated_dependent_margins() -> Vec<MarginCase> {
    let v = RationalVector::from_ratios;
    let e = |d, i| RationalVector::unit(d, i);
    let sp = |d, g: &[RationalVector]| Subspace::span(d, g).expect("positive dimension");
    vec![
        MarginCase {
            a: vec![v(&[(1, 1), (0, 1), (1, 1)])],
            big: sp(3, &[e(3, 0), e(3, 2)]),
            small: sp(3, &[e(3, 0)]),
        },
        MarginCase {
            a: vec![v(&[(0, 1), (1, 1), (1, 2)])],
            big: sp(3, &[e(3, 0), e(3, 2)]),
            small: sp(3, &[e(3, 0)]),
        },
        MarginCase {
            a: vec![v(&[(1, 2), (1, 2), (1, 2), (1, 2)])],
            big: sp(4, &[e(4, 0), e(4, 1), e(4, 2)]),
            small: sp(4, &[e(4, 0)]),
        },
        MarginCase {
            a: vec![v(&[(1, 1), (1, 1), (0, 1)]), v(&[(0, 1), (1, 2), (1, 1)])],
            big: sp(3, &[e(3, 0), e(3, 1)]),
            small: sp(3, &[e(3, 0)]),
        },
        MarginCase {
            a: vec![v(&[(1, 1), (1, 1), (1, 1)])],
            big: Subspace::full(3).expect("positive dimension"),
            small: sp(3, &[v(&[(1, 1), (-1, 1), (0, 1)])]),
        },
        MarginCase {
            a: vec![v(&[(1, 1), (1, 4), (0, 1), (0, 1)])],
            big: sp(4, &[e(4, 1), e(4, 3)]),
            small: sp(4, &[e(4, 3)]),
        },
        MarginCase {
            a: vec![v(&[(2, 1), (1, 1), (-1, 1), (3, 1), (0, 1)])],
            big: sp(5, &[e(5, 0), e(5, 1), v(&[(0, 1), (0, 1), (1, 1), (1, 1), (0, 1)])]),
            small: sp(5, &[e(5, 0)]),
        },
        MarginCase {
            a: vec![v(&[(1, 1), (1, 1), (0, 1), (0, 1), (0, 1), (1, 1)])],
            big: sp(6, &[e(6, 1), e(6, 5), e(6, 3)]),
            small: sp(6, &[e(6, 3)]),
        },
    ]
}

/// An exact-branch perturbation input: a base, a point whose residue over
/// it has rational norm, and a `δ′²` that is the square of a rational.
#[derive(Clone, Debug)]
pub struct PerturbationInstance {
    pub base: Subspace,
    pub c: RationalVector,
    pub delta_prime_sq: Rational,
}

const PYTHAGOREAN: [(i64, i64, i64); 4] = [(3, 4, 5), (5, 12, 13), (8, 15, 17), (0, 1, 1)];

pub fn perturbation_instance(rng: &mut FuzzRng, bounds: &FuzzBounds) -> PerturbationInstance {
    let dim = rng.random_range(3..=bounds.max_dim.max(3));
    let den = bounds.max_den;
    let d0 = rng.random_range(0..=dim - 2);
    let base_gens: Vec<RationalVector> = (0..d0).map(|i| RationalVector::unit(dim, i)).collect();
    let base = Subspace::span(dim, &base_gens).expect("positive dimension");
    let (x, y, _) = PYTHAGOREAN[rng.random_range(0..PYTHAGOREAN.len())];
    let s = rational(rng, den);
    let s = if s == int(0) { int(1) } else { s };
    let mut c = coords(rng, dim, den);
    for ci in c.iter_mut().skip(d0) {
        *ci = int(0);
    }
    let (i, j) = (d0, d0 + 1);
    c[i] = &s * int(x);
    c[j] = &s * int(y);
    let t = rational(rng, den);
    PerturbationInstance {
        base,
        c: RationalVector::new(c).expect("positive dimension"),
        delta_prime_sq: &t * &t,
    }
}
