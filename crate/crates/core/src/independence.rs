//! Non-dividing independence in pure Hilbert spaces, its closure-level
//! variant, and the norm-sum forking margin.
//!
//! In a Hilbert space, `A` is independent from `B` over a closed subspace
//! `C` exactly when the residues `a - P_C a` and `b - P_C b` are orthogonal
//! for all `a ∈ A`, `b ∈ B`. Independence is trivial: it holds for a set iff
//! it holds for each of its elements.
//!
//! The expanded-language closures (`acl_N`) are not computable from a finite
//! presentation, so [`star_independent`] takes the three closures from the
//! caller. Plain spans give Hilbert-space independence; spans augmented by
//! unique nearest black points (see
//! [`DistanceCertificate`](crate::blacksets::DistanceCertificate)) give the
//! finite approximation of the expanded closure.

use num_traits::Zero;

use crate::error::{Error, Result};
use crate::linalg::{RationalVector, Subspace};
use crate::rational::{sqrt_f64, Rational};

/// Tolerance for the decimal forking margin.
pub const MARGIN_TOLERANCE: f64 = 1e-9;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Violation {
    pub a_index: usize,
    pub b_index: usize,
    pub a: RationalVector,
    pub b: RationalVector,
    /// Nonzero inner product of the two residues.
    pub inner: Rational,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IndependenceVerdict {
    pub independent: bool,
    pub violations: Vec<Violation>,
}

impl IndependenceVerdict {
    fn from_violations(violations: Vec<Violation>) -> Self {
        Self {
            independent: violations.is_empty(),
            violations,
        }
    }
}

fn check_dims(vectors: &[RationalVector], dim: usize) -> Result<()> {
    vectors.iter().try_for_each(|v| v.check_dim(dim))
}

/// Residue-orthogonality test for `A` against `B` over `C`.
pub fn non_dividing(
    a: &[RationalVector],
    b: &[RationalVector],
    c: &Subspace,
) -> Result<IndependenceVerdict> {
    let dim = c.ambient_dim();
    check_dims(a, dim)?;
    check_dims(b, dim)?;
    let b_res: Vec<RationalVector> = b.iter().map(|x| c.residue_unchecked(x)).collect();
    let mut violations = Vec::new();
    for (i, x) in a.iter().enumerate() {
        let r = c.residue_unchecked(x);
        for (j, s) in b_res.iter().enumerate() {
            let ip = r.dot(s);
            if !ip.is_zero() {
                violations.push(Violation {
                    a_index: i,
                    b_index: j,
                    a: x.clone(),
                    b: b[j].clone(),
                    inner: ip,
                });
            }
        }
    }
    Ok(IndependenceVerdict::from_violations(violations))
}

/// Closure-level independence: for every basis vector `a` of `a_closure`,
/// `P_{b_closure}(a) = P_{c_closure}(a)`.
///
/// Violations pair the offending `a` with a basis vector of
/// `b_closure ⊖ c_closure` it is not orthogonal to.
pub fn star_independent(
    a_closure: &Subspace,
    b_closure: &Subspace,
    c_closure: &Subspace,
) -> Result<IndependenceVerdict> {
    if !a_closure.contains_subspace(c_closure)? || !b_closure.contains_subspace(c_closure)? {
        return Err(Error::NotContained {
            what: "base closure".into(),
            container: "both side closures",
        });
    }
    let fresh = b_closure.relative_complement(c_closure)?;
    let mut violations = Vec::new();
    for (i, a) in a_closure.basis().iter().enumerate() {
        if b_closure.project_unchecked(a) == c_closure.project_unchecked(a) {
            continue;
        }
        for (j, b) in fresh.basis().iter().enumerate() {
            let ip = a.dot(b);
            if !ip.is_zero() {
                violations.push(Violation {
                    a_index: i,
                    b_index: j,
                    a: a.clone(),
                    b: b.clone(),
                    inner: ip,
                });
            }
        }
    }
    Ok(IndependenceVerdict::from_violations(violations))
}

/// `Σ ‖P_big a‖ − Σ ‖P_small a‖` over `a ∈ A`, for `small ⊆ big`.
///
/// Terms whose squared norms agree exactly contribute exactly zero; the rest
/// are evaluated in `f64` from the exact squared norms.
pub fn forking_margin(a: &[RationalVector], big: &Subspace, small: &Subspace) -> Result<f64> {
    if !big.contains_subspace(small)? {
        return Err(Error::NotContained {
            what: "small subspace".into(),
            container: "the big subspace",
        });
    }
    check_dims(a, big.ambient_dim())?;
    let mut margin = 0.0;
    for x in a {
        let big_sq = big.project_unchecked(x).norm_sq();
        let small_sq = small.project_unchecked(x).norm_sq();
        if big_sq != small_sq {
            margin += sqrt_f64(&big_sq) - sqrt_f64(&small_sq);
        }
    }
    Ok(margin)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::int;

    fn e(i: usize) -> RationalVector {
        RationalVector::unit(4, i)
    }

    fn sp(v: &[RationalVector]) -> Subspace {
        Subspace::span(4, v).unwrap()
    }

    #[test]
    fn residues_orthogonal_means_independent() {
        let verdict = non_dividing(&[&e(0) + &e(1)], &[&e(0) + &e(2)], &sp(&[e(0)])).unwrap();
        assert!(verdict.independent);
        assert!(verdict.violations.is_empty());
    }

    #[test]
    fn shared_residue_is_dependent() {
        let x = &e(0) + &e(1);
        let verdict = non_dividing(&[x.clone()], &[x], &sp(&[e(0)])).unwrap();
        assert!(!verdict.independent);
        assert_eq!(verdict.violations.len(), 1);
        assert_eq!(verdict.violations[0].inner, int(1));
    }

    #[test]
    fn base_members_are_independent_of_everything() {
        let c = sp(&[e(0), e(1)]);
        let verdict = non_dividing(&[&e(1) + &e(2)], &[&e(0) + &e(1)], &c);
        assert!(verdict.unwrap().independent);
    }

    #[test]
    fn star_independence_examples() {
        let c = sp(&[e(0)]);
        let v = star_independent(&sp(&[e(0), e(1)]), &sp(&[e(0), e(2)]), &c).unwrap();
        assert!(v.independent);

        let ab = sp(&[e(0), e(1)]);
        let v = star_independent(&ab, &ab, &c).unwrap();
        assert!(!v.independent);
        assert_eq!(v.violations[0].a, e(1));

        // existence over models: a_closure = c_closure
        let m = sp(&[e(0), e(3)]);
        assert!(star_independent(&m, &sp(&[e(0), e(3), e(1)]), &m).unwrap().independent);

        assert!(star_independent(&sp(&[e(1)]), &ab, &c).is_err());
    }

    #[test]
    fn margins() {
        let big = sp(&[e(0), e(2)]);
        let small = sp(&[e(0)]);
        assert_eq!(forking_margin(&[&e(0) + &e(1)], &big, &small).unwrap(), 0.0);
        let m = forking_margin(&[&e(0) + &e(2)], &big, &small).unwrap();
        assert!((m - (2f64.sqrt() - 1.0)).abs() < MARGIN_TOLERANCE);
        assert!((m - 0.41421356).abs() < 1e-8);
        assert_eq!(forking_margin(&[], &big, &small).unwrap(), 0.0);
        assert!(forking_margin(&[], &small, &big).is_err());
    }
}
