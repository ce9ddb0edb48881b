use num_traits::Zero;

use super::vector::RationalVector;
use crate::error::{Error, Result};
use crate::rational::Rational;

/// A subspace of `Q^ambient_dim` presented by a pairwise-orthogonal basis of
/// nonzero vectors.
///
/// Basis vectors are kept as primitive integer vectors and are never
/// normalized, so projections stay rational:
/// `P(v) = sum_i <v,b_i>/<b_i,b_i> b_i`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Subspace {
    ambient_dim: usize,
    basis: Vec<RationalVector>,
}

impl Subspace {
    pub fn zero(ambient_dim: usize) -> Result<Self> {
        if ambient_dim == 0 {
            return Err(Error::EmptyAmbient);
        }
        Ok(Self {
            ambient_dim,
            basis: Vec::new(),
        })
    }

    /// The whole of `Q^ambient_dim`, with the standard basis.
    pub fn full(ambient_dim: usize) -> Result<Self> {
        if ambient_dim == 0 {
            return Err(Error::EmptyAmbient);
        }
        Ok(Self {
            ambient_dim,
            basis: (0..ambient_dim)
                .map(|i| RationalVector::unit(ambient_dim, i))
                .collect(),
        })
    }

    /// Linear span of `vectors`, orthogonalized by Gram-Schmidt without
    /// normalization. Each new direction is rescaled to a primitive integer
    /// vector before it is used against later inputs.
    pub fn span(ambient_dim: usize, vectors: &[RationalVector]) -> Result<Self> {
        let mut s = Self::zero(ambient_dim)?;
        for v in vectors {
            v.check_dim(ambient_dim)?;
            s.push(v);
        }
        Ok(s)
    }

    /// Wraps an already orthogonal basis after checking it exactly.
    pub fn from_orthogonal_basis(ambient_dim: usize, basis: Vec<RationalVector>) -> Result<Self> {
        if ambient_dim == 0 {
            return Err(Error::EmptyAmbient);
        }
        for (i, b) in basis.iter().enumerate() {
            b.check_dim(ambient_dim)?;
            if b.is_zero() {
                return Err(Error::NotContained {
                    what: format!("zero vector at basis position {i}"),
                    container: "a basis",
                });
            }
            for (j, c) in basis.iter().enumerate().take(i) {
                if !b.dot(c).is_zero() {
                    return Err(Error::NotOrthogonal(j, i));
                }
            }
        }
        Ok(Self { ambient_dim, basis })
    }

    fn push(&mut self, v: &RationalVector) {
        let residue = self.residue_unchecked(v);
        if !residue.is_zero() {
            self.basis.push(residue.clear_denominators());
        }
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient_dim
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn basis(&self) -> &[RationalVector] {
        &self.basis
    }

    pub fn is_zero(&self) -> bool {
        self.basis.is_empty()
    }

    /// Coefficients of the projection of `v` on each basis vector.
    pub(crate) fn coefficients_unchecked(&self, v: &RationalVector) -> Vec<Rational> {
        self.basis
            .iter()
            .map(|b| v.dot(b) / b.norm_sq())
            .collect()
    }

    pub(crate) fn project_unchecked(&self, v: &RationalVector) -> RationalVector {
        let mut out = RationalVector::zeros(self.ambient_dim);
        for b in &self.basis {
            let c = v.dot(b);
            if !c.is_zero() {
                out.add_scaled(&(c / b.norm_sq()), b);
            }
        }
        out
    }

    pub(crate) fn residue_unchecked(&self, v: &RationalVector) -> RationalVector {
        v - &self.project_unchecked(v)
    }

    pub(crate) fn contains_unchecked(&self, v: &RationalVector) -> bool {
        self.residue_unchecked(v).is_zero()
    }

    pub fn project(&self, v: &RationalVector) -> Result<RationalVector> {
        v.check_dim(self.ambient_dim)?;
        Ok(self.project_unchecked(v))
    }

    /// Splits `v` into its projection onto `self` and the orthogonal residue.
    pub fn decompose(&self, v: &RationalVector) -> Result<(RationalVector, RationalVector)> {
        let proj = self.project(v)?;
        let residue = v - &proj;
        Ok((proj, residue))
    }

    pub fn contains(&self, v: &RationalVector) -> Result<bool> {
        v.check_dim(self.ambient_dim)?;
        Ok(self.contains_unchecked(v))
    }

    pub fn contains_subspace(&self, other: &Subspace) -> Result<bool> {
        self.check_same_ambient(other)?;
        Ok(other.basis.iter().all(|b| self.contains_unchecked(b)))
    }

    /// Equality as sets: same ambient space and mutual containment.
    pub fn same_as(&self, other: &Subspace) -> bool {
        self.ambient_dim == other.ambient_dim
            && self.dim() == other.dim()
            && other.basis.iter().all(|b| self.contains_unchecked(b))
    }

    pub fn is_orthogonal_to(&self, other: &Subspace) -> Result<bool> {
        self.check_same_ambient(other)?;
        Ok(self
            .basis
            .iter()
            .all(|a| other.basis.iter().all(|b| a.dot(b).is_zero())))
    }

    /// `span(self ∪ other)`.
    pub fn sum(&self, other: &Subspace) -> Result<Subspace> {
        self.check_same_ambient(other)?;
        let mut s = self.clone();
        for b in &other.basis {
            s.push(b);
        }
        Ok(s)
    }

    /// `self ∩ small^⊥`, for `small ⊆ self`.
    pub fn relative_complement(&self, small: &Subspace) -> Result<Subspace> {
        if !self.contains_subspace(small)? {
            return Err(Error::NotContained {
                what: "subspace".into(),
                container: "the larger subspace",
            });
        }
        let residues: Vec<RationalVector> = self
            .basis
            .iter()
            .map(|b| small.residue_unchecked(b))
            .collect();
        let out = Subspace::span(self.ambient_dim, &residues)?;
        debug_assert_eq!(out.dim() + small.dim(), self.dim());
        Ok(out)
    }

    fn check_same_ambient(&self, other: &Subspace) -> Result<()> {
        if self.ambient_dim == other.ambient_dim {
            Ok(())
        } else {
            Err(Error::DimensionMismatch {
                expected: self.ambient_dim,
                found: other.ambient_dim,
            })
        }
    }
}

/// Orthogonal rational basis of the span of `vectors` in `Q^ambient_dim`.
pub fn span(ambient_dim: usize, vectors: &[RationalVector]) -> Result<Subspace> {
    Subspace::span(ambient_dim, vectors)
}

/// `(P_S v, v - P_S v)`.
pub fn project_decompose(
    v: &RationalVector,
    s: &Subspace,
) -> Result<(RationalVector, RationalVector)> {
    s.decompose(v)
}

/// `big ∩ small^⊥`, checked to satisfy `dim(result) + dim(small) = dim(big)`.
pub fn relative_complement(big: &Subspace, small: &Subspace) -> Result<Subspace> {
    big.relative_complement(small)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::int;

    fn v(x: &[i64]) -> RationalVector {
        RationalVector::from_ints(x)
    }

    #[test]
    fn collinear_inputs_collapse() {
        let s = span(2, &[v(&[1, 0]), v(&[2, 0])]).unwrap();
        assert_eq!(s.basis(), &[v(&[1, 0])]);
    }

    #[test]
    fn empty_span_and_empty_ambient() {
        assert_eq!(span(3, &[]).unwrap().dim(), 0);
        assert_eq!(span(0, &[]), Err(Error::EmptyAmbient));
    }

    #[test]
    fn span_of_two_skew_vectors() {
        let inputs = [v(&[1, 1, 0]), v(&[0, 1, 1])];
        let s = span(3, &inputs).unwrap();
        assert_eq!(s.basis(), &[v(&[1, 1, 0]), v(&[-1, 1, 2])]);
        assert!(s.basis()[0].dot(&s.basis()[1]).is_zero());
        for x in &inputs {
            assert!(s.contains(x).unwrap());
        }
    }

    #[test]
    fn projection_onto_plane() {
        let s = span(3, &[v(&[1, 1, 0]), v(&[0, 1, 1])]).unwrap();
        let (proj, residue) = project_decompose(&v(&[1, 2, 3]), &s).unwrap();
        assert_eq!(
            proj,
            RationalVector::from_ratios(&[(1, 3), (8, 3), (7, 3)])
        );
        assert_eq!(
            residue,
            RationalVector::from_ratios(&[(2, 3), (-2, 3), (2, 3)])
        );
        for b in s.basis() {
            assert_eq!(residue.dot(b), int(0));
        }
    }

    #[test]
    fn projection_of_members_and_orthogonal_vectors() {
        let s = span(3, &[v(&[1, 1, 0])]).unwrap();
        let m = v(&[2, 2, 0]);
        assert_eq!(s.decompose(&m).unwrap(), (m.clone(), RationalVector::zeros(3)));
        let o = v(&[1, -1, 5]);
        assert_eq!(s.decompose(&o).unwrap(), (RationalVector::zeros(3), o.clone()));
    }

    #[test]
    fn complements() {
        let e = |i| RationalVector::unit(2, i);
        let big = span(2, &[e(0), e(1)]).unwrap();
        let axis = span(2, &[e(0)]).unwrap();
        assert!(relative_complement(&big, &axis).unwrap().same_as(&span(2, &[e(1)]).unwrap()));

        let diag = span(2, &[v(&[1, 1])]).unwrap();
        let c = relative_complement(&big, &diag).unwrap();
        assert_eq!(c.dim(), 1);
        assert!(c.contains(&v(&[1, -1])).unwrap());
        assert!(c.is_orthogonal_to(&diag).unwrap());

        assert!(relative_complement(&big, &big).unwrap().is_zero());
        assert!(relative_complement(&axis, &big).is_err());
    }

    #[test]
    fn rejects_non_orthogonal_basis() {
        let r = Subspace::from_orthogonal_basis(2, vec![v(&[1, 0]), v(&[1, 1])]);
        assert_eq!(r, Err(Error::NotOrthogonal(0, 1)));
        let ok = Subspace::from_orthogonal_basis(2, vec![v(&[1, 1]), v(&[1, -1])]).unwrap();
        assert_eq!(ok.project(&v(&[1, 0])).unwrap(), RationalVector::from_ratios(&[(1, 1), (0, 1)]));
    }
}
