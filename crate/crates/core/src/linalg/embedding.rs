use num_traits::Zero;

use super::gram::gram_of_tuple;
use super::subspace::Subspace;
use super::vector::RationalVector;
use crate::error::{Error, Result};

/// A linear map from a subspace into `Q^target_dim`, given by the images of
/// the domain's orthogonal basis.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Embedding {
    domain: Subspace,
    target_dim: usize,
    images: Vec<RationalVector>,
}

impl Embedding {
    pub fn new(domain: Subspace, target_dim: usize, images: Vec<RationalVector>) -> Result<Self> {
        if images.len() != domain.dim() {
            return Err(Error::DimensionMismatch {
                expected: domain.dim(),
                found: images.len(),
            });
        }
        for img in &images {
            img.check_dim(target_dim)?;
        }
        Ok(Self {
            domain,
            target_dim,
            images,
        })
    }

    pub fn identity(domain: &Subspace) -> Self {
        Self {
            domain: domain.clone(),
            target_dim: domain.ambient_dim(),
            images: domain.basis().to_vec(),
        }
    }

    /// Restriction to `domain` of the coordinate injection sending source
    /// coordinate `i` to target coordinate `coord_map[i]`.
    pub fn coordinate(domain: &Subspace, target_dim: usize, coord_map: &[usize]) -> Result<Self> {
        if coord_map.len() != domain.ambient_dim() {
            return Err(Error::DimensionMismatch {
                expected: domain.ambient_dim(),
                found: coord_map.len(),
            });
        }
        let mut seen = vec![false; target_dim];
        for &c in coord_map {
            if c >= target_dim || std::mem::replace(&mut seen[c], true) {
                return Err(Error::OutOfRange(format!(
                    "coordinate map entry {c} is out of range or repeated"
                )));
            }
        }
        let images = domain
            .basis()
            .iter()
            .map(|b| {
                let mut coords = vec![num_traits::zero(); target_dim];
                for (i, x) in b.coords().iter().enumerate() {
                    coords[coord_map[i]] = x.clone();
                }
                RationalVector::new(coords).expect("positive target dim")
            })
            .collect();
        Self::new(domain.clone(), target_dim, images)
    }

    /// Restriction to `domain` of an arbitrary linear map of the ambient space.
    pub fn from_linear_map(
        domain: &Subspace,
        target_dim: usize,
        f: impl Fn(&RationalVector) -> RationalVector,
    ) -> Result<Self> {
        let images = domain.basis().iter().map(f).collect();
        Self::new(domain.clone(), target_dim, images)
    }

    pub fn domain(&self) -> &Subspace {
        &self.domain
    }

    pub fn target_dim(&self) -> usize {
        self.target_dim
    }

    pub fn images(&self) -> &[RationalVector] {
        &self.images
    }

    pub fn apply(&self, v: &RationalVector) -> Result<RationalVector> {
        v.check_dim(self.domain.ambient_dim())?;
        if !self.domain.contains_unchecked(v) {
            return Err(Error::NotContained {
                what: format!("point {v}"),
                container: "the embedding domain",
            });
        }
        let mut out = RationalVector::zeros(self.target_dim);
        for (c, img) in self.domain.coefficients_unchecked(v).iter().zip(&self.images) {
            out.add_scaled(c, img);
        }
        Ok(out)
    }

    pub fn image(&self) -> Subspace {
        Subspace::span(self.target_dim, &self.images).expect("positive target dim")
    }

    /// Exact check that the Gram matrix of the images equals that of the
    /// domain basis.
    pub fn is_isometric(&self) -> bool {
        gram_of_tuple(&self.images).ok() == gram_of_tuple(self.domain.basis()).ok()
    }

    /// Preimage of `w`, or `None` when `w` lies outside the image.
    /// Requires an isometric embedding.
    pub fn pullback(&self, w: &RationalVector) -> Result<Option<RationalVector>> {
        w.check_dim(self.target_dim)?;
        if !self.is_isometric() {
            return Err(Error::NotIsometric);
        }
        let mut preimage = RationalVector::zeros(self.domain.ambient_dim());
        let mut rebuilt = RationalVector::zeros(self.target_dim);
        for (img, b) in self.images.iter().zip(self.domain.basis()) {
            let c = w.dot(img);
            if c.is_zero() {
                continue;
            }
            let c = c / img.norm_sq();
            rebuilt.add_scaled(&c, img);
            preimage.add_scaled(&c, b);
        }
        Ok((&rebuilt == w).then_some(preimage))
    }

    /// `outer ∘ self`. The image of `self` must lie in `outer`'s domain.
    pub fn then(&self, outer: &Embedding) -> Result<Embedding> {
        let images = self
            .images
            .iter()
            .map(|img| outer.apply(img))
            .collect::<Result<Vec<_>>>()?;
        Embedding::new(self.domain.clone(), outer.target_dim, images)
    }
}

/// Free join of several spaces over a common base: isometric embeddings of
/// each side into one joint space, agreeing on the base, whose residues over
/// the base are pairwise orthogonal.
///
/// Joint coordinates are the concatenation of the side ambients. Side 0
/// keeps its coordinates; every other side sends its base part to where
/// side 0 put the base and its residue over the base to its own block.
#[derive(Clone, Debug)]
pub struct AmalgamEmbedding {
    base: Subspace,
    base_maps: Vec<Embedding>,
    maps: Vec<Embedding>,
    side_images: Vec<Subspace>,
    residues: Vec<Subspace>,
    base_image: Subspace,
    joint: Subspace,
}

/// Outcome of [`AmalgamEmbedding::certify`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct JoinCertificate {
    pub isometric: bool,
    pub agree_on_base: bool,
    pub residues_orthogonal: bool,
    pub intersection_is_base: bool,
}

impl JoinCertificate {
    pub fn passed(&self) -> bool {
        self.isometric && self.agree_on_base && self.residues_orthogonal && self.intersection_is_base
    }
}

impl AmalgamEmbedding {
    pub fn base(&self) -> &Subspace {
        &self.base
    }

    pub fn base_maps(&self) -> &[Embedding] {
        &self.base_maps
    }

    pub fn parts(&self) -> usize {
        self.maps.len()
    }

    pub fn map(&self, side: usize) -> &Embedding {
        &self.maps[side]
    }

    pub fn left(&self) -> &Embedding {
        &self.maps[0]
    }

    pub fn right(&self) -> &Embedding {
        &self.maps[1]
    }

    /// The joint space `span(image H_0 ∪ image H_1 ∪ ...)`.
    pub fn joint(&self) -> &Subspace {
        &self.joint
    }

    pub fn joint_dim(&self) -> usize {
        self.joint.dim()
    }

    pub fn ambient_dim(&self) -> usize {
        self.joint.ambient_dim()
    }

    pub fn base_image(&self) -> &Subspace {
        &self.base_image
    }

    /// Image of side `side` in joint coordinates.
    pub fn side_image(&self, side: usize) -> &Subspace {
        &self.side_images[side]
    }

    /// `image(H_side) ∩ base^⊥` in joint coordinates.
    pub fn residue(&self, side: usize) -> &Subspace {
        &self.residues[side]
    }

    /// Embedding of the base into the joint space.
    pub fn base_embedding(&self) -> Embedding {
        self.base_maps[0]
            .then(&self.maps[0])
            .expect("base image lies in side 0")
    }

    pub fn certify(&self) -> JoinCertificate {
        let isometric = self.maps.iter().all(Embedding::is_isometric);
        let agree_on_base = self.base.basis().iter().all(|h| {
            let images: Vec<RationalVector> = self
                .base_maps
                .iter()
                .zip(&self.maps)
                .map(|(bm, m)| bm.apply(h).and_then(|x| m.apply(&x)).expect("base maps validated"))
                .collect();
            images.windows(2).all(|w| w[0] == w[1])
        });
        let mut residues_orthogonal = true;
        for i in 0..self.residues.len() {
            for j in 0..i {
                residues_orthogonal &= self.residues[i]
                    .is_orthogonal_to(&self.residues[j])
                    .unwrap_or(false);
            }
        }
        let sum: usize = self.side_images.iter().map(Subspace::dim).sum();
        let expected = sum - (self.parts() - 1) * self.base.dim();
        JoinCertificate {
            isometric,
            agree_on_base,
            residues_orthogonal,
            intersection_is_base: self.joint.dim() == expected,
        }
    }
}

/// Free join of two spaces over `base`.
pub fn free_join(
    left: &Subspace,
    right: &Subspace,
    base: &Subspace,
    base_left: &Embedding,
    base_right: &Embedding,
) -> Result<AmalgamEmbedding> {
    free_join_many(
        &[left.clone(), right.clone()],
        base,
        &[base_left.clone(), base_right.clone()],
    )
}

/// Free join of any number of spaces over a common `base`; `base_maps[i]`
/// embeds the base into `sides[i]`.
pub fn free_join_many(
    sides: &[Subspace],
    base: &Subspace,
    base_maps: &[Embedding],
) -> Result<AmalgamEmbedding> {
    if sides.is_empty() {
        return Err(Error::OutOfRange("free join needs at least one side".into()));
    }
    if sides.len() != base_maps.len() {
        return Err(Error::DimensionMismatch {
            expected: sides.len(),
            found: base_maps.len(),
        });
    }
    for (side, bm) in sides.iter().zip(base_maps) {
        if !bm.domain().same_as(base) {
            return Err(Error::DomainMismatch("base"));
        }
        if bm.target_dim() != side.ambient_dim() {
            return Err(Error::DimensionMismatch {
                expected: side.ambient_dim(),
                found: bm.target_dim(),
            });
        }
        if !bm.is_isometric() {
            return Err(Error::NotIsometric);
        }
        if !side.contains_subspace(&bm.image())? {
            return Err(Error::NotContained {
                what: "image of the base".into(),
                container: "the side space",
            });
        }
    }

    let ambient: usize = sides.iter().map(Subspace::ambient_dim).sum();
    let mut offsets = Vec::with_capacity(sides.len());
    let mut acc = 0;
    for s in sides {
        offsets.push(acc);
        acc += s.ambient_dim();
    }

    let mut maps = Vec::with_capacity(sides.len());
    for (i, side) in sides.iter().enumerate() {
        let base_in_side = base_maps[i].image();
        let images = side
            .basis()
            .iter()
            .map(|b| {
                if i == 0 {
                    return Ok(b.place(ambient, offsets[0]));
                }
                let (p, r) = base_in_side.decompose(b)?;
                let h = base_maps[i]
                    .pullback(&p)?
                    .expect("projection onto the base image lies in the image");
                let p0 = base_maps[0].apply(&h)?;
                Ok(&p0.place(ambient, offsets[0]) + &r.place(ambient, offsets[i]))
            })
            .collect::<Result<Vec<_>>>()?;
        maps.push(Embedding::new(side.clone(), ambient, images)?);
    }

    let side_images: Vec<Subspace> = maps.iter().map(Embedding::image).collect();
    let base_image = base_maps[0].then(&maps[0])?.image();
    let residues = side_images
        .iter()
        .map(|s| s.relative_complement(&base_image))
        .collect::<Result<Vec<_>>>()?;
    let mut joint = Subspace::zero(ambient)?;
    for s in &side_images {
        joint = joint.sum(s)?;
    }

    Ok(AmalgamEmbedding {
        base: base.clone(),
        base_maps: base_maps.to_vec(),
        maps,
        side_images,
        residues,
        base_image,
        joint,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    fn e(dim: usize, i: usize) -> RationalVector {
        RationalVector::unit(dim, i)
    }

    fn plane() -> Subspace {
        Subspace::full(2).unwrap()
    }

    #[test]
    fn dimension_count_over_a_line() {
        let base = Subspace::full(1).unwrap();
        let bl = Embedding::coordinate(&base, 2, &[0]).unwrap();
        let br = Embedding::coordinate(&base, 2, &[1]).unwrap();
        let j = free_join(&plane(), &plane(), &base, &bl, &br).unwrap();
        assert_eq!(j.joint_dim(), 3);
        assert!(j.certify().passed());
        // the base generator goes to the same joint point from both sides
        let h = e(1, 0);
        let from_left = j.left().apply(&bl.apply(&h).unwrap()).unwrap();
        let from_right = j.right().apply(&br.apply(&h).unwrap()).unwrap();
        assert_eq!(from_left, from_right);
    }

    #[test]
    fn zero_base_gives_direct_sum() {
        let base = Subspace::zero(1).unwrap();
        let bl = Embedding::new(base.clone(), 2, vec![]).unwrap();
        let br = Embedding::new(base.clone(), 3, vec![]).unwrap();
        let j = free_join(&plane(), &Subspace::full(3).unwrap(), &base, &bl, &br).unwrap();
        assert_eq!(j.joint_dim(), 5);
        assert!(j.certify().passed());
        assert!(j.residue(0).is_orthogonal_to(j.residue(1)).unwrap());
    }

    #[test]
    fn degenerate_join_of_base_with_itself() {
        let base = Subspace::span(2, &[RationalVector::from_ints(&[1, 1])]).unwrap();
        let id = Embedding::identity(&base);
        let j = free_join(&base, &base, &base, &id, &id).unwrap();
        assert_eq!(j.joint_dim(), base.dim());
        assert!(j.certify().passed());
        let x = RationalVector::from_ints(&[3, 3]);
        assert_eq!(j.left().apply(&x).unwrap(), j.right().apply(&x).unwrap());
    }

    #[test]
    fn inner_products_preserved_across_sides() {
        // base = diagonal line, embedded differently on the two sides
        let base = Subspace::span(2, &[RationalVector::from_ints(&[1, 1])]).unwrap();
        let bl = Embedding::identity(&base);
        let br = Embedding::from_linear_map(&base, 2, |v| {
            RationalVector::new(vec![v.coords()[0].clone(), -v.coords()[1].clone()]).unwrap()
        })
        .unwrap();
        let j = free_join(&plane(), &plane(), &base, &bl, &br).unwrap();
        assert!(j.certify().passed());
        let a = RationalVector::from_ints(&[2, -1]);
        let b = RationalVector::from_ints(&[1, 3]);
        let ja = j.left().apply(&a).unwrap();
        let jb = j.left().apply(&b).unwrap();
        assert_eq!(ja.dot(&jb), a.dot(&b));
        let rb = j.right().apply(&b).unwrap();
        let rr = j.right().apply(&a).unwrap();
        assert_eq!(rb.dot(&rr), a.dot(&b));
        // residues: a - P_base a on the left vs (1,-1)-residues on the right
        assert!(j.residue(0).is_orthogonal_to(j.residue(1)).unwrap());
        assert_eq!(j.joint_dim(), 3);
    }

    #[test]
    fn rejects_non_isometric_base_maps() {
        let base = Subspace::full(1).unwrap();
        let bl = Embedding::coordinate(&base, 2, &[0]).unwrap();
        let stretched = Embedding::new(base.clone(), 2, vec![RationalVector::from_ints(&[2, 0])]).unwrap();
        assert_eq!(
            free_join(&plane(), &plane(), &base, &bl, &stretched).unwrap_err(),
            Error::NotIsometric
        );
    }

    #[test]
    fn pullback_inverts_apply() {
        let dom = Subspace::span(3, &[RationalVector::from_ints(&[1, 2, 0]), RationalVector::from_ints(&[0, 0, 1])]).unwrap();
        let emb = Embedding::coordinate(&dom, 4, &[3, 1, 0]).unwrap();
        let v = RationalVector::from_ints(&[2, 4, -5]);
        let w = emb.apply(&v).unwrap();
        assert_eq!(emb.pullback(&w).unwrap(), Some(v));
        assert_eq!(emb.pullback(&RationalVector::unit(4, 2)).unwrap(), None);
        assert!(emb.apply(&RationalVector::unit(3, 0)).is_err());
    }
}
