use thiserror::Error;

use crate::linalg::RationalVector;
use crate::rational::Rational;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("ambient dimension must be positive")]
    EmptyAmbient,

    #[error("{what} is not contained in {container}")]
    NotContained {
        what: String,
        container: &'static str,
    },

    #[error("basis vectors {0} and {1} are not orthogonal")]
    NotOrthogonal(usize, usize),

    #[error("embedding is not isometric")]
    NotIsometric,

    #[error("embedding domain does not match the {0}")]
    DomainMismatch(&'static str),

    #[error("projection of base generator {index} differs on side {side}")]
    RestrictionMismatch { side: usize, index: usize },

    #[error("class mismatch: d(0)^2 = {expected} on the base but {found} on side {side}")]
    ClassMismatch {
        side: usize,
        expected: Box<Rational>,
        found: Box<Rational>,
    },

    #[error("base is not a substructure of side {side}: at {probe} base gives {small}, side gives {big}")]
    NotSubstructure {
        side: usize,
        probe: RationalVector,
        small: Box<Rational>,
        big: Box<Rational>,
    },

    #[error("distance table entry {index} at {point}: claimed {claimed}, induced {computed}")]
    TableMismatch {
        index: usize,
        point: RationalVector,
        claimed: Box<Rational>,
        computed: Box<Rational>,
    },

    #[error("parameter out of range: {0}")]
    OutOfRange(String),

    #[error("residue over the base is zero; perturbation direction undefined")]
    ZeroResidue,
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
