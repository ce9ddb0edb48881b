use std::fmt;

use num_traits::{Signed, Zero};

use super::vector::RationalVector;
use crate::error::Result;
use crate::rational::Rational;

/// Matrix of pairwise inner products of a tuple. Two tuples have the same
/// quantifier-free Hilbert-space type exactly when their Gram matrices agree.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GramMatrix {
    entries: Vec<Vec<Rational>>,
}

impl GramMatrix {
    pub fn zero(n: usize) -> Self {
        Self {
            entries: vec![vec![Rational::zero(); n]; n],
        }
    }

    pub fn n(&self) -> usize {
        self.entries.len()
    }

    pub fn get(&self, i: usize, j: usize) -> &Rational {
        &self.entries[i][j]
    }

    pub fn rows(&self) -> &[Vec<Rational>] {
        &self.entries
    }

    pub fn is_symmetric(&self) -> bool {
        let n = self.n();
        (0..n).all(|i| (0..i).all(|j| self.entries[i][j] == self.entries[j][i]))
    }

    /// Exact positive-semidefiniteness test by symmetric elimination.
    ///
    /// A zero pivot is skipped only if its whole row is zero; a negative pivot
    /// or a zero pivot with a nonzero row refutes semidefiniteness.
    pub fn is_positive_semidefinite(&self) -> bool {
        if !self.is_symmetric() {
            return false;
        }
        let n = self.n();
        let mut a = self.entries.clone();
        for k in 0..n {
            let pivot = a[k][k].clone();
            if pivot.is_negative() {
                return false;
            }
            if pivot.is_zero() {
                if a[k][k + 1..].iter().any(|x| !x.is_zero()) {
                    return false;
                }
                continue;
            }
            for i in k + 1..n {
                if a[i][k].is_zero() {
                    continue;
                }
                let factor = &a[i][k] / &pivot;
                for j in k + 1..n {
                    let delta = &factor * &a[k][j];
                    a[i][j] -= delta;
                }
                a[i][k] = Rational::zero();
            }
        }
        true
    }
}

impl fmt::Display for GramMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("[")?;
        for (i, row) in self.entries.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            f.write_str("[")?;
            for (j, x) in row.iter().enumerate() {
                if j > 0 {
                    f.write_str(", ")?;
                }
                write!(f, "{x}")?;
            }
            f.write_str("]")?;
        }
        f.write_str("]")
    }
}

/// `entries[i][j] = <t_i, t_j>`.
pub fn gram_of_tuple(tuple: &[RationalVector]) -> Result<GramMatrix> {
    if let Some(first) = tuple.first() {
        for t in tuple {
            t.check_dim(first.dim())?;
        }
    }
    let n = tuple.len();
    let mut entries = vec![vec![Rational::zero(); n]; n];
    for i in 0..n {
        for j in 0..=i {
            let x = tuple[i].dot(&tuple[j]);
            entries[j][i] = x.clone();
            entries[i][j] = x;
        }
    }
    Ok(GramMatrix { entries })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::int;

    #[test]
    fn small_gram_matrices() {
        let e = |i| RationalVector::unit(2, i);
        let id = gram_of_tuple(&[e(0), e(1)]).unwrap();
        assert_eq!(id.rows(), &[vec![int(1), int(0)], vec![int(0), int(1)]]);

        let one = gram_of_tuple(&[RationalVector::from_ints(&[1, 1])]).unwrap();
        assert_eq!(one.rows(), &[vec![int(2)]]);

        let g = gram_of_tuple(&[RationalVector::from_ints(&[1, 0]), RationalVector::from_ints(&[1, 1])])
            .unwrap();
        assert_eq!(g.rows(), &[vec![int(1), int(1)], vec![int(1), int(2)]]);
        assert!(g.is_positive_semidefinite());
    }

    #[test]
    fn semidefiniteness() {
        // dependent tuple: singular but PSD
        let t = [
            RationalVector::from_ints(&[1, 2]),
            RationalVector::from_ints(&[2, 4]),
            RationalVector::from_ints(&[0, 1]),
        ];
        assert!(gram_of_tuple(&t).unwrap().is_positive_semidefinite());

        let indefinite = GramMatrix {
            entries: vec![vec![int(1), int(2)], vec![int(2), int(1)]],
        };
        assert!(!indefinite.is_positive_semidefinite());
        let zero_pivot = GramMatrix {
            entries: vec![vec![int(0), int(1)], vec![int(1), int(1)]],
        };
        assert!(!zero_pivot.is_positive_semidefinite());
        assert!(GramMatrix::zero(3).is_positive_semidefinite());
    }
}
