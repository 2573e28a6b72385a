use super::echelon::{kernel_basis, Echelon, Insert};
use super::matrix::{RationalMatrix, SparseVec};
use super::HomologyError;

/// A finite stretch of a cochain complex: spaces of the given dimensions in
/// degrees `lo..=lo+len-1` and a differential out of every degree but the last.
///
/// Cohomology is only defined where both neighbouring maps are known, unless
/// the complex is declared to vanish past one of its ends.
#[derive(Clone, Debug)]
pub struct ComplexPiece {
    pub lo: i32,
    pub dims: Vec<usize>,
    pub maps: Vec<RationalMatrix>,
    pub zero_below: bool,
    pub zero_above: bool,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CohomologyAt {
    pub degree: i32,
    pub dim: usize,
    pub cycles: usize,
    pub boundaries: usize,
    /// Cycles reduced modulo the boundaries, completing a boundary basis.
    pub representatives: Vec<SparseVec>,
}

impl ComplexPiece {
    pub fn new(lo: i32, dims: Vec<usize>, maps: Vec<RationalMatrix>) -> Result<Self, HomologyError> {
        if dims.is_empty() || maps.len() + 1 != dims.len() {
            return Err(HomologyError::Shape("a complex needs one map between each pair of consecutive degrees".into()));
        }
        for (i, m) in maps.iter().enumerate() {
            if m.cols() != dims[i] || m.rows() != dims[i + 1] {
                return Err(HomologyError::Shape(format!(
                    "map out of degree {} is {}x{}, expected {}x{}",
                    lo + i as i32,
                    m.rows(),
                    m.cols(),
                    dims[i + 1],
                    dims[i]
                )));
            }
        }
        for (i, w) in maps.windows(2).enumerate() {
            if !w[1].mul(&w[0]).is_zero() {
                return Err(HomologyError::NotAComplex(lo + i as i32));
            }
        }
        Ok(ComplexPiece { lo, dims, maps, zero_below: false, zero_above: false })
    }

    pub fn hi(&self) -> i32 {
        self.lo + self.dims.len() as i32 - 1
    }

    pub fn dim_at(&self, n: i32) -> usize {
        if n < self.lo || n > self.hi() {
            0
        } else {
            self.dims[(n - self.lo) as usize]
        }
    }

    /// The differential out of degree `n`, if known.
    pub fn map_from(&self, n: i32) -> Option<RationalMatrix> {
        if n >= self.lo && n < self.hi() {
            Some(self.maps[(n - self.lo) as usize].clone())
        } else if (n < self.lo && self.zero_below) || (n >= self.hi() && self.zero_above) {
            Some(RationalMatrix::zeros(self.dim_at(n + 1), self.dim_at(n)))
        } else {
            None
        }
    }

    pub fn cohomology(&self, n: i32) -> Result<CohomologyAt, HomologyError> {
        if n < self.lo || n > self.hi() {
            return Err(HomologyError::OutOfRange(n));
        }
        let incoming = self.map_from(n - 1).ok_or(HomologyError::RangeTooSmall(n))?;
        let outgoing = self.map_from(n).ok_or(HomologyError::RangeTooSmall(n))?;
        Ok(cohomology_of(n, &incoming, &outgoing))
    }

    /// Cohomology in every degree where it is defined.
    pub fn all_cohomology(&self) -> Vec<CohomologyAt> {
        (self.lo..=self.hi()).filter_map(|n| self.cohomology(n).ok()).collect()
    }
}

/// Cohomology at the middle of `incoming` then `outgoing`.
pub fn cohomology_of(degree: i32, incoming: &RationalMatrix, outgoing: &RationalMatrix) -> CohomologyAt {
    let mut image = Echelon::new();
    for c in incoming.columns() {
        image.insert(c);
    }
    let kernel = kernel_basis(outgoing);
    let mut all = image.clone();
    let mut representatives = Vec::new();
    for k in &kernel {
        let r = image.reduce(k);
        if matches!(all.insert(&r), Insert::Pivot(_)) {
            representatives.push(r);
        }
    }
    CohomologyAt {
        degree,
        dim: representatives.len(),
        cycles: kernel.len(),
        boundaries: image.rank(),
        representatives,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::Q;

    #[test]
    fn zero_differentials_give_space_dims() {
        let c = ComplexPiece {
            zero_below: true,
            zero_above: true,
            ..ComplexPiece::new(0, vec![2, 3], vec![RationalMatrix::zeros(3, 2)]).unwrap()
        };
        let h: Vec<usize> = c.all_cohomology().iter().map(|h| h.dim).collect();
        assert_eq!(h, vec![2, 3]);
    }

    #[test]
    fn boundary_needs_neighbours() {
        let c = ComplexPiece::new(0, vec![1, 1], vec![RationalMatrix::identity(1)]).unwrap();
        assert!(matches!(c.cohomology(0), Err(HomologyError::RangeTooSmall(0))));
    }

    #[test]
    fn rejects_non_complex() {
        let one = RationalMatrix::identity(1);
        assert!(ComplexPiece::new(0, vec![1, 1, 1], vec![one.clone(), one]).is_err());
    }

    #[test]
    fn representatives_complete_image() {
        // 0 -> Q -> Q^2 -> 0 with image spanned by (1, 1).
        let inc = RationalMatrix::from_columns(2, vec![vec![(0, Q::ONE), (1, Q::ONE)]]);
        let h = cohomology_of(1, &inc, &RationalMatrix::zeros(0, 2));
        assert_eq!(h.dim, 1);
        assert_eq!(h.cycles, 2);
        assert_eq!(h.boundaries, 1);
        assert_eq!(h.representatives, vec![vec![(1, Q::int(-1))]]);
    }
}
