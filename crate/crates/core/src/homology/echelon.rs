//! Incremental row echelon form over sparse rational vectors.
//!
//! Vectors are inserted one at a time and reduced against the pivots found so
//! far; the pivot of a new row is its first nonzero index after reduction.
//! That first-fit rule makes every derived basis depend only on insertion
//! order, which keeps reports reproducible.

use std::collections::{BTreeMap, HashMap};

use super::matrix::{axpy, RationalMatrix, SparseVec};
use crate::rational::Q;

#[derive(Clone, Default)]
pub struct Echelon {
    rows: Vec<SparseVec>,
    lead: HashMap<usize, usize>,
    combos: Option<Vec<SparseVec>>,
    inserted: usize,
}

pub enum Insert {
    /// The vector was independent and now leads at this index.
    Pivot(usize),
    /// The vector was dependent; the tracked combination of inserted vectors
    /// (by insertion number) sums to zero. Empty when tracking is off.
    Dependent(SparseVec),
}

impl Echelon {
    pub fn new() -> Self {
        Echelon::default()
    }

    /// Echelon form that also records, for every row, which combination of
    /// inserted vectors produced it.
    pub fn tracking() -> Self {
        Echelon { combos: Some(Vec::new()), ..Echelon::default() }
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    pub fn rows(&self) -> &[SparseVec] {
        &self.rows
    }

    /// Fully reduces `v` against the current pivots.
    pub fn reduce(&self, v: &SparseVec) -> SparseVec {
        self.reduce_inner(v, None).0
    }

    fn reduce_inner(&self, v: &SparseVec, mut combo: Option<SparseVec>) -> (SparseVec, Option<SparseVec>) {
        if self.lead.is_empty() {
            return (v.clone(), combo);
        }
        let mut acc: BTreeMap<usize, Q> = v.iter().cloned().collect();
        let mut pos = 0usize;
        loop {
            let Some(k) = acc.range(pos..).next().map(|(k, _)| *k) else { break };
            if let Some(&r) = self.lead.get(&k) {
                let f = acc.remove(&k).expect("present");
                for (j, x) in &self.rows[r][1..] {
                    let e = acc.entry(*j).or_default();
                    *e -= &f * x;
                    if e.is_zero() {
                        acc.remove(j);
                    }
                }
                if let (Some(c), Some(cs)) = (combo.as_mut(), self.combos.as_ref()) {
                    *c = axpy(c, &-f, &cs[r]);
                }
            }
            pos = k + 1;
        }
        (acc.into_iter().collect(), combo)
    }

    pub fn contains(&self, v: &SparseVec) -> bool {
        self.reduce(v).is_empty()
    }

    pub fn insert(&mut self, v: &SparseVec) -> Insert {
        let id = self.inserted;
        self.inserted += 1;
        let combo = self.combos.as_ref().map(|_| vec![(id, Q::ONE)]);
        let (r, combo) = self.reduce_inner(v, combo);
        if r.is_empty() {
            return Insert::Dependent(combo.unwrap_or_default());
        }
        let lead = r[0].0;
        let inv = r[0].1.recip();
        let row: SparseVec = r.iter().map(|(i, x)| (*i, x * &inv)).collect();
        if let (Some(cs), Some(c)) = (self.combos.as_mut(), combo) {
            cs.push(c.iter().map(|(i, x)| (*i, x * &inv)).collect());
        }
        self.lead.insert(lead, self.rows.len());
        self.rows.push(row);
        Insert::Pivot(lead)
    }

    /// Coordinates of `v` in terms of the inserted vectors, when `v` lies in
    /// their span. Requires tracking.
    pub fn solve(&self, v: &SparseVec) -> Option<SparseVec> {
        let cs = self.combos.as_ref().expect("solve needs a tracking echelon");
        let mut acc: BTreeMap<usize, Q> = v.iter().cloned().collect();
        let mut coords: SparseVec = Vec::new();
        let mut pos = 0usize;
        loop {
            let Some(k) = acc.range(pos..).next().map(|(k, _)| *k) else { break };
            let r = *self.lead.get(&k)?;
            let f = acc.remove(&k).expect("present");
            for (j, x) in &self.rows[r][1..] {
                let e = acc.entry(*j).or_default();
                *e -= &f * x;
                if e.is_zero() {
                    acc.remove(j);
                }
            }
            coords = axpy(&coords, &f, &cs[r]);
            pos = k + 1;
        }
        Some(coords)
    }
}

pub fn rank(m: &RationalMatrix) -> usize {
    rank_of(m.columns())
}

pub fn rank_of(vectors: &[SparseVec]) -> usize {
    let mut e = Echelon::new();
    for v in vectors {
        e.insert(v);
    }
    e.rank()
}

/// Basis of `{x : M x = 0}` in source coordinates; each vector is checked.
pub fn kernel_basis(m: &RationalMatrix) -> Vec<SparseVec> {
    let mut e = Echelon::tracking();
    let mut out = Vec::new();
    for col in m.columns() {
        if let Insert::Dependent(k) = e.insert(col) {
            out.push(k);
        }
    }
    for k in &out {
        assert!(m.apply(k).is_empty(), "kernel vector fails to annihilate the matrix");
    }
    out
}

/// Indices of a maximal independent set of columns, chosen first-fit.
pub fn image_basis(m: &RationalMatrix) -> Vec<usize> {
    let mut e = Echelon::new();
    m.columns().iter().enumerate().filter_map(|(j, c)| matches!(e.insert(c), Insert::Pivot(_)).then_some(j)).collect()
}

/// A subspace of `Q^ambient` given by an independent basis.
#[derive(Clone)]
pub struct Subspace {
    pub ambient: usize,
    pub basis: Vec<SparseVec>,
}

impl Subspace {
    pub fn full(n: usize) -> Self {
        Subspace { ambient: n, basis: (0..n).map(|i| vec![(i, crate::rational::Q::ONE)]).collect() }
    }

    /// Keeps a first-fit independent subset of the given vectors.
    pub fn span(ambient: usize, vectors: impl IntoIterator<Item = SparseVec>) -> Self {
        let mut e = Echelon::new();
        let basis = vectors.into_iter().filter(|v| matches!(e.insert(v), Insert::Pivot(_))).collect();
        Subspace { ambient, basis }
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    /// Matrix whose columns are the basis vectors.
    pub fn as_matrix(&self) -> RationalMatrix {
        RationalMatrix::from_columns(self.ambient, self.basis.clone())
    }

    /// Expresses vectors of the ambient space in this basis; `None` if some
    /// vector lies outside the subspace.
    pub fn coordinates(&self, vectors: &[SparseVec]) -> Option<Vec<SparseVec>> {
        let mut e = Echelon::tracking();
        for b in &self.basis {
            e.insert(b);
        }
        vectors.iter().map(|v| e.solve(v)).collect()
    }

    /// Kernel of `m` restricted to this subspace, as ambient vectors.
    pub fn kernel_of(&self, m: &RationalMatrix) -> Subspace {
        let restricted = m.mul(&self.as_matrix());
        let basis = kernel_basis(&restricted)
            .into_iter()
            .map(|k| {
                let mut acc: SparseVec = Vec::new();
                for (j, x) in &k {
                    acc = axpy(&acc, x, &self.basis[*j]);
                }
                acc
            })
            .collect();
        Subspace { ambient: self.ambient, basis }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::q;

    fn m(rows: &[&[i64]]) -> RationalMatrix {
        RationalMatrix::from_dense(&rows.iter().map(|r| r.iter().map(|&x| Q::int(x)).collect()).collect::<Vec<_>>())
    }

    #[test]
    fn rank_basics() {
        assert_eq!(rank(&RationalMatrix::zeros(3, 4)), 0);
        assert_eq!(rank(&RationalMatrix::identity(5)), 5);
        assert_eq!(rank(&m(&[&[1, 2, 3], &[2, 4, 6], &[1, 0, 1]])), 2);
    }

    #[test]
    fn kernel_and_image() {
        let a = m(&[&[1, 2, 3], &[2, 4, 6]]);
        let k = kernel_basis(&a);
        assert_eq!(k.len(), 2);
        assert_eq!(image_basis(&a), vec![0]);
    }

    #[test]
    fn solve_in_span() {
        let mut e = Echelon::tracking();
        e.insert(&vec![(0, Q::ONE), (1, Q::ONE)]);
        e.insert(&vec![(1, Q::ONE), (2, Q::int(2))]);
        let target = vec![(0, Q::int(2)), (1, Q::int(3)), (2, Q::int(2))];
        assert_eq!(e.solve(&target), Some(vec![(0, Q::int(2)), (1, Q::ONE)]));
        assert_eq!(e.solve(&vec![(2, Q::ONE)]), None);
    }

    #[test]
    fn subspace_coordinates() {
        let s = Subspace::span(3, vec![vec![(0, Q::ONE), (2, q(1, 2))], vec![(1, Q::ONE)]]);
        let c = s.coordinates(&[vec![(0, Q::int(2)), (1, Q::int(5)), (2, Q::ONE)]]).unwrap();
        assert_eq!(c[0], vec![(0, Q::int(2)), (1, Q::int(5))]);
        assert!(s.coordinates(&[vec![(2, Q::ONE)]]).is_none());
    }
}
