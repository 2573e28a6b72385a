use std::collections::BTreeMap;
use std::fmt;

use crate::rational::Q;

/// Sparse vector: strictly increasing indices, no stored zeros.
pub type SparseVec = Vec<(usize, Q)>;

/// `a + s·b` for sparse vectors.
pub fn axpy(a: &SparseVec, s: &Q, b: &SparseVec) -> SparseVec {
    if s.is_zero() {
        return a.clone();
    }
    let mut out = Vec::with_capacity(a.len() + b.len());
    let (mut i, mut j) = (0, 0);
    while i < a.len() || j < b.len() {
        let take_a = j >= b.len() || (i < a.len() && a[i].0 < b[j].0);
        let take_b = i >= a.len() || (j < b.len() && b[j].0 < a[i].0);
        if take_a {
            out.push(a[i].clone());
            i += 1;
        } else if take_b {
            out.push((b[j].0, s * &b[j].1));
            j += 1;
        } else {
            let v = &a[i].1 + s * &b[j].1;
            if !v.is_zero() {
                out.push((a[i].0, v));
            }
            i += 1;
            j += 1;
        }
    }
    out
}

pub fn scale(v: &SparseVec, s: &Q) -> SparseVec {
    if s.is_zero() {
        return Vec::new();
    }
    v.iter().map(|(i, x)| (*i, x * s)).collect()
}

/// Builds a sparse vector from unordered entries, summing duplicates.
pub fn collect_sparse(entries: impl IntoIterator<Item = (usize, Q)>) -> SparseVec {
    let mut acc: BTreeMap<usize, Q> = BTreeMap::new();
    for (i, x) in entries {
        *acc.entry(i).or_default() += x;
    }
    acc.into_iter().filter(|(_, x)| !x.is_zero()).collect()
}

/// Column-major sparse matrix over the rationals.
#[derive(Clone, PartialEq, Eq)]
pub struct RationalMatrix {
    rows: usize,
    columns: Vec<SparseVec>,
}

impl RationalMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        RationalMatrix { rows, columns: vec![Vec::new(); cols] }
    }

    pub fn identity(n: usize) -> Self {
        RationalMatrix { rows: n, columns: (0..n).map(|i| vec![(i, Q::ONE)]).collect() }
    }

    /// Panics if an entry is out of range or the column is not normalized.
    pub fn from_columns(rows: usize, columns: Vec<SparseVec>) -> Self {
        for c in &columns {
            assert!(c.windows(2).all(|w| w[0].0 < w[1].0), "column indices must increase");
            assert!(c.iter().all(|(i, x)| *i < rows && !x.is_zero()), "bad column entry");
        }
        RationalMatrix { rows, columns }
    }

    pub fn from_dense(rows: &[Vec<Q>]) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, |x| x.len());
        let columns = (0..c)
            .map(|j| (0..r).filter(|&i| !rows[i][j].is_zero()).map(|i| (i, rows[i][j].clone())).collect())
            .collect();
        RationalMatrix { rows: r, columns }
    }

    pub fn to_dense(&self) -> Vec<Vec<Q>> {
        let mut out = vec![vec![Q::ZERO; self.cols()]; self.rows];
        for (j, col) in self.columns.iter().enumerate() {
            for (i, x) in col {
                out[*i][j] = x.clone();
            }
        }
        out
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.columns.len()
    }

    pub fn column(&self, j: usize) -> &SparseVec {
        &self.columns[j]
    }

    pub fn columns(&self) -> &[SparseVec] {
        &self.columns
    }

    pub fn get(&self, i: usize, j: usize) -> Q {
        let col = &self.columns[j];
        match col.binary_search_by_key(&i, |(k, _)| *k) {
            Ok(p) => col[p].1.clone(),
            Err(_) => Q::ZERO,
        }
    }

    pub fn nnz(&self) -> usize {
        self.columns.iter().map(|c| c.len()).sum()
    }

    pub fn is_zero(&self) -> bool {
        self.columns.iter().all(|c| c.is_empty())
    }

    pub fn apply(&self, v: &SparseVec) -> SparseVec {
        let mut acc: BTreeMap<usize, Q> = BTreeMap::new();
        for (j, x) in v {
            for (i, y) in &self.columns[*j] {
                *acc.entry(*i).or_default() += x * y;
            }
        }
        acc.into_iter().filter(|(_, x)| !x.is_zero()).collect()
    }

    /// `self · other`.
    pub fn mul(&self, other: &RationalMatrix) -> RationalMatrix {
        assert_eq!(self.cols(), other.rows, "shape mismatch in product");
        RationalMatrix { rows: self.rows, columns: other.columns.iter().map(|c| self.apply(c)).collect() }
    }

    pub fn add(&self, other: &RationalMatrix) -> RationalMatrix {
        self.axpy(&Q::ONE, other)
    }

    pub fn sub(&self, other: &RationalMatrix) -> RationalMatrix {
        self.axpy(&Q::int(-1), other)
    }

    /// `self + s·other`.
    pub fn axpy(&self, s: &Q, other: &RationalMatrix) -> RationalMatrix {
        assert_eq!((self.rows, self.cols()), (other.rows, other.cols()), "shape mismatch in sum");
        RationalMatrix {
            rows: self.rows,
            columns: self.columns.iter().zip(&other.columns).map(|(a, b)| axpy(a, s, b)).collect(),
        }
    }

    pub fn scale(&self, s: &Q) -> RationalMatrix {
        RationalMatrix { rows: self.rows, columns: self.columns.iter().map(|c| scale(c, s)).collect() }
    }

    pub fn transpose(&self) -> RationalMatrix {
        let mut cols: Vec<SparseVec> = vec![Vec::new(); self.rows];
        for (j, col) in self.columns.iter().enumerate() {
            for (i, x) in col {
                cols[*i].push((j, x.clone()));
            }
        }
        RationalMatrix { rows: self.cols(), columns: cols }
    }

    /// Keeps the listed columns, in the given order.
    pub fn select_columns(&self, keep: &[usize]) -> RationalMatrix {
        RationalMatrix { rows: self.rows, columns: keep.iter().map(|&j| self.columns[j].clone()).collect() }
    }

    /// Keeps the listed rows, renumbered in the given order.
    pub fn select_rows(&self, keep: &[usize]) -> RationalMatrix {
        let mut map = vec![usize::MAX; self.rows];
        for (new, &old) in keep.iter().enumerate() {
            map[old] = new;
        }
        let columns = self
            .columns
            .iter()
            .map(|c| {
                let mut v: SparseVec =
                    c.iter().filter(|(i, _)| map[*i] != usize::MAX).map(|(i, x)| (map[*i], x.clone())).collect();
                v.sort_by_key(|(i, _)| *i);
                v
            })
            .collect();
        RationalMatrix { rows: keep.len(), columns }
    }

    /// Stacks matrices with a common column count on top of each other.
    pub fn vstack(parts: &[RationalMatrix]) -> RationalMatrix {
        let cols = parts.first().map_or(0, |m| m.cols());
        let mut columns: Vec<SparseVec> = vec![Vec::new(); cols];
        let mut offset = 0;
        for m in parts {
            assert_eq!(m.cols(), cols, "vstack column mismatch");
            for (j, col) in m.columns.iter().enumerate() {
                columns[j].extend(col.iter().map(|(i, x)| (i + offset, x.clone())));
            }
            offset += m.rows;
        }
        RationalMatrix { rows: offset, columns }
    }

    /// Nilpotent exponential `Σ Nᵏ/k!`; errors if `N` is not nilpotent within `max_power` steps.
    pub fn exp_nilpotent(&self, max_power: usize) -> Option<RationalMatrix> {
        assert_eq!(self.rows, self.cols());
        let mut out = RationalMatrix::identity(self.rows);
        let mut term = RationalMatrix::identity(self.rows);
        for k in 1..=max_power + 1 {
            term = self.mul(&term).scale(&Q::int(k as i64).recip());
            if term.is_zero() {
                return Some(out);
            }
            out = out.add(&term);
        }
        None
    }
}

impl fmt::Debug for RationalMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "RationalMatrix {}x{} [", self.rows, self.cols())?;
        for row in self.to_dense() {
            let cells: Vec<String> = row.iter().map(|x| x.to_string()).collect();
            writeln!(f, "  {}", cells.join(" "))?;
        }
        write!(f, "]")
    }
}
