//! Spectral sequence of a filtered complex coming from a double complex.
//!
//! Pages are computed directly as subquotients
//! `E_r^p = Z_r^p / (Z_{r-1}^{p+1} + D Z_{r-1}^{p-r+1})` with
//! `Z_r^p = {x ∈ F^p : Dx ∈ F^{p+r}}`, all inside the total complex.

use std::collections::BTreeMap;

use super::complex::{cohomology_of, ComplexPiece};
use super::echelon::{kernel_basis, rank_of};
use super::matrix::{axpy, RationalMatrix, SparseVec};
use super::HomologyError;

/// Total spaces of a double complex with the column index `p` of every basis
/// vector, plus the two differentials `d` (bidegree (0,1)) and `delta` ((1,0)).
#[derive(Clone, Debug)]
pub struct DoubleComplex {
    pub lo: i32,
    /// `p` value of each basis vector, per total degree.
    pub columns: Vec<Vec<i32>>,
    pub d: Vec<RationalMatrix>,
    pub delta: Vec<RationalMatrix>,
    pub zero_below: bool,
    pub zero_above: bool,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SpectralPage {
    pub r: usize,
    /// `(p, q) → dim E_r^{p,q}`; only nonzero entries.
    pub table: BTreeMap<(i32, i32), usize>,
    /// `(p, q) → rank of d_r leaving (p, q)`.
    pub differential_ranks: BTreeMap<(i32, i32), usize>,
}

#[derive(Clone, Debug)]
pub struct SpectralResult {
    pub pages: Vec<SpectralPage>,
    /// Index of the first page from which every later differential vanishes.
    pub stable_at: usize,
    /// `n → Σ_{p+q=n} dim E_∞^{p,q}`.
    pub infinity_totals: BTreeMap<i32, usize>,
    /// `n → dim H^n` of the total complex, computed separately.
    pub total_cohomology: BTreeMap<i32, usize>,
}

impl SpectralResult {
    pub fn consistent(&self) -> bool {
        self.infinity_totals == self.total_cohomology
    }
}

impl DoubleComplex {
    pub fn hi(&self) -> i32 {
        self.lo + self.columns.len() as i32 - 1
    }

    fn dim(&self, n: i32) -> usize {
        if n < self.lo || n > self.hi() {
            0
        } else {
            self.columns[(n - self.lo) as usize].len()
        }
    }

    fn ps(&self, n: i32) -> &[i32] {
        if n < self.lo || n > self.hi() {
            &[]
        } else {
            &self.columns[(n - self.lo) as usize]
        }
    }

    fn map(list: &[RationalMatrix], lo: i32, hi: i32, n: i32, zb: bool, za: bool, rows: usize, cols: usize) -> Option<RationalMatrix> {
        if n >= lo && n < hi {
            Some(list[(n - lo) as usize].clone())
        } else if (n < lo && zb) || (n >= hi && za) {
            Some(RationalMatrix::zeros(rows, cols))
        } else {
            None
        }
    }

    fn d_from(&self, n: i32) -> Option<RationalMatrix> {
        Self::map(&self.d, self.lo, self.hi(), n, self.zero_below, self.zero_above, self.dim(n + 1), self.dim(n))
    }

    fn delta_from(&self, n: i32) -> Option<RationalMatrix> {
        Self::map(&self.delta, self.lo, self.hi(), n, self.zero_below, self.zero_above, self.dim(n + 1), self.dim(n))
    }

    fn total_from(&self, n: i32) -> Option<RationalMatrix> {
        Some(self.d_from(n)?.add(&self.delta_from(n)?))
    }

    /// Checks shapes, bidegrees and `d² = δ² = dδ + δd = 0`.
    pub fn check(&self) -> Result<(), HomologyError> {
        let len = self.columns.len();
        if len == 0 || self.d.len() + 1 != len || self.delta.len() + 1 != len {
            return Err(HomologyError::Shape("double complex needs maps between consecutive total degrees".into()));
        }
        for n in self.lo..self.hi() {
            let (d, dl) = (self.d_from(n).unwrap(), self.delta_from(n).unwrap());
            for (m, name) in [(&d, "d"), (&dl, "delta")] {
                if m.cols() != self.dim(n) || m.rows() != self.dim(n + 1) {
                    return Err(HomologyError::Shape(format!("{name} out of degree {n} has the wrong shape")));
                }
            }
            let (src, dst) = (self.ps(n), self.ps(n + 1));
            for (j, col) in d.columns().iter().enumerate() {
                if col.iter().any(|(i, _)| dst[*i] != src[j]) {
                    return Err(HomologyError::Bidegree(format!("d out of degree {n} does not preserve p")));
                }
            }
            for (j, col) in dl.columns().iter().enumerate() {
                if col.iter().any(|(i, _)| dst[*i] != src[j] + 1) {
                    return Err(HomologyError::Bidegree(format!("delta out of degree {n} does not raise p by one")));
                }
            }
        }
        for n in self.lo..self.hi() - 1 {
            let (d0, d1) = (self.d_from(n).unwrap(), self.d_from(n + 1).unwrap());
            let (e0, e1) = (self.delta_from(n).unwrap(), self.delta_from(n + 1).unwrap());
            if !d1.mul(&d0).is_zero() {
                return Err(HomologyError::Precondition(format!("d² ≠ 0 out of degree {n}")));
            }
            if !e1.mul(&e0).is_zero() {
                return Err(HomologyError::Precondition(format!("δ² ≠ 0 out of degree {n}")));
            }
            if !d1.mul(&e0).add(&e1.mul(&d0)).is_zero() {
                return Err(HomologyError::Precondition(format!("dδ + δd ≠ 0 out of degree {n}")));
            }
        }
        Ok(())
    }

    /// `Z_r^p` in total degree `n`, as vectors of the total space.
    fn z(&self, n: i32, p: i32, r: i64) -> Option<Vec<SparseVec>> {
        let ps = self.ps(n);
        let cols: Vec<usize> = (0..ps.len()).filter(|&j| ps[j] >= p).collect();
        let lift = |k: &SparseVec| -> SparseVec { k.iter().map(|(j, x)| (cols[*j], x.clone())).collect() };
        if r <= 0 {
            return Some(cols.iter().map(|&j| vec![(j, crate::rational::Q::ONE)]).collect());
        }
        let total = self.total_from(n)?;
        let target = self.ps(n + 1);
        let bound = p as i64 + r;
        let rows: Vec<usize> = (0..target.len()).filter(|&i| (target[i] as i64) < bound).collect();
        let sub = total.select_columns(&cols).select_rows(&rows);
        Some(kernel_basis(&sub).iter().map(lift).collect())
    }

    fn image(&self, n: i32, vs: &[SparseVec]) -> Option<Vec<SparseVec>> {
        let m = self.total_from(n)?;
        Some(vs.iter().map(|v| m.apply(v)).collect())
    }

    /// `Z_{r-1}^{p+1}(n) + D Z_{r-1}^{p-r+1}(n-1)`.
    fn denominator(&self, n: i32, p: i32, r: i64) -> Option<Vec<SparseVec>> {
        let mut out = self.z(n, p + 1, r - 1)?;
        let lower = self.z(n - 1, p - r as i32 + 1, r - 1)?;
        out.extend(self.image(n - 1, &lower)?);
        Some(out)
    }

    fn page_entry(&self, n: i32, p: i32, r: i64) -> Option<(usize, usize)> {
        let z = self.z(n, p, r)?;
        let den = self.denominator(n, p, r)?;
        let dim = z.len() - rank_of(&den);
        // d_r leaves (p, n) towards (p + r, n + 1).
        let out_rank = if r >= 0 {
            let den_t = self.denominator(n + 1, p + r as i32, r)?;
            let mut with = den_t.clone();
            with.extend(self.image(n, &z)?);
            rank_of(&with) - rank_of(&den_t)
        } else {
            0
        };
        Some((dim, out_rank))
    }

    /// Pages `E_0 ..` up to `r_max` (or until the filtration length forces
    /// stabilization), for every total degree where they are defined.
    pub fn pages(&self, r_max: usize) -> Result<SpectralResult, HomologyError> {
        self.check()?;
        let degrees: Vec<i32> = (self.lo..=self.hi()).filter(|&n| (n - 1..=n + 1).all(|k| self.total_from(k).is_some())).collect();
        let all_p: Vec<i32> = self.columns.iter().flatten().copied().collect();
        let (pmin, pmax) = match (all_p.iter().min(), all_p.iter().max()) {
            (Some(a), Some(b)) => (*a, *b),
            _ => (0, 0),
        };
        let span = (pmax - pmin) as usize;
        let last = r_max.min(span + 1).max(1);
        let mut pages = Vec::new();
        for r in 0..=last {
            let mut table = BTreeMap::new();
            let mut differential_ranks = BTreeMap::new();
            for &n in &degrees {
                for p in pmin..=pmax {
                    let (dim, rk) = self.page_entry(n, p, r as i64).ok_or(HomologyError::RangeTooSmall(n))?;
                    if dim > 0 {
                        table.insert((p, n - p), dim);
                    }
                    if rk > 0 {
                        differential_ranks.insert((p, n - p), rk);
                    }
                }
            }
            pages.push(SpectralPage { r, table, differential_ranks });
        }
        for w in pages.windows(2) {
            // E_{r+1} = E_r minus what d_r kills on both sides.
            let (a, b) = (&w[0], &w[1]);
            for &n in &degrees {
                for p in pmin..=pmax {
                    let q = n - p;
                    let r = a.r as i32;
                    let here = *a.table.get(&(p, q)).unwrap_or(&0);
                    let out = *a.differential_ranks.get(&(p, q)).unwrap_or(&0);
                    let inc = *a.differential_ranks.get(&(p - r, q + r - 1)).unwrap_or(&0);
                    let next = *b.table.get(&(p, q)).unwrap_or(&0);
                    let inc_known = degrees.contains(&(n - 1));
                    if inc_known && here != next + out + inc {
                        return Err(HomologyError::Internal(format!("page {} → {} inconsistent at ({p},{q})", a.r, b.r)));
                    }
                }
            }
        }
        let stable_at = (1..pages.len())
            .find(|&r| pages[r..].iter().all(|pg| pg.differential_ranks.is_empty()))
            .unwrap_or(pages.len() - 1);
        let inf = &pages[pages.len() - 1];
        let mut infinity_totals = BTreeMap::new();
        let mut total_cohomology = BTreeMap::new();
        for &n in &degrees {
            let s: usize = inf.table.iter().filter(|((p, q), _)| p + q == n).map(|(_, v)| *v).sum();
            infinity_totals.insert(n, s);
            let h = cohomology_of(n, &self.total_from(n - 1).unwrap(), &self.total_from(n).unwrap());
            total_cohomology.insert(n, h.dim);
        }
        pages.truncate(stable_at + 1);
        Ok(SpectralResult { pages, stable_at, infinity_totals, total_cohomology })
    }

    /// The total complex as a plain complex.
    pub fn total(&self) -> Result<ComplexPiece, HomologyError> {
        let dims = (self.lo..=self.hi()).map(|n| self.dim(n)).collect();
        let maps = (self.lo..self.hi()).map(|n| self.total_from(n).unwrap()).collect();
        let mut c = ComplexPiece::new(self.lo, dims, maps)?;
        c.zero_below = self.zero_below;
        c.zero_above = self.zero_above;
        Ok(c)
    }
}

/// Sum of vectors scaled by coefficients; used when lifting kernel combos.
pub fn combine(basis: &[SparseVec], coeffs: &SparseVec) -> SparseVec {
    coeffs.iter().fold(Vec::new(), |acc, (j, x)| axpy(&acc, x, &basis[*j]))
}
