use std::collections::HashMap;
use std::sync::{Arc, Mutex};

use rayon::prelude::*;
use smallvec::SmallVec;

use super::state::{Mode, Monomial, State};
use super::{GeneratorSet, VertexError};
use crate::homology::{RationalMatrix, SparseVec};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Grade {
    pub degree: i32,
    pub weight: u32,
    pub charge: i32,
}

impl Grade {
    pub fn new(degree: i32, weight: u32) -> Self {
        Grade { degree, weight, charge: 0 }
    }

    pub fn with_charge(degree: i32, weight: u32, charge: i32) -> Self {
        Grade { degree, weight, charge }
    }

    /// Grade after applying an operator with the given shift; `None` when the
    /// weight would become negative (the target is zero).
    pub fn shifted(&self, (dd, dw, dc): (i32, i64, i32)) -> Option<Grade> {
        let w = self.weight as i64 + dw;
        (w >= 0).then(|| Grade { degree: self.degree + dd, weight: w as u32, charge: self.charge + dc })
    }
}

/// The PBW basis of one `(degree, weight, charge)` subspace, possibly
/// restricted to monomials satisfying a filter.
#[derive(Clone, Debug)]
pub struct GradedPiece {
    pub grade: Grade,
    pub basis: Vec<Monomial>,
    index: HashMap<Monomial, usize>,
}

impl GradedPiece {
    pub fn from_basis(grade: Grade, mut basis: Vec<Monomial>) -> Self {
        basis.sort();
        basis.dedup();
        let index = basis.iter().cloned().enumerate().map(|(i, m)| (m, i)).collect();
        GradedPiece { grade, basis, index }
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn index_of(&self, m: &Monomial) -> Option<usize> {
        self.index.get(m).copied()
    }

    /// Sub-piece of the monomials passing `keep`.
    pub fn filtered(&self, keep: impl Fn(&Monomial) -> bool) -> GradedPiece {
        GradedPiece::from_basis(self.grade, self.basis.iter().filter(|m| keep(m)).cloned().collect())
    }

    pub fn basis_state(&self, i: usize) -> State {
        State::monomial(self.basis[i].clone(), crate::rational::Q::ONE)
    }

    /// Coordinates of a state; errors if it has support outside the piece.
    pub fn coordinates(&self, s: &State) -> Result<SparseVec, VertexError> {
        let mut v: SparseVec = Vec::with_capacity(s.len());
        for (m, c) in s.terms() {
            let i = self.index_of(m).ok_or_else(|| {
                VertexError::Grading(format!("monomial outside the predicted piece {:?}", self.grade))
            })?;
            v.push((i, c.clone()));
        }
        v.sort_by_key(|(i, _)| *i);
        Ok(v)
    }

    pub fn state_of(&self, v: &SparseVec) -> State {
        State::from_terms(v.iter().map(|(i, c)| (self.basis[*i].clone(), c.clone())))
    }

    /// Enumerates every monomial of the given grade.
    pub fn enumerate(gs: &GeneratorSet, grade: Grade) -> Result<GradedPiece, VertexError> {
        let m = grade.weight as i64;
        // Positive-weight modes are bounded by the weight budget; weight-zero
        // modes are bounded by the degree and charge they carry.
        let mut positive: Vec<(Mode, i64, i32, i32, bool)> = Vec::new();
        let mut flat: Vec<(Mode, i32, i32, bool)> = Vec::new();
        for (g, gen) in gs.generators().iter().enumerate() {
            let odd = gen.parity.is_odd();
            for depth in 0.. {
                let w = gen.weight as i64 + depth as i64;
                if w > m {
                    break;
                }
                let mode = Mode { gen: g as u16, depth };
                if w == 0 {
                    if gen.degree < 0 || gen.charge < 0 {
                        return Err(VertexError::Grading(format!(
                            "weight-0 generator {} has negative degree or charge",
                            gen.label
                        )));
                    }
                    if !odd && gen.degree == 0 && gen.charge == 0 {
                        return Err(VertexError::InfinitePiece(grade));
                    }
                    flat.push((mode, gen.degree, gen.charge, odd));
                } else {
                    positive.push((mode, w, gen.degree, gen.charge, odd));
                }
            }
        }
        let mut out = Vec::new();
        let mut cur: Vec<Mode> = Vec::new();
        enum_positive(&positive, 0, m, grade.degree, grade.charge, &flat, &mut cur, &mut out);
        let basis = out
            .into_iter()
            .map(|mut v: Vec<Mode>| {
                v.sort();
                Monomial(SmallVec::from_vec(v))
            })
            .collect();
        Ok(GradedPiece::from_basis(grade, basis))
    }
}

#[allow(clippy::too_many_arguments)]
fn enum_positive(
    modes: &[(Mode, i64, i32, i32, bool)],
    i: usize,
    rem_w: i64,
    rem_d: i32,
    rem_c: i32,
    flat: &[(Mode, i32, i32, bool)],
    cur: &mut Vec<Mode>,
    out: &mut Vec<Vec<Mode>>,
) {
    if rem_w == 0 || i == modes.len() {
        if rem_w == 0 {
            enum_flat(flat, 0, rem_d, rem_c, cur, out);
        }
        return;
    }
    let (mode, w, d, c, odd) = modes[i];
    let max = if odd { 1 } else { rem_w / w };
    let max = max.min(rem_w / w);
    for k in 0..=max {
        for _ in 0..k {
            cur.push(mode);
        }
        enum_positive(modes, i + 1, rem_w - k * w, rem_d - k as i32 * d, rem_c - k as i32 * c, flat, cur, out);
        for _ in 0..k {
            cur.pop();
        }
    }
}

fn enum_flat(flat: &[(Mode, i32, i32, bool)], i: usize, rem_d: i32, rem_c: i32, cur: &mut Vec<Mode>, out: &mut Vec<Vec<Mode>>) {
    if rem_d < 0 || rem_c < 0 {
        return;
    }
    if i == flat.len() {
        if rem_d == 0 && rem_c == 0 {
            out.push(cur.clone());
        }
        return;
    }
    let (mode, d, c, odd) = flat[i];
    let bound = |rem: i32, x: i32| if x > 0 { rem / x } else { i32::MAX };
    let max = if odd { 1 } else { bound(rem_d, d).min(bound(rem_c, c)) };
    let mut k = 0;
    while k <= max {
        if rem_d - k * d < 0 || rem_c - k * c < 0 {
            break;
        }
        for _ in 0..k {
            cur.push(mode);
        }
        enum_flat(flat, i + 1, rem_d - k * d, rem_c - k * c, cur, out);
        for _ in 0..k {
            cur.pop();
        }
        k += 1;
    }
}

/// Memoized piece enumeration for one generator set.
#[derive(Default)]
pub struct PieceCache {
    map: Mutex<HashMap<Grade, Arc<GradedPiece>>>,
}

impl PieceCache {
    pub fn new() -> Self {
        PieceCache::default()
    }

    pub fn get(&self, gs: &GeneratorSet, grade: Grade) -> Result<Arc<GradedPiece>, VertexError> {
        if let Some(p) = self.map.lock().unwrap().get(&grade) {
            return Ok(p.clone());
        }
        let p = Arc::new(GradedPiece::enumerate(gs, grade)?);
        Ok(self.map.lock().unwrap().entry(grade).or_insert(p).clone())
    }
}

impl GeneratorSet {
    /// Matrix of a linear operator from `src` to `dst`, one column per basis
    /// monomial of `src`; columns are computed in parallel.
    pub fn matrix_of<F>(&self, src: &GradedPiece, dst: &GradedPiece, op: F) -> Result<RationalMatrix, VertexError>
    where
        F: Fn(&State) -> State + Sync,
    {
        let columns: Result<Vec<SparseVec>, VertexError> =
            (0..src.dim()).into_par_iter().map(|i| dst.coordinates(&op(&src.basis_state(i)))).collect();
        Ok(RationalMatrix::from_columns(dst.dim(), columns?))
    }

    /// `(degree, weight, charge)` shift of the mode `a(k)` for a graded `a`.
    pub fn mode_shift(&self, a: &State, k: i64) -> Option<(i32, i64, i32)> {
        let g = self.grade_of(a)?;
        Some((g.degree, g.weight as i64 - k - 1, g.charge))
    }

    /// Matrix of `â(k)` from `src` into its predicted target piece.
    pub fn mode_matrix(
        &self,
        cache: &PieceCache,
        a: &State,
        k: i64,
        src: &GradedPiece,
    ) -> Result<(Arc<GradedPiece>, RationalMatrix), VertexError> {
        let shift = match self.mode_shift(a, k) {
            Some(s) => s,
            None if a.is_zero() => (0, 0, 0),
            None => return Err(VertexError::Grading("mode_matrix needs a homogeneous field".into())),
        };
        let target = match src.grade.shifted(shift) {
            Some(t) => cache.get(self, t)?,
            None => Arc::new(GradedPiece::from_basis(src.grade, Vec::new())),
        };
        let m = self.matrix_of(src, &target, |s| self.field_mode(a, k, s))?;
        Ok((target, m))
    }
}
