use std::fmt;
use std::sync::Arc;

use rayon::prelude::*;

use super::piece::{GradedPiece, PieceCache};
use super::state::State;
use super::{GeneratorSet, VertexError};
use crate::homology::{RationalMatrix, SparseVec};
use crate::rational::Q;

type Intrinsic = Arc<dyn Fn(&GeneratorSet, &State) -> State + Send + Sync>;

/// A linear operator on a free-field algebra that shifts
/// `(degree, weight, charge)` by a fixed amount.
#[derive(Clone)]
pub enum GradedOperator {
    /// `â(k)`.
    FieldMode { field: State, mode: i64 },
    /// `Σ cᵢ·Tᵢ`; every term must carry the same shift.
    Combination(Vec<(Q, GradedOperator)>),
    /// `T₁ ∘ T₂ ∘ ⋯`, applied right to left.
    Compose(Vec<GradedOperator>),
    /// `exp(s·â(k))` for a degree-0, weight-preserving nilpotent `â(k)`.
    Exp { field: State, mode: i64, scale: Q },
    /// A hand-written operator with its declared shift.
    Intrinsic { name: String, shift: (i32, i64, i32), apply: Intrinsic },
}

impl fmt::Debug for GradedOperator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GradedOperator::FieldMode { field, mode } => write!(f, "FieldMode({} terms, {mode})", field.len()),
            GradedOperator::Combination(v) => f.debug_list().entries(v.iter().map(|(c, t)| (c.to_string(), t))).finish(),
            GradedOperator::Compose(v) => f.debug_tuple("Compose").field(v).finish(),
            GradedOperator::Exp { mode, scale, .. } => write!(f, "Exp({scale}·a({mode}))"),
            GradedOperator::Intrinsic { name, .. } => write!(f, "Intrinsic({name})"),
        }
    }
}

impl GradedOperator {
    pub fn mode(field: State, mode: i64) -> Self {
        GradedOperator::FieldMode { field, mode }
    }

    pub fn intrinsic(
        name: &str,
        shift: (i32, i64, i32),
        apply: impl Fn(&GeneratorSet, &State) -> State + Send + Sync + 'static,
    ) -> Self {
        GradedOperator::Intrinsic { name: name.into(), shift, apply: Arc::new(apply) }
    }

    pub fn apply(&self, gs: &GeneratorSet, s: &State) -> State {
        match self {
            GradedOperator::FieldMode { field, mode } => gs.field_mode(field, *mode, s),
            GradedOperator::Combination(terms) => {
                let mut out = State::zero();
                for (c, t) in terms {
                    out.add_scaled(&t.apply(gs, s), c);
                }
                out
            }
            GradedOperator::Compose(ops) => ops.iter().rev().fold(s.clone(), |acc, t| t.apply(gs, &acc)),
            GradedOperator::Exp { field, mode, scale } => {
                // Terminates because the operator is nilpotent on each piece.
                let mut out = s.clone();
                let mut term = s.clone();
                let mut j = 1i64;
                loop {
                    term = gs.field_mode(field, *mode, &term).scaled(&(scale / &Q::int(j)));
                    if term.is_zero() {
                        break;
                    }
                    out.add_scaled(&term, &Q::ONE);
                    j += 1;
                    assert!(j < 10_000, "exponential of a non-nilpotent operator");
                }
                out
            }
            GradedOperator::Intrinsic { apply, .. } => apply(gs, s),
        }
    }

    /// The declared `(degree, weight, charge)` shift; an error for an
    /// inhomogeneous field or an inconsistent combination.
    pub fn shift(&self, gs: &GeneratorSet) -> Result<(i32, i64, i32), VertexError> {
        match self {
            GradedOperator::FieldMode { field, mode } => {
                if field.is_zero() {
                    return Ok((0, 0, 0));
                }
                gs.mode_shift(field, *mode).ok_or_else(|| VertexError::Grading("inhomogeneous field".into()))
            }
            GradedOperator::Combination(terms) => {
                let mut shifts = terms.iter().filter(|(c, _)| !c.is_zero()).map(|(_, t)| t.shift(gs));
                let first = shifts.next().unwrap_or(Ok((0, 0, 0)))?;
                for s in shifts {
                    if s? != first {
                        return Err(VertexError::Grading("combination of operators with different shifts".into()));
                    }
                }
                Ok(first)
            }
            GradedOperator::Compose(ops) => ops.iter().try_fold((0, 0, 0), |(a, b, c), t| {
                let (x, y, z) = t.shift(gs)?;
                Ok((a + x, b + y, c + z))
            }),
            GradedOperator::Exp { field, mode, .. } => {
                let s = GradedOperator::mode(field.clone(), *mode).shift(gs)?;
                if s != (0, 0, 0) {
                    return Err(VertexError::Grading("exponential of a shifting operator".into()));
                }
                Ok(s)
            }
            GradedOperator::Intrinsic { shift, .. } => Ok(*shift),
        }
    }
}

impl GeneratorSet {
    /// Matrix of `op` on the span of `states` (all of grade `src`), with
    /// rows indexed by the predicted target piece.
    pub fn operator_matrix_on(
        &self,
        cache: &PieceCache,
        op: &GradedOperator,
        src: super::Grade,
        states: &[State],
    ) -> Result<(Arc<GradedPiece>, RationalMatrix), VertexError> {
        let shift = op.shift(self)?;
        let target = match src.shifted(shift) {
            Some(t) => cache.get(self, t)?,
            None => Arc::new(GradedPiece::from_basis(src, Vec::new())),
        };
        let columns: Result<Vec<SparseVec>, VertexError> =
            states.par_iter().map(|s| target.coordinates(&op.apply(self, s))).collect();
        Ok((target.clone(), RationalMatrix::from_columns(target.dim(), columns?)))
    }

    /// Matrix of `op` on a whole piece.
    pub fn operator_matrix(
        &self,
        cache: &PieceCache,
        op: &GradedOperator,
        src: &GradedPiece,
    ) -> Result<(Arc<GradedPiece>, RationalMatrix), VertexError> {
        let states: Vec<State> = (0..src.dim()).map(|i| src.basis_state(i)).collect();
        self.operator_matrix_on(cache, op, src.grade, &states)
    }
}

#[cfg(test)]
mod tests {
    use super::super::testing::weil_c;
    use super::*;

    #[test]
    fn composition_and_combination() {
        let gs = weil_c();
        let b0 = GradedOperator::mode(gs.gen_state(0), 0);
        let c1 = GradedOperator::mode(gs.gen_state(1), -1);
        let s = gs.create(&[(3, -1)]);
        // [b(0), c(−1)]₊ = 1.
        let anti = GradedOperator::Combination(vec![
            (Q::ONE, GradedOperator::Compose(vec![b0.clone(), c1.clone()])),
            (Q::ONE, GradedOperator::Compose(vec![c1.clone(), b0.clone()])),
        ]);
        assert_eq!(anti.apply(&gs, &s), s);
        assert_eq!(anti.shift(&gs).unwrap(), (0, 0, 0));
        assert_eq!(b0.shift(&gs).unwrap(), (-1, 0, 0));
        let bad = GradedOperator::Combination(vec![(Q::ONE, b0), (Q::ONE, c1)]);
        assert!(bad.shift(&gs).is_err());
    }

    #[test]
    fn exponential_of_nilpotent_mode() {
        let gs = weil_c();
        // K = :γ b: and K(0)c = γ, K(0)γ = 0.
        let k = gs.create(&[(0, -1), (3, -1)]);
        let op = GradedOperator::Exp { field: k, mode: 0, scale: Q::ONE };
        let c = gs.gen_state(1);
        assert_eq!(op.apply(&gs, &c), c.plus(&gs.gen_state(3)));
        assert!(op.shift(&gs).is_err());
    }
}
