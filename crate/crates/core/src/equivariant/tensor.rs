use std::sync::Arc;

use super::OsgStructure;
use crate::error::{Error, Result};
use crate::vertex::{Family, GeneratorSet, Grade, GradedOperator, GradedPiece, Monomial, PieceCache, State};
use crate::weil::WeilAlgebra;

/// `𝒲(𝔤)⊗𝒜`. The Weil generators come first with their own indices, so a
/// Weil state is literally a state of the product; coefficient states are
/// lifted by shifting generator indices. The engine's sign rule for odd
/// generators is the Koszul rule of the graded tensor product.
pub struct TensorAlgebra {
    pub weil: WeilAlgebra,
    pub coeff: OsgStructure,
    pub gs: GeneratorSet,
    pub cache: PieceCache,
    offset: usize,
    pub l_tot: Vec<State>,
    pub iota_tot: Vec<State>,
    pub d_tot: State,
}

impl TensorAlgebra {
    pub fn new(weil: WeilAlgebra, coeff: OsgStructure) -> Result<Self> {
        if weil.lie != coeff.lie {
            return Err(Error::Input("Weil algebra and coefficient algebra are over different Lie algebras".into()));
        }
        if coeff.gs.generators().iter().any(|g| g.factor == 0) {
            return Err(Error::Input("coefficient generators must carry factor 1".into()));
        }
        let gs = weil.gs.concat(&coeff.gs)?;
        let offset = weil.gs.len();
        let n = weil.dim();
        let l_tot = (0..n).map(|a| weil.theta_w(a).plus(&coeff.l_fields[a].shifted(offset))).collect();
        let iota_tot = (0..n).map(|a| weil.gen(Family::B, a).plus(&coeff.iota_fields[a].shifted(offset))).collect();
        let d_tot = weil.d().plus(&coeff.differential.shifted(offset));
        Ok(TensorAlgebra { weil, coeff, gs, cache: PieceCache::new(), offset, l_tot, iota_tot, d_tot })
    }

    /// `𝒲(𝔤)⊗ℂ`.
    pub fn point(weil: WeilAlgebra) -> Self {
        let coeff = OsgStructure::trivial(&weil.lie);
        TensorAlgebra::new(weil, coeff).expect("the point is a valid coefficient algebra")
    }

    pub fn dim(&self) -> usize {
        self.weil.dim()
    }

    /// `1⊗a` for a state of the coefficient algebra.
    pub fn lift(&self, a: &State) -> State {
        a.shifted(self.offset)
    }

    pub fn piece(&self, grade: Grade) -> Result<Arc<GradedPiece>> {
        Ok(self.cache.get(&self.gs, grade)?)
    }

    pub fn weil_gen(&self, family: Family, i: usize) -> State {
        self.weil.gen(family, i)
    }

    pub fn l_coeff(&self, a: usize) -> State {
        self.lift(&self.coeff.l_fields[a])
    }

    pub fn iota_coeff(&self, a: usize) -> State {
        self.lift(&self.coeff.iota_fields[a])
    }

    pub fn d_coeff(&self) -> State {
        self.lift(&self.coeff.differential)
    }

    /// Count of Weil-factor modes of one family.
    pub fn weil_count(&self, m: &Monomial, family: Family) -> i32 {
        self.gs.family_count(m, family, 0)
    }

    /// `deg_𝒜`, the degree carried by the coefficient factor.
    pub fn coeff_degree(&self, m: &Monomial) -> i32 {
        self.gs.factor_degree(m, 1)
    }

    /// `Σ_i :X_i Y_i:` over the basis, with `X` a Weil generator family.
    pub fn contract_with(&self, family: Family, fields: impl Fn(usize) -> State) -> State {
        let mut out = State::zero();
        for i in 0..self.dim() {
            out.add_scaled(&self.gs.wick(&self.weil_gen(family, i), &fields(i)), &crate::rational::Q::ONE);
        }
        out
    }

    pub fn mode(&self, field: &State, k: i64) -> GradedOperator {
        GradedOperator::mode(field.clone(), k)
    }
}
