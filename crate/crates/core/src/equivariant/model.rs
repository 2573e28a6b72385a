//! Cochain models selected by name: the Weil model `(𝒲⊗𝒜)_bas`, the Cartan
//! model `(𝒲_hor⊗𝒜)^{𝔤≥}` with `d_G`, and the small Cartan complex
//! `⟨γ⟩⊗𝒜^{𝔱≥}` for tori.
//!
//! Each model splits its differential into commuting pieces `d` of bidegree
//! (0, 1) and `δ` of bidegree (1, 0); all constraint operators preserve the
//! bidegree, so kernels are computed block by block and every cochain basis
//! vector is bihomogeneous.

use std::collections::BTreeMap;
use std::ops::RangeInclusive;
use std::sync::Arc;

use rayon::prelude::*;

use super::TensorAlgebra;
use crate::error::{Error, Result};
use crate::homology::{
    combine, image_basis, kernel_basis, ComplexPiece, DoubleComplex, RationalMatrix, SparseVec, Subspace,
};
use crate::rational::Q;
use crate::vertex::{Family, GeneratorSet, Grade, GradedOperator, GradedPiece, Monomial, PieceCache, State};

pub trait Model: Send + Sync {
    fn name(&self) -> &'static str;
    fn describe(&self) -> &'static str;
    fn validate(&self, _t: &TensorAlgebra) -> Result<()> {
        Ok(())
    }
    /// Monomials of `𝒲⊗𝒜` the cochains may involve.
    fn keep(&self, t: &TensorAlgebra, m: &Monomial) -> bool;
    /// Annihilation conditions at a given weight, imposed group by group.
    fn constraints(&self, t: &TensorAlgebra, weight: u32) -> Vec<Vec<GradedOperator>>;
    /// Field whose zero mode is the differential.
    fn differential(&self, t: &TensorAlgebra) -> State;
    /// Fields whose zero modes are `d` and `δ`.
    fn split(&self, t: &TensorAlgebra) -> (State, State);
    /// `(p, q)` with `p + q` the total degree.
    fn bidegree(&self, t: &TensorAlgebra, m: &Monomial) -> (i32, i32);
}

/// Modes `0..=weight` of each field; higher modes vanish on the piece.
fn window(fields: &[State], weight: u32) -> Vec<GradedOperator> {
    let mut out = Vec::new();
    for f in fields {
        if f.is_zero() {
            continue;
        }
        for k in 0..=weight as i64 {
            out.push(GradedOperator::mode(f.clone(), k));
        }
    }
    out
}

fn bc_number(t: &TensorAlgebra, m: &Monomial) -> i32 {
    t.weil_count(m, Family::C) - t.weil_count(m, Family::B)
}

fn betagamma_number(t: &TensorAlgebra, m: &Monomial) -> i32 {
    t.weil_count(m, Family::Gamma) - t.weil_count(m, Family::Beta)
}

/// `Σ_i (−γ_i⊗ι_i + c_i⊗L_i)`, the correction term in `d_G`.
fn cartan_correction(t: &TensorAlgebra) -> (State, State) {
    let gamma_iota = t.contract_with(Family::Gamma, |i| t.iota_coeff(i)).scaled(&Q::int(-1));
    let c_l = t.contract_with(Family::C, |i| t.l_coeff(i));
    (gamma_iota, c_l)
}

pub struct WeilModel;
pub struct CartanModel;
pub struct SmallCartanModel;

impl Model for WeilModel {
    fn name(&self) -> &'static str {
        "weil"
    }

    fn describe(&self) -> &'static str {
        "basic subcomplex of W(g)⊗A with D(0) + d_A"
    }

    fn keep(&self, _t: &TensorAlgebra, _m: &Monomial) -> bool {
        true
    }

    fn constraints(&self, t: &TensorAlgebra, weight: u32) -> Vec<Vec<GradedOperator>> {
        vec![window(&t.iota_tot, weight), window(&t.l_tot, weight)]
    }

    fn differential(&self, t: &TensorAlgebra) -> State {
        t.d_tot.clone()
    }

    fn split(&self, t: &TensorAlgebra) -> (State, State) {
        (t.weil.k(), t.weil.j().plus(&t.d_coeff()))
    }

    fn bidegree(&self, t: &TensorAlgebra, m: &Monomial) -> (i32, i32) {
        let bg = betagamma_number(t, m);
        (bc_number(t, m) + bg + t.coeff_degree(m), bg)
    }
}

impl Model for CartanModel {
    fn name(&self) -> &'static str {
        "cartan"
    }

    fn describe(&self) -> &'static str {
        "g>=-invariants of W_hor⊗A with the Mathai-Quillen conjugated differential"
    }

    fn keep(&self, t: &TensorAlgebra, m: &Monomial) -> bool {
        t.weil_count(m, Family::C) == 0
    }

    fn constraints(&self, t: &TensorAlgebra, weight: u32) -> Vec<Vec<GradedOperator>> {
        vec![window(&t.l_tot, weight)]
    }

    fn differential(&self, t: &TensorAlgebra) -> State {
        let (gi, cl) = cartan_correction(t);
        t.d_tot.plus(&gi).plus(&cl)
    }

    fn split(&self, t: &TensorAlgebra) -> (State, State) {
        let (gi, cl) = cartan_correction(t);
        (t.weil.k().plus(&t.d_coeff()), t.weil.j().plus(&gi).plus(&cl))
    }

    fn bidegree(&self, t: &TensorAlgebra, m: &Monomial) -> (i32, i32) {
        let bg = betagamma_number(t, m);
        (bg - t.weil_count(m, Family::B), bg + t.coeff_degree(m))
    }
}

impl Model for SmallCartanModel {
    fn name(&self) -> &'static str {
        "small-cartan"
    }

    fn describe(&self) -> &'static str {
        "<gamma>⊗A^{t>=} with d_A - (gamma⊗iota)(0), tori only"
    }

    fn validate(&self, t: &TensorAlgebra) -> Result<()> {
        if t.weil.lie.is_abelian() {
            Ok(())
        } else {
            Err(Error::NonAbelian("the small Cartan complex"))
        }
    }

    fn keep(&self, t: &TensorAlgebra, m: &Monomial) -> bool {
        [Family::B, Family::C, Family::Beta].iter().all(|&f| t.weil_count(m, f) == 0)
    }

    fn constraints(&self, t: &TensorAlgebra, weight: u32) -> Vec<Vec<GradedOperator>> {
        let l: Vec<State> = (0..t.dim()).map(|a| t.l_coeff(a)).collect();
        vec![window(&l, weight)]
    }

    fn differential(&self, t: &TensorAlgebra) -> State {
        let (d, delta) = self.split(t);
        d.plus(&delta)
    }

    fn split(&self, t: &TensorAlgebra) -> (State, State) {
        (t.d_coeff(), cartan_correction(t).0)
    }

    fn bidegree(&self, t: &TensorAlgebra, m: &Monomial) -> (i32, i32) {
        let p = t.weil_count(m, Family::Gamma);
        (p, p + t.coeff_degree(m))
    }
}

pub fn model_names() -> &'static [&'static str] {
    &["weil", "cartan", "small-cartan"]
}

pub fn model_by_name(name: &str) -> Result<Box<dyn Model>> {
    match name {
        "weil" => Ok(Box::new(WeilModel)),
        "cartan" => Ok(Box::new(CartanModel)),
        "small-cartan" => Ok(Box::new(SmallCartanModel)),
        _ => Err(Error::Input(format!("unknown model {name:?}; expected one of {}", model_names().join(", ")))),
    }
}

/// Joint kernel of the operator groups on the span of `states` (all of grade
/// `grade`), as combinations of those states.
pub fn joint_kernel(
    gs: &GeneratorSet,
    cache: &PieceCache,
    grade: Grade,
    mut states: Vec<State>,
    groups: &[Vec<GradedOperator>],
) -> Result<Vec<State>> {
    for group in groups {
        if states.is_empty() {
            break;
        }
        let mut blocks = Vec::with_capacity(group.len());
        for op in group {
            blocks.push(gs.operator_matrix_on(cache, op, grade, &states)?.1);
        }
        if blocks.is_empty() {
            continue;
        }
        let kernel = kernel_basis(&RationalMatrix::vstack(&blocks));
        states = kernel
            .iter()
            .map(|k| {
                let mut s = State::zero();
                for (j, c) in k {
                    s.add_scaled(&states[*j], c);
                }
                s
            })
            .collect();
    }
    Ok(states)
}

/// Kernel of all `ι^tot_ξ(k)` on a piece of `𝒲⊗𝒜`.
pub fn horizontal_subspace(t: &TensorAlgebra, grade: Grade) -> Result<Vec<State>> {
    let piece = t.piece(grade)?;
    let states = (0..piece.dim()).map(|i| piece.basis_state(i)).collect();
    joint_kernel(&t.gs, &t.cache, grade, states, &[window(&t.iota_tot, grade.weight)])
}

/// Kernel of all `ι^tot_ξ(k)` and then `L^tot_ξ(k)`.
pub fn basic_subspace(t: &TensorAlgebra, grade: Grade) -> Result<Vec<State>> {
    let piece = t.piece(grade)?;
    let states = (0..piece.dim()).map(|i| piece.basis_state(i)).collect();
    joint_kernel(&t.gs, &t.cache, grade, states, &WeilModel.constraints(t, grade.weight))
}

/// A bihomogeneous basis of the cochains of one `(degree, weight, charge)`.
#[derive(Clone, Debug)]
pub struct Cochains {
    pub grade: Grade,
    pub ambient: Arc<GradedPiece>,
    /// Basis vectors in the coordinates of `ambient`.
    pub vectors: Vec<SparseVec>,
    pub bidegrees: Vec<(i32, i32)>,
}

impl Cochains {
    pub fn compute(model: &dyn Model, t: &TensorAlgebra, grade: Grade) -> Result<Self> {
        let ambient = t.piece(grade)?;
        let mut blocks: BTreeMap<(i32, i32), Vec<State>> = BTreeMap::new();
        for (i, m) in ambient.basis.iter().enumerate() {
            if model.keep(t, m) {
                blocks.entry(model.bidegree(t, m)).or_default().push(ambient.basis_state(i));
            }
        }
        let groups = model.constraints(t, grade.weight);
        let mut vectors = Vec::new();
        let mut bidegrees = Vec::new();
        for (bd, states) in blocks {
            for s in joint_kernel(&t.gs, &t.cache, grade, states, &groups)? {
                vectors.push(ambient.coordinates(&s)?);
                bidegrees.push(bd);
            }
        }
        Ok(Cochains { grade, ambient, vectors, bidegrees })
    }

    pub fn dim(&self) -> usize {
        self.vectors.len()
    }

    pub fn state(&self, i: usize) -> State {
        self.ambient.state_of(&self.vectors[i])
    }

    pub fn states(&self) -> Vec<State> {
        (0..self.dim()).map(|i| self.state(i)).collect()
    }

    pub fn subspace(&self) -> Subspace {
        Subspace { ambient: self.ambient.dim(), basis: self.vectors.clone() }
    }

    /// Coordinates of a state in this basis; `None` if it is not a cochain.
    pub fn coordinates_of(&self, s: &State) -> Option<SparseVec> {
        let v = self.ambient.coordinates(s).ok()?;
        self.subspace().coordinates(&[v]).map(|mut c| c.pop().unwrap())
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CohomologyRow {
    pub degree: i32,
    pub weight: u32,
    pub charge: i32,
    pub dim: usize,
    pub cochains: usize,
    pub representatives: Vec<State>,
}

/// Cochains in degrees `lo..=hi` of one weight and charge, with differentials.
pub struct ModelComplex {
    pub model: &'static str,
    pub weight: u32,
    pub charge: i32,
    /// First enumerated degree; cohomology is reported from `lo + 1`.
    pub lo: i32,
    pub cochains: Vec<Cochains>,
    pub maps: Vec<RationalMatrix>,
}

/// Matrix of `op(0)` between two cochain spaces.
fn cochain_map(t: &TensorAlgebra, field: &State, src: &Cochains, dst: &Cochains) -> Result<RationalMatrix> {
    let op = GradedOperator::mode(field.clone(), 0);
    if src.dim() == 0 || field.is_zero() {
        return Ok(RationalMatrix::zeros(dst.dim(), src.dim()));
    }
    let (target, m) = t.gs.operator_matrix_on(&t.cache, &op, src.grade, &src.states())?;
    if target.grade != dst.grade {
        return Err(Error::Internal(format!("differential maps {:?} to {:?}", src.grade, target.grade)));
    }
    let coords = dst
        .subspace()
        .coordinates(m.columns())
        .ok_or_else(|| Error::Internal(format!("differential leaves the cochains at {:?}", dst.grade)))?;
    Ok(RationalMatrix::from_columns(dst.dim(), coords))
}

/// Builds the cochains for degrees `degrees.start()-1 ..= degrees.end()+1`
/// so that cohomology is defined on the whole requested range.
pub fn build_complex(
    model: &dyn Model,
    t: &TensorAlgebra,
    weight: u32,
    charge: i32,
    degrees: RangeInclusive<i32>,
) -> Result<ModelComplex> {
    let (lo, hi) = (*degrees.start(), *degrees.end());
    if lo > hi {
        return Err(Error::Input(format!("empty degree range {lo}..{hi}")));
    }
    model.validate(t)?;
    let cochains: Vec<Cochains> = (lo - 1..=hi + 1)
        .into_par_iter()
        .map(|deg| Cochains::compute(model, t, Grade::with_charge(deg, weight, charge)))
        .collect::<Result<_>>()?;
    let d = model.differential(t);
    let maps = cochains
        .par_windows(2)
        .map(|w| cochain_map(t, &d, &w[0], &w[1]))
        .collect::<Result<Vec<_>>>()?;
    Ok(ModelComplex { model: model.name(), weight, charge, lo: lo - 1, cochains, maps })
}

impl ModelComplex {
    pub fn hi(&self) -> i32 {
        self.lo + self.cochains.len() as i32 - 1
    }

    pub fn at(&self, degree: i32) -> Option<&Cochains> {
        (degree >= self.lo && degree <= self.hi()).then(|| &self.cochains[(degree - self.lo) as usize])
    }

    pub fn complex(&self) -> Result<ComplexPiece> {
        Ok(ComplexPiece::new(self.lo, self.cochains.iter().map(|c| c.dim()).collect(), self.maps.clone())?)
    }

    /// Cohomology at every degree strictly inside the enumerated range.
    pub fn rows(&self) -> Result<Vec<CohomologyRow>> {
        let complex = self.complex()?;
        (self.lo + 1..self.hi())
            .map(|n| {
                let h = complex.cohomology(n)?;
                let c = self.at(n).unwrap();
                let representatives = h.representatives.iter().map(|r| c.ambient.state_of(&combine(&c.vectors, r))).collect();
                Ok(CohomologyRow {
                    degree: n,
                    weight: self.weight,
                    charge: self.charge,
                    dim: h.dim,
                    cochains: c.dim(),
                    representatives,
                })
            })
            .collect()
    }

    pub fn dims(&self) -> Result<BTreeMap<i32, usize>> {
        Ok(self.rows()?.into_iter().map(|r| (r.degree, r.dim)).collect())
    }

    /// The same cochains as a double complex under the model's split.
    pub fn double_complex(&self, model: &dyn Model, t: &TensorAlgebra) -> Result<DoubleComplex> {
        let (d, delta) = model.split(t);
        let pairs: Vec<(RationalMatrix, RationalMatrix)> = self
            .cochains
            .par_windows(2)
            .map(|w| Ok((cochain_map(t, &d, &w[0], &w[1])?, cochain_map(t, &delta, &w[0], &w[1])?)))
            .collect::<Result<_>>()?;
        let (d, delta) = pairs.into_iter().unzip();
        Ok(DoubleComplex {
            lo: self.lo,
            columns: self.cochains.iter().map(|c| c.bidegrees.iter().map(|b| b.0).collect()).collect(),
            d,
            delta,
            zero_below: false,
            zero_above: false,
        })
    }

    /// Class of a cochain in the cohomology basis of [`ModelComplex::rows`];
    /// errors if `s` is not a cocycle of the complex.
    pub fn class_of(&self, degree: i32, s: &State) -> Result<Vec<Q>> {
        if degree <= self.lo || degree >= self.hi() {
            return Err(Error::Input(format!("degree {degree} is not inside the complex")));
        }
        let c = self.at(degree).unwrap();
        let v = c.coordinates_of(s).ok_or(Error::NotACocycle("a cochain"))?;
        let idx = (degree - self.lo) as usize;
        if !self.maps[idx].apply(&v).is_empty() {
            return Err(Error::NotACocycle("closed"));
        }
        let incoming = &self.maps[idx - 1];
        let h = self.complex()?.cohomology(degree)?;
        let mut basis: Vec<SparseVec> = image_basis(incoming).into_iter().map(|j| incoming.column(j).clone()).collect();
        let boundaries = basis.len();
        basis.extend(h.representatives.iter().cloned());
        let span = Subspace { ambient: c.dim(), basis };
        let coords = span
            .coordinates(&[v])
            .ok_or_else(|| Error::Internal("cocycle outside boundaries plus representatives".into()))?
            .pop()
            .unwrap();
        let mut out = vec![Q::ZERO; h.dim];
        for (j, x) in coords {
            if j >= boundaries {
                out[j - boundaries] = x;
            }
        }
        Ok(out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lie::LieAlgebra;
    use crate::weil::WeilAlgebra;

    fn partitions_at_most(m: u32, parts: u32) -> usize {
        fn go(m: u32, parts: u32, max: u32) -> usize {
            if m == 0 {
                return 1;
            }
            if parts == 0 {
                return 0;
            }
            (1..=max.min(m)).map(|k| go(m - k, parts - 1, k)).sum()
        }
        go(m, parts, m)
    }

    #[test]
    fn abelian_point_matches_partitions() {
        let t = TensorAlgebra::point(WeilAlgebra::new(LieAlgebra::abelian(1), None));
        for m in 0..=2 {
            let c = build_complex(&WeilModel, &t, m, 0, 0..=6).unwrap();
            for row in c.rows().unwrap() {
                let want = if row.degree % 2 == 0 { partitions_at_most(m, row.degree as u32 / 2) } else { 0 };
                assert_eq!(row.dim, want, "degree {} weight {m}", row.degree);
            }
        }
    }

    #[test]
    fn models_agree_on_small_pieces() {
        let t = TensorAlgebra::point(WeilAlgebra::new(LieAlgebra::abelian(1), None));
        for m in 0..=2 {
            let w = build_complex(&WeilModel, &t, m, 0, 0..=4).unwrap().dims().unwrap();
            let c = build_complex(&CartanModel, &t, m, 0, 0..=4).unwrap().dims().unwrap();
            let s = build_complex(&SmallCartanModel, &t, m, 0, 0..=4).unwrap().dims().unwrap();
            assert_eq!(w, c);
            assert_eq!(w, s);
        }
    }

    #[test]
    fn weil_basic_is_horizontal_for_tori() {
        let t = TensorAlgebra::point(WeilAlgebra::new(LieAlgebra::abelian(2), None));
        let g = Grade::new(2, 1);
        assert_eq!(horizontal_subspace(&t, g).unwrap().len(), basic_subspace(&t, g).unwrap().len());
    }

    #[test]
    fn small_cartan_needs_a_torus() {
        let t = TensorAlgebra::point(WeilAlgebra::with_default_form(LieAlgebra::sl2()));
        assert!(matches!(build_complex(&SmallCartanModel, &t, 0, 0, 0..=2), Err(Error::NonAbelian(_))));
        assert!(build_complex(&WeilModel, &t, 0, 0, 3..=2).is_err());
        assert!(model_by_name("nope").is_err());
    }

    #[test]
    fn split_is_a_double_complex() {
        let t = TensorAlgebra::point(WeilAlgebra::with_default_form(LieAlgebra::sl2()));
        for model in [&WeilModel as &dyn Model, &CartanModel] {
            let c = build_complex(model, &t, 1, 0, 2..=5).unwrap();
            let dc = c.double_complex(model, &t).unwrap();
            let res = dc.pages(6).unwrap();
            assert!(res.consistent(), "{}", model.name());
        }
    }
}
