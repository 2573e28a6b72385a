//! The Mathai–Quillen automorphism `Φ = exp(φ(0))`, `φ = Σ_i c_i⊗ι_i`, as
//! exact matrices on the pieces of `𝒲⊗𝒜`.

use std::collections::HashMap;
use std::sync::Mutex;

use rayon::prelude::*;

use super::model::{CartanModel, Cochains, WeilModel};
use super::{PieceWindow, TensorAlgebra};
use crate::error::{Error, Result};
use crate::homology::{RationalMatrix, Subspace};
use crate::report::Report;
use crate::vertex::{Family, Grade, GradedOperator, State};

/// `φ = Σ_i :c_i ι_i:` with `c_i` from `𝒲` and `ι_i` from `𝒜`.
pub fn mq_field(t: &TensorAlgebra) -> State {
    t.contract_with(Family::C, |i| t.iota_coeff(i))
}

#[derive(Clone, Debug)]
pub struct MqPiece {
    pub grade: Grade,
    pub phi: RationalMatrix,
    pub exp: RationalMatrix,
    pub inverse: RationalMatrix,
    /// Smallest `k` with `φ(0)^k = 0` on the piece.
    pub nilpotency: usize,
}

/// `Φ` on one piece. The nilpotency bound `2(m+1)·dim 𝔤` follows from each
/// application of `φ(0)` consuming one of finitely many `ι`-modes.
pub fn mathai_quillen(t: &TensorAlgebra, grade: Grade) -> Result<MqPiece> {
    let piece = t.piece(grade)?;
    let op = GradedOperator::mode(mq_field(t), 0);
    let (_, phi) = t.gs.operator_matrix(&t.cache, &op, &piece)?;
    let bound = 2 * (grade.weight as usize + 1) * t.dim() + 1;
    let mut nilpotency = 0;
    let mut power = RationalMatrix::identity(piece.dim());
    while !power.is_zero() {
        if nilpotency > bound {
            return Err(Error::Internal(format!("phi(0) is not nilpotent on {grade:?}")));
        }
        power = phi.mul(&power);
        nilpotency += 1;
    }
    let exp = phi.exp_nilpotent(bound).ok_or_else(|| Error::Internal(format!("phi(0) is not nilpotent on {grade:?}")))?;
    let inverse = phi.scale(&crate::rational::Q::int(-1)).exp_nilpotent(bound).unwrap();
    Ok(MqPiece { grade, phi, exp, inverse, nilpotency })
}

struct PhiCache<'a> {
    t: &'a TensorAlgebra,
    map: Mutex<HashMap<Grade, std::sync::Arc<MqPiece>>>,
}

impl PhiCache<'_> {
    fn get(&self, g: Grade) -> Result<std::sync::Arc<MqPiece>> {
        if let Some(p) = self.map.lock().unwrap().get(&g) {
            return Ok(p.clone());
        }
        let p = std::sync::Arc::new(mathai_quillen(self.t, g)?);
        Ok(self.map.lock().unwrap().entry(g).or_insert(p).clone())
    }
}

/// `Φ X = Y Φ` as matrices from `grade`.
fn conjugates(cache: &PhiCache, grade: Grade, x: &GradedOperator, y: &GradedOperator) -> Result<bool> {
    let t = cache.t;
    let piece = t.piece(grade)?;
    let (tx, mx) = t.gs.operator_matrix(&t.cache, x, &piece)?;
    let (ty, my) = t.gs.operator_matrix(&t.cache, y, &piece)?;
    if tx.dim() == 0 && ty.dim() == 0 {
        return Ok(true);
    }
    if tx.grade != ty.grade {
        return Err(Error::Internal("conjugated operators have different shifts".into()));
    }
    let (src, dst) = (cache.get(grade)?, cache.get(tx.grade)?);
    Ok(dst.exp.mul(&mx) == my.mul(&src.exp))
}

/// The three conjugation identities, invertibility, nilpotency, and
/// `Φ((𝒲⊗𝒜)_bas) = C_G(𝒜)` on every piece of the window.
pub fn verify_mathai_quillen(t: &TensorAlgebra, window: &PieceWindow) -> Report {
    let mut r = Report::new("mathai-quillen", &format!("{} over {}", t.coeff.name, t.weil.lie.name))
        .cutoff("max_weight", window.max_weight as i64)
        .cutoff("min_degree", *window.degrees.start() as i64)
        .cutoff("max_degree", *window.degrees.end() as i64);
    let cache = PhiCache { t, map: Mutex::new(HashMap::new()) };
    let n = t.dim();
    let (gi, cl) = {
        let gamma_iota = t.contract_with(Family::Gamma, |i| t.iota_coeff(i));
        (gamma_iota.scaled(&crate::rational::Q::int(-1)), t.contract_with(Family::C, |i| t.l_coeff(i)))
    };
    let d = GradedOperator::mode(t.d_tot.clone(), 0);
    let dg = GradedOperator::mode(t.d_tot.plus(&gi).plus(&cl), 0);
    let names = ["Phi invertible", "Phi L Phi^-1 = L", "Phi iota Phi^-1 = b", "Phi d Phi^-1 = d_G", "Phi(basic) = C_G"];
    let grades = window.grades();
    let outcomes: Vec<Result<[usize; 5], String>> = grades
        .par_iter()
        .map(|&g| {
            let e = |e: Error| format!("{g:?}: {e}");
            let mut counts = [0usize; 5];
            let p = cache.get(g).map_err(e)?;
            if p.exp.mul(&p.inverse) != RationalMatrix::identity(p.exp.rows()) {
                return Err(format!("{}: {g:?}", names[0]));
            }
            counts[0] += 1;
            for a in 0..n {
                for k in 0..=g.weight as i64 {
                    let l = GradedOperator::mode(t.l_tot[a].clone(), k);
                    if !conjugates(&cache, g, &l, &l).map_err(e)? {
                        return Err(format!("{} fails at {g:?}, basis {a}, mode {k}", names[1]));
                    }
                    counts[1] += 1;
                    let iota = GradedOperator::mode(t.iota_tot[a].clone(), k);
                    let b = GradedOperator::mode(t.weil_gen(Family::B, a), k);
                    if !conjugates(&cache, g, &iota, &b).map_err(e)? {
                        return Err(format!("{} fails at {g:?}, basis {a}, mode {k}", names[2]));
                    }
                    counts[2] += 1;
                }
            }
            if !conjugates(&cache, g, &d, &dg).map_err(e)? {
                return Err(format!("{} fails at {g:?}", names[3]));
            }
            counts[3] += 1;
            let basic = Cochains::compute(&WeilModel, t, g).map_err(e)?;
            let cartan = Cochains::compute(&CartanModel, t, g).map_err(e)?;
            let images: Vec<_> = basic.vectors.iter().map(|v| p.exp.apply(v)).collect();
            let target = Subspace { ambient: cartan.ambient.dim(), basis: cartan.vectors.clone() };
            if basic.dim() != cartan.dim() || target.coordinates(&images).is_none() {
                return Err(format!("{} fails at {g:?}: basic {} vs Cartan {}", names[4], basic.dim(), cartan.dim()));
            }
            counts[4] += basic.dim();
            Ok(counts)
        })
        .collect();
    let mut totals: Vec<Result<usize, String>> = vec![Ok(0); 5];
    for o in outcomes {
        match o {
            Ok(c) => {
                for (i, x) in c.iter().enumerate() {
                    if let Ok(tot) = &mut totals[i] {
                        *tot += x;
                    }
                }
            }
            Err(msg) => {
                let i = names.iter().position(|nm| msg.starts_with(nm)).unwrap_or(0);
                if totals[i].is_ok() {
                    totals[i] = Err(msg);
                }
            }
        }
    }
    let units = ["pieces", "mode pairs", "mode pairs", "pieces", "basic vectors"];
    for ((name, res), unit) in names.iter().zip(totals).zip(units) {
        r.check(*name, res.map(|c| format!("{c} {unit}")));
    }
    r
}
