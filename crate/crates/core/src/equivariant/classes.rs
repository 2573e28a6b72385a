//! Named classes: the Chern–Weil map, basic elements of `⟨γ⟩`, and the
//! topological vertex algebra structure on `𝒲(ℂ)`.

use super::model::{joint_kernel, Model, ModelComplex, WeilModel};
use super::{PieceWindow, TensorAlgebra};
use crate::error::Result;
use crate::lie::LieAlgebra;
use crate::rational::Q;
use crate::report::Report;
use crate::vertex::{Family, GeneratorSet, Grade, GradedPiece, State};
use crate::weil::WeilAlgebra;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ClassImage {
    pub degree: i32,
    /// Coordinates in the representative basis of the target cohomology.
    pub coordinates: Vec<Q>,
}

impl ClassImage {
    pub fn is_zero(&self) -> bool {
        self.coordinates.iter().all(|x| x.is_zero())
    }
}

/// `a ↦ a⊗1` for a basic cocycle `a` of `𝒲(𝔤)`, located in the Weil-model
/// cohomology of `𝒲⊗𝒜` held by `target`.
pub fn chern_weil(target: &ModelComplex, a: &State) -> Result<ClassImage> {
    // Weil generators keep their indices in the product, so `a` is already `a⊗1`.
    let degree = target
        .cochains
        .iter()
        .find(|c| c.ambient.coordinates(a).is_ok())
        .map(|c| c.grade.degree)
        .ok_or(crate::error::Error::NotACocycle("a cochain"))?;
    Ok(ClassImage { degree, coordinates: target.class_of(degree, a)? })
}

/// Basis of `⟨γ⟩ ∩ (𝒲⊗𝒜)_bas` in one piece.
pub fn gamma_basic(t: &TensorAlgebra, grade: Grade) -> Result<Vec<State>> {
    let piece = t.piece(grade)?;
    let states = piece
        .basis
        .iter()
        .enumerate()
        .filter(|(_, m)| m.modes().iter().all(|x| {
            let g = t.gs.generator(x.gen as usize);
            g.factor == 0 && g.family == Family::Gamma
        }))
        .map(|(i, _)| piece.basis_state(i))
        .collect();
    joint_kernel(&t.gs, &t.cache, grade, states, &WeilModel.constraints(t, grade.weight))
}

/// `𝒲(ℂ)` with its TVA fields `L = −:b∂c: + :β∂γ:`, `F = −:bc:`, `J = :cβ:`,
/// `G = :b∂γ:`.
pub fn weil_c() -> (WeilAlgebra, [State; 4]) {
    let w = WeilAlgebra::new(LieAlgebra::abelian(1), None);
    let gs = &w.gs;
    let (b, c, beta, gamma) = (0, 1, 2, 3);
    let l = w.omega_w();
    let f = w.j_bc();
    let j = gs.create(&[(c, -1), (beta, -1)]);
    let g = gs.create(&[(b, -1), (gamma, -2)]);
    (w, [l, f, j, g])
}

/// The TVA relations for a quadruple `(L, F, J, G)`.
pub fn tva_check(gs: &GeneratorSet, fields: &[State; 4], window: &PieceWindow) -> Report {
    let [l, f, j, g] = fields;
    let mut r = Report::new("tva", "W(C)").cutoff("max_weight", window.max_weight as i64);
    let eq = |lhs: State, rhs: &State, what: &str| {
        if &lhs == rhs {
            Ok("holds".to_string())
        } else {
            Err(format!("{what} = {}", gs.show(&lhs)))
        }
    };
    r.check("J(0)G = L", eq(gs.field_mode(j, 0, g), l, "J(0)G"));
    r.check("F(0)J = J", eq(gs.field_mode(f, 0, j), j, "F(0)J"));
    r.check("F(0)G = -G", eq(gs.field_mode(f, 0, g), &g.scaled(&Q::int(-1)), "F(0)G"));
    r.check("L Virasoro c = 0", gs.virasoro_matches(l, &Q::ZERO).map(|_| "c = 0".into()));
    let scalar = |s: &State| s.terms().all(|(m, _)| m.is_empty());
    r.check("F current", {
        let ff = gs.ope(f, f);
        let lf = gs.ope(l, f);
        if ff.keys().any(|&p| p > 2) || ff.get(&1).is_some() || !ff.get(&2).map_or(true, scalar) {
            Err("F(z)F(w) is not a level-k current OPE".into())
        } else if lf.keys().any(|&p| p > 3) || !lf.get(&3).map_or(true, scalar) {
            Err("L(z)F(w) has a non-scalar third-order pole".into())
        } else if lf.get(&2) != Some(f) || lf.get(&1) != Some(&gs.derivative(f)) {
            Err("L(z)F(w) lacks F/(z-w)^2 + dF/(z-w)".into())
        } else {
            Ok("weight-1 quasi-primary current".into())
        }
    });
    r.check("J primary of weight 1", gs.primary_matches(l, j, 1).map(|_| "holds".into()));
    r.check("G primary of weight 2", gs.primary_matches(l, g, 2).map(|_| "holds".into()));
    let mut count = 0;
    let mut square = Ok(());
    'outer: for grade in window.grades() {
        let piece = match GradedPiece::enumerate(gs, grade) {
            Ok(p) => p,
            Err(e) => {
                square = Err(e.to_string());
                break;
            }
        };
        for i in 0..piece.dim() {
            let v = piece.basis_state(i);
            if !gs.field_mode(j, 0, &gs.field_mode(j, 0, &v)).is_zero() {
                square = Err(format!("J(0)^2 {} != 0", gs.show(&v)));
                break 'outer;
            }
            count += 1;
        }
    }
    r.check("J(0)^2 = 0", square.map(|_| format!("{count} basis vectors")));
    r
}

/// Class-level facts about `𝐋` in the basic cohomology of a point:
/// `𝐋(0)a = ∂a` and `𝐋(1)a = (wt a)a` on basic `⟨γ⟩` elements, `𝐋∘₁𝐋 = 2𝐋`,
/// and `[𝐋] ≠ 0`. All equalities are modulo `D(0)`-exact basic elements.
/// Only results of weight at most `max_weight` are examined.
pub fn virasoro_class_check(t: &TensorAlgebra, max_weight: u32, max_degree: i32) -> Result<Report> {
    let gs = &t.gs;
    let bfl = t.weil.bfl()?;
    let mut r = Report::new("bfl", &t.weil.lie.name)
        .cutoff("max_weight", max_weight as i64)
        .cutoff("max_degree", max_degree as i64);
    let complexes: Vec<ModelComplex> = (0..=max_weight.max(2))
        .map(|m| super::build_complex(&WeilModel, t, m, 0, 0..=max_degree.max(0)))
        .collect::<Result<_>>()?;
    let exact = |s: &State| -> Result<bool> {
        if s.is_zero() {
            return Ok(true);
        }
        let g = gs.grade_of(s).ok_or_else(|| crate::error::Error::Internal("inhomogeneous state".into()))?;
        let c = &complexes[g.weight as usize];
        Ok(c.class_of(g.degree, s)?.iter().all(|x| x.is_zero()))
    };
    let mut checked = [0usize; 2];
    let mut failures: [Option<String>; 2] = [None, None];
    for m in 0..=max_weight {
        for d in 0..=max_degree / 2 {
            for a in gamma_basic(t, Grade::new(2 * d, m))? {
                let checks = [
                    (m < max_weight, gs.field_mode(&bfl, 0, &a).minus(&gs.derivative(&a))),
                    (true, gs.field_mode(&bfl, 1, &a).minus(&a.scaled(&Q::int(m as i64)))),
                ];
                for (i, (run, diff)) in checks.into_iter().enumerate() {
                    if !run || failures[i].is_some() {
                        continue;
                    }
                    if exact(&diff)? {
                        checked[i] += 1;
                    } else {
                        failures[i] = Some(format!("fails on {} at (degree {}, weight {m})", gs.show(&a), 2 * d));
                    }
                }
            }
        }
    }
    let outcome = |i: usize| failures[i].clone().map_or_else(|| Ok(format!("{} basic elements", checked[i])), Err);
    r.check("bfL(0) a = da", outcome(0));
    r.check("bfL(1) a = wt(a) a", outcome(1));
    let l = &complexes[2];
    let class = l.class_of(0, &bfl)?;
    r.check(
        "bfL is not exact",
        if class.iter().any(|x| !x.is_zero()) { Ok("nonzero class at (0, 2)".into()) } else { Err("bfL is exact".into()) },
    );
    let square = gs.circle(&bfl, &bfl, 1).minus(&bfl.scaled(&Q::int(2)));
    r.check(
        "bfL o1 bfL = 2 bfL",
        if exact(&square)? { Ok("modulo exact terms".into()) } else { Err("difference is not exact".into()) },
    );
    Ok(r)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::equivariant::build_complex;

    #[test]
    fn tva_relations_hold() {
        let (w, fields) = weil_c();
        let r = tva_check(&w.gs, &fields, &PieceWindow::new(2, -3..=4));
        assert!(r.passed(), "{r}");
    }

    #[test]
    fn lone_l_fails() {
        let (w, [l, ..]) = weil_c();
        let zero = State::zero();
        let r = tva_check(&w.gs, &[l, zero.clone(), zero.clone(), zero], &PieceWindow::new(0, 0..=0));
        assert_eq!(r.find("J(0)G = L").unwrap().status, crate::report::Status::Fail);
    }

    #[test]
    fn unit_maps_to_unit() {
        let t = TensorAlgebra::point(WeilAlgebra::with_default_form(LieAlgebra::sl2()));
        let c = build_complex(&WeilModel, &t, 0, 0, 0..=0).unwrap();
        let img = chern_weil(&c, &State::vacuum()).unwrap();
        assert_eq!(img.coordinates, vec![Q::ONE]);
    }

    #[test]
    fn gamma_basic_at_weight_zero_is_invariant_polynomials() {
        let t = TensorAlgebra::point(WeilAlgebra::with_default_form(LieAlgebra::sl2()));
        let dims: Vec<usize> = (0..=4).map(|d| gamma_basic(&t, Grade::new(2 * d, 0)).unwrap().len()).collect();
        assert_eq!(dims, vec![1, 0, 1, 0, 1]);
    }

    #[test]
    fn virasoro_class_for_sl2() {
        let t = TensorAlgebra::point(WeilAlgebra::with_default_form(LieAlgebra::sl2()));
        let r = virasoro_class_check(&t, 2, 4).unwrap();
        assert!(r.passed(), "{r}");
    }
}
