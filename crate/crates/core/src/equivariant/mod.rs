//! O(s𝔤)-algebras, their tensor products with `𝒲(𝔤)`, and the Weil, Cartan
//! and small Cartan models of chiral equivariant cohomology.

mod classes;
mod mathai_quillen;
mod model;
mod tensor;

use std::ops::RangeInclusive;
use std::path::Path;

use rayon::prelude::*;
use serde::Deserialize;

pub use classes::{chern_weil, gamma_basic, tva_check, virasoro_class_check, weil_c, ClassImage};
pub use mathai_quillen::{mathai_quillen, mq_field, verify_mathai_quillen, MqPiece};
pub use model::{
    basic_subspace, build_complex, horizontal_subspace, joint_kernel, model_by_name, model_names, CartanModel,
    Cochains, CohomologyRow, Model, ModelComplex, SmallCartanModel, WeilModel,
};
pub use tensor::TensorAlgebra;

use crate::error::{Error, Result};
use crate::lie::{lie_from_value, load_lie_algebra, LieAlgebra};
use crate::rational::Q;
use crate::report::Report;
use crate::vertex::{Family, Generator, GeneratorSet, Grade, Parity, PieceCache, State};
use crate::weil::WeilAlgebra;

/// A finite window of `(degree, weight, charge)` pieces.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PieceWindow {
    pub max_weight: u32,
    pub degrees: RangeInclusive<i32>,
    pub charges: RangeInclusive<i32>,
}

impl PieceWindow {
    pub fn new(max_weight: u32, degrees: RangeInclusive<i32>) -> Self {
        PieceWindow { max_weight, degrees, charges: 0..=0 }
    }

    pub fn with_charges(mut self, charges: RangeInclusive<i32>) -> Self {
        self.charges = charges;
        self
    }

    pub fn grades(&self) -> Vec<Grade> {
        let mut out = Vec::new();
        for w in 0..=self.max_weight {
            for d in self.degrees.clone() {
                for c in self.charges.clone() {
                    out.push(Grade::with_charge(d, w, c));
                }
            }
        }
        out
    }
}

/// A free-field algebra with fields `L_ξ`, `ι_ξ` and a differential given as
/// the zero mode of a field. Generators carry factor 1 so the algebra can sit
/// next to `𝒲(𝔤)` in a tensor product.
pub struct OsgStructure {
    pub name: String,
    pub lie: LieAlgebra,
    pub gs: GeneratorSet,
    pub l_fields: Vec<State>,
    pub iota_fields: Vec<State>,
    /// The differential is `differential(0)`.
    pub differential: State,
    /// Named auxiliary fields: `omega` (conformal vector) and `homotopy`
    /// (a field whose mode 1 contracts `d` onto `omega(1)`), when present.
    pub extras: Vec<(String, State)>,
    pub cache: PieceCache,
}

impl OsgStructure {
    /// The one-dimensional algebra ℂ with `L = ι = d = 0`.
    pub fn trivial(lie: &LieAlgebra) -> Self {
        let n = lie.dim();
        OsgStructure {
            name: "point".into(),
            lie: lie.clone(),
            gs: GeneratorSet::empty(),
            l_fields: vec![State::zero(); n],
            iota_fields: vec![State::zero(); n],
            differential: State::zero(),
            extras: Vec::new(),
            cache: PieceCache::new(),
        }
    }

    /// `𝒲(𝔤)` itself with `L = Θ_𝒲`, `ι = b`, `d = D(0)`; labels get a prime.
    pub fn weil(lie: &LieAlgebra) -> Self {
        let w = WeilAlgebra::tagged(lie.clone(), None, 1, "'");
        let n = lie.dim();
        OsgStructure {
            name: "weil".into(),
            lie: lie.clone(),
            l_fields: (0..n).map(|a| w.theta_w(a)).collect(),
            iota_fields: (0..n).map(|a| w.gen(Family::B, a)).collect(),
            differential: w.d(),
            extras: vec![("omega".into(), w.omega_w()), ("homotopy".into(), w.h())],
            gs: w.gs,
            cache: PieceCache::new(),
        }
    }

    /// Polynomial chiral de Rham algebra of the linear action `rho` on `ℂ^N`.
    ///
    /// Coordinates `γ^j` and their differentials `c^j` carry charge +1, the
    /// conjugates `β^j`, `b^j` charge −1, so each `(degree, weight, charge)`
    /// piece is finite.
    pub fn linear_model(lie: &LieAlgebra, rho: &[Vec<Vec<Q>>]) -> Result<Self> {
        let n = lie.dim();
        if rho.len() != n {
            return Err(Error::Input(format!("{} matrices for a {n}-dimensional algebra", rho.len())));
        }
        let dim = rho.first().map_or(0, |m| m.len());
        if rho.iter().any(|m| m.len() != dim || m.iter().any(|r| r.len() != dim)) {
            return Err(Error::Input(format!("representation matrices must all be {dim}x{dim}")));
        }
        check_homomorphism(lie, rho)?;

        let mut gens = Vec::with_capacity(4 * dim);
        let spec = [
            ("b", Parity::Odd, 1, -1, -1, Family::B),
            ("c", Parity::Odd, 0, 1, 1, Family::C),
            ("beta", Parity::Even, 1, 0, -1, Family::Beta),
            ("gamma", Parity::Even, 0, 0, 1, Family::Gamma),
        ];
        for (name, parity, weight, degree, charge, family) in spec {
            for slot in 0..dim {
                gens.push(Generator {
                    label: format!("{name}_{}", slot + 1),
                    parity,
                    weight,
                    degree,
                    charge,
                    family,
                    factor: 1,
                    slot,
                });
            }
        }
        let mut contractions = Vec::new();
        for j in 0..dim {
            contractions.push((j, dim + j, Q::ONE));
            contractions.push((dim + j, j, Q::ONE));
            contractions.push((2 * dim + j, 3 * dim + j, Q::ONE));
            contractions.push((3 * dim + j, 2 * dim + j, Q::int(-1)));
        }
        let gs = GeneratorSet::new(gens, &contractions)?;
        let (b, c, beta, gamma) = (|j| j, |j| dim + j, |j| 2 * dim + j, |j| 3 * dim + j);

        let mut d = State::zero();
        let mut omega = State::zero();
        let mut g = State::zero();
        for j in 0..dim {
            d.add_scaled(&gs.create(&[(beta(j), -1), (c(j), -1)]), &Q::ONE);
            omega.add_scaled(&gs.create(&[(beta(j), -1), (gamma(j), -2)]), &Q::ONE);
            omega.add_scaled(&gs.create(&[(b(j), -1), (c(j), -2)]), &Q::int(-1));
            g.add_scaled(&gs.create(&[(b(j), -1), (gamma(j), -2)]), &Q::ONE);
        }
        // ι_ξ = −Σ ρ(ξ)_{jk} :γ^k b^j:. The sign makes ξ ↦ L_ξ a homomorphism:
        // L_ξ acts on the coordinate functions γ^j by the transpose of ρ(ξ).
        let iota: Vec<State> = rho
            .iter()
            .map(|m| {
                let mut s = State::zero();
                for (j, row) in m.iter().enumerate() {
                    for (k, x) in row.iter().enumerate() {
                        if !x.is_zero() {
                            s.add_scaled(&gs.create(&[(gamma(k), -1), (b(j), -1)]), &-x.clone());
                        }
                    }
                }
                s
            })
            .collect();
        let l = iota.iter().map(|i| gs.field_mode(&d, 0, i)).collect();
        Ok(OsgStructure {
            name: format!("linear(N={dim})"),
            lie: lie.clone(),
            gs,
            l_fields: l,
            iota_fields: iota,
            differential: d,
            extras: vec![("omega".into(), omega), ("homotopy".into(), g)],
            cache: PieceCache::new(),
        })
    }

    pub fn extra(&self, name: &str) -> Option<&State> {
        self.extras.iter().find(|(n, _)| n == name).map(|(_, s)| s)
    }

    /// Field by name: `L(x)`, `iota(x)`, `d`, or an extra.
    pub fn named_field(&self, name: &str, params: &[usize]) -> Result<State> {
        match (name, params) {
            ("L", [i]) if *i < self.lie.dim() => Ok(self.l_fields[*i].clone()),
            ("iota", [i]) if *i < self.lie.dim() => Ok(self.iota_fields[*i].clone()),
            ("d", []) => Ok(self.differential.clone()),
            (n, []) => self.extra(n).cloned().ok_or_else(|| Error::UnknownField(n.into())),
            (n, _) => Err(Error::Input(format!("bad parameters for {n}"))),
        }
    }
}

/// Exact check that `ρ([e_i, e_j]) = [ρ(e_i), ρ(e_j)]` on all basis pairs.
pub fn check_homomorphism(lie: &LieAlgebra, rho: &[Vec<Vec<Q>>]) -> Result<()> {
    let n = lie.dim();
    let dim = rho.first().map_or(0, |m| m.len());
    let mul = |a: &Vec<Vec<Q>>, b: &Vec<Vec<Q>>| -> Vec<Vec<Q>> {
        (0..dim).map(|i| (0..dim).map(|j| (0..dim).map(|k| &a[i][k] * &b[k][j]).sum()).collect()).collect()
    };
    for i in 0..n {
        for j in i + 1..n {
            let (ab, ba) = (mul(&rho[i], &rho[j]), mul(&rho[j], &rho[i]));
            for r in 0..dim {
                for s in 0..dim {
                    let lhs: Q = (0..n).map(|k| lie.c(i, j, k) * &rho[k][r][s]).sum();
                    if lhs != &ab[r][s] - &ba[r][s] {
                        return Err(Error::NotHomomorphism(lie.basis[i].clone(), lie.basis[j].clone()));
                    }
                }
            }
        }
    }
    Ok(())
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RepFile {
    algebra: serde_json::Value,
    #[serde(rename = "N")]
    n: usize,
    matrices: Vec<Vec<Vec<Q>>>,
}

/// Parses a representation document. A string `algebra` is a path, resolved
/// against `base` when relative.
pub fn load_representation(text: &str, base: Option<&Path>) -> Result<(LieAlgebra, Vec<Vec<Vec<Q>>>)> {
    let file: RepFile = serde_json::from_str(text).map_err(|e| Error::Input(format!("representation file: {e}")))?;
    let lie = match &file.algebra {
        serde_json::Value::String(p) => {
            let path = match base {
                Some(b) if Path::new(p).is_relative() => b.join(p),
                _ => Path::new(p).to_path_buf(),
            };
            let text = std::fs::read_to_string(&path).map_err(|e| Error::Input(format!("{}: {e}", path.display())))?;
            load_lie_algebra(&text)?
        }
        v => lie_from_value(v)?,
    };
    if file.matrices.len() != lie.dim() {
        return Err(Error::Input(format!("{} matrices for a {}-dimensional algebra", file.matrices.len(), lie.dim())));
    }
    if file.matrices.iter().any(|m| m.len() != file.n || m.iter().any(|r| r.len() != file.n)) {
        return Err(Error::Input(format!("matrices must be {0}x{0}", file.n)));
    }
    Ok((lie, file.matrices))
}

fn bracket_coeffs(lie: &LieAlgebra, a: usize, b: usize) -> Vec<(usize, Q)> {
    (0..lie.dim()).filter(|&k| !lie.c(a, b, k).is_zero()).map(|k| (k, lie.c(a, b, k).clone())).collect()
}

fn combination(fields: &[State], coeffs: &[(usize, Q)]) -> State {
    let mut out = State::zero();
    for (k, c) in coeffs {
        out.add_scaled(&fields[*k], c);
    }
    out
}

/// The O(s𝔤) axioms: current-type OPEs of `L` and `ι`, `d(0)ι = L`, declared
/// grades, and `d(0)² = 0` on every piece of the window.
pub fn check_osg_axioms(s: &OsgStructure, window: &PieceWindow) -> Report {
    let gs = &s.gs;
    let n = s.lie.dim();
    let mut r = Report::new("osg", &format!("{} over {}", s.name, s.lie.name))
        .cutoff("max_weight", window.max_weight as i64)
        .cutoff("min_degree", *window.degrees.start() as i64)
        .cutoff("max_degree", *window.degrees.end() as i64);
    let label = |a: usize, b: usize| format!("({}, {})", s.lie.basis[a], s.lie.basis[b]);
    let pairs = |f: &dyn Fn(usize, usize) -> Result<(), String>| -> Result<String, String> {
        for a in 0..n {
            for b in 0..n {
                f(a, b).map_err(|e| format!("{}: {e}", label(a, b)))?;
            }
        }
        Ok(format!("{} pairs", n * n))
    };
    let single = |e: State| if e.is_zero() { vec![] } else { vec![(1, e)] };
    r.check(
        "L L OPE",
        pairs(&|a, b| gs.ope_matches(&s.l_fields[a], &s.l_fields[b], &single(combination(&s.l_fields, &bracket_coeffs(&s.lie, a, b))))),
    );
    r.check(
        "L iota OPE",
        pairs(&|a, b| {
            gs.ope_matches(&s.l_fields[a], &s.iota_fields[b], &single(combination(&s.iota_fields, &bracket_coeffs(&s.lie, a, b))))
        }),
    );
    r.check("iota iota OPE", pairs(&|a, b| gs.ope_matches(&s.iota_fields[a], &s.iota_fields[b], &[])));
    r.check(
        "d iota = L",
        (0..n)
            .try_for_each(|a| {
                let got = gs.field_mode(&s.differential, 0, &s.iota_fields[a]);
                if got == s.l_fields[a] {
                    Ok(())
                } else {
                    Err(format!("d(0) iota({}) = {}", s.lie.basis[a], gs.show(&got)))
                }
            })
            .map(|_| format!("{n} basis elements")),
    );
    r.check(
        "declared grades",
        (0..n)
            .try_for_each(|a| {
                for (f, deg, what) in [(&s.l_fields[a], 0, "L"), (&s.iota_fields[a], -1, "iota")] {
                    match gs.grade_of(f) {
                        None if f.is_zero() => {}
                        Some(g) if g == Grade::new(deg, 1) => {}
                        other => return Err(format!("{what}({}) has grade {other:?}", s.lie.basis[a])),
                    }
                }
                Ok(())
            })
            .and_then(|_| match gs.grade_of(&s.differential) {
                None if s.differential.is_zero() => Ok(()),
                Some(g) if g == Grade::new(1, 1) => Ok(()),
                other => Err(format!("differential field has grade {other:?}")),
            })
            .map(|_| "L (0, 1), iota (-1, 1), d (1, 1)".into()),
    );
    if let Some(omega) = s.extra("omega") {
        r.check(
            "L and iota primary of weight 1",
            (0..n)
                .try_for_each(|a| {
                    for f in [&s.l_fields[a], &s.iota_fields[a]] {
                        if !f.is_zero() {
                            gs.primary_matches(omega, f, 1).map_err(|e| format!("at {}: {e}", s.lie.basis[a]))?;
                        }
                    }
                    Ok(())
                })
                .map(|_| format!("{n} basis elements")),
        );
    }
    let homotopy = s.extra("omega").zip(s.extra("homotopy"));
    let grades = window.grades();
    // Per piece: counts of checked vectors, or the first failure of each kind.
    let outcomes: Vec<(Result<usize, String>, Result<usize, String>)> = grades
        .par_iter()
        .map(|&grade| {
            let piece = match s.cache.get(gs, grade) {
                Ok(p) => p,
                Err(e) => return (Err(e.to_string()), Ok(0)),
            };
            let (mut square, mut contraction) = (Ok(0), Ok(0));
            for i in 0..piece.dim() {
                let v = piece.basis_state(i);
                let dv = gs.field_mode(&s.differential, 0, &v);
                if let Ok(c) = &mut square {
                    if gs.field_mode(&s.differential, 0, &dv).is_zero() {
                        *c += 1;
                    } else {
                        square = Err(format!("fails on {}", gs.show(&v)));
                    }
                }
                if let (Some((omega, h)), Ok(c)) = (homotopy, &mut contraction) {
                    let lhs = gs.field_mode(&s.differential, 0, &gs.field_mode(h, 1, &v)).plus(&gs.field_mode(h, 1, &dv));
                    if lhs == gs.field_mode(omega, 1, &v) {
                        *c += 1;
                    } else {
                        contraction = Err(format!("fails on {}", gs.show(&v)));
                    }
                }
            }
            (square, contraction)
        })
        .collect();
    let fold = |xs: Vec<Result<usize, String>>| -> Result<String, String> {
        xs.into_iter().try_fold(0, |acc, x| x.map(|c| acc + c)).map(|c| format!("{c} basis vectors"))
    };
    let square = fold(outcomes.iter().map(|o| o.0.clone()).collect());
    let contraction = fold(outcomes.iter().map(|o| o.1.clone()).collect());
    r.check("d^2 = 0 on pieces", square);
    if homotopy.is_some() {
        r.check("[d, homotopy(1)] = omega(1)", contraction);
    }
    r
}

#[cfg(test)]
mod tests {
    use super::*;

    pub(crate) fn sl2_standard() -> Vec<Vec<Vec<Q>>> {
        let z = Q::ZERO;
        let o = Q::ONE;
        vec![
            vec![vec![z.clone(), o.clone()], vec![z.clone(), z.clone()]],
            vec![vec![o.clone(), z.clone()], vec![z.clone(), -o.clone()]],
            vec![vec![z.clone(), z.clone()], vec![o, z]],
        ]
    }

    #[test]
    fn trivial_and_weil_pass() {
        let lie = LieAlgebra::sl2();
        let r = check_osg_axioms(&OsgStructure::trivial(&lie), &PieceWindow::new(2, 0..=0));
        assert!(r.passed(), "{r}");
        let r = check_osg_axioms(&OsgStructure::weil(&lie), &PieceWindow::new(1, -2..=3));
        assert!(r.passed(), "{r}");
    }

    #[test]
    fn linear_sl2_passes() {
        let lie = LieAlgebra::sl2();
        let s = OsgStructure::linear_model(&lie, &sl2_standard()).unwrap();
        let r = check_osg_axioms(&s, &PieceWindow::new(2, -1..=3).with_charges(0..=2));
        assert!(r.passed(), "{r}");
    }

    #[test]
    fn wrong_sign_breaks_the_homomorphism() {
        // Negated ι gives L_ξ = −ρ(ξ)ᵀ, an anti-homomorphism.
        let lie = LieAlgebra::sl2();
        let mut s = OsgStructure::linear_model(&lie, &sl2_standard()).unwrap();
        s.iota_fields = s.iota_fields.iter().map(|f| f.scaled(&Q::int(-1))).collect();
        s.l_fields = s.l_fields.iter().map(|f| f.scaled(&Q::int(-1))).collect();
        let r = check_osg_axioms(&s, &PieceWindow::new(0, 0..=0));
        assert!(r.find("L L OPE").unwrap().status == crate::report::Status::Fail);
    }

    #[test]
    fn rejects_non_homomorphism() {
        let lie = LieAlgebra::sl2();
        let mut rho = sl2_standard();
        rho[1][1][1] = Q::ZERO;
        assert!(matches!(OsgStructure::linear_model(&lie, &rho), Err(Error::NotHomomorphism(..))));
    }

    #[test]
    fn zero_representation_is_inert() {
        let lie = LieAlgebra::abelian(1);
        let s = OsgStructure::linear_model(&lie, &[vec![vec![Q::ZERO]]]).unwrap();
        assert!(s.iota_fields[0].is_zero() && s.l_fields[0].is_zero());
        assert!(check_osg_axioms(&s, &PieceWindow::new(1, 0..=1).with_charges(0..=1)).passed());
    }

    #[test]
    fn representation_file_inline() {
        let text = r#"{"algebra": {"name": "t1", "dim": 1, "basis": ["t"], "brackets": []}, "N": 1, "matrices": [[["1"]]]}"#;
        let (lie, rho) = load_representation(text, None).unwrap();
        assert_eq!(lie.dim(), 1);
        assert_eq!(rho[0][0][0], Q::ONE);
        assert!(load_representation(r#"{"algebra": {"name": "t1", "dim": 1, "basis": ["t"]}, "N": 2, "matrices": [[["1"]]]}"#, None).is_err());
    }
}
