//! The semi-infinite Weil algebra `𝒲(𝔤) = 𝓔(𝔤)⊗𝓢(𝔤)` and its named fields.
//!
//! Generators are laid out as `b_i, c_i, β_i, γ_i` (indices `i`, `n+i`,
//! `2n+i`, `3n+i`); `c_i` and `γ_i` carry dual-basis indices. Sums usually
//! written over a κ-orthonormal basis are contractions with `κ⁻¹` on
//! `𝔤`-indexed pairs and with `κ` on `𝔤*`-indexed pairs.

use std::sync::Arc;

use crate::error::{Error, Result};
use crate::homology::RationalMatrix;
use crate::lie::{form_inverse, BilinearForm, LieAlgebra};
use crate::rational::Q;
use crate::report::Report;
use crate::vertex::{Family, Generator, GeneratorSet, Grade, GradedOperator, GradedPiece, Parity, PieceCache, State};

pub struct WeilAlgebra {
    pub lie: LieAlgebra,
    pub form: Option<BilinearForm>,
    form_inv: Option<Vec<Vec<Q>>>,
    pub gs: GeneratorSet,
    pub cache: PieceCache,
    factor: u8,
}

/// Names accepted by [`WeilAlgebra::named_field`] that take one basis label.
pub const INDEXED_FIELDS: &[&str] = &["b", "c", "beta", "gamma", "theta_E", "theta_S", "theta_W"];
/// Names accepted by [`WeilAlgebra::named_field`] without parameters.
pub const PLAIN_FIELDS: &[&str] = &[
    "D", "J", "K", "omega_E", "omega_S", "omega_W", "j_bc", "j_betagamma", "h", "L_S", "B", "C", "bfL",
    "gamma_dgamma", "primitive",
];

/// The Weil generators over `lie`, tagged with `factor`; labels get `suffix`.
pub fn weil_generators(lie: &LieAlgebra, factor: u8, suffix: &str) -> (Vec<Generator>, Vec<(usize, usize, Q)>) {
    let n = lie.dim();
    let mut gens = Vec::with_capacity(4 * n);
    let spec = [
        ("b", Parity::Odd, 1, -1, Family::B),
        ("c", Parity::Odd, 0, 1, Family::C),
        ("beta", Parity::Even, 1, -2, Family::Beta),
        ("gamma", Parity::Even, 0, 2, Family::Gamma),
    ];
    for (name, parity, weight, degree, family) in spec {
        for (slot, x) in lie.basis.iter().enumerate() {
            gens.push(Generator {
                label: format!("{name}[{x}]{suffix}"),
                parity,
                weight,
                degree,
                charge: 0,
                family,
                factor,
                slot,
            });
        }
    }
    let mut contractions = Vec::with_capacity(4 * n);
    for i in 0..n {
        contractions.push((i, n + i, Q::ONE));
        contractions.push((n + i, i, Q::ONE));
        contractions.push((2 * n + i, 3 * n + i, Q::ONE));
        contractions.push((3 * n + i, 2 * n + i, Q::int(-1)));
    }
    (gens, contractions)
}

impl WeilAlgebra {
    /// `𝒲(𝔤)`; metric-dependent fields use `form` when it is nondegenerate.
    pub fn new(lie: LieAlgebra, form: Option<BilinearForm>) -> Self {
        WeilAlgebra::tagged(lie, form, 0, "")
    }

    /// A copy whose generators carry `factor` and a label suffix, for use as
    /// the coefficient algebra of a tensor product with another `𝒲(𝔤)`.
    pub fn tagged(lie: LieAlgebra, form: Option<BilinearForm>, factor: u8, suffix: &str) -> Self {
        let (gens, contractions) = weil_generators(&lie, factor, suffix);
        let gs = GeneratorSet::new(gens, &contractions).expect("Weil generators are consistent");
        let form_inv = form.as_ref().and_then(|f| form_inverse(f).ok());
        WeilAlgebra { lie, form, form_inv, gs, cache: PieceCache::new(), factor }
    }

    /// Uses the form declared with the algebra, falling back to the Killing form.
    pub fn with_default_form(lie: LieAlgebra) -> Self {
        let form = lie.declared_form.clone().unwrap_or_else(|| lie.killing_form());
        WeilAlgebra::new(lie, Some(form))
    }

    pub fn dim(&self) -> usize {
        self.lie.dim()
    }

    pub fn index(&self, family: Family, i: usize) -> usize {
        let n = self.dim();
        i + n * match family {
            Family::B => 0,
            Family::C => 1,
            Family::Beta => 2,
            Family::Gamma => 3,
        }
    }

    pub fn gen(&self, family: Family, i: usize) -> State {
        self.gs.gen_state(self.index(family, i))
    }

    /// `g₁(−1)⋯g_r(−1)|0⟩`, which is the iterated Wick product of the generators.
    fn product(&self, gens: &[(Family, usize)]) -> State {
        let modes: Vec<(usize, i64)> = gens.iter().map(|&(f, i)| (self.index(f, i), -1)).collect();
        self.gs.create(&modes)
    }

    fn term(&self, modes: &[(Family, usize, i64)]) -> State {
        let modes: Vec<(usize, i64)> = modes.iter().map(|&(f, i, m)| (self.index(f, i), m)).collect();
        self.gs.create(&modes)
    }

    /// `ad*(e_a)e_j′ = −Σ_k c^j_{ak} e_k′` as `(k, coefficient)` pairs.
    pub fn coadjoint(&self, a: usize, j: usize) -> Vec<(usize, Q)> {
        (0..self.dim()).filter(|&k| !self.lie.c(a, k, j).is_zero()).map(|k| (k, -self.lie.c(a, k, j).clone())).collect()
    }

    /// The generator of `family` evaluated on a coefficient vector.
    pub fn gen_combination(&self, family: Family, coeffs: &[(usize, Q)]) -> State {
        let mut out = State::zero();
        for (k, c) in coeffs {
            out.add_scaled(&self.gen(family, *k), c);
        }
        out
    }

    pub fn theta_e(&self, a: usize) -> State {
        let mut out = State::zero();
        for i in 0..self.dim() {
            for k in 0..self.dim() {
                let c = self.lie.c(a, i, k);
                if !c.is_zero() {
                    out.add_scaled(&self.product(&[(Family::B, k), (Family::C, i)]), c);
                }
            }
        }
        out
    }

    pub fn theta_s(&self, a: usize) -> State {
        let mut out = State::zero();
        for i in 0..self.dim() {
            for k in 0..self.dim() {
                let c = self.lie.c(a, i, k);
                if !c.is_zero() {
                    out.add_scaled(&self.product(&[(Family::Beta, k), (Family::Gamma, i)]), &-c.clone());
                }
            }
        }
        out
    }

    pub fn theta_w(&self, a: usize) -> State {
        self.theta_e(a).plus(&self.theta_s(a))
    }

    pub fn j(&self) -> State {
        let n = self.dim();
        let half = Q::new(-1, 2);
        let mut out = State::zero();
        for i in 0..n {
            for j in 0..n {
                for k in 0..n {
                    let c = self.lie.c(i, j, k);
                    if c.is_zero() {
                        continue;
                    }
                    let t = self.product(&[(Family::C, i), (Family::Gamma, j), (Family::Beta, k)]);
                    out.add_scaled(&t, &-c.clone());
                    let t = self.product(&[(Family::C, i), (Family::C, j), (Family::B, k)]);
                    out.add_scaled(&t, &(&half * c));
                }
            }
        }
        out
    }

    pub fn k(&self) -> State {
        let mut out = State::zero();
        for i in 0..self.dim() {
            out.add_scaled(&self.product(&[(Family::Gamma, i), (Family::B, i)]), &Q::ONE);
        }
        out
    }

    pub fn d(&self) -> State {
        self.j().plus(&self.k())
    }

    fn sum_over_basis(&self, f: impl Fn(usize) -> State) -> State {
        let mut out = State::zero();
        for i in 0..self.dim() {
            out.add_scaled(&f(i), &Q::ONE);
        }
        out
    }

    pub fn omega_e(&self) -> State {
        self.sum_over_basis(|i| self.term(&[(Family::B, i, -1), (Family::C, i, -2)])).scaled(&Q::int(-1))
    }

    pub fn omega_s(&self) -> State {
        self.sum_over_basis(|i| self.term(&[(Family::Beta, i, -1), (Family::Gamma, i, -2)]))
    }

    pub fn omega_w(&self) -> State {
        self.omega_e().plus(&self.omega_s())
    }

    pub fn j_bc(&self) -> State {
        self.sum_over_basis(|i| self.product(&[(Family::B, i), (Family::C, i)])).scaled(&Q::int(-1))
    }

    pub fn j_betagamma(&self) -> State {
        self.sum_over_basis(|i| self.product(&[(Family::Beta, i), (Family::Gamma, i)]))
    }

    /// `h = :β_i ∂c_i:`, the contracting homotopy with `D(0)h = ω_𝒲`.
    pub fn h(&self) -> State {
        self.sum_over_basis(|i| self.term(&[(Family::Beta, i, -1), (Family::C, i, -2)]))
    }

    fn metric(&self) -> Result<(&BilinearForm, &Vec<Vec<Q>>)> {
        match (&self.form, &self.form_inv) {
            (Some(f), Some(inv)) => Ok((f, inv)),
            _ => Err(crate::lie::LieError::Degenerate.into()),
        }
    }

    pub fn has_metric(&self) -> bool {
        self.metric().is_ok()
    }

    /// Whether the form in use is exactly the Killing form.
    pub fn form_is_killing(&self) -> bool {
        self.form.as_ref() == Some(&self.lie.killing_form())
    }

    /// `Σ κ⁻¹^{ij} f(i, j)`.
    fn inverse_contraction(&self, f: impl Fn(usize, usize) -> State) -> Result<State> {
        let (_, inv) = self.metric()?;
        let mut out = State::zero();
        for i in 0..self.dim() {
            for j in 0..self.dim() {
                if !inv[i][j].is_zero() {
                    out.add_scaled(&f(i, j), &inv[i][j]);
                }
            }
        }
        Ok(out)
    }

    /// Sugawara field `L_𝓢 = −Σ κ⁻¹^{ij} :Θ_𝓢^i Θ_𝓢^j:`.
    pub fn sugawara(&self) -> Result<State> {
        let thetas: Vec<State> = (0..self.dim()).map(|i| self.theta_s(i)).collect();
        Ok(self.inverse_contraction(|i, j| self.gs.wick(&thetas[i], &thetas[j]))?.scaled(&Q::int(-1)))
    }

    pub fn b_field(&self) -> Result<State> {
        self.inverse_contraction(|i, j| self.product(&[(Family::Beta, i), (Family::Beta, j)]))
    }

    /// `C = Σ κ⁻¹^{ij} :(K(0)Θ_𝓢^i) b_j:`.
    pub fn correction(&self) -> Result<State> {
        let k = self.k();
        self.inverse_contraction(|i, j| {
            let t = self.gs.field_mode(&k, 0, &self.theta_s(i));
            self.gs.wick(&t, &self.gen(Family::B, j))
        })
    }

    /// `Σ κ⁻¹^{ij} :Θ_𝓢^i b_j:`.
    pub fn theta_s_b(&self) -> Result<State> {
        self.inverse_contraction(|i, j| self.gs.wick(&self.theta_s(i), &self.gen(Family::B, j)))
    }

    /// The Virasoro element `𝐋 = ω_𝓢 − L_𝓢 + C`.
    pub fn bfl(&self) -> Result<State> {
        Ok(self.omega_s().minus(&self.sugawara()?).plus(&self.correction()?))
    }

    /// `Σ κ_{ij} :γ_i ∂γ_j:`.
    pub fn gamma_dgamma(&self) -> Result<State> {
        let (form, _) = self.metric()?;
        let mut out = State::zero();
        for i in 0..self.dim() {
            for j in 0..self.dim() {
                if !form.matrix[i][j].is_zero() {
                    out.add_scaled(&self.term(&[(Family::Gamma, i, -1), (Family::Gamma, j, -2)]), &form.matrix[i][j]);
                }
            }
        }
        Ok(out)
    }

    /// `Θ_𝓢^{ξᵢ}b^{ξᵢ} + β^{ξᵢ}∂c^{ξᵢ′}`, whose `D(0)`-image is `𝐋`.
    pub fn primitive(&self) -> Result<State> {
        Ok(self.theta_s_b()?.plus(&self.h()))
    }

    pub fn basis_index(&self, label: &str) -> Result<usize> {
        self.lie.index_of(label).ok_or_else(|| Error::Input(format!("unknown basis label {label:?}")))
    }

    /// A field by name; `params` holds basis indices for the indexed names.
    pub fn named_field(&self, name: &str, params: &[usize]) -> Result<State> {
        let one = |f: &dyn Fn(usize) -> State| -> Result<State> {
            match params {
                [i] if *i < self.dim() => Ok(f(*i)),
                _ => Err(Error::Input(format!("{name} takes exactly one basis element"))),
            }
        };
        if !INDEXED_FIELDS.contains(&name) && !params.is_empty() {
            return Err(Error::Input(format!("{name} takes no parameters")));
        }
        match name {
            "b" => one(&|i| self.gen(Family::B, i)),
            "c" => one(&|i| self.gen(Family::C, i)),
            "beta" => one(&|i| self.gen(Family::Beta, i)),
            "gamma" => one(&|i| self.gen(Family::Gamma, i)),
            "theta_E" => one(&|i| self.theta_e(i)),
            "theta_S" => one(&|i| self.theta_s(i)),
            "theta_W" => one(&|i| self.theta_w(i)),
            "D" => Ok(self.d()),
            "J" => Ok(self.j()),
            "K" => Ok(self.k()),
            "omega_E" => Ok(self.omega_e()),
            "omega_S" => Ok(self.omega_s()),
            "omega_W" => Ok(self.omega_w()),
            "j_bc" => Ok(self.j_bc()),
            "j_betagamma" => Ok(self.j_betagamma()),
            "h" => Ok(self.h()),
            "L_S" => self.sugawara(),
            "B" => self.b_field(),
            "C" => self.correction(),
            "bfL" => self.bfl(),
            "gamma_dgamma" => self.gamma_dgamma(),
            "primitive" => self.primitive(),
            _ => Err(Error::UnknownField(name.into())),
        }
    }

    /// `(bc#, βγ#)` of a monomial.
    pub fn bidegree(&self, m: &crate::vertex::Monomial) -> (i32, i32) {
        let f = |fam| self.gs.family_count(m, fam, self.factor);
        (f(Family::C) - f(Family::B), f(Family::Gamma) - f(Family::Beta))
    }

    pub fn piece(&self, degree: i32, weight: u32) -> Result<Arc<GradedPiece>> {
        Ok(self.cache.get(&self.gs, Grade::new(degree, weight))?)
    }

    /// PBW basis of `(degree, weight)`, optionally restricted to one `(bc#, βγ#)`.
    pub fn bigraded_basis(&self, degree: i32, weight: u32, bidegree: Option<(i32, i32)>) -> Result<GradedPiece> {
        let p = self.piece(degree, weight)?;
        Ok(match bidegree {
            None => (*p).clone(),
            Some(bd) => p.filtered(|m| self.bidegree(m) == bd),
        })
    }

    pub fn mode_matrix(&self, a: &State, k: i64, src: &GradedPiece) -> Result<(Arc<GradedPiece>, RationalMatrix)> {
        Ok(self.gs.mode_matrix(&self.cache, a, k, src)?)
    }

    pub fn operator_matrix(&self, op: &GradedOperator, src: &GradedPiece) -> Result<(Arc<GradedPiece>, RationalMatrix)> {
        Ok(self.gs.operator_matrix(&self.cache, op, src)?)
    }

    /// The homotopy `F = −Σ_{n>0} β_i(−n)c_i(n−1)`, with the sign chosen so
    /// that `[D(0), F]` has nonnegative eigenvalues on basic pieces.
    pub fn abelian_homotopy_f(&self) -> Result<GradedOperator> {
        if !self.lie.is_abelian() {
            return Err(Error::NonAbelian("the homotopy F"));
        }
        let n = self.dim();
        Ok(GradedOperator::intrinsic("F", (-1, 0, 0), move |gs, s| {
            let mut out = State::zero();
            let top = gs.max_weight(s);
            for i in 0..n {
                for m in 1..=top {
                    let t = gs.apply_mode(n + i, m - 1, s);
                    if !t.is_zero() {
                        out.add_scaled(&gs.apply_mode(2 * n + i, -m, &t), &Q::int(-1));
                    }
                }
            }
            out
        }))
    }

    /// Matrix of `F` on `piece`, into the piece one degree lower.
    pub fn abelian_homotopy_matrix(&self, piece: &GradedPiece) -> Result<(Arc<GradedPiece>, RationalMatrix)> {
        self.operator_matrix(&self.abelian_homotopy_f()?, piece)
    }

    /// Exact OPE identities among the named fields.
    pub fn verify_ope_catalog(&self) -> Report {
        let gs = &self.gs;
        let n = self.dim();
        let mut r = Report::new("weil", &self.lie.name);
        let vac = State::vacuum();
        let killing = self.lie.killing_form();
        let bracket = |a: usize, b: usize| -> Vec<(usize, Q)> {
            (0..n).filter(|&k| !self.lie.c(a, b, k).is_zero()).map(|k| (k, self.lie.c(a, b, k).clone())).collect()
        };
        let lin = |f: &dyn Fn(usize) -> State, v: &[(usize, Q)]| -> State {
            let mut out = State::zero();
            for (k, c) in v {
                out.add_scaled(&f(*k), c);
            }
            out
        };
        let all_pairs = |check: &dyn Fn(usize, usize) -> Result<(), String>| -> Result<String, String> {
            for a in 0..n {
                for b in 0..n {
                    check(a, b).map_err(|e| format!("({}, {}): {e}", self.lie.basis[a], self.lie.basis[b]))?;
                }
            }
            Ok(format!("{} pairs", n * n))
        };

        r.check(
            "form invariance",
            match &self.form {
                None => Ok("no form".into()),
                Some(f) => match f.invariance_violation(&self.lie) {
                    None if f.is_symmetric() => Ok("symmetric and invariant".into()),
                    None => Err("form is not symmetric".into()),
                    Some((i, j, k)) => Err(format!("B([e_{i},e_{j}],e_{k}) + B(e_{j},[e_{i},e_{k}]) != 0")),
                },
            },
        );
        r.check(
            "theta_E current OPE",
            all_pairs(&|a, b| {
                let expect =
                    [(2, vac.scaled(killing.get(a, b))), (1, lin(&|k| self.theta_e(k), &bracket(a, b)))];
                gs.ope_matches(&self.theta_e(a), &self.theta_e(b), &expect)
            }),
        );
        r.check(
            "theta_S current OPE",
            all_pairs(&|a, b| {
                let expect =
                    [(2, vac.scaled(&-killing.get(a, b).clone())), (1, lin(&|k| self.theta_s(k), &bracket(a, b)))];
                gs.ope_matches(&self.theta_s(a), &self.theta_s(b), &expect)
            }),
        );
        r.check(
            "adjoint and coadjoint actions",
            all_pairs(&|a, b| {
                let co = self.coadjoint(a, b);
                let ad = bracket(a, b);
                let (te, ts) = (self.theta_e(a), self.theta_s(a));
                gs.ope_matches(&te, &self.gen(Family::B, b), &[(1, self.gen_combination(Family::B, &ad))])?;
                gs.ope_matches(&te, &self.gen(Family::C, b), &[(1, self.gen_combination(Family::C, &co))])?;
                gs.ope_matches(&ts, &self.gen(Family::Beta, b), &[(1, self.gen_combination(Family::Beta, &ad))])?;
                gs.ope_matches(&ts, &self.gen(Family::Gamma, b), &[(1, self.gen_combination(Family::Gamma, &co))])?;
                gs.ope_matches(&te, &self.gen(Family::Gamma, b), &[])?;
                gs.ope_matches(&ts, &self.gen(Family::C, b), &[])
            }),
        );
        r.check(
            "theta primary",
            (0..n)
                .try_for_each(|a| {
                    gs.primary_matches(&self.omega_e(), &self.theta_e(a), 1)?;
                    gs.primary_matches(&self.omega_s(), &self.theta_s(a), 1)
                })
                .map(|_| format!("{n} basis elements")),
        );
        let dim = Q::int(n as i64);
        r.check(
            "free-field central charges",
            gs.virasoro_matches(&self.omega_e(), &(Q::int(-2) * &dim))
                .map_err(|e| format!("omega_E: {e}"))
                .and_then(|_| gs.virasoro_matches(&self.omega_s(), &(Q::int(2) * &dim)).map_err(|e| format!("omega_S: {e}")))
                .and_then(|_| gs.virasoro_matches(&self.omega_w(), &Q::ZERO).map_err(|e| format!("omega_W: {e}")))
                .map(|_| format!("c = -{0}, {0}, 0", 2 * n)),
        );
        let d = self.d();
        r.check(
            "W relations",
            (0..n)
                .try_for_each(|a| {
                    let tw = self.theta_w(a);
                    for j in 0..n {
                        let co = self.coadjoint(a, j);
                        gs.ope_matches(&tw, &self.gen(Family::C, j), &[(1, self.gen_combination(Family::C, &co))])?;
                        gs.ope_matches(&tw, &self.gen(Family::Gamma, j), &[(1, self.gen_combination(Family::Gamma, &co))])?;
                        let delta = if a == j { vac.clone() } else { State::zero() };
                        gs.ope_matches(&self.gen(Family::B, a), &self.gen(Family::C, j), &[(1, delta)])?;
                        gs.ope_matches(&self.gen(Family::B, a), &self.gen(Family::Gamma, j), &[])?;
                    }
                    // D(0)c^{a′} = −½ :c^{ad*(ξᵢ)a′} c^{ξᵢ′}: + γ^{a′}; D(0)γ^{a′} = :γ^{ad*(ξᵢ)a′} c^{ξᵢ′}:.
                    let mut dc = self.gen(Family::Gamma, a);
                    let mut dg = State::zero();
                    for i in 0..n {
                        let co = self.coadjoint(i, a);
                        let ci = self.gen(Family::C, i);
                        dc.add_scaled(&gs.wick(&self.gen_combination(Family::C, &co), &ci), &Q::new(-1, 2));
                        dg.add_scaled(&gs.wick(&self.gen_combination(Family::Gamma, &co), &ci), &Q::ONE);
                    }
                    let got = gs.field_mode(&d, 0, &self.gen(Family::C, a));
                    if got != dc {
                        return Err(format!("D(0)c[{}] = {}", self.lie.basis[a], gs.show(&got)));
                    }
                    let got = gs.field_mode(&d, 0, &self.gen(Family::Gamma, a));
                    if got != dg {
                        return Err(format!("D(0)gamma[{}] = {}", self.lie.basis[a], gs.show(&got)));
                    }
                    Ok(())
                })
                .map(|_| "all generators".into()),
        );
        r.check(
            "D(0)b = theta_W",
            (0..n)
                .try_for_each(|a| {
                    let got = gs.field_mode(&d, 0, &self.gen(Family::B, a));
                    if got == self.theta_w(a) {
                        Ok(())
                    } else {
                        Err(format!("D(0)b[{}] = {}", self.lie.basis[a], gs.show(&got)))
                    }
                })
                .map(|_| format!("{n} basis elements")),
        );
        r.check("J via theta and c", {
            let mut rhs = State::zero();
            for i in 0..n {
                let t = self.theta_s(i).plus(&self.theta_e(i).scaled(&Q::new(1, 2)));
                rhs.add_scaled(&gs.wick(&t, &self.gen(Family::C, i)), &Q::ONE);
            }
            if rhs == self.j() {
                Ok("J = :(theta_S + theta_E/2) c:".into())
            } else {
                Err(format!("difference {}", gs.show(&rhs.minus(&self.j()))))
            }
        });
        if let (Ok(ls), Ok(bfl)) = (self.sugawara(), self.bfl()) {
            // The Sugawara normalization is tied to the Killing form.
            if self.form_is_killing() {
                r.check(
                    "omega_S with L_S",
                    gs.ope_matches(
                        &self.omega_s(),
                        &ls,
                        &[(4, vac.scaled(&dim)), (2, ls.scaled(&Q::int(2))), (1, gs.derivative(&ls))],
                    )
                    .map(|_| format!("fourth-order pole {n}")),
                );
                r.check(
                    "Sugawara central charge",
                    gs.virasoro_matches(&ls, &(Q::int(2) * &dim)).map(|_| format!("c = {}", 2 * n)),
                );
                r.check(
                    "GKO difference central charge",
                    gs.virasoro_matches(&self.omega_s().minus(&ls), &Q::ZERO).map(|_| "c = 0".into()),
                );
                r.check("bfL Virasoro", gs.virasoro_matches(&bfl, &Q::ZERO).map(|_| "c = 0".into()));
            }
            r.check("bfL properties", self.bfl_properties(&bfl));
        }
        r
    }

    /// `𝐋 = D(0)·primitive`, `C = K(0)(Θ_𝓢 b)`, closedness and basicness of `𝐋`.
    fn bfl_properties(&self, bfl: &State) -> Result<String, String> {
        let gs = &self.gs;
        let d = self.d();
        let err = |e: Error| e.to_string();
        let prim = self.primitive().map_err(err)?;
        if gs.field_mode(&d, 0, &prim) != *bfl {
            return Err("bfL != D(0) primitive".into());
        }
        let c = self.correction().map_err(err)?;
        if gs.field_mode(&self.k(), 0, &self.theta_s_b().map_err(err)?) != c {
            return Err("C != K(0)(theta_S b)".into());
        }
        if !gs.field_mode(&d, 0, bfl).is_zero() {
            return Err("D(0) bfL != 0".into());
        }
        for a in 0..self.dim() {
            if !gs.commute(&self.gen(Family::B, a), bfl) || !gs.commute(&self.theta_w(a), bfl) {
                return Err(format!("bfL not basic at {}", self.lie.basis[a]));
            }
        }
        Ok("D(0)-exact, closed and basic".into())
    }

    /// Matrix identities on every `(degree, weight)` piece in range.
    pub fn verify_pieces(&self, max_weight: u32, degrees: std::ops::RangeInclusive<i32>) -> Report {
        let mut r = Report::new("weil-pieces", &self.lie.name)
            .cutoff("max_weight", max_weight as i64)
            .cutoff("min_degree", *degrees.start() as i64)
            .cutoff("max_degree", *degrees.end() as i64);
        let out = self.piece_checks(max_weight, degrees);
        for (name, res) in out {
            r.check(name, res);
        }
        r
    }

    fn piece_checks(&self, max_weight: u32, degrees: std::ops::RangeInclusive<i32>) -> Vec<(&'static str, Result<String, String>)> {
        let gs = &self.gs;
        let (d, j, k) = (self.d(), self.j(), self.k());
        let (h, w) = (self.h(), self.omega_w());
        let (jbc, jbg) = (self.j_bc(), self.j_betagamma());
        let names = [
            "J(0)^2 = 0",
            "K(0)^2 = 0",
            "D(0)^2 = 0",
            "[J(0), K(0)] = 0",
            "[D(0), h(1)] = omega_W(1)",
            "j_bc(0) is bc-number",
            "j_betagamma(0) is betagamma-number",
            "omega_W(1) is weight",
            "omega_W(0) is the derivative",
        ];
        let mut results: Vec<Result<usize, String>> = vec![Ok(0); names.len()];
        for m in 0..=max_weight {
            for deg in degrees.clone() {
                let piece = match self.piece(deg, m) {
                    Ok(p) => p,
                    Err(e) => {
                        results[0] = Err(e.to_string());
                        continue;
                    }
                };
                let at = format!("(degree {deg}, weight {m})");
                for i in 0..piece.dim() {
                    let s = piece.basis_state(i);
                    let mono = &piece.basis[i];
                    let mode = |a: &State, n: i64, x: &State| gs.field_mode(a, n, x);
                    let checks: [Box<dyn Fn() -> bool>; 9] = [
                        Box::new(|| mode(&j, 0, &mode(&j, 0, &s)).is_zero()),
                        Box::new(|| mode(&k, 0, &mode(&k, 0, &s)).is_zero()),
                        Box::new(|| mode(&d, 0, &mode(&d, 0, &s)).is_zero()),
                        Box::new(|| mode(&j, 0, &mode(&k, 0, &s)).plus(&mode(&k, 0, &mode(&j, 0, &s))).is_zero()),
                        Box::new(|| {
                            mode(&d, 0, &mode(&h, 1, &s)).plus(&mode(&h, 1, &mode(&d, 0, &s))) == mode(&w, 1, &s)
                        }),
                        Box::new(|| mode(&jbc, 0, &s) == s.scaled(&Q::int(self.bidegree(mono).0 as i64))),
                        Box::new(|| mode(&jbg, 0, &s) == s.scaled(&Q::int(self.bidegree(mono).1 as i64))),
                        Box::new(|| mode(&w, 1, &s) == s.scaled(&Q::int(m as i64))),
                        Box::new(|| mode(&w, 0, &s) == gs.derivative(&s)),
                    ];
                    for (t, check) in checks.iter().enumerate() {
                        if let Ok(count) = &mut results[t] {
                            if check() {
                                *count += 1;
                            } else {
                                results[t] = Err(format!("fails on {} at {at}", gs.show(&s)));
                            }
                        }
                    }
                }
            }
        }
        names.into_iter().zip(results).map(|(n, r)| (n, r.map(|c| format!("{c} basis vectors")))).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sl2() -> WeilAlgebra {
        WeilAlgebra::with_default_form(LieAlgebra::sl2())
    }

    #[test]
    fn generator_counts_and_degrees() {
        let t1 = WeilAlgebra::new(LieAlgebra::abelian(1), None);
        assert_eq!(t1.gs.len(), 4);
        let w = sl2();
        assert_eq!(w.gs.len(), 12);
        let g = w.gamma_dgamma().unwrap();
        assert_eq!(w.gs.grade_of(&g), Some(Grade::new(4, 1)));
    }

    #[test]
    fn abelian_thetas_vanish() {
        let w = WeilAlgebra::new(LieAlgebra::abelian(2), None);
        assert!(w.theta_w(0).is_zero());
        assert!(w.j().is_zero());
        assert!(w.sugawara().is_err());
        assert!(w.verify_ope_catalog().passed());
    }

    #[test]
    fn sl2_catalog_passes() {
        let r = sl2().verify_ope_catalog();
        assert!(r.passed(), "{r}");
        assert!(r.find("Sugawara central charge").is_some());
    }

    #[test]
    fn omega_s_sugawara_pole() {
        let w = sl2();
        let ls = w.sugawara().unwrap();
        assert_eq!(w.gs.circle(&w.omega_s(), &ls, 3), State::vacuum().scaled(&Q::int(3)));
        assert_eq!(w.gs.circle(&ls, &ls, 3), State::vacuum().scaled(&Q::int(3)));
    }

    #[test]
    fn small_piece_identities() {
        let r = sl2().verify_pieces(1, -2..=4);
        assert!(r.passed(), "{r}");
    }

    #[test]
    fn bigraded_pieces() {
        let t1 = WeilAlgebra::new(LieAlgebra::abelian(1), None);
        let p = t1.bigraded_basis(2, 0, None).unwrap();
        assert_eq!(p.dim(), 1);
        assert_eq!(t1.gs.show(&p.basis_state(0)), t1.gs.show(&t1.gen(Family::Gamma, 0)));
        let w = sl2();
        let p = w.bigraded_basis(4, 1, None).unwrap();
        let g = w.gamma_dgamma().unwrap();
        assert!(p.coordinates(&g).is_ok());
        let q = w.bigraded_basis(4, 1, Some((0, 2))).unwrap();
        assert!(q.dim() < p.dim() && q.coordinates(&g).is_ok());
    }

    #[test]
    fn homotopy_commutator_counts_b_and_beta() {
        let w = WeilAlgebra::new(LieAlgebra::abelian(1), None);
        let f = w.abelian_homotopy_f().unwrap();
        let d = GradedOperator::mode(w.d(), 0);
        for deg in -3..=4 {
            for m in 0..=2 {
                let p = w.piece(deg, m).unwrap();
                for i in 0..p.dim() {
                    let mono = &p.basis[i];
                    if w.gs.family_count(mono, Family::C, 0) > 0 {
                        continue;
                    }
                    let s = p.basis_state(i);
                    let comm = d.apply(&w.gs, &f.apply(&w.gs, &s)).plus(&f.apply(&w.gs, &d.apply(&w.gs, &s)));
                    let count = w.gs.family_count(mono, Family::B, 0) + w.gs.family_count(mono, Family::Beta, 0);
                    assert_eq!(comm, s.scaled(&Q::int(count as i64)), "{}", w.gs.show(&s));
                }
                if m == 0 {
                    assert!(w.abelian_homotopy_matrix(&p).unwrap().1.is_zero());
                }
            }
        }
        assert!(sl2().abelian_homotopy_f().is_err());
    }
}
