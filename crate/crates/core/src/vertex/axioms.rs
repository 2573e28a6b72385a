//! Exact checks of the circle-algebra identities on sample states.

use super::state::State;
use super::GeneratorSet;
use crate::rational::Q;
use crate::report::Report;

/// States to test and the window of circle-product indices.
#[derive(Clone, Debug)]
pub struct AxiomSamples {
    pub states: Vec<State>,
    pub n_min: i64,
    pub n_max: i64,
}

impl AxiomSamples {
    pub fn new(states: Vec<State>) -> Self {
        AxiomSamples { states, n_min: -2, n_max: 2 }
    }
}

fn factorial(k: i64) -> Q {
    Q::factorial(k as u32)
}

impl GeneratorSet {
    fn sign_ab(&self, a: &State, b: &State) -> Q {
        let odd = self.parity_of(a).unwrap_or(false) && self.parity_of(b).unwrap_or(false);
        Q::sign(odd)
    }

    /// `∂^k a`.
    pub fn derivative_n(&self, a: &State, k: usize) -> State {
        (0..k).fold(a.clone(), |acc, _| self.derivative(&acc))
    }

    /// Upper bound on the nonnegative indices `p` with `a∘ₚb ≠ 0`.
    fn pole_bound(&self, a: &State, b: &State) -> i64 {
        self.max_weight(a) + self.max_weight(b)
    }

    /// `:(:ab:)c: − :abc:` minus its expansion; zero when the identity holds.
    pub fn associator_defect(&self, a: &State, b: &State, c: &State) -> State {
        let lhs = self.wick(&self.wick(a, b), c).minus(&self.iterated_wick(&[a.clone(), b.clone(), c.clone()]));
        let s = self.sign_ab(a, b);
        let mut rhs = State::zero();
        for k in 0..=self.pole_bound(a, c).max(self.pole_bound(b, c)) {
            let inv = factorial(k + 1).recip();
            let t1 = self.wick(&self.derivative_n(a, k as usize + 1), &self.circle(b, c, k));
            let t2 = self.wick(&self.derivative_n(b, k as usize + 1), &self.circle(a, c, k));
            rhs.add_scaled(&t1, &inv);
            rhs.add_scaled(&t2, &(&inv * &s));
        }
        lhs.minus(&rhs)
    }

    /// Defect of `a∘ₙ(:bc:) − :(a∘ₙb)c: − ± :b(a∘ₙc): = Σ C(n,k)(a∘_{n−k}b)∘_{k−1}c`.
    pub fn left_derivation_defect(&self, a: &State, b: &State, c: &State, n: i64) -> State {
        let s = self.sign_ab(a, b);
        let mut lhs = self.circle(a, &self.wick(b, c), n);
        lhs = lhs.minus(&self.wick(&self.circle(a, b, n), c));
        lhs.add_scaled(&self.wick(b, &self.circle(a, c, n)), &-s);
        let mut rhs = State::zero();
        for k in 1..=n {
            rhs.add_scaled(&self.circle(&self.circle(a, b, n - k), c, k - 1), &Q::binomial(n, k));
        }
        lhs.minus(&rhs)
    }

    /// Defect of `(:ab:)∘ₙc = Σ (1/k!) :(∂^k a)(b∘_{n+k}c): + ± Σ b∘_{n−k−1}(a∘ₖc)`.
    pub fn right_wick_defect(&self, a: &State, b: &State, c: &State, n: i64) -> State {
        let lhs = self.circle(&self.wick(a, b), c, n);
        let s = self.sign_ab(a, b);
        let mut rhs = State::zero();
        for k in 0..=self.pole_bound(b, c) {
            let t = self.wick(&self.derivative_n(a, k as usize), &self.circle(b, c, n + k));
            rhs.add_scaled(&t, &factorial(k).recip());
        }
        for k in 0..=self.pole_bound(a, c) {
            rhs.add_scaled(&self.circle(b, &self.circle(a, c, k), n - k - 1), &s);
        }
        lhs.minus(&rhs)
    }

    /// Defect of `:ab: − ± :ba: = Σ ((−1)^k/(k+1)!) ∂^{k+1}(a∘ₖb)`.
    pub fn commutator_defect(&self, a: &State, b: &State) -> State {
        let mut lhs = self.wick(a, b);
        lhs.add_scaled(&self.wick(b, a), &-self.sign_ab(a, b));
        let mut rhs = State::zero();
        for k in 0..=self.pole_bound(a, b) {
            let coef = Q::sign(k % 2 == 1) * factorial(k + 1).recip();
            rhs.add_scaled(&self.derivative_n(&self.circle(a, b, k), k as usize + 1), &coef);
        }
        lhs.minus(&rhs)
    }

    /// Defect of `a∘ₙb = ± Σₚ (−1)^{p+1} (b∘ₚa)∘_{n−p−1}1`.
    pub fn skew_defect(&self, a: &State, b: &State, n: i64) -> State {
        let lhs = self.circle(a, b, n);
        let mut rhs = State::zero();
        for p in n..=self.pole_bound(a, b) {
            let t = self.circle(&self.circle(b, a, p), &State::vacuum(), n - p - 1);
            rhs.add_scaled(&t, &(Q::sign(p % 2 == 0) * self.sign_ab(a, b)));
        }
        lhs.minus(&rhs)
    }

    /// Defect of `a∘₀(b∘ₙc) = (a∘₀b)∘ₙc + ± b∘ₙ(a∘₀c)`.
    pub fn derivation_defect(&self, a: &State, b: &State, c: &State, n: i64) -> State {
        let lhs = self.circle(a, &self.circle(b, c, n), 0);
        let mut rhs = self.circle(&self.circle(a, b, 0), c, n);
        rhs.add_scaled(&self.circle(b, &self.circle(a, c, 0), n), &self.sign_ab(a, b));
        lhs.minus(&rhs)
    }

    /// Defect of `[â(m), b̂(k)]s = Σₚ C(m,p)(a∘ₚb)(m+k−p)s`.
    pub fn mode_commutator_defect(&self, a: &State, b: &State, m: i64, k: i64, s: &State) -> State {
        let mut lhs = self.field_mode(a, m, &self.field_mode(b, k, s));
        lhs.add_scaled(&self.field_mode(b, k, &self.field_mode(a, m, s)), &-self.sign_ab(a, b));
        let mut rhs = State::zero();
        for p in 0..=self.pole_bound(a, b) {
            let ab = self.circle(a, b, p);
            rhs.add_scaled(&self.field_mode(&ab, m + k - p, s), &Q::binomial(m, p));
        }
        lhs.minus(&rhs)
    }

    /// Defect of the Borcherds identity
    /// `Σⱼ C(m,j)(a∘_{n+j}b)∘_{m+k−j}c
    ///   = Σⱼ (−1)ʲ C(n,j)(a∘_{m+n−j}(b∘_{k+j}c) − (−1)ⁿ ± b∘_{n+k−j}(a∘_{m+j}c))`.
    pub fn borcherds_defect(&self, a: &State, b: &State, c: &State, m: i64, n: i64, k: i64) -> State {
        let s = self.sign_ab(a, b);
        let mut lhs = State::zero();
        for j in 0..=(self.pole_bound(a, b) - n).max(0) {
            let t = self.circle(&self.circle(a, b, n + j), c, m + k - j);
            lhs.add_scaled(&t, &Q::binomial(m, j));
        }
        let mut rhs = State::zero();
        let jb = (self.pole_bound(b, c) - k).max(self.pole_bound(a, c) - m).max(0);
        for j in 0..=jb {
            let cj = Q::sign(j % 2 == 1) * Q::binomial(n, j);
            if cj.is_zero() {
                continue;
            }
            rhs.add_scaled(&self.circle(a, &self.circle(b, c, k + j), m + n - j), &cj);
            let t = self.circle(b, &self.circle(a, c, m + j), n + k - j);
            rhs.add_scaled(&t, &(-(cj * Q::sign(n.rem_euclid(2) == 1) * &s)));
        }
        lhs.minus(&rhs)
    }

    /// Whether `a∘ₙb` sits in the grade predicted by the factors.
    fn grading_ok(&self, a: &State, b: &State, n: i64) -> Result<(), String> {
        let r = self.circle(a, b, n);
        if r.is_zero() {
            return Ok(());
        }
        let (ga, gb) = match (self.grade_of(a), self.grade_of(b)) {
            (Some(x), Some(y)) => (x, y),
            _ => return Ok(()),
        };
        let gr = self.grade_of(&r).ok_or("product is not homogeneous")?;
        let w = ga.weight as i64 + gb.weight as i64 - n - 1;
        if gr.weight as i64 != w {
            return Err(format!("weight {} expected {w}", gr.weight));
        }
        if gr.degree != ga.degree + gb.degree || gr.charge != ga.charge + gb.charge {
            return Err(format!("degree {} expected {}", gr.degree, ga.degree + gb.degree));
        }
        Ok(())
    }
}

/// Runs every identity on all pairs and triples of sample states.
pub fn axiom_suite(gs: &GeneratorSet, samples: &AxiomSamples, algebra: &str) -> Report {
    let mut report = Report::new("axioms", algebra).cutoff("n_min", samples.n_min).cutoff("n_max", samples.n_max);
    let st = &samples.states;
    let idx = |i: usize, j: usize, k: usize| format!("({i}, {j}, {k})");
    let mut first_fail: std::collections::BTreeMap<&str, String> = Default::default();
    let mut note = |name: &'static str, witness: String, defect: Result<(), String>| {
        if let Err(d) = defect {
            first_fail.entry(name).or_insert(format!("witness {witness}: {d}"));
        }
    };
    let z = |s: State| if s.is_zero() { Ok(()) } else { Err(format!("defect {}", gs.show(&s))) };
    let ns = samples.n_min..=samples.n_max;
    let nonneg = 0.max(samples.n_min)..=samples.n_max.max(0);
    for (i, a) in st.iter().enumerate() {
        for (j, b) in st.iter().enumerate() {
            note("wick commutator", idx(i, j, 0), z(gs.commutator_defect(a, b)));
            for n in ns.clone() {
                note("skew symmetry", format!("({i}, {j}) n={n}"), z(gs.skew_defect(a, b, n)));
                note("weight and degree additivity", format!("({i}, {j}) n={n}"), gs.grading_ok(a, b, n));
            }
            for (k, c) in st.iter().enumerate() {
                note("wick associator", idx(i, j, k), z(gs.associator_defect(a, b, c)));
                for n in nonneg.clone() {
                    let w = format!("{} n={n}", idx(i, j, k));
                    note("left derivation", w.clone(), z(gs.left_derivation_defect(a, b, c, n)));
                    note("right wick product", w.clone(), z(gs.right_wick_defect(a, b, c, n)));
                }
                for n in ns.clone() {
                    let w = format!("{} n={n}", idx(i, j, k));
                    note("zero-mode derivation", w, z(gs.derivation_defect(a, b, c, n)));
                }
                for m in 0..=1 {
                    for kk in -2..=0 {
                        let w = format!("{} m={m} k={kk}", idx(i, j, k));
                        note("mode commutator", w, z(gs.mode_commutator_defect(a, b, m, kk, c)));
                    }
                }
                for (m, n, kk) in [(0, 0, -1), (1, -1, 0), (-1, 1, -2), (0, -2, 1)] {
                    let w = format!("{} m={m} n={n} k={kk}", idx(i, j, k));
                    note("borcherds", w, z(gs.borcherds_defect(a, b, c, m, n, kk)));
                }
            }
        }
    }
    for name in [
        "wick associator",
        "left derivation",
        "right wick product",
        "wick commutator",
        "skew symmetry",
        "zero-mode derivation",
        "weight and degree additivity",
        "mode commutator",
        "borcherds",
    ] {
        match first_fail.get(name) {
            None => report.record(name, true, format!("{} samples", st.len())),
            Some(d) => report.record(name, false, d.clone()),
        }
    }
    report
}

#[cfg(test)]
mod tests {
    use super::super::testing::weil_c;
    use super::*;

    #[test]
    fn generators_pass() {
        let gs = weil_c();
        let samples = AxiomSamples::new((0..4).map(|g| gs.gen_state(g)).collect());
        let r = axiom_suite(&gs, &samples, "W(C)");
        assert!(r.passed(), "{r}");
    }

    #[test]
    fn composite_states_pass() {
        let gs = weil_c();
        let samples = AxiomSamples {
            states: vec![
                gs.create(&[(0, -1), (1, -1)]),
                gs.create(&[(2, -1), (3, -1)]).plus(&gs.create(&[(3, -2)])),
                gs.create(&[(1, -1), (3, -1)]),
            ],
            n_min: -1,
            n_max: 1,
        };
        let r = axiom_suite(&gs, &samples, "W(C)");
        assert!(r.passed(), "{r}");
    }
}

#[cfg(test)]
mod fault_injection {
    use super::super::testing::weil_c;
    use super::*;

    #[test]
    fn corrupted_table_is_caught() {
        let gens = weil_c().generators().to_vec();
        // b·c and c·b contract with inconsistent signs.
        let bad = GeneratorSet::new_unchecked(
            gens,
            &[(0, 1, Q::ONE), (1, 0, Q::int(-1)), (2, 3, Q::ONE), (3, 2, Q::int(-1))],
        )
        .unwrap();
        let samples = AxiomSamples::new((0..4).map(|g| bad.gen_state(g)).chain([bad.create(&[(0, -1), (1, -1)])]).collect());
        let r = axiom_suite(&bad, &samples, "corrupted");
        for f in r.failures() {
            eprintln!("{}: {}", f.name, f.detail);
        }
        assert_eq!(r.find("zero-mode derivation").unwrap().status, crate::report::Status::Fail);
    }
}
