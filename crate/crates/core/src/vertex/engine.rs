use std::collections::BTreeMap;

use smallvec::SmallVec;

use super::state::{Mode, Monomial, State};
use super::GeneratorSet;
use crate::rational::Q;

/// Pole order `p + 1 ↦ a∘_p b`, nonzero entries only.
pub type OpeMap = BTreeMap<u32, State>;

fn parity_sign(odd: bool) -> Q {
    Q::sign(odd)
}

impl GeneratorSet {
    /// Action of the single mode `g(m)`.
    pub fn apply_mode(&self, g: usize, m: i64, s: &State) -> State {
        let mut out = State::zero();
        for (mono, c) in s.terms() {
            self.apply_mode_mono(g, m, mono, c, &mut out);
        }
        out
    }

    fn apply_mode_mono(&self, g: usize, m: i64, mono: &Monomial, coef: &Q, out: &mut State) {
        let odd = self.is_odd(g);
        if m <= -1 {
            let mode = Mode::new(g, m);
            let modes = mono.modes();
            let pos = modes.partition_point(|x| *x <= mode);
            if odd && pos > 0 && modes[pos - 1] == mode {
                return;
            }
            let passed = if odd { modes[..pos].iter().filter(|x| self.is_odd(x.gen as usize)).count() } else { 0 };
            let mut v: SmallVec<[Mode; 6]> = SmallVec::with_capacity(modes.len() + 1);
            v.extend_from_slice(&modes[..pos]);
            v.push(mode);
            v.extend_from_slice(&modes[pos..]);
            out.add_term(Monomial(v), parity_sign(passed % 2 == 1) * coef);
            return;
        }
        let mut passed_odd = 0usize;
        for (i, x) in mono.modes().iter().enumerate() {
            if x.depth as i64 == m {
                let p = self.partners(g).iter().find(|(b, _)| *b == x.gen).map(|(_, p)| p);
                if let Some(p) = p {
                    let mut v = mono.0.clone();
                    v.remove(i);
                    let sign = parity_sign(odd && passed_odd % 2 == 1);
                    out.add_term(Monomial(v), sign * p * coef);
                }
            }
            if self.is_odd(x.gen as usize) {
                passed_odd += 1;
            }
        }
    }

    /// `â(n)s` by the composite-mode recursion: the leading mode
    /// `g(−j−1)` of each monomial of `a` is the field `∂^j g / j!` and the
    /// monomial is its Wick product with the remaining modes.
    pub fn field_mode(&self, a: &State, n: i64, s: &State) -> State {
        let mut out = State::zero();
        for (mono, c) in a.terms() {
            let r = self.mono_field_mode(mono.modes(), n, s);
            out.add_scaled(&r, c);
        }
        out
    }

    fn mono_field_mode(&self, a: &[Mode], n: i64, s: &State) -> State {
        if s.is_zero() {
            return State::zero();
        }
        let Some((lead, rest)) = a.split_first() else {
            return if n == -1 { s.clone() } else { State::zero() };
        };
        let g = lead.gen as usize;
        let j = lead.depth as i64;
        let sj = parity_sign(j % 2 == 1);
        // X(k) = (−1)^j C(k, j) g(k − j) for X = ∂^j g / j!.
        if rest.is_empty() {
            let c = &sj * Q::binomial(n, j);
            if c.is_zero() {
                return State::zero();
            }
            return self.apply_mode(g, n - j, s).scaled(&c);
        }
        let w_s = self.max_weight(s);
        let w_rest: i64 = rest.iter().map(|x| self.generator(x.gen as usize).weight as i64 + x.depth as i64).sum();
        let rest_odd = rest.iter().filter(|x| self.is_odd(x.gen as usize)).count() % 2 == 1;
        let swap = parity_sign(self.is_odd(g) && rest_odd);
        let mut out = State::zero();
        // Σ_{k ≤ −1} X(k) Y(n−1−k) s; Y(p)s vanishes once p ≥ w_rest + w_s.
        for k in (n - w_rest - w_s)..=-1 {
            let t = self.mono_field_mode(rest, n - 1 - k, s);
            if t.is_zero() {
                continue;
            }
            let c = &sj * Q::binomial(k, j);
            out.add_scaled(&self.apply_mode(g, k - j, &t), &c);
        }
        // (±) Σ_{k ≥ 0} Y(n−1−k) X(k) s; X(k) = 0 for 0 ≤ k < j.
        let wg = self.generator(g).weight as i64;
        for k in j..=(j + wg + w_s - 1) {
            let c = &sj * Q::binomial(k, j);
            let t = self.apply_mode(g, k - j, s);
            if t.is_zero() {
                continue;
            }
            let r = self.mono_field_mode(rest, n - 1 - k, &t);
            out.add_scaled(&r, &(c * &swap));
        }
        out
    }

    pub fn circle(&self, a: &State, b: &State, n: i64) -> State {
        self.field_mode(a, n, b)
    }

    pub fn wick(&self, a: &State, b: &State) -> State {
        self.circle(a, b, -1)
    }

    /// Right-nested Wick product `:a₁:a₂⋯a_k::`; the empty product is 1.
    pub fn iterated_wick(&self, list: &[State]) -> State {
        match list.split_last() {
            None => State::vacuum(),
            Some((last, init)) => init.iter().rev().fold(last.clone(), |acc, a| self.wick(a, &acc)),
        }
    }

    /// `∂a`, via the translation derivation `g(m) ↦ −m·g(m−1)` on modes.
    pub fn derivative(&self, a: &State) -> State {
        let mut out = State::zero();
        for (mono, c) in a.terms() {
            for (i, x) in mono.modes().iter().enumerate() {
                let g = x.gen as usize;
                // Pull mode i to the front, shift it, and put it back.
                let before_odd = mono.modes()[..i].iter().filter(|y| self.is_odd(y.gen as usize)).count();
                let sign = parity_sign(self.is_odd(g) && before_odd % 2 == 1);
                let mut v = mono.0.clone();
                v.remove(i);
                let rest = State::monomial(Monomial(v), sign * c * Q::int(x.depth as i64 + 1));
                let shifted = self.apply_mode(g, x.index() - 1, &rest);
                out.add_scaled(&shifted, &Q::ONE);
            }
        }
        out
    }

    /// All nonzero `a∘_p b`, keyed by pole order `p + 1`.
    pub fn ope(&self, a: &State, b: &State) -> OpeMap {
        let bound = self.max_weight(a) + self.max_weight(b);
        let mut out = OpeMap::new();
        for p in 0..=bound {
            let r = self.circle(a, b, p);
            if !r.is_zero() {
                out.insert(p as u32 + 1, r);
            }
        }
        out
    }

    /// Whether `a∘_n b = 0` for every `n ≥ 0`.
    pub fn commute(&self, a: &State, b: &State) -> bool {
        self.ope(a, b).is_empty()
    }

    /// Compares the full pole map of `a(z)b(w)` with `expected`; the error
    /// names the highest discrepant pole.
    pub fn ope_matches(&self, a: &State, b: &State, expected: &[(u32, State)]) -> Result<(), String> {
        let got = self.ope(a, b);
        let mut want = OpeMap::new();
        for (p, s) in expected {
            want.entry(*p).or_insert_with(State::zero).add_scaled(s, &Q::ONE);
        }
        want.retain(|_, s| !s.is_zero());
        let poles: std::collections::BTreeSet<u32> = got.keys().chain(want.keys()).copied().collect();
        for p in poles.into_iter().rev() {
            let g = got.get(&p).cloned().unwrap_or_else(State::zero);
            let w = want.get(&p).cloned().unwrap_or_else(State::zero);
            if g != w {
                return Err(format!("pole {p}: got {}, expected {}", self.show(&g), self.show(&w)));
            }
        }
        Ok(())
    }

    /// Checks the Virasoro OPE `L(z)L(w) ∼ c/2 (z−w)⁻⁴ + 2L (z−w)⁻² + ∂L (z−w)⁻¹`.
    pub fn virasoro_matches(&self, l: &State, central_charge: &Q) -> Result<(), String> {
        let half_c = central_charge / &Q::int(2);
        self.ope_matches(
            l,
            l,
            &[(4, State::vacuum().scaled(&half_c)), (2, l.scaled(&Q::int(2))), (1, self.derivative(l))],
        )
    }

    /// Checks that `a` is primary of conformal weight `h` for the Virasoro element `l`.
    pub fn primary_matches(&self, l: &State, a: &State, h: i64) -> Result<(), String> {
        self.ope_matches(l, a, &[(2, a.scaled(&Q::int(h))), (1, self.derivative(a))])
    }
}

#[cfg(test)]
mod tests {
    use super::super::testing::weil_c;
    use super::*;
    use crate::rational::q;

    const B: usize = 0;
    const C: usize = 1;
    const BETA: usize = 2;
    const GAMMA: usize = 3;

    #[test]
    fn annihilation_and_pairing() {
        let gs = weil_c();
        let c = gs.gen_state(C);
        assert_eq!(gs.apply_mode(B, 0, &c), State::vacuum());
        assert!(gs.apply_mode(B, 0, &State::vacuum()).is_zero());
        assert!(gs.apply_mode(B, -1, &gs.gen_state(B)).is_zero());
        let gamma = gs.gen_state(GAMMA);
        assert_eq!(gs.apply_mode(BETA, 0, &gamma), State::vacuum());
        assert_eq!(gs.apply_mode(GAMMA, 0, &gs.gen_state(BETA)), -State::vacuum());
    }

    #[test]
    fn odd_reordering_sign() {
        let gs = weil_c();
        // c(−1) b(−1)|0⟩ = −b(−1) c(−1)|0⟩.
        let cb = gs.create(&[(C, -1), (B, -1)]);
        let bc = gs.create(&[(B, -1), (C, -1)]);
        assert_eq!(cb, -bc);
    }

    #[test]
    fn creation_map_and_vacuum() {
        let gs = weil_c();
        let a = gs.create(&[(B, -1), (GAMMA, -2), (C, -1)]);
        assert_eq!(gs.field_mode(&a, -1, &State::vacuum()), a);
        for n in -3..4 {
            let expect = if n == -1 { a.clone() } else { State::zero() };
            assert_eq!(gs.circle(&State::vacuum(), &a, n), expect);
        }
        assert!(gs.derivative(&State::vacuum()).is_zero());
    }

    #[test]
    fn generator_field_is_its_modes() {
        let gs = weil_c();
        let s = gs.create(&[(C, -1), (BETA, -1), (GAMMA, -2)]);
        for g in 0..4 {
            for m in -2..3 {
                assert_eq!(gs.field_mode(&gs.gen_state(g), m, &s), gs.apply_mode(g, m, &s));
            }
        }
    }

    #[test]
    fn bc_current_zero_mode_kills_vacuum() {
        let gs = weil_c();
        let bc = gs.create(&[(B, -1), (C, -1)]);
        assert!(gs.field_mode(&bc, 0, &State::vacuum()).is_zero());
    }

    #[test]
    fn derivatives() {
        let gs = weil_c();
        let gamma = gs.gen_state(GAMMA);
        assert_eq!(gs.derivative(&gamma), gs.create(&[(GAMMA, -2)]));
        let c = gs.gen_state(C);
        let ddc = gs.derivative(&gs.derivative(&c));
        assert_eq!(ddc, gs.create(&[(C, -3)]).scaled(&Q::int(2)));
        let a = gs.create(&[(B, -1), (C, -2), (GAMMA, -1), (GAMMA, -1)]);
        assert_eq!(gs.derivative(&a), gs.circle(&a, &State::vacuum(), -2));
    }

    #[test]
    fn generator_opes() {
        let gs = weil_c();
        let b = gs.gen_state(B);
        let c = gs.gen_state(C);
        assert_eq!(gs.circle(&b, &c, 0), State::vacuum());
        assert!(gs.ope(&gs.gen_state(GAMMA), &gs.gen_state(GAMMA)).is_empty());
        assert!(gs.commute(&gs.gen_state(GAMMA), &gs.gen_state(GAMMA)));
        assert!(!gs.commute(&b, &c));
        assert!(gs.ope(&b, &State::vacuum()).is_empty());
    }

    #[test]
    fn free_field_virasoro() {
        let gs = weil_c();
        // ω = −:b∂c: + :β∂γ: has central charge 0; each half has ∓2.
        let we = gs.create(&[(B, -1), (C, -2)]).scaled(&Q::int(-1));
        let ws = gs.create(&[(BETA, -1), (GAMMA, -2)]);
        assert_eq!(gs.circle(&we, &we, 3), State::vacuum().scaled(&Q::int(-1)));
        assert_eq!(gs.circle(&ws, &ws, 3), State::vacuum());
        let w = we.plus(&ws);
        assert!(gs.circle(&w, &w, 3).is_zero());
        assert!(gs.circle(&w, &w, 2).is_zero());
        assert_eq!(gs.circle(&w, &w, 1), w.scaled(&Q::int(2)));
        assert_eq!(gs.circle(&w, &w, 0), gs.derivative(&w));
        // Weight operator: ω(1) scales by weight.
        let s = gs.create(&[(B, -2), (GAMMA, -1), (C, -1)]);
        assert_eq!(gs.field_mode(&w, 1, &s), s.scaled(&Q::int(2)));
        assert_eq!(q(1, 2) * State::vacuum(), State::vacuum().scaled(&q(1, 2)));
    }
}
