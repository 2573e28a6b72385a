use std::collections::BTreeMap;
use std::fmt;

use smallvec::SmallVec;

use crate::rational::Q;

/// A creation mode `g(m)` with `m = −1 − depth`.
///
/// Ordering is by generator position first and then by depth, i.e. by mode
/// index descending, which is the canonical order inside a monomial.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Mode {
    pub gen: u16,
    pub depth: u16,
}

impl Mode {
    pub fn new(gen: usize, mode_index: i64) -> Self {
        assert!(mode_index <= -1, "creation modes have index ≤ −1");
        Mode { gen: gen as u16, depth: (-mode_index - 1) as u16 }
    }

    pub fn index(&self) -> i64 {
        -1 - self.depth as i64
    }
}

/// A PBW monomial: creation modes in canonical order applied to the vacuum.
#[derive(Clone, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Monomial(pub SmallVec<[Mode; 6]>);

impl Monomial {
    pub fn vacuum() -> Self {
        Monomial(SmallVec::new())
    }

    pub fn modes(&self) -> &[Mode] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// The same modes with generator indices shifted, e.g. when embedding a
    /// factor into a tensor product whose generators come later.
    pub fn shifted(&self, offset: usize) -> Monomial {
        Monomial(self.0.iter().map(|m| Mode { gen: m.gen + offset as u16, depth: m.depth }).collect())
    }
}

/// A finitely supported rational combination of monomials.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct State {
    terms: BTreeMap<Monomial, Q>,
}

impl State {
    pub fn zero() -> Self {
        State::default()
    }

    pub fn vacuum() -> Self {
        State::monomial(Monomial::vacuum(), Q::ONE)
    }

    pub fn monomial(m: Monomial, c: Q) -> Self {
        let mut s = State::zero();
        s.add_term(m, c);
        s
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &Q)> {
        self.terms.iter()
    }

    pub fn coefficient(&self, m: &Monomial) -> Q {
        self.terms.get(m).cloned().unwrap_or(Q::ZERO)
    }

    pub fn add_term(&mut self, m: Monomial, c: Q) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(m) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                *e.get_mut() += c;
                if e.get().is_zero() {
                    e.remove();
                }
            }
        }
    }

    /// `self += s·other`.
    pub fn add_scaled(&mut self, other: &State, s: &Q) {
        if s.is_zero() {
            return;
        }
        for (m, c) in &other.terms {
            self.add_term(m.clone(), c * s);
        }
    }

    pub fn scaled(&self, s: &Q) -> State {
        if s.is_zero() {
            return State::zero();
        }
        State { terms: self.terms.iter().map(|(m, c)| (m.clone(), c * s)).collect() }
    }

    pub fn plus(&self, other: &State) -> State {
        let mut out = self.clone();
        out.add_scaled(other, &Q::ONE);
        out
    }

    pub fn minus(&self, other: &State) -> State {
        let mut out = self.clone();
        out.add_scaled(other, &Q::int(-1));
        out
    }

    pub fn shifted(&self, offset: usize) -> State {
        State { terms: self.terms.iter().map(|(m, c)| (m.shifted(offset), c.clone())).collect() }
    }

    pub fn into_terms(self) -> BTreeMap<Monomial, Q> {
        self.terms
    }

    pub fn from_terms(terms: impl IntoIterator<Item = (Monomial, Q)>) -> State {
        let mut s = State::zero();
        for (m, c) in terms {
            s.add_term(m, c);
        }
        s
    }
}

impl std::ops::Add for State {
    type Output = State;
    fn add(self, rhs: State) -> State {
        self.plus(&rhs)
    }
}

impl std::ops::Sub for State {
    type Output = State;
    fn sub(self, rhs: State) -> State {
        self.minus(&rhs)
    }
}

impl std::ops::Neg for State {
    type Output = State;
    fn neg(self) -> State {
        self.scaled(&Q::int(-1))
    }
}

impl std::ops::Mul<State> for Q {
    type Output = State;
    fn mul(self, rhs: State) -> State {
        rhs.scaled(&self)
    }
}

/// Renders states in PBW notation with the generator labels of an algebra.
pub struct Pbw<'a> {
    pub labels: &'a [String],
    pub state: &'a State,
}

impl fmt::Display for Pbw<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.state.is_zero() {
            return write!(f, "0");
        }
        for (i, (m, c)) in self.state.terms().enumerate() {
            let neg = c.is_negative();
            let mag = c.abs();
            match (i, neg) {
                (0, true) => write!(f, "-")?,
                (0, false) => {}
                (_, true) => write!(f, " - ")?,
                (_, false) => write!(f, " + ")?,
            }
            let word = if m.is_empty() {
                "|0>".to_string()
            } else {
                m.modes().iter().map(|x| format!("{}({})", self.labels[x.gen as usize], x.index())).collect::<Vec<_>>().join(" ")
            };
            if mag.is_one() {
                write!(f, "{word}")?;
            } else {
                write!(f, "{mag} {word}")?;
            }
        }
        Ok(())
    }
}
