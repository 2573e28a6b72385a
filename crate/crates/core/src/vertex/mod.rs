//! Free-field vertex algebras: bc and βγ generators, PBW states, and exact
//! circle products.
//!
//! A state doubles as a field through the creation map, so every operation
//! takes and returns [`State`]s. The only contractions between generators
//! are first-order poles with scalar residue, realized as
//! `[g(m), g'(k)]_± = pairing · δ_{m+k,−1}`.

mod axioms;
mod engine;
mod operator;
mod piece;
mod state;

use std::collections::HashMap;

pub use axioms::{axiom_suite, AxiomSamples};
pub use engine::OpeMap;
pub use operator::GradedOperator;
pub use piece::{Grade, GradedPiece, PieceCache};
pub use state::{Mode, Monomial, Pbw, State};

use crate::rational::Q;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum VertexError {
    #[error("unknown generator {0:?}")]
    UnknownGenerator(String),
    #[error("invalid contraction table: {0}")]
    Contraction(String),
    #[error("invalid generator: {0}")]
    Generator(String),
    #[error("piece {0:?} is infinite-dimensional: a weight-0 even mode carries no degree or charge")]
    InfinitePiece(Grade),
    #[error("grading inconsistency: {0}")]
    Grading(String),
    #[error("operator is not nilpotent on piece {0:?}")]
    NotNilpotent(Grade),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Parity {
    Even,
    Odd,
}

impl Parity {
    pub fn is_odd(self) -> bool {
        self == Parity::Odd
    }
}

/// Which free-field family a generator belongs to; used for the auxiliary
/// gradings (bc-number, βγ-number, ...) and for picking out subalgebras.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Family {
    B,
    C,
    Beta,
    Gamma,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Generator {
    pub label: String,
    pub parity: Parity,
    /// Conformal weight, 0 or 1.
    pub weight: u32,
    pub degree: i32,
    /// Extra conserved grading used to keep pieces finite (polynomial degree
    /// in the linear model); zero for the Weil generators.
    pub charge: i32,
    pub family: Family,
    /// 0 for generators of the Weil algebra, 1 for a coefficient algebra.
    pub factor: u8,
    /// Basis index within the family.
    pub slot: usize,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GeneratorSet {
    gens: Vec<Generator>,
    /// `partners[g]` lists `(g', pairing(g, g'))`.
    partners: Vec<Vec<(u16, Q)>>,
    labels: Vec<String>,
}

impl GeneratorSet {
    /// Builds and validates an alphabet. `contractions` must list every
    /// ordered pair with nonzero pairing.
    pub fn new(gens: Vec<Generator>, contractions: &[(usize, usize, Q)]) -> Result<Self, VertexError> {
        let gs = Self::new_unchecked(gens, contractions)?;
        gs.validate()?;
        Ok(gs)
    }

    /// Builds an alphabet without the parity and symmetry checks; only for
    /// fault-injection tests.
    pub fn new_unchecked(gens: Vec<Generator>, contractions: &[(usize, usize, Q)]) -> Result<Self, VertexError> {
        let n = gens.len();
        if n > u16::MAX as usize {
            return Err(VertexError::Generator("too many generators".into()));
        }
        let mut seen = std::collections::HashSet::new();
        for g in &gens {
            if g.weight > 1 {
                return Err(VertexError::Generator(format!("{} has weight {} > 1", g.label, g.weight)));
            }
            if !seen.insert(g.label.clone()) {
                return Err(VertexError::Generator(format!("duplicate label {}", g.label)));
            }
        }
        let mut partners = vec![Vec::new(); n];
        let mut table: HashMap<(usize, usize), Q> = HashMap::new();
        for (a, b, p) in contractions {
            if *a >= n || *b >= n {
                return Err(VertexError::Contraction(format!("index ({a}, {b}) out of range")));
            }
            if p.is_zero() {
                continue;
            }
            if table.insert((*a, *b), p.clone()).is_some() {
                return Err(VertexError::Contraction(format!("pair ({a}, {b}) listed twice")));
            }
            partners[*a].push((*b as u16, p.clone()));
        }
        let labels = gens.iter().map(|g| g.label.clone()).collect();
        Ok(GeneratorSet { gens, partners, labels })
    }

    fn validate(&self) -> Result<(), VertexError> {
        for (a, list) in self.partners.iter().enumerate() {
            for (b, p) in list {
                let (ga, gb) = (&self.gens[a], &self.gens[*b as usize]);
                if ga.parity != gb.parity {
                    return Err(VertexError::Contraction(format!("{} and {} have different parity", ga.label, gb.label)));
                }
                if ga.weight + gb.weight != 1 {
                    return Err(VertexError::Contraction(format!(
                        "{} and {} cannot pair at a first-order pole (weights {} and {})",
                        ga.label, gb.label, ga.weight, gb.weight
                    )));
                }
                let back = self.pairing(*b as usize, a);
                let expected = if ga.parity.is_odd() { p.clone() } else { -p.clone() };
                if back != expected {
                    return Err(VertexError::Contraction(format!(
                        "pairing of {} with {} is not {}symmetric",
                        ga.label,
                        gb.label,
                        if ga.parity.is_odd() { "" } else { "anti" }
                    )));
                }
            }
        }
        Ok(())
    }

    /// The empty alphabet: the one-dimensional algebra ℂ.
    pub fn empty() -> Self {
        GeneratorSet { gens: Vec::new(), partners: Vec::new(), labels: Vec::new() }
    }

    /// Disjoint union; generators of `other` come after those of `self` and
    /// their indices shift by `self.len()`.
    pub fn concat(&self, other: &GeneratorSet) -> Result<Self, VertexError> {
        let off = self.len();
        let mut gens = self.gens.clone();
        gens.extend(other.gens.iter().cloned());
        let mut contractions = Vec::new();
        for (a, list) in self.partners.iter().enumerate() {
            contractions.extend(list.iter().map(|(b, p)| (a, *b as usize, p.clone())));
        }
        for (a, list) in other.partners.iter().enumerate() {
            contractions.extend(list.iter().map(|(b, p)| (a + off, *b as usize + off, p.clone())));
        }
        GeneratorSet::new(gens, &contractions)
    }

    pub fn len(&self) -> usize {
        self.gens.len()
    }

    pub fn is_empty(&self) -> bool {
        self.gens.is_empty()
    }

    pub fn generators(&self) -> &[Generator] {
        &self.gens
    }

    pub fn generator(&self, g: usize) -> &Generator {
        &self.gens[g]
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn index_of(&self, label: &str) -> Result<usize, VertexError> {
        self.labels.iter().position(|l| l == label).ok_or_else(|| VertexError::UnknownGenerator(label.into()))
    }

    /// Index of the generator of a family with the given slot and factor.
    pub fn find(&self, family: Family, slot: usize, factor: u8) -> Option<usize> {
        self.gens.iter().position(|g| g.family == family && g.slot == slot && g.factor == factor)
    }

    pub fn pairing(&self, a: usize, b: usize) -> Q {
        self.partners[a].iter().find(|(x, _)| *x as usize == b).map(|(_, p)| p.clone()).unwrap_or(Q::ZERO)
    }

    pub(crate) fn partners(&self, a: usize) -> &[(u16, Q)] {
        &self.partners[a]
    }

    pub fn is_odd(&self, g: usize) -> bool {
        self.gens[g].parity.is_odd()
    }

    pub fn mono_weight(&self, m: &Monomial) -> i64 {
        m.modes().iter().map(|x| self.gens[x.gen as usize].weight as i64 + x.depth as i64).sum()
    }

    pub fn mono_degree(&self, m: &Monomial) -> i32 {
        m.modes().iter().map(|x| self.gens[x.gen as usize].degree).sum()
    }

    pub fn mono_charge(&self, m: &Monomial) -> i32 {
        m.modes().iter().map(|x| self.gens[x.gen as usize].charge).sum()
    }

    pub fn mono_odd(&self, m: &Monomial) -> bool {
        m.modes().iter().filter(|x| self.is_odd(x.gen as usize)).count() % 2 == 1
    }

    /// Count of modes of a family in a factor.
    pub fn family_count(&self, m: &Monomial, family: Family, factor: u8) -> i32 {
        m.modes().iter().filter(|x| {
            let g = &self.gens[x.gen as usize];
            g.family == family && g.factor == factor
        })
        .count() as i32
    }

    /// Degree contributed by generators of one factor.
    pub fn factor_degree(&self, m: &Monomial, factor: u8) -> i32 {
        m.modes().iter().map(|x| &self.gens[x.gen as usize]).filter(|g| g.factor == factor).map(|g| g.degree).sum()
    }

    /// `(degree, weight, charge)` when every term agrees, `None` otherwise
    /// (the zero state has no grade).
    pub fn grade_of(&self, s: &State) -> Option<Grade> {
        let mut it = s.terms().map(|(m, _)| Grade {
            degree: self.mono_degree(m),
            weight: self.mono_weight(m) as u32,
            charge: self.mono_charge(m),
        });
        let first = it.next()?;
        it.all(|g| g == first).then_some(first)
    }

    pub fn max_weight(&self, s: &State) -> i64 {
        s.terms().map(|(m, _)| self.mono_weight(m)).max().unwrap_or(0)
    }

    /// Parity of a homogeneous state; `None` for mixed or zero states.
    pub fn parity_of(&self, s: &State) -> Option<bool> {
        let mut it = s.terms().map(|(m, _)| self.mono_odd(m));
        let first = it.next()?;
        it.all(|p| p == first).then_some(first)
    }

    pub fn pbw<'a>(&'a self, s: &'a State) -> Pbw<'a> {
        Pbw { labels: &self.labels, state: s }
    }

    pub fn show(&self, s: &State) -> String {
        self.pbw(s).to_string()
    }

    /// The state `g₁(m₁)⋯g_r(m_r)|0⟩` for creation modes given left to right.
    pub fn create(&self, modes: &[(usize, i64)]) -> State {
        let mut s = State::vacuum();
        for &(g, m) in modes.iter().rev() {
            assert!(m <= -1, "create takes creation modes only");
            s = self.apply_mode(g, m, &s);
        }
        s
    }

    /// A generator `g` as the state `g(−1)|0⟩`.
    pub fn gen_state(&self, g: usize) -> State {
        self.create(&[(g, -1)])
    }
}

#[cfg(test)]
pub(crate) mod testing {
    use super::*;

    pub fn gen(label: &str, parity: Parity, weight: u32, degree: i32, family: Family, slot: usize) -> Generator {
        Generator { label: label.into(), parity, weight, degree, charge: 0, family, factor: 0, slot }
    }

    /// 𝒲(ℂ): b, c, β, γ with the standard pairings.
    pub fn weil_c() -> GeneratorSet {
        let gens = vec![
            gen("b", Parity::Odd, 1, -1, Family::B, 0),
            gen("c", Parity::Odd, 0, 1, Family::C, 0),
            gen("beta", Parity::Even, 1, -2, Family::Beta, 0),
            gen("gamma", Parity::Even, 0, 2, Family::Gamma, 0),
        ];
        GeneratorSet::new(
            gens,
            &[(0, 1, Q::ONE), (1, 0, Q::ONE), (2, 3, Q::ONE), (3, 2, Q::int(-1))],
        )
        .unwrap()
    }
}

#[cfg(test)]
mod tests {
    use super::testing::*;
    use super::*;

    #[test]
    fn validation_catches_bad_tables() {
        let gens = weil_c().generators().to_vec();
        // Even pair listed symmetrically instead of antisymmetrically.
        let bad = GeneratorSet::new(gens.clone(), &[(2, 3, Q::ONE), (3, 2, Q::ONE)]);
        assert!(matches!(bad, Err(VertexError::Contraction(_))));
        // Odd with even.
        let bad = GeneratorSet::new(gens.clone(), &[(0, 3, Q::ONE), (3, 0, Q::ONE)]);
        assert!(matches!(bad, Err(VertexError::Contraction(_))));
        // Missing reverse pair.
        let bad = GeneratorSet::new(gens, &[(0, 1, Q::ONE)]);
        assert!(matches!(bad, Err(VertexError::Contraction(_))));
    }

    #[test]
    fn grades_of_monomials() {
        let gs = weil_c();
        let s = gs.create(&[(3, -1), (3, -2)]);
        assert_eq!(gs.grade_of(&s), Some(Grade { degree: 4, weight: 1, charge: 0 }));
        assert_eq!(gs.grade_of(&State::vacuum()), Some(Grade { degree: 0, weight: 0, charge: 0 }));
        assert_eq!(gs.grade_of(&State::zero()), None);
    }
}
